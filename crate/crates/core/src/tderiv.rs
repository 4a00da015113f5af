//! The free product `A_t = A ∗ k[t]`, t-derivations and double derivations.
//!
//! An element of `A_t` of t-degree `r - 1` is stored as a combination of
//! tensor words `[a_1, …, a_r]` of basis indices, standing for
//! `a_1 t a_2 t … t a_r`. Products merge the touching factors.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::findim::FinDimAlgebra;
use crate::linalg::{LinMap, SVec};
use crate::report::Suite;
use crate::scalar::Q;

pub type TWord = Vec<usize>;
pub type AtElem = BTreeMap<TWord, Q>;

pub fn at_add(out: &mut AtElem, w: TWord, c: Q) {
    if c.is_zero() {
        return;
    }
    match out.entry(w) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub fn at_axpy(out: &mut AtElem, a: &Q, x: &AtElem) {
    for (w, c) in x {
        at_add(out, w.clone(), a * c);
    }
}

/// Product in `A_t`, dropping words with more than `max_len` factors.
pub fn at_mul(alg: &FinDimAlgebra, x: &AtElem, y: &AtElem, max_len: usize) -> AtElem {
    let mut out = AtElem::new();
    for (u, c) in x {
        for (v, d) in y {
            if u.len() + v.len() - 1 > max_len {
                continue;
            }
            let cd = c * d;
            for (k, e) in alg.mul(*u.last().unwrap(), v[0]) {
                let mut w = u[..u.len() - 1].to_vec();
                w.push(*k);
                w.extend_from_slice(&v[1..]);
                at_add(&mut out, w, &cd * e);
            }
        }
    }
    out
}

pub fn at_word(w: &[usize]) -> AtElem {
    let mut e = AtElem::new();
    e.insert(w.to_vec(), Q::from(1));
    e
}

/// The t-derivation of `A_t` extending `f` (which must kill the unit),
/// evaluated on a tensor word.
pub fn extend_t(f: &dyn Fn(usize) -> AtElem, w: &[usize]) -> Result<AtElem> {
    if !f(0).is_empty() {
        return Err(Error::input("f(1) must vanish"));
    }
    let mut out = AtElem::new();
    for k in 0..w.len() {
        for (v, c) in f(w[k]) {
            let mut word = w[..k].to_vec();
            word.extend_from_slice(&v);
            word.extend_from_slice(&w[k + 1..]);
            at_add(&mut out, word, c);
        }
    }
    Ok(out)
}

/// Graded version: `f` has degree `f_deg` and passing `f` across a factor
/// `u` costs `(-1)^{f_deg·|u|}`.
pub fn extend_t_graded(f: &dyn Fn(usize) -> AtElem, f_deg: usize, deg: &dyn Fn(usize) -> usize, w: &[usize]) -> Result<AtElem> {
    if !f(0).is_empty() {
        return Err(Error::input("f(1) must vanish"));
    }
    let mut out = AtElem::new();
    let mut passed = 0;
    for k in 0..w.len() {
        let sign = crate::scalar::parity(f_deg * passed);
        for (v, c) in f(w[k]) {
            let mut word = w[..k].to_vec();
            word.extend_from_slice(&v);
            word.extend_from_slice(&w[k + 1..]);
            at_add(&mut out, word, &sign * &c);
        }
        passed += deg(w[k]);
    }
    Ok(out)
}

/// Linear extension of `extend_t` to combinations of words.
pub fn extend_t_elem(f: &dyn Fn(usize) -> AtElem, x: &AtElem) -> Result<AtElem> {
    let mut out = AtElem::new();
    for (w, c) in x {
        at_axpy(&mut out, c, &extend_t(f, w)?);
    }
    Ok(out)
}

pub fn fmt_at(alg: &FinDimAlgebra, x: &AtElem) -> String {
    if x.is_empty() {
        return "0".into();
    }
    x.iter()
        .map(|(w, c)| {
            let body = w.iter().map(|i| alg.labels[*i].clone()).collect::<Vec<_>>().join(" t ");
            format!("{}*({body})", crate::scalar::fmt_q(c))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Element of `A ⊗ A`.
pub type Tensor2 = BTreeMap<(usize, usize), Q>;

/// A linear map `A → A ⊗ A` given on the basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleDerivation {
    pub values: Vec<Vec<(usize, usize, Q)>>,
}

impl DoubleDerivation {
    pub fn from_tensors(values: Vec<Tensor2>) -> Self {
        Self { values: values.into_iter().map(|t| t.into_iter().map(|((a, b), c)| (a, b, c)).collect()).collect() }
    }

    pub fn zero(alg: &FinDimAlgebra) -> Self {
        Self { values: vec![Vec::new(); alg.dim()] }
    }

    /// `Δ(a) = 1⊗a − a⊗1`
    pub fn delta(alg: &FinDimAlgebra) -> Self {
        let mut values = vec![Vec::new(); alg.dim()];
        for (i, v) in values.iter_mut().enumerate().skip(1) {
            v.push((0, i, Q::from(1)));
            v.push((i, 0, Q::from(-1)));
        }
        Self { values }
    }

    pub fn value(&self, i: usize) -> &[(usize, usize, Q)] {
        &self.values[i]
    }

    /// `Θ(a)` as the element `Θ'(a) t Θ''(a)` of `A_t`.
    pub fn as_at(&self, i: usize) -> AtElem {
        let mut e = AtElem::new();
        for (a, b, c) in &self.values[i] {
            at_add(&mut e, vec![*a, *b], c.clone());
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    pub fn add_scaled(&self, c: &Q, other: &Self) -> Self {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| {
                let mut t = Tensor2::new();
                for (a, b, v) in x {
                    *t.entry((*a, *b)).or_default() += v.clone();
                }
                for (a, b, v) in y {
                    *t.entry((*a, *b)).or_default() += c * v;
                }
                t.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect()
            })
            .collect();
        Self { values }
    }

    /// Extend values given on generator words to all basis words by the
    /// Leibniz rule for the outer bimodule structure.
    pub fn from_generators(alg: &FinDimAlgebra, gen_values: &[Tensor2]) -> Result<Self> {
        let words = alg.words.as_ref().ok_or_else(|| Error::input("algebra has no word basis"))?;
        let gens = alg.gens.as_ref().ok_or_else(|| Error::input("algebra has no generators"))?;
        if gen_values.len() != gens.len() {
            return Err(Error::input(format!("expected {} generator values, got {}", gens.len(), gen_values.len())));
        }
        let mut values = Vec::with_capacity(words.len());
        for w in words {
            let mut t = Tensor2::new();
            for (i, &g) in w.iter().enumerate() {
                let pre = alg.word_index(&w[..i]).ok_or_else(|| Error::input("prefix of a normal word is not normal"))?;
                let suf = alg.word_index(&w[i + 1..]).ok_or_else(|| Error::input("suffix of a normal word is not normal"))?;
                for ((a, b), c) in &gen_values[g] {
                    for (l, x) in alg.mul(pre, *a) {
                        for (r, y) in alg.mul(*b, suf) {
                            *t.entry((*l, *r)).or_default() += &(c * x) * y;
                        }
                    }
                }
            }
            values.push(t.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect());
        }
        Ok(Self { values })
    }

    /// `Θ(e_i)·e_j + e_i·Θ(e_j) − Θ(e_i e_j)` for the outer structure.
    pub fn leibniz_defect(&self, alg: &FinDimAlgebra, i: usize, j: usize) -> AtElem {
        let mut out = at_mul(alg, &self.as_at(i), &at_word(&[j]), 2);
        at_axpy(&mut out, &Q::from(1), &at_mul(alg, &at_word(&[i]), &self.as_at(j), 2));
        for (k, c) in alg.mul(i, j) {
            at_axpy(&mut out, &-c.clone(), &self.as_at(*k));
        }
        out
    }
}

/// In a truncated algebra, products past the cap are not determined, so
/// pairs whose weights exceed it are not tested.
fn in_range(alg: &FinDimAlgebra, idx: &[usize]) -> bool {
    match (alg.truncated, alg.cap) {
        (true, Some(cap)) => idx.iter().map(|i| alg.weight(*i).unwrap_or(0)).sum::<usize>() <= cap,
        _ => true,
    }
}

fn defect_vector(alg: &FinDimAlgebra, th: &DoubleDerivation) -> SVec {
    let n = alg.dim();
    let mut v = SVec::new();
    for i in 0..n {
        for j in 0..n {
            if !in_range(alg, &[i, j]) {
                continue;
            }
            for (w, c) in th.leibniz_defect(alg, i, j) {
                v.insert(((i * n + j) * n + w[0]) * n + w[1], c);
            }
        }
    }
    v
}

fn pair_allowed(alg: &FinDimAlgebra, i: usize, a: usize, b: usize) -> bool {
    match (alg.weight(i), alg.weight(a), alg.weight(b)) {
        (Some(x), Some(y), Some(z)) => y + z == x,
        _ => true,
    }
}

/// Basis of the weight-preserving double derivations (all double
/// derivations when the algebra has no weights).
pub fn double_derivation_basis(alg: &FinDimAlgebra) -> Result<Vec<DoubleDerivation>> {
    let n = alg.dim();
    let mut cands: Vec<DoubleDerivation> = Vec::new();
    if let (Some(gens), Some(_)) = (alg.gens.as_ref(), alg.words.as_ref()) {
        for g in 0..gens.len() {
            let gi = alg.word_index(&[g]);
            let Some(gi) = gi else { continue };
            for a in 0..n {
                for b in 0..n {
                    if !pair_allowed(alg, gi, a, b) {
                        continue;
                    }
                    let mut vals = vec![Tensor2::new(); gens.len()];
                    vals[g].insert((a, b), Q::from(1));
                    cands.push(DoubleDerivation::from_generators(alg, &vals)?);
                }
            }
        }
    } else {
        for i in 1..n {
            for a in 0..n {
                for b in 0..n {
                    if !pair_allowed(alg, i, a, b) {
                        continue;
                    }
                    let mut th = DoubleDerivation::zero(alg);
                    th.values[i].push((a, b, Q::from(1)));
                    cands.push(th);
                }
            }
        }
    }
    let cols: Vec<SVec> = cands.iter().map(|t| defect_vector(alg, t)).collect();
    let m = LinMap::new(cols.len(), n.pow(4), cols);
    let ker = m.kernel();
    Ok(ker
        .iter()
        .map(|x| {
            let mut th = DoubleDerivation::zero(alg);
            for (u, c) in x {
                th = th.add_scaled(c, &cands[*u]);
            }
            th
        })
        .collect())
}

/// A random integer combination of the basis double derivations.
pub fn random_double_derivation(alg: &FinDimAlgebra, basis: &[DoubleDerivation], rng: &mut impl Rng) -> DoubleDerivation {
    let mut th = DoubleDerivation::zero(alg);
    for b in basis {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            th = th.add_scaled(&Q::from(c), b);
        }
    }
    th
}

/// Leibniz for the outer bimodule structure, and multiplicativity of
/// `Id + Θ_t` on `A_t/(A_t⁺)² ≅ A ⊕ A⊗A`; the two verdicts must agree.
pub fn check_double_derivation(alg: &FinDimAlgebra, th: &DoubleDerivation) -> Suite {
    let mut s = Suite::new("double derivation");
    let n = alg.dim();
    let pair = |i: usize, j: usize| format!("{}*{}", alg.labels[i], alg.labels[j]);
    let mut leibniz = true;
    for i in 0..n {
        for j in 0..n {
            if !in_range(alg, &[i, j]) {
                continue;
            }
            let ok = th.leibniz_defect(alg, i, j).is_empty();
            leibniz &= ok;
            s.record("Leibniz (outer bimodule)", ok, || pair(i, j));
        }
    }
    // Id + Θ_t on words of length ≤ 2
    let f = |i: usize| th.as_at(i);
    let has_unit_value = !th.values[0].is_empty();
    let phi = |x: &AtElem| -> Option<AtElem> {
        let mut y = x.clone();
        let ext = extend_t_elem(&f, x).ok()?;
        for (w, c) in ext {
            if w.len() <= 2 {
                at_add(&mut y, w, c);
            }
        }
        Some(y)
    };
    let mut words: Vec<TWord> = (0..n).map(|i| vec![i]).collect();
    for a in 0..n {
        for b in 0..n {
            words.push(vec![a, b]);
        }
    }
    let mut auto = !has_unit_value;
    if has_unit_value {
        s.record("Id+Theta_t multiplicative mod (A_t+)^2", false, || "Theta(1) != 0".into());
    } else {
        for u in &words {
            for v in &words {
                if u.len() + v.len() > 3 || !in_range(alg, &[u.as_slice(), v.as_slice()].concat()) {
                    continue;
                }
                let (pu, pv) = (at_word(u), at_word(v));
                let lhs = phi(&at_mul(alg, &pu, &pv, 2)).unwrap();
                let rhs = at_mul(alg, &phi(&pu).unwrap(), &phi(&pv).unwrap(), 2);
                let ok = lhs == rhs;
                auto &= ok;
                s.record("Id+Theta_t multiplicative mod (A_t+)^2", ok, || {
                    format!("{} * {}", fmt_at(alg, &pu), fmt_at(alg, &pv))
                });
            }
        }
    }
    s.record("criteria agree", leibniz == auto, || format!("Leibniz {leibniz}, automorphism {auto}"));
    s
}

/// Whether both criteria hold.
pub fn is_double_derivation(alg: &FinDimAlgebra, th: &DoubleDerivation) -> bool {
    let s = check_double_derivation(alg, th);
    s.checks.iter().filter(|c| c.name != "criteria agree").all(|c| c.passed())
}

//! Generic matrices for a free algebra: polynomial differential forms on
//! the representation space, the trace of evaluated forms, and the
//! equivariant differential built from the conjugation action.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::{extended_d, extended_i_delta, slot_i_delta, ExtendedPiece};
use crate::forms::{form_degree, Calculus, Form, Key};
use crate::poly::Word;
use crate::report::Suite;
use crate::scalar::{fmt_q, parity, Q};

/// Commuting variables (sorted, repeated) and a wedge of differentials
/// (strictly increasing).
pub type Mono = (Vec<u16>, Vec<u16>);

/// A polynomial differential form with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CForm {
    pub terms: BTreeMap<Mono, Q>,
}

/// Sign of sorting `w`, or `None` on a repeated entry.
fn wedge_sort(mut w: Vec<u16>) -> Option<(Vec<u16>, Q)> {
    let mut sign = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = !sign;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, if sign { -Q::one() } else { Q::one() }))
}

fn merge(a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v.sort_unstable();
    v
}

impl CForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut f = Self::zero();
        f.add((vec![], vec![]), c);
        f
    }

    pub fn var(v: u16) -> Self {
        let mut f = Self::zero();
        f.add((vec![v], vec![]), Q::one());
        f
    }

    pub fn dvar(v: u16) -> Self {
        let mut f = Self::zero();
        f.add((vec![], vec![v]), Q::one());
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn axpy(&mut self, a: &Q, x: &CForm) {
        for (m, c) in &x.terms {
            self.add(m.clone(), a * c);
        }
    }

    pub fn mul(&self, other: &CForm) -> CForm {
        let mut out = CForm::zero();
        for ((p, w), c) in &self.terms {
            for ((q, v), e) in &other.terms {
                let mut wv = w.clone();
                wv.extend_from_slice(v);
                if let Some((wv, s)) = wedge_sort(wv) {
                    out.add((merge(p, q), wv), &(c * e) * &s);
                }
            }
        }
        out
    }

    /// De Rham differential; variables in `closed` have zero differential.
    pub fn d(&self, closed: impl Fn(u16) -> bool) -> CForm {
        let mut out = CForm::zero();
        for ((p, w), c) in &self.terms {
            let mut i = 0;
            while i < p.len() {
                let v = p[i];
                let mult = p.iter().filter(|&&x| x == v).count();
                if !closed(v) {
                    let mut rest = p.clone();
                    rest.remove(i);
                    let mut wv = vec![v];
                    wv.extend_from_slice(w);
                    if let Some((wv, s)) = wedge_sort(wv) {
                        out.add((rest, wv), &(c * &Q::from(mult as i64)) * &s);
                    }
                }
                i += mult;
            }
        }
        out
    }

    /// Contraction with a vector field given by its values on differentials.
    pub fn contract(&self, field: &impl Fn(u16) -> CForm) -> CForm {
        let mut out = CForm::zero();
        for ((p, w), c) in &self.terms {
            for l in 0..w.len() {
                let mut rest = w.clone();
                rest.remove(l);
                let mut base = CForm::zero();
                base.add((p.clone(), rest), c * &parity(l));
                out.axpy(&Q::one(), &field(w[l]).mul(&base));
            }
        }
        out
    }

    /// Derivation extending a map on variables (degree 0).
    pub fn derive(&self, field: &impl Fn(u16) -> CForm, closed: &impl Fn(u16) -> bool) -> CForm {
        let mut out = CForm::zero();
        for ((p, w), c) in &self.terms {
            for i in 0..p.len() {
                let mut rest = p.clone();
                rest.remove(i);
                let mut base = CForm::zero();
                base.add((rest, w.clone()), c.clone());
                out.axpy(&Q::one(), &field(p[i]).mul(&base));
            }
            for l in 0..w.len() {
                if closed(w[l]) {
                    continue;
                }
                let mut rest = w.clone();
                let v = rest.remove(l);
                let dv = field(v).d(closed);
                let mut base = CForm::zero();
                base.add((p.clone(), rest), c * &parity(l));
                // the differential sits in slot l; move it to the front
                out.axpy(&Q::one(), &dv.mul(&base));
            }
        }
        out
    }

    pub fn fmt(&self, names: &impl Fn(u16) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((p, w), c)| {
                let mut parts = vec![fmt_q(c)];
                parts.extend(p.iter().map(|v| names(*v)));
                parts.extend(w.iter().map(|v| format!("d{}", names(*v))));
                parts.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Square matrix of forms.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixForm {
    pub n: usize,
    pub entries: Vec<CForm>,
}

impl MatrixForm {
    pub fn identity(n: usize) -> Self {
        let mut e = vec![CForm::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = CForm::constant(Q::one());
        }
        Self { n, entries: e }
    }

    pub fn at(&self, i: usize, j: usize) -> &CForm {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &MatrixForm) -> MatrixForm {
        let n = self.n;
        let mut e = vec![CForm::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let p = self.at(i, j).mul(o.at(j, k));
                    e[i * n + k].axpy(&Q::one(), &p);
                }
            }
        }
        MatrixForm { n, entries: e }
    }

    pub fn map(&self, f: impl Fn(&CForm) -> CForm) -> MatrixForm {
        MatrixForm { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn trace(&self) -> CForm {
        let mut t = CForm::zero();
        for i in 0..self.n {
            t.axpy(&Q::one(), self.at(i, i));
        }
        t
    }
}

/// Coordinates on `Rep(A, V) × g` for free `A`: `x^a_{ij}` for each
/// generator, then `τ_{ij}` for `g = gl(V)`.
#[derive(Clone, Debug)]
pub struct RepScheme {
    pub dim: usize,
    pub gens: Vec<String>,
}

/// Samples evaluated in `DR_t`: a plain form or cyclic words with `t`.
#[derive(Clone, Debug)]
pub enum RepInput {
    Plain(Form),
    Ext(ExtendedPiece),
}

impl RepScheme {
    pub fn new(dim: usize, gens: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("representation dimension must be positive"));
        }
        Ok(Self { dim, gens })
    }

    fn n2(&self) -> usize {
        self.dim * self.dim
    }

    pub fn x(&self, a: usize, i: usize, j: usize) -> u16 {
        (a * self.n2() + i * self.dim + j) as u16
    }

    pub fn tau(&self, i: usize, j: usize) -> u16 {
        (self.gens.len() * self.n2() + i * self.dim + j) as u16
    }

    pub fn is_tau(&self, v: u16) -> bool {
        v as usize >= self.gens.len() * self.n2()
    }

    pub fn name(&self, v: u16) -> String {
        let n2 = self.n2();
        let v = v as usize;
        let (a, r) = (v / n2, v % n2);
        let (i, j) = (r / self.dim + 1, r % self.dim + 1);
        match self.gens.get(a) {
            Some(g) => format!("{g}{i}{j}"),
            None => format!("tau{i}{j}"),
        }
    }

    pub fn generic(&self, a: usize) -> MatrixForm {
        let n = self.dim;
        MatrixForm { n, entries: (0..n * n).map(|r| CForm::var(self.x(a, r / n, r % n))).collect() }
    }

    /// `t̂ = Σ E_ij ⊗ τ_ij`.
    pub fn t_hat(&self) -> MatrixForm {
        let n = self.dim;
        MatrixForm { n, entries: (0..n * n).map(|r| CForm::var(self.tau(r / n, r % n))).collect() }
    }

    /// `ev(w)`: product of generic matrices.
    pub fn ev(&self, w: &[usize]) -> MatrixForm {
        w.iter().fold(MatrixForm::identity(self.dim), |m, a| m.mul(&self.generic(*a)))
    }

    pub fn d(&self, f: &CForm) -> CForm {
        f.d(|v| self.is_tau(v))
    }

    /// `â_0 dâ_1 … dâ_n` for a key over an algebra with basis words.
    pub fn ev_key(&self, words: &[Word], k: &Key) -> MatrixForm {
        let mut m = self.ev(&words[k[0] as usize]);
        for a in &k[1..] {
            let da = self.ev(&words[*a as usize]).map(|e| self.d(e));
            m = m.mul(&da);
        }
        m
    }

    pub fn ev_form(&self, words: &[Word], f: &Form) -> MatrixForm {
        let mut out = MatrixForm { n: self.dim, entries: vec![CForm::zero(); self.n2()] };
        for (k, c) in f {
            let m = self.ev_key(words, k);
            for (o, e) in out.entries.iter_mut().zip(&m.entries) {
                o.axpy(c, e);
            }
        }
        out
    }

    pub fn trace_ev(&self, words: &[Word], x: &RepInput) -> CForm {
        match x {
            RepInput::Plain(f) => self.ev_form(words, f).trace(),
            RepInput::Ext(p) => {
                let t = self.t_hat();
                let mut out = CForm::zero();
                for (slots, c) in &p.terms {
                    let mut m = MatrixForm::identity(self.dim);
                    for s in slots {
                        m = m.mul(&self.ev_key(words, s)).mul(&t);
                    }
                    out.axpy(c, &m.trace());
                }
                out
            }
        }
    }

    /// `i_ẽ(dx^a_{ij}) = [E_rs, X_a]_{ij}`.
    pub fn contract_e(&self, r: usize, s: usize, f: &CForm) -> CForm {
        f.contract(&|v| self.ad_entry(r, s, v))
    }

    /// Entry `v` of `[E_rs, M]` where `M` is the matrix containing `v`.
    fn ad_entry(&self, r: usize, s: usize, v: u16) -> CForm {
        let n = self.dim;
        let n2 = self.n2();
        let base = (v as usize / n2) * n2;
        let (i, j) = ((v as usize % n2) / n, v as usize % n);
        let mut out = CForm::zero();
        if i == r {
            out.add((vec![(base + s * n + j) as u16], vec![]), Q::one());
        }
        if j == s {
            out.add((vec![(base + i * n + r) as u16], vec![]), -Q::one());
        }
        out
    }

    /// Lie derivative along `ẽ` on `Ω(Rep)`; with `diagonal`, also on `τ`.
    pub fn lie_e(&self, r: usize, s: usize, f: &CForm, diagonal: bool) -> CForm {
        f.derive(
            &|v| if self.is_tau(v) && !diagonal { CForm::zero() } else { self.ad_entry(r, s, v) },
            &|v| self.is_tau(v),
        )
    }

    /// `d_g(ω ⊗ f) = Σ_r (i_{e_r} ω) ⊗ (e_r^* f)`.
    pub fn d_g(&self, f: &CForm) -> CForm {
        let mut out = CForm::zero();
        for r in 0..self.dim {
            for s in 0..self.dim {
                let c = self.contract_e(r, s, f);
                out.axpy(&Q::one(), &CForm::var(self.tau(r, s)).mul(&c));
            }
        }
        out
    }

    /// `L_ẽ η = 0` and `i_ẽ η = 0` for all elementary `e`; first failing `e`.
    pub fn check_basic(&self, f: &CForm) -> Option<String> {
        for r in 0..self.dim {
            for s in 0..self.dim {
                if !self.contract_e(r, s, f).is_zero() {
                    return Some(format!("i_e fails for e = E{}{}", r + 1, s + 1));
                }
                if !self.lie_e(r, s, f, false).is_zero() {
                    return Some(format!("L_e fails for e = E{}{}", r + 1, s + 1));
                }
            }
        }
        None
    }

    pub fn is_invariant(&self, f: &CForm) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|s| self.lie_e(r, s, f, true).is_zero()))
    }

    pub fn fmt(&self, f: &CForm) -> String {
        f.fmt(&|v| self.name(v))
    }
}

/// The contraction of a plain form, as one-slot cyclic words:
/// `l t r ≡ (-1)^{|l||r|} (r l) t`.
pub fn plain_i_delta(calc: &Calculus, f: &Form) -> ExtendedPiece {
    let mut out = ExtendedPiece::new();
    for (k, c) in f {
        for (parts, s) in slot_i_delta(calc, k) {
            let (l, r) = (&parts[0], &parts[1]);
            let sign = parity(form_degree(l) * form_degree(r));
            for (m, e) in calc.mul_keys(r, l) {
                out.add(vec![m], &(c * &s) * &(&sign * &e));
            }
        }
    }
    out
}

/// `(d + i_Δ)` on a sample.
pub fn total_differential(calc: &Calculus, x: &RepInput) -> (RepInput, ExtendedPiece) {
    match x {
        RepInput::Plain(f) => (RepInput::Plain(calc.d(f)), plain_i_delta(calc, f)),
        RepInput::Ext(p) => (RepInput::Ext(extended_d(calc, p)), extended_i_delta(calc, p)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepReport {
    pub dim: usize,
    pub samples: usize,
    pub kernel_classes: usize,
    pub suite: Suite,
}

/// Sample grid: plain forms of degree ≤ 2 and cyclic words with up to two
/// `t` and total form degree ≤ 2. `slot_words` bounds the words used.
pub fn sample_grid(slot_words: &[usize], max_p: usize) -> Vec<RepInput> {
    let keys_up_to = |deg: usize| -> Vec<Key> {
        let mut out = Vec::new();
        for n in 0..=deg {
            let mut cur: Vec<Vec<usize>> = slot_words.iter().map(|w| vec![*w]).collect();
            for _ in 0..n {
                cur = cur
                    .into_iter()
                    .flat_map(|k| slot_words.iter().filter(|w| **w != 0).map(move |w| {
                        let mut x = k.clone();
                        x.push(*w);
                        x
                    }))
                    .collect();
            }
            out.extend(cur.iter().map(|k| crate::forms::key(k)));
        }
        out
    };
    let mut out = Vec::new();
    let all = keys_up_to(2);
    for k in &all {
        out.push(RepInput::Plain(crate::forms::single(k.clone())));
    }
    if max_p >= 1 {
        for k in &all {
            out.push(RepInput::Ext(ExtendedPiece::single(vec![k.clone()])));
        }
    }
    if max_p >= 2 {
        for a in &all {
            for b in &all {
                if form_degree(a) + form_degree(b) <= 2 {
                    let p = ExtendedPiece::single(vec![a.clone(), b.clone()]);
                    if !p.is_zero() {
                        out.push(RepInput::Ext(p));
                    }
                }
            }
        }
    }
    out
}

fn fmt_input(calc: &Calculus, x: &RepInput) -> String {
    match x {
        RepInput::Plain(f) => calc.fmt_form(f),
        RepInput::Ext(p) => p.fmt(calc),
    }
}

/// The commuting square for `d + i_Δ` and `d_DR + d_g`, commutator
/// vanishing, and basic images of kernel classes with `B ↦ (n+1) d_DR`.
///
/// `calc` must be a free algebra whose cap exceeds every product formed
/// from the grid; `kernel_calc` supplies `Ker ι_Δ` representatives of
/// total weight at most its cap.
pub fn verify_rep_thm(
    scheme: &RepScheme,
    calc: &Calculus,
    grid: &[RepInput],
    pairs: &[(Form, Form)],
    kernel_calc: &Calculus,
    kernel_degrees: usize,
) -> Result<RepReport> {
    let words = calc.alg.words.as_ref().ok_or_else(|| Error::input("need a presented free algebra"))?;
    let mut s = Suite::new(format!("rep dim={}", scheme.dim));
    for x in grid {
        let img = scheme.trace_ev(words, x);
        let (dx, ix) = total_differential(calc, x);
        let lhs_d = scheme.trace_ev(words, &dx);
        let lhs_i = scheme.trace_ev(words, &RepInput::Ext(ix));
        let rhs_d = scheme.d(&img);
        let rhs_i = scheme.d_g(&img);
        let w = || fmt_input(calc, x);
        s.record("ev d = d_DR ev", lhs_d == rhs_d, w);
        s.record("ev i_Delta = d_g ev", lhs_i == rhs_i, || {
            format!("{}: {} vs {}", w(), scheme.fmt(&lhs_i), scheme.fmt(&rhs_i))
        });
        s.record("image is invariant", scheme.is_invariant(&img), w);
        let mut tot = rhs_d.clone();
        tot.axpy(&Q::one(), &rhs_i);
        let mut sq = scheme.d(&tot);
        sq.axpy(&Q::one(), &scheme.d_g(&tot));
        s.record("(d_DR + d_g)^2 = 0 on images", sq.is_zero(), w);
    }
    for (a, b) in pairs {
        let c = calc.supercommutator(a, b);
        let t = scheme.trace_ev(words, &RepInput::Plain(c));
        s.record("trace kills graded commutators", t.is_zero(), || {
            format!("[{}, {}]", calc.fmt_form(a), calc.fmt_form(b))
        });
    }
    let kwords = kernel_calc.alg.words.as_ref().ok_or_else(|| Error::input("need a presented free algebra"))?;
    let cap = kernel_calc.alg.cap.unwrap_or(usize::MAX);
    let mut kernel_classes = 0;
    for n in 0..=kernel_degrees {
        let ker = crate::homology::hh_kernel_iota(kernel_calc, n);
        for f in &ker.reps {
            let weight = f.keys().next().map(|k| k.iter().map(|i| kernel_calc.alg.weight(*i as usize).unwrap_or(0)).sum::<usize>());
            if weight.is_none_or(|w| w > cap) {
                continue;
            }
            kernel_classes += 1;
            let img = scheme.ev_form(kwords, f).trace();
            let w = || kernel_calc.fmt_form(f);
            let basic = scheme.check_basic(&img);
            s.record("kernel class image is basic", basic.is_none(), || format!("{}: {}", w(), basic.clone().unwrap_or_default()));
            let bf = kernel_calc.connes_b(&crate::forms::reduce_unit(f));
            let lhs = scheme.ev_form(kwords, &bf).trace();
            let mut rhs = CForm::zero();
            rhs.axpy(&Q::from((n + 1) as i64), &scheme.d(&img));
            s.record("ev B = (N+1) d_DR ev on kernel classes", lhs == rhs, w);
        }
    }
    Ok(RepReport { dim: scheme.dim, samples: grid.len(), kernel_classes, suite: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::free_xy;
    use crate::forms::{key, single};

    fn scheme(n: usize) -> RepScheme {
        RepScheme::new(n, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn evaluation_basics() {
        let r = scheme(2);
        assert_eq!(r.ev(&[]), MatrixForm::identity(2));
        let xy = r.ev(&[0, 1]);
        assert_eq!(xy, r.generic(0).mul(&r.generic(1)));
        // ev is multiplicative on words up to length 4
        let words: Vec<Vec<usize>> = (0..16).map(|m| (0..4).map(|b| (m >> b) & 1).collect()).collect();
        for u in &words {
            for v in &words {
                let mut uv = u[..2].to_vec();
                uv.extend_from_slice(&v[..2]);
                assert_eq!(r.ev(&uv), r.ev(&u[..2]).mul(&r.ev(&v[..2])));
            }
        }
        let mut c = r.ev(&[0, 1]);
        for (e, f) in c.entries.iter_mut().zip(&r.ev(&[1, 0]).entries) {
            e.axpy(&-Q::one(), f);
        }
        assert!(c.trace().is_zero());
    }

    #[test]
    fn contraction_and_basic() {
        let r = scheme(2);
        let d11 = CForm::dvar(r.x(0, 0, 0));
        let w = r.check_basic(&d11).unwrap();
        assert!(w.contains("i_e"), "{w}");
        // i_{E12}(dx11) = x21
        assert_eq!(r.contract_e(0, 1, &d11), CForm::var(r.x(0, 1, 0)));
        assert!(r.check_basic(&r.generic(0).trace()).is_none());
        assert!(r.d_g(&r.generic(0).trace()).is_zero());
    }

    #[test]
    fn extended_trace() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let r = scheme(2);
        let words = a.words.clone().unwrap();
        let x = c.key_from_labels(&["x"]).unwrap();
        let p = RepInput::Ext(ExtendedPiece::single(vec![x]));
        let t = r.trace_ev(&words, &p);
        let expect = r.generic(0).mul(&r.t_hat()).trace();
        assert_eq!(t, expect);
        // dx dy and −dy dx agree after the trace
        let dxdy = single(key(&[0, 1, 2]));
        let dydx = single(key(&[0, 2, 1]));
        let mut s = r.trace_ev(&words, &RepInput::Plain(dxdy));
        s.axpy(&Q::one(), &r.trace_ev(&words, &RepInput::Plain(dydx)));
        assert!(s.is_zero());
    }

    #[test]
    fn square_commutes_small() {
        let a = free_xy(6);
        let c = Calculus::new(&a);
        let k = free_xy(3);
        let kc = Calculus::new(&k);
        let grid = sample_grid(&[0, 1, 2], 2);
        let pairs = vec![(single(key(&[1])), single(key(&[0, 2]))), (single(key(&[0, 1])), single(key(&[0, 2])))];
        for n in [1, 2] {
            let rep = verify_rep_thm(&scheme(n), &c, &grid, &pairs, &kc, 1).unwrap();
            assert!(rep.suite.passed(), "{:?}", rep.suite.failures());
            assert!(rep.kernel_classes > 0);
        }
    }
}

//! `A_φ = F_t / ⟨x − φ(x)⟩` truncated by F-weight and t-order, computed
//! as a linear quotient of the span of bounded words.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::cochain::{flat, Cochain};
use crate::deform::Star;
use crate::error::{Error, Result};
use crate::findim::FinDimAlgebra;
use crate::linalg::{add_entry, Echelon, SVec};
use crate::poly::{parse_ncpoly, Generator, GeneratorSet, NCPoly, Word};
use crate::rewrite::AlgebraPresentation;


/// A presentation with `φ: L → F_t⁺` and a t-order cap.
#[derive(Clone, Debug)]
pub struct DeformationDatum {
    pub pres: AlgebraPresentation,
    /// `F` generators followed by `t`.
    pub gens_t: GeneratorSet,
    /// `φ(ℓ)` for each relation of the presentation, in order.
    pub phi: Vec<NCPoly>,
    pub t_order: usize,
}

/// `V` generators plus `t`.
pub fn with_t(gens: &GeneratorSet) -> Result<GeneratorSet> {
    if gens.index("t").is_some() {
        return Err(Error::input("generator name `t` is reserved for the deformation parameter"));
    }
    let mut g = gens.gens.clone();
    g.push(Generator { name: "t".into(), weight: 1 });
    GeneratorSet::new(g)
}

impl DeformationDatum {
    /// `pairs` lists `(relation, value)`; relations not listed get `φ = 0`.
    pub fn new(pres: AlgebraPresentation, pairs: &[(&str, &str)], t_order: usize) -> Result<Self> {
        let gens_t = with_t(&pres.gens)?;
        let t = pres.gens.len();
        let mut phi = vec![NCPoly::zero(); pres.relations.len()];
        for (rel, val) in pairs {
            let r = parse_ncpoly(rel, &pres.gens)?;
            let i = pres
                .relations
                .iter()
                .position(|x| *x == r)
                .ok_or_else(|| Error::input(format!("`{rel}` is not one of the relations")))?;
            let v = parse_ncpoly(val, &gens_t)?;
            if v.terms.keys().any(|w| !w.contains(&t)) {
                return Err(Error::input(format!("phi value `{val}` has a term without t")));
            }
            phi[i] = v;
        }
        Ok(Self { pres, gens_t, phi, t_order })
    }

    pub fn t(&self) -> usize {
        self.pres.gens.len()
    }

    pub fn fweight(&self, w: &[usize]) -> usize {
        w.iter().filter(|&&g| g != self.t()).map(|&g| self.pres.gens.gens[g].weight).sum()
    }

    pub fn tcount(&self, w: &[usize]) -> usize {
        w.iter().filter(|&&g| g == self.t()).count()
    }

    /// `ℓ − φ(ℓ)` as polynomials in `F_t`.
    pub fn deformed_relations(&self) -> Vec<NCPoly> {
        self.pres.relations.iter().zip(&self.phi).map(|(r, p)| r.sub(p)).collect()
    }
}

/// The truncation of `A_φ`: words of F-weight ≤ W with at most N letters `t`.
#[derive(Clone, Debug)]
pub struct APhi {
    pub datum: DeformationDatum,
    pub weight_cap: usize,
    /// All bounded words, largest first.
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    ideal: Echelon,
    /// Non-pivot words; their classes form a basis.
    pub basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

fn bounded_words(d: &DeformationDatum, w_cap: usize, n_cap: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..=d.t() {
                let mut x: Word = w.clone();
                x.push(g);
                if d.fweight(&x) <= w_cap && d.tcount(&x) <= n_cap {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Bigger words come first: fewer `t`, then F-weight, then the F-letters
/// in monomial order, then the `t` positions.
fn bigness(d: &DeformationDatum, a: &[usize], b: &[usize]) -> Ordering {
    let fl = |w: &[usize]| w.iter().copied().filter(|&g| g != d.t()).collect::<Vec<_>>();
    d.tcount(b)
        .cmp(&d.tcount(a))
        .then_with(|| d.fweight(a).cmp(&d.fweight(b)))
        .then_with(|| d.pres.gens.cmp_words(&fl(a), &fl(b)))
        .then_with(|| a.cmp(b))
}

impl APhi {
    pub fn build(datum: &DeformationDatum, weight_cap: usize) -> Result<Self> {
        let d = datum;
        let n_cap = d.t_order;
        let mut words = bounded_words(d, weight_cap, n_cap);
        if words.len() > crate::size_limit() {
            return Err(Error::SizeLimit { size: words.len(), limit: crate::size_limit() });
        }
        words.sort_by(|a, b| bigness(d, b, a));
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut ideal = Echelon::new();
        for r in d.deformed_relations() {
            let rw = r.terms.keys().map(|w| d.fweight(w)).max().unwrap_or(0);
            if rw > weight_cap {
                continue;
            }
            let shells: Vec<&Word> = words.iter().filter(|w| d.fweight(w) + rw <= weight_cap).collect();
            for u in &shells {
                for v in &shells {
                    if d.fweight(u) + d.fweight(v) + rw > weight_cap || d.tcount(u) + d.tcount(v) > n_cap {
                        continue;
                    }
                    let mut row = SVec::new();
                    for (w, c) in &r.terms {
                        let mut x = (*u).clone();
                        x.extend_from_slice(w);
                        x.extend_from_slice(v);
                        // terms past the t-order cap lie in the ideal (t)^{N+1}
                        if let Some(&i) = index.get(&x) {
                            add_entry(&mut row, i, c.clone());
                        }
                    }
                    ideal.insert(&row);
                }
            }
        }
        let basis: Vec<usize> = (0..words.len()).filter(|i| !ideal.is_pivot(*i)).collect();
        let basis_pos = basis.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        Ok(Self { datum: datum.clone(), weight_cap, words, index, ideal, basis, basis_pos })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_word(&self, i: usize) -> &Word {
        &self.words[self.basis[i]]
    }

    pub fn label(&self, i: usize) -> String {
        self.datum.gens_t.word_string(self.basis_word(i))
    }

    /// Normal form of a word on the basis; `None` past the caps.
    pub fn normal_form(&self, w: &[usize]) -> Option<SVec> {
        let &i = self.index.get(w)?;
        let r = self.ideal.reduce(&crate::linalg::unit(i));
        Some(r.into_iter().map(|(c, x)| (self.basis_pos[&c], x)).collect())
    }

    /// Product of basis classes; `None` when it leaves the truncation.
    pub fn mul(&self, i: usize, j: usize) -> Option<SVec> {
        let mut w = self.basis_word(i).clone();
        w.extend_from_slice(self.basis_word(j));
        self.normal_form(&w)
    }

    /// Basis classes with exactly `m` letters `t`, i.e. `dim gr^m`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.datum.t_order + 1];
        for i in 0..self.dim() {
            out[self.datum.tcount(self.basis_word(i))] += 1;
        }
        out
    }

    /// Basis index of an A word placed in `A_φ`.
    pub fn class_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).and_then(|i| self.basis_pos.get(i)).copied()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatOrder {
    pub order: usize,
    pub dim_gr: usize,
    pub expected: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Flatness {
    pub weight_cap: usize,
    pub orders: Vec<FlatOrder>,
    pub flat: bool,
}

/// Number of `k`-tuples of basis words of `a` with total weight ≤ `cap`.
pub fn tuple_count(a: &FinDimAlgebra, k: usize, cap: usize) -> usize {
    let mut per = vec![0usize; cap + 1];
    for i in 0..a.dim() {
        let w = a.weight(i).unwrap_or(0);
        if w <= cap {
            per[w] += 1;
        }
    }
    let mut acc = vec![0usize; cap + 1];
    acc[0] = 1;
    for _ in 0..k {
        let mut next = vec![0usize; cap + 1];
        for (x, cx) in acc.iter().enumerate() {
            for (y, cy) in per.iter().enumerate() {
                if x + y <= cap {
                    next[x + y] += cx * cy;
                }
            }
        }
        acc = next;
    }
    acc.iter().sum()
}

/// Compare `dim gr^m A_φ` with the `t^m` part of `A ∗ k[t]`, which is
/// `A^{⊗(m+1)}` within the weight cap.
pub fn flatness_check(aphi: &APhi, a: &FinDimAlgebra) -> Flatness {
    let dims = aphi.graded_dims();
    let orders: Vec<FlatOrder> = dims
        .iter()
        .enumerate()
        .map(|(m, &d)| {
            let e = tuple_count(a, m + 1, aphi.weight_cap);
            FlatOrder { order: m, dim_gr: d, expected: e, ok: d == e }
        })
        .collect();
    Flatness { weight_cap: aphi.weight_cap, flat: orders.iter().all(|o| o.ok), orders }
}

/// Read off `β^(m)(a, b)` as the `t^m` part of `ab` in `A_φ`, for basis
/// pairs within the weight cap.
pub fn extract_star(aphi: &APhi, a: &FinDimAlgebra) -> Result<Star> {
    let d = &aphi.datum;
    let n = a.dim();
    let words = a.words.as_ref().ok_or_else(|| Error::input("algebra has no words"))?;
    let n_max = d.t_order;
    let mut betas: Vec<Cochain> = (1..=n_max).map(|m| Cochain::zero(n, 2, m + 1)).collect();
    let split = |w: &[usize]| -> Result<Vec<usize>> {
        w.split(|g| *g == d.t())
            .map(|seg| {
                a.word_index(seg).ok_or_else(|| {
                    Error::input(format!("A_phi is not flat: {} has a segment outside A", d.gens_t.word_string(w)))
                })
            })
            .collect()
    };
    for i in 0..n {
        for j in 0..n {
            if !crate::deform::in_range(a, &[i, j]) {
                continue;
            }
            let mut w = words[i].clone();
            w.extend_from_slice(&words[j]);
            let nf = aphi.normal_form(&w).ok_or_else(|| Error::input("product outside the truncation"))?;
            let mut zero_part = SVec::new();
            for (b, c) in nf {
                let segs = split(aphi.basis_word(b))?;
                let m = segs.len() - 1;
                if m == 0 {
                    add_entry(&mut zero_part, segs[0], c);
                } else {
                    add_entry(&mut betas[m - 1].values[i * n + j], flat(&segs, n), c);
                }
            }
            let expect: SVec = a.mul(i, j).iter().cloned().collect();
            if zero_part != expect {
                return Err(Error::invariant(format!(
                    "A_phi/(t) disagrees with A on {}*{}",
                    a.labels[i], a.labels[j]
                )));
            }
        }
    }
    Ok(Star { betas })
}

/// A basis word of `A_φ` split into A factors, for display.
pub fn fmt_tensor(a: &FinDimAlgebra, slots: &[usize]) -> String {
    slots.iter().map(|s| a.labels[*s].as_str()).collect::<Vec<_>>().join("(x)")
}

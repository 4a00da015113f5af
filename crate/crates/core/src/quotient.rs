//! Quotients of form spaces: `Ω_♮ = Ω/bΩ`, `DR = Ω/[Ω,Ω]` and commutator
//! subspaces.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::blocks::BlockedSpace;
use crate::forms::{self, Calculus, Form, Key};
use crate::linalg::{Echelon, SVec};
use crate::scalar::{parity, Q};

/// A quotient of the degree-`degree` part of a blocked space by a relation
/// subspace. Classes are indexed by the non-pivot columns of the relations.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub label: String,
    pub degree: usize,
    pub space: BlockedSpace,
    pub rel: Vec<Echelon>,
    pub reps: Vec<Vec<usize>>,
    rep_pos: Vec<HashMap<usize, usize>>,
    offsets: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(label: impl Into<String>, degree: usize, space: BlockedSpace, rel: Vec<Echelon>) -> Self {
        let mut reps = Vec::new();
        let mut rep_pos = Vec::new();
        let mut offsets = Vec::new();
        let mut off = 0;
        for (b, e) in space.blocks.iter().zip(&rel) {
            let r: Vec<usize> = (0..b.dim(degree)).filter(|c| !e.is_pivot(*c)).collect();
            offsets.push(off);
            off += r.len();
            rep_pos.push(r.iter().enumerate().map(|(i, c)| (*c, i)).collect());
            reps.push(r);
        }
        Self { label: label.into(), degree, space, rel, reps, rep_pos, offsets }
    }

    pub fn dim(&self) -> usize {
        self.reps.iter().map(|r| r.len()).sum()
    }

    pub fn relation_dim(&self) -> usize {
        self.rel.iter().map(|e| e.rank()).sum()
    }

    /// Block and local column of a global class index.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let b = self.offsets.partition_point(|&o| o <= i) - 1;
        let b = (b..self.reps.len()).find(|&bb| i - self.offsets[bb] < self.reps[bb].len()).unwrap();
        (b, self.reps[b][i - self.offsets[b]])
    }

    /// The basis form representing class `i`.
    pub fn rep(&self, i: usize) -> Form {
        let (b, c) = self.locate(i);
        forms::single(self.space.blocks[b].keys[self.degree][c].clone())
    }

    pub fn rep_key(&self, i: usize) -> Key {
        let (b, c) = self.locate(i);
        self.space.blocks[b].keys[self.degree][c].clone()
    }

    /// Coordinates of the class of `f`.
    pub fn project(&self, f: &Form) -> SVec {
        let mut out = SVec::new();
        for (b, v) in self.space.split(self.degree, f) {
            let r = self.rel[b].reduce(&v);
            for (c, x) in r {
                out.insert(self.offsets[b] + self.rep_pos[b][&c], x);
            }
        }
        out
    }

    /// Canonical representative: the form reduced modulo the relations.
    pub fn reduce(&self, f: &Form) -> Form {
        let mut out = Form::new();
        for (b, v) in self.space.split(self.degree, f) {
            let r = self.rel[b].reduce(&v);
            for (k, c) in self.space.blocks[b].form(self.degree, &r) {
                forms::add_term(&mut out, k, c);
            }
        }
        out
    }

    pub fn is_zero(&self, f: &Form) -> bool {
        self.space.split(self.degree, f).iter().all(|(b, v)| self.rel[*b].contains(v))
    }

    /// Form with the given class coordinates, built from representatives.
    pub fn lift(&self, v: &SVec) -> Form {
        let mut out = Form::new();
        for (i, x) in v {
            forms::add_term(&mut out, self.rep_key(*i), x.clone());
        }
        out
    }
}

fn b_image(calc: &Calculus, space: &BlockedSpace, n: usize) -> Vec<Echelon> {
    space.blocks.iter().map(|bl| bl.matrix(n + 1, n, |k| calc.b_key(k)).image()).collect()
}

/// `Ω^n_♮ = Ω^n / bΩ^{n+1}`.
pub fn natural_quotient(calc: &Calculus, n: usize) -> QuotientSpace {
    let space = BlockedSpace::new(calc, n + 1, false);
    let rel = b_image(calc, &space, n);
    QuotientSpace::new(format!("Omega_nat^{n}"), n, space, rel)
}

/// Checks that the relations of `Ω^n_♮` are exactly the commutators
/// `[a, ω]` with `a ∈ A`, and that `κ^n = Id` on the quotient.
pub fn verify_natural_quotient(calc: &Calculus, q: &QuotientSpace) -> (bool, bool) {
    let n = q.degree;
    let mut comm = vec![Echelon::new(); q.space.blocks.len()];
    for bl in &q.space.blocks {
        for k in &bl.keys[n] {
            for a in 1..calc.dim() {
                let w = forms::single(forms::key(&[a]));
                let c = calc.supercommutator(&w, &forms::single(k.clone()));
                for (b2, v) in q.space.split(n, &c) {
                    comm[b2].insert(&v);
                }
            }
        }
    }
    let same = comm.iter().zip(&q.rel).all(|(c, r)| c.rank() == r.rank() && contains_all(c, r));
    let mut periodic = true;
    if n >= 1 {
        for bl in &q.space.blocks {
            for k in &bl.keys[n] {
                let f = forms::single(k.clone());
                let g = forms::diff(&calc.kappa_pow(&f, n), &f);
                if !q.is_zero(&g) {
                    periodic = false;
                }
            }
        }
    }
    (same, periodic)
}

fn contains_all(a: &Echelon, b: &Echelon) -> bool {
    b.rref_basis().iter().all(|v| a.contains(v))
}

/// `DR^n` with its κ-invariant section into `Ω^n_♮`.
#[derive(Clone, Debug)]
pub struct DrSpace {
    pub quotient: QuotientSpace,
    pub natural: Vec<Echelon>,
}

/// `DR^n = Ω^n / (bΩ^{n+1} + (1-κ)Ω^n)`.
pub fn dr_space(calc: &Calculus, n: usize) -> DrSpace {
    let space = BlockedSpace::new(calc, n + 1, false);
    let natural = b_image(calc, &space, n);
    let mut rel = natural.clone();
    if n >= 1 {
        for (bl, e) in space.blocks.iter().zip(rel.iter_mut()) {
            let m = bl.matrix(n, n, |k| {
                let f = forms::single(k.clone());
                forms::diff(&f, &calc.kappa_key(k))
            });
            for c in &m.cols {
                e.insert(c);
            }
        }
    }
    DrSpace { quotient: QuotientSpace::new(format!("DR^{n}"), n, space, rel), natural }
}

impl DrSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn degree(&self) -> usize {
        self.quotient.degree
    }

    /// Averaged representative of class `i`, reduced modulo `bΩ`; a κ-invariant
    /// element of `Ω_♮`.
    pub fn section(&self, calc: &Calculus, i: usize) -> Form {
        let n = self.degree();
        let rep = self.quotient.rep(i);
        let avg = if n == 0 {
            rep
        } else {
            forms::scaled(&calc.kappa_sum(&rep, n), &(Q::one() / Q::from(n as i64)))
        };
        self.reduce_natural(&avg)
    }

    /// Canonical representative of a form modulo `bΩ^{n+1}`.
    pub fn reduce_natural(&self, f: &Form) -> Form {
        let n = self.degree();
        let sp = &self.quotient.space;
        let mut out = Form::new();
        for (b, v) in sp.split(n, f) {
            let r = self.natural[b].reduce(&v);
            for (k, c) in sp.blocks[b].form(n, &r) {
                forms::add_term(&mut out, k, c);
            }
        }
        out
    }
}

/// Span of `uv - (-1)^{pq} vu` over basis pairs of a graded space with a
/// product. `dims[p]` is the dimension in degree `p`; `mul(p, i, q, j)` is
/// the product of basis vectors in degree `p + q`. Returns a basis per
/// degree up to `dims.len() - 1`.
pub fn commutator_subspace(dims: &[usize], mul: impl Fn(usize, usize, usize, usize) -> SVec) -> Vec<Echelon> {
    let top = dims.len();
    let mut out = vec![Echelon::new(); top];
    for p in 0..top {
        for q in 0..top - p {
            if p + q >= top {
                continue;
            }
            for i in 0..dims[p] {
                for j in 0..dims[q] {
                    let mut c = mul(p, i, q, j);
                    let s = -parity(p * q);
                    crate::linalg::axpy(&mut c, &s, &mul(q, j, p, i));
                    out[p + q].insert(&c);
                }
            }
        }
    }
    out
}

/// `[A, A]` as a subspace of `A`.
pub fn algebra_commutators(alg: &crate::findim::FinDimAlgebra) -> Echelon {
    let n = alg.dim();
    commutator_subspace(&[n], |_, i, _, j| alg.mul(i, j).iter().cloned().collect()).remove(0)
}

/// Graded commutators `[Ω^p, Ω^q]` inside `Ω^{p+q}` for `p + q ≤ top`,
/// as coordinates on `calc.basis(p + q)`.
pub fn form_commutators(calc: &Calculus, top: usize) -> Vec<Echelon> {
    let bases: Vec<Vec<Key>> = (0..=top).map(|n| calc.basis(n)).collect();
    let index: Vec<HashMap<Key, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    commutator_subspace(&dims, |p, i, q, j| {
        let f = calc.mul_keys(&bases[p][i], &bases[q][j]);
        f.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (index[p + q][&k], c)).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;

    #[test]
    fn natural_quotient_dual_numbers() {
        let a = dual_numbers();
        let c = Calculus::new(&a);
        let q0 = natural_quotient(&c, 0);
        assert_eq!(q0.dim(), 2);
        let q1 = natural_quotient(&c, 1);
        // Ω^1 = span(dε, ε dε) and b(dε dε) = 2ε dε, b(ε dε dε) = 0
        assert_eq!(q1.dim(), 1);
        for n in 0..=4 {
            let q = natural_quotient(&c, n);
            assert_eq!(verify_natural_quotient(&c, &q), (true, true), "n={n}");
        }
    }

    #[test]
    fn dr0_free_is_cyclic_words() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let dr = dr_space(&c, 0);
        // 1, x, y, xx, xy~yx, yy
        assert_eq!(dr.dim(), 6);
    }

    #[test]
    fn section_is_a_section() {
        for a in [dual_numbers(), truncated_poly(3), free_xy(2)] {
            let c = Calculus::new(&a);
            for n in 0..=2 {
                let dr = dr_space(&c, n);
                for i in 0..dr.dim() {
                    let s = dr.section(&c, i);
                    let mut e = SVec::new();
                    e.insert(i, Q::one());
                    assert_eq!(dr.quotient.project(&s), e);
                    if n > 0 {
                        let ks = dr.reduce_natural(&c.kappa(&s));
                        assert_eq!(ks, s, "section not κ-invariant");
                    }
                }
            }
        }
    }

    #[test]
    fn commutators_of_small_algebras() {
        assert_eq!(algebra_commutators(&dual_numbers()).rank(), 0);
        let a = free_xy(2);
        let e = algebra_commutators(&a);
        assert_eq!(e.rank(), 1);
        let xy = a.word_index(&[0, 1]).unwrap();
        let yx = a.word_index(&[1, 0]).unwrap();
        let mut v = SVec::new();
        v.insert(xy, Q::one());
        v.insert(yx, -Q::one());
        assert!(e.contains(&v));
    }

    #[test]
    fn dual_numbers_omega1_commutators() {
        let a = dual_numbers();
        let c = Calculus::new(&a);
        let e = form_commutators(&c, 1);
        // [A, Ω^1] inside Ω^1 is spanned by ε dε - dε ε = 2ε dε
        let basis = c.basis(1);
        let edē = basis.iter().position(|k| k[0] == 1).unwrap();
        assert_eq!(e[1].rank(), 1);
        let mut v = SVec::new();
        v.insert(edē, Q::one());
        assert!(e[1].contains(&v));
    }
}

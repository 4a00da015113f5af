//! Free-product deformations: first-order products, the Maurer-Cartan
//! recursion, gauge transformations.

use num_traits::Zero;
use serde::Serialize;

use crate::cochain::{coboundary, flat, solve_coboundary, unflat, vee, Cochain};
use crate::findim::FinDimAlgebra;
use crate::linalg::{add_entry, SVec};
use crate::scalar::Q;
use crate::tderiv::{at_add, at_axpy, AtElem, TWord};

/// Inputs that lie below the cap of a truncated algebra.
pub fn in_range(alg: &FinDimAlgebra, args: &[usize]) -> bool {
    match (alg.truncated, alg.cap) {
        (true, Some(cap)) => args.iter().map(|i| alg.weight(*i).unwrap_or(0)).sum::<usize>() <= cap,
        _ => true,
    }
}

fn labels(alg: &FinDimAlgebra, args: &[usize]) -> String {
    args.iter().map(|i| alg.labels[*i].as_str()).collect::<Vec<_>>().join(", ")
}

/// Tensor in `A^{⊗k}` as an element of `A_t`.
pub fn tensor_to_at(t: &SVec, k: usize, n: usize) -> AtElem {
    let mut e = AtElem::new();
    for (i, c) in t {
        at_add(&mut e, unflat(*i, k, n), c.clone());
    }
    e
}

/// Component of `x` with exactly `k` factors, as a tensor.
pub fn at_component(x: &AtElem, k: usize, n: usize) -> SVec {
    let mut v = SVec::new();
    for (w, c) in x {
        if w.len() == k {
            add_entry(&mut v, flat(w, n), c.clone());
        }
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstOrder {
    pub associative: bool,
    pub witness: Option<String>,
    pub cocycle: bool,
    pub agree: bool,
}

/// Basis of `A ⊕ A⊗A`: `Left(i)` or `Right(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Ext {
    Left(usize),
    Right(usize, usize),
}

fn ext_mul(alg: &FinDimAlgebra, beta: &Cochain, x: Ext, y: Ext) -> (SVec, SVec) {
    let n = alg.dim();
    let mut a = SVec::new();
    let mut t = SVec::new();
    match (x, y) {
        (Ext::Left(u), Ext::Left(v)) => {
            a = alg.mul(u, v).iter().cloned().collect();
            t = beta.eval(&[u, v]).clone();
        }
        (Ext::Left(u), Ext::Right(p, q)) => {
            for (m, c) in alg.mul(u, p) {
                add_entry(&mut t, m * n + q, c.clone());
            }
        }
        (Ext::Right(p, q), Ext::Left(v)) => {
            for (m, c) in alg.mul(q, v) {
                add_entry(&mut t, p * n + m, c.clone());
            }
        }
        _ => {}
    }
    (a, t)
}

/// `(x ⋆ y) ⋆ z` or `x ⋆ (y ⋆ z)` by linearity in the composite factor.
fn ext_mul_vec(alg: &FinDimAlgebra, beta: &Cochain, x: &(SVec, SVec), y: Ext, left: bool) -> (SVec, SVec) {
    let n = alg.dim();
    let mut a = SVec::new();
    let mut t = SVec::new();
    let mut acc = |e: Ext, c: &Q| {
        let (pa, pt) = if left { ext_mul(alg, beta, e, y) } else { ext_mul(alg, beta, y, e) };
        crate::linalg::axpy(&mut a, c, &pa);
        crate::linalg::axpy(&mut t, c, &pt);
    };
    for (i, c) in &x.0 {
        acc(Ext::Left(*i), c);
    }
    for (i, c) in &x.1 {
        acc(Ext::Right(i / n, i % n), c);
    }
    (a, t)
}

/// Associativity of `⋆_β` on `A ⊕ A⊗A`, exhaustively on basis triples,
/// against the cocycle condition `bβ = 0`.
pub fn first_order(alg: &FinDimAlgebra, beta: &Cochain) -> FirstOrder {
    let n = alg.dim();
    let mut basis: Vec<Ext> = (0..n).map(Ext::Left).collect();
    for a in 0..n {
        for b in 0..n {
            basis.push(Ext::Right(a, b));
        }
    }
    let mut witness = None;
    'outer: for &x in &basis {
        for &y in &basis {
            let xy = ext_mul(alg, beta, x, y);
            for &z in &basis {
                let l = ext_mul_vec(alg, beta, &xy, z, true);
                let yz = ext_mul(alg, beta, y, z);
                let r = ext_mul_vec(alg, beta, &yz, x, false);
                let args: Vec<usize> = [x, y, z]
                    .iter()
                    .filter_map(|e| match e {
                        Ext::Left(i) => Some(*i),
                        _ => None,
                    })
                    .collect();
                if l != r && in_range(alg, &args) {
                    let f = |e: Ext| match e {
                        Ext::Left(i) => alg.labels[i].clone(),
                        Ext::Right(a, b) => format!("{}(x){}", alg.labels[a], alg.labels[b]),
                    };
                    witness = Some(format!("({}, {}, {})", f(x), f(y), f(z)));
                    break 'outer;
                }
            }
        }
    }
    let bb = coboundary(alg, beta);
    let cocycle = bb.first_difference(&Cochain::zero(n, 3, 2), |a| in_range(alg, a)).is_none();
    let associative = witness.is_none();
    FirstOrder { associative, witness, cocycle, agree: associative == cocycle }
}

#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `f` with `γ − β = b f`
    pub f: Option<Cochain>,
    /// The transported product equals `⋆_γ` on all basis pairs.
    pub transport_checked: bool,
}

/// `⋆_β ∼ ⋆_γ` iff `γ − β = b f` for some `f ∈ C¹(A, A⊗A)`; a solution
/// is verified by transporting `⋆_β` along `f̃`.
pub fn first_order_equivalence(alg: &FinDimAlgebra, beta: &Cochain, gamma: &Cochain) -> Equivalence {
    let n = alg.dim();
    let Some(f) = solve_coboundary(alg, &gamma.sub(beta)) else {
        return Equivalence { equivalent: false, f: None, transport_checked: false };
    };
    // f̃^{-1}(f̃(u) ⋆_β f̃(v)) = uv ⊕ (β(u,v) + f(u)v + uf(v) − f(uv))
    let mut ok = true;
    for u in 0..n {
        for v in 0..n {
            let mut t = beta.eval(&[u, v]).clone();
            for (i, c) in f.eval(&[u]) {
                for (m, x) in alg.mul(i % n, v) {
                    add_entry(&mut t, (i / n) * n + m, c * x);
                }
            }
            for (i, c) in f.eval(&[v]) {
                for (m, x) in alg.mul(u, i / n) {
                    add_entry(&mut t, m * n + i % n, c * x);
                }
            }
            for (m, x) in alg.mul(u, v) {
                crate::linalg::axpy(&mut t, &-x.clone(), f.eval(&[*m]));
            }
            ok &= &t == gamma.eval(&[u, v]);
        }
    }
    Equivalence { equivalent: true, f: Some(f), transport_checked: ok }
}

/// A truncated star product: `betas[m-1] = β^(m) ∈ C²(A, A^{⊗(m+1)})`.
#[derive(Clone, Debug, Serialize)]
pub struct Star {
    pub betas: Vec<Cochain>,
}

impl Star {
    pub fn order(&self) -> usize {
        self.betas.len()
    }

    /// `β'(u, v)`: `β` applied to the last factor of `u` and the first of `v`,
    /// orders `1..=N`, keeping words with at most `N + 1` factors.
    pub fn beta_prime(&self, u: &AtElem, v: &AtElem) -> AtElem {
        let n_max = self.order() + 1;
        let mut out = AtElem::new();
        for (x, c) in u {
            for (y, d) in v {
                for (m, b) in self.betas.iter().enumerate() {
                    if x.len() + y.len() + m > n_max {
                        continue;
                    }
                    let n = b.n;
                    for (o, e) in b.eval(&[*x.last().unwrap(), y[0]]) {
                        let mut w: TWord = x[..x.len() - 1].to_vec();
                        w.extend(unflat(*o, m + 2, n));
                        w.extend_from_slice(&y[1..]);
                        at_add(&mut out, w, &(c * d) * e);
                    }
                }
            }
        }
        out
    }

    /// `u ⋆ v = uv + β'(u, v)` modulo `(A_t⁺)^{N+1}`.
    pub fn star(&self, alg: &FinDimAlgebra, u: &AtElem, v: &AtElem) -> AtElem {
        let mut out = crate::tderiv::at_mul(alg, u, v, self.order() + 1);
        at_axpy(&mut out, &Q::from(1), &self.beta_prime(u, v));
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct McOrder {
    pub order: usize,
    pub holds: bool,
    pub obstruction_is_cocycle: bool,
    /// Whether some `β^(m)` solves the order-`m` equation (small algebras only).
    pub solvable: Option<bool>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub orders: Vec<McOrder>,
    pub first_failure: Option<usize>,
    pub passed: bool,
}

/// The obstruction `−Σ_{i+j=m} β^(i) ∨ β^(j)` at order `m`.
pub fn obstruction(star: &Star, m: usize) -> Option<Cochain> {
    let mut o: Option<Cochain> = None;
    for i in 1..m {
        let v = vee(&star.betas[i - 1], &star.betas[m - i - 1]);
        o = Some(match o {
            None => v.scaled(&Q::from(-1)),
            Some(x) => x.sub(&v),
        });
    }
    o
}

/// Order-by-order check of `bβ^(m) + Σ_{i+j=m} β^(i) ∨ β^(j) = 0`.
pub fn mc_check(alg: &FinDimAlgebra, star: &Star) -> McReport {
    let n = alg.dim();
    let mut orders = Vec::new();
    let mut first_failure = None;
    for m in 1..=star.order() {
        let o = obstruction(star, m).unwrap_or_else(|| Cochain::zero(n, 3, m + 1));
        let bo = coboundary(alg, &o);
        let obstruction_is_cocycle = bo.first_difference(&Cochain::zero(n, 4, m + 1), |a| in_range(alg, a)).is_none();
        let bb = coboundary(alg, &star.betas[m - 1]);
        let diff = bb.first_difference(&o, |a| in_range(alg, a));
        let holds = diff.is_none();
        let solvable = if holds {
            Some(true)
        } else if !alg.truncated && n.pow(m as u32 + 3) <= 4096 {
            Some(solve_coboundary(alg, &o).is_some())
        } else {
            None
        };
        if !holds && first_failure.is_none() {
            first_failure = Some(m);
        }
        orders.push(McOrder {
            order: m,
            holds,
            obstruction_is_cocycle,
            solvable,
            witness: diff.map(|d| format!("({})", labels(alg, &d))),
        });
    }
    McReport { passed: first_failure.is_none(), orders, first_failure }
}

/// Direct associativity of `⋆` on basis triples of `A` modulo
/// `(A_t⁺)^{N+1}`; returns the lowest t-order of a failure.
pub fn star_associativity(alg: &FinDimAlgebra, star: &Star) -> Option<(usize, String)> {
    let n = alg.dim();
    let w = |i: usize| crate::tderiv::at_word(&[i]);
    let mut worst: Option<(usize, String)> = None;
    for a in 0..n {
        for b in 0..n {
            let ab = star.star(alg, &w(a), &w(b));
            for c in 0..n {
                if !in_range(alg, &[a, b, c]) {
                    continue;
                }
                let l = star.star(alg, &ab, &w(c));
                let r = star.star(alg, &w(a), &star.star(alg, &w(b), &w(c)));
                let mut d = l;
                at_axpy(&mut d, &Q::from(-1), &r);
                if let Some(m) = d.keys().map(|k| k.len() - 1).min() {
                    if worst.as_ref().is_none_or(|(x, _)| m < *x) {
                        worst = Some((m, format!("({})", labels(alg, &[a, b, c]))));
                    }
                }
            }
        }
    }
    worst
}

/// `φ = Σ φ^(m)` with `φ^(m) ∈ C¹(A, A^{⊗(m+1)})`; the unit is sent to 0.
#[derive(Clone, Debug, Serialize)]
pub struct Gauge {
    pub phis: Vec<Cochain>,
}

impl Gauge {
    pub fn new(mut phis: Vec<Cochain>) -> Self {
        for p in phis.iter_mut() {
            p.values[0].clear();
        }
        Self { phis }
    }

    pub fn value(&self, a: usize, n_max: usize) -> AtElem {
        let mut e = AtElem::new();
        for (m, p) in self.phis.iter().enumerate() {
            if m + 2 <= n_max {
                at_axpy(&mut e, &Q::from(1), &tensor_to_at(p.eval(&[a]), m + 2, p.n));
            }
        }
        e
    }

    /// The t-derivation `φ_t` on an element of `A_t`.
    pub fn phi_t(&self, x: &AtElem, n_max: usize) -> AtElem {
        let f = |i: usize| self.value(i, n_max);
        let mut out = AtElem::new();
        for (w, c) in crate::tderiv::extend_t_elem(&f, x).expect("unit is killed") {
            if w.len() <= n_max {
                at_add(&mut out, w, c);
            }
        }
        out
    }
}

fn star_from_at(n: usize, order: usize, f: impl Fn(usize, usize) -> AtElem) -> Star {
    let betas = (1..=order)
        .map(|m| {
            let mut c = Cochain::zero(n, 2, m + 1);
            for a in 0..n {
                for b in 0..n {
                    c.values[a * n + b] = at_component(&f(a, b), m + 1, n);
                }
            }
            c
        })
        .collect();
    Star { betas }
}

/// The infinitesimal action
/// `φ·β(a₁,a₂) = φ(a₁)a₂ + a₁φ(a₂) − φ(a₁a₂) + β'(φ(a₁), a₂) + β'(a₁, φ(a₂)) − φ_t β'(a₁, a₂)`,
/// returning `β + φ·β`.
pub fn gauge(alg: &FinDimAlgebra, phi: &Gauge, star: &Star) -> Star {
    let n = alg.dim();
    let n_max = star.order() + 1;
    let w = |i: usize| crate::tderiv::at_word(&[i]);
    star_from_at(n, star.order(), |a, b| {
        let mut x = star.beta_prime(&w(a), &w(b));
        let (pa, pb) = (phi.value(a, n_max), phi.value(b, n_max));
        at_axpy(&mut x, &Q::from(1), &crate::tderiv::at_mul(alg, &pa, &w(b), n_max));
        at_axpy(&mut x, &Q::from(1), &crate::tderiv::at_mul(alg, &w(a), &pb, n_max));
        for (m, c) in alg.mul(a, b) {
            at_axpy(&mut x, &-c.clone(), &phi.value(*m, n_max));
        }
        at_axpy(&mut x, &Q::from(1), &star.beta_prime(&pa, &w(b)));
        at_axpy(&mut x, &Q::from(1), &star.beta_prime(&w(a), &pb));
        let bp = star.beta_prime(&w(a), &w(b));
        at_axpy(&mut x, &Q::from(-1), &phi.phi_t(&bp, n_max));
        x
    })
}

/// The transported product `f^{-1}(f(a) ⋆ f(b))` with `f = Id + φ_t`.
pub fn transport(alg: &FinDimAlgebra, phi: &Gauge, star: &Star) -> Star {
    let n = alg.dim();
    let n_max = star.order() + 1;
    let f = |x: &AtElem| {
        let mut y = x.clone();
        at_axpy(&mut y, &Q::from(1), &phi.phi_t(x, n_max));
        y
    };
    let f_inv = |x: &AtElem| {
        // Σ (−φ_t)^j, nilpotent since φ_t raises the t-order
        let mut out = x.clone();
        let mut term = x.clone();
        for _ in 0..n_max {
            term = phi.phi_t(&term, n_max);
            for c in term.values_mut() {
                *c = -c.clone();
            }
            if term.is_empty() {
                break;
            }
            at_axpy(&mut out, &Q::from(1), &term);
        }
        out
    };
    let w = |i: usize| crate::tderiv::at_word(&[i]);
    star_from_at(n, star.order(), |a, b| {
        let mut x = f_inv(&star.star(alg, &f(&w(a)), &f(&w(b))));
        x.retain(|k, c| k.len() > 1 && !c.is_zero());
        x
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn first_order_cases() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for a in [dual_numbers(), truncated_poly(3)] {
            let n = a.dim();
            let zero = Cochain::zero(n, 2, 2);
            let r = first_order(&a, &zero);
            assert!(r.associative && r.cocycle);
            let f = Cochain::random(n, 1, 2, (1, 2), &mut rng);
            let bf = coboundary(&a, &f);
            let r = first_order(&a, &bf);
            assert!(r.associative && r.cocycle);
            let e = first_order_equivalence(&a, &zero, &bf);
            assert!(e.equivalent && e.transport_checked);
        }
        // a non-cocycle on k[ε]: β(ε, ε) = 1⊗1
        let a = dual_numbers();
        let mut beta = Cochain::zero(2, 2, 2);
        beta.values[flat(&[1, 1], 2)].insert(0, Q::from(1));
        let r = first_order(&a, &beta);
        assert!(!r.associative && !r.cocycle && r.agree);
        assert!(r.witness.is_some());
    }

    #[test]
    fn first_order_exhaustive_agreement() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let a = dual_numbers();
        for _ in 0..20 {
            let beta = Cochain::random(2, 2, 2, (1, 3), &mut rng);
            assert!(first_order(&a, &beta).agree);
        }
    }

    fn random_mc(a: &FinDimAlgebra, rng: &mut impl Rng, order: usize) -> Star {
        // β^(m) = b(random) keeps every order solvable when lower terms vanish
        let n = a.dim();
        let mut betas = vec![coboundary(a, &Cochain::random(n, 1, 2, (1, 2), rng))];
        for m in 2..=order {
            betas.push(Cochain::zero(n, 2, m + 1));
            let s = Star { betas: betas.clone() };
            let o = obstruction(&s, m).unwrap();
            let sol = solve_coboundary(a, &o).expect("unobstructed");
            betas[m - 1] = sol;
        }
        Star { betas }
    }

    #[test]
    fn mc_matches_associativity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        let a = dual_numbers();
        let zero = Star { betas: (1..=3).map(|m| Cochain::zero(2, 2, m + 1)).collect() };
        assert!(mc_check(&a, &zero).passed);
        let s = random_mc(&a, &mut rng, 3);
        assert!(mc_check(&a, &s).passed);
        assert!(star_associativity(&a, &s).is_none());
        // perturb order 2
        let mut bad = s.clone();
        bad.betas[1] = bad.betas[1].add_scaled(&Q::from(1), &Cochain::random(2, 2, 3, (1, 3), &mut rng));
        let r = mc_check(&a, &bad);
        let direct = star_associativity(&a, &bad);
        assert_eq!(r.first_failure, direct.map(|d| d.0));
        // obstructions are cocycles while lower orders hold
        let f = r.first_failure.unwrap();
        assert!(r.orders[..f].iter().all(|o| o.obstruction_is_cocycle));
    }

    #[test]
    fn gauge_cases() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let a = dual_numbers();
        let s = random_mc(&a, &mut rng, 3);
        let none = Gauge::new(vec![Cochain::zero(2, 1, 2), Cochain::zero(2, 1, 3)]);
        assert_eq!(gauge(&a, &none, &s).betas, s.betas);
        // β = 0: the action is the coboundary of φ
        let zero = Star { betas: vec![Cochain::zero(2, 2, 2)] };
        let phi = Gauge::new(vec![Cochain::random(2, 1, 2, (1, 2), &mut rng)]);
        assert_eq!(gauge(&a, &phi, &zero).betas[0], coboundary(&a, &phi.phis[0]));
        // an order-2 gauge agrees with transport through order 3 and keeps MC
        let phi2 = Gauge::new(vec![Cochain::zero(2, 1, 2), Cochain::random(2, 1, 3, (1, 2), &mut rng)]);
        let g = gauge(&a, &phi2, &s);
        assert_eq!(g.betas, transport(&a, &phi2, &s).betas);
        assert!(mc_check(&a, &g).passed);
    }
}

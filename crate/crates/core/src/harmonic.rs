//! Harmonic decomposition `Ω̄ = Ker(Id-κ)² ⊕ Im(Id-κ)²`.
//!
//! On `Ω^n` the Karoubi operator satisfies `(κ^n - 1)(κ^{n+1} - 1) = 0`, and
//! `(z-1)²` divides that polynomial exactly once. The projector is the
//! polynomial `h(κ)` with `h ≡ 1 mod (z-1)²` and `h ≡ 0 mod g`, where
//! `g = (κ^n-1)(κ^{n+1}-1)/(z-1)²`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::blocks::BlockedSpace;
use crate::forms::{self, axpy, diff, single, Calculus, Form, Key};
use crate::linalg::LinMap;
use crate::report::Suite;
use crate::scalar::Q;

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `h` (lowest first) for degree `n ≥ 1`.
pub fn projector_poly(n: usize) -> Vec<Q> {
    if n == 0 {
        return vec![Q::one()];
    }
    let g = poly_mul(&vec![Q::one(); n], &vec![Q::one(); n + 1]);
    let nq = Q::from(n as i64);
    let g1 = &nq * &Q::from(n as i64 + 1);
    let dg1 = &g1 * &Q::from(2 * n as i64 - 1) / Q::from(2);
    let alpha = g1.recip();
    let beta = -(&dg1 / &(&g1 * &g1));
    poly_mul(&[&alpha - &beta, beta], &g)
}

/// `(z^n - 1)(z^{n+1} - 1)`.
pub fn annihilator(n: usize) -> Vec<Q> {
    let mut a = vec![Q::zero(); n + 1];
    a[0] = -Q::one();
    a[n] += Q::one();
    let mut b = vec![Q::zero(); n + 2];
    b[0] = -Q::one();
    b[n + 1] += Q::one();
    poly_mul(&a, &b)
}

pub struct Harmonic<'a> {
    pub calc: Calculus<'a>,
    polys: Mutex<HashMap<usize, Vec<Q>>>,
    cache: Mutex<HashMap<Key, Form>>,
}

impl<'a> Harmonic<'a> {
    pub fn new(calc: Calculus<'a>) -> Self {
        Self { calc, polys: Mutex::new(HashMap::new()), cache: Mutex::new(HashMap::new()) }
    }

    fn poly(&self, n: usize) -> Vec<Q> {
        self.polys.lock().unwrap().entry(n).or_insert_with(|| projector_poly(n)).clone()
    }

    /// `p(κ) f` for a homogeneous form.
    pub fn eval_poly(&self, p: &[Q], f: &Form) -> Form {
        let mut acc = Form::new();
        let mut g = f.clone();
        for (i, c) in p.iter().enumerate() {
            axpy(&mut acc, c, &g);
            if i + 1 < p.len() {
                g = self.calc.kappa(&g);
            }
        }
        acc
    }

    pub fn project_key(&self, k: &Key) -> Form {
        if let Some(f) = self.cache.lock().unwrap().get(k) {
            return f.clone();
        }
        let n = k.len() - 1;
        let f = self.eval_poly(&self.poly(n), &single(k.clone()));
        self.cache.lock().unwrap().insert(k.clone(), f.clone());
        f
    }

    pub fn clear_cache(&self) {
        self.cache.lock().unwrap().clear();
    }

    /// `P f`
    pub fn project(&self, f: &Form) -> Form {
        forms::linear(f, |k| self.project_key(k))
    }

    /// `P⊥ f = f - P f`
    pub fn complement(&self, f: &Form) -> Form {
        diff(f, &self.project(f))
    }

    /// Matrix of `P` on one block in degree `n`.
    pub fn block_matrix(&self, space: &BlockedSpace, bi: usize, n: usize) -> LinMap {
        space.blocks[bi].matrix(n, n, |k| self.project_key(k))
    }
}

fn scaled_n(f: &Form, n: usize) -> Form {
    forms::scaled(f, &Q::from(n as i64))
}

/// Checks of the harmonic decomposition on `Ω̄^n`, `n ≤ n_max`.
pub fn harmonic_suite(calc: &Calculus, n_max: usize) -> Suite {
    let h = Harmonic::new(*calc);
    let c = calc;
    let mut s = Suite::new("harmonic");
    let space = BlockedSpace::new(c, n_max, true);
    let mut ranks_ok = true;
    let mut d_acyclic = true;
    let mut perp_acyclic = true;
    for (bi, bl) in space.blocks.iter().enumerate() {
        let kappa: Vec<LinMap> = (0..=n_max).map(|n| bl.matrix(n, n, |k| c.kappa_key(k))).collect();
        let pm: Vec<LinMap> = (0..=n_max).map(|n| h.block_matrix(&space, bi, n)).collect();
        h.clear_cache();
        // b_n : degree n → n-1 and ι_n = Σ_{i<n} κ^i b_n
        let bm: Vec<LinMap> = (0..=n_max)
            .map(|n| if n == 0 { LinMap::zero(bl.dim(0), 0) } else { bl.matrix(n, n - 1, |k| c.b_key(k)) })
            .collect();
        let im: Vec<LinMap> = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    return LinMap::zero(bl.dim(0), 0);
                }
                let cols = bm[n]
                    .cols
                    .iter()
                    .map(|col| {
                        let mut acc = col.clone();
                        let mut g = col.clone();
                        for _ in 1..n {
                            g = kappa[n - 1].apply(&g);
                            crate::linalg::axpy(&mut acc, &Q::one(), &g);
                        }
                        acc
                    })
                    .collect();
                LinMap::new(bl.dim(n), bl.dim(n - 1), cols)
            })
            .collect();
        for n in 0..=n_max {
            let ann = annihilator(n);
            let nq = Q::from(n as i64);
            for (j, k) in bl.keys[n].iter().enumerate() {
                let wit = || c.fmt_key(k);
                let e = crate::linalg::unit(j);
                let pcol = &pm[n].cols[j];
                if n >= 1 {
                    let mut acc = crate::linalg::SVec::new();
                    let mut g = e.clone();
                    for (i, a) in ann.iter().enumerate() {
                        crate::linalg::axpy(&mut acc, a, &g);
                        if i + 1 < ann.len() {
                            g = kappa[n].apply(&g);
                        }
                    }
                    s.record("(kappa^n-1)(kappa^(n+1)-1)=0", acc.is_empty(), wit);
                }
                s.record("P^2=P", &pm[n].apply(pcol) == pcol, wit);
                let one_minus = crate::linalg::sub(&e, &kappa[n].cols[j]);
                let t = crate::linalg::sub(&one_minus, &kappa[n].apply(&one_minus));
                s.record("P(Id-kappa)^2=0", pm[n].apply(&t).is_empty(), wit);
                if n >= 1 {
                    let bp = bm[n].apply(pcol);
                    let ip = im[n].apply(pcol);
                    s.record("Pb=bP", pm[n - 1].apply(&bm[n].cols[j]) == bp, wit);
                    s.record("P.iota=iota.P", pm[n - 1].apply(&im[n].cols[j]) == ip, wit);
                    s.record("iota=N.b on P", ip == crate::linalg::scale(&bp, &nq), wit);
                    s.record("iota=0 on Pperp", im[n].cols[j] == ip, wit);
                }
                // d and B leave the window at the top degree, so they act on forms
                let w = single(k.clone());
                let p = bl.form(n, pcol);
                let (dw, dp) = (c.d(&w), c.d(&p));
                let (bigbw, bigbp) = (c.connes_b(&w), c.connes_b(&p));
                s.record("Pd=dP", h.project(&dw) == dp, wit);
                s.record("PB=BP", h.project(&bigbw) == bigbp, wit);
                s.record("B=(N+1)d on P", bigbp == scaled_n(&dp, n + 1), wit);
                s.record("B=0 on Pperp", bigbw == bigbp, wit);
            }
            h.clear_cache();
        }
        // P is idempotent, so rank P = trace P
        let mut perp_dim = Vec::new();
        let mut perp: Vec<LinMap> = Vec::new();
        for n in 0..=n_max {
            let tm = LinMap::identity(bl.dim(n)).sub(&kappa[n]);
            let tm = tm.compose(&tm);
            let trace: Q = pm[n].cols.iter().enumerate().filter_map(|(j, col)| col.get(&j)).fold(Q::zero(), |a, x| a + x);
            let rank_p = trace.to_usize().unwrap_or(usize::MAX);
            if rank_p.checked_add(tm.rank()) != Some(bl.dim(n)) {
                ranks_ok = false;
            }
            perp_dim.push(bl.dim(n).saturating_sub(rank_p));
            perp.push(LinMap::identity(bl.dim(n)).sub(&pm[n]));
        }
        // (Ω̄, d): H_n = dim ker d_n - rank d_{n-1}
        let dm: Vec<LinMap> = (0..n_max).map(|n| bl.matrix(n, n + 1, |k| c.d(&single(k.clone())))).collect();
        for n in 0..n_max {
            let ker = bl.dim(n) - dm[n].rank();
            let im = if n == 0 { 0 } else { dm[n - 1].rank() };
            if ker != im {
                d_acyclic = false;
            }
        }
        // (P⊥Ω̄, b): H_n = dim U_n - rank b(U_n) - rank b(U_{n+1})
        let b_rank = |n: usize| -> usize { if n == 0 { 0 } else { bm[n].compose(&perp[n]).rank() } };
        for n in 0..n_max {
            if perp_dim[n] != b_rank(n) + b_rank(n + 1) {
                perp_acyclic = false;
            }
        }
    }
    s.record("rank P + rank (Id-kappa)^2 = dim", ranks_ok, || "rank mismatch".into());
    s.record("(Omega-bar, d) acyclic", d_acyclic, || "d homology".into());
    s.record("(Pperp Omega-bar, b) acyclic", perp_acyclic, || "b homology on Pperp".into());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;

    #[test]
    fn projector_poly_properties() {
        for n in 1..6 {
            let h = projector_poly(n);
            // h(1) = 1, h'(1) = 0
            let h1: Q = h.iter().fold(Q::zero(), |a, c| a + c);
            let dh1: Q = h.iter().enumerate().fold(Q::zero(), |a, (i, c)| a + c * &Q::from(i as i64));
            assert_eq!(h1, Q::one());
            assert!(dh1.is_zero());
        }
    }

    #[test]
    fn identity_on_degree_zero() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let h = Harmonic::new(c);
        for k in c.reduced_basis(0) {
            assert_eq!(h.project_key(&k), single(k.clone()));
        }
    }

    #[test]
    fn suite_small_algebras() {
        for a in [ground_field(), dual_numbers(), truncated_poly(3)] {
            let s = harmonic_suite(&Calculus::new(&a), 4);
            assert!(s.passed(), "{:?}", s.failures());
        }
    }
}

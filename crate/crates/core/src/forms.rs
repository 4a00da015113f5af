//! Noncommutative differential forms `Ω^n A = A ⊗ Ā^{⊗n}` over a
//! finite-dimensional algebra and the operators acting on them.
//!
//! A basis form `a0 da1 … dan` is stored as the key `[a0, a1, …, an]` of
//! basis indices; `a0` may be the unit (index 0), the `ai` never are.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::findim::FinDimAlgebra;
use crate::scalar::{parity, Q};

pub type Key = SmallVec<[u16; 8]>;
pub type Form = BTreeMap<Key, Q>;

pub fn key(parts: &[usize]) -> Key {
    parts.iter().map(|&i| i as u16).collect()
}

pub fn form_degree(k: &Key) -> usize {
    k.len() - 1
}

pub fn add_term(f: &mut Form, k: Key, c: Q) {
    if c.is_zero() {
        return;
    }
    match f.entry(k) {
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

pub fn axpy(y: &mut Form, a: &Q, x: &Form) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        add_term(y, k.clone(), a * v);
    }
}

pub fn scaled(x: &Form, a: &Q) -> Form {
    let mut y = Form::new();
    axpy(&mut y, a, x);
    y
}

pub fn sum(x: &Form, y: &Form) -> Form {
    let mut r = x.clone();
    axpy(&mut r, &Q::one(), y);
    r
}

pub fn diff(x: &Form, y: &Form) -> Form {
    let mut r = x.clone();
    axpy(&mut r, &-Q::one(), y);
    r
}

pub fn single(k: Key) -> Form {
    let mut f = Form::new();
    f.insert(k, Q::one());
    f
}

/// Apply a per-key linear map to a form.
pub fn linear(f: &Form, mut op: impl FnMut(&Key) -> Form) -> Form {
    let mut out = Form::new();
    for (k, c) in f {
        let img = op(k);
        axpy(&mut out, c, &img);
    }
    out
}

/// Drop the unit component of a degree-0 form (passage to `Ω̄`).
pub fn reduce_unit(f: &Form) -> Form {
    f.iter().filter(|(k, _)| !(k.len() == 1 && k[0] == 0)).map(|(k, c)| (k.clone(), c.clone())).collect()
}

/// Operators on `Ω A` for a fixed algebra.
#[derive(Clone, Copy)]
pub struct Calculus<'a> {
    pub alg: &'a FinDimAlgebra,
}

impl<'a> Calculus<'a> {
    pub fn new(alg: &'a FinDimAlgebra) -> Self {
        Self { alg }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// `dim Ω^n`.
    pub fn omega_dim(&self, n: usize) -> usize {
        let d = self.dim();
        d * (d - 1).pow(n as u32)
    }

    /// `dim Ω̄^n`.
    pub fn reduced_dim(&self, n: usize) -> usize {
        if n == 0 {
            self.dim() - 1
        } else {
            self.omega_dim(n)
        }
    }

    /// Basis of `Ω^n` in lexicographic key order.
    pub fn basis(&self, n: usize) -> Vec<Key> {
        let d = self.dim();
        let mut out = Vec::with_capacity(self.omega_dim(n));
        let mut cur: Key = SmallVec::new();
        fn rec(d: usize, n: usize, cur: &mut Key, out: &mut Vec<Key>) {
            if cur.len() == n + 1 {
                out.push(cur.clone());
                return;
            }
            let lo = if cur.is_empty() { 0 } else { 1 };
            for i in lo..d {
                cur.push(i as u16);
                rec(d, n, cur, out);
                cur.pop();
            }
        }
        rec(d, n, &mut cur, &mut out);
        out
    }

    /// Basis of `Ω̄^n`.
    pub fn reduced_basis(&self, n: usize) -> Vec<Key> {
        let mut b = self.basis(n);
        if n == 0 {
            b.retain(|k| k[0] != 0);
        }
        b
    }

    fn mul(&self, i: u16, j: u16) -> &[(usize, Q)] {
        self.alg.mul(i as usize, j as usize)
    }

    pub fn d_key(&self, k: &Key) -> Option<Key> {
        if k[0] == 0 {
            return None;
        }
        let mut out: Key = SmallVec::with_capacity(k.len() + 1);
        out.push(0);
        out.extend_from_slice(k);
        Some(out)
    }

    /// de Rham differential.
    pub fn d(&self, f: &Form) -> Form {
        let mut out = Form::new();
        for (k, c) in f {
            if let Some(dk) = self.d_key(k) {
                add_term(&mut out, dk, c.clone());
            }
        }
        out
    }

    /// `c · (a0 da1 … dan)`
    pub fn left_mul_key(&self, c: u16, k: &Key) -> Form {
        let mut out = Form::new();
        for (m, x) in self.mul(c, k[0]) {
            let mut nk = k.clone();
            nk[0] = *m as u16;
            add_term(&mut out, nk, x.clone());
        }
        out
    }

    /// `(a0 da1 … dan) · c`, rewritten with `(da)b = d(ab) - a db`.
    pub fn right_mul_key(&self, k: &Key, c: u16) -> Form {
        let mut out = Form::new();
        if c == 0 {
            out.insert(k.clone(), Q::one());
            return out;
        }
        let n = k.len() - 1;
        if n == 0 {
            for (m, x) in self.mul(k[0], c) {
                add_term(&mut out, key(&[*m]), x.clone());
            }
            return out;
        }
        // (-1)^n a0a1 da2 … dan dc
        let s0 = parity(n);
        for (m, x) in self.mul(k[0], k[1]) {
            let mut nk: Key = SmallVec::with_capacity(n + 1);
            nk.push(*m as u16);
            nk.extend_from_slice(&k[2..]);
            nk.push(c);
            add_term(&mut out, nk, &s0 * x);
        }
        // (-1)^{n-i} a0 da1 … d(ai a(i+1)) … dc
        for i in 1..=n {
            let s = parity(n - i);
            let next = if i == n { c } else { k[i + 1] };
            for (m, x) in self.mul(k[i], next) {
                if *m == 0 {
                    continue;
                }
                let mut nk: Key = SmallVec::with_capacity(n + 1);
                nk.extend_from_slice(&k[..i]);
                nk.push(*m as u16);
                if i < n {
                    nk.extend_from_slice(&k[i + 2..]);
                    nk.push(c);
                }
                add_term(&mut out, nk, &s * x);
            }
        }
        out
    }

    pub fn left_mul(&self, c: u16, f: &Form) -> Form {
        linear(f, |k| self.left_mul_key(c, k))
    }

    pub fn right_mul(&self, f: &Form, c: u16) -> Form {
        linear(f, |k| self.right_mul_key(k, c))
    }

    /// Product of two basis forms.
    pub fn mul_keys(&self, k1: &Key, k2: &Key) -> Form {
        let head = self.right_mul_key(k1, k2[0]);
        let mut out = Form::new();
        for (k, c) in head {
            let mut nk = k;
            nk.extend_from_slice(&k2[1..]);
            add_term(&mut out, nk, c);
        }
        out
    }

    /// Product in the DG algebra `Ω A`.
    pub fn mul_forms(&self, f: &Form, g: &Form) -> Form {
        let mut out = Form::new();
        for (k1, c1) in f {
            for (k2, c2) in g {
                let p = self.mul_keys(k1, k2);
                axpy(&mut out, &(c1 * c2), &p);
            }
        }
        out
    }

    /// Graded commutator `[f, g]` of homogeneous forms.
    pub fn supercommutator(&self, f: &Form, g: &Form) -> Form {
        let (Some(p), Some(q)) = (f.keys().next(), g.keys().next()) else {
            return Form::new();
        };
        let s = parity(form_degree(p) * form_degree(q));
        let mut out = self.mul_forms(f, g);
        axpy(&mut out, &-s, &self.mul_forms(g, f));
        out
    }

    /// Hochschild boundary: `α da ↦ (-1)^{deg α} [α, a]`.
    pub fn b_key(&self, k: &Key) -> Form {
        let n = k.len() - 1;
        if n == 0 {
            return Form::new();
        }
        let alpha: Key = k[..n].into();
        let a = k[n];
        let mut out = self.right_mul_key(&alpha, a);
        axpy(&mut out, &-Q::one(), &self.left_mul_key(a, &alpha));
        if (n - 1) % 2 == 1 {
            out = scaled(&out, &-Q::one());
        }
        out
    }

    pub fn b(&self, f: &Form) -> Form {
        linear(f, |k| self.b_key(k))
    }

    /// Karoubi operator: `α da ↦ (-1)^{deg α} da · α`, identity on `Ω^0`.
    pub fn kappa_key(&self, k: &Key) -> Form {
        let n = k.len() - 1;
        let mut out = Form::new();
        if n == 0 {
            out.insert(k.clone(), Q::one());
            return out;
        }
        let s = parity(n - 1);
        let an = k[n];
        // d(an a0) da1 … da(n-1)
        for (m, x) in self.mul(an, k[0]) {
            if *m == 0 {
                continue;
            }
            let mut nk: Key = SmallVec::with_capacity(n + 1);
            nk.push(0);
            nk.push(*m as u16);
            nk.extend_from_slice(&k[1..n]);
            add_term(&mut out, nk, &s * x);
        }
        // - an da0 da1 … da(n-1)
        if k[0] != 0 {
            let mut nk: Key = SmallVec::with_capacity(n + 1);
            nk.push(an);
            nk.extend_from_slice(&k[..n]);
            add_term(&mut out, nk, -s.clone());
        }
        out
    }

    pub fn kappa(&self, f: &Form) -> Form {
        linear(f, |k| self.kappa_key(k))
    }

    pub fn kappa_pow(&self, f: &Form, m: usize) -> Form {
        let mut g = f.clone();
        for _ in 0..m {
            g = self.kappa(&g);
        }
        g
    }

    /// `Σ_{i<m} κ^i f`
    pub fn kappa_sum(&self, f: &Form, m: usize) -> Form {
        let mut acc = Form::new();
        let mut g = f.clone();
        for i in 0..m {
            axpy(&mut acc, &Q::one(), &g);
            if i + 1 < m {
                g = self.kappa(&g);
            }
        }
        acc
    }

    /// Connes' differential `B = Σ_{i=0}^{n} κ^i d` on reduced forms.
    pub fn connes_b(&self, f: &Form) -> Form {
        let Some(k) = f.keys().next() else { return Form::new() };
        let n = form_degree(k);
        let df = self.d(f);
        self.kappa_sum(&df, n + 1)
    }

    /// `ι_Δ = (1 + κ + … + κ^{n-1}) b` on `Ω^n`.
    pub fn iota_delta_fast(&self, f: &Form) -> Form {
        let Some(k) = f.keys().next() else { return Form::new() };
        let n = form_degree(k);
        if n == 0 {
            return Form::new();
        }
        self.kappa_sum(&self.b(f), n)
    }

    /// `ι_Δ(a0 da1…dan) = Σ_k ε_k ad a_k (da(k+1)…dan a0 da1…da(k-1))` with
    /// the graded cyclic sign `ε_k = (-1)^{(k-1)(n-k+1)+1}`.
    pub fn iota_delta_adjoint_key(&self, k: &Key) -> Form {
        self.adjoint_sum(k, |j, n| parity((j - 1) * (n - j + 1) + 1))
    }

    /// Same sum with the alternating sign `(-1)^k`; agrees with the cyclic
    /// sign only for `n = 1` and even `n`.
    pub fn iota_delta_alternating_key(&self, k: &Key) -> Form {
        self.adjoint_sum(k, |j, _| parity(j))
    }

    fn adjoint_sum(&self, k: &Key, sign: impl Fn(usize, usize) -> Q) -> Form {
        let n = k.len() - 1;
        let mut out = Form::new();
        for j in 1..=n {
            let mut head: Key = SmallVec::new();
            head.push(0);
            head.extend_from_slice(&k[j + 1..]);
            let x0 = self.right_mul_key(&head, k[0]);
            let mut x = Form::new();
            for (hk, c) in x0 {
                let mut nk = hk;
                nk.extend_from_slice(&k[1..j]);
                add_term(&mut x, nk, c);
            }
            let mut ad = self.left_mul(k[j], &x);
            axpy(&mut ad, &-Q::one(), &self.right_mul(&x, k[j]));
            axpy(&mut out, &sign(j, n), &ad);
        }
        out
    }

    pub fn iota_delta_adjoint(&self, f: &Form) -> Form {
        linear(f, |k| self.iota_delta_adjoint_key(k))
    }

    /// Reduced contraction with `Δ`, computed by both formulas.
    pub fn iota_delta(&self, f: &Form) -> Result<Form> {
        let a = self.iota_delta_fast(f);
        let b = self.iota_delta_adjoint(f);
        if a != b {
            return Err(Error::invariant(format!(
                "contraction formulas disagree on {}",
                self.fmt_form(f)
            )));
        }
        Ok(a)
    }

    pub fn fmt_key(&self, k: &Key) -> String {
        let l = &self.alg.labels;
        let mut parts = Vec::new();
        if k[0] != 0 || k.len() == 1 {
            parts.push(l[k[0] as usize].clone());
        }
        for &a in &k[1..] {
            parts.push(format!("d({})", l[a as usize]));
        }
        parts.join(" ")
    }

    pub fn fmt_form(&self, f: &Form) -> String {
        if f.is_empty() {
            return "0".into();
        }
        f.iter()
            .map(|(k, c)| format!("{} {}", crate::scalar::fmt_q(c), self.fmt_key(k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parse a basis form written as labels: `["x", "y", "x*y"]` is `x d(y) d(xy)`.
    pub fn key_from_labels(&self, labels: &[&str]) -> Option<Key> {
        let idx: Option<Vec<usize>> =
            labels.iter().map(|s| self.alg.labels.iter().position(|l| l == s)).collect();
        let idx = idx?;
        if idx[1..].contains(&0) {
            return None;
        }
        Some(key(&idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;
    use crate::scalar::q;

    fn f(c: &Calculus, terms: &[(i64, &[&str])]) -> Form {
        let mut out = Form::new();
        for (x, labels) in terms {
            add_term(&mut out, c.key_from_labels(labels).unwrap(), q(*x));
        }
        out
    }

    #[test]
    fn d_examples() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        assert_eq!(c.d(&f(&c, &[(1, &["x"])])), f(&c, &[(1, &["1", "x"])]));
        assert!(c.d(&f(&c, &[(1, &["1", "x"])])).is_empty());
        assert_eq!(c.d(&f(&c, &[(1, &["x", "y"])])), f(&c, &[(1, &["1", "x", "y"])]));
    }

    #[test]
    fn b_examples() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        assert_eq!(c.b(&f(&c, &[(1, &["x", "y"])])), f(&c, &[(1, &["x*y"]), (-1, &["y*x"])]));
        assert!(c.b(&f(&c, &[(1, &["x"])])).is_empty());
        let expect = f(&c, &[(1, &["y", "x"]), (1, &["x", "y"]), (-1, &["1", "x*y"])]);
        assert_eq!(c.b(&f(&c, &[(1, &["1", "x", "y"])])), expect);
    }

    #[test]
    fn kappa_examples() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let x = f(&c, &[(1, &["x"])]);
        assert_eq!(c.kappa(&x), x);
        assert_eq!(c.kappa(&f(&c, &[(1, &["1", "x", "y"])])), f(&c, &[(-1, &["1", "y", "x"])]));
        let w = f(&c, &[(1, &["x", "y"])]);
        assert_eq!(c.kappa(&w), f(&c, &[(1, &["1", "y*x"]), (-1, &["y", "x"])]));
        // oracle: bd + db = Id - κ
        let lhs = sum(&c.b(&c.d(&w)), &c.d(&c.b(&w)));
        assert_eq!(lhs, diff(&w, &c.kappa(&w)));
    }

    #[test]
    fn connes_examples() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let x = f(&c, &[(1, &["x"])]);
        assert_eq!(c.connes_b(&x), f(&c, &[(1, &["1", "x"])]));
        let w = f(&c, &[(1, &["x", "y"])]);
        assert_eq!(c.connes_b(&w), f(&c, &[(1, &["1", "x", "y"]), (-1, &["1", "y", "x"])]));
        assert!(c.connes_b(&c.connes_b(&x)).is_empty());
    }

    #[test]
    fn iota_examples() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let w = f(&c, &[(1, &["x", "y"])]);
        assert_eq!(c.iota_delta(&w).unwrap(), f(&c, &[(1, &["x*y"]), (-1, &["y*x"])]));
        assert!(c.iota_delta(&f(&c, &[(1, &["1", "x"])])).unwrap().is_empty());
        let dxdy = f(&c, &[(1, &["1", "x", "y"])]);
        assert_eq!(c.iota_delta(&dxdy).unwrap(), f(&c, &[(1, &["1", "y*x"]), (-1, &["1", "x*y"])]));
    }

    #[test]
    fn alternating_sign_differs_in_odd_degree() {
        let a = truncated_poly(3);
        let c = Calculus::new(&a);
        let k = c.key_from_labels(&["1", "x", "x", "x"]).unwrap();
        let fast = c.iota_delta_fast(&single(k.clone()));
        assert_eq!(c.iota_delta_adjoint_key(&k), fast);
        assert_ne!(c.iota_delta_alternating_key(&k), fast);
        for n in [1, 2, 4] {
            for k in c.basis(n) {
                assert_eq!(c.iota_delta_alternating_key(&k), c.iota_delta_adjoint_key(&k));
            }
        }
    }

    #[test]
    fn right_mul_is_associative_action() {
        let a = free_xy(3);
        let c = Calculus::new(&a);
        let w = f(&c, &[(1, &["x", "y", "x"])]);
        for i in 1..a.dim() as u16 {
            for j in 1..a.dim() as u16 {
                let lhs = c.right_mul(&c.right_mul(&w, i), j);
                let ij = a.mul(i as usize, j as usize);
                let mut rhs = Form::new();
                for (m, x) in ij {
                    axpy(&mut rhs, x, &c.right_mul(&w, *m as u16));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn basis_dims() {
        let a = dual_numbers();
        let c = Calculus::new(&a);
        for n in 0..4 {
            assert_eq!(c.basis(n).len(), c.omega_dim(n));
        }
        assert_eq!(c.reduced_basis(0).len(), 1);
    }
}

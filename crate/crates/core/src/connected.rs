//! Low-degree de Rham structure of connected algebras, weight by weight.
//!
//! Every operator preserves total weight, and below the cap a weight piece
//! of a truncated algebra agrees with that of the untruncated one, so the
//! comparisons here are exact in each weight `1..=w_max`.

use std::collections::HashMap;

use serde::Serialize;

use crate::findim::FinDimAlgebra;
use crate::forms::{diff, single, Calculus, Form, Key};
use crate::linalg::{Echelon, SVec};
use crate::report::Suite;

/// Keys of `Ω^n` of total weight exactly `w`.
pub fn weighted_keys(alg: &FinDimAlgebra, n: usize, w: usize) -> Vec<Key> {
    let wt = |i: usize| alg.weight(i).unwrap_or(0);
    let mut out = Vec::new();
    let mut cur: Vec<u16> = Vec::new();
    fn rec(alg: &FinDimAlgebra, wt: &dyn Fn(usize) -> usize, n: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Key>) {
        if cur.len() == n + 1 {
            if left == 0 {
                out.push(Key::from_slice(cur));
            }
            return;
        }
        let start = if cur.is_empty() { 0 } else { 1 };
        for i in start..alg.dim() {
            let x = wt(i);
            if x <= left {
                cur.push(i as u16);
                rec(alg, wt, n, left - x, cur, out);
                cur.pop();
            }
        }
    }
    rec(alg, &wt, n, w, &mut cur, &mut out);
    out
}

struct Piece {
    keys: Vec<Vec<Key>>,
    index: Vec<HashMap<Key, usize>>,
}

impl Piece {
    fn new(alg: &FinDimAlgebra, top: usize, w: usize) -> Self {
        let keys: Vec<Vec<Key>> = (0..=top).map(|n| weighted_keys(alg, n, w)).collect();
        let index = keys.iter().map(|ks| ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
        Self { keys, index }
    }

    fn coords(&self, n: usize, f: &Form) -> SVec {
        f.iter().map(|(k, c)| (self.index[n][k], c.clone())).collect()
    }

    fn image(&self, n: usize, m: usize, op: impl Fn(&Key) -> Form) -> Vec<SVec> {
        self.keys[n].iter().map(|k| self.coords(m, &op(k))).collect()
    }
}

/// Dimensions of one weight piece.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HamWeight {
    pub weight: usize,
    pub dr: Vec<usize>,
    pub closed1: usize,
    pub exact1: usize,
    pub closed2: usize,
    pub d1_rank: usize,
    pub commutators: usize,
    pub hh: Vec<usize>,
    pub kernel_d0: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HamReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub weights: Vec<HamWeight>,
    pub suite: Suite,
}

fn weight_piece(calc: &Calculus, w: usize) -> HamWeight {
    let alg = calc.alg;
    let p = Piece::new(alg, 4, w);
    let dim = |n: usize| p.keys[n].len();
    // relations bΩ^{n+1} + (1-κ)Ω^n for n ≤ 3
    let rel: Vec<Echelon> = (0..=3)
        .map(|n| {
            let mut e = Echelon::from_vectors(&p.image(n + 1, n, |k| calc.b_key(k)));
            for v in p.image(n, n, |k| diff(&single(k.clone()), &calc.kappa_key(k))) {
                e.insert(&v);
            }
            e
        })
        .collect();
    let dr: Vec<usize> = (0..=3).map(|n| dim(n) - rel[n].rank()).collect();
    // rank of the induced d: DR^n → DR^{n+1}
    let d_rank = |n: usize| -> usize {
        let mut e = rel[n + 1].clone();
        for v in p.image(n, n + 1, |k| calc.d(&single(k.clone()))) {
            e.insert(&v);
        }
        e.rank() - rel[n + 1].rank()
    };
    let (r0, r1, r2) = (d_rank(0), d_rank(1), d_rank(2));
    // Hochschild homology of the weight piece, degrees 0..=3
    let b_rank = |n: usize| -> usize {
        if n == 0 {
            0
        } else {
            Echelon::from_vectors(&p.image(n, n - 1, |k| calc.b_key(k))).rank()
        }
    };
    let hh = (0..=3).map(|n| dim(n) - b_rank(n) - b_rank(n + 1)).collect();
    // [A, A] in weight w
    let mut comm = Echelon::new();
    let wt = |i: usize| alg.weight(i).unwrap_or(0);
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            if wt(i) + wt(j) != w {
                continue;
            }
            let mut v: SVec = alg.mul(i, j).iter().cloned().collect();
            for (k, c) in alg.mul(j, i) {
                crate::linalg::add_entry(&mut v, *k, -c.clone());
            }
            comm.insert(&v);
        }
    }
    HamWeight {
        weight: w,
        closed1: dr[1] - r1,
        exact1: r0,
        closed2: dr[2] - r2,
        d1_rank: r1,
        commutators: comm.rank(),
        kernel_d0: dr[0] - r0,
        hh,
        dr,
    }
}

/// Connectedness and the `(DR²)_closed ≅ [A, A]` comparison in weights
/// `1..=w_max` (default: the cap of a truncated algebra, else 4).
pub fn verify_connected_ham(calc: &Calculus, w_max: Option<usize>) -> HamReport {
    let alg = calc.alg;
    let mut suite = Suite::new("connected");
    if alg.weights.is_none() {
        return HamReport { applicable: false, reason: Some("algebra carries no weight grading".into()), weights: vec![], suite };
    }
    let w_max = w_max.unwrap_or_else(|| if alg.truncated { alg.cap.unwrap_or(4) } else { 4 });
    let weights: Vec<HamWeight> = (1..=w_max).map(|w| weight_piece(calc, w)).collect();
    if let Some(h) = weights.iter().find(|h| h.kernel_d0 != 0) {
        return HamReport {
            applicable: false,
            reason: Some(format!("not connected: ker(d: DR0 -> DR1) nonzero in weight {}", h.weight)),
            weights,
            suite,
        };
    }
    if let Some(h) = weights.iter().find(|h| h.hh[2] != 0) {
        return HamReport {
            applicable: false,
            reason: Some(format!("H2(A,A) nonzero in weight {}", h.weight)),
            weights,
            suite,
        };
    }
    for h in &weights {
        let wit = || format!("weight {}: {:?}", h.weight, h);
        suite.record("dim (DR2)closed = dim [A,A]", h.closed2 == h.commutators, wit);
        suite.record("(DR1)closed = (DR1)exact", h.closed1 == h.exact1, wit);
        suite.record("dim (DR1)exact = dim H1(A,A)", h.exact1 == h.hh[1], wit);
        suite.record("d: DR1 -> (DR2)closed onto", h.d1_rank == h.closed2, wit);
    }
    HamReport { applicable: true, reason: None, weights, suite }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;

    #[test]
    fn weighted_key_counts() {
        let a = free_xy(3);
        // 1 d(w) with |w| = 2, or g dh with generators g, h
        assert_eq!(weighted_keys(&a, 1, 2).len(), 4 + 4);
        assert_eq!(weighted_keys(&a, 4, 3).len(), 0);
    }

    #[test]
    fn free_algebra_matches() {
        let a = free_xy(3);
        let r = verify_connected_ham(&Calculus::new(&a), None);
        assert!(r.applicable, "{:?}", r.reason);
        assert!(r.suite.passed(), "{:?}", r.suite.failures());
        // [A, A] in weight 2 is spanned by xy - yx
        assert_eq!(r.weights[1].commutators, 1);
    }

    #[test]
    fn ground_field_trivial() {
        let a = ground_field();
        let r = verify_connected_ham(&Calculus::new(&a), None);
        assert!(r.applicable && r.suite.passed());
        assert!(r.weights.iter().all(|h| h.dr.iter().all(|d| *d == 0)));
    }

    #[test]
    fn dual_numbers_inapplicable() {
        let a = dual_numbers();
        let r = verify_connected_ham(&Calculus::new(&a), None);
        assert!(!r.applicable);
        assert!(r.reason.unwrap().contains("H2"));
    }
}

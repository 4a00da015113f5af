//! Cyclic tensor words of forms: `α_1 t α_2 t … α_p t` up to rotation,
//! with `d` acting slotwise and `i_Δ(da) = t a − a t` cutting a slot.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::forms::{form_degree, key, Calculus, Form, Key};
use crate::scalar::{parity, Q};

pub type Slots = Vec<Key>;

/// Element of `(ΩA)^{⊗p}_cyc`, stored on canonical representatives.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExtendedPiece {
    pub terms: BTreeMap<Slots, Q>,
}

fn degs(w: &Slots) -> Vec<usize> {
    w.iter().map(form_degree).collect()
}

/// Rotate the last slot to the front, with the Koszul sign.
fn rotate(w: &Slots) -> (Slots, Q) {
    let p = w.len();
    let last = form_degree(&w[p - 1]);
    let rest: usize = w[..p - 1].iter().map(form_degree).sum();
    let mut out = Vec::with_capacity(p);
    out.push(w[p - 1].clone());
    out.extend_from_slice(&w[..p - 1]);
    (out, parity(last * rest))
}

/// Minimal rotation under (slot degrees, keys) order, or `None` when a
/// rotation fixes the word with sign −1.
pub fn canonical(w: &Slots) -> Option<(Slots, Q)> {
    let mut cur = w.clone();
    let mut sign = Q::one();
    let mut best: Option<(Vec<usize>, Slots, Q)> = None;
    for _ in 0..w.len() {
        let d = degs(&cur);
        match &best {
            Some((bd, bw, bs)) if (bd, bw) == (&d, &cur) => {
                if bs != &sign {
                    return None;
                }
            }
            Some((bd, bw, _)) if (bd, bw) <= (&d, &cur) => {}
            _ => best = Some((d, cur.clone(), sign.clone())),
        }
        let (next, s) = rotate(&cur);
        cur = next;
        sign *= s;
    }
    // `cur` is back to `w`; a full turn carries the sign of the cycle
    if sign != Q::one() {
        return None;
    }
    best.map(|(_, w, s)| (w, s))
}

impl ExtendedPiece {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: Slots, c: Q) {
        if c.is_zero() {
            return;
        }
        let Some((w, s)) = canonical(&w) else { return };
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += &c * &s;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn axpy(&mut self, a: &Q, x: &Self) {
        for (w, c) in &x.terms {
            self.add(w.clone(), a * c);
        }
    }

    pub fn single(w: Slots) -> Self {
        let mut e = Self::new();
        e.add(w, Q::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn fmt(&self, calc: &Calculus) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let body = w.iter().map(|k| calc.fmt_key(k)).collect::<Vec<_>>().join(" t ");
                format!("{}*({body} t)", crate::scalar::fmt_q(c))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Replace slot `i` of `w` by each term of `f` (a form) or by a pair of
/// slots, accumulating with coefficient `c`.
fn splice(out: &mut ExtendedPiece, w: &Slots, i: usize, repl: &[(Vec<Key>, Q)], c: &Q) {
    for (ks, x) in repl {
        let mut nw = w[..i].to_vec();
        nw.extend(ks.iter().cloned());
        nw.extend_from_slice(&w[i + 1..]);
        out.add(nw, c * x);
    }
}

fn form_terms(f: Form) -> Vec<(Vec<Key>, Q)> {
    f.into_iter().map(|(k, c)| (vec![k], c)).collect()
}

pub fn extended_d(calc: &Calculus, x: &ExtendedPiece) -> ExtendedPiece {
    let mut out = ExtendedPiece::new();
    for (w, c) in &x.terms {
        let mut before = 0;
        for i in 0..w.len() {
            let df = calc.d(&crate::forms::single(w[i].clone()));
            splice(&mut out, w, i, &form_terms(df), &(c * &parity(before)));
            before += form_degree(&w[i]);
        }
    }
    out
}

/// `i_Δ` on one slot `a_0 da_1 … da_n`: the sum over `j` of
/// `(-1)^{j-1} (a_0 da_1…da_{j-1}) t (a_j da_{j+1}…) − (a_0…da_{j-1}·a_j) t (da_{j+1}…)`.
pub fn slot_i_delta(calc: &Calculus, k: &Key) -> Vec<(Vec<Key>, Q)> {
    let n = k.len() - 1;
    let mut out = Vec::new();
    for j in 1..=n {
        let s = parity(j - 1);
        let left = key(&k[..j].iter().map(|x| *x as usize).collect::<Vec<_>>());
        let right = key(&k[j..].iter().map(|x| *x as usize).collect::<Vec<_>>());
        out.push((vec![left.clone(), right], s.clone()));
        let mut tail = vec![0usize];
        tail.extend(k[j + 1..].iter().map(|x| *x as usize));
        let tail = key(&tail);
        for (l, c) in calc.right_mul_key(&left, k[j]) {
            out.push((vec![l, tail.clone()], -(&s * &c)));
        }
    }
    out
}

pub fn extended_i_delta(calc: &Calculus, x: &ExtendedPiece) -> ExtendedPiece {
    let mut out = ExtendedPiece::new();
    for (w, c) in &x.terms {
        let mut before = 0;
        for i in 0..w.len() {
            splice(&mut out, w, i, &slot_i_delta(calc, &w[i]), &(c * &parity(before)));
            before += form_degree(&w[i]);
        }
    }
    out
}

/// Close a two-slot word back into one form: `α t β ↦ (-1)^{|α||β|} β α`.
pub fn reclose(calc: &Calculus, x: &ExtendedPiece) -> Form {
    let mut out = Form::new();
    for (w, c) in &x.terms {
        if w.len() != 2 {
            continue;
        }
        let s = parity(form_degree(&w[0]) * form_degree(&w[1]));
        crate::forms::axpy(&mut out, &(c * &s), &calc.mul_keys(&w[1], &w[0]));
    }
    out
}

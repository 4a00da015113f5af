//! Reduced contraction and Lie derivative along a double derivation.

use num_traits::One;

use crate::error::{Error, Result};
use crate::forms::{add_term, axpy, key, linear, scaled, sum, Calculus, Form, Key};
use crate::quotient::{dr_space, DrSpace};
use crate::report::Suite;
use crate::scalar::{parity, Q};
use crate::tderiv::{check_double_derivation, DoubleDerivation};

/// A double derivation that passed `check_double_derivation`.
pub struct Contraction<'a> {
    pub calc: Calculus<'a>,
    pub theta: DoubleDerivation,
}

impl<'a> Contraction<'a> {
    pub fn new(calc: Calculus<'a>, theta: DoubleDerivation) -> Result<Self> {
        let s = check_double_derivation(calc.alg, &theta);
        if let Some(f) = s.failures().first() {
            return Err(Error::input(format!(
                "not a double derivation: {} fails on {}",
                f.name,
                f.witness.clone().unwrap_or_default()
            )));
        }
        Ok(Self { calc, theta })
    }

    /// Sum over k of `(-1)^{(k-1)(n-k+1)} Θ''(a_k) · da_{k+1}…da_n · a_0 · da_1…da_{k-1} · Θ'(a_k)`.
    pub fn iota_printed_key(&self, k: &Key) -> Form {
        let c = &self.calc;
        let n = k.len() - 1;
        let mut out = Form::new();
        for j in 1..=n {
            let mut tail: Vec<usize> = vec![0];
            tail.extend(k[j + 1..].iter().map(|x| *x as usize));
            let head = c.right_mul_key(&key(&tail), k[0]);
            let mut mid: Vec<usize> = vec![0];
            mid.extend(k[1..j].iter().map(|x| *x as usize));
            let body = c.mul_forms(&head, &crate::forms::single(key(&mid)));
            let mut term = Form::new();
            for (p, q, v) in self.theta.value(k[j] as usize) {
                let f = c.left_mul(*q as u16, &c.right_mul(&body, *p as u16));
                axpy(&mut term, v, &f);
            }
            axpy(&mut out, &parity((j - 1) * (n - j + 1)), &term);
        }
        out
    }

    pub fn iota_printed(&self, f: &Form) -> Form {
        linear(f, |k| self.iota_printed_key(k))
    }

    /// Contraction normalized so that `Δ` gives `ι_Δ`.
    pub fn iota(&self, f: &Form) -> Form {
        scaled(&self.iota_printed(f), &-Q::one())
    }

    /// `ℒ_Θ = d ι_Θ + ι_Θ d`
    pub fn lie(&self, f: &Form) -> Form {
        let c = &self.calc;
        sum(&c.d(&self.iota(f)), &self.iota(&c.d(f)))
    }
}

fn in_dr(dr: &[DrSpace], f: &Form) -> bool {
    match f.keys().next() {
        None => true,
        Some(k) => dr[k.len() - 1].quotient.is_zero(f),
    }
}

/// Checks on every DR basis class of degree `1..=n_max`:
/// `Δ` reproduces `ι_Δ`, `ℒ_Δ` vanishes in DR, `ℒ d = d ℒ`, and
/// contractions along `thetas` anticommute in DR.
pub fn contraction_suite(calc: &Calculus, thetas: &[DoubleDerivation], n_max: usize) -> Result<Suite> {
    let mut s = Suite::new("contraction");
    let dr: Vec<DrSpace> = (0..=n_max).map(|n| dr_space(calc, n)).collect();
    let delta = Contraction::new(*calc, DoubleDerivation::delta(calc.alg))?;
    let cs = thetas.iter().map(|t| Contraction::new(*calc, t.clone())).collect::<Result<Vec<_>>>()?;
    for n in 1..=n_max {
        for i in 0..dr[n].dim() {
            let w = dr[n].section(calc, i);
            let fmt = || calc.fmt_form(&w);
            s.record("iota_Theta(Delta) = iota_Delta", delta.iota(&w) == calc.iota_delta_fast(&w), fmt);
            s.record("L_Delta = 0 in DR", in_dr(&dr, &delta.lie(&w)), fmt);
            for c in &cs {
                s.record("L_Theta d = d L_Theta", c.lie(&calc.d(&w)) == calc.d(&c.lie(&w)), fmt);
            }
            if n >= 2 {
                for (a, x) in cs.iter().enumerate() {
                    for y in &cs[a..] {
                        let mut z = x.iota(&y.iota(&w));
                        axpy(&mut z, &Q::one(), &y.iota(&x.iota(&w)));
                        s.record("iota_Theta iota_Phi + iota_Phi iota_Theta = 0 in DR", in_dr(&dr, &z), fmt);
                    }
                }
            }
        }
    }
    Ok(s)
}

/// `iota_Theta` of a single basis key, for reporting.
pub fn iota_key(c: &Contraction, k: &Key) -> Form {
    let mut f = Form::new();
    add_term(&mut f, k.clone(), Q::one());
    c.iota(&f)
}

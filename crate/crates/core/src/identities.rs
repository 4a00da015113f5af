//! Exhaustive operator identity checks on basis forms.

use num_traits::One;

use crate::findim::FinDimAlgebra;
use crate::forms::{axpy, diff, reduce_unit, single, sum, Calculus, Form};
use crate::report::Suite;
use crate::scalar::Q;

/// Check every operator identity on every basis element of `Ω^n`, `n ≤ n_max`.
pub fn operator_identities(alg: &FinDimAlgebra, n_max: usize) -> Suite {
    let c = Calculus::new(alg);
    let mut s = Suite::new("identities");
    for n in 0..=n_max {
        for k in c.basis(n) {
            check_key(&c, &k, n, &mut s);
        }
    }
    s
}

fn check_key(c: &Calculus, k: &crate::forms::Key, n: usize, s: &mut Suite) {
    let w = single(k.clone());
    let wit = || c.fmt_key(k);
    let dw = c.d(&w);
    let bw = c.b(&w);
    let kw = c.kappa(&w);

    let lhs = sum(&c.b(&dw), &c.d(&bw));
    s.record("bd+db=Id-kappa", lhs == diff(&w, &kw), wit);

    // κ^n - Id = b κ^n d and κ^{n+1} d = d
    let kn = c.kappa_pow(&w, n);
    let knd = c.kappa_pow(&dw, n);
    s.record("kappa^n-Id=b.kappa^n.d", diff(&kn, &w) == c.b(&knd), wit);
    s.record("kappa^(n+1).d=d", c.kappa(&knd) == dw, wit);

    s.record("d^2=0", c.d(&dw).is_empty(), wit);
    s.record("b^2=0", c.b(&bw).is_empty(), wit);

    let unit0 = n == 0 && k[0] == 0;
    if !unit0 {
        let bb = c.connes_b(&w);
        s.record("B^2=0", c.connes_b(&bb).is_empty(), wit);
        let mut anti = c.connes_b(&reduce_unit(&bw));
        axpy(&mut anti, &Q::one(), &reduce_unit(&c.b(&bb)));
        s.record("Bb+bB=0", anti.is_empty(), wit);
    }

    let iw = c.iota_delta_fast(&w);
    s.record("iota=sum(kappa^i).b equals commutator formula", iw == c.iota_delta_adjoint(&w), wit);
    let mut cart = c.iota_delta_fast(&dw);
    axpy(&mut cart, &Q::one(), &c.d(&iw));
    s.record("iota.d+d.iota=0", cart.is_empty(), wit);
    s.record("iota^2=0", c.iota_delta_fast(&iw).is_empty(), wit);
    s.record("(kappa-Id).iota=0", c.kappa(&iw) == iw, wit);
}

/// Whether `f` is zero; helper for callers composing identities.
pub fn is_zero(f: &Form) -> bool {
    f.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;

    #[test]
    fn small_algebras_pass() {
        for a in [ground_field(), dual_numbers(), truncated_poly(3)] {
            let s = operator_identities(&a, 3);
            assert!(s.passed(), "{:?}", s.failures());
        }
    }
}

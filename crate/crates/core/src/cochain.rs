//! Hochschild cochains `C^p(A, A^{⊗k})` with the outer bimodule
//! structure, and the operations `∪`, `⊢`, `⊣`, `∨`.

use rand::Rng;
use serde::Serialize;

use crate::findim::FinDimAlgebra;
use crate::linalg::{add_entry, axpy, LinMap, SVec};
use crate::report::Suite;
use crate::scalar::{parity, Q};

/// Flattened index of a tuple of basis indices, first slot most significant.
pub fn flat(digits: &[usize], n: usize) -> usize {
    digits.iter().fold(0, |acc, d| acc * n + d)
}

pub fn unflat(mut idx: usize, len: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for i in (0..len).rev() {
        out[i] = idx % n;
        idx /= n;
    }
    out
}

/// A multilinear map `A^{⊗p} → A^{⊗k}`, one sparse output per input tuple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cochain {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub values: Vec<SVec>,
}

impl Cochain {
    pub fn zero(n: usize, p: usize, k: usize) -> Self {
        Self { n, p, k, values: vec![SVec::new(); n.pow(p as u32)] }
    }

    /// Bidegree `(p, 2k − 2)`.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, 2 * self.k - 2)
    }

    /// The multiplication map as an element of `C²(A, A)`.
    pub fn multiplication(alg: &FinDimAlgebra) -> Self {
        let n = alg.dim();
        let mut c = Self::zero(n, 2, 1);
        for i in 0..n {
            for j in 0..n {
                c.values[i * n + j] = alg.mul(i, j).iter().cloned().collect();
            }
        }
        c
    }

    pub fn identity(n: usize) -> Self {
        let mut c = Self::zero(n, 1, 1);
        for i in 0..n {
            c.values[i].insert(i, Q::from(1));
        }
        c
    }

    /// Random integer entries in `-2..=2`, each slot filled with odds `num/den`.
    pub fn random(n: usize, p: usize, k: usize, (num, den): (u32, u32), rng: &mut impl Rng) -> Self {
        let mut c = Self::zero(n, p, k);
        let outs = n.pow(k as u32);
        for v in c.values.iter_mut() {
            for o in 0..outs {
                if rng.gen_range(0..den) < num {
                    let x = rng.gen_range(-2i64..=2);
                    if x != 0 {
                        v.insert(o, Q::from(x));
                    }
                }
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    pub fn add_scaled(&self, a: &Q, other: &Self) -> Self {
        assert_eq!((self.n, self.p, self.k), (other.n, other.p, other.k), "cochain shapes differ");
        let mut out = self.clone();
        for (x, y) in out.values.iter_mut().zip(&other.values) {
            axpy(x, a, y);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&Q::from(-1), other)
    }

    pub fn scaled(&self, a: &Q) -> Self {
        Self::zero(self.n, self.p, self.k).add_scaled(a, self)
    }

    /// Input tuples on which `self` and `other` differ.
    pub fn first_difference(&self, other: &Self, keep: impl Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
        (0..self.values.len())
            .find(|&i| {
                let d = unflat(i, self.p, self.n);
                keep(&d) && self.values[i] != other.values[i]
            })
            .map(|i| unflat(i, self.p, self.n))
    }

    /// Coordinates in `C^p(A, A^{⊗k})` as one long vector.
    pub fn to_vec(&self) -> SVec {
        let outs = self.n.pow(self.k as u32);
        let mut v = SVec::new();
        for (i, x) in self.values.iter().enumerate() {
            for (o, c) in x {
                v.insert(i * outs + o, c.clone());
            }
        }
        v
    }

    pub fn from_vec(n: usize, p: usize, k: usize, v: &SVec) -> Self {
        let outs = n.pow(k as u32);
        let mut c = Self::zero(n, p, k);
        for (idx, x) in v {
            c.values[idx / outs].insert(idx % outs, x.clone());
        }
        c
    }

    pub fn eval(&self, args: &[usize]) -> &SVec {
        &self.values[flat(args, self.n)]
    }
}

/// Apply `f` to slots `at .. at + p` of a tensor with `len` slots.
pub fn apply_at(f: &Cochain, t: &SVec, len: usize, at: usize) -> SVec {
    let n = f.n;
    let mut out = SVec::new();
    for (idx, c) in t {
        let d = unflat(*idx, len, n);
        for (o, x) in f.eval(&d[at..at + f.p]) {
            let mut nd = d[..at].to_vec();
            nd.extend(unflat(*o, f.k, n));
            nd.extend_from_slice(&d[at + f.p..]);
            add_entry(&mut out, flat(&nd, n), c * x);
        }
    }
    out
}

fn unit_tensor(idx: usize) -> SVec {
    let mut v = SVec::new();
    v.insert(idx, Q::from(1));
    v
}

/// `f ⊢ g = f^{[1,p]} ∘ g^{[p,p+q−1]}`
pub fn vdash(f: &Cochain, g: &Cochain) -> Cochain {
    let (n, p, q) = (f.n, f.p, g.p);
    let arity = p + q - 1;
    let mut out = Cochain::zero(n, arity, f.k + g.k - 1);
    for (i, v) in out.values.iter_mut().enumerate() {
        let t = apply_at(g, &unit_tensor(i), arity, p - 1);
        *v = apply_at(f, &t, p - 1 + g.k, 0);
    }
    out
}

/// `f ⊣ g = g^{[k,k+q−1]} ∘ f^{[1,p]}`
pub fn dashv(f: &Cochain, g: &Cochain) -> Cochain {
    let (n, p, q) = (f.n, f.p, g.p);
    let arity = p + q - 1;
    let mut out = Cochain::zero(n, arity, f.k + g.k - 1);
    for (i, v) in out.values.iter_mut().enumerate() {
        let t = apply_at(f, &unit_tensor(i), arity, 0);
        *v = apply_at(g, &t, f.k + q - 1, f.k - 1);
    }
    out
}

/// `f ∨ g = f ⊢ g − f ⊣ g`
pub fn vee(f: &Cochain, g: &Cochain) -> Cochain {
    vdash(f, g).sub(&dashv(f, g))
}

/// Whether the pair lies in the range where `∨` is a DG product.
pub fn vee_in_range(f: &Cochain, g: &Cochain) -> bool {
    f.p >= 2 && f.k >= 2 && g.p >= 2 && g.k >= 2
}

/// Merge the last slot of `x` (with `kx` slots) into the first of `y`.
pub fn merge(alg: &FinDimAlgebra, x: &SVec, kx: usize, y: &SVec, ky: usize) -> SVec {
    let n = alg.dim();
    let mut out = SVec::new();
    for (i, c) in x {
        let dx = unflat(*i, kx, n);
        for (j, e) in y {
            let dy = unflat(*j, ky, n);
            let ce = c * e;
            for (m, z) in alg.mul(dx[kx - 1], dy[0]) {
                let mut nd = dx[..kx - 1].to_vec();
                nd.push(*m);
                nd.extend_from_slice(&dy[1..]);
                add_entry(&mut out, flat(&nd, n), &ce * z);
            }
        }
    }
    out
}

/// `(f ∪ g)(a, b) = f(a) · g(b)` in `A_t`.
pub fn cup(alg: &FinDimAlgebra, f: &Cochain, g: &Cochain) -> Cochain {
    let n = f.n;
    let mut out = Cochain::zero(n, f.p + g.p, f.k + g.k - 1);
    for (i, v) in out.values.iter_mut().enumerate() {
        let d = unflat(i, f.p + g.p, n);
        *v = merge(alg, f.eval(&d[..f.p]), f.k, g.eval(&d[f.p..]), g.k);
    }
    out
}

/// Hochschild coboundary with the outer bimodule structure on `A^{⊗k}`.
pub fn coboundary(alg: &FinDimAlgebra, f: &Cochain) -> Cochain {
    let (n, p, k) = (f.n, f.p, f.k);
    let mut out = Cochain::zero(n, p + 1, k);
    for (i, v) in out.values.iter_mut().enumerate() {
        let a = unflat(i, p + 1, n);
        let mut acc = merge(alg, &unit_tensor(a[0]), 1, f.eval(&a[1..]), k);
        for j in 1..=p {
            let s = parity(j);
            for (m, c) in alg.mul(a[j - 1], a[j]) {
                let mut args = a[..j - 1].to_vec();
                args.push(*m);
                args.extend_from_slice(&a[j + 1..]);
                axpy(&mut acc, &(&s * c), f.eval(&args));
            }
        }
        let last = merge(alg, f.eval(&a[..p]), k, &unit_tensor(a[p]), 1);
        axpy(&mut acc, &parity(p + 1), &last);
        *v = acc;
    }
    out
}

/// The coboundary `C^p(A, A^{⊗k}) → C^{p+1}(A, A^{⊗k})` as a matrix.
pub fn coboundary_map(alg: &FinDimAlgebra, p: usize, k: usize) -> LinMap {
    let n = alg.dim();
    let outs = n.pow(k as u32);
    let dom = n.pow(p as u32) * outs;
    let cod = n.pow(p as u32 + 1) * outs;
    let cols = (0..dom)
        .map(|j| {
            let mut e = SVec::new();
            e.insert(j, Q::from(1));
            coboundary(alg, &Cochain::from_vec(n, p, k, &e)).to_vec()
        })
        .collect();
    LinMap::new(dom, cod, cols)
}

/// Cocycles in `C^p(A, A^{⊗k})`.
pub fn cocycle_basis(alg: &FinDimAlgebra, p: usize, k: usize) -> Vec<Cochain> {
    let n = alg.dim();
    coboundary_map(alg, p, k).kernel().iter().map(|v| Cochain::from_vec(n, p, k, v)).collect()
}

/// Some `h` with `b h = f`, if `f` is a coboundary.
pub fn solve_coboundary(alg: &FinDimAlgebra, f: &Cochain) -> Option<Cochain> {
    if f.p == 0 {
        return if f.is_zero() { Some(Cochain::zero(f.n, 0, f.k)) } else { None };
    }
    let m = coboundary_map(alg, f.p - 1, f.k);
    m.solve(&f.to_vec()).map(|v| Cochain::from_vec(f.n, f.p - 1, f.k, &v))
}

/// Bidegrees drawn for one random tuple.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Shape {
    pub p: usize,
    pub k: usize,
}

fn eq_check(s: &mut Suite, name: &str, lhs: &Cochain, rhs: &Cochain, ctx: &str) {
    let diff = lhs.first_difference(rhs, |_| true);
    s.record(name, diff.is_none(), || format!("{ctx}: differs on input {:?}", diff.unwrap()));
}

/// The identities of the `∨`-calculus on `tuples` random triples.
/// Bidegrees are drawn from `{2, 3}` for `∨` and from `{1, 2}` where the
/// identity allows it; `∪` nullity is checked on `pairs` cocycle pairs.
pub fn verify_dg_suite(alg: &FinDimAlgebra, tuples: usize, pairs: usize, seed: u64) -> Suite {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut s = Suite::new(format!("dg calculus (seed {seed})"));
    let n = alg.dim();
    let dens = (1, 2);
    let b = |f: &Cochain| coboundary(alg, f);
    for t in 0..tuples {
        let mut draw = |lo: usize| {
            let p = rng.gen_range(lo..=lo + 1);
            let k = rng.gen_range(lo..=lo + 1);
            (p, k)
        };
        let (fp, fk) = draw(2);
        let (gp, gk) = draw(2);
        let (hp, hk) = (2, 2);
        let f = Cochain::random(n, fp.min(2 + t % 2), fk, dens, &mut rng);
        let g = Cochain::random(n, gp, gk.min(2 + (t / 2) % 2), dens, &mut rng);
        let h = Cochain::random(n, hp, hk, dens, &mut rng);
        let ctx = format!("tuple {t}: f{:?} g{:?} h{:?}", (f.p, f.k), (g.p, g.k), (h.p, h.k));
        eq_check(&mut s, "f v (g v h) = (f v g) v h", &vee(&f, &vee(&g, &h)), &vee(&vee(&f, &g), &h), &ctx);
        let sign = parity(f.p - 1);
        let rhs = vee(&b(&f), &g).add_scaled(&sign, &vee(&f, &b(&g)));
        eq_check(&mut s, "b(f v g) = bf v g + (-1)^(p-1) f v bg", &b(&vee(&f, &g)), &rhs, &ctx);
        eq_check(&mut s, "(f u g) v h = f u (g v h)", &vee(&cup(alg, &f, &g), &h), &cup(alg, &f, &vee(&g, &h)), &ctx);
        eq_check(&mut s, "f v (g u h) = (f v g) u h", &vee(&f, &cup(alg, &g, &h)), &cup(alg, &vee(&f, &g), &h), &ctx);
        type Op = fn(&FinDimAlgebra, &Cochain, &Cochain) -> Cochain;
        let ops: [(&str, Op); 3] = [
            ("|-", |_, x, y| vdash(x, y)),
            ("-|", |_, x, y| dashv(x, y)),
            ("u", |a, x, y| cup(a, x, y)),
        ];
        for (ni, oi) in &ops {
            for (nj, oj) in &ops {
                let l = oi(alg, &f, &oj(alg, &g, &h));
                let r = oj(alg, &oi(alg, &f, &g), &h);
                eq_check(&mut s, &format!("mutual associativity x {ni} (y {nj} z) = (x {ni} y) {nj} z"), &l, &r, &ctx);
            }
        }
        // relaxed ranges: p, q ≥ 1, only the named target power ≥ 2
        let f1 = Cochain::random(n, rng.gen_range(1..=2), rng.gen_range(1..=2), dens, &mut rng);
        let g2 = Cochain::random(n, rng.gen_range(1..=2), 2, dens, &mut rng);
        let ctx1 = format!("tuple {t}: f{:?} g{:?}", (f1.p, f1.k), (g2.p, g2.k));
        let sp = parity(f1.p - 1);
        let l = vdash(&b(&f1), &g2).add_scaled(&sp, &vdash(&f1, &b(&g2)));
        let r = b(&vdash(&f1, &g2)).add_scaled(&parity(f1.p + 1), &cup(alg, &f1, &g2));
        eq_check(&mut s, "(bf |- g) + (-1)^(p-1)(f |- bg) = b(f |- g) + (-1)^(p+1) f u g", &l, &r, &ctx1);
        let f2 = Cochain::random(n, rng.gen_range(1..=2), 2, dens, &mut rng);
        let g1 = Cochain::random(n, rng.gen_range(1..=2), rng.gen_range(1..=2), dens, &mut rng);
        let ctx2 = format!("tuple {t}: f{:?} g{:?}", (f2.p, f2.k), (g1.p, g1.k));
        let sp = parity(f2.p - 1);
        let l = dashv(&b(&f2), &g1).add_scaled(&sp, &dashv(&f2, &b(&g1)));
        let r = b(&dashv(&f2, &g1)).add_scaled(&parity(f2.p - 1), &cup(alg, &f2, &g1));
        eq_check(&mut s, "(bf -| g) + (-1)^(p-1)(f -| bg) = b(f -| g) + (-1)^(p-1) f u g", &l, &r, &ctx2);
        eq_check(&mut s, "b b f = 0", &b(&b(&f1)), &Cochain::zero(n, f1.p + 2, f1.k), &ctx1);
        eq_check(&mut s, "(f u g) u h = f u (g u h)", &cup(alg, &cup(alg, &f1, &g2), &h), &cup(alg, &f1, &cup(alg, &g2, &h)), &ctx1);
    }
    cup_nullity(alg, pairs, &mut rng, &mut s);
    s
}

/// For cocycles `f ∈ C¹(A, A^{⊗k})`, `g ∈ C¹(A, A^{⊗m})` with `k` or `m`
/// at least 2, solve `b h = f ∪ g`.
fn cup_nullity(alg: &FinDimAlgebra, pairs: usize, rng: &mut impl Rng, s: &mut Suite) {
    let n = alg.dim();
    let z: Vec<Vec<Cochain>> = (1..=2).map(|k| cocycle_basis(alg, 1, k)).collect();
    let combo = |k: usize, rng: &mut dyn rand::RngCore| -> Cochain {
        let mut c = Cochain::zero(n, 1, k);
        for b in &z[k - 1] {
            c = c.add_scaled(&Q::from(rng.gen_range(-2i64..=2)), b);
        }
        c
    };
    for i in 0..pairs {
        let (k, m) = [(2, 2), (1, 2), (2, 1)][i % 3];
        let f = combo(k, rng);
        let g = combo(m, rng);
        let fg = cup(alg, &f, &g);
        let h = solve_coboundary(alg, &fg);
        let ok = matches!(&h, Some(h) if coboundary(alg, h) == fg);
        s.record("f u g is a coboundary for cocycles f, g", ok, || format!("pair {i}: k={k}, m={m}"));
    }
}

//! Exact homology of chain complexes, Hochschild homology through `(Ω, b)`,
//! and the kernel of `ι_Δ` on `DR`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::blocks::BlockedSpace;
use crate::error::{Error, Result};
use crate::forms::{self, Calculus, Form};
use crate::linalg::{homology_at, Echelon, LinMap, SVec};
use crate::quotient::dr_space;
use crate::report::Suite;

/// Spaces `C_start, C_{start+1}, …` with maps between neighbours. With
/// `direction = 1` map `i` goes `C_i → C_{i+1}`, with `-1` it goes
/// `C_{i+1} → C_i`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub maps: Vec<LinMap>,
    pub direction: i8,
    pub start: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyDegree {
    pub degree: i64,
    pub dim: usize,
    pub reps: Vec<SVec>,
}

impl ChainComplex {
    pub fn new(labels: Vec<String>, dims: Vec<usize>, maps: Vec<LinMap>, direction: i8, start: i64) -> Result<Self> {
        if maps.len() + 1 != dims.len() || labels.len() != dims.len() || !(direction == 1 || direction == -1) {
            return Err(Error::invariant("chain complex shape"));
        }
        for (i, m) in maps.iter().enumerate() {
            let (s, t) = if direction == 1 { (dims[i], dims[i + 1]) } else { (dims[i + 1], dims[i]) };
            if m.dom != s || m.cod != t {
                return Err(Error::invariant(format!("map {i} is {}x{}, expected {t}x{s}", m.cod, m.dom)));
            }
        }
        let c = Self { labels, dims, maps, direction, start };
        for i in 0..c.dims.len() {
            let (din, dout) = c.around(i);
            if !dout.compose(&din).is_zero() {
                return Err(Error::invariant(format!("d∘d ≠ 0 at degree {}", start + i as i64)));
            }
        }
        Ok(c)
    }

    fn around(&self, i: usize) -> (LinMap, LinMap) {
        let n = self.dims.len();
        let dim = self.dims[i];
        let into = |j: Option<usize>| j.map(|j| self.maps[j].clone());
        if self.direction == 1 {
            let din = into(i.checked_sub(1)).unwrap_or_else(|| LinMap::zero(0, dim));
            let dout = into((i + 1 < n).then_some(i)).unwrap_or_else(|| LinMap::zero(dim, 0));
            (din, dout)
        } else {
            let din = into((i + 1 < n).then_some(i)).unwrap_or_else(|| LinMap::zero(0, dim));
            let dout = into(i.checked_sub(1)).unwrap_or_else(|| LinMap::zero(dim, 0));
            (din, dout)
        }
    }

    pub fn homology(&self) -> Vec<HomologyDegree> {
        (0..self.dims.len())
            .map(|i| {
                let (din, dout) = self.around(i);
                let (dim, reps) = homology_at(&din, &dout);
                HomologyDegree { degree: self.start + i as i64, dim, reps }
            })
            .collect()
    }
}

/// One serialized degree of a homology computation.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HomologyReport {
    pub degree: i64,
    pub dim: usize,
    pub stable: bool,
    pub representatives: Vec<serde_json::Value>,
}

/// `[coefficient, a0, [a1, …, an]]` records of a form.
pub fn form_records(calc: &Calculus, f: &Form) -> serde_json::Value {
    let labels = &calc.alg.labels;
    serde_json::Value::Array(
        f.iter()
            .map(|(k, c)| {
                serde_json::json!([
                    c.to_string(),
                    labels[k[0] as usize],
                    k[1..].iter().map(|&i| labels[i as usize].clone()).collect::<Vec<_>>()
                ])
            })
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct Hochschild {
    pub dims: Vec<usize>,
    pub reps: Vec<Vec<Form>>,
    /// Dimensions split by total weight, for graded algebras.
    pub by_weight: Option<BTreeMap<usize, Vec<usize>>>,
}

/// `H_n(Ω A, b)` for `n ≤ n_max`.
pub fn hochschild(calc: &Calculus, n_max: usize) -> Hochschild {
    let space = BlockedSpace::new(calc, n_max + 1, false);
    hochschild_on(calc, &space, n_max)
}

pub fn hochschild_on(calc: &Calculus, space: &BlockedSpace, n_max: usize) -> Hochschild {
    let mut dims = vec![0; n_max + 1];
    let mut reps = vec![Vec::new(); n_max + 1];
    let mut by_weight: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let graded = space.block_weight(0, calc.alg).is_some();
    for (bi, bl) in space.blocks.iter().enumerate() {
        let bmaps: Vec<LinMap> = (1..=n_max + 1).map(|m| bl.matrix(m, m - 1, |k| calc.b_key(k))).collect();
        for n in 0..=n_max {
            let din = &bmaps[n];
            let dout = if n == 0 { LinMap::zero(bl.dim(0), 0) } else { bmaps[n - 1].clone() };
            let (d, r) = homology_at(din, &dout);
            dims[n] += d;
            reps[n].extend(r.iter().map(|v| bl.form(n, v)));
            if graded && d > 0 {
                let w = space.block_weight(bi, calc.alg).unwrap();
                by_weight.entry(w).or_insert_with(|| vec![0; n_max + 1])[n] += d;
            }
        }
    }
    Hochschild { dims, reps, by_weight: graded.then_some(by_weight) }
}

#[derive(Clone, Debug)]
pub struct IotaKernel {
    pub degree: usize,
    pub dim: usize,
    pub dr_dim: usize,
    pub reps: Vec<Form>,
    /// `ι_Δ` vanishes on `bΩ^{n+1} + (1-κ)Ω^n`.
    pub well_defined: bool,
}

/// `Ker(ι_Δ : DR^n → Ω^{n-1})`.
pub fn hh_kernel_iota(calc: &Calculus, n: usize) -> IotaKernel {
    let dr = dr_space(calc, n);
    let q = &dr.quotient;
    let sp = &q.space;
    let mut dim = 0;
    let mut reps = Vec::new();
    let mut well_defined = true;
    for (bi, bl) in sp.blocks.iter().enumerate() {
        let cols: Vec<SVec> = q.reps[bi]
            .iter()
            .map(|&c| {
                if n == 0 {
                    SVec::new()
                } else {
                    bl.coords(n - 1, &calc.iota_delta_fast(&forms::single(bl.keys[n][c].clone())))
                }
            })
            .collect();
        let cod = if n == 0 { 0 } else { bl.dim(n - 1) };
        let m = LinMap::new(cols.len(), cod, cols);
        for v in m.kernel() {
            dim += 1;
            let f: Form = v.iter().map(|(i, x)| (bl.keys[n][q.reps[bi][*i]].clone(), x.clone())).collect();
            reps.push(f);
        }
        if n >= 1 {
            for k in &bl.keys[n + 1] {
                if !calc.iota_delta_fast(&calc.b_key(k)).is_empty() {
                    well_defined = false;
                }
            }
            for k in &bl.keys[n] {
                let f = forms::single(k.clone());
                let g = forms::diff(&f, &calc.kappa_key(k));
                if !calc.iota_delta_fast(&g).is_empty() {
                    well_defined = false;
                }
            }
        }
    }
    IotaKernel { degree: n, dim, dr_dim: q.dim(), reps, well_defined }
}

/// Exactness of `0 → H_n(Ω, b) → DR^n → [A, Ω^{n-1}]^κ → 0` by rank
/// bookkeeping, with the middle map the projection and the right map `ι_Δ`.
pub fn verify_ses(calc: &Calculus, n: usize) -> Suite {
    let mut s = Suite::new(format!("ses n={n}"));
    let dr = dr_space(calc, n);
    let q = &dr.quotient;
    let sp = &q.space;
    let hh = hochschild_on(calc, sp, n);
    let h = hh.dims[n];
    // H_n → DR^n injective, lands in Ker ι_Δ
    let mut img = Echelon::new();
    for z in &hh.reps[n] {
        img.insert(&q.project(z));
        s.record("cycles are killed by iota", calc.iota_delta_fast(z).is_empty(), || calc.fmt_form(z));
    }
    s.record("H_n injects into DR^n", img.rank() == h, || format!("rank {} vs {h}", img.rank()));
    let mut inv_dim = 0;
    let mut image_ok = true;
    let mut iota_rank = 0;
    for (bi, bl) in sp.blocks.iter().enumerate() {
        if n == 0 {
            break;
        }
        // [A, Ω^{n-1}] = bΩ^n
        let bim = bl.matrix(n, n - 1, |k| calc.b_key(k)).image();
        let one_minus_kappa = bl.matrix(n - 1, n - 1, |k| forms::diff(&forms::single(k.clone()), &calc.kappa_key(k)));
        let fixed = one_minus_kappa.kernel();
        let mut sum = bim.clone();
        for v in &fixed {
            sum.insert(v);
        }
        let inter = bim.rank() + fixed.len() - sum.rank();
        inv_dim += inter;
        let iota = Echelon::from_vectors(
            &q.reps[bi]
                .iter()
                .map(|&c| bl.coords(n - 1, &calc.iota_delta_fast(&forms::single(bl.keys[n][c].clone()))))
                .collect::<Vec<_>>(),
        );
        iota_rank += iota.rank();
        let fixed_e = Echelon::from_vectors(&fixed);
        for v in iota.rref_basis() {
            if !bim.contains(&v) || !fixed_e.contains(&v) {
                image_ok = false;
            }
        }
        if iota.rank() != inter {
            image_ok = false;
        }
    }
    s.record("image of iota is [A,Omega]^kappa", image_ok, || "image mismatch".into());
    s.record("dim DR = dim H + dim [A,Omega]^kappa", q.dim() == h + inv_dim, || {
        format!("{} != {h} + {inv_dim}", q.dim())
    });
    s.record("kernel of iota has dim H", q.dim() - iota_rank == h, || format!("{} vs {h}", q.dim() - iota_rank));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;
    use crate::scalar::q;

    fn v(entries: &[(usize, i64)]) -> SVec {
        entries.iter().map(|(i, x)| (*i, q(*x))).collect()
    }

    #[test]
    fn small_complexes() {
        let id = LinMap::identity(1);
        let c = ChainComplex::new(vec!["a".into(), "b".into()], vec![1, 1], vec![id], 1, 0).unwrap();
        assert!(c.homology().iter().all(|h| h.dim == 0));
        let s = LinMap::new(2, 1, vec![v(&[(0, 1)]), v(&[(0, 1)])]);
        let c = ChainComplex::new(vec!["a".into(), "b".into()], vec![2, 1], vec![s], 1, 0).unwrap();
        let dims: Vec<usize> = c.homology().iter().map(|h| h.dim).collect();
        assert_eq!(dims, vec![1, 0]);
    }

    #[test]
    fn nonzero_square_rejected() {
        let id = LinMap::identity(1);
        let r = ChainComplex::new(vec!["a".into(); 3], vec![1, 1, 1], vec![id.clone(), id], 1, 0);
        assert!(r.is_err());
    }

    #[test]
    fn hochschild_small() {
        let k = ground_field();
        assert_eq!(hochschild(&Calculus::new(&k), 3).dims, vec![1, 0, 0, 0]);
        let e = dual_numbers();
        assert_eq!(hochschild(&Calculus::new(&e), 3).dims, vec![2, 1, 1, 1]);
    }

    #[test]
    fn kernel_of_iota_dual_numbers() {
        let e = dual_numbers();
        let c = Calculus::new(&e);
        let k = hh_kernel_iota(&c, 1);
        assert_eq!(k.dim, 1);
        assert!(k.well_defined);
        let g = ground_field();
        let cg = Calculus::new(&g);
        for n in 1..=3 {
            assert_eq!(hh_kernel_iota(&cg, n).dim, 0);
        }
    }

    #[test]
    fn ses_small() {
        for a in [ground_field(), dual_numbers(), truncated_poly(3)] {
            let c = Calculus::new(&a);
            for n in 1..=3 {
                let s = verify_ses(&c, n);
                assert!(s.passed(), "{:?}", s.failures());
            }
        }
    }
}

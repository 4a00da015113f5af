//! Independent oracles, built straight from structure constants.
#![allow(dead_code)]

use std::collections::HashMap;

use ncdr_core::findim::FinDimAlgebra;
use ncdr_core::linalg::{add_entry, LinMap, SVec};
use ncdr_core::scalar::Q;

type Tuple = Vec<usize>;

/// Grading key preserved by the Hochschild boundary.
fn block_key(alg: &FinDimAlgebra, t: &[usize], monomial: bool) -> Vec<usize> {
    let Some(words) = alg.words.as_ref() else { return Vec::new() };
    let cat: Vec<usize> = t.iter().flat_map(|&i| words[i].iter().copied()).collect();
    if monomial {
        // necklace of the concatenated word
        (0..cat.len().max(1)).map(|r| cat[r..].iter().chain(&cat[..r]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
    } else {
        let g = alg.gens.as_ref().map(|g| g.len()).unwrap_or(0);
        let mut counts = vec![0; g];
        for x in cat {
            counts[x] += 1;
        }
        counts
    }
}

fn is_monomial(alg: &FinDimAlgebra) -> bool {
    let Some(words) = alg.words.as_ref() else { return false };
    (0..alg.dim()).all(|i| {
        (0..alg.dim()).all(|j| match alg.mul(i, j) {
            [] => true,
            [(k, c)] => *c == Q::from(1) && words[*k] == [words[i].clone(), words[j].clone()].concat(),
            _ => false,
        })
    })
}

fn tuples(dim: usize, len: usize, first_from: usize, rest_from: usize) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for pos in 0..len {
        let lo = if pos == 0 { first_from } else { rest_from };
        out = out.into_iter().flat_map(|t| (lo..dim).map(move |a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Normalized Hochschild boundary of one tuple `a0 ⊗ ā1 ⊗ … ⊗ ān`.
fn hochschild_b(alg: &FinDimAlgebra, t: &[usize]) -> Vec<(Tuple, Q)> {
    let n = t.len() - 1;
    let mut out = Vec::new();
    for i in 0..n {
        for (m, c) in alg.mul(t[i], t[i + 1]) {
            if i > 0 && *m == 0 {
                continue;
            }
            let mut u = t[..i].to_vec();
            u.push(*m);
            u.extend_from_slice(&t[i + 2..]);
            let s = if i % 2 == 0 { c.clone() } else { -c.clone() };
            out.push((u, s));
        }
    }
    for (m, c) in alg.mul(t[n], t[0]) {
        let mut u = vec![*m];
        u.extend_from_slice(&t[1..n]);
        let s = if n.is_multiple_of(2) { c.clone() } else { -c.clone() };
        out.push((u, s));
    }
    out
}

/// `dim HH_n` for `n ≤ n_max` from the normalized bar complex.
pub fn bar_hh(alg: &FinDimAlgebra, n_max: usize) -> Vec<usize> {
    let dim = alg.dim();
    let mono = is_monomial(alg);
    // blocks[key][n] = tuples
    let mut blocks: HashMap<Vec<usize>, Vec<Vec<Tuple>>> = HashMap::new();
    for n in 0..=n_max + 1 {
        for t in tuples(dim, n + 1, 0, 1) {
            let k = block_key(alg, &t, mono);
            blocks.entry(k).or_insert_with(|| vec![Vec::new(); n_max + 2])[n].push(t);
        }
    }
    let mut dims = vec![0; n_max + 1];
    for (_, by_n) in blocks {
        let index: Vec<HashMap<&Tuple, usize>> =
            by_n.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t, i)).collect()).collect();
        // ranks[n] = rank of b: C_n -> C_{n-1}
        let mut ranks = vec![0; n_max + 2];
        for n in 1..=n_max + 1 {
            let cols: Vec<SVec> = by_n[n]
                .iter()
                .map(|t| {
                    let mut v = SVec::new();
                    for (u, c) in hochschild_b(alg, t) {
                        let i = index[n - 1].get(&u).expect("boundary stays in its block");
                        add_entry(&mut v, *i, c);
                    }
                    v
                })
                .collect();
            ranks[n] = LinMap::new(cols.len(), by_n[n - 1].len(), cols).rank();
        }
        for n in 0..=n_max {
            let r_in = if n == 0 { 0 } else { ranks[n] };
            dims[n] += by_n[n].len() - r_in - ranks[n + 1];
        }
    }
    dims
}

fn rotate(t: &[usize], r: usize) -> Tuple {
    // λ^r moves the last r factors to the front
    let n1 = t.len();
    (0..n1).map(|i| t[(i + n1 - r % n1) % n1]).collect()
}

/// Orbit representative and the coefficient of `N(u)` on it.
fn norm_at_rep(t: &[usize]) -> (Tuple, i64) {
    let n1 = t.len();
    let deg = n1 - 1;
    let rep = (0..n1).map(|r| rotate(t, r)).min().unwrap();
    let mut c = 0i64;
    for r in 0..n1 {
        if rotate(t, r) == rep {
            c += if (deg * r).is_multiple_of(2) { 1 } else { -1 };
        }
    }
    (rep, c)
}

fn full_b(alg: &FinDimAlgebra, t: &[usize]) -> Vec<(Tuple, Q)> {
    let n = t.len() - 1;
    let mut out = Vec::new();
    for i in 0..n {
        for (m, c) in alg.mul(t[i], t[i + 1]) {
            let mut u = t[..i].to_vec();
            u.push(*m);
            u.extend_from_slice(&t[i + 2..]);
            out.push((u, if i % 2 == 0 { c.clone() } else { -c.clone() }));
        }
    }
    for (m, c) in alg.mul(t[n], t[0]) {
        let mut u = vec![*m];
        u.extend_from_slice(&t[1..n]);
        out.push((u, if n.is_multiple_of(2) { c.clone() } else { -c.clone() }));
    }
    out
}

/// `dim HC_n` (unreduced) for `n ≤ n_max` from Connes' complex, computed
/// on cyclic invariants where `b'` acts through `N b`.
pub fn connes_hc(alg: &FinDimAlgebra, n_max: usize) -> Vec<usize> {
    let dim = alg.dim();
    let mut orbits: Vec<Vec<Tuple>> = Vec::new();
    for n in 0..=n_max + 1 {
        let mut reps: Vec<Tuple> = tuples(dim, n + 1, 0, 0)
            .into_iter()
            .filter_map(|t| {
                let (rep, c) = norm_at_rep(&t);
                (rep == t && c != 0).then_some(t)
            })
            .collect();
        reps.sort();
        orbits.push(reps);
    }
    let mut ranks = vec![0; n_max + 2];
    for n in 1..=n_max + 1 {
        let index: HashMap<&Tuple, usize> = orbits[n - 1].iter().enumerate().map(|(i, t)| (t, i)).collect();
        let cols: Vec<SVec> = orbits[n]
            .iter()
            .map(|t| {
                let mut v = SVec::new();
                for (u, c) in full_b(alg, t) {
                    let (rep, w) = norm_at_rep(&u);
                    if w == 0 {
                        continue;
                    }
                    if let Some(i) = index.get(&rep) {
                        // coefficient of N(u) on rep, over that of N(rep)
                        let (_, wr) = norm_at_rep(&rep);
                        add_entry(&mut v, *i, c * Q::from(w) * Q::from(wr).recip());
                    }
                }
                v
            })
            .collect();
        ranks[n] = LinMap::new(cols.len(), orbits[n - 1].len(), cols).rank();
    }
    (0..=n_max).map(|n| orbits[n].len() - if n == 0 { 0 } else { ranks[n] } - ranks[n + 1]).collect()
}

/// Reduced cyclic homology: subtract `HC(k)`, which is `k` in even degrees.
pub fn connes_hc_reduced(alg: &FinDimAlgebra, n_max: usize) -> Vec<usize> {
    connes_hc(alg, n_max).into_iter().enumerate().map(|(n, d)| if n % 2 == 0 { d - 1 } else { d }).collect()
}

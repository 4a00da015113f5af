//! Splitting form spaces into blocks preserved by every operator.
//!
//! For monomial algebras the cyclic word obtained by concatenating the
//! entries of a basis form is invariant under `d`, `b` and `κ`; for
//! multigraded algebras the multidegree is. Linear algebra then runs block
//! by block.

use std::collections::{BTreeMap, HashMap};

use crate::findim::FinDimAlgebra;
use crate::forms::{Calculus, Form, Key};
use crate::linalg::{LinMap, SVec};

pub type BlockId = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Products of basis words are concatenations or zero.
    Necklace(Vec<Vec<u16>>),
    /// Products respect the generator multidegree.
    Multi(Vec<Vec<u16>>),
    Trivial,
}

pub fn grading(alg: &FinDimAlgebra) -> Grading {
    let Some(words) = alg.words.as_ref() else { return Grading::Trivial };
    let ngen = alg.gens.as_ref().map_or(0, |g| g.len());
    let n = alg.dim();
    let mut monomial = true;
    for i in 0..n {
        for j in 0..n {
            match alg.mul(i, j) {
                [] => {}
                [(k, c)] if c == &crate::scalar::one() => {
                    let mut w = words[i].clone();
                    w.extend_from_slice(&words[j]);
                    if words[*k] != w {
                        monomial = false;
                    }
                }
                _ => monomial = false,
            }
        }
    }
    if monomial {
        return Grading::Necklace(words.iter().map(|w| w.iter().map(|&x| x as u16).collect()).collect());
    }
    let deg: Vec<Vec<u16>> = words
        .iter()
        .map(|w| {
            let mut d = vec![0u16; ngen];
            for &x in w {
                d[x] += 1;
            }
            d
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            let s: Vec<u16> = deg[i].iter().zip(&deg[j]).map(|(a, b)| a + b).collect();
            if alg.mul(i, j).iter().any(|(k, _)| deg[*k] != s) {
                return Grading::Trivial;
            }
        }
    }
    Grading::Multi(deg)
}

fn min_rotation(w: &[u16]) -> Vec<u16> {
    if w.is_empty() {
        return Vec::new();
    }
    let mut best: Vec<u16> = w.to_vec();
    for r in 1..w.len() {
        let rot: Vec<u16> = w[r..].iter().chain(&w[..r]).copied().collect();
        if rot < best {
            best = rot;
        }
    }
    best
}

pub fn block_of(g: &Grading, k: &Key) -> BlockId {
    match g {
        Grading::Necklace(words) => {
            let w: Vec<u16> = k.iter().flat_map(|&i| words[i as usize].iter().copied()).collect();
            min_rotation(&w)
        }
        Grading::Multi(deg) => {
            let mut s = vec![0u16; deg.first().map_or(0, |d| d.len())];
            for &i in k.iter() {
                for (a, b) in s.iter_mut().zip(&deg[i as usize]) {
                    *a += b;
                }
            }
            s
        }
        Grading::Trivial => Vec::new(),
    }
}

/// One block: the basis keys of each form degree inside it.
#[derive(Clone, Debug)]
pub struct Block {
    pub id: BlockId,
    pub keys: Vec<Vec<Key>>,
    index: Vec<HashMap<Key, usize>>,
}

impl Block {
    pub fn dim(&self, n: usize) -> usize {
        self.keys.get(n).map_or(0, |k| k.len())
    }

    pub fn max_degree(&self) -> usize {
        self.keys.len() - 1
    }

    pub fn index_of(&self, n: usize, k: &Key) -> Option<usize> {
        self.index.get(n)?.get(k).copied()
    }

    /// Coordinates of a form of degree `n`; keys outside the block are an
    /// invariant violation and panic.
    pub fn coords(&self, n: usize, f: &Form) -> SVec {
        let mut v = SVec::new();
        for (k, c) in f {
            if n == 0 && k.len() == 1 && k[0] == 0 && self.index_of(0, k).is_none() {
                // unit component in a reduced space
                continue;
            }
            let i = self
                .index_of(n, k)
                .unwrap_or_else(|| panic!("form key {k:?} escapes block {:?} in degree {n}", self.id));
            v.insert(i, c.clone());
        }
        v
    }

    pub fn form(&self, n: usize, v: &SVec) -> Form {
        v.iter().map(|(i, c)| (self.keys[n][*i].clone(), c.clone())).collect()
    }

    /// Matrix of a per-key operator from degree `n` to degree `m`.
    pub fn matrix(&self, n: usize, m: usize, op: impl Fn(&Key) -> Form) -> LinMap {
        let cols = self.keys[n].iter().map(|k| self.coords(m, &op(k))).collect();
        LinMap::new(self.dim(n), self.dim(m), cols)
    }

    /// Matrix of a form-level operator.
    pub fn matrix_f(&self, n: usize, m: usize, op: impl Fn(&Form) -> Form) -> LinMap {
        let cols = self.keys[n]
            .iter()
            .map(|k| self.coords(m, &op(&crate::forms::single(k.clone()))))
            .collect();
        LinMap::new(self.dim(n), self.dim(m), cols)
    }
}

/// All basis forms of degrees `0..=n_max`, grouped into blocks.
#[derive(Clone, Debug)]
pub struct BlockedSpace {
    pub n_max: usize,
    pub reduced: bool,
    pub grading: Grading,
    pub blocks: Vec<Block>,
    by_id: HashMap<BlockId, usize>,
}

impl BlockedSpace {
    pub fn new(calc: &Calculus, n_max: usize, reduced: bool) -> Self {
        let g = grading(calc.alg);
        let mut map: BTreeMap<BlockId, Vec<Vec<Key>>> = BTreeMap::new();
        for n in 0..=n_max {
            let basis = if reduced { calc.reduced_basis(n) } else { calc.basis(n) };
            for k in basis {
                let id = block_of(&g, &k);
                let e = map.entry(id).or_insert_with(|| vec![Vec::new(); n_max + 1]);
                e[n].push(k);
            }
        }
        let blocks: Vec<Block> = map
            .into_iter()
            .map(|(id, keys)| {
                let index = keys
                    .iter()
                    .map(|ks| ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
                    .collect();
                Block { id, keys, index }
            })
            .collect();
        let by_id = blocks.iter().enumerate().map(|(i, b): (usize, &Block)| (b.id.clone(), i)).collect();
        Self { n_max, reduced, grading: g, blocks, by_id }
    }

    pub fn block_index(&self, k: &Key) -> Option<usize> {
        self.by_id.get(&block_of(&self.grading, k)).copied()
    }

    /// Split a form into per-block coordinate vectors in degree `n`.
    pub fn split(&self, n: usize, f: &Form) -> BTreeMap<usize, SVec> {
        let mut out: BTreeMap<usize, SVec> = BTreeMap::new();
        for (k, c) in f {
            if self.reduced && n == 0 && k.len() == 1 && k[0] == 0 {
                continue;
            }
            let bi = self.block_index(k).unwrap_or_else(|| panic!("no block for {k:?}"));
            let i = self.blocks[bi].index_of(n, k).unwrap_or_else(|| panic!("key {k:?} not in degree {n}"));
            out.entry(bi).or_default().insert(i, c.clone());
        }
        out
    }

    /// Total weight of a block, when the grading provides one.
    pub fn block_weight(&self, bi: usize, alg: &FinDimAlgebra) -> Option<usize> {
        let id = &self.blocks[bi].id;
        let gens = alg.gens.as_ref()?;
        match &self.grading {
            Grading::Necklace(_) => Some(id.iter().map(|&g| gens.weight(&[g as usize])).sum()),
            Grading::Multi(_) => Some(id.iter().enumerate().map(|(g, &m)| gens.weight(&[g]) * m as usize).sum()),
            Grading::Trivial => None,
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.blocks.iter().map(|b| b.dim(n)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::standard::*;

    #[test]
    fn gradings_detected() {
        assert!(matches!(grading(&free_xy(2)), Grading::Necklace(_)));
        assert!(matches!(grading(&dual_numbers()), Grading::Necklace(_)));
        assert!(matches!(grading(&comm_xy(2)), Grading::Multi(_)));
    }

    #[test]
    fn blocks_partition_the_basis() {
        let a = free_xy(2);
        let c = Calculus::new(&a);
        let s = BlockedSpace::new(&c, 2, false);
        for n in 0..=2 {
            assert_eq!(s.dim(n), c.omega_dim(n));
        }
        assert!(s.blocks.len() > 1);
    }

    #[test]
    fn operators_stay_in_blocks() {
        for a in [free_xy(2), comm_xy(2), truncated_poly(3)] {
            let c = Calculus::new(&a);
            let s = BlockedSpace::new(&c, 3, false);
            for bl in &s.blocks {
                for n in 0..3 {
                    bl.matrix(n, n, |k| c.kappa_key(k));
                    bl.matrix(n + 1, n, |k| c.b_key(k));
                    bl.matrix(n, n + 1, |k| c.d(&crate::forms::single(k.clone())));
                }
            }
        }
    }

    #[test]
    fn rotation() {
        assert_eq!(min_rotation(&[1, 0, 1]), vec![0, 1, 1]);
    }
}

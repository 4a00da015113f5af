//! Finite-dimensional algebras given by structure constants.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, SVec};
use crate::poly::{GeneratorSet, NCPoly, Word};
use crate::rewrite::{complete_rewrite, AlgebraPresentation, RewriteSystem};
use crate::scalar::Q;

/// Basis element 0 is always the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct FinDimAlgebra {
    pub labels: Vec<String>,
    pub words: Option<Vec<Word>>,
    pub gens: Option<GeneratorSet>,
    pub weights: Option<Vec<usize>>,
    pub truncated: bool,
    pub cap: Option<usize>,
    table: Vec<Vec<Vec<(usize, Q)>>>,
}

impl FinDimAlgebra {
    /// Build from explicit structure constants `(i, j, k, c)` meaning
    /// `e_i e_j` has coefficient `c` on `e_k`.
    pub fn from_constants(labels: Vec<String>, consts: &[(usize, usize, usize, Q)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::input("empty basis"));
        }
        let mut dense = vec![vec![SVec::new(); n]; n];
        for (i, j, k, c) in consts {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::input(format!("structure constant index out of range: ({i},{j},{k})")));
            }
            add_entry(&mut dense[*i][*j], *k, c.clone());
        }
        let table = dense
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().collect()).collect())
            .collect();
        let a = Self { labels, words: None, gens: None, weights: None, truncated: false, cap: None, table };
        if let Some((i, j)) = a.unit_violation() {
            return Err(Error::input(format!("basis element 0 is not a unit (fails on pair {i},{j})")));
        }
        if let Some((i, j, k)) = a.associativity_violations().first() {
            return Err(Error::input(format!("structure constants not associative on ({i},{j},{k})")));
        }
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Sparse product of basis elements.
    pub fn mul(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    pub fn mul_vec(&self, a: &SVec, b: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in self.mul(*i, *j) {
                    add_entry(&mut out, *k, &xy * c);
                }
            }
        }
        out
    }

    pub fn weight(&self, i: usize) -> Option<usize> {
        self.weights.as_ref().map(|w| w[i])
    }

    pub fn unit_violation(&self) -> Option<(usize, usize)> {
        for j in 0..self.dim() {
            let expect = [(j, Q::one())];
            if self.mul(0, j) != expect {
                return Some((0, j));
            }
            if self.mul(j, 0) != expect {
                return Some((j, 0));
            }
        }
        None
    }

    /// Basis triples on which `(ab)c ≠ a(bc)`.
    pub fn associativity_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut l = SVec::new();
                    for (m, c) in self.mul(i, j) {
                        for (p, d) in self.mul(*m, k) {
                            add_entry(&mut l, *p, c * d);
                        }
                    }
                    let mut r = SVec::new();
                    for (m, c) in self.mul(j, k) {
                        for (p, d) in self.mul(i, *m) {
                            add_entry(&mut r, *p, c * d);
                        }
                    }
                    if l != r {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Structure constants as `(i, j, k, c)` triples.
    pub fn constants(&self) -> Vec<(usize, usize, usize, Q)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in self.mul(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    /// Index of a basis word, when the algebra came from a presentation.
    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.words.as_ref()?.iter().position(|x| x.as_slice() == w)
    }

    /// Coordinates of a normal-form polynomial (words above the cap dropped).
    pub fn poly_to_vec(&self, p: &NCPoly) -> Result<SVec> {
        let mut v = SVec::new();
        for (w, c) in &p.terms {
            match self.word_index(w) {
                Some(i) => add_entry(&mut v, i, c.clone()),
                None => {
                    let g = self.gens.as_ref().ok_or_else(|| Error::input("algebra has no words"))?;
                    if self.cap.is_none_or(|cap| g.weight(w) <= cap) {
                        return Err(Error::input(format!("word {} is not a basis word", g.word_string(w))));
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn vec_string(&self, v: &SVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{}*{}", crate::scalar::fmt_q(c), self.labels[*i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Normal words of weight at most `cap`, with truncated multiplication.
pub fn build_findim(pres: &AlgebraPresentation, cap: usize) -> Result<FinDimAlgebra> {
    build_findim_limited(pres, cap, crate::size_limit())
}

pub fn build_findim_limited(pres: &AlgebraPresentation, cap: usize, limit: usize) -> Result<FinDimAlgebra> {
    let mut p = pres.clone();
    p.degree_cap = cap;
    let rs = complete_rewrite(&p)?;
    from_rewrite(&rs, cap, limit)
}

pub fn from_rewrite(rs: &RewriteSystem, cap: usize, limit: usize) -> Result<FinDimAlgebra> {
    let gens = rs.gens.clone();
    let mut words: Vec<Word> = Vec::new();
    for wt in 0..=cap {
        words.extend(rs.normal_words(wt));
        if words.len() > limit {
            return Err(Error::SizeLimit { size: words.len(), limit });
        }
    }
    let index: std::collections::HashMap<Word, usize> =
        words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let n = words.len();
    let mut truncated = false;
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut w = words[i].clone();
            w.extend_from_slice(&words[j]);
            let nf = rs.reduce_word(&w);
            let mut v = SVec::new();
            for (m, c) in nf.terms {
                match index.get(&m) {
                    Some(&k) => add_entry(&mut v, k, c),
                    None => truncated = true,
                }
            }
            table[i][j] = v.into_iter().collect();
        }
    }
    let labels = words.iter().map(|w| gens.word_string(w)).collect();
    let weights = words.iter().map(|w| gens.weight(w)).collect();
    Ok(FinDimAlgebra {
        labels,
        words: Some(words),
        gens: Some(gens),
        weights: Some(weights),
        truncated,
        cap: Some(cap),
        table,
    })
}

/// The algebras used throughout the test suites.
pub mod standard {
    use super::*;

    fn build(names: &[&str], rels: &[&str], cap: usize) -> FinDimAlgebra {
        let pres = AlgebraPresentation::parse(names, rels, cap).expect("valid presentation");
        build_findim_limited(&pres, cap, usize::MAX).expect("standard algebra builds")
    }

    /// The ground field.
    pub fn ground_field() -> FinDimAlgebra {
        build(&[], &[], 1)
    }

    /// k[e]/(e^2)
    pub fn dual_numbers() -> FinDimAlgebra {
        build(&["e"], &["e*e"], 3)
    }

    /// k[x]/(x^n)
    pub fn truncated_poly(n: usize) -> FinDimAlgebra {
        let rel = vec!["x"; n].join("*");
        build(&["x"], &[rel.as_str()], 2 * n - 1)
    }

    /// Free algebra on x, y modulo words of weight above `cap`.
    pub fn free_xy(cap: usize) -> FinDimAlgebra {
        build(&["x", "y"], &[], cap)
    }

    /// k[x, y] modulo monomials of weight above `cap`.
    pub fn comm_xy(cap: usize) -> FinDimAlgebra {
        build(&["x", "y"], &["x*y - y*x"], cap)
    }

    /// The acceptance test set.
    pub fn test_set() -> Vec<(&'static str, FinDimAlgebra)> {
        vec![
            ("k", ground_field()),
            ("k[e]", dual_numbers()),
            ("k[x]/x^3", truncated_poly(3)),
            ("k<x,y> cap 3", free_xy(3)),
            ("k[x,y] cap 3", comm_xy(3)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::scalar::q;

    #[test]
    fn dual_numbers_basis() {
        let a = dual_numbers();
        assert_eq!(a.labels, vec!["1", "e"]);
        assert!(!a.truncated);
        assert!(a.mul(1, 1).is_empty());
    }

    #[test]
    fn free_cap_two() {
        let a = free_xy(2);
        assert_eq!(a.dim(), 1 + 2 + 4);
        assert_eq!(a.labels, vec!["1", "x", "y", "x*x", "x*y", "y*x", "y*y"]);
        assert!(a.truncated);
    }

    #[test]
    fn cubic_truncation() {
        let pres = AlgebraPresentation::parse(&["x"], &["x*x*x"], 5).unwrap();
        let a = build_findim(&pres, 5).unwrap();
        assert_eq!(a.labels, vec!["1", "x", "x*x"]);
        assert!(!a.truncated);
        assert!(a.associativity_violations().is_empty());
    }

    #[test]
    fn graded_truncations_stay_associative() {
        for a in [free_xy(3), comm_xy(3), truncated_poly(3), ground_field()] {
            assert!(a.unit_violation().is_none());
            assert!(a.associativity_violations().is_empty());
        }
    }

    #[test]
    fn weyl_truncation_reports_violations() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &["x*y - y*x - 1"], 2).unwrap();
        let a = build_findim(&pres, 2).unwrap();
        assert!(a.truncated);
        assert!(!a.associativity_violations().is_empty());
    }

    #[test]
    fn explicit_constants() {
        let labels = vec!["1".to_string(), "e".to_string()];
        let c = vec![(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))];
        let a = FinDimAlgebra::from_constants(labels.clone(), &c).unwrap();
        assert_eq!(a.constants(), dual_numbers().constants());
        let bad = vec![(0, 0, 0, q(1)), (0, 1, 1, q(1))];
        assert!(FinDimAlgebra::from_constants(labels, &bad).is_err());
    }

    #[test]
    fn size_limit_enforced() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &[], 6).unwrap();
        assert!(matches!(build_findim_limited(&pres, 6, 10), Err(Error::SizeLimit { .. })));
    }
}

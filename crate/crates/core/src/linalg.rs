//! Exact sparse linear algebra over the rationals.
//!
//! Elimination is deterministic: a vector's pivot is its first nonzero
//! coordinate after reduction, so results never depend on insertion timing
//! beyond the order vectors are supplied in.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Sparse vector indexed by coordinate.
pub type SVec = BTreeMap<usize, Q>;

pub fn axpy(y: &mut SVec, a: &Q, x: &SVec) {
    if a.is_zero() {
        return;
    }
    for (i, v) in x {
        add_entry(y, *i, a * v);
    }
}

pub fn add_entry(y: &mut SVec, i: usize, v: Q) {
    if v.is_zero() {
        return;
    }
    match y.entry(i) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
    }
}

pub fn scale(x: &SVec, a: &Q) -> SVec {
    if a.is_zero() {
        return SVec::new();
    }
    x.iter().map(|(i, v)| (*i, v * a)).collect()
}

pub fn sub(x: &SVec, y: &SVec) -> SVec {
    let mut r = x.clone();
    axpy(&mut r, &-Q::one(), y);
    r
}

pub fn unit(i: usize) -> SVec {
    let mut v = SVec::new();
    v.insert(i, Q::one());
    v
}

/// Semi-echelon basis of a subspace; each stored row has leading entry 1
/// at its pivot column and no other stored row shares that pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Vec<(usize, Q)>>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SVec>) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivots.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Canonical representative of `v` modulo the span: zero on every pivot column.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place(&self, v: &mut SVec) {
        if self.rows.is_empty() {
            return;
        }
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).next().map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            if let Some(&r) = self.pivots.get(&c) {
                for (cc, y) in &self.rows[r] {
                    add_entry(v, *cc, -(&x * y));
                }
            }
            cursor = c + 1;
        }
    }

    /// Insert `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SVec) -> bool {
        let Some((&p, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let row: Vec<(usize, Q)> = r.iter().map(|(c, x)| (*c, x * &inv)).collect();
        self.pivots.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduced row echelon basis, sorted by pivot column.
    pub fn rref_basis(&self) -> Vec<SVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        order
            .into_iter()
            .map(|r| {
                let row = &self.rows[r];
                let tail: SVec = row[1..].iter().cloned().collect();
                let mut out = self.reduce(&tail);
                out.insert(row[0].0, Q::one());
                out
            })
            .collect()
    }
}

/// A linear map given by the images of the domain basis vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinMap {
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<SVec>,
}

impl LinMap {
    pub fn new(dom: usize, cod: usize, cols: Vec<SVec>) -> Self {
        debug_assert_eq!(cols.len(), dom);
        Self { dom, cod, cols }
    }

    pub fn zero(dom: usize, cod: usize) -> Self {
        Self { dom, cod, cols: vec![SVec::new(); dom] }
    }

    pub fn identity(n: usize) -> Self {
        Self { dom: n, cod: n, cols: (0..n).map(unit).collect() }
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, x) in v {
            axpy(&mut out, x, &self.cols[*i]);
        }
        out
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinMap) -> LinMap {
        assert_eq!(self.dom, other.cod, "composability");
        LinMap {
            dom: other.dom,
            cod: self.cod,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        assert_eq!((self.dom, self.cod), (other.dom, other.cod));
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                axpy(&mut c, &Q::one(), b);
                c
            })
            .collect();
        LinMap { dom: self.dom, cod: self.cod, cols }
    }

    pub fn scaled(&self, a: &Q) -> LinMap {
        LinMap { dom: self.dom, cod: self.cod, cols: self.cols.iter().map(|c| scale(c, a)).collect() }
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        self.add(&other.scaled(&-Q::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        Echelon::from_vectors(&self.cols).rank()
    }

    pub fn image(&self) -> Echelon {
        Echelon::from_vectors(&self.cols)
    }

    /// Canonical (reduced echelon) basis of the kernel.
    pub fn kernel(&self) -> Vec<SVec> {
        let off = self.cod;
        let mut ech = Echelon::new();
        let mut ker = Echelon::new();
        for (i, c) in self.cols.iter().enumerate() {
            let mut aug = c.clone();
            aug.insert(off + i, Q::one());
            let r = ech.reduce(&aug);
            if r.range(..off).next().is_none() {
                let k: SVec = r.iter().map(|(j, x)| (j - off, x.clone())).collect();
                ker.insert(&k);
            } else {
                ech.insert_reduced(r);
            }
        }
        ker.rref_basis()
    }

    /// Some `x` with `self(x) = b`, if one exists.
    pub fn solve(&self, b: &SVec) -> Option<SVec> {
        let off = self.cod;
        let mut ech = Echelon::new();
        for (i, c) in self.cols.iter().enumerate() {
            let mut aug = c.clone();
            aug.insert(off + i, Q::one());
            ech.insert(&aug);
        }
        let r = ech.reduce(b);
        if r.range(..off).next().is_some() {
            return None;
        }
        Some(r.iter().map(|(j, x)| (j - off, -x.clone())).collect())
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols = vec![SVec::new(); self.cod];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                cols[*i].insert(j, x.clone());
            }
        }
        LinMap { dom: self.cod, cod: self.dom, cols }
    }

    /// Sparse triplets `(row, col, value)` in column order.
    pub fn triplets(&self) -> Vec<(usize, usize, Q)> {
        let mut t = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                t.push((*i, j, x.clone()));
            }
        }
        t
    }
}

/// Homology at a spot `C_in --d_in--> C --d_out--> C_out`.
/// Returns the dimension and canonical representatives (kernel vectors
/// reduced modulo the boundaries, then put in echelon form).
pub fn homology_at(d_in: &LinMap, d_out: &LinMap) -> (usize, Vec<SVec>) {
    let bnd = d_in.image();
    let ker = d_out.kernel();
    let mut reps = Echelon::new();
    let mut combined = bnd.clone();
    for k in &ker {
        let r = combined.reduce(k);
        if !r.is_empty() {
            combined.insert(&r);
            reps.insert(&r);
        }
    }
    let dim = ker.len() - bnd.rank();
    let reps = reps.rref_basis();
    debug_assert_eq!(reps.len(), dim);
    (dim, reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn v(entries: &[(usize, i64)]) -> SVec {
        entries.iter().map(|(i, x)| (*i, q(*x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        // columns: e0, e1, e0+e1
        let m = LinMap::new(3, 2, vec![v(&[(0, 1)]), v(&[(1, 1)]), v(&[(0, 1), (1, 1)])]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k, vec![v(&[(0, 1), (1, 1), (2, -1)])]);
        for kv in &k {
            assert!(m.apply(kv).is_empty());
        }
    }

    #[test]
    fn solve_linear_system() {
        let m = LinMap::new(2, 2, vec![v(&[(0, 2)]), v(&[(0, 1), (1, 3)])]);
        let b = v(&[(0, 5), (1, 6)]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let m2 = LinMap::new(1, 2, vec![v(&[(0, 1)])]);
        assert!(m2.solve(&v(&[(1, 1)])).is_none());
    }

    #[test]
    fn reduce_gives_canonical_rep() {
        let e = Echelon::from_vectors(&[v(&[(0, 1), (1, 1)])]);
        let a = e.reduce(&v(&[(0, 1)]));
        let b = e.reduce(&v(&[(1, -1)]));
        assert_eq!(a, b);
    }

    #[test]
    fn identity_complex_is_acyclic() {
        let id = LinMap::identity(1);
        let z_in = LinMap::zero(0, 1);
        let z_out = LinMap::zero(1, 0);
        assert_eq!(homology_at(&z_in, &id).0, 0);
        assert_eq!(homology_at(&id, &z_out).0, 0);
    }

    #[test]
    fn surjection_homology() {
        // 0 -> Q^2 -> Q -> 0
        let s = LinMap::new(2, 1, vec![v(&[(0, 1)]), v(&[(0, 1)])]);
        assert_eq!(homology_at(&LinMap::zero(0, 2), &s).0, 1);
        assert_eq!(homology_at(&s, &LinMap::zero(1, 0)).0, 0);
    }

    #[test]
    fn rref_is_fully_reduced() {
        let e = Echelon::from_vectors(&[v(&[(0, 1), (1, 2), (2, 3)]), v(&[(1, 1), (2, 1)])]);
        let b = e.rref_basis();
        assert_eq!(b[0], v(&[(0, 1), (2, 1)]));
        assert_eq!(b[1], v(&[(1, 1), (2, 1)]));
    }
}

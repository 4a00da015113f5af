//! Relative forms over a central polynomial base `B = k[c]` and the
//! lift-and-project connection on the periodic complex of `Ω(A;B)`.
//!
//! Everything is weight graded with `c` of positive weight, so each weight
//! piece of the relative complex is finite and no window truncation occurs.
//! `Ω^B A` is `Ω A` modulo the right ideal spanned by `[ω, c] v` and
//! `[ω, dc] v`, computed per (degree, weight) block; `Ω(A;B)` further kills
//! the multiples of `dc`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::findim::{build_findim, FinDimAlgebra};
use crate::forms::{add_term, axpy, key, single, Calculus, Form, Key};
use crate::linalg::{add_entry, Echelon, LinMap, SVec};
use crate::poly::{parse_ncpoly, Generator, GeneratorSet, NCPoly, Word};
use crate::report::Suite;
use crate::rewrite::AlgebraPresentation;
use crate::scalar::{parity, Q};

/// How the free basis `{a_s}` of `A/B` is given.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisSpec {
    /// Normal words of `A` not involving `c`.
    Normal,
    /// Patterns such as `x^i y^j`; exponent letters range over `0..`, the
    /// empty word excluded.
    Patterns(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct RelativeFamily {
    pub pres: AlgebraPresentation,
    pub base: usize,
    pub basis: BasisSpec,
    pub weight_cap: usize,
}

impl RelativeFamily {
    /// `c` is placed before `gens`, so it is the smallest letter and stays
    /// normal; commutators of `c` with every generator are added to `relations`.
    pub fn new(base: Generator, gens: Vec<Generator>, relations: &[String], basis: BasisSpec, weight_cap: usize) -> Result<Self> {
        if weight_cap == 0 {
            return Err(Error::input("weight cap must be positive"));
        }
        let bi = 0;
        let mut all = vec![base];
        all.extend(gens);
        let gs = GeneratorSet::new(all)?;
        let mut rels = relations.iter().map(|r| parse_ncpoly(r, &gs)).collect::<Result<Vec<_>>>()?;
        for g in 1..gs.len() {
            let cg = NCPoly::monomial(vec![bi, g], Q::one());
            rels.push(cg.sub(&NCPoly::monomial(vec![g, bi], Q::one())));
        }
        let pres = AlgebraPresentation::new(gs, rels, weight_cap)?;
        if !pres.is_homogeneous() {
            return Err(Error::input("family relations must be weight homogeneous"));
        }
        Ok(Self { pres, base: bi, basis, weight_cap })
    }

    pub fn base_weight(&self) -> usize {
        self.pres.gens.gens[self.base].weight
    }

    /// No relation mentions `c` apart from the added commutators, so the
    /// family is `B ⊗ A0` and `∇` should be `∂/∂c`.
    pub fn is_trivial(&self) -> bool {
        let n_gens = self.pres.gens.len();
        let user = self.pres.relations.len() + 1 - n_gens;
        self.pres.relations[..user].iter().all(|r| r.terms.keys().all(|w| !w.contains(&self.base)))
    }

    /// `B⟨x,y⟩/(xy − yx − c)` with `c` of weight 2.
    pub fn weyl(cap: usize) -> Self {
        let g = |n: &str, w| Generator { name: n.into(), weight: w };
        Self::new(g("c", 2), vec![g("x", 1), g("y", 1)], &["x*y - y*x - c".into()], BasisSpec::Patterns(vec!["x^i y^j".into()]), cap)
            .expect("valid family")
    }

    /// `B ⊗ k[e]`, `c` of weight 1.
    pub fn trivial(cap: usize) -> Self {
        let g = |n: &str| Generator { name: n.into(), weight: 1 };
        Self::new(g("c"), vec![g("e")], &["e*e".into()], BasisSpec::Patterns(vec!["e".into()]), cap).expect("valid family")
    }
}

/// Words matching `x^i y^j`-style patterns up to weight `cap`.
fn expand_pattern(p: &str, gens: &GeneratorSet, cap: usize) -> Result<Vec<Word>> {
    let mut parts: Vec<(usize, Option<usize>)> = Vec::new();
    for tok in p.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, Some(e)),
            None => (tok, None),
        };
        let g = gens.index(name).ok_or_else(|| Error::input(format!("unknown generator `{name}` in basis pattern `{p}`")))?;
        let fixed = match exp {
            None => Some(1),
            Some(e) if e.chars().all(|ch| ch.is_ascii_digit()) => Some(e.parse().map_err(|_| Error::input(format!("bad exponent in `{p}`")))?),
            Some(e) if e.len() == 1 && e.chars().all(|ch| ch.is_ascii_lowercase()) => None,
            Some(e) => return Err(Error::input(format!("bad exponent `{e}` in basis pattern `{p}`"))),
        };
        parts.push((g, fixed));
    }
    if parts.is_empty() {
        return Err(Error::input("empty basis pattern"));
    }
    let mut out = vec![Vec::new()];
    for (g, fixed) in parts {
        let w = gens.gens[g].weight;
        let mut next = Vec::new();
        for word in out {
            let used = gens.weight(&word);
            let range: Vec<usize> = match fixed {
                Some(e) => vec![e],
                None => (0..=(cap - used.min(cap)) / w).collect(),
            };
            for e in range {
                if used + e * w > cap {
                    continue;
                }
                let mut nw = word.clone();
                nw.extend(std::iter::repeat_n(g, e));
                next.push(nw);
            }
        }
        out = next;
    }
    out.retain(|w| !w.is_empty());
    out.sort();
    out.dedup();
    Ok(out)
}

/// One (degree, weight) block of `Ω A`.
#[derive(Clone, Debug, Default)]
struct Block {
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
    /// the commutator ideal
    rel: Echelon,
    /// the commutator ideal plus multiples of `dc`
    full: Echelon,
    /// columns left free by `full`: the section used for lifts
    reps: Vec<usize>,
    rep_pos: HashMap<usize, usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BlockDims {
    pub degree: usize,
    pub weight: usize,
    pub omega: usize,
    pub relative_b: usize,
    pub relative: usize,
    pub lemma_basis: usize,
    pub lemma_rank: usize,
}

/// Normal-form engine for `Ω^B A` and `Ω(A;B)` below the weight cap.
pub struct Relative {
    pub fam: RelativeFamily,
    pub alg: FinDimAlgebra,
    c: u16,
    wc: usize,
    pub cap: usize,
    /// `a_s` as elements of `A`
    pub basis: Vec<(String, SVec)>,
    blocks: Vec<Vec<Block>>,
    pub dims: Vec<BlockDims>,
    pub suite: Suite,
}

fn weight_of(alg: &FinDimAlgebra, i: usize) -> usize {
    alg.weight(i).unwrap_or(0)
}

fn vec_weight(alg: &FinDimAlgebra, v: &SVec) -> Option<usize> {
    let mut ws = v.keys().map(|&i| weight_of(alg, i));
    let w = ws.next()?;
    ws.all(|x| x == w).then_some(w)
}

/// Forms `u0 du1 … dun` for elements `u_i` of `A`, expanded in keys.
fn form_of(parts: &[&SVec]) -> Form {
    let mut out = Form::new();
    let mut acc: Vec<(Key, Q)> = vec![(SmallVec::new(), Q::one())];
    for p in parts {
        let mut next = Vec::new();
        for (k, c) in &acc {
            for (i, x) in p.iter() {
                if !k.is_empty() && *i == 0 {
                    continue;
                }
                let mut nk = k.clone();
                nk.push(*i as u16);
                next.push((nk, c * x));
            }
        }
        acc = next;
    }
    for (k, c) in acc {
        add_term(&mut out, k, c);
    }
    out
}

impl Relative {
    pub fn build(fam: &RelativeFamily) -> Result<Self> {
        let alg = build_findim(&fam.pres, fam.weight_cap)?;
        let gens = fam.pres.gens.clone();
        let cap = fam.weight_cap;
        let wc = fam.base_weight();
        let c = alg
            .word_index(&[fam.base])
            .ok_or_else(|| Error::input("base variable exceeds the weight cap"))? as u16;
        let words = alg.words.clone().expect("presented algebra has words");
        let basis_words: Vec<Word> = match &fam.basis {
            BasisSpec::Normal => words.iter().filter(|w| !w.is_empty() && !w.contains(&fam.base)).cloned().collect(),
            BasisSpec::Patterns(ps) => {
                let mut all = Vec::new();
                for p in ps {
                    all.extend(expand_pattern(p, &gens, cap)?);
                }
                all.sort();
                all.dedup();
                all
            }
        };
        let mut basis = Vec::new();
        for w in &basis_words {
            if w.contains(&fam.base) {
                return Err(Error::input(format!("basis word `{}` involves the base variable", gens.word_string(w))));
            }
            let v = alg.poly_to_vec(&NCPoly::monomial(w.clone(), Q::one()))?;
            if v.is_empty() {
                return Err(Error::input(format!("basis word `{}` vanishes in A", gens.word_string(w))));
            }
            basis.push((gens.word_string(w), v));
        }
        let mut r = Self { fam: fam.clone(), alg, c, wc, cap, basis, blocks: Vec::new(), dims: Vec::new(), suite: Suite::new("relative forms") };
        r.check_freeness()?;
        r.build_blocks();
        r.certify();
        Ok(r)
    }

    fn calc(&self) -> Calculus<'_> {
        Calculus::new(&self.alg)
    }

    fn c_pow(&self, j: usize) -> SVec {
        let mut v = SVec::new();
        v.insert(0, Q::one());
        for _ in 0..j {
            v = self.alg.mul_vec(&v, &crate::linalg::unit(self.c as usize));
        }
        v
    }

    /// `{c^j, c^j a_s}` must be a basis of every weight piece of `A`.
    fn check_freeness(&self) -> Result<()> {
        for w in 0..=self.cap {
            let dim = (0..self.alg.dim()).filter(|&i| weight_of(&self.alg, i) == w).count();
            let mut gens: Vec<SVec> = Vec::new();
            for j in 0..=w / self.wc {
                let cj = self.c_pow(j);
                if j * self.wc == w {
                    gens.push(cj.clone());
                }
                for (_, a) in &self.basis {
                    if vec_weight(&self.alg, a).map(|x| x + j * self.wc) == Some(w) {
                        gens.push(self.alg.mul_vec(&cj, a));
                    }
                }
            }
            let rank = Echelon::from_vectors(gens.iter()).rank();
            if gens.len() != dim || rank != dim {
                return Err(Error::input(format!(
                    "A/B is not free on the given basis in weight {w}: {} candidates of rank {rank}, dim A = {dim}",
                    gens.len()
                )));
            }
        }
        Ok(())
    }

    fn keys_of(alg: &FinDimAlgebra, cap: usize) -> Vec<Vec<Vec<Key>>> {
        let by_w: Vec<Vec<u16>> =
            (0..=cap).map(|w| (0..alg.dim()).filter(|&i| weight_of(alg, i) == w).map(|i| i as u16).collect()).collect();
        // tails[m][n]: sequences of n elements of positive weight summing to m
        let mut tails: Vec<Vec<Vec<Key>>> = vec![vec![Vec::new(); cap + 1]; cap + 1];
        tails[0][0].push(SmallVec::new());
        for m in 1..=cap {
            for n in 1..=m {
                let mut out = Vec::new();
                for first in 1..=m {
                    for t in &tails[m - first][n - 1] {
                        for &a in &by_w[first] {
                            let mut k: Key = SmallVec::new();
                            k.push(a);
                            k.extend_from_slice(t);
                            out.push(k);
                        }
                    }
                }
                tails[m][n] = out;
            }
        }
        let mut blocks = vec![vec![Vec::new(); cap + 1]; cap + 1];
        for w in 0..=cap {
            for n in 0..=w {
                let mut out = Vec::new();
                for w0 in 0..=w {
                    for &a0 in &by_w[w0] {
                        for t in &tails[w - w0][n] {
                            let mut k: Key = SmallVec::new();
                            k.push(a0);
                            k.extend_from_slice(t);
                            out.push(k);
                        }
                    }
                }
                out.sort();
                blocks[w][n] = out;
            }
        }
        blocks
    }

    fn block(&self, n: usize, w: usize) -> Option<&Block> {
        self.blocks.get(w).and_then(|b| b.get(n))
    }

    fn to_form(&self, n: usize, w: usize, v: &SVec) -> Form {
        let b = &self.blocks[w][n];
        v.iter().map(|(i, x)| (b.keys[*i].clone(), x.clone())).collect()
    }

    fn dc(&self) -> Key {
        key(&[0, self.c as usize])
    }

    fn build_blocks(&mut self) {
        let keys = Self::keys_of(&self.alg, self.cap);
        let mut blocks: Vec<Vec<Block>> = keys
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|ks| {
                        let index = ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
                        Block { keys: ks, index, ..Default::default() }
                    })
                    .collect()
            })
            .collect();
        let calc = self.calc();
        let (c, wc, cap) = (self.c, self.wc, self.cap);
        let dc = self.dc();
        for w in wc..=cap {
            for n in 0..=w {
                let mut rows: Vec<Form> = Vec::new();
                let rest = w - wc;
                for wo in 0..=rest {
                    let wv = rest - wo;
                    for p in 0..=wo {
                        for om in &blocks[wo][p].keys {
                            // [ω, c] v
                            if p <= n && n - p <= wv {
                                let q = n - p;
                                let lhs = calc.right_mul_key(om, c);
                                let rhs = calc.left_mul_key(c, om);
                                let comm = crate::forms::diff(&lhs, &rhs);
                                if !comm.is_empty() {
                                    for v in &blocks[wv][q].keys {
                                        rows.push(mul_form_key(&calc, &comm, v));
                                    }
                                }
                            }
                            // [ω, dc] v
                            if p < n && n - p - 1 <= wv {
                                let q = n - p - 1;
                                let mut comm = calc.mul_keys(om, &dc);
                                axpy(&mut comm, &-parity(p), &calc.mul_keys(&dc, om));
                                if !comm.is_empty() {
                                    for v in &blocks[wv][q].keys {
                                        rows.push(mul_form_key(&calc, &comm, v));
                                    }
                                }
                            }
                        }
                    }
                }
                let b = &blocks[w][n];
                let vecs: Vec<SVec> = rows.iter().map(|f| vec_in(b, f)).collect();
                let rel = Echelon::from_vectors(vecs.iter());
                blocks[w][n].rel = rel;
            }
        }
        for w in 0..=cap {
            for n in 0..=w {
                let mut full = blocks[w][n].rel.clone();
                if n >= 1 && w >= wc {
                    for k in &blocks[w - wc][n - 1].keys {
                        let f = calc.mul_keys(&dc, k);
                        full.insert(&vec_in(&blocks[w][n], &f));
                    }
                }
                let b = &mut blocks[w][n];
                b.reps = (0..b.keys.len()).filter(|i| !full.is_pivot(*i)).collect();
                b.rep_pos = b.reps.iter().enumerate().map(|(p, i)| (*i, p)).collect();
                b.full = full;
            }
        }
        self.blocks = blocks;
    }

    /// Basis section, bijectivity of `α ↦ α dc` onto `F¹`, stability of
    /// the ideals, and `dc dc = 0`.
    fn certify(&mut self) {
        let calc = self.calc();
        let mut suite = Suite::new("relative forms");
        let mut dims = Vec::new();
        let (wc, cap) = (self.wc, self.cap);
        let dc = self.dc();
        let basis_w: Vec<(SVec, usize)> =
            self.basis.iter().map(|(_, v)| (v.clone(), vec_weight(&self.alg, v).unwrap_or(0))).collect();
        let unit = crate::linalg::unit(0);
        for w in 0..=cap {
            for n in 0..=w {
                let b = &self.blocks[w][n];
                // lemma basis: c^j (dc)^e a_{s0} da_{s1} … and c^j (dc)^e da_{s1} …
                let mut elems: Vec<Form> = Vec::new();
                for e in 0..=1usize.min(n) {
                    let m = n - e;
                    let mut seqs: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
                    for _ in 0..m {
                        let mut next = Vec::new();
                        for (s, sw) in &seqs {
                            for (i, (_, aw)) in basis_w.iter().enumerate() {
                                if sw + aw <= w {
                                    let mut ns = s.clone();
                                    ns.push(i);
                                    next.push((ns, sw + aw));
                                }
                            }
                        }
                        seqs = next;
                    }
                    for (s, sw) in &seqs {
                        let heads: Vec<(Option<usize>, usize)> = std::iter::once((None, 0))
                            .chain(basis_w.iter().enumerate().map(|(i, (_, aw))| (Some(i), *aw)))
                            .collect();
                        for (h, hw) in heads {
                            let used = sw + hw + e * wc;
                            if used > w || (w - used) % wc != 0 {
                                continue;
                            }
                            let j = (w - used) / wc;
                            let cj = self.c_pow(j);
                            let head = match h {
                                None => cj.clone(),
                                Some(i) => self.alg.mul_vec(&cj, &basis_w[i].0),
                            };
                            let mut parts: Vec<&SVec> = vec![&head];
                            for i in s {
                                parts.push(&basis_w[*i].0);
                            }
                            let _ = &unit;
                            let mut f = form_of(&parts);
                            if e == 1 {
                                f = calc.mul_forms(&single(dc.clone()), &f);
                            }
                            elems.push(f);
                        }
                    }
                }
                let lemma_rank = {
                    let mut e = b.rel.clone();
                    let before = e.rank();
                    for f in &elems {
                        e.insert(&vec_in(b, f));
                    }
                    e.rank() - before
                };
                let relative_b = b.keys.len() - b.rel.rank();
                let relative = b.keys.len() - b.full.rank();
                suite.record("lemma basis spans and is independent", lemma_rank == relative_b && elems.len() == relative_b, || {
                    format!("degree {n} weight {w}: {} elements of rank {lemma_rank}, dim {relative_b}", elems.len())
                });
                dims.push(BlockDims { degree: n, weight: w, omega: b.keys.len(), relative_b, relative, lemma_basis: elems.len(), lemma_rank });
                // gr^1: Ω(A;B)_{n-1} ⊗ dc → F¹_n
                if n >= 1 && w >= wc {
                    let src = &self.blocks[w - wc][n - 1];
                    let mut img = b.rel.clone();
                    let before = img.rank();
                    for &r in &src.reps {
                        let f = calc.mul_keys(&src.keys[r], &dc);
                        img.insert(&vec_in(b, &f));
                    }
                    let r = img.rank() - before;
                    let target = b.full.rank() - b.rel.rank();
                    suite.record("graded map is bijective", r == src.reps.len() && r == target, || {
                        format!("degree {n} weight {w}: source {} rank {r} target {target}", src.reps.len())
                    });
                }
                // stability of both ideals under d and ι_Δ
                for (name, ech, wide) in [("commutator ideal", &b.rel, false), ("dc filtration", &b.full, true)] {
                    for row in ech.rref_basis() {
                        let f = self.to_form(n, w, &row);
                        if n < w {
                            let tgt = &self.blocks[w][n + 1];
                            let df = vec_in(tgt, &calc.d(&f));
                            let e = if wide { &tgt.full } else { &tgt.rel };
                            suite.record(&format!("{name} stable under d"), e.contains(&df), || format!("degree {n} weight {w}"));
                        }
                        if n >= 1 {
                            let tgt = &self.blocks[w][n - 1];
                            let fi = vec_in(tgt, &calc.iota_delta_fast(&f));
                            let e = if wide { &tgt.full } else { &tgt.rel };
                            suite.record(&format!("{name} stable under iota_Delta"), e.contains(&fi), || format!("degree {n} weight {w}"));
                        }
                    }
                }
            }
        }
        if 2 * wc <= cap {
            let b = &self.blocks[2 * wc][2];
            let f = calc.mul_keys(&dc, &dc);
            suite.record("dc dc = 0", b.rel.contains(&vec_in(b, &f)), || "dc dc survives".into());
        }
        self.dims = dims;
        self.suite = suite;
    }

    pub fn fmt_rel(&self, n: usize, w: usize, v: &SVec) -> String {
        self.calc().fmt_form(&self.to_form(n, w, v))
    }
}

fn vec_in(b: &Block, f: &Form) -> SVec {
    let mut v = SVec::new();
    for (k, x) in f {
        let i = b.index.get(k).expect("form key inside its block");
        add_entry(&mut v, *i, x.clone());
    }
    v
}

fn mul_form_key(calc: &Calculus, f: &Form, k: &Key) -> Form {
    let mut out = Form::new();
    for (k1, x) in f {
        axpy(&mut out, x, &calc.mul_keys(k1, k));
    }
    out
}

/// Element of the periodic complex in one weight: components of a fixed
/// degree parity, in representative coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub weight: usize,
    pub parity: usize,
    pub comps: Vec<(usize, SVec)>,
}

impl Chain {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|(_, v)| v.is_empty())
    }
}

/// The complex `(Ω̄(A;B)_w ⊗ k[t, 1/t], d + t ι_Δ)` in parity `p`.
pub struct Periodic<'r> {
    rel: &'r Relative,
    pub weight: usize,
    /// degrees of each parity and their offsets in the flattened space
    layout: [Vec<(usize, usize, usize)>; 2],
    dims: [usize; 2],
    /// D from parity p to 1 - p
    maps: [LinMap; 2],
    images: [Echelon; 2],
}

impl<'r> Periodic<'r> {
    pub fn new(rel: &'r Relative, w: usize) -> Self {
        let mut layout: [Vec<(usize, usize, usize)>; 2] = [Vec::new(), Vec::new()];
        let mut dims = [0usize; 2];
        for n in 0..=w {
            let len = rel.blocks[w][n].reps.len();
            layout[n % 2].push((n, dims[n % 2], len));
            dims[n % 2] += len;
        }
        let mut p = Self { rel, weight: w, layout, dims, maps: [LinMap::zero(0, 0), LinMap::zero(0, 0)], images: [Echelon::new(), Echelon::new()] };
        for par in 0..2 {
            let mut cols = Vec::with_capacity(dims[par]);
            for &(n, _, len) in &p.layout[par] {
                for pos in 0..len {
                    let mut v = SVec::new();
                    v.insert(pos, Q::one());
                    cols.push(p.flatten(&p.apply(&[(n, v)])));
                }
            }
            p.maps[par] = LinMap::new(dims[par], dims[1 - par], cols);
        }
        p.images = [p.maps[0].image(), p.maps[1].image()];
        p
    }

    pub fn dim(&self, par: usize) -> usize {
        self.dims[par]
    }

    /// `D = d + t ι_Δ` on representative coordinates, reduced modulo `F¹`.
    fn apply(&self, comps: &[(usize, SVec)]) -> Vec<(usize, SVec)> {
        let w = self.weight;
        let calc = self.rel.calc();
        let mut out: HashMap<usize, SVec> = HashMap::new();
        for (n, v) in comps {
            let b = &self.rel.blocks[w][*n];
            let f: Form = v.iter().map(|(p, x)| (b.keys[b.reps[*p]].clone(), x.clone())).collect();
            if *n < w {
                let df = vec_in(&self.rel.blocks[w][n + 1], &calc.d(&f));
                crate::linalg::axpy(out.entry(n + 1).or_default(), &Q::one(), &df);
            }
            if *n >= 1 {
                let fi = vec_in(&self.rel.blocks[w][n - 1], &calc.iota_delta_fast(&f));
                crate::linalg::axpy(out.entry(n - 1).or_default(), &Q::one(), &fi);
            }
        }
        let mut res: Vec<(usize, SVec)> = out
            .into_iter()
            .map(|(n, v)| {
                let b = &self.rel.blocks[w][n];
                let r = b.full.reduce(&v);
                (n, r.into_iter().map(|(i, x)| (b.rep_pos[&i], x)).collect())
            })
            .collect();
        res.sort_by_key(|(n, _)| *n);
        res
    }

    fn flatten(&self, comps: &[(usize, SVec)]) -> SVec {
        let mut out = SVec::new();
        for (n, v) in comps {
            if v.is_empty() {
                continue;
            }
            let par = n % 2;
            let &(_, off, _) = self.layout[par].iter().find(|(m, _, _)| m == n).expect("degree in layout");
            for (i, x) in v {
                add_entry(&mut out, off + i, x.clone());
            }
        }
        out
    }

    fn unflatten(&self, par: usize, v: &SVec) -> Chain {
        let comps = self.layout[par]
            .iter()
            .map(|&(n, off, len)| (n, v.range(off..off + len).map(|(i, x)| (i - off, x.clone())).collect()))
            .collect();
        Chain { weight: self.weight, parity: par, comps }
    }

    pub fn cycles(&self, par: usize) -> Vec<Chain> {
        self.maps[par].kernel().iter().map(|v| self.unflatten(par, v)).collect()
    }

    pub fn is_cycle(&self, c: &Chain) -> bool {
        self.maps[c.parity].apply(&self.flatten(&c.comps)).is_empty()
    }

    pub fn is_boundary(&self, c: &Chain) -> bool {
        self.images[1 - c.parity].contains(&self.flatten(&c.comps))
    }

    pub fn boundary_of(&self, c: &Chain) -> Chain {
        self.unflatten(1 - c.parity, &self.maps[c.parity].apply(&self.flatten(&c.comps)))
    }

    /// Homology dimension in parity `par`.
    pub fn homology_dim(&self, par: usize) -> usize {
        self.dims[par] - self.images[par].rank() - self.images[1 - par].rank()
    }
}

/// `F¹` component fed into a lift: `dc · γ_{n-1}` for each degree `n`.
pub type Perturbation = Vec<(usize, Form)>;

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionValue {
    pub weight: usize,
    pub parity: usize,
    pub input: String,
    pub value: String,
    pub value_is_boundary: bool,
    pub residue_in_f1: bool,
    pub value_is_cycle: bool,
}

impl Relative {
    fn chain_form(&self, c: &Chain) -> Vec<(usize, Form)> {
        c.comps
            .iter()
            .map(|(n, v)| {
                let b = &self.blocks[c.weight][*n];
                (*n, v.iter().map(|(p, x)| (b.keys[b.reps[*p]].clone(), x.clone())).collect())
            })
            .collect()
    }

    pub fn fmt_chain(&self, c: &Chain) -> String {
        let calc = self.calc();
        let parts: Vec<String> = self
            .chain_form(c)
            .iter()
            .filter(|(_, f)| !f.is_empty())
            .map(|(n, f)| format!("[{n}] {}", calc.fmt_form(f)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ; ")
        }
    }

    /// Class of a relative form in representative coordinates.
    fn project(&self, n: usize, w: usize, f: &Form) -> SVec {
        let b = &self.blocks[w][n];
        b.full.reduce(&vec_in(b, f)).into_iter().map(|(i, x)| (b.rep_pos[&i], x)).collect()
    }

    /// `c^j · z`.
    pub fn mul_c(&self, z: &Chain, j: usize) -> Result<Chain> {
        let w = z.weight + j * self.wc;
        if w > self.cap {
            return Err(Error::input("product exceeds the weight cap"));
        }
        let calc = self.calc();
        let cj = self.c_pow(j);
        let comps = self
            .chain_form(z)
            .into_iter()
            .map(|(n, f)| {
                let mut g = Form::new();
                for (i, x) in &cj {
                    axpy(&mut g, x, &calc.left_mul(*i as u16, &f));
                }
                (n, self.project(n, w, &g))
            })
            .collect();
        Ok(Chain { weight: w, parity: z.parity, comps })
    }

    /// Lift `z` through the basis section plus `perturb`, apply `d + t ι_Δ`
    /// in `Ω^B A`, and read off `α` with `dc · α` equal to the result.
    pub fn connect(&self, z: &Chain, perturb: &Perturbation) -> Result<(Chain, bool)> {
        let w = z.weight;
        let calc = self.calc();
        let mut lift: HashMap<usize, Form> = self.chain_form(z).into_iter().collect();
        for (n, g) in perturb {
            let e = lift.entry(*n).or_default();
            axpy(e, &Q::one(), g);
        }
        let mut res: HashMap<usize, Form> = HashMap::new();
        for (n, f) in &lift {
            if *n < w {
                axpy(res.entry(n + 1).or_default(), &Q::one(), &calc.d(f));
            }
            if *n >= 1 {
                axpy(res.entry(n - 1).or_default(), &Q::one(), &calc.iota_delta_fast(f));
            }
        }
        let mut in_f1 = true;
        let mut comps = Vec::new();
        let wa = w.checked_sub(self.wc);
        for (m, f) in res {
            let b = &self.blocks[w][m];
            let v = b.rel.reduce(&vec_in(b, &f));
            if !b.full.contains(&v) {
                in_f1 = false;
                continue;
            }
            if v.is_empty() {
                continue;
            }
            let Some(wa) = wa else {
                in_f1 = false;
                continue;
            };
            if m == 0 {
                in_f1 = false;
                continue;
            }
            let Some(src) = self.block(m - 1, wa) else {
                in_f1 = false;
                continue;
            };
            let cols: Vec<SVec> = src
                .reps
                .iter()
                .map(|&r| b.rel.reduce(&vec_in(b, &calc.mul_keys(&self.dc(), &src.keys[r]))))
                .collect();
            let map = LinMap::new(src.reps.len(), b.keys.len(), cols);
            match map.solve(&v) {
                Some(a) => comps.push((m - 1, a)),
                None => in_f1 = false,
            }
        }
        comps.sort_by_key(|(n, _)| *n);
        let wa = wa.unwrap_or(0);
        let full: Vec<(usize, SVec)> = (0..=wa)
            .filter(|n| n % 2 == z.parity)
            .map(|n| (n, comps.iter().find(|(m, _)| *m == n).map(|(_, v)| v.clone()).unwrap_or_default()))
            .collect();
        Ok((Chain { weight: wa, parity: z.parity, comps: full }, in_f1))
    }

    /// Random `dc · γ` perturbation for the lift of a chain.
    pub fn random_perturbation(&self, z: &Chain, rng: &mut impl Rng) -> Perturbation {
        let mut out = Vec::new();
        let Some(wa) = z.weight.checked_sub(self.wc) else { return out };
        let calc = self.calc();
        for n in (1..=z.weight).filter(|n| n % 2 == z.parity) {
            if n - 1 > wa {
                continue;
            }
            let src = &self.blocks[wa][n - 1];
            let mut g = Form::new();
            for k in &src.keys {
                if rng.gen_range(0..3) == 0 {
                    add_term(&mut g, k.clone(), Q::from(rng.gen_range(-2i64..=2)));
                }
            }
            out.push((n, calc.mul_forms(&single(self.dc()), &g)));
        }
        out
    }

    /// `∂/∂c` applied slotwise; meaningful when `A = B ⊗ A₀`.
    pub fn d_dc(&self, z: &Chain) -> Chain {
        let w = z.weight;
        let Some(wa) = w.checked_sub(self.wc) else {
            return Chain { weight: 0, parity: z.parity, comps: Vec::new() };
        };
        let words = self.alg.words.as_ref().expect("words");
        let base = self.fam.base;
        let gens = &self.fam.pres.gens;
        let del: Vec<SVec> = words
            .iter()
            .map(|word| {
                let m = word.iter().filter(|&&g| g == base).count();
                if m == 0 {
                    return SVec::new();
                }
                let mut rest = word.clone();
                let pos = rest.iter().position(|&g| g == base).unwrap();
                rest.remove(pos);
                let v = self.alg.poly_to_vec(&NCPoly::monomial(rest, Q::from(m as i64))).expect("in range");
                let _ = gens;
                v
            })
            .collect();
        let mut comps = Vec::new();
        for (n, f) in self.chain_form(z) {
            let mut g = Form::new();
            for (k, x) in &f {
                for slot in 0..k.len() {
                    for (i, y) in &del[k[slot] as usize] {
                        if slot > 0 && *i == 0 {
                            continue;
                        }
                        let mut nk = k.clone();
                        nk[slot] = *i as u16;
                        add_term(&mut g, nk, x * y);
                    }
                }
            }
            if n <= wa {
                comps.push((n, self.project(n, wa, &g)));
            } else {
                debug_assert!(g.is_empty());
            }
        }
        Chain { weight: wa, parity: z.parity, comps }
    }

    /// `D(lift(z) · c^j dc)` vanishes in `Ω^B A`.
    pub fn f2_vanishes(&self, z: &Chain, j: usize) -> Option<bool> {
        let w = z.weight + (j + 1) * self.wc;
        if w > self.cap {
            return None;
        }
        let calc = self.calc();
        let cj = self.c_pow(j);
        let mut beta = Form::new();
        for (i, x) in &cj {
            axpy(&mut beta, x, &calc.left_mul_key(*i as u16, &self.dc()));
        }
        Some(self.f2_total(z, &beta, w))
    }

    fn f2_total(&self, z: &Chain, beta: &Form, w: usize) -> bool {
        let calc = self.calc();
        let mut res: HashMap<usize, Form> = HashMap::new();
        for (n, f) in self.chain_form(z) {
            let g = calc.mul_forms(&f, beta);
            axpy(res.entry(n + 2).or_default(), &Q::one(), &calc.d(&g));
            axpy(res.entry(n).or_default(), &Q::one(), &calc.iota_delta_fast(&g));
        }
        res.iter().all(|(m, h)| {
            if h.is_empty() {
                return true;
            }
            let b = &self.blocks[w][*m];
            b.rel.contains(&vec_in(b, h))
        })
    }
}

pub fn sub_chain(a: &Chain, b: &Chain) -> Chain {
    let mut comps: Vec<(usize, SVec)> = a.comps.clone();
    for (n, v) in &b.comps {
        match comps.iter_mut().find(|(m, _)| m == n) {
            Some((_, x)) => crate::linalg::axpy(x, &-Q::one(), v),
            None => comps.push((*n, crate::linalg::scale(v, &-Q::one()))),
        }
    }
    comps.sort_by_key(|(n, _)| *n);
    Chain { weight: a.weight.max(b.weight), parity: a.parity, comps }
}

fn scale_chain(a: &Chain, s: &Q) -> Chain {
    Chain { weight: a.weight, parity: a.parity, comps: a.comps.iter().map(|(n, v)| (*n, crate::linalg::scale(v, s))).collect() }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSample {
    pub weight: usize,
    pub parity: usize,
    pub nonzero_class: bool,
    pub connection: ConnectionValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct GmReport {
    pub weight_cap: usize,
    pub base_weight: usize,
    pub dims: Vec<BlockDims>,
    /// `dim H` of the periodic complex per weight, even then odd
    pub homology: Vec<(usize, [usize; 2])>,
    pub samples: Vec<ClassSample>,
    pub nonzero_classes: usize,
    pub curvature_note: &'static str,
    pub suite: Suite,
}

fn random_cycle(cycles: &[Chain], rng: &mut impl Rng) -> Option<Chain> {
    let first = cycles.first()?;
    let mut acc = Chain { weight: first.weight, parity: first.parity, comps: first.comps.iter().map(|(n, _)| (*n, SVec::new())).collect() };
    for c in cycles {
        let x = Q::from(rng.gen_range(-2i64..=2));
        if !x.is_zero() {
            acc = sub_chain(&acc, &scale_chain(c, &-x));
        }
    }
    Some(acc)
}

/// Connection values, both product rules and lift independence on random
/// cycles of every weight; `trivial` adds the comparison with `∂/∂c`.
pub fn gm_flatness(rel: &Relative, per_block: usize, seed: u64, trivial: bool) -> GmReport {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut suite = rel.suite.clone();
    suite.name = "gauss-manin".into();
    let mut samples = Vec::new();
    let mut homology = Vec::new();
    let cxs: Vec<Periodic> = (0..=rel.cap).map(|w| Periodic::new(rel, w)).collect();
    for w in 1..=rel.cap {
        homology.push((w, [cxs[w].homology_dim(0), cxs[w].homology_dim(1)]));
    }
    for w in 1..=rel.cap {
        for par in 0..2 {
            let cycles = cxs[w].cycles(par);
            if cycles.is_empty() {
                continue;
            }
            let mut picks: Vec<Chain> = Vec::new();
            // the cycle basis vectors that carry classes first, then random mixes
            for c in &cycles {
                if !cxs[w].is_boundary(c) && picks.len() < per_block {
                    picks.push(c.clone());
                }
            }
            while picks.len() < per_block {
                match random_cycle(&cycles, &mut rng) {
                    Some(c) => picks.push(c),
                    None => break,
                }
            }
            for z in picks {
                let nonzero = !cxs[w].is_boundary(&z);
                let Ok((alpha, in_f1)) = rel.connect(&z, &Vec::new()) else { continue };
                suite.record("lift residue lies in F1", in_f1, || format!("weight {w}: {}", rel.fmt_chain(&z)));
                let wa = alpha.weight;
                let alpha_cycle = cxs[wa].is_cycle(&alpha);
                suite.record("connection value is a cycle", alpha_cycle, || rel.fmt_chain(&alpha));
                let alpha_bd = cxs[wa].is_boundary(&alpha);
                // perturbed lift
                let pert = rel.random_perturbation(&z, &mut rng);
                if let Ok((alpha2, ok2)) = rel.connect(&z, &pert) {
                    let same = ok2 && cxs[wa].is_boundary(&sub_chain(&alpha, &alpha2));
                    suite.record("independent of the lift", same, || format!("weight {w}: {}", rel.fmt_chain(&z)));
                }
                // another representative of the same class
                if w >= 1 {
                    let other = 1 - par;
                    let chains = cxs[w].dim(other);
                    if chains > 0 {
                        let mut y = SVec::new();
                        for i in 0..chains {
                            if rng.gen_range(0..3) == 0 {
                                add_entry(&mut y, i, Q::from(rng.gen_range(-2i64..=2)));
                            }
                        }
                        let yb = cxs[w].boundary_of(&cxs[w].unflatten(other, &y));
                        let z2 = sub_chain(&z, &scale_chain(&yb, &-Q::one()));
                        if let Ok((alpha3, ok3)) = rel.connect(&z2, &Vec::new()) {
                            let same = ok3 && cxs[wa].is_boundary(&sub_chain(&alpha, &alpha3));
                            suite.record("independent of the representative", same, || format!("weight {w}: {}", rel.fmt_chain(&z)));
                        }
                    }
                }
                // ∇(c^j z) = c^j ∇z + j c^{j-1} z
                for j in 1..=2usize {
                    let Ok(cz) = rel.mul_c(&z, j) else { continue };
                    let Ok((lhs, ok)) = rel.connect(&cz, &Vec::new()) else { continue };
                    let mut rhs = rel.mul_c(&alpha, j).expect("in range");
                    if j >= 1 {
                        let zc = if j == 1 { z.clone() } else { rel.mul_c(&z, j - 1).expect("in range") };
                        rhs = sub_chain(&rhs, &scale_chain(&zc, &-Q::from(j as i64)));
                    }
                    let diff = sub_chain(&lhs, &rhs);
                    let ok = ok && cxs[diff.weight].is_boundary(&diff);
                    suite.record("product rule for functions of c", ok, || format!("j = {j}, weight {w}: {}", rel.fmt_chain(&z)));
                }
                // ∇(z ⊗ c^j dc) = 0
                for j in 0..=1usize {
                    if let Some(ok) = rel.f2_vanishes(&z, j) {
                        suite.record("product rule for one-forms", ok, || format!("j = {j}, weight {w}: {}", rel.fmt_chain(&z)));
                    }
                }
                if trivial {
                    let dz = rel.d_dc(&z);
                    let diff = sub_chain(&alpha, &dz);
                    let ok = cxs[wa].is_boundary(&diff);
                    suite.record("equals d/dc coefficientwise", ok, || format!("weight {w}: {}", rel.fmt_chain(&z)));
                }
                samples.push(ClassSample {
                    weight: w,
                    parity: par,
                    nonzero_class: nonzero,
                    connection: ConnectionValue {
                        weight: w,
                        parity: par,
                        input: rel.fmt_chain(&z),
                        value: rel.fmt_chain(&alpha),
                        value_is_boundary: alpha_bd,
                        residue_in_f1: in_f1,
                        value_is_cycle: alpha_cycle,
                    },
                });
            }
        }
    }
    let nonzero_classes = samples.iter().filter(|s| s.nonzero_class).count();
    GmReport {
        weight_cap: rel.cap,
        base_weight: rel.wc,
        dims: rel.dims.clone(),
        homology,
        samples,
        nonzero_classes,
        curvature_note: "one base variable: curvature lies in the zero space of two-forms on k[c]",
        suite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_detection() {
        assert!(RelativeFamily::trivial(3).is_trivial());
        assert!(!RelativeFamily::weyl(4).is_trivial());
    }

    #[test]
    fn patterns_expand() {
        let g = GeneratorSet::plain(&["x", "y"]);
        let ws = expand_pattern("x^i y^j", &g, 2).unwrap();
        assert_eq!(ws.len(), 5);
        assert!(expand_pattern("z^i", &g, 2).is_err());
        assert_eq!(expand_pattern("x y^2", &g, 3).unwrap(), vec![vec![0, 1, 1]]);
    }

    #[test]
    fn freeness_rejects_bad_basis() {
        let g = |n: &str| Generator { name: n.into(), weight: 1 };
        // x alone misses y
        let fam = RelativeFamily::new(g("c"), vec![g("x"), g("y")], &["x*y - y*x".into()], BasisSpec::Patterns(vec!["x^i".into()]), 3).unwrap();
        assert!(Relative::build(&fam).is_err());
        let fam = RelativeFamily::new(g("c"), vec![g("e")], &["e*e".into()], BasisSpec::Normal, 3).unwrap();
        assert!(Relative::build(&fam).is_ok());
    }

    #[test]
    fn trivial_family_certified() {
        let rel = Relative::build(&RelativeFamily::trivial(4)).unwrap();
        assert!(rel.suite.passed(), "{:?}", rel.suite.failures());
        // Ω(A;B) in weight w, degree 0 is A_w minus nothing: {c^w, c^(w-1) e}
        let d = rel.dims.iter().find(|d| d.degree == 0 && d.weight == 2).unwrap();
        assert_eq!((d.relative_b, d.relative), (2, 2));
        let rep = gm_flatness(&rel, 3, 1, true);
        assert!(rep.suite.passed(), "{:?}", rep.suite.failures());
        // reduced periodic homology over B is c k[c]: one even class per weight
        for (w, h) in &rep.homology {
            assert_eq!(*h, [1, 0], "weight {w}");
        }
    }

    #[test]
    fn trivial_family_values() {
        let rel = Relative::build(&RelativeFamily::trivial(4)).unwrap();
        let cx: Vec<Periodic> = (0..=4).map(|w| Periodic::new(&rel, w)).collect();
        // z = c^2 in degree 0 of weight 2; ∇ z = 2c
        let c1 = Chain { weight: 1, parity: 0, comps: vec![(0, rel.project(0, 1, &single(key(&[rel.c as usize]))))] };
        let c2 = rel.mul_c(&c1, 1).unwrap();
        let (a, ok) = rel.connect(&c2, &Vec::new()).unwrap();
        assert!(ok);
        let twice = scale_chain(&c1, &Q::from(2));
        assert!(cx[1].is_boundary(&sub_chain(&a, &twice)));
        assert!(!cx[1].is_boundary(&a));
        // c itself: ∇ c = 1, a class in weight 0
        let (a1, ok1) = rel.connect(&c1, &Vec::new()).unwrap();
        assert!(ok1 && a1.weight == 0 && !cx[0].is_boundary(&a1));
    }

    #[test]
    fn weyl_family_certified() {
        let rel = Relative::build(&RelativeFamily::weyl(4)).unwrap();
        assert!(rel.suite.passed(), "{:?}", rel.suite.failures());
        let rep = gm_flatness(&rel, 2, 3, false);
        assert!(rep.suite.passed(), "{:?}", rep.suite.failures());
        assert!(rep.nonzero_classes >= 2);
    }
}

//! Rewriting systems for presented algebras, completed below a weight cap.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{GeneratorSet, NCPoly, Word};
use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation {
    pub gens: GeneratorSet,
    pub relations: Vec<NCPoly>,
    pub degree_cap: usize,
}

impl AlgebraPresentation {
    pub fn new(gens: GeneratorSet, relations: Vec<NCPoly>, degree_cap: usize) -> Result<Self> {
        if degree_cap == 0 {
            return Err(Error::input("degree cap must be positive"));
        }
        Ok(Self { gens, relations, degree_cap })
    }

    pub fn parse(names: &[&str], relations: &[&str], degree_cap: usize) -> Result<Self> {
        let gens = GeneratorSet::plain(names);
        let rels = relations
            .iter()
            .map(|r| crate::poly::parse_ncpoly(r, &gens))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens, rels, degree_cap)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(|r| r.is_homogeneous(&self.gens))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lead: Word,
    /// Replacement for `lead`; every word is smaller than `lead`.
    pub rhs: NCPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteSystem {
    pub gens: GeneratorSet,
    pub rules: Vec<Rule>,
    pub order: &'static str,
    pub completion_cap: usize,
    /// Overlap words above the cap whose resolution was not attempted.
    pub unresolved_overlaps: Vec<Word>,
    lookup: HashMap<Word, usize>,
    max_lead: usize,
}

/// Working polynomial keyed so that iteration follows the monomial order.
type Ordered = BTreeMap<(usize, Word), Q>;

impl RewriteSystem {
    fn from_rules(gens: GeneratorSet, rules: Vec<Rule>, cap: usize, unresolved: Vec<Word>) -> Self {
        let lookup = rules.iter().enumerate().map(|(i, r)| (r.lead.clone(), i)).collect();
        let max_lead = rules.iter().map(|r| r.lead.len()).max().unwrap_or(0);
        Self {
            gens,
            rules,
            order: "weight-lex",
            completion_cap: cap,
            unresolved_overlaps: unresolved,
            lookup,
            max_lead,
        }
    }

    /// First rule occurrence in `w`: (position, rule index).
    pub fn find_redex(&self, w: &[usize]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for len in 1..=self.max_lead.min(w.len() - start) {
                if let Some(&r) = self.lookup.get(&w[start..start + len]) {
                    return Some((start, r));
                }
            }
        }
        None
    }

    /// All rule occurrences in `w`.
    pub fn all_redexes(&self, w: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for start in 0..w.len() {
            for len in 1..=self.max_lead.min(w.len() - start) {
                if let Some(&r) = self.lookup.get(&w[start..start + len]) {
                    out.push((start, r));
                }
            }
        }
        out
    }

    pub fn is_normal(&self, w: &[usize]) -> bool {
        self.find_redex(w).is_none()
    }

    /// Replace the occurrence of rule `r` at `pos` in `w`.
    pub fn rewrite_at(&self, w: &[usize], pos: usize, r: usize) -> NCPoly {
        let rule = &self.rules[r];
        let mut out = NCPoly::zero();
        for (m, c) in &rule.rhs.terms {
            let mut nw = w[..pos].to_vec();
            nw.extend_from_slice(m);
            nw.extend_from_slice(&w[pos + rule.lead.len()..]);
            out.add_term(nw, c.clone());
        }
        out
    }

    /// Normal form of `p`.
    pub fn reduce(&self, p: &NCPoly) -> Result<NCPoly> {
        let mw = p.max_weight(&self.gens);
        if mw > self.completion_cap {
            return Err(Error::CapExceeded { cap: self.completion_cap, weight: mw });
        }
        Ok(self.reduce_unchecked(p))
    }

    /// Normal form without the cap precondition.
    pub fn reduce_unchecked(&self, p: &NCPoly) -> NCPoly {
        let mut work: Ordered = BTreeMap::new();
        for (w, c) in &p.terms {
            add_ordered(&mut work, self.gens.weight(w), w.clone(), c.clone());
        }
        let mut out = NCPoly::zero();
        while let Some(((_, w), c)) = work.pop_last() {
            match self.find_redex(&w) {
                None => out.add_term(w, c),
                Some((pos, r)) => {
                    let rep = self.rewrite_at(&w, pos, r);
                    for (m, x) in rep.terms {
                        let wt = self.gens.weight(&m);
                        add_ordered(&mut work, wt, m, x * &c);
                    }
                }
            }
        }
        out
    }

    pub fn reduce_word(&self, w: &[usize]) -> NCPoly {
        self.reduce_unchecked(&NCPoly::monomial(w.to_vec(), Q::one()))
    }

    /// Normal words of exactly the given weight.
    pub fn normal_words(&self, weight: usize) -> Vec<Word> {
        self.gens.words_of_weight(weight).into_iter().filter(|w| self.is_normal(w)).collect()
    }
}

fn add_ordered(m: &mut Ordered, wt: usize, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let key = (wt, w);
    let e = m.entry(key.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&key);
    }
}

/// Turn a relation into a rule: monic leading word, remainder on the right.
fn relation_to_rule(p: &NCPoly, gens: &GeneratorSet) -> Option<Rule> {
    let (lead, lc) = p.leading(gens)?;
    let lead = lead.clone();
    let inv = -lc.recip();
    let mut rhs = NCPoly::zero();
    for (w, c) in &p.terms {
        if *w != lead {
            rhs.add_term(w.clone(), c * &inv);
        }
    }
    Some(Rule { lead, rhs })
}

fn rule_relation(r: &Rule) -> NCPoly {
    let mut p = r.rhs.scale(&-Q::one());
    p.add_term(r.lead.clone(), Q::one());
    p
}

/// Overlap words `u v w` where `u v` and `v w` are the two leading words.
fn overlaps(a: &[usize], b: &[usize]) -> Vec<(Word, usize)> {
    let mut out = Vec::new();
    for k in 1..a.len().min(b.len()) {
        if a[a.len() - k..] == b[..k] {
            let mut w = a.to_vec();
            w.extend_from_slice(&b[k..]);
            out.push((w, a.len() - k));
        }
    }
    out
}

/// Diamond-lemma completion below `pres.degree_cap`.
pub fn complete_rewrite(pres: &AlgebraPresentation) -> Result<RewriteSystem> {
    let gens = pres.gens.clone();
    let cap = pres.degree_cap;
    let mut pending: Vec<NCPoly> = Vec::new();
    for (i, r) in pres.relations.iter().enumerate() {
        if r.is_zero() {
            return Err(Error::input(format!("relation {i} is zero")));
        }
        pending.push(r.clone());
    }
    let mut rs = RewriteSystem::from_rules(gens.clone(), Vec::new(), cap, Vec::new());
    loop {
        // absorb pending relations with inter-reduction
        while let Some(p) = pending.pop() {
            let red = rs.reduce_unchecked(&p);
            let Some(rule) = relation_to_rule(&red, &gens) else { continue };
            let mut kept = Vec::new();
            for old in rs.rules.drain(..) {
                if contains_subword(&old.lead, &rule.lead) {
                    pending.push(rule_relation(&old));
                } else {
                    kept.push(old);
                }
            }
            kept.push(rule);
            rs = RewriteSystem::from_rules(gens.clone(), kept, cap, Vec::new());
        }
        // interreduce right-hand sides
        let rules: Vec<Rule> = rs
            .rules
            .iter()
            .map(|r| Rule { lead: r.lead.clone(), rhs: rs.reduce_unchecked(&r.rhs) })
            .collect();
        rs = RewriteSystem::from_rules(gens.clone(), rules, cap, Vec::new());
        // resolve overlaps
        let mut unresolved = Vec::new();
        for i in 0..rs.rules.len() {
            for j in 0..rs.rules.len() {
                for (w, pos) in overlaps(&rs.rules[i].lead, &rs.rules[j].lead) {
                    if gens.weight(&w) > cap {
                        unresolved.push(w);
                        continue;
                    }
                    let left = rs.reduce_unchecked(&rs.rewrite_at(&w, 0, i));
                    let right = rs.reduce_unchecked(&rs.rewrite_at(&w, pos, j));
                    let diff = left.sub(&right);
                    if !diff.is_zero() {
                        pending.push(diff);
                    }
                }
            }
        }
        if pending.is_empty() {
            unresolved.sort_by(|a, b| gens.cmp_words(a, b));
            unresolved.dedup();
            let mut rules = rs.rules.clone();
            rules.sort_by(|a, b| gens.cmp_words(&a.lead, &b.lead));
            return Ok(RewriteSystem::from_rules(gens, rules, cap, unresolved));
        }
    }
}

fn contains_subword(w: &[usize], s: &[usize]) -> bool {
    s.len() <= w.len() && w.windows(s.len()).any(|x| x == s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_ncpoly;
    use crate::scalar::q;

    /// Every way of reducing every word up to `cap` ends at the same normal form.
    fn brute_force_confluent(rs: &RewriteSystem, cap: usize) -> bool {
        for wt in 0..=cap {
            for w in rs.gens.words_of_weight(wt) {
                let reds = rs.all_redexes(&w);
                let nfs: Vec<NCPoly> = reds
                    .iter()
                    .map(|&(p, r)| rs.reduce_unchecked(&rs.rewrite_at(&w, p, r)))
                    .collect();
                if nfs.windows(2).any(|x| x[0] != x[1]) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn commutative_polynomials() {
        for cap in 2..=5 {
            let pres = AlgebraPresentation::parse(&["x", "y"], &["x*y - y*x"], cap).unwrap();
            let rs = complete_rewrite(&pres).unwrap();
            assert_eq!(rs.rules.len(), 1);
            assert_eq!(rs.rules[0].lead, vec![1, 0]);
            assert!(rs.unresolved_overlaps.is_empty());
            assert!(brute_force_confluent(&rs, 4.min(cap)));
        }
    }

    #[test]
    fn dual_numbers_rule() {
        let pres = AlgebraPresentation::parse(&["e"], &["e*e"], 3).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert_eq!(rs.rules, vec![Rule { lead: vec![0, 0], rhs: NCPoly::zero() }]);
        assert!(rs.reduce_word(&[0, 0]).is_zero());
    }

    #[test]
    fn weyl_rule() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &["x*y - y*x - 1"], 4).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert_eq!(rs.rules.len(), 1);
        // xy - yx - 1 = 0 gives yx = xy - 1
        assert_eq!(rs.rules[0].rhs, parse_ncpoly("x*y - 1", &pres.gens).unwrap());
        assert!(brute_force_confluent(&rs, 4));
    }

    #[test]
    fn two_step_reduction() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &["y*x - x*y - 1"], 4).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert_eq!(rs.rules[0].rhs, parse_ncpoly("x*y + 1", &pres.gens).unwrap());
        // yxx -> xyx + x -> xxy + 2x
        let r = rs.reduce(&parse_ncpoly("y*x*x", &pres.gens).unwrap()).unwrap();
        assert_eq!(r, parse_ncpoly("x*x*y + 2*x", &pres.gens).unwrap());
    }

    #[test]
    fn non_monic_rescaled_and_zero_rejected() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &["2*y*x - 2*x*y"], 3).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert_eq!(rs.rules[0].rhs.terms[&vec![0, 1]], q(1));
        let bad = AlgebraPresentation::parse(&["x"], &["x - x"], 3).unwrap();
        assert!(complete_rewrite(&bad).is_err());
    }

    #[test]
    fn cap_violations() {
        let pres = AlgebraPresentation::parse(&["x"], &["x*x*x"], 3).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert!(!rs.unresolved_overlaps.is_empty());
        assert!(rs.reduce(&parse_ncpoly("x*x*x*x", &pres.gens).unwrap()).is_err());
        let rs5 = complete_rewrite(&AlgebraPresentation { degree_cap: 5, ..pres }).unwrap();
        assert!(rs5.unresolved_overlaps.is_empty());
    }

    #[test]
    fn completion_adds_consequences() {
        // xy = x, yx = y forces further relations on overlaps
        let pres = AlgebraPresentation::parse(&["x", "y"], &["x*y - x", "y*x - y"], 4).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert!(brute_force_confluent(&rs, 4));
    }

    #[test]
    fn unit_untouched() {
        let pres = AlgebraPresentation::parse(&["x", "y"], &["x*y - y*x - 1"], 4).unwrap();
        let rs = complete_rewrite(&pres).unwrap();
        assert_eq!(rs.reduce(&NCPoly::one()).unwrap(), NCPoly::one());
    }
}

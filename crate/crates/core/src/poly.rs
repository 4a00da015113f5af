//! Words and noncommutative polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, Q};

pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: usize,
}

fn default_weight() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratorSet {
    pub gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(Error::input(format!("generator `{}` has weight 0", g.name)));
            }
            if !is_ident(&g.name) {
                return Err(Error::input(format!("bad generator name `{}`", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::input(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Self { gens })
    }

    /// Generators of weight 1 with the given names.
    pub fn plain(names: &[&str]) -> Self {
        Self::new(names.iter().map(|n| Generator { name: n.to_string(), weight: 1 }).collect())
            .expect("valid generator names")
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn weight(&self, w: &[usize]) -> usize {
        w.iter().map(|&i| self.gens[i].weight).sum()
    }

    /// Weight first, then lexicographic in declaration order.
    pub fn cmp_words(&self, a: &[usize], b: &[usize]) -> Ordering {
        self.weight(a).cmp(&self.weight(b)).then_with(|| a.cmp(b))
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&i| self.gens[i].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// All words of exactly the given weight, in monomial order.
    pub fn words_of_weight(&self, weight: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.words_rec(weight, &mut cur, &mut out);
        out.sort_by(|a, b| self.cmp_words(a, b));
        out
    }

    fn words_rec(&self, rem: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for (i, g) in self.gens.iter().enumerate() {
            if g.weight <= rem {
                cur.push(i);
                self.words_rec(rem - g.weight, cur, out);
                cur.pop();
            }
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Finitely supported rational combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    pub terms: BTreeMap<Word, Q>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Q::one())
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &NCPoly) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), c * x);
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut r = self.clone();
        r.add_scaled(&Q::one(), other);
        r
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut r = self.clone();
        r.add_scaled(&-Q::one(), other);
        r
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        let mut r = NCPoly::zero();
        r.add_scaled(c, self);
        r
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut r = NCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                r.add_term(w, a * b);
            }
        }
        r
    }

    /// Largest word in the monomial order with its coefficient.
    pub fn leading(&self, gens: &GeneratorSet) -> Option<(&Word, &Q)> {
        self.terms.iter().max_by(|a, b| gens.cmp_words(a.0, b.0))
    }

    pub fn max_weight(&self, gens: &GeneratorSet) -> usize {
        self.terms.keys().map(|w| gens.weight(w)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, gens: &GeneratorSet) -> bool {
        let mut ws = self.terms.keys().map(|w| gens.weight(w));
        match ws.next() {
            None => true,
            Some(w0) => ws.all(|w| w == w0),
        }
    }

    /// Terms sorted in decreasing monomial order.
    pub fn sorted_terms(&self, gens: &GeneratorSet) -> Vec<(&Word, &Q)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| gens.cmp_words(b.0, a.0));
        t
    }

    pub fn to_string(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.sorted_terms(gens).into_iter().enumerate() {
            let neg = *c < Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                s.push_str(&fmt_q(&mag));
            } else {
                if !mag.is_one() {
                    s.push_str(&fmt_q(&mag));
                    s.push('*');
                }
                s.push_str(&gens.word_string(w));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let mut lit = text[start..i].to_string();
                if i < b.len() && b[i] == b'/' {
                    let ds = i + 1;
                    let mut j = ds;
                    while j < b.len() && (b[j] as char).is_ascii_digit() {
                        j += 1;
                    }
                    if j == ds {
                        return Err(Error::Parse { pos: ds, msg: "expected denominator".into() });
                    }
                    lit = text[start..j].to_string();
                    i = j;
                }
                let q = crate::scalar::parse_q(&lit)
                    .map_err(|_| Error::Parse { pos: start, msg: format!("bad number `{lit}`") })?;
                out.push((start, Tok::Num(q)));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    gens: &'a GeneratorSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(Error::Parse { pos: at, msg: "unexpected end of expression".into() });
        };
        self.pos += 1;
        match tok {
            Tok::Minus => Ok(self.factor()?.scale(&-Q::one())),
            Tok::Plus => self.factor(),
            Tok::Num(q) => Ok(NCPoly::monomial(Vec::new(), q)),
            Tok::Ident(name) => match self.gens.index(&name) {
                Some(i) => Ok(NCPoly::monomial(vec![i], Q::one())),
                None => Err(Error::UnknownIdentifier { name, pos: at }),
            },
            Tok::LParen => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(Error::Parse { pos: self.here(), msg: "expected `)`".into() }),
                }
            }
            t => Err(Error::Parse { pos: at, msg: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parse an expression in the generators; multiplication must be explicit.
pub fn parse_ncpoly(text: &str, gens: &GeneratorSet) -> Result<NCPoly> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), gens };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    fn xy() -> GeneratorSet {
        GeneratorSet::plain(&["x", "y"])
    }

    #[test]
    fn weyl_relation() {
        let p = parse_ncpoly("x*y - y*x - 1", &xy()).unwrap();
        let mut e = NCPoly::zero();
        e.add_term(vec![0, 1], q(1));
        e.add_term(vec![1, 0], q(-1));
        e.add_term(vec![], q(-1));
        assert_eq!(p, e);
    }

    #[test]
    fn zero_literal() {
        assert!(parse_ncpoly("0", &xy()).unwrap().is_zero());
    }

    #[test]
    fn product_of_sums() {
        let p = parse_ncpoly("(x+y)*(x-y)", &xy()).unwrap();
        // oracle: expand the four products independently
        let x = NCPoly::monomial(vec![0], q(1));
        let y = NCPoly::monomial(vec![1], q(1));
        let e = x.mul(&x).sub(&x.mul(&y)).add(&y.mul(&x)).sub(&y.mul(&y));
        assert_eq!(p, e);
        assert_eq!(p.terms.len(), 4);
    }

    #[test]
    fn rational_literals() {
        let p = parse_ncpoly("3/4*x - -2", &xy()).unwrap();
        assert_eq!(p.terms[&vec![0]], qf(3, 4));
        assert_eq!(p.terms[&vec![]], q(2));
    }

    #[test]
    fn errors_report_position() {
        match parse_ncpoly("x*z", &xy()) {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 2);
            }
            other => panic!("{other:?}"),
        }
        match parse_ncpoly("x*(y", &xy()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ncpoly("x y", &xy()), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_ncpoly("x # y", &xy()), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn monomial_order() {
        let g = xy();
        assert_eq!(g.cmp_words(&[1], &[0, 0]), Ordering::Less);
        assert_eq!(g.cmp_words(&[1, 0], &[0, 1]), Ordering::Greater);
        let p = parse_ncpoly("x*y - y*x", &g).unwrap();
        assert_eq!(p.leading(&g).unwrap().0, &vec![1, 0]);
    }

    #[test]
    fn printing_round_trips() {
        let g = xy();
        let p = parse_ncpoly("2*x*y - 1/2*y + 3", &g).unwrap();
        let s = p.to_string(&g);
        assert_eq!(parse_ncpoly(&s, &g).unwrap(), p);
    }

    #[test]
    fn words_by_weight() {
        assert_eq!(xy().words_of_weight(2).len(), 4);
        assert_eq!(xy().words_of_weight(0), vec![Vec::<usize>::new()]);
    }
}

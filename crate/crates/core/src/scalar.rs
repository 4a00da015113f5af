//! Exact rational scalars.
//!
//! `Q` wraps an arbitrary-precision rational whose small values live inline,
//! which keeps the operator-heavy loops free of allocation.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_q::Rational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(Rational);

impl Q {
    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        Q(Rational::from(1u32) / &self.0)
    }

    pub fn is_integer(&self) -> bool {
        self.0.denominator_ref() == &1u32
    }

    pub fn abs(&self) -> Q {
        if self.0 < 0u32 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0 < 0u32
    }

    /// The value as a `usize`, when it is a non-negative integer that fits.
    pub fn to_usize(&self) -> Option<usize> {
        if !self.is_integer() || self.is_negative() {
            return None;
        }
        self.to_string().parse().ok()
    }

    /// The value as an `i64`, when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        self.to_string().parse().ok()
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q(Rational::from(n))
    }
}

impl Zero for Q {
    fn zero() -> Self {
        Q(Rational::from(0u32))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0u32
    }
}

impl One for Q {
    fn one() -> Self {
        Q(Rational::from(1u32))
    }
    fn is_one(&self) -> bool {
        self.0 == 1u32
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, o: Q) -> Q {
                Q($tr::$m(self.0, o.0))
            }
        }
        impl $tr<&Q> for Q {
            type Output = Q;
            fn $m(self, o: &Q) -> Q {
                Q($tr::$m(self.0, &o.0))
            }
        }
        impl $tr<Q> for &Q {
            type Output = Q;
            fn $m(self, o: Q) -> Q {
                Q($tr::$m(&self.0, o.0))
            }
        }
        impl $tr<&Q> for &Q {
            type Output = Q;
            fn $m(self, o: &Q) -> Q {
                Q($tr::$m(&self.0, &o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

macro_rules! assignop {
    ($tr:ident, $m:ident) => {
        impl $tr<Q> for Q {
            fn $m(&mut self, o: Q) {
                $tr::$m(&mut self.0, o.0)
            }
        }
        impl $tr<&Q> for Q {
            fn $m(&mut self, o: &Q) {
                $tr::$m(&mut self.0, &o.0)
            }
        }
    };
}

assignop!(AddAssign, add_assign);
assignop!(SubAssign, sub_assign);
assignop!(MulAssign, mul_assign);

pub fn q(n: i64) -> Q {
    Q::from(n)
}

pub fn qf(n: i64, d: i64) -> Q {
    q(n) / q(d)
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn sign(neg: bool) -> Q {
    if neg {
        -Q::one()
    } else {
        Q::one()
    }
}

/// `(-1)^e`
pub fn parity(e: usize) -> Q {
    sign(e % 2 == 1)
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::input(format!("malformed rational `{t}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let int = |x: &str| -> Result<Q> {
        let digits = x.strip_prefix('-').or_else(|| x.strip_prefix('+')).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let r = Rational::from_str(x.strip_prefix('+').unwrap_or(x)).map_err(|_| bad())?;
        Ok(Q(r))
    };
    let num = int(n)?;
    match d {
        None => Ok(num),
        Some(d) => {
            let den = int(d)?;
            if den.is_zero() {
                return Err(Error::input(format!("zero denominator in `{t}`")));
            }
            Ok(num / den)
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn factorial(n: usize) -> Q {
    let mut f = Q::one();
    for i in 2..=n {
        f *= q(i as i64);
    }
    f
}

impl serde::Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => parse_q(&s).map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!("expected rational, got {other}"))),
        }
    }
}

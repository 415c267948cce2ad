use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::TimedWordError;

/// An interval endpoint: an integer or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Endpoint {
    pub fn finite(self) -> Option<i64> {
        match self {
            Endpoint::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }

    fn compare_rational(self, v: &BigRational) -> Ordering {
        match self {
            Endpoint::NegInf => Ordering::Less,
            Endpoint::PosInf => Ordering::Greater,
            Endpoint::Finite(e) => BigRational::from_integer(BigInt::from(e)).cmp(v),
        }
    }

    fn negate(self) -> Endpoint {
        match self {
            Endpoint::NegInf => Endpoint::PosInf,
            Endpoint::PosInf => Endpoint::NegInf,
            Endpoint::Finite(v) => Endpoint::Finite(-v),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::PosInf => f.write_str("inf"),
            Endpoint::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// A time interval with integer (or infinite) endpoints.
///
/// Construction rejects empty intervals: `lo <= hi`, a punctual interval is
/// closed on both sides, and infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(
        lo: Endpoint,
        hi: Endpoint,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self, TimedWordError> {
        let bad = |reason: &str| TimedWordError::InvalidInterval(reason.to_string());
        if lo == Endpoint::PosInf || hi == Endpoint::NegInf {
            return Err(bad("endpoint infinity on the wrong side"));
        }
        if (!lo.is_finite() && lo_closed) || (!hi.is_finite() && hi_closed) {
            return Err(bad("infinite endpoints must be open"));
        }
        match lo.cmp(&hi) {
            Ordering::Greater => Err(bad("lower endpoint exceeds upper endpoint")),
            Ordering::Equal if !(lo_closed && hi_closed) => {
                Err(bad("an interval with equal endpoints must be closed"))
            }
            _ => Ok(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
        }
    }

    pub fn closed(lo: i64, hi: i64) -> Result<Self, TimedWordError> {
        Self::new(Endpoint::Finite(lo), Endpoint::Finite(hi), true, true)
    }

    pub fn open(lo: i64, hi: i64) -> Result<Self, TimedWordError> {
        Self::new(Endpoint::Finite(lo), Endpoint::Finite(hi), false, false)
    }

    pub fn left_closed(lo: i64, hi: i64) -> Result<Self, TimedWordError> {
        Self::new(Endpoint::Finite(lo), Endpoint::Finite(hi), true, false)
    }

    pub fn right_closed(lo: i64, hi: i64) -> Result<Self, TimedWordError> {
        Self::new(Endpoint::Finite(lo), Endpoint::Finite(hi), false, true)
    }

    /// `[lo, inf)` when `closed`, `(lo, inf)` otherwise.
    pub fn unbounded_from(lo: i64, closed: bool) -> Self {
        Interval {
            lo: Endpoint::Finite(lo),
            hi: Endpoint::PosInf,
            lo_closed: closed,
            hi_closed: false,
        }
    }

    /// `[0, inf)`: the interval of an untimed future modality.
    pub fn nonnegative() -> Self {
        Self::unbounded_from(0, true)
    }

    pub fn lo(&self) -> Endpoint {
        self.lo
    }

    pub fn hi(&self) -> Endpoint {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn inf(&self) -> Endpoint {
        self.lo
    }

    pub fn sup(&self) -> Endpoint {
        self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        let lower = match self.lo.compare_rational(v) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        lower
            && match self.hi.compare_rational(v) {
                Ordering::Greater => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Less => false,
            }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    /// True when every element of the interval exceeds `v`.
    pub fn lies_above(&self, v: &BigRational) -> bool {
        match self.lo.compare_rational(v) {
            Ordering::Greater => true,
            Ordering::Equal => !self.lo_closed,
            Ordering::Less => false,
        }
    }

    /// True when every element of the interval is below `v`.
    pub fn lies_below(&self, v: &BigRational) -> bool {
        match self.hi.compare_rational(v) {
            Ordering::Less => true,
            Ordering::Equal => !self.hi_closed,
            Ordering::Greater => false,
        }
    }

    pub fn is_punctual(&self) -> bool {
        self.lo == self.hi
    }

    /// Endpoints in the naturals (required for modality subscripts).
    pub fn is_nat(&self) -> bool {
        matches!(self.lo, Endpoint::Finite(v) if v >= 0)
    }

    /// Topologically open: every finite endpoint is excluded.
    pub fn is_open_set(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }

    /// Topologically closed: every finite endpoint is included.
    pub fn is_closed_set(&self) -> bool {
        (self.lo_closed || !self.lo.is_finite()) && (self.hi_closed || !self.hi.is_finite())
    }

    /// Of the form `[l, u]` with both endpoints finite.
    pub fn is_compact(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo_closed && self.hi_closed
    }

    /// The mirror image `{-v : v in self}`.
    pub fn negated(&self) -> Interval {
        Interval {
            lo: self.hi.negate(),
            hi: self.lo.negate(),
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    /// Complement in the extended line, as at most two intervals (below, above).
    pub fn complement(&self) -> Vec<Interval> {
        let mut parts = Vec::new();
        if self.lo != Endpoint::NegInf {
            if let Ok(below) = Interval::new(Endpoint::NegInf, self.lo, false, !self.lo_closed) {
                parts.push(below);
            }
        }
        if self.hi != Endpoint::PosInf {
            if let Ok(above) = Interval::new(self.hi, Endpoint::PosInf, !self.hi_closed, false) {
                parts.push(above);
            }
        }
        parts
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

fn parse_endpoint(text: &str) -> Result<Endpoint, TimedWordError> {
    match text.trim() {
        "inf" | "+inf" | "∞" => Ok(Endpoint::PosInf),
        "-inf" | "-∞" => Ok(Endpoint::NegInf),
        t => t
            .parse::<i64>()
            .map(Endpoint::Finite)
            .map_err(|_| TimedWordError::InvalidInterval(format!("bad endpoint `{t}`"))),
    }
}

impl FromStr for Interval {
    type Err = TimedWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || TimedWordError::InvalidInterval(format!("cannot parse `{s}`"));
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
        Interval::new(
            parse_endpoint(lo)?,
            parse_endpoint(hi)?,
            lo_closed,
            hi_closed,
        )
    }
}

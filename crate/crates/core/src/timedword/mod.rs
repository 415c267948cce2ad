//! Finite timed words, integer-endpoint intervals, the adjacency relations
//! between intervals, and the simple/oversampled projection operators.
//!
//! Timestamps are exact rationals. Positions are 1-based throughout.

mod adjacency;
mod interval;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use adjacency::{
    is_adjacent, is_negatively_nonadjacent, is_nonadjacent, is_positively_nonadjacent,
    set_nonadjacency, NonAdjacency,
};
pub use interval::{Endpoint, Interval};

pub type Time = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimedWordError {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("a timed word needs at least one event")]
    Empty,
    #[error("first timestamp must be 0, found {0}")]
    NonZeroStart(String),
    #[error("timestamps decrease at position {0}")]
    Decreasing(usize),
    #[error("position {0} carries an empty proposition set")]
    EmptyProps(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("position {pos} out of range 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("not a simple behaviour: position {0} has no proposition outside the erased set")]
    NotSimpleBehaviour(usize),
    #[error("not an oversampled behaviour: the first position is an oversampling point")]
    NotOversampledBehaviour,
}

/// Parses `3`, `-2`, `0.95` or `7/4` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Time, TimedWordError> {
    let t = text.trim();
    let bad = || TimedWordError::InvalidRational(t.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude =
            BigRational::from_integer(int_part.abs()) + BigRational::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    t.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rational(v: &Time) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn int_time(v: i64) -> Time {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub props: BTreeSet<String>,
    pub time: Time,
}

/// A finite timed word: nonempty proposition sets with non-decreasing
/// timestamps starting at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedWord {
    events: Vec<Event>,
}

impl TimedWord {
    pub fn new(events: Vec<Event>) -> Result<Self, TimedWordError> {
        let first = events.first().ok_or(TimedWordError::Empty)?;
        if !first.time.is_zero() {
            return Err(TimedWordError::NonZeroStart(format_rational(&first.time)));
        }
        for (i, e) in events.iter().enumerate() {
            if e.props.is_empty() {
                return Err(TimedWordError::EmptyProps(i + 1));
            }
            if i > 0 && e.time < events[i - 1].time {
                return Err(TimedWordError::Decreasing(i + 1));
            }
        }
        Ok(TimedWord { events })
    }

    /// Convenience constructor from `(props, time)` pairs.
    pub fn from_pairs<I, P, S>(pairs: I) -> Result<Self, TimedWordError>
    where
        I: IntoIterator<Item = (P, Time)>,
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(p, time)| Event {
                    props: p.into_iter().map(Into::into).collect(),
                    time,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Timestamp at 1-based position `pos`.
    pub fn time(&self, pos: usize) -> &Time {
        &self.events[pos - 1].time
    }

    pub fn props(&self, pos: usize) -> &BTreeSet<String> {
        &self.events[pos - 1].props
    }

    pub fn holds(&self, pos: usize, prop: &str) -> bool {
        self.events[pos - 1].props.contains(prop)
    }

    pub fn check_position(&self, pos: usize) -> Result<(), TimedWordError> {
        if pos == 0 || pos > self.len() {
            Err(TimedWordError::PositionOutOfRange {
                pos,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// All propositions occurring in the word.
    pub fn alphabet(&self) -> BTreeSet<String> {
        self.events
            .iter()
            .flat_map(|e| e.props.iter().cloned())
            .collect()
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            write!(f, "{} :", format_rational(&e.time))?;
            for p in &e.props {
                write!(f, " {p}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for TimedWord {
    type Err = TimedWordError;

    /// One event per line, `<tau> : <prop> <prop> ...`; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut events = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| TimedWordError::Syntax { line: idx + 1, msg };
            let (tau, props) = line
                .split_once(':')
                .ok_or_else(|| syntax("expected `<tau> : <props>`".into()))?;
            let time = parse_rational(tau).map_err(|e| syntax(e.to_string()))?;
            let props: BTreeSet<String> = props.split_whitespace().map(str::to_string).collect();
            events.push(Event { props, time });
        }
        TimedWord::new(events)
    }
}

/// A timed word together with a position in its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedWord {
    word: TimedWord,
    pos: usize,
}

impl PointedWord {
    pub fn new(word: TimedWord, pos: usize) -> Result<Self, TimedWordError> {
        word.check_position(pos)?;
        Ok(PointedWord { word, pos })
    }

    pub fn word(&self) -> &TimedWord {
        &self.word
    }

    pub fn pos(&self) -> usize {
        self.pos
    }
}

/// Erases `erased` from every point; every point must keep at least one
/// proposition.
pub fn project_simple(
    word: &TimedWord,
    erased: &BTreeSet<String>,
) -> Result<TimedWord, TimedWordError> {
    let mut events = Vec::with_capacity(word.len());
    for (i, e) in word.events().iter().enumerate() {
        let props: BTreeSet<String> = e.props.difference(erased).cloned().collect();
        if props.is_empty() {
            return Err(TimedWordError::NotSimpleBehaviour(i + 1));
        }
        events.push(Event {
            props,
            time: e.time.clone(),
        });
    }
    TimedWord::new(events)
}

/// Deletes the oversampling points (those carrying only erased propositions)
/// and erases `erased` from what remains. The first point must survive.
pub fn project_oversampled(
    word: &TimedWord,
    erased: &BTreeSet<String>,
) -> Result<TimedWord, TimedWordError> {
    if word.props(1).is_subset(erased) {
        return Err(TimedWordError::NotOversampledBehaviour);
    }
    let events = word
        .events()
        .iter()
        .filter_map(|e| {
            let props: BTreeSet<String> = e.props.difference(erased).cloned().collect();
            (!props.is_empty()).then(|| Event {
                props,
                time: e.time.clone(),
            })
        })
        .collect();
    TimedWord::new(events)
}

/// Is `pos` an action point, i.e. does it carry a proposition outside `erased`?
pub fn is_action_point(word: &TimedWord, pos: usize, erased: &BTreeSet<String>) -> bool {
    !word.props(pos).is_subset(erased)
}

//! Seeded differential fuzzing of the translations against the evaluator.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{Letter, SymbolicNfa};
use crate::eval::Evaluator;
use crate::formula::{FkArgs, Formula as F, Formula, RatArgs};
use crate::timedword::{Endpoint, Event, Interval, TimedWord};

use super::{fk_to_rat_formula, rat_to_fk_any, rat_to_fk_formula, until_via_frat, ReductionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Fk2Rat,
    Rat2Fk,
    UntilFrat,
    Roundtrip,
}

impl Target {
    pub const ALL: [Target; 4] = [
        Target::Fk2Rat,
        Target::Rat2Fk,
        Target::UntilFrat,
        Target::Roundtrip,
    ];
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Fk2Rat => "fk2rat",
            Target::Rat2Fk => "rat2fk",
            Target::UntilFrat => "until-frat",
            Target::Roundtrip => "roundtrip",
        })
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| {
                format!("unknown fuzz target `{s}` (fk2rat, rat2fk, until-frat, roundtrip)")
            })
    }
}

/// A case where the translation and its input disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case: u64,
    pub input: String,
    pub output: String,
    pub word: String,
    pub position: usize,
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub target: Target,
    pub seed: u64,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "target {} seed {}: {} cases, {} failures",
            self.target, self.seed, self.cases, self.failures
        )?;
        if let Some(c) = &self.first_failure {
            writeln!(f, "first failure at case {}", c.case)?;
            writeln!(f, "input:  {}", c.input)?;
            writeln!(f, "output: {}", c.output)?;
            writeln!(f, "position {} (input says {})", c.position, c.expected)?;
            write!(f, "word:\n{}", c.word)?;
        }
        Ok(())
    }
}

fn atoms(width: usize) -> Vec<Formula> {
    ["a", "b"][..width].iter().map(|p| F::atom(*p)).collect()
}

fn random_nfa(rng: &mut ChaCha8Rng, width: usize) -> SymbolicNfa {
    let n = rng.gen_range(1..=3);
    let mut transitions = BTreeSet::new();
    for p in 0..n {
        for l in 0..1u32 << width {
            for q in 0..n {
                if rng.gen_bool(0.45) {
                    transitions.insert((p, Letter(l), q));
                }
            }
        }
    }
    let accepting = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
    let names = (0..n).map(|i| format!("q{i}")).collect();
    SymbolicNfa::new(width, names, 0, accepting, transitions).expect("valid random automaton")
}

fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let lo = rng.gen_range(0..=3);
    if rng.gen_bool(0.15) {
        return Interval::unbounded_from(lo, rng.gen_bool(0.5));
    }
    let hi = rng.gen_range(lo..=4);
    if lo == hi {
        return Interval::closed(lo, hi).expect("punctual");
    }
    Interval::new(
        Endpoint::Finite(lo),
        Endpoint::Finite(hi),
        rng.gen_bool(0.5),
        rng.gen_bool(0.5),
    )
    .expect("lo < hi")
}

// Closed intervals with sup(I_j) <= inf(I_{j+1}).
fn sorted_closed_intervals(rng: &mut ChaCha8Rng, k: usize) -> Vec<Interval> {
    let mut floor = 0;
    let mut out = Vec::new();
    for j in 0..k {
        let lo = rng.gen_range(floor..=floor + 1);
        if j + 1 == k && rng.gen_bool(0.2) {
            out.push(Interval::unbounded_from(lo, true));
            break;
        }
        let hi = rng.gen_range(lo..=lo + 2);
        out.push(Interval::closed(lo, hi).expect("lo <= hi"));
        floor = hi;
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng) -> TimedWord {
    let len = rng.gen_range(1..=6);
    let mut t = BigRational::from_integer(0.into());
    let events = (0..len)
        .map(|i| {
            if i > 0 {
                t += BigRational::new(rng.gen_range(0..=3).into(), 2.into());
            }
            let names: &[&str] = match rng.gen_range(0..3) {
                0 => &["a"],
                1 => &["b"],
                _ => &["a", "b"],
            };
            let props: BTreeSet<String> = names.iter().map(|p| p.to_string()).collect();
            Event {
                props,
                time: t.clone(),
            }
        })
        .collect();
    TimedWord::new(events).expect("non-decreasing from 0")
}

fn random_fk(rng: &mut ChaCha8Rng, general: bool) -> Formula {
    let width = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let intervals = if general {
        (0..k).map(|_| random_interval(rng)).collect()
    } else {
        sorted_closed_intervals(rng, k)
    };
    let automata = (0..=intervals.len())
        .map(|_| random_nfa(rng, width))
        .collect();
    F::Fk(FkArgs::new(intervals, automata, atoms(width)).expect("arity"))
}

fn random_rat(rng: &mut ChaCha8Rng) -> Formula {
    let width = rng.gen_range(1..=2);
    let iv = random_interval(rng);
    F::Rat(
        iv,
        RatArgs::new(random_nfa(rng, width), atoms(width)).expect("width"),
    )
}

fn random_literal(rng: &mut ChaCha8Rng) -> Formula {
    let p = F::atom(if rng.gen_bool(0.5) { "a" } else { "b" });
    if rng.gen_bool(0.3) {
        F::not(p)
    } else {
        p
    }
}

fn random_until(rng: &mut ChaCha8Rng) -> Formula {
    let iv = rng.gen_bool(0.8).then(|| random_interval(rng));
    let (a, b) = (random_literal(rng), random_literal(rng));
    if rng.gen_bool(0.5) {
        F::until(iv, a, b)
    } else {
        F::since(iv, a, b)
    }
}

fn fk_to_rat_target(f: &Formula) -> Result<Formula, ReductionError> {
    #[cfg(feature = "general-intervals")]
    return Ok(super::fk_to_rat_general(f)?.output);
    #[cfg(not(feature = "general-intervals"))]
    fk_to_rat_formula(f)
}

/// The formula pair and word for one case; deterministic in `(seed, case)`.
pub fn instance(
    target: Target,
    seed: u64,
    case: u64,
) -> Result<(Formula, Formula, TimedWord), ReductionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    let general = cfg!(feature = "general-intervals");
    let (input, output) = match target {
        Target::Fk2Rat => {
            let f = random_fk(&mut rng, general);
            let g = fk_to_rat_target(&f)?;
            (f, g)
        }
        Target::Rat2Fk => {
            let f = random_rat(&mut rng);
            let g = rat_to_fk_any(&f)?.output;
            (f, g)
        }
        Target::UntilFrat => {
            let f = random_until(&mut rng);
            let g = until_via_frat(&f)?;
            (f, g)
        }
        Target::Roundtrip => {
            let f = random_fk(&mut rng, false);
            let g = rat_to_fk_formula(&fk_to_rat_formula(&f)?)?;
            (f, g)
        }
    };
    Ok((input, output, random_word(&mut rng)))
}

fn check_case(target: Target, seed: u64, case: u64) -> Option<Counterexample> {
    let (input, output, word) = match instance(target, seed, case) {
        Ok(x) => x,
        Err(e) => {
            return Some(Counterexample {
                case,
                input: e.to_string(),
                output: String::new(),
                word: String::new(),
                position: 0,
                expected: false,
            })
        }
    };
    let evaluated = Evaluator::new(&word)
        .eval_all(&input)
        .and_then(|l| Ok((l, Evaluator::new(&word).eval_all(&output)?)));
    let (lhs, rhs) = match evaluated {
        Ok(pair) => pair,
        Err(e) => {
            return Some(Counterexample {
                case,
                input: input.to_string(),
                output: e.to_string(),
                word: word.to_string(),
                position: 0,
                expected: false,
            })
        }
    };
    let pos = lhs.iter().zip(&rhs).position(|(x, y)| x != y)?;
    Some(Counterexample {
        case,
        input: input.to_string(),
        output: output.to_string(),
        word: word.to_string(),
        position: pos + 1,
        expected: lhs[pos],
    })
}

/// Runs `cases` cases of `target`; the reported failure is the one with the
/// lowest case index.
pub fn run(target: Target, seed: u64, cases: u64) -> FuzzReport {
    let failures: Vec<Counterexample> = (0..cases)
        .into_par_iter()
        .filter_map(|c| check_case(target, seed, c))
        .collect();
    FuzzReport {
        target,
        seed,
        cases,
        failures: failures.len() as u64,
        first_failure: failures.into_iter().min_by_key(|c| c.case),
    }
}

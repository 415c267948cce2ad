//! Deterministic and incremental-error counter machines, their runs, the
//! timed-word encoding of halting runs and the formulas characterising
//! those encodings.

mod encode;
mod formulas;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use encode::{
    encode_run, encode_run_unchecked, sigma_iecm, symbol_a, symbol_b, symbol_f, symbol_s,
};
pub use formulas::{build_phi_cm, build_phi_iecm, phi_9, phi_iecm_conjuncts};
pub use text::{parse_machine, parse_machine_file, parse_schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("machine has no instructions")]
    Empty,
    #[error("instruction {0} is HALT but only the last instruction may halt")]
    EarlyHalt(usize),
    #[error("the last instruction must be HALT")]
    NoHalt,
    #[error("instruction {line}: goto target {target} out of range 1..={n}")]
    BadTarget {
        line: usize,
        target: usize,
        n: usize,
    },
    #[error("instruction {line}: counter {counter} out of range 1..={k}")]
    BadCounter {
        line: usize,
        counter: usize,
        k: usize,
    },
    #[error("cannot step from the HALT instruction")]
    StepFromHalt,
    #[error("expected {expected} error increments, got {found}")]
    ErrorArity { expected: usize, found: usize },
    #[error("max_steps must be at least 1")]
    ZeroSteps,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("run does not halt")]
    NotHalting,
    #[error("step {step} cannot be encoded: {reason}")]
    Unencodable { step: usize, reason: String },
    #[error("encoding rejected by the evaluator: conjunct {0} fails")]
    EncodingRejected(String),
}

/// One instruction; counters and targets are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Instruction {
    Inc {
        counter: usize,
        goto: usize,
    },
    Dec {
        counter: usize,
        goto: usize,
    },
    IfZero {
        counter: usize,
        zero: usize,
        nonzero: usize,
    },
    Halt,
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc { counter, goto } => write!(f, "inc {counter} goto {goto}"),
            Instruction::Dec { counter, goto } => write!(f, "dec {counter} goto {goto}"),
            Instruction::IfZero {
                counter,
                zero,
                nonzero,
            } => {
                write!(f, "ifz {counter} goto {zero} else {nonzero}")
            }
            Instruction::Halt => f.write_str("halt"),
        }
    }
}

/// A k-counter machine `p_1 … p_n` whose unique HALT is `p_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterMachine {
    k: usize,
    instructions: Vec<Instruction>,
}

impl CounterMachine {
    pub fn new(k: usize, instructions: Vec<Instruction>) -> Result<Self, MachineError> {
        let n = instructions.len();
        if n == 0 {
            return Err(MachineError::Empty);
        }
        for (i, ins) in instructions.iter().enumerate() {
            let line = i + 1;
            let (counter, targets) = match *ins {
                Instruction::Inc { counter, goto } | Instruction::Dec { counter, goto } => {
                    (counter, vec![goto])
                }
                Instruction::IfZero {
                    counter,
                    zero,
                    nonzero,
                } => (counter, vec![zero, nonzero]),
                Instruction::Halt if line == n => continue,
                Instruction::Halt => return Err(MachineError::EarlyHalt(line)),
            };
            if !(1..=k).contains(&counter) {
                return Err(MachineError::BadCounter { line, counter, k });
            }
            if let Some(&target) = targets.iter().find(|t| !(1..=n).contains(*t)) {
                return Err(MachineError::BadTarget { line, target, n });
            }
        }
        if instructions[n - 1] != Instruction::Halt {
            return Err(MachineError::NoHalt);
        }
        Ok(CounterMachine { k, instructions })
    }

    pub fn counters(&self) -> usize {
        self.k
    }

    /// `n`, the index of HALT.
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Instruction `p` (1-based).
    pub fn instruction(&self, p: usize) -> Instruction {
        self.instructions[p - 1]
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn initial(&self) -> Configuration {
        Configuration {
            pc: 1,
            counters: vec![0; self.k],
        }
    }
}

impl fmt::Display for CounterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counters: {}", self.k)?;
        for (i, ins) in self.instructions.iter().enumerate() {
            writeln!(f, "{}: {ins}", i + 1)?;
        }
        Ok(())
    }
}

/// `(pc, c_1, …, c_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    pub pc: usize,
    pub counters: Vec<u64>,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.pc)?;
        for c in &self.counters {
            write!(f, ",{c}")?;
        }
        f.write_str(")")
    }
}

/// Per-step counter increments (steps are 1-based: step `s` produces
/// configuration `s` from configuration `s − 1`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ErrorSchedule(pub BTreeMap<usize, Vec<u64>>);

impl ErrorSchedule {
    pub fn none() -> Self {
        ErrorSchedule::default()
    }

    pub fn at(&self, step: usize) -> Option<&[u64]> {
        self.0.get(&step).map(Vec::as_slice)
    }

    pub fn is_error_free(&self) -> bool {
        self.0.values().all(|v| v.iter().all(|e| *e == 0))
    }
}

impl fmt::Display for ErrorSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (step, incs) in &self.0 {
            write!(f, "step {step}:")?;
            for e in incs {
                write!(f, " +{e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Run {
    pub configs: Vec<Configuration>,
    /// `errors[s − 1]` are the increments applied at step `s`.
    pub errors: Vec<Vec<u64>>,
    pub halted: bool,
    pub truncated: bool,
}

impl Run {
    pub fn last(&self) -> &Configuration {
        self.configs.last().expect("runs are non-empty")
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.configs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", shown.join(" -> "))?;
        if self.halted {
            f.write_str(" halted")
        } else {
            f.write_str(" truncated")
        }
    }
}

/// One move; `errors` (IECM mode) are added after the instruction.
/// Decrementing a zero counter leaves it at zero.
pub fn step(
    m: &CounterMachine,
    c: &Configuration,
    errors: Option<&[u64]>,
) -> Result<Configuration, MachineError> {
    let mut counters = c.counters.clone();
    let pc = match m.instruction(c.pc) {
        Instruction::Halt => return Err(MachineError::StepFromHalt),
        Instruction::Inc { counter, goto } => {
            counters[counter - 1] += 1;
            goto
        }
        Instruction::Dec { counter, goto } => {
            counters[counter - 1] = counters[counter - 1].saturating_sub(1);
            goto
        }
        Instruction::IfZero {
            counter,
            zero,
            nonzero,
        } => {
            if counters[counter - 1] == 0 {
                zero
            } else {
                nonzero
            }
        }
    };
    if let Some(errs) = errors {
        if errs.len() != m.k {
            return Err(MachineError::ErrorArity {
                expected: m.k,
                found: errs.len(),
            });
        }
        for (c, e) in counters.iter_mut().zip(errs) {
            *c += e;
        }
    }
    Ok(Configuration { pc, counters })
}

/// Runs from `(1, 0, …, 0)` until HALT or `max_steps` moves.
pub fn run(
    m: &CounterMachine,
    max_steps: usize,
    schedule: &ErrorSchedule,
) -> Result<Run, MachineError> {
    if max_steps == 0 {
        return Err(MachineError::ZeroSteps);
    }
    let mut configs = vec![m.initial()];
    let mut errors = Vec::new();
    for s in 1..=max_steps {
        let cur = configs.last().expect("non-empty");
        if m.instruction(cur.pc) == Instruction::Halt {
            break;
        }
        let errs = schedule
            .at(s)
            .map(<[u64]>::to_vec)
            .unwrap_or_else(|| vec![0; m.k]);
        let next = step(m, cur, Some(&errs))?;
        configs.push(next);
        errors.push(errs);
    }
    let halted = m.instruction(configs.last().expect("non-empty").pc) == Instruction::Halt;
    Ok(Run {
        configs,
        errors,
        halted,
        truncated: !halted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pc: usize, counters: &[u64]) -> Configuration {
        Configuration {
            pc,
            counters: counters.to_vec(),
        }
    }

    #[test]
    fn figure_one_increment() {
        let m = CounterMachine::new(
            3,
            vec![
                Instruction::Inc {
                    counter: 2,
                    goto: 2,
                },
                Instruction::Halt,
            ],
        )
        .unwrap();
        assert_eq!(
            step(&m, &cfg(1, &[2, 0, 1]), None).unwrap(),
            cfg(2, &[2, 1, 1])
        );
        assert_eq!(
            step(&m, &cfg(1, &[2, 0, 1]), Some(&[0, 1, 0])).unwrap(),
            cfg(2, &[2, 2, 1])
        );
        assert_eq!(
            step(&m, &cfg(2, &[0, 0, 0]), None),
            Err(MachineError::StepFromHalt)
        );
    }

    #[test]
    fn zero_check_and_zero_decrement() {
        let m = CounterMachine::new(
            1,
            vec![
                Instruction::IfZero {
                    counter: 1,
                    zero: 2,
                    nonzero: 3,
                },
                Instruction::Dec {
                    counter: 1,
                    goto: 3,
                },
                Instruction::Halt,
            ],
        )
        .unwrap();
        assert_eq!(step(&m, &cfg(1, &[0]), None).unwrap(), cfg(2, &[0]));
        assert_eq!(step(&m, &cfg(2, &[0]), None).unwrap(), cfg(3, &[0]));
    }

    #[test]
    fn validation() {
        assert_eq!(CounterMachine::new(1, vec![]), Err(MachineError::Empty));
        assert!(matches!(
            CounterMachine::new(
                1,
                vec![
                    Instruction::Inc {
                        counter: 2,
                        goto: 1
                    },
                    Instruction::Halt
                ]
            ),
            Err(MachineError::BadCounter { .. })
        ));
        assert!(matches!(
            CounterMachine::new(
                1,
                vec![
                    Instruction::Inc {
                        counter: 1,
                        goto: 3
                    },
                    Instruction::Halt
                ]
            ),
            Err(MachineError::BadTarget { .. })
        ));
        assert_eq!(
            CounterMachine::new(1, vec![Instruction::Halt, Instruction::Halt]),
            Err(MachineError::EarlyHalt(1))
        );
    }

    #[test]
    fn runs() {
        let one = CounterMachine::new(
            1,
            vec![
                Instruction::Inc {
                    counter: 1,
                    goto: 2,
                },
                Instruction::Halt,
            ],
        )
        .unwrap();
        let r = run(&one, 10, &ErrorSchedule::none()).unwrap();
        assert_eq!(r.configs, vec![cfg(1, &[0]), cfg(2, &[1])]);
        assert!(r.halted);
        let looping = CounterMachine::new(
            1,
            vec![
                Instruction::Inc {
                    counter: 1,
                    goto: 1,
                },
                Instruction::Halt,
            ],
        )
        .unwrap();
        let r = run(&looping, 10, &ErrorSchedule::none()).unwrap();
        assert_eq!(r.configs.len(), 11);
        assert!(r.truncated);
        assert_eq!(
            run(&looping, 0, &ErrorSchedule::none()),
            Err(MachineError::ZeroSteps)
        );
    }
}

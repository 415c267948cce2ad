use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::eval::satisfies;
use crate::timedword::{Event, Time, TimedWord};

use super::formulas::phi_iecm_conjuncts;
use super::{step, Configuration, CounterMachine, Instruction, MachineError, Run};

pub fn symbol_s(p: usize) -> String {
    format!("s.p{p}")
}

pub fn symbol_f(p: usize) -> String {
    format!("f.p{p}")
}

pub fn symbol_a(j: usize) -> String {
    format!("a.{j}")
}

pub fn symbol_b(j: usize) -> String {
    format!("b.{j}")
}

/// `Σ_IECM`: every `s`, `f`, `a` and `b` symbol of the machine.
pub fn sigma_iecm(m: &CounterMachine) -> Vec<String> {
    let n = m.len();
    let k = m.counters();
    (1..=n)
        .map(symbol_s)
        .chain((1..=n).map(symbol_f))
        .chain((1..=k).map(symbol_a))
        .chain((1..=k).map(symbol_b))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    S(usize),
    A(usize),
    B(usize),
    F(usize),
}

impl Sym {
    fn name(self) -> String {
        match self {
            Sym::S(p) => symbol_s(p),
            Sym::A(j) => symbol_a(j),
            Sym::B(j) => symbol_b(j),
            Sym::F(p) => symbol_f(p),
        }
    }
}

type Block = Vec<(Sym, Time)>;

// A point of the next configuration: either pinned to a time, with the
// earliest time any following inserted point may take, or free.
enum Slot {
    Pinned(Sym, Time, Time),
    Free(Sym),
}

fn rat(n: i64, d: i64) -> Time {
    BigRational::new(n.into(), d.into())
}

fn initial_block(c: &Configuration) -> Block {
    vec![(Sym::S(c.pc), Time::zero()), (Sym::F(c.pc), rat(1, 2))]
}

fn pairs(block: &Block, j: usize) -> Vec<(Time, Time)> {
    block
        .windows(2)
        .filter(|w| w[0].0 == Sym::A(j))
        .map(|w| (w[0].1.clone(), w[1].1.clone()))
        .collect()
}

fn next_block(
    m: &CounterMachine,
    from: &Configuration,
    block: &Block,
    to: &Configuration,
    errors: &[u64],
    step_no: usize,
) -> Result<Block, MachineError> {
    let gap = block
        .windows(2)
        .map(|w| &w[1].1 - &w[0].1)
        .min()
        .expect("configurations have at least two points");
    let eps = &gap / rat(4, 1);
    let one = Time::one();
    let (sigma, phi) = (&block[0].1, &block[block.len() - 1].1);

    let ins = m.instruction(from.pc);
    let mut slots = vec![{
        let t = sigma + &one + &eps;
        Slot::Pinned(Sym::S(to.pc), t.clone(), t)
    }];
    for j in 1..=m.counters() {
        let mut src = pairs(block, j);
        let e = errors[j - 1];
        match ins {
            Instruction::Dec { counter, .. } if counter == j && !src.is_empty() => {
                if src.len() == 1 && e > 0 {
                    return Err(MachineError::Unencodable {
                        step: step_no,
                        reason: format!("error on counter {j} while decrementing it from one"),
                    });
                }
                src.pop();
            }
            Instruction::Dec { counter, .. } if counter == j && e > 0 => {
                return Err(MachineError::Unencodable {
                    step: step_no,
                    reason: format!("error on counter {j} while decrementing it at zero"),
                });
            }
            _ => {}
        }
        for _ in 0..e {
            slots.extend([Slot::Free(Sym::A(j)), Slot::Free(Sym::B(j))]);
        }
        for (ta, tb) in src {
            for (sym, t) in [(Sym::A(j), ta), (Sym::B(j), tb)] {
                slots.push(Slot::Pinned(sym, &t + &one - &eps, &t + &one));
            }
        }
        if matches!(ins, Instruction::Inc { counter, .. } if counter == j) {
            slots.extend([Slot::Free(Sym::A(j)), Slot::Free(Sym::B(j))]);
        }
    }
    let t = phi + &one - &eps;
    slots.push(Slot::Pinned(Sym::F(to.pc), t.clone(), t));

    let mut out = Block::new();
    let mut i = 0;
    while i < slots.len() {
        let Slot::Pinned(sym, t, floor) = &slots[i] else {
            unreachable!("runs of free slots are consumed after their pinned predecessor")
        };
        out.push((*sym, t.clone()));
        let run_end = (i + 1..slots.len())
            .find(|x| matches!(slots[*x], Slot::Pinned(..)))
            .unwrap_or(slots.len());
        if run_end > i + 1 {
            let Slot::Pinned(_, ceiling, _) = &slots[run_end] else {
                unreachable!("the final slot is pinned")
            };
            let count = (run_end - i - 1) as i64;
            let span = ceiling - floor;
            for (r, slot) in slots[i + 1..run_end].iter().enumerate() {
                let Slot::Free(sym) = slot else {
                    unreachable!()
                };
                out.push((*sym, floor + &span * rat(r as i64 + 1, count + 1)));
            }
        }
        i = run_end;
    }
    Ok(out)
}

/// The timed word of a halting run without consulting the evaluator.
pub fn encode_run_unchecked(m: &CounterMachine, r: &Run) -> Result<TimedWord, MachineError> {
    if !r.halted || r.last().pc != m.len() {
        return Err(MachineError::NotHalting);
    }
    let mut block = initial_block(&r.configs[0]);
    let mut events: Vec<Event> = Vec::new();
    let mut flush = |b: &Block| {
        events.extend(b.iter().map(|(sym, t)| Event {
            props: [sym.name()].into_iter().collect(),
            time: t.clone(),
        }))
    };
    flush(&block);
    for (s, pair) in r.configs.windows(2).enumerate() {
        let (from, to) = (&pair[0], &pair[1]);
        let expected = step(m, from, None)?;
        let not_a_move = || MachineError::Unencodable {
            step: s + 1,
            reason: format!("{from} -> {to} is not a move"),
        };
        if expected.pc != to.pc {
            return Err(not_a_move());
        }
        let errors = expected
            .counters
            .iter()
            .zip(&to.counters)
            .map(|(e, t)| t.checked_sub(*e).ok_or_else(not_a_move))
            .collect::<Result<Vec<u64>, _>>()?;
        block = next_block(m, from, &block, to, &errors, s + 1)?;
        flush(&block);
    }
    TimedWord::new(events).map_err(|e| MachineError::Unencodable {
        step: 0,
        reason: e.to_string(),
    })
}

/// Encodes a halting run, one configuration per unit interval, and checks
/// every conjunct of `φ_IECM` on the result.
pub fn encode_run(m: &CounterMachine, r: &Run) -> Result<TimedWord, MachineError> {
    let w = encode_run_unchecked(m, r)?;
    for (name, f) in phi_iecm_conjuncts(m) {
        if !satisfies(&w, &f).unwrap_or(false) {
            return Err(MachineError::EncodingRejected(name));
        }
    }
    Ok(w)
}

use std::collections::BTreeMap;

use super::{CounterMachine, ErrorSchedule, Instruction, MachineError};

fn syntax(line: usize, msg: impl Into<String>) -> MachineError {
    MachineError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<usize, MachineError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(line, format!("expected {what}")))
}

fn expect(line: usize, tok: Option<&str>, word: &str) -> Result<(), MachineError> {
    match tok {
        Some(t) if t == word => Ok(()),
        _ => Err(syntax(line, format!("expected `{word}`"))),
    }
}

fn instruction(line: usize, body: &str) -> Result<Instruction, MachineError> {
    let mut toks = body.split_whitespace();
    let op = toks
        .next()
        .ok_or_else(|| syntax(line, "missing instruction"))?;
    let ins = match op {
        "inc" | "dec" => {
            let counter = number(line, toks.next(), "a counter")?;
            expect(line, toks.next(), "goto")?;
            let goto = number(line, toks.next(), "a target")?;
            if op == "inc" {
                Instruction::Inc { counter, goto }
            } else {
                Instruction::Dec { counter, goto }
            }
        }
        "ifz" => {
            let counter = number(line, toks.next(), "a counter")?;
            expect(line, toks.next(), "goto")?;
            let zero = number(line, toks.next(), "a target")?;
            expect(line, toks.next(), "else")?;
            let nonzero = number(line, toks.next(), "a target")?;
            Instruction::IfZero {
                counter,
                zero,
                nonzero,
            }
        }
        "halt" => Instruction::Halt,
        other => return Err(syntax(line, format!("unknown instruction `{other}`"))),
    };
    if toks.next().is_some() {
        return Err(syntax(line, "trailing input"));
    }
    Ok(ins)
}

fn schedule_line(
    line: usize,
    rest: &str,
    k: Option<usize>,
) -> Result<(usize, Vec<u64>), MachineError> {
    let (step, incs) = rest
        .split_once(':')
        .ok_or_else(|| syntax(line, "expected `step N: +e1 … +ek`"))?;
    let step = number(line, Some(step.trim()), "a step number")?;
    let incs = incs
        .split_whitespace()
        .map(|t| {
            t.strip_prefix('+')
                .unwrap_or(t)
                .parse::<u64>()
                .map_err(|_| syntax(line, format!("bad increment `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(k) = k {
        if incs.len() != k {
            return Err(MachineError::ErrorArity {
                expected: k,
                found: incs.len(),
            });
        }
    }
    if step == 0 {
        return Err(syntax(line, "steps are numbered from 1"));
    }
    Ok((step, incs))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses a machine file that may also carry `step N: +e1 … +ek` lines.
pub fn parse_machine_file(text: &str) -> Result<(CounterMachine, ErrorSchedule), MachineError> {
    let mut k = None;
    let mut instructions = BTreeMap::new();
    let mut schedule = BTreeMap::new();
    for (line, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("counters:") {
            k = Some(number(line, Some(rest.trim()), "a counter count")?);
        } else if let Some(rest) = l.strip_prefix("step") {
            let (s, incs) = schedule_line(line, rest, k)?;
            schedule.insert(s, incs);
        } else {
            let (label, body) = l
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected `N: instruction`"))?;
            let label = number(line, Some(label.trim()), "an instruction label")?;
            if label != instructions.len() + 1 {
                return Err(syntax(
                    line,
                    format!("expected label {}", instructions.len() + 1),
                ));
            }
            instructions.insert(label, instruction(line, body)?);
        }
    }
    let k = k.ok_or_else(|| syntax(1, "missing `counters: k`"))?;
    let m = CounterMachine::new(k, instructions.into_values().collect())?;
    Ok((m, ErrorSchedule(schedule)))
}

pub fn parse_machine(text: &str) -> Result<CounterMachine, MachineError> {
    parse_machine_file(text).map(|(m, _)| m)
}

/// Parses `step N: +e1 … +ek` lines on their own.
pub fn parse_schedule(text: &str, k: usize) -> Result<ErrorSchedule, MachineError> {
    let mut out = BTreeMap::new();
    for (line, l) in lines(text) {
        let rest = l
            .strip_prefix("step")
            .ok_or_else(|| syntax(line, "expected `step N: …`"))?;
        let (s, incs) = schedule_line(line, rest, Some(k))?;
        out.insert(s, incs);
    }
    Ok(ErrorSchedule(out))
}

use std::collections::BTreeSet;

use super::regex::parse_letter_body;
use super::{AutomataError, SymbolicNfa};

/// An automaton read from text together with the formula names of its `S:` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedAutomaton {
    pub names: Vec<String>,
    pub nfa: SymbolicNfa,
}

fn syntax(line: usize, msg: impl Into<String>) -> AutomataError {
    AutomataError::Syntax {
        pos: line,
        msg: msg.into(),
    }
}

fn items(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split(['\n', ';'])
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses the standalone format, which must declare `S: name …`.
pub fn parse_automaton(text: &str) -> Result<ParsedAutomaton, AutomataError> {
    let names = items(text)
        .find_map(|(_, l)| l.strip_prefix("S:"))
        .map(|rest| {
            rest.split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
        .ok_or_else(|| syntax(1, "missing `S:` line"))?;
    let nfa = parse_automaton_with_names(text, &names)?;
    Ok(ParsedAutomaton { names, nfa })
}

/// Parses an automaton whose letters range over `names`; lines may be
/// separated by newlines or `;`.
pub fn parse_automaton_with_names(
    text: &str,
    names: &[String],
) -> Result<SymbolicNfa, AutomataError> {
    let mut states: Option<Vec<String>> = None;
    let mut init: Option<String> = None;
    let mut finals: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();
    for (line, item) in items(text) {
        if let Some(rest) = item.strip_prefix("S:") {
            let declared: Vec<&str> = rest.split_whitespace().collect();
            if declared.len() != names.len() {
                return Err(AutomataError::AlphabetMismatch {
                    expected: names.len(),
                    found: declared.len(),
                });
            }
        } else if let Some(rest) = item.strip_prefix("states:") {
            states = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = item.strip_prefix("init:") {
            init = Some(rest.trim().to_string());
        } else if let Some(rest) = item.strip_prefix("final:") {
            finals.extend(rest.split_whitespace().map(str::to_string));
        } else {
            let (src, rest) = item
                .split_once("-{")
                .ok_or_else(|| syntax(line, format!("cannot read `{item}`")))?;
            let (body, dst) = rest
                .split_once("}->")
                .ok_or_else(|| syntax(line, "expected `q -{…}-> q'`"))?;
            edges.push((line, src.trim().into(), body.into(), dst.trim().into()));
        }
    }
    let states = states.ok_or_else(|| syntax(1, "missing `states:` line"))?;
    let index = |name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| AutomataError::UnknownState(name.to_string()))
    };
    let init = index(&init.ok_or_else(|| syntax(1, "missing `init:` line"))?)?;
    let accepting: BTreeSet<usize> = finals.iter().map(|f| index(f)).collect::<Result<_, _>>()?;
    let mut transitions = BTreeSet::new();
    for (_, src, body, dst) in &edges {
        transitions.insert((index(src)?, parse_letter_body(body, names)?, index(dst)?));
    }
    SymbolicNfa::new(names.len(), states, init, accepting, transitions)
}

impl SymbolicNfa {
    fn text_items(&self, names: Option<&[String]>) -> Vec<String> {
        let st = |q: usize| self.state_names[q].clone();
        let mut out = vec![
            format!("states: {}", self.state_names.join(" ")),
            format!("init: {}", st(self.init)),
        ];
        let finals: Vec<String> = self.accepting.iter().map(|q| st(*q)).collect();
        out.push(
            format!("final: {}", finals.join(" "))
                .trim_end()
                .to_string(),
        );
        for &(p, l, q) in &self.transitions {
            out.push(format!("{} -{}-> {}", st(p), l.render(names), st(q)));
        }
        out
    }

    /// The standalone multi-line format with an `S:` header.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut lines = vec![format!("S: {}", names.join(" "))];
        lines.extend(self.text_items(Some(names)));
        lines.join("\n") + "\n"
    }

    /// The single-line form used inside formulas; letters use `f1, f2, …`.
    pub fn to_inline(&self) -> String {
        self.text_items(None).join("; ")
    }
}

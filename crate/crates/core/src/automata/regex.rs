use std::collections::BTreeSet;
use std::fmt;

use super::{AutomataError, Letter, SymbolicNfa};

/// Regular expressions over exact-truth letters.
///
/// Concrete syntax: letters `{f1,f2}` (or names declared for S), `eps`,
/// `empty`, `any` (every letter), concatenation `.` or juxtaposition,
/// union `+`, Kleene star `*`, parentheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(Letter),
    Any,
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    /// Thompson construction followed by ε-elimination.
    pub fn compile(&self, width: usize) -> Result<SymbolicNfa, AutomataError> {
        let mut t = Thompson::default();
        let (start, end) = t.build(self, width);
        t.eliminate(width, start, end)
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => f.write_str("empty"),
            Regex::Epsilon => f.write_str("eps"),
            Regex::Letter(l) => write!(f, "{l}"),
            Regex::Any => f.write_str("any"),
            Regex::Concat(a, b) => write!(f, "({a}.{b})"),
            Regex::Union(a, b) => write!(f, "({a}+{b})"),
            Regex::Star(a) => write!(f, "({a})*"),
        }
    }
}

#[derive(Default)]
struct Thompson {
    eps: Vec<Vec<usize>>,
    edges: Vec<(usize, Letter, usize)>,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, r: &Regex, width: usize) -> (usize, usize) {
        let s = self.fresh();
        let e = self.fresh();
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[s].push(e),
            Regex::Letter(l) => self.edges.push((s, *l, e)),
            Regex::Any => {
                for l in 0..1u32 << width {
                    self.edges.push((s, Letter(l), e));
                }
            }
            Regex::Concat(a, b) => {
                let (a0, a1) = self.build(a, width);
                let (b0, b1) = self.build(b, width);
                self.eps[s].push(a0);
                self.eps[a1].push(b0);
                self.eps[b1].push(e);
            }
            Regex::Union(a, b) => {
                let (a0, a1) = self.build(a, width);
                let (b0, b1) = self.build(b, width);
                self.eps[s].extend([a0, b0]);
                self.eps[a1].push(e);
                self.eps[b1].push(e);
            }
            Regex::Star(a) => {
                let (a0, a1) = self.build(a, width);
                self.eps[s].extend([a0, e]);
                self.eps[a1].extend([a0, e]);
            }
        }
        (s, e)
    }

    fn closure(&self, q: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([q]);
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for &r in &self.eps[p] {
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        seen
    }

    fn eliminate(
        &self,
        width: usize,
        start: usize,
        end: usize,
    ) -> Result<SymbolicNfa, AutomataError> {
        let n = self.eps.len();
        let mut accepting = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        for p in 0..n {
            let c = self.closure(p);
            if c.contains(&end) {
                accepting.insert(p);
            }
            for &(s, l, r) in &self.edges {
                if c.contains(&s) {
                    transitions.insert((p, l, r));
                }
            }
        }
        let names = (0..n).map(|i| format!("t{i}")).collect();
        Ok(
            SymbolicNfa::new(width, names, start, accepting, transitions)?
                .trim()
                .with_numbered_states(),
        )
    }
}

fn resolve_name(name: &str, names: &[String]) -> Result<usize, AutomataError> {
    if let Some(i) = names.iter().position(|n| n == name) {
        return Ok(i);
    }
    name.strip_prefix('f')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|k| (1..=names.len()).contains(k))
        .map(|k| k - 1)
        .ok_or_else(|| AutomataError::UnknownName(name.to_string()))
}

/// Parses a letter body such as `f1,f2` or `a, b` (without braces).
pub(crate) fn parse_letter_body(body: &str, names: &[String]) -> Result<Letter, AutomataError> {
    let mut indices = Vec::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        indices.push(resolve_name(item, names)?);
    }
    Ok(Letter::from_indices(indices))
}

struct RegexParser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl RegexParser<'_> {
    fn err(&self, msg: impl Into<String>) -> AutomataError {
        AutomataError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(1, char::len_utf8);
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn union(&mut self) -> Result<Regex, AutomataError> {
        let mut r = self.concat()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            r = Regex::union(r, self.concat()?);
        }
        Ok(r)
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some('{') | Some('(') => true,
            Some(_) => ["eps", "empty", "any"]
                .iter()
                .any(|k| self.rest().starts_with(k)),
            None => false,
        }
    }

    fn concat(&mut self) -> Result<Regex, AutomataError> {
        let mut r = self.starred()?;
        loop {
            if self.peek() == Some('.') {
                self.pos += 1;
                r = Regex::concat(r, self.starred()?);
            } else if self.starts_atom() {
                r = Regex::concat(r, self.starred()?);
            } else {
                return Ok(r);
            }
        }
    }

    fn starred(&mut self) -> Result<Regex, AutomataError> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, AutomataError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some('{') => {
                let close = self
                    .rest()
                    .find('}')
                    .ok_or_else(|| self.err("unclosed `{`"))?;
                let body = &self.rest()[1..close];
                let letter = parse_letter_body(body, self.names)?;
                self.pos += close + 1;
                Ok(Regex::Letter(letter))
            }
            _ => {
                for (kw, r) in [
                    ("eps", Regex::Epsilon),
                    ("empty", Regex::Empty),
                    ("any", Regex::Any),
                ] {
                    if self.rest().starts_with(kw) {
                        self.pos += kw.len();
                        return Ok(r);
                    }
                }
                Err(self.err("expected a letter, `eps`, `empty`, `any` or `(`"))
            }
        }
    }
}

/// Parses a regex whose letters name elements of `names` (or `f1`, `f2`, …).
pub fn parse_regex(text: &str, names: &[String]) -> Result<Regex, AutomataError> {
    let mut p = RegexParser {
        src: text,
        pos: 0,
        names,
    };
    let r = p.union()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

pub fn compile_regex(text: &str, names: &[String]) -> Result<SymbolicNfa, AutomataError> {
    parse_regex(text, names)?.compile(names.len())
}

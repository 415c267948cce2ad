use std::collections::BTreeSet;

use super::{FkArgs, Formula as F, Formula, FormulaError, RatArgs};
use crate::automata::{compile_regex, parse_automaton_with_names, SymbolicNfa};
use crate::timedword::Interval;

const KEYWORDS: &[&str] = &[
    "true", "false", "T", "in", "U", "S", "Uns", "Sns", "F", "G", "PG", "O", "Obar", "Fns", "Gns",
    "Rat", "FRat", "PRat", "Fk", "Pk",
];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> FormulaError {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> FormulaError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(pos, |n| pos - n - 1) + 1;
        FormulaError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek_char(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), FormulaError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    /// Reads `name(.name)*` where a dot continues the word only when followed
    /// by an identifier that is not an operator keyword.
    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let mut chars = r.char_indices().peekable();
        match chars.peek() {
            Some((_, c)) if is_ident_start(*c) => {}
            _ => return None,
        }
        let bytes = r.as_bytes();
        let mut end = 0;
        while end < r.len() {
            let c = bytes[end] as char;
            if is_ident_char(c) {
                end += 1;
            } else if c == '.' && end + 1 < r.len() && is_ident_char(bytes[end + 1] as char) {
                let tail = &r[end + 1..];
                let seg_len = tail.find(|c: char| !is_ident_char(c)).unwrap_or(tail.len());
                let seg = &tail[..seg_len];
                if KEYWORDS.contains(&seg) || (seg == "P" && tail[seg_len..].starts_with("<>")) {
                    break;
                }
                end += 1;
            } else {
                break;
            }
        }
        Some(&r[..end])
    }

    fn peek_keyword(&mut self, kw: &str) -> bool {
        self.peek_word() == Some(kw)
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.implication()?;
        if self.eat("<->") {
            return Ok(F::iff(lhs, self.formula()?));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            return Ok(F::implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            f = F::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.temporal()?;
        while self.eat("&") {
            f = F::and(f, self.temporal()?);
        }
        Ok(f)
    }

    fn temporal(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.unary()?;
        let op = match self.peek_word() {
            Some(w @ ("U" | "S" | "Uns" | "Sns")) => w,
            _ => return Ok(lhs),
        };
        self.pos += op.len();
        let i = self.subscript()?;
        let rhs = self.temporal()?;
        Ok(match op {
            "U" => F::until(i, lhs, rhs),
            "S" => F::since(i, lhs, rhs),
            "Uns" => F::until_ns(i, lhs, rhs),
            _ => F::since_ns(i, lhs, rhs),
        })
    }

    fn interval(&mut self) -> Result<Interval, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.rest().chars().next(), Some('(' | '[')) {
            return Err(self.err("expected an interval"));
        }
        let close = self
            .rest()
            .find([')', ']'])
            .ok_or_else(|| self.err("unterminated interval"))?;
        let text = &self.rest()[..=close];
        let i = text
            .parse::<Interval>()
            .map_err(|e| self.err_at(start, e.to_string()))?;
        self.pos += close + 1;
        Ok(i)
    }

    fn subscript(&mut self) -> Result<Option<Interval>, FormulaError> {
        if self.rest().starts_with('[') {
            self.pos += 1;
            let i = self.interval()?;
            self.expect("]")?;
            Ok(Some(i))
        } else {
            Ok(None)
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat("!") {
            return Ok(F::not(self.unary()?));
        }
        if self.rest().starts_with("P<>") {
            self.pos += 3;
            let i = self.subscript()?;
            return Ok(F::eventually_past(i, self.unary()?));
        }
        if let Some(w) = self.peek_word() {
            let ctor: Option<fn(Option<Interval>, Formula) -> Formula> = match w {
                "F" => Some(F::eventually),
                "G" => Some(F::always),
                "PG" => Some(F::always_past),
                "O" => Some(F::next),
                "Obar" => Some(F::prev),
                _ => None,
            };
            if let Some(ctor) = ctor {
                self.pos += w.len();
                let i = self.subscript()?;
                return Ok(ctor(i, self.unary()?));
            }
            if w == "Fns" || w == "Gns" {
                self.pos += w.len();
                let body = self.unary()?;
                return Ok(if w == "Fns" {
                    F::eventually_ns(body)
                } else {
                    F::always_ns(body)
                });
            }
            if !KEYWORDS.contains(&w) && self.rest()[w.len()..].starts_with('.') {
                self.pos += w.len() + 1;
                let body = self.unary()?;
                return Ok(w.rsplit('.').fold(body, |acc, x| F::freeze(x, acc)));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        let start = self.pos;
        let w = self
            .peek_word()
            .ok_or_else(|| self.err("expected a formula"))?;
        match w {
            "true" => {
                self.pos += w.len();
                Ok(F::True)
            }
            "false" => {
                self.pos += w.len();
                Ok(F::False)
            }
            "T" => {
                self.pos += 1;
                self.expect("-")?;
                let x = self.variable()?;
                self.in_interval().map(|i| F::t_minus_x(x, i))
            }
            "Rat" | "FRat" | "PRat" => {
                self.pos += w.len();
                self.rat(w)
            }
            "Fk" | "Pk" => {
                self.pos += w.len();
                self.fk(w)
            }
            _ if KEYWORDS.contains(&w) => {
                Err(self.err_at(start, format!("unexpected keyword `{w}`")))
            }
            _ => {
                self.pos += w.len();
                self.skip_ws();
                if self.rest().starts_with('-') && !self.rest().starts_with("->") {
                    self.pos += 1;
                    if !self.peek_keyword("T") {
                        return Err(self.err("expected `T` in `x-T in I`"));
                    }
                    self.pos += 1;
                    return self.in_interval().map(|i| F::x_minus_t(w, i));
                }
                if self.peek_keyword("in") {
                    return self.in_interval().map(|i| F::t_minus_x(w, i));
                }
                Ok(F::atom(w))
            }
        }
    }

    fn variable(&mut self) -> Result<String, FormulaError> {
        match self.peek_word() {
            Some(w) if !KEYWORDS.contains(&w) => {
                self.pos += w.len();
                Ok(w.to_string())
            }
            _ => Err(self.err("expected a freeze variable")),
        }
    }

    fn in_interval(&mut self) -> Result<Interval, FormulaError> {
        if !self.peek_keyword("in") {
            return Err(self.err("expected `in`"));
        }
        self.pos += 2;
        self.interval()
    }

    fn formula_set(&mut self) -> Result<Vec<Formula>, FormulaError> {
        self.expect("(")?;
        let mut set = Vec::new();
        if self.eat(")") {
            return Ok(set);
        }
        loop {
            set.push(self.formula()?);
            if self.eat(";") {
                continue;
            }
            self.expect(")")?;
            return Ok(set);
        }
    }

    // Raw text between balanced braces, split at top-level `|`.
    fn automata_block(&mut self) -> Result<Vec<(usize, &'a str)>, FormulaError> {
        self.expect("{")?;
        let body_start = self.pos;
        let mut depth = 1;
        let mut pieces = Vec::new();
        let mut piece_start = body_start;
        for (off, c) in self.rest().char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        let abs = body_start + off;
                        pieces.push((piece_start, &self.src[piece_start..abs]));
                        self.pos = abs + 1;
                        return Ok(pieces);
                    }
                }
                '|' if depth == 1 => {
                    let abs = body_start + off;
                    pieces.push((piece_start, &self.src[piece_start..abs]));
                    piece_start = abs + 1;
                }
                _ => {}
            }
        }
        Err(self.err_at(body_start, "unclosed `{`"))
    }

    fn automaton(
        &self,
        at: usize,
        text: &str,
        set: &[Formula],
    ) -> Result<SymbolicNfa, FormulaError> {
        let names: Vec<String> = set.iter().map(super::print).collect();
        let t = text.trim();
        let result = if let Some(inner) = t.strip_prefix('@') {
            let inner = inner.trim();
            let body = inner
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| self.err_at(at, "expected `@{…}`"))?;
            parse_automaton_with_names(body, &names)
        } else {
            compile_regex(t, &names)
        };
        result.map_err(|e| self.err_at(at, e.to_string()))
    }

    fn rat(&mut self, kind: &str) -> Result<Formula, FormulaError> {
        if !self.rest().starts_with('[') {
            return Err(self.err("expected `[interval]`"));
        }
        let i = self.subscript()?.expect("subscript present");
        let set = self.formula_set()?;
        let pieces = self.automata_block()?;
        if pieces.len() != 1 {
            return Err(self.err(format!("{kind} takes exactly one automaton")));
        }
        let nfa = self.automaton(pieces[0].0, pieces[0].1, &set)?;
        let args = RatArgs::new(nfa, set)?;
        Ok(match kind {
            "Rat" => F::Rat(i, args),
            "FRat" => F::FRat(i, args),
            _ => F::PRat(i, args),
        })
    }

    fn fk(&mut self, kind: &str) -> Result<Formula, FormulaError> {
        self.expect("[")?;
        let mut intervals = vec![self.interval()?];
        while self.eat(";") {
            intervals.push(self.interval()?);
        }
        self.expect("]")?;
        let set = self.formula_set()?;
        let at = self.pos;
        let automata = self
            .automata_block()?
            .into_iter()
            .map(|(p, t)| self.automaton(p, t, &set))
            .collect::<Result<Vec<_>, _>>()?;
        let args =
            FkArgs::new(intervals, automata, set).map_err(|e| self.err_at(at, e.to_string()))?;
        Ok(if kind == "Fk" {
            F::Fk(args)
        } else {
            F::Pk(args)
        })
    }
}

/// Parses a formula, allowing free freeze variables in constraints.
pub fn parse_open(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    if p.peek_char().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a formula and rejects constraints on unbound freeze variables.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let f = parse_open(text)?;
    let free: BTreeSet<String> = f.free_vars();
    match free.into_iter().next() {
        Some(x) => Err(FormulaError::UnboundVariable(x)),
        None => Ok(f),
    }
}

use crate::formula::{Formula as F, Formula};
use crate::timedword::{Endpoint, Interval};

use super::encode::{sigma_iecm, symbol_a, symbol_b, symbol_f, symbol_s};
use super::{CounterMachine, Instruction};

const X: &str = "x";

fn iv(lo: i64, hi: Endpoint, lo_closed: bool, hi_closed: bool) -> Interval {
    Interval::new(Endpoint::Finite(lo), hi, lo_closed, hi_closed).expect("fixed interval")
}

fn open(lo: i64, hi: i64) -> Interval {
    iv(lo, Endpoint::Finite(hi), false, false)
}

fn within(i: Interval) -> Formula {
    F::t_minus_x(X, i)
}

fn ago(i: Interval) -> Formula {
    F::x_minus_t(X, i)
}

fn next(f: Formula) -> Formula {
    F::next(None, f)
}

fn ev(f: Formula) -> Formula {
    F::eventually(None, f)
}

fn until(a: Formula, b: Formula) -> Formula {
    F::until(None, a, b)
}

fn never() -> Formula {
    F::always(None, F::False)
}

fn freeze(f: Formula) -> Formula {
    F::freeze(X, f)
}

fn g(f: Formula) -> Formula {
    F::always_ns(f)
}

struct Vocab<'a> {
    m: &'a CounterMachine,
}

impl Vocab<'_> {
    fn n(&self) -> usize {
        self.m.len()
    }

    fn k(&self) -> usize {
        self.m.counters()
    }

    fn s(&self, p: usize) -> Formula {
        F::atom(symbol_s(p))
    }

    fn f(&self, p: usize) -> Formula {
        F::atom(symbol_f(p))
    }

    fn a(&self, j: usize) -> Formula {
        F::atom(symbol_a(j))
    }

    fn b(&self, j: usize) -> Formula {
        F::atom(symbol_b(j))
    }

    fn any_s(&self) -> Formula {
        F::or_all((1..=self.n()).map(|p| self.s(p)))
    }

    fn any_f(&self) -> Formula {
        F::or_all((1..=self.n()).map(|p| self.f(p)))
    }

    /// `A_j = ⋁_{w ≥ j} a_w`, false beyond `k`.
    fn a_from(&self, j: usize) -> Formula {
        F::or_all((j..=self.k()).map(|w| self.a(w)))
    }

    fn block_end(&self, j: usize) -> Formula {
        F::or(self.any_f(), self.a_from(j + 1))
    }

    fn last_a(&self, j: usize) -> Formula {
        F::and(self.a(j), next(next(self.block_end(j))))
    }

    fn last_b(&self, j: usize) -> Formula {
        F::and(self.b(j), next(self.block_end(j)))
    }

    fn nl_a(&self, j: usize) -> Formula {
        F::and(self.a(j), F::not(self.last_a(j)))
    }

    fn nl_b(&self, j: usize) -> Formula {
        F::and(self.b(j), F::not(self.last_b(j)))
    }

    fn second_last_a(&self, j: usize) -> Formula {
        F::and(self.a(j), next(next(self.last_a(j))))
    }

    fn not_halting_soon(&self) -> Formula {
        F::not(ev(F::and(self.f(self.n()), within(open(0, 1)))))
    }

    fn phi1(&self) -> Formula {
        let mut parts = Vec::new();
        for p in 1..=self.n() {
            parts.push(g(F::implies(
                self.s(p),
                next(F::or(self.a_from(1), self.f(p))),
            )));
            parts.push(g(F::implies(
                self.s(p),
                until(F::not(self.any_f()), self.f(p)),
            )));
            parts.push(g(F::implies(self.f(p), F::or(next(self.any_s()), never()))));
        }
        for j in 1..=self.k() {
            parts.push(g(F::implies(self.a(j), next(self.b(j)))));
            parts.push(g(F::implies(
                self.b(j),
                next(F::or(self.a_from(j), self.any_f())),
            )));
        }
        F::and_all(parts)
    }

    fn phi2(&self) -> Formula {
        freeze(F::and(
            self.s(1),
            next(F::and(self.f(1), within(open(0, 1)))),
        ))
    }

    fn phi3(&self) -> Formula {
        let n = self.n();
        let s_step = freeze(F::implies(
            F::and(self.any_s(), F::not(self.s(n))),
            F::and(
                F::not(ev(F::and(
                    within(Interval::closed(0, 1).expect("fixed")),
                    self.any_s(),
                ))),
                ev(F::and(self.any_s(), within(open(1, 2)))),
            ),
        ));
        let f_step = freeze(F::implies(
            F::and(self.any_f(), F::not(self.f(n))),
            ev(F::and(self.any_f(), within(open(0, 1)))),
        ));
        F::and(g(s_step), g(f_step))
    }

    fn phi4(&self) -> Formula {
        g(F::implies(self.f(self.n()), never()))
    }

    fn phi5_distinct(&self) -> Formula {
        let sigma = sigma_iecm(self.m);
        let mut parts: Vec<Formula> = sigma
            .iter()
            .map(|y| {
                let others = F::or_all(sigma.iter().filter(|z| *z != y).map(F::atom));
                g(F::implies(F::atom(y.clone()), F::not(others)))
            })
            .collect();
        parts.push(g(freeze(F::or(
            never(),
            next(within(Interval::unbounded_from(0, false))),
        ))));
        F::and_all(parts)
    }

    fn phi6_halt(&self) -> Formula {
        F::eventually_ns(self.s(self.n()))
    }

    fn phi7(&self) -> Formula {
        let mut parts = Vec::new();
        for j in 1..=self.k() {
            for (nl, sym) in [(self.nl_a(j), self.a(j)), (self.nl_b(j), self.b(j))] {
                parts.push(g(freeze(F::implies(
                    F::and(nl, self.not_halting_soon()),
                    ev(F::and_all([
                        sym,
                        within(open(0, 1)),
                        next(within(open(1, 2))),
                    ])),
                ))));
            }
        }
        F::and_all(parts)
    }

    fn in_instruction(&self, p: usize) -> Formula {
        until(F::not(self.any_f()), self.f(p))
    }

    /// Copies the last `a_j b_j` of every counter outside `skip` from a
    /// configuration at instruction `p` into the next one.
    fn copy(&self, p: usize, skip: Option<usize>) -> Formula {
        F::and_all((1..=self.k()).filter(|j| Some(*j) != skip).map(|j| {
            g(freeze(F::implies(
                F::and(self.last_a(j), self.in_instruction(p)),
                ev(F::and_all([
                    self.a(j),
                    within(open(0, 1)),
                    next(F::and_all([
                        self.b(j),
                        within(open(1, 2)),
                        next(self.block_end(j)),
                    ])),
                ])),
            )))
        }))
    }

    fn goto(&self, p: usize, h: usize) -> Formula {
        g(F::implies(
            self.s(p),
            until(F::not(self.any_s()), self.s(h)),
        ))
    }

    fn zero_at(&self, p: usize, j: usize) -> Formula {
        F::and(self.s(p), until(F::not(self.a(j)), self.f(p)))
    }

    fn nonzero_at(&self, p: usize, j: usize) -> Formula {
        F::and(self.s(p), until(F::not(self.any_f()), self.a(j)))
    }

    fn stays_zero(&self, h: usize, j: usize) -> Formula {
        until(
            F::not(self.any_s()),
            F::and(self.s(h), until(F::not(self.a(j)), self.any_f())),
        )
    }

    fn phi8(&self, p: usize) -> Option<Formula> {
        Some(match self.m.instruction(p) {
            Instruction::Halt => return None,
            Instruction::IfZero {
                counter: j,
                zero,
                nonzero,
            } => F::and_all([
                self.copy(p, None),
                g(F::implies(
                    F::and(self.s(p), until(F::not(self.a(j)), self.any_f())),
                    until(F::not(self.any_s()), self.s(zero)),
                )),
                g(F::implies(
                    self.nonzero_at(p, j),
                    until(F::not(self.any_s()), self.s(nonzero)),
                )),
            ]),
            Instruction::Inc {
                counter: j,
                goto: h,
            } => {
                let from_zero = g(F::implies(
                    self.zero_at(p, j),
                    until(
                        F::not(self.any_s()),
                        freeze(F::and(self.s(h), ev(F::and(within(open(0, 1)), self.a(j))))),
                    ),
                ));
                let appended = g(F::implies(
                    self.nonzero_at(p, j),
                    until(
                        F::not(self.any_f()),
                        freeze(F::and(
                            self.last_a(j),
                            ev(F::and_all([
                                within(open(0, 1)),
                                self.a(j),
                                next(next(F::and(self.last_a(j), within(open(1, 2))))),
                            ])),
                        )),
                    ),
                ));
                F::and_all([self.copy(p, Some(j)), self.goto(p, h), from_zero, appended])
            }
            Instruction::Dec {
                counter: j,
                goto: h,
            } => {
                let from_zero = g(F::implies(self.zero_at(p, j), self.stays_zero(h, j)));
                let dropped = g(F::implies(
                    F::and(self.s(p), until(F::not(self.any_f()), self.nl_a(j))),
                    until(
                        F::not(self.any_f()),
                        freeze(F::and(
                            self.second_last_a(j),
                            ev(F::and_all([
                                within(open(0, 1)),
                                self.a(j),
                                next(next(F::and(self.block_end(j), within(open(1, 2))))),
                            ])),
                        )),
                    ),
                ));
                let from_one = g(F::implies(
                    F::and(
                        self.s(p),
                        until(
                            F::and(F::not(self.a(j)), F::not(self.any_f())),
                            self.last_a(j),
                        ),
                    ),
                    self.stays_zero(h, j),
                ));
                F::and_all([
                    self.copy(p, Some(j)),
                    self.goto(p, h),
                    from_zero,
                    dropped,
                    from_one,
                ])
            }
        })
    }

    fn phi9(&self) -> Formula {
        let mut parts = Vec::new();
        for j in 1..=self.k() {
            for (sym, last) in [(self.a(j), self.last_a(j)), (self.b(j), self.last_b(j))] {
                parts.push(g(freeze(F::implies(
                    F::and(sym.clone(), F::not(last)),
                    F::eventually_past(
                        None,
                        F::and(ago(open(1, 2)), next(F::and(sym, ago(open(0, 1))))),
                    ),
                ))));
            }
        }
        F::and_all(parts)
    }
}

/// The named conjuncts of `φ_IECM`, in order: `phi1` … `phi7` (with the
/// distinct-timestamp and halting conjuncts named `phi5_distinct` and
/// `phi6_halt`) followed by `phi8_p<g>` for every non-HALT instruction.
pub fn phi_iecm_conjuncts(m: &CounterMachine) -> Vec<(String, Formula)> {
    let v = Vocab { m };
    let mut out = vec![
        ("phi1".to_string(), v.phi1()),
        ("phi2".to_string(), v.phi2()),
        ("phi3".to_string(), v.phi3()),
        ("phi4".to_string(), v.phi4()),
        ("phi5_distinct".to_string(), v.phi5_distinct()),
        ("phi6_halt".to_string(), v.phi6_halt()),
        ("phi7".to_string(), v.phi7()),
    ];
    for p in 1..=m.len() {
        if let Some(f) = v.phi8(p) {
            out.push((format!("phi8_p{p}"), f));
        }
    }
    out
}

/// Forbids insertion errors: every non-last `a_j`/`b_j` is the first
/// point after its copy source, one time unit earlier.
pub fn phi_9(m: &CounterMachine) -> Formula {
    Vocab { m }.phi9()
}

pub fn build_phi_iecm(m: &CounterMachine) -> Formula {
    F::and_all(phi_iecm_conjuncts(m).into_iter().map(|(_, f)| f))
}

pub fn build_phi_cm(m: &CounterMachine) -> Formula {
    F::and(build_phi_iecm(m), phi_9(m))
}

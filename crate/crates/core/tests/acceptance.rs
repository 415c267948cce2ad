mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{all_words, cm, half_grid, seeded_mtl, seeded_mutations, suite, Naive};
use timelogic::automata::Letter;
use timelogic::countermachine::{build_phi_cm, build_phi_iecm, phi_9};
use timelogic::eval::{seg_plus, tseg, Evaluator};
use timelogic::formula::{classify, flatten, parse, Formula};
use timelogic::reductions::fuzz::{run, Target};
use timelogic::reductions::{
    relativized_formula, verify_oversampled_equisat, verify_simple_equisat, Universe,
};
use timelogic::timedword::{
    project_oversampled, project_simple, set_nonadjacency, Interval, NonAdjacency, TimedWord,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn names(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let spent = start.elapsed();
    if spent <= limit {
        Ok(format!("{detail}, {:.1}s", spent.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}, but took {:.1}s (limit {}s)",
            spent.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn evaluator_oracle() -> Outcome {
    let start = Instant::now();
    let words = all_words(&["a", "b"], 5, &half_grid());
    let formulas = suite();
    let mut checks = 0usize;
    for f in &formulas {
        for w in &words {
            let naive = Naive { word: w };
            let fast = Evaluator::new(w)
                .eval_all(f)
                .map_err(|e| format!("{f}: {e}"))?;
            for (i, v) in fast.iter().enumerate() {
                if *v != naive.holds(f, i + 1) {
                    return Err(format!("{f} disagrees at {} on\n{w}", i + 1));
                }
                checks += 1;
            }
        }
    }
    within(
        Duration::from_secs(60),
        start,
        format!(
            "{} formulas x {} words, {checks} positions agree",
            formulas.len(),
            words.len()
        ),
    )
}

fn render(letters: &[Letter], set: &[Formula]) -> String {
    letters
        .iter()
        .map(|l| {
            if l.indices().count() == set.len() {
                "P[S]".to_string()
            } else {
                let inner: Vec<String> = l.indices().map(|k| set[k].to_string()).collect();
                format!("P[{{{}}}]", inner.join(", "))
            }
        })
        .collect()
}

fn regression_report() -> Result<String, String> {
    let mut out = String::new();
    let rho: TimedWord = "0 : a\n0.5 : b\n0.95 : b\n1.9 : b\n"
        .parse()
        .map_err(|e| format!("{e}"))?;
    let set = vec![parse("F[(0,1)] b").unwrap(), parse("F[(1,2)] b").unwrap()];
    let seg = seg_plus(&rho, 1, 3, &set).map_err(|e| e.to_string())?;
    out += &format!("Seg+(rho, 1, 3, S) = {}\n", render(&seg, &set));
    let window = Interval::open(0, 1).unwrap();
    let t = tseg(&rho, 1, &window, &set).map_err(|e| e.to_string())?;
    out += &format!("TSeg(rho, 1, (0,1), S) = {}\n", render(&t, &set));

    for group in [&["(1,2)", "(3,4)"][..], &["(1,2)", "(2,3)"], &["[2,2]"]] {
        let ivs: Vec<Interval> = group.iter().map(|s| s.parse().unwrap()).collect();
        let verdict = if set_nonadjacency(NonAdjacency::Plain, &ivs) {
            "non-adjacent"
        } else {
            "adjacent"
        };
        out += &format!("{{{}}}: {verdict}\n", group.join(", "));
    }

    for src in [
        "x.(a U (b & T-x in (1,2) & T-x in (3,4)))",
        "x.(a U (b & T-x in (1,2) & T-x in (2,3)))",
        "x.(a U (b & T-x in [2,2]))",
        "x.(a U (b & T-x in [1,2] & (c U (d & T-x in [2,3]))))",
        "x.(a U (b & T-x in [1,2] & T-x in [2,3] & (c S (d & T-x in [-3,-1]))))",
        "x.(a U (b & T-x in [1,2] & (c S (d & T-x in [-3,-1] & T-x in [-1,0]))))",
        "x.(a U (b & T-x in [1,2] & T-x in [2,3] & (c S (d & T-x in [-3,-1] & T-x in [-1,0]))))",
    ] {
        let r = classify(&parse(src).map_err(|e| format!("{src}: {e}"))?);
        out += &format!(
            "{src}: na={} na+={} na-={}\n",
            r.is_na_1tptl, r.is_na_plus, r.is_na_minus
        );
    }

    let x = names(&["c", "d"]);
    let simple: TimedWord = "0 : a d\n0.3 : b c\n1.1 : a b d\n".parse().unwrap();
    out += &format!(
        "simple projection:\n{}",
        project_simple(&simple, &x).map_err(|e| e.to_string())?
    );
    let not_simple: TimedWord = "0 : a\n0.3 : c d\n1.1 : b d\n".parse().unwrap();
    out += &format!("not simple: {}\n", project_simple(&not_simple, &x).is_err());
    let over: TimedWord = "0 : a\n0.3 : c d\n0.7 : a b\n1.1 : b d\n".parse().unwrap();
    out += &format!(
        "oversampled projection:\n{}",
        project_oversampled(&over, &x).map_err(|e| e.to_string())?
    );
    let not_over: TimedWord = "0 : c d\n0.2 : a\n".parse().unwrap();
    out += &format!(
        "not oversampled: {}\n",
        project_oversampled(&not_over, &x).is_err()
    );
    Ok(out)
}

const EXPECTED_REGRESSIONS: &str = "\
Seg+(rho, 1, 3, S) = P[S]P[S]P[{F[(0,1)] b}]
TSeg(rho, 1, (0,1), S) = P[S]P[{F[(0,1)] b}]
{(1,2), (3,4)}: non-adjacent
{(1,2), (2,3)}: adjacent
{[2,2]}: adjacent
x.(a U (b & T-x in (1,2) & T-x in (3,4))): na=true na+=true na-=true
x.(a U (b & T-x in (1,2) & T-x in (2,3))): na=false na+=false na-=true
x.(a U (b & T-x in [2,2])): na=false na+=false na-=true
x.(a U (b & T-x in [1,2] & (c U (d & T-x in [2,3])))): na=false na+=false na-=true
x.(a U (b & T-x in [1,2] & T-x in [2,3] & (c S (d & T-x in [-3,-1])))): na=false na+=false na-=true
x.(a U (b & T-x in [1,2] & (c S (d & T-x in [-3,-1] & T-x in [-1,0])))): na=false na+=true na-=false
x.(a U (b & T-x in [1,2] & T-x in [2,3] & (c S (d & T-x in [-3,-1] & T-x in [-1,0])))): na=false na+=false na-=false
simple projection:
0 : a
3/10 : b
11/10 : a b
not simple: true
oversampled projection:
0 : a
7/10 : a b
11/10 : b
not oversampled: true
";

fn worked_example_regressions() -> Outcome {
    let report = regression_report()?;
    if report == EXPECTED_REGRESSIONS {
        Ok(format!("{} report lines identical", report.lines().count()))
    } else {
        let diff = report
            .lines()
            .zip(EXPECTED_REGRESSIONS.lines())
            .find(|(a, b)| a != b)
            .map(|(a, b)| format!("got `{a}`, expected `{b}`"))
            .unwrap_or_else(|| "line counts differ".into());
        Err(diff)
    }
}

fn fuzz(target: Target, seed: u64, cases: u64) -> Result<String, String> {
    let report = run(target, seed, cases);
    if report.passed() {
        Ok(format!("{target} {cases} cases"))
    } else {
        Err(report.to_string().trim_end().replace('\n', " | "))
    }
}

fn fk_to_rat_fuzz() -> Outcome {
    let start = Instant::now();
    let detail = fuzz(Target::Fk2Rat, 1, 300)?;
    within(
        Duration::from_secs(300),
        start,
        format!("{detail}, zero counterexamples"),
    )
}

fn rat_to_fk_fuzz() -> Outcome {
    let start = Instant::now();
    let a = fuzz(Target::Rat2Fk, 1, 300)?;
    let b = fuzz(Target::Roundtrip, 1, 300)?;
    within(
        Duration::from_secs(300),
        start,
        format!("{a}, {b}, zero counterexamples"),
    )
}

fn until_via_frat() -> Outcome {
    Ok(format!(
        "{}, zero counterexamples",
        fuzz(Target::UntilFrat, 1, 200)?
    ))
}

fn equisat() -> Outcome {
    let sigma = names(&["a", "b"]);
    let u = Universe::default();
    let formulas = seeded_mtl(1, 20, 3);
    for f in &formulas {
        let flat = flatten(f, &sigma);
        let simple = verify_simple_equisat(f, &flat.assembled(), &sigma, &flat.witnesses, &u);
        if !simple.holds() {
            return Err(format!("flattening of {f}: {:?}", simple.counterexample));
        }
        let over = verify_oversampled_equisat(
            f,
            &relativized_formula(&sigma, f),
            &sigma,
            &names(&["o"]),
            &u,
        );
        if !over.holds() {
            return Err(format!("relativization of {f}: {:?}", over.counterexample));
        }
    }
    let mutations = seeded_mutations(1);
    let total = mutations.len();
    let mut caught = 0;
    for m in &mutations {
        let report = if m.oversampled {
            verify_oversampled_equisat(&m.phi, &m.mutated, &m.sigma, &m.extra, &u)
        } else {
            verify_simple_equisat(&m.phi, &m.mutated, &m.sigma, &m.extra, &u)
        };
        caught += usize::from(!report.holds());
    }
    if caught == total {
        Ok(format!(
            "{} formulas equisatisfiable, {caught}/{total} mutations caught",
            formulas.len()
        ))
    } else {
        Err(format!("only {caught}/{total} mutations caught"))
    }
}

fn counter_machines() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for name in ["golden_loop.cm", "golden_branch.cm"] {
        let (m, _, w) = cm::golden(name);
        if !cm::failing(&m, &w).is_empty() {
            return Err(format!(
                "{name}: encoding violates {:?}",
                cm::failing(&m, &w)
            ));
        }
        if !timelogic::eval::satisfies(&w, &build_phi_cm(&m)).unwrap() {
            return Err(format!("{name}: exact run violates phi_CM"));
        }
        checks += 2;
    }
    let (loop_m, _, loop_w) = cm::golden("golden_loop.cm");
    let (branch_m, _, branch_w) = cm::golden("golden_branch.cm");
    let pins: [(
        &str,
        &timelogic::countermachine::CounterMachine,
        TimedWord,
        &str,
    ); 6] = [
        (
            "deleted copy",
            &loop_m,
            cm::delete_copied_b(&loop_w),
            "phi1",
        ),
        (
            "swapped markers",
            &loop_m,
            cm::swap_markers(&loop_w),
            "phi1",
        ),
        ("consecutive a", &loop_m, cm::consecutive_a(&loop_w), "phi1"),
        ("dropped pair", &loop_m, cm::drop_pair(&loop_w), "phi7"),
        (
            "wrong successor",
            &branch_m,
            cm::wrong_successor(&branch_w),
            "phi8_p1",
        ),
        (
            "duplicated pair",
            &loop_m,
            cm::duplicate_pair(&loop_w),
            "phi9",
        ),
    ];
    for (label, m, w, pinned) in pins {
        let falsified = if pinned == "phi9" {
            !timelogic::eval::satisfies(&w, &phi_9(m)).unwrap()
        } else {
            cm::failing(m, &w).iter().any(|n| n == pinned)
        };
        if !falsified {
            return Err(format!("{label} does not falsify {pinned}"));
        }
        checks += 1;
    }
    let (em, _, ew) = cm::golden("golden_loop_errors.cm");
    if !cm::failing(&em, &ew).is_empty() || timelogic::eval::satisfies(&ew, &phi_9(&em)).unwrap() {
        return Err("incremental-error run is misclassified".into());
    }
    within(
        Duration::from_secs(120),
        start,
        format!("{} checks on goldens and mutations", checks + 1),
    )
}

fn structural() -> Outcome {
    for name in ["golden_loop.cm", "golden_branch.cm"] {
        let (m, _) = cm::load(name);
        let iecm = build_phi_iecm(&m);
        if !classify(&iecm).is_open_tptl {
            return Err(format!("{name}: phi_IECM is not open"));
        }
        if build_phi_cm(&m) != Formula::and(iecm, phi_9(&m)) {
            return Err(format!("{name}: phi_CM differs from phi_IECM & phi9"));
        }
    }
    Ok("both goldens: phi_IECM open, phi_CM = phi_IECM & phi9".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "evaluator agrees with the definitional oracle",
            evaluator_oracle,
        ),
        (
            "worked examples reproduce byte for byte",
            worked_example_regressions,
        ),
        ("Fk to Rat differential fuzz", fk_to_rat_fuzz),
        ("Rat to Fk differential fuzz and round trip", rat_to_fk_fuzz),
        ("until through FRat", until_via_frat),
        ("flattening and relativization equisatisfiability", equisat),
        ("counter machine encodings and mutations", counter_machines),
        (
            "counter machine formulas are open and differ by phi9",
            structural,
        ),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

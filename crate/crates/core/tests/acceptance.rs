//! One PASS/FAIL line per acceptance criterion. Exits non-zero on any failure.

use std::time::{Duration, Instant};

use flipcheck_core::dualgraph::{degenerates_to, DuValGraph};
use flipcheck_core::invariants::{basket_of, f_from_basket, f_invariant, xi, Configuration, SingType, TerminalPoint};
use flipcheck_core::mori::{run_mori_recursion, MoriRecursionInput};
use flipcheck_core::neighborhoods::{CaseLabel, ExtremalNbhd, NbhdKind};
use flipcheck_core::rational::Rational;
use flipcheck_core::transitions::{enumerate_targets, instances, is_excluded_type, Bounds};
use flipcheck_core::verifier::{all_terminal_points, verify_divisorial_case, verify_flip_case, VerifyReport};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const SWEEP: Bounds = Bounds { max_index: 12, max_aw: 12 };
const BUDGET: Duration = Duration::from_secs(60);

type Catalog = Vec<(ExtremalNbhd, Vec<Configuration>)>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn first_few(bad: &[String]) -> String {
    if bad.is_empty() {
        "none".into()
    } else {
        format!("{} e.g. {:?}", bad.len(), &bad[..bad.len().min(3)])
    }
}

fn single_worker<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool").install(f)
}

fn table_oracle() -> Outcome {
    let start = Instant::now();
    let points = all_terminal_points(Bounds { max_index: 30, max_aw: 30 });
    let mut bad = Vec::new();
    for p in &points {
        let basket = basket_of(p);
        if f_invariant(p) != f_from_basket(&basket) || xi(p) != basket.index_sum() {
            bad.push(p.to_string());
        }
    }
    let spots = [
        (TerminalPoint::cax4(1).unwrap().f_invariant(), Rational::new(15, 4)),
        (TerminalPoint::cd3().f_invariant(), Rational::new(16, 3)),
        (TerminalPoint::ce2().f_invariant(), Rational::new(9, 2)),
    ];
    for (got, want) in spots {
        if got != want {
            bad.push(format!("spot value {got} != {want}"));
        }
    }
    for k in 1..=30 {
        if TerminalPoint::cax4(k).unwrap().xi() != 2 * k + 2 {
            bad.push(format!("Xi(cAx/4, k={k})"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        bad.push(format!("runtime {elapsed:?}"));
    }
    outcome(bad.is_empty(), format!("{} points in {elapsed:?}, failures: {}", points.len(), first_few(&bad)))
}

fn timed<T: Send>(run: impl FnOnce() -> T + Send) -> (T, Duration) {
    let start = Instant::now();
    let out = single_worker(run);
    (out, start.elapsed())
}

fn in_equality_family(f: &flipcheck_core::verifier::Finding) -> bool {
    let pts = f.target.points();
    f.case == CaseLabel::C2211.as_str()
        && pts.len() == 2
        && pts.iter().all(|p| p.tag() == SingType::CA && Some(p.index()) == f.params.m)
        && Some(pts[0].axial_weight() + pts[1].axial_weight()) == f.params.k
}

fn flip_sweep() -> Outcome {
    let (report, elapsed) = timed(|| {
        CaseLabel::ISOLATED
            .iter()
            .map(|&l| verify_flip_case(l, SWEEP).expect("isolated case"))
            .fold(VerifyReport::empty("isolated", SWEEP), VerifyReport::merge)
    });
    let stray = report.equality_cases.iter().filter(|f| !in_equality_family(f)).count();
    let ok = report.passes() && stray == 0 && !report.equality_cases.is_empty() && elapsed < BUDGET;
    outcome(
        ok,
        format!(
            "{} pairs, {} violations, {} equalities ({stray} outside the known family), {elapsed:?} on one worker",
            report.pairs_checked,
            report.violations.len(),
            report.equality_cases.len(),
        ),
    )
}

fn divisorial_sweep() -> Outcome {
    let (report, elapsed) = timed(|| {
        CaseLabel::ALL
            .iter()
            .map(|&l| verify_divisorial_case(l, SWEEP).expect("divisorial case"))
            .fold(VerifyReport::empty("divisorial", SWEEP), VerifyReport::merge)
    });
    let ok = report.passes() && report.equality_cases.is_empty() && elapsed < BUDGET;
    outcome(
        ok,
        format!(
            "{} pairs, {} violations, {} equalities, {elapsed:?} on one worker",
            report.pairs_checked,
            report.violations.len(),
            report.equality_cases.len(),
        ),
    )
}

fn catalog(kind: NbhdKind) -> Catalog {
    let labels: &[CaseLabel] = match kind {
        NbhdKind::Isolated => &CaseLabel::ISOLATED,
        NbhdKind::Divisorial => &CaseLabel::ALL,
    };
    let mut out = Vec::new();
    for &label in labels {
        for n in instances(label, kind, SWEEP).unwrap() {
            let targets = enumerate_targets(&n, SWEEP).unwrap();
            out.push((n, targets));
        }
    }
    out
}

fn where_(n: &ExtremalNbhd, t: &Configuration) -> String {
    format!("{} [{}] -> {t}", n.label().as_str(), n.params())
}

fn exclusions(flips: &Catalog, divs: &Catalog) -> Outcome {
    let mut bad = Vec::new();
    for (n, ts) in flips.iter().chain(divs) {
        for t in ts {
            if t.points().iter().any(is_excluded_type) {
                bad.push(format!("excluded type: {}", where_(n, t)));
            }
        }
    }
    for (n, ts) in flips {
        for t in ts {
            if t.len() > 2 {
                bad.push(format!("more than two points: {}", where_(n, t)));
            }
            if n.label() == CaseLabel::C2213 && t.xi_gt2() > 7 {
                bad.push(format!("Xi_>2 above 7: {}", where_(n, t)));
            }
        }
    }
    let count: usize = flips.iter().chain(divs).map(|(_, ts)| ts.len()).sum();
    outcome(bad.is_empty(), format!("{count} targets inspected, failures: {}", first_few(&bad)))
}

fn index_bounds(flips: &Catalog, divs: &Catalog) -> Outcome {
    let mut bad = Vec::new();
    for (n, ts) in divs {
        for t in ts {
            if t.points().iter().any(|p| p.index() > 1 && 2 * p.index() > n.mu()) {
                bad.push(format!("2r > mu: {}", where_(n, t)));
            }
            if n.mu() <= 3 && !t.is_empty() {
                bad.push(format!("mu <= 3 but non-Gorenstein: {}", where_(n, t)));
            }
        }
    }
    for (n, ts) in flips {
        for t in ts {
            if t.max_index() > n.mu() {
                bad.push(format!("index above mu: {}", where_(n, t)));
            }
            if n.mu() <= 2 && !t.is_empty() {
                bad.push(format!("mu <= 2 but non-Gorenstein: {}", where_(n, t)));
            }
        }
    }
    outcome(bad.is_empty(), format!("failures: {}", first_few(&bad)))
}

fn dominance_laws() -> Outcome {
    let graphs = DuValGraph::all_up_to(30);
    let mut bad = Vec::new();
    for a in &graphs {
        if !degenerates_to(a, a) {
            bad.push(format!("not reflexive at {a}"));
        }
        for b in &graphs {
            if !degenerates_to(a, b) {
                continue;
            }
            if a != b && degenerates_to(b, a) {
                bad.push(format!("not antisymmetric at {a}, {b}"));
            }
            for c in &graphs {
                if degenerates_to(b, c) && !degenerates_to(a, c) {
                    bad.push(format!("not transitive at {a}, {b}, {c}"));
                }
            }
        }
    }
    let g = |s: &str| s.parse::<DuValGraph>().unwrap();
    if !degenerates_to(&g("E7"), &g("D5")) {
        bad.push("E7 -> D5 should hold".into());
    }
    if degenerates_to(&g("A5"), &g("D4")) {
        bad.push("A5 -> D4 should not hold".into());
    }
    outcome(bad.is_empty(), format!("{} graphs, failures: {}", graphs.len(), first_few(&bad)))
}

fn index_recursion() -> Outcome {
    let mut bad = Vec::new();
    let hand = MoriRecursionInput::new(1, vec![1], 2, 1).unwrap();
    match run_mori_recursion(&hand, 10) {
        Ok(out) if out.kappa == 3 => {}
        Ok(out) => bad.push(format!("hand example kappa = {}", out.kappa)),
        Err(e) => bad.push(format!("hand example: {e}")),
    }
    let trials = 1000;
    let strategy = (1u64..=4, prop::collection::vec(1u64..=5, 1..8), -50i64..=50, -50i64..=50, 3usize..=40);
    let mut runner = TestRunner::new(Config { cases: trials, failure_persistence: None, ..Config::default() });
    let result = runner.run(&strategy, |(delta, rho, d1, d2, steps)| {
        let input = MoriRecursionInput::new(delta, rho, d1, d2).unwrap();
        let seq = input.sequence(steps);
        prop_assert_eq!(seq.len(), steps);
        prop_assert!(input.satisfies_relation(&seq));
        if let Ok(out) = run_mori_recursion(&input, steps) {
            prop_assert_eq!(&out.sequence, &seq);
        }
        Ok(())
    });
    if let Err(e) = result {
        bad.push(format!("randomized relation check: {e}"));
    }
    outcome(bad.is_empty(), format!("hand example and {trials} random trials, failures: {}", first_few(&bad)))
}

fn main() {
    let flips = catalog(NbhdKind::Isolated);
    let divs = catalog(NbhdKind::Divisorial);
    let results = [
        ("1 table oracle", table_oracle()),
        ("2 flip sweep at 12x12", flip_sweep()),
        ("3 divisorial sweep at 12x12", divisorial_sweep()),
        ("4 exclusion properties", exclusions(&flips, &divs)),
        ("5 index bounds", index_bounds(&flips, &divs)),
        ("6 dominance order laws", dominance_laws()),
        ("7 index recursion", index_recursion()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

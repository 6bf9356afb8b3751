//! Exhaustive sweeps over (source, target) pairs.
//!
//! For flips the expected relations are `Ξ(X) >= Ξ(X⁺)` and `F(X) >= F(X⁺)`,
//! with `F` equality allowed only for case 2.2.1.1 with both points on `C⁺`
//! of index `m` and axial weights summing to `k`. Any other equality is
//! reported as a violation. Divisorial contractions to curves must satisfy
//! `Ξ(X) >= Ξ(Y)` and `F(X) > F(Y)` strictly.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::dualgraph::{elephant_components, literal_a, literal_d, DuValGraph, GraphSum};
use crate::error::{Error, Result};
use crate::invariants::{f_from_basket, Configuration, SingType, TerminalPoint};
use crate::neighborhoods::{CaseLabel, ExtremalNbhd, NbhdKind, Params};
use crate::rational::Rational;
use crate::transitions::{enumerate_divisorial_targets, enumerate_flip_targets, instances, Bounds};

/// One checked relation that failed, or one equality worth reporting.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Finding {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<NbhdKind>,
    pub params: Params,
    pub source: Configuration,
    pub target: Configuration,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

impl Finding {
    fn pair(n: &ExtremalNbhd, source: &Configuration, target: &Configuration, relation: &str, lhs: String, rhs: String) -> Self {
        Finding {
            case: n.label().as_str().to_string(),
            kind: Some(n.kind()),
            params: *n.params(),
            source: source.clone(),
            target: target.clone(),
            relation: relation.to_string(),
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub case: String,
    pub bounds: Bounds,
    pub pairs_checked: u64,
    pub violations: Vec<Finding>,
    pub equality_cases: Vec<Finding>,
    pub wall_time_ms: u64,
}

impl VerifyReport {
    pub fn empty(case: impl Into<String>, bounds: Bounds) -> Self {
        VerifyReport {
            case: case.into(),
            bounds,
            pairs_checked: 0,
            violations: Vec::new(),
            equality_cases: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Commutative, associative combination of two reports. Findings are
    /// kept sorted so the result does not depend on merge order.
    pub fn merge(self, other: VerifyReport) -> VerifyReport {
        let case = if self.case == other.case { self.case } else { "all".to_string() };
        let bounds = Bounds {
            max_index: self.bounds.max_index.max(other.bounds.max_index),
            max_aw: self.bounds.max_aw.max(other.bounds.max_aw),
        };
        let mut violations = self.violations;
        violations.extend(other.violations);
        violations.sort();
        let mut equality_cases = self.equality_cases;
        equality_cases.extend(other.equality_cases);
        equality_cases.sort();
        VerifyReport {
            case,
            bounds,
            pairs_checked: self.pairs_checked + other.pairs_checked,
            violations,
            equality_cases,
            wall_time_ms: self.wall_time_ms.max(other.wall_time_ms),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    /// Deterministic one-line-per-finding summary without timing.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "case={} max_index={} max_aw={} pairs_checked={} violations={} equality_cases={} result={}\n",
            self.case,
            self.bounds.max_index,
            self.bounds.max_aw,
            self.pairs_checked,
            self.violations.len(),
            self.equality_cases.len(),
            if self.passes() { "PASS" } else { "FAIL" }
        );
        for (tag, list) in [("violation", &self.violations), ("equality", &self.equality_cases)] {
            for f in list.iter() {
                s.push_str(&format!(
                    "{tag} case={} params=[{}] source={} target={} relation=\"{}\" lhs={} rhs={}\n",
                    f.case, f.params, f.source, f.target, f.relation, f.lhs, f.rhs
                ));
            }
        }
        s
    }

    /// CSV with one row per violation or equality case.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,case,kind,params,source,target,relation,lhs,rhs\n");
        for (tag, list) in [("violation", &self.violations), ("equality", &self.equality_cases)] {
            for f in list.iter() {
                let fields = [
                    tag.to_string(),
                    f.case.clone(),
                    f.kind.map(|k| k.as_str().to_string()).unwrap_or_default(),
                    f.params.to_string(),
                    serde_json::to_string(&f.source).expect("serializable"),
                    serde_json::to_string(&f.target).expect("serializable"),
                    f.relation.clone(),
                    f.lhs.clone(),
                    f.rhs.clone(),
                ];
                let row: Vec<String> = fields.iter().map(|x| csv_escape(x)).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
        }
        s
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The one family in which a flip preserves F: case 2.2.1.1 with two `cA/m`
/// points on `C⁺` whose axial weights sum to `k`.
pub fn is_known_flip_equality(n: &ExtremalNbhd, target: &Configuration) -> bool {
    if n.label() != CaseLabel::C2211 {
        return false;
    }
    let (m, k) = (n.params().m, n.params().k);
    match target.points() {
        [a, b] => {
            a.tag() == SingType::CA
                && b.tag() == SingType::CA
                && Some(a.index()) == m
                && Some(b.index()) == m
                && Some(a.axial_weight() + b.axial_weight()) == k
        }
        _ => false,
    }
}

/// Checks one flip neighborhood against all its enumerated targets.
pub fn check_flip_instance(n: &ExtremalNbhd, bounds: Bounds) -> Result<VerifyReport> {
    let mut report = VerifyReport::empty(n.label().as_str(), bounds);
    let source = n.source_config();
    let (xi_x, f_x) = (source.xi(), source.f_invariant());
    for target in enumerate_flip_targets(n, bounds)? {
        report.pairs_checked += 1;
        let (xi_t, f_t) = (target.xi(), target.f_invariant());
        if xi_x < xi_t {
            report.violations.push(Finding::pair(n, &source, &target, "Xi(X) >= Xi(X+)", xi_x.to_string(), xi_t.to_string()));
        }
        if f_x < f_t {
            report.violations.push(Finding::pair(n, &source, &target, "F(X) >= F(X+)", f_x.to_string(), f_t.to_string()));
        }
        if f_x == f_t {
            let eq = Finding::pair(n, &source, &target, "F(X) = F(X+)", f_x.to_string(), f_t.to_string());
            if !is_known_flip_equality(n, &target) {
                let mut v = eq.clone();
                v.relation = "F(X) = F(X+) outside the known equality family".into();
                report.violations.push(v);
            }
            report.equality_cases.push(eq);
        }
    }
    Ok(report)
}

/// Checks one divisorial neighborhood against all its enumerated targets.
pub fn check_divisorial_instance(n: &ExtremalNbhd, bounds: Bounds) -> Result<VerifyReport> {
    let mut report = VerifyReport::empty(n.label().as_str(), bounds);
    let source = n.source_config();
    let (xi_x, f_x) = (source.xi(), source.f_invariant());
    for target in enumerate_divisorial_targets(n, bounds)? {
        report.pairs_checked += 1;
        if target.is_empty() {
            if !source.is_empty() && !f_x.is_positive() {
                report.violations.push(Finding::pair(n, &source, &target, "F(X) > 0", f_x.to_string(), "0".into()));
            }
            continue;
        }
        let (xi_t, f_t) = (target.xi(), target.f_invariant());
        if xi_x < xi_t {
            report.violations.push(Finding::pair(n, &source, &target, "Xi(X) >= Xi(Y)", xi_x.to_string(), xi_t.to_string()));
        }
        if f_x <= f_t {
            report.violations.push(Finding::pair(n, &source, &target, "F(X) > F(Y)", f_x.to_string(), f_t.to_string()));
        }
        if f_x == f_t {
            report.equality_cases.push(Finding::pair(n, &source, &target, "F(X) = F(Y)", f_x.to_string(), f_t.to_string()));
        }
    }
    Ok(report)
}

fn sweep(label: CaseLabel, kind: NbhdKind, bounds: Bounds) -> Result<VerifyReport> {
    let start = Instant::now();
    let tuples = instances(label, kind, bounds)?;
    let check = match kind {
        NbhdKind::Isolated => check_flip_instance,
        NbhdKind::Divisorial => check_divisorial_instance,
    };
    let mut report = tuples
        .par_iter()
        .map(|n| check(n, bounds))
        .try_reduce(|| VerifyReport::empty(label.as_str(), bounds), |a, b| Ok(a.merge(b)))?;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Sweeps every parameter tuple of an isolated case within `bounds`.
pub fn verify_flip_case(label: CaseLabel, bounds: Bounds) -> Result<VerifyReport> {
    if !label.allows(NbhdKind::Isolated) {
        return Err(Error::WrongKind { label: label.as_str(), kind: "isolated" });
    }
    sweep(label, NbhdKind::Isolated, bounds)
}

/// Sweeps every parameter tuple of a divisorial case within `bounds`.
pub fn verify_divisorial_case(label: CaseLabel, bounds: Bounds) -> Result<VerifyReport> {
    sweep(label, NbhdKind::Divisorial, bounds)
}

/// All isolated cases followed by all divisorial ones, merged.
pub fn verify_all(bounds: Bounds) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut total = VerifyReport::empty("all", bounds);
    for label in CaseLabel::ISOLATED {
        total = total.merge(verify_flip_case(label, bounds)?);
    }
    for label in CaseLabel::ALL {
        total = total.merge(verify_divisorial_case(label, bounds)?);
    }
    total.case = "all".into();
    total.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(total)
}

/// Every terminal point within bounds, one per distinct parameter choice.
pub fn all_terminal_points(bounds: Bounds) -> Vec<TerminalPoint> {
    let mut v = Vec::new();
    for tag in SingType::ALL {
        let rs: Vec<u64> = match tag.fixed_index() {
            Some(r) => vec![r],
            None => (2..=bounds.max_index).collect(),
        };
        let ks: Vec<u64> = match tag.fixed_aw() {
            Some(k) => vec![k],
            None => (1..=bounds.max_aw).collect(),
        };
        for &r in &rs {
            for &k in &ks {
                v.push(TerminalPoint::new(tag, r, k).expect("enumerated within the family's ranges"));
            }
        }
    }
    v
}

/// Column Δ(E) of the table of terminal germs, as written: kind letter and
/// rank formula in `(r, k)`.
pub fn table_elephant(tag: SingType, r: u64, k: u64) -> GraphSum {
    match tag {
        SingType::CA => literal_a(r * k - 1),
        SingType::CAx2 => literal_d(k + 2),
        SingType::CAx4 => literal_d(2 * k + 1),
        SingType::CD2 => literal_d(2 * k),
        SingType::CD3 => GraphSum::from(DuValGraph::e(6).expect("valid")),
        SingType::CE2 => GraphSum::from(DuValGraph::e(7).expect("valid")),
    }
}

/// Cross-checks the closed-form Ξ, F and Δ(E) of every point within bounds
/// against the basket route and the table's Δ(E) column.
pub fn oracle_check(bounds: Bounds) -> VerifyReport {
    let start = Instant::now();
    let points = all_terminal_points(bounds);
    let mut report = points
        .par_iter()
        .map(|p| {
            let mut r = VerifyReport::empty("oracle", bounds);
            r.pairs_checked = 1;
            let basket = p.basket();
            let src = Configuration::single(*p);
            let mut fail = |relation: &str, lhs: String, rhs: String| {
                r.violations.push(Finding {
                    case: "oracle".into(),
                    kind: None,
                    params: Params::none(),
                    source: src.clone(),
                    target: Configuration::empty(),
                    relation: relation.into(),
                    lhs,
                    rhs,
                })
            };
            let (f_closed, f_basket) = (p.f_invariant(), f_from_basket(&basket));
            if f_closed != f_basket {
                fail("F(P) = F(basket)", f_closed.to_string(), f_basket.to_string());
            }
            if p.xi() != basket.index_sum() {
                fail("Xi(P) = sum of basket indices", p.xi().to_string(), basket.index_sum().to_string());
            }
            let (graph, table) = (elephant_components(p), table_elephant(p.tag(), p.index(), p.axial_weight()));
            if graph != table {
                fail("Delta(E) matches table", graph.to_string(), table.to_string());
            }
            r
        })
        .reduce(|| VerifyReport::empty("oracle", bounds), VerifyReport::merge);
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report
}

/// `F` of a single point through its basket; exposed for reports.
pub fn basket_f(p: &TerminalPoint) -> Rational {
    f_from_basket(&p.basket())
}

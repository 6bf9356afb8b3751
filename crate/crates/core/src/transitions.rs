//! Admissible singularities after a flip or a divisorial contraction.
//!
//! The enumerators transcribe the constraints that the case analysis of each
//! neighborhood establishes for the points on the flipped curve `C⁺` (flips)
//! or for the point `Q` on the image curve `Γ` (divisorial contractions to
//! curves). Every configuration those constraints permit within [`Bounds`] is
//! produced; nothing is filtered by whether it actually occurs geometrically.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dualgraph::{configuration_graph, sum_dominated_by_sum};
use crate::error::{Error, Result};
use crate::invariants::{Configuration, SingType, TerminalPoint};
use crate::neighborhoods::{CaseLabel, ExtremalNbhd, NbhdKind, Params, TargetConstraint};

/// Sweep limits: largest index and largest axial weight considered, for both
/// source parameters and target points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_index: u64,
    pub max_aw: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_index: 20, max_aw: 20 }
    }
}

impl Bounds {
    pub fn new(max_index: u64, max_aw: u64) -> Result<Self> {
        if max_index < 1 || max_aw < 1 {
            return Err(Error::InvalidBounds(format!(
                "max_index={max_index} max_aw={max_aw}; both must be at least 1"
            )));
        }
        Ok(Bounds { max_index, max_aw })
    }

    /// True iff every point of `c` lies within these bounds.
    pub fn contains(&self, c: &Configuration) -> bool {
        c.points().iter().all(|p| p.index() <= self.max_index && p.axial_weight() <= self.max_aw)
    }
}

/// Every valid parameter tuple of `label` within `bounds`, in a fixed order.
/// Cases without parameters yield their single instance regardless of bounds.
pub fn instances(label: CaseLabel, kind: NbhdKind, bounds: Bounds) -> Result<Vec<ExtremalNbhd>> {
    if !label.allows(kind) {
        return Err(Error::WrongKind { label: label.as_str(), kind: kind.as_str() });
    }
    let Bounds { max_index, max_aw } = bounds;
    let mut params = Vec::new();
    match label.param_names() {
        [] => params.push(Params::none()),
        ["k"] => params.extend((1..=max_aw).map(Params::k)),
        ["m"] => params.extend((2..=max_index).map(Params::m)),
        ["m", "k"] => {
            for m in 2..=max_index {
                params.extend((1..=max_aw).map(|k| Params::mk(m, k)));
            }
        }
        _ => {
            for r1 in 2..=max_index {
                for k1 in 1..=max_aw {
                    for r2 in 2..=max_index {
                        params.extend((1..=max_aw).map(|k2| Params::two_points(r1, k1, r2, k2)));
                    }
                }
            }
        }
    }
    // Parity and range conditions are enforced by the constructor.
    Ok(params.into_iter().filter_map(|p| ExtremalNbhd::new(label, kind, p).ok()).collect())
}

fn ca(r: u64, k: u64) -> TerminalPoint {
    TerminalPoint::ca(r, k).expect("r >= 2 and k >= 1")
}

fn cd2(k: u64) -> TerminalPoint {
    TerminalPoint::cd2(k).expect("k >= 1")
}

/// Families excluded on `C⁺` and on `Γ`.
pub fn is_excluded_type(p: &TerminalPoint) -> bool {
    matches!(p.tag(), SingType::CE2 | SingType::CD3 | SingType::CAx4)
}

/// Index-2 points `cA/2`, `cAx/2`, `cD/2` within bounds.
fn index_two_points(bounds: Bounds) -> Vec<TerminalPoint> {
    if bounds.max_index < 2 {
        return Vec::new();
    }
    let mut v: Vec<_> = (1..=bounds.max_aw).map(|k| ca(2, k)).collect();
    v.push(TerminalPoint::cax2());
    v.extend((1..=bounds.max_aw).map(cd2));
    v
}

/// Per-type bound on a lone index-2 point: `cA/2` compared through `2k'−1`,
/// `cD/2` through `2k'`, `cAx/2` unconstrained.
fn index_two_allowed(p: &TerminalPoint, ca_rank_ok: impl Fn(u64) -> bool, cd_rank_ok: impl Fn(u64) -> bool) -> bool {
    let k = p.axial_weight();
    match p.tag() {
        SingType::CA => ca_rank_ok(2 * k - 1),
        SingType::CAx2 => true,
        SingType::CD2 => cd_rank_ok(2 * k),
        _ => false,
    }
}

/// All configurations on `C⁺` compatible with the flip of `n`.
pub fn enumerate_flip_targets(n: &ExtremalNbhd, bounds: Bounds) -> Result<Vec<Configuration>> {
    if !n.is_isolated() {
        return Err(Error::WrongKind { label: n.label().as_str(), kind: "isolated" });
    }
    let mut out = BTreeSet::new();
    out.insert(Configuration::empty());
    if n.check_exclude() == TargetConstraint::GorensteinOnly {
        return Ok(out.into_iter().collect());
    }
    let params = *n.params();
    let pm = |v: Option<u64>| v.expect("validated parameters");
    let mut candidates: Vec<Configuration> = Vec::new();
    match n.label() {
        CaseLabel::C2212 => {
            for p in index_two_points(bounds) {
                if index_two_allowed(&p, |rank| rank <= 5, |rank| rank <= 5) {
                    candidates.push(Configuration::single(p));
                }
            }
        }
        CaseLabel::C2213 => {
            let k = pm(params.k);
            let firsts: Vec<Option<TerminalPoint>> = std::iter::once(None)
                .chain(
                    index_two_points(bounds)
                        .into_iter()
                        .filter(|p| index_two_allowed(p, |rank| rank <= 2 * k, |rank| rank <= 2 * k))
                        .map(Some),
                )
                .collect();
            let seconds: Vec<Option<TerminalPoint>> = std::iter::once(None)
                .chain(
                    (bounds.max_index >= 3)
                        .then(|| (1..=bounds.max_aw.min(2)).map(|k2| Some(ca(3, k2))))
                        .into_iter()
                        .flatten(),
                )
                .collect();
            for first in &firsts {
                for second in &seconds {
                    let xi: u64 = first.iter().chain(second.iter()).map(TerminalPoint::xi).sum();
                    if second.is_some() && xi > 2 * k + 1 {
                        continue;
                    }
                    candidates.push(first.iter().chain(second.iter()).copied().collect());
                }
            }
        }
        CaseLabel::C222 => {
            let m = pm(params.m);
            for p in index_two_points(bounds) {
                if index_two_allowed(&p, |rank| rank < m, |rank| rank < m) {
                    candidates.push(Configuration::single(p));
                }
            }
        }
        CaseLabel::C223 => {
            let (m, k) = (pm(params.m), pm(params.k));
            for p in index_two_points(bounds) {
                if index_two_allowed(&p, |rank| rank < m + 2 * k, |rank| rank < m + 2 * k) {
                    candidates.push(Configuration::single(p));
                }
            }
        }
        CaseLabel::C2211 => {
            let (m, k) = (pm(params.m), pm(params.k));
            let total = m * k;
            let pts: Vec<TerminalPoint> = (2..=m.min(bounds.max_index))
                .flat_map(|r| (1..=bounds.max_aw).map(move |kk| (r, kk)))
                .filter(|(r, kk)| r * kk <= total)
                .map(|(r, kk)| ca(r, kk))
                .collect();
            for (i, a) in pts.iter().enumerate() {
                candidates.push(Configuration::single(*a));
                for b in &pts[i..] {
                    if a.xi() + b.xi() <= total {
                        candidates.push(Configuration::new([*a, *b]));
                    }
                }
            }
        }
        CaseLabel::C224 => {
            let (r1, k1, r2, k2) = (pm(params.r1), pm(params.k1), pm(params.r2), pm(params.k2));
            candidates.extend(semistable_pair_targets((r1, k1), (r2, k2), bounds));
        }
        _ => unreachable!("non-isolated labels rejected at construction"),
    }
    let ey = n.graph_ey();
    for c in candidates {
        if bounds.contains(&c)
            && !c.points().iter().any(is_excluded_type)
            && sum_dominated_by_sum(&configuration_graph(&c), &ey, 1)
        {
            out.insert(c);
        }
    }
    Ok(out.into_iter().collect())
}

/// Targets of a semistable two-point flip: two `cA` points with
/// `r_i' <= r_i`, `k_i' >= k_i`, at least one index strictly smaller, and
/// `Σ r_i'k_i' <= Σ r_ik_i`. A primed index of 1 means that point is
/// Gorenstein; it still counts `k_i'` towards the sum.
fn semistable_pair_targets(p1: (u64, u64), p2: (u64, u64), bounds: Bounds) -> BTreeSet<Configuration> {
    let (r1, k1) = p1;
    let (r2, k2) = p2;
    let total = r1 * k1 + r2 * k2;
    // Index 1 points are dropped, so only the smallest admissible weight matters.
    let weights = |r: u64, k_min: u64| -> Vec<u64> {
        if r == 1 {
            vec![k_min]
        } else {
            (k_min..=bounds.max_aw).collect()
        }
    };
    let mut out = BTreeSet::new();
    for r1p in 1..=r1.min(bounds.max_index) {
        for r2p in 1..=r2.min(bounds.max_index) {
            if r1p == r1 && r2p == r2 {
                continue;
            }
            for &k1p in &weights(r1p, k1) {
                if r1p * k1p + r2p * k2 > total {
                    break;
                }
                for &k2p in &weights(r2p, k2) {
                    if r1p * k1p + r2p * k2p > total {
                        break;
                    }
                    let pts = [(r1p, k1p), (r2p, k2p)]
                        .into_iter()
                        .filter(|(r, _)| *r >= 2)
                        .map(|(r, k)| ca(r, k));
                    out.insert(Configuration::new(pts));
                }
            }
        }
    }
    out
}

/// Case-specific admissibility of a non-Gorenstein point `Q` on `Γ`.
fn divisorial_case_allows(n: &ExtremalNbhd, q: &TerminalPoint) -> bool {
    let params = n.params();
    let pm = |v: Option<u64>| v.expect("validated parameters");
    let label = n.label();
    let k_q = q.axial_weight();
    match q.tag() {
        SingType::CAx2 => n.mu() >= 4,
        SingType::CD2 => {
            let rank = 2 * k_q;
            match label {
                CaseLabel::C2213 | CaseLabel::C221p4 => rank <= 2 * pm(params.k) + 1,
                CaseLabel::C222 => rank <= pm(params.m),
                CaseLabel::C222p => rank <= 6,
                CaseLabel::C223 => rank <= 2 * pm(params.k) + pm(params.m),
                CaseLabel::C223p => rank <= pm(params.m) + 2,
                _ => false,
            }
        }
        SingType::CA => {
            let r = q.index();
            let xi = r * k_q;
            match label {
                CaseLabel::C2213 | CaseLabel::C221p4 => r == 2 && k_q <= pm(params.k),
                CaseLabel::C222 => xi <= pm(params.m),
                CaseLabel::C222p => r == 2 && k_q <= 3,
                CaseLabel::C223 => {
                    let (m, k) = (pm(params.m), pm(params.k));
                    if r == 2 {
                        2 * k_q <= m + 2 * k
                    } else {
                        m % r == 0 && r % 2 == 1 && (m / r) % 2 == 1 && xi <= m + 2
                    }
                }
                CaseLabel::C223p => {
                    let m = pm(params.m);
                    xi <= m + 2 && (xi < m + 2 || r == 2)
                }
                CaseLabel::C2211 => {
                    let (m, k) = (pm(params.m), pm(params.k));
                    r < m && xi <= m * k
                }
                CaseLabel::C224 => {
                    let (r1, k1, r2, k2) = (pm(params.r1), pm(params.k1), pm(params.r2), pm(params.k2));
                    r1 != r2 && r == num_integer::gcd(r1, r2) && xi <= r1 * k1 + r2 * k2
                }
                _ => false,
            }
        }
        SingType::CAx4 | SingType::CD3 | SingType::CE2 => false,
    }
}

/// Every point type within bounds, as candidates for `Q`.
fn all_points(bounds: Bounds) -> Vec<TerminalPoint> {
    let mut v = Vec::new();
    for r in 2..=bounds.max_index {
        v.extend((1..=bounds.max_aw).map(|k| ca(r, k)));
    }
    if bounds.max_index >= 2 {
        v.push(TerminalPoint::cax2());
        v.extend((1..=bounds.max_aw).map(cd2));
        if bounds.max_aw >= 3 {
            v.push(TerminalPoint::ce2());
        }
    }
    if bounds.max_index >= 3 && bounds.max_aw >= 2 {
        v.push(TerminalPoint::cd3());
    }
    if bounds.max_index >= 4 {
        v.extend((1..=bounds.max_aw).map(|k| TerminalPoint::cax4(k).expect("k >= 1")));
    }
    v
}

/// All admissible singularities `Q ∈ Γ` after the divisorial contraction `n`:
/// the empty configuration (Gorenstein `Q`) and single points.
pub fn enumerate_divisorial_targets(n: &ExtremalNbhd, bounds: Bounds) -> Result<Vec<Configuration>> {
    if n.is_isolated() {
        return Err(Error::WrongKind { label: n.label().as_str(), kind: "divisorial" });
    }
    let mut out = BTreeSet::new();
    out.insert(Configuration::empty());
    if n.check_exclude() == TargetConstraint::GorensteinOnly {
        return Ok(out.into_iter().collect());
    }
    let ey = n.graph_ey();
    for q in all_points(bounds) {
        if is_excluded_type(&q) || !divisorial_case_allows(n, &q) {
            continue;
        }
        if !n.check_comp_d(q.index())? {
            continue;
        }
        let c = Configuration::single(q);
        if sum_dominated_by_sum(&configuration_graph(&c), &ey, 0) {
            out.insert(c);
        }
    }
    Ok(out.into_iter().collect())
}

/// Dispatches on the neighborhood's kind.
pub fn enumerate_targets(n: &ExtremalNbhd, bounds: Bounds) -> Result<Vec<Configuration>> {
    match n.kind() {
        NbhdKind::Isolated => enumerate_flip_targets(n, bounds),
        NbhdKind::Divisorial => enumerate_divisorial_targets(n, bounds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(label: CaseLabel, params: Params) -> ExtremalNbhd {
        ExtremalNbhd::new(label, NbhdKind::Isolated, params).unwrap()
    }

    fn div(label: CaseLabel, params: Params) -> ExtremalNbhd {
        ExtremalNbhd::new(label, NbhdKind::Divisorial, params).unwrap()
    }

    fn cfg(pts: &[TerminalPoint]) -> Configuration {
        Configuration::new(pts.iter().copied())
    }

    #[test]
    fn bounds_validation() {
        assert!(Bounds::new(0, 3).is_err());
        assert!(Bounds::new(3, 0).is_err());
        assert_eq!(Bounds::default(), Bounds::new(20, 20).unwrap());
    }

    #[test]
    fn instances_respect_parity() {
        let v = instances(CaseLabel::C222, NbhdKind::Divisorial, Bounds::new(11, 1).unwrap()).unwrap();
        let ms: Vec<u64> = v.iter().map(|n| n.params().m.unwrap()).collect();
        assert_eq!(ms, vec![5, 7, 9, 11]);
        assert!(instances(CaseLabel::C222p, NbhdKind::Isolated, Bounds::default()).is_err());
        assert_eq!(instances(CaseLabel::C2212, NbhdKind::Isolated, Bounds::new(1, 1).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn flip_c2211_small_index_is_gorenstein() {
        let t = enumerate_flip_targets(&iso(CaseLabel::C2211, Params::mk(2, 1)), Bounds::default()).unwrap();
        assert_eq!(t, vec![Configuration::empty()]);
    }

    #[test]
    fn flip_c2212_targets() {
        let t = enumerate_flip_targets(&iso(CaseLabel::C2212, Params::none()), Bounds::default()).unwrap();
        let mut expected = vec![
            Configuration::empty(),
            cfg(&[ca(2, 1)]),
            cfg(&[ca(2, 2)]),
            cfg(&[ca(2, 3)]),
            cfg(&[TerminalPoint::cax2()]),
            cfg(&[cd2(1)]),
            cfg(&[cd2(2)]),
        ];
        expected.sort();
        assert_eq!(t, expected);
    }

    #[test]
    fn flip_rejects_divisorial() {
        assert!(enumerate_flip_targets(&div(CaseLabel::C2212, Params::none()), Bounds::default()).is_err());
        assert!(enumerate_divisorial_targets(&iso(CaseLabel::C2212, Params::none()), Bounds::default()).is_err());
    }

    #[test]
    fn flip_c2213_small_k() {
        // k = 1: D_3 = A_3 leaves room for A_1, A_1 + A_1 or A_2 only.
        let t = enumerate_flip_targets(&iso(CaseLabel::C2213, Params::k(1)), Bounds::default()).unwrap();
        let mut expected = vec![Configuration::empty(), cfg(&[ca(2, 1)]), cfg(&[cd2(1)]), cfg(&[ca(3, 1)])];
        expected.sort();
        assert_eq!(t, expected);
    }

    #[test]
    fn flip_c2213_pairs_obey_combined_bound() {
        let t = enumerate_flip_targets(&iso(CaseLabel::C2213, Params::k(5)), Bounds::default()).unwrap();
        assert!(t.contains(&cfg(&[TerminalPoint::cax2(), ca(3, 2)])));
        assert!(t.contains(&cfg(&[ca(2, 2), ca(3, 2)])));
        assert!(!t.contains(&cfg(&[ca(2, 3), ca(3, 2)])));
        assert!(t.iter().all(|c| c.xi_gt2() <= 7));
    }

    #[test]
    fn flip_c224_primed_index_one() {
        let n = iso(CaseLabel::C224, Params::two_points(2, 1, 4, 1));
        let t = enumerate_flip_targets(&n, Bounds::default()).unwrap();
        assert!(t.contains(&Configuration::empty()));
        // (r1', r2') = (2, 2): k1' >= 1, k2' >= 1, 2k1' + 2k2' <= 6.
        assert!(t.contains(&cfg(&[ca(2, 1), ca(2, 2)])));
        assert!(!t.contains(&cfg(&[ca(2, 1), ca(4, 1)])));
        assert!(t.iter().all(|c| c.points().iter().all(|p| p.tag() == SingType::CA)));
    }

    #[test]
    fn divisorial_small_mu_is_gorenstein() {
        let t = enumerate_divisorial_targets(&div(CaseLabel::C221p2, Params::k(3)), Bounds::default()).unwrap();
        assert_eq!(t, vec![Configuration::empty()]);
    }

    #[test]
    fn divisorial_c222p_targets() {
        let t = enumerate_divisorial_targets(&div(CaseLabel::C222p, Params::none()), Bounds::default()).unwrap();
        let mut expected = vec![Configuration::empty(), cfg(&[TerminalPoint::cax2()])];
        for k in 1..=3 {
            expected.push(cfg(&[cd2(k)]));
            expected.push(cfg(&[ca(2, k)]));
        }
        expected.sort();
        assert_eq!(t, expected);
    }

    #[test]
    fn divisorial_c224_gcd_index() {
        let n = div(CaseLabel::C224, Params::two_points(2, 2, 4, 1));
        let t = enumerate_divisorial_targets(&n, Bounds::default()).unwrap();
        let mut expected = vec![Configuration::empty()];
        expected.extend((1..=4).map(|k| cfg(&[ca(2, k)])));
        expected.sort();
        assert_eq!(t, expected);
        let equal = div(CaseLabel::C224, Params::two_points(4, 1, 4, 2));
        assert_eq!(enumerate_divisorial_targets(&equal, Bounds::default()).unwrap(), vec![Configuration::empty()]);
    }

    #[test]
    fn divisorial_c223_odd_divisors() {
        let n = div(CaseLabel::C223, Params::mk(9, 2));
        let t = enumerate_divisorial_targets(&n, Bounds::default()).unwrap();
        let ca_indices: BTreeSet<u64> = t
            .iter()
            .flat_map(|c| c.points())
            .filter(|p| p.tag() == SingType::CA)
            .map(|p| p.index())
            .collect();
        assert_eq!(ca_indices, BTreeSet::from([2, 3]));
    }
}

//! ADE dual graphs of general elephants and the degeneration order between them.
//!
//! A general member of `|-K|` near a terminal point has a Du Val singularity
//! whose dual graph is `A_n`, `D_n` or `E_n`. Semicontinuity of corank and
//! Milnor number means that, if some irreducible anticanonical member has
//! graph `G`, the general one has a graph of kind no worse than `G`'s and rank
//! at most `rank(G)`. [`degenerates_to`] is that order.
//!
//! Table entries `D_{2k}` and `D_{2k+1}` with `k = 1` name the low-rank
//! coincidences `D_2 = A_1 + A_1` and `D_3 = A_3`; [`literal_d`] performs that
//! identification so only valid graphs ever exist.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::{Configuration, SingType, TerminalPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DuValKind {
    A,
    D,
    E,
}

impl DuValKind {
    pub fn letter(self) -> char {
        match self {
            DuValKind::A => 'A',
            DuValKind::D => 'D',
            DuValKind::E => 'E',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DuValGraph {
    kind: DuValKind,
    rank: u64,
}

impl DuValGraph {
    pub fn new(kind: DuValKind, rank: u64) -> Result<Self> {
        let ok = match kind {
            DuValKind::A => rank >= 1,
            DuValKind::D => rank >= 4,
            DuValKind::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DuValGraph { kind, rank })
        } else {
            Err(Error::InvalidGraph { kind: kind.letter(), rank })
        }
    }

    pub fn a(n: u64) -> Result<Self> {
        Self::new(DuValKind::A, n)
    }

    pub fn d(n: u64) -> Result<Self> {
        Self::new(DuValKind::D, n)
    }

    pub fn e(n: u64) -> Result<Self> {
        Self::new(DuValKind::E, n)
    }

    pub fn kind(&self) -> DuValKind {
        self.kind
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    /// Every valid graph of rank at most `max_rank`.
    pub fn all_up_to(max_rank: u64) -> Vec<DuValGraph> {
        let mut v = Vec::new();
        for n in 1..=max_rank {
            for kind in [DuValKind::A, DuValKind::D, DuValKind::E] {
                if let Ok(g) = DuValGraph::new(kind, n) {
                    v.push(g);
                }
            }
        }
        v
    }
}

impl fmt::Display for DuValGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

impl FromStr for DuValGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DuValKind::A,
            Some('D') => DuValKind::D,
            Some('E') => DuValKind::E,
            _ => return Err(Error::GraphSyntax(s.to_string())),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: u64 = rest.parse().map_err(|_| Error::GraphSyntax(s.to_string()))?;
        DuValGraph::new(kind, rank)
    }
}

impl Serialize for DuValGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Disjoint union of Du Val graphs; empty means smooth.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphSum(Vec<DuValGraph>);

impl GraphSum {
    pub fn smooth() -> Self {
        GraphSum(Vec::new())
    }

    pub fn new(parts: impl IntoIterator<Item = DuValGraph>) -> Self {
        let mut v: Vec<_> = parts.into_iter().collect();
        v.sort_unstable();
        GraphSum(v)
    }

    pub fn components(&self) -> &[DuValGraph] {
        &self.0
    }

    pub fn is_smooth(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.0.iter().map(DuValGraph::rank).sum()
    }

    pub fn plus(&self, other: &GraphSum) -> GraphSum {
        GraphSum::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// The sole component, if there is exactly one.
    pub fn as_single(&self) -> Option<DuValGraph> {
        match self.0.as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }
}

impl From<DuValGraph> for GraphSum {
    fn from(g: DuValGraph) -> Self {
        GraphSum(vec![g])
    }
}

impl fmt::Display for GraphSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("smooth");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for GraphSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("smooth") || s.is_empty() {
            return Ok(GraphSum::smooth());
        }
        s.split('+').map(str::parse).collect::<Result<Vec<_>>>().map(GraphSum::new)
    }
}

impl Serialize for GraphSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `A_n` as a sum; `n = 0` is smooth.
pub fn literal_a(n: u64) -> GraphSum {
    if n == 0 {
        GraphSum::smooth()
    } else {
        GraphSum::from(DuValGraph { kind: DuValKind::A, rank: n })
    }
}

/// `D_n` as a sum, with `D_3 = A_3`, `D_2 = A_1 + A_1`, `D_1 = A_1`.
pub fn literal_d(n: u64) -> GraphSum {
    let a = |r| DuValGraph { kind: DuValKind::A, rank: r };
    match n {
        0 => GraphSum::smooth(),
        1 => GraphSum::from(a(1)),
        2 => GraphSum::new([a(1), a(1)]),
        3 => GraphSum::from(a(3)),
        _ => GraphSum::from(DuValGraph { kind: DuValKind::D, rank: n }),
    }
}

/// Dual graph of the general elephant of `p`, possibly disconnected
/// (`cD/2` with `k = 1` gives `A_1 + A_1`).
pub fn elephant_components(p: &TerminalPoint) -> GraphSum {
    let k = p.axial_weight();
    match p.tag() {
        SingType::CA => literal_a(p.index() * k - 1),
        SingType::CAx2 => literal_d(4),
        SingType::CAx4 => literal_d(2 * k + 1),
        SingType::CD2 => literal_d(2 * k),
        SingType::CD3 => GraphSum::from(DuValGraph { kind: DuValKind::E, rank: 6 }),
        SingType::CE2 => GraphSum::from(DuValGraph { kind: DuValKind::E, rank: 7 }),
    }
}

/// Connected dual graph of the general elephant of `p`.
pub fn elephant_graph(p: &TerminalPoint) -> Result<DuValGraph> {
    if p.tag() == SingType::CA && p.index() * p.axial_weight() <= 1 {
        return Err(Error::InvalidPoint(format!("{p} would be smooth")));
    }
    elephant_components(p).as_single().ok_or_else(|| Error::NoConnectedGraph(p.to_string()))
}

/// Union of the elephant graphs of every point in `c`.
pub fn configuration_graph(c: &Configuration) -> GraphSum {
    c.points().iter().fold(GraphSum::smooth(), |acc, p| acc.plus(&elephant_components(p)))
}

/// True iff `target` can be the general elephant when some irreducible
/// anticanonical member has graph `source`: kind no worse, rank no larger.
pub fn degenerates_to(source: &DuValGraph, target: &DuValGraph) -> bool {
    target.kind <= source.kind && target.rank <= source.rank
}

/// Partial-order comparison under [`degenerates_to`].
pub fn compare(a: &DuValGraph, b: &DuValGraph) -> Option<Ordering> {
    match (degenerates_to(a, b), degenerates_to(b, a)) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        (false, false) => None,
    }
}

/// True iff every component of `s` degenerates from `g` and the total rank of
/// `s` fits in `rank(g) - reserve` vertices.
pub fn sum_dominated_by(s: &GraphSum, g: &DuValGraph, reserve: u64) -> bool {
    s.components().iter().all(|c| degenerates_to(g, c))
        && s.total_rank() <= g.rank().saturating_sub(reserve)
}

/// [`sum_dominated_by`] against a possibly smooth ambient sum. A smooth ambient
/// admits only the smooth sum; a disconnected one is not an ambient graph.
pub fn sum_dominated_by_sum(s: &GraphSum, ambient: &GraphSum, reserve: u64) -> bool {
    match ambient.as_single() {
        Some(g) => sum_dominated_by(s, &g, reserve),
        None => s.is_smooth(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> DuValGraph {
        s.parse().unwrap()
    }

    #[test]
    fn validity() {
        assert!(DuValGraph::a(0).is_err());
        assert!(DuValGraph::d(3).is_err());
        assert!(DuValGraph::e(5).is_err());
        assert!(DuValGraph::e(9).is_err());
        assert!(DuValGraph::d(4).is_ok());
    }

    #[test]
    fn elephant_examples() {
        assert_eq!(elephant_graph(&TerminalPoint::cax4(2).unwrap()).unwrap(), g("D5"));
        assert_eq!(elephant_graph(&TerminalPoint::ca(2, 1).unwrap()).unwrap(), g("A1"));
        assert_eq!(elephant_graph(&TerminalPoint::cd2(3).unwrap()).unwrap(), g("D6"));
        assert_eq!(elephant_graph(&TerminalPoint::cax2()).unwrap(), g("D4"));
        assert_eq!(elephant_graph(&TerminalPoint::cd3()).unwrap(), g("E6"));
        assert_eq!(elephant_graph(&TerminalPoint::ce2()).unwrap(), g("E7"));
    }

    #[test]
    fn low_rank_d_coincidences() {
        assert_eq!(elephant_graph(&TerminalPoint::cax4(1).unwrap()).unwrap(), g("A3"));
        let p = TerminalPoint::cd2(1).unwrap();
        assert!(matches!(elephant_graph(&p), Err(Error::NoConnectedGraph(_))));
        assert_eq!(elephant_components(&p).to_string(), "A1+A1");
    }

    #[test]
    fn degeneration_examples() {
        assert!(degenerates_to(&g("E7"), &g("D5")));
        assert!(degenerates_to(&g("A3"), &g("A3")));
        assert!(!degenerates_to(&g("A5"), &g("D4")));
        assert!(degenerates_to(&g("E6"), &g("D6")));
        assert!(!degenerates_to(&g("E6"), &g("E7")));
        assert_eq!(compare(&g("A5"), &g("D4")), None);
    }

    #[test]
    fn dominated_examples() {
        let a1: GraphSum = "A1".parse().unwrap();
        assert!(sum_dominated_by(&a1, &g("E6"), 1));
        assert!(sum_dominated_by(&GraphSum::smooth(), &g("A1"), 1));
        assert!(sum_dominated_by(&GraphSum::smooth(), &g("E8"), 1));
        let e7: GraphSum = "E7".parse().unwrap();
        assert!(!sum_dominated_by(&e7, &g("E6"), 1));
        assert!(sum_dominated_by_sum(&GraphSum::smooth(), &GraphSum::smooth(), 0));
        assert!(!sum_dominated_by_sum(&a1, &GraphSum::smooth(), 0));
    }

    #[test]
    fn notation_round_trip() {
        let s: GraphSum = "D4+A2".parse().unwrap();
        assert_eq!(s.to_string(), "A2+D4");
        assert_eq!(GraphSum::smooth().to_string(), "smooth");
        assert_eq!("smooth".parse::<GraphSum>().unwrap(), GraphSum::smooth());
        assert!("X3".parse::<GraphSum>().is_err());
        assert!("D3".parse::<GraphSum>().is_err());
    }
}

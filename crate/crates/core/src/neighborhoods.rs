//! Catalog of irreducible extremal neighborhoods `X ⊃ C → Y ∋ Q`.
//!
//! Each case records the singularities along `C`, the index bound `μ`, and the
//! dual graphs of the general elephant `E_X` and of its image `E_Y`. Thirteen
//! cases occur for divisorial neighborhoods; six of them also occur as
//! flipping (isolated) ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::dualgraph::{literal_a, literal_d, DuValGraph, GraphSum};
use crate::error::{Error, Result};
use crate::invariants::{Configuration, TerminalPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    C2211,
    C2212,
    C2213,
    C221p1,
    C221p2,
    C221p3,
    C221p4,
    C222,
    C222p,
    C223,
    C223p,
    C224,
    C225,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 13] = [
        CaseLabel::C2211,
        CaseLabel::C2212,
        CaseLabel::C2213,
        CaseLabel::C221p1,
        CaseLabel::C221p2,
        CaseLabel::C221p3,
        CaseLabel::C221p4,
        CaseLabel::C222,
        CaseLabel::C222p,
        CaseLabel::C223,
        CaseLabel::C223p,
        CaseLabel::C224,
        CaseLabel::C225,
    ];

    /// Cases that occur as flipping contractions.
    pub const ISOLATED: [CaseLabel; 6] = [
        CaseLabel::C2211,
        CaseLabel::C2212,
        CaseLabel::C2213,
        CaseLabel::C222,
        CaseLabel::C223,
        CaseLabel::C224,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::C2211 => "2.2.1.1",
            CaseLabel::C2212 => "2.2.1.2",
            CaseLabel::C2213 => "2.2.1.3",
            CaseLabel::C221p1 => "2.2.1'.1",
            CaseLabel::C221p2 => "2.2.1'.2",
            CaseLabel::C221p3 => "2.2.1'.3",
            CaseLabel::C221p4 => "2.2.1'.4",
            CaseLabel::C222 => "2.2.2",
            CaseLabel::C222p => "2.2.2'",
            CaseLabel::C223 => "2.2.3",
            CaseLabel::C223p => "2.2.3'",
            CaseLabel::C224 => "2.2.4",
            CaseLabel::C225 => "2.2.5",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CaseLabel::C2211 => "cA/m+(III)",
            CaseLabel::C2212 => "cD/3+(III)",
            CaseLabel::C2213 => "IIA(cAx/4)+(III)",
            CaseLabel::C221p1 => "cAx/2+(III)",
            CaseLabel::C221p2 => "cD/2+(III)",
            CaseLabel::C221p3 => "cE/2+(III)",
            CaseLabel::C221p4 => "IIA(cAx/4)+(III)",
            CaseLabel::C222 => "IC(quot)",
            CaseLabel::C222p => "IIB",
            CaseLabel::C223 => "IA+IA",
            CaseLabel::C223p => "IA+IA+III",
            CaseLabel::C224 => "ss IA+IA",
            CaseLabel::C225 => "Gorenstein",
        }
    }

    pub fn allows(self, kind: NbhdKind) -> bool {
        match kind {
            NbhdKind::Divisorial => true,
            NbhdKind::Isolated => Self::ISOLATED.contains(&self),
        }
    }

    /// Parameter names the case takes, in display order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            CaseLabel::C2211 => &["m", "k"],
            CaseLabel::C2213 | CaseLabel::C221p2 | CaseLabel::C221p4 => &["k"],
            CaseLabel::C222 | CaseLabel::C223p => &["m"],
            CaseLabel::C223 => &["m", "k"],
            CaseLabel::C224 => &["r1", "k1", "r2", "k2"],
            CaseLabel::C2212 | CaseLabel::C221p1 | CaseLabel::C221p3 | CaseLabel::C222p | CaseLabel::C225 => &[],
        }
    }

    /// Semistable cases have an A-type `Δ(E_Y)`.
    pub fn is_semistable(self) -> bool {
        matches!(self, CaseLabel::C2211 | CaseLabel::C224)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = Error;

    /// Accepts the primed form (`2.2.1'.3`) and the ASCII alias (`2.2.1p.3`).
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace(['p', 'P', '’'], "'");
        CaseLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Whether the contraction is a flipping one (isolated) or contracts a
/// divisor onto a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NbhdKind {
    Isolated,
    Divisorial,
}

impl NbhdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NbhdKind::Isolated => "isolated",
            NbhdKind::Divisorial => "divisorial",
        }
    }
}

impl fmt::Display for NbhdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NbhdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "isolated" | "flip" | "flipping" => Ok(NbhdKind::Isolated),
            "divisorial" | "div" => Ok(NbhdKind::Divisorial),
            _ => Err(Error::UnknownCase(format!("kind `{s}`"))),
        }
    }
}

/// Case parameters. Only the subset named by [`CaseLabel::param_names`] is set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<u64>,
}

impl Params {
    pub fn none() -> Self {
        Params::default()
    }

    pub fn m(m: u64) -> Self {
        Params { m: Some(m), ..Params::default() }
    }

    pub fn k(k: u64) -> Self {
        Params { k: Some(k), ..Params::default() }
    }

    pub fn mk(m: u64, k: u64) -> Self {
        Params { m: Some(m), k: Some(k), ..Params::default() }
    }

    pub fn two_points(r1: u64, k1: u64, r2: u64, k2: u64) -> Self {
        Params { r1: Some(r1), k1: Some(k1), r2: Some(r2), k2: Some(k2), ..Params::default() }
    }

    fn get(&self, name: &str) -> Option<u64> {
        match name {
            "m" => self.m,
            "k" => self.k,
            "r1" => self.r1,
            "k1" => self.k1,
            "r2" => self.r2,
            "k2" => self.k2,
            _ => None,
        }
    }

    fn set_names(&self) -> Vec<&'static str> {
        ["m", "k", "r1", "k1", "r2", "k2"].into_iter().filter(|n| self.get(n).is_some()).collect()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.set_names();
        for (i, n) in names.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}={}", self.get(n).unwrap_or_default())?;
        }
        Ok(())
    }
}

/// Whether a contraction forces Gorenstein singularities on the target side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetConstraint {
    GorensteinOnly,
    Unconstrained,
}

impl fmt::Display for TargetConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetConstraint::GorensteinOnly => "target must be Gorenstein",
            TargetConstraint::Unconstrained => "unconstrained",
        })
    }
}

/// One validated extremal neighborhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExtremalNbhd {
    #[serde(rename = "case")]
    label: CaseLabel,
    kind: NbhdKind,
    params: Params,
}

impl ExtremalNbhd {
    pub fn new(label: CaseLabel, kind: NbhdKind, params: Params) -> Result<Self> {
        let name = label.as_str();
        let bad = |reason: String| Err(Error::InvalidParams { label: name, reason });
        if !label.allows(kind) {
            return Err(Error::WrongKind { label: name, kind: kind.as_str() });
        }
        let wanted = label.param_names();
        for n in params.set_names() {
            if !wanted.contains(&n) {
                return bad(format!("unexpected parameter `{n}`"));
            }
        }
        for n in wanted {
            if params.get(n).is_none() {
                return bad(format!("missing parameter `{n}`"));
            }
        }
        let v = |n: &str| params.get(n).unwrap_or(0);
        for n in ["k", "k1", "k2"] {
            if wanted.contains(&n) && v(n) < 1 {
                return bad(format!("{n} must be at least 1"));
            }
        }
        for n in ["r1", "r2"] {
            if wanted.contains(&n) && v(n) < 2 {
                return bad(format!("{n} must be at least 2"));
            }
        }
        match label {
            CaseLabel::C2211 if v("m") < 2 => return bad("m must be at least 2".into()),
            CaseLabel::C222 if v("m") < 5 || v("m") % 2 == 0 => {
                return bad("m must be odd and at least 5".into())
            }
            CaseLabel::C223 | CaseLabel::C223p if v("m") < 3 || v("m") % 2 == 0 => {
                return bad("m must be odd and at least 3".into())
            }
            _ => {}
        }
        Ok(ExtremalNbhd { label, kind, params })
    }

    pub fn fixed(label: CaseLabel, kind: NbhdKind) -> Result<Self> {
        Self::new(label, kind, Params::none())
    }

    pub fn label(&self) -> CaseLabel {
        self.label
    }

    pub fn kind(&self) -> NbhdKind {
        self.kind
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn is_isolated(&self) -> bool {
        self.kind == NbhdKind::Isolated
    }

    fn p(&self, name: &str) -> u64 {
        self.params.get(name).expect("validated at construction")
    }

    /// Maximal index of the singularities along `C`.
    pub fn mu(&self) -> u64 {
        match self.label {
            CaseLabel::C2211 | CaseLabel::C222 | CaseLabel::C223 | CaseLabel::C223p => self.p("m"),
            CaseLabel::C2212 => 3,
            CaseLabel::C2213 | CaseLabel::C221p4 | CaseLabel::C222p => 4,
            CaseLabel::C221p1 | CaseLabel::C221p2 | CaseLabel::C221p3 => 2,
            CaseLabel::C224 => self.p("r1").max(self.p("r2")),
            CaseLabel::C225 => 1,
        }
    }

    /// `Δ(E_X)`.
    pub fn graph_ex(&self) -> GraphSum {
        match self.label {
            CaseLabel::C2211 => literal_a(self.p("m") * self.p("k") - 1),
            CaseLabel::C2212 => e(6),
            CaseLabel::C2213 | CaseLabel::C221p4 => literal_d(2 * self.p("k") + 1),
            CaseLabel::C221p1 => literal_d(4),
            CaseLabel::C221p2 => literal_d(2 * self.p("k")),
            CaseLabel::C221p3 => e(7),
            CaseLabel::C222 => literal_a(self.p("m") - 1),
            CaseLabel::C222p => literal_d(5),
            CaseLabel::C223 => literal_a(self.p("m") - 1).plus(&literal_d(2 * self.p("k"))),
            CaseLabel::C223p => literal_a(self.p("m") - 1).plus(&literal_a(1)),
            CaseLabel::C224 => literal_a(self.p("r1") * self.p("k1") - 1)
                .plus(&literal_a(self.p("r2") * self.p("k2") - 1)),
            CaseLabel::C225 => GraphSum::smooth(),
        }
    }

    /// `Δ(E_Y)`; smooth only in the Gorenstein case.
    pub fn graph_ey(&self) -> GraphSum {
        match self.label {
            CaseLabel::C2211 => literal_a(self.p("m") * self.p("k") - 1),
            CaseLabel::C2212 => e(6),
            CaseLabel::C2213 | CaseLabel::C221p4 => literal_d(2 * self.p("k") + 1),
            CaseLabel::C221p1 => literal_d(4),
            CaseLabel::C221p2 => literal_d(2 * self.p("k")),
            CaseLabel::C221p3 => e(7),
            CaseLabel::C222 => literal_d(self.p("m")),
            CaseLabel::C222p => e(6),
            CaseLabel::C223 => literal_d(2 * self.p("k") + self.p("m")),
            CaseLabel::C223p => literal_d(self.p("m") + 2),
            CaseLabel::C224 => {
                literal_a(self.p("r1") * self.p("k1") + self.p("r2") * self.p("k2") - 1)
            }
            CaseLabel::C225 => GraphSum::smooth(),
        }
    }

    /// Non-Gorenstein points along `C`. Type III points are Gorenstein and
    /// are not listed.
    pub fn source_config(&self) -> Configuration {
        let ca = |r, k| TerminalPoint::ca(r, k).expect("validated parameters");
        let pts: Vec<TerminalPoint> = match self.label {
            CaseLabel::C2211 => vec![ca(self.p("m"), self.p("k"))],
            CaseLabel::C2212 => vec![TerminalPoint::cd3()],
            CaseLabel::C2213 | CaseLabel::C221p4 => {
                vec![TerminalPoint::cax4(self.p("k")).expect("validated parameters")]
            }
            CaseLabel::C221p1 => vec![TerminalPoint::cax2()],
            CaseLabel::C221p2 => vec![TerminalPoint::cd2(self.p("k")).expect("validated parameters")],
            CaseLabel::C221p3 => vec![TerminalPoint::ce2()],
            CaseLabel::C222 => vec![ca(self.p("m"), 1)],
            CaseLabel::C222p => vec![TerminalPoint::cax4(2).expect("k = 2 is valid")],
            CaseLabel::C223 => vec![
                ca(self.p("m"), 1),
                TerminalPoint::cd2(self.p("k")).expect("validated parameters"),
            ],
            CaseLabel::C223p => vec![ca(self.p("m"), 1), ca(2, 1)],
            CaseLabel::C224 => vec![ca(self.p("r1"), self.p("k1")), ca(self.p("r2"), self.p("k2"))],
            CaseLabel::C225 => vec![],
        };
        Configuration::new(pts)
    }

    /// Index bound for divisorial contractions to curves: a point of index
    /// `r` on the image curve has `r | r_X` and `2r <= μ_X`.
    pub fn check_comp_d(&self, r: u64) -> Result<bool> {
        if self.is_isolated() {
            return Err(Error::WrongKind { label: self.label.as_str(), kind: "divisorial" });
        }
        if r <= 1 {
            return Ok(true);
        }
        Ok(2 * r <= self.mu() && self.source_config().index_lcm() % r == 0)
    }

    /// Small `μ` forces a Gorenstein target: `μ <= 3` for divisorial
    /// contractions, `μ <= 2` for flips.
    pub fn check_exclude(&self) -> TargetConstraint {
        let limit = match self.kind {
            NbhdKind::Divisorial => 3,
            NbhdKind::Isolated => 2,
        };
        if self.mu() <= limit {
            TargetConstraint::GorensteinOnly
        } else {
            TargetConstraint::Unconstrained
        }
    }
}

impl fmt::Display for ExtremalNbhd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label, self.kind)?;
        if !self.label.param_names().is_empty() {
            write!(f, " {}", self.params)?;
        }
        Ok(())
    }
}

fn e(n: u64) -> GraphSum {
    GraphSum::from(DuValGraph::e(n).expect("E6/E7 are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn div(label: CaseLabel, params: Params) -> ExtremalNbhd {
        ExtremalNbhd::new(label, NbhdKind::Divisorial, params).unwrap()
    }

    fn iso(label: CaseLabel, params: Params) -> ExtremalNbhd {
        ExtremalNbhd::new(label, NbhdKind::Isolated, params).unwrap()
    }

    #[test]
    fn labels_parse_with_primes_and_alias() {
        for c in CaseLabel::ALL {
            assert_eq!(c.as_str().parse::<CaseLabel>().unwrap(), c);
            let alias = c.as_str().replace('\'', "p");
            assert_eq!(alias.parse::<CaseLabel>().unwrap(), c);
        }
        assert!("2.2.6".parse::<CaseLabel>().is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(div(CaseLabel::C2213, Params::k(1)).mu(), 4);
        assert_eq!(div(CaseLabel::C225, Params::none()).mu(), 1);
        assert_eq!(div(CaseLabel::C224, Params::two_points(3, 1, 5, 1)).mu(), 5);
    }

    #[test]
    fn graph_examples() {
        let n = div(CaseLabel::C222, Params::m(5));
        assert_eq!((n.graph_ex().to_string(), n.graph_ey().to_string()), ("A4".into(), "D5".into()));
        let n = div(CaseLabel::C225, Params::none());
        assert_eq!((n.graph_ex().to_string(), n.graph_ey().to_string()), ("smooth".into(), "smooth".into()));
        let n = div(CaseLabel::C224, Params::two_points(2, 1, 4, 1));
        assert_eq!((n.graph_ex().to_string(), n.graph_ey().to_string()), ("A1+A3".into(), "A5".into()));
        let n = div(CaseLabel::C223, Params::mk(5, 2));
        assert_eq!((n.graph_ex().to_string(), n.graph_ey().to_string()), ("A4+D4".into(), "D9".into()));
    }

    #[test]
    fn source_config_examples() {
        let n = div(CaseLabel::C223, Params::mk(3, 2));
        let c = n.source_config();
        assert_eq!(c.to_string(), "{cA/3(k=1), cD/2(k=2)}");
        assert_eq!(c.f_invariant(), Rational::new(17, 3));
        assert!(div(CaseLabel::C225, Params::none()).source_config().is_empty());
        let c = div(CaseLabel::C222p, Params::none()).source_config();
        assert_eq!(c, Configuration::single(TerminalPoint::cax4(2).unwrap()));
        assert_eq!(c.f_invariant(), Rational::new(21, 4));
    }

    #[test]
    fn comp_d_examples() {
        assert!(div(CaseLabel::C2213, Params::k(2)).check_comp_d(2).unwrap());
        assert!(!div(CaseLabel::C221p2, Params::k(2)).check_comp_d(2).unwrap());
        for label in CaseLabel::ALL {
            let names = label.param_names();
            let params = match names {
                [] => Params::none(),
                ["k"] => Params::k(2),
                ["m"] => Params::m(5),
                ["m", "k"] => Params::mk(5, 2),
                _ => Params::two_points(2, 1, 3, 1),
            };
            assert!(div(label, params).check_comp_d(1).unwrap());
        }
        assert!(iso(CaseLabel::C2212, Params::none()).check_comp_d(2).is_err());
    }

    #[test]
    fn exclude_examples() {
        assert_eq!(div(CaseLabel::C2212, Params::none()).check_exclude(), TargetConstraint::GorensteinOnly);
        assert_eq!(iso(CaseLabel::C2211, Params::mk(2, 1)).check_exclude(), TargetConstraint::GorensteinOnly);
        assert_eq!(iso(CaseLabel::C2213, Params::k(1)).check_exclude(), TargetConstraint::Unconstrained);
    }

    #[test]
    fn parameter_validation() {
        let bad = |label, kind, params| ExtremalNbhd::new(label, kind, params).is_err();
        assert!(bad(CaseLabel::C222, NbhdKind::Divisorial, Params::m(4)));
        assert!(bad(CaseLabel::C222, NbhdKind::Divisorial, Params::m(3)));
        assert!(bad(CaseLabel::C223, NbhdKind::Divisorial, Params::mk(4, 2)));
        assert!(bad(CaseLabel::C2211, NbhdKind::Isolated, Params::mk(1, 1)));
        assert!(bad(CaseLabel::C2212, NbhdKind::Isolated, Params::k(1)));
        assert!(bad(CaseLabel::C2213, NbhdKind::Isolated, Params::none()));
        assert!(bad(CaseLabel::C221p1, NbhdKind::Isolated, Params::none()));
        assert!(bad(CaseLabel::C225, NbhdKind::Isolated, Params::none()));
        assert!(bad(CaseLabel::C224, NbhdKind::Isolated, Params::two_points(1, 1, 3, 1)));
        // Equal indices are allowed on the type itself.
        assert!(!bad(CaseLabel::C224, NbhdKind::Isolated, Params::two_points(3, 1, 3, 2)));
    }
}

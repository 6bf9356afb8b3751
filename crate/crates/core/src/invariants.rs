//! Non-Gorenstein terminal germs, their baskets, and the invariants Ξ and F.
//!
//! Every terminal germ of index `r >= 2` falls into one of six families, each
//! with a fixed recipe for its basket of virtual cyclic quotient points and
//! for the dual graph of its general anticanonical member:
//!
//! | type   | aw | basket                  | Ξ      | F            |
//! |--------|----|-------------------------|--------|--------------|
//! | cA/r   | k  | k × (b, r)              | rk     | k(r − 1/r)   |
//! | cAx/2  | 2  | 2 × (1, 2)              | 4      | 3            |
//! | cAx/4  | k  | (1, 4) + (k − 1)×(1, 2) | 2k + 2 | (6k + 9)/4   |
//! | cD/2   | k  | k × (1, 2)              | 2k     | 3k/2         |
//! | cD/3   | 2  | 2 × (1, 3)              | 6      | 16/3         |
//! | cE/2   | 3  | 3 × (1, 2)              | 6      | 9/2          |
//!
//! Gorenstein points are never represented; they contribute nothing to either
//! invariant and a [`Configuration`] simply omits them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The six families of non-Gorenstein terminal germs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingType {
    CA,
    CAx2,
    CAx4,
    CD2,
    CD3,
    CE2,
}

impl SingType {
    pub const ALL: [SingType; 6] = [
        SingType::CA,
        SingType::CAx2,
        SingType::CAx4,
        SingType::CD2,
        SingType::CD3,
        SingType::CE2,
    ];

    /// Wire name used in JSON and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            SingType::CA => "cA",
            SingType::CAx2 => "cAx2",
            SingType::CAx4 => "cAx4",
            SingType::CD2 => "cD2",
            SingType::CD3 => "cD3",
            SingType::CE2 => "cE2",
        }
    }

    /// Index fixed by the family, if any.
    pub fn fixed_index(self) -> Option<u64> {
        match self {
            SingType::CA => None,
            SingType::CAx2 | SingType::CD2 | SingType::CE2 => Some(2),
            SingType::CAx4 => Some(4),
            SingType::CD3 => Some(3),
        }
    }

    /// Axial weight fixed by the family, if any.
    pub fn fixed_aw(self) -> Option<u64> {
        match self {
            SingType::CAx2 | SingType::CD3 => Some(2),
            SingType::CE2 => Some(3),
            SingType::CA | SingType::CAx4 | SingType::CD2 => None,
        }
    }
}

impl fmt::Display for SingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SingType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| *c != '/' && *c != '_').collect();
        match norm.to_ascii_lowercase().as_str() {
            "ca" | "car" => Ok(SingType::CA),
            "cax2" => Ok(SingType::CAx2),
            "cax4" => Ok(SingType::CAx4),
            "cd2" => Ok(SingType::CD2),
            "cd3" => Ok(SingType::CD3),
            "ce2" => Ok(SingType::CE2),
            _ => Err(Error::UnknownType(s.to_string())),
        }
    }
}

/// One non-Gorenstein terminal germ: type, index `r`, axial weight `k`.
///
/// For `cA/r` points an explicit residue `b` (coprime to `r`) may be attached;
/// it only affects the reported basket, never Ξ or F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TerminalPoint {
    tag: SingType,
    r: u64,
    k: u64,
    b: Option<u64>,
}

impl TerminalPoint {
    /// Validating constructor. `r`/`k` must agree with the family's fixed values.
    pub fn new(tag: SingType, r: u64, k: u64) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidPoint(format!("{tag} r={r} k={k}: {why}")));
        if let Some(fr) = tag.fixed_index() {
            if r != fr {
                return bad(format!("index must be {fr}"));
            }
        } else if r < 2 {
            return bad("index must be at least 2".into());
        }
        if let Some(fk) = tag.fixed_aw() {
            if k != fk {
                return bad(format!("axial weight must be {fk}"));
            }
        } else if k < 1 {
            return bad("axial weight must be at least 1".into());
        }
        Ok(TerminalPoint { tag, r, k, b: None })
    }

    pub fn ca(r: u64, k: u64) -> Result<Self> {
        Self::new(SingType::CA, r, k)
    }

    pub fn cax2() -> Self {
        TerminalPoint { tag: SingType::CAx2, r: 2, k: 2, b: None }
    }

    pub fn cax4(k: u64) -> Result<Self> {
        Self::new(SingType::CAx4, 4, k)
    }

    pub fn cd2(k: u64) -> Result<Self> {
        Self::new(SingType::CD2, 2, k)
    }

    pub fn cd3() -> Self {
        TerminalPoint { tag: SingType::CD3, r: 3, k: 2, b: None }
    }

    pub fn ce2() -> Self {
        TerminalPoint { tag: SingType::CE2, r: 2, k: 3, b: None }
    }

    /// Attach the residue `b` of a `cA/r` point. Rejected for other families
    /// and when `gcd(b, r) != 1`.
    pub fn with_residue(mut self, b: u64) -> Result<Self> {
        if self.tag != SingType::CA {
            return Err(Error::InvalidBasket { b, r: self.r, reason: "residue only applies to cA points" });
        }
        if b == 0 || b.gcd(&self.r) != 1 {
            return Err(Error::InvalidBasket { b, r: self.r, reason: "residue must be coprime to the index" });
        }
        self.b = Some(b % self.r);
        Ok(self)
    }

    pub fn tag(&self) -> SingType {
        self.tag
    }

    pub fn index(&self) -> u64 {
        self.r
    }

    pub fn axial_weight(&self) -> u64 {
        self.k
    }

    pub fn residue(&self) -> Option<u64> {
        self.b
    }

    /// Multiset of virtual quotient points `(b, r)`.
    pub fn basket(&self) -> Basket {
        let half = BasketEntry { b: 1, r: 2 };
        let entries = match self.tag {
            SingType::CA => {
                let e = BasketEntry { b: self.b.unwrap_or(1), r: self.r };
                vec![e; self.k as usize]
            }
            SingType::CAx2 => vec![half; 2],
            SingType::CAx4 => {
                let mut v = vec![BasketEntry { b: 1, r: 4 }];
                v.extend(std::iter::repeat(half).take(self.k as usize - 1));
                v
            }
            SingType::CD2 => vec![half; self.k as usize],
            SingType::CD3 => vec![BasketEntry { b: 1, r: 3 }; 2],
            SingType::CE2 => vec![half; 3],
        };
        Basket::from_entries_unchecked(entries)
    }

    /// Ξ(P), read from the closed-form column.
    pub fn xi(&self) -> u64 {
        match self.tag {
            SingType::CA => self.r * self.k,
            SingType::CAx2 => 4,
            SingType::CAx4 => 2 * self.k + 2,
            SingType::CD2 => 2 * self.k,
            SingType::CD3 | SingType::CE2 => 6,
        }
    }

    /// F(P), read from the closed-form column.
    pub fn f_invariant(&self) -> Rational {
        let k = self.k as i64;
        match self.tag {
            SingType::CA => Rational::index_defect(self.r) * self.k,
            SingType::CAx2 => Rational::from_integer(3),
            SingType::CAx4 => Rational::new(6 * k + 9, 4),
            SingType::CD2 => Rational::new(3 * k, 2),
            SingType::CD3 => Rational::new(16, 3),
            SingType::CE2 => Rational::new(9, 2),
        }
    }
}

impl fmt::Display for TerminalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            SingType::CA => write!(f, "cA/{}(k={})", self.r, self.k),
            SingType::CAx4 => write!(f, "cAx/4(k={})", self.k),
            SingType::CD2 => write!(f, "cD/2(k={})", self.k),
            SingType::CAx2 => f.write_str("cAx/2"),
            SingType::CD3 => f.write_str("cD/3"),
            SingType::CE2 => f.write_str("cE/2"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointWire {
    #[serde(rename = "type")]
    tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
}

impl Serialize for TerminalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PointWire {
            tag: self.tag.as_str().to_string(),
            r: self.tag.fixed_index().is_none().then_some(self.r),
            k: self.tag.fixed_aw().is_none().then_some(self.k),
            b: self.b,
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TerminalPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = PointWire::deserialize(deserializer)?;
        let tag: SingType = wire.tag.parse().map_err(D::Error::custom)?;
        let r = match (tag.fixed_index(), wire.r) {
            (Some(fixed), _) => wire.r.unwrap_or(fixed),
            (None, Some(r)) => r,
            (None, None) => return Err(D::Error::custom(format!("{tag} requires \"r\""))),
        };
        let k = match (tag.fixed_aw(), wire.k) {
            (Some(fixed), _) => wire.k.unwrap_or(fixed),
            (None, Some(k)) => k,
            (None, None) => return Err(D::Error::custom(format!("{tag} requires \"k\""))),
        };
        let p = TerminalPoint::new(tag, r, k).map_err(D::Error::custom)?;
        match wire.b {
            Some(b) => p.with_residue(b).map_err(D::Error::custom),
            None => Ok(p),
        }
    }
}

/// One virtual cyclic quotient point `1/r(1, -1, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasketEntry {
    pub b: u64,
    pub r: u64,
}

/// Multiset of basket entries, kept sorted so equality is order-independent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Basket(Vec<BasketEntry>);

impl Basket {
    pub fn new(entries: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut v = Vec::new();
        for (b, r) in entries {
            if r < 2 {
                return Err(Error::InvalidBasket { b, r, reason: "index must be at least 2" });
            }
            if b == 0 || b.gcd(&r) != 1 {
                return Err(Error::InvalidBasket { b, r, reason: "b must be coprime to r" });
            }
            v.push(BasketEntry { b, r });
        }
        Ok(Self::from_entries_unchecked(v))
    }

    fn from_entries_unchecked(mut v: Vec<BasketEntry>) -> Self {
        v.sort_unstable();
        Basket(v)
    }

    pub fn entries(&self) -> &[BasketEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σ (r − 1/r) over entries: the Riemann–Roch correction of the basket.
    pub fn f_value(&self) -> Rational {
        self.0.iter().map(|e| Rational::index_defect(e.r)).sum()
    }

    /// Σ r over entries.
    pub fn index_sum(&self) -> u64 {
        self.0.iter().map(|e| e.r).sum()
    }

    pub fn union(&self, other: &Basket) -> Basket {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::from_entries_unchecked(v)
    }
}

/// `f_from_basket`: Σ (r − 1/r).
pub fn f_from_basket(b: &Basket) -> Rational {
    b.f_value()
}

/// A finite multiset of non-Gorenstein points, e.g. the singular points along
/// a curve. Empty means every point is Gorenstein.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<TerminalPoint>);

impl Configuration {
    pub fn empty() -> Self {
        Configuration(Vec::new())
    }

    pub fn new(points: impl IntoIterator<Item = TerminalPoint>) -> Self {
        let mut v: Vec<_> = points.into_iter().collect();
        v.sort_unstable();
        Configuration(v)
    }

    pub fn single(p: TerminalPoint) -> Self {
        Configuration(vec![p])
    }

    pub fn points(&self) -> &[TerminalPoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Configuration) -> Configuration {
        Configuration::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn xi(&self) -> u64 {
        self.0.iter().map(TerminalPoint::xi).sum()
    }

    pub fn f_invariant(&self) -> Rational {
        self.0.iter().map(TerminalPoint::f_invariant).sum()
    }

    /// Ξ restricted to points of index greater than 2.
    pub fn xi_gt2(&self) -> u64 {
        self.0.iter().filter(|p| p.r > 2).map(|p| p.r * p.k).sum()
    }

    pub fn basket(&self) -> Basket {
        self.0.iter().fold(Basket::default(), |acc, p| acc.union(&p.basket()))
    }

    pub fn max_index(&self) -> u64 {
        self.0.iter().map(|p| p.r).max().unwrap_or(1)
    }

    /// Least common multiple of the indices; 1 when empty.
    pub fn index_lcm(&self) -> u64 {
        self.0.iter().fold(1, |acc, p| acc.lcm(&p.r))
    }

    /// `c1·c2 = 24χ − F`.
    pub fn c1c2_from_chi(&self, chi: i64) -> Rational {
        c1c2_from_chi(chi, self)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Vec::<TerminalPoint>::deserialize(deserializer).map(Configuration::new)
    }
}

impl FromIterator<TerminalPoint> for Configuration {
    fn from_iter<I: IntoIterator<Item = TerminalPoint>>(iter: I) -> Self {
        Configuration::new(iter)
    }
}

pub fn basket_of(p: &TerminalPoint) -> Basket {
    p.basket()
}

pub fn xi(p: &TerminalPoint) -> u64 {
    p.xi()
}

pub fn f_invariant(p: &TerminalPoint) -> Rational {
    p.f_invariant()
}

pub fn xi_gt2(c: &Configuration) -> u64 {
    c.xi_gt2()
}

/// Riemann–Roch for a projective threefold with terminal singularities:
/// `χ(O) = (c1·c2 + F)/24`, hence `c1·c2 = 24χ − F`.
pub fn c1c2_from_chi(chi: i64, c: &Configuration) -> Rational {
    Rational::from_integer(24 * chi) - c.f_invariant()
}

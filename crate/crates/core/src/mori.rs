//! The integer recursion `d(n+1) + d(n-1) = δ·ρ_n·d(n)` governing the indices
//! of the flipped curve in the semistable two-point case.
//!
//! Starting from `d(1) = r1`, `d(2) = r2`, the first sign change
//! `d(κ-1) > 0 > d(κ)` gives the indices `(d(κ-1), -d(κ))` of the two points
//! on `C⁺`. The alternating subsequences ending at `d(κ-1)` and `-d(κ)` are
//! reported so callers can check that both strictly decrease from the
//! starting values.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriRecursionInput {
    pub delta: u64,
    /// `rho[i]` is `ρ_{i+1}`; the sequence repeats cyclically when shorter
    /// than the requested number of steps.
    pub rho: Vec<u64>,
    pub d1: i64,
    pub d2: i64,
}

impl MoriRecursionInput {
    pub fn new(delta: u64, rho: Vec<u64>, d1: i64, d2: i64) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidRecursion("delta must be positive".into()));
        }
        if rho.is_empty() || rho.contains(&0) {
            return Err(Error::InvalidRecursion("rho must be a non-empty sequence of positive integers".into()));
        }
        Ok(MoriRecursionInput { delta, rho, d1, d2 })
    }

    /// `ρ_n` for `n >= 1`.
    pub fn rho_at(&self, n: usize) -> u64 {
        self.rho[(n - 1) % self.rho.len()]
    }

    /// `d(1..=steps)`.
    pub fn sequence(&self, steps: usize) -> Vec<BigInt> {
        let mut d: Vec<BigInt> = Vec::with_capacity(steps);
        d.push(BigInt::from(self.d1));
        if steps >= 2 {
            d.push(BigInt::from(self.d2));
        }
        // d[i] holds d(i+1).
        for n in 2..steps {
            let coeff = BigInt::from(self.delta) * BigInt::from(self.rho_at(n));
            let next = coeff * &d[n - 1] - &d[n - 2];
            d.push(next);
        }
        d.truncate(steps);
        d
    }

    /// True iff `seq` (as `d(1), d(2), ...`) satisfies the defining relation
    /// at every interior position.
    pub fn satisfies_relation(&self, seq: &[BigInt]) -> bool {
        (2..seq.len()).all(|i| {
            // seq[i] = d(i+1), seq[i-1] = d(i), seq[i-2] = d(i-1)
            let coeff = BigInt::from(self.delta) * BigInt::from(self.rho_at(i));
            &seq[i] + &seq[i - 2] == coeff * &seq[i - 1]
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoriRecursionOutput {
    /// `d(1..=steps)`.
    pub sequence: Vec<BigInt>,
    /// First `κ` with `d(κ-1) > 0 > d(κ)`.
    pub kappa: usize,
    /// `(r1', r2') = (d(κ-1), -d(κ))`.
    pub r1: BigInt,
    pub r2: BigInt,
    /// `[d(κ-1), d(κ-3), ...]` down to `d(1)` or `d(2)`.
    pub chain1: Vec<BigInt>,
    /// `[-d(κ), d(κ-2), d(κ-4), ...]` down to `d(1)` or `d(2)`.
    pub chain2: Vec<BigInt>,
}

impl MoriRecursionOutput {
    /// Both chains strictly increase, i.e. the new indices strictly decrease
    /// back towards the starting values.
    pub fn certificate_holds(&self) -> bool {
        let increasing = |c: &[BigInt]| c.windows(2).all(|w| w[0] < w[1]);
        increasing(&self.chain1) && increasing(&self.chain2)
    }

    pub fn starting_max(&self) -> BigInt {
        self.sequence[0].clone().max(self.sequence[1].clone())
    }
}

/// Runs the recursion for `steps` terms and locates the first sign change.
pub fn run_mori_recursion(input: &MoriRecursionInput, steps: usize) -> Result<MoriRecursionOutput> {
    if steps < 3 {
        return Err(Error::InvalidRecursion(format!("steps must be at least 3, got {steps}")));
    }
    let seq = input.sequence(steps);
    let zero = BigInt::zero();
    // seq[i] = d(i+1); sign change at κ means seq[κ-2] > 0 > seq[κ-1].
    let kappa = (2..=steps)
        .find(|&kappa| seq[kappa - 2] > zero && seq[kappa - 1] < zero)
        .ok_or(Error::NoSignChange(steps))?;
    let d = |n: usize| seq[n - 1].clone();
    let chain = |first: BigInt, start: usize| -> Vec<BigInt> {
        let mut c = vec![first];
        let mut n = start;
        while n >= 1 {
            c.push(d(n));
            if n < 3 {
                break;
            }
            n -= 2;
        }
        c
    };
    // chain1 starts at d(κ-1) and continues with d(κ-3), ...
    let chain1 = if kappa >= 4 { chain(d(kappa - 1), kappa - 3) } else { vec![d(kappa - 1)] };
    let chain2 = chain(-d(kappa), kappa - 2);
    Ok(MoriRecursionOutput {
        r1: d(kappa - 1),
        r2: -d(kappa),
        sequence: seq,
        kappa,
        chain1,
        chain2,
    })
}

/// Convenience for callers that only need positivity of the pair.
pub fn indices_positive(out: &MoriRecursionOutput) -> bool {
    out.r1 >= BigInt::one() && out.r2.is_positive()
}

//! Brute-force cross-checks, deliberately sharing no code with the fast paths.
//!
//! * [`theta_by_enumeration`] visits lattice points one by one and adds up
//!   `(±1)^{‖ℓ‖²} q^{‖ℓ+λ‖²/2}` directly.
//! * [`partitions_up_to`] counts integer partitions by the textbook DP.
//!
//! These live in the library (not just in tests) so `selfcheck` can run
//! them on any installation.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::frame::RANK;
use crate::qseries::{Exp, PuiseuxSeries};
use crate::theta::SignTwist;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration visited more than {cap} lattice points")]
    BudgetExceeded { cap: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coset {
    Z12,
    D12,
    D12Plus,
}

/// Enumerate all `ℓ` with `‖ℓ+λ‖²/2 < max_norm`, but give up after `point_cap`
/// lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_norm: Exp,
    pub point_cap: u64,
}

impl EnumerationBudget {
    pub fn new(max_norm: Exp) -> Self {
        EnumerationBudget {
            max_norm,
            point_cap: 50_000_000,
        }
    }
}

/// Scaled integer view: coordinates `x_i = m·ℓ_i + a_i` with `λ_i = a_i/m`,
/// so `‖ℓ+λ‖²/2 = Σx_i² / (2m²)`.
struct Walker {
    m: i64,
    offsets: [i64; RANK],
    /// `‖x‖² < limit` is admissible.
    limit: i128,
    sign: SignTwist,
    /// Only ℓ with even coordinate sum (D₁₂).
    even_only: bool,
    acc: HashMap<i128, i64>,
    visited: u64,
    cap: u64,
}

impl Walker {
    fn walk(&mut self, i: usize, norm: i128, parity: i64) -> Result<(), OracleError> {
        if i == RANK {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(OracleError::BudgetExceeded { cap: self.cap });
            }
            if self.even_only && parity.rem_euclid(2) != 0 {
                return Ok(());
            }
            let s = match self.sign {
                SignTwist::Minus if parity.rem_euclid(2) != 0 => -1,
                _ => 1,
            };
            *self.acc.entry(norm).or_insert(0) += s;
            return Ok(());
        }
        // Remaining budget for this and later coordinates.
        let rest = self.limit - norm;
        if rest <= 0 {
            return Ok(());
        }
        let a = self.offsets[i];
        let m = self.m;
        // Interval of ℓ with (mℓ + a)² < rest.
        let r = isqrt_ceil(rest);
        let lo = Integer::div_floor(&(-r - a), &m) - 1;
        let hi = Integer::div_floor(&(r - a), &m) + 1;
        for l in lo..=hi {
            let x = (m * l + a) as i128;
            let n = norm + x * x;
            if n < self.limit {
                self.walk(i + 1, n, parity + l)?;
            }
        }
        Ok(())
    }
}

fn isqrt_ceil(n: i128) -> i64 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r as i64
}

fn enumerate_coset(
    lambda: &[Exp; RANK],
    sign: SignTwist,
    even_only: bool,
    budget: EnumerationBudget,
) -> Result<PuiseuxSeries, OracleError> {
    let m = lambda.iter().fold(1i64, |acc, l| acc.lcm(l.denom()));
    let offsets = lambda.map(|l| l.numer() * (m / l.denom()));
    // Σx² / (2m²) < max_norm  ⇔  Σx² < 2m²·max_norm  (strict); clear the
    // denominator of max_norm too.
    let t = budget.max_norm;
    let scale = 2 * (m as i128) * (m as i128);
    // Σx²·denom(t) < scale·numer(t)
    let mut w = Walker {
        m,
        offsets,
        limit: 0,
        sign,
        even_only,
        acc: HashMap::new(),
        visited: 0,
        cap: budget.point_cap,
    };
    let tn = *t.numer() as i128;
    let td = *t.denom() as i128;
    // Smallest integer N with N·td ≥ scale·tn, i.e. Σx² < N.
    w.limit = (scale * tn + td - 1).div_euclid(td);
    w.walk(0, 0, 0)?;
    let denom = 2 * m * m;
    Ok(PuiseuxSeries::from_terms(
        w.acc.into_iter().map(|(n, c)| {
            (
                Exp::new(n as i64, denom),
                BigRational::from_integer(BigInt::from(c)),
            )
        }),
        t,
    ))
}

/// `Σ_{ℓ ∈ L} (±1)^{‖ℓ‖²} q^{‖ℓ+λ‖²/2}` over `L = ℤ¹²`, `D₁₂` or `D₁₂⁺`.
///
/// `D₁₂` is `{ℓ : Σℓ_i even}`; `D₁₂⁺ = D₁₂ ∪ (D₁₂ + ς)`.  On `D₁₂` the sign
/// is irrelevant (all norms are even); on the glue coset `‖ℓ‖²` is odd, so
/// the sign selects `Θ_{D₁₂+λ} ± Θ_{D₁₂+ς+λ}`.
pub fn theta_by_enumeration(
    coset: Coset,
    sign: SignTwist,
    lambda: &[Exp; RANK],
    budget: EnumerationBudget,
) -> Result<PuiseuxSeries, OracleError> {
    match coset {
        Coset::Z12 => enumerate_coset(lambda, sign, false, budget),
        Coset::D12 => enumerate_coset(lambda, SignTwist::Plus, true, budget),
        Coset::D12Plus => {
            let even = enumerate_coset(lambda, SignTwist::Plus, true, budget)?;
            let glue_lambda = lambda.map(|l| l + Exp::new(1, 2));
            let glue = enumerate_coset(&glue_lambda, SignTwist::Plus, true, budget)?;
            Ok(match sign {
                SignTwist::Plus => even.add(&glue),
                SignTwist::Minus => even.sub(&glue),
            })
        }
    }
}

/// `p(0), …, p(n)`.
pub fn partitions_up_to(n: usize) -> Vec<BigUint> {
    let mut p = vec![BigUint::zero(); n + 1];
    p[0] = BigUint::one();
    for part in 1..=n {
        for k in part..=n {
            let prev = p[k - part].clone();
            p[k] += prev;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exp {
        Exp::new(n, d)
    }

    fn c(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn partition_numbers() {
        let p = partitions_up_to(10);
        assert_eq!(p[0], BigUint::from(1u32));
        assert_eq!(p[4], BigUint::from(5u32));
        assert_eq!(p[10], BigUint::from(42u32));
    }

    #[test]
    fn small_shells() {
        let z = [q(0, 1); 12];
        let b = EnumerationBudget::new(q(2, 1));
        let d = theta_by_enumeration(Coset::D12, SignTwist::Plus, &z, b).unwrap();
        assert_eq!(d.coefficient(q(1, 1)).unwrap(), c(264));
        let m = theta_by_enumeration(Coset::Z12, SignTwist::Minus, &z, b).unwrap();
        assert_eq!(m.coefficient(q(1, 2)).unwrap(), c(-24));
        let g = theta_by_enumeration(Coset::D12Plus, SignTwist::Plus, &z, b).unwrap();
        assert_eq!(g.coefficient(q(3, 2)).unwrap(), c(2048));
    }

    #[test]
    fn budget_cap_is_enforced() {
        let z = [q(0, 1); 12];
        let b = EnumerationBudget {
            max_norm: q(3, 1),
            point_cap: 1000,
        };
        assert_eq!(
            theta_by_enumeration(Coset::Z12, SignTwist::Plus, &z, b),
            Err(OracleError::BudgetExceeded { cap: 1000 })
        );
    }

    #[test]
    fn isqrt() {
        for n in 1..2000i128 {
            let r = isqrt_ceil(n) as i128;
            assert!(r * r >= n && (r - 1) * (r - 1) < n, "{n}");
        }
    }
}

//! Twisted theta series of `ℤ`, `ℤ¹²`, `D₁₂` and `D₁₂⁺`.
//!
//! The one-dimensional building block is
//! `θ^±_λ(q) = Σ_{ℓ∈ℤ} (±1)^ℓ q^{(ℓ+λ)²/2}`; the rank-12 series are products
//! of twelve of these, and the `D₁₂`-type series are half-sums of the `±`
//! products.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::frame::RANK;
use crate::qseries::{Coeff, Exp, PuiseuxSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignTwist {
    Plus,
    Minus,
}

impl SignTwist {
    fn factor(self, l: i64) -> i64 {
        match self {
            SignTwist::Plus => 1,
            SignTwist::Minus if l.rem_euclid(2) == 0 => 1,
            SignTwist::Minus => -1,
        }
    }
}

impl fmt::Display for SignTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignTwist::Plus => "+",
            SignTwist::Minus => "-",
        })
    }
}

impl FromStr for SignTwist {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "plus" | "Plus" => Ok(SignTwist::Plus),
            "-" | "minus" | "Minus" => Ok(SignTwist::Minus),
            _ => Err(format!("expected + or -, got {s:?}")),
        }
    }
}

/// `λ mod 2`, in `[0, 2)`.  Both `θ⁺` and `θ⁻` have period 2 in `λ`.
fn reduce_mod2(lambda: Exp) -> Exp {
    let two = Exp::from_integer(2);
    lambda - two * (lambda / two).floor()
}

/// Distance from `λ` to the nearest integer.
fn dist_to_z(lambda: Exp) -> Exp {
    let f = lambda - lambda.floor();
    f.min(Exp::one() - f)
}

/// `dist(λ, ℤ)²/2`: every exponent of `θ^±_λ` is at least this.
pub fn line_valuation(lambda: Exp) -> Exp {
    let d = dist_to_z(lambda);
    d * d / Exp::from_integer(2)
}

/// `θ^±_λ` with every exponent below `t`; trusted to `t`.
pub fn theta_line(lambda: Exp, sign: SignTwist, t: Exp) -> PuiseuxSeries {
    let lambda = reduce_mod2(lambda);
    let half = Exp::new(1, 2);
    let exponent = |l: i64| {
        let x = Exp::from_integer(l) + lambda;
        x * x * half
    };
    // The exponent is a convex function of ℓ minimized near ℓ = -round(λ);
    // walk outward in both directions until it reaches t.
    let centre = -(lambda.round().to_integer());
    let mut terms = Vec::new();
    let mut l = centre;
    while exponent(l) < t {
        terms.push((exponent(l), sign.factor(l)));
        l += 1;
    }
    let mut l = centre - 1;
    while exponent(l) < t {
        terms.push((exponent(l), sign.factor(l)));
        l -= 1;
    }
    PuiseuxSeries::from_int_terms(terms, t)
}

/// Check `θ^±_{λ+1} = (±1)·θ^±_λ` termwise below `t`.
pub fn shift_identity_check(lambda: Exp, sign: SignTwist, t: Exp) -> bool {
    let shifted = theta_line(lambda + Exp::one(), sign, t);
    let base = theta_line(lambda, sign, t);
    let expected = match sign {
        SignTwist::Plus => base,
        SignTwist::Minus => base.neg(),
    };
    shifted == expected
}

/// `∏_{i} θ^±_{λ_i}` trusted to `t`.
///
/// Factor `i` is expanded to `t - Σ_{j≠i} v_j`, where `v_j` is the lower
/// bound [`line_valuation`] of factor `j`; that is exactly enough for the
/// product to be complete below `t`.
pub fn theta_product(lambda: &[Exp], sign: SignTwist, t: Exp) -> PuiseuxSeries {
    if sign == SignTwist::Minus && lambda.iter().any(|&l| is_half_odd(l)) {
        // θ⁻_{1/2} vanishes identically, not just to some order.
        return PuiseuxSeries::zero(t);
    }
    let vals: Vec<Exp> = lambda.iter().map(|&l| line_valuation(l)).collect();
    let total: Exp = vals.iter().copied().sum();
    let mut acc = PuiseuxSeries::constant(1);
    for (i, &l) in lambda.iter().enumerate() {
        let ti = t - (total - vals[i]);
        let factor = theta_line(l, sign, ti);
        acc = acc
            .mul(&factor)
            .expect("theta factors are always initialized");
    }
    acc.truncate(t)
}

/// `λ ≡ ½ (mod 1)`.
fn is_half_odd(l: Exp) -> bool {
    (l - l.floor()) == Exp::new(1, 2)
}

/// `Θ^±_{ℤ¹²+λ}`.
pub fn theta_z12(lambda: &[Exp; RANK], sign: SignTwist, t: Exp) -> PuiseuxSeries {
    theta_product(lambda, sign, t)
}

/// `Θ_{D₁₂+λ} = ½(Θ⁺_{ℤ¹²+λ} + Θ⁻_{ℤ¹²+λ})`.  Integrality of the result is
/// asserted: odd-norm vectors cancel in the half-sum.
pub fn theta_d12(lambda: &[Exp; RANK], t: Exp) -> PuiseuxSeries {
    let plus = theta_z12(lambda, SignTwist::Plus, t);
    let minus = theta_z12(lambda, SignTwist::Minus, t);
    let s = plus.add(&minus).scale(&half());
    assert!(
        s.is_integral(),
        "D12 theta series acquired a fractional coefficient"
    );
    s
}

/// `Θ^±_{D₁₂⁺+λ} = Θ_{D₁₂+λ} ± Θ_{D₁₂+ς+λ}`, `ς = (½, …, ½)`.
pub fn theta_d12_plus(lambda: &[Exp; RANK], sign: SignTwist, t: Exp) -> PuiseuxSeries {
    let glue = lambda.map(|l| l + Exp::new(1, 2));
    let a = theta_d12(lambda, t);
    let b = theta_d12(&glue, t);
    match sign {
        SignTwist::Plus => a.add(&b),
        SignTwist::Minus => a.sub(&b),
    }
}

pub(crate) fn half() -> Coeff {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Sum of absolute values of coefficients; handy for smoke tests.
pub fn l1_norm(s: &PuiseuxSeries) -> Coeff {
    s.terms().fold(Coeff::zero(), |acc, (_, c)| acc + c.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exp {
        Exp::new(n, d)
    }

    fn c(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    #[test]
    fn theta_one_vanishes() {
        let s = theta_line(q(1, 2), SignTwist::Minus, q(5, 1));
        assert!(s.is_zero());
    }

    #[test]
    fn jacobi_three_and_four() {
        let t3 = theta_line(q(0, 1), SignTwist::Plus, q(3, 1));
        assert_eq!(t3.to_debug_string(), "0 1\n1/2 2\n2 2\n");
        let t4 = theta_line(q(0, 1), SignTwist::Minus, q(3, 1));
        assert_eq!(t4.to_debug_string(), "0 1\n1/2 -2\n2 2\n");
    }

    #[test]
    fn shift_identities() {
        assert!(shift_identity_check(q(0, 1), SignTwist::Plus, q(5, 1)));
        assert!(shift_identity_check(q(0, 1), SignTwist::Minus, q(5, 1)));
        assert!(shift_identity_check(q(1, 4), SignTwist::Plus, q(5, 1)));
        assert!(shift_identity_check(q(-7, 12), SignTwist::Minus, q(5, 1)));
    }

    #[test]
    fn negative_lambda_reduces() {
        let a = theta_line(q(-1, 3), SignTwist::Minus, q(4, 1));
        let b = theta_line(q(5, 3), SignTwist::Minus, q(4, 1));
        assert_eq!(a, b);
        assert_eq!(a.min_exponent().unwrap(), q(1, 18));
    }

    #[test]
    fn z12_first_shell() {
        let z = [q(0, 1); 12];
        let p = theta_z12(&z, SignTwist::Plus, q(2, 1));
        assert_eq!(p.coefficient(q(0, 1)).unwrap(), c(1));
        assert_eq!(p.coefficient(q(1, 2)).unwrap(), c(24));
        let m = theta_z12(&z, SignTwist::Minus, q(2, 1));
        assert_eq!(m.coefficient(q(1, 2)).unwrap(), c(-24));
    }

    #[test]
    fn d12_roots_and_glue() {
        let z = [q(0, 1); 12];
        let d = theta_d12(&z, q(2, 1));
        assert_eq!(d.coefficient(q(1, 2)).unwrap(), c(0));
        assert_eq!(d.coefficient(q(1, 1)).unwrap(), c(264));
        let plus = theta_d12_plus(&z, SignTwist::Plus, q(2, 1));
        // Norm-3 vectors all come from the glue coset: (±1/2)^12 with an even
        // number of minus signs, 2^11 of them.  D12 itself is even.
        assert_eq!(plus.coefficient(q(3, 2)).unwrap(), c(2048));
        let minus = theta_d12_plus(&z, SignTwist::Minus, q(2, 1));
        assert_eq!(minus.coefficient(q(3, 2)).unwrap(), c(-2048));
    }

    #[test]
    fn half_in_one_slot() {
        let mut l = [q(0, 1); 12];
        l[0] = q(1, 2);
        let d = theta_d12(&l, q(3, 1));
        assert_eq!(d.min_exponent().unwrap(), q(1, 8));
        // Of ℓ₁ ∈ {0, -1}, only ℓ₁ = 0 keeps the coordinate sum even.
        assert_eq!(d.coefficient(q(1, 8)).unwrap(), c(1));
    }

    #[test]
    fn jacobi_quartic() {
        let t = q(6, 1);
        let t3 = theta_line(q(0, 1), SignTwist::Plus, t);
        let t4 = theta_line(q(0, 1), SignTwist::Minus, t);
        let t2 = theta_line(q(1, 2), SignTwist::Plus, t);
        let lhs = t3.pow(4).unwrap();
        let rhs = t2.pow(4).unwrap().add(&t4.pow(4).unwrap());
        assert!(lhs.agrees_with(&rhs));
        assert!(l1_norm(&lhs) > c(100));
        assert!(lhs.coefficient(q(1, 1)).unwrap().is_integer());
    }
}

//! `Z^NS_{Rg}` and `Z^R_{Rg}` for the twisted Ramond sector.
//!
//! With `P^± = ∏ θ^±_{λ_i}` and `H^± = ∏ θ^±_{λ_i + 1/2}`:
//!
//! ```text
//! Z^NS = η^{-12} · ½ (P⁺ − P⁻ + H⁺ − H⁻)
//! Z^R  = η^{-12} · ½ (P⁺ − P⁻ − H⁺ + H⁻)
//! ```
//!
//! The four lift candidates of a class share their first eleven entries, so
//! [`LiftEvaluator`] builds the eleven-fold prefix products once and only
//! multiplies in the last factor per candidate.

use num_traits::Zero;

use crate::frame::{LogEigenvalues, RANK};
use crate::qseries::{eta_inverse_power, Exp, PuiseuxSeries};
use crate::theta::{half, line_valuation, theta_line, SignTwist};

/// Both partition functions for one lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorPartition {
    pub z_ns: PuiseuxSeries,
    pub z_r: PuiseuxSeries,
    pub lift: LogEigenvalues,
}

/// The four theta products for one lift, trusted to `t + 1/2`.
#[derive(Clone, Debug)]
struct ThetaProducts {
    p_plus: PuiseuxSeries,
    p_minus: PuiseuxSeries,
    h_plus: PuiseuxSeries,
    h_minus: PuiseuxSeries,
}

fn half_shift(l: Exp) -> Exp {
    l + Exp::new(1, 2)
}

fn is_half_odd(l: Exp) -> bool {
    (l - l.floor()) == Exp::new(1, 2)
}

/// Partial product over a prefix of the entries, expanded far enough that
/// one more factor of valuation `last_val` still yields a product complete
/// below `t`.
#[derive(Clone, Debug)]
struct Prefix {
    series: PuiseuxSeries,
    valuation: Exp,
    vanishes: bool,
}

impl Prefix {
    fn new(entries: &[Exp], sign: SignTwist, last_val: Exp, t: Exp) -> Prefix {
        let vals: Vec<Exp> = entries.iter().map(|&l| line_valuation(l)).collect();
        let valuation: Exp = vals.iter().copied().sum();
        let vanishes = sign == SignTwist::Minus && entries.iter().any(|&l| is_half_odd(l));
        if vanishes {
            return Prefix {
                series: PuiseuxSeries::zero(t),
                valuation,
                vanishes,
            };
        }
        let mut acc = PuiseuxSeries::constant(1);
        for (i, &l) in entries.iter().enumerate() {
            let ti = t - (valuation - vals[i]) - last_val;
            acc = acc
                .mul(&theta_line(l, sign, ti))
                .expect("theta factors are initialized");
        }
        Prefix {
            series: acc.truncate(t - last_val),
            valuation,
            vanishes,
        }
    }

    fn finish(&self, last: Exp, sign: SignTwist, t: Exp) -> PuiseuxSeries {
        if self.vanishes || (sign == SignTwist::Minus && is_half_odd(last)) {
            return PuiseuxSeries::zero(t);
        }
        let factor = theta_line(last, sign, t - self.valuation);
        self.series
            .mul(&factor)
            .expect("theta factors are initialized")
            .truncate(t)
    }
}

/// Shared work for the four `Spin₂₄` candidates of one Base value.
#[derive(Clone, Debug)]
pub struct LiftEvaluator {
    base: LogEigenvalues,
    t: Exp,
    eta: PuiseuxSeries,
    prefixes: [Prefix; 4],
}

impl LiftEvaluator {
    /// Prepare evaluation at truncation `t` (results trusted below `t`).
    pub fn new(base: &LogEigenvalues, t: Exp) -> Self {
        let tt = t + Exp::new(1, 2);
        let head = &base.entries()[..RANK - 1];
        let shifted: Vec<Exp> = head.iter().map(|&l| half_shift(l)).collect();
        // Every lift variant of the last entry has the same distance to ℤ.
        let last = base.last();
        let v_last = line_valuation(last);
        let v_last_half = line_valuation(half_shift(last));
        let prefixes = [
            Prefix::new(head, SignTwist::Plus, v_last, tt),
            Prefix::new(head, SignTwist::Minus, v_last, tt),
            Prefix::new(&shifted, SignTwist::Plus, v_last_half, tt),
            Prefix::new(&shifted, SignTwist::Minus, v_last_half, tt),
        ];
        LiftEvaluator {
            base: base.clone(),
            t,
            eta: eta_inverse_power(12, t),
            prefixes,
        }
    }

    pub fn truncation(&self) -> Exp {
        self.t
    }

    fn products(&self, last: Exp) -> ThetaProducts {
        let tt = self.t + Exp::new(1, 2);
        let lh = half_shift(last);
        ThetaProducts {
            p_plus: self.prefixes[0].finish(last, SignTwist::Plus, tt),
            p_minus: self.prefixes[1].finish(last, SignTwist::Minus, tt),
            h_plus: self.prefixes[2].finish(lh, SignTwist::Plus, tt),
            h_minus: self.prefixes[3].finish(lh, SignTwist::Minus, tt),
        }
    }

    fn assemble(&self, combo: PuiseuxSeries) -> PuiseuxSeries {
        let combo = combo.scale(&half());
        self.eta
            .mul(&combo)
            .expect("eta and theta series are initialized")
            .truncate(self.t)
    }

    /// Both partition functions for the candidate with the given 12th entry.
    pub fn evaluate_last(&self, last: Exp) -> (PuiseuxSeries, PuiseuxSeries) {
        let p = self.products(last);
        let odd = p.p_plus.sub(&p.p_minus);
        let glue = p.h_plus.sub(&p.h_minus);
        let z_ns = self.assemble(odd.add(&glue));
        let z_r = self.assemble(odd.sub(&glue));
        (z_ns, z_r)
    }

    /// `Z^R` only (cheaper: one η multiplication).
    pub fn z_r_last(&self, last: Exp) -> PuiseuxSeries {
        let p = self.products(last);
        let odd = p.p_plus.sub(&p.p_minus);
        let glue = p.h_plus.sub(&p.h_minus);
        self.assemble(odd.sub(&glue))
    }

    /// Evaluate a lift that agrees with the Base value in its first eleven
    /// entries.
    pub fn evaluate(&self, lift: &LogEigenvalues) -> SectorPartition {
        debug_assert_eq!(
            &lift.entries()[..RANK - 1],
            &self.base.entries()[..RANK - 1],
            "lift does not share the evaluator's prefix"
        );
        let (z_ns, z_r) = self.evaluate_last(lift.last());
        SectorPartition {
            z_ns,
            z_r,
            lift: lift.clone(),
        }
    }

    /// The four candidates in tag order.
    pub fn evaluate_all(&self) -> [SectorPartition; 4] {
        self.base.spin_lifts().map(|l| self.evaluate(&l))
    }
}

/// `Z^R_{Rg}` for an arbitrary 12-entry lift, trusted below `t`.
pub fn z_r_rg(lift: &LogEigenvalues, t: Exp) -> PuiseuxSeries {
    LiftEvaluator::new(lift, t).z_r_last(lift.last())
}

/// `Z^NS_{Rg}` for an arbitrary 12-entry lift, trusted below `t`.
pub fn z_ns_rg(lift: &LogEigenvalues, t: Exp) -> PuiseuxSeries {
    LiftEvaluator::new(lift, t).evaluate_last(lift.last()).0
}

/// Does `z_r` vanish at every exponent other than 0 below its bound?
pub fn is_constant_series(z: &PuiseuxSeries) -> bool {
    z.terms().all(|(e, _)| e.is_zero())
}

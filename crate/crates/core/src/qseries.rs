//! Exact truncated Puiseux series in `q`.
//!
//! A [`PuiseuxSeries`] is a finite set of terms `c·q^e` with rational `e` and
//! arbitrary-precision rational `c`, together with a bound below which the
//! stored terms are known to be *complete*.  Everything at or above the bound
//! is unknown, and every operation propagates the bound conservatively.
//!
//! Internally the exponents sit on a grid `k/den` with a per-series common
//! denominator, which keeps the hot multiplication loop in integer land.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exponent type. Small exact rationals are plenty: denominators never grow
/// past `2·o(g)²` for the element orders that occur.
pub type Exp = Rational64;

/// Coefficient type.
pub type Coeff = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("exponent {exponent} is not below the trusted bound {bound}")]
    Untrusted { exponent: Exp, bound: Bound },
    #[error("the series has no terms")]
    Empty,
    #[error("operand is uninitialized (empty with trusted bound -inf)")]
    Uninitialized,
}

/// Truncation bound: coefficients at exponents strictly below it are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(Exp),
    PosInf,
}

impl Bound {
    /// Is `e` strictly below the bound?
    pub fn admits(self, e: Exp) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Finite(t) => e < t,
            Bound::PosInf => true,
        }
    }

    pub fn finite(self) -> Option<Exp> {
        match self {
            Bound::Finite(t) => Some(t),
            _ => None,
        }
    }
}

impl From<Exp> for Bound {
    fn from(t: Exp) -> Self {
        Bound::Finite(t)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(t) => write!(f, "{t}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    /// Common exponent denominator, always positive and kept minimal.
    den: i64,
    /// Exponent numerator (over `den`) -> nonzero coefficient.
    terms: BTreeMap<i64, Coeff>,
    trusted: Bound,
}

impl PuiseuxSeries {
    /// The empty series trusted up to `trusted`.
    pub fn zero(trusted: impl Into<Bound>) -> Self {
        PuiseuxSeries {
            den: 1,
            terms: BTreeMap::new(),
            trusted: trusted.into(),
        }
    }

    /// An empty series that has never been computed.  Multiplying it is an error.
    pub fn uninitialized() -> Self {
        Self::zero(Bound::NegInf)
    }

    /// `c·q^e`, exact.
    pub fn monomial(e: Exp, c: Coeff) -> Self {
        Self::from_terms([(e, c)], Bound::PosInf)
    }

    /// The exact constant `c`.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Exp::zero(), BigRational::from_integer(c.into()))
    }

    /// Build from `(exponent, coefficient)` pairs.  Repeated exponents are
    /// summed, zero coefficients dropped, and terms at or beyond `trusted`
    /// discarded.
    pub fn from_terms<I>(terms: I, trusted: impl Into<Bound>) -> Self
    where
        I: IntoIterator<Item = (Exp, Coeff)>,
    {
        let trusted = trusted.into();
        let terms: Vec<(Exp, Coeff)> = terms
            .into_iter()
            .filter(|(e, _)| trusted.admits(*e))
            .collect();
        let den = terms.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom()));
        let mut map: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (e, c) in terms {
            let k = e.numer() * (den / e.denom());
            *map.entry(k).or_insert_with(Coeff::zero) += c;
        }
        let mut s = PuiseuxSeries {
            den,
            terms: map,
            trusted,
        };
        s.normalize();
        s
    }

    /// Convenience for tests and examples: integer coefficients.
    pub fn from_int_terms<I>(terms: I, trusted: impl Into<Bound>) -> Self
    where
        I: IntoIterator<Item = (Exp, i64)>,
    {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(c.into()))),
            trusted,
        )
    }

    pub fn trusted_up_to(&self) -> Bound {
        self.trusted
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common exponent denominator of the stored terms (1 when empty).
    pub fn exponent_denominator(&self) -> i64 {
        self.den
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exp, &Coeff)> + '_ {
        let den = self.den;
        self.terms.iter().map(move |(&k, c)| (Exp::new(k, den), c))
    }

    pub fn coefficient(&self, e: Exp) -> Result<Coeff, SeriesError> {
        if !self.trusted.admits(e) {
            return Err(SeriesError::Untrusted {
                exponent: e,
                bound: self.trusted,
            });
        }
        if self.den % e.denom() != 0 {
            return Ok(Coeff::zero());
        }
        let k = e.numer() * (self.den / e.denom());
        Ok(self.terms.get(&k).cloned().unwrap_or_else(Coeff::zero))
    }

    pub fn min_exponent(&self) -> Result<Exp, SeriesError> {
        self.terms
            .keys()
            .next()
            .map(|&k| Exp::new(k, self.den))
            .ok_or(SeriesError::Empty)
    }

    /// A lower bound for the exponent of every term, known or unknown: the
    /// smallest stored exponent, or the trusted bound for an empty series.
    fn valuation(&self) -> Bound {
        match self.terms.keys().next() {
            Some(&k) => Bound::Finite(Exp::new(k, self.den)),
            None => self.trusted,
        }
    }

    /// Drop everything at or above `t` and lower the trusted bound to `t`
    /// (never raises it).
    pub fn truncate(&self, t: impl Into<Bound>) -> Self {
        let t = t.into().min(self.trusted);
        let den = self.den;
        let terms = self
            .terms
            .iter()
            .filter(|(&k, _)| t.admits(Exp::new(k, den)))
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        let mut s = PuiseuxSeries {
            den,
            terms,
            trusted: t,
        };
        s.normalize();
        s
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.trusted);
        }
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
            trusted: self.trusted,
        }
    }

    /// True when every stored coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// True when the series equals the constant `c` below its trusted bound.
    pub fn is_constant(&self, c: &BigInt) -> bool {
        if c.is_zero() {
            return self.terms.is_empty();
        }
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .is_some_and(|v| v.is_integer() && v.numer() == c)
    }

    /// Termwise equality below the smaller of the two trusted bounds.
    pub fn agrees_with(&self, other: &PuiseuxSeries) -> bool {
        let t = self.trusted.min(other.trusted);
        self.truncate(t).terms_eq(&other.truncate(t))
    }

    fn terms_eq(&self, other: &PuiseuxSeries) -> bool {
        self.den == other.den && self.terms == other.terms
    }

    /// Sorted `"exponent coefficient"` lines, exponents as reduced fractions.
    pub fn to_debug_string(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            out.push_str(&format!("{} {}\n", fmt_rational64(e), c));
        }
        out
    }

    fn regrid(&self, den: i64) -> BTreeMap<i64, Coeff> {
        let f = den / self.den;
        self.terms
            .iter()
            .map(|(&k, c)| (k * f, c.clone()))
            .collect()
    }

    /// Shrink `den` to the smallest denominator that still puts every
    /// exponent on the grid, and drop zero coefficients.
    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let g = self.terms.keys().fold(self.den, |g, &k| g.gcd(&k));
        if g > 1 {
            self.den /= g;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
        }
        if self.terms.is_empty() {
            self.den = 1;
        }
    }

    pub fn add(&self, other: &PuiseuxSeries) -> Self {
        let den = self.den.lcm(&other.den);
        let trusted = self.trusted.min(other.trusted);
        let mut terms = self.regrid(den);
        for (k, c) in other.regrid(den) {
            *terms.entry(k).or_insert_with(Coeff::zero) += c;
        }
        terms.retain(|&k, _| trusted.admits(Exp::new(k, den)));
        let mut s = PuiseuxSeries {
            den,
            terms,
            trusted,
        };
        s.normalize();
        s
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
            trusted: self.trusted,
        }
    }

    /// Cauchy product.  The result is trusted up to
    /// `min(a.T + v(b), b.T + v(a))` where `v` is the lowest exponent
    /// (or the trusted bound, for an empty operand).
    pub fn mul(&self, other: &PuiseuxSeries) -> Result<Self, SeriesError> {
        if (self.is_empty() && self.trusted == Bound::NegInf)
            || (other.is_empty() && other.trusted == Bound::NegInf)
        {
            return Err(SeriesError::Uninitialized);
        }
        let trusted = product_bound(self, other);
        let den = self.den.lcm(&other.den);
        if self.is_empty() || other.is_empty() {
            return Ok(Self::zero(trusted));
        }
        let a = self.regrid(den);
        let b = other.regrid(den);
        // Largest admissible numerator on the `den` grid, if the bound is finite.
        let limit = trusted.finite().map(|t| ceil_on_grid(t, den));
        let terms = match mul_small(&a, &b, limit) {
            Some(t) => t,
            None => mul_big(&a, &b, limit),
        };
        let mut s = PuiseuxSeries {
            den,
            terms,
            trusted,
        };
        s.normalize();
        Ok(s)
    }

    /// `a^n` by repeated squaring; `a^0` is the exact constant 1.
    pub fn pow(&self, n: u32) -> Result<Self, SeriesError> {
        let mut result = Self::constant(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }
}

fn product_bound(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Bound {
    let lhs = bound_sum(a.trusted, b.valuation());
    let rhs = bound_sum(b.trusted, a.valuation());
    lhs.min(rhs)
}

fn bound_sum(x: Bound, y: Bound) -> Bound {
    match (x, y) {
        (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
        (Bound::PosInf, _) | (_, Bound::PosInf) => Bound::PosInf,
        (Bound::Finite(p), Bound::Finite(q)) => Bound::Finite(p + q),
    }
}

/// Smallest numerator `k` with `k/den >= t`; exponents with numerator `< k`
/// are admissible.
fn ceil_on_grid(t: Exp, den: i64) -> i64 {
    let num = t.numer() * den;
    Integer::div_ceil(&num, t.denom())
}

/// Integer fast path: all coefficients are integers that fit in `i64` and the
/// accumulated sums provably fit in `i128`.
fn mul_small(
    a: &BTreeMap<i64, Coeff>,
    b: &BTreeMap<i64, Coeff>,
    limit: Option<i64>,
) -> Option<BTreeMap<i64, Coeff>> {
    let to_small = |m: &BTreeMap<i64, Coeff>| -> Option<Vec<(i64, i64)>> {
        m.iter()
            .map(|(&k, c)| {
                if c.is_integer() {
                    c.numer().to_i64().map(|v| (k, v))
                } else {
                    None
                }
            })
            .collect()
    };
    let av = to_small(a)?;
    let bv = to_small(b)?;
    let max_a = av.iter().map(|&(_, c)| c.unsigned_abs() as u128).max()?;
    let max_b = bv.iter().map(|&(_, c)| c.unsigned_abs() as u128).max()?;
    let n = av.len().min(bv.len()) as u128;
    let worst = max_a.checked_mul(max_b)?.checked_mul(n)?;
    if worst > i128::MAX as u128 {
        return None;
    }
    let mut acc: HashMap<i64, i128> = HashMap::new();
    for &(ka, ca) in &av {
        for &(kb, cb) in &bv {
            let k = ka + kb;
            if limit.is_some_and(|l| k >= l) {
                break;
            }
            *acc.entry(k).or_insert(0) += ca as i128 * cb as i128;
        }
    }
    Some(
        acc.into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(k, c)| (k, BigRational::from_integer(BigInt::from(c))))
            .collect(),
    )
}

fn mul_big(
    a: &BTreeMap<i64, Coeff>,
    b: &BTreeMap<i64, Coeff>,
    limit: Option<i64>,
) -> BTreeMap<i64, Coeff> {
    let mut acc: BTreeMap<i64, Coeff> = BTreeMap::new();
    for (&ka, ca) in a {
        for (&kb, cb) in b {
            let k = ka + kb;
            if limit.is_some_and(|l| k >= l) {
                break;
            }
            *acc.entry(k).or_insert_with(Coeff::zero) += ca * cb;
        }
    }
    acc
}

impl PartialEq for PuiseuxSeries {
    /// Structural equality: same terms and same trusted bound.
    fn eq(&self, other: &Self) -> bool {
        self.trusted == other.trusted && self.terms_eq(other)
    }
}

impl Eq for PuiseuxSeries {}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::add(self, rhs)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::sub(self, rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(self)
    }
}

/// Panics on an uninitialized operand; use [`PuiseuxSeries::mul`] to handle that case.
impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::mul(self, rhs).expect("multiplication of an uninitialized series")
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                f.write_str("q")?;
            } else if e.is_integer() && !e.is_negative() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        match self.trusted {
            Bound::PosInf => Ok(()),
            t => write!(f, " + O(q^{})", fmt_bound_exp(t)),
        }
    }
}

fn fmt_bound_exp(t: Bound) -> String {
    match t {
        Bound::Finite(e) if e.is_integer() && !e.is_negative() => format!("{e}"),
        Bound::Finite(e) => format!("({e})"),
        other => format!("{other}"),
    }
}

/// Render an exponent as `a/b` (or `a` when integral).
pub fn fmt_rational64(e: Exp) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Parse `a`, `-a` or `a/b` into an exact rational.
pub fn parse_rational64(s: &str) -> Option<Exp> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if d == 0 {
        return None;
    }
    Some(Exp::new(n, d))
}

/// `η^{-r}` expanded exactly below `t`:
/// `q^{-r/24} ∏_{n≥1} (1 - q^n)^{-r}`.
pub fn eta_inverse_power(r: u32, t: Exp) -> PuiseuxSeries {
    let shift = Exp::new(-(r as i64), 24);
    // Need every integer k with k + shift < t.
    let span = t - shift;
    let kmax = (span.numer().div_ceil(span.denom()) - 1).max(-1);
    if kmax < 0 {
        return PuiseuxSeries::zero(t);
    }
    let kmax = kmax as usize;
    let mut c = vec![BigInt::zero(); kmax + 1];
    c[0] = BigInt::one();
    // Multiplying by 1/(1 - q^n) is a running prefix sum with stride n.
    for n in 1..=kmax {
        for _ in 0..r {
            for k in n..=kmax {
                let prev = c[k - n].clone();
                c[k] += prev;
            }
        }
    }
    PuiseuxSeries::from_terms(
        c.into_iter().enumerate().map(|(k, v)| {
            (
                Exp::from_integer(k as i64) + shift,
                BigRational::from_integer(v),
            )
        }),
        t,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exp {
        Exp::new(n, d)
    }

    #[test]
    fn add_cancels_and_keeps_min_bound() {
        let a = PuiseuxSeries::from_int_terms([(q(0, 1), 1), (q(1, 1), 1)], q(3, 1));
        let b = PuiseuxSeries::from_int_terms([(q(1, 1), -1), (q(2, 1), 1)], q(3, 1));
        let s = a.add(&b);
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(q(1, 1)).unwrap(), Coeff::zero());
        assert_eq!(s.trusted_up_to(), Bound::Finite(q(3, 1)));
    }

    #[test]
    fn mul_of_inverse_monomials_is_one() {
        let a = PuiseuxSeries::monomial(q(-1, 24), Coeff::one());
        let b = PuiseuxSeries::monomial(q(1, 24), Coeff::one());
        let p = a.mul(&b).unwrap();
        assert!(p.is_constant(&BigInt::one()));
        assert_eq!(p.exponent_denominator(), 1);
    }

    #[test]
    fn mul_bound_follows_contract() {
        let a = PuiseuxSeries::from_int_terms([(q(1, 2), 1), (q(1, 1), 2)], q(2, 1));
        let b = PuiseuxSeries::from_int_terms([(q(-1, 3), 1)], q(1, 1));
        let p = a.mul(&b).unwrap();
        // min(2 + (-1/3), 1 + 1/2) = 3/2
        assert_eq!(p.trusted_up_to(), Bound::Finite(q(3, 2)));
        assert_eq!(p.coefficient(q(1, 6)).unwrap(), Coeff::one());
        assert_eq!(
            p.coefficient(q(2, 3)).unwrap(),
            Coeff::from_integer(2.into())
        );
    }

    #[test]
    fn empty_operand_still_bounds_the_product() {
        let z = PuiseuxSeries::zero(q(3, 1));
        let a = PuiseuxSeries::from_int_terms([(q(1, 1), 1)], q(2, 1));
        let p = z.mul(&a).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.trusted_up_to(), Bound::Finite(q(4, 1)));
        assert_eq!(
            PuiseuxSeries::uninitialized().mul(&a),
            Err(SeriesError::Uninitialized)
        );
    }

    #[test]
    fn untrusted_query_is_an_error() {
        let a = PuiseuxSeries::from_int_terms([(q(0, 1), 1), (q(1, 1), 2)], q(2, 1));
        assert_eq!(
            a.coefficient(q(1, 1)).unwrap(),
            Coeff::from_integer(2.into())
        );
        assert_eq!(a.coefficient(q(1, 2)).unwrap(), Coeff::zero());
        assert!(matches!(
            a.coefficient(q(2, 1)),
            Err(SeriesError::Untrusted { .. })
        ));
        assert_eq!(
            PuiseuxSeries::zero(q(1, 1)).min_exponent(),
            Err(SeriesError::Empty)
        );
    }

    #[test]
    fn big_path_matches_small_path() {
        let huge = BigRational::from_integer(BigInt::from(i64::MAX) * 4);
        let a = PuiseuxSeries::from_terms(
            [(q(0, 1), huge.clone()), (q(1, 1), Coeff::one())],
            Bound::PosInf,
        );
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coefficient(q(0, 1)).unwrap(), &huge * &huge);
        assert_eq!(
            p.coefficient(q(1, 1)).unwrap(),
            &huge * Coeff::from_integer(2.into())
        );
    }

    #[test]
    fn eta_inverse_leading_terms() {
        let e = eta_inverse_power(12, q(1, 1));
        assert_eq!(e.min_exponent().unwrap(), q(-1, 2));
        assert_eq!(e.coefficient(q(-1, 2)).unwrap(), Coeff::one());
        assert_eq!(
            e.coefficient(q(1, 2)).unwrap(),
            Coeff::from_integer(12.into())
        );
    }

    #[test]
    fn display_and_debug_forms() {
        let a =
            PuiseuxSeries::from_int_terms([(q(-1, 2), 1), (q(0, 1), -2), (q(3, 1), 5)], q(4, 1));
        assert_eq!(a.to_string(), "q^(-1/2) - 2 + 5*q^3 + O(q^4)");
        assert_eq!(a.to_debug_string(), "-1/2 1\n0 -2\n3 5\n");
        assert_eq!(parse_rational64("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational64("1/0"), None);
    }
}

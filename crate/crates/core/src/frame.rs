//! Frame shapes `∏ d^{k_d}` and the data derived from them.
//!
//! A Frame shape encodes the characteristic polynomial `∏ (1 - x^d)^{k_d}` of
//! a finite-order element of `O₂₄(ℚ)`.  From it we read off the trace, the
//! twelve log-eigenvalues `λ ∈ [0, ½]`, and the four `Spin₂₄` lift candidates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::qseries::{fmt_rational64, Exp};

pub const DIMENSION: i64 = 24;
pub const RANK: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("malformed token {token:?}")]
    Syntax { token: String },
    #[error("empty Frame shape")]
    Empty,
    #[error("cycle length {d} appears more than once")]
    DuplicateCycle { d: u32 },
    #[error("exponent of cycle length {d} is zero")]
    ZeroExponent { d: u32 },
    #[error("degree is {degree}, expected 24 (sum of d*k_d)")]
    Degree { degree: i64 },
    #[error("log-eigenvalue {value} has negative multiplicity {multiplicity}")]
    NegativeMultiplicity { value: Exp, multiplicity: i64 },
    #[error("eigenvalue multiset is not closed under x -> -x at {value}")]
    Asymmetric { value: Exp },
    #[error("self-paired log-eigenvalue {value} has odd multiplicity {multiplicity}")]
    OddFixedMultiplicity { value: Exp, multiplicity: i64 },
    #[error("characteristic polynomial is not divisible by (1 - x^{d})")]
    InexactDivision { d: u32 },
}

/// A Frame shape, stored as cycle length -> nonzero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameShape {
    factors: BTreeMap<u32, i32>,
}

impl FrameShape {
    /// Parse and validate (degree 24, nonnegative eigenvalue multiplicities).
    pub fn parse(text: &str) -> Result<Self, FrameError> {
        let f = Self::parse_unchecked(text)?;
        f.validate()?;
        Ok(f)
    }

    /// Grammar-only parse: no degree or multiset checks.
    pub fn parse_unchecked(text: &str) -> Result<Self, FrameError> {
        let mut factors = BTreeMap::new();
        for token in text.split_whitespace() {
            let syntax = || FrameError::Syntax {
                token: token.to_string(),
            };
            let (d, k) = match token.split_once('^') {
                Some((d, k)) => (d, k),
                None => (token, "1"),
            };
            if !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return Err(syntax());
            }
            let k_ok = {
                let digits = k.strip_prefix('-').unwrap_or(k);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            };
            if !k_ok {
                return Err(syntax());
            }
            let d: u32 = d.parse().map_err(|_| syntax())?;
            let k: i32 = k.parse().map_err(|_| syntax())?;
            if d == 0 {
                return Err(syntax());
            }
            if k == 0 {
                return Err(FrameError::ZeroExponent { d });
            }
            if factors.insert(d, k).is_some() {
                return Err(FrameError::DuplicateCycle { d });
            }
        }
        if factors.is_empty() {
            return Err(FrameError::Empty);
        }
        Ok(FrameShape { factors })
    }

    /// Build directly from `(d, k_d)` pairs, validating as [`FrameShape::parse`] does.
    pub fn from_factors<I: IntoIterator<Item = (u32, i32)>>(pairs: I) -> Result<Self, FrameError> {
        let mut factors = BTreeMap::new();
        for (d, k) in pairs {
            if d == 0 {
                return Err(FrameError::Syntax {
                    token: format!("{d}^{k}"),
                });
            }
            if k == 0 {
                return Err(FrameError::ZeroExponent { d });
            }
            if factors.insert(d, k).is_some() {
                return Err(FrameError::DuplicateCycle { d });
            }
        }
        if factors.is_empty() {
            return Err(FrameError::Empty);
        }
        let f = FrameShape { factors };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), FrameError> {
        let degree = self.degree();
        if degree != DIMENSION {
            return Err(FrameError::Degree { degree });
        }
        self.eigenvalue_multiset().map(|_| ())
    }

    pub fn factors(&self) -> &BTreeMap<u32, i32> {
        &self.factors
    }

    /// `k_d`, zero when `d` does not occur.
    pub fn exponent(&self, d: u32) -> i32 {
        self.factors.get(&d).copied().unwrap_or(0)
    }

    /// `Σ d·k_d`.
    pub fn degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|(&d, &k)| d as i64 * k as i64)
            .sum()
    }

    /// Order of the element: the lcm of the eigenvalue orders.
    pub fn order(&self) -> u64 {
        match self.eigenvalue_multiset() {
            Ok(m) => m.keys().fold(1u64, |acc, v| acc.lcm(&(*v.denom() as u64))),
            Err(_) => self
                .factors
                .keys()
                .fold(1u64, |acc, &d| acc.lcm(&(d as u64))),
        }
    }

    /// `tr(g) = k₁`.
    pub fn trace_k1(&self) -> i64 {
        self.exponent(1) as i64
    }

    /// `∏ (1 - x^d)^{k_d}` as coefficients of `x^0 ..= x^24`.
    pub fn char_poly(&self) -> Result<Vec<BigInt>, FrameError> {
        let mut p = vec![BigInt::one()];
        for (&d, &k) in &self.factors {
            if k > 0 {
                for _ in 0..k {
                    p = mul_one_minus_xd(&p, d as usize);
                }
            }
        }
        for (&d, &k) in &self.factors {
            if k < 0 {
                for _ in 0..(-k) {
                    p = div_one_minus_xd(&p, d as usize)
                        .ok_or(FrameError::InexactDivision { d })?;
                }
            }
        }
        Ok(p)
    }

    /// The signed multiset of log-eigenvalues in `[0, 1)`, checked for
    /// nonnegativity, size 24 and symmetry under `x ↦ -x`.
    pub fn eigenvalue_multiset(&self) -> Result<BTreeMap<Exp, i64>, FrameError> {
        let mut m: BTreeMap<Exp, i64> = BTreeMap::new();
        for (&d, &k) in &self.factors {
            for j in 0..d as i64 {
                *m.entry(Exp::new(j, d as i64)).or_insert(0) += k as i64;
            }
        }
        m.retain(|_, v| *v != 0);
        if let Some((&value, &multiplicity)) = m.iter().find(|(_, &v)| v < 0) {
            return Err(FrameError::NegativeMultiplicity {
                value,
                multiplicity,
            });
        }
        let total: i64 = m.values().sum();
        if total != DIMENSION {
            return Err(FrameError::Degree { degree: total });
        }
        for (&x, &v) in &m {
            let mirror = reduce_unit(-x);
            if m.get(&mirror).copied().unwrap_or(0) != v {
                return Err(FrameError::Asymmetric { value: x });
            }
        }
        Ok(m)
    }

    pub fn log_eigenvalues(&self) -> Result<LogEigenvalues, FrameError> {
        let m = self.eigenvalue_multiset()?;
        let half = Exp::new(1, 2);
        let mut lambda = Vec::with_capacity(RANK);
        for (&x, &v) in &m {
            if x.is_zero() || x == half {
                if v % 2 != 0 {
                    return Err(FrameError::OddFixedMultiplicity {
                        value: x,
                        multiplicity: v,
                    });
                }
                lambda.extend(std::iter::repeat(x).take((v / 2) as usize));
            } else if x < half {
                lambda.extend(std::iter::repeat(x).take(v as usize));
            }
        }
        lambda.sort();
        let lambda: [Exp; RANK] = lambda
            .try_into()
            .map_err(|v: Vec<Exp>| FrameError::Degree {
                degree: 2 * v.len() as i64,
            })?;
        Ok(LogEigenvalues {
            lambda,
            tag: LiftTag::Base,
        })
    }

    /// True iff `k_{N/d} = k_d` for all `d`, for some `N`.
    pub fn is_balanced(&self) -> bool {
        self.balancing_level().is_some()
    }

    /// The smallest `N` witnessing balancedness.  Any witness must equal
    /// `d·d'` for occurring cycle lengths, so the candidates are finite.
    pub fn balancing_level(&self) -> Option<u64> {
        let ds: Vec<u64> = self.factors.keys().map(|&d| d as u64).collect();
        let mut candidates: Vec<u64> = ds
            .iter()
            .flat_map(|a| ds.iter().map(move |b| a * b))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().find(|&n| {
            self.factors
                .iter()
                .all(|(&d, &k)| n % d as u64 == 0 && self.exponent((n / d as u64) as u32) == k)
        })
    }

    /// Frame shape of `-g`: odd cycles `d^k` become `d^{-k} (2d)^k`.
    pub fn negated(&self) -> FrameShape {
        let mut out: BTreeMap<u32, i32> = BTreeMap::new();
        for (&d, &k) in &self.factors {
            if d % 2 == 1 {
                *out.entry(d).or_insert(0) -= k;
                *out.entry(2 * d).or_insert(0) += k;
            } else {
                *out.entry(d).or_insert(0) += k;
            }
        }
        out.retain(|_, k| *k != 0);
        FrameShape { factors: out }
    }
}

fn reduce_unit(x: Exp) -> Exp {
    x - x.floor()
}

fn mul_one_minus_xd(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + d] -= c;
    }
    out
}

/// Exact division by `1 - x^d`; `None` when there is a remainder.
fn div_one_minus_xd(p: &[BigInt], d: usize) -> Option<Vec<BigInt>> {
    if p.len() <= d {
        return if p.iter().all(|c| c.is_zero()) {
            Some(vec![BigInt::zero()])
        } else {
            None
        };
    }
    // p = (1 - x^d) q  =>  q_n = p_n + q_{n-d}
    let qlen = p.len() - d;
    let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
    for n in 0..qlen {
        let mut v = p[n].clone();
        if n >= d {
            v += &q[n - d];
        }
        q.push(v);
    }
    // Remainder check on the top d coefficients.
    for n in qlen..p.len() {
        let mut v = p[n].clone();
        if n >= d {
            v += &q[n - d];
        }
        if !v.is_zero() {
            return None;
        }
    }
    Some(q)
}

impl FromStr for FrameShape {
    type Err = FrameError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameShape::parse(s)
    }
}

/// Canonical text: increasing `d`, `^1` omitted.
impl fmt::Display for FrameShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&d, &k) in &self.factors {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Which of the four `Spin₂₄` candidates a [`LogEigenvalues`] value is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiftTag {
    Base,
    FlipLast,
    ShiftLast,
    FlipShiftLast,
}

impl LiftTag {
    pub const ALL: [LiftTag; 4] = [
        LiftTag::Base,
        LiftTag::FlipLast,
        LiftTag::ShiftLast,
        LiftTag::FlipShiftLast,
    ];

    /// The 12th entry of this variant given the base value `l`.
    pub fn apply(self, l: Exp) -> Exp {
        match self {
            LiftTag::Base => l,
            LiftTag::FlipLast => -l,
            LiftTag::ShiftLast => Exp::one() + l,
            LiftTag::FlipShiftLast => Exp::one() - l,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LiftTag::Base => "Base",
            LiftTag::FlipLast => "FlipLast",
            LiftTag::ShiftLast => "ShiftLast",
            LiftTag::FlipShiftLast => "FlipShiftLast",
        }
    }
}

impl fmt::Display for LiftTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LiftTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LiftTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown lift tag {s:?}"))
    }
}

/// Twelve log-eigenvalues plus the lift they represent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogEigenvalues {
    lambda: [Exp; RANK],
    tag: LiftTag,
}

impl LogEigenvalues {
    /// A Base value from arbitrary entries: each is reduced into `[0, ½]`
    /// (mod 1, up to sign) and the list sorted.
    pub fn base_from(entries: [Exp; RANK]) -> Self {
        let half = Exp::new(1, 2);
        let mut lambda = entries.map(|x| {
            let r = reduce_unit(x);
            if r > half {
                Exp::one() - r
            } else {
                r
            }
        });
        lambda.sort();
        LogEigenvalues {
            lambda,
            tag: LiftTag::Base,
        }
    }

    /// Entries taken as-is, no reduction; for lattice shifts and tests.
    pub fn raw(lambda: [Exp; RANK], tag: LiftTag) -> Self {
        LogEigenvalues { lambda, tag }
    }

    pub fn entries(&self) -> &[Exp; RANK] {
        &self.lambda
    }

    pub fn tag(&self) -> LiftTag {
        self.tag
    }

    pub fn last(&self) -> Exp {
        self.lambda[RANK - 1]
    }

    /// Every entry shifted by `s`.
    pub fn shifted(&self, s: Exp) -> [Exp; RANK] {
        self.lambda.map(|x| x + s)
    }

    /// The four `Spin₂₄` candidates in tag order. Only meaningful on a Base value.
    pub fn spin_lifts(&self) -> [LogEigenvalues; 4] {
        let base_last = self.last();
        LiftTag::ALL.map(|tag| {
            let mut lambda = self.lambda;
            lambda[RANK - 1] = tag.apply(base_last);
            LogEigenvalues { lambda, tag }
        })
    }
}

impl fmt::Display for LogEigenvalues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.lambda.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&fmt_rational64(*x))?;
        }
        write!(f, ") [{}]", self.tag)
    }
}

/// The four lift candidates of a Base value; free-function form.
pub fn spin_lifts(base: &LogEigenvalues) -> [LogEigenvalues; 4] {
    base.spin_lifts()
}

/// Render a polynomial `Σ c_i x^i` compactly, highest degree last.
pub fn fmt_poly(p: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let body = match (i, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "x".to_string(),
            (1, false) => format!("{mag}x"),
            (_, true) => format!("x^{i}"),
            (_, false) => format!("{mag}x^{i}"),
        };
        parts.push((sign, body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (sign, body)) in parts.into_iter().enumerate() {
        if n == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exp {
        Exp::new(n, d)
    }

    #[test]
    fn grammar_accepts_explicit_and_implicit_unit_exponents() {
        let f = FrameShape::parse_unchecked("1^2 2^1 3^1").unwrap();
        assert_eq!(f.factors().len(), 3);
        assert_eq!(f.degree(), 7);
        assert_eq!(
            FrameShape::parse("1^2 2^1 3^1"),
            Err(FrameError::Degree { degree: 7 })
        );
        assert_eq!(FrameShape::parse("1 23").unwrap().to_string(), "1 23");
    }

    #[test]
    fn grammar_rejections() {
        assert!(matches!(
            FrameShape::parse("1^7 2^x"),
            Err(FrameError::Syntax { .. })
        ));
        assert!(matches!(
            FrameShape::parse("0^24"),
            Err(FrameError::Syntax { .. })
        ));
        assert!(matches!(
            FrameShape::parse("^3"),
            Err(FrameError::Syntax { .. })
        ));
        assert!(matches!(
            FrameShape::parse("2^+3"),
            Err(FrameError::Syntax { .. })
        ));
        assert_eq!(
            FrameShape::parse("1^24 1^0"),
            Err(FrameError::ZeroExponent { d: 1 })
        );
        assert_eq!(
            FrameShape::parse("2^6 2^6"),
            Err(FrameError::DuplicateCycle { d: 2 })
        );
        assert_eq!(FrameShape::parse("   "), Err(FrameError::Empty));
    }

    #[test]
    fn negative_multiplicity_is_rejected() {
        // Degree 24, but removes eigenvalue 1/2 without ever adding it.
        assert!(matches!(
            FrameShape::parse("1^26 2^-1"),
            Err(FrameError::NegativeMultiplicity { .. })
        ));
    }

    #[test]
    fn minus_identity() {
        let f = FrameShape::parse("1^-24 2^24").unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.trace_k1(), -24);
        let p = f.char_poly().unwrap();
        for (i, c) in p.iter().enumerate() {
            assert_eq!(*c, num_integer::binomial(BigInt::from(24), BigInt::from(i)));
        }
        assert_eq!(f.log_eigenvalues().unwrap().entries(), &[q(1, 2); 12]);
        assert!(!f.is_balanced());
    }

    #[test]
    fn two_a_eigenvalues() {
        let f = FrameShape::parse("1^8 2^8").unwrap();
        let l = f.log_eigenvalues().unwrap();
        assert_eq!(&l.entries()[..8], &[q(0, 1); 8]);
        assert_eq!(&l.entries()[8..], &[q(1, 2); 4]);
        assert_eq!(f.balancing_level(), Some(2));
    }

    #[test]
    fn lifts_vary_last_entry_only() {
        let l = LogEigenvalues::raw([q(1, 4); 12], LiftTag::Base);
        let lasts: Vec<Exp> = l.spin_lifts().iter().map(|x| x.last()).collect();
        assert_eq!(lasts, vec![q(1, 4), q(-1, 4), q(5, 4), q(3, 4)]);
        let zero = LogEigenvalues::raw([q(0, 1); 12], LiftTag::Base);
        let lasts: Vec<Exp> = zero.spin_lifts().iter().map(|x| x.last()).collect();
        assert_eq!(lasts, vec![q(0, 1), q(0, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn negation_is_an_involution() {
        let f = FrameShape::parse("1^-3 3^9").unwrap();
        let g = f.negated();
        assert_eq!(g.to_string(), "1^3 2^-3 3^-9 6^9");
        assert_eq!(g.negated(), f);
        assert_eq!(g.trace_k1(), 3);
    }

    #[test]
    fn inexact_division_is_detected() {
        assert_eq!(div_one_minus_xd(&[BigInt::one()], 1), None);
        let p = mul_one_minus_xd(&[BigInt::one(), BigInt::from(3)], 2);
        assert_eq!(
            div_one_minus_xd(&p, 2).unwrap(),
            vec![BigInt::one(), BigInt::from(3)]
        );
    }

    #[test]
    fn poly_rendering() {
        let p = FrameShape::parse("1^8 2^8").unwrap().char_poly().unwrap();
        let s = fmt_poly(&p);
        assert!(s.starts_with("1 - 8x + 20x^2"), "{s}");
    }
}

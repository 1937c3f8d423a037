//! The oracle suite behind `conway-ramond selfcheck`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::frame::RANK;
use crate::oracle::{partitions_up_to, theta_by_enumeration, Coset, EnumerationBudget};
use crate::qseries::{eta_inverse_power, Exp};
use crate::theta::{
    shift_identity_check, theta_d12, theta_d12_plus, theta_line, theta_z12, SignTwist,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `η^{-1}` against the partition DP for every exponent below `t`.
pub fn check_eta_partitions(t: i64) -> CheckResult {
    let eta = eta_inverse_power(1, Exp::from_integer(t));
    let p = partitions_up_to(t as usize);
    let shift = Exp::new(-1, 24);
    let mut bad = Vec::new();
    for (n, pn) in p.iter().enumerate() {
        let e = Exp::from_integer(n as i64) + shift;
        let expect = BigRational::from_integer(BigInt::from(pn.clone()));
        match eta.coefficient(e) {
            Ok(c) if c == expect => {}
            Ok(c) => bad.push(format!("n={n}: {c} != {pn}")),
            Err(err) => bad.push(format!("n={n}: {err}")),
        }
    }
    // Nothing may sit off the n - 1/24 grid.
    let off_grid = eta
        .terms()
        .filter(|(e, _)| !(*e - shift).is_integer())
        .count();
    if off_grid > 0 {
        bad.push(format!("{off_grid} off-grid terms"));
    }
    CheckResult::new(
        "eta^-1 vs partitions",
        bad.is_empty(),
        if bad.is_empty() {
            format!("p(0..={t}) agree")
        } else {
            bad.join("; ")
        },
    )
}

/// A random λ with entries `a/d`, `1 ≤ d ≤ max_den`, `a` anywhere in `[-d, 2d]`
/// (so reduction mod 2 and sign handling are exercised).
pub fn random_lambda(rng: &mut impl Rng, max_den: i64) -> [Exp; RANK] {
    std::array::from_fn(|_| {
        let d = rng.gen_range(1..=max_den);
        let a = rng.gen_range(-d..=2 * d);
        Exp::new(a, d)
    })
}

/// Outcome of comparing every theta variant with enumeration at one λ.
pub fn compare_theta_at(lambda: &[Exp; RANK], t: Exp) -> Result<(), String> {
    let budget = EnumerationBudget::new(t);
    let enumerate =
        |coset, sign| theta_by_enumeration(coset, sign, lambda, budget).map_err(|e| e.to_string());
    let cases = [
        (
            "Z12+",
            theta_z12(lambda, SignTwist::Plus, t),
            enumerate(Coset::Z12, SignTwist::Plus)?,
        ),
        (
            "Z12-",
            theta_z12(lambda, SignTwist::Minus, t),
            enumerate(Coset::Z12, SignTwist::Minus)?,
        ),
        (
            "D12",
            theta_d12(lambda, t),
            enumerate(Coset::D12, SignTwist::Plus)?,
        ),
        (
            "D12+ +",
            theta_d12_plus(lambda, SignTwist::Plus, t),
            enumerate(Coset::D12Plus, SignTwist::Plus)?,
        ),
        (
            "D12+ -",
            theta_d12_plus(lambda, SignTwist::Minus, t),
            enumerate(Coset::D12Plus, SignTwist::Minus)?,
        ),
    ];
    for (name, fast, slow) in cases {
        if fast != slow {
            return Err(format!("{name} differs"));
        }
    }
    Ok(())
}

/// Randomized theta-vs-enumeration suite.
pub fn check_theta_oracle(cases: usize, max_den: i64, t: Exp, seed: u64) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut lambdas: Vec<[Exp; RANK]> = vec![[Exp::from_integer(0); RANK]];
    while lambdas.len() < cases {
        lambdas.push(random_lambda(&mut rng, max_den));
    }
    for lambda in &lambdas {
        if let Err(e) = compare_theta_at(lambda, t) {
            let shown: Vec<String> = lambda.iter().map(|x| x.to_string()).collect();
            failures.push(format!("[{}]: {e}", shown.join(",")));
        }
    }
    CheckResult::new(
        "theta vs lattice enumeration",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} random λ (denominators ≤ {max_den}) below q^{t}",
                lambdas.len()
            )
        } else {
            failures.join("; ")
        },
    )
}

/// `θ₃⁴ = θ₂⁴ + θ₄⁴` below `t`.
pub fn check_jacobi(t: Exp) -> CheckResult {
    let t3 = theta_line(Exp::from_integer(0), SignTwist::Plus, t);
    let t4 = theta_line(Exp::from_integer(0), SignTwist::Minus, t);
    let t2 = theta_line(Exp::new(1, 2), SignTwist::Plus, t);
    let pow4 = |s: &crate::qseries::PuiseuxSeries| s.pow(4).expect("initialized");
    let lhs = pow4(&t3);
    let rhs = pow4(&t2).add(&pow4(&t4));
    CheckResult::new(
        "Jacobi quartic identity",
        lhs.agrees_with(&rhs),
        format!("below q^{}", lhs.trusted_up_to().min(rhs.trusted_up_to())),
    )
}

/// `θ^±_{λ+1} = ±θ^±_λ` and `θ^±_{λ+2} = θ^±_λ` over a grid of λ.
pub fn check_shift(t: Exp) -> CheckResult {
    let mut bad = Vec::new();
    for d in 1..=12i64 {
        for a in -d..=2 * d {
            let l = Exp::new(a, d);
            for sign in [SignTwist::Plus, SignTwist::Minus] {
                if !shift_identity_check(l, sign, t) {
                    bad.push(format!("shift by 1 at {l} ({sign})"));
                }
                if theta_line(l + Exp::from_integer(2), sign, t) != theta_line(l, sign, t) {
                    bad.push(format!("period 2 at {l} ({sign})"));
                }
            }
        }
    }
    CheckResult::new(
        "theta shift and period",
        bad.is_empty(),
        if bad.is_empty() {
            "all λ = a/d, d ≤ 12".to_string()
        } else {
            bad.join("; ")
        },
    )
}

/// The whole suite with its default sizes.
pub fn run_default() -> Vec<CheckResult> {
    vec![
        check_eta_partitions(40),
        check_jacobi(Exp::from_integer(12)),
        check_shift(Exp::from_integer(5)),
        check_theta_oracle(50, 12, Exp::from_integer(4), 0x5eed),
    ]
}

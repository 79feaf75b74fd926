//! One-shot invariant suite.

use std::fmt;

use lowdisc::fib::{self, to_positive_rep_traced, value, Rewrite};
use lowdisc::{
    apply_procedure1, apply_procedure2, brute_force_discrepancy, construct_alpha,
    exact_discrepancy, partition, sigma_permutation, zeckendorf, GoldenNumber, GrowthSequence,
    PointSet, Targets,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const REWRITE_LIMIT: u64 = 10_000;
pub const PARTITION_LIMIT: u64 = 10_000;
pub const GOLDEN_INDEX_LIMIT: usize = 30;
pub const SUBSTITUTION_INDEX_LIMIT: usize = 12;
pub const SUBSTITUTION_WINDOW: u64 = 50;
pub const ORACLE_SETS: usize = 1_000;
pub const ORACLE_MAX_POINTS: usize = 50;
pub const CONSTRUCTION_STAGES: u64 = 200;

/// Test-only fault injection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Bump the bottom digit after the rewrites for this `N`.
    pub corrupt_digits_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

fn result(name: &'static str, failure: Option<String>, ok: String) -> SuiteResult {
    match failure {
        None => SuiteResult {
            name,
            passed: true,
            detail: ok,
        },
        Some(detail) => SuiteResult {
            name,
            passed: false,
            detail,
        },
    }
}

/// Replays the traced rewrites from the Zeckendorf digits, checking the value
/// after every step and the final digit bounds.
pub fn rewrite_safety(limit: u64, faults: Faults) -> SuiteResult {
    let failure = (1..=limit).find_map(|n| {
        let (rep, trace) = to_positive_rep_traced(n).ok()?;
        let mut digits = zeckendorf(n).ok()?.digits().to_vec();
        for (step, rw) in trace.iter().enumerate() {
            digits = match *rw {
                Rewrite::Procedure1 { position } => apply_procedure1(&digits, position).ok()?,
                Rewrite::Procedure2 { position } => apply_procedure2(&digits, position).ok()?,
                Rewrite::LeadingPair => {
                    if digits.get(..2) != Some(&[0, 1]) {
                        return Some(format!("N={n}: leading pair missing at step {step}"));
                    }
                    let mut d = digits.clone();
                    d[0] = 2;
                    d[1] = 0;
                    d
                }
            };
            while digits.last() == Some(&0) {
                digits.pop();
            }
            if value(&digits) != u128::from(n) {
                return Some(format!("N={n}: value changed by {rw}"));
            }
        }
        if faults.corrupt_digits_at == Some(n) {
            digits[0] += 1;
        }
        if value(&digits) != u128::from(n) {
            return Some(format!(
                "N={n}: digits {digits:?} encode {}",
                value(&digits)
            ));
        }
        if digits != rep.digits() {
            return Some(format!("N={n}: replay disagrees with {rep}"));
        }
        let bounded =
            digits[0] <= 3 && digits.iter().all(|&d| d >= 1) && digits[1..].iter().all(|&d| d <= 2);
        if !bounded || digits.len() > fib::log_phi_length_bound(n) {
            return Some(format!("N={n}: {rep} violates digit or length bounds"));
        }
        None
    });
    result("rewrite-safety", failure, format!("N <= {limit}"))
}

pub fn partition_coverage(limit: u64) -> SuiteResult {
    let failure = (1..=limit).find_map(|n| match partition(n) {
        Ok(p) if p.verify() => None,
        Ok(_) => Some(format!("N={n}: partition does not tile 1..N")),
        Err(e) => Some(format!("N={n}: {e}")),
    });
    result("partition-coverage", failure, format!("N <= {limit}"))
}

/// `‖φ F_i‖ ≤ 1/F_i` in exact arithmetic.
pub fn golden_inequality(limit: usize) -> SuiteResult {
    let failure = (1..=limit).find_map(|i| {
        let f = BigInt::from(fib::fib(i));
        let gap = GoldenNumber::phi().mul_int(&f).dist_nearest_int();
        let bound = GoldenNumber::from_rational(&BigRational::new(BigInt::one(), f));
        (gap > bound).then(|| format!("i={i}"))
    });
    result("golden-inequality", failure, format!("i <= {limit}"))
}

/// The cyclic rank permutation is a permutation certified within `1/F_i`.
pub fn substitution(index_limit: usize, window: u64) -> SuiteResult {
    let mut checked = 0usize;
    let failure = (1..=index_limit).find_map(|i| {
        let f = fib::fib_u64(i)?;
        (f..=f + window).find_map(|start| {
            checked += 1;
            match sigma_permutation(start, i) {
                Ok(s) if s.is_permutation() => None,
                Ok(_) => Some(format!("i={i} R={start}: not a permutation")),
                Err(e) => Some(format!("i={i} R={start}: {e}")),
            }
        })
    });
    result(
        "substitution",
        failure,
        format!("{checked} windows, i <= {index_limit}"),
    )
}

/// `count` points `p/q` with `q ≤ 64`; duplicates are likely on purpose.
pub fn random_point_set(rng: &mut impl Rng, max_points: usize) -> PointSet {
    let n = rng.gen_range(1..=max_points);
    let points = (0..n)
        .map(|_| {
            let q: i64 = rng.gen_range(1..=64);
            let p: i64 = rng.gen_range(0..q);
            BigRational::new(p.into(), q.into())
        })
        .collect();
    PointSet::new(points).expect("points drawn from [0, 1)")
}

pub fn oracle_equivalence(seed: u64, sets: usize, max_points: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let failure = (0..sets).find_map(|idx| {
        let ps = random_point_set(&mut rng, max_points);
        let fast = exact_discrepancy(&ps).value;
        let slow = brute_force_discrepancy(&ps);
        (fast != slow).then(|| format!("set {idx}: closed form {fast}, brute force {slow}"))
    });
    result(
        "oracle-equivalence",
        failure,
        format!("{sets} sets, seed {seed}"),
    )
}

/// Nested intervals and the per-stage bound for the factorial construction,
/// also against the exact golden targets.
pub fn construction(stages: u64) -> SuiteResult {
    let failure = match construct_alpha(
        GrowthSequence::factorial(),
        Targets::golden(crate::commands::TARGET_DIGITS),
        stages,
        None,
    ) {
        Err(e) => Some(e.to_string()),
        Ok(a) => a
            .verify_nested()
            .and_then(|_| a.verify_inequality())
            .and_then(|_| a.verify_against(lowdisc::frac_phi_k))
            .err()
            .map(|e| e.to_string()),
    };
    result("construction", failure, format!("factorial, K = {stages}"))
}

pub fn run_suite(seed: u64, faults: Faults) -> Vec<SuiteResult> {
    vec![
        rewrite_safety(REWRITE_LIMIT, faults),
        partition_coverage(PARTITION_LIMIT),
        golden_inequality(GOLDEN_INDEX_LIMIT),
        substitution(SUBSTITUTION_INDEX_LIMIT, SUBSTITUTION_WINDOW),
        oracle_equivalence(seed, ORACLE_SETS, ORACLE_MAX_POINTS),
        construction(CONSTRUCTION_STAGES),
    ]
}

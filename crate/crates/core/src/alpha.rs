//! Nested rational intervals pinning down α with `‖α n_k − ξ_k‖ ≤ c/k`.
//!
//! Stage `k` keeps the interval centred at `(ξ̃_k + z_k)/n_k` with half-width
//! `c/(k n_k)`. Moving to stage `k + 1` picks the integer `z_{k+1}` whose
//! interval fits inside the current one; the containment is checked exactly
//! rather than assumed.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal;
use crate::golden::{frac_phi_k, GoldenNumber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaError {
    EmptyPrefix,
    /// `n_k ≥ 1` and strictly increasing failed at `k`.
    NotIncreasing {
        k: u64,
    },
    /// The growth ratios decay like `1/k`, so their infimum is zero.
    Inadmissible {
        prefix_min: BigRational,
        argmin: u64,
    },
    DeclaredKappaTooLarge {
        declared: Box<BigRational>,
        observed: Box<BigRational>,
    },
    NonPositiveKappa,
    NonPositiveConstant,
    /// No interval of the next stage fits inside the current one; `c` is too small.
    NoAdmissibleZ {
        stage: u64,
    },
    /// Exact containment check failed after choosing `z` (an implementation bug).
    NestingViolated {
        stage: u64,
    },
    /// `‖mid · n_k − ξ_k‖ ≤ c/k` failed at `k`.
    InequalityViolated {
        k: u64,
    },
    StageOutOfRange {
        k: u64,
        stage: u64,
    },
}

impl fmt::Display for AlphaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaError::EmptyPrefix => {
                write!(f, "growth check needs a prefix of length at least 1")
            }
            AlphaError::NotIncreasing { k } => {
                write!(
                    f,
                    "sequence is not positive and strictly increasing at k = {k}"
                )
            }
            AlphaError::Inadmissible { prefix_min, argmin } => write!(
                f,
                "growth condition inf n_(k+1)/(k n_k) > 0 fails: ratios decay like 1/k \
                 (prefix minimum {prefix_min} at k = {argmin})"
            ),
            AlphaError::DeclaredKappaTooLarge { declared, observed } => write!(
                f,
                "declared kappa {declared} exceeds the observed prefix minimum {observed}"
            ),
            AlphaError::NonPositiveKappa => write!(f, "kappa must be positive"),
            AlphaError::NonPositiveConstant => write!(f, "the constant c must be positive"),
            AlphaError::NoAdmissibleZ { stage } => {
                write!(
                    f,
                    "no admissible integer z at stage {stage}; c is too small"
                )
            }
            AlphaError::NestingViolated { stage } => {
                write!(
                    f,
                    "stage {stage} interval is not contained in its predecessor"
                )
            }
            AlphaError::InequalityViolated { k } => {
                write!(
                    f,
                    "certified bound ||alpha n_k - xi_k|| <= c/k fails at k = {k}"
                )
            }
            AlphaError::StageOutOfRange { k, stage } => {
                write!(f, "index {k} outside the constructed range (stage {stage})")
            }
        }
    }
}

impl core::error::Error for AlphaError {}

type TermFn = Arc<dyn Fn(u64) -> BigInt + Send + Sync>;

#[derive(Clone)]
enum Generator {
    Factorial,
    SelfPower,
    Geometric(BigInt),
    Custom(TermFn),
}

/// A sequence of positive integers `n_1, n_2, …` and an optional declared lower
/// bound `κ` for `n_{k+1}/(k n_k)`.
#[derive(Clone)]
pub struct GrowthSequence {
    name: String,
    generator: Generator,
    kappa: Option<BigRational>,
}

impl fmt::Debug for GrowthSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowthSequence")
            .field("name", &self.name)
            .field("kappa", &self.kappa)
            .finish_non_exhaustive()
    }
}

impl GrowthSequence {
    /// `n_k = k!`; `(k+1)!/(k·k!) = (k+1)/k`, so κ = 1.
    pub fn factorial() -> Self {
        GrowthSequence {
            name: "factorial".into(),
            generator: Generator::Factorial,
            kappa: Some(BigRational::one()),
        }
    }

    /// `n_k = k^k`; the ratio is `(1 + 1/k)^(k+1) > e`, so κ = 2 is safe.
    pub fn self_power() -> Self {
        GrowthSequence {
            name: "k_pow_k".into(),
            generator: Generator::SelfPower,
            kappa: Some(BigRational::from_integer(2.into())),
        }
    }

    /// `n_k = q^k`. Fails the growth condition for every `q`.
    pub fn geometric(q: u64) -> Self {
        GrowthSequence {
            name: alloc::format!("{q}^k"),
            generator: Generator::Geometric(BigInt::from(q)),
            kappa: None,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        term: impl Fn(u64) -> BigInt + Send + Sync + 'static,
        kappa: Option<BigRational>,
    ) -> Self {
        GrowthSequence {
            name: name.into(),
            generator: Generator::Custom(Arc::new(term)),
            kappa,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_kappa(&self) -> Option<&BigRational> {
        self.kappa.as_ref()
    }

    pub fn with_kappa(mut self, kappa: Option<BigRational>) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn term(&self, k: u64) -> BigInt {
        match &self.generator {
            Generator::Factorial => (1..=k).fold(BigInt::one(), |acc, j| acc * j),
            Generator::SelfPower => num_traits::pow(BigInt::from(k), k as usize),
            Generator::Geometric(q) => num_traits::pow(q.clone(), k as usize),
            Generator::Custom(f) => f(k),
        }
    }

    /// `n_k` given `n_{k-1}`, avoiding recomputation for the built-in sequences.
    fn next_term(&self, prev: Option<&BigInt>, k: u64) -> BigInt {
        match (&self.generator, prev) {
            (Generator::Factorial, Some(p)) => p * k,
            (Generator::Geometric(q), Some(p)) => p * q,
            _ => self.term(k),
        }
    }

    /// `n_1, …, n_count`.
    pub fn terms(&self, count: u64) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::with_capacity(count as usize);
        for k in 1..=count {
            let next = self.next_term(out.last(), k);
            out.push(next);
        }
        out
    }
}

/// Exact summary of `n_{k+1}/(k n_k)` over `1 ≤ k ≤ prefix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub prefix: u64,
    pub prefix_min: BigRational,
    pub argmin: u64,
    pub ratios: Vec<BigRational>,
}

/// Checks the growth condition on the first `prefix` ratios.
///
/// A prefix of at least [`MIN_DECAY_EVIDENCE`] ratios that strictly decrease
/// and satisfy `K·r_K ≤ 2·r_1` is decaying like `1/k` and is rejected as
/// inadmissible.
pub const MIN_DECAY_EVIDENCE: u64 = 4;

pub fn check_growth(seq: &GrowthSequence, prefix: u64) -> Result<GrowthReport, AlphaError> {
    if prefix == 0 {
        return Err(AlphaError::EmptyPrefix);
    }
    let terms = seq.terms(prefix + 1);
    if !terms[0].is_positive() {
        return Err(AlphaError::NotIncreasing { k: 1 });
    }
    if let Some(k) = terms.windows(2).position(|w| w[1] <= w[0]) {
        return Err(AlphaError::NotIncreasing { k: k as u64 + 2 });
    }
    let ratios: Vec<BigRational> = (1..=prefix)
        .map(|k| {
            let i = (k - 1) as usize;
            BigRational::new(terms[i + 1].clone(), &terms[i] * k)
        })
        .collect();
    let (argmin, prefix_min) = ratios
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.cmp(y.1))
        .map(|(i, r)| (i as u64 + 1, r.clone()))
        .expect("nonempty prefix");

    if prefix >= MIN_DECAY_EVIDENCE && ratios.windows(2).all(|w| w[1] < w[0]) {
        let last = &ratios[ratios.len() - 1];
        let scaled_last = last * BigRational::from_integer(prefix.into());
        let twice_first = &ratios[0] * BigRational::from_integer(2.into());
        if scaled_last <= twice_first {
            return Err(AlphaError::Inadmissible { prefix_min, argmin });
        }
    }
    if let Some(declared) = seq.declared_kappa() {
        if *declared > prefix_min {
            return Err(AlphaError::DeclaredKappaTooLarge {
                declared: Box::new(declared.clone()),
                observed: Box::new(prefix_min),
            });
        }
    }
    Ok(GrowthReport {
        prefix,
        prefix_min,
        argmin,
        ratios,
    })
}

/// Constant `c` and starting stage `k₀` for which every nested step succeeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantChoice {
    /// Smallest `c` satisfying `2cκ ≥ 1 + 2c/(k+1)` for all `k ≥ start`.
    pub c_min: BigRational,
    /// `⌈2 c_min⌉`, the value used by default.
    pub c: BigRational,
    pub start: u64,
}

/// A stage-`k` interval has length `2c/(k n_k)`; the next stage's centres are
/// `1/n_{k+1}` apart with half-width `c/((k+1) n_{k+1})`. One fits when
/// `2cκ − 2c/(k+1) ≥ 1`, worst at the first stage `k₀`, which must satisfy
/// `1/(k₀+1) < κ`.
pub fn min_c(kappa: &BigRational) -> Result<ConstantChoice, AlphaError> {
    if !kappa.is_positive() {
        return Err(AlphaError::NonPositiveKappa);
    }
    let start = kappa.recip().floor().to_integer().max(BigInt::one());
    let start_u64 = u64::try_from(&start).map_err(|_| AlphaError::NonPositiveKappa)?;
    let two = BigRational::from_integer(2.into());
    let slack = &two * kappa - &two / BigRational::from_integer(&start + 1u32);
    debug_assert!(slack.is_positive());
    let c_min = slack.recip();
    let c = (&two * &c_min).ceil();
    Ok(ConstantChoice {
        c_min,
        c,
        start: start_u64,
    })
}

type TargetFn = Arc<dyn Fn(u64) -> BigRational + Send + Sync>;

#[derive(Clone)]
enum TargetKind {
    Golden { digits: usize },
    Zero,
    Custom(TargetFn),
}

/// Exact rational targets `ξ̃_k ∈ [0, 1)`.
#[derive(Clone)]
pub struct Targets(TargetKind);

impl fmt::Debug for Targets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            TargetKind::Golden { digits } => write!(f, "Targets::Golden({digits})"),
            TargetKind::Zero => write!(f, "Targets::Zero"),
            TargetKind::Custom(_) => write!(f, "Targets::Custom"),
        }
    }
}

impl Targets {
    /// `{φk}` truncated to `digits` decimal places.
    pub fn golden(digits: usize) -> Self {
        Targets(TargetKind::Golden { digits })
    }

    pub fn zero() -> Self {
        Targets(TargetKind::Zero)
    }

    pub fn from_fn(f: impl Fn(u64) -> BigRational + Send + Sync + 'static) -> Self {
        Targets(TargetKind::Custom(Arc::new(f)))
    }

    pub fn is_golden(&self) -> bool {
        matches!(self.0, TargetKind::Golden { .. })
    }

    /// Largest distance between `ξ̃_k` and the exact target, when known.
    pub fn proxy_error(&self) -> Option<BigRational> {
        match self.0 {
            TargetKind::Golden { digits } => {
                Some(BigRational::new(BigInt::one(), decimal::pow10(digits)))
            }
            TargetKind::Zero => Some(BigRational::zero()),
            TargetKind::Custom(_) => None,
        }
    }

    pub fn at(&self, k: u64) -> BigRational {
        match &self.0 {
            TargetKind::Golden { digits } => {
                let scale = decimal::pow10(*digits);
                let scaled = frac_phi_k(k).mul_int(&scale).floor();
                BigRational::new(scaled, scale)
            }
            TargetKind::Zero => BigRational::zero(),
            TargetKind::Custom(f) => f(k),
        }
    }
}

/// Stage record: the interval `[lo, hi]` chosen at stage `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub k: u64,
    pub z: BigInt,
    pub target: BigRational,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl StageRecord {
    pub fn center(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

/// The current nested interval together with its history.
#[derive(Debug, Clone)]
pub struct AlphaApprox {
    sequence: GrowthSequence,
    targets: Targets,
    c: BigRational,
    start: u64,
    /// `n_1, …, n_stage`
    terms: Vec<BigInt>,
    history: Vec<StageRecord>,
}

/// `‖x‖` for a rational.
fn rational_dist(x: &BigRational) -> BigRational {
    decimal::dist_nearest_int(x)
}

impl AlphaApprox {
    /// Stage `start` interval with `z = 0`.
    pub fn begin(
        sequence: GrowthSequence,
        targets: Targets,
        c: BigRational,
        start: u64,
    ) -> Result<Self, AlphaError> {
        if !c.is_positive() {
            return Err(AlphaError::NonPositiveConstant);
        }
        if start == 0 {
            return Err(AlphaError::StageOutOfRange { k: 0, stage: 0 });
        }
        let terms = sequence.terms(start);
        let n = terms.last().expect("start >= 1").clone();
        let target = targets.at(start);
        let center = &target / BigRational::from_integer(n.clone());
        let half = &c / BigRational::from_integer(n * start);
        let record = StageRecord {
            k: start,
            z: BigInt::zero(),
            target,
            lo: &center - &half,
            hi: &center + &half,
        };
        Ok(AlphaApprox {
            sequence,
            targets,
            c,
            start,
            terms,
            history: alloc::vec![record],
        })
    }

    pub fn stage(&self) -> u64 {
        self.current().k
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn sequence(&self) -> &GrowthSequence {
        &self.sequence
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn history(&self) -> &[StageRecord] {
        &self.history
    }

    fn current(&self) -> &StageRecord {
        self.history.last().expect("history is never empty")
    }

    pub fn lo(&self) -> &BigRational {
        &self.current().lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.current().hi
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    pub fn midpoint(&self) -> BigRational {
        self.current().center()
    }

    pub fn zs(&self) -> impl Iterator<Item = &BigInt> {
        self.history.iter().map(|r| &r.z)
    }

    /// `n_k` for `1 ≤ k ≤ stage`.
    pub fn term(&self, k: u64) -> Option<&BigInt> {
        k.checked_sub(1).and_then(|i| self.terms.get(i as usize))
    }

    pub fn record(&self, k: u64) -> Option<&StageRecord> {
        k.checked_sub(self.start)
            .and_then(|i| self.history.get(i as usize))
    }

    /// Advances one stage, choosing `z` so the new interval sits inside the old one.
    ///
    /// Among admissible `z` the one whose centre is closest to the current centre
    /// wins; ties go to the smaller `z`.
    pub fn refine(mut self) -> Result<Self, AlphaError> {
        let k = self.stage() + 1;
        let n = self.sequence.next_term(self.terms.last(), k);
        let target = self.targets.at(k);
        let n_q = BigRational::from_integer(n.clone());
        let reach = &self.c / BigRational::from_integer(k.into()); // n · half-width
        let current = self.current();

        let z_lo = (&n_q * &current.lo + &reach - &target).ceil().to_integer();
        let z_hi = (&n_q * &current.hi - &reach - &target).floor().to_integer();
        if z_lo > z_hi {
            return Err(AlphaError::NoAdmissibleZ { stage: k });
        }
        let preferred = &n_q * current.center() - &target;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let nearest = (preferred - half).ceil().to_integer();
        let z = nearest.clamp(z_lo, z_hi);

        let center = (&target + BigRational::from_integer(z.clone())) / &n_q;
        let half_width = &reach / &n_q;
        let lo = &center - &half_width;
        let hi = &center + &half_width;
        if lo < current.lo || hi > current.hi {
            return Err(AlphaError::NestingViolated { stage: k });
        }
        self.terms.push(n);
        self.history.push(StageRecord {
            k,
            z,
            target,
            lo,
            hi,
        });
        Ok(self)
    }

    /// Refines until `stage() == target_stage`.
    pub fn refine_to(mut self, target_stage: u64) -> Result<Self, AlphaError> {
        while self.stage() < target_stage {
            self = self.refine()?;
        }
        Ok(self)
    }

    /// Re-checks that every recorded interval contains the next one.
    pub fn verify_nested(&self) -> Result<(), AlphaError> {
        for w in self.history.windows(2) {
            if w[1].lo < w[0].lo || w[1].hi > w[0].hi || w[1].lo >= w[1].hi {
                return Err(AlphaError::NestingViolated { stage: w[1].k });
            }
        }
        Ok(())
    }

    /// Checks `hi − lo = 2c/(k n_k)` at every recorded stage.
    pub fn verify_widths(&self) -> bool {
        self.history.iter().all(|r| {
            let n = self.term(r.k).expect("recorded stage has a term");
            let expected = &self.c * BigRational::new(BigInt::from(2), n * r.k);
            &r.hi - &r.lo == expected
        })
    }

    /// `‖x · n_k − ξ̃_k‖ ≤ c/k` for every recorded stage, for the given point `x`.
    pub fn verify_inequality_at(&self, x: &BigRational) -> Result<(), AlphaError> {
        for r in &self.history {
            let n = BigRational::from_integer(self.term(r.k).expect("term").clone());
            let gap = rational_dist(&(x * n - &r.target));
            if gap > &self.c / BigRational::from_integer(r.k.into()) {
                return Err(AlphaError::InequalityViolated { k: r.k });
            }
        }
        Ok(())
    }

    /// The midpoint form of the certified inequality.
    pub fn verify_inequality(&self) -> Result<(), AlphaError> {
        self.verify_inequality_at(&self.midpoint())
    }

    /// `‖mid · n_k − ξ_k‖ ≤ c/k` against exact targets in Q(√5) (for example
    /// `frac_phi_k`), bypassing the rational proxies.
    pub fn verify_against(&self, exact: impl Fn(u64) -> GoldenNumber) -> Result<(), AlphaError> {
        let mid = self.midpoint();
        for r in &self.history {
            let n = BigRational::from_integer(self.term(r.k).expect("term").clone());
            let gap = (-exact(r.k)).add_rational(&(&mid * n)).dist_nearest_int();
            let bound =
                GoldenNumber::from_rational(&(&self.c / BigRational::from_integer(r.k.into())));
            if gap > bound {
                return Err(AlphaError::InequalityViolated { k: r.k });
            }
        }
        Ok(())
    }

    /// `{mid · n_k}` with the bound `|{α n_k} − value| ≤ n_k (hi − lo)/2` valid
    /// for every α in the current interval, unless the value sits within that
    /// bound of 0 or 1.
    pub fn point(&self, k: u64) -> Result<CertifiedPoint, AlphaError> {
        let n = self
            .term(k)
            .filter(|_| k >= 1)
            .ok_or(AlphaError::StageOutOfRange {
                k,
                stage: self.stage(),
            })?;
        let n_q = BigRational::from_integer(n.clone());
        let value = decimal::fract(&(self.midpoint() * &n_q));
        let error_bound = n_q * self.width() / BigRational::from_integer(2.into());
        let wrap_risk = value <= error_bound || BigRational::one() - &value <= error_bound;
        Ok(CertifiedPoint {
            k,
            value,
            error_bound,
            wrap_risk,
        })
    }

    /// `{mid · n_k}` for `1 ≤ k ≤ count` as integer numerators over the shared
    /// denominator of the midpoint.
    pub fn scaled_points(&self, count: u64) -> Result<(Vec<BigInt>, BigInt), AlphaError> {
        if count > self.stage() {
            return Err(AlphaError::StageOutOfRange {
                k: count,
                stage: self.stage(),
            });
        }
        let mid = self.midpoint();
        let (p, q) = (mid.numer(), mid.denom());
        let numerators = self.terms[..count as usize]
            .iter()
            .map(|n| (p * n).mod_floor(q))
            .collect();
        Ok((numerators, q.clone()))
    }

    /// Number of decimal places on which every point of `[lo, hi]` agrees
    /// (truncated expansions).
    pub fn certified_digits(&self) -> usize {
        let agree = |d: usize| {
            let s = BigRational::from_integer(decimal::pow10(d));
            (self.lo() * &s).floor() == (self.hi() * &s).floor()
        };
        if !agree(0) {
            return 0;
        }
        let mut good = 0usize;
        let mut bad = 1usize;
        while agree(bad) {
            good = bad;
            bad *= 2;
        }
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if agree(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    /// α truncated to its certified digits.
    pub fn certified_decimal(&self) -> String {
        decimal::rational_floor_decimal(self.lo(), self.certified_digits())
    }
}

/// `{mid · n_k}` with a certified error bound for the true α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedPoint {
    pub k: u64,
    pub value: BigRational,
    pub error_bound: BigRational,
    pub wrap_risk: bool,
}

/// Shortest prefix examined by [`construct_alpha`] before building.
pub const GROWTH_PREFIX: u64 = 10;

/// Runs the whole construction: growth check, choice of `c` and `k₀`, then
/// refinement up to `stages`.
pub fn construct_alpha(
    sequence: GrowthSequence,
    targets: Targets,
    stages: u64,
    c_override: Option<BigRational>,
) -> Result<AlphaApprox, AlphaError> {
    let report = check_growth(&sequence, stages.max(GROWTH_PREFIX))?;
    let kappa = sequence
        .declared_kappa()
        .cloned()
        .unwrap_or(report.prefix_min);
    let choice = min_c(&kappa)?;
    let c = c_override.unwrap_or(choice.c);
    if stages < choice.start {
        return Err(AlphaError::StageOutOfRange {
            k: stages,
            stage: choice.start,
        });
    }
    AlphaApprox::begin(sequence, targets, c, choice.start)?.refine_to(stages)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn factorial_growth_prefix() {
        let r = check_growth(&GrowthSequence::factorial(), 10).unwrap();
        assert_eq!(r.prefix_min, q(11, 10));
        assert_eq!(r.argmin, 10);
        assert_eq!(r.ratios[0], q(2, 1));
    }

    #[test]
    fn geometric_growth_rejected() {
        match check_growth(&GrowthSequence::geometric(2), 10) {
            Err(AlphaError::Inadmissible { prefix_min, argmin }) => {
                assert_eq!(prefix_min, q(1, 5));
                assert_eq!(argmin, 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_power_admissible() {
        let r = check_growth(&GrowthSequence::self_power(), 5).unwrap();
        // 6^6 / (5 · 5^5) = 46656 / 15625
        assert_eq!(r.prefix_min, q(46656, 15625));
    }

    #[test]
    fn slow_factorial_variant_admissible() {
        // n_k = k!·2^k: ratio 2(k+1)/k stays above 2
        let seq = GrowthSequence::custom(
            "k!2^k",
            |k| {
                (1..=k).fold(BigInt::one(), |a, j| a * j)
                    * num_traits::pow(BigInt::from(2), k as usize)
            },
            None,
        );
        assert!(check_growth(&seq, 30).is_ok());
    }

    #[test]
    fn declared_kappa_must_not_exceed_prefix() {
        let seq = GrowthSequence::factorial().with_kappa(Some(q(3, 2)));
        assert!(matches!(
            check_growth(&seq, 10),
            Err(AlphaError::DeclaredKappaTooLarge { .. })
        ));
    }

    #[test]
    fn non_increasing_rejected() {
        let seq = GrowthSequence::custom("const", |_| BigInt::from(5), None);
        assert_eq!(
            check_growth(&seq, 3),
            Err(AlphaError::NotIncreasing { k: 2 })
        );
        assert_eq!(
            check_growth(&GrowthSequence::factorial(), 0),
            Err(AlphaError::EmptyPrefix)
        );
    }

    #[test]
    fn constants() {
        let one = min_c(&q(1, 1)).unwrap();
        assert_eq!(
            (one.c_min.clone(), one.c.clone(), one.start),
            (q(1, 1), q(2, 1), 1)
        );
        let two = min_c(&q(2, 1)).unwrap();
        assert_eq!(
            (two.c_min.clone(), two.c.clone(), two.start),
            (q(1, 3), q(1, 1), 1)
        );
        let quarter = min_c(&q(1, 4)).unwrap();
        assert_eq!((quarter.c_min.clone(), quarter.start), (q(10, 1), 4));
        assert_eq!(min_c(&q(0, 1)), Err(AlphaError::NonPositiveKappa));
    }

    #[test]
    fn base_stage_interval() {
        let a = AlphaApprox::begin(GrowthSequence::factorial(), Targets::golden(40), q(2, 1), 1)
            .unwrap();
        let xi = Targets::golden(40).at(1);
        assert_eq!(a.midpoint(), xi);
        assert_eq!(a.width(), q(4, 1));
    }

    #[test]
    fn zero_targets_keep_zero_inside() {
        let a = construct_alpha(GrowthSequence::factorial(), Targets::zero(), 30, None).unwrap();
        for r in a.history() {
            assert!(r.lo <= BigRational::zero() && BigRational::zero() <= r.hi);
            assert!(r.z.is_zero());
        }
    }

    #[test]
    fn refine_nests_and_shrinks() {
        let a = construct_alpha(GrowthSequence::factorial(), Targets::golden(40), 2, None).unwrap();
        let h = a.history();
        assert!(h[1].lo >= h[0].lo && h[1].hi <= h[0].hi);
        assert!(a.verify_widths());
    }

    #[test]
    fn too_small_constant_fails() {
        let err = construct_alpha(
            GrowthSequence::factorial(),
            Targets::golden(40),
            10,
            Some(q(1, 10)),
        )
        .unwrap_err();
        assert!(matches!(err, AlphaError::NoAdmissibleZ { .. }));
    }

    #[test]
    fn point_bound_at_last_stage() {
        let a =
            construct_alpha(GrowthSequence::factorial(), Targets::golden(40), 12, None).unwrap();
        let p = a.point(12).unwrap();
        assert_eq!(p.error_bound, q(2, 12));
        assert!(a.point(13).is_err());
        assert!(a.point(0).is_err());
    }

    #[test]
    fn certified_digits_grow() {
        let a =
            construct_alpha(GrowthSequence::factorial(), Targets::golden(40), 20, None).unwrap();
        let d = a.certified_digits();
        // width 4/(20·20!) ≈ 8.2e-20
        assert!((18..=20).contains(&d), "digits {d}");
        assert!(a.certified_decimal().len() > d);
    }
}

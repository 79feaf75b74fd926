//! Unnormalised discrepancy
//! `D_N = sup_{γ ∈ [0,1)} |Nγ − #{j : x_j ≤ γ}|` of finite point sets.
//!
//! With order statistics `x_(1) ≤ … ≤ x_(N)` the supremum equals
//! `max_i max(i − N x_(i), N x_(i) − (i − 1))`. The first term is attained at
//! `γ = x_(i)` (closed count), the second is the left limit `γ → x_(i)⁻`;
//! ties only produce dominated terms. The closed form is cross-checked against
//! [`brute_force_discrepancy`], which evaluates every candidate threshold
//! directly.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::alpha::{AlphaApprox, AlphaError};
use crate::fib::{self, Block, NumerationError, SegmentPartition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscrepancyError {
    Empty,
    /// Point `index` lies outside `[0, 1)`.
    OutOfRange {
        index: usize,
    },
    /// The requested indices go beyond the constructed stage.
    BeyondStage {
        last: u64,
        stage: u64,
    },
    Alpha(AlphaError),
    Numeration(NumerationError),
}

impl fmt::Display for DiscrepancyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscrepancyError::Empty => write!(f, "point set is empty"),
            DiscrepancyError::OutOfRange { index } => {
                write!(f, "point {index} is outside [0, 1)")
            }
            DiscrepancyError::BeyondStage { last, stage } => {
                write!(f, "index {last} is beyond the constructed stage {stage}")
            }
            DiscrepancyError::Alpha(e) => write!(f, "{e}"),
            DiscrepancyError::Numeration(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DiscrepancyError {}

impl From<AlphaError> for DiscrepancyError {
    fn from(e: AlphaError) -> Self {
        DiscrepancyError::Alpha(e)
    }
}

impl From<NumerationError> for DiscrepancyError {
    fn from(e: NumerationError) -> Self {
        DiscrepancyError::Numeration(e)
    }
}

/// Non-empty multiset of exact rationals in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<BigRational>,
}

impl PointSet {
    pub fn new(points: Vec<BigRational>) -> Result<Self, DiscrepancyError> {
        if points.is_empty() {
            return Err(DiscrepancyError::Empty);
        }
        let one = BigRational::one();
        if let Some(index) = points.iter().position(|p| p.is_negative() || *p >= one) {
            return Err(DiscrepancyError::OutOfRange { index });
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[BigRational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points as integer numerators over a common denominator.
    pub fn to_scaled(&self) -> ScaledPoints {
        let denominator = self
            .points
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let numerators = self
            .points
            .iter()
            .map(|p| p.numer() * (&denominator / p.denom()))
            .collect();
        ScaledPoints {
            numerators,
            denominator,
        }
    }
}

/// Points `u_j / q` with `0 ≤ u_j < q`, sharing one positive denominator `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPoints {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl ScaledPoints {
    /// `count` copies of the point 0.
    pub fn zeros(count: usize) -> Self {
        ScaledPoints {
            numerators: alloc::vec![BigInt::zero(); count],
            denominator: BigInt::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }
}

/// Where the supremum is reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Attained at `γ`.
    At(BigRational),
    /// Approached as `γ` increases to the given value.
    LeftLimit(BigRational),
}

impl Witness {
    pub fn gamma(&self) -> &BigRational {
        match self {
            Witness::At(g) | Witness::LeftLimit(g) => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub value: BigRational,
    pub witness: Witness,
    pub n: usize,
}

impl DiscrepancyReport {
    /// `D_N / N`, for display.
    pub fn normalized(&self) -> BigRational {
        &self.value / BigRational::from_integer(self.n.into())
    }
}

/// Closed form over sorted numerators `u_(1) ≤ … ≤ u_(N)` with denominator `q`.
fn closed_form(sorted: &[BigInt], q: &BigInt) -> DiscrepancyReport {
    let n = BigInt::from(sorted.len());
    let mut best = BigInt::from(-1);
    let mut witness = Witness::At(BigRational::zero());
    for (idx, u) in sorted.iter().enumerate() {
        let i = BigInt::from(idx + 1);
        let nu = &n * u;
        let at = &i * q - &nu;
        let below = nu - (i - 1u32) * q;
        let gamma = || BigRational::new(u.clone(), q.clone());
        if at > best {
            best = at;
            witness = Witness::At(gamma());
        }
        if below > best {
            best = below;
            witness = Witness::LeftLimit(gamma());
        }
    }
    DiscrepancyReport {
        value: BigRational::new(best, q.clone()),
        witness,
        n: sorted.len(),
    }
}

/// `D_N` by the sorted closed form.
pub fn exact_discrepancy(ps: &PointSet) -> DiscrepancyReport {
    scaled_discrepancy(&ps.to_scaled())
}

pub fn scaled_discrepancy(points: &ScaledPoints) -> DiscrepancyReport {
    assert!(!points.is_empty(), "discrepancy of an empty point set");
    let mut sorted = points.numerators.clone();
    sorted.sort();
    closed_form(&sorted, &points.denominator)
}

/// `D_N` by direct evaluation of `|Nγ − count|` at `γ = 0`, at every point,
/// and at the left limit of every positive point (plus `γ → 1⁻`). Quadratic.
pub fn brute_force_discrepancy(ps: &PointSet) -> BigRational {
    let pts = ps.points();
    let n = BigRational::from_integer(pts.len().into());
    let eval = |gamma: &BigRational, count: usize| {
        (&n * gamma - BigRational::from_integer(count.into())).abs()
    };
    let zero = BigRational::zero();
    let mut best = eval(&zero, pts.iter().filter(|x| x.is_zero()).count());
    // γ → 1⁻ counts every point
    best = best.max(eval(&BigRational::one(), pts.len()));
    for gamma in pts {
        let at = pts.iter().filter(|x| *x <= gamma).count();
        best = best.max(eval(gamma, at));
        if gamma.is_positive() {
            let below = pts.iter().filter(|x| *x < gamma).count();
            best = best.max(eval(gamma, below));
        }
    }
    best
}

/// Discrepancy of one partition block, with any wrap-risk indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentReport {
    pub block: Block,
    pub report: DiscrepancyReport,
    /// Indices whose certified error bound reaches 0 or 1.
    pub wrap_risk: Vec<u64>,
}

fn range_report(
    state: &AlphaApprox,
    range: core::ops::RangeInclusive<u64>,
) -> Result<(DiscrepancyReport, Vec<u64>), DiscrepancyError> {
    let (first, last) = (*range.start(), *range.end());
    if first == 0 || first > last {
        return Err(DiscrepancyError::Empty);
    }
    if last > state.stage() {
        return Err(DiscrepancyError::BeyondStage {
            last,
            stage: state.stage(),
        });
    }
    let mut values = Vec::with_capacity((last - first + 1) as usize);
    let mut wrap_risk = Vec::new();
    for k in range {
        let p = state.point(k)?;
        if p.wrap_risk {
            wrap_risk.push(k);
        }
        values.push(p.value);
    }
    let ps = PointSet::new(values)?;
    Ok((exact_discrepancy(&ps), wrap_risk))
}

/// `D` of `{mid · n_k}` for `k` in the block `{R, …, R + F_i − 1}`.
pub fn segment_discrepancy(
    state: &AlphaApprox,
    block: &Block,
) -> Result<SegmentReport, DiscrepancyError> {
    let (report, wrap_risk) = range_report(state, block.range())?;
    Ok(SegmentReport {
        block: *block,
        report,
        wrap_risk,
    })
}

/// Per-piece discrepancies of `{1..N}` split by [`fib::partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub partition: SegmentPartition,
    pub prefix: DiscrepancyReport,
    pub blocks: Vec<SegmentReport>,
    pub total: DiscrepancyReport,
}

impl PartitionReport {
    /// Prefix discrepancy plus every block discrepancy.
    pub fn piece_sum(&self) -> BigRational {
        self.blocks
            .iter()
            .fold(self.prefix.value.clone(), |acc, b| acc + &b.report.value)
    }

    /// `D_total ≤ Σ pieces`; holds because `Nγ − count` is additive over a partition.
    pub fn is_subadditive(&self) -> bool {
        self.total.value <= self.piece_sum()
    }

    /// Largest discrepancy among the blocks (not the prefix).
    pub fn max_block(&self) -> Option<&SegmentReport> {
        self.blocks
            .iter()
            .max_by(|a, b| a.report.value.cmp(&b.report.value))
    }
}

pub fn partition_discrepancy(
    state: &AlphaApprox,
    n: u64,
) -> Result<PartitionReport, DiscrepancyError> {
    let partition = fib::partition(n)?;
    let (prefix, _) = range_report(state, 1..=partition.prefix_len)?;
    let blocks = partition
        .blocks
        .iter()
        .map(|b| segment_discrepancy(state, b))
        .collect::<Result<Vec<_>, _>>()?;
    let (total, _) = range_report(state, 1..=n)?;
    Ok(PartitionReport {
        partition,
        prefix,
        blocks,
        total,
    })
}

/// One row of the growth table.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub n: u64,
    pub discrepancy: BigRational,
    /// `ln N`.
    pub log_n: f64,
    /// `D_N / ln N`; `None` at `N = 1`.
    pub ratio: Option<f64>,
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    const SCALE: u64 = 1 << 52;
    let scaled = (x.numer() * SCALE).div_floor(x.denom());
    scaled.to_f64().unwrap_or(f64::INFINITY) / SCALE as f64
}

/// Exact `D_N` for every prefix `N = 1..=len` of `points`, by incremental
/// sorted insertion.
pub fn dn_series_points(points: &ScaledPoints) -> Vec<SeriesRow> {
    let mut sorted: Vec<BigInt> = Vec::with_capacity(points.len());
    let mut rows = Vec::with_capacity(points.len());
    for (idx, u) in points.numerators.iter().enumerate() {
        let at = sorted.partition_point(|v| v <= u);
        sorted.insert(at, u.clone());
        let report = closed_form(&sorted, &points.denominator);
        let n = idx as u64 + 1;
        let log_n = libm::log(n as f64);
        let ratio = (n > 1).then(|| rational_to_f64(&report.value) / log_n);
        rows.push(SeriesRow {
            n,
            discrepancy: report.value,
            log_n,
            ratio,
        });
    }
    rows
}

/// `D_N` of `{mid · n_k}`, `1 ≤ k ≤ N`, for every `N ≤ n_max`.
pub fn dn_series(state: &AlphaApprox, n_max: u64) -> Result<Vec<SeriesRow>, DiscrepancyError> {
    let (numerators, denominator) =
        state
            .scaled_points(n_max)
            .map_err(|_| DiscrepancyError::BeyondStage {
                last: n_max,
                stage: state.stage(),
            })?;
    Ok(dn_series_points(&ScaledPoints {
        numerators,
        denominator,
    }))
}

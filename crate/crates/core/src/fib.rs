//! Fibonacci numeration with `F_0 = F_1 = 1`, `F_{i+1} = F_i + F_{i-1}`.
//!
//! Digit strings are least-significant first: `digits[0]` is the coefficient
//! of `F_1`, `digits[1]` of `F_2`, and so on. Rewrite positions are 1-based
//! Fibonacci indices, matching that orientation.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::golden::GoldenNumber;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumerationError {
    NonPositive,
    /// The digit string does not show the rewrite pattern at `position`.
    PatternMismatch {
        position: usize,
    },
    /// A digit outside the range allowed for its kind of string.
    InvalidDigit {
        position: usize,
        digit: u8,
    },
}

impl fmt::Display for NumerationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumerationError::NonPositive => write!(f, "expected a positive integer"),
            NumerationError::PatternMismatch { position } => {
                write!(f, "rewrite pattern not present at position {position}")
            }
            NumerationError::InvalidDigit { position, digit } => {
                write!(f, "digit {digit} not allowed at position {position}")
            }
        }
    }
}

impl core::error::Error for NumerationError {}

/// `F_i` in arbitrary precision.
pub fn fib(i: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::one());
    for _ in 1..i {
        let next = &prev + &cur;
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}

/// `F_i` as a machine integer, if it fits.
pub fn fib_u64(i: usize) -> Option<u64> {
    let (mut prev, mut cur) = (1u64, 1u64);
    for _ in 1..i {
        let next = prev.checked_add(cur)?;
        prev = cur;
        cur = next;
    }
    Some(cur)
}

/// `Σ digits[i-1] · F_i`.
pub fn value(digits: &[u8]) -> u128 {
    let (mut prev, mut cur) = (1u128, 1u128); // F_0, F_1
    let mut total = 0u128;
    for &d in digits {
        total += u128::from(d) * cur;
        let next = prev + cur;
        prev = cur;
        cur = next;
    }
    total
}

/// Largest `r` with `r ≤ 1 + log_φ n`, i.e. `φ^(r−1) ≤ n`, decided exactly.
pub fn log_phi_length_bound(n: u64) -> usize {
    assert!(n >= 1, "length bound needs a positive integer");
    let n = BigInt::from(n);
    let phi = GoldenNumber::phi();
    let mut power = GoldenNumber::one();
    let mut r = 1;
    loop {
        power = &power * &phi;
        // power = φ^r; admissible length r + 1 needs φ^r ≤ n
        if power.cmp_integer(&n) == core::cmp::Ordering::Greater {
            return r;
        }
        r += 1;
    }
}

fn count_zeros(digits: &[u8]) -> usize {
    digits.iter().filter(|&&d| d == 0).count()
}

fn strip_high_zeros(digits: &mut Vec<u8>) {
    while digits.last() == Some(&0) {
        digits.pop();
    }
}

/// Zeckendorf digits `a_1..a_t` of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeckDigits(Vec<u8>);

impl ZeckDigits {
    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn value(&self) -> u128 {
        value(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Binary digits most-significant first, e.g. `"101"` for 4.
    pub fn to_binary_string(&self) -> alloc::string::String {
        self.0
            .iter()
            .rev()
            .map(|&d| if d == 1 { '1' } else { '0' })
            .collect()
    }

    /// No two adjacent ones, top digit one, all digits binary.
    pub fn is_valid(&self) -> bool {
        self.0.last() == Some(&1)
            && self.0.iter().all(|&d| d <= 1)
            && self.0.windows(2).all(|w| w[0] + w[1] < 2)
    }
}

/// Positive digits `b_1..b_r` with `b_1 ∈ {1,2,3}` and `b_i ∈ {1,2}` for `i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FibDigits(Vec<u8>);

impl FibDigits {
    pub fn new(digits: Vec<u8>) -> Result<Self, NumerationError> {
        for (i, &d) in digits.iter().enumerate() {
            let max = if i == 0 { 3 } else { 2 };
            if d == 0 || d > max {
                return Err(NumerationError::InvalidDigit {
                    position: i + 1,
                    digit: d,
                });
            }
        }
        if digits.is_empty() {
            return Err(NumerationError::NonPositive);
        }
        Ok(FibDigits(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn value(&self) -> u128 {
        value(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FibDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Greedy Zeckendorf expansion.
pub fn zeckendorf(n: u64) -> Result<ZeckDigits, NumerationError> {
    if n == 0 {
        return Err(NumerationError::NonPositive);
    }
    // F_1, F_2, ... up to the largest not exceeding n
    let mut fibs = alloc::vec![1u64, 2];
    while let Some(next) = fibs[fibs.len() - 1].checked_add(fibs[fibs.len() - 2]) {
        if next > n {
            break;
        }
        fibs.push(next);
    }
    while fibs.last().is_some_and(|&f| f > n) {
        fibs.pop();
    }
    let mut digits = alloc::vec![0u8; fibs.len()];
    let mut rest = n;
    for (i, &f) in fibs.iter().enumerate().rev() {
        if f <= rest {
            digits[i] = 1;
            rest -= f;
        }
    }
    debug_assert_eq!(rest, 0);
    Ok(ZeckDigits(digits))
}

/// Rewrites `0, 0, 1` at positions `position..position+2` into `1, 1, 0`.
///
/// Uses `F_p + F_{p+1} = F_{p+2}`; the number of zeros drops by one.
pub fn apply_procedure1(digits: &[u8], position: usize) -> Result<Vec<u8>, NumerationError> {
    let at = position
        .checked_sub(1)
        .ok_or(NumerationError::PatternMismatch { position })?;
    match digits.get(at..at + 3) {
        Some([0, 0, 1]) => {
            let mut out = digits.to_vec();
            out[at..at + 3].copy_from_slice(&[1, 1, 0]);
            Ok(out)
        }
        _ => Err(NumerationError::PatternMismatch { position }),
    }
}

/// Rewrites `x, 0, y` (with `y ≥ 1`, the zero at `position`) into `x + 1, 1, y − 1`.
///
/// Uses `F_{p−1} + F_p = F_{p+1}`; the zero moves up one place when `y = 1`.
pub fn apply_procedure2(digits: &[u8], position: usize) -> Result<Vec<u8>, NumerationError> {
    let mismatch = NumerationError::PatternMismatch { position };
    let at = position.checked_sub(2).ok_or(mismatch.clone())?;
    match digits.get(at..at + 3) {
        Some(&[x, 0, y]) if y >= 1 && x < u8::MAX => {
            let mut out = digits.to_vec();
            out[at..at + 3].copy_from_slice(&[x + 1, 1, y - 1]);
            Ok(out)
        }
        _ => Err(mismatch),
    }
}

/// One step of the positive-digit algorithm, for tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    Procedure1 {
        position: usize,
    },
    /// `(0, 1)` at the bottom replaced by `(2, 0)`, using `F_2 = 2 F_1`.
    LeadingPair,
    Procedure2 {
        position: usize,
    },
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rewrite::Procedure1 { position } => write!(f, "P1@{position}"),
            Rewrite::LeadingPair => write!(f, "lead"),
            Rewrite::Procedure2 { position } => write!(f, "P2@{position}"),
        }
    }
}

/// Applies Procedure 1 at the leftmost `0, 0, 1` until no two adjacent zeros remain.
fn sweep_procedure1(digits: &mut Vec<u8>, trace: &mut Vec<Rewrite>) {
    while let Some(at) = digits.windows(3).position(|w| w == [0, 0, 1]) {
        let before = count_zeros(digits);
        *digits = apply_procedure1(digits, at + 1).expect("pattern located by scan");
        debug_assert_eq!(count_zeros(digits) + 1, before);
        trace.push(Rewrite::Procedure1 { position: at + 1 });
        strip_high_zeros(digits);
    }
    debug_assert!(digits.windows(2).all(|w| w != [0, 0]));
}

/// Positive-digit representation together with the rewrites that produced it.
pub fn to_positive_rep_traced(n: u64) -> Result<(FibDigits, Vec<Rewrite>), NumerationError> {
    let mut digits = zeckendorf(n)?.0;
    let mut trace = Vec::new();

    sweep_procedure1(&mut digits, &mut trace);

    if digits.first() == Some(&0) {
        // the top digit is 1 and no zeros are adjacent, so digits[1] == 1
        debug_assert_eq!(digits.get(1), Some(&1));
        digits[0] = 2;
        digits[1] = 0;
        trace.push(Rewrite::LeadingPair);
        strip_high_zeros(&mut digits);
        sweep_procedure1(&mut digits, &mut trace);
    }

    // Move the lowest zero upward until it either merges into a pair that
    // Procedure 1 removes or falls off the top.
    while let Some(at) = digits.iter().position(|&d| d == 0) {
        debug_assert!(at >= 1, "bottom digit stays positive");
        digits = apply_procedure2(&digits, at + 1).expect("lowest zero has a nonzero successor");
        trace.push(Rewrite::Procedure2 { position: at + 1 });
        strip_high_zeros(&mut digits);
        sweep_procedure1(&mut digits, &mut trace);
    }

    let rep = FibDigits::new(digits).expect("algorithm keeps digits in range");
    debug_assert_eq!(rep.value(), u128::from(n));
    Ok((rep, trace))
}

pub fn to_positive_rep(n: u64) -> Result<FibDigits, NumerationError> {
    to_positive_rep_traced(n).map(|(rep, _)| rep)
}

/// A run `{start, …, start + F_i − 1}` of consecutive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    /// Fibonacci index `i`; the block has `F_i` elements.
    pub fib_index: usize,
    /// Copy index `j`, `1 ≤ j ≤ b_i`.
    pub copy: u8,
    pub start: u64,
    pub len: u64,
}

impl Block {
    /// Last element (inclusive).
    pub fn end(&self) -> u64 {
        self.start + self.len - 1
    }

    pub fn range(&self) -> core::ops::RangeInclusive<u64> {
        self.start..=self.end()
    }
}

/// `{1..N}` split as a short prefix `{1..p}` followed by Fibonacci-length blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPartition {
    pub n: u64,
    /// The prefix is `{1, …, prefix_len}`, with `prefix_len = b_1 ∈ {1,2,3}`.
    pub prefix_len: u64,
    pub blocks: Vec<Block>,
}

impl SegmentPartition {
    /// Number of distinct Fibonacci indices used by the blocks plus one for the prefix,
    /// i.e. the length `r` of the underlying digit string.
    pub fn digit_count(&self) -> usize {
        self.blocks.last().map_or(1, |b| b.fib_index)
    }

    /// Checks that prefix and blocks tile `{1..N}` in order with `start ≥ F_i`
    /// and at most two blocks per index.
    pub fn verify(&self) -> bool {
        if !(1..=3).contains(&self.prefix_len) || self.prefix_len > self.n {
            return false;
        }
        let mut next = self.prefix_len + 1;
        for (idx, block) in self.blocks.iter().enumerate() {
            let Some(f) = fib_u64(block.fib_index) else {
                return false;
            };
            let same_index = self.blocks[..idx]
                .iter()
                .filter(|b| b.fib_index == block.fib_index)
                .count();
            if block.fib_index < 2
                || block.len != f
                || block.start != next
                || block.start < f
                || same_index >= 2
            {
                return false;
            }
            next += block.len;
        }
        next == self.n + 1
    }
}

/// Corollary-style partition of `{1..N}` from the positive-digit representation,
/// blocks laid out in increasing Fibonacci index.
pub fn partition(n: u64) -> Result<SegmentPartition, NumerationError> {
    let rep = to_positive_rep(n)?;
    let digits = rep.digits();
    let prefix_len = u64::from(digits[0]);
    let mut blocks = Vec::new();
    let mut next = prefix_len + 1;
    let mut f_prev = 1u64;
    let mut f_cur = 2u64; // F_2
    for (i, &b) in digits.iter().enumerate().skip(1) {
        let fib_index = i + 1;
        for copy in 1..=b {
            blocks.push(Block {
                fib_index,
                copy,
                start: next,
                len: f_cur,
            });
            next += f_cur;
        }
        let f_next = f_prev + f_cur;
        f_prev = f_cur;
        f_cur = f_next;
    }
    debug_assert_eq!(next, n + 1);
    Ok(SegmentPartition {
        n,
        prefix_len,
        blocks,
    })
}

/// `Σ digits · F_i` in arbitrary precision, for digit strings too long for `u128`.
pub fn big_value(digits: &[u8]) -> BigUint {
    let mut total = BigUint::zero();
    let (mut prev, mut cur) = (BigUint::one(), BigUint::one());
    for &d in digits {
        total += &cur * d;
        let next = &prev + &cur;
        prev = core::mem::replace(&mut cur, next);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn fibonacci_indexing() {
        let first: Vec<u64> = (0..8).map(|i| fib_u64(i).unwrap()).collect();
        assert_eq!(first, vec![1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(fib(0), BigUint::one());
        assert_eq!(fib(5), BigUint::from(8u32));
        assert_eq!(fib(100).to_string(), "573147844013817084101");
        assert!(fib_u64(95).is_none());
    }

    #[test]
    fn zeckendorf_examples() {
        assert_eq!(zeckendorf(1).unwrap().digits(), &[1]);
        assert_eq!(zeckendorf(4).unwrap().digits(), &[1, 0, 1]);
        // 11 = 3 + 8; the string (1,0,1,0,1) encodes 1 + 3 + 8 = 12
        assert_eq!(zeckendorf(11).unwrap().digits(), &[0, 0, 1, 0, 1]);
        assert_eq!(zeckendorf(12).unwrap().digits(), &[1, 0, 1, 0, 1]);
        assert_eq!(zeckendorf(4).unwrap().to_binary_string(), "101");
        assert_eq!(zeckendorf(0), Err(NumerationError::NonPositive));
    }

    #[test]
    fn zeckendorf_of_large_values() {
        let z = zeckendorf(u64::MAX).unwrap();
        assert!(z.is_valid());
        assert_eq!(z.value(), u128::from(u64::MAX));
    }

    #[test]
    fn procedure1_examples() {
        assert_eq!(
            apply_procedure1(&[1, 0, 0, 1], 2).unwrap(),
            vec![1, 1, 1, 0]
        );
        assert_eq!(value(&[1, 0, 0, 1]), value(&[1, 1, 1, 0]));
        assert_eq!(apply_procedure1(&[0, 0, 1], 1).unwrap(), vec![1, 1, 0]);
        assert_eq!(value(&[1, 1, 0]), 3);
    }

    #[test]
    fn procedure1_rejects_wrong_pattern() {
        assert!(apply_procedure1(&[1, 0, 0, 1], 1).is_err());
        assert!(apply_procedure1(&[1, 0, 0], 2).is_err());
        assert!(apply_procedure1(&[0, 0, 2], 1).is_err());
        assert!(apply_procedure1(&[0, 0, 1], 0).is_err());
    }

    #[test]
    fn procedure2_examples() {
        assert_eq!(apply_procedure2(&[1, 0, 1], 2).unwrap(), vec![2, 1, 0]);
        assert_eq!(value(&[1, 0, 1]), value(&[2, 1, 0]));
        assert_eq!(apply_procedure2(&[1, 0, 2], 2).unwrap(), vec![2, 1, 1]);
        assert_eq!(value(&[2, 1, 1]), 7);
    }

    #[test]
    fn procedure2_rejects_wrong_pattern() {
        assert!(apply_procedure2(&[1, 0, 0], 2).is_err());
        assert!(apply_procedure2(&[1, 1, 1], 2).is_err());
        assert!(apply_procedure2(&[0, 1], 1).is_err());
        assert!(apply_procedure2(&[1, 0], 2).is_err());
    }

    #[test]
    fn positive_rep_examples() {
        assert_eq!(to_positive_rep(1).unwrap().digits(), &[1]);
        assert_eq!(to_positive_rep(2).unwrap().digits(), &[2]);
        let (rep, trace) = to_positive_rep_traced(4).unwrap();
        assert_eq!(rep.digits(), &[2, 1]);
        assert_eq!(trace, vec![Rewrite::Procedure2 { position: 2 }]);
        assert_eq!(to_positive_rep(0), Err(NumerationError::NonPositive));
    }

    #[test]
    fn positive_rep_first_thousand() {
        for n in 1..=1000u64 {
            let rep = to_positive_rep(n).unwrap();
            assert_eq!(rep.value(), u128::from(n));
            assert!(rep.len() <= log_phi_length_bound(n), "n = {n}");
        }
    }

    #[test]
    fn positive_rep_near_u64_max() {
        for n in [u64::MAX, u64::MAX - 1, 1 << 63, 12_200_160_415_121_876_738] {
            let rep = to_positive_rep(n).unwrap();
            assert_eq!(rep.value(), u128::from(n));
        }
    }

    #[test]
    fn length_bound_is_exact() {
        // φ^0 = 1 ≤ 1 < φ
        assert_eq!(log_phi_length_bound(1), 1);
        // φ ≤ 2 < φ²
        assert_eq!(log_phi_length_bound(2), 2);
        // φ² ≈ 2.618 ≤ 3
        assert_eq!(log_phi_length_bound(3), 3);
        // log_φ 10⁶ ≈ 28.7
        assert_eq!(log_phi_length_bound(1_000_000), 29);
    }

    #[test]
    fn partition_examples() {
        let p = partition(1).unwrap();
        assert_eq!((p.prefix_len, p.blocks.len()), (1, 0));
        let p = partition(4).unwrap();
        assert_eq!(p.prefix_len, 2);
        assert_eq!(
            p.blocks,
            vec![Block {
                fib_index: 2,
                copy: 1,
                start: 3,
                len: 2
            }]
        );
        assert!(p.verify());
        assert!(partition(0).is_err());
    }

    #[test]
    fn partition_verify_detects_damage() {
        let mut p = partition(100).unwrap();
        assert!(p.verify());
        p.blocks.pop();
        assert!(!p.verify());
    }

    #[test]
    fn fib_digits_validation() {
        assert!(FibDigits::new(vec![3, 2, 1]).is_ok());
        assert!(FibDigits::new(vec![1, 3]).is_err());
        assert!(FibDigits::new(vec![1, 0, 1]).is_err());
        assert!(FibDigits::new(vec![]).is_err());
        assert_eq!(FibDigits::new(vec![2, 1]).unwrap().to_string(), "(2,1)");
    }

    #[test]
    fn big_value_matches_small() {
        assert_eq!(
            big_value(&[3, 2, 1, 2]),
            BigUint::from(value(&[3, 2, 1, 2]) as u64)
        );
    }
}

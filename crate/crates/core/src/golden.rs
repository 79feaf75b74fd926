//! Exact arithmetic in the quadratic field Q(√5).
//!
//! Every value is stored as `(a + b√5) / d` in lowest terms with `d > 0`, so
//! structural equality is numeric equality. Signs are decided with integer
//! arithmetic only: when `a` and `b` disagree in sign, compare `a²` with `5b²`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal;
use crate::fib;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenError {
    ZeroDenominator,
    /// A window start or Fibonacci index outside the accepted range.
    InvalidWindow {
        start: u64,
        fib_index: usize,
    },
    /// Certification of the substitution failed at offset `k`.
    CertificationFailed {
        start: u64,
        fib_index: usize,
        k: u64,
    },
}

impl fmt::Display for GoldenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoldenError::ZeroDenominator => write!(f, "zero denominator"),
            GoldenError::InvalidWindow { start, fib_index } => {
                write!(
                    f,
                    "invalid window: start {start}, Fibonacci index {fib_index}"
                )
            }
            GoldenError::CertificationFailed {
                start,
                fib_index,
                k,
            } => write!(
                f,
                "substitution certificate failed for start {start}, index {fib_index} at k = {k}"
            ),
        }
    }
}

impl core::error::Error for GoldenError {}

/// An element `(a + b√5) / d` of Q(√5).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    a: BigInt,
    b: BigInt,
    d: BigInt,
}

/// Sign of `a + b√5`.
fn sign_of(a: &BigInt, b: &BigInt) -> Ordering {
    let sa = a.cmp(&BigInt::zero());
    let sb = b.cmp(&BigInt::zero());
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * 5u32)),
        (Ordering::Less, Ordering::Greater) => (b * b * 5u32).cmp(&(a * a)),
    }
}

impl GoldenNumber {
    pub fn new(a: BigInt, b: BigInt, d: BigInt) -> Result<Self, GoldenError> {
        if d.is_zero() {
            return Err(GoldenError::ZeroDenominator);
        }
        Ok(Self::canonical(a, b, d))
    }

    fn canonical(mut a: BigInt, mut b: BigInt, mut d: BigInt) -> Self {
        debug_assert!(!d.is_zero());
        if d.is_negative() {
            a = -a;
            b = -b;
            d = -d;
        }
        let g = a.gcd(&b).gcd(&d);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            d /= &g;
        }
        GoldenNumber { a, b, d }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        GoldenNumber {
            a: n.into(),
            b: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        GoldenNumber {
            a: q.numer().clone(),
            b: BigInt::zero(),
            d: q.denom().clone(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The golden ratio (1 + √5)/2.
    pub fn phi() -> Self {
        GoldenNumber {
            a: BigInt::one(),
            b: BigInt::one(),
            d: BigInt::from(2),
        }
    }

    /// The conjugate root (1 − √5)/2.
    pub fn phi_conjugate() -> Self {
        GoldenNumber {
            a: BigInt::one(),
            b: -BigInt::one(),
            d: BigInt::from(2),
        }
    }

    pub fn sqrt5() -> Self {
        GoldenNumber {
            a: BigInt::zero(),
            b: BigInt::one(),
            d: BigInt::one(),
        }
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.a
    }

    pub fn surd_part(&self) -> &BigInt {
        &self.b
    }

    pub fn denominator(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b)
    }

    pub fn conjugate(&self) -> Self {
        GoldenNumber {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// Field norm `x · x̄ = (a² − 5b²)/d²`.
    pub fn norm(&self) -> BigRational {
        BigRational::new(
            &self.a * &self.a - &self.b * &self.b * 5u32,
            &self.d * &self.d,
        )
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        self + &Self::from_rational(q)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Compares `self` with the integer `m` exactly.
    pub fn cmp_integer(&self, m: &BigInt) -> Ordering {
        sign_of(&(&self.a - m * &self.d), &self.b)
    }

    /// The unique integer `m` with `m ≤ self < m + 1`.
    ///
    /// The numerator `a + b√5` is bracketed between consecutive integers using
    /// `isqrt(5b²)`; one exact comparison then settles the candidate.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.d);
        }
        let s = (&self.b * &self.b * 5u32).sqrt();
        // b√5 lies strictly inside (s, s + 1) for b > 0, inside (−s − 1, −s) for b < 0.
        let lower = if self.b.is_positive() {
            &self.a + &s
        } else {
            &self.a - &s - 1u32
        };
        let q = lower.div_floor(&self.d);
        let next = &q + 1u32;
        if self.cmp_integer(&next) != Ordering::Less {
            next
        } else {
            q
        }
    }

    /// `self − floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let m = self.floor();
        Self::canonical(&self.a - m * &self.d, self.b.clone(), self.d.clone())
    }

    /// Nearest integer, halves rounded up. Only rational values can be halves.
    pub fn round(&self) -> BigInt {
        self.add_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
            .floor()
    }

    /// `‖x‖`, the distance to the nearest integer, in `[0, 1/2]`.
    pub fn dist_nearest_int(&self) -> Self {
        let f = self.fract();
        let g = &Self::one() - &f;
        if f <= g {
            f
        } else {
            g
        }
    }

    /// Decimal expansion with `digits` places, correctly rounded (ties to even).
    pub fn to_decimal(&self, digits: usize) -> alloc::string::String {
        if self.b.is_zero() {
            return decimal::rational_to_decimal(
                &BigRational::new(self.a.clone(), self.d.clone()),
                digits,
            );
        }
        // An irrational value is never a tie, so rounding is floor(x·10ⁿ + 1/2).
        let scale = decimal::pow10(digits);
        let shifted = Self::canonical(
            &self.a * &scale * 2u32 + &self.d,
            &self.b * &scale * 2u32,
            &self.d * 2u32,
        );
        decimal::format_scaled(&shifted.floor(), digits)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.d.is_one() {
                return write!(f, "{}", self.a);
            }
            return write!(f, "{}/{}", self.a, self.d);
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        if self.d.is_one() {
            write!(f, "{} {} {}√5", self.a, op, self.b.abs())
        } else {
            write!(f, "({} {} {}√5)/{}", self.a, op, self.b.abs(), self.d)
        }
    }
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so the sign of the cross-multiplied
        // numerator difference is the sign of `self − other`.
        let a = &self.a * &other.d - &other.a * &self.d;
        let b = &self.b * &other.d - &other.b * &self.d;
        sign_of(&a, &b)
    }
}

impl<'a> Add<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        if self.d == rhs.d {
            return GoldenNumber::canonical(&self.a + &rhs.a, &self.b + &rhs.b, self.d.clone());
        }
        GoldenNumber::canonical(
            &self.a * &rhs.d + &rhs.a * &self.d,
            &self.b * &rhs.d + &rhs.b * &self.d,
            &self.d * &rhs.d,
        )
    }
}

impl<'a> Sub<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a GoldenNumber> for &'a GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber::canonical(
            &self.a * &rhs.a + &self.b * &rhs.b * 5u32,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.d * &rhs.d,
        )
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for GoldenNumber {
            type Output = GoldenNumber;
            fn $m(self, rhs: GoldenNumber) -> GoldenNumber {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

/// `{φk}`, the fractional part of `k` times the golden ratio.
pub fn frac_phi_k(k: u64) -> GoldenNumber {
    let k = BigInt::from(k);
    GoldenNumber::canonical(k.clone(), k, BigInt::from(2)).fract()
}

/// A permutation `σ_1..σ_F` of `1..F` matching the window `{φ(R+k)}`, `0 ≤ k < F`,
/// to the grid `{1/F, …, F/F}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub start: u64,
    pub fib_index: usize,
    /// `sigma[k]` is σ_{k+1}, the grid value assigned to the point `{φ(start + k)}`.
    pub sigma: Vec<u64>,
    /// Grid value (mod F) given to the smallest point; ranks wrap around from there.
    pub offset: u64,
}

impl Substitution {
    pub fn len(&self) -> u64 {
        self.sigma.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn is_permutation(&self) -> bool {
        let n = self.sigma.len();
        let mut seen = alloc::vec![false; n];
        for &s in &self.sigma {
            let Some(slot) = (s as usize).checked_sub(1).filter(|&i| i < n) else {
                return false;
            };
            if core::mem::replace(&mut seen[slot], true) {
                return false;
            }
        }
        true
    }
}

fn window(start: u64, fib_index: usize) -> Result<(u64, Vec<GoldenNumber>), GoldenError> {
    let len = fib::fib_u64(fib_index)
        .filter(|_| start >= 1 && fib_index >= 1)
        .ok_or(GoldenError::InvalidWindow { start, fib_index })?;
    let points = (0..len).map(|k| frac_phi_k(start + k)).collect();
    Ok((len, points))
}

/// Offsets `k` ordered by increasing `{φ(start + k)}`.
fn rank_order(points: &[GoldenNumber]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&x, &y| points[x].cmp(&points[y]));
    order
}

/// Cyclic rank substitution for the window `{φ(start + k)}`, `0 ≤ k < F_i`,
/// certified exactly: `‖{φ(start + k)} − σ_{k+1}/F_i‖ ≤ 1/F_i` for every `k`.
///
/// The smallest point is sent to the grid value nearest to it (mod 1) and the
/// remaining points follow in rank order, wrapping past `F_i`.
pub fn sigma_permutation(start: u64, fib_index: usize) -> Result<Substitution, GoldenError> {
    let (len, points) = window(start, fib_index)?;
    let order = rank_order(&points);
    let n = BigInt::from(len);
    let offset = points[order[0]].mul_int(&n).round() % &n;
    let offset = u64::try_from(offset).expect("offset below window length");

    let mut sigma = alloc::vec![0u64; points.len()];
    for (rank, &k) in order.iter().enumerate() {
        let v = (offset + rank as u64) % len;
        sigma[k] = if v == 0 { len } else { v };
    }

    let tolerance = GoldenNumber::from_rational(&BigRational::new(BigInt::one(), n.clone()));
    for (k, point) in points.iter().enumerate() {
        let grid = BigRational::new(BigInt::from(sigma[k]), n.clone());
        let gap = point.add_rational(&-grid).dist_nearest_int();
        if gap > tolerance {
            return Err(GoldenError::CertificationFailed {
                start,
                fib_index,
                k: k as u64,
            });
        }
    }
    Ok(Substitution {
        start,
        fib_index,
        sigma,
        offset,
    })
}

/// Offsets `k` at which the plain rank permutation (smallest point ↦ 1) violates
/// `|{φ(start + k)} − σ_{k+1}/F_i| ≤ 1/F_i` with the ordinary absolute value.
pub fn linear_rank_violations(start: u64, fib_index: usize) -> Result<Vec<u64>, GoldenError> {
    let (len, points) = window(start, fib_index)?;
    let n = BigInt::from(len);
    let tolerance = GoldenNumber::from_rational(&BigRational::new(BigInt::one(), n.clone()));
    let mut bad = Vec::new();
    for (rank, &k) in rank_order(&points).iter().enumerate() {
        let grid = BigRational::new(BigInt::from(rank as u64 + 1), n.clone());
        let diff = points[k].add_rational(&-grid);
        let abs = if diff.signum() == Ordering::Less {
            -diff
        } else {
            diff
        };
        if abs > tolerance {
            bad.push(k as u64);
        }
    }
    bad.sort_unstable();
    Ok(bad)
}

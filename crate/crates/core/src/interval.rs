//! Dyadic numbers and outward-rounded real intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// `mant * 2^exp`, exact.
#[derive(Debug, Clone)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn div_round(n: &BigInt, d: &BigInt, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Down => n.div_floor(d),
        Rounding::Up => -((-n).div_floor(d)),
    }
}

fn shr_round(n: &BigInt, shift: u64, dir: Rounding) -> BigInt {
    if shift == 0 {
        return n.clone();
    }
    div_round(n, &(BigInt::one() << shift), dir)
}

impl Dyadic {
    pub fn new(mant: impl Into<BigInt>, exp: i64) -> Self {
        Self {
            mant: mant.into(),
            exp,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Self::new(1, k)
    }

    /// `num / den` rounded in `dir` to `bits` significant bits. `den` must be positive.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Rounding) -> Self {
        assert!(den.is_positive(), "non-positive denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let k = bits as i64 + den.bits() as i64 - num.magnitude().bits() as i64 + 1;
        let q = if k >= 0 {
            div_round(&(num << k as u64), den, dir)
        } else {
            div_round(num, &(den << (-k) as u64), dir)
        };
        Self::new(q, -k)
    }

    /// `num / den` rounded in `dir` onto the grid `2^grid_exp`.
    pub fn from_ratio_fixed(num: &BigInt, den: &BigInt, grid_exp: i64, dir: Rounding) -> Self {
        assert!(den.is_positive(), "non-positive denominator");
        let q = if grid_exp <= 0 {
            div_round(&(num << (-grid_exp) as u64), den, dir)
        } else {
            div_round(num, &(den << grid_exp as u64), dir)
        };
        Self::new(q, grid_exp)
    }

    pub fn from_rational(r: &ExactRational, bits: u32, dir: Rounding) -> Self {
        Self::from_ratio(r.numer(), r.denom(), bits, dir)
    }

    /// Rounds to at most `bits` significant bits.
    pub fn round(&self, bits: u32, dir: Rounding) -> Self {
        let len = self.mant.magnitude().bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        Self::new(shr_round(&self.mant, shift, dir), self.exp + shift as i64)
    }

    /// Rounds onto the grid `2^grid_exp` (a multiple of `2^grid_exp`).
    pub fn round_to_grid(&self, grid_exp: i64, dir: Rounding) -> Self {
        if self.exp >= grid_exp {
            return self.clone();
        }
        let shift = (grid_exp - self.exp) as u64;
        Self::new(shr_round(&self.mant, shift, dir), grid_exp)
    }

    pub fn to_rational(&self) -> ExactRational {
        if self.exp >= 0 {
            ExactRational::from_int(&self.mant << self.exp as u64)
        } else {
            ExactRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Rounding::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Rounding::Up)
        }
    }

    pub fn is_integer(&self) -> bool {
        self.floor() == self.ceil()
    }

    /// floor(log2 |x|); `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.magnitude().bits() as i64 - 1 + self.exp)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.mant.magnitude().bits() as i64;
        let shift = (len - 62).max(0);
        let m = (&self.mant >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a - b, e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mant * k, self.exp)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mant, self.exp)
    }

    /// `self / other` rounded to `bits` significant bits. `other` must be non-zero.
    pub fn div(&self, other: &Self, bits: u32, dir: Rounding) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let (num, den) = if other.mant.is_negative() {
            (-&self.mant, -&other.mant)
        } else {
            (self.mant.clone(), other.mant.clone())
        };
        let q = Self::from_ratio(&num, &den, bits, dir);
        Self::new(q.mant, q.exp + self.exp - other.exp)
    }

    pub fn cmp_int(&self, k: &BigInt) -> Ordering {
        self.cmp(&Dyadic::from_int(k.clone()))
    }

    pub fn cmp_rational(&self, r: &ExactRational) -> Ordering {
        self.to_rational().cmp(r)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints that encloses some real value.
///
/// `precision_bits` records the working precision that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(x: Dyadic, precision_bits: u32) -> Self {
        Self::new(x.clone(), x, precision_bits)
    }

    pub fn from_int(n: impl Into<BigInt>, precision_bits: u32) -> Self {
        Self::point(Dyadic::from_int(n), precision_bits)
    }

    /// Outward enclosure of `num / den` with `bits` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        Self::new(
            Dyadic::from_ratio(num, den, bits, Rounding::Down),
            Dyadic::from_ratio(num, den, bits, Rounding::Up),
            bits,
        )
    }

    /// Outward enclosure of an exact rational on the grid `2^grid_exp`.
    pub fn from_rational_fixed(r: &ExactRational, grid_exp: i64, precision_bits: u32) -> Self {
        Self::new(
            Dyadic::from_ratio_fixed(r.numer(), r.denom(), grid_exp, Rounding::Down),
            Dyadic::from_ratio_fixed(r.numer(), r.denom(), grid_exp, Rounding::Up),
            precision_bits,
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// floor(log2(width)), or `None` for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        self.width().ilog2()
    }

    pub fn midpoint(&self) -> ExactRational {
        let sum = self.lo.add(&self.hi);
        Dyadic::new(sum.mant, sum.exp - 1).to_rational()
    }

    pub fn contains_rational(&self, r: &ExactRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when `other` lies inside `self`.
    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Strict comparison against an integer, or `None` if the interval touches it.
    pub fn cmp_int(&self, k: &BigInt) -> Option<Ordering> {
        if self.hi.cmp_int(k) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_int(k) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Strict comparison against a rational, or `None` if the interval touches it.
    pub fn cmp_rational(&self, r: &ExactRational) -> Option<Ordering> {
        if self.hi.cmp_rational(r) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_rational(r) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// The integer `k` with `k < x < k + 1` for every `x` in the interval, if one exists.
    pub fn strict_floor(&self) -> Option<BigInt> {
        let k = self.lo.floor();
        if self.lo.is_integer() || self.hi.floor() != k || self.hi.is_integer() {
            return None;
        }
        Some(k)
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.precision_bits.min(other.precision_bits),
        )
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.precision_bits.min(other.precision_bits),
        )
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval::new(self.hi.neg(), self.lo.neg(), self.precision_bits)
    }

    /// Exact product (no rounding).
    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = cands.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = cands.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        RealInterval::new(lo, hi, self.precision_bits.min(other.precision_bits))
    }

    pub fn mul_int(&self, k: &BigInt) -> RealInterval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            RealInterval::new(b, a, self.precision_bits)
        } else {
            RealInterval::new(a, b, self.precision_bits)
        }
    }

    /// Divides by a positive integer, rounding outward to `bits` significant bits.
    pub fn div_int(&self, k: &BigInt, bits: u32) -> RealInterval {
        assert!(k.is_positive(), "division by non-positive integer");
        let d = Dyadic::from_int(k.clone());
        RealInterval::new(
            self.lo.div(&d, bits, Rounding::Down),
            self.hi.div(&d, bits, Rounding::Up),
            self.precision_bits,
        )
    }

    /// Rounds both endpoints outward to `bits` significant bits.
    pub fn round_outward(&self, bits: u32) -> RealInterval {
        RealInterval::new(
            self.lo.round(bits, Rounding::Down),
            self.hi.round(bits, Rounding::Up),
            self.precision_bits,
        )
    }

    /// Rounds outward onto the grid `2^grid_exp` and then widens by one grid step
    /// on each side.
    ///
    /// When the unpadded enclosure at precision `2p` is narrower than `2^(grid_exp-1)`,
    /// the padded result at precision `p` contains the padded result at `2p`.
    pub fn pad_to_grid(&self, grid_exp: i64) -> RealInterval {
        let step = Dyadic::pow2(grid_exp);
        RealInterval::new(
            self.lo.round_to_grid(grid_exp, Rounding::Down).sub(&step),
            self.hi.round_to_grid(grid_exp, Rounding::Up).add(&step),
            self.precision_bits,
        )
    }

    /// Intersection of two enclosures of the same real.
    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = if self.lo >= other.lo {
            &self.lo
        } else {
            &other.lo
        };
        let hi = if self.hi <= other.hi {
            &self.hi
        } else {
            &other.hi
        };
        if lo <= hi {
            Some(RealInterval::new(
                lo.clone(),
                hi.clone(),
                self.precision_bits.max(other.precision_bits),
            ))
        } else {
            None
        }
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] @{} bits",
            self.lo.to_rational().to_sig_decimal(17),
            self.hi.to_rational().to_sig_decimal(17),
            self.precision_bits
        )
    }
}

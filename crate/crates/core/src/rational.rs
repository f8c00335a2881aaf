//! Exact rational numbers over arbitrary-precision integers.
//!
//! Values are kept in lowest terms with a positive denominator after every
//! operation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactRational {
    num: BigInt,
    den: BigInt,
}

/// How to drop digits when rendering a fixed number of decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecimalMode {
    Truncate,
    /// Round half away from zero.
    Round,
}

impl ExactRational {
    /// Builds `num / den`, reducing. Panics on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let num = num.into();
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let mut r = Self { num, den };
        r.normalize();
        r
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `1 / d` for a positive integer `d`.
    pub fn unit(d: impl Into<BigInt>) -> Self {
        Self::new(1, d)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn abs(&self) -> Self {
        Self {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.num = -&self.num;
            self.den = -&self.den;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num /= &g;
            self.den /= &g;
        }
    }

    /// Adds `1/d` in place.
    ///
    /// With `a/b` reduced and `g = gcd(b, d)`, `a/b + 1/d = (a*d' + b/g) / (b*d')`
    /// where `d' = d/g`, and the only common factor left divides `g`. Every
    /// gcd therefore involves a machine word.
    pub fn add_unit_fraction(&mut self, d: u64) {
        assert!(d > 0, "unit fraction with zero denominator");
        let g = (&self.den % d).to_u64().unwrap_or(0).gcd(&d);
        let d1 = d / g;
        if g == 1 {
            self.num *= d;
            self.num += &self.den;
            self.den *= d;
            return;
        }
        self.num *= d1;
        self.num += &self.den / g;
        self.den *= d1;
        let h = (&self.num % g).abs().to_u64().unwrap_or(0).gcd(&g);
        if h > 1 {
            self.num /= h;
            self.den /= h;
        }
    }

    /// Compares against an integer without allocating a rational.
    pub fn cmp_int(&self, k: &BigInt) -> Ordering {
        self.num.cmp(&(k * &self.den))
    }

    /// Approximate value; only for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        // Shift both parts down to keep the quotient in range.
        let nb = self.num.bits() as i64;
        let db = self.den.bits() as i64;
        let shift_n = (nb - 60).max(0);
        let shift_d = (db - 60).max(0);
        let n = (&self.num >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
        let d = (&self.den >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
        n / d * 2f64.powi((shift_n - shift_d) as i32)
    }

    /// Renders with exactly `places` digits after the decimal point.
    pub fn to_fixed(&self, places: usize, mode: DecimalMode) -> String {
        let scale = BigInt::from(10u32).pow(places as u32);
        let scaled_num = self.num.abs() * &scale;
        let (mut q, r) = scaled_num.div_rem(&self.den);
        if mode == DecimalMode::Round && (&r * 2u32) >= self.den {
            q += 1u32;
        }
        let negative = self.num.is_negative() && !q.is_zero();
        format_scaled(&q, places, negative)
    }

    /// Renders with `sig` significant digits, rounding half away from zero.
    pub fn to_sig_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.num.is_zero() {
            return "0".to_string();
        }
        let negative = self.num.is_negative();
        let num = self.num.abs();
        let ten = BigInt::from(10u32);

        // e10 = floor(log10(|v|)), estimated from bit lengths then corrected.
        let est = ((num.bits() as f64 - self.den.bits() as f64) * std::f64::consts::LOG10_2).floor()
            as i64;
        let mut e10 = est;
        let pow10 = |e: i64| -> (BigInt, BigInt) {
            if e >= 0 {
                (ten.pow(e as u32), BigInt::one())
            } else {
                (BigInt::one(), ten.pow((-e) as u32))
            }
        };
        loop {
            // Want 10^e10 <= v < 10^(e10+1).
            let (pn, pd) = pow10(e10);
            if &num * &pd < &pn * &self.den {
                e10 -= 1;
                continue;
            }
            let (pn1, pd1) = pow10(e10 + 1);
            if &num * &pd1 >= &pn1 * &self.den {
                e10 += 1;
                continue;
            }
            break;
        }

        let shift = sig as i64 - 1 - e10;
        let (sn, sd) = pow10(shift);
        let (mut q, r) = (&num * &sn).div_rem(&(&self.den * &sd));
        if &r * 2u32 >= &self.den * &sd {
            q += 1u32;
        }
        let mut shift = shift;
        if q == ten.pow(sig as u32) {
            q /= 10u32;
            shift -= 1;
        }
        let places = shift.max(0) as usize;
        let digits = if shift < 0 {
            &q * ten.pow((-shift) as u32)
        } else {
            q
        };
        format_scaled(&digits, places, negative)
    }
}

fn format_scaled(q: &BigInt, places: usize, negative: bool) -> String {
    let digits = q.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    if digits.len() <= places {
        out.push_str("0.");
        out.push_str(&"0".repeat(places - digits.len()));
        out.push_str(&digits);
    } else {
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        out.push_str(int_part);
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_int(n)
    }
}

impl Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: &ExactRational) -> ExactRational {
        ExactRational::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: &ExactRational) -> ExactRational {
        ExactRational::new(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: &ExactRational) -> ExactRational {
        ExactRational::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational {
            num: -self.num,
            den: self.den,
        }
    }
}

/// `sum_{i=m}^{n} 1/i` computed exactly by binary splitting.
///
/// Returns zero for an empty range (`n < m`).
pub fn harmonic_span_exact(m: u128, n: u128) -> ExactRational {
    assert!(m >= 1, "harmonic span must start at 1 or above");
    if n < m {
        return ExactRational::zero();
    }
    let (p, q) = split_sum(m, n);
    ExactRational::new(p, q)
}

// Returns (P, Q) with P/Q = sum_{i=lo}^{hi} 1/i and Q = prod i.
fn split_sum(lo: u128, hi: u128) -> (BigInt, BigInt) {
    if hi - lo < 8 {
        let mut p = BigInt::zero();
        let mut q = BigInt::one();
        for i in lo..=hi {
            p = p * i + &q;
            q *= i;
        }
        return (p, q);
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = split_sum(lo, mid);
    let (p2, q2) = split_sum(mid + 1, hi);
    (p1 * &q2 + p2 * &q1, q1 * q2)
}

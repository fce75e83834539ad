//! Coefficient arithmetic for long products.
//!
//! Amplitudes of product-form states are products of `N` per-bit
//! coefficients and shrink like `2^-N/2` or faster. [`ExtComplex`] carries a
//! double-double mantissa (about 106 significant bits) and a separate binary
//! exponent, so products over hundreds of bits neither underflow nor lose
//! the trailing digits that plain `f64` drops.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Above this many noise-bits [`Precision::Auto`] switches to extended arithmetic.
pub const EXTENDED_THRESHOLD: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
    #[default]
    Auto,
}

impl Precision {
    /// `true` when products over `n` bits should use [`ExtComplex`].
    pub fn is_extended(self, n: usize) -> bool {
        match self {
            Precision::Double => false,
            Precision::Extended => true,
            Precision::Auto => n > EXTENDED_THRESHOLD,
        }
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact scaling by a power of two (barring subnormal `lo`).
    #[inline]
    fn scale(self, k: i64) -> Self {
        Self { hi: ldexp(self.hi, k), lo: ldexp(self.lo, k) }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// `x * 2^k`, stepping through normal powers of two so large `|k|` saturates cleanly.
pub fn ldexp(mut x: f64, mut k: i64) -> f64 {
    const STEP: i64 = 1000;
    while k > STEP {
        x *= pow2(STEP);
        k -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -STEP {
        x *= pow2(-STEP);
        k += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(k)
}

#[inline]
fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Binary exponent `e` with `2^e <= |x| < 2^(e+1)`; `x` must be finite and nonzero.
fn exponent_of(x: f64) -> i64 {
    let bits = x.abs().to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        exponent_of(x * pow2(64)) - 64
    } else {
        raw - 1023
    }
}

/// Complex number `(re + i im) * 2^exp` with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtComplex {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
    pub exp: i64,
}

impl ExtComplex {
    pub const ZERO: Self = Self { re: DoubleDouble::ZERO, im: DoubleDouble::ZERO, exp: 0 };
    pub const ONE: Self = Self { re: DoubleDouble::ONE, im: DoubleDouble::ZERO, exp: 0 };

    pub fn from_complex(c: Complex64) -> Self {
        Self { re: DoubleDouble::from_f64(c.re), im: DoubleDouble::from_f64(c.im), exp: 0 }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.re.hi == 0.0 && self.im.hi == 0.0
    }

    fn normalized(mut self) -> Self {
        let m = self.re.hi.abs().max(self.im.hi.abs());
        if m == 0.0 {
            return Self::ZERO;
        }
        let k = exponent_of(m);
        if k != 0 {
            self.re = self.re.scale(-k);
            self.im = self.im.scale(-k);
            self.exp += k;
        }
        self
    }

    /// Rounds to `Complex64`; may under- or overflow.
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(ldexp(self.re.to_f64(), self.exp), ldexp(self.im.to_f64(), self.exp))
    }

    /// `log2 |z|`, finite for any nonzero value regardless of magnitude.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (re, im) = (self.re.to_f64(), self.im.to_f64());
        (re * re + im * im).sqrt().log2() + self.exp as f64
    }
}

impl Mul for ExtComplex {
    type Output = Self;

    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
            exp: self.exp + o.exp,
        }
        .normalized()
    }
}

impl Add for ExtComplex {
    type Output = Self;

    /// Sum of two values; the smaller one is aligned to the larger exponent.
    fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = small.exp - big.exp;
        Self { re: big.re + small.re.scale(shift), im: big.im + small.im.scale(shift), exp: big.exp }
            .normalized()
    }
}

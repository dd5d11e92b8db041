//! Extended-precision real scalar.
//!
//! Covariance entries in the multifold scenarios reach `e^{±400}` and the
//! eigenvalue extraction subtracts nearly equal numbers of that size, so every
//! state-building product runs on [`Real`], a thin value type over
//! [`astro_float::BigFloat`]. Binary operations are performed at the larger of
//! the two operand precisions; the binary exponent is an `i32`, which gives a
//! decimal exponent range of roughly ±6·10⁸.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};

const RM: RoundingMode = RoundingMode::ToEven;

/// log2(10), used to convert decimal digits into mantissa bits.
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Guard bits added on top of the requested decimal digits.
const GUARD_BITS: usize = 32;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache allocation"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Mantissa width in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(usize);

impl Precision {
    /// Default working precision: 40 significant decimal digits plus guard bits.
    pub const DEFAULT_DIGITS: u32 = 40;

    pub fn from_bits(bits: usize) -> Self {
        Precision(bits.max(WORD_BIT_SIZE))
    }

    /// Precision holding at least `digits` significant decimal digits.
    pub fn from_digits(digits: u32) -> Self {
        let bits = (f64::from(digits) * BITS_PER_DIGIT).ceil() as usize + GUARD_BITS;
        Self::from_bits(bits)
    }

    pub fn bits(self) -> usize {
        self.0
    }

    /// Significant decimal digits represented by this precision.
    pub fn digits(self) -> f64 {
        self.0 as f64 / BITS_PER_DIGIT
    }

    /// This precision widened by `extra` bits.
    pub fn widen(self, extra: usize) -> Self {
        Precision(self.0 + extra)
    }

    /// Extra bits needed so that a quantity of size `e^{growth}` can be
    /// cancelled down to O(1) without eating into the requested digits.
    pub fn headroom_bits(growth: f64) -> usize {
        if growth.is_finite() && growth > 0.0 {
            (growth * std::f64::consts::LOG2_E).ceil() as usize
        } else {
            0
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::from_digits(Self::DEFAULT_DIGITS)
    }
}

/// Extended-precision real number.
///
/// The precision is carried alongside the value because the backend reports
/// zero as having no mantissa.
#[derive(Clone)]
pub struct Real {
    x: BigFloat,
    p: usize,
}

impl Real {
    fn wrap(x: BigFloat, p: usize) -> Self {
        debug_assert!(!x.is_nan(), "high-precision operation produced NaN");
        Real { x, p }
    }

    pub fn from_f64(x: f64, prec: Precision) -> Self {
        Real { x: BigFloat::from_f64(x, prec.bits()), p: prec.bits() }
    }

    pub fn from_i64(x: i64, prec: Precision) -> Self {
        Real { x: BigFloat::from_i64(x, prec.bits()), p: prec.bits() }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn pi(prec: Precision) -> Self {
        Real { x: with_consts(|cc| cc.pi(prec.bits(), RM)), p: prec.bits() }
    }

    pub fn ln2(prec: Precision) -> Self {
        Real { x: with_consts(|cc| cc.ln_2(prec.bits(), RM)), p: prec.bits() }
    }

    pub fn precision(&self) -> Precision {
        Precision(self.p)
    }

    /// The same value re-rounded (or zero-extended) to `prec`.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut x = self.x.clone();
        if !x.is_zero() && x.set_precision(prec.bits(), RM).is_err() {
            return Real::from_f64(self.to_f64(), prec);
        }
        Real { x, p: prec.bits() }
    }

    fn prec2(&self, other: &Real) -> usize {
        self.p.max(other.p)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.x.is_nan() || self.x.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.x.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.x.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real { x: self.x.abs(), p: self.p }
    }

    pub fn square(&self) -> Real {
        self * self
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.x.sqrt(self.p, RM), self.p)
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.exp(self.p, RM, cc)), self.p)
    }

    /// Natural logarithm. Non-positive arguments give NaN; callers check the
    /// domain first.
    pub fn ln(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.ln(self.p, RM, cc)), self.p)
    }

    pub fn sinh(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.sinh(self.p, RM, cc)), self.p)
    }

    pub fn cosh(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.cosh(self.p, RM, cc)), self.p)
    }

    pub fn sin(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.sin(self.p, RM, cc)), self.p)
    }

    pub fn cos(&self) -> Real {
        Real::wrap(with_consts(|cc| self.x.cos(self.p, RM, cc)), self.p)
    }

    pub fn powi(&self, n: u32) -> Real {
        Real::wrap(self.x.powi(n as usize, self.p, RM), self.p)
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`. Values beyond the `f64` range saturate to ±∞ or 0.
    pub fn to_f64(&self) -> f64 {
        if self.x.is_nan() {
            return f64::NAN;
        }
        if self.x.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.x.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exponent, _)) = self.x.as_raw_parts() else {
            return f64::NAN;
        };
        // Mantissa is normalized with the most significant word last:
        // value = 0.m × 2^exponent.
        let top = words[words.len() - 1];
        let rest = words[..words.len() - 1].iter().any(|&w| w != 0);
        // Fold a sticky bit from the lower words in so the u64 → f64 rounding
        // sees bits below the top word.
        let m = top | u64::from(rest);
        let frac = m as f64 / 2f64.powi(WORD_BIT_SIZE as i32);
        let mag = ldexp(frac, exponent);
        match sign {
            Sign::Neg => -mag,
            Sign::Pos => mag,
        }
    }

    /// Relative distance `|self − other| / |other|`, or the absolute distance
    /// when `other` is zero.
    pub fn rel_diff(&self, other: &Real) -> f64 {
        let d = (self - other).abs();
        if other.is_zero() {
            d.to_f64()
        } else {
            (&d / &other.abs()).to_f64()
        }
    }
}

fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e)
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.x.cmp(&other.x) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.cmp(&other.x).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e}, {} bits)", self.to_f64(), self.p)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.prec2(rhs);
                Real::wrap(self.x.$inner(&rhs.x, p, RM), p)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $tr::$method(self, &rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                $tr::$method(&self, rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { x: self.x.clone().neg(), p: self.p }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { x: self.x.neg(), p: self.p }
    }
}

impl std::iter::Sum for Real {
    /// Panics on an empty iterator, which has no precision to inherit.
    fn sum<I: Iterator<Item = Real>>(mut iter: I) -> Real {
        let first = iter.next().expect("sum of an empty Real iterator");
        iter.fold(first, |acc, x| acc + x)
    }
}

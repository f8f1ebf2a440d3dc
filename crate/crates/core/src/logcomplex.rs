//! Complex numbers stored as `(ln|z|, arg z)`.
//!
//! Quantities such as `exp(s*T^2 + i*s*c*T)` overflow an `f64` long before the
//! asymptotic regime is reached. Keeping the logarithm of the magnitude and a
//! reduced phase lets such factors be multiplied, divided and compared without
//! ever forming the raw number.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Ordinary finite-magnitude complex number.
pub type ComplexValue = Complex64;

/// Low part of 2*pi: `2*pi - TAU` where `TAU` is the nearest double.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Reduce a phase into `(-pi, pi]`.
///
/// Uses a two-term Cody-Waite split of 2*pi with a fused multiply-add for the
/// leading part, so phases of order 1e6 keep their full relative accuracy.
///
/// Results within a few ulps of `-pi` are folded onto `pi`.
pub fn normalize_arg(x: f64) -> f64 {
    const EDGE: f64 = 4.0 * f64::EPSILON;
    if x > -PI + EDGE && x <= PI {
        return x;
    }
    let k = (x / TAU).round();
    let mut r = (-k).mul_add(TAU, x);
    r = (-k).mul_add(TAU_LO, r);
    if r > PI {
        r -= TAU;
    }
    if r <= -PI + EDGE {
        r += TAU;
    }
    r.min(PI)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// A complex number in log-magnitude / phase form.
///
/// The phase is always in `(-pi, pi]`. Zero is a distinguished value whose
/// magnitude sentinel is never used in arithmetic.
///
/// The log-magnitude carries a second, low-order word so that a common large
/// factor such as `e^{10^6}` cancels exactly when two products are compared.
#[derive(Clone, Copy, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    log_mag_lo: f64,
    arg: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        log_mag_lo: 0.0,
        arg: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        log_mag_lo: 0.0,
        arg: 0.0,
    };

    /// Builds a value from `ln|z|` and an unreduced phase.
    ///
    /// `log_mag = -inf` yields [`LogComplex::ZERO`].
    pub fn from_parts(log_mag: f64, arg: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_mag,
            log_mag_lo: 0.0,
            arg: normalize_arg(arg),
        }
    }

    fn with_log_mag(hi: f64, lo: f64, arg: f64) -> Self {
        let (log_mag, log_mag_lo) = two_sum(hi, lo);
        Self {
            log_mag,
            log_mag_lo,
            arg: normalize_arg(arg),
        }
    }

    pub fn from_complex(z: ComplexValue) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::from_parts(z.norm().ln(), z.im.atan2(z.re))
    }

    /// Signed real number; negative values carry phase `pi`.
    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// Represents `exp(z)` exactly: magnitude `re z`, phase `im z` reduced.
    pub fn exp_of(z: ComplexValue) -> Self {
        Self::from_parts(z.re, z.im)
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag + self.log_mag_lo
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Converts back to an ordinary complex number, or `None` when a
    /// component would not be finite.
    pub fn to_complex(&self) -> Option<ComplexValue> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        let mag = self.log_mag().exp();
        let z = Complex64::new(mag * self.arg.cos(), mag * self.arg.sin());
        (z.re.is_finite() && z.im.is_finite()).then_some(z)
    }

    /// `|z|`, possibly `inf` or `0` when outside the `f64` range.
    pub fn abs(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log_mag().exp()
        }
    }

    pub fn recip(self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::with_log_mag(-self.log_mag, -self.log_mag_lo, -self.arg)
    }

    /// `self * e^{shift}` for a real `shift`.
    pub fn scale_exp(self, shift: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        let (hi, lo) = two_sum(self.log_mag, shift);
        Self::with_log_mag(hi, lo + self.log_mag_lo, self.arg)
    }

    /// `|self / reference - 1|` evaluated from the log representation.
    ///
    /// The quotient is formed in log space, so the comparison is exact in
    /// structure even when both operands are astronomically large.
    pub fn rel_err(&self, reference: &LogComplex) -> Result<f64> {
        if reference.is_zero() {
            return Err(Error::invalid("relative error against zero reference"));
        }
        if self.is_zero() {
            return Ok(1.0);
        }
        let dl = (self.log_mag - reference.log_mag) + (self.log_mag_lo - reference.log_mag_lo);
        let theta = normalize_arg(self.arg - reference.arg);
        let half = (0.5 * theta).sin();
        let re = dl.exp_m1() * theta.cos() - 2.0 * half * half;
        let im = dl.exp() * theta.sin();
        Ok(re.hypot(im))
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        let (hi, lo) = two_sum(self.log_mag, rhs.log_mag);
        LogComplex::with_log_mag(hi, lo + self.log_mag_lo + rhs.log_mag_lo, self.arg + rhs.arg)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.recip()
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;

    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex {
            arg: normalize_arg(self.arg + PI),
            ..self
        }
    }
}

impl From<ComplexValue> for LogComplex {
    fn from(z: ComplexValue) -> Self {
        LogComplex::from_complex(z)
    }
}

impl fmt::Debug for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "LogComplex(ZERO)")
        } else {
            write!(f, "LogComplex(exp({}) * e^(i {}))", self.log_mag(), self.arg)
        }
    }
}

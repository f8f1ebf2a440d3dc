//! Leading-order asymptotic evaluators and the exact closed form of `I` at
//! `T = inf`.
//!
//! | integral | leading term as `s -> inf` |
//! |----------|-----------------------------|
//! | `I`      | `i / (s c)`                 |
//! | `I1`     | `-2 i / (s^3 c^3)`          |
//! | `J1`     | `1 / (s (2T + i c))`        |
//! | `J`      | `e^{s T^2 + i s c T} / (s (2T + i c))` |
//!
//! Every formula carries a relative error that decays like `1/s`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::logcomplex::LogComplex;
use crate::special::{gaussian_cos_integral, gaussian_sin_integral};

/// Leading-order value plus the claimed decay order of its relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: LogComplex,
    pub claimed_rel_order: f64,
}

impl AsymptoticValue {
    fn leading(value: LogComplex) -> Self {
        Self {
            value,
            claimed_rel_order: 1.0,
        }
    }
}

/// `i / (s c)`.
pub fn asym_i(c: f64, s: f64) -> Result<AsymptoticValue> {
    require_positive("c", c)?;
    require_positive("s", s)?;
    Ok(AsymptoticValue::leading(LogComplex::from_parts(
        -(s * c).ln(),
        FRAC_PI_2,
    )))
}

/// Exact `I(s)` at `T = inf`:
/// `sqrt(pi)/(2 sqrt(s)) e^{-c^2 s/4} + i * int_0^inf e^{-s x^2} sin(c s x) dx`.
pub fn closed_i_infinite(c: f64, s: f64) -> Result<LogComplex> {
    require_positive("c", c)?;
    require_positive("s", s)?;
    let y = c * s;
    let re = gaussian_cos_integral(s, y)?;
    let im = gaussian_sin_integral(s, y)?;
    Ok(LogComplex::from_complex(Complex64::new(re, im)))
}

/// `-2 i / (s^3 c^3)`.
pub fn asym_i1(c: f64, s: f64) -> Result<AsymptoticValue> {
    require_positive("c", c)?;
    require_positive("s", s)?;
    Ok(AsymptoticValue::leading(LogComplex::from_parts(
        2f64.ln() - 3.0 * (s * c).ln(),
        -FRAC_PI_2,
    )))
}

fn inverse_endpoint_factor(c: f64, t: f64, s: f64) -> LogComplex {
    // 1 / (s (2T + i c))
    let z = Complex64::new(2.0 * t, c);
    LogComplex::from_parts(-(s.ln() + z.norm().ln()), -z.arg())
}

/// `1 / (s (2T + i c))`.
pub fn asym_j1(c: f64, t: f64, s: f64) -> Result<AsymptoticValue> {
    require_positive("c", c)?;
    require_positive("T", t)?;
    require_positive("s", s)?;
    Ok(AsymptoticValue::leading(inverse_endpoint_factor(c, t, s)))
}

/// `e^{s T^2 + i s c T}`, the factor linking `J` to `J1`.
pub fn j_prefactor(c: f64, t: f64, s: f64) -> LogComplex {
    LogComplex::exp_of(Complex64::new(s * t * t, s * c * t))
}

/// `e^{s T^2 + i s c T} / (s (2T + i c))`, finite for any `s`.
pub fn asym_j(c: f64, t: f64, s: f64) -> Result<AsymptoticValue> {
    let j1 = asym_j1(c, t, s)?;
    Ok(AsymptoticValue::leading(j_prefactor(c, t, s) * j1.value))
}

/// Second central difference in `c` of `closed_i_infinite`, scaled to
/// `s^-2 (-i d/dc)^2 I = -s^-2 d^2 I / dc^2`.
pub fn moment_from_closed_form(c: f64, s: f64, step: f64) -> Result<Complex64> {
    require_positive("step", step)?;
    if step >= c {
        return Err(Error::invalid(format!(
            "finite difference step {step} must be below c = {c}"
        )));
    }
    let eval = |cc: f64| -> Result<Complex64> {
        let v = closed_i_infinite(cc, s)?;
        Ok(v.to_complex().expect("closed form is bounded"))
    };
    let second = (eval(c + step)? - eval(c)? * 2.0 + eval(c - step)?) / (step * step);
    Ok(-second / (s * s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cx(v: LogComplex) -> Complex64 {
        v.to_complex().unwrap()
    }

    #[test]
    fn asym_i_examples() {
        let v = cx(asym_i(1.0, 1.0).unwrap().value);
        assert!(v.re.abs() < 1e-16 && (v.im - 1.0).abs() < 1e-16);
        let v = cx(asym_i(2.0, 5.0).unwrap().value);
        assert!((v.im - 0.1).abs() < 1e-16);
        assert!(asym_i(0.0, 1.0).is_err());
        assert!(asym_i(1.0, -1.0).is_err());
        assert_eq!(asym_i(1.0, 3.0).unwrap().claimed_rel_order, 1.0);
    }

    #[test]
    fn asym_i1_examples() {
        let v = cx(asym_i1(1.0, 1.0).unwrap().value);
        assert!((v - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        let v = cx(asym_i1(1.0, 10.0).unwrap().value);
        assert!((v - Complex64::new(0.0, -0.002)).norm() < 1e-17);
    }

    #[test]
    fn asym_i1_is_second_c_derivative_of_asym_i() {
        // -s^-2 d^2/dc^2 [i/(s c)] by central differences
        let (c, s, h) = (1.3, 7.0, 1e-4);
        let f = |cc: f64| cx(asym_i(cc, s).unwrap().value);
        let fd = -(f(c + h) - f(c) * 2.0 + f(c - h)) / (h * h) / (s * s);
        let exact = cx(asym_i1(c, s).unwrap().value);
        assert!((fd - exact).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn asym_j1_examples() {
        let v = cx(asym_j1(2.0, 1.0, 1.0).unwrap().value);
        assert!((v - Complex64::new(0.25, -0.25)).norm() < 1e-15);
        let v = cx(asym_j1(1.0, 10.0, 100.0).unwrap().value);
        let expected = Complex64::new(1.0, 0.0) / (Complex64::new(20.0, 1.0) * 100.0);
        assert!((v - expected).norm() < 1e-15 * expected.norm());
    }

    #[test]
    fn asym_j_stays_finite_at_huge_s() {
        let s = 1e6;
        let v = asym_j(1.0, 1.0, s).unwrap().value;
        let expected_mag = s - (s * 5f64.sqrt()).ln();
        assert!((v.log_mag() - expected_mag).abs() < 1e-9);
        let expected_arg =
            crate::logcomplex::normalize_arg(crate::logcomplex::normalize_arg(s) - 0.5f64.atan());
        assert!((v.arg() - expected_arg).abs() < 1e-9);
        assert!(v.log_mag().is_finite());
    }

    #[test]
    fn closed_form_limits() {
        let s = 400.0;
        let v = cx(closed_i_infinite(1.0, s).unwrap());
        // im * s - 1 = 2/s + 12/s^2 + 120/s^3 + O(s^-4)
        let dev = v.im * s - 1.0;
        assert!((dev - (2.0 / s + 12.0 / (s * s) + 120.0 / s.powi(3))).abs() < 1e-7, "{dev}");
        // the real part is far below the phase resolution of the sum; check the term itself
        let re = gaussian_cos_integral(s, s).unwrap();
        assert!(re <= (-100f64).exp() * PI.sqrt() / 2.0 / 20.0 * (1.0 + 1e-12));
        assert!(v.re.abs() < 1e-15 * v.im);

        // small-s limit: the pure Gaussian value; sine part is O(c sqrt(s)) relative to it
        let s = 1e-6;
        let v = cx(closed_i_infinite(1.0, s).unwrap());
        let gauss = PI.sqrt() / (2.0 * s.sqrt());
        assert!(((v.re - gauss) / gauss).abs() < 1e-6);
        assert!(v.im.abs() < s.sqrt() * v.re);
    }
}

//! Pochhammer symbols, the confluent hypergeometric (Kummer) function
//! `F(b; c; x) = 1F1(b; c; x)` for real `x >= 0`, and the closed-form Gaussian
//! cosine and sine integrals on the half line.
//!
//! `F` is evaluated by its power series for small `x` and by the large-`x`
//! expansion
//!
//! ```text
//! F(b; c; x) ~ Gamma(c)/Gamma(b) e^x x^(b-c) sum_k (c-b)_k (1-b)_k / (k! x^k)
//! ```
//!
//! truncated at its smallest term otherwise. Large-`x` values are returned as
//! [`LogComplex`] because `e^x` leaves the `f64` range near `x = 709`.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::logcomplex::LogComplex;
use crate::sum::CompensatedSum;

/// Switch point between the series and the asymptotic branch of [`kummer_auto`].
pub const X_SWITCH: f64 = 40.0;

const SERIES_MAX_TERMS: usize = 100_000;
const ASYMPTOTIC_MAX_TERMS: usize = 2_000;

/// Rising factorial `b (b+1) ... (b+k-1)`, with `(b)_0 = 1`.
pub fn pochhammer(b: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (b + f64::from(j)))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1)
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64))
}

/// Gamma function.
///
/// Integer and half-integer arguments are evaluated exactly from their
/// product forms; everything else goes through the Lanczos approximation
/// (with reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x > 0.0 && x <= 171.0 {
        if x.fract() == 0.0 {
            return (1..x as u32).fold(1.0, |acc, k| acc * f64::from(k));
        }
        if (x - 0.5).fract() == 0.0 {
            let n = (x - 0.5) as u32;
            return PI.sqrt() * pochhammer(0.5, n);
        }
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Parameters of `F(b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

impl KummerParams {
    pub fn new(b: f64, c: f64, x: f64) -> Result<Self> {
        let p = Self { b, c, x };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.c.is_finite() && self.x.is_finite()) {
            return Err(Error::invalid("Kummer parameters must be finite"));
        }
        if is_nonpositive_integer(self.c) {
            return Err(Error::invalid(format!(
                "c must not be zero or a negative integer (got {})",
                self.c
            )));
        }
        if self.x < 0.0 {
            return Err(Error::invalid(format!("x must be >= 0 (got {})", self.x)));
        }
        Ok(())
    }
}

/// Power series of `F(b; c; x)`, stopped once the next term drops below
/// `rel_tol` times the running sum.
pub fn kummer_series(p: KummerParams, rel_tol: f64) -> Result<f64> {
    p.validate()?;
    require_positive("rel_tol", rel_tol)?;
    let KummerParams { b, c, x } = p;
    let mut sum = CompensatedSum::new();
    let mut term = 1.0;
    sum.add(term);
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (b + kf) / (c + kf) * x / (kf + 1.0);
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        let total = sum.value();
        if !total.is_finite() {
            return Err(Error::OutOfRegime(format!(
                "Kummer series overflows at x = {x}"
            )));
        }
        if term.abs() < rel_tol * total.abs() {
            return Ok(total);
        }
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// `Gamma(c)/Gamma(b)` as a signed log value.
fn gamma_ratio(b: f64, c: f64) -> Result<LogComplex> {
    if is_nonpositive_integer(b) {
        return Err(Error::OutOfRegime(format!(
            "b = {b} is a nonpositive integer; F is a polynomial and the exponential expansion degenerates"
        )));
    }
    let direct = gamma(c) / gamma(b);
    if direct.is_finite() && direct != 0.0 {
        return Ok(LogComplex::from_real(direct));
    }
    if b > 0.0 && c > 0.0 {
        return Ok(LogComplex::from_parts(ln_gamma(c) - ln_gamma(b), 0.0));
    }
    Err(Error::OutOfRegime(format!(
        "Gamma({c})/Gamma({b}) not representable"
    )))
}

fn asymptotic_envelope(p: KummerParams) -> Result<LogComplex> {
    p.validate()?;
    if p.x <= 0.0 {
        return Err(Error::invalid(format!(
            "asymptotic expansion needs x > 0 (got {})",
            p.x
        )));
    }
    let ratio = gamma_ratio(p.b, p.c)?;
    // separate shifts keep e^x exact, so a later e^-x cancels without rounding
    Ok(ratio.scale_exp(p.x).scale_exp((p.b - p.c) * p.x.ln()))
}

/// Leading term `Gamma(c)/Gamma(b) e^x x^(b-c)` of the large-`x` behaviour,
/// without any correction. Its relative error decays like `1/x`.
pub fn kummer_leading(p: KummerParams) -> Result<LogComplex> {
    asymptotic_envelope(p)
}

/// Large-`x` expansion of `F(b; c; x)` with the correction series truncated
/// at its smallest term.
pub fn kummer_asymptotic(p: KummerParams) -> Result<LogComplex> {
    let envelope = asymptotic_envelope(p)?;
    let KummerParams { b, c, x } = p;
    let mut sum = CompensatedSum::new();
    let mut term = 1.0_f64;
    sum.add(term);
    for k in 0..ASYMPTOTIC_MAX_TERMS {
        let kf = k as f64;
        let next = term * (c - b + kf) * (1.0 - b + kf) / ((kf + 1.0) * x);
        if next == 0.0 || next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum.add(term);
        if term.abs() < f64::EPSILON * 0.25 * sum.value().abs() {
            break;
        }
    }
    Ok(envelope * LogComplex::from_real(sum.value()))
}

/// `F(b; c; x)`: series below [`X_SWITCH`], asymptotic expansion above.
pub fn kummer_auto(p: KummerParams) -> Result<LogComplex> {
    p.validate()?;
    if p.x < X_SWITCH {
        kummer_series(p, 0.5 * f64::EPSILON).map(LogComplex::from_real)
    } else {
        kummer_asymptotic(p)
    }
}

/// `int_0^inf e^{-a x^2} cos(x y) dx = sqrt(pi)/(2 sqrt(a)) e^{-y^2/(4a)}`.
pub fn gaussian_cos_integral(a: f64, y: f64) -> Result<f64> {
    require_positive("a", a)?;
    Ok(0.5 * (PI / a).sqrt() * (-y * y / (4.0 * a)).exp())
}

/// `int_0^inf e^{-a x^2} sin(x y) dx = y e^{-y^2/(4a)}/(2a) F(1/2; 3/2; y^2/(4a))`.
///
/// The decaying exponential and the growing Kummer factor are combined in
/// log form, so the product is accurate for any `y`.
pub fn gaussian_sin_integral(a: f64, y: f64) -> Result<f64> {
    require_positive("a", a)?;
    if !y.is_finite() {
        return Err(Error::invalid(format!("y must be finite (got {y})")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let x = y * y / (4.0 * a);
    let f = kummer_auto(KummerParams::new(0.5, 1.5, x)?)?;
    let damped = f.scale_exp(-x) * LogComplex::from_real(y / (2.0 * a));
    damped
        .to_complex()
        .map(|z| z.re)
        .ok_or_else(|| Error::OutOfRegime(format!("sine integral not representable at y = {y}")))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn p(b: f64, c: f64, x: f64) -> KummerParams {
        KummerParams::new(b, c, x).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(2.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(5.0), 24.0);
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-16);
        assert!(rel(gamma(1.5), 0.5 * PI.sqrt()) < 1e-16);
        // Gamma(0.3), Gamma(-1.7), Gamma(7.25) from a 30-digit reference
        assert!(rel(gamma(0.3), 2.991_568_987_687_590_9) < 1e-14);
        assert!(rel(gamma(-1.7), 2.513_923_519_065_202_0) < 1e-14);
        assert!(rel(gamma(7.25), 1_155.381_013_919_989_7) < 1e-14);
        assert!(rel(ln_gamma(200.5), 860.582_203_509_782_5) < 1e-14);
        assert!(gamma(-3.0).is_nan());
    }

    #[test]
    fn series_examples() {
        assert_eq!(kummer_series(p(0.3, 2.5, 0.0), 1e-16).unwrap(), 1.0);
        let e = kummer_series(p(1.0, 1.0, 1.0), 1e-17).unwrap();
        assert!(rel(e, std::f64::consts::E) < 1e-15);
        // 40-digit reference; equals sqrt(pi)/2 * erfi(1)
        let f = kummer_series(p(0.5, 1.5, 1.0), 1e-17).unwrap();
        assert!(rel(f, 1.462_651_745_907_181_6) < 1e-15);
    }

    #[test]
    fn series_rejects_bad_denominator() {
        assert!(KummerParams::new(0.5, 0.0, 1.0).is_err());
        assert!(KummerParams::new(0.5, -2.0, 1.0).is_err());
        assert!(KummerParams::new(0.5, 1.5, -1.0).is_err());
        let raw = KummerParams { b: 1.0, c: -3.0, x: 1.0 };
        assert!(kummer_series(raw, 1e-12).is_err());
    }

    #[test]
    fn series_terminates_on_polynomial_case() {
        // F(-2; c; x) = 1 - 2x/c + x^2/(c(c+1))
        let (c, x) = (1.5, 3.0);
        let exact = 1.0 - 2.0 * x / c + x * x / (c * (c + 1.0));
        assert!(rel(kummer_series(p(-2.0, c, x), 1e-16).unwrap(), exact) < 1e-15);
    }

    #[test]
    fn asymptotic_examples() {
        let lead = kummer_leading(p(0.5, 1.5, 50.0)).unwrap();
        assert!(rel(lead.to_complex().unwrap().re, 50f64.exp() / 100.0) < 1e-13);
        let series = kummer_series(p(0.5, 1.5, 50.0), 1e-17).unwrap();
        let dev = lead.rel_err(&LogComplex::from_real(series)).unwrap();
        // 1 - 1/1.0103161564918598872 from a 40-digit reference
        assert!(dev <= 0.02 && (dev - 0.010_210_820_074_062).abs() < 1e-11, "{dev}");

        let series = kummer_series(p(0.5, 1.5, 200.0), 1e-17).unwrap();
        let dev = kummer_leading(p(0.5, 1.5, 200.0))
            .unwrap()
            .rel_err(&LogComplex::from_real(series))
            .unwrap();
        assert!(dev <= 0.005, "{dev}");

        let ex = kummer_asymptotic(p(1.0, 1.0, 100.0)).unwrap();
        assert!((ex.log_mag() - 100.0).abs() < 1e-13);
        assert_eq!(ex.arg(), 0.0);

        assert!(kummer_asymptotic(KummerParams { b: 0.5, c: 1.5, x: 0.0 }).is_err());
    }

    #[test]
    fn optimal_truncation_matches_series() {
        for &x in &[45.0, 60.0, 100.0, 300.0] {
            let s = kummer_series(p(0.5, 1.5, x), 1e-17).unwrap();
            let a = kummer_asymptotic(p(0.5, 1.5, x)).unwrap();
            let e = a.rel_err(&LogComplex::from_real(s)).unwrap();
            assert!(e < 1e-13, "x = {x}: {e}");
        }
    }

    #[test]
    fn auto_is_continuous_across_switch() {
        assert_eq!(kummer_auto(p(0.5, 1.5, 0.0)).unwrap(), LogComplex::ONE);
        for delta in [1e-9, 1e-3, 0.5] {
            let lo = kummer_auto(p(0.5, 1.5, X_SWITCH - delta)).unwrap();
            let lo_asym = kummer_asymptotic(p(0.5, 1.5, X_SWITCH - delta)).unwrap();
            let hi = kummer_auto(p(0.5, 1.5, X_SWITCH + delta)).unwrap();
            let hi_series =
                kummer_series(p(0.5, 1.5, X_SWITCH + delta), 1e-17).unwrap();
            assert!(lo.rel_err(&lo_asym).unwrap() <= 1e-10);
            assert!(hi.rel_err(&LogComplex::from_real(hi_series)).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn auto_far_asymptotic_branch() {
        // ln F(1/2; 3/2; 1000) from a 40-digit reference
        let f = kummer_auto(p(0.5, 1.5, 1000.0)).unwrap();
        assert!((f.log_mag() - 992.399_598_167_005_1).abs() < 1e-12 * 992.4);
        assert_eq!(f.arg(), 0.0);
    }

    #[test]
    fn gaussian_integral_examples() {
        let half_sqrt_pi = 0.886_226_925_452_758_0;
        assert!(rel(gaussian_cos_integral(1.0, 0.0).unwrap(), half_sqrt_pi) < 1e-15);
        assert!(
            rel(gaussian_cos_integral(1.0, 2.0).unwrap(), half_sqrt_pi * (-1f64).exp()) < 1e-15
        );
        assert_eq!(gaussian_sin_integral(1.0, 0.0).unwrap(), 0.0);
        assert!(gaussian_cos_integral(0.0, 1.0).is_err());
        assert!(gaussian_sin_integral(-1.0, 1.0).is_err());

        // 40-digit references for the two integrals
        assert!((gaussian_cos_integral(2.0, 3.0).unwrap() - 0.203_445_763_527_289_35).abs() < 1e-15);
        assert!((gaussian_sin_integral(1.0, 1.0).unwrap() - 0.424_436_383_502_022_3).abs() < 1e-15);

        let s = 400.0;
        let im = gaussian_sin_integral(s, s).unwrap();
        let dev = rel(im, 1.0 / s);
        assert!(dev <= 0.0055 && dev > 0.004, "{dev}");
        assert!(gaussian_sin_integral(1.0, -1.0).unwrap() < 0.0);
    }

    proptest! {
        #[test]
        fn pochhammer_recurrence(b in -20.0f64..20.0, k in 0u32..40) {
            let lhs = pochhammer(b, k + 1);
            let rhs = pochhammer(b, k) * (b + f64::from(k));
            prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
        }

        #[test]
        fn series_reproduces_exponential(x in 0.0f64..30.0) {
            let f = kummer_series(p(1.0, 1.0, x), 1e-17).unwrap();
            prop_assert!(rel(f, x.exp()) <= 1e-12);
        }
    }
}

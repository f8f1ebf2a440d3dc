//! Adaptive Gauss-Kronrod oracle for the complex-phase integrals
//!
//! ```text
//! I(s)  = int_0^T e^{-s x^2} e^{i c s x} dx          (T finite or infinite)
//! I1(s) = int_0^T e^{-s x^2} e^{i c s x} x^2 dx
//! J(s)  = int_0^T e^{s x^2} e^{i c s x} dx
//! J1(s) = int_0^T e^{-s y (2T + i c - y)} dy
//! ```
//!
//! All integrands are evaluated in forms whose magnitude is at most one; the
//! factored-out scale is carried in the [`LogComplex`] result.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::logcomplex::LogComplex;
use crate::sum::CompensatedSum;

/// Largest `s T^2` accepted by [`integrate_j_direct`].
pub const OVERFLOW_GUARD: f64 = 600.0;
/// Infinite ranges are cut where `e^{-s x^2} = e^{-TAIL_EXPONENT}`.
pub const TAIL_EXPONENT: f64 = 50.0;
/// Maximum number of integrand evaluations per integral.
pub const EVALUATION_BUDGET: usize = 10_000_000;
/// Initial panels span at most this many radians of the phase `c s x`.
pub const PANEL_PHASE: f64 = 4.0 * PI;

const REL_TOL_MIN: f64 = 1e-14;
const REL_TOL_MAX: f64 = 1e-2;

/// Which integral an [`IntegralSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    IFinite,
    IInfinite,
    JDirect,
    J1Reduced,
    I1Moment,
}

impl Family {
    /// Short name used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Family::IFinite | Family::IInfinite => "I",
            Family::JDirect => "J",
            Family::J1Reduced => "J1",
            Family::I1Moment => "I1",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    Infinite,
}

impl Upper {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Upper::Finite(t) => Some(t),
            Upper::Infinite => None,
        }
    }
}

impl FromStr for Upper {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.eq_ignore_ascii_case("inf") {
            return Ok(Upper::Infinite);
        }
        trimmed
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .map(Upper::Finite)
            .ok_or_else(|| Error::invalid(format!("T must be a number or \"inf\" (got {s:?})")))
    }
}

impl fmt::Display for Upper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Upper::Finite(t) => write!(f, "{t}"),
            Upper::Infinite => f.write_str("inf"),
        }
    }
}

/// A problem instance: family, phase coefficient `c`, limit `T`, parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralSpec {
    pub family: Family,
    pub c: f64,
    pub upper: Upper,
    pub s: f64,
}

impl IntegralSpec {
    pub fn new(family: Family, c: f64, upper: Upper, s: f64) -> Result<Self> {
        require_positive("c", c)?;
        require_positive("s", s)?;
        match (family, upper) {
            (Family::IInfinite | Family::I1Moment, Upper::Infinite) => {}
            (Family::IInfinite, Upper::Finite(_)) => {
                return Err(Error::invalid("the infinite-limit family needs T = inf"))
            }
            (_, Upper::Infinite) => {
                return Err(Error::invalid(format!(
                    "family {family} needs a finite T > 0"
                )))
            }
            (_, Upper::Finite(t)) => require_positive("T", t)?,
        }
        Ok(Self {
            family,
            c,
            upper,
            s,
        })
    }

    /// `I` with the family chosen from the limit.
    pub fn i(c: f64, upper: Upper, s: f64) -> Result<Self> {
        let family = match upper {
            Upper::Finite(_) => Family::IFinite,
            Upper::Infinite => Family::IInfinite,
        };
        Self::new(family, c, upper, s)
    }

    fn t(&self) -> f64 {
        self.upper
            .finite()
            .expect("validated: finite T for this family")
    }
}

/// Oracle value with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: LogComplex,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
}

// 15-point Kronrod nodes (descending, centre last) and weights, with the
// embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const GK_POINTS: usize = 15;

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        scaled = resasc * (200.0 * scaled / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * resabs);
    }
    scaled
}

fn roundoff_floor(resabs: f64) -> f64 {
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        50.0 * f64::EPSILON * resabs
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One-component statistics of a Gauss-Kronrod panel.
fn component_error(vals: &[f64; GK_POINTS], half: f64) -> (f64, f64, f64) {
    // vals layout: [centre, (left_j, right_j) for j = 0..7]
    let fc = vals[0];
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kronrod.abs();
    for j in 0..7 {
        let (l, r) = (vals[1 + 2 * j], vals[2 + 2 * j]);
        kronrod += WGK[j] * (l + r);
        resabs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (l + r);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        let (l, r) = (vals[1 + 2 * j], vals[2 + 2 * j]);
        resasc += WGK[j] * ((l - mean).abs() + (r - mean).abs());
    }
    let h = half.abs();
    let err = rescale_error((kronrod - gauss) * half, resabs * h, resasc * h);
    (kronrod * half, err, resabs * h)
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut re = [0.0; GK_POINTS];
    let mut im = [0.0; GK_POINTS];
    let fc = f(centre);
    re[0] = fc.re;
    im[0] = fc.im;
    for j in 0..7 {
        let dx = half * XGK[j];
        let l = f(centre - dx);
        let r = f(centre + dx);
        re[1 + 2 * j] = l.re;
        re[2 + 2 * j] = r.re;
        im[1 + 2 * j] = l.im;
        im[2 + 2 * j] = r.im;
    }
    let (vr, er, ar) = component_error(&re, half);
    let (vi, ei, ai) = component_error(&im, half);
    Panel {
        a,
        b,
        value: Complex64::new(vr, vi),
        err: er + ei,
        floor: roundoff_floor(ar) + roundoff_floor(ai),
    }
}

/// Raw output of [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub abs_err: f64,
    pub evaluations: usize,
}

/// Globally adaptive 15-point Gauss-Kronrod integration of a complex-valued
/// function over `[a, b]`.
///
/// The range starts out split into `panels` equal pieces; the panel with the
/// largest error is bisected until the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)`. Panels whose error sits at the
/// floating point roundoff floor are retired. Exhausting `budget`
/// evaluations is an error, never a silent low-accuracy answer.
pub fn integrate_adaptive<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!("integration range [{a}, {b}] is empty or not finite")));
    }
    let panels = panels.max(1);
    if panels.saturating_mul(GK_POINTS) > budget {
        return Err(Error::BudgetExceeded {
            budget,
            abs_err: f64::INFINITY,
            target: 0.0,
        });
    }

    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    let mut retired: Vec<Panel> = Vec::new();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err_sum = 0.0;
    let mut floor_sum = 0.0;
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { a + width * (k + 1) as f64 };
        let p = gk15(&f, lo, hi);
        value += p.value;
        err_sum += p.err;
        floor_sum += p.floor;
        heap.push(p);
    }
    let mut evaluations = panels * GK_POINTS;

    loop {
        let target = abs_tol.max(rel_tol * value.norm());
        if err_sum <= target {
            break;
        }
        // every panel error is at least its floor; refinement moves the floor sum only slightly
        if target < 0.5 * floor_sum {
            return Err(Error::RoundoffLimited {
                abs_err: err_sum,
                target,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::RoundoffLimited {
                abs_err: err_sum,
                target,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.err <= worst.floor || mid <= worst.a || mid >= worst.b {
            retired.push(worst);
            continue;
        }
        if evaluations + 2 * GK_POINTS > budget {
            return Err(Error::BudgetExceeded {
                budget,
                abs_err: err_sum,
                target,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        evaluations += 2 * GK_POINTS;
        value += left.value + right.value - worst.value;
        err_sum += left.err + right.err - worst.err;
        floor_sum += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }

    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(retired);
    all.sort_by(|p, q| p.a.total_cmp(&q.a));
    let re: CompensatedSum = all.iter().map(|p| p.value.re).sum();
    let im: CompensatedSum = all.iter().map(|p| p.value.im).sum();
    let err: CompensatedSum = all.iter().map(|p| p.err).sum();
    Ok(Estimate {
        value: Complex64::new(re.value(), im.value()),
        abs_err: err.value(),
        evaluations,
    })
}

fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > REL_TOL_MIN && rel_tol < REL_TOL_MAX {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "rel_tol must lie in ({REL_TOL_MIN:e}, {REL_TOL_MAX:e}) (got {rel_tol:e})"
        )))
    }
}

fn panel_count(length: f64, frequency: f64) -> usize {
    ((length * frequency / PANEL_PHASE).ceil() as usize).max(1)
}

fn finish(est: Estimate, scale: LogComplex) -> QuadratureResult {
    let value = LogComplex::from_complex(est.value) * scale;
    QuadratureResult {
        value,
        abs_err_estimate: est.abs_err * scale.abs(),
        evaluations: est.evaluations,
    }
}

fn integrate_scaled<F>(f: F, lo: f64, hi: f64, frequency: f64, rel_tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    integrate_adaptive(
        f,
        lo,
        hi,
        panel_count(hi - lo, frequency),
        rel_tol,
        0.0,
        EVALUATION_BUDGET,
    )
}

/// `e^{-s x^2 + i c s x}`.
pub fn i_integrand(c: f64, s: f64, x: f64) -> Complex64 {
    Complex64::from_polar((-s * x * x).exp(), c * s * x)
}

/// `e^{-s y (2T - y)} e^{-i s c y}`, the reduced `J` integrand; magnitude <= 1 on `[0, T]`.
pub fn j1_integrand(c: f64, t: f64, s: f64, y: f64) -> Complex64 {
    Complex64::from_polar((-s * y * (2.0 * t - y)).exp(), -s * c * y)
}

fn limit_for_i(spec: &IntegralSpec) -> f64 {
    match spec.upper {
        Upper::Finite(t) => t,
        Upper::Infinite => (TAIL_EXPONENT / spec.s).sqrt(),
    }
}

/// `int_lo^hi e^{-s x^2 + i c s x} dx` for `0 <= lo < hi`, with `e^{-s lo^2}`
/// factored out of the integrand.
pub fn integrate_i_segment(c: f64, s: f64, lo: f64, hi: f64, rel_tol: f64) -> Result<QuadratureResult> {
    require_positive("c", c)?;
    require_positive("s", s)?;
    check_rel_tol(rel_tol)?;
    if !(lo >= 0.0 && lo < hi) {
        return Err(Error::invalid(format!("need 0 <= lo < hi (got [{lo}, {hi}])")));
    }
    let est = integrate_scaled(
        |x| Complex64::from_polar((-s * (x - lo) * (x + lo)).exp(), c * s * x),
        lo,
        hi,
        c * s,
        rel_tol,
    )?;
    Ok(finish(est, LogComplex::from_parts(-s * lo * lo, 0.0)))
}

/// `int_lo^hi` of the reduced `J` integrand for `0 <= lo < hi <= T`, scaled by
/// the integrand magnitude at `lo`.
pub fn integrate_j1_segment(
    c: f64,
    t: f64,
    s: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    require_positive("c", c)?;
    require_positive("T", t)?;
    require_positive("s", s)?;
    check_rel_tol(rel_tol)?;
    if !(lo >= 0.0 && lo < hi && hi <= t) {
        return Err(Error::invalid(format!(
            "need 0 <= lo < hi <= T (got [{lo}, {hi}], T = {t})"
        )));
    }
    let shift = s * lo * (2.0 * t - lo);
    let est = integrate_scaled(
        |y| Complex64::from_polar((shift - s * y * (2.0 * t - y)).exp(), -s * c * y),
        lo,
        hi,
        c * s,
        rel_tol,
    )?;
    Ok(finish(est, LogComplex::from_parts(-shift, 0.0)))
}

/// `I(s)` for finite `T`, or for `T = inf` truncated at `sqrt(TAIL_EXPONENT / s)`.
pub fn integrate_i(spec: &IntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    if !matches!(spec.family, Family::IFinite | Family::IInfinite) {
        return Err(Error::invalid(format!("integrate_i called with family {}", spec.family)));
    }
    integrate_i_segment(spec.c, spec.s, 0.0, limit_for_i(spec), rel_tol)
}

/// `I1(s) = int_0^T x^2 e^{-s x^2 + i c s x} dx`; `T` may be infinite.
pub fn integrate_i1(spec: &IntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    if spec.family != Family::I1Moment {
        return Err(Error::invalid(format!("integrate_i1 called with family {}", spec.family)));
    }
    check_rel_tol(rel_tol)?;
    let (c, s) = (spec.c, spec.s);
    let est = integrate_scaled(
        |x| x * x * i_integrand(c, s, x),
        0.0,
        limit_for_i(spec),
        c * s,
        rel_tol,
    )?;
    Ok(finish(est, LogComplex::ONE))
}

/// `J1(s) = int_0^T e^{-s y (2T + i c - y)} dy`.
pub fn integrate_j1(spec: &IntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    if spec.family != Family::J1Reduced {
        return Err(Error::invalid(format!("integrate_j1 called with family {}", spec.family)));
    }
    let t = spec.t();
    integrate_j1_segment(spec.c, t, spec.s, 0.0, t, rel_tol)
}

/// `J(s) = int_0^T e^{s (x^2 + i c x)} dx` by direct quadrature.
///
/// Only legal while `s T^2 <= OVERFLOW_GUARD`; larger `s` must go through
/// the reduced integrand.
pub fn integrate_j_direct(spec: &IntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    if spec.family != Family::JDirect {
        return Err(Error::invalid(format!(
            "integrate_j_direct called with family {}",
            spec.family
        )));
    }
    check_rel_tol(rel_tol)?;
    let (c, s, t) = (spec.c, spec.s, spec.t());
    let exponent = s * t * t;
    if exponent > OVERFLOW_GUARD {
        return Err(Error::OverflowGuard {
            exponent,
            guard: OVERFLOW_GUARD,
        });
    }
    let est = integrate_scaled(
        |x| Complex64::from_polar((s * (x - t) * (x + t)).exp(), s * c * x),
        0.0,
        t,
        c * s,
        rel_tol,
    )?;
    Ok(finish(est, LogComplex::from_parts(exponent, 0.0)))
}

/// Dispatches on the spec's family.
pub fn integrate(spec: &IntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    match spec.family {
        Family::IFinite | Family::IInfinite => integrate_i(spec, rel_tol),
        Family::I1Moment => integrate_i1(spec, rel_tol),
        Family::J1Reduced => integrate_j1(spec, rel_tol),
        Family::JDirect => integrate_j_direct(spec, rel_tol),
    }
}

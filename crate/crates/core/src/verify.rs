//! Empirical verification harness.
//!
//! A sweep evaluates one family on a geometric grid of `s`, compares the
//! numeric value (quadrature oracle, or the closed form for `I` at `T = inf`)
//! with the leading asymptotic term, and fits the decay order of the relative
//! error by least squares in log-log coordinates.
//!
//! [`tail_test`] bounds the contribution of `[eps, T]` to `I`, and
//! [`epsilon_split`] rebuilds `J1` from the pieces of the endpoint argument:
//! `J2 = int_0^eps`, the tail `int_eps^T`, and the linearised
//! `J3 = int_0^eps e^{-s y (2T + i c)} dy`.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::asymptotics::{asym_i, asym_i1, asym_j, asym_j1, closed_i_infinite, j_prefactor};
use crate::error::{require_positive, Error, Result};
use crate::logcomplex::LogComplex;
use crate::quadrature::{
    integrate_i, integrate_i1, integrate_i_segment, integrate_j1, integrate_j1_segment, Family,
    IntegralSpec, Upper,
};

/// Default `delta` in `eps = s^{-(1/2 + delta)}`.
pub const DEFAULT_DELTA: f64 = 0.1;
/// Slack constant applied to the explicit remainder bound of the splitting.
pub const REMAINDER_SLACK: f64 = 10.0;
/// Grid points with `rel_err < FIT_FLOOR_FACTOR * rel_tol` are excluded from the fit.
pub const FIT_FLOOR_FACTOR: f64 = 100.0;
pub const MIN_GRID_POINTS: usize = 4;
/// Quadrature tolerance used by [`tail_test`] and [`epsilon_split`].
pub const SPLIT_REL_TOL: f64 = 1e-10;

/// How sweep rows are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon data parallelism; identical to `Sequential` without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub c: f64,
    pub upper: Upper,
    pub s_grid: Vec<f64>,
    pub rel_tol: f64,
}

impl SweepConfig {
    pub fn new(family: Family, c: f64, upper: Upper, s_grid: Vec<f64>, rel_tol: f64) -> Result<Self> {
        let cfg = Self {
            family,
            c,
            upper,
            s_grid,
            rel_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.s_grid.len() < MIN_GRID_POINTS {
            return Err(Error::invalid(format!(
                "s grid needs at least {MIN_GRID_POINTS} points for an order fit (got {})",
                self.s_grid.len()
            )));
        }
        if self.s_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::invalid("s grid must be strictly increasing"));
        }
        require_positive("rel_tol", self.rel_tol)?;
        for &s in &self.s_grid {
            IntegralSpec::new(self.family, self.c, self.upper, s)?;
        }
        Ok(())
    }

    fn spec(&self, s: f64) -> Result<IntegralSpec> {
        IntegralSpec::new(self.family, self.c, self.upper, s)
    }
}

/// `points` values from `s_min` to `s_max` in geometric progression.
pub fn geometric_grid(s_min: f64, s_max: f64, points: usize) -> Result<Vec<f64>> {
    require_positive("s_min", s_min)?;
    require_positive("s_max", s_max)?;
    if s_min >= s_max {
        return Err(Error::invalid(format!(
            "s_min must be below s_max (got {s_min} >= {s_max})"
        )));
    }
    if points < MIN_GRID_POINTS {
        return Err(Error::invalid(format!(
            "points must be >= {MIN_GRID_POINTS} (got {points})"
        )));
    }
    let (lo, hi) = (s_min.ln(), s_max.ln());
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => s_min,
            i if i + 1 == points => s_max,
            i => (lo + step * i as f64).exp(),
        })
        .collect())
}

/// One `s` of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub s: f64,
    pub numeric: LogComplex,
    pub asymptotic: LogComplex,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub family: Family,
    pub c: f64,
    pub upper: Upper,
    pub rows: Vec<SweepRow>,
    /// Negated least-squares slope of `ln rel_err` against `ln s`.
    pub fitted_order: f64,
    pub fit_r2: f64,
    /// Number of rows above the oracle floor that entered the fit.
    pub fit_points: usize,
    /// First row from which `rel_err` decreases strictly to the end of the grid.
    pub regime_entry: usize,
}

/// Numeric reference value for a spec: the closed form for `I` at `T = inf`,
/// quadrature otherwise. `J` goes through `e^{s T^2 + i s c T} J1`.
pub fn numeric_value(spec: &IntegralSpec, rel_tol: f64) -> Result<LogComplex> {
    match spec.family {
        Family::IInfinite => closed_i_infinite(spec.c, spec.s),
        Family::IFinite => Ok(integrate_i(spec, rel_tol)?.value),
        Family::I1Moment => Ok(integrate_i1(spec, rel_tol)?.value),
        Family::J1Reduced => Ok(integrate_j1(spec, rel_tol)?.value),
        Family::JDirect => {
            let reduced = IntegralSpec::new(Family::J1Reduced, spec.c, spec.upper, spec.s)?;
            let t = spec.upper.finite().expect("validated finite T");
            Ok(j_prefactor(spec.c, t, spec.s) * integrate_j1(&reduced, rel_tol)?.value)
        }
    }
}

/// Leading asymptotic term for a spec.
pub fn asymptotic_value(spec: &IntegralSpec) -> Result<LogComplex> {
    let (c, s) = (spec.c, spec.s);
    let v = match spec.family {
        Family::IFinite | Family::IInfinite => asym_i(c, s)?,
        Family::I1Moment => asym_i1(c, s)?,
        Family::J1Reduced | Family::JDirect => {
            let t = spec.upper.finite().expect("validated finite T");
            if spec.family == Family::JDirect {
                asym_j(c, t, s)?
            } else {
                asym_j1(c, t, s)?
            }
        }
    };
    Ok(v.value)
}

pub fn evaluate_point(spec: &IntegralSpec, rel_tol: f64) -> Result<SweepRow> {
    let numeric = numeric_value(spec, rel_tol)?;
    let asymptotic = asymptotic_value(spec)?;
    Ok(SweepRow {
        s: spec.s,
        numeric,
        asymptotic,
        rel_err: numeric.rel_err(&asymptotic)?,
    })
}

/// Least-squares fit of `ln err = a - p ln s`; returns `(p, R^2)`.
pub fn fit_order(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::OutOfRegime(format!(
            "order fit needs at least 3 usable points (got {})",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(s, _)| s.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok((-slope, r2))
}

fn regime_entry(rows: &[SweepRow]) -> usize {
    let mut entry = rows.len().saturating_sub(1);
    while entry > 0 && rows[entry - 1].rel_err > rows[entry].rel_err {
        entry -= 1;
    }
    entry
}

fn compute_rows(cfg: &SweepConfig, exec: Execution) -> Vec<Result<SweepRow>> {
    let row = |&s: &f64| {
        cfg.spec(s)
            .and_then(|spec| evaluate_point(&spec, cfg.rel_tol))
            .map_err(|e| Error::AtGridPoint {
                s,
                source: Box::new(e),
            })
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => cfg.s_grid.par_iter().map(row).collect(),
        _ => cfg.s_grid.iter().map(row).collect(),
    }
}

/// Runs a sweep with the default scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    run_sweep_with(cfg, Execution::default())
}

/// Runs a sweep; rows come back in grid order whatever the scheduling.
pub fn run_sweep_with(cfg: &SweepConfig, exec: Execution) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let rows = compute_rows(cfg, exec)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let floor = FIT_FLOOR_FACTOR * cfg.rel_tol;
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.rel_err >= floor && r.rel_err > 0.0)
        .map(|r| (r.s, r.rel_err))
        .collect();
    let (fitted_order, fit_r2) = fit_order(&usable)?;
    Ok(ConvergenceReport {
        family: cfg.family,
        c: cfg.c,
        upper: cfg.upper,
        regime_entry: regime_entry(&rows),
        fit_points: usable.len(),
        rows,
        fitted_order,
        fit_r2,
    })
}

/// Outcome of [`tail_test`]. Logs are kept because the bound underflows for
/// large `s eps^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub lhs: f64,
    pub bound: f64,
    pub ln_lhs: f64,
    pub ln_bound: f64,
}

impl TailCheck {
    pub fn holds(&self) -> bool {
        self.ln_lhs <= self.ln_bound
    }
}

/// `|int_eps^T e^{-s x^2 + i c s x} dx|` against `(T - eps) e^{-s eps^2}`.
pub fn tail_test(c: f64, s: f64, eps: f64, t: f64) -> Result<TailCheck> {
    require_positive("c", c)?;
    require_positive("s", s)?;
    require_positive("eps", eps)?;
    if eps >= t {
        return Err(Error::invalid(format!("need eps < T (got eps = {eps}, T = {t})")));
    }
    let tail = integrate_i_segment(c, s, eps, t, SPLIT_REL_TOL)?.value;
    let ln_lhs = if tail.is_zero() {
        f64::NEG_INFINITY
    } else {
        tail.log_mag()
    };
    let ln_bound = (t - eps).ln() - s * eps * eps;
    Ok(TailCheck {
        lhs: ln_lhs.exp(),
        bound: ln_bound.exp(),
        ln_lhs,
        ln_bound,
    })
}

/// The pieces of the endpoint splitting of `J1` at `eps = s^{-(1/2 + delta)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSplit {
    pub s: f64,
    pub delta: f64,
    pub epsilon: f64,
    /// Full `J1` by quadrature.
    pub j1: LogComplex,
    /// `int_0^eps` of the exact reduced integrand.
    pub j2: LogComplex,
    /// `(1 - e^{-s eps (2T + i c)}) / (s (2T + i c))`.
    pub j3: LogComplex,
    /// `J1 - J2 = int_eps^T`, integrated directly.
    pub tail: LogComplex,
    /// `(T - eps) e^{-s eps (2T - eps)}`.
    pub remainder_bound: f64,
    pub ln_remainder_bound: f64,
    /// `e^{s eps^2} - 1`, the size of the `[1 + o(1)]` factor.
    pub o1_bound: f64,
}

impl EpsilonSplit {
    /// `|J1 - J2| <= slack * remainder_bound`, compared in log form.
    pub fn remainder_within(&self, slack: f64) -> bool {
        self.tail.is_zero() || self.tail.log_mag() <= slack.ln() + self.ln_remainder_bound
    }

    /// `|J2 / J3 - 1|`.
    pub fn linearisation_error(&self) -> f64 {
        self.j2
            .rel_err(&self.j3)
            .expect("J3 is nonzero for eps > 0")
    }

    pub fn s_eps(&self) -> f64 {
        self.s * self.epsilon
    }

    pub fn s_eps_sq(&self) -> f64 {
        self.s * self.epsilon * self.epsilon
    }
}

fn complex_expm1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

pub fn epsilon_split(c: f64, t: f64, s: f64, delta: f64) -> Result<EpsilonSplit> {
    require_positive("c", c)?;
    require_positive("T", t)?;
    require_positive("s", s)?;
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!("delta must lie in (0, 0.5) (got {delta})")));
    }
    let epsilon = s.powf(-(0.5 + delta));
    if epsilon >= t {
        return Err(Error::OutOfRegime(format!(
            "eps = {epsilon} >= T = {t}; s = {s} is too small for the splitting"
        )));
    }
    let reduced = IntegralSpec::new(Family::J1Reduced, c, Upper::Finite(t), s)?;
    let j1 = integrate_j1(&reduced, SPLIT_REL_TOL)?.value;
    let j2 = integrate_j1_segment(c, t, s, 0.0, epsilon, SPLIT_REL_TOL)?.value;
    let tail = integrate_j1_segment(c, t, s, epsilon, t, SPLIT_REL_TOL)?.value;

    let a = Complex64::new(2.0 * t, c);
    let j3 = -complex_expm1(-a * (s * epsilon)) / (a * s);

    let ln_remainder_bound = (t - epsilon).ln() - s * epsilon * (2.0 * t - epsilon);
    Ok(EpsilonSplit {
        s,
        delta,
        epsilon,
        j1,
        j2,
        j3: LogComplex::from_complex(j3),
        tail,
        remainder_bound: ln_remainder_bound.exp(),
        ln_remainder_bound,
        o1_bound: (s * epsilon * epsilon).exp_m1(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_short_or_unordered() {
        assert!(geometric_grid(1.0, 10.0, 3).is_err());
        assert!(geometric_grid(10.0, 1.0, 5).is_err());
        let g = geometric_grid(32.0, 16384.0, 10).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 32.0);
        assert_eq!(g[9], 16384.0);
        assert!((g[1] - 64.0).abs() < 1e-12);

        assert!(SweepConfig::new(
            Family::J1Reduced,
            1.0,
            Upper::Finite(1.0),
            vec![1.0, 2.0, 3.0],
            1e-10
        )
        .is_err());
        assert!(SweepConfig::new(
            Family::J1Reduced,
            1.0,
            Upper::Finite(1.0),
            vec![1.0, 3.0, 2.0, 4.0],
            1e-10
        )
        .is_err());
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = (0..6)
            .map(|k| {
                let s = 10f64.powi(k);
                (s, 3.0 * s.powf(-1.25))
            })
            .collect();
        let (p, r2) = fit_order(&pts).unwrap();
        assert!((p - 1.25).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert!(fit_order(&pts[..2]).is_err());
    }

    #[test]
    fn regime_entry_finds_monotone_tail() {
        let row = |s: f64, e: f64| SweepRow {
            s,
            numeric: LogComplex::ONE,
            asymptotic: LogComplex::ONE,
            rel_err: e,
        };
        let rows = [row(1.0, 0.1), row(2.0, 0.3), row(3.0, 0.2), row(4.0, 0.1)];
        assert_eq!(regime_entry(&rows), 1);
    }

    #[test]
    fn tail_test_preconditions() {
        assert!(tail_test(1.0, 100.0, 1.0, 1.0).is_err());
        assert!(tail_test(1.0, 100.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn epsilon_split_preconditions() {
        assert!(epsilon_split(1.0, 1.0, 100.0, 0.5).is_err());
        assert!(epsilon_split(1.0, 1.0, 100.0, 0.0).is_err());
        assert!(matches!(
            epsilon_split(1.0, 0.01, 2.0, 0.1),
            Err(Error::OutOfRegime(_))
        ));
    }

    #[test]
    fn complex_expm1_small_argument() {
        let z = Complex64::new(1e-10, -2e-10);
        let e = complex_expm1(z);
        assert!((e - z).norm() < 1e-19);
    }
}

//! Acceptance assertions behind `laplace-phase check <suite>`.
//!
//! Every tolerance used here is fixed in this file. A numerical failure inside
//! a check is reported as a failed assertion, not as an error.

use std::fmt;

use num_complex::Complex64;

use crate::asymptotics::{
    asym_i1, asym_j, asym_j1, closed_i_infinite, j_prefactor, moment_from_closed_form,
};
use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::quadrature::{
    integrate_i, integrate_i1, integrate_j1, integrate_j_direct, Family, IntegralSpec, Upper,
};
use crate::verify::{
    epsilon_split, run_sweep, tail_test, ConvergenceReport, SweepConfig, DEFAULT_DELTA,
    REMAINDER_SLACK,
};

pub const SUITES: [&str; 6] = ["theorem1", "theorem2", "lemma1", "remark1", "eq9", "all"];

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn power_of_two_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} ({})", self.suite, self.name, self.detail)
    }
}

struct Recorder {
    suite: &'static str,
    out: Vec<Assertion>,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            out: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(Assertion {
            suite: self.suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a failed assertion for an `Err` and returns `None`.
    fn ok<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("numerical failure: {e}"));
                None
            }
        }
    }

    fn order_fit(&mut self, label: &str, report: &ConvergenceReport, order_tol: f64, r2_min: Option<f64>) {
        self.check(
            format!("{label} fitted order"),
            (report.fitted_order - 1.0).abs() <= order_tol,
            format!(
                "order {:.4}, required 1 +/- {order_tol} over {} points",
                report.fitted_order, report.fit_points
            ),
        );
        if let Some(r2_min) = r2_min {
            self.check(
                format!("{label} fit R^2"),
                report.fit_r2 >= r2_min,
                format!("R^2 {:.5}, required >= {r2_min}", report.fit_r2),
            );
        }
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn cx(v: LogComplex) -> Complex64 {
    v.to_complex().expect("bounded value")
}

/// `I(s) ~ i/(s c)` at `T = inf`.
pub fn theorem1() -> Vec<Assertion> {
    const C_VALUES: [f64; 3] = [0.5, 1.0, 2.0];
    const RATIO_CONSTANT: f64 = 5.0;
    const ORDER_TOL: f64 = 0.1;
    const R2_MIN: f64 = 0.98;
    const CROSS_TOL: f64 = 1e-9;
    const CROSS_QUAD_TOL: f64 = 1e-12;
    const SWEEP_TOL: f64 = 1e-10;

    let mut r = Recorder::new("theorem1");
    for c in C_VALUES {
        let label = format!("I, c = {c}, T = inf");
        let cfg = SweepConfig::new(Family::IInfinite, c, Upper::Infinite, power_of_two_grid(5, 14), SWEEP_TOL);
        let Some(report) = r.ok(&label, cfg.and_then(|cfg| run_sweep(&cfg))) else {
            continue;
        };
        let worst = report
            .rows
            .iter()
            .map(|row| row.rel_err / (RATIO_CONSTANT / (c * c * row.s)))
            .fold(0.0, f64::max);
        r.check(
            format!("{label} |ratio - 1| <= 5/(c^2 s)"),
            worst <= 1.0,
            format!("worst rel_err / bound = {worst:.4}"),
        );
        r.order_fit(&label, &report, ORDER_TOL, Some(R2_MIN));
    }

    // closed form against the quadrature oracle
    let cross_s = [32.0, 64.0, 128.0, 256.0, 512.0, 1000.0];
    for c in C_VALUES {
        let mut worst = 0.0_f64;
        let mut failure = None;
        for &s in &cross_s {
            let res = IntegralSpec::new(Family::IInfinite, c, Upper::Infinite, s)
                .and_then(|spec| integrate_i(&spec, CROSS_QUAD_TOL))
                .and_then(|q| Ok((q.value, closed_i_infinite(c, s)?)))
                .and_then(|(q, closed)| q.rel_err(&closed));
            match res {
                Ok(e) => worst = worst.max(e),
                Err(e) => failure = Some(e),
            }
        }
        let name = format!("closed form vs quadrature, c = {c}, s <= 1e3");
        match failure {
            Some(e) => r.check(name, false, format!("numerical failure: {e}")),
            None => r.check(
                name,
                worst <= CROSS_TOL,
                format!("max rel diff {worst:.3e}, required <= {CROSS_TOL:e}"),
            ),
        }
    }
    r.out
}

/// Finite `T` does not change the asymptotics of `I`.
pub fn remark1() -> Vec<Assertion> {
    const S_VALUES: [f64; 4] = [50.0, 100.0, 200.0, 400.0];
    const EPS: f64 = 0.25;
    const T: f64 = 1.0;
    const C: f64 = 1.0;
    const SLACK: f64 = 10.0;
    const QUAD_TOL: f64 = 1e-12;

    let mut r = Recorder::new("remark1");
    let mut worst = 0.0_f64;
    let mut failed = None;
    for s in S_VALUES {
        let diff = IntegralSpec::new(Family::IFinite, C, Upper::Finite(T), s)
            .and_then(|spec| integrate_i(&spec, QUAD_TOL))
            .and_then(|q| Ok(cx(q.value) - cx(closed_i_infinite(C, s)?)));
        match diff {
            Ok(d) => worst = worst.max(d.norm() / (2.0 * (-s * EPS * EPS).exp() * SLACK)),
            Err(e) => failed = Some(e),
        }
    }
    let name = "|I(T=1) - I(T=inf)| <= 2 e^{-s/16} * 10";
    match failed {
        Some(e) => r.check(name, false, format!("numerical failure: {e}")),
        None => r.check(name, worst <= 1.0, format!("worst diff / bound = {worst:.3e}")),
    }

    let tails: Result<Vec<_>> = S_VALUES.iter().map(|&s| tail_test(C, s, EPS, T)).collect();
    if let Some(tails) = r.ok("tail test", tails) {
        r.check(
            "|int_eps^T| <= (T - eps) e^{-s eps^2}",
            tails.iter().all(|t| t.holds()),
            format!(
                "ln lhs - ln bound = [{}]",
                tails
                    .iter()
                    .map(|t| format!("{:.2}", t.ln_lhs - t.ln_bound))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        let lhs_s: Vec<f64> = tails
            .iter()
            .zip(S_VALUES)
            .map(|(t, s)| t.ln_lhs + s.ln())
            .collect();
        let bound_s: Vec<f64> = tails
            .iter()
            .zip(S_VALUES)
            .map(|(t, s)| t.ln_bound + s.ln())
            .collect();
        r.check(
            "s * |int_eps^T| -> 0",
            strictly_decreasing(&lhs_s) && strictly_decreasing(&bound_s),
            format!(
                "ln(s * lhs) = [{}]",
                lhs_s.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(", ")
            ),
        );
    }
    r.out
}

/// `I1(s) ~ -2i/(s^3 c^3)` and the differentiation identity behind it.
pub fn eq9() -> Vec<Assertion> {
    const C: f64 = 1.0;
    const T: f64 = 1.0;
    const ORDER_TOL: f64 = 0.15;
    const R2_MIN: f64 = 0.98;
    const SWEEP_TOL: f64 = 1e-8;
    const FD_S: f64 = 1e4;
    const FD_STEP: f64 = 1e-4;
    const FD_TOL: f64 = 1e-4;
    const IDENTITY_TOL: f64 = 1e-6;
    const IDENTITY_QUAD_TOL: f64 = 1e-8;

    let mut r = Recorder::new("eq9");
    let label = "I1, c = 1, T = 1";
    let cfg = SweepConfig::new(Family::I1Moment, C, Upper::Finite(T), power_of_two_grid(6, 14), SWEEP_TOL);
    if let Some(report) = r.ok(label, cfg.and_then(|cfg| run_sweep(&cfg))) {
        r.order_fit(label, &report, ORDER_TOL, Some(R2_MIN));
    }

    let fd = moment_from_closed_form(C, FD_S, FD_STEP);
    let asym = asym_i1(C, FD_S).map(|a| cx(a.value));
    if let Some((fd, asym)) = r.ok("finite difference", fd.and_then(|f| Ok((f, asym?)))) {
        let dev = (asym - fd).norm() / fd.norm();
        r.check(
            "asym_I1 vs s^-2 (-i d/dc)^2 closed form at s = 1e4",
            dev <= FD_TOL,
            format!("rel diff {dev:.4e}, required <= {FD_TOL:e}"),
        );
    }

    // the identity itself: quadrature of I1 at T = inf against the difference quotient
    for s in [1.0, FD_S] {
        let res = IntegralSpec::new(Family::I1Moment, C, Upper::Infinite, s)
            .and_then(|spec| integrate_i1(&spec, IDENTITY_QUAD_TOL))
            .and_then(|q| Ok((cx(q.value), moment_from_closed_form(C, s, FD_STEP)?)));
        if let Some((quad, fd)) = r.ok("identity", res) {
            let dev = (quad - fd).norm() / quad.norm();
            r.check(
                format!("I1 quadrature vs s^-2 (-i d/dc)^2 closed form at s = {s}"),
                dev <= IDENTITY_TOL,
                format!("rel diff {dev:.3e}, required <= {IDENTITY_TOL:e}"),
            );
        }
    }
    r.out
}

/// `J1(s) ~ 1/(s (2T + i c))`, plus the endpoint splitting of the proof.
pub fn lemma1() -> Vec<Assertion> {
    const POINTS: [(f64, f64); 3] = [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)];
    const ORDER_TOL: f64 = 0.15;
    const R2_MIN: f64 = 0.98;
    const SWEEP_TOL: f64 = 1e-10;
    const SPLIT_S: [f64; 4] = [1e3, 1e4, 1e5, 1e6];
    const O1_FACTOR: f64 = 2.0;

    let mut r = Recorder::new("lemma1");
    for (c, t) in POINTS {
        let label = format!("J1, c = {c}, T = {t}");
        let cfg = SweepConfig::new(Family::J1Reduced, c, Upper::Finite(t), power_of_two_grid(5, 14), SWEEP_TOL);
        if let Some(report) = r.ok(&label, cfg.and_then(|cfg| run_sweep(&cfg))) {
            r.order_fit(&label, &report, ORDER_TOL, Some(R2_MIN));
        }
    }

    let splits: Result<Vec<_>> = SPLIT_S
        .iter()
        .map(|&s| epsilon_split(1.0, 1.0, s, DEFAULT_DELTA))
        .collect();
    if let Some(splits) = r.ok("epsilon split", splits) {
        r.check(
            "|J1 - J2| <= 10 (T - eps) e^{-s eps (2T - eps)}",
            splits.iter().all(|sp| sp.remainder_within(REMAINDER_SLACK)),
            format!(
                "ln|J1 - J2| - ln bound = [{}]",
                splits
                    .iter()
                    .map(|sp| format!("{:.2}", sp.tail.log_mag() - sp.ln_remainder_bound))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        r.check(
            "|J2/J3 - 1| <= 2 (e^{s eps^2} - 1)",
            splits
                .iter()
                .all(|sp| sp.linearisation_error() <= O1_FACTOR * sp.o1_bound),
            format!(
                "|J2/J3 - 1| = [{}]",
                splits
                    .iter()
                    .map(|sp| format!("{:.3e}", sp.linearisation_error()))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        let rem: Vec<f64> = splits.iter().map(|sp| sp.ln_remainder_bound).collect();
        let o1: Vec<f64> = splits.iter().map(|sp| sp.o1_bound).collect();
        r.check(
            "both bounds tend to zero",
            strictly_decreasing(&rem) && strictly_decreasing(&o1),
            format!("e^{{s eps^2}} - 1 = [{}]", o1.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")),
        );
        let s_eps: Vec<f64> = splits.iter().map(|sp| sp.s_eps()).collect();
        let s_eps_sq: Vec<f64> = splits.iter().map(|sp| sp.s_eps_sq()).collect();
        r.check(
            "s eps grows while s eps^2 shrinks",
            strictly_increasing(&s_eps) && strictly_decreasing(&s_eps_sq),
            format!("s eps = {:.1} .. {:.1}", s_eps[0], s_eps[s_eps.len() - 1]),
        );
    }
    r.out
}

/// `J(s) ~ e^{s T^2 + i s c T}/(s (2T + i c))` through the reduction to `J1`.
pub fn theorem2() -> Vec<Assertion> {
    const GRID: [f64; 3] = [0.5, 1.0, 2.0];
    const S_VALUES: [f64; 3] = [5.0, 20.0, 100.0];
    const IDENTITY_TOL: f64 = 1e-7;
    const QUAD_TOL: f64 = 1e-10;
    const ROWS_TOL: f64 = 1e-12;
    const CANCEL_TOL: f64 = 1e-13;

    let mut r = Recorder::new("theorem2");
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut failure = None;
    for c in GRID {
        for t in GRID {
            for s in S_VALUES {
                if s * t * t > crate::quadrature::OVERFLOW_GUARD {
                    continue;
                }
                let res = (|| -> Result<f64> {
                    let direct =
                        integrate_j_direct(&IntegralSpec::new(Family::JDirect, c, Upper::Finite(t), s)?, QUAD_TOL)?;
                    let reduced =
                        integrate_j1(&IntegralSpec::new(Family::J1Reduced, c, Upper::Finite(t), s)?, QUAD_TOL)?;
                    direct.value.rel_err(&(j_prefactor(c, t, s) * reduced.value))
                })();
                match res {
                    Ok(e) => {
                        worst = worst.max(e);
                        count += 1;
                    }
                    Err(e) => failure = Some(e),
                }
            }
        }
    }
    let name = "direct J vs e^{sT^2 + iscT} J1 on the (c, T, s) grid";
    match failure {
        Some(e) => r.check(name, false, format!("numerical failure: {e}")),
        None => r.check(
            name,
            worst <= IDENTITY_TOL,
            format!("max rel diff {worst:.3e} over {count} points, required <= {IDENTITY_TOL:e}"),
        ),
    }

    let grid = power_of_two_grid(5, 14);
    let j = SweepConfig::new(Family::JDirect, 1.0, Upper::Finite(1.0), grid.clone(), QUAD_TOL)
        .and_then(|cfg| run_sweep(&cfg));
    let j1 = SweepConfig::new(Family::J1Reduced, 1.0, Upper::Finite(1.0), grid, QUAD_TOL)
        .and_then(|cfg| run_sweep(&cfg));
    if let Some((j, j1)) = r.ok("J and J1 sweeps", j.and_then(|j| Ok((j, j1?)))) {
        let diff = j
            .rows
            .iter()
            .zip(&j1.rows)
            .map(|(a, b)| (a.rel_err - b.rel_err).abs())
            .fold(0.0, f64::max);
        r.check(
            "J rows reproduce J1 rows",
            diff <= ROWS_TOL,
            format!("max |rel_err_J - rel_err_J1| = {diff:.2e}, J order {:.4}", j.fitted_order),
        );
    }

    let mut worst = 0.0_f64;
    let mut failure = None;
    for s in [32.0, 1024.0, 16384.0, 1e6] {
        let res = (|| -> Result<f64> {
            let spec = IntegralSpec::new(Family::J1Reduced, 1.0, Upper::Finite(1.0), s)?;
            let num = integrate_j1(&spec, QUAD_TOL)?.value;
            let via_j = asym_j(1.0, 1.0, s)?.value.rel_err(&(j_prefactor(1.0, 1.0, s) * num))?;
            let via_j1 = asym_j1(1.0, 1.0, s)?.value.rel_err(&num)?;
            Ok((via_j - via_j1).abs())
        })();
        match res {
            Ok(d) => worst = worst.max(d),
            Err(e) => failure = Some(e),
        }
    }
    let name = "prefactor cancels in the ratio metric up to s = 1e6";
    match failure {
        Some(e) => r.check(name, false, format!("numerical failure: {e}")),
        None => r.check(
            name,
            worst <= CANCEL_TOL,
            format!("max difference {worst:.2e}, required <= {CANCEL_TOL:e}"),
        ),
    }

    match asym_j(1.0, 1.0, 1e6) {
        Ok(v) => r.check(
            "asymptotic J finite at s = 1e6",
            v.value.log_mag().is_finite() && v.value.arg().is_finite(),
            format!("log_mag {:.6}, arg {:.6}", v.value.log_mag(), v.value.arg()),
        ),
        Err(e) => r.check("asymptotic J finite at s = 1e6", false, e.to_string()),
    }
    r.out
}

/// Runs one suite by name; `"all"` runs every suite.
pub fn run_suite(name: &str) -> Result<Vec<Assertion>> {
    let out = match name {
        "theorem1" => theorem1(),
        "theorem2" => theorem2(),
        "lemma1" => lemma1(),
        "remark1" => remark1(),
        "eq9" => eq9(),
        "all" => [theorem1(), remark1(), eq9(), lemma1(), theorem2()].concat(),
        other => {
            return Err(Error::invalid(format!(
                "unknown suite {other:?}; valid suites: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(out)
}

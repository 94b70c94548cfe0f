use serde::Serialize;

use super::simulate::SimulationResult;
use crate::covariance::{v_asymptotic, v_n_exact, ValueFlag};
use crate::{Budget, Result};

/// Pass/fail thresholds of a CLT report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CltThresholds {
    /// Largest accepted `|z|` for variances and cross-covariances.
    pub z_max: f64,
    /// Largest accepted variance of an odd degree `m >= 3`.
    pub odd_ceiling: f64,
}

impl Default for CltThresholds {
    fn default() -> Self {
        Self {
            z_max: 3.0,
            odd_ceiling: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeLine {
    pub degree: usize,
    pub var_est: f64,
    pub var_se: f64,
    pub theory: f64,
    pub flag: ValueFlag,
    /// `None` when the coordinate is constant.
    pub z: Option<f64>,
    pub k3: Option<f64>,
    pub k4: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossLine {
    pub degrees: (usize, usize),
    pub cov_est: f64,
    pub cov_se: f64,
    pub z: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub thresholds: CltThresholds,
    pub degrees: Vec<DegreeLine>,
    pub cross: Vec<CrossLine>,
    pub pass: bool,
}

/// Compare estimated variances with the limiting ones and cross-covariances
/// with zero.
///
/// Degree 1 must have variance exactly 0, odd degrees a variance below the
/// ceiling, even degrees a z-score within bounds. Degree 2 is compared with
/// the finite-n value `V_n(2)` of the simulated `n` and flagged as derived.
pub fn clt_report(result: &SimulationResult, thresholds: CltThresholds) -> Result<CltReport> {
    let cfg = &result.config;
    let est = &result.estimates;
    let mut degrees = Vec::with_capacity(cfg.max_degree);
    for m in 1..=cfg.max_degree {
        let (theory, flag) = if m == 2 {
            (v_n_exact(cfg.class, cfg.n, 2, &cfg.model, Budget::default())?, ValueFlag::Derived)
        } else {
            let a = v_asymptotic(m, &cfg.model)?;
            (a.value, a.flag)
        };
        let c = est.cov[m - 1][m - 1];
        let degenerate = est.degenerate[m - 1];
        let z = (!degenerate && c.se > 0.0).then(|| (c.value - theory) / c.se);
        let pass = if m == 1 {
            c.value == 0.0
        } else if m % 2 == 1 {
            c.value <= thresholds.odd_ceiling
        } else {
            z.is_some_and(|z| z.abs() <= thresholds.z_max)
        };
        degrees.push(DegreeLine {
            degree: m,
            var_est: c.value,
            var_se: c.se,
            theory,
            flag,
            z,
            k3: est.k3[m - 1].map(|e| e.value),
            k4: est.k4[m - 1].map(|e| e.value),
            pass,
        });
    }
    let mut cross = Vec::new();
    for i in 1..=cfg.max_degree {
        for j in i + 1..=cfg.max_degree {
            let c = est.cov[i - 1][j - 1];
            let live = !est.degenerate[i - 1] && !est.degenerate[j - 1] && c.se > 0.0;
            let z = live.then(|| c.value / c.se);
            cross.push(CrossLine {
                degrees: (i, j),
                cov_est: c.value,
                cov_se: c.se,
                z,
                pass: z.is_none_or(|z| z.abs() <= thresholds.z_max),
            });
        }
    }
    let pass = degrees.iter().all(|d| d.pass) && cross.iter().all(|c| c.pass);
    Ok(CltReport {
        thresholds,
        degrees,
        cross,
        pass,
    })
}

// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Maximum-likelihood parameter estimates and resolution equivalences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::PartitionStats;

use super::likelihood::{loglik_dcppm, loglik_ilfr, loglik_ilfrs, loglik_ppm};
use super::{param_floor, ModelKind};

/// Points of the coarse scan that brackets the ILFR optimum.
const ILFR_SCAN_POINTS: usize = 200;
/// Absolute tolerance on `μ` for the golden-section refinement.
const ILFR_MU_TOLERANCE: f64 = 1e-6;

/// Fitted parameters. Only the slots relevant to the model are set; the
/// resolution is set for PPM and DCPPM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimatedParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_in: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_out: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// A model fitted to a partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub params: EstimatedParams,
    pub loglik: f64,
    /// Set when a pair count or degree mass was zero and a parameter had to
    /// be replaced by the floor value instead of its estimate.
    pub degenerate: bool,
}

/// `p_in = m_in/P_in`, `p_out = m_out/P_out`, each clamped to `[1/4m, 1]`.
pub fn estimate_ppm(stats: &PartitionStats) -> Result<(f64, f64)> {
    if stats.pairs_in <= 0.0 {
        return Err(Error::DegeneratePartition("no intra-community pairs".into()));
    }
    if stats.pairs_out <= 0.0 {
        return Err(Error::DegeneratePartition("no inter-community pairs".into()));
    }
    let floor = param_floor(stats.weight);
    Ok((
        (stats.weight_in / stats.pairs_in).clamp(floor, 1.0),
        (stats.weight_out / stats.pairs_out).clamp(floor, 1.0),
    ))
}

/// Resolution at which simple modularity ranks partitions like the PPM
/// likelihood with fixed `p_in`, `p_out`.
pub fn gamma_ppm(p_in: f64, p_out: f64, weight: f64, pairs: f64) -> Result<f64> {
    check_rates(p_in, p_out)?;
    Ok(pairs * (p_in - p_out) / (weight * (p_in.ln() - p_out.ln())))
}

/// `p_in = 4m·m_in/ΣD²`, `p_out = 4m·m_out/(4m² − ΣD²)`, floored at `1/4m`.
pub fn estimate_dcppm(stats: &PartitionStats) -> Result<(f64, f64)> {
    let m = stats.weight;
    let sq = stats.sum_sq_degree();
    let rest = 4.0 * m * m - sq;
    if rest <= 0.0 {
        return Err(Error::DegeneratePartition("single community".into()));
    }
    let floor = param_floor(m);
    Ok((
        (4.0 * m * stats.weight_in / sq).max(floor),
        (4.0 * m * stats.weight_out / rest).max(floor),
    ))
}

/// Resolution at which modularity ranks partitions like the DCPPM
/// likelihood with fixed `p_in`, `p_out`.
pub fn gamma_dcppm(p_in: f64, p_out: f64) -> Result<f64> {
    check_rates(p_in, p_out)?;
    Ok((p_in - p_out) / (p_in.ln() - p_out.ln()))
}

fn check_rates(p_in: f64, p_out: f64) -> Result<()> {
    if !(p_in > 0.0 && p_out > 0.0) {
        return Err(Error::Domain(format!("rates must be positive, got {p_in}, {p_out}")));
    }
    if p_in == p_out {
        return Err(Error::UndefinedGamma);
    }
    Ok(())
}

/// `μ = m_out/m` clamped to `[1/4m, 1 − 1/4m]`.
pub fn estimate_mu_ilfrs(stats: &PartitionStats) -> f64 {
    let floor = param_floor(stats.weight);
    (stats.weight_out / stats.weight).clamp(floor, 1.0 - floor)
}

/// Numerical maximizer of the ILFR likelihood over `[1/4m, 1 − 1/4m]`.
///
/// A uniform scan picks the bracketing cell, then golden-section search
/// refines inside it. The scan guards against multiple local maxima.
pub fn estimate_mu_ilfr(stats: &PartitionStats) -> f64 {
    let floor = param_floor(stats.weight);
    let (lo, hi) = (floor, 1.0 - floor);
    let f = |mu: f64| loglik_ilfr(stats, mu).expect("mu inside (0, 1)");

    let step = (hi - lo) / (ILFR_SCAN_POINTS - 1) as f64;
    let grid = |i: usize| if i + 1 == ILFR_SCAN_POINTS { hi } else { lo + step * i as f64 };
    let (best_i, best_val) = (0..ILFR_SCAN_POINTS)
        .map(|i| (i, f(grid(i))))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    let a = grid(best_i.saturating_sub(1));
    let b = grid((best_i + 1).min(ILFR_SCAN_POINTS - 1));
    let refined = golden_section_max(f, a, b, ILFR_MU_TOLERANCE);
    if f(refined) >= best_val {
        refined
    } else {
        grid(best_i)
    }
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(a, f(a)), (mid, f(mid)), (b, f(b))]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc })
        .0
}

/// Fits the likelihood model `kind` to a partition. PPM and DCPPM fail on
/// degenerate partitions.
pub fn fit(kind: ModelKind, stats: &PartitionStats) -> Result<Fit> {
    fit_inner(kind, stats, false)
}

/// Like [`fit`], but degenerate partitions get the undefined rate replaced
/// by the floor value and are flagged instead of rejected.
pub fn fit_clamped(kind: ModelKind, stats: &PartitionStats) -> Result<Fit> {
    fit_inner(kind, stats, true)
}

fn fit_inner(kind: ModelKind, stats: &PartitionStats, lenient: bool) -> Result<Fit> {
    let floor = param_floor(stats.weight);
    match kind {
        ModelKind::Ppm => {
            let (mut degenerate, estimate) = (false, estimate_ppm(stats));
            let (p_in, p_out) = match estimate {
                Ok(p) => p,
                Err(Error::DegeneratePartition(_)) if lenient => {
                    degenerate = true;
                    let rate = |w: f64, p: f64| if p > 0.0 { (w / p).clamp(floor, 1.0) } else { floor };
                    (rate(stats.weight_in, stats.pairs_in), rate(stats.weight_out, stats.pairs_out))
                }
                Err(e) => return Err(e),
            };
            let gamma = gamma_ppm(p_in, p_out, stats.weight, stats.pairs).ok();
            Ok(Fit {
                params: EstimatedParams {
                    p_in: Some(p_in),
                    p_out: Some(p_out),
                    mu: None,
                    gamma,
                },
                loglik: loglik_ppm(stats, p_in, p_out)?,
                degenerate,
            })
        }
        ModelKind::Dcppm => {
            let (mut degenerate, estimate) = (false, estimate_dcppm(stats));
            let (p_in, p_out) = match estimate {
                Ok(p) => p,
                Err(Error::DegeneratePartition(_)) if lenient => {
                    degenerate = true;
                    let m = stats.weight;
                    ((4.0 * m * stats.weight_in / stats.sum_sq_degree()).max(floor), floor)
                }
                Err(e) => return Err(e),
            };
            Ok(Fit {
                params: EstimatedParams {
                    p_in: Some(p_in),
                    p_out: Some(p_out),
                    mu: None,
                    gamma: gamma_dcppm(p_in, p_out).ok(),
                },
                loglik: loglik_dcppm(stats, p_in, p_out)?,
                degenerate,
            })
        }
        ModelKind::Ilfr => {
            let mu = estimate_mu_ilfr(stats);
            Ok(Fit {
                params: EstimatedParams {
                    mu: Some(mu),
                    ..Default::default()
                },
                loglik: loglik_ilfr(stats, mu)?,
                degenerate: false,
            })
        }
        ModelKind::Ilfrs => {
            let mu = estimate_mu_ilfrs(stats);
            Ok(Fit {
                params: EstimatedParams {
                    mu: Some(mu),
                    ..Default::default()
                },
                loglik: loglik_ilfrs(stats, mu)?,
                degenerate: false,
            })
        }
        ModelKind::Modularity | ModelKind::SimpleModularity => Err(Error::Domain(format!(
            "{kind} has no likelihood to fit"
        ))),
    }
}

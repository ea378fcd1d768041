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

//! Quality functions and null-model likelihoods.

mod estimate;
pub(crate) mod likelihood;
mod null;

pub use estimate::{
    estimate_dcppm, estimate_mu_ilfr, estimate_mu_ilfrs, estimate_ppm, fit, fit_clamped, gamma_dcppm, gamma_ppm,
    EstimatedParams, Fit,
};
pub use likelihood::{
    loglik_dcppm, loglik_dcppm_nonparametric, loglik_ilfr, loglik_ilfrs,
    loglik_ilfrs_nonparametric, loglik_ppm, loglik_ppm_nonparametric, modularity,
    simple_modularity,
};
pub use null::{
    dcsbm_optimal_rates, expected_degrees, expected_degrees_block, sample_null_model, BlockRates,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::PartitionStats;

/// Smallest admissible `p_in`, `p_out` and `μ`: a quarter of an edge.
pub fn param_floor(total_weight: f64) -> f64 {
    1.0 / (4.0 * total_weight)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[serde(rename = "simple")]
    SimpleModularity,
    Modularity,
    Ppm,
    Dcppm,
    Ilfr,
    Ilfrs,
}

impl ModelKind {
    /// The four likelihood models.
    pub const LIKELIHOODS: [ModelKind; 4] =
        [ModelKind::Ppm, ModelKind::Dcppm, ModelKind::Ilfr, ModelKind::Ilfrs];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::SimpleModularity => "simple",
            ModelKind::Modularity => "modularity",
            ModelKind::Ppm => "ppm",
            ModelKind::Dcppm => "dcppm",
            ModelKind::Ilfr => "ilfr",
            ModelKind::Ilfrs => "ilfrs",
        }
    }

    /// True for the models fitted by a mixing parameter.
    pub fn uses_mixing(self) -> bool {
        matches!(self, ModelKind::Ilfr | ModelKind::Ilfrs)
    }

    pub fn is_likelihood(self) -> bool {
        Self::LIKELIHOODS.contains(&self)
    }

    /// Fixed-parameter objective used by the search strategies: PPM and DCPPM
    /// are optimized through their equivalent modularity with resolution
    /// `param`; ILFR and ILFRS take `param` as `μ`.
    pub fn objective(self, param: f64) -> QualityModel {
        match self {
            ModelKind::SimpleModularity | ModelKind::Ppm => {
                QualityModel::SimpleModularity { resolution: param }
            }
            ModelKind::Modularity | ModelKind::Dcppm => QualityModel::Modularity { resolution: param },
            ModelKind::Ilfr => QualityModel::Ilfr { mu: param },
            ModelKind::Ilfrs => QualityModel::Ilfrs { mu: param },
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "simple" | "simple-modularity" => ModelKind::SimpleModularity,
            "modularity" | "louvain" => ModelKind::Modularity,
            "ppm" => ModelKind::Ppm,
            "dcppm" => ModelKind::Dcppm,
            "ilfr" => ModelKind::Ilfr,
            "ilfrs" => ModelKind::Ilfrs,
            other => return Err(Error::Domain(format!("unknown model {other:?}"))),
        })
    }
}

/// A quality function with all of its parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QualityModel {
    #[serde(rename = "simple")]
    SimpleModularity { resolution: f64 },
    Modularity { resolution: f64 },
    Ppm { p_in: f64, p_out: f64 },
    Dcppm { p_in: f64, p_out: f64 },
    Ilfr { mu: f64 },
    Ilfrs { mu: f64 },
}

impl QualityModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            QualityModel::SimpleModularity { .. } => ModelKind::SimpleModularity,
            QualityModel::Modularity { .. } => ModelKind::Modularity,
            QualityModel::Ppm { .. } => ModelKind::Ppm,
            QualityModel::Dcppm { .. } => ModelKind::Dcppm,
            QualityModel::Ilfr { .. } => ModelKind::Ilfr,
            QualityModel::Ilfrs { .. } => ModelKind::Ilfrs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            QualityModel::SimpleModularity { resolution } | QualityModel::Modularity { resolution } => {
                resolution.is_finite() && resolution > 0.0
            }
            QualityModel::Ppm { p_in, p_out } => {
                p_in > 0.0 && p_in <= 1.0 && p_out > 0.0 && p_out <= 1.0
            }
            QualityModel::Dcppm { p_in, p_out } => {
                p_in.is_finite() && p_out.is_finite() && p_in > 0.0 && p_out > 0.0
            }
            QualityModel::Ilfr { mu } | QualityModel::Ilfrs { mu } => mu > 0.0 && mu < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid parameters for {self:?}")))
        }
    }

    /// Value of the quality function on a partition.
    pub fn evaluate(&self, stats: &PartitionStats) -> Result<f64> {
        match *self {
            QualityModel::SimpleModularity { resolution } => Ok(simple_modularity(stats, resolution)),
            QualityModel::Modularity { resolution } => Ok(modularity(stats, resolution)),
            QualityModel::Ppm { p_in, p_out } => loglik_ppm(stats, p_in, p_out),
            QualityModel::Dcppm { p_in, p_out } => loglik_dcppm(stats, p_in, p_out),
            QualityModel::Ilfr { mu } => loglik_ilfr(stats, mu),
            QualityModel::Ilfrs { mu } => loglik_ilfrs(stats, mu),
        }
    }
}

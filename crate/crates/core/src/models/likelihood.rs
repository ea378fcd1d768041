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

//! Closed-form quality functions and log-likelihoods.
//!
//! All logarithms are natural. Constants are kept so absolute values are
//! comparable across models.

use crate::error::{Error, Result};
use crate::graph::xlogx;
use crate::stats::PartitionStats;

use super::param_floor;

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {value}")))
    }
}

fn require_open_unit(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("mixing parameter must lie in (0, 1), got {mu}")))
    }
}

/// Erdős–Rényi modularity `(m_in − γ·P_in·m/P) / m`.
pub fn simple_modularity(stats: &PartitionStats, resolution: f64) -> f64 {
    let m = stats.weight;
    let expected = if stats.pairs > 0.0 {
        stats.pairs_in * m / stats.pairs
    } else {
        0.0
    };
    (stats.weight_in - resolution * expected) / m
}

/// Configuration-model modularity `m_in/m − γ·Σ D(C)² / 4m²`.
pub fn modularity(stats: &PartitionStats, resolution: f64) -> f64 {
    let m = stats.weight;
    stats.weight_in / m - resolution * stats.sum_sq_degree() / (4.0 * m * m)
}

/// Poisson planted partition log-likelihood.
pub fn loglik_ppm(stats: &PartitionStats, p_in: f64, p_out: f64) -> Result<f64> {
    require_positive("p_in", p_in)?;
    require_positive("p_out", p_out)?;
    Ok(stats.weight_in * p_in.ln() + stats.weight_out * p_out.ln()
        - stats.pairs_in * p_in
        - stats.pairs_out * p_out)
}

/// Degree-corrected planted partition log-likelihood.
pub fn loglik_dcppm(stats: &PartitionStats, p_in: f64, p_out: f64) -> Result<f64> {
    require_positive("p_in", p_in)?;
    require_positive("p_out", p_out)?;
    let m = stats.weight;
    Ok(stats.weight_in * (p_in.ln() - p_out.ln())
        - (p_in - p_out) / (4.0 * m) * stats.sum_sq_degree()
        + stats.sum_dlogd
        + m * p_out.ln()
        - m * p_out
        - m * (2.0 * m).ln())
}

/// Per-community term of the ILFR likelihood,
/// `D_in(C)/2 · log((1−μ)/D(C) + μ/2m)`. Zero for communities with no
/// internal weight.
#[inline]
pub(crate) fn ilfr_community_term(internal: f64, degree: f64, mu: f64, two_m: f64) -> f64 {
    if internal > 0.0 {
        0.5 * internal * ((1.0 - mu) / degree + mu / two_m).ln()
    } else {
        0.0
    }
}

/// Per-community term of the ILFRS likelihood, `D_in(C)/2 · log D(C)`.
#[inline]
pub(crate) fn ilfrs_community_term(internal: f64, degree: f64) -> f64 {
    if internal > 0.0 {
        0.5 * internal * degree.ln()
    } else {
        0.0
    }
}

/// ILFR log-likelihood.
pub fn loglik_ilfr(stats: &PartitionStats, mu: f64) -> Result<f64> {
    require_open_unit(mu)?;
    let m = stats.weight;
    let two_m = 2.0 * m;
    let communities: f64 = stats
        .community_internal
        .iter()
        .zip(&stats.community_degrees)
        .map(|(&din, &d)| ilfr_community_term(din, d, mu, two_m))
        .sum();
    Ok(communities + stats.weight_out * mu.ln() + stats.sum_dlogd
        - stats.weight_out * two_m.ln()
        - m)
}

/// Simplified ILFR log-likelihood, dropping the `log(1 + x)` correction.
pub fn loglik_ilfrs(stats: &PartitionStats, mu: f64) -> Result<f64> {
    require_open_unit(mu)?;
    let m = stats.weight;
    let communities: f64 = stats
        .community_internal
        .iter()
        .zip(&stats.community_degrees)
        .map(|(&din, &d)| ilfrs_community_term(din, d))
        .sum();
    Ok(stats.weight_in * (1.0 - mu).ln() + stats.weight_out * mu.ln()
        - stats.weight_out * (2.0 * m).ln()
        - communities
        + stats.sum_dlogd
        - m)
}

/// ILFRS with `μ = m_out/m` substituted. When the mixing fraction falls
/// outside the admissible range it is clamped and the parametric form is
/// used.
pub fn loglik_ilfrs_nonparametric(stats: &PartitionStats) -> f64 {
    let m = stats.weight;
    let floor = param_floor(m);
    let mixing = stats.weight_out / m;
    if mixing < floor || mixing > 1.0 - floor {
        let mu = mixing.clamp(floor, 1.0 - floor);
        return loglik_ilfrs(stats, mu).expect("clamped mixing lies in (0, 1)");
    }
    let communities: f64 = stats
        .community_internal
        .iter()
        .zip(&stats.community_degrees)
        .map(|(&din, &d)| ilfrs_community_term(din, d))
        .sum();
    xlogx(stats.weight_in) - stats.weight_in * m.ln() + xlogx(stats.weight_out)
        - stats.weight_out * m.ln()
        - m
        - stats.weight_out * (2.0 * m).ln()
        - communities
        + stats.sum_dlogd
}

/// PPM log-likelihood at its maximizing parameters.
pub fn loglik_ppm_nonparametric(stats: &PartitionStats) -> Result<f64> {
    if !(stats.weight_in > 0.0
        && stats.weight_out > 0.0
        && stats.pairs_in > 0.0
        && stats.pairs_out > 0.0)
    {
        return Err(Error::DegeneratePartition(
            "PPM needs intra and inter edges and pairs".into(),
        ));
    }
    Ok(stats.weight_in * (stats.weight_in / stats.pairs_in).ln()
        + stats.weight_out * (stats.weight_out / stats.pairs_out).ln()
        - stats.weight)
}

/// DCPPM log-likelihood at its maximizing parameters.
pub fn loglik_dcppm_nonparametric(stats: &PartitionStats) -> Result<f64> {
    let m = stats.weight;
    let sq = stats.sum_sq_degree();
    let rest = 4.0 * m * m - sq;
    if !(stats.weight_in > 0.0 && stats.weight_out > 0.0 && rest > 0.0) {
        return Err(Error::DegeneratePartition(
            "DCPPM needs intra and inter edges and more than one community".into(),
        ));
    }
    let (m_in, m_out) = (stats.weight_in, stats.weight_out);
    Ok(m_in * (m_in * rest / (m_out * sq)).ln() - (m_in - m_out * sq / rest)
        + stats.sum_dlogd
        + m * (4.0 * m * m_out / rest).ln()
        - 4.0 * m * m * m_out / rest
        - m * (2.0 * m).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::Dataset;
    use crate::graph::Graph;
    use crate::partition::Partition;
    use crate::stats::compute_stats;
    use approx::assert_relative_eq;

    fn two_triangles() -> PartitionStats {
        let g = Graph::from_simple_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        compute_stats(&g, &Partition::from_assignment([0, 0, 0, 1, 1, 1]))
    }

    fn karate() -> PartitionStats {
        let d = Dataset::Karate.load();
        compute_stats(&d.graph, &d.ground_truth)
    }

    #[test]
    fn simple_modularity_two_triangles() {
        let s = two_triangles();
        assert_relative_eq!(simple_modularity(&s, 1.0), 0.6, epsilon = 1e-12);
        assert_relative_eq!(simple_modularity(&s, 2.5), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn singletons_score_zero() {
        let g = Graph::from_simple_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = compute_stats(&g, &Partition::singletons(4));
        assert_eq!(simple_modularity(&s, 1.7), 0.0);
    }

    #[test]
    fn modularity_values() {
        assert_relative_eq!(modularity(&two_triangles(), 1.0), 0.5, epsilon = 1e-12);
        assert!((modularity(&karate(), 1.0) - 0.3715).abs() < 5e-5);
        let g = Graph::from_simple_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let whole = compute_stats(&g, &Partition::whole(4));
        assert_relative_eq!(modularity(&whole, 1.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ppm_substitution() {
        let s = two_triangles();
        for p_out in [0.01, 0.3, 1.0] {
            assert_relative_eq!(
                loglik_ppm(&s, 1.0, p_out).unwrap(),
                -6.0 - 9.0 * p_out,
                epsilon = 1e-12
            );
        }
        assert!(matches!(loglik_ppm(&s, 0.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(loglik_dcppm(&s, 0.5, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn dcppm_equal_rates_is_partition_free() {
        let d = Dataset::Karate.load();
        let a = compute_stats(&d.graph, &d.ground_truth);
        let b = compute_stats(&d.graph, &Partition::singletons(34));
        let p: f64 = 0.7;
        let m = a.weight;
        let expected = a.sum_dlogd + m * p.ln() - m * p - m * (2.0 * m).ln();
        assert_relative_eq!(loglik_dcppm(&a, p, p).unwrap(), expected, max_relative = 1e-12);
        assert_relative_eq!(loglik_dcppm(&b, p, p).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn ilfr_two_triangles_small_mu() {
        let s = two_triangles();
        let limit = 6.0 * (1.0f64 / 6.0).ln() + 12.0 * 2.0f64.ln() - 6.0;
        let mu = 1e-9;
        assert!((loglik_ilfr(&s, mu).unwrap() - limit).abs() < 1e-7);
        assert!(matches!(loglik_ilfr(&s, 1.0), Err(Error::Domain(_))));
        assert!(matches!(loglik_ilfrs(&s, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn ilfrs_singletons_form() {
        let g = Graph::from_simple_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let s = compute_stats(&g, &Partition::singletons(5));
        let (m, mu) = (5.0f64, 0.3f64);
        let expected = m * mu.ln() - m * (2.0 * m).ln() + s.sum_dlogd - m;
        assert_relative_eq!(loglik_ilfrs(&s, mu).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn ilfrs_nonparametric_two_triangles() {
        let s = two_triangles();
        let mu = 1.0 / 24.0;
        let expected = 6.0 * (1.0f64 - mu).ln() - 6.0 * 6.0f64.ln() + 12.0 * 2.0f64.ln() - 6.0;
        assert_relative_eq!(loglik_ilfrs_nonparametric(&s), expected, max_relative = 1e-12);
    }

    #[test]
    fn karate_ground_truth_likelihoods() {
        let s = karate();
        assert!((loglik_ppm_nonparametric(&s).unwrap() + 206.12).abs() < 0.005);
        assert!((loglik_dcppm_nonparametric(&s).unwrap() + 168.65).abs() < 0.005);
        assert!((loglik_ilfrs(&s, 10.0 / 78.0).unwrap() + 176.0).abs() < 0.5);
        assert!((loglik_ilfrs_nonparametric(&s) + 176.0).abs() < 0.5);
    }

    #[test]
    fn degenerate_nonparametric() {
        let s = two_triangles();
        assert!(matches!(loglik_ppm_nonparametric(&s), Err(Error::DegeneratePartition(_))));
        assert!(matches!(loglik_dcppm_nonparametric(&s), Err(Error::DegeneratePartition(_))));
    }
}

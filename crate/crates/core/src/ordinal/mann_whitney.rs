use super::distribution::{prob_beats, EmpiricalDistribution};
use super::OrdinalError;

/// Normal approximation of the Mann-Whitney U statistic given the
/// tie-corrected probability that the first sample beats the second and the
/// two sample sizes. Positive values mean the first sample tends to win.
pub fn mann_whitney_z_from_prob(p_beats: f64, n: u64, m: u64) -> f64 {
    let nm = n as f64 * m as f64;
    let u = p_beats * nm;
    let mean = nm / 2.0;
    let sigma = (nm * (n + m + 1) as f64 / 12.0).sqrt();
    (u - mean) / sigma
}

pub fn mann_whitney_z(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64, OrdinalError> {
    let p = prob_beats(a, b)?;
    Ok(mann_whitney_z_from_prob(p, a.total(), b.total()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_effect() {
        assert_eq!(mann_whitney_z_from_prob(0.5, 10, 10), 0.0);
    }

    #[test]
    fn hand_evaluated() {
        // U = 80, mean 50, sigma = sqrt(100 * 21 / 12)
        let z = mann_whitney_z_from_prob(0.8, 10, 10);
        assert!((z - 30.0 / 175f64.sqrt()).abs() < 1e-12);
        assert!((z - 2.2678).abs() < 1e-4);
        let z = mann_whitney_z_from_prob(0.2, 10, 10);
        assert!((z + 2.2678).abs() < 1e-4);
    }

    #[test]
    fn from_distributions() {
        // a lands above the rank-1 point mass in 8 of 10 observations.
        let a = EmpiricalDistribution::from_counts(&[2, 0, 8]);
        let b = EmpiricalDistribution::from_counts(&[0, 10, 0]);
        let z = mann_whitney_z(&a, &b).unwrap();
        assert!((z - mann_whitney_z_from_prob(0.8, 10, 10)).abs() < 1e-12);
        assert!((mann_whitney_z(&b, &a).unwrap() + z).abs() < 1e-12);
    }
}

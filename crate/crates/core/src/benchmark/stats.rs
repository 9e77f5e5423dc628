use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided standard normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for `failures` out of `trials`, clamped to `[0, 1]`.
pub fn wilson_interval(failures: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(
        trials >= 1 && failures <= trials,
        "need 0 <= failures <= trials, trials >= 1"
    );
    let n = trials as f64;
    let rate = failures as f64 / n;
    let z = z_score(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (rate + z2 / (2.0 * n)) / denom;
    let half = z / denom * (rate * (1.0 - rate) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if failures == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, rate)
    };
    let hi = if failures == trials {
        1.0
    } else {
        (center + half).clamp(rate, 1.0)
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_for_95_percent() {
        assert!((z_score(0.95) - 1.959964).abs() < 1e-6);
    }

    #[test]
    fn no_failures() {
        // hi = z² / (n + z²)
        let (lo, hi) = wilson_interval(0, 100, 0.95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0370).abs() < 5e-5, "{hi}");
    }

    #[test]
    fn all_failures_mirror_no_failures() {
        let (lo, hi) = wilson_interval(100, 100, 0.95);
        assert_eq!(hi, 1.0);
        assert!((lo - 0.9630).abs() < 5e-5, "{lo}");
    }

    #[test]
    fn half_is_symmetric() {
        let (lo, hi) = wilson_interval(50, 100, 0.95);
        assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
        assert!(lo < 0.5 && hi > 0.5);
    }
}

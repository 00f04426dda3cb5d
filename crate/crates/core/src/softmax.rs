//! Max-shifted log-sum-exp and softmax.

/// `ln Σ exp(z_i)`, computed as `z_max + ln Σ exp(z_i − z_max)`.
pub fn log_sum_exp(z: &[f64]) -> f64 {
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if zmax == f64::NEG_INFINITY {
        return zmax;
    }
    zmax + z.iter().map(|v| (v - zmax).exp()).sum::<f64>().ln()
}

/// `exp(z_i) / Σ exp(z_j)` without overflow.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = z.iter().map(|v| (v - zmax).exp()).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_arguments_stay_finite() {
        assert!((log_sum_exp(&[1e4, 0.0]) - 1e4).abs() < 1e-9);
        let p = softmax(&[1e4, 0.0]);
        assert_eq!(p[0], 1.0);
        assert!(p[1] < 1e-300);
        assert!((log_sum_exp(&[0.0; 4]) - 4f64.ln()).abs() < 1e-15);
    }
}

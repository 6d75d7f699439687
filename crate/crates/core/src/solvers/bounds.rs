use std::f64::consts::PI;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BoundError {
    #[error("fatness constant must be at least 1, got {0}")]
    Alpha(f64),
}

/// Length lower bound for k disjoint alpha-fat regions of diameter at least
/// `delta_min`: `max(0, (k/alpha - 1) * pi * delta_min / 4)`.
pub fn lower_bound(k: usize, alpha: f64, delta_min: f64) -> f64 {
    ((k as f64 / alpha - 1.0) * PI * delta_min / 4.0).max(0.0)
}

/// Maximum number of large alpha-fat regions meeting a segment of comparable length.
pub fn large_external_bound(alpha: f64) -> Result<f64, BoundError> {
    if !(alpha >= 1.0) {
        return Err(BoundError::Alpha(alpha));
    }
    Ok(alpha * (8.0 * 2f64.sqrt() / PI + 1.0))
}

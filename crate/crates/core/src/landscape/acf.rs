use alloc::vec::Vec;

use crate::error::Error;

/// Sample autocorrelation `r(k)` for `k = 0..=max_lag`:
/// `r(k) = sum_t (d_t - m)(d_{t+k} - m) / sum_t (d_t - m)^2`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>, Error> {
    if series.len() <= max_lag + 1 {
        return Err(Error::SeriesTooShort { len: series.len(), max_lag });
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let centered: Vec<f64> = series.iter().map(|d| d - mean).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom <= f64::EPSILON * series.len() as f64 * (1.0 + mean * mean) {
        return Err(Error::ZeroVariance);
    }
    Ok((0..=max_lag)
        .map(|k| centered.iter().zip(&centered[k..]).map(|(a, b)| a * b).sum::<f64>() / denom)
        .collect())
}

/// Unweighted mean of per-series autocorrelations.
pub fn mean_autocorrelation(series: &[Vec<f64>], max_lag: usize) -> Result<Vec<f64>, Error> {
    if series.is_empty() {
        return Err(Error::InvalidParameter("no series to average"));
    }
    let mut sum = alloc::vec![0.0; max_lag + 1];
    for s in series {
        for (acc, r) in sum.iter_mut().zip(autocorrelation(s, max_lag)?) {
            *acc += r;
        }
    }
    Ok(sum.into_iter().map(|s| s / series.len() as f64).collect())
}

//! Sweep grids, log-log slope fitting, tipping points and the window-cost
//! model fit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("invalid grid range {n_min}..{n_max} (need 3 <= n_min <= n_max)")]
    InvalidRange { n_min: u64, n_max: u64 },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("series '{0}' must have strictly increasing n and positive values")]
    BadSeries(String),
    #[error("series grids differ")]
    GridMismatch,
    #[error("design matrix is rank deficient")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub label: String,
    pub points: Vec<(u64, f64)>,
}

impl SweepSeries {
    pub fn new(label: impl Into<String>, points: Vec<(u64, f64)>) -> Result<Self, AnalysisError> {
        let s = SweepSeries { label: label.into(), points };
        let increasing = s.points.windows(2).all(|w| w[0].0 < w[1].0);
        let positive = s.points.iter().all(|&(_, v)| v > 0.0 && v.is_finite());
        if !increasing || !positive {
            return Err(AnalysisError::BadSeries(s.label));
        }
        Ok(s)
    }

    pub fn grid(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSample {
    pub n: u64,
    pub w: u64,
    pub cost: f64,
}

/// Rounded `n_min * 2^(k/4)` for k = 0, 1, ..., deduplicated and capped at
/// `n_max`.
pub fn log_grid(n_min: u64, n_max: u64) -> Result<Vec<u64>, AnalysisError> {
    if n_min < 3 || n_min > n_max {
        return Err(AnalysisError::InvalidRange { n_min, n_max });
    }
    let mut out: Vec<u64> = Vec::new();
    for k in 0.. {
        let v = (n_min as f64 * 2f64.powf(k as f64 / 4.0)).round() as u64;
        if v > n_max {
            break;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Powers of two in `[lo, hi]`.
pub fn pow2_grid(lo: u64, hi: u64) -> Vec<u64> {
    (0..64).map(|k| 1u64 << k).filter(|&v| v >= lo && v <= hi).collect()
}

/// Ordinary least squares of log2(value) on log2(n).
pub fn fit_power_law(s: &SweepSeries) -> Result<(f64, f64), AnalysisError> {
    if s.points.len() < 3 {
        return Err(AnalysisError::TooFewPoints { need: 3, got: s.points.len() });
    }
    let xs: Vec<f64> = s.points.iter().map(|p| (p.0 as f64).log2()).collect();
    let ys: Vec<f64> = s.points.iter().map(|p| p.1.log2()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Smallest grid n from which `b` stays strictly below `a` to the end.
pub fn find_tipping_point(a: &SweepSeries, b: &SweepSeries) -> Result<Option<u64>, AnalysisError> {
    if a.grid() != b.grid() {
        return Err(AnalysisError::GridMismatch);
    }
    let mut tip = None;
    for (pa, pb) in a.points.iter().zip(&b.points).rev() {
        if pb.1 < pa.1 {
            tip = Some(pa.0);
        } else {
            break;
        }
    }
    Ok(tip)
}

fn window_basis(n: u64, w: u64) -> [f64; 2] {
    let (n, w) = (n as f64, w as f64);
    [2f64.powf(w) * n / w, n.powi(3) / w]
}

/// Least squares for `cost ~ c1 * 2^w n / w + c2 * n^3 / w`.
pub fn fit_window_model(samples: &[WindowSample]) -> Result<(f64, f64), AnalysisError> {
    if samples.len() < 4 {
        return Err(AnalysisError::TooFewPoints { need: 4, got: samples.len() });
    }
    let first = samples[0].w;
    if samples.iter().all(|s| s.w == first) {
        return Err(AnalysisError::Degenerate);
    }
    // Columns are rescaled to unit norm so the normal equations stay well
    // conditioned across the very different magnitudes.
    let rows: Vec<[f64; 2]> = samples.iter().map(|s| window_basis(s.n, s.w)).collect();
    let norm = |j: usize| rows.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
    let scale = [norm(0), norm(1)];
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (r, s) in rows.iter().zip(samples) {
        let (x1, x2) = (r[0] / scale[0], r[1] / scale[1]);
        a11 += x1 * x1;
        a12 += x1 * x2;
        a22 += x2 * x2;
        b1 += x1 * s.cost;
        b2 += x2 * s.cost;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() < 1e-12 {
        return Err(AnalysisError::Degenerate);
    }
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    Ok((c1 / scale[0], c2 / scale[1]))
}

/// Minimizer over `w in 1..=w_max` of the fitted window model at `n`.
pub fn predicted_window(c1: f64, c2: f64, n: u64, w_max: u64) -> u64 {
    (1..=w_max.max(1))
        .min_by(|&x, &y| {
            let f = |w| {
                let [b1, b2] = window_basis(n, w);
                c1 * b1 + c2 * b2
            };
            f(x).total_cmp(&f(y))
        })
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(points: &[(u64, f64)]) -> SweepSeries {
        SweepSeries::new("s", points.to_vec()).unwrap()
    }

    #[test]
    fn grid_examples() {
        assert_eq!(log_grid(3, 8).unwrap(), vec![3, 4, 5, 6, 7, 8]);
        assert_eq!(log_grid(8, 8).unwrap(), vec![8]);
        assert!(log_grid(2, 8).is_err());
        assert!(log_grid(9, 8).is_err());
        let g = log_grid(3, 4096).unwrap();
        assert!(g.windows(2).all(|w| w[1] as f64 / w[0] as f64 <= 2f64.sqrt()));
        assert_eq!(pow2_grid(32, 4096), vec![32, 64, 128, 256, 512, 1024, 2048, 4096]);
    }

    #[test]
    fn power_law_exact() {
        let (s, _) = fit_power_law(&series(&[(2, 4.0), (4, 16.0), (8, 64.0)])).unwrap();
        assert_eq!(s, 2.0);
        for c in [0.5, 3.0, 1e6] {
            let (s, i) = fit_power_law(&series(&[(2, 2.0 * c), (4, 4.0 * c), (8, 8.0 * c)])).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
            assert!((i - c.log2()).abs() < 1e-9);
        }
        assert!(fit_power_law(&series(&[(2, 1.0), (3, 2.0)])).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(SweepSeries::new("x", vec![(2, 1.0), (2, 1.0)]).is_err());
        assert!(SweepSeries::new("x", vec![(2, 0.0)]).is_err());
    }

    #[test]
    fn tipping_examples() {
        let a = series(&[(4, 10.0), (8, 10.0), (16, 10.0)]);
        let b = series(&[(4, 5.0), (8, 5.0), (16, 5.0)]);
        assert_eq!(find_tipping_point(&a, &b).unwrap(), Some(4));
        assert_eq!(find_tipping_point(&b, &a).unwrap(), None);
        let c = series(&[(4, 5.0), (8, 11.0), (16, 9.0)]);
        assert_eq!(find_tipping_point(&a, &c).unwrap(), Some(16));
        let d = series(&[(4, 1.0), (8, 1.0)]);
        assert_eq!(find_tipping_point(&a, &d), Err(AnalysisError::GridMismatch));
    }

    #[test]
    fn window_fit_recovers_planted() {
        let mut samples = Vec::new();
        for n in [16u64, 32, 64] {
            for w in 1..=12 {
                let [b1, b2] = window_basis(n, w);
                samples.push(WindowSample { n, w, cost: 2.0 * b1 + 3.0 * b2 });
            }
        }
        let (c1, c2) = fit_window_model(&samples).unwrap();
        assert!((c1 - 2.0).abs() / 2.0 < 1e-6, "{c1}");
        assert!((c2 - 3.0).abs() / 3.0 < 1e-6, "{c2}");
        let one_w: Vec<_> = (0..5).map(|i| WindowSample { n: 8 + i, w: 3, cost: 1.0 }).collect();
        assert_eq!(fit_window_model(&one_w), Err(AnalysisError::Degenerate));
        assert!(fit_window_model(&samples[..3]).is_err());
    }

    #[test]
    fn predicted_window_tracks_model() {
        // (2^w + 1024) / w: 1536/9 < 1280/8 < 1152/7 fails, so w = 8.
        assert_eq!(predicted_window(1.0, 1.0, 32, 16), 8);
        assert_eq!(predicted_window(1.0, 0.0, 32, 16), 1);
    }
}

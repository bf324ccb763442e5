use serde::{Deserialize, Serialize};

pub const MIN_FIT_SAMPLES: usize = 4;
/// Bound on |d²(log error)/d(log n)²| for a window to count as straight.
pub const CURVATURE_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Two standard errors of the slope.
    pub half_width: f64,
    pub window: (usize, usize),
    pub samples: usize,
    pub curvature: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    PowerLaw,
    /// Local log-log slopes keep steepening, e.g. geometric decay.
    SuperPolynomial,
    Irregular,
    InsufficientSamples,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub fit: Option<SlopeFit>,
    pub decay: DecayClass,
    /// n values whose error was exactly zero.
    pub excluded: Vec<usize>,
}

struct Line {
    slope: f64,
    intercept: f64,
    se: f64,
}

fn ols(u: &[f64], y: &[f64]) -> Line {
    let m = u.len() as f64;
    let mu = u.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = u.iter().map(|a| (a - mu).powi(2)).sum();
    let sxy: f64 = u.iter().zip(y).map(|(a, b)| (a - mu) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mu;
    let rss: f64 = u.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = if u.len() > 2 { (rss / (m - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    Line { slope, intercept, se }
}

/// Second derivative of the least-squares quadratic through the points.
fn curvature(u: &[f64], y: &[f64]) -> f64 {
    let m = u.len() as f64;
    let mu = u.iter().sum::<f64>() / m;
    let x: Vec<f64> = u.iter().map(|a| a - mu).collect();
    let s = |p: i32| x.iter().map(|v| v.powi(p)).sum::<f64>();
    let sy = |p: i32| x.iter().zip(y).map(|(v, b)| v.powi(p) * b).sum::<f64>();
    let a = [[m, s(1), s(2)], [s(1), s(2), s(3)], [s(2), s(3), s(4)]];
    let b = [sy(0), sy(1), sy(2)];
    let det3 = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let det = det3(a);
    if det.abs() < 1e-300 {
        return 0.0;
    }
    let mut a2 = a;
    for r in 0..3 {
        a2[r][2] = b[r];
    }
    2.0 * (det3(a2) / det).abs()
}

/// Log-log least squares over the largest straight window; later windows win ties.
pub fn fit_loglog(samples: &[(usize, f64)]) -> FitOutcome {
    let mut sorted = samples.to_vec();
    sorted.sort_by_key(|s| s.0);
    let excluded: Vec<usize> = sorted.iter().filter(|s| s.1 == 0.0).map(|s| s.0).collect();
    let pts: Vec<(f64, f64)> = sorted
        .iter()
        .filter(|s| s.1 > 0.0 && s.0 > 0)
        .map(|s| ((s.0 as f64).ln(), s.1.ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return FitOutcome { fit: None, decay: DecayClass::InsufficientSamples, excluded };
    }
    let u: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let ns: Vec<usize> = sorted.iter().filter(|s| s.1 > 0.0 && s.0 > 0).map(|s| s.0).collect();
    for len in (MIN_FIT_SAMPLES..=pts.len()).rev() {
        for start in (0..=pts.len() - len).rev() {
            let (uw, yw) = (&u[start..start + len], &y[start..start + len]);
            let c = if len >= 4 { curvature(uw, yw) } else { 0.0 };
            if c < CURVATURE_TOL {
                let line = ols(uw, yw);
                return FitOutcome {
                    fit: Some(SlopeFit {
                        slope: line.slope,
                        intercept: line.intercept,
                        half_width: 2.0 * line.se,
                        window: (ns[start], ns[start + len - 1]),
                        samples: len,
                        curvature: c,
                    }),
                    decay: DecayClass::PowerLaw,
                    excluded,
                };
            }
        }
    }
    let local: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let steepening = local.windows(2).all(|w| w[1] <= w[0] + 1e-12) && local.last().is_some_and(|&s| s < 0.0);
    FitOutcome {
        fit: None,
        decay: if steepening { DecayClass::SuperPolynomial } else { DecayClass::Irregular },
        excluded,
    }
}

//! Ordinary least squares of seed size on (modularity, clustering, 1), with
//! the F-test p-value for the overall regression.

/// Planar fit S ~ coef_m * M + coef_c * C + intercept.
#[derive(Debug, Clone, Copy)]
pub struct PlanarFit {
    pub coef_m: f64,
    pub coef_c: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub p_value: f64,
    pub rows: usize,
}

#[derive(Debug)]
pub enum FitError {
    TooFewRows(usize),
    RankDeficient,
}

impl std::fmt::Display for FitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitError::TooFewRows(n) => write!(f, "need at least 4 rows, got {n}"),
            FitError::RankDeficient => {
                write!(f, "design is rank-deficient (a predictor is constant)")
            }
        }
    }
}

/// Fit a plane to (M, C, S) points.
pub fn fit_plane(points: &[(f64, f64, f64)]) -> Result<PlanarFit, FitError> {
    let n = points.len();
    if n < 4 {
        return Err(FitError::TooFewRows(n));
    }

    // normal equations for design columns [M, C, 1]
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    for &(m, c, s) in points {
        let row = [m, c, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * s;
        }
    }
    let beta = solve_3x3(xtx, xty).ok_or(FitError::RankDeficient)?;

    let mean_s = points.iter().map(|p| p.2).sum::<f64>() / n as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for &(m, c, s) in points {
        let predicted = beta[0] * m + beta[1] * c + beta[2];
        ss_res += (s - predicted) * (s - predicted);
        ss_tot += (s - mean_s) * (s - mean_s);
    }
    let r_squared = if ss_tot <= f64::EPSILON * n as f64 {
        1.0 // constant response fits exactly
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    Ok(PlanarFit {
        coef_m: beta[0],
        coef_c: beta[1],
        intercept: beta[2],
        r_squared,
        p_value: f_test_p_value(r_squared, n, 2),
        rows: n,
    })
}

fn solve_3x3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() <= scale * 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col];
        for row in (col + 1)..3 {
            let factor = a[row][col] / pivot[col];
            for (slot, pv) in a[row].iter_mut().zip(pivot).skip(col) {
                *slot -= factor * pv;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut sum = b[row];
        for k in (row + 1)..3 {
            sum -= a[row][k] * x[k];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

/// p-value of the overall F-test for a regression with the given R^2,
/// sample size, and number of predictors (excluding the intercept).
pub fn f_test_p_value(r_squared: f64, n: usize, predictors: usize) -> f64 {
    let d1 = predictors as f64;
    let d2 = (n - predictors - 1) as f64;
    if d2 <= 0.0 {
        return f64::NAN;
    }
    if r_squared >= 1.0 - 1e-15 {
        return 0.0;
    }
    let f = (r_squared / d1) / ((1.0 - r_squared) / d2);
    // survival of F(d1, d2) at f
    let x = d2 / (d2 + d1 * f);
    regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x)
}

/// Regularized incomplete beta function I_x(a, b) via the Lentz continued
/// fraction, switching tails for convergence.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-14;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        // even step
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        // odd step
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 coefficients).
#[allow(clippy::excessive_precision)] // standard coefficient table
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

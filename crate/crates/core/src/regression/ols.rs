use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least squares fit with an intercept, plus the usual diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub standard_errors: Vec<f64>,
    /// `weight / standard_error`; 0 where the standard error is 0 (exact fits).
    pub t_values: Vec<f64>,
    pub r2: f64,
    pub adjusted_r2: f64,
    /// `RSS / (n − p − 1)`.
    pub residual_variance: f64,
    pub n: usize,
    pub p: usize,
}

impl OlsFit {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Residual sums below this fraction of `Σy²` count as an exact fit.
const EXACT_FIT_RATIO: f64 = 1e-24;
/// Pivot magnitude, relative to the largest, below which a column is
/// treated as linearly dependent.
const RANK_TOL: f64 = 1e-10;

/// Fits `y ≈ intercept + X·w` by Householder QR. `rows` is `n × p`.
pub fn fit_ols(rows: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let p = rows.first().map_or(0, Vec::len);
    let names: Vec<String> = (0..p).map(|j| format!("x{j}")).collect();
    fit_ols_named(rows, y, &names)
}

/// [`fit_ols`] with column names used in rank-deficiency errors.
///
/// Rows are put into a canonical order first, so the result is bitwise
/// independent of the input row order.
pub fn fit_ols_named(rows: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<OlsFit> {
    let n = rows.len();
    let p = names.len();
    if y.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{n} rows but {} targets",
            y.len()
        )));
    }
    if let Some(r) = rows.iter().position(|r| r.len() != p) {
        return Err(Error::InvalidParameter(format!(
            "row {r} has {} columns, expected {p}",
            rows[r].len()
        )));
    }
    if n < p + 2 {
        return Err(Error::TooFewRows { n, p, needed: p + 2 });
    }
    if rows.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite value in design".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        rows[a]
            .iter()
            .zip(&rows[b])
            .map(|(u, v)| u.total_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y[a].total_cmp(&y[b]))
    });

    // column-major [1 | X]
    let k = p + 1;
    let mut a = vec![0.0; n * k];
    let mut b = vec![0.0; n];
    for (i, &src) in order.iter().enumerate() {
        a[i] = 1.0;
        for j in 0..p {
            a[(j + 1) * n + i] = rows[src][j];
        }
        b[i] = y[src];
    }
    let design = a.clone();
    let targets = b.clone();

    let diag = householder_qr(&mut a, &mut b, n, k);
    let max_pivot = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if let Some(j) = diag.iter().position(|d| d.abs() <= RANK_TOL * max_pivot) {
        let column = if j == 0 {
            "intercept".to_string()
        } else {
            names[j - 1].clone()
        };
        return Err(Error::RankDeficient { column });
    }

    // R is stored above the diagonal of `a`, its diagonal in `diag`
    let r = |i: usize, j: usize| if i == j { diag[i] } else { a[j * n + i] };
    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (b[i] - s) / r(i, i);
    }

    // R⁻¹ (upper triangular), so that (AᵀA)⁻¹ = R⁻¹R⁻ᵀ
    let mut rinv = vec![0.0; k * k];
    for col in 0..k {
        rinv[col * k + col] = 1.0 / r(col, col);
        for i in (0..col).rev() {
            let s: f64 = (i + 1..=col).map(|j| r(i, j) * rinv[j * k + col]).sum();
            rinv[i * k + col] = -s / r(i, i);
        }
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| targets[i] - (0..k).map(|j| design[j * n + i] * beta[j]).sum::<f64>())
        .collect();
    let mut rss: f64 = residuals.iter().map(|e| e * e).sum();
    let sum_sq: f64 = targets.iter().map(|v| v * v).sum();
    if rss <= EXACT_FIT_RATIO * sum_sq {
        rss = 0.0;
    }
    let mean = targets.iter().sum::<f64>() / n as f64;
    let tss: f64 = targets.iter().map(|v| (v - mean) * (v - mean)).sum();

    let dof = (n - p - 1) as f64;
    let residual_variance = rss / dof;
    let r2 = if tss == 0.0 { 0.0 } else { 1.0 - rss / tss };
    let adjusted_r2 = 1.0 - (1.0 - r2) * (n as f64 - 1.0) / dof;

    let standard_errors: Vec<f64> = (1..k)
        .map(|j| {
            let row_norm: f64 = (j..k).map(|c| rinv[j * k + c].powi(2)).sum();
            (residual_variance * row_norm).sqrt()
        })
        .collect();
    let weights = beta[1..].to_vec();
    let t_values = weights
        .iter()
        .zip(&standard_errors)
        .map(|(w, se)| if *se > 0.0 { w / se } else { 0.0 })
        .collect();

    Ok(OlsFit {
        weights,
        intercept: beta[0],
        standard_errors,
        t_values,
        r2,
        adjusted_r2,
        residual_variance,
        n,
        p,
    })
}

/// In-place Householder QR of the column-major `n × k` matrix `a`, applying
/// the same reflections to `b`. Returns the diagonal of R; the strict upper
/// triangle of R is left in `a`.
fn householder_qr(a: &mut [f64], b: &mut [f64], n: usize, k: usize) -> Vec<f64> {
    let mut diag = vec![0.0; k];
    for j in 0..k {
        let col = j * n;
        let norm = a[col + j..col + n].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            diag[j] = 0.0;
            continue;
        }
        let alpha = if a[col + j] > 0.0 { -norm } else { norm };
        // v = x − alpha·e1, stored in place
        a[col + j] -= alpha;
        let vnorm2: f64 = a[col + j..col + n].iter().map(|v| v * v).sum();
        if vnorm2 > 0.0 {
            for c in j + 1..k {
                let other = c * n;
                let dot: f64 = (j..n).map(|i| a[col + i] * a[other + i]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in j..n {
                    a[other + i] -= f * a[col + i];
                }
            }
            let dot: f64 = (j..n).map(|i| a[col + i] * b[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                b[i] -= f * a[col + i];
            }
        }
        diag[j] = alpha;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn design(n: usize, p: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut s = seed;
        (0..n).map(|_| (0..p).map(|_| lcg(&mut s) * 3.0).collect()).collect()
    }

    #[test]
    fn exact_linear_recovers_coefficients() {
        let x = design(40, 3, 7);
        let w = [1.5, -2.0, 0.25];
        let y: Vec<f64> = x.iter().map(|r| 0.7 + r.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>()).collect();
        let fit = fit_ols(&x, &y).unwrap();
        assert_eq!(fit.r2, 1.0);
        assert_eq!(fit.adjusted_r2, 1.0);
        assert!((fit.intercept - 0.7).abs() < 1e-9);
        for (a, b) in fit.weights.iter().zip(&w) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_target() {
        let x = design(30, 4, 3);
        let fit = fit_ols(&x, &vec![2.5; 30]).unwrap();
        assert!((fit.intercept - 2.5).abs() < 1e-12);
        assert!(fit.weights.iter().all(|w| w.abs() < 1e-12));
        assert_eq!(fit.r2, 0.0);
    }

    #[test]
    fn too_few_rows() {
        let x = design(10, 9, 1);
        assert!(matches!(
            fit_ols(&x, &[0.0; 10]),
            Err(Error::TooFewRows { n: 10, p: 9, needed: 11 })
        ));
    }

    #[test]
    fn rank_deficiency_names_column() {
        let mut x = design(30, 3, 5);
        for r in &mut x {
            r[2] = 2.0 * r[0] - r[1];
        }
        let y: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        match fit_ols_named(&x, &y, &names) {
            Err(Error::RankDeficient { column }) => assert_eq!(column, "c"),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        // constant column duplicates the intercept
        let mut x = design(30, 2, 5);
        for r in &mut x {
            r[1] = 4.0;
        }
        assert!(matches!(fit_ols(&x, &y), Err(Error::RankDeficient { .. })));
    }

    fn noisy(n: usize, p: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
        let x = design(n, p, seed);
        let mut s = seed ^ 0xdead_beef;
        let y = x
            .iter()
            .map(|r| {
                r.iter().enumerate().map(|(j, v)| v * (j as f64 - 1.5)).sum::<f64>()
                    + 0.8 * lcg(&mut s)
            })
            .collect();
        (x, y)
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_to_design(n in 12usize..80, p in 1usize..8, seed in any::<u64>()) {
            prop_assume!(n >= p + 2);
            let (x, y) = noisy(n, p, seed);
            let fit = fit_ols(&x, &y).unwrap();
            let res: Vec<f64> = x.iter().zip(&y).map(|(r, t)| t - fit.predict(r)).collect();
            prop_assert!(res.iter().sum::<f64>().abs() < 1e-8);
            for j in 0..p {
                let dot: f64 = x.iter().zip(&res).map(|(r, e)| r[j] * e).sum();
                prop_assert!(dot.abs() < 1e-8, "column {} dot {}", j, dot);
            }
        }

        #[test]
        fn diagnostics_are_consistent(n in 12usize..80, p in 1usize..8, seed in any::<u64>()) {
            prop_assume!(n >= p + 2);
            let (x, y) = noisy(n, p, seed);
            let fit = fit_ols(&x, &y).unwrap();
            let adj = 1.0 - (1.0 - fit.r2) * (n as f64 - 1.0) / (n as f64 - p as f64 - 1.0);
            prop_assert_eq!(adj, fit.adjusted_r2);
            prop_assert!(fit.adjusted_r2 <= fit.r2 && fit.r2 <= 1.0);
            for ((w, se), t) in fit.weights.iter().zip(&fit.standard_errors).zip(&fit.t_values) {
                prop_assert!(*se > 0.0);
                prop_assert_eq!(*t, w / se);
            }
        }

        #[test]
        fn row_order_is_irrelevant(n in 12usize..60, p in 1usize..6, seed in any::<u64>(), rot in 1usize..11) {
            prop_assume!(n >= p + 2);
            let (mut x, mut y) = noisy(n, p, seed);
            let a = fit_ols(&x, &y).unwrap();
            x.rotate_left(rot % n);
            y.rotate_left(rot % n);
            x.reverse();
            y.reverse();
            let b = fit_ols(&x, &y).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn noise_feature_adjusted_gain_bounded(n in 15usize..120, p in 1usize..7, seed in any::<u64>()) {
            prop_assume!(n >= p + 3);
            let (x, y) = noisy(n, p, seed);
            let base = fit_ols(&x, &y).unwrap();
            let mut rng = StdRng::seed_from_u64(seed.wrapping_add(1));
            let wider: Vec<Vec<f64>> = x.iter().map(|r| {
                let mut r = r.clone();
                r.push(rng.random_range(-1.0..1.0));
                r
            }).collect();
            let more = fit_ols(&wider, &y).unwrap();
            let excess = (more.adjusted_r2 - base.adjusted_r2) - (more.r2 - base.r2);
            // Adjusted R² gains no more than R² exactly when the new
            // column's t² <= (n - 1) / p.
            let t2 = more.t_values[p].powi(2);
            let bound = (n as f64 - 1.0) / p as f64;
            if t2 <= bound * (1.0 - 1e-6) {
                prop_assert!(excess <= 1e-12, "t2 {} bound {} excess {}", t2, bound, excess);
            } else if t2 >= bound * (1.0 + 1e-6) {
                prop_assert!(excess > 0.0);
            }
        }
    }
}

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevenbergMarquardtOptions {
    pub max_iters: usize,
    /// Stop once `½‖r‖²` drops to this level.
    pub target: f64,
    /// Relative forward-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for LevenbergMarquardtOptions {
    fn default() -> Self {
        Self { max_iters: 60, target: 0.0, fd_step: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresResult {
    pub x: Vec<f64>,
    /// `½‖r(x)‖²`.
    pub cost: f64,
    pub evals: usize,
}

fn half_norm_sq(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[pivot * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            if factor != 0.0 {
                for k in col..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = alloc::vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row * n + row];
    }
    Some(x)
}

/// Damped Gauss-Newton on `½‖r(x)‖²` with a forward-difference Jacobian.
///
/// `residual` returns `None` where `r` is undefined; such points are rejected
/// like uphill steps.
pub fn levenberg_marquardt<R>(mut residual: R, x0: &[f64], opts: LevenbergMarquardtOptions) -> LeastSquaresResult
where
    R: FnMut(&[f64]) -> Option<Vec<f64>>,
{
    let n = x0.len();
    let mut evals = 1;
    let mut x = x0.to_vec();
    let Some(mut r) = residual(&x) else {
        return LeastSquaresResult { x, cost: f64::INFINITY, evals };
    };
    let mut cost = half_norm_sq(&r);
    let mut lambda = 1e-3;
    let m = r.len();

    for _ in 0..opts.max_iters {
        if cost <= opts.target || n == 0 {
            break;
        }
        // Jacobian, column-major: jac[j * m + i] = ∂r_i/∂x_j.
        let mut jac = alloc::vec![0.0; n * m];
        let mut usable = true;
        for j in 0..n {
            let step = opts.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += step;
            evals += 1;
            match residual(&xp) {
                Some(rp) => {
                    for i in 0..m {
                        jac[j * m + i] = (rp[i] - r[i]) / step;
                    }
                }
                None => usable = false,
            }
        }
        if !usable {
            break;
        }
        let mut jtj = alloc::vec![0.0; n * n];
        let mut grad = alloc::vec![0.0; n];
        for a in 0..n {
            let ca = &jac[a * m..(a + 1) * m];
            grad[a] = ca.iter().zip(&r).map(|(p, q)| p * q).sum();
            for b in a..n {
                let v: f64 = ca.iter().zip(&jac[b * m..(b + 1) * m]).map(|(p, q)| p * q).sum();
                jtj[a * n + b] = v;
                jtj[b * n + a] = v;
            }
        }
        let scale = (0..n).map(|k| jtj[k * n + k]).fold(0.0, f64::max).max(1e-300);

        let mut improved = false;
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for k in 0..n {
                damped[k * n + k] += lambda * (jtj[k * n + k] + 1e-9 * scale);
            }
            let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
            let Some(delta) = solve_dense(damped, rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + d).collect();
            evals += 1;
            if let Some(rt) = residual(&trial) {
                let ct = half_norm_sq(&rt);
                if ct < cost {
                    x = trial;
                    r = rt;
                    let gain = cost - ct;
                    cost = ct;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = gain > 1e-15 * cost.max(1e-300) || cost <= opts.target;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LeastSquaresResult { x, cost, evals }
}

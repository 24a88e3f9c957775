use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once the best value drops to this level.
    pub target: f64,
    /// Stop once `f_worst − f_best` falls below this.
    pub f_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 4000, initial_step: 0.1, target: f64::NEG_INFINITY, f_tol: 1e-14 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Derivative-free minimization with dimension-adaptive coefficients
/// (reflection 1, expansion `1 + 2/n`, contraction `0.75 − 1/(2n)`,
/// shrink `1 − 1/n`).
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evals);
        return NelderMeadResult { x: Vec::new(), value, evals };
    }

    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if values[best] <= opts.target || evals >= opts.max_evals || (values[worst] - values[best]).abs() <= opts.f_tol
        {
            break;
        }

        let mut centroid = alloc::vec![0.0; n];
        for &k in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                *c += x / nf;
            }
        }
        let along =
            |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[worst]).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < values[best] {
            let xe = along(alpha * gamma);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = along(alpha * rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &k in &order[1..] {
            let shrunk: Vec<f64> = anchor.iter().zip(&simplex[k]).map(|(a, x)| a + sigma * (x - a)).collect();
            values[k] = eval(&shrunk, &mut evals);
            simplex[k] = shrunk;
        }
    }
    let best = order[0];
    NelderMeadResult { x: simplex[best].clone(), value: values[best], evals }
}

//! Internal optimization machinery for witness searches: row-softmax
//! parameterization of channels, Sinkhorn scaling onto fixed marginals, a
//! compact L-BFGS with numerical gradients, and deterministic seed mixing
//! for parallel multi-start runs.

/// SplitMix64 step, used to derive per-start RNG seeds from a base seed.
/// Stable across platforms and releases, unlike the std hasher.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combines a seed with an index into a new seed.
pub(crate) fn seed_for(base: u64, index: u64) -> u64 {
    mix64(base ^ mix64(index.wrapping_add(0x5555_5555_5555_5555)))
}

/// Row-wise softmax of `logits` interpreted as a `rows x cols` matrix.
pub(crate) fn softmax_rows(logits: &[f64], rows: usize, cols: usize, out: &mut [f64]) {
    debug_assert_eq!(logits.len(), rows * cols);
    debug_assert_eq!(out.len(), rows * cols);
    for r in 0..rows {
        let row = &logits[r * cols..(r + 1) * cols];
        let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for c in 0..cols {
            let e = (row[c] - m).exp();
            out[r * cols + c] = e;
            sum += e;
        }
        for c in 0..cols {
            out[r * cols + c] /= sum;
        }
    }
}

/// Sinkhorn scaling of the positive `rows x cols` kernel `k` onto the
/// marginals (`row_marg`, `col_marg`). Writes the coupling into `out` and
/// returns the final max marginal residual.
///
/// Stops when the residual drops below `tol` or after `max_iters` sweeps.
pub(crate) fn sinkhorn_coupling(
    k: &[f64],
    row_marg: &[f64],
    col_marg: &[f64],
    tol: f64,
    max_iters: usize,
    out: &mut [f64],
) -> f64 {
    let (nr, nc) = (row_marg.len(), col_marg.len());
    debug_assert_eq!(k.len(), nr * nc);
    let mut u = vec![1.0f64; nr];
    let mut v = vec![1.0f64; nc];
    let tiny = 1e-300;
    let mut resid = f64::INFINITY;
    for _ in 0..max_iters {
        for r in 0..nr {
            let mut s = 0.0;
            for c in 0..nc {
                s += k[r * nc + c] * v[c];
            }
            u[r] = row_marg[r] / s.max(tiny);
        }
        for c in 0..nc {
            let mut s = 0.0;
            for r in 0..nr {
                s += k[r * nc + c] * u[r];
            }
            v[c] = col_marg[c] / s.max(tiny);
        }
        // after the column update, column marginals hold exactly; check rows
        resid = 0.0;
        for r in 0..nr {
            let mut s = 0.0;
            for c in 0..nc {
                s += k[r * nc + c] * u[r] * v[c];
            }
            resid = resid.max((s - row_marg[r]).abs());
        }
        if resid < tol {
            break;
        }
    }
    for r in 0..nr {
        for c in 0..nc {
            out[r * nc + c] = k[r * nc + c] * u[r] * v[c];
        }
    }
    resid
}

/// Central-difference gradient of `f` at `x`.
fn numerical_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &mut [f64], grad: &mut [f64]) {
    let h = 1e-6;
    for i in 0..x.len() {
        let xi = x[i];
        x[i] = xi + h;
        let fp = f(x);
        x[i] = xi - h;
        let fm = f(x);
        x[i] = xi;
        grad[i] = (fp - fm) / (2.0 * h);
    }
}

/// Minimizes `f` from `x0` with L-BFGS (two-loop recursion, memory `m`) and
/// a backtracking Armijo line search. Returns the best point and value.
pub(crate) fn lbfgs_minimize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    max_iters: usize,
    grad_tol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let m = 8usize;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut grad = vec![0.0; n];
    numerical_gradient(&f, &mut x, &mut grad);

    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho_hist: Vec<f64> = Vec::new();

    let mut best_x = x.clone();
    let mut best_f = fx;

    let mut stall = 0usize;
    for _ in 0..max_iters {
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < grad_tol {
            break;
        }

        // two-loop recursion
        let mut q = grad.clone();
        let hist_len = s_hist.len();
        let mut alpha = vec![0.0; hist_len];
        for i in (0..hist_len).rev() {
            let a = rho_hist[i] * dot(&s_hist[i], &q);
            alpha[i] = a;
            axpy(&mut q, -a, &y_hist[i]);
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = dot(s, y) / dot(y, y).max(1e-300);
            for qi in q.iter_mut() {
                *qi *= gamma;
            }
        }
        for i in 0..hist_len {
            let b = rho_hist[i] * dot(&y_hist[i], &q);
            axpy(&mut q, alpha[i] - b, &s_hist[i]);
        }
        // q now holds H * grad; descend along -q
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&dir, &grad);
        let mut step = if hist_len == 0 {
            1.0 / gnorm.max(1.0)
        } else {
            1.0
        };
        if !slope.is_finite() || slope >= 0.0 {
            dir = grad.iter().map(|g| -g).collect();
            slope = -gnorm * gnorm;
            step = 1.0 / gnorm.max(1.0);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // backtracking Armijo, with a steepest-descent retry before giving up
        let c1 = 1e-4;
        let mut x_new = x.clone();
        let mut f_new = fx;
        let mut ok = false;
        for attempt in 0..2 {
            for _ in 0..40 {
                for i in 0..n {
                    x_new[i] = x[i] + step * dir[i];
                }
                f_new = f(&x_new);
                if f_new.is_finite() && f_new <= fx + c1 * step * slope {
                    ok = true;
                    break;
                }
                step *= 0.5;
            }
            if ok || attempt == 1 || hist_len == 0 {
                break;
            }
            // quasi-Newton direction failed; restart from steepest descent
            dir = grad.iter().map(|g| -g).collect();
            slope = -gnorm * gnorm;
            step = 1.0 / gnorm.max(1.0);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }
        if !ok {
            break;
        }

        let mut g_new = vec![0.0; n];
        numerical_gradient(&f, &mut x_new, &mut g_new);

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if s_hist.len() == m {
                s_hist.remove(0);
                y_hist.remove(0);
                rho_hist.remove(0);
            }
            rho_hist.push(1.0 / sy);
            s_hist.push(s);
            y_hist.push(y);
        }

        let f_drop = fx - f_new;
        x = x_new;
        fx = f_new;
        grad = g_new;
        if fx < best_f {
            best_f = fx;
            best_x = x.clone();
        }
        if f_drop.abs() < 1e-16 * (1.0 + fx.abs()) {
            stall += 1;
            if stall >= 3 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    (best_x, best_f)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

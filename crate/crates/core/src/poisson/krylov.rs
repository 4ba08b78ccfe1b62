//! Jacobi-preconditioned BiCGSTAB.

pub(crate) trait LinearOperator {
    fn size(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
    fn diagonal(&self) -> &[f64];
}

pub(crate) struct KrylovOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual<A: LinearOperator>(op: &A, b: &[f64], x: &[f64], r: &mut [f64]) {
    op.apply(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

/// Solves `A x = b` in place, starting from the given `x`, until
/// `|b - A x| <= tol |b|` or `max_iters` operator applications pairs are spent.
pub(crate) fn bicgstab<A: LinearOperator>(op: &A, b: &[f64], x: &mut [f64], tol: f64, max_iters: usize) -> KrylovOutcome {
    let n = op.size();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return KrylovOutcome { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let inv_diag: Vec<f64> = op.diagonal().iter().map(|d| 1.0 / d).collect();

    let mut r = vec![0.0; n];
    residual(op, b, x, &mut r);
    let mut rel = norm(&r) / b_norm;
    let mut iterations = 0;

    let (mut p, mut v, mut y, mut s, mut z, mut t) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    // Outer loop restarts the recurrence from the true residual after a breakdown
    // or when the recursive residual has drifted from it.
    while rel > tol && iterations < max_iters {
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);
        p.iter_mut().for_each(|v| *v = 0.0);
        v.iter_mut().for_each(|v| *v = 0.0);

        while iterations < max_iters {
            iterations += 1;
            let rho_new = dot(&r_hat, &r);
            if rho_new.abs() < 1e-300 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
                y[i] = inv_diag[i] * p[i];
            }
            op.apply(&y, &mut v);
            let rv = dot(&r_hat, &v);
            if rv == 0.0 {
                break;
            }
            alpha = rho / rv;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
            }
            if norm(&s) / b_norm <= tol {
                for i in 0..n {
                    x[i] += alpha * y[i];
                }
                break;
            }
            for i in 0..n {
                z[i] = inv_diag[i] * s[i];
            }
            op.apply(&z, &mut t);
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * y[i] + omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
            if omega == 0.0 || norm(&r) / b_norm <= tol {
                break;
            }
        }
        residual(op, b, x, &mut r);
        rel = norm(&r) / b_norm;
    }

    KrylovOutcome { iterations, relative_residual: rel, converged: rel <= tol }
}

//! Independent brute-force references used by the bszego test suites and the
//! CLI `verify` command: an adaptive Gauss-Kronrod integrator, plain
//! bisection for the node equation, a Sturm-sequence eigensolver for
//! symmetric tridiagonal matrices, and the tridiagonal determinant
//! recurrence.
//!
//! Everything here favors simplicity and verifiability over speed; none of
//! it shares code paths with the implementations it checks.

use bszego::jacobi::JacobiOperator;
use bszego::nodes::{lhs_phi, node_target};
use bszego::params::CompositeConfig;

/// Result of an adaptive reference integration.
#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    /// False when the refinement budget ran out before reaching `tol`.
    pub converged: bool,
}

// 15-point Kronrod nodes (positive half), 7-point Gauss weights and the
// Kronrod weights, as tabulated in QUADPACK's dqk15.
const XGK: [f64; 8] = [
    0.991455371120812639,
    0.949107912342758525,
    0.864864423359769073,
    0.741531185599394440,
    0.586087235467691130,
    0.405845151377397167,
    0.207784955007898468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529225,
    0.063092092629978553,
    0.104790010322250184,
    0.140653259715525919,
    0.169004726639267903,
    0.190350578064785410,
    0.204432940075298892,
    0.209482141084727828,
];
const WG: [f64; 4] = [
    0.129484966168869693,
    0.279705391489276668,
    0.381830050505118945,
    0.417959183673469388,
];

/// One G7-K15 panel evaluation: returns (kronrod, error_estimate).
fn gauss_kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut res_abs = kronrod.abs();

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    let err = rescale_error((kronrod - gauss) * half, res_abs * half, res_asc * half);
    (value, err)
}

/// QUADPACK error rescaling: sharpen the raw `|K - G|` difference.
fn rescale_error(raw: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = raw.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// Adaptive Gauss-Kronrod integration of `f` over `(a, b)`, worst panel
/// first, until the summed error estimate drops below `tol` or the panel
/// budget is exhausted. The rule is open: endpoints are never evaluated.
pub fn reference_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> OracleReport {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;

    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    impl PartialEq for Panel {
        fn eq(&self, other: &Self) -> bool {
            self.err == other.err
        }
    }
    impl Eq for Panel {}
    impl PartialOrd for Panel {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Panel {
        fn cmp(&self, other: &Self) -> Ordering {
            self.err.total_cmp(&other.err)
        }
    }

    const MAX_PANELS: usize = 20_000;

    let mut evaluations = 15u64;
    let (v, e) = gauss_kronrod_panel(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        err: e,
    });
    let mut total_err = e;
    let mut converged = true;
    while total_err > tol {
        if heap.len() >= MAX_PANELS {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval width at rounding floor; keep as is
            heap.push(worst);
            converged = false;
            break;
        }
        let (v1, e1) = gauss_kronrod_panel(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_panel(&f, mid, worst.b);
        evaluations += 30;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
    let value = heap.iter().map(|p| p.value).sum();
    OracleReport {
        value,
        error_estimate: total_err,
        evaluations,
        converged,
    }
}

/// Plain bisection of the node equation on `[0, pi]` to interval width
/// `tol`; guaranteed by the strict monotonicity of the left-hand side.
pub fn bisect_node(config: &CompositeConfig, l_hat: usize, tol: f64) -> f64 {
    use std::f64::consts::PI;
    let target = node_target(config, l_hat);
    if target == 0.0 {
        return 0.0;
    }
    if lhs_phi(config, PI) == target {
        return PI;
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lhs_phi(config, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Count of eigenvalues strictly below `lambda` via the Sturm sequence
/// (LDLT pivot signs).
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let guard = 1e-300;
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < guard {
            if q >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, via Sturm
/// bisection inside the Gershgorin bound.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![diag[0]];
    }
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    lo -= 1.0;
    hi += 1.0;

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if b - a < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
                if sturm_count(diag, off, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Solve `(T - lambda I) x = rhs` by Gaussian elimination with partial
/// pivoting (one band of fill-in); tiny pivots are clamped.
fn solve_shifted(diag: &[f64], off: &[f64], lambda: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let mut main: Vec<f64> = diag.iter().map(|&d| d - lambda).collect();
    let mut up1: Vec<f64> = off.to_vec();
    up1.push(0.0);
    let mut up2 = vec![0.0f64; n];
    let scale: f64 = diag
        .iter()
        .chain(off.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1.0);
    let tiny = f64::EPSILON * scale * 1e-3;

    for i in 0..n.saturating_sub(1) {
        let low = off[i];
        if low.abs() > main[i].abs() {
            // swap rows i and i+1
            let row_i = (main[i], up1[i], up2[i]);
            main[i] = low;
            up1[i] = main[i + 1];
            up2[i] = up1[i + 1];
            let m = row_i.0 / main[i];
            main[i + 1] = row_i.1 - m * up1[i];
            up1[i + 1] = row_i.2 - m * up2[i];
            rhs.swap(i, i + 1);
            rhs[i + 1] -= m * rhs[i];
        } else {
            let pivot = if main[i].abs() < tiny {
                tiny.copysign(main[i])
            } else {
                main[i]
            };
            main[i] = pivot;
            let m = low / pivot;
            main[i + 1] -= m * up1[i];
            up1[i + 1] -= m * up2[i];
            rhs[i + 1] -= m * rhs[i];
        }
    }
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v -= up1[i] * rhs[i + 1];
        }
        if i + 2 < n {
            v -= up2[i] * rhs[i + 2];
        }
        let pivot = if main[i].abs() < tiny {
            tiny.copysign(main[i])
        } else {
            main[i]
        };
        rhs[i] = v / pivot;
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Full spectrum and orthonormal eigenvectors of a symmetric
/// [`JacobiOperator`]: Sturm-bisection eigenvalues, inverse-iteration
/// eigenvectors, ascending order, first significant component positive.
///
/// Returns `(values, vectors)` with `vectors[k]` the eigenvector of
/// `values[k]`.
pub fn tridiag_eig(op: &JacobiOperator) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert!(op.symmetric, "oracle eigensolver requires a symmetric operator");
    let n = op.size();
    let values = tridiag_eigenvalues(&op.diag, &op.sub);
    let vectors = values
        .iter()
        .map(|&lambda| {
            let mut v: Vec<f64> = (0..n)
                .map(|i| if i % 2 == 0 { 1.0 } else { 0.5 })
                .collect();
            normalize(&mut v);
            for _ in 0..3 {
                solve_shifted(&op.diag, &op.sub, lambda, &mut v);
                normalize(&mut v);
            }
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-14) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            v
        })
        .collect();
    (values, vectors)
}

/// Determinant `det(x I - T)` of a tridiagonal operator by the classical
/// three-term recurrence over leading principal minors.
pub fn tridiag_charpoly(op: &JacobiOperator, x: f64) -> f64 {
    let n = op.size();
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = x - op.diag[0];
    for k in 2..=n {
        let next = (x - op.diag[k - 1]) * p - op.sub[k - 2] * op.sup[k - 2] * p_prev;
        p_prev = p;
        p = next;
    }
    p
}

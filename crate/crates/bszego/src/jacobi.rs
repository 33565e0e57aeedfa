//! The tridiagonal operators `L^(m)` and `J^(m)` diagonalized by the
//! composite basis, and the characteristic polynomial `Q_{m+1}` whose roots
//! are the nodes.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::basis::CompositeBasis;
use crate::error::{Error, Result};
use crate::gram::PolynomialFamily;
use crate::params::{BSFamily, CompositeConfig};
use crate::quadrature::build_rule;
use crate::special::{c_function, explicit_norm_delta, q_poly};

/// A real tridiagonal operator stored by bands.
#[derive(Debug, Clone)]
pub struct JacobiOperator {
    /// Subdiagonal entries `A[i+1][i]`, length `n - 1`.
    pub sub: Vec<f64>,
    /// Diagonal entries, length `n`.
    pub diag: Vec<f64>,
    /// Superdiagonal entries `A[i][i+1]`, length `n - 1`.
    pub sup: Vec<f64>,
    /// True when `sub == sup` by construction.
    pub symmetric: bool,
}

impl JacobiOperator {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Apply to a real vector (zero boundary conditions).
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Apply to a complex vector.
    pub fn apply_complex(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// The operator `L^(m)`: recurrence rows of the untilded family at the top,
/// free rows `(1, 0, 1)` in the middle, reflected tilde rows at the bottom.
pub fn build_l(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
) -> JacobiOperator {
    let m = config.grid_size();
    let ceil_d = config.family().half_degree().ceil();
    let ceil_dt = config.family_tilde().half_degree().ceil();
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m + 1];
    let mut sup = vec![0.0; m];
    for l in 0..=m {
        let li = l as i64;
        let (s, d, p) = if li <= ceil_d {
            (
                1.0,
                famp.recurrence_b(l),
                famp.recurrence_a(l + 1).powi(2),
            )
        } else if li >= m as i64 - ceil_dt {
            (
                famp_t.recurrence_a(m - l + 1).powi(2),
                famp_t.recurrence_b(m - l),
                1.0,
            )
        } else {
            (1.0, 0.0, 1.0)
        };
        if l >= 1 {
            sub[l - 1] = s;
        }
        diag[l] = d;
        if l < m {
            sup[l] = p;
        }
    }
    let symmetric = sub == sup;
    JacobiOperator {
        sub,
        diag,
        sup,
        symmetric,
    }
}

/// The symmetric Jacobi matrix `J^(m) = (Delta^(m))^{1/2} L^(m) (Delta^(m))^{-1/2}`,
/// built directly from its closed-form bands. The junction entries in the
/// middle branch read `a^(m)_{l+1} = (Delta_l Delta~_{m-l-1})^{-1/2}`.
pub fn build_j(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
) -> JacobiOperator {
    let m = config.grid_size();
    let ceil_d = config.family().half_degree().ceil();
    let ceil_dt = config.family_tilde().half_degree().ceil();
    let band: Vec<f64> = (0..m)
        .map(|l| {
            let li = l as i64;
            if li < ceil_d {
                famp.recurrence_a(l + 1)
            } else if li < m as i64 - ceil_dt {
                1.0 / (famp.delta_any(l) * famp_t.delta_any(m - l - 1)).sqrt()
            } else {
                famp_t.recurrence_a(m - l)
            }
        })
        .collect();
    let diag: Vec<f64> = (0..=m)
        .map(|l| {
            let li = l as i64;
            if li <= ceil_d {
                famp.recurrence_b(l)
            } else if li >= m as i64 - ceil_dt {
                famp_t.recurrence_b(m - l)
            } else {
                0.0
            }
        })
        .collect();
    JacobiOperator {
        sub: band.clone(),
        diag,
        sup: band,
        symmetric: true,
    }
}

/// Maximum normalized residual of the eigenvalue equation
/// `L psi(xi_l^) = 2 cos(xi_l^) psi(xi_l^)` over the grid.
pub fn eig_check(basis: &CompositeBasis, op: &JacobiOperator) -> f64 {
    let n = basis.grid().len();
    assert_eq!(op.size(), n);
    let mut worst = 0.0f64;
    for l_hat in 0..n {
        let v = basis.column(l_hat);
        let lv = op.apply_complex(&v);
        let lambda = 2.0 * basis.grid().node(l_hat).cos();
        let vmax = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let rmax = lv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(rmax / vmax);
    }
    worst
}

/// Elementary symmetric polynomials `e_0..e_d` of the parameter list;
/// real after conjugate pairing.
pub fn elementary_symmetric(alpha: &[Complex64]) -> Vec<f64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for &a in alpha {
        e.push(Complex64::new(0.0, 0.0));
        for k in (1..e.len()).rev() {
            let lower = e[k - 1];
            e[k] += a * lower;
        }
    }
    e.into_iter()
        .map(|v| {
            assert!(
                v.im.abs() < 1e-13 * v.re.abs().max(1.0),
                "conjugate pairing violated in elementary symmetric polynomials"
            );
            v.re
        })
        .collect()
}

/// Coefficients `e_k(alpha~; 1 - eps_+~; 1 - eps_-~)` of the characteristic
/// polynomial expansion, `k = 0..=2(d_eps~ + 1)`, from the generating
/// function `(1 + x z)(1 - y z) prod_r (1 + alpha~_r z)`.
pub fn charpoly_coeffs(fam_t: &BSFamily) -> Vec<f64> {
    let e = elementary_symmetric(fam_t.alpha());
    let x = 1.0 - f64::from(fam_t.eps_plus());
    let y = 1.0 - f64::from(fam_t.eps_minus());
    let k_max = (fam_t.half_degree().twice() + 2) as usize;
    let at = |k: i64| -> f64 {
        if k < 0 {
            0.0
        } else {
            e.get(k as usize).copied().unwrap_or(0.0)
        }
    };
    (0..=k_max as i64)
        .map(|k| at(k) + (x - y) * at(k - 1) - x * y * at(k - 2))
        .collect()
}

/// Characteristic polynomial
/// `Q_{m+1}(xi) = sum_k e_k(alpha~; 1-eps_+~; 1-eps_-~) q_{m+1-k}(xi)`,
/// a degree `m+1` polynomial in `cos(xi)` with leading coefficient `2^{m+1}`
/// vanishing exactly at the nodes.
pub fn charpoly_eval(config: &CompositeConfig, xi: f64) -> Result<f64> {
    let coeffs = charpoly_coeffs(config.family_tilde());
    let m = config.grid_size() as i64;
    let mut acc = 0.0;
    for (k, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            acc += c * q_poly(config.family(), m + 1 - k as i64, xi)?;
        }
    }
    Ok(acc)
}

/// Cosine-series coefficients `g_0..g_{m+1}` of `Q_{m+1}`, i.e.
/// `Q(xi) = g_0 + sum_j g_j cos(j xi)`, extracted by sampling on the
/// Chebyshev angles (exact up to rounding for a cosine polynomial of this
/// degree). The leading coefficient in `cos(xi)` is `g_{m+1} 2^m`.
pub fn charpoly_cosine_coeffs(config: &CompositeConfig) -> Result<Vec<f64>> {
    let n = config.grid_size() + 1;
    let samples = n + 1;
    let theta = |i: usize| (i as f64 + 0.5) * PI / samples as f64;
    let values: Vec<f64> = (0..samples)
        .map(|i| charpoly_eval(config, theta(i)))
        .collect::<Result<_>>()?;
    let mut g = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc = 0.0;
        for (i, &q) in values.iter().enumerate() {
            acc += q * (j as f64 * theta(i)).cos();
        }
        let scale = if j == 0 { 1.0 } else { 2.0 };
        g.push(acc * scale / samples as f64);
    }
    Ok(g)
}

/// Verify the expansion coefficients of `Q_{m+1}` in the orthogonal basis:
/// project `Q` onto `p_{m+1-k}` with an auxiliary Gauss-kind rule of the
/// same untilded family (the rule's own exactness degree is too low for
/// these products) and compare against `e_k(alpha~; 1-eps_+~; 1-eps_-~)`.
/// Returns the maximum coefficient deviation.
///
/// Requires `2 d_eps~ <= m - 1 - d_eps`, which keeps every projection target
/// inside the explicit range.
pub fn charpoly_expansion_check(
    config: &CompositeConfig,
    _famp: &PolynomialFamily,
) -> Result<f64> {
    let m = config.grid_size() as i64;
    let t = config.family().half_degree().twice();
    let tt = config.family_tilde().half_degree().twice();
    if 2 * tt > 2 * (m - 1) - t {
        return Err(Error::PreconditionNotMet(format!(
            "expansion check needs 2 d_eps~ <= m - 1 - d_eps; got d_eps~ = {}, m = {m}, d_eps = {}",
            config.family_tilde().half_degree(),
            config.family().half_degree()
        )));
    }

    let gauss_tilde = BSFamily::new(1, 1, Vec::new()).expect("trivial family");
    let aux = CompositeConfig::new(config.family().clone(), gauss_tilde, m as usize + 2)
        .expect("m + 2 clears the grid condition");
    let rule = build_rule(&aux, 1e-13)?;

    let expected = charpoly_coeffs(config.family_tilde());
    let mut worst = 0.0f64;
    for (k, &ek) in expected.iter().enumerate() {
        let j = m + 1 - k as i64;
        if j < 0 {
            // q_j with j < 0 degenerates below the basis range; the term
            // vanishes identically and carries no coefficient to compare.
            continue;
        }
        // <Q, p_j>_w through the auxiliary rule; the weight-function value
        // rho / denominator collapses to 1/|c|^2 at each node
        let mut acc = 0.0;
        for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
            let q = charpoly_eval(config, xi)?;
            let p = q_poly(config.family(), j, xi)?;
            let c_sq = c_function(config.family(), xi)?.norm_sqr();
            acc += q * p / c_sq * w;
        }
        let recovered = explicit_norm_delta(config.family(), j)? * acc;
        worst = worst.max((recovered - ek).abs());
    }
    Ok(worst)
}

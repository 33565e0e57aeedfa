//! Moment-based Gram-Schmidt bootstrap for the finitely many polynomials
//! below the explicit-formula threshold `l < d_eps`, plus the recurrence
//! coefficients `a_l`, `b_l`.
//!
//! Moments are computed from truncated Fourier-series products rather than
//! numerical quadrature: each pole factor expands as
//! `1/(1 + 2 alpha cos xi + alpha^2) = (1 - alpha^2)^{-1} (1 + 2 sum_j (-alpha)^j cos(j xi))`,
//! the series are convolved, multiplied by the Chebyshev numerator, and the
//! moments read off coefficientwise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::BSFamily;
use crate::special::{explicit_norm_delta, q_poly};

/// Moments `mu_k = \int_0^pi cos(k xi) w(xi) dxi` for `k = 0..=k_max`.
pub fn fourier_moments(fam: &BSFamily, k_max: usize) -> Vec<f64> {
    let series = weight_series(fam, k_max);
    series.iter().take(k_max + 1).map(|u| 0.5 * u.re).collect()
}

/// Symmetric Fourier coefficients of `2 pi w(xi)`: returns `u_0..u_n` with
/// `2 pi w(xi) = sum_{|j| <= n} u_{|j|} e^{i j xi}` up to the truncation error.
fn weight_series(fam: &BSFamily, k_max: usize) -> Vec<Complex64> {
    let a_max = fam
        .alpha()
        .iter()
        .map(|a| a.norm())
        .fold(0.0f64, f64::max);
    // Truncate each factor where |alpha|^N drops below 1e-16, then leave room
    // for the convolutions and the requested moment order.
    let n = if a_max > 0.0 {
        (1e-16f64.ln() / a_max.ln()).ceil() as usize + k_max + fam.degree()
    } else {
        k_max + 2
    }
    .max(k_max + 2);

    let mut series = vec![Complex64::new(0.0, 0.0); n + 1];
    series[0] = Complex64::new(1.0, 0.0);

    // Chebyshev numerator 2^{eps_+ + eps_-} (1 + eps_+ cos)(1 - eps_- cos).
    if fam.eps_plus() == 1 {
        let factor = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)];
        series = sym_mul(&series, &factor, n);
        series.iter_mut().for_each(|u| *u *= 2.0);
    }
    if fam.eps_minus() == 1 {
        let factor = [Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0)];
        series = sym_mul(&series, &factor, n);
        series.iter_mut().for_each(|u| *u *= 2.0);
    }

    // Pole factors.
    for &a in fam.alpha() {
        let scale = 1.0 / (Complex64::new(1.0, 0.0) - a * a);
        let mut factor = Vec::with_capacity(n + 1);
        let mut pw = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            factor.push(pw * scale);
            pw *= -a;
        }
        series = sym_mul(&series, &factor, n);
    }
    series
}

/// Product of two symmetric Laurent series, truncated to order `n_out`.
fn sym_mul(a: &[Complex64], b: &[Complex64], n_out: usize) -> Vec<Complex64> {
    let na = a.len() as i64 - 1;
    let nb = b.len() as i64 - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); n_out + 1];
    for (k, out_k) in out.iter_mut().enumerate() {
        let k = k as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        let i_lo = (-na).max(k - nb);
        let i_hi = na.min(k + nb);
        for i in i_lo..=i_hi {
            let j = k - i;
            acc += a[i.unsigned_abs() as usize] * b[j.unsigned_abs() as usize];
        }
        *out_k = acc;
    }
    out
}

/// Inner product `<C_j, C_k>` of the cosine monomials `C_0 = 1`,
/// `C_j = e^{i j xi} + e^{-i j xi}` with respect to the moment sequence.
fn monomial_inner(mu: &[f64], j: usize, k: usize) -> f64 {
    match (j, k) {
        (0, 0) => mu[0],
        (0, k) => 2.0 * mu[k],
        (j, 0) => 2.0 * mu[j],
        (j, k) => 2.0 * (mu[j + k] + mu[j.abs_diff(k)]),
    }
}

fn poly_inner(mu: &[f64], p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (j, &pj) in p.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        for (k, &qk) in q.iter().enumerate() {
            if qk != 0.0 {
                acc += pj * qk * monomial_inner(mu, j, k);
            }
        }
    }
    acc
}

/// Coefficients of `2 cos(xi) * p` in the cosine-monomial basis.
fn mul_two_cos(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut out = vec![0.0; n + 1];
    out[0] = 2.0 * p.get(1).copied().unwrap_or(0.0);
    for j in 1..=n {
        let below = if j == 1 {
            p[0]
        } else {
            p.get(j - 1).copied().unwrap_or(0.0)
        };
        out[j] = below + p.get(j + 1).copied().unwrap_or(0.0);
    }
    out
}

fn eval_cosine_poly(p: &[f64], xi: f64) -> f64 {
    let mut acc = p[0];
    for (j, &pj) in p.iter().enumerate().skip(1) {
        acc += 2.0 * pj * (j as f64 * xi).cos();
    }
    acc
}

/// Bernstein-Szegő polynomial family through level `l_max`: unitriangular
/// cosine expansions of the monic-normalized `p_l`, the norms `Delta_l`, and
/// the recurrence coefficients `a_l`, `b_l`.
///
/// Levels beyond `l_max` fall back to the exact stabilized values
/// (`Delta_l = 1`, `a_l = 1`, `b_l = 0`) and to the explicit `q_l` formula
/// for evaluation.
#[derive(Debug, Clone)]
pub struct PolynomialFamily {
    fam: BSFamily,
    coeffs: Vec<Vec<f64>>,
    delta: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Classical Gram-Schmidt on the cosine monomials with one
/// reorthogonalization pass; `d_eps <= 2` in practical use keeps the
/// conditioning benign.
pub fn gram_schmidt_low(fam: &BSFamily, l_max: usize) -> Result<PolynomialFamily> {
    let required = fam.half_degree().ceil().max(0) as usize + 1;
    let l_max = l_max.max(required);
    let mu = fourier_moments(fam, 2 * l_max + 2);

    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(l_max + 1);
    let mut delta = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let mut v = vec![0.0; l + 1];
        v[l] = 1.0;
        for _pass in 0..2 {
            for k in 0..l {
                let proj = poly_inner(&mu, &v, &coeffs[k]) / delta[k];
                for (vj, cj) in v.iter_mut().zip(coeffs[k].iter()) {
                    *vj -= proj * cj;
                }
            }
        }
        let norm = poly_inner(&mu, &v, &v);
        if !(norm > 0.0) {
            return Err(Error::NonPositiveNorm { l, value: norm });
        }
        coeffs.push(v);
        delta.push(norm);
    }

    let a = (0..l_max)
        .map(|l| (delta[l + 1] / delta[l]).sqrt())
        .collect();
    let b = (0..=l_max)
        .map(|l| poly_inner(&mu, &mul_two_cos(&coeffs[l]), &coeffs[l]) / delta[l])
        .collect();

    Ok(PolynomialFamily {
        fam: fam.clone(),
        coeffs,
        delta,
        a,
        b,
    })
}

impl PolynomialFamily {
    /// Same as [`gram_schmidt_low`].
    pub fn build(fam: &BSFamily, l_max: usize) -> Result<Self> {
        gram_schmidt_low(fam, l_max)
    }

    pub fn family(&self) -> &BSFamily {
        &self.fam
    }

    pub fn level_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Norms `Delta_0..Delta_{l_max}` as computed.
    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    /// `Delta_l`, exact 1 beyond the stored levels.
    pub fn delta(&self, l: usize) -> f64 {
        self.delta.get(l).copied().unwrap_or(1.0)
    }

    /// Recurrence coefficient `a_l = sqrt(Delta_l / Delta_{l-1})` for
    /// `l >= 1`; exact 1 beyond the stored levels.
    pub fn recurrence_a(&self, l: usize) -> f64 {
        assert!(l >= 1, "a_l is defined for l >= 1");
        self.a.get(l - 1).copied().unwrap_or(1.0)
    }

    /// Diagonal recurrence coefficient `b_l`; exact 0 beyond the stored
    /// levels.
    pub fn recurrence_b(&self, l: usize) -> f64 {
        self.b.get(l).copied().unwrap_or(0.0)
    }

    /// The recurrence coefficient lists `(a_1..a_{l_max}, b_0..b_{l_max})`.
    pub fn recurrence_coeffs(&self) -> (&[f64], &[f64]) {
        (&self.a, &self.b)
    }

    /// Unitriangular cosine expansion of the monic-normalized `p_l`.
    pub fn cosine_coeffs(&self, l: usize) -> &[f64] {
        &self.coeffs[l]
    }

    /// Evaluate the unitriangular `p_l` at `xi`.
    pub fn eval_monic(&self, l: usize, xi: f64) -> f64 {
        eval_cosine_poly(&self.coeffs[l], xi)
    }

    /// Evaluate the normalized polynomial `p_l / Delta_l` at `xi`.
    pub fn eval_normalized(&self, l: usize, xi: f64) -> f64 {
        self.eval_monic(l, xi) / self.delta[l]
    }

    /// Evaluate the normalized `p_l` for any level: the Gram-Schmidt table
    /// below `d_eps`, the explicit `q_l` formula at and above.
    pub fn eval_p(&self, l: usize, xi: f64) -> Result<f64> {
        if self.fam.half_degree().cmp_int(l as i64) == std::cmp::Ordering::Greater {
            Ok(self.eval_normalized(l, xi))
        } else {
            q_poly(&self.fam, l as i64, xi)
        }
    }

    /// `Delta_l` for any level: stored below the threshold, explicit formula
    /// at and above.
    pub fn delta_any(&self, l: usize) -> f64 {
        if self.fam.half_degree().cmp_int(l as i64) == std::cmp::Ordering::Greater {
            self.delta[l]
        } else {
            explicit_norm_delta(&self.fam, l as i64).expect("l >= d_eps")
        }
    }
}

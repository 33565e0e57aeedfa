//! The composite Bernstein-Szegő basis `psi` on the solved node grid, the
//! primal and dual weights, and the finite orthogonality checks.
//!
//! Components `psi_l` are glued from the untilded family at the low-index
//! end and the tilded family at the high-index end; in the middle range the
//! two explicit forms agree at the nodes. Evaluation there uses the phase
//! form `2 e^{i(m xi/2 + phi)} cos(l xi + phi)`, which stays finite at
//! endpoint nodes where `|c|` has a pole.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gram::PolynomialFamily;
use crate::nodes::{lhs_phi_derivative, NodeGrid};
use crate::params::CompositeConfig;
use crate::special::{c_function, phase};

/// Evaluate `psi_l` at a point, assuming `xi` is a node of the grid.
fn psi_value(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
    l: usize,
    xi: f64,
) -> Result<Complex64> {
    let m = config.grid_size();
    debug_assert!(l <= m);
    let d_eps = config.family().half_degree();
    let d_eps_t = config.family_tilde().half_degree();
    let half_m_xi = 0.5 * m as f64 * xi;

    if d_eps.cmp_int(l as i64) == std::cmp::Ordering::Greater {
        // l < d_eps: e^{i m xi / 2} p_l(xi) / c(-xi)
        let c_minus = c_function(config.family(), xi)?.conj();
        let p = famp.eval_normalized(l, xi);
        Ok(Complex64::from_polar(1.0, half_m_xi) * p / c_minus)
    } else if d_eps_t.cmp_int((m - l) as i64) != std::cmp::Ordering::Greater {
        // d_eps <= l <= m - d_eps~: stable phase form
        let phi = phase(config.family(), xi).phi;
        let amp = 2.0 * (l as f64 * xi + phi).cos();
        Ok(Complex64::from_polar(amp, half_m_xi + phi))
    } else {
        // l > m - d_eps~: e^{-i m xi / 2} p~_{m-l}(xi) / c~(xi)
        let ct = c_function(config.family_tilde(), xi)?;
        let p = famp_t.eval_normalized(m - l, xi);
        Ok(Complex64::from_polar(1.0, -half_m_xi) * p / ct)
    }
}

/// Evaluate `psi_l` at a grid node; rejects `xi` values that are not nodes,
/// since the gluing of the two families only holds on the grid.
pub fn psi(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
    grid: &NodeGrid,
    l: usize,
    xi: f64,
) -> Result<Complex64> {
    if grid.position_of(xi).is_none() {
        return Err(Error::NotANode { xi });
    }
    psi_value(config, famp, famp_t, l, xi)
}

/// Primal weights `Delta^(m)_l`: the family norm `Delta_l` for
/// `l <= d_eps`, one in the middle, and the mirrored tilde norm
/// `Delta~_{m-l}` for `l >= m - d_eps~`.
pub fn primal_weights(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
) -> Vec<f64> {
    let m = config.grid_size();
    let d_eps = config.family().half_degree();
    let d_eps_t = config.family_tilde().half_degree();
    (0..=m)
        .map(|l| {
            if d_eps.cmp_int(l as i64) != std::cmp::Ordering::Less {
                famp.delta_any(l)
            } else if d_eps_t.cmp_int((m - l) as i64) != std::cmp::Ordering::Less {
                famp_t.delta_any(m - l)
            } else {
                1.0
            }
        })
        .collect()
}

/// Dual (Christoffel) weights
/// `Delta^(m)_l^ = (1/2)^{halving} / Phi'(xi_l^)`, where the halving
/// exponent counts the endpoint nodes: it is 1 at `l^ = 0` when
/// `eps_- = eps_-~ = 0` and at `l^ = m` when `eps_+ = eps_+~ = 0`.
pub fn dual_weights(config: &CompositeConfig, grid: &NodeGrid) -> Vec<f64> {
    let m = config.grid_size();
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(l_hat, &xi)| {
            let mut halving = 0;
            if l_hat == 0 && config.left_endpoint_is_node() {
                halving += 1;
            }
            if l_hat == m && config.right_endpoint_is_node() {
                halving += 1;
            }
            0.5f64.powi(halving) / lhs_phi_derivative(config, xi)
        })
        .collect()
}

/// Assembled basis table `psi_l(xi_l^)` together with both weight systems.
#[derive(Debug, Clone)]
pub struct CompositeBasis {
    config: CompositeConfig,
    grid: NodeGrid,
    primal: Vec<f64>,
    dual: Vec<f64>,
    /// `psi[l][l_hat]`
    psi: Vec<Vec<Complex64>>,
}

/// Build the full `(m+1) x (m+1)` table of basis values on the grid.
pub fn assemble(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
    grid: &NodeGrid,
) -> Result<CompositeBasis> {
    let m = config.grid_size();
    let mut table = Vec::with_capacity(m + 1);
    for l in 0..=m {
        let mut row = Vec::with_capacity(m + 1);
        for &xi in grid.nodes() {
            row.push(psi_value(config, famp, famp_t, l, xi)?);
        }
        table.push(row);
    }
    Ok(CompositeBasis {
        config: config.clone(),
        grid: grid.clone(),
        primal: primal_weights(config, famp, famp_t),
        dual: dual_weights(config, grid),
        psi: table,
    })
}

impl CompositeBasis {
    pub fn config(&self) -> &CompositeConfig {
        &self.config
    }

    pub fn grid(&self) -> &NodeGrid {
        &self.grid
    }

    pub fn primal(&self) -> &[f64] {
        &self.primal
    }

    pub fn dual(&self) -> &[f64] {
        &self.dual
    }

    /// Basis value `psi_l(xi_l^)`.
    pub fn value(&self, l: usize, l_hat: usize) -> Complex64 {
        self.psi[l][l_hat]
    }

    /// The column vector `psi(xi_l^)`.
    pub fn column(&self, l_hat: usize) -> Vec<Complex64> {
        self.psi.iter().map(|row| row[l_hat]).collect()
    }
}

/// Maximum deviations from the two orthogonality relations: `rowres` for the
/// dual-weighted sums over nodes, `colres` for the primal-weighted sums over
/// components.
pub fn gram_residuals(basis: &CompositeBasis) -> (f64, f64) {
    let n = basis.grid.len();
    let mut rowres = 0.0f64;
    for l in 0..n {
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for l_hat in 0..n {
                acc += basis.psi[l][l_hat] * basis.psi[k][l_hat].conj() * basis.dual[l_hat];
            }
            let expected = if l == k { 1.0 / basis.primal[l] } else { 0.0 };
            rowres = rowres.max((acc - expected).norm());
        }
    }
    let mut colres = 0.0f64;
    for l_hat in 0..n {
        for k_hat in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..n {
                acc += basis.psi[l][l_hat] * basis.psi[l][k_hat].conj() * basis.primal[l];
            }
            let expected = if l_hat == k_hat {
                1.0 / basis.dual[l_hat]
            } else {
                0.0
            };
            colres = colres.max((acc - expected).norm());
        }
    }
    (rowres, colres)
}

/// `||U* U - I||_max` for `U = [sqrt(Delta^(m)_l Delta^(m)_l^) psi_l(xi_l^)]`.
pub fn unitarity_residual(basis: &CompositeBasis) -> f64 {
    let n = basis.grid.len();
    let mut res = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..n {
                let ua = basis.psi[l][a] * (basis.primal[l] * basis.dual[a]).sqrt();
                let ub = basis.psi[l][b] * (basis.primal[l] * basis.dual[b]).sqrt();
                acc += ua.conj() * ub;
            }
            let expected = if a == b { 1.0 } else { 0.0 };
            res = res.max((acc - expected).norm());
        }
    }
    res
}

/// Diagonal Christoffel-Darboux sum `sum_l |psi_l(xi)|^2 Delta^(m)_l` at a
/// node, evaluated through the two-family split with the default split index
/// `ceil(d_eps~) + 1`.
pub fn cd_sum(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
    xi: f64,
) -> Result<f64> {
    let ell = config.family_tilde().half_degree().ceil() + 1;
    cd_sum_with_split(config, famp, famp_t, xi, ell)
}

/// Same as [`cd_sum`] with an explicit split index `ell`, which must satisfy
/// `ceil(d_eps~) < ell <= m - ceil(d_eps)`. The value is independent of the
/// admissible `ell`.
pub fn cd_sum_with_split(
    config: &CompositeConfig,
    famp: &PolynomialFamily,
    famp_t: &PolynomialFamily,
    xi: f64,
    ell: i64,
) -> Result<f64> {
    let m = config.grid_size() as i64;
    let ceil_d = config.family().half_degree().ceil();
    let ceil_dt = config.family_tilde().half_degree().ceil();
    if !(ell > ceil_dt && ell <= m - ceil_d) {
        return Err(Error::PreconditionNotMet(format!(
            "split index {ell} outside ({ceil_dt}, {}]",
            m - ceil_d
        )));
    }
    let c_sq = c_function(config.family(), xi)?.norm_sqr();
    let ct_sq = c_function(config.family_tilde(), xi)?.norm_sqr();
    let mut total = 0.0;
    for l in 0..=(m - ell) as usize {
        let p = famp.eval_p(l, xi)?;
        total += p * p * famp.delta_any(l) / c_sq;
    }
    for l in 0..ell as usize {
        let p = famp_t.eval_p(l, xi)?;
        total += p * p * famp_t.delta_any(l) / ct_sq;
    }
    Ok(total)
}

/// Closed form the diagonal CD sum must match at a node:
/// `2^{delta_xi + delta_{pi - xi}} Phi'(xi)`.
pub fn cd_sum_closed_form(config: &CompositeConfig, xi: f64) -> f64 {
    let mut doubling = 1.0;
    if xi == 0.0 {
        doubling *= 2.0;
    }
    if xi == PI {
        doubling *= 2.0;
    }
    doubling * lhs_phi_derivative(config, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::gram_schmidt_low;
    use crate::nodes::solve_grid;
    use crate::params::BSFamily;
    use approx::assert_relative_eq;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(
        ep: i64,
        em: i64,
        alphas: &[Complex64],
        ept: i64,
        emt: i64,
        alphas_t: &[Complex64],
        m: usize,
    ) -> (CompositeConfig, PolynomialFamily, PolynomialFamily, NodeGrid) {
        let fam = BSFamily::new(ep, em, alphas.to_vec()).unwrap();
        let fam_t = BSFamily::new(ept, emt, alphas_t.to_vec()).unwrap();
        let config = CompositeConfig::new(fam.clone(), fam_t.clone(), m).unwrap();
        let lmax_u = (fam.half_degree().ceil().max(0) as usize) + 1;
        let lmax_t = (fam_t.half_degree().ceil().max(0) as usize) + 1;
        let famp = gram_schmidt_low(&fam, lmax_u).unwrap();
        let famp_t = gram_schmidt_low(&fam_t, lmax_t).unwrap();
        let grid = solve_grid(&config, 1e-13).unwrap();
        (config, famp, famp_t, grid)
    }

    #[test]
    fn free_case_dual_weights_and_psi_modulus() {
        let (config, famp, famp_t, grid) = setup(1, 1, &[], 1, 1, &[], 3);
        let dual = dual_weights(&config, &grid);
        for &w in &dual {
            assert_relative_eq!(w, 0.1, max_relative = 1e-14);
        }
        // middle branch applies for every l; |psi_l| = 2 |cos(l xi + phi)|
        let xi = grid.node(0);
        let phi = phase(config.family(), xi).phi;
        for l in 0..=3 {
            let v = psi(&config, &famp, &famp_t, &grid, l, xi).unwrap();
            assert_relative_eq!(
                v.norm(),
                2.0 * (l as f64 * xi + phi).cos().abs(),
                max_relative = 1e-13
            );
        }
        // non-node evaluation is rejected
        assert!(matches!(
            psi(&config, &famp, &famp_t, &grid, 0, 0.1234),
            Err(Error::NotANode { .. })
        ));
    }

    #[test]
    fn lobatto_case_dual_weights_halved_at_endpoints() {
        let (config, _famp, _famp_t, grid) = setup(0, 0, &[], 0, 0, &[], 3);
        let dual = dual_weights(&config, &grid);
        let expected = [1.0 / 12.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 12.0];
        for (w, e) in dual.iter().zip(expected) {
            assert_relative_eq!(*w, e, max_relative = 1e-14);
        }
    }

    #[test]
    fn primal_weights_branch_values() {
        let alphas = [c64(0.3, 0.0), c64(0.5, 0.0)];
        let (config, famp, famp_t, _grid) = setup(1, 1, &alphas, 1, 1, &[], 5);
        let w = primal_weights(&config, &famp, &famp_t);
        // d_eps = 0: Delta^(5)_0 = 1/0.85, the rest are 1 (d_eps~ = -1).
        assert_relative_eq!(w[0], 1.0 / 0.85, max_relative = 1e-12);
        for l in 1..=5 {
            assert_relative_eq!(w[l], 1.0, max_relative = 1e-12);
        }

        // mirrored: tilde family carries the alphas
        let (config2, famp2, famp2_t, _g2) = setup(1, 1, &[], 1, 1, &alphas, 5);
        let w2 = primal_weights(&config2, &famp2, &famp2_t);
        assert_relative_eq!(w2[5], 1.0 / 0.85, max_relative = 1e-12);
        for l in 0..5 {
            assert_relative_eq!(w2[l], 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn free_case_orthogonality_is_tight() {
        let (config, famp, famp_t, grid) = setup(1, 1, &[], 1, 1, &[], 3);
        let basis = assemble(&config, &famp, &famp_t, &grid).unwrap();
        let (rowres, colres) = gram_residuals(&basis);
        assert!(rowres < 1e-13, "rowres = {rowres}");
        assert!(colres < 1e-13, "colres = {colres}");
        assert!(unitarity_residual(&basis) < 1e-13);
    }

    #[test]
    fn mixed_config_orthogonality() {
        let (config, famp, famp_t, grid) = setup(
            1,
            1,
            &[c64(0.3, 0.0), c64(0.5, 0.0)],
            1,
            1,
            &[c64(0.4, 0.0)],
            6,
        );
        let basis = assemble(&config, &famp, &famp_t, &grid).unwrap();
        let (rowres, colres) = gram_residuals(&basis);
        assert!(rowres < 1e-10, "rowres = {rowres}");
        assert!(colres < 1e-10, "colres = {colres}");
    }

    #[test]
    fn cd_sum_free_case() {
        let (config, famp, famp_t, grid) = setup(1, 1, &[], 1, 1, &[], 3);
        let v = cd_sum(&config, &famp, &famp_t, grid.node(0)).unwrap();
        assert_relative_eq!(v, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn cd_sum_boundary_doubling() {
        let (config, famp, famp_t, grid) = setup(0, 0, &[], 0, 0, &[], 3);
        let v0 = cd_sum(&config, &famp, &famp_t, grid.node(0)).unwrap();
        assert_relative_eq!(v0, 12.0, max_relative = 1e-12);
        assert_relative_eq!(
            v0,
            cd_sum_closed_form(&config, grid.node(0)),
            max_relative = 1e-12
        );
    }

    #[test]
    fn cd_sum_split_independence() {
        let (config, famp, famp_t, grid) = setup(
            1,
            1,
            &[c64(0.5, 0.0)],
            1,
            1,
            &[c64(0.2, 0.3), c64(0.2, -0.3)],
            6,
        );
        let m = config.grid_size() as i64;
        let lo = config.family_tilde().half_degree().ceil() + 1;
        let hi = m - config.family().half_degree().ceil();
        for &xi in grid.nodes() {
            let reference = cd_sum_closed_form(&config, xi);
            for ell in lo..=hi {
                let v = cd_sum_with_split(&config, &famp, &famp_t, xi, ell).unwrap();
                assert_relative_eq!(v, reference, max_relative = 1e-10);
            }
        }
        assert!(cd_sum_with_split(&config, &famp, &famp_t, grid.node(0), lo - 1).is_err());
    }

    #[test]
    fn dual_weights_match_cd_sums() {
        let (config, famp, famp_t, grid) = setup(1, 1, &[c64(0.5, 0.0)], 1, 1, &[], 3);
        let dual = dual_weights(&config, &grid);
        for (l_hat, &xi) in grid.nodes().iter().enumerate() {
            let cd = cd_sum(&config, &famp, &famp_t, xi).unwrap();
            assert_relative_eq!(dual[l_hat], 1.0 / cd, max_relative = 1e-10);
        }
    }
}

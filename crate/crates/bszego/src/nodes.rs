//! Solver for the transcendental node equation
//! `Phi(xi) = pi (2 l_hat + eps_- + eps_-~)` with certified bracketing.
//!
//! `Phi` is smooth and strictly increasing, so every node has a unique
//! solution in `[0, pi]`. The solver runs safeguarded Newton iterations
//! started from the vanishing-parameter node positions, clamped to the
//! a-priori bracket with bisection fallback.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::CompositeConfig;
use crate::special::{antiderivative_sum, u_sum};

/// Default convergence tolerance in the scale-free `Phi`-residual metric.
pub const DEFAULT_TOL: f64 = 1e-13;

const MAX_ITER: usize = 100;

/// Left-hand side of the node equation:
/// `Phi(xi) = 2(m - d_eps - d_eps~) xi + sum_r F_{alpha_r}(xi) + sum_r F_{alpha~_r}(xi)`.
///
/// `Phi(0) = 0`, `Phi(pi) = pi (2m + eps_+ + eps_- + eps_+~ + eps_-~)`, and
/// `Phi` is strictly increasing.
pub fn lhs_phi(config: &CompositeConfig, xi: f64) -> f64 {
    config.phi_slope() as f64 * xi
        + antiderivative_sum(config.family().alpha(), xi)
        + antiderivative_sum(config.family_tilde().alpha(), xi)
}

/// Derivative `Phi'(xi) = 2(m - d_eps - d_eps~) + sum_r u_{alpha_r}(xi) + sum_r u_{alpha~_r}(xi)`,
/// strictly positive.
pub fn lhs_phi_derivative(config: &CompositeConfig, xi: f64) -> f64 {
    config.phi_slope() as f64
        + u_sum(config.family().alpha(), xi)
        + u_sum(config.family_tilde().alpha(), xi)
}

/// Right-hand side `pi (2 l_hat + eps_- + eps_-~)` of the node equation.
pub fn node_target(config: &CompositeConfig, l_hat: usize) -> f64 {
    PI * (2 * l_hat as i64 + config.eps_minus_sum()) as f64
}

/// A-priori node location bounds from the mean value theorem.
#[derive(Debug, Clone)]
pub struct NodeBounds {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Bounds `lo_l <= xi_l <= hi_l` with
/// `kappa_± = (1/2) sum_r ((1-|alpha_r|)/(1+|alpha_r|))^{±1}` over both
/// families. When all parameters vanish the bounds collapse onto the exact
/// node positions.
pub fn node_bounds(config: &CompositeConfig) -> NodeBounds {
    let mut kappa_plus = 0.0;
    let mut kappa_minus = 0.0;
    for a in config
        .family()
        .alpha()
        .iter()
        .chain(config.family_tilde().alpha())
    {
        let ratio = (1.0 - a.norm()) / (1.0 + a.norm());
        kappa_plus += 0.5 * ratio;
        kappa_minus += 0.5 / ratio;
    }
    let m = config.grid_size();
    let shift = 0.5 * config.eps_minus_sum() as f64;
    let slope = 0.5 * config.phi_slope() as f64; // m - d_eps - d_eps~
    let lo = (0..=m)
        .map(|l| PI * (l as f64 + shift) / (slope + kappa_minus))
        .collect();
    let hi = (0..=m)
        .map(|l| PI * (l as f64 + shift) / (slope + kappa_plus))
        .collect();
    NodeBounds {
        kappa_plus,
        kappa_minus,
        lo,
        hi,
    }
}

/// Solved grid of `m + 1` nodes with residuals and bracket certificates.
#[derive(Debug, Clone)]
pub struct NodeGrid {
    config: CompositeConfig,
    xi: Vec<f64>,
    residual: Vec<f64>,
    brackets: Vec<(f64, f64)>,
}

impl NodeGrid {
    pub fn config(&self) -> &CompositeConfig {
        &self.config
    }

    /// Nodes `0 <= xi_0 < xi_1 < ... < xi_m <= pi`.
    pub fn nodes(&self) -> &[f64] {
        &self.xi
    }

    pub fn node(&self, l_hat: usize) -> f64 {
        self.xi[l_hat]
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Signed residuals `Phi(xi_l) - pi(2l + eps_- + eps_-~)`.
    pub fn residuals(&self) -> &[f64] {
        &self.residual
    }

    /// Certified brackets, intersected with `[0, pi]`.
    pub fn brackets(&self) -> &[(f64, f64)] {
        &self.brackets
    }

    /// Index of a grid node equal to `xi` (exact match).
    pub fn position_of(&self, xi: f64) -> Option<usize> {
        self.xi.iter().position(|&x| x == xi)
    }
}

/// Solve the node equation for a single `l_hat`.
///
/// Endpoint nodes are assigned analytically when the `eps`-conditions put
/// them at `0` or `pi`; this avoids a 0/0 Newton degeneracy there. The final
/// iterate is clamped into the certified bracket.
pub fn solve_node(config: &CompositeConfig, l_hat: usize, tol: f64) -> Result<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    let m = config.grid_size();
    assert!(l_hat <= m, "l_hat must lie in 0..=m");
    if l_hat == 0 && config.left_endpoint_is_node() {
        return Ok(0.0);
    }
    if l_hat == m && config.right_endpoint_is_node() {
        return Ok(PI);
    }
    let bounds = node_bounds(config);
    let bracket = (bounds.lo[l_hat].min(PI), bounds.hi[l_hat].min(PI));
    // vanishing-parameter node position as the starting value
    let guess = node_target(config, l_hat) / (2 * m as i64 + config.eps_total()) as f64;
    let x = newton_in_bracket(config, l_hat, guess, bracket, tol)?;
    Ok(x.clamp(bracket.0, bracket.1))
}

fn newton_in_bracket(
    config: &CompositeConfig,
    l_hat: usize,
    guess: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let target = node_target(config, l_hat);
    let (mut lo, mut hi) = bracket;
    let mut x = guess.clamp(lo, hi);
    for _ in 0..MAX_ITER {
        let f = lhs_phi(config, x) - target;
        let fp = lhs_phi_derivative(config, x);
        if f.abs() < tol * fp {
            return Ok(x);
        }
        // shrink the bracket by monotonicity
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - f / fp;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NonConvergence { l_hat, lo, hi })
}

/// Solve all `m + 1` nodes and verify the grid invariants.
pub fn solve_grid(config: &CompositeConfig, tol: f64) -> Result<NodeGrid> {
    let m = config.grid_size();
    let bounds = node_bounds(config);
    let mut xi = Vec::with_capacity(m + 1);
    let mut residual = Vec::with_capacity(m + 1);
    let mut brackets = Vec::with_capacity(m + 1);
    for l_hat in 0..=m {
        let x = solve_node(config, l_hat, tol)?;
        xi.push(x);
        residual.push(lhs_phi(config, x) - node_target(config, l_hat));
        brackets.push((
            bounds.lo[l_hat].clamp(0.0, PI),
            bounds.hi[l_hat].clamp(0.0, PI),
        ));
    }
    for l in 1..xi.len() {
        assert!(
            xi[l] > xi[l - 1],
            "nodes must be strictly increasing: xi[{}] = {} vs xi[{}] = {}",
            l - 1,
            xi[l - 1],
            l,
            xi[l]
        );
    }
    Ok(NodeGrid {
        config: config.clone(),
        xi,
        residual,
        brackets,
    })
}

/// Residual of the exponentiated node equation
/// `|e^{2 i m xi} - (-1)^{eps_- + eps_-~} e^{2 i (d_eps + d_eps~) xi}
///   prod_r (1 + alpha_r e^{i xi})/(e^{i xi} + alpha_r) * (tilde product)|`,
/// which vanishes exactly at the grid nodes.
pub fn verify_phase_condition(config: &CompositeConfig, xi: f64) -> f64 {
    use num_complex::Complex64;
    let z = Complex64::from_polar(1.0, xi);
    let mut rhs = Complex64::from_polar(1.0, config.half_degree_sum().twice() as f64 * xi);
    if config.eps_minus_sum() % 2 != 0 {
        rhs = -rhs;
    }
    for a in config
        .family()
        .alpha()
        .iter()
        .chain(config.family_tilde().alpha())
    {
        rhs *= (Complex64::new(1.0, 0.0) + a * z) / (z + a);
    }
    let lhs = Complex64::from_polar(1.0, 2.0 * config.grid_size() as f64 * xi);
    (lhs - rhs).norm()
}

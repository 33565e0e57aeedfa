//! Assembly of the final quadrature rule: nodes, dual Christoffel weights,
//! Chebyshev weight values, exactness degree and rule kind, plus exact
//! integration of rational functions with prescribed poles.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;
use std::fmt;

use crate::basis::dual_weights;
use crate::error::{Error, Result};
use crate::nodes::solve_grid;
use crate::params::{BSFamily, CompositeConfig};
use crate::special::{chebyshev_rho, u_weight};

/// Rule classification by endpoint nodes and tilde degeneracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Gauss,
    RadauLeft,
    RadauRight,
    Lobatto,
    Interior,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleKind::Gauss => "gauss",
            RuleKind::RadauLeft => "radau_left",
            RuleKind::RadauRight => "radau_right",
            RuleKind::Lobatto => "lobatto",
            RuleKind::Interior => "interior",
        };
        f.write_str(s)
    }
}

/// Exactness degree `D = 2(m - d_eps~) - 1`; an integer since `2 d_eps~` is.
///
/// Can reach -1 in degenerate configurations (no exactness guarantee).
pub fn exactness_degree(config: &CompositeConfig) -> i64 {
    2 * config.grid_size() as i64 - config.family_tilde().half_degree().twice() - 1
}

/// Classify the rule: Lobatto/Radau by the endpoint-node laws, Gauss when
/// the tilde family is the trivial second-kind one (`d_eps~ = -1`), interior
/// otherwise.
pub fn classify(config: &CompositeConfig) -> RuleKind {
    match (
        config.left_endpoint_is_node(),
        config.right_endpoint_is_node(),
    ) {
        (true, true) => RuleKind::Lobatto,
        (true, false) => RuleKind::RadauLeft,
        (false, true) => RuleKind::RadauRight,
        (false, false) => {
            if config.family_tilde().half_degree().twice() == -2 {
                RuleKind::Gauss
            } else {
                RuleKind::Interior
            }
        }
    }
}

/// A positive quadrature rule
/// `(1/2pi) \int_0^pi R(xi) rho(xi) dxi = sum_l R(xi_l) rho(xi_l) w_l`
/// exact for rational `R = f(cos xi) / prod_r (1 + 2 alpha_r cos xi + alpha_r^2)`
/// with `deg f <= D`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    config: CompositeConfig,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rho_at_nodes: Vec<f64>,
    exactness_degree: i64,
    kind: RuleKind,
}

/// Solve the grid and assemble the rule for the configured pair.
pub fn build_rule(config: &CompositeConfig, tol: f64) -> Result<QuadratureRule> {
    let grid = solve_grid(config, tol)?;
    let weights = dual_weights(config, &grid);
    let fam = config.family();
    let rho_at_nodes = grid
        .nodes()
        .iter()
        .map(|&xi| chebyshev_rho(fam.eps_plus(), fam.eps_minus(), xi))
        .collect();
    Ok(QuadratureRule {
        config: config.clone(),
        nodes: grid.nodes().to_vec(),
        weights,
        rho_at_nodes,
        exactness_degree: exactness_degree(config),
        kind: classify(config),
    })
}

impl QuadratureRule {
    pub fn config(&self) -> &CompositeConfig {
        &self.config
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Dual Christoffel weights, all positive.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rho_at_nodes(&self) -> &[f64] {
        &self.rho_at_nodes
    }

    pub fn exactness_degree(&self) -> i64 {
        self.exactness_degree
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Apply the rule to a pointwise integrand `R(xi)`:
    /// `sum_l R(xi_l) rho(xi_l) w_l`.
    pub fn apply<F: Fn(f64) -> f64>(&self, r: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.rho_at_nodes)
            .zip(&self.weights)
            .map(|((&xi, &rho), &w)| r(xi) * rho * w)
            .sum()
    }
}

/// A rational integrand `f(cos xi) / prod_r (1 + 2 alpha_r cos xi + alpha_r^2)`
/// with `f` held as Chebyshev-T coefficients in `cos xi`.
#[derive(Debug, Clone)]
pub struct RationalIntegrand {
    f_cheb: Vec<f64>,
    pole_family: BSFamily,
}

impl RationalIntegrand {
    /// Numerator from Chebyshev-T coefficients: `f(cos xi) = sum_k c_k cos(k xi)`.
    pub fn from_chebyshev(mut coeffs: Vec<f64>, pole_family: BSFamily) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self {
            f_cheb: coeffs,
            pole_family,
        }
    }

    /// Numerator from power-basis coefficients `f(x) = sum_n a_n x^n`,
    /// converted through the Chebyshev recurrence.
    pub fn from_power(coeffs: Vec<f64>, pole_family: BSFamily) -> Self {
        Self::from_chebyshev(power_to_chebyshev(&coeffs), pole_family)
    }

    pub fn degree(&self) -> i64 {
        self.f_cheb.len() as i64 - 1
    }

    pub fn chebyshev_coeffs(&self) -> &[f64] {
        &self.f_cheb
    }

    pub fn pole_family(&self) -> &BSFamily {
        &self.pole_family
    }

    /// Evaluate `R(xi)`. The reciprocal denominator uses the product of
    /// `u_alpha(xi) / (1 - alpha^2)` factors, which avoids cancellation for
    /// `alpha` near the unit circle.
    pub fn eval(&self, xi: f64) -> f64 {
        let mut f = 0.0;
        for (k, &c) in self.f_cheb.iter().enumerate() {
            f += c * (k as f64 * xi).cos();
        }
        f * reciprocal_denominator(&self.pole_family, xi)
    }
}

/// `1 / prod_r (1 + 2 alpha_r cos xi + alpha_r^2)` via the u-form.
fn reciprocal_denominator(fam: &BSFamily, xi: f64) -> f64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in fam.alpha() {
        acc *= u_weight(a, xi) / (Complex64::new(1.0, 0.0) - a * a);
    }
    assert!(
        acc.im.abs() < 1e-13 * acc.re.abs().max(1.0),
        "conjugate pairing violated in denominator product"
    );
    acc.re
}

/// Convert power-basis coefficients to Chebyshev-T coefficients by Horner
/// steps, using `x T_0 = T_1` and `x T_k = (T_{k+1} + T_{k-1})/2`.
fn power_to_chebyshev(coeffs: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = vec![0.0];
    for &a in coeffs.iter().rev() {
        let mut next = vec![0.0; t.len() + 1];
        for (k, &ck) in t.iter().enumerate() {
            if ck == 0.0 {
                continue;
            }
            if k == 0 {
                next[1] += ck;
            } else {
                next[k + 1] += 0.5 * ck;
                next[k - 1] += 0.5 * ck;
            }
        }
        next[0] += a;
        while next.len() > 1 && next.last() == Some(&0.0) {
            next.pop();
        }
        t = next;
    }
    t
}

/// Chebyshev-T coefficients of the pole denominator
/// `prod_r (1 + 2 alpha_r cos xi + alpha_r^2)` itself (degree `d`); feeding
/// this back as the numerator makes `R` identically one.
pub fn pole_denominator_chebyshev(fam: &BSFamily) -> Vec<f64> {
    let mut sym = vec![Complex64::new(1.0, 0.0)];
    for &a in fam.alpha() {
        // factor (1 + 2 alpha cos + alpha^2) has symmetric Laurent
        // coefficients [1 + alpha^2, alpha]
        let factor = [Complex64::new(1.0, 0.0) + a * a, a];
        let old_deg = sym.len() as i64 - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); sym.len() + 1];
        for (k, out_k) in out.iter_mut().enumerate() {
            let k = k as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in -1..=1i64 {
                let j = k - i;
                if j.abs() <= old_deg {
                    acc += factor[i.unsigned_abs() as usize] * sym[j.unsigned_abs() as usize];
                }
            }
            *out_k = acc;
        }
        sym = out;
    }
    let mut cheb: Vec<f64> = Vec::with_capacity(sym.len());
    for (k, u) in sym.iter().enumerate() {
        assert!(u.im.abs() < 1e-13, "conjugate pairing violated");
        cheb.push(if k == 0 { u.re } else { 2.0 * u.re });
    }
    cheb
}

/// Result of applying a rule to a rational integrand.
#[derive(Debug, Clone, Copy)]
pub struct Integration {
    pub value: f64,
    /// True when the numerator degree is within the rule's exactness degree.
    pub exact: bool,
}

/// Apply the rule to a rational integrand whose pole family must equal the
/// rule's untilded family (elementwise, in input order).
pub fn integrate_rational(
    rule: &QuadratureRule,
    integrand: &RationalIntegrand,
) -> Result<Integration> {
    if integrand.pole_family() != rule.config().family() {
        return Err(Error::FamilyMismatch);
    }
    let value = rule.apply(|xi| integrand.eval(xi));
    Ok(Integration {
        value,
        exact: integrand.degree() <= rule.exactness_degree(),
    })
}

/// Per-degree accuracy report from [`exactness_sweep`].
#[derive(Debug, Clone)]
pub struct SweepReport {
    /// Worst relative error per degree `0..=D`.
    pub max_rel_err: Vec<f64>,
    /// Error of the degree `D + 1` Chebyshev monomial, demonstrating
    /// sharpness for Gauss-kind rules.
    pub beyond_degree_err: f64,
}

impl SweepReport {
    pub fn worst(&self) -> f64 {
        self.max_rel_err.iter().fold(0.0f64, |a, &b| a.max(b))
    }
}

/// Integrate `trials` random numerators of every degree `0..=D` and compare
/// against a caller-supplied reference integrator over `(0, pi)`; then record
/// the error of the degree `D + 1` monomial.
///
/// `reference` receives the full integrand `R(xi) rho(xi) / (2 pi)`.
pub fn exactness_sweep<R, F>(
    rule: &QuadratureRule,
    trials: usize,
    rng: &mut R,
    reference: F,
) -> Result<SweepReport>
where
    R: Rng + ?Sized,
    F: Fn(&dyn Fn(f64) -> f64) -> f64,
{
    let d = rule.exactness_degree();
    let fam = rule.config().family().clone();
    let mut max_rel_err = Vec::new();
    for degree in 0..=d.max(-1) {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lead = rng.gen_range(0.5..1.5) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            *coeffs.last_mut().expect("degree >= 0") = lead;
            let integrand = RationalIntegrand::from_chebyshev(coeffs, fam.clone());
            let approx = integrate_rational(rule, &integrand)?.value;
            let eps = rule.config().family();
            let oracle = reference(&|xi| {
                integrand.eval(xi) * chebyshev_rho(eps.eps_plus(), eps.eps_minus(), xi)
                    / (2.0 * PI)
            });
            worst = worst.max((approx - oracle).abs() / oracle.abs().max(1.0));
        }
        max_rel_err.push(worst);
    }

    let mut beyond = vec![0.0; (d.max(-1) + 2) as usize];
    *beyond.last_mut().expect("non-empty") = 1.0;
    let integrand = RationalIntegrand::from_chebyshev(beyond, fam);
    let approx = integrate_rational(rule, &integrand)?.value;
    let eps = rule.config().family();
    let oracle = reference(&|xi| {
        integrand.eval(xi) * chebyshev_rho(eps.eps_plus(), eps.eps_minus(), xi) / (2.0 * PI)
    });
    Ok(SweepReport {
        max_rel_err,
        beyond_degree_err: (approx - oracle).abs() / oracle.abs().max(1.0),
    })
}

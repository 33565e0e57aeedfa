//! Parameter ingestion and validation: Bernstein-Szegő families and the
//! composite pair configuration.
//!
//! The half-degree `d_eps = (d - eps_plus - eps_minus)/2` drives every branch
//! selection in the basis, the weights and the Jacobi matrices, so it is kept
//! as an exact half-integer rather than a float.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Exact half-integer, stored as twice its value.
///
/// Values like `d_eps` may be negative or half-integral; ceilings and
/// comparisons against integer levels must be exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// Construct from twice the value.
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    /// Twice the value (always an integer).
    pub const fn twice(self) -> i64 {
        self.twice
    }

    /// Exact ceiling.
    pub const fn ceil(self) -> i64 {
        (self.twice + 1).div_euclid(2)
    }

    /// Exact floor.
    pub const fn floor(self) -> i64 {
        self.twice.div_euclid(2)
    }

    /// True when the value is an integer.
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Value as `f64` (exact: small integers halved).
    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Compare with an integer level.
    pub fn cmp_int(self, l: i64) -> std::cmp::Ordering {
        self.twice.cmp(&(2 * l))
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// One Bernstein-Szegő parameter set: indicators `eps_plus`, `eps_minus` and
/// the pole parameters `alpha_1..alpha_d`.
///
/// Invariants established by [`BSFamily::new`]:
/// - `eps_plus, eps_minus` in `{0, 1}`,
/// - `0 < |alpha_r| < 1` for every `r`,
/// - non-real `alpha` entries occur in exact complex-conjugate pairs
///   (bitwise equality of conjugates; no hidden matching tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct BSFamily {
    eps_plus: u8,
    eps_minus: u8,
    alpha: Vec<Complex64>,
}

impl BSFamily {
    /// Validate raw parameters into a family; `alpha` order is preserved.
    pub fn new(eps_plus: i64, eps_minus: i64, alpha: Vec<Complex64>) -> Result<Self> {
        if !(eps_plus == 0 || eps_plus == 1) {
            return Err(Error::InvalidParameter(format!(
                "eps_plus = {eps_plus} must be 0 or 1"
            )));
        }
        if !(eps_minus == 0 || eps_minus == 1) {
            return Err(Error::InvalidParameter(format!(
                "eps_minus = {eps_minus} must be 0 or 1"
            )));
        }
        for (r, &a) in alpha.iter().enumerate() {
            let n = a.norm();
            if n == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "alpha[{r}] = 0: drop the factor instead of passing a zero parameter"
                )));
            }
            if !(n < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "alpha[{r}] = {a} has |alpha| = {n} >= 1"
                )));
            }
        }
        check_conjugate_pairs(&alpha)?;
        Ok(Self {
            eps_plus: eps_plus as u8,
            eps_minus: eps_minus as u8,
            alpha,
        })
    }

    pub fn eps_plus(&self) -> u8 {
        self.eps_plus
    }

    pub fn eps_minus(&self) -> u8 {
        self.eps_minus
    }

    /// Pole parameters in input order.
    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    /// Number of pole parameters `d`.
    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// Half-degree `d_eps = (d - eps_plus - eps_minus)/2`, exactly.
    pub fn half_degree(&self) -> HalfInt {
        HalfInt::from_twice(self.alpha.len() as i64 - self.eps_plus as i64 - self.eps_minus as i64)
    }
}

/// Non-real entries must pair up with exact bitwise conjugates.
fn check_conjugate_pairs(alpha: &[Complex64]) -> Result<()> {
    use std::collections::HashMap;
    let mut counts: HashMap<(u64, u64), i64> = HashMap::new();
    for &a in alpha {
        if a.im != 0.0 {
            *counts.entry((a.re.to_bits(), a.im.to_bits())).or_insert(0) += 1;
        }
    }
    for (&(re, im), &n) in &counts {
        let conj_key = (re, (-f64::from_bits(im)).to_bits());
        let n_conj = counts.get(&conj_key).copied().unwrap_or(0);
        if n != n_conj {
            return Err(Error::InvalidParameter(format!(
                "alpha = {}+{}i occurs {n} time(s) but its conjugate occurs {n_conj} time(s); \
                 non-real parameters must come in exact conjugate pairs",
                f64::from_bits(re),
                f64::from_bits(im)
            )));
        }
    }
    Ok(())
}

/// A validated pair of families together with the grid size `m`.
///
/// The grid condition `m > ceil(d_eps) + ceil(d_eps~)` is checked exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeConfig {
    fam: BSFamily,
    fam_t: BSFamily,
    m: usize,
}

impl CompositeConfig {
    pub fn new(fam: BSFamily, fam_t: BSFamily, m: usize) -> Result<Self> {
        let ceil_d = fam.half_degree().ceil();
        let ceil_dt = fam_t.half_degree().ceil();
        if (m as i64) <= ceil_d + ceil_dt {
            return Err(Error::GridTooSmall { m, ceil_d, ceil_dt });
        }
        Ok(Self { fam, fam_t, m })
    }

    /// Untilded family (supplies the weight function and its poles).
    pub fn family(&self) -> &BSFamily {
        &self.fam
    }

    /// Tilded family (controls the high-index end of the composite basis).
    pub fn family_tilde(&self) -> &BSFamily {
        &self.fam_t
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    /// `d_eps + d_eps~` as an exact half-integer.
    pub fn half_degree_sum(&self) -> HalfInt {
        self.fam.half_degree() + self.fam_t.half_degree()
    }

    /// The integer `2(m - d_eps - d_eps~)`, the linear slope of the node
    /// equation's left-hand side.
    pub fn phi_slope(&self) -> i64 {
        2 * self.m as i64 - self.half_degree_sum().twice()
    }

    /// `eps_minus + eps_minus~`, fixing the right-hand side offset of the
    /// node equation.
    pub fn eps_minus_sum(&self) -> i64 {
        self.fam.eps_minus() as i64 + self.fam_t.eps_minus() as i64
    }

    /// `eps_plus + eps_minus + eps_plus~ + eps_minus~`.
    pub fn eps_total(&self) -> i64 {
        self.fam.eps_plus() as i64
            + self.fam.eps_minus() as i64
            + self.fam_t.eps_plus() as i64
            + self.fam_t.eps_minus() as i64
    }

    /// True when the left endpoint `xi = 0` is a grid node.
    pub fn left_endpoint_is_node(&self) -> bool {
        self.fam.eps_minus() == 0 && self.fam_t.eps_minus() == 0
    }

    /// True when the right endpoint `xi = pi` is a grid node.
    pub fn right_endpoint_is_node(&self) -> bool {
        self.fam.eps_plus() == 0 && self.fam_t.eps_plus() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_int_ceil_floor() {
        for twice in -9..=9 {
            let h = HalfInt::from_twice(twice);
            let v = twice as f64 / 2.0;
            assert_eq!(h.ceil(), v.ceil() as i64, "twice = {twice}");
            assert_eq!(h.floor(), v.floor() as i64, "twice = {twice}");
        }
    }

    #[test]
    fn empty_family_has_negative_half_degree() {
        let fam = BSFamily::new(1, 1, vec![]).unwrap();
        assert_eq!(fam.degree(), 0);
        assert_eq!(fam.half_degree(), HalfInt::from_twice(-2));
        assert_eq!(fam.half_degree().as_f64(), -1.0);
    }

    #[test]
    fn two_real_alphas_give_integer_half_degree() {
        let fam = BSFamily::new(1, 1, vec![c(0.3, 0.0), c(0.5, 0.0)]).unwrap();
        assert_eq!(fam.degree(), 2);
        assert_eq!(fam.half_degree(), HalfInt::from_twice(0));
        assert_eq!(fam.alpha(), &[c(0.3, 0.0), c(0.5, 0.0)]);
    }

    #[test]
    fn unpaired_complex_alpha_rejected() {
        let err = BSFamily::new(0, 1, vec![c(0.9, 0.2)]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn conjugate_pair_accepted() {
        let fam = BSFamily::new(0, 0, vec![c(0.2, 0.3), c(0.2, -0.3)]).unwrap();
        assert_eq!(fam.half_degree(), HalfInt::from_twice(2));
    }

    #[test]
    fn rejects_bad_eps_and_bad_modulus() {
        assert!(BSFamily::new(2, 0, vec![]).is_err());
        assert!(BSFamily::new(0, -1, vec![]).is_err());
        assert!(BSFamily::new(0, 0, vec![c(1.0, 0.0)]).is_err());
        assert!(BSFamily::new(0, 0, vec![c(0.0, 0.0)]).is_err());
        assert!(BSFamily::new(0, 0, vec![c(0.8, 0.8)]).is_err());
    }

    #[test]
    fn validate_family_is_idempotent() {
        let fam = BSFamily::new(1, 0, vec![c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2)]).unwrap();
        let again = BSFamily::new(
            fam.eps_plus() as i64,
            fam.eps_minus() as i64,
            fam.alpha().to_vec(),
        )
        .unwrap();
        assert_eq!(fam, again);
    }

    #[test]
    fn pair_condition_examples() {
        let trivial = BSFamily::new(1, 1, vec![]).unwrap();
        // ceil(-1) + ceil(-1) = -2 < 1
        assert!(CompositeConfig::new(trivial.clone(), trivial.clone(), 1).is_ok());

        let fam = BSFamily::new(1, 1, vec![c(0.3, 0.0), c(0.5, 0.0)]).unwrap();
        // ceil(0) + ceil(0) = 0 < 1
        assert!(CompositeConfig::new(fam.clone(), fam.clone(), 1).is_ok());

        let wide = BSFamily::new(0, 0, vec![c(0.5, 0.0); 4]).unwrap();
        let empty = BSFamily::new(0, 0, vec![]).unwrap();
        let err = CompositeConfig::new(wide, empty, 2).unwrap_err();
        match err {
            Error::GridTooSmall { m, ceil_d, ceil_dt } => {
                assert_eq!((m, ceil_d, ceil_dt), (2, 2, 0));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn half_degree_sum_is_exact() {
        let fam = BSFamily::new(1, 0, vec![c(0.3, 0.0)]).unwrap();
        let fam_t = BSFamily::new(0, 1, vec![c(0.2, 0.4), c(0.2, -0.4)]).unwrap();
        let cfg = CompositeConfig::new(fam, fam_t, 5).unwrap();
        // (d + d~ - eps sum)/2 = (1 + 2 - 1 - 1)/2 = 1/2
        assert_eq!(cfg.half_degree_sum(), HalfInt::from_twice(1));
        assert_eq!(cfg.phi_slope(), 9);
    }
}

//! Closed-form special functions of the Bernstein-Szegő theory: the kernel
//! `u_alpha`, its antiderivative, the `c`-function, its continuous phase, the
//! weight `w`, the Chebyshev weight `rho`, and the explicit polynomials
//! `q_l` with norms `Delta_l`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::BSFamily;

/// Residual allowed when a conjugate-paired sum is reduced to its real part.
const PAIR_IMAG_TOL: f64 = 1e-13;

/// The kernel `u_alpha(x) = (1 - alpha^2) / (1 + 2 alpha cos x + alpha^2)`.
///
/// The denominator factors as `(1 + alpha e^{ix})(1 + alpha e^{-ix})` and
/// cannot vanish for `|alpha| < 1` and real `x`. For a conjugate pair,
/// `u_alpha + u_conj(alpha)` is real.
pub fn u_weight(alpha: Complex64, x: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let a2 = alpha * alpha;
    (one - a2) / (one + 2.0 * x.cos() * alpha + a2)
}

/// Antiderivative `F_alpha(xi) = \int_0^xi u_alpha(x) dx`.
///
/// For real `alpha` this is the arctan closed form
/// `2 Arctan(((1-alpha)/(1+alpha)) tan(xi/2))`, extended 2π-periodically by
/// `F(x + 2 pi k) = F(x) + 2 pi k` and with the `xi = pi` limit taken as `pi`.
/// For complex `alpha` the continuous branch is
/// `xi + i Log((1 + alpha e^{i xi}) / (1 + alpha e^{-i xi}))`; both factors
/// keep positive real part for `|alpha| < 1`, so the principal logarithm
/// never crosses its cut and the result is continuous in `xi` with
/// `F_alpha(0) = 0` and `F_alpha(pi) = pi`.
pub fn u_antiderivative(alpha: Complex64, xi: f64) -> Complex64 {
    if alpha.im == 0.0 {
        Complex64::new(antiderivative_real(alpha.re, xi), 0.0)
    } else {
        let z = Complex64::from_polar(1.0, xi);
        let w = (Complex64::new(1.0, 0.0) + alpha * z)
            / (Complex64::new(1.0, 0.0) + alpha * z.conj());
        Complex64::new(xi, 0.0) + Complex64::i() * w.ln()
    }
}

/// Arctan form for real `alpha`, on the periodic extension.
fn antiderivative_real(alpha: f64, xi: f64) -> f64 {
    let k = ((xi - PI) / (2.0 * PI)).ceil();
    let y = xi - 2.0 * PI * k;
    let base = if y == PI {
        PI
    } else {
        let ratio = (1.0 - alpha) / (1.0 + alpha);
        2.0 * (ratio * (0.5 * y).tan()).atan()
    };
    base + 2.0 * PI * k
}

/// Real part of `sum_r u_{alpha_r}(x)` over a conjugate-paired list.
///
/// The imaginary residue of the summed pairs is asserted below 1e-13 and
/// discarded.
pub fn u_sum(alphas: &[Complex64], x: f64) -> f64 {
    let total: Complex64 = alphas.iter().map(|&a| u_weight(a, x)).sum();
    assert!(
        total.im.abs() < PAIR_IMAG_TOL * total.re.abs().max(1.0),
        "conjugate pairing violated in u-sum: imag residue {}",
        total.im
    );
    total.re
}

/// Real part of `sum_r F_{alpha_r}(xi)` over a conjugate-paired list.
pub fn antiderivative_sum(alphas: &[Complex64], xi: f64) -> f64 {
    let total: Complex64 = alphas.iter().map(|&a| u_antiderivative(a, xi)).sum();
    assert!(
        total.im.abs() < PAIR_IMAG_TOL * total.re.abs().max(1.0),
        "conjugate pairing violated in F-sum: imag residue {}",
        total.im
    );
    total.re
}

/// The `c`-function
/// `c(xi) = (1 + eps_+ e^{-i xi})^{-1} (1 - eps_- e^{-i xi})^{-1} prod_r (1 + alpha_r e^{-i xi})`.
///
/// Satisfies `c(-xi) = conj(c(xi))` for real `xi`. Poles sit at `xi = 0`
/// (mod 2π) when `eps_- = 1` and at `xi = ±pi` (mod 2π) when `eps_+ = 1`;
/// evaluation exactly on a pole is rejected.
pub fn c_function(fam: &BSFamily, xi: f64) -> Result<Complex64> {
    check_pole(fam, xi)?;
    let z = Complex64::from_polar(1.0, -xi);
    let mut c = Complex64::new(1.0, 0.0);
    for &a in fam.alpha() {
        c *= Complex64::new(1.0, 0.0) + a * z;
    }
    if fam.eps_plus() == 1 {
        c /= Complex64::new(1.0, 0.0) + z;
    }
    if fam.eps_minus() == 1 {
        c /= Complex64::new(1.0, 0.0) - z;
    }
    Ok(c)
}

fn check_pole(fam: &BSFamily, xi: f64) -> Result<()> {
    let r = xi.rem_euclid(2.0 * PI);
    if fam.eps_minus() == 1 && r == 0.0 {
        return Err(Error::PoleEvaluation { xi });
    }
    if fam.eps_plus() == 1 && r == PI {
        return Err(Error::PoleEvaluation { xi });
    }
    Ok(())
}

/// A continuous determination of `arg c(xi)` on `[0, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseValue {
    pub xi: f64,
    pub phi: f64,
}

/// Continuous phase of the `c`-function:
///
/// `phi(xi) = -d_eps xi + (1/2) sum_r Re F_{alpha_r}(xi) - eps_- pi/2`.
///
/// This choice of the additive convention makes `c(xi) = |c(xi)| e^{i phi(xi)}`
/// hold on `(0, pi)`, which in particular gives
/// `exp(2 i phi) = c(xi)/c(-xi)`. The formula stays finite at the
/// `eps`-poles of `|c|`, extending the phase to `[0, pi]` by continuity.
pub fn phase(fam: &BSFamily, xi: f64) -> PhaseValue {
    let f_sum = antiderivative_sum(fam.alpha(), xi);
    let phi = -fam.half_degree().as_f64() * xi + 0.5 * f_sum
        - f64::from(fam.eps_minus()) * 0.5 * PI;
    PhaseValue { xi, phi }
}

/// Weight function `w(xi) = 1 / (2 pi |c(xi)|^2)` on the open interval.
pub fn weight_w(fam: &BSFamily, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < PI) {
        return Err(Error::DomainViolation {
            xi,
            domain: "(0, pi)",
        });
    }
    let c = c_function(fam, xi)?;
    Ok(1.0 / (2.0 * PI * c.norm_sqr()))
}

/// Chebyshev weight
/// `rho(xi) = 2^{eps_+ + eps_-} (1 + eps_+ cos xi)(1 - eps_- cos xi) >= 0`.
pub fn chebyshev_rho(eps_plus: u8, eps_minus: u8, xi: f64) -> f64 {
    let c = xi.cos();
    let scale = (1u32 << (eps_plus + eps_minus)) as f64;
    scale * (1.0 + f64::from(eps_plus) * c) * (1.0 - f64::from(eps_minus) * c)
}

/// The explicit polynomials `q_l(xi) = c(xi) e^{i l xi} + c(-xi) e^{-i l xi}`
/// for any integer `l`; equal to the normalized Bernstein-Szegő polynomial
/// `p_l` when `l >= d_eps`.
///
/// Evaluated through the pole-free phase path `2 |c(xi)| cos(l xi + phi(xi))`.
/// Points where `|c|` itself diverges (an endpoint with the matching
/// `eps = 1`) are rejected; the composite-basis path covers those.
pub fn q_poly(fam: &BSFamily, l: i64, xi: f64) -> Result<f64> {
    let modulus = c_function(fam, xi)?.norm();
    let phi = phase(fam, xi).phi;
    Ok(2.0 * modulus * (l as f64 * xi + phi).cos())
}

/// Explicit norm `Delta_l` for `l >= d_eps`:
/// `(1 + (-1)^{eps_-} prod_r alpha_r)^{-1}` at `l = d_eps`, and 1 above.
pub fn explicit_norm_delta(fam: &BSFamily, l: i64) -> Result<f64> {
    let d_eps = fam.half_degree();
    match d_eps.cmp_int(l) {
        std::cmp::Ordering::Greater => Err(Error::BelowExplicitThreshold {
            l,
            d_eps: d_eps.as_f64(),
        }),
        std::cmp::Ordering::Equal => {
            let prod: Complex64 = fam.alpha().iter().product();
            assert!(
                prod.im.abs() < PAIR_IMAG_TOL,
                "conjugate pairing violated in alpha product"
            );
            let sign = if fam.eps_minus() == 1 { -1.0 } else { 1.0 };
            Ok(1.0 / (1.0 + sign * prod.re))
        }
        std::cmp::Ordering::Less => Ok(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fam(ep: i64, em: i64, alphas: &[Complex64]) -> BSFamily {
        BSFamily::new(ep, em, alphas.to_vec()).unwrap()
    }

    #[test]
    fn u_weight_closed_values() {
        assert_relative_eq!(u_weight(c64(0.0, 0.0), 1.234).re, 1.0);
        assert_relative_eq!(u_weight(c64(0.5, 0.0), 0.0).re, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(u_weight(c64(0.5, 0.0), PI).re, 3.0, max_relative = 1e-15);
    }

    #[test]
    fn u_weight_pair_sum_is_real() {
        let a = c64(0.3, 0.4);
        for &x in &[0.1, 1.0, 2.5, PI - 0.1] {
            let s = u_weight(a, x) + u_weight(a.conj(), x);
            assert!(s.im.abs() < 1e-15);
            assert_relative_eq!(s.re, 2.0 * u_weight(a, x).re, max_relative = 1e-14);
        }
    }

    #[test]
    fn antiderivative_endpoints() {
        for &a in &[c64(-0.7, 0.0), c64(0.0, 0.0), c64(0.5, 0.0), c64(0.3, 0.4)] {
            let f0 = u_antiderivative(a, 0.0);
            let fpi = u_antiderivative(a, PI);
            assert!(f0.norm() < 1e-15, "F(0) = {f0} for alpha = {a}");
            assert_relative_eq!(fpi.re, PI, max_relative = 1e-14);
            assert!(fpi.im.abs() < 1e-14);
        }
    }

    #[test]
    fn antiderivative_trivial_and_half_interval() {
        assert_relative_eq!(u_antiderivative(c64(0.0, 0.0), 1.1).re, 1.1);
        // F_{1/2}(pi/2) = 2 Arctan(1/3)
        let expected = 2.0 * (1.0f64 / 3.0).atan();
        assert_relative_eq!(
            u_antiderivative(c64(0.5, 0.0), 0.5 * PI).re,
            expected,
            max_relative = 1e-15
        );
        assert_relative_eq!(expected, 0.6435011087932844, max_relative = 1e-15);
    }

    #[test]
    fn antiderivative_periodic_extension() {
        // F(x + 2 pi k) = F(x) + 2 pi k for the real-alpha closed form.
        let a = c64(0.5, 0.0);
        for &x in &[0.3, 1.2, 2.9] {
            let base = u_antiderivative(a, x).re;
            assert_relative_eq!(
                u_antiderivative(a, x + 2.0 * PI).re,
                base + 2.0 * PI,
                max_relative = 1e-13
            );
            assert_relative_eq!(
                u_antiderivative(a, x - 2.0 * PI).re,
                base - 2.0 * PI,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn antiderivative_real_and_complex_paths_agree() {
        // The complex-branch formula must reduce to the arctan form when the
        // parameter is real.
        for &av in &[-0.8, -0.3, 0.2, 0.7] {
            for k in 0..=40 {
                let xi = PI * k as f64 / 40.0;
                let real_path = u_antiderivative(c64(av, 0.0), xi).re;
                let complex_path = u_antiderivative(c64(av, 1e-300), xi);
                assert_relative_eq!(real_path, complex_path.re, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pair_sum_of_antiderivatives() {
        let a = c64(0.25, 0.55);
        let alphas = [a, a.conj()];
        assert!(antiderivative_sum(&alphas, 0.0).abs() < 1e-14);
        assert_relative_eq!(antiderivative_sum(&alphas, PI), 2.0 * PI, max_relative = 1e-14);
        // strictly increasing on a mesh
        let mut prev = -1.0;
        for k in 0..=64 {
            let v = antiderivative_sum(&alphas, PI * k as f64 / 64.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn c_function_values() {
        let trivial = fam(0, 0, &[]);
        assert_relative_eq!(c_function(&trivial, 0.77).unwrap().re, 1.0);
        assert!(c_function(&trivial, 0.77).unwrap().im.abs() < 1e-16);

        let both = fam(1, 1, &[]);
        let v = c_function(&both, 0.5 * PI).unwrap();
        assert_relative_eq!(v.re, 0.5, max_relative = 1e-14);
        assert!(v.im.abs() < 1e-15);

        let single = fam(0, 0, &[c64(0.5, 0.0)]);
        assert_relative_eq!(c_function(&single, 0.0).unwrap().re, 1.5, max_relative = 1e-15);
    }

    #[test]
    fn c_function_conjugate_symmetry() {
        let f = fam(1, 0, &[c64(0.3, 0.0), c64(0.1, 0.6), c64(0.1, -0.6)]);
        for k in 1..20 {
            let xi = PI * k as f64 / 20.0;
            let plus = c_function(&f, xi).unwrap();
            let minus = c_function(&f, -xi).unwrap();
            assert!((plus.conj() - minus).norm() < 1e-14 * plus.norm());
        }
    }

    #[test]
    fn c_function_pole_rejection() {
        let f = fam(1, 1, &[]);
        assert!(matches!(
            c_function(&f, 0.0),
            Err(Error::PoleEvaluation { .. })
        ));
        assert!(matches!(
            c_function(&f, PI),
            Err(Error::PoleEvaluation { .. })
        ));
        assert!(c_function(&f, 0.5).is_ok());
    }

    #[test]
    fn phase_matches_c_ratio() {
        // exp(2 i phi) = c(xi)/c(-xi), and the stronger convention
        // c = |c| e^{i phi} on the interior.
        let fams = [
            fam(0, 0, &[]),
            fam(0, 0, &[c64(0.5, 0.0)]),
            fam(1, 1, &[c64(0.3, 0.0), c64(0.5, 0.0)]),
            fam(1, 0, &[c64(0.2, 0.6), c64(0.2, -0.6)]),
            fam(0, 1, &[c64(-0.4, 0.0)]),
        ];
        for f in &fams {
            for k in 1..32 {
                let xi = PI * k as f64 / 32.0;
                let c = c_function(f, xi).unwrap();
                let phi = phase(f, xi).phi;
                let lhs = Complex64::from_polar(1.0, 2.0 * phi);
                let rhs = c / c.conj();
                assert!(
                    (lhs - rhs).norm() < 1e-13,
                    "ratio mismatch at xi={xi}: {lhs} vs {rhs}"
                );
                let rec = Complex64::from_polar(c.norm(), phi);
                assert!(
                    (rec - c).norm() < 1e-12 * c.norm(),
                    "polar mismatch at xi={xi}: {rec} vs {c}"
                );
            }
        }
    }

    #[test]
    fn phase_trivial_family_is_zero() {
        let f = fam(0, 0, &[]);
        for k in 0..=8 {
            assert_eq!(phase(&f, PI * k as f64 / 8.0).phi, 0.0);
        }
    }

    #[test]
    fn weight_values() {
        let trivial = fam(0, 0, &[]);
        assert_relative_eq!(weight_w(&trivial, 1.0).unwrap(), 1.0 / (2.0 * PI));

        let both = fam(1, 1, &[]);
        assert_relative_eq!(
            weight_w(&both, 0.5 * PI).unwrap(),
            2.0 / PI,
            max_relative = 1e-14
        );

        assert!(weight_w(&trivial, 0.0).is_err());
        assert!(weight_w(&trivial, PI).is_err());

        // w = rho / (2 pi prod (1 + 2 alpha cos + alpha^2))
        let single = fam(0, 0, &[c64(0.5, 0.0)]);
        let xi = 1e-9; // near 0, matching the spec's limit value at 0
        assert_relative_eq!(
            weight_w(&single, xi).unwrap(),
            1.0 / (2.0 * PI * 2.25),
            max_relative = 1e-8
        );
    }

    #[test]
    fn rho_values() {
        assert_eq!(chebyshev_rho(0, 0, 0.3), 1.0);
        for k in 0..=10 {
            let xi = PI * k as f64 / 10.0;
            assert_relative_eq!(
                chebyshev_rho(1, 1, xi),
                4.0 * xi.sin().powi(2),
                epsilon = 1e-14
            );
        }
        assert_eq!(chebyshev_rho(1, 0, PI), 0.0);
    }

    #[test]
    fn q_poly_values() {
        // Chebyshev-U identity q_l = sin((l+1) xi)/sin(xi) for eps = (1,1).
        let both = fam(1, 1, &[]);
        assert_relative_eq!(
            q_poly(&both, 2, 0.5 * PI).unwrap(),
            -1.0,
            max_relative = 1e-13
        );

        let trivial = fam(0, 0, &[]);
        for k in 0..=10 {
            let xi = PI * k as f64 / 10.0;
            assert_relative_eq!(
                q_poly(&trivial, 3, xi).unwrap(),
                2.0 * (3.0 * xi).cos(),
                epsilon = 1e-13
            );
        }

        // q_0 = 2 Re c(xi)
        let two = fam(1, 1, &[c64(0.3, 0.0), c64(0.5, 0.0)]);
        let xi = PI / 3.0;
        assert_relative_eq!(
            q_poly(&two, 0, xi).unwrap(),
            2.0 * c_function(&two, xi).unwrap().re,
            max_relative = 1e-13
        );
    }

    #[test]
    fn q_poly_agrees_with_direct_complex_route() {
        let fams = [
            fam(1, 1, &[c64(0.3, 0.0), c64(0.5, 0.0)]),
            fam(0, 1, &[c64(0.2, 0.7), c64(0.2, -0.7), c64(-0.6, 0.0)]),
            fam(1, 0, &[]),
        ];
        for f in &fams {
            for l in -3..=8i64 {
                for k in 1..24 {
                    let xi = PI * k as f64 / 24.0;
                    let via_phase = q_poly(f, l, xi).unwrap();
                    let c = c_function(f, xi).unwrap();
                    let direct = (c * Complex64::from_polar(1.0, l as f64 * xi)
                        + c.conj() * Complex64::from_polar(1.0, -(l as f64) * xi))
                    .re;
                    assert_relative_eq!(via_phase, direct, epsilon = 1e-12 * direct.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn q_poly_rejects_pole_endpoints() {
        let both = fam(1, 1, &[]);
        assert!(q_poly(&both, 1, 0.0).is_err());
        assert!(q_poly(&both, 1, PI).is_err());
        let left_only = fam(0, 1, &[]);
        assert!(q_poly(&left_only, 1, 0.0).is_err());
        assert!(q_poly(&left_only, 1, PI).is_ok());
    }

    #[test]
    fn explicit_delta_values() {
        let two = fam(1, 1, &[c64(0.3, 0.0), c64(0.5, 0.0)]);
        assert_relative_eq!(
            explicit_norm_delta(&two, 0).unwrap(),
            1.0 / 0.85,
            max_relative = 1e-15
        );
        assert_eq!(explicit_norm_delta(&two, 3).unwrap(), 1.0);
        assert!(explicit_norm_delta(&two, -1).is_err());

        let trivial = fam(0, 0, &[]);
        assert_eq!(explicit_norm_delta(&trivial, 0).unwrap(), 0.5);

        // half-integer d_eps = -1/2: every l >= 0 is above threshold
        let half = fam(1, 1, &[c64(0.4, 0.0)]);
        assert_eq!(explicit_norm_delta(&half, 0).unwrap(), 1.0);
    }

    #[test]
    fn u_weight_real_part_bounds() {
        // (1-|a|)/(1+|a|) <= Re u_alpha <= (1+|a|)/(1-|a|)
        for &a in &[c64(0.5, 0.0), c64(-0.6, 0.0), c64(0.3, 0.4)] {
            let n = a.norm();
            let (lo, hi) = ((1.0 - n) / (1.0 + n), (1.0 + n) / (1.0 - n));
            for k in 0..=50 {
                let x = PI * k as f64 / 50.0;
                let re = u_weight(a, x).re;
                assert!(re >= lo - 1e-12 && re <= hi + 1e-12, "bounds fail at x={x}");
            }
        }
    }
}

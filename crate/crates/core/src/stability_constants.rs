//! Explicit constants of the quantitative inequality
//! `lambda_2(B) - lambda_2(Omega) >= gamma(n, alpha, R) A(Omega)^2`
//! and of its Neumann limit, plus the radial gap estimate they rest on.

use crate::ball_spectrum::{lambda2_unit_ball, neumann_wavenumber, BallSpec, RadialProfile, RobinParameter};
use crate::quadrature;
use crate::special_fns::{j_unchecked, unit_ball_volume};
use crate::{Error, Result};

const QUAD_REL_TOL: f64 = 1e-11;
const QUAD_ABS_FLOOR: f64 = 1e-14;

/// `beta = |Omega Δ B| / |Omega|`, which always lies in `[0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AsymmetryBudget(f64);

impl AsymmetryBudget {
    pub fn new(beta: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&beta) {
            return Err(Error::InvalidArgument(format!("beta must lie in [0, 2], got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Outer radius `R_2 = R (1 + beta/2)^{1/n}` with `|B_2 \ B| = |B| beta / 2`.
    pub fn outer_radius(self, n: usize, radius: f64) -> f64 {
        radius * (1.0 + 0.5 * self.0).powf(1.0 / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    pub eta: f64,
    pub gamma: f64,
    pub radius: f64,
    pub n: usize,
    pub alpha: f64,
}

fn prefactor(n: usize) -> f64 {
    7.0 * (n as f64 - 1.0) / (256.0 * n as f64)
}

/// `int_0^1 r J_{n/2}(k r)^2 dr`.
fn radial_bessel_integral(n: usize, k: f64) -> f64 {
    let nu = n as f64 / 2.0;
    quadrature::integrate(
        |r| {
            let j = j_unchecked(nu, k * r);
            r * j * j
        },
        0.0,
        1.0,
        QUAD_REL_TOL,
        QUAD_ABS_FLOOR,
    )
}

/// `omega_n^{-2/n} int_{B_1} r^{2-n} J_{n/2}(k r)^2 dx`, reduced to the radial integral.
fn eta_for_wavenumber(n: usize, k: f64) -> f64 {
    let omega = unit_ball_volume(n);
    omega.powf(-2.0 / n as f64) * n as f64 * omega * radial_bessel_integral(n, k)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
    }
    Ok(())
}

fn stability_wavenumber(n: usize, alpha: RobinParameter, radius: f64) -> Result<f64> {
    check_dim(n)?;
    BallSpec::new(n, radius)?;
    alpha.check_stability_range(radius)?;
    Ok(lambda2_unit_ball(n, RobinParameter(radius * alpha.value()))?.wavenumber)
}

/// `eta(n, alpha, R)` for `-1/R < alpha < 0`.
pub fn eta_constant(n: usize, alpha: RobinParameter, radius: f64) -> Result<f64> {
    let k = stability_wavenumber(n, alpha, radius)?;
    Ok(eta_for_wavenumber(n, k))
}

/// `gamma(n, alpha, R) = eta^{-1} |Omega|^{-2/n} omega_n J_{n/2}(k)^2 7(n-1) / (16^2 n)`
/// with `|Omega| = omega_n R^n` and `k = sqrt(lambda_2(unit ball; R alpha))`.
pub fn gamma_constant(n: usize, alpha: RobinParameter, radius: f64) -> Result<StabilityConstants> {
    let k = stability_wavenumber(n, alpha, radius)?;
    let eta = eta_for_wavenumber(n, k);
    let omega = unit_ball_volume(n);
    let volume = omega * radius.powi(n as i32);
    let j = j_unchecked(n as f64 / 2.0, k);
    let gamma = volume.powf(-2.0 / n as f64) * omega * j * j * prefactor(n) / eta;
    Ok(StabilityConstants { eta, gamma, radius, n, alpha: alpha.value() })
}

/// `delta(n)` of the Neumann (`alpha -> 0`) limit.
pub fn delta_constant(n: usize) -> Result<f64> {
    check_dim(n)?;
    let xi = neumann_wavenumber(n)?;
    let omega = unit_ball_volume(n);
    let j = j_unchecked(n as f64 / 2.0, xi);
    let ball_integral = n as f64 * omega * radial_bessel_integral(n, xi);
    Ok(prefactor(n) * omega.powf((n as f64 + 2.0) / n as f64) * j * j / ball_integral)
}

/// Both sides of the radial gap estimate
/// `int_R^{R_2} (h(R) - h(r)) r^{n-1} dr >= 7(n-1) R^{n-2} g(R)^2 beta^2 / (16^2 n^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeypointGap {
    pub lhs: f64,
    pub rhs: f64,
}

impl KeypointGap {
    /// `lhs >= rhs - 1e-10 max(1, |rhs|)`.
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - 1e-10 * self.rhs.abs().max(1.0)
    }
}

pub fn keypoint_gap(
    n: usize,
    alpha: RobinParameter,
    radius: f64,
    beta: AsymmetryBudget,
) -> Result<KeypointGap> {
    check_dim(n)?;
    let ball = BallSpec::new(n, radius)?;
    let profile = RadialProfile::new(ball, alpha)?;
    Ok(keypoint_gap_for(&profile, beta))
}

pub(crate) fn keypoint_gap_for(profile: &RadialProfile, beta: AsymmetryBudget) -> KeypointGap {
    let n = profile.ball.n;
    let radius = profile.ball.radius;
    let outer = beta.outer_radius(n, radius);
    let h_at_radius = profile.h_outside(radius);
    let lhs = quadrature::integrate(
        |r| (h_at_radius - profile.h_outside(r)) * r.powi(n as i32 - 1),
        radius,
        outer,
        QUAD_REL_TOL,
        QUAD_ABS_FLOOR,
    );
    let g = profile.g_at_radius();
    let b = beta.value();
    let rhs = 7.0 * (n as f64 - 1.0) * radius.powi(n as i32 - 2) * g * g * b * b
        / (256.0 * (n * n) as f64);
    KeypointGap { lhs, rhs }
}

/// Margins of the two elementary inequalities on `[0, 1]`:
/// `1 + (n-2)/n x - (n-2)/(4n^2) x^2 - (1+x)^{(n-2)/n}` (only for `n >= 3`)
/// and `x - x^2/8 - log(1+x)`.
pub fn elementary_inequality_margin(n: usize, x: f64) -> Result<(Option<f64>, f64)> {
    check_dim(n)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("x must lie in [0, 1], got {x}")));
    }
    let nf = n as f64;
    let m1 = (n >= 3).then(|| {
        let p = (nf - 2.0) / nf;
        1.0 + p * x - (nf - 2.0) / (4.0 * nf * nf) * x * x - (1.0 + x).powf(p)
    });
    let m2 = x - x * x / 8.0 - x.ln_1p();
    Ok((m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_bounds() {
        assert!(AsymmetryBudget::new(-0.1).is_err());
        assert!(AsymmetryBudget::new(2.1).is_err());
        let b = AsymmetryBudget::new(2.0).unwrap();
        assert!((b.outer_radius(2, 1.0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_budget_gives_zero_gap() {
        let gap = keypoint_gap(2, RobinParameter(-0.5), 1.0, AsymmetryBudget::new(0.0).unwrap()).unwrap();
        assert_eq!(gap.lhs, 0.0);
        assert_eq!(gap.rhs, 0.0);
    }

    #[test]
    fn elementary_margins_at_endpoints() {
        let (m1, m2) = elementary_inequality_margin(5, 0.0).unwrap();
        assert_eq!(m1, Some(0.0));
        assert_eq!(m2, 0.0);
        let (m1, _) = elementary_inequality_margin(3, 1.0).unwrap();
        let want = 1.0 + 1.0 / 3.0 - 1.0 / 36.0 - 2f64.powf(1.0 / 3.0);
        assert!((m1.unwrap() - want).abs() < 1e-15);
        assert!(m1.unwrap() >= 0.0);
        let (m1, m2) = elementary_inequality_margin(2, 1.0).unwrap();
        assert!(m1.is_none());
        assert!((m2 - (0.875 - 2f64.ln())).abs() < 1e-15);
        assert!(elementary_inequality_margin(2, 1.5).is_err());
    }

    #[test]
    fn constants_reject_critical_and_nonnegative_alpha() {
        assert!(gamma_constant(2, RobinParameter(-1.0), 1.0).is_err());
        assert!(eta_constant(2, RobinParameter(0.0), 1.0).is_err());
        assert!(delta_constant(1).is_err());
    }
}

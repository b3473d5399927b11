//! Analytic Robin eigenvalues of balls and the radial profiles built on them.
//!
//! The second eigenfunctions of `B_R` are `g(r) x_i / r` with
//! `g(r) = r^{1-n/2} J_{n/2}(k r / R)`. The Robin condition `g'(R) = -alpha g(R)`
//! reduces, with `a = R alpha`, to
//!
//! ```text
//! (1 + a) J_{n/2}(k) - k J_{n/2+1}(k) = 0,
//! ```
//!
//! which is solved in its scaled form (the `(k/2)^{n/2}` factor divided out) so
//! that the root stays well bracketed as `a -> -1` and `k -> 0`.
//!
//! The first eigenvalue for `alpha < 0` is negative;
//! it is taken from the increasing radial solution `r^{1-n/2} I_{n/2-1}(kappa r)`,
//! whose Robin condition reads `kappa I_{n/2}(kappa) + a I_{n/2-1}(kappa) = 0`.

use crate::special_fns::{
    find_bracketed_root, first_root_by_scan, i_scaled_series,
    j_scaled_unchecked, unit_ball_volume, RealOrder,
};
use crate::{Error, Result};

const ROOT_TOL: f64 = 1e-12;
// |R alpha + 1| below this counts as the critical parameter itself
const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub n: usize,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { n, radius })
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.n) * self.radius.powi(self.n as i32)
    }

    /// Ball of the given volume.
    pub fn with_volume(n: usize, volume: f64) -> Result<Self> {
        Self::new(n, (volume / unit_ball_volume(n)).powf(1.0 / n as f64))
    }
}

/// Robin boundary parameter `alpha` (units of inverse length).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RobinParameter(pub f64);

impl RobinParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `-1/R < alpha < 0`, the range of the quantitative inequality.
    pub fn check_stability_range(self, radius: f64) -> Result<()> {
        let a = self.0 * radius;
        if a > -1.0 && self.0 < 0.0 {
            Ok(())
        } else {
            Err(Error::OutOfRange { alpha: self.0, range: format!("(-1/R, 0) with R = {radius}") })
        }
    }
}

impl From<f64> for RobinParameter {
    fn from(a: f64) -> Self {
        Self(a)
    }
}

/// Which family of Bessel functions the radial profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `J`-type profile, `lambda = (k/R)^2 >= 0`.
    Oscillatory,
    /// `I`-type profile, `lambda = -(kappa/R)^2 < 0`.
    Exponential,
}

/// Wavenumber/eigenvalue pair of a radial ball mode on the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenSolution {
    pub wavenumber: f64,
    pub lambda: f64,
    pub nu: RealOrder,
    pub branch: Branch,
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
    }
    Ok(())
}

/// Scaled Robin function of the J-branch: `(1+a) J_nu(k) - k J_{nu+1}(k)`
/// divided by `(k/2)^nu`.
fn j_branch_condition(nu: f64, a: f64, k: f64) -> f64 {
    (1.0 + a) * j_scaled_unchecked(nu, k) - 0.5 * k * k * j_scaled_unchecked(nu + 1.0, k)
}

/// First positive zero of `d/dt (t^{1-n/2} J_{n/2}(t))`, so that
/// `mu_2(unit ball) = xi^2`.
pub fn neumann_wavenumber(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nu = n as f64 / 2.0;
    first_root_by_scan(|t| j_branch_condition(nu, 0.0, t), 0.0, 60.0, 0.05, ROOT_TOL)
}

/// `lambda_2` of the unit ball for `-1 <= a <= 0`.
pub fn lambda2_unit_ball(n: usize, a: RobinParameter) -> Result<RadialEigenSolution> {
    check_dim(n)?;
    let a = a.value();
    if a > 0.0 || a < -1.0 - CRITICAL_TOL {
        return Err(Error::OutOfRange { alpha: a, range: "[-1, 0] on the unit ball".into() });
    }
    second_radial_mode(n, a)
}

/// Second Robin eigenvalue of the unit ball for any `a <= 0`, including the
/// negative branch `a < -1` where the profile is `r^{1-n/2} I_{n/2}(kappa r)`.
pub fn second_radial_mode(n: usize, a: f64) -> Result<RadialEigenSolution> {
    check_dim(n)?;
    if !a.is_finite() || a > 0.0 {
        return Err(Error::OutOfRange { alpha: a, range: "a <= 0".into() });
    }
    let nu = n as f64 / 2.0;
    let order = RealOrder::half_dim(n);
    if (a + 1.0).abs() <= CRITICAL_TOL {
        return Ok(RadialEigenSolution {
            wavenumber: 0.0,
            lambda: 0.0,
            nu: order,
            branch: Branch::Oscillatory,
        });
    }
    if a < -1.0 {
        // (1+a) I_nu(kappa) + kappa I_{nu+1}(kappa) = 0, scaled by (kappa/2)^nu
        let cond =
            |kap: f64| (1.0 + a) * i_scaled_series(nu, kap) + 0.5 * kap * kap * i_scaled_series(nu + 1.0, kap);
        let hi = expand_until_positive(&cond, 1.0)?;
        let kappa = find_bracketed_root(cond, 0.0, hi, ROOT_TOL)?;
        return Ok(RadialEigenSolution {
            wavenumber: kappa,
            lambda: -kappa * kappa,
            nu: order,
            branch: Branch::Exponential,
        });
    }
    let xi = neumann_wavenumber(n)?;
    let k = if a == 0.0 {
        xi
    } else {
        find_bracketed_root(|k| j_branch_condition(nu, a, k), 0.0, 1.01 * xi, ROOT_TOL)?
    };
    Ok(RadialEigenSolution { wavenumber: k, lambda: k * k, nu: order, branch: Branch::Oscillatory })
}

fn expand_until_positive<F: Fn(f64) -> f64>(f: &F, start: f64) -> Result<f64> {
    let mut hi = start;
    for _ in 0..60 {
        if f(hi) > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Bracketing { lo: 0.0, hi, f_lo: f(0.0), f_hi: f(hi) })
}

/// `lambda_2(B_R; alpha) = lambda_2(unit ball; R alpha) / R^2` for
/// `-1/R <= alpha <= 0`.
pub fn lambda2_ball(ball: BallSpec, alpha: RobinParameter) -> Result<f64> {
    let a = ball.radius * alpha.value();
    if alpha.value() > 0.0 || a < -1.0 - CRITICAL_TOL {
        return Err(Error::OutOfRange {
            alpha: alpha.value(),
            range: format!("[-1/R, 0] with R = {}", ball.radius),
        });
    }
    let sol = second_radial_mode(ball.n, a)?;
    Ok(sol.lambda / (ball.radius * ball.radius))
}

/// First Robin eigenvalue of the unit ball for `a <= 0`.
pub fn lambda1_unit_ball(n: usize, a: RobinParameter) -> Result<RadialEigenSolution> {
    check_dim(n)?;
    let a = a.value();
    if !a.is_finite() || a > 0.0 {
        return Err(Error::OutOfRange { alpha: a, range: "a <= 0 (positive range unsupported)".into() });
    }
    let nu = n as f64 / 2.0;
    let order = RealOrder::half_dim(n);
    if a == 0.0 {
        return Ok(RadialEigenSolution {
            wavenumber: 0.0,
            lambda: 0.0,
            nu: order,
            branch: Branch::Exponential,
        });
    }
    // kappa I_nu(kappa) + a I_{nu-1}(kappa) = 0, scaled by (kappa/2)^{nu-1}
    let cond = |kap: f64| {
        0.5 * kap * kap * i_scaled_series(nu, kap) + a * i_scaled_series(nu - 1.0, kap)
    };
    let hi = expand_until_positive(&cond, 1.0)?;
    let kappa = find_bracketed_root(cond, 0.0, hi, ROOT_TOL)?;
    Ok(RadialEigenSolution { wavenumber: kappa, lambda: -kappa * kappa, nu: order, branch: Branch::Exponential })
}

/// `lambda_1(B_R; alpha)` for `alpha <= 0`.
pub fn lambda1_ball(ball: BallSpec, alpha: RobinParameter) -> Result<f64> {
    if alpha.value() > 0.0 {
        return Err(Error::OutOfRange { alpha: alpha.value(), range: "alpha <= 0".into() });
    }
    let sol = lambda1_unit_ball(ball.n, RobinParameter(ball.radius * alpha.value()))?;
    Ok(sol.lambda / (ball.radius * ball.radius))
}

/// Radial part `g` of the second eigenfunctions of `B_R`, extended by
/// `g(R) exp(-alpha (r - R))` outside the ball, together with
/// `h = g'^2 + (n-1) g^2 / r^2 + 2 alpha g g' + alpha (n-1) g^2 / r`.
///
/// Normalised with unit Bessel amplitude: `g(r) = r^{1-n/2} J_{n/2}(k r / R)`.
#[derive(Debug, Clone, Copy)]
pub struct RadialProfile {
    pub ball: BallSpec,
    pub alpha: f64,
    /// Unit-ball wavenumber `k = sqrt(lambda_2(unit ball; R alpha))`.
    pub wavenumber: f64,
    nu: f64,
    g_at_radius: f64,
}

impl RadialProfile {
    /// Requires `-1/R < alpha < 0`.
    pub fn new(ball: BallSpec, alpha: RobinParameter) -> Result<Self> {
        alpha.check_stability_range(ball.radius)?;
        let sol = lambda2_unit_ball(ball.n, RobinParameter(ball.radius * alpha.value()))?;
        let mut profile = Self {
            ball,
            alpha: alpha.value(),
            wavenumber: sol.wavenumber,
            nu: ball.n as f64 / 2.0,
            g_at_radius: 0.0,
        };
        profile.g_at_radius = profile.g_inside(ball.radius);
        Ok(profile)
    }

    fn c(&self) -> f64 {
        self.wavenumber / self.ball.radius
    }

    fn g_inside(&self, r: f64) -> f64 {
        let c = self.c();
        r * (0.5 * c).powf(self.nu) * j_scaled_unchecked(self.nu, c * r)
    }

    fn g_prime_inside(&self, r: f64) -> f64 {
        let c = self.c();
        let z = c * r;
        (0.5 * c).powf(self.nu)
            * (j_scaled_unchecked(self.nu, z) - 0.5 * z * z * j_scaled_unchecked(self.nu + 1.0, z))
    }

    pub fn g(&self, r: f64) -> f64 {
        let big_r = self.ball.radius;
        if r <= big_r {
            self.g_inside(r)
        } else {
            self.g_at_radius * (-self.alpha * (r - big_r)).exp()
        }
    }

    pub fn g_prime(&self, r: f64) -> f64 {
        let big_r = self.ball.radius;
        if r <= big_r {
            self.g_prime_inside(r)
        } else {
            -self.alpha * self.g(r)
        }
    }

    /// `g(R)`; equals `R^{1-n/2} J_{n/2}(k)`.
    pub fn g_at_radius(&self) -> f64 {
        self.g_at_radius
    }

    /// `h(r)` from its definition in terms of `g` and `g'`.
    pub fn h_definitional(&self, r: f64) -> f64 {
        let n1 = self.ball.n as f64 - 1.0;
        let g = self.g(r);
        let gp = self.g_prime(r);
        gp * gp + n1 * g * g / (r * r) + 2.0 * self.alpha * g * gp + self.alpha * n1 * g * g / r
    }

    /// `h(r)` outside the ball in closed form:
    /// `g(R)^2 (-alpha^2 + (n-1)(1 + alpha r)/r^2) e^{-2 alpha (r - R)}`.
    pub fn h_outside(&self, r: f64) -> f64 {
        let n1 = self.ball.n as f64 - 1.0;
        let a = self.alpha;
        self.g_at_radius.powi(2)
            * (-a * a + n1 * (1.0 + a * r) / (r * r))
            * (-2.0 * a * (r - self.ball.radius)).exp()
    }

    pub fn h(&self, r: f64) -> f64 {
        if r >= self.ball.radius {
            self.h_outside(r)
        } else {
            self.h_definitional(r)
        }
    }

    /// Relative Robin residual `|g'(R) + alpha g(R)| / |g(R)|` of the Bessel branch.
    pub fn robin_residual(&self) -> f64 {
        let big_r = self.ball.radius;
        (self.g_prime_inside(big_r) + self.alpha * self.g_at_radius).abs() / self.g_at_radius.abs()
    }
}

/// `g(r)` for the ball and parameter; see [`RadialProfile`].
pub fn radial_g(ball: BallSpec, alpha: RobinParameter, r: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!("radius {r} must be finite and >= 0")));
    }
    Ok(RadialProfile::new(ball, alpha)?.g(r))
}

/// `h(r)` for the ball and parameter; `r = 0` is rejected.
pub fn radial_h(ball: BallSpec, alpha: RobinParameter, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("h is singular at r = {r}; need r > 0")));
    }
    Ok(RadialProfile::new(ball, alpha)?.h(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fns::{bessel_j, bessel_j_prime};

    #[test]
    fn critical_parameter_gives_zero() {
        for n in 2..6 {
            let sol = lambda2_unit_ball(n, RobinParameter(-1.0)).unwrap();
            assert_eq!(sol.lambda, 0.0);
        }
        let ball = BallSpec::new(2, 2.0).unwrap();
        assert_eq!(lambda2_ball(ball, RobinParameter(-0.5)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(lambda2_unit_ball(2, RobinParameter(-1.2)).is_err());
        assert!(lambda2_unit_ball(2, RobinParameter(0.3)).is_err());
        let ball = BallSpec::new(2, 1.0).unwrap();
        assert!(lambda1_ball(ball, RobinParameter(0.1)).is_err());
        assert!(RadialProfile::new(ball, RobinParameter(-1.0)).is_err());
        assert!(RadialProfile::new(ball, RobinParameter(0.0)).is_err());
        assert!(radial_h(ball, RobinParameter(-0.5), 0.0).is_err());
    }

    #[test]
    fn negative_branch_below_critical() {
        let sol = second_radial_mode(2, -1.2).unwrap();
        assert!(sol.lambda < 0.0);
        assert_eq!(sol.branch, Branch::Exponential);
    }

    #[test]
    fn neumann_wavenumber_matches_j1_prime_zero() {
        let xi = neumann_wavenumber(2).unwrap();
        // bisection on J1' = (J0 - J2)/2 over (1, 3)
        let oracle = find_bracketed_root(
            |x| 0.5 * (bessel_j(0.0, x).unwrap() - bessel_j(2.0, x).unwrap()),
            1.0,
            3.0,
            1e-13,
        )
        .unwrap();
        assert!((xi - oracle).abs() < 1e-11);
        assert!((xi - 1.841_183_781_340_659).abs() < 1e-10);
    }

    #[test]
    fn half_robin_disk_wavenumber() {
        let sol = lambda2_unit_ball(2, RobinParameter(-0.5)).unwrap();
        // k J0(k) = 1.5 J1(k)
        let oracle = find_bracketed_root(
            |k| k * bessel_j(0.0, k).unwrap() - 1.5 * bessel_j(1.0, k).unwrap(),
            0.1,
            1.8412,
            1e-13,
        )
        .unwrap();
        assert!((sol.wavenumber - oracle).abs() < 1e-10);
        assert!((sol.wavenumber - 1.355).abs() < 0.01);
    }

    #[test]
    fn profile_is_c1_across_the_radius() {
        let ball = BallSpec::new(2, 1.0).unwrap();
        let p = RadialProfile::new(ball, RobinParameter(-0.5)).unwrap();
        let d = 1e-6;
        let left = (p.g(1.0) - p.g(1.0 - d)) / d;
        let right = (p.g(1.0 + d) - p.g(1.0)) / d;
        assert!((left - right).abs() < 1e-5);
        assert!(p.robin_residual() < 1e-9);
        let k = p.wavenumber;
        let g1 = bessel_j(1.0, k).unwrap();
        assert!((p.g(1.5) - g1 * 0.25f64.exp()).abs() < 1e-13);
        assert_eq!(p.g(0.0), 0.0);
        // derivative of J-branch through the Bessel identity
        let gp = bessel_j_prime(1.0, k).unwrap() * k;
        assert!((p.g_prime(1.0) - gp).abs() < 1e-11);
    }

    #[test]
    fn h_branches_agree_at_radius() {
        for &(n, r, alpha) in &[(2, 1.0, -0.5), (3, 2.0, -0.3), (4, 0.5, -1.5), (2, 4.0, -0.2)] {
            let ball = BallSpec::new(n, r).unwrap();
            let p = RadialProfile::new(ball, RobinParameter(alpha)).unwrap();
            let a = p.h_definitional(r);
            let b = p.h_outside(r);
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn h_closed_form_where_one_plus_alpha_r_vanishes() {
        let ball = BallSpec::new(2, 1.0).unwrap();
        let p = RadialProfile::new(ball, RobinParameter(-0.5)).unwrap();
        let g1 = p.g_at_radius();
        let want = -0.25 * g1 * g1 * 1f64.exp();
        assert!((p.h(2.0) - want).abs() < 1e-14);
    }
}

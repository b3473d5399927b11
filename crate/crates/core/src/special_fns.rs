//! Bessel functions of real order, their derivatives, and bracketed root finding.
//!
//! `J_nu` is evaluated by its power series for `x <= max(10, 2 nu)` and by
//! Miller's downward recurrence beyond that, normalised with the Neumann series
//! `(x/2)^mu / Gamma(1 + mu) = sum_k e_k J_{mu + 2k}(x)`. `I_nu` uses the
//! (non-alternating) power series everywhere.
//!
//! The "scaled" variants divide out the leading `(x/2)^nu` factor so that
//! transcendental equations near the origin stay well conditioned.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Non-negative real Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "Bessel order must be finite and non-negative, got {nu}"
            )));
        }
        Ok(Self(nu))
    }

    /// Order `n / 2` used by the second radial Robin mode in dimension `n`.
    pub fn half_dim(n: usize) -> Self {
        Self(n as f64 / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for RealOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Self::new(nu)
    }
}

fn check_arg(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::InvalidArgument(format!("order {nu} must be finite and >= 0")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!("argument {x} must be finite and >= 0")));
    }
    Ok(())
}

/// `Gamma(1 + nu)` for `nu >= 0`, exact for integer and half-integer orders.
pub(crate) fn gamma_one_plus(nu: f64) -> f64 {
    let whole = nu.floor();
    let frac = nu - whole;
    let mut g = if frac == 0.0 {
        1.0
    } else if frac == 0.5 {
        0.5 * PI.sqrt()
    } else {
        statrs::function::gamma::gamma(1.0 + frac)
    };
    let mut z = 1.0 + frac;
    for _ in 0..whole as usize {
        g *= z;
        z += 1.0;
    }
    g
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    PI.powf(half) / gamma_one_plus(half)
}

// Crossover between the power series and Miller's recurrence.
fn series_limit(nu: f64) -> f64 {
    f64::max(10.0, 2.0 * nu)
}

/// `J_nu(x) / (x/2)^nu` by its power series.
fn j_scaled_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma_one_plus(nu);
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && m > 0.5 * x {
            break;
        }
        if m > 500.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

/// `I_nu(x) / (x/2)^nu` by its power series.
pub(crate) fn i_scaled_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0 / gamma_one_plus(nu);
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + nu));
        sum += term;
        if term <= 1e-17 * sum && m > 0.5 * x {
            break;
        }
        if m > 5000.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Miller's downward recurrence for `J_nu(x)`, `x > 0`.
fn j_miller(nu: f64, x: f64) -> f64 {
    let mu = nu - nu.floor();
    let target = nu.floor() as usize;
    let top = f64::max(target as f64, x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;

    // f[k] is proportional to J_{mu + k}(x)
    let mut f = vec![0.0; start + 2];
    f[start] = 1e-30;
    for k in (1..=start).rev() {
        let order = mu + k as f64;
        f[k - 1] = 2.0 * order / x * f[k] - f[k + 1];
        if f[k - 1].abs() > 1e250 {
            for v in &mut f[k - 1..] {
                *v *= 1e-250;
            }
        }
    }

    // sum_k e_k J_{mu+2k} = (x/2)^mu / Gamma(1+mu),
    // e_0 = 1, e_k = (mu+2k)/k * prod_{i<k} (mu+i)/i
    let mut norm = f[0];
    let mut prod = 1.0;
    for k in 1..=start / 2 {
        let kf = k as f64;
        norm += (mu + 2.0 * kf) / kf * prod * f[2 * k];
        prod *= (mu + kf) / kf;
    }
    let exact = (0.5 * x).powf(mu) / gamma_one_plus(mu);
    f[target] * exact / norm
}

/// Bessel function of the first kind `J_nu(x)`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_arg(nu, x)?;
    Ok(j_unchecked(nu, x))
}

pub(crate) fn j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= series_limit(nu) {
        (0.5 * x).powf(nu) * j_scaled_series(nu, x)
    } else {
        j_miller(nu, x)
    }
}

/// `J_nu(x) / (x/2)^nu`; finite and equal to `1 / Gamma(nu + 1)` at the origin.
pub fn bessel_j_scaled(nu: f64, x: f64) -> Result<f64> {
    check_arg(nu, x)?;
    Ok(j_scaled_unchecked(nu, x))
}

pub(crate) fn j_scaled_unchecked(nu: f64, x: f64) -> f64 {
    if x <= series_limit(nu) {
        j_scaled_series(nu, x)
    } else {
        j_miller(nu, x) / (0.5 * x).powf(nu)
    }
}

/// Derivative `J'_nu(x)`.
///
/// Uses `(J_{nu-1} - J_{nu+1}) / 2` for `nu >= 1` and `(nu/x) J_nu - J_{nu+1}`
/// below that. For `0 < nu < 1` the derivative is unbounded at `x = 0` and
/// `+inf` is returned.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    check_arg(nu, x)?;
    if nu >= 1.0 {
        return Ok(0.5 * (j_unchecked(nu - 1.0, x) - j_unchecked(nu + 1.0, x)));
    }
    if nu == 0.0 {
        return Ok(-j_unchecked(1.0, x));
    }
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(nu / x * j_unchecked(nu, x) - j_unchecked(nu + 1.0, x))
}

/// Modified Bessel function of the first kind `I_nu(x)`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    check_arg(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    Ok((0.5 * x).powf(nu) * i_scaled_series(nu, x))
}

/// `I_nu(x) / (x/2)^nu`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    check_arg(nu, x)?;
    Ok(i_scaled_series(nu, x))
}

/// Bisection on a sign-changing bracket; returns once the bracket is narrower
/// than `tol` (or an endpoint/midpoint evaluates to exactly zero).
pub fn find_bracketed_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid bracket [{lo}, {hi}] or tolerance {tol}"
        )));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracketing { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scans `[lo, hi]` with step `step` for the first sign change of `f` and
/// refines it by bisection.
pub(crate) fn first_root_by_scan<F>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut a = lo;
    let mut fa = f(a);
    while a < hi {
        let b = (a + step).min(hi);
        let fb = f(b);
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() != fb.signum() {
            return find_bracketed_root(&f, a, b, tol);
        }
        a = b;
        fa = fb;
    }
    Err(Error::Bracketing { lo, hi, f_lo: f(lo), f_hi: f(hi) })
}

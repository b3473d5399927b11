use super::ladder::{FemSettings, Ladder, Richardson};
use super::report::CaseRow;
use crate::ball_spectrum::{lambda2_ball, BallSpec, RobinParameter};
use crate::geometry::{fraenkel_asymmetry, make_star_domain, ModeMap, StarDomain2D};
use crate::par;
use crate::stability_constants::gamma_constant;
use crate::{Error, Result};

/// Rows whose deficit is below this multiple of the allowance are left out of the fit.
const NOISE_FLOOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRow {
    pub eps: f64,
    pub lambda2_domain: f64,
    /// `lambda_2` of the disk of radius `R t_eps`.
    pub lambda2_ball: f64,
    pub deficit: f64,
    pub asymmetry: f64,
    pub gamma: f64,
    pub allowance: f64,
    pub fem: Richardson,
    /// Used in the slope fit.
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessTable {
    pub radius: f64,
    pub alpha: f64,
    pub rows: Vec<SharpnessRow>,
    /// Least-squares slope of `log deficit` against `log eps`.
    pub fitted_slope: Option<f64>,
    pub fitted_intercept: Option<f64>,
    /// Why rows were left out of the fit.
    pub notes: Vec<String>,
    /// Set when a solve failed; `rows` then holds the completed prefix.
    pub failure: Option<String>,
}

impl SharpnessTable {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    /// `A / eps` per row.
    pub fn asymmetry_ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.asymmetry / r.eps).collect()
    }

    pub fn to_rows(&self, domain_id: &str) -> Vec<CaseRow> {
        self.rows
            .iter()
            .map(|r| {
                let margin = r.deficit - r.gamma * r.asymmetry * r.asymmetry;
                CaseRow {
                    domain_id: domain_id.to_string(),
                    n: 2,
                    radius: Some(self.radius),
                    alpha: self.alpha,
                    eps: Some(r.eps),
                    lambda2_ball: Some(r.lambda2_ball),
                    lambda2_domain: Some(r.lambda2_domain),
                    asymmetry: Some(r.asymmetry),
                    gamma: Some(r.gamma),
                    deficit: Some(r.deficit),
                    margin: Some(margin),
                    allowance: Some(r.allowance),
                    outcome: Ok(margin >= -r.allowance && r.deficit > 0.0),
                }
            })
            .collect()
    }
}

/// `(slope, intercept)` of the least-squares line through `(log x, log y)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Deficit `lambda_2(B_eps) - lambda_2(Omega_eps)` along the family
/// `R (1 + eps psi)`, with `B_eps` the equal-area disk of radius `R t_eps`.
pub fn sharpness_sweep(
    coeffs: &ModeMap,
    radius: f64,
    alpha: RobinParameter,
    eps_list: &[f64],
    h: f64,
    settings: &FemSettings,
) -> Result<SharpnessTable> {
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("empty eps list".into()));
    }
    let symmetric = coeffs.keys().all(|m| m % 2 == 0);
    let domains: Vec<StarDomain2D> = eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) {
                return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
            }
            let dom = make_star_domain(radius, eps, coeffs, symmetric)?;
            alpha.check_stability_range(dom.equivalent_ball().radius)?;
            Ok(dom)
        })
        .collect::<Result<_>>()?;
    let results = par::map(&domains, |dom| sweep_row(dom, radius, alpha, h, settings));
    let mut rows = Vec::new();
    let mut failure = None;
    for (dom, r) in domains.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(format!("eps = {}: {e}", dom.eps()));
                break;
            }
        }
    }
    let mut notes = Vec::new();
    for row in &mut rows {
        row.included = row.deficit >= NOISE_FLOOR * row.allowance && row.deficit > 0.0;
        if !row.included {
            notes.push(format!(
                "eps = {}: deficit {:.3e} below {NOISE_FLOOR} x allowance {:.3e}, excluded from fit",
                row.eps, row.deficit, row.allowance
            ));
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.included).map(|r| (r.eps, r.deficit)).unzip();
    let fit = fit_power_law(&xs, &ys);
    Ok(SharpnessTable {
        radius,
        alpha: alpha.value(),
        rows,
        fitted_slope: fit.map(|f| f.0),
        fitted_intercept: fit.map(|f| f.1),
        notes,
        failure,
    })
}

fn sweep_row(
    dom: &StarDomain2D,
    radius: f64,
    alpha: RobinParameter,
    h: f64,
    settings: &FemSettings,
) -> Result<SharpnessRow> {
    let t = dom.t_eps();
    let lambda_ball = lambda2_ball(BallSpec::new(2, radius * t)?, alpha)?;
    let gamma = gamma_constant(2, alpha, radius * t)?.gamma;
    let fem = Ladder::new(dom, h, settings.order)?.lambda2(alpha.value(), settings.solver_tol)?;
    let asymmetry = fraenkel_asymmetry(dom, settings.asymmetry_tol).asymmetry;
    let tol = settings.asymmetry_tol;
    let allowance = 3.0 * fem.error + gamma * ((asymmetry + tol).powi(2) - asymmetry * asymmetry);
    Ok(SharpnessRow {
        eps: dom.eps(),
        lambda2_domain: fem.extrapolated,
        lambda2_ball: lambda_ball,
        deficit: lambda_ball - fem.extrapolated,
        asymmetry,
        gamma,
        allowance,
        fem,
        included: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_fit_recovers_exponent() {
        let xs = [0.1, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(2.5)).collect();
        let (s, c) = fit_power_law(&xs, &ys).unwrap();
        assert!((s - 2.5).abs() < 1e-12);
        assert!((c - 3f64.ln()).abs() < 1e-12);
        assert!(fit_power_law(&[0.1], &[1.0]).is_none());
        assert!(fit_power_law(&[0.1, 0.2], &[1.0, -1.0]).is_none());
    }
}

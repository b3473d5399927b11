use super::ladder::{FemSettings, Ladder, Richardson};
use super::report::CaseRow;
use crate::ball_spectrum::{lambda2_ball, neumann_wavenumber, RobinParameter};
use crate::geometry::{fraenkel_asymmetry, StarDomain2D};
use crate::stability_constants::{delta_constant, gamma_constant};
use crate::{Error, Result};

/// One check of `lambda_2(B) - lambda_2(Omega) >= gamma A(Omega)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Equal-area radius; `gamma` is evaluated there.
    pub radius: f64,
    pub alpha: f64,
    pub eps: f64,
    pub lambda2_ball: f64,
    /// Extrapolated discrete value.
    pub lambda2_domain: f64,
    pub fem: Richardson,
    pub asymmetry: f64,
    pub gamma: f64,
    /// `lambda2_ball - lambda2_domain`.
    pub deficit: f64,
    /// `deficit - gamma A^2`.
    pub margin: f64,
    /// `3 fem.error + gamma ((A + tol)^2 - A^2)`.
    pub numerical_allowance: f64,
    /// `lambda2_domain <= 0`, where the inequality holds without computation.
    pub trivial: bool,
}

impl StabilityReport {
    pub fn passes(&self) -> bool {
        self.trivial || self.margin >= -self.numerical_allowance
    }

    pub fn to_row(&self, domain_id: &str) -> CaseRow {
        CaseRow {
            domain_id: domain_id.to_string(),
            n: 2,
            radius: Some(self.radius),
            alpha: self.alpha,
            eps: Some(self.eps),
            lambda2_ball: Some(self.lambda2_ball),
            lambda2_domain: Some(self.lambda2_domain),
            asymmetry: Some(self.asymmetry),
            gamma: Some(self.gamma),
            deficit: Some(self.deficit),
            margin: Some(self.margin),
            allowance: Some(self.numerical_allowance),
            outcome: Ok(self.passes()),
        }
    }
}

pub fn verify_main_inequality(dom: &StarDomain2D, alpha: RobinParameter, h: f64) -> Result<StabilityReport> {
    verify_with(dom, alpha, h, &FemSettings::default())
}

pub fn verify_with(dom: &StarDomain2D, alpha: RobinParameter, h: f64, settings: &FemSettings) -> Result<StabilityReport> {
    let ball = dom.equivalent_ball();
    alpha.check_stability_range(ball.radius)?;
    let ladder = Ladder::new(dom, h, settings.order)?;
    let asymmetry = fraenkel_asymmetry(dom, settings.asymmetry_tol).asymmetry;
    report_for(dom, &ladder, alpha, asymmetry, settings)
}

pub(crate) fn report_for(
    dom: &StarDomain2D,
    ladder: &Ladder,
    alpha: RobinParameter,
    asymmetry: f64,
    settings: &FemSettings,
) -> Result<StabilityReport> {
    let ball = dom.equivalent_ball();
    alpha.check_stability_range(ball.radius)?;
    let lambda_ball = lambda2_ball(ball, alpha)?;
    let gamma = gamma_constant(2, alpha, ball.radius)?.gamma;
    let fem = ladder.lambda2(alpha.value(), settings.solver_tol)?;
    Ok(assemble_report(ball.radius, alpha.value(), dom.eps(), lambda_ball, fem, asymmetry, gamma, settings.asymmetry_tol))
}

#[allow(clippy::too_many_arguments)]
fn assemble_report(
    radius: f64,
    alpha: f64,
    eps: f64,
    lambda_ball: f64,
    fem: Richardson,
    asymmetry: f64,
    constant: f64,
    asymmetry_tol: f64,
) -> StabilityReport {
    let deficit = lambda_ball - fem.extrapolated;
    let bound = constant * asymmetry * asymmetry;
    let asym_slack = constant * ((asymmetry + asymmetry_tol).powi(2) - asymmetry * asymmetry);
    StabilityReport {
        radius,
        alpha,
        eps,
        lambda2_ball: lambda_ball,
        lambda2_domain: fem.extrapolated,
        fem,
        asymmetry,
        gamma: constant,
        deficit,
        margin: deficit - bound,
        numerical_allowance: 3.0 * fem.error + asym_slack,
        trivial: fem.extrapolated <= 0.0,
    }
}

/// Neumann-limit check of one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannLimitReport {
    /// `alpha = 0`: `mu_2(B) - mu_2(Omega) >= delta(2) |Omega|^{-1} A^2`, with
    /// `gamma` standing for `delta(2) |Omega|^{-1}`.
    pub neumann: StabilityReport,
    pub delta: f64,
    /// `(alpha, gamma(2, alpha, R))` in the given order.
    pub gammas: Vec<(f64, f64)>,
    /// `|gamma - delta |Omega|^{-1}| / (delta |Omega|^{-1})` per alpha.
    pub relative_gaps: Vec<f64>,
    /// The gap shrinks as `alpha` approaches 0.
    pub monotone: bool,
}

impl NeumannLimitReport {
    pub fn passes(&self) -> bool {
        self.neumann.passes() && self.monotone
    }
}

/// Checks the Neumann inequality with a pure Neumann solve and tracks
/// `gamma(2, alpha, R) -> delta(2) |Omega|^{-1}` along `alphas`.
pub fn neumann_limit_check(
    dom: &StarDomain2D,
    alphas: &[f64],
    h: f64,
    settings: &FemSettings,
) -> Result<NeumannLimitReport> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("need at least one alpha".into()));
    }
    let ball = dom.equivalent_ball();
    for &a in alphas {
        RobinParameter(a).check_stability_range(ball.radius)?;
    }
    let delta = delta_constant(2)?;
    let volume = dom.volume();
    let limit = delta / volume;
    let mu_ball = (neumann_wavenumber(2)? / ball.radius).powi(2);
    let ladder = Ladder::new(dom, h, settings.order)?;
    let fem = ladder.lambda2(0.0, settings.solver_tol)?;
    let asymmetry = fraenkel_asymmetry(dom, settings.asymmetry_tol).asymmetry;
    let neumann = assemble_report(ball.radius, 0.0, dom.eps(), mu_ball, fem, asymmetry, limit, settings.asymmetry_tol);
    let gammas = alphas
        .iter()
        .map(|&a| Ok((a, gamma_constant(2, RobinParameter(a), ball.radius)?.gamma)))
        .collect::<Result<Vec<_>>>()?;
    let relative_gaps: Vec<f64> = gammas.iter().map(|&(_, g)| (g - limit).abs() / limit).collect();
    let mut order: Vec<usize> = (0..alphas.len()).collect();
    order.sort_by(|&i, &j| alphas[i].abs().total_cmp(&alphas[j].abs()).reverse());
    let monotone = order.windows(2).all(|w| relative_gaps[w[1]] <= relative_gaps[w[0]] * (1.0 + 1e-9));
    Ok(NeumannLimitReport { neumann, delta, gammas, relative_gaps, monotone })
}

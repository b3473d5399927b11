use crate::ball_spectrum::RobinParameter;
use crate::fem::{assemble, solve_lowest, DiscreteOperator, ElementOrder};
use crate::geometry::{triangulate, StarDomain2D};
use crate::Result;

/// Discretisation choices shared by all experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemSettings {
    pub order: ElementOrder,
    /// Eigensolver residual tolerance.
    pub solver_tol: f64,
    /// Accuracy requested from the asymmetry search.
    pub asymmetry_tol: f64,
}

impl Default for FemSettings {
    fn default() -> Self {
        Self { order: ElementOrder::Quadratic, solver_tol: 1e-7, asymmetry_tol: 1e-8 }
    }
}

/// `lambda_2` on meshes of size `h` and `h/2` and the extrapolated value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richardson {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    /// `|fine - coarse| / (2^p - 1)`.
    pub error: f64,
}

impl Richardson {
    pub fn new(coarse: f64, fine: f64, rate: f64) -> Self {
        let denom = 2f64.powf(rate) - 1.0;
        Self { coarse, fine, extrapolated: fine + (fine - coarse) / denom, error: (fine - coarse).abs() / denom }
    }
}

/// The two discretisations of one domain; `alpha` can be swapped cheaply.
pub(crate) struct Ladder {
    coarse: DiscreteOperator,
    fine: DiscreteOperator,
    rate: f64,
}

impl Ladder {
    pub(crate) fn new(dom: &StarDomain2D, h: f64, order: ElementOrder) -> Result<Self> {
        let coarse = assemble(&triangulate(dom, h)?, RobinParameter(0.0), order)?;
        let fine = assemble(&triangulate(dom, 0.5 * h)?, RobinParameter(0.0), order)?;
        Ok(Self { coarse, fine, rate: order.eigenvalue_rate() })
    }

    pub(crate) fn lambda2(&self, alpha: f64, tol: f64) -> Result<Richardson> {
        let solve = |op: &DiscreteOperator| -> Result<f64> {
            Ok(solve_lowest(&op.with_alpha(RobinParameter(alpha)), 4, tol)?.eigenvalues[1])
        };
        Ok(Richardson::new(solve(&self.coarse)?, solve(&self.fine)?, self.rate))
    }
}

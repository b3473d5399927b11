use std::path::{Path, PathBuf};

use super::ladder::{FemSettings, Ladder};
use super::report::CaseRow;
use super::verify::{report_for, StabilityReport};
use crate::ball_spectrum::RobinParameter;
use crate::geometry::{fraenkel_asymmetry, StarDomain2D};
use crate::par;
use crate::{Error, Result};

pub fn load_domain_file(path: &Path) -> Result<StarDomain2D> {
    StarDomain2D::parse(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRow {
    pub domain_id: String,
    pub alpha: f64,
    pub result: std::result::Result<StabilityReport, String>,
}

impl CorpusRow {
    pub fn to_row(&self) -> CaseRow {
        match &self.result {
            Ok(r) => r.to_row(&self.domain_id),
            Err(msg) => CaseRow {
                domain_id: self.domain_id.clone(),
                n: 2,
                radius: None,
                alpha: self.alpha,
                eps: None,
                lambda2_ball: None,
                lambda2_domain: None,
                asymmetry: None,
                gamma: None,
                deficit: None,
                margin: None,
                allowance: None,
                outcome: Err(msg.clone()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    /// Domain-major, in input order; alphas in grid order.
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| matches!(&r.result, Ok(rep) if !rep.passes())).count()
    }

    pub fn all_pass(&self) -> bool {
        self.errors() == 0 && self.failures() == 0
    }

    /// Row with the smallest `margin + allowance`.
    pub fn worst(&self) -> Option<&CorpusRow> {
        self.rows
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(|rep| (r, rep.margin + rep.numerical_allowance)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(r, _)| r)
    }

    pub fn to_rows(&self) -> Vec<CaseRow> {
        self.rows.iter().map(CorpusRow::to_row).collect()
    }
}

fn domain_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Runs the inequality check over every (domain file, alpha) pair. Files that
/// fail to load or solve produce error rows rather than aborting the run.
pub fn run_corpus(paths: &[PathBuf], alphas: &[f64], h: f64, settings: &FemSettings) -> Result<CorpusReport> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument("corpus is empty".into()));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("alpha grid is empty".into()));
    }
    let per_domain = par::map(paths, |path| {
        let id = domain_id(path);
        let error_rows = |msg: String| -> Vec<CorpusRow> {
            alphas.iter().map(|&a| CorpusRow { domain_id: id.clone(), alpha: a, result: Err(msg.clone()) }).collect()
        };
        let dom = match load_domain_file(path) {
            Ok(d) => d,
            Err(e) => return error_rows(format!("{}: {e}", path.display())),
        };
        let ladder = match Ladder::new(&dom, h, settings.order) {
            Ok(l) => l,
            Err(e) => return error_rows(e.to_string()),
        };
        let asymmetry = fraenkel_asymmetry(&dom, settings.asymmetry_tol).asymmetry;
        alphas
            .iter()
            .map(|&a| CorpusRow {
                domain_id: id.clone(),
                alpha: a,
                result: report_for(&dom, &ladder, RobinParameter(a), asymmetry, settings).map_err(|e| e.to_string()),
            })
            .collect()
    });
    Ok(CorpusReport { rows: per_domain.into_iter().flatten().collect() })
}

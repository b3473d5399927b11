use std::io::Write;

use crate::{Error, Result};

pub const CSV_COLUMNS: [&str; 13] = [
    "domain_id", "n", "R", "alpha", "eps", "lambda2_ball", "lambda2_domain", "asymmetry", "gamma", "deficit",
    "margin", "allowance", "pass",
];

/// One CSV line. Failed cases carry `None` numbers and the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub domain_id: String,
    pub n: usize,
    pub radius: Option<f64>,
    pub alpha: f64,
    pub eps: Option<f64>,
    pub lambda2_ball: Option<f64>,
    pub lambda2_domain: Option<f64>,
    pub asymmetry: Option<f64>,
    pub gamma: Option<f64>,
    pub deficit: Option<f64>,
    pub margin: Option<f64>,
    pub allowance: Option<f64>,
    pub outcome: std::result::Result<bool, String>,
}

fn num(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.12e}"),
        None => String::new(),
    }
}

/// Writes the rows with a header, numbers in `{:.12e}`.
pub fn write_csv<W: Write>(rows: &[CaseRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for r in rows {
        let pass = match &r.outcome {
            Ok(true) => "true".to_string(),
            Ok(false) => "false".to_string(),
            Err(msg) => format!("error: {msg}"),
        };
        w.write_record([
            r.domain_id.clone(),
            r.n.to_string(),
            num(r.radius),
            num(Some(r.alpha)),
            num(r.eps),
            num(r.lambda2_ball),
            num(r.lambda2_domain),
            num(r.asymmetry),
            num(r.gamma),
            num(r.deficit),
            num(r.margin),
            num(r.allowance),
            pass,
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

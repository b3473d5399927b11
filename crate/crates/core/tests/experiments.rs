use std::path::PathBuf;

use robin_core::ball_spectrum::RobinParameter;
use robin_core::experiments::{
    fit_power_law, neumann_limit_check, run_corpus, sharpness_sweep, verify_main_inequality, verify_with, write_csv,
    FemSettings, Richardson, CSV_COLUMNS,
};
use robin_core::fem::ElementOrder;
use robin_core::geometry::{make_star_domain, ModeMap, StarDomain2D};
use robin_core::stability_constants::gamma_constant;
use robin_core::Error;

fn cos4(eps: f64) -> StarDomain2D {
    make_star_domain(1.0, eps, &ModeMap::from([(4, 1.0)]), true).unwrap()
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn disk_is_an_equality_case() {
    let r = verify_main_inequality(&StarDomain2D::disk(1.0).unwrap(), RobinParameter(-0.5), 0.1).unwrap();
    assert_eq!(r.asymmetry, 0.0);
    assert!(r.deficit.abs() <= r.numerical_allowance.max(1e-9), "{r:?}");
    assert!(r.margin.abs() <= r.numerical_allowance.max(1e-9));
    assert!(r.passes());
}

#[test]
fn perturbed_domain_passes() {
    let r = verify_main_inequality(&cos4(0.1), RobinParameter(-0.5), 0.1).unwrap();
    assert!(r.passes() && !r.trivial);
    assert!(r.deficit > 0.0 && r.margin > 0.0);
    let g = gamma_constant(2, RobinParameter(-0.5), r.radius).unwrap().gamma;
    assert_eq!(r.gamma, g);
    assert!((r.fem.extrapolated - r.lambda2_domain).abs() == 0.0);
}

#[test]
fn linear_elements_agree_with_quadratic() {
    let dom = cos4(0.1);
    let p2 = verify_main_inequality(&dom, RobinParameter(-0.5), 0.1).unwrap();
    let settings = FemSettings { order: ElementOrder::Linear, ..FemSettings::default() };
    let p1 = verify_with(&dom, RobinParameter(-0.5), 0.02, &settings).unwrap();
    assert!(p1.passes());
    assert!((p1.lambda2_domain - p2.lambda2_domain).abs() <= 3.0 * p1.fem.error + 1e-6);
}

#[test]
fn out_of_range_alpha() {
    let dom = cos4(0.1);
    for a in [-1.5, -1.0 / dom.equivalent_ball().radius, 0.0, 0.2] {
        assert!(matches!(verify_main_inequality(&dom, RobinParameter(a), 0.1), Err(Error::OutOfRange { .. })));
    }
}

#[test]
fn near_critical_parameter() {
    // lambda_2 of the ball is tiny here; the discrete value may drop below zero
    let dom = make_star_domain(1.0, 0.15, &ModeMap::from([(4, 1.0)]), true).unwrap();
    let alpha = -0.995 / dom.equivalent_ball().radius;
    let r = verify_main_inequality(&dom, RobinParameter(alpha), 0.1).unwrap();
    assert!(r.passes());
    assert_eq!(r.trivial, r.lambda2_domain <= 0.0);
}

#[test]
fn neumann_limit() {
    let disk = neumann_limit_check(&StarDomain2D::disk(1.0).unwrap(), &[-1e-2, -1e-4], 0.1, &FemSettings::default()).unwrap();
    assert!(disk.neumann.deficit.abs() <= disk.neumann.numerical_allowance.max(1e-9));
    assert_eq!(disk.neumann.asymmetry, 0.0);

    let dom = cos4(0.1);
    let rep = neumann_limit_check(&dom, &[-1e-1, -1e-2, -1e-3, -1e-4], 0.1, &FemSettings::default()).unwrap();
    assert!(rep.passes());
    assert!(rep.monotone);
    assert!(*rep.relative_gaps.last().unwrap() <= 1e-2);
    assert!((rep.neumann.gamma - rep.delta / dom.volume()).abs() < 1e-15);
    assert!(neumann_limit_check(&dom, &[], 0.1, &FemSettings::default()).is_err());
    assert!(neumann_limit_check(&dom, &[0.1], 0.1, &FemSettings::default()).is_err());
}

#[test]
fn sharpness_rows_and_ratio_bounds() {
    let alpha = RobinParameter(-0.5);
    let eps = [0.03, 0.06, 0.12];
    let table = sharpness_sweep(&ModeMap::from([(4, 1.0)]), 1.0, alpha, &eps, 0.1, &FemSettings::default()).unwrap();
    assert!(table.is_complete());
    assert_eq!(table.rows.len(), 3);
    let slope = table.fitted_slope.unwrap();
    assert!((1.8..=2.2).contains(&slope), "slope {slope}");
    let ratios: Vec<f64> = table.rows.iter().map(|r| r.deficit / (r.asymmetry * r.asymmetry)).collect();
    for (row, q) in table.rows.iter().zip(&ratios) {
        assert!(row.deficit > 0.0 && row.included);
        let floor = row.gamma - row.allowance / (row.asymmetry * row.asymmetry);
        assert!(*q >= floor);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &q| (l.min(q), h.max(q)));
    assert!(hi / lo < 1.5, "{ratios:?}");
    assert_eq!(table.to_rows("cos4").len(), 3);
    assert!(sharpness_sweep(&ModeMap::from([(4, 1.0)]), 1.0, alpha, &[], 0.1, &FemSettings::default()).is_err());
    assert!(sharpness_sweep(&ModeMap::from([(4, 1.0)]), 1.0, alpha, &[0.0], 0.1, &FemSettings::default()).is_err());
}

#[test]
fn power_law_fit() {
    let xs = [0.1, 0.2, 0.4, 0.8];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(2.5)).collect();
    let (slope, intercept) = fit_power_law(&xs, &ys).unwrap();
    assert!((slope - 2.5).abs() < 1e-12 && (intercept - 3f64.ln()).abs() < 1e-12);
    assert!(fit_power_law(&[1.0], &[1.0]).is_none());
    assert!(fit_power_law(&[1.0, 2.0], &[1.0, -1.0]).is_none());
    assert!(fit_power_law(&[1.0, 1.0], &[1.0, 2.0]).is_none());
}

#[test]
fn richardson_formula() {
    let r = Richardson::new(1.0 + 16e-4, 1.0 + 1e-4, 4.0);
    assert!((r.extrapolated - 1.0).abs() < 1e-15);
    assert!((r.error - 1e-4).abs() < 1e-15);
}

#[test]
fn corpus_with_invalid_file_and_disk() {
    let dir = tempfile::tempdir().unwrap();
    let disk = dir.path().join("disk.txt");
    std::fs::write(&disk, "R = 1\neps = 0\nsymmetric = true\n").unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "R = 1\neps = 0.1\nmode 1 = 1\n").unwrap();
    let missing = dir.path().join("missing.txt");
    let alphas = [-0.3, -0.6];
    let report = run_corpus(&[disk, bad, missing], &alphas, 0.1, &FemSettings::default()).unwrap();
    assert_eq!(report.rows.len(), 6);
    assert_eq!(report.errors(), 4);
    assert!(!report.all_pass());
    assert_eq!(report.rows[0].domain_id, "disk");
    assert_eq!(report.rows[2].domain_id, "bad");
    for row in &report.rows[..2] {
        let r = row.result.as_ref().unwrap();
        assert!(r.passes() && r.deficit.abs() <= r.numerical_allowance.max(1e-9));
    }
    let rows = report.to_rows();
    assert!(rows[2].outcome.as_ref().unwrap_err().contains("mode"));
    assert!(run_corpus(&[], &alphas, 0.1, &FemSettings::default()).is_err());
}

#[test]
fn shipped_corpus_satisfies_both_inequalities_and_is_reproducible() {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    let alphas = [-0.5];
    let first = run_corpus(&paths[..4], &alphas, 0.1, &FemSettings::default()).unwrap();
    assert!(first.all_pass());
    for row in &first.rows {
        let r = row.result.as_ref().unwrap();
        // lambda_2(Omega) <= lambda_2(B) up to discretisation error
        assert!(r.deficit >= -r.numerical_allowance);
    }
    let second = run_corpus(&paths[..4], &alphas, 0.1, &FemSettings::default()).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&first.to_rows(), &mut a).unwrap();
    write_csv(&second.to_rows(), &mut b).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let first_row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first_row.len(), CSV_COLUMNS.len());
    // at least ten significant digits
    assert!(first_row[5].split('e').next().unwrap().len() >= 12);
    assert_eq!(first.worst().unwrap().domain_id, first.rows.iter().min_by(|x, y| {
        let m = |r: &robin_core::experiments::CorpusRow| r.result.as_ref().map(|s| s.margin).unwrap_or(f64::NEG_INFINITY);
        m(x).total_cmp(&m(y))
    }).unwrap().domain_id);
}

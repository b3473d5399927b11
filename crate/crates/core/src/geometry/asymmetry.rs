use std::f64::consts::{PI, TAU};

use super::StarDomain2D;
use crate::par;
use crate::{Error, Result};

const CELLS: usize = 4096;
const GRID: usize = 11;
const MAX_WIDENINGS: usize = 3;

// 4-point Gauss-Legendre on [-1, 1]
const GL4_X: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_W: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetryResult {
    /// `|Omega Δ B_r(c)| / |B_r|` at the best centre found.
    pub asymmetry: f64,
    /// Optimal ball centre in absolute coordinates.
    pub center: [f64; 2],
    /// Equal-area radius.
    pub radius: f64,
}

/// Boundary radii of the domain at the fixed polar nodes, measured from its star centre.
struct PolarTable<'a> {
    dom: &'a StarDomain2D,
    rho_sq: Vec<f64>,
    cos_sin: Vec<(f64, f64)>,
}

impl<'a> PolarTable<'a> {
    fn new(dom: &'a StarDomain2D) -> Self {
        let thetas: Vec<f64> = (0..CELLS * 5).map(|j| node(j / 5, j % 5)).collect();
        let rho_sq = thetas.iter().map(|&t| dom.boundary_radius(t).powi(2)).collect();
        let cos_sin = thetas.iter().map(|t| (t.cos(), t.sin())).collect();
        Self { dom, rho_sq, cos_sin }
    }
}

fn node(cell: usize, slot: usize) -> f64 {
    let h = TAU / CELLS as f64;
    let a = cell as f64 * h;
    if slot == 4 {
        a
    } else {
        a + 0.5 * h * (1.0 + GL4_X[slot])
    }
}

/// Boundary radius of `B_r(c)` seen from the origin along direction `theta`, for `|c| < r`.
fn ball_radius_sq(c: [f64; 2], r: f64, theta: f64) -> f64 {
    ball_radius_sq_dir(c, r, (theta.cos(), theta.sin()))
}

fn ball_radius_sq_dir(c: [f64; 2], r: f64, (cos, sin): (f64, f64)) -> f64 {
    let cu = c[0] * cos + c[1] * sin;
    let rho = cu + (r * r - c[0] * c[0] - c[1] * c[1] + cu * cu).sqrt();
    rho * rho
}

fn symdiff(table: &PolarTable, c: [f64; 2], r: f64) -> f64 {
    let h = TAU / CELLS as f64;
    let gap = |t: f64| table.dom.boundary_radius(t).powi(2) - ball_radius_sq(c, r, t);
    let mut total = 0.0;
    for cell in 0..CELLS {
        let a = cell as f64 * h;
        let b = a + h;
        let fa = table.rho_sq[cell * 5 + 4] - ball_radius_sq_dir(c, r, table.cos_sin[cell * 5 + 4]);
        let next = ((cell + 1) % CELLS) * 5 + 4;
        let fb = table.rho_sq[next] - ball_radius_sq_dir(c, r, table.cos_sin[next]);
        if fa * fb >= 0.0 {
            let s: f64 = (0..4)
                .map(|q| GL4_W[q] * (table.rho_sq[cell * 5 + q] - ball_radius_sq_dir(c, r, table.cos_sin[cell * 5 + q])).abs())
                .sum();
            total += 0.5 * h * s;
        } else {
            let (mut lo, mut hi, flo) = (a, b, fa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if gap(mid) * flo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let cross = 0.5 * (lo + hi);
            total += gl4_abs(&gap, a, cross) + gl4_abs(&gap, cross, b);
        }
    }
    0.5 * total
}

fn gl4_abs(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * (0..4).map(|q| GL4_W[q] * f(mid + half * GL4_X[q]).abs()).sum::<f64>()
}

/// `|Omega Δ B_r(c)|`, with `c` in absolute coordinates. The ball must contain
/// the domain's star centre in its interior.
pub fn symmetric_difference_area(dom: &StarDomain2D, center: [f64; 2], r: f64) -> Result<f64> {
    let s = dom.center();
    let c = [center[0] - s[0], center[1] - s[1]];
    if !(r.is_finite() && c[0].hypot(c[1]) < r) {
        return Err(Error::Domain(format!(
            "ball of radius {r} at ({}, {}) must contain the star centre ({}, {})",
            center[0], center[1], s[0], s[1]
        )));
    }
    Ok(symdiff(&PolarTable::new(dom), c, r))
}

/// Fraenkel asymmetry `min_c |Omega Δ B_r(c)| / |B_r|` with `|B_r| = |Omega|`.
///
/// The search starts from an 11x11 grid over a disk of radius `R eps` around
/// the star centre and is refined by Nelder-Mead until the simplex values agree
/// to `tol`.
pub fn fraenkel_asymmetry(dom: &StarDomain2D, tol: f64) -> AsymmetryResult {
    let s = dom.center();
    let volume = dom.volume();
    let r = (volume / PI).sqrt();
    if dom.is_disk() {
        return AsymmetryResult { asymmetry: 0.0, center: s, radius: r };
    }
    let table = PolarTable::new(dom);
    let objective = |c: [f64; 2]| {
        if c[0].hypot(c[1]) >= 0.9 * r {
            return f64::INFINITY;
        }
        symdiff(&table, c, r) / volume
    };
    let mut search = (dom.radius() * dom.eps()).min(0.5 * r);
    let mut widenings = 0;
    loop {
        let step = 2.0 * search / (GRID - 1) as f64;
        let candidates: Vec<[f64; 2]> = (0..GRID * GRID)
            .map(|k| [-search + step * (k % GRID) as f64, -search + step * (k / GRID) as f64])
            .filter(|c| c[0].hypot(c[1]) <= search * (1.0 + 1e-12))
            .collect();
        let values = par::map(&candidates, |&c| objective(c));
        let (best_idx, _) = values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let (c, value) = nelder_mead(&objective, candidates[best_idx], 0.5 * step, tol);
        let on_edge = c[0].hypot(c[1]) > search - 0.5 * step;
        if on_edge && widenings < MAX_WIDENINGS && search < 0.5 * r {
            search = (4.0 * search).min(0.5 * r);
            widenings += 1;
            continue;
        }
        return AsymmetryResult { asymmetry: value.clamp(0.0, 2.0), center: [s[0] + c[0], s[1] + c[1]], radius: r };
    }
}

fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, start: [f64; 2], size: f64, tol: f64) -> ([f64; 2], f64) {
    let mut pts = [start, [start[0] + size, start[1]], [start[0], start[1] + size]];
    let mut vals = pts.map(f);
    for _ in 0..400 {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.map(|i| pts[i]);
        vals = order.map(|i| vals[i]);
        let spread = (pts[2][0] - pts[0][0]).hypot(pts[2][1] - pts[0][1])
            .max((pts[1][0] - pts[0][0]).hypot(pts[1][1] - pts[0][1]));
        if vals[2] - vals[0] <= 0.1 * tol && spread < 1e-3 * size.max(1e-12) {
            break;
        }
        if spread < 1e-14 {
            break;
        }
        let centroid = [0.5 * (pts[0][0] + pts[1][0]), 0.5 * (pts[0][1] + pts[1][1])];
        let along = |t: f64| [centroid[0] + t * (pts[2][0] - centroid[0]), centroid[1] + t * (pts[2][1] - centroid[1])];
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let xc = if fr < vals[2] { along(-0.5) } else { along(0.5) };
            let fc = f(xc);
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    pts[i] = [0.5 * (pts[0][0] + pts[i][0]), 0.5 * (pts[0][1] + pts[i][1])];
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    let i = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (pts[i], vals[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_star_domain, ModeMap};

    #[test]
    fn disk_has_zero_asymmetry() {
        let d = StarDomain2D::disk(1.0).unwrap();
        assert_eq!(fraenkel_asymmetry(&d, 1e-8).asymmetry, 0.0);
    }

    #[test]
    fn offset_disk_symmetric_difference_matches_lens_formula() {
        // two unit disks at distance d overlap in 2 acos(d/2) - (d/2) sqrt(4 - d^2)
        let d = StarDomain2D::disk(1.0).unwrap();
        let dist: f64 = 0.3;
        let lens = 2.0 * (dist / 2.0).acos() - 0.5 * dist * (4.0 - dist * dist).sqrt();
        let got = symmetric_difference_area(&d, [dist, 0.0], 1.0).unwrap();
        assert!((got - 2.0 * (PI - lens)).abs() < 1e-10, "{got}");
    }

    #[test]
    fn cos4_asymmetry_is_linear_in_eps() {
        for eps in [0.02, 0.05, 0.1] {
            let d = make_star_domain(1.0, eps, &ModeMap::from([(4, 1.0)]), true).unwrap();
            let a = fraenkel_asymmetry(&d, 1e-9);
            assert!((a.asymmetry / eps - 4.0 / PI).abs() < 0.02, "eps={eps}: {}", a.asymmetry / eps);
            assert!(a.center[0].hypot(a.center[1]) < 1e-6);
        }
    }
}

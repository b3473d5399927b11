use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use crate::ball_spectrum::BallSpec;
use crate::{Error, Result};

/// Fourier mode number to coefficient.
pub type ModeMap = BTreeMap<u32, f64>;

const MAX_MODE: u32 = 1024;
const STAR_SAMPLES: usize = 1 << 14;

/// `{ c + rho u(theta) : rho < R (1 + eps psi(theta)) }` with
/// `psi = sum c_m cos(m theta) + sum s_m sin(m theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDomain2D {
    radius: f64,
    eps: f64,
    cosine: ModeMap,
    sine: ModeMap,
    symmetric: bool,
    center: [f64; 2],
    min_factor: f64,
}

/// Validated cosine-only domain centred at the origin.
pub fn make_star_domain(radius: f64, eps: f64, coeffs: &ModeMap, symmetric: bool) -> Result<StarDomain2D> {
    StarDomain2D::new(radius, eps, coeffs.clone(), ModeMap::new(), symmetric)
}

impl StarDomain2D {
    pub fn new(radius: f64, eps: f64, cosine: ModeMap, sine: ModeMap, symmetric: bool) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!("R must be positive and finite, got {radius}")));
        }
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(Error::Domain(format!("eps must be non-negative and finite, got {eps}")));
        }
        for (kind, modes) in [("mode", &cosine), ("sine", &sine)] {
            for (&m, &c) in modes {
                if !c.is_finite() {
                    return Err(Error::Domain(format!("{kind} {m} has non-finite coefficient")));
                }
                if m <= 2 {
                    return Err(Error::ModeViolation(format!(
                        "{kind} {m}: modes 0, 1 and 2 are excluded"
                    )));
                }
                if m > MAX_MODE {
                    return Err(Error::ModeViolation(format!("{kind} {m} exceeds {MAX_MODE}")));
                }
            }
        }
        if symmetric {
            if let Some(&m) = sine.keys().next() {
                return Err(Error::ModeViolation(format!("sine {m} breaks the reflection symmetry")));
            }
            if let Some(&m) = cosine.keys().find(|&&m| m % 2 == 1) {
                return Err(Error::ModeViolation(format!("odd mode {m} breaks the reflection symmetry")));
            }
        }
        let mut dom = Self { radius, eps, cosine, sine, symmetric, center: [0.0; 2], min_factor: 1.0 };
        dom.min_factor = dom.min_radial_factor();
        if dom.min_factor <= 0.0 {
            return Err(Error::StarShape { min: dom.min_factor });
        }
        Ok(dom)
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(radius, 0.0, ModeMap::new(), ModeMap::new(), true)
    }

    /// Copy of the domain shifted so its star centre sits at `center`.
    pub fn translated(&self, center: [f64; 2]) -> Self {
        Self { center, ..self.clone() }
    }

    /// `t Omega` about the star centre.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let mut out = Self::new(t * self.radius, self.eps, self.cosine.clone(), self.sine.clone(), self.symmetric)?;
        out.center = [t * self.center[0], t * self.center[1]];
        Ok(out)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn cosine_modes(&self) -> &ModeMap {
        &self.cosine
    }

    pub fn sine_modes(&self) -> &ModeMap {
        &self.sine
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn is_disk(&self) -> bool {
        self.eps == 0.0 || self.cosine.values().chain(self.sine.values()).all(|&c| c == 0.0)
    }

    pub fn psi(&self, theta: f64) -> f64 {
        let c: f64 = self.cosine.iter().map(|(&m, &c)| c * (m as f64 * theta).cos()).sum();
        let s: f64 = self.sine.iter().map(|(&m, &s)| s * (m as f64 * theta).sin()).sum();
        c + s
    }

    pub fn dpsi(&self, theta: f64) -> f64 {
        let c: f64 = self.cosine.iter().map(|(&m, &c)| -(m as f64) * c * (m as f64 * theta).sin()).sum();
        let s: f64 = self.sine.iter().map(|(&m, &s)| m as f64 * s * (m as f64 * theta).cos()).sum();
        c + s
    }

    fn d2psi(&self, theta: f64) -> f64 {
        let c: f64 = self.cosine.iter().map(|(&m, &c)| -((m * m) as f64) * c * (m as f64 * theta).cos()).sum();
        let s: f64 = self.sine.iter().map(|(&m, &s)| -((m * m) as f64) * s * (m as f64 * theta).sin()).sum();
        c + s
    }

    /// `rho(theta) = R (1 + eps psi(theta))`, measured from the star centre.
    pub fn boundary_radius(&self, theta: f64) -> f64 {
        self.radius * (1.0 + self.eps * self.psi(theta))
    }

    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        let rho = self.boundary_radius(theta);
        [self.center[0] + rho * theta.cos(), self.center[1] + rho * theta.sin()]
    }

    /// `min_theta (1 + eps psi)`.
    pub fn min_radial_factor_cached(&self) -> f64 {
        self.min_factor
    }

    fn min_radial_factor(&self) -> f64 {
        if self.eps == 0.0 || self.is_disk() {
            return 1.0;
        }
        let step = TAU / STAR_SAMPLES as f64;
        let values: Vec<f64> = (0..STAR_SAMPLES).map(|i| self.psi(i as f64 * step)).collect();
        let mut best = f64::INFINITY;
        for i in 0..STAR_SAMPLES {
            let prev = values[(i + STAR_SAMPLES - 1) % STAR_SAMPLES];
            let next = values[(i + 1) % STAR_SAMPLES];
            best = best.min(values[i]);
            if values[i] <= prev && values[i] <= next {
                best = best.min(self.refine_min(i as f64 * step, step));
            }
        }
        1.0 + self.eps * best
    }

    /// Newton on `psi'` started at a sampled local minimum, kept inside the cell.
    fn refine_min(&self, theta0: f64, step: f64) -> f64 {
        let mut t = theta0;
        let mut best = self.psi(t);
        for _ in 0..30 {
            let d2 = self.d2psi(t);
            if d2 <= 0.0 {
                break;
            }
            let next = (t - self.dpsi(t) / d2).clamp(theta0 - step, theta0 + step);
            best = best.min(self.psi(next));
            if (next - t).abs() < 1e-15 {
                break;
            }
            t = next;
        }
        best
    }

    /// Exact area `pi R^2 (1 + eps^2 sum (c_m^2 + s_m^2) / 2)`.
    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * (1.0 + 0.5 * self.eps * self.eps * self.energy())
    }

    fn energy(&self) -> f64 {
        self.cosine.values().chain(self.sine.values()).map(|c| c * c).sum()
    }

    /// Origin-centred disk with the same area.
    pub fn equivalent_ball(&self) -> BallSpec {
        BallSpec { n: 2, radius: self.radius * self.t_eps() }
    }

    /// `t_eps = (|Omega| / |B_R|)^{1/2}`.
    pub fn t_eps(&self) -> f64 {
        (1.0 + 0.5 * self.eps * self.eps * self.energy()).sqrt()
    }

    /// `sqrt((1 + eps psi)^2 + eps^2 psi'^2)`.
    pub fn boundary_jacobian(&self, theta: f64) -> f64 {
        let f = 1.0 + self.eps * self.psi(theta);
        let d = self.eps * self.dpsi(theta);
        f.hypot(d)
    }

    /// Parses the key-value domain format:
    ///
    /// ```text
    /// # comment
    /// R = 1.0
    /// eps = 0.05
    /// symmetric = true
    /// mode 4 = 1.0
    /// sine 5 = 0.3
    /// center = 0.1, -0.2
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut radius = None;
        let mut eps = None;
        let mut symmetric = false;
        let mut center = [0.0; 2];
        let mut cosine = ModeMap::new();
        let mut sine = ModeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            let number = |v: &str| -> Result<f64> {
                v.parse::<f64>().map_err(|_| err(format!("`{v}` is not a number")))
            };
            let mut words = key.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("R"), None, None) => radius = Some(number(value)?),
                (Some("eps"), None, None) => eps = Some(number(value)?),
                (Some("symmetric"), None, None) => {
                    symmetric = value
                        .parse::<bool>()
                        .map_err(|_| err(format!("`{value}` is not true/false")))?
                }
                (Some("center"), None, None) => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(err("center needs two comma-separated numbers".into()));
                    }
                    center = [number(parts[0])?, number(parts[1])?];
                }
                (Some(kind @ ("mode" | "sine")), Some(m), None) => {
                    let m: u32 = m.parse().map_err(|_| err(format!("`{m}` is not a mode number")))?;
                    let target = if kind == "mode" { &mut cosine } else { &mut sine };
                    if target.insert(m, number(value)?).is_some() {
                        return Err(err(format!("{kind} {m} given twice")));
                    }
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        let radius = radius.ok_or(Error::Parse { line: 0, msg: "missing `R`".into() })?;
        let eps = eps.unwrap_or(0.0);
        Ok(Self::new(radius, eps, cosine, sine, symmetric)?.translated(center))
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "R = {}", self.radius);
        let _ = writeln!(out, "eps = {}", self.eps);
        let _ = writeln!(out, "symmetric = {}", self.symmetric);
        if self.center != [0.0; 2] {
            let _ = writeln!(out, "center = {}, {}", self.center[0], self.center[1]);
        }
        for (m, c) in &self.cosine {
            let _ = writeln!(out, "mode {m} = {c}");
        }
        for (m, s) in &self.sine {
            let _ = writeln!(out, "sine {m} = {s}");
        }
        out
    }
}

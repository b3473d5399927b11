use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use super::StarDomain2D;
use crate::{Error, Result};

pub const MIN_ANGLE_DEG: f64 = 20.0;

// longest reference edge is about 1.42 ring spacings
const FIRST_GUESS: f64 = 1.45;

/// Vertex permutations induced by `x -> -x` and `y -> -y` about the star centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflections {
    pub flip_x: Vec<usize>,
    pub flip_y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary polygon in counter-clockwise order, so the outward normal is on the right.
    pub boundary_edges: Vec<[usize; 2]>,
    /// Point of the exact boundary curve at the mid-angle of each boundary edge.
    pub boundary_midpoints: Vec<[f64; 2]>,
    /// Longest edge.
    pub h: f64,
    pub reflections: Option<Reflections>,
}

/// Ring layout: ring `i` (radius `R i / N`) carries `4 q_i` equally spaced nodes.
struct Rings {
    q: Vec<usize>,
    offset: Vec<usize>,
}

impl Rings {
    fn new(n: usize) -> Self {
        let mut q = vec![0; n + 1];
        let mut offset = vec![0; n + 2];
        offset[1] = 1;
        for i in 1..=n {
            q[i] = (std::f64::consts::PI * i as f64 / 2.0).ceil() as usize;
            offset[i + 1] = offset[i] + 4 * q[i];
        }
        Self { q, offset }
    }

    fn count(&self) -> usize {
        *self.offset.last().unwrap_or(&1)
    }

    fn id(&self, ring: usize, k: usize) -> usize {
        if ring == 0 {
            0
        } else {
            self.offset[ring] + k % (4 * self.q[ring])
        }
    }

    fn flip_x(&self, ring: usize, k: usize) -> usize {
        let m = 4 * self.q[ring];
        (2 * self.q[ring] + m - k % m) % m
    }

    fn flip_y(&self, ring: usize, k: usize) -> usize {
        let m = 4 * self.q[ring];
        (m - k % m) % m
    }
}

/// Quadrant-I connectivity as `(ring, k)` triples, angles `k <= q_ring`.
fn quadrant_triangles(rings: &Rings, n: usize, at: impl Fn(usize, usize) -> [f64; 2]) -> Vec<[(usize, usize); 3]> {
    let mut tris = Vec::new();
    for k in 0..rings.q[1] {
        tris.push([(0, 0), (1, k), (1, k + 1)]);
    }
    for i in 1..n {
        zip_strip(i, rings.q[i], rings.q[i + 1], &at, &mut tris);
    }
    tris
}

const STRIP_BAND: usize = 6;

/// Triangulates the strip between rings `i` and `i+1` over one quadrant.
///
/// Every triangulation of the strip is a monotone lattice path from `(0, 0)`
/// to `(qa, qb)`; the path minimising `sum 1 / theta_min^2` over its triangles
/// is found by dynamic programming in a band around the diagonal.
fn zip_strip(
    i: usize,
    qa: usize,
    qb: usize,
    at: &impl Fn(usize, usize) -> [f64; 2],
    tris: &mut Vec<[(usize, usize); 3]>,
) {
    let band = |ka: usize| {
        let centre = ka as f64 * qb as f64 / qa as f64;
        let lo = (centre - STRIP_BAND as f64).floor().max(0.0) as usize;
        let hi = ((centre + STRIP_BAND as f64).ceil() as usize).min(qb);
        (lo, hi)
    };
    let cost = |t: [(usize, usize); 3]| {
        let th = min_angle(at(t[0].0, t[0].1), at(t[1].0, t[1].1), at(t[2].0, t[2].1));
        1.0 / (th * th)
    };
    // best[ka][kb - lo(ka)] and whether the last step advanced the inner ring
    let mut best: Vec<Vec<(f64, bool)>> = Vec::with_capacity(qa + 1);
    let lookup = |best: &Vec<Vec<(f64, bool)>>, ka: usize, kb: usize| -> f64 {
        let (lo, hi) = band(ka);
        if kb < lo || kb > hi || ka >= best.len() {
            f64::INFINITY
        } else {
            best[ka][kb - lo].0
        }
    };
    for ka in 0..=qa {
        let (lo, hi) = band(ka);
        let mut row = Vec::with_capacity(hi - lo + 1);
        for kb in lo..=hi {
            if ka == 0 && kb == 0 {
                row.push((0.0, false));
                continue;
            }
            let mut entry = (f64::INFINITY, false);
            if ka > 0 {
                let prev = lookup(&best, ka - 1, kb);
                if prev.is_finite() {
                    entry = (prev + cost([(i, ka - 1), (i + 1, kb), (i, ka)]), true);
                }
            }
            if kb > lo {
                let prev: f64 = row[kb - 1 - lo].0;
                if prev.is_finite() {
                    let c = prev + cost([(i, ka), (i + 1, kb - 1), (i + 1, kb)]);
                    if c < entry.0 {
                        entry = (c, false);
                    }
                }
            }
            row.push(entry);
        }
        best.push(row);
    }
    let mut path = Vec::with_capacity(qa + qb);
    let (mut ka, mut kb) = (qa, qb);
    while ka > 0 || kb > 0 {
        let (lo, _) = band(ka);
        if best[ka][kb - lo].1 {
            path.push([(i, ka - 1), (i + 1, kb), (i, ka)]);
            ka -= 1;
        } else {
            path.push([(i, ka), (i + 1, kb - 1), (i + 1, kb)]);
            kb -= 1;
        }
    }
    tris.extend(path.into_iter().rev());
}

fn min_angle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let p = [a, b, c];
    (0..3)
        .map(|j| {
            let (o, u, v) = (p[j], p[(j + 1) % 3], p[(j + 2) % 3]);
            let u = [u[0] - o[0], u[1] - o[1]];
            let v = [v[0] - o[0], v[1] - o[1]];
            (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1])
        })
        .fold(f64::INFINITY, f64::min)
}

fn orient(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - p[0]) * (b[1] - p[1]) - (a[1] - p[1]) * (b[0] - p[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Builds a ring mesh of the domain with `n` rings.
///
/// Nodes of the reference disk are pushed radially onto the domain,
/// `x -> x (1 + eps psi(theta))`, so boundary nodes land exactly on the curve.
/// Quadrants II-IV are mirror images of quadrant I, which makes the mesh
/// invariant under both coordinate reflections.
pub fn triangulate_rings(dom: &StarDomain2D, n: usize) -> Result<TriMesh> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 rings, got {n}")));
    }
    let rings = Rings::new(n);
    let c = dom.center();
    let r0 = dom.radius();
    let mut local = vec![[0.0; 2]; rings.count()];
    let mut mid_local = vec![[0.0; 2]; 4 * rings.q[n]];
    let symmetric = dom.symmetric();
    let position = |ring: usize, k: f64| -> [f64; 2] {
        let theta = FRAC_PI_2 * k / rings.q[ring] as f64;
        let rho = r0 * ring as f64 / n as f64 * (1.0 + dom.eps() * dom.psi(theta));
        // nodes on the axes must be their own mirror images
        if k == 0.0 {
            [rho, 0.0]
        } else if k == rings.q[ring] as f64 {
            [0.0, rho]
        } else {
            [rho * theta.cos(), rho * theta.sin()]
        }
    };
    for ring in 1..=n {
        let q = rings.q[ring];
        for k in 0..4 * q {
            local[rings.id(ring, k)] = if symmetric {
                mirrored(k, q, |j| position(ring, j as f64))
            } else {
                position(ring, k as f64)
            };
        }
    }
    let qn = rings.q[n];
    for k in 0..4 * qn {
        // edge k runs from node k to k+1; mirror edge index via its midpoint angle
        mid_local[k] = if symmetric {
            mirrored_edge(k, qn, |j| position(n, j as f64 + 0.5))
        } else {
            position(n, k as f64 + 0.5)
        };
    }

    let to_quadrant = |quad: usize, ring: usize, k: usize| match quad {
        0 => k,
        1 => rings.flip_x(ring, k),
        2 => rings.flip_x(ring, rings.flip_y(ring, k)),
        _ => rings.flip_y(ring, k),
    };
    let connectivity = |quad: usize| {
        quadrant_triangles(&rings, n, |ring, k| local[rings.id(ring, to_quadrant(quad, ring, k))])
    };
    let first = connectivity(0);
    let mut triangles = Vec::with_capacity(4 * first.len());
    for quad in 0..4 {
        // a symmetric domain reuses the quadrant-I choice so the mesh mirrors exactly
        let own;
        let conn = if symmetric || quad == 0 {
            &first
        } else {
            own = connectivity(quad);
            &own
        };
        for tri in conn {
            let ids = tri.map(|(ring, k)| if ring == 0 { 0 } else { rings.id(ring, to_quadrant(quad, ring, k)) });
            let t = if orient(local[ids[0]], local[ids[1]], local[ids[2]]) < 0.0 {
                [ids[0], ids[2], ids[1]]
            } else {
                ids
            };
            triangles.push(t);
        }
    }

    let boundary_edges: Vec<[usize; 2]> =
        (0..4 * qn).map(|k| [rings.id(n, k), rings.id(n, k + 1)]).collect();
    let reflections = symmetric.then(|| {
        let mut flip_x = vec![0; rings.count()];
        let mut flip_y = vec![0; rings.count()];
        for ring in 1..=n {
            for k in 0..4 * rings.q[ring] {
                flip_x[rings.id(ring, k)] = rings.id(ring, rings.flip_x(ring, k));
                flip_y[rings.id(ring, k)] = rings.id(ring, rings.flip_y(ring, k));
            }
        }
        Reflections { flip_x, flip_y }
    });

    let shift = |p: [f64; 2]| [p[0] + c[0], p[1] + c[1]];
    let vertices: Vec<[f64; 2]> = local.into_iter().map(shift).collect();
    let boundary_midpoints = mid_local.into_iter().map(shift).collect();
    let mut mesh = TriMesh { vertices, triangles, boundary_edges, boundary_midpoints, h: 0.0, reflections };
    mesh.h = mesh.max_edge();
    mesh.check_quality()?;
    Ok(mesh)
}

/// Position of node `k` of a ring with `4q` nodes, derived from quadrant I by reflection.
fn mirrored(k: usize, q: usize, quadrant_one: impl Fn(usize) -> [f64; 2]) -> [f64; 2] {
    if k <= q {
        quadrant_one(k)
    } else if k <= 2 * q {
        let p = quadrant_one(2 * q - k);
        [-p[0], p[1]]
    } else {
        let p = mirrored(4 * q - k, q, quadrant_one);
        [p[0], -p[1]]
    }
}

/// Same for edge midpoints, edge `k` sitting at angle index `k + 1/2`.
fn mirrored_edge(k: usize, q: usize, quadrant_one: impl Fn(usize) -> [f64; 2]) -> [f64; 2] {
    if k < q {
        quadrant_one(k)
    } else if k < 2 * q {
        let p = quadrant_one(2 * q - 1 - k);
        [-p[0], p[1]]
    } else {
        let p = mirrored_edge(4 * q - 1 - k, q, quadrant_one);
        [p[0], -p[1]]
    }
}

/// Mesh of the domain with every edge no longer than `h_target`.
pub fn triangulate(dom: &StarDomain2D, h_target: f64) -> Result<TriMesh> {
    if !(h_target > 0.0 && h_target < dom.radius() / 4.0) {
        return Err(Error::InvalidArgument(format!(
            "mesh size must lie in (0, R/4) = (0, {}), got {h_target}",
            dom.radius() / 4.0
        )));
    }
    let mut n = (FIRST_GUESS * dom.radius() / h_target).ceil() as usize;
    for _ in 0..20 {
        let mesh = triangulate_rings(dom, n)?;
        if mesh.h <= h_target {
            return Ok(mesh);
        }
        let grow = ((n as f64 * mesh.h / h_target * 1.01).ceil() as usize).max(n + 1);
        n = grow;
    }
    Err(Error::DegenerateElement(format!("could not reach mesh size {h_target}")))
}

impl TriMesh {
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |j| [t[j], t[(j + 1) % 3]]))
            .map(|[a, b]| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * orient(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Area of the straight-sided triangulation.
    pub fn polygon_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Area with each boundary edge replaced by the parabola through its midpoint.
    pub fn curved_area(&self) -> f64 {
        let bulge: f64 = self
            .boundary_edges
            .iter()
            .zip(&self.boundary_midpoints)
            .map(|(&[a, b], &m)| {
                let (pa, pb) = (self.vertices[a], self.vertices[b]);
                let chord_mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
                let chord = [pb[0] - pa[0], pb[1] - pa[1]];
                let off = [m[0] - chord_mid[0], m[1] - chord_mid[1]];
                // outward offsets are on the right of the chord
                -(2.0 / 3.0) * (chord[0] * off[1] - chord[1] * off[0])
            })
            .sum();
        self.polygon_area() + bulge
    }

    pub fn perimeter(&self) -> f64 {
        self.boundary_edges.iter().map(|&[a, b]| dist(self.vertices[a], self.vertices[b])).sum()
    }

    pub fn min_angle_deg(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| min_angle(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    fn check_quality(&self) -> Result<()> {
        if let Some(t) = (0..self.triangles.len()).find(|&t| self.triangle_area(t) <= 0.0) {
            return Err(Error::DegenerateElement(format!("triangle {t} has non-positive area")));
        }
        let worst = self.min_angle_deg();
        if worst < MIN_ANGLE_DEG {
            return Err(Error::DegenerateElement(format!(
                "minimum angle {worst:.2} deg is below {MIN_ANGLE_DEG} deg"
            )));
        }
        Ok(())
    }

    /// Mesh stretched by `t` about the origin.
    pub fn scaled(&self, t: f64) -> Self {
        let s = |p: &[f64; 2]| [t * p[0], t * p[1]];
        Self {
            vertices: self.vertices.iter().map(s).collect(),
            boundary_midpoints: self.boundary_midpoints.iter().map(s).collect(),
            h: t * self.h,
            ..self.clone()
        }
    }

    /// Plain-text dump with `vertices`, `triangles` and `boundary_edges` sections.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "vertices {}", self.vertices.len())?;
        for p in &self.vertices {
            writeln!(w, "{:.17e} {:.17e}", p[0], p[1])?;
        }
        writeln!(w, "triangles {}", self.triangles.len())?;
        for t in &self.triangles {
            writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
        }
        writeln!(w, "boundary_edges {}", self.boundary_edges.len())?;
        for e in &self.boundary_edges {
            writeln!(w, "{} {}", e[0], e[1])?;
        }
        Ok(())
    }
}

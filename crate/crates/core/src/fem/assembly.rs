use std::collections::HashMap;

use super::sparse::CsrMatrix;
use crate::ball_spectrum::RobinParameter;
use crate::geometry::TriMesh;
use crate::par;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementOrder {
    Linear,
    Quadratic,
}

impl ElementOrder {
    /// Convergence order of eigenvalues under uniform refinement.
    pub fn eigenvalue_rate(self) -> f64 {
        match self {
            Self::Linear => 2.0,
            Self::Quadratic => 4.0,
        }
    }
}

impl TryFrom<u8> for ElementOrder {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            1 => Ok(Self::Linear),
            2 => Ok(Self::Quadratic),
            _ => Err(Error::InvalidArgument(format!("element order must be 1 or 2, got {order}"))),
        }
    }
}

/// Permutations of the degrees of freedom under the two mesh reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofReflections {
    pub flip_x: Vec<usize>,
    pub flip_y: Vec<usize>,
}

/// Generalised eigenproblem `A v = lambda M v` with `A = K + alpha B`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub a: CsrMatrix,
    pub m: CsrMatrix,
    pub dof_count: usize,
    pub order: ElementOrder,
    pub alpha: f64,
    stiffness: CsrMatrix,
    boundary_mass: CsrMatrix,
    dof_points: Vec<[f64; 2]>,
    reflections: Option<DofReflections>,
}

impl DiscreteOperator {
    /// Same discretisation with a different boundary parameter.
    pub fn with_alpha(&self, alpha: RobinParameter) -> Self {
        Self {
            a: self.stiffness.combine(1.0, &self.boundary_mass, alpha.value()),
            alpha: alpha.value(),
            ..self.clone()
        }
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn boundary_mass(&self) -> &CsrMatrix {
        &self.boundary_mass
    }

    /// Location of each nodal degree of freedom.
    pub fn dof_points(&self) -> &[[f64; 2]] {
        &self.dof_points
    }

    pub fn reflections(&self) -> Option<&DofReflections> {
        self.reflections.as_ref()
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
        self.dof_points.iter().map(|&p| f(p)).collect()
    }
}

type Local<const N: usize> = ([usize; N], [[f64; N]; N], [[f64; N]; N]);

/// Assembles stiffness, volume mass and boundary mass.
///
/// Quadratic elements are isoparametric: triangles touching the boundary use
/// the curve point stored in `boundary_midpoints` as the node of their
/// boundary edge, so the discrete boundary follows the curve to third order.
pub fn assemble(mesh: &TriMesh, alpha: RobinParameter, order: ElementOrder) -> Result<DiscreteOperator> {
    let alpha = RobinParameter::new(alpha.value())?;
    if mesh.triangles.is_empty() {
        return Err(Error::Assembly("mesh has no triangles".into()));
    }
    let (stiffness, mass, boundary_mass, dof_points, reflections) = match order {
        ElementOrder::Linear => assemble_linear(mesh)?,
        ElementOrder::Quadratic => assemble_quadratic(mesh)?,
    };
    Ok(DiscreteOperator {
        a: stiffness.combine(1.0, &boundary_mass, alpha.value()),
        m: mass,
        dof_count: dof_points.len(),
        order,
        alpha: alpha.value(),
        stiffness,
        boundary_mass,
        dof_points,
        reflections,
    })
}

type Parts = (CsrMatrix, CsrMatrix, CsrMatrix, Vec<[f64; 2]>, Option<DofReflections>);

fn scatter<const N: usize>(n: usize, locals: &[Local<N>]) -> (CsrMatrix, CsrMatrix) {
    let mut k = Vec::with_capacity(locals.len() * N * N);
    let mut m = Vec::with_capacity(locals.len() * N * N);
    for (ids, kl, ml) in locals {
        for a in 0..N {
            for b in 0..N {
                k.push((ids[a], ids[b], kl[a][b]));
                m.push((ids[a], ids[b], ml[a][b]));
            }
        }
    }
    (CsrMatrix::from_triplets(n, &k), CsrMatrix::from_triplets(n, &m))
}

fn assemble_linear(mesh: &TriMesh) -> Result<Parts> {
    let v = &mesh.vertices;
    let locals = par::map_range(mesh.triangles.len(), |t| -> Result<Local<3>> {
        let ids = mesh.triangles[t];
        let p = ids.map(|i| v[i]);
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
        if area <= 0.0 {
            return Err(Error::Assembly(format!("triangle {t} is inverted or degenerate (area {area:e})")));
        }
        // grad phi_i = (b_i, c_i) / (2 area)
        let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
        let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
        let mut kl = [[0.0; 3]; 3];
        let mut ml = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                kl[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
                ml[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
            }
        }
        Ok((ids, kl, ml))
    });
    let locals: Vec<Local<3>> = locals.into_iter().collect::<Result<_>>()?;
    let n = v.len();
    let (k, m) = scatter(n, &locals);
    let mut b = Vec::with_capacity(4 * mesh.boundary_edges.len());
    for &[i, j] in &mesh.boundary_edges {
        let len = (v[i][0] - v[j][0]).hypot(v[i][1] - v[j][1]);
        b.extend([(i, i, len / 3.0), (i, j, len / 6.0), (j, i, len / 6.0), (j, j, len / 3.0)]);
    }
    let reflections = mesh
        .reflections
        .as_ref()
        .map(|r| DofReflections { flip_x: r.flip_x.clone(), flip_y: r.flip_y.clone() });
    Ok((k, m, CsrMatrix::from_triplets(n, &b), v.clone(), reflections))
}

/// Symmetric 7-point rule of degree 5 on the reference triangle (weights sum to 1/2).
fn triangle_rule() -> [([f64; 2], f64); 7] {
    let s = 15f64.sqrt();
    let (a1, w1) = ((6.0 - s) / 21.0, (155.0 - s) / 2400.0);
    let (a2, w2) = ((6.0 + s) / 21.0, (155.0 + s) / 2400.0);
    let (b1, b2) = (1.0 - 2.0 * a1, 1.0 - 2.0 * a2);
    [
        ([1.0 / 3.0, 1.0 / 3.0], 9.0 / 80.0),
        ([a1, a1], w1),
        ([b1, a1], w1),
        ([a1, b1], w1),
        ([a2, a2], w2),
        ([b2, a2], w2),
        ([a2, b2], w2),
    ]
}

/// Values and reference gradients of the six quadratic shape functions;
/// nodes are the vertices followed by the midpoints of edges 01, 12, 20.
fn quadratic_shapes(xi: f64, eta: f64) -> ([f64; 6], [[f64; 2]; 6]) {
    let l = [1.0 - xi - eta, xi, eta];
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let mut n = [0.0; 6];
    let mut g = [[0.0; 2]; 6];
    for i in 0..3 {
        n[i] = l[i] * (2.0 * l[i] - 1.0);
        g[i] = [(4.0 * l[i] - 1.0) * dl[i][0], (4.0 * l[i] - 1.0) * dl[i][1]];
        let j = (i + 1) % 3;
        n[3 + i] = 4.0 * l[i] * l[j];
        g[3 + i] = [4.0 * (l[i] * dl[j][0] + l[j] * dl[i][0]), 4.0 * (l[i] * dl[j][1] + l[j] * dl[i][1])];
    }
    (n, g)
}

const EDGE_GAUSS: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Copies the upper triangle into the lower one so local matrices are exactly symmetric.
fn mirror_upper<const N: usize>(m: &mut [[f64; N]; N]) {
    for i in 0..N {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn assemble_quadratic(mesh: &TriMesh) -> Result<Parts> {
    let v = &mesh.vertices;
    let nv = v.len();
    let curved: HashMap<(usize, usize), [f64; 2]> = mesh
        .boundary_edges
        .iter()
        .zip(&mesh.boundary_midpoints)
        .map(|(&[a, b], &m)| (edge_key(a, b), m))
        .collect();
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut dof_points = v.clone();
    let mut element_dofs = Vec::with_capacity(mesh.triangles.len());
    for t in &mesh.triangles {
        let mut ids = [0usize; 6];
        ids[..3].copy_from_slice(t);
        for i in 0..3 {
            let key = edge_key(t[i], t[(i + 1) % 3]);
            let next = nv + edge_index.len();
            let id = *edge_index.entry(key).or_insert_with(|| {
                let (a, b) = (v[key.0], v[key.1]);
                dof_points.push(curved.get(&key).copied().unwrap_or([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]));
                next
            });
            ids[3 + i] = id;
        }
        element_dofs.push(ids);
    }
    let n = dof_points.len();
    let rule = triangle_rule();
    let shapes: Vec<_> = rule.iter().map(|&([x, y], w)| (quadratic_shapes(x, y), w)).collect();
    let locals = par::map_range(element_dofs.len(), |t| -> Result<Local<6>> {
        let ids = element_dofs[t];
        let x = ids.map(|i| dof_points[i]);
        let mut kl = [[0.0; 6]; 6];
        let mut ml = [[0.0; 6]; 6];
        for ((n_ref, g_ref), w) in &shapes {
            let mut jac = [[0.0; 2]; 2];
            for i in 0..6 {
                for r in 0..2 {
                    for c in 0..2 {
                        jac[r][c] += x[i][r] * g_ref[i][c];
                    }
                }
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det <= 0.0 {
                return Err(Error::Assembly(format!("element {t} has non-positive Jacobian {det:e}")));
            }
            // physical gradient = J^{-T} reference gradient
            let grads: [[f64; 2]; 6] = g_ref.map(|g| {
                [(jac[1][1] * g[0] - jac[1][0] * g[1]) / det, (-jac[0][1] * g[0] + jac[0][0] * g[1]) / det]
            });
            let wd = w * det;
            for i in 0..6 {
                for j in i..6 {
                    kl[i][j] += wd * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                    ml[i][j] += wd * n_ref[i] * n_ref[j];
                }
            }
        }
        mirror_upper(&mut kl);
        mirror_upper(&mut ml);
        Ok((ids, kl, ml))
    });
    let locals: Vec<Local<6>> = locals.into_iter().collect::<Result<_>>()?;
    let (k, m) = scatter(n, &locals);

    let mut b = Vec::with_capacity(9 * mesh.boundary_edges.len());
    for (&[i, j], &mid) in mesh.boundary_edges.iter().zip(&mesh.boundary_midpoints) {
        let ids = [i, edge_index[&edge_key(i, j)], j];
        let pts = [v[i], mid, v[j]];
        let mut local = [[0.0; 3]; 3];
        for &(s, w) in &EDGE_GAUSS {
            let l = [(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)];
            let dl = [4.0 * s - 3.0, 4.0 - 8.0 * s, 4.0 * s - 1.0];
            let dx: f64 = (0..3).map(|q| dl[q] * pts[q][0]).sum();
            let dy: f64 = (0..3).map(|q| dl[q] * pts[q][1]).sum();
            let speed = dx.hypot(dy);
            for a in 0..3 {
                for c in a..3 {
                    local[a][c] += w * speed * l[a] * l[c];
                }
            }
        }
        mirror_upper(&mut local);
        for a in 0..3 {
            for c in 0..3 {
                b.push((ids[a], ids[c], local[a][c]));
            }
        }
    }

    let reflections = mesh.reflections.as_ref().map(|r| {
        let extend = |flip: &Vec<usize>| {
            let mut out: Vec<usize> = flip.clone();
            out.resize(n, 0);
            for (&(a, c), &id) in &edge_index {
                out[id] = edge_index[&edge_key(flip[a], flip[c])];
            }
            out
        };
        DofReflections { flip_x: extend(&r.flip_x), flip_y: extend(&r.flip_y) }
    });
    Ok((k, m, CsrMatrix::from_triplets(n, &b), dof_points, reflections))
}

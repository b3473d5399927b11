use std::ops::Range;

use faer::{Mat, Side};

use super::{DiscreteOperator, SpectrumResult};
use crate::{Error, Result};

/// Relative gap below which neighbouring eigenvalues are treated as one cluster.
pub const CLUSTER_GAP: f64 = 1e-3;

/// Coordinate reflection: `X` is `x -> -x`, `Y` is `y -> -y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (b - a).abs() / a.abs().max(b.abs()).max(1e-12)
}

/// Indices of the eigenvalues clustered with `lambda_2`.
///
/// Fails when the cluster cannot be separated from `lambda_1` or runs into
/// the last computed eigenvalue, since its extent is then unknown.
pub fn lambda2_cluster(eigenvalues: &[f64]) -> Result<Range<usize>> {
    if eigenvalues.len() < 3 {
        return Err(Error::Cluster("need at least three eigenvalues".into()));
    }
    if relative_gap(eigenvalues[0], eigenvalues[1]) <= CLUSTER_GAP {
        return Err(Error::Cluster("lambda_2 is not separated from lambda_1".into()));
    }
    let mut end = 2;
    while end < eigenvalues.len() && relative_gap(eigenvalues[end - 1], eigenvalues[end]) <= CLUSTER_GAP {
        end += 1;
    }
    if end == eigenvalues.len() {
        return Err(Error::Cluster(format!(
            "cluster reaches the last of {} computed eigenvalues",
            eigenvalues.len()
        )));
    }
    Ok(1..end)
}

/// `min |v + v∘reflection|_M / |v|_M` over the `lambda_2` eigenspace.
///
/// Zero means the eigenspace contains a function odd under the reflection;
/// an even function gives 2.
pub fn antisymmetry_defect(res: &SpectrumResult, op: &DiscreteOperator, axis: Axis) -> Result<f64> {
    let refl = op
        .reflections()
        .ok_or_else(|| Error::InvalidArgument("mesh was not built with reflection symmetry".into()))?;
    let perm = match axis {
        Axis::X => &refl.flip_x,
        Axis::Y => &refl.flip_y,
    };
    let cluster = lambda2_cluster(&res.eigenvalues)?;
    let vs = &res.eigenvectors[cluster.clone()];
    let sym: Vec<Vec<f64>> = vs.iter().map(|v| (0..v.len()).map(|i| v[i] + v[perm[i]]).collect()).collect();
    let msym: Vec<Vec<f64>> = sym.iter().map(|w| op.m.mul_vec(w)).collect();
    let c = vs.len();
    // generalised Rayleigh quotient against the Gram matrix of the cluster
    let gram = Mat::from_fn(c, c, |i, j| {
        let mi = op.m.mul_vec(&vs[j]);
        vs[i].iter().zip(&mi).map(|(a, b)| a * b).sum::<f64>()
    });
    let w = Mat::from_fn(c, c, |i, j| sym[i].iter().zip(&msym[j]).map(|(a, b)| a * b).sum::<f64>());
    let llt = gram
        .llt(Side::Lower)
        .map_err(|_| Error::Cluster("cluster vectors are linearly dependent".into()))?;
    let l = llt.L();
    let mut x = w.clone();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, x.as_mut(), faer::Par::Seq);
    let mut y = x.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, y.as_mut(), faer::Par::Seq);
    let reduced = Mat::from_fn(c, c, |i, j| 0.5 * (y[(i, j)] + y[(j, i)]));
    let eig = reduced
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Cluster("eigendecomposition of the reflected Gram matrix failed".into()))?;
    Ok(eig.S()[0].max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_detection() {
        assert_eq!(lambda2_cluster(&[-1.0, 2.0, 2.0005, 5.0]).unwrap(), 1..3);
        assert_eq!(lambda2_cluster(&[-1.0, 2.0, 3.0, 5.0]).unwrap(), 1..2);
        assert!(lambda2_cluster(&[1.0, 1.0001, 3.0]).is_err());
        assert!(lambda2_cluster(&[-1.0, 2.0, 2.0]).is_err());
    }
}

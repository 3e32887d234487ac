//! Eigendecomposition of symmetric 3×3 matrices by cyclic Jacobi rotations.
//!
//! Small, dependency-free, and accurate to near machine precision — all
//! this crate needs for extracting the principal oscillation direction
//! from an estimated tidal tensor.

/// Result of [`jacobi_eigen`]: `values[k]` belongs to the unit eigenvector
/// stored in column `k` of `vectors` (`vectors[i][k]`).
#[derive(Debug, Clone, Copy)]
pub struct SymmetricEigen3 {
    pub values: [f64; 3],
    pub vectors: [[f64; 3]; 3],
}

fn off_diagonal_norm(a: &[[f64; 3]; 3]) -> f64 {
    (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt()
}

/// Diagonalizes a symmetric 3×3 matrix with cyclic Jacobi sweeps, rotating
/// until the off-diagonal norm falls below `1e-13 · max(1, ‖A‖_F)`.
///
/// Only the upper triangle of `a` is read.
pub fn jacobi_eigen(a: &[[f64; 3]; 3]) -> SymmetricEigen3 {
    let mut m = [
        [a[0][0], a[0][1], a[0][2]],
        [a[0][1], a[1][1], a[1][2]],
        [a[0][2], a[1][2], a[2][2]],
    ];
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    let frobenius = {
        let mut s = 0.0;
        for row in &m {
            for x in row {
                s += x * x;
            }
        }
        s.sqrt()
    };
    let threshold = 1e-13 * frobenius.max(1.0);

    for _sweep in 0..64 {
        if off_diagonal_norm(&m) <= threshold {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = m[p][q];
            if apq == 0.0 {
                continue;
            }
            // Classic Jacobi rotation annihilating m[p][q].
            let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            let (mpp, mqq) = (m[p][p], m[q][q]);
            m[p][p] = mpp - t * apq;
            m[q][q] = mqq + t * apq;
            m[p][q] = 0.0;
            m[q][p] = 0.0;
            let r = 3 - p - q; // the remaining index
            let (mrp, mrq) = (m[r][p], m[r][q]);
            m[r][p] = c * mrp - s * mrq;
            m[p][r] = m[r][p];
            m[r][q] = s * mrp + c * mrq;
            m[q][r] = m[r][q];

            for row in &mut v {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }

    SymmetricEigen3 {
        values: [m[0][0], m[1][1], m[2][2]],
        vectors: v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &SymmetricEigen3) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m[i][j] += e.vectors[i][k] * e.values[k] * e.vectors[j][k];
                }
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let a = [[2.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.5]];
        let e = jacobi_eigen(&a);
        let mut vals = e.values;
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, [-1.0, 0.5, 2.0]);
    }

    #[test]
    fn reconstructs_dense_symmetric() {
        let a = [[1.0, 0.3, -0.2], [0.3, 2.0, 0.5], [-0.2, 0.5, -1.5]];
        let e = jacobi_eigen(&a);
        let r = reconstruct(&e);
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (r[i][j] - a[i][j]).abs() < 1e-12,
                    "entry ({i},{j}): {} vs {}",
                    r[i][j],
                    a[i][j]
                );
            }
        }
        // Eigenvectors orthonormal.
        for k in 0..3 {
            for l in 0..3 {
                let dot: f64 = (0..3).map(|i| e.vectors[i][k] * e.vectors[i][l]).sum();
                let want = if k == l { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn known_rotation_recovers_axis() {
        // Rotate diag(1, -0.5, -0.5) by 45° about y; the large-eigenvalue
        // axis must come back as (cos45, 0, -sin45) up to sign.
        let (c, s) = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        // R diag R^T with R = rotation about y.
        let d = [1.0, -0.5, -0.5];
        let r = [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]];
        let mut a = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    a[i][j] += r[i][k] * d[k] * r[j][k];
                }
            }
        }
        let e = jacobi_eigen(&a);
        let kmax = (0..3)
            .max_by(|&i, &j| e.values[i].abs().total_cmp(&e.values[j].abs()))
            .unwrap();
        assert!((e.values[kmax] - 1.0).abs() < 1e-12);
        let axis = [e.vectors[0][kmax], e.vectors[1][kmax], e.vectors[2][kmax]];
        let dot = (axis[0] * c - axis[2] * s).abs();
        assert!((dot - 1.0).abs() < 1e-10, "axis misaligned: {axis:?}");
    }
}

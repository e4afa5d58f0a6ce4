use super::SymMatrix;

/// Eigenvalues in ascending order with the matching unit eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Frobenius norm of the off-diagonal part when the sweeps stopped.
    pub residual: f64,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi rotations, sweeping pairs `(i, j)` with `i < j` in row order.
pub fn eigen_sym(a: &SymMatrix) -> Eigen {
    let d = a.dim();
    let mut m: Vec<Vec<f64>> = a.rows();
    let mut v: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let off = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off(&m) <= 1e-14 * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..d {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let residual = off(&m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| m[x][x].total_cmp(&m[y][y]));
    Eigen {
        values: order.iter().map(|&k| m[k][k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..d).map(|i| v[i][k]).collect())
            .collect(),
        residual,
    }
}

impl Eigen {
    /// `sum_k h(values[k]) v_k v_k^T`.
    pub fn apply(&self, h: impl Fn(f64) -> f64) -> SymMatrix {
        let d = self.values.len();
        let mut out = vec![vec![0.0; d]; d];
        for (lambda, e) in self.values.iter().zip(&self.vectors) {
            let w = h(*lambda);
            for i in 0..d {
                for j in 0..d {
                    out[i][j] += w * e[i] * e[j];
                }
            }
        }
        // Average the two triangles so the result is symmetric to the last bit.
        for i in 0..d {
            for j in 0..i {
                let s = 0.5 * (out[i][j] + out[j][i]);
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        SymMatrix::from_rows_unchecked(out)
    }

    /// Largest deviation of the frame from orthonormality.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, u) in self.vectors.iter().enumerate() {
            for (b, w) in self.vectors.iter().enumerate() {
                let dot: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
                worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }
}

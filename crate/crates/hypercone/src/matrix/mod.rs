//! Spectral norms on positive semidefinite real symmetric matrices and their trace duality.
//!
//! `||A||_p` is the norm of the spectrum of `A` under the uniform probability on
//! `{1, ..., d}`, so it inherits the conventions of [`crate::hypernorm`]. The pairing is
//! `(1/d) Tr(AB)`.

mod eigen;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypernorm::{norm_f64, LpTag};

pub use eigen::{eigen_sym, Eigen};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;
/// Eigenvalues above `-PSD_SLACK` count as nonnegative.
pub const PSD_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymMatrix {
    d: usize,
    entries: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for SymMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        SymMatrix::new(rows)
    }
}

impl From<SymMatrix> for Vec<Vec<f64>> {
    fn from(a: SymMatrix) -> Self {
        a.rows()
    }
}

impl SymMatrix {
    /// Rows must form an exactly symmetric square of finite numbers.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Input("empty matrix".into()));
        }
        if d > MAX_DIM {
            return Err(Error::ProblemTooLarge(MAX_DIM));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                found: r.len(),
            });
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        if (0..d).any(|i| (0..i).any(|j| rows[i][j] != rows[j][i])) {
            return Err(Error::NotSymmetric);
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Self {
        SymMatrix {
            d: rows.len(),
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_rows_unchecked(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| if i == j { values[i] } else { 0.0 })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn identity(d: usize) -> Self {
        Self::diag(&vec![1.0; d])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &SymMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix {
            d: self.d,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            d: self.d,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// `Tr(AB)`, which for symmetric matrices is the entrywise inner product.
    pub fn trace_product(&self, other: &SymMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `(1/d) Tr(AB)`.
    pub fn pairing(&self, other: &SymMatrix) -> f64 {
        self.trace_product(other) / self.d as f64
    }

    /// `Q A Q^T` for a square `q`.
    pub fn conjugate_by(&self, q: &[Vec<f64>]) -> SymMatrix {
        let d = self.d;
        let mut out = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..=i {
                let mut s = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        s += q[i][k] * self.get(k, l) * q[j][l];
                    }
                }
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        SymMatrix::from_rows_unchecked(out)
    }

    /// Determinant by Gaussian elimination with partial pivoting, independent of the eigensolver.
    pub fn determinant(&self) -> f64 {
        let d = self.d;
        let mut m = self.rows();
        let mut det = 1.0;
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .expect("nonempty");
            if m[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for r in col + 1..d {
                let factor = m[r][col] / m[col][col];
                for c in col..d {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
        det
    }

    /// Eigen-decomposition after checking that the spectrum is nonnegative.
    pub fn psd_spectrum(&self) -> Result<Eigen> {
        let e = eigen_sym(self);
        match e.values.first() {
            Some(&low) if low < -PSD_SLACK => Err(Error::NotPsd(low)),
            _ => Ok(e),
        }
    }

    pub fn pd_spectrum(&self) -> Result<Eigen> {
        let e = eigen_sym(self);
        match e.values.first() {
            Some(&low) if low <= 0.0 => Err(Error::NotPd(low)),
            _ => Ok(e),
        }
    }

    /// `A^t` by spectral calculus; requires a positive definite matrix.
    pub fn power(&self, t: f64) -> Result<SymMatrix> {
        Ok(self.pd_spectrum()?.apply(|x| x.powf(t)))
    }
}

fn clamped(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&x| x.max(0.0)).collect()
}

fn norm_of_spectrum(values: &[f64], tag: &LpTag) -> f64 {
    let d = values.len();
    norm_f64(&vec![1.0 / d as f64; d], &clamped(values), tag)
}

/// `||A||_p`: both logarithmic tags give `det(A)^(1/d)`.
pub fn matrix_p_norm(a: &SymMatrix, tag: &LpTag) -> Result<f64> {
    Ok(norm_of_spectrum(&a.psd_spectrum()?.values, tag))
}

fn young_exponents(tag: &LpTag) -> Result<(f64, f64)> {
    let p = match tag {
        LpTag::Power(_) => tag.exponent_f64(),
        _ => {
            return Err(Error::PreconditionFailed(
                "the trace inequality needs a finite nonzero exponent".into(),
            ))
        }
    };
    if p == 1.0 {
        return Err(Error::PreconditionFailed(
            "p = 1 has no finite conjugate".into(),
        ));
    }
    Ok((p, p / (p - 1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YoungAudit {
    /// `Tr(AB)`.
    pub lhs: f64,
    /// `Tr(A^p) / p + Tr(B^q) / q`.
    pub rhs: f64,
    pub holds: bool,
    /// `||A^p - B^q||_F`.
    pub power_distance: f64,
    pub equality: bool,
}

/// `Tr(AB) >= Tr(A^p)/p + Tr(B^q)/q` for positive definite `A`, `B`.
pub fn young_audit(a: &SymMatrix, b: &SymMatrix, tag: &LpTag, tol: f64) -> Result<YoungAudit> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let (p, q) = young_exponents(tag)?;
    let ap = a.power(p)?;
    let bq = b.power(q)?;
    let lhs = a.trace_product(b);
    let rhs = ap.trace() / p + bq.trace() / q;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let power_distance = ap.distance(&bq);
    Ok(YoungAudit {
        lhs,
        rhs,
        holds: lhs >= rhs - tol * scale,
        power_distance,
        equality: power_distance <= tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixDual {
    pub tag: LpTag,
    pub conjugate: LpTag,
    /// The minimizer `B`, with `||B||_q = 1`.
    pub b: SymMatrix,
    pub norm_a: f64,
    pub norm_b: f64,
    /// `(1/d) Tr(A B)`.
    pub pairing: f64,
    pub gap: f64,
}

/// The `B` attaining `||A||_p = inf { (1/d) Tr(AB) : ||B||_q >= 1 }`.
pub fn matrix_dual_attain(a: &SymMatrix, tag: &LpTag) -> Result<MatrixDual> {
    let e = a.pd_spectrum()?;
    let d = a.dim() as f64;
    let norm_a = norm_of_spectrum(&e.values, tag);
    let b = match tag {
        LpTag::NegInf => {
            let low = e.values[0];
            let tol = 1e-12 * e.values.last().expect("nonempty").abs().max(1.0);
            let mass = e.values.iter().filter(|&&x| x - low <= tol).count() as f64;
            e.apply(|x| if x - low <= tol { d / mass } else { 0.0 })
        }
        LpTag::ZeroPlus | LpTag::ZeroMinus => e.apply(|x| norm_a / x),
        LpTag::Power(_) => {
            let p = tag.exponent_f64();
            e.apply(|x| (x / norm_a).powf(p - 1.0))
        }
    };
    let conjugate = tag.conjugate();
    let norm_b = matrix_p_norm(&b, &conjugate)?;
    let pairing = a.pairing(&b);
    let gap = (pairing - norm_a).abs() / norm_a.abs().max(f64::MIN_POSITIVE);
    Ok(MatrixDual {
        tag: tag.clone(),
        conjugate,
        b,
        norm_a,
        norm_b,
        pairing,
        gap,
    })
}

/// A Haar-like orthogonal matrix from Gram–Schmidt on uniform entries.
pub fn random_orthogonal(rng: &mut impl Rng, d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for u in &basis {
            let dot: f64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-3 {
            basis.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    basis
}

/// `Q diag(spectrum) Q^T` for a random orthogonal `Q`.
pub fn random_with_spectrum(rng: &mut impl Rng, spectrum: &[f64]) -> SymMatrix {
    SymMatrix::diag(spectrum).conjugate_by(&random_orthogonal(rng, spectrum.len()))
}

/// A positive definite matrix with eigenvalues drawn from `[1/8, 8]`.
pub fn random_pd(rng: &mut impl Rng, d: usize) -> SymMatrix {
    let spectrum: Vec<f64> = (0..d)
        .map(|_| 2f64.powf(rng.gen_range(-3.0..3.0)))
        .collect();
    random_with_spectrum(rng, &spectrum)
}

/// Smallest `(1/d) Tr(AB) / ||B||_q` over random positive definite `B`.
pub fn matrix_dual_oracle(a: &SymMatrix, tag: &LpTag, samples: usize, seed: u64) -> Result<f64> {
    a.psd_spectrum()?;
    let q = tag.conjugate();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let b = random_pd(&mut rng, a.dim());
        let nb = matrix_p_norm(&b, &q)?;
        best = best.min(a.pairing(&b) / nb);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceAuditFailure {
    pub tag: LpTag,
    pub a: SymMatrix,
    pub b: SymMatrix,
    pub what: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceAuditReport {
    pub pairs: usize,
    /// Pairs with `B` built so that `A^p = B^q`.
    pub equality_pairs: usize,
    pub worst_dual_gap: f64,
    pub worst_det_gap: f64,
    pub failures: Vec<TraceAuditFailure>,
}

impl TraceAuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random positive definite pairs per exponent, checking
/// `(1/d) Tr(AB) >= ||A||_p ||B||_q`, the trace Young inequality with its equality flag,
/// dual attainment, and `||A||_0 = det(A)^(1/d)`.
pub fn trace_duality_audit(
    pairs: usize,
    max_dim: usize,
    tags: &[LpTag],
    tol: f64,
    seed: u64,
) -> TraceAuditReport {
    let rows: Vec<(bool, f64, f64, Option<TraceAuditFailure>)> = tags
        .par_iter()
        .enumerate()
        .flat_map_iter(|(t, tag)| {
            (0..pairs).map(move |i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((t as u64) << 40) ^ i as u64);
                let d = rng.gen_range(1..=max_dim.min(MAX_DIM));
                let a = random_pd(&mut rng, d);
                let equal_case = i % 16 == 0;
                let (p, q) = young_exponents(tag).expect("finite exponents");
                let b = if equal_case {
                    a.power(p / q).expect("pd")
                } else {
                    random_pd(&mut rng, d)
                };
                let fail = |what: String| {
                    Some(TraceAuditFailure {
                        tag: tag.clone(),
                        a: a.clone(),
                        b: b.clone(),
                        what,
                    })
                };
                let norm_a = matrix_p_norm(&a, tag).expect("pd");
                let norm_b = matrix_p_norm(&b, &tag.conjugate()).expect("pd");
                let lhs = a.pairing(&b);
                let young = young_audit(&a, &b, tag, tol).expect("pd");
                let dual = matrix_dual_attain(&a, tag).expect("pd");
                let geo = matrix_p_norm(&a, &LpTag::ZeroPlus).expect("pd");
                let det_gap = (geo - a.determinant().powf(1.0 / d as f64)).abs() / geo;
                let failure = if lhs < norm_a * norm_b * (1.0 - tol) {
                    fail(format!(
                        "pairing {lhs} below the product {}",
                        norm_a * norm_b
                    ))
                } else if !young.holds {
                    fail(format!("trace Young fails: {} < {}", young.lhs, young.rhs))
                } else if young.equality != equal_case {
                    fail(format!(
                        "equality flag {} with ||A^p - B^q|| = {}",
                        young.equality, young.power_distance
                    ))
                } else if dual.gap > tol || (dual.norm_b - 1.0).abs() > tol {
                    fail(format!(
                        "dual gap {} with ||B||_q = {}",
                        dual.gap, dual.norm_b
                    ))
                } else if det_gap > tol {
                    fail(format!(
                        "geometric mean differs from det^(1/d) by {det_gap}"
                    ))
                } else {
                    None
                };
                (equal_case, dual.gap, det_gap, failure)
            })
        })
        .collect();
    TraceAuditReport {
        pairs: rows.len(),
        equality_pairs: rows.iter().filter(|r| r.0).count(),
        worst_dual_gap: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        worst_det_gap: rows.iter().map(|r| r.2).fold(0.0, f64::max),
        failures: rows.into_iter().filter_map(|r| r.3).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(s: &str) -> LpTag {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_norms() {
        let a = SymMatrix::diag(&[1.0, 4.0]);
        assert!((matrix_p_norm(&a, &LpTag::ZeroPlus).unwrap() - 2.0).abs() < 1e-14);
        assert!((matrix_p_norm(&a, &tag("-1")).unwrap() - 1.6).abs() < 1e-14);
        assert_eq!(matrix_p_norm(&a, &LpTag::NegInf).unwrap(), 1.0);
        for t in ["1", "1/2", "-2", "0-", "-inf"] {
            assert!((matrix_p_norm(&SymMatrix::identity(3), &tag(t)).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            SymMatrix::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]]),
            Err(Error::NotSymmetric)
        );
        let indefinite = SymMatrix::diag(&[1.0, -1.0]);
        assert!(matches!(
            matrix_p_norm(&indefinite, &tag("1")),
            Err(Error::NotPsd(_))
        ));
        assert!(matches!(
            matrix_dual_attain(&SymMatrix::diag(&[0.0, 1.0]), &tag("1/2")),
            Err(Error::NotPd(_))
        ));
    }

    #[test]
    fn singular_conventions() {
        let a = SymMatrix::diag(&[0.0, 1.0]);
        assert_eq!(matrix_p_norm(&a, &tag("-1")).unwrap(), 0.0);
        assert_eq!(matrix_p_norm(&a, &LpTag::ZeroMinus).unwrap(), 0.0);
        assert!((matrix_p_norm(&a, &tag("1/2")).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn young_equality_and_identity() {
        let i = SymMatrix::identity(3);
        let y = young_audit(&i, &i, &tag("-1"), 1e-8).unwrap();
        assert!((y.lhs - 3.0).abs() < 1e-12 && (y.rhs - 3.0).abs() < 1e-12 && y.equality);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_pd(&mut rng, 4);
        let b = a.power(-1.0 / 0.5).unwrap();
        let y = young_audit(&a, &b, &tag("-1"), 1e-8).unwrap();
        assert!(y.equality && (y.lhs - y.rhs).abs() < 1e-8 * y.lhs.abs().max(1.0));
        let y = young_audit(&a, &random_pd(&mut rng, 4), &tag("-1"), 1e-8).unwrap();
        assert!(y.holds && !y.equality && y.lhs > y.rhs);
    }

    #[test]
    fn dual_attain_diag() {
        let a = SymMatrix::diag(&[1.0, 4.0]);
        let m = matrix_dual_attain(&a, &tag("-1")).unwrap();
        assert!((m.pairing - 1.6).abs() < 1e-12 && (m.norm_b - 1.0).abs() < 1e-12);
        assert!(matrix_dual_oracle(&a, &tag("-1"), 2000, 1).unwrap() >= 1.6 * (1.0 - 1e-9));
        let m = matrix_dual_attain(&SymMatrix::identity(2), &tag("1/2")).unwrap();
        assert!(m.b.distance(&SymMatrix::identity(2)) < 1e-12 && (m.pairing - 1.0).abs() < 1e-12);
        let m = matrix_dual_attain(&SymMatrix::diag(&[3.0, 1.0, 1.0]), &LpTag::NegInf).unwrap();
        assert!(m.gap < 1e-12 && (m.norm_b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_trace_audit() {
        let tags: Vec<LpTag> = ["-2", "-1", "-1/2", "1/2"].iter().map(|s| tag(s)).collect();
        let r = trace_duality_audit(200, 6, &tags, 1e-8, 11);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.equality_pairs > 0);
    }
}

//! Dense rank-revealing linear algebra over `Complex64`.
//!
//! Every matrix in the crate is carried as a `DMatrix<Complex64>`. Real data
//! simply has zero imaginary parts; [`Field`] records which field a value
//! belongs to so that real inputs can be reported (and serialized) as real.

use faer::Side;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;

/// Scalar field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// `Real` iff every entry has an exactly zero imaginary part.
    pub fn of(m: &Mat) -> Field {
        if m.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        }
    }

    /// Mixing real and complex promotes to complex.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

/// Threshold rule for numerical rank decisions.
///
/// A singular value `σ` counts as zero iff
/// `σ <= max(abs_floor, rel_eps * σ_max * max(rows, cols))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub rel_eps: f64,
    pub abs_floor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel_eps: 1e-12,
            abs_floor: 1e-14,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_eps: f64, abs_floor: f64) -> Result<Self> {
        if !(rel_eps > 0.0) || !rel_eps.is_finite() {
            return Err(Error::InvalidTolerance(format!("rel_eps must be > 0, got {rel_eps}")));
        }
        if !(abs_floor >= 0.0) || !abs_floor.is_finite() {
            return Err(Error::InvalidTolerance(format!(
                "abs_floor must be >= 0, got {abs_floor}"
            )));
        }
        Ok(TolerancePolicy { rel_eps, abs_floor })
    }

    pub fn rank_threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.abs_floor
            .max(self.rel_eps * sigma_max * rows.max(cols) as f64)
    }

    /// Tolerance for structural verdicts (Gram defects, eigenvalue signs,
    /// subspace gaps). With the default policy this is `1e-9`.
    pub fn structural(&self) -> f64 {
        (1e3 * self.rel_eps).max(self.abs_floor)
    }
}

/// Result of [`rank_factor`].
#[derive(Clone, Debug)]
pub struct RankFactor {
    /// Orthonormal basis of `ran A` (rows × rank).
    pub range: Mat,
    /// Orthonormal basis of `ker A` (cols × (cols − rank)).
    pub null: Mat,
    pub rank: usize,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
}

pub fn check_finite(a: &Mat, what: &str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix(format!("{what} has non-finite entries")))
    }
}

fn to_faer(a: &Mat) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, C64>) -> Mat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD with singular values sorted in decreasing order.
/// Returns `(U, σ, V)` with `A = U diag(σ) V*`.
///
/// Computed with faer: nalgebra's bidiagonal SVD loses accuracy on
/// rank-deficient input, which is the common case here.
pub(crate) fn svd_sorted(a: &Mat) -> (Mat, Vec<f64>, Mat) {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return (Mat::zeros(m, 0), Vec::new(), Mat::zeros(n, 0));
    }
    let svd = to_faer(a).thin_svd().expect("svd of a finite matrix converges");
    let s = svd.S().column_vector();
    let ss = (0..k).map(|i| s[i].re).collect();
    (from_faer(svd.U()), ss, from_faer(svd.V()))
}

fn numerical_rank(s: &[f64], rows: usize, cols: usize, tol: &TolerancePolicy) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = tol.rank_threshold(smax, rows, cols);
    s.iter().take_while(|&&x| x > thr).count()
}

/// Orthonormal range and null-space bases with the numerical rank.
pub fn rank_factor(a: &Mat, tol: &TolerancePolicy) -> Result<RankFactor> {
    check_finite(a, "matrix")?;
    let (m, n) = a.shape();
    let (u, s, v) = svd_sorted(a);
    let rank = numerical_rank(&s, m, n, tol);
    let mut range = u.columns(0, rank).into_owned();
    canonicalize_phases(&mut range);
    let row_space = v.columns(0, rank).into_owned();
    let null = orth_complement(&row_space);
    Ok(RankFactor {
        range,
        null,
        rank,
        singular_values: s,
    })
}

/// Orthonormal basis of the column span of `a`.
pub fn orth(a: &Mat, tol: &TolerancePolicy) -> Mat {
    let (m, n) = a.shape();
    let (u, s, _) = svd_sorted(a);
    let r = numerical_rank(&s, m, n, tol);
    let mut q = u.columns(0, r).into_owned();
    canonicalize_phases(&mut q);
    q
}

/// Orthonormal basis of the null space of `a`.
pub fn null_space(a: &Mat, tol: &TolerancePolicy) -> Mat {
    let (m, n) = a.shape();
    let (_, s, v) = svd_sorted(a);
    let r = numerical_rank(&s, m, n, tol);
    orth_complement(&v.columns(0, r).into_owned())
}

/// Orthonormal basis of the orthogonal complement of `ran q`, where `q` has
/// orthonormal columns.
pub fn orth_complement(q: &Mat) -> Mat {
    let (n, k) = q.shape();
    if k == 0 {
        return Mat::identity(n, n);
    }
    if k >= n {
        return Mat::zeros(n, 0);
    }
    let proj = Mat::identity(n, n) - q * q.adjoint();
    let (vals, vecs) = hermitian_eigen(&proj);
    // eigenvalues sorted ascending; the complement sits at eigenvalue one
    let mut c = vecs.columns(k, n - k).into_owned();
    debug_assert!(vals[k] > 0.5);
    canonicalize_phases(&mut c);
    c
}

/// Scales every column by a unit phase so that its first dominant entry is
/// real and positive. Makes one-dimensional bases reproducible.
pub fn canonicalize_phases(q: &mut Mat) {
    for mut col in q.column_iter_mut() {
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        if let Some(pivot) = col.iter().find(|z| z.norm() >= 0.9 * max).copied() {
            let phase = pivot.conj() / pivot.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
}

/// Moore–Penrose inverse using the default rank rule.
pub fn pseudo_inverse(a: &Mat) -> Result<Mat> {
    pseudo_inverse_with(a, &TolerancePolicy::default())
}

pub fn pseudo_inverse_with(a: &Mat, tol: &TolerancePolicy) -> Result<Mat> {
    check_finite(a, "matrix")?;
    let (m, n) = a.shape();
    let (u, s, v) = svd_sorted(a);
    let r = numerical_rank(&s, m, n, tol);
    let mut out = Mat::zeros(n, m);
    for i in 0..r {
        let ui = u.column(i);
        let vi = v.column(i);
        out += (vi * ui.adjoint()) * C64::new(1.0 / s[i], 0.0);
    }
    Ok(out)
}

/// Eigen-decomposition of the Hermitian part of `a`; eigenvalues ascending.
pub fn hermitian_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let h = hermitian_part(a);
    let eig = to_faer(&h)
        .self_adjoint_eigen(Side::Lower)
        .expect("eigensolver on a finite Hermitian matrix converges");
    let d = eig.S().column_vector();
    // faer returns eigenvalues in nondecreasing order
    ((0..n).map(|i| d[i].re).collect(), from_faer(eig.U()))
}

/// `(A + A*)/2`.
pub fn hermitian_part(a: &Mat) -> Mat {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// `(A − A*)/2`.
pub fn skew_part(a: &Mat) -> Mat {
    (a - a.adjoint()) * C64::new(0.5, 0.0)
}

/// Smallest eigenvalue of the Hermitian part. Zero for an empty matrix.
pub fn min_eig(a: &Mat) -> f64 {
    hermitian_eigen(a).0.first().copied().unwrap_or(0.0)
}

/// Largest eigenvalue of the Hermitian part. Zero for an empty matrix.
pub fn max_eig(a: &Mat) -> f64 {
    hermitian_eigen(a).0.last().copied().unwrap_or(0.0)
}

/// Largest singular value. Zero for an empty matrix.
pub fn spectral_norm(a: &Mat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    svd_sorted(a).1[0]
}

/// Hermitian positive semidefinite square root, with negative eigenvalues
/// clipped to zero first.
pub fn psd_sqrt(a: &Mat) -> Mat {
    let n = a.nrows();
    let (vals, vecs) = hermitian_eigen(a);
    let mut d = Mat::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        d[(i, i)] = C64::new(v.max(0.0).sqrt(), 0.0);
    }
    &vecs * d * vecs.adjoint()
}

/// Real-valued matrix from row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> Mat {
    assert_eq!(data.len(), rows * cols, "data length must equal rows * cols");
    Mat::from_fn(rows, cols, |i, j| C64::new(data[i * cols + j], 0.0))
}

pub fn real_vector(data: &[f64]) -> Vector {
    Vector::from_iterator(data.len(), data.iter().map(|&x| C64::new(x, 0.0)))
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[&Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Vertical stack of matrices with equal column counts.
pub fn vstack(blocks: &[&Mat]) -> Mat {
    let cols = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack: column counts differ");
        out.view_mut((r, 0), b.shape()).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Horizontal concatenation of matrices with equal row counts.
pub fn hstack(blocks: &[&Mat]) -> Mat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack: row counts differ");
        out.view_mut((0, c), b.shape()).copy_from(b);
        c += b.ncols();
    }
    out
}

pub fn vconcat(parts: &[&Vector]) -> Vector {
    let n: usize = parts.iter().map(|p| p.len()).sum();
    Vector::from_iterator(n, parts.iter().flat_map(|p| p.iter().copied()))
}

/// Largest imaginary part magnitude.
pub fn max_imag(a: &Mat) -> f64 {
    a.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Drops imaginary parts.
pub fn real_part(a: &Mat) -> Mat {
    a.map(|z| C64::new(z.re, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat, b: &Mat, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn rank_factor_identity() {
        let f = rank_factor(&Mat::identity(2, 2), &TolerancePolicy::default()).unwrap();
        assert_eq!(f.rank, 2);
        assert_eq!(f.null.ncols(), 0);
        assert!(close(&(f.range.adjoint() * &f.range), &Mat::identity(2, 2), 1e-14));
    }

    #[test]
    fn rank_factor_zero() {
        let f = rank_factor(&Mat::zeros(2, 3), &TolerancePolicy::default()).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!(f.range.ncols(), 0);
        assert!(close(&(&f.null * f.null.adjoint()), &Mat::identity(3, 3), 1e-14));
    }

    #[test]
    fn rank_factor_ones() {
        let a = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let f = rank_factor(&a, &TolerancePolicy::default()).unwrap();
        assert_eq!(f.rank, 1);
        // singular values of the all-ones 2x2 are 2 and 0
        assert!((f.singular_values[0] - 2.0).abs() < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        assert!(close(&f.null, &real_matrix(2, 1, &[s, -s]), 1e-14));
        assert!(close(&f.range, &real_matrix(2, 1, &[s, s]), 1e-14));
    }

    #[test]
    fn rank_factor_rejects_nan() {
        let a = real_matrix(1, 1, &[f64::NAN]);
        assert!(matches!(
            rank_factor(&a, &TolerancePolicy::default()),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn pseudo_inverse_cases() {
        let i = Mat::identity(3, 3);
        assert!(close(&pseudo_inverse(&i).unwrap(), &i, 1e-14));
        let d = real_matrix(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        assert!(close(
            &pseudo_inverse(&d).unwrap(),
            &real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.0]),
            1e-14
        ));
        // normal equations: (a*a)^{-1} a* = (1/2) [1, 1]
        let c = real_matrix(2, 1, &[1.0, 1.0]);
        assert!(close(
            &pseudo_inverse(&c).unwrap(),
            &real_matrix(1, 2, &[0.5, 0.5]),
            1e-14
        ));
    }

    #[test]
    fn pseudo_inverse_penrose_identities_complex() {
        let a = Mat::from_fn(3, 4, |i, j| C64::new((i + 2 * j) as f64 * 0.3 - 1.0, (i as f64) - 0.5 * j as f64));
        // make it rank deficient: last column = first + second
        let mut a = a;
        let c = a.column(0) + a.column(1);
        a.set_column(3, &c);
        let p = pseudo_inverse(&a).unwrap();
        assert!(close(&(&a * &p * &a), &a, 1e-12));
        assert!(close(&(&p * &a * &p), &p, 1e-12));
        let ap = &a * &p;
        let pa = &p * &a;
        assert!(close(&ap, &ap.adjoint(), 1e-12));
        assert!(close(&pa, &pa.adjoint(), 1e-12));
    }

    #[test]
    fn complement_spans_the_rest() {
        let q = orth(&real_matrix(3, 1, &[1.0, 2.0, 2.0]), &TolerancePolicy::default());
        let c = orth_complement(&q);
        assert_eq!(c.ncols(), 2);
        assert!((q.adjoint() * &c).iter().all(|z| z.norm() < 1e-14));
        assert!(close(&(c.adjoint() * &c), &Mat::identity(2, 2), 1e-14));
    }

    #[test]
    fn psd_sqrt_clips() {
        let a = real_matrix(2, 2, &[4.0, 0.0, 0.0, -1e-15]);
        let r = psd_sqrt(&a);
        assert!(close(&r, &real_matrix(2, 2, &[2.0, 0.0, 0.0, 0.0]), 1e-12));
    }

    #[test]
    fn tolerance_validation() {
        assert!(TolerancePolicy::new(0.0, 0.0).is_err());
        assert!(TolerancePolicy::new(1e-10, -1.0).is_err());
        assert!(TolerancePolicy::new(1e-10, 0.0).is_ok());
        assert_eq!(TolerancePolicy::default().structural(), 1e-9);
    }
}

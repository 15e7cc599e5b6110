//! Independent linear algebra for the test oracles: Gram-Schmidt,
//! projectors and Hermitian eigenvalues, no library helpers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;
pub type V = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Gram-Schmidt with column pivoting and one reorthogonalization pass.
/// Appends to the orthonormal `basis` the directions of `cands` outside its
/// span, stopping once the largest residual is below `1e-10 · max(‖c‖, 1)`.
fn extend(basis: &mut Vec<V>, cands: &M) {
    let n = cands.nrows();
    let mut rest: Vec<V> = (0..cands.ncols()).map(|j| cands.column(j).into_owned()).collect();
    let scale = rest.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for v in rest.iter_mut() {
        for b in basis.iter() {
            *v -= b * b.dotc(v);
        }
    }
    while basis.len() < n {
        let Some((j, norm)) = rest
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
        else {
            break;
        };
        if norm <= 1e-10 * scale {
            break;
        }
        let mut q = rest.swap_remove(j);
        for b in basis.iter() {
            q -= b * b.dotc(&q);
        }
        let q = &q / c(q.norm());
        for v in rest.iter_mut() {
            *v -= &q * q.dotc(v);
        }
        basis.push(q);
    }
}

fn columns(n: usize, vs: &[V]) -> M {
    let mut out = M::zeros(n, vs.len());
    for (j, v) in vs.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Orthonormal basis of the column span.
pub fn span(a: &M) -> M {
    let mut basis = Vec::new();
    extend(&mut basis, a);
    columns(a.nrows(), &basis)
}

/// Orthonormal basis of `{x : a x = 0}`.
pub fn kernel(a: &M) -> M {
    let n = a.ncols();
    let range = span(&a.adjoint());
    complement(&range, n)
}

/// Orthonormal basis of the orthogonal complement of `span(q)` in `K^n`.
pub fn complement(q: &M, n: usize) -> M {
    let mut basis = Vec::new();
    extend(&mut basis, q);
    let k = basis.len();
    extend(&mut basis, &M::identity(n, n));
    columns(n, &basis[k..])
}

pub fn projector(q: &M, n: usize) -> M {
    if q.ncols() == 0 {
        return M::zeros(n, n);
    }
    q * q.adjoint()
}

pub fn spectral(a: &M) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    if a.is_square() && (a - a.adjoint()).norm() <= 1e-14 * a.norm() {
        let e = herm_eigs(a);
        return e.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let g = a.adjoint() * a;
    max_eig(&g).max(0.0).sqrt()
}

/// `‖P₁ − P₂‖₂` for the spans of `a` and `b`.
pub fn gap(a: &M, b: &M) -> f64 {
    let n = a.nrows();
    spectral(&(projector(&span(a), n) - projector(&span(b), n)))
}

/// Eigenvalues of the Hermitian part.
pub fn herm_eigs(a: &M) -> Vec<f64> {
    if a.nrows() == 0 {
        return vec![];
    }
    let h = (a + a.adjoint()) * c(0.5);
    h.symmetric_eigen().eigenvalues.iter().cloned().collect()
}

pub fn min_eig(a: &M) -> f64 {
    herm_eigs(a).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn max_eig(a: &M) -> f64 {
    herm_eigs(a).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

pub fn vstack(a: &M, b: &M) -> M {
    let mut out = M::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn hstack(a: &M, b: &M) -> M {
    let mut out = M::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// `(left, right)` rows of an image basis.
pub fn split(image: &M, n_left: usize) -> (M, M) {
    (
        image.rows(0, n_left).into_owned(),
        image.rows(n_left, image.nrows() - n_left).into_owned(),
    )
}

/// Adjoint from the definition: `(g, h)` with `⟨e, g⟩ = ⟨f, h⟩` for all
/// `(f, e)` in `ran [F; G]`, i.e. the null space of `[G*, −F*]`.
pub fn adjoint_image(image: &M, n_left: usize) -> M {
    let (f, g) = split(image, n_left);
    kernel(&hstack(&g.adjoint(), &(-f.adjoint())))
}

/// Largest modulus of a finite eigenvalue of `λE − A`, via the eigenvalues
/// `μ` of `(s₀E − A)⁻¹E` and `λ = s₀ − 1/μ`. Infinite eigenvalues show up
/// as `μ ≈ 0` and are dropped. `None` if every trial shift is singular.
pub fn finite_spectral_radius(e: &M, a: &M) -> Option<f64> {
    for s0 in [Complex64::new(0.37, 0.61), Complex64::new(-1.3, 0.2), Complex64::new(2.1, -0.9)] {
        let Some(inv) = (e * s0 - a).try_inverse() else { continue };
        let k = inv * e;
        let mu = k.eigenvalues()?;
        let top = mu.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        return Some(
            mu.iter()
                .filter(|x| x.norm() > 1e-8 * top.max(1e-300))
                .map(|x| (s0 - Complex64::new(1.0, 0.0) / x).norm())
                .fold(0.0, f64::max),
        );
    }
    None
}

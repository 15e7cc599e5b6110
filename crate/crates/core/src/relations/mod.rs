//! Linear relations: subspaces of `K^n × K^m`.
//!
//! A [`LinearRelation`] stores an orthonormal image basis `[F; G]` and an
//! orthonormal kernel basis `[K, L]` of the same subspace, so that
//! `A = ran [F; G] = ker [K, L]`. Elements are pairs `(f, e)` with the left
//! component in `K^{n_left}` and the right component in `K^{n_right}`.

mod classify;
pub mod numeric;

pub use classify::{StructureReport, StructureWitness};
pub use numeric::{
    pseudo_inverse, pseudo_inverse_with, rank_factor, Field, Mat, RankFactor, TolerancePolicy,
    Vector, C64,
};

use crate::error::{Error, Result};
use numeric::{check_finite, orth, orth_complement, spectral_norm, vstack};

#[derive(Clone, Debug)]
pub struct LinearRelation {
    n_left: usize,
    n_right: usize,
    image: Mat,
    kernel: Mat,
    tol: TolerancePolicy,
    field: Field,
}

/// The four subspaces attached to a relation, each as an orthonormal basis.
#[derive(Clone, Debug)]
pub struct RelationParts {
    /// `{f : (f, 0) ∈ A}`
    pub ker: Mat,
    /// `{f : ∃e, (f, e) ∈ A}`
    pub dom: Mat,
    /// `{e : (0, e) ∈ A}`
    pub mul: Mat,
    /// `{e : ∃f, (f, e) ∈ A}`
    pub ran: Mat,
}

impl LinearRelation {
    /// Column span of `fg`, which must have `n_left + n_right` rows.
    pub fn from_image(fg: &Mat, n_left: usize, n_right: usize) -> Result<Self> {
        Self::from_image_with(fg, n_left, n_right, TolerancePolicy::default())
    }

    pub fn from_image_with(
        fg: &Mat,
        n_left: usize,
        n_right: usize,
        tol: TolerancePolicy,
    ) -> Result<Self> {
        if fg.nrows() != n_left + n_right {
            return Err(Error::Shape(format!(
                "image generator has {} rows, expected {}",
                fg.nrows(),
                n_left + n_right
            )));
        }
        check_finite(fg, "image generator")?;
        let image = orth(fg, &tol);
        Ok(Self::from_orthonormal_image(image, n_left, n_right, tol, Field::of(fg)))
    }

    /// Null space of `kl`, which must have `n_left + n_right` columns.
    pub fn from_kernel(kl: &Mat, n_left: usize, n_right: usize) -> Result<Self> {
        Self::from_kernel_with(kl, n_left, n_right, TolerancePolicy::default())
    }

    pub fn from_kernel_with(
        kl: &Mat,
        n_left: usize,
        n_right: usize,
        tol: TolerancePolicy,
    ) -> Result<Self> {
        if kl.ncols() != n_left + n_right {
            return Err(Error::Shape(format!(
                "kernel matrix has {} columns, expected {}",
                kl.ncols(),
                n_left + n_right
            )));
        }
        check_finite(kl, "kernel matrix")?;
        let rows = orth(&kl.adjoint(), &tol);
        let image = orth_complement(&rows);
        Ok(LinearRelation {
            n_left,
            n_right,
            image,
            kernel: rows.adjoint(),
            tol,
            field: Field::of(kl),
        })
    }

    pub(crate) fn from_orthonormal_image(
        image: Mat,
        n_left: usize,
        n_right: usize,
        tol: TolerancePolicy,
        field: Field,
    ) -> Self {
        let kernel = orth_complement(&image).adjoint();
        LinearRelation {
            n_left,
            n_right,
            image,
            kernel,
            tol,
            field,
        }
    }

    /// Graph `{(x, A x)}` of a matrix `A: K^n → K^m`.
    pub fn graph(a: &Mat) -> Result<Self> {
        let (m, n) = a.shape();
        Self::from_image(&vstack(&[&Mat::identity(n, n), a]), n, m)
    }

    /// Inverse graph `{(A x, x)}`.
    pub fn inverse_graph(a: &Mat) -> Result<Self> {
        let (m, n) = a.shape();
        Self::from_image(&vstack(&[a, &Mat::identity(n, n)]), m, n)
    }

    /// The zero subspace of `K^n × K^m`.
    pub fn zero(n_left: usize, n_right: usize) -> Self {
        Self::from_orthonormal_image(
            Mat::zeros(n_left + n_right, 0),
            n_left,
            n_right,
            TolerancePolicy::default(),
            Field::Real,
        )
    }

    /// All of `K^n × K^m`.
    pub fn full(n_left: usize, n_right: usize) -> Self {
        let n = n_left + n_right;
        Self::from_orthonormal_image(
            Mat::identity(n, n),
            n_left,
            n_right,
            TolerancePolicy::default(),
            Field::Real,
        )
    }

    pub fn with_tol(mut self, tol: TolerancePolicy) -> Self {
        self.tol = tol;
        self
    }

    pub(crate) fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn ambient(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn dim(&self) -> usize {
        self.image.ncols()
    }

    pub fn image_basis(&self) -> &Mat {
        &self.image
    }

    pub fn kernel_basis(&self) -> &Mat {
        &self.kernel
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Upper block `F` of the image basis (left components).
    pub fn left_block(&self) -> Mat {
        self.image.rows(0, self.n_left).into_owned()
    }

    /// Lower block `G` of the image basis (right components).
    pub fn right_block(&self) -> Mat {
        self.image.rows(self.n_left, self.n_right).into_owned()
    }

    /// Orthogonal projector onto the relation.
    pub fn projector(&self) -> Mat {
        &self.image * self.image.adjoint()
    }

    pub fn parts(&self) -> RelationParts {
        let k = self.kernel.columns(0, self.n_left).into_owned();
        let l = self.kernel.columns(self.n_left, self.n_right).into_owned();
        RelationParts {
            ker: numeric::null_space(&k, &self.tol),
            dom: orth(&self.left_block(), &self.tol),
            mul: numeric::null_space(&l, &self.tol),
            ran: orth(&self.right_block(), &self.tol),
        }
    }

    /// `{(e, f) : (f, e) ∈ A}`.
    pub fn inverse(&self) -> Self {
        let swap_rows = vstack(&[&self.right_block(), &self.left_block()]);
        let k = self.kernel.columns(0, self.n_left).into_owned();
        let l = self.kernel.columns(self.n_left, self.n_right).into_owned();
        LinearRelation {
            n_left: self.n_right,
            n_right: self.n_left,
            image: swap_rows,
            kernel: numeric::hstack(&[&l, &k]),
            tol: self.tol,
            field: self.field,
        }
    }

    /// Adjoint relation `{(e', f') : ⟨f', e⟩ = ⟨e', f⟩ for all (e, f) ∈ A}`.
    ///
    /// With `A = ker [K, L] = ran [F; G]` this is `ran [L*; −K*] = ker [G*, −F*]`;
    /// both bases stay orthonormal, so no factorization is needed.
    pub fn adjoint(&self) -> Self {
        let k = self.kernel.columns(0, self.n_left).into_owned();
        let l = self.kernel.columns(self.n_left, self.n_right).into_owned();
        let image = vstack(&[&l.adjoint(), &(-k.adjoint())]);
        let kernel = numeric::hstack(&[&self.right_block().adjoint(), &(-self.left_block().adjoint())]);
        LinearRelation {
            n_left: self.n_right,
            n_right: self.n_left,
            image,
            kernel,
            tol: self.tol,
            field: self.field,
        }
    }

    /// `αA = {(f, α e) : (f, e) ∈ A}`: the scalar acts on the right component.
    pub fn scale(&self, alpha: C64) -> Self {
        let mut fg = self.image.clone();
        for i in self.n_left..self.ambient() {
            for j in 0..fg.ncols() {
                fg[(i, j)] *= alpha;
            }
        }
        let field = if alpha.im == 0.0 { self.field } else { Field::Complex };
        LinearRelation::from_orthonormal_image(orth(&fg, &self.tol), self.n_left, self.n_right, self.tol, field)
    }

    /// Relative distance of `pair` from the relation:
    /// `‖(I − Π) pair‖ / max(1, ‖pair‖)`.
    pub fn contains(&self, pair: &Vector) -> Result<f64> {
        if pair.len() != self.ambient() {
            return Err(Error::Shape(format!(
                "pair has length {}, relation lives in dimension {}",
                pair.len(),
                self.ambient()
            )));
        }
        let coeffs = self.image.adjoint() * pair;
        let resid = pair - &self.image * coeffs;
        Ok(resid.norm() / pair.norm().max(1.0))
    }

    /// Residual of the pair `(f, e)` given as separate components.
    pub fn contains_pair(&self, f: &Vector, e: &Vector) -> Result<f64> {
        self.contains(&numeric::vconcat(&[f, e]))
    }

    /// Subspace gap `‖Π_A − Π_B‖₂`.
    pub fn gap(&self, other: &LinearRelation) -> Result<f64> {
        if self.n_left != other.n_left || self.n_right != other.n_right {
            return Err(Error::Shape(format!(
                "relations live in K^{}×K^{} and K^{}×K^{}",
                self.n_left, self.n_right, other.n_left, other.n_right
            )));
        }
        let diff = self.projector() - other.projector();
        let (vals, _) = numeric::hermitian_eigen(&diff);
        Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }

    /// Structure verdicts from the Gram products of the image basis.
    pub fn classify(&self) -> Result<StructureReport> {
        classify::classify(self, self.tol.structural())
    }

    pub fn classify_with(&self, tol: f64) -> Result<StructureReport> {
        classify::classify(self, tol)
    }

    /// Whether every image vector of `other` lies in `self`.
    pub fn contains_relation(&self, other: &LinearRelation) -> Result<f64> {
        if self.n_left != other.n_left || self.n_right != other.n_right {
            return Err(Error::Shape("relations have different ambient dimensions".into()));
        }
        let resid = &other.image - self.projector() * &other.image;
        Ok(spectral_norm(&resid))
    }
}

//! Constrained-graph form `{(M e − G λ, e) : G* e = 0}` of maximal structures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::numeric::{
    hermitian_part, hstack, max_eig, min_eig, orth_complement, pseudo_inverse_with, skew_part,
    spectral_norm, vstack,
};
use crate::relations::{LinearRelation, Mat, TolerancePolicy, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Dirac,
    Lagrange,
    MaxResistive,
    MaxMonotone,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [
        Flavor::Dirac,
        Flavor::Lagrange,
        Flavor::MaxResistive,
        Flavor::MaxMonotone,
    ];
}

/// `(M, G)` with `G` an orthonormal basis of the relation kernel.
#[derive(Clone, Debug)]
pub struct ExtendedGraphRep {
    flavor: Flavor,
    matrix: Mat,
    multipliers: Mat,
    tol: TolerancePolicy,
}

impl ExtendedGraphRep {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `M`.
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// `G`, with orthonormal columns.
    pub fn multipliers(&self) -> &Mat {
        &self.multipliers
    }

    /// Number of multipliers `l`.
    pub fn l(&self) -> usize {
        self.multipliers.ncols()
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// The relation `{(M e − G λ, e) : G* e = 0, λ ∈ K^l}`.
    pub fn reconstruct(&self) -> Result<LinearRelation> {
        let n = self.n();
        let free = orth_complement(&self.multipliers);
        let l = self.l();
        let left = hstack(&[&(&self.matrix * &free), &(-&self.multipliers)]);
        let right = hstack(&[&free, &Mat::zeros(n, l)]);
        LinearRelation::from_image_with(&vstack(&[&left, &right]), n, n, self.tol)
    }

    /// `‖G G* M (I − G G*)‖₂`, zero iff `M ker G* ⊂ ker G*`.
    pub fn invariance_defect(&self) -> f64 {
        let n = self.n();
        let gg = &self.multipliers * self.multipliers.adjoint();
        spectral_norm(&(&gg * &self.matrix * (Mat::identity(n, n) - &gg)))
    }

    /// `‖G* M‖₂`, zero iff `ran M ⟂ ran G`.
    pub fn orthogonality_defect(&self) -> f64 {
        spectral_norm(&(self.multipliers.adjoint() * &self.matrix))
    }

    /// `‖G* G − I‖₂`.
    pub fn multiplier_gram_defect(&self) -> f64 {
        let l = self.l();
        spectral_norm(&(self.multipliers.adjoint() * &self.multipliers - Mat::identity(l, l)))
    }

    /// Violation of the flavor's matrix condition: `‖M + M*‖` (Dirac),
    /// `‖M − M*‖` (Lagrange), `‖M − M*‖ + max(0, λ_max(M))` (maximal
    /// resistive), `max(0, −λ_min(M + M*))` (maximal monotone).
    pub fn structure_defect(&self) -> f64 {
        let m = &self.matrix;
        match self.flavor {
            Flavor::Dirac => spectral_norm(&(m + m.adjoint())),
            Flavor::Lagrange => spectral_norm(&(m - m.adjoint())),
            Flavor::MaxResistive => {
                spectral_norm(&(m - m.adjoint())) + max_eig(&hermitian_part(m)).max(0.0)
            }
            Flavor::MaxMonotone => (-min_eig(&(m + m.adjoint()))).max(0.0),
        }
    }

    /// Unique `(e, λ)` with `pair = (M e − G λ, e)`.
    pub fn recover_components(&self, f: &Vector, e: &Vector, tol: f64) -> Result<(Vector, Vector)> {
        let n = self.n();
        if f.len() != n || e.len() != n {
            return Err(Error::Shape(format!(
                "pair components have lengths {} and {}, expected {n}",
                f.len(),
                e.len()
            )));
        }
        let lambda = self.multipliers.adjoint() * (&self.matrix * e - f);
        let rebuilt = &self.matrix * e - &self.multipliers * &lambda;
        let scale = (f.norm_squared() + e.norm_squared()).sqrt().max(1.0);
        let residual = ((f - rebuilt).norm() + (self.multipliers.adjoint() * e).norm()) / scale;
        if residual > tol {
            return Err(Error::NotMember { residual });
        }
        Ok((e.clone(), lambda))
    }
}

fn check_flavor(m: &LinearRelation, flavor: Flavor) -> Result<()> {
    let r = m.classify()?;
    let (structured, maximal) = match flavor {
        Flavor::Dirac => (r.witness.skew_defect <= r.witness.tol, r.is_dirac),
        Flavor::Lagrange => (r.witness.hermitian_defect <= r.witness.tol, r.is_lagrange),
        Flavor::MaxResistive => (r.is_resistive, r.is_max_resistive),
        Flavor::MaxMonotone => (r.is_monotone, r.is_max_monotone),
    };
    if !structured {
        return Err(Error::FlavorMismatch(format!("{flavor:?}: {:?}", r.witness)));
    }
    if !maximal {
        return Err(Error::NotMaximal(format!(
            "{flavor:?} needs dimension {}, got {}",
            r.witness.n, r.witness.dim
        )));
    }
    Ok(())
}

/// Extended graph representation of a maximal structure.
///
/// `G` spans `ker M`. For `e ⟂ ran G` the fiber `{f : (f, e) ∈ M}` is
/// `f₀ + ran G`; `M e := Π f₀` with `Π = I − G G*`, and `M = 0` on `ran G`.
/// In matrix form `M = Π F S† Π` for the image basis `[F; S]`.
pub fn extended_graph_rep(m: &LinearRelation, flavor: Flavor) -> Result<ExtendedGraphRep> {
    check_flavor(m, flavor)?;
    let tol = *m.tol();
    let n = m.n_left();
    let g = m.parts().ker;
    let proj = Mat::identity(n, n) - &g * g.adjoint();
    let f = m.left_block();
    let s = m.right_block();
    let raw = &proj * f * pseudo_inverse_with(&s, &tol)? * &proj;
    let matrix = match flavor {
        Flavor::Dirac => skew_part(&raw),
        Flavor::Lagrange | Flavor::MaxResistive => hermitian_part(&raw),
        Flavor::MaxMonotone => raw,
    };
    let rep = ExtendedGraphRep {
        flavor,
        matrix,
        multipliers: g,
        tol,
    };
    let gap = rep.reconstruct()?.gap(m)?;
    let st = tol.structural();
    if gap > st {
        return Err(Error::ExtensionFailed(format!(
            "extended graph representation does not reproduce the relation (gap {gap:e})"
        )));
    }
    let scale = spectral_norm(rep.matrix()).max(1.0);
    if rep.invariance_defect() > st * scale || rep.structure_defect() > st * scale {
        return Err(Error::ExtensionFailed(
            "extended graph representation violates its structural invariants".into(),
        ));
    }
    Ok(rep)
}

/// Representation `{(e, M̂ e − Ĝ λ) : Ĝ* e = 0}` obtained from the inverse
/// relation.
pub fn extended_graph_rep_inverse(m: &LinearRelation, flavor: Flavor) -> Result<ExtendedGraphRep> {
    extended_graph_rep(&m.inverse(), flavor)
}

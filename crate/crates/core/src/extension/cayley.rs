//! Cayley transform between monotone relations and contractions, and the
//! maximal monotone / maximal resistive extensions built on it.

use crate::error::{Error, Result};
use crate::relations::numeric::{
    hermitian_part, hstack, max_imag, orth_complement, pseudo_inverse_with,
    real_part, spectral_norm, svd_sorted, vstack,
};
use crate::relations::{Field, LinearRelation, Mat, TolerancePolicy, C64};

/// A linear map `V: dom V → K^n` with `dom V ⊂ K^n`, stored by its action on
/// an orthonormal basis of the domain.
#[derive(Clone, Debug)]
pub struct ContractionGraph {
    domain_basis: Mat,
    action: Mat,
    tol: TolerancePolicy,
}

impl ContractionGraph {
    /// `action` holds `V q_i` for the orthonormal columns `q_i` of `domain_basis`.
    pub fn new(domain_basis: Mat, action: Mat, tol: TolerancePolicy) -> Result<Self> {
        if domain_basis.shape() != action.shape() {
            return Err(Error::Shape(format!(
                "domain basis is {:?} but action is {:?}",
                domain_basis.shape(),
                action.shape()
            )));
        }
        let k = domain_basis.ncols();
        let gram = domain_basis.adjoint() * &domain_basis - Mat::identity(k, k);
        if spectral_norm(&gram) > tol.structural() {
            return Err(Error::InvalidMatrix("domain basis is not orthonormal".into()));
        }
        Ok(ContractionGraph {
            domain_basis,
            action,
            tol,
        })
    }

    /// Everywhere defined map given by a square matrix.
    pub fn from_matrix(v: &Mat) -> Result<Self> {
        if v.nrows() != v.ncols() {
            return Err(Error::Shape("contraction must be square".into()));
        }
        let n = v.nrows();
        Self::new(Mat::identity(n, n), v.clone(), TolerancePolicy::default())
    }

    pub fn ambient(&self) -> usize {
        self.domain_basis.nrows()
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_basis.ncols()
    }

    pub fn domain_basis(&self) -> &Mat {
        &self.domain_basis
    }

    pub fn action(&self) -> &Mat {
        &self.action
    }

    pub fn operator_norm(&self) -> f64 {
        spectral_norm(&self.action)
    }

    /// `V ∘ Π_{dom V}` as an `n × n` matrix.
    pub fn to_matrix(&self) -> Mat {
        &self.action * self.domain_basis.adjoint()
    }
}

/// Cayley transform `{(f + e, f − e) : (f, e) ∈ M}` of a monotone relation.
pub fn cayley(m: &LinearRelation) -> Result<ContractionGraph> {
    let report = m.classify()?;
    if !report.is_monotone {
        return Err(Error::NotMonotone);
    }
    let f = m.left_block();
    let e = m.right_block();
    let sum = &f + &e;
    let diff = &f - &e;
    let d = m.dim();
    let (u, s, w) = svd_sorted(&sum);
    let tol = m.tol();
    let thr = tol.rank_threshold(s.first().copied().unwrap_or(0.0), sum.nrows(), sum.ncols());
    if s.iter().filter(|&&x| x > thr).count() < d {
        // f + e = 0 forces f = e = 0 on a monotone relation
        return Err(Error::NotMonotone);
    }
    let mut inv_s = Mat::zeros(d, d);
    for i in 0..d {
        inv_s[(i, i)] = C64::new(1.0 / s[i], 0.0);
    }
    let action = diff * w * inv_s;
    ContractionGraph::new(u, action, *tol)
}

/// Inverse Cayley transform of an everywhere defined contraction. The result
/// `ran [(I + V)/2; (I − V)/2]` is maximal monotone.
pub fn inverse_cayley(v: &ContractionGraph) -> Result<LinearRelation> {
    let n = v.ambient();
    if v.domain_dim() < n {
        return Err(Error::PartialDomain {
            domain: v.domain_dim(),
            ambient: n,
        });
    }
    let norm = v.operator_norm();
    if norm > 1.0 + v.tol.structural() {
        return Err(Error::NotContraction(norm));
    }
    let vm = v.to_matrix();
    let id = Mat::identity(n, n);
    let half = C64::new(0.5, 0.0);
    let fg = vstack(&[&((&id + &vm) * half), &((&id - &vm) * half)]);
    LinearRelation::from_image_with(&fg, n, n, v.tol)
}

fn demote_if_real(rel: LinearRelation, input_field: Field) -> Result<LinearRelation> {
    if input_field == Field::Complex {
        return Ok(rel.with_field(Field::Complex));
    }
    let img = rel.image_basis();
    if max_imag(img) > rel.tol().structural() {
        return Err(Error::ExtensionFailed(
            "extension of a real relation has a non-negligible imaginary part".into(),
        ));
    }
    let tol = *rel.tol();
    let re = real_part(img);
    Ok(LinearRelation::from_image_with(&re, rel.n_left(), rel.n_right(), tol)?.with_field(Field::Real))
}

fn verify_extension(
    ext: &LinearRelation,
    source: &LinearRelation,
    want_resistive: bool,
) -> Result<()> {
    let tol = source.tol().structural();
    let report = ext.classify()?;
    let ok = if want_resistive {
        report.is_max_resistive
    } else {
        report.is_max_monotone
    };
    if !ok {
        return Err(Error::ExtensionFailed(format!(
            "output fails classification: {:?}",
            report.witness
        )));
    }
    let contain = ext.contains_relation(source)?;
    if contain > tol {
        return Err(Error::ExtensionFailed(format!(
            "output does not contain the input (residual {contain:e})"
        )));
    }
    Ok(())
}

/// Maximal monotone extension via `Ṽ = V ∘ Π_{dom V}`.
pub fn extend_maximal_monotone(m: &LinearRelation) -> Result<LinearRelation> {
    let report = m.classify()?;
    if !report.is_monotone {
        return Err(Error::NotMonotone);
    }
    if report.is_max_monotone {
        return Ok(m.clone());
    }
    let v = cayley(m)?;
    let full = ContractionGraph::from_matrix(&v.to_matrix())?;
    let ext = inverse_cayley(&full)?.with_tol(*m.tol());
    let ext = demote_if_real(ext, m.field())?;
    verify_extension(&ext, m, false)?;
    Ok(ext)
}

/// Maximal resistive extension.
///
/// `−R` is monotone and symmetric, so its Cayley transform `V` is Hermitian
/// as a form on `dom V`. In a frame `[Q, Q⊥]` adapted to `dom V`, `V`
/// has the column `[A; B]` with `A = A*`, and
/// `Ṽ = [[A, B*], [B, −I + B (I + A)† B*]]` is a Hermitian contraction
/// extending it. Its inverse Cayley transform, negated back, is the result.
pub fn extend_maximal_resistive(r: &LinearRelation) -> Result<LinearRelation> {
    let report = r.classify()?;
    if !report.is_resistive {
        return Err(Error::NotResistive);
    }
    if report.is_max_resistive {
        return Ok(r.clone());
    }
    let tol = *r.tol();
    let minus = C64::new(-1.0, 0.0);
    let neg = r.scale(minus);
    let v = cayley(&neg)?;
    let n = v.ambient();
    let q = v.domain_basis().clone();
    let q_perp = orth_complement(&q);
    let a = hermitian_part(&(q.adjoint() * v.action()));
    let b = q_perp.adjoint() * v.action();
    let k = q.ncols();
    let shift = Mat::identity(k, k) + &a;
    let c = -Mat::identity(n - k, n - k) + &b * pseudo_inverse_with(&shift, &tol)? * b.adjoint();
    let top = hstack(&[&a, &b.adjoint()]);
    let bottom = hstack(&[&b, &hermitian_part(&c)]);
    let vb = vstack(&[&top, &bottom]);
    let frame = hstack(&[&q, &q_perp]);
    let vt = &frame * vb * frame.adjoint();
    let full = ContractionGraph::new(Mat::identity(n, n), hermitian_part(&vt), tol)?;
    let ext = inverse_cayley(&full)?.scale(minus).with_tol(tol);
    let ext = demote_if_real(ext, r.field())?;
    verify_extension(&ext, r, true)?;
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::numeric::real_matrix;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn cayley_of_identity_graph_is_zero() {
        let g = LinearRelation::graph(&Mat::identity(3, 3)).unwrap();
        let v = cayley(&g).unwrap();
        assert_eq!(v.domain_dim(), 3);
        assert!(spectral_norm(&v.to_matrix()) < 1e-15);
    }

    #[test]
    fn cayley_of_zero_times_k_is_minus_identity() {
        let m = LinearRelation::from_image(&vstack(&[&Mat::zeros(2, 2), &Mat::identity(2, 2)]), 2, 2)
            .unwrap();
        let v = cayley(&m).unwrap();
        assert!(spectral_norm(&(v.to_matrix() + Mat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn cayley_of_monotone_line() {
        // span{((1,0),(1,0))}: Cayley image pairs ((2,0),(0,0))
        let m = LinearRelation::from_image(&real_matrix(4, 1, &[1.0, 0.0, 1.0, 0.0]), 2, 2).unwrap();
        let v = cayley(&m).unwrap();
        assert_eq!(v.domain_dim(), 1);
        assert!(spectral_norm(&(v.domain_basis() - real_matrix(2, 1, &[1.0, 0.0]))) < 1e-15);
        assert!(spectral_norm(v.action()) < 1e-15);
    }

    #[test]
    fn cayley_rejects_non_monotone() {
        let g = LinearRelation::graph(&(-Mat::identity(1, 1))).unwrap();
        assert_eq!(cayley(&g).unwrap_err(), Error::NotMonotone);
    }

    #[test]
    fn inverse_cayley_examples() {
        let zero = ContractionGraph::from_matrix(&Mat::zeros(2, 2)).unwrap();
        let g = inverse_cayley(&zero).unwrap();
        assert!(g.gap(&LinearRelation::graph(&Mat::identity(2, 2)).unwrap()).unwrap() < 1e-15);

        let minus = ContractionGraph::from_matrix(&(-Mat::identity(2, 2))).unwrap();
        let m = inverse_cayley(&minus).unwrap();
        let expect = LinearRelation::from_image(&vstack(&[&Mat::zeros(2, 2), &Mat::identity(2, 2)]), 2, 2)
            .unwrap();
        assert!(m.gap(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn inverse_cayley_errors() {
        let big = ContractionGraph::from_matrix(&(Mat::identity(2, 2) * c(1.5))).unwrap();
        assert!(matches!(inverse_cayley(&big), Err(Error::NotContraction(_))));
        let partial = ContractionGraph::new(
            real_matrix(2, 1, &[1.0, 0.0]),
            real_matrix(2, 1, &[0.0, 0.0]),
            TolerancePolicy::default(),
        )
        .unwrap();
        assert!(matches!(inverse_cayley(&partial), Err(Error::PartialDomain { domain: 1, ambient: 2 })));
    }

    #[test]
    fn monotone_extension_examples() {
        let g = LinearRelation::graph(&Mat::identity(2, 2)).unwrap();
        assert!(extend_maximal_monotone(&g).unwrap().gap(&g).unwrap() < 1e-15);

        let line = LinearRelation::from_image(&real_matrix(4, 1, &[1.0, 0.0, 1.0, 0.0]), 2, 2).unwrap();
        let ext = extend_maximal_monotone(&line).unwrap();
        assert_eq!(ext.dim(), 2);
        assert!(ext.contains_relation(&line).unwrap() < 1e-12);
        assert!(ext.classify().unwrap().is_max_monotone);
        assert_eq!(ext.field(), Field::Real);

        let zero = LinearRelation::zero(3, 3);
        let ext = extend_maximal_monotone(&zero).unwrap();
        assert!(ext.classify().unwrap().is_max_monotone);
    }

    #[test]
    fn resistive_extension_examples() {
        let g = LinearRelation::graph(&(-Mat::identity(2, 2))).unwrap();
        assert!(extend_maximal_resistive(&g).unwrap().gap(&g).unwrap() < 1e-15);

        // the pair ((1,0), (-1,0)) is resistive
        let line = LinearRelation::from_image(&real_matrix(4, 1, &[1.0, 0.0, -1.0, 0.0]), 2, 2).unwrap();
        let ext = extend_maximal_resistive(&line).unwrap();
        assert_eq!(ext.dim(), 2);
        assert!(ext.contains_relation(&line).unwrap() < 1e-12);
        assert!(ext.classify().unwrap().is_max_resistive);

        let zero = LinearRelation::zero(2, 2);
        let ext = extend_maximal_resistive(&zero).unwrap();
        assert!(ext.classify().unwrap().is_max_resistive);
        // {(0, e)}: zero flow for every effort
        assert!(ext.gap(&LinearRelation::inverse_graph(&Mat::zeros(2, 2)).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn resistive_extension_rejects_monotone_input() {
        let g = LinearRelation::graph(&Mat::identity(1, 1)).unwrap();
        let sub = LinearRelation::from_image(&real_matrix(2, 1, &[1.0, 1.0]), 1, 1).unwrap();
        assert_eq!(extend_maximal_resistive(&sub).unwrap_err(), Error::NotResistive);
        assert_eq!(extend_maximal_resistive(&g).unwrap_err(), Error::NotResistive);
    }

    #[test]
    fn neutral_vector_forces_multivalued_extension() {
        // R0 = span{((0,1),(-1,0))} is neutral; every maximal resistive
        // superset must be span{((0,1),0), (0,(1,0))}
        let r0 = LinearRelation::from_image(&real_matrix(4, 1, &[0.0, 1.0, -1.0, 0.0]), 2, 2).unwrap();
        let ext = extend_maximal_resistive(&r0).unwrap();
        let expect =
            LinearRelation::from_image(&real_matrix(4, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]), 2, 2)
                .unwrap();
        assert!(ext.gap(&expect).unwrap() < 1e-10, "gap {}", ext.gap(&expect).unwrap());
    }
}

use serde::{Deserialize, Serialize};

use super::numeric::{hermitian_part, max_eig, min_eig, spectral_norm};
use super::LinearRelation;
use crate::error::{Error, Result};

/// Structure verdicts for a relation in `K^n × K^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub is_lagrange: bool,
    pub is_dirac: bool,
    pub is_resistive: bool,
    pub is_max_resistive: bool,
    pub is_monotone: bool,
    pub is_max_monotone: bool,
    pub witness: StructureWitness,
}

/// Scalars behind each verdict, computed from an orthonormal image basis
/// `[P; S]` (left block `P`, right block `S`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureWitness {
    /// `‖S*P − P*S‖₂`
    pub hermitian_defect: f64,
    /// `‖S*P + P*S‖₂`
    pub skew_defect: f64,
    /// smallest eigenvalue of `S*P + P*S`
    pub monotone_min_eig: f64,
    /// largest eigenvalue of `(S*P + P*S)/2`
    pub resistive_max_eig: f64,
    pub dim: usize,
    pub n: usize,
    pub tol: f64,
}

pub(super) fn classify(a: &LinearRelation, tol: f64) -> Result<StructureReport> {
    if a.n_left() != a.n_right() {
        return Err(Error::Shape(format!(
            "structure classes need K^n × K^n, got K^{} × K^{}",
            a.n_left(),
            a.n_right()
        )));
    }
    let n = a.n_left();
    let p = a.left_block();
    let s = a.right_block();
    let sp = s.adjoint() * &p;
    let ps = p.adjoint() * &s;
    let hermitian_defect = spectral_norm(&(&sp - &ps));
    let skew_defect = spectral_norm(&(&sp + &ps));
    let sum = &sp + &ps;
    let monotone_min_eig = min_eig(&sum);
    let resistive_max_eig = max_eig(&hermitian_part(&sp));
    let full = a.dim() == n;

    let is_lagrange = hermitian_defect <= tol && full;
    let is_dirac = skew_defect <= tol && full;
    let is_monotone = monotone_min_eig >= -tol;
    let is_resistive = hermitian_defect <= tol && resistive_max_eig <= tol;
    Ok(StructureReport {
        is_lagrange,
        is_dirac,
        is_resistive,
        is_max_resistive: is_resistive && full,
        is_monotone,
        is_max_monotone: is_monotone && full,
        witness: StructureWitness {
            hermitian_defect,
            skew_defect,
            monotone_min_eig,
            resistive_max_eig,
            dim: a.dim(),
            n,
            tol,
        },
    })
}

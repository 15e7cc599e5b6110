//! The two port-Hamiltonian system formulations.
//!
//! A [`GeometricPH`] is a triple `(D, L, R)` of a Dirac structure on
//! `K^{n+r+m}`, a Lagrange structure on `K^n` and a maximal resistive
//! structure on `K^r`. Its solutions satisfy
//!
//! ```text
//! (−ẋ, f_R, y, e_L, e_R, u) ∈ D,   (x, e_L) ∈ L,   (f_R, e_R) ∈ R.
//! ```
//!
//! A [`DescriptorPH`] is the DAE
//!
//! ```text
//! d/dt Ez = (J − R) Q z + (B − P) u
//!       y = (B + P)* Q z + (S + N) u
//! ```
//!
//! with `E*Q = Q*E`, `J = −J*`, `N = −N*`, `R = R*`, `S = S*` and
//! `W = diag(Q*, I) [[R, P], [P*, S]] diag(Q, I) ⪰ 0`. The Hamiltonian is
//! `H(z) = ½ z*Q*Ez`.

mod power;
mod trajectory;

pub use power::{
    descriptor_power_residual, geometric_power_residual, DescriptorPowerReport,
    GeometricPowerReport,
};
pub use trajectory::{differentiate, Channel, Trajectory};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::numeric::{block_diag, check_finite, hermitian_part, min_eig, skew_part};
use crate::relations::{Field, LinearRelation, Mat, StructureReport, TolerancePolicy, Vector, C64};

#[derive(Clone, Debug)]
pub struct DescriptorPH {
    e: Mat,
    j: Mat,
    r: Mat,
    q: Mat,
    b: Mat,
    p: Mat,
    s: Mat,
    n: Mat,
    tol: TolerancePolicy,
}

fn check_shape(m: &Mat, rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::Shape(format!(
            "{name} is {}×{}, expected {rows}×{cols}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(m, name)
}

impl DescriptorPH {
    /// Checks shapes and finiteness only; use [`validate_descriptor`] for
    /// the structural conditions.
    #[allow(clippy::too_many_arguments)]
    pub fn new(e: Mat, j: Mat, r: Mat, q: Mat, b: Mat, p: Mat, s: Mat, n: Mat) -> Result<Self> {
        let dim = e.nrows();
        let m = b.ncols();
        check_shape(&e, dim, dim, "E")?;
        check_shape(&j, dim, dim, "J")?;
        check_shape(&r, dim, dim, "R")?;
        check_shape(&q, dim, dim, "Q")?;
        check_shape(&b, dim, m, "B")?;
        check_shape(&p, dim, m, "P")?;
        check_shape(&s, m, m, "S")?;
        check_shape(&n, m, m, "N")?;
        Ok(DescriptorPH {
            e,
            j,
            r,
            q,
            b,
            p,
            s,
            n,
            tol: TolerancePolicy::default(),
        })
    }

    pub fn with_tol(mut self, tol: TolerancePolicy) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> &TolerancePolicy {
        &self.tol
    }

    pub fn e(&self) -> &Mat {
        &self.e
    }
    pub fn j(&self) -> &Mat {
        &self.j
    }
    pub fn r(&self) -> &Mat {
        &self.r
    }
    pub fn q(&self) -> &Mat {
        &self.q
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn p(&self) -> &Mat {
        &self.p
    }
    pub fn s(&self) -> &Mat {
        &self.s
    }
    pub fn n(&self) -> &Mat {
        &self.n
    }

    pub fn state_dim(&self) -> usize {
        self.e.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn field(&self) -> Field {
        [&self.e, &self.j, &self.r, &self.q, &self.b, &self.p, &self.s, &self.n]
            .iter()
            .fold(Field::Real, |f, m| f.join(Field::of(m)))
    }

    /// `(J − R) Q`.
    pub fn a(&self) -> Mat {
        (&self.j - &self.r) * &self.q
    }

    /// `d/dt Ez = (J − R) Q z + (B − P) u`.
    pub fn rhs(&self, z: &Vector, u: &Vector) -> Vector {
        self.a() * z + (&self.b - &self.p) * u
    }

    /// `y = (B + P)* Q z + (S + N) u`.
    pub fn output(&self, z: &Vector, u: &Vector) -> Vector {
        (&self.b + &self.p).adjoint() * (&self.q * z) + (&self.s + &self.n) * u
    }

    /// The unconjugated block `[[R, P], [P*, S]]`.
    pub fn dissipation_block(&self) -> Mat {
        let top = crate::relations::numeric::hstack(&[&self.r, &self.p]);
        let bottom = crate::relations::numeric::hstack(&[&self.p.adjoint(), &self.s]);
        crate::relations::numeric::vstack(&[&top, &bottom])
    }

    /// `Q = I`, `P = 0` and `S = 0` exactly.
    pub fn is_standard_form(&self) -> bool {
        let n = self.state_dim();
        self.q == Mat::identity(n, n)
            && self.p.iter().all(|z| *z == C64::new(0.0, 0.0))
            && self.s.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    fn scale(&self) -> f64 {
        [&self.e, &self.j, &self.r, &self.q, &self.b, &self.p, &self.s, &self.n]
            .iter()
            .map(|m| m.norm())
            .fold(1.0, f64::max)
    }
}

/// Residuals of the defining conditions of a descriptor system. Symmetry
/// residuals are Frobenius norms of the offending part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorReport {
    /// `‖E*Q − Q*E‖_F`
    pub eq_symmetry: f64,
    /// `‖(J + J*)/2‖_F`
    pub j_skewness: f64,
    /// `‖(N + N*)/2‖_F`
    pub n_skewness: f64,
    /// `‖(R − R*)/2‖_F`
    pub r_symmetry: f64,
    /// `‖(S − S*)/2‖_F`
    pub s_symmetry: f64,
    /// smallest eigenvalue of `(W + W*)/2`
    pub w_min_eig: f64,
    pub tol: f64,
    pub passed: bool,
}

pub fn validate_descriptor(sys: &DescriptorPH) -> DescriptorReport {
    let eq = sys.e.adjoint() * &sys.q;
    let eq_symmetry = (&eq - eq.adjoint()).norm();
    let j_skewness = hermitian_part(&sys.j).norm();
    let n_skewness = hermitian_part(&sys.n).norm();
    let r_symmetry = skew_part(&sys.r).norm();
    let s_symmetry = skew_part(&sys.s).norm();
    let w_min_eig = min_eig(&compute_w(sys));
    let tol = sys.tol.structural() * sys.scale();
    let passed = [eq_symmetry, j_skewness, n_skewness, r_symmetry, s_symmetry]
        .iter()
        .all(|&x| x <= tol)
        && w_min_eig >= -tol;
    DescriptorReport {
        eq_symmetry,
        j_skewness,
        n_skewness,
        r_symmetry,
        s_symmetry,
        w_min_eig,
        tol,
        passed,
    }
}

/// `W = diag(Q*, I) [[R, P], [P*, S]] diag(Q, I)`, symmetrized.
pub fn compute_w(sys: &DescriptorPH) -> Mat {
    let m = sys.input_dim();
    let t = block_diag(&[&sys.q, &Mat::identity(m, m)]);
    hermitian_part(&(t.adjoint() * sys.dissipation_block() * t))
}

/// `½ z*Q*Ez` as a complex number; the imaginary part vanishes when
/// `E*Q = Q*E`.
pub fn energy(sys: &DescriptorPH, z: &Vector) -> Result<C64> {
    if z.len() != sys.state_dim() {
        return Err(Error::Shape(format!(
            "state has length {}, expected {}",
            z.len(),
            sys.state_dim()
        )));
    }
    Ok((&sys.q * z).dotc(&(&sys.e * z)) * 0.5)
}

/// `H(z) = ½ Re z*Q*Ez`.
pub fn hamiltonian(sys: &DescriptorPH, z: &Vector) -> Result<f64> {
    energy(sys, z).map(|h| h.re)
}

#[derive(Clone, Debug)]
pub struct GeometricPH {
    d: LinearRelation,
    l: LinearRelation,
    r: LinearRelation,
}

impl GeometricPH {
    /// Checks that `D ⊂ K^{n+r+m} × K^{n+r+m}` for the `n` of `L` and the
    /// `r` of `R`; use [`validate_geometric`] for the structure.
    pub fn new(d: LinearRelation, l: LinearRelation, r: LinearRelation) -> Result<Self> {
        if d.n_left() != d.n_right() || l.n_left() != l.n_right() || r.n_left() != r.n_right() {
            return Err(Error::Shape("D, L and R must live in K^k × K^k".into()));
        }
        if d.n_left() < l.n_left() + r.n_left() {
            return Err(Error::Shape(format!(
                "D lives in K^{} but n + r = {}",
                d.n_left(),
                l.n_left() + r.n_left()
            )));
        }
        Ok(GeometricPH { d, l, r })
    }

    pub fn d(&self) -> &LinearRelation {
        &self.d
    }
    pub fn l(&self) -> &LinearRelation {
        &self.l
    }
    pub fn r(&self) -> &LinearRelation {
        &self.r
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.l.n_left()
    }

    /// Resistive dimension.
    pub fn r_dim(&self) -> usize {
        self.r.n_left()
    }

    /// External dimension.
    pub fn m(&self) -> usize {
        self.d.n_left() - self.n() - self.r_dim()
    }

    pub fn field(&self) -> Field {
        self.d.field().join(self.l.field()).join(self.r.field())
    }

    pub fn with_tol(self, tol: TolerancePolicy) -> Self {
        GeometricPH {
            d: self.d.with_tol(tol),
            l: self.l.with_tol(tol),
            r: self.r.with_tol(tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricReport {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub d_is_dirac: bool,
    pub l_is_lagrange: bool,
    pub r_is_max_resistive: bool,
    pub d: StructureReport,
    pub l: StructureReport,
    pub r_structure: StructureReport,
    pub passed: bool,
}

pub fn validate_geometric(sys: &GeometricPH) -> GeometricReport {
    let d = sys.d.classify().expect("square by construction");
    let l = sys.l.classify().expect("square by construction");
    let r = sys.r.classify().expect("square by construction");
    let d_is_dirac = d.is_dirac;
    let l_is_lagrange = l.is_lagrange;
    let r_is_max_resistive = r.is_max_resistive;
    GeometricReport {
        n: sys.n(),
        r: sys.r_dim(),
        m: sys.m(),
        d_is_dirac,
        l_is_lagrange,
        r_is_max_resistive,
        d,
        l,
        r_structure: r,
        passed: d_is_dirac && l_is_lagrange && r_is_max_resistive,
    }
}

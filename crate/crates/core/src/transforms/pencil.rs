use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phcore::DescriptorPH;
use crate::relations::numeric::{hermitian_part, min_eig, rank_factor, spectral_norm, vstack};
use crate::relations::{Mat, TolerancePolicy, C64};

/// Seed of the default shift sequence.
pub const PENCIL_SEED: u64 = 0x5eed;

const SHIFTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilReport {
    pub regular: bool,
    pub shifts_tested: usize,
    /// first shift `λ` with `λE − A` nonsingular, as `[re, im]`
    pub witness: Option<[f64; 2]>,
    /// largest `σ_min / σ_max` of `λE − A` over the tested shifts
    pub best_conditioning: f64,
    /// whether a polynomial kernel vector was found (only run when every
    /// shift fails)
    pub polynomial_kernel: Option<bool>,
    /// `E = E* ⪰ 0`
    pub e_psd: bool,
    /// `ker E ∩ ker A = {0}`, reported when `E ⪰ 0`
    pub kernel_intersection_trivial: Option<bool>,
}

fn nonsingular(m: &Mat, tol: &TolerancePolicy) -> (bool, f64) {
    let n = m.nrows();
    if n == 0 {
        return (true, 1.0);
    }
    let f = rank_factor(m, tol).expect("finite pencil");
    let smax = f.singular_values[0];
    let smin = f.singular_values[n - 1];
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    (f.rank == n, ratio)
}

/// Whether `(λE − A) x(λ) ≡ 0` has a nonzero polynomial solution of degree
/// at most `n`. Coefficientwise: `A x₀ = 0`, `E x_{j−1} = A x_j`, `E x_d = 0`.
fn polynomial_kernel(e: &Mat, a: &Mat, tol: &TolerancePolicy) -> bool {
    let n = e.nrows();
    for d in 0..=n {
        let mut t = Mat::zeros((d + 2) * n, (d + 1) * n);
        for j in 0..=d {
            t.view_mut((j * n, j * n), (n, n)).copy_from(&-a);
            t.view_mut(((j + 1) * n, j * n), (n, n)).copy_from(e);
        }
        let f = rank_factor(&t, tol).expect("finite pencil");
        if f.rank < (d + 1) * n {
            return true;
        }
    }
    false
}

pub fn pencil_regular(e: &Mat, a: &Mat) -> Result<PencilReport> {
    pencil_regular_with(e, a, &TolerancePolicy::default(), PENCIL_SEED)
}

/// Regularity of `λE − A`, tested at seeded random complex shifts. When all
/// shifts give a numerically singular matrix, a polynomial kernel search
/// decides.
pub fn pencil_regular_with(e: &Mat, a: &Mat, tol: &TolerancePolicy, seed: u64) -> Result<PencilReport> {
    let n = e.nrows();
    if e.ncols() != n || a.nrows() != n || a.ncols() != n {
        return Err(Error::Shape(format!(
            "pencil needs square matrices of equal size, got {:?} and {:?}",
            e.shape(),
            a.shape()
        )));
    }
    // an E at roundoff level relative to A is treated as zero; otherwise the
    // shift scaling below would promote the noise to a full-rank block
    let an = a.norm();
    let mut en = e.norm();
    let zero = Mat::zeros(n, n);
    let e = if en <= tol.structural() * an { en = 0.0; &zero } else { e };
    let scale = if en > 0.0 { (an / en).max(1e-3) } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut witness = None;
    let mut tested = 0;
    for _ in 0..SHIFTS {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let lambda = C64::new(re, im) * scale;
        tested += 1;
        let (ok, ratio) = nonsingular(&(e * lambda - a), tol);
        best = best.max(ratio);
        if ok {
            witness = Some([lambda.re, lambda.im]);
            break;
        }
    }
    let polynomial = if witness.is_none() {
        Some(polynomial_kernel(e, a, tol))
    } else {
        None
    };
    let e_psd = spectral_norm(&(e - e.adjoint())) <= tol.structural() * en.max(1.0)
        && min_eig(&hermitian_part(e)) >= -tol.structural() * en.max(1.0);
    let kernel_intersection_trivial = if e_psd {
        Some(rank_factor(&vstack(&[e, a]), tol)?.rank == n)
    } else {
        None
    };
    Ok(PencilReport {
        regular: witness.is_some() || polynomial == Some(false),
        shifts_tested: tested,
        witness,
        best_conditioning: best,
        polynomial_kernel: polynomial,
        e_psd,
        kernel_intersection_trivial,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferSample {
    pub s: [f64; 2],
    /// smallest eigenvalue of `G(s) + G(s)*`
    pub min_eig: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveRealReport {
    pub samples: Vec<TransferSample>,
    pub min_eig: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Samples `G(s) = B*(sE − (J − R))⁻¹B + N` on the right half plane.
pub fn transfer_positive_real(sys: &DescriptorPH, points: &[C64]) -> Result<PositiveRealReport> {
    if !sys.is_standard_form() {
        return Err(Error::RequiresStandardForm);
    }
    let a = sys.j() - sys.r();
    let tol = sys.tol().structural();
    let mut samples = Vec::with_capacity(points.len());
    for &s in points {
        if !(s.re > 0.0) {
            return Err(Error::Shape(format!("sample point {s} is not in the right half plane")));
        }
        let m = sys.e() * s - &a;
        let (ok, _) = nonsingular(&m, sys.tol());
        let solved = if ok { m.lu().solve(sys.b()) } else { None };
        let x = solved.ok_or_else(|| Error::SingularShift(s.to_string()))?;
        let g = sys.b().adjoint() * x + sys.n();
        samples.push(TransferSample {
            s: [s.re, s.im],
            min_eig: min_eig(&(&g + g.adjoint())),
        });
    }
    let min = samples.iter().map(|t| t.min_eig).fold(f64::INFINITY, f64::min);
    let min = if samples.is_empty() { 0.0 } else { min };
    Ok(PositiveRealReport {
        samples,
        min_eig: min,
        tol,
        passed: min >= -tol,
    })
}

//! Seeded random instances: relations with prescribed structure and valid
//! port-Hamiltonian systems in both formulations.
//!
//! Used by the examples, the property tests and the acceptance suite. All
//! draws come from a ChaCha8 stream, so a seed fixes every instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::phcore::{DescriptorPH, GeometricPH};
use crate::relations::numeric::{block_diag, orth, vstack};
use crate::relations::{Field, LinearRelation, Mat, TolerancePolicy, C64};

pub struct Generator {
    rng: ChaCha8Rng,
    field: Field,
}

impl Generator {
    /// Real-valued instances.
    pub fn real(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field: Field::Real,
        }
    }

    /// Complex-valued instances.
    pub fn complex(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field: Field::Complex,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn scalar(&mut self) -> C64 {
        let re = self.gaussian();
        let im = match self.field {
            Field::Real => 0.0,
            Field::Complex => self.gaussian(),
        };
        C64::new(re, im)
    }

    /// Point of the open right half plane with log-uniform real part in
    /// `[1e-2, 1e2]` and Gaussian imaginary part of similar scale.
    pub fn right_half_plane_point(&mut self) -> C64 {
        let re = 10f64.powf(4.0 * self.uniform() - 2.0);
        let im = 10f64.powf(4.0 * self.uniform() - 2.0) * self.gaussian();
        C64::new(re, im)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |_, _| self.scalar())
    }

    pub fn vector(&mut self, n: usize) -> crate::relations::Vector {
        crate::relations::Vector::from_fn(n, |_, _| self.scalar())
    }

    pub fn unitary(&mut self, n: usize) -> Mat {
        loop {
            let q = orth(&self.matrix(n, n), &TolerancePolicy::default());
            if q.ncols() == n {
                return q;
            }
        }
    }

    pub fn hermitian(&mut self, n: usize) -> Mat {
        let a = self.matrix(n, n);
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    }

    pub fn skew(&mut self, n: usize) -> Mat {
        let a = self.matrix(n, n);
        (&a - a.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Positive semidefinite matrix of the given rank.
    pub fn psd(&mut self, n: usize, rank: usize) -> Mat {
        let f = self.matrix(n, rank);
        &f * f.adjoint()
    }

    /// Unitary change of coordinates applied to both components.
    fn rotate(&mut self, fg: &Mat, n: usize) -> Mat {
        let u = self.unitary(n);
        let uu = block_diag(&[&u, &u]);
        uu * fg
    }

    /// Swaps the pair `(f_i, e_i)` for a random subset of indices.
    /// `sign = -1` gives `(e_i, -f_i)`.
    fn swap_coordinates(&mut self, fg: &mut Mat, n: usize, sign: f64) {
        for i in 0..n {
            if self.coin(0.35) {
                for j in 0..fg.ncols() {
                    let f = fg[(i, j)];
                    let e = fg[(n + i, j)];
                    fg[(i, j)] = e;
                    fg[(n + i, j)] = f * sign;
                }
            }
        }
    }

    fn relation(&self, fg: &Mat, n_left: usize, n_right: usize) -> LinearRelation {
        LinearRelation::from_image(fg, n_left, n_right).expect("generator shapes are consistent")
    }

    /// Unstructured relation of the given dimension.
    pub fn any_relation(&mut self, n_left: usize, n_right: usize, dim: usize) -> LinearRelation {
        let fg = self.matrix(n_left + n_right, dim);
        self.relation(&fg, n_left, n_right)
    }

    /// Random Lagrange structure in `K^n × K^n`, often with nontrivial
    /// kernel and multivalued part.
    pub fn lagrange(&mut self, n: usize) -> LinearRelation {
        let u = self.unitary(n);
        let d = Mat::from_fn(n, n, |i, j| {
            if i == j && !self.coin(0.25) {
                C64::new(self.gaussian(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let h = &u * d * u.adjoint();
        let mut fg = vstack(&[&Mat::identity(n, n), &h]);
        self.swap_coordinates(&mut fg, n, -1.0);
        let fg = self.rotate(&fg, n);
        self.relation(&fg, n, n)
    }

    /// Lagrange structure whose Hamiltonian part is positive semidefinite,
    /// i.e. `-L` is resistive.
    pub fn nonnegative_lagrange(&mut self, n: usize) -> LinearRelation {
        self.max_resistive(n).scale(C64::new(-1.0, 0.0))
    }

    /// Random Dirac structure in `K^n × K^n`.
    pub fn dirac(&mut self, n: usize) -> LinearRelation {
        let rank = self.int(0, n);
        let a = self.matrix(n, rank);
        let b = self.matrix(n, rank);
        let k = &a * b.adjoint() - &b * a.adjoint();
        let mut fg = vstack(&[&Mat::identity(n, n), &k]);
        self.swap_coordinates(&mut fg, n, 1.0);
        let fg = self.rotate(&fg, n);
        self.relation(&fg, n, n)
    }

    /// Random maximal resistive structure: pairs `(cos θ_i, sin θ_i)` with
    /// `θ_i ∈ [π/2, π]` in a random orthonormal frame.
    pub fn max_resistive(&mut self, n: usize) -> LinearRelation {
        let u = self.unitary(n);
        let mut p = Mat::zeros(n, n);
        let mut s = Mat::zeros(n, n);
        for i in 0..n {
            let theta = match self.int(0, 5) {
                0 => std::f64::consts::FRAC_PI_2,
                1 => std::f64::consts::PI,
                _ => std::f64::consts::FRAC_PI_2 * (1.0 + self.uniform()),
            };
            p[(i, i)] = C64::new(theta.cos(), 0.0);
            s[(i, i)] = C64::new(theta.sin(), 0.0);
        }
        let fg = vstack(&[&(&u * p), &(&u * s)]);
        self.relation(&fg, n, n)
    }

    /// Random maximal monotone structure as the inverse Cayley image of a
    /// random contraction (normal with eigenvalues on the closed unit disk,
    /// or a scaled general matrix).
    pub fn max_monotone(&mut self, n: usize) -> LinearRelation {
        let v = if self.coin(0.5) {
            let u = self.unitary(n);
            let d = Mat::from_fn(n, n, |i, j| {
                if i != j {
                    return C64::new(0.0, 0.0);
                }
                match self.int(0, 4) {
                    0 => C64::new(1.0, 0.0),
                    1 => C64::new(-1.0, 0.0),
                    _ => {
                        let r = self.uniform().sqrt();
                        match self.field {
                            Field::Real => C64::new(if self.coin(0.5) { r } else { -r }, 0.0),
                            Field::Complex => C64::from_polar(r, 2.0 * std::f64::consts::PI * self.uniform()),
                        }
                    }
                }
            });
            &u * d * u.adjoint()
        } else {
            let a = self.matrix(n, n);
            let norm = crate::relations::numeric::spectral_norm(&a).max(1e-300);
            let rho = if self.coin(0.3) { 1.0 } else { self.uniform() };
            a * C64::new(rho / norm, 0.0)
        };
        let half = C64::new(0.5, 0.0);
        let id = Mat::identity(n, n);
        let fg = vstack(&[&((&id + &v) * half), &((&id - &v) * half)]);
        self.relation(&fg, n, n)
    }

    /// Random subspace of `a` of the given dimension.
    pub fn subrelation(&mut self, a: &LinearRelation, dim: usize) -> LinearRelation {
        let c = self.matrix(a.dim(), dim.min(a.dim()));
        let fg = a.image_basis() * c;
        self.relation(&fg, a.n_left(), a.n_right())
    }

    /// Random geometric pH system with state dimension `n`, resistive
    /// dimension `r` and `m` ports.
    pub fn geometric(&mut self, n: usize, r: usize, m: usize) -> GeometricPH {
        let d = self.dirac(n + r + m);
        let l = self.lagrange(n);
        let res = self.max_resistive(r);
        GeometricPH::new(d, l, res).expect("generated dimensions are consistent")
    }

    /// Random geometric pH system whose Lagrange structure has `-L`
    /// resistive (so the converted descriptor has `E = E* ⪰ 0`).
    pub fn geometric_nonnegative(&mut self, n: usize, r: usize, m: usize) -> GeometricPH {
        let d = self.dirac(n + r + m);
        let l = self.nonnegative_lagrange(n);
        let res = self.max_resistive(r);
        GeometricPH::new(d, l, res).expect("generated dimensions are consistent")
    }

    /// Random pH descriptor system with `ker E ∩ ker Q = {0}` and a
    /// positive semidefinite dissipation block `[[R, P], [P*, S]]`.
    pub fn descriptor(&mut self, n: usize, m: usize) -> DescriptorPH {
        let lag = self.lagrange(n);
        let t = Mat::identity(n, n) + self.matrix(n, n) * C64::new(0.3, 0.0);
        let e = lag.left_block() * &t;
        let q = lag.right_block() * &t;
        self.descriptor_with(e, q, m)
    }

    /// Random pH descriptor system with `Q = I` and `E = E* ⪰ 0`.
    pub fn descriptor_standard(&mut self, n: usize, m: usize) -> DescriptorPH {
        let rank = self.int(0, n);
        let e = self.psd(n, rank);
        let q = Mat::identity(n, n);
        let rank_w = self.int(0, n);
        let r = self.psd(n, rank_w);
        let j = self.skew(n);
        let b = self.matrix(n, m);
        let nn = self.skew(m);
        DescriptorPH::new(
            e,
            j,
            r,
            q,
            b,
            Mat::zeros(n, m),
            Mat::zeros(m, m),
            nn,
        )
        .expect("generated shapes are consistent")
    }

    /// Completes `(E, Q)` to a valid descriptor system.
    pub fn descriptor_with(&mut self, e: Mat, q: Mat, m: usize) -> DescriptorPH {
        let n = e.nrows();
        let rank = self.int(0, n + m);
        let w = self.psd(n + m, rank);
        let r = w.view((0, 0), (n, n)).into_owned();
        let p = w.view((0, n), (n, m)).into_owned();
        let s = w.view((n, n), (m, m)).into_owned();
        let j = self.skew(n);
        let nn = self.skew(m);
        let b = self.matrix(n, m);
        DescriptorPH::new(e, j, r, q, b, p, s, nn).expect("generated shapes are consistent")
    }
}

//! Physical parameters and truncated-Hamiltonian builders for the
//! quantum Rabi model.
//!
//! Two unitarily equivalent frames are provided:
//!
//! * `H_x = ω(a†a + ½) + ½Ω σ_z + g(σ₊ + σ₋)(a† + a)` — the lab frame;
//! * `H_z = ω(a†a + ½) + ½Ω σ_x − g σ_z(a† + a)` — after a rotation
//!   about the y axis, the frame every solver in this crate works in.
//!
//! Both are built in the σ_z ⊗ Fock product basis with photon-major
//! flattening: index = 2N + spin_bit, spin_bit 0 for up, 1 for down.

use crate::matrix::SymMatrix;
use crate::{RabiError, Result};

/// Physical triple (ω, Ω, g) defining the Hamiltonian, ℏ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Photon frequency ω (energy units).
    pub omega: f64,
    /// Atomic resonant frequency Ω.
    pub omega_a: f64,
    /// Atom-photon coupling strength g.
    pub g: f64,
}

impl ModelParams {
    /// Validating constructor. Negative g is rejected rather than
    /// silently mapped to λ → −λ, keeping the displacement sign
    /// convention unambiguous.
    pub fn new(omega: f64, omega_a: f64, g: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(RabiError::InvalidParameter(format!(
                "omega must be strictly positive and finite, got {omega}"
            )));
        }
        if !(omega_a >= 0.0) || !omega_a.is_finite() {
            return Err(RabiError::InvalidParameter(format!(
                "Omega must be non-negative and finite, got {omega_a}"
            )));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(RabiError::InvalidParameter(format!(
                "g must be non-negative and finite (negative g is spectrum-equivalent \
                 under lambda -> -lambda), got {g}"
            )));
        }
        Ok(Self { omega, omega_a, g })
    }
}

/// Spin label. In the rotated frame these are the σ_z eigenstates; the
/// |±⟩ (σ_x eigenstate) labels of the perturbative basis reuse the same
/// enum through [`Parity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    /// +1 for up, −1 for down (σ_z eigenvalue).
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

/// Parity label |±⟩ of the displaced-oscillator basis (eigenstates of
/// σ_x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    /// +1 for |+⟩, −1 for |−⟩.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
        }
    }
}

/// One basis state of the truncated spin ⊗ Fock product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub spin: Spin,
    pub photon_n: usize,
}

impl BasisIndex {
    /// Flattened photon-major index 2N + spin_bit.
    pub fn flat(self) -> usize {
        2 * self.photon_n + self.spin.bit()
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn from_flat(index: usize) -> Self {
        Self {
            spin: if index % 2 == 0 { Spin::Up } else { Spin::Down },
            photon_n: index / 2,
        }
    }
}

/// Fock cutoff and numerical tolerances for the exact solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Number of retained Fock levels; the matrix dimension is 2·n_max.
    pub n_max: usize,
    /// Off-diagonal convergence threshold for the Jacobi eigensolver,
    /// relative to the matrix norm.
    pub eig_tol: f64,
    /// Energy-change threshold for the cutoff-doubling convergence test,
    /// in absolute energy units.
    pub conv_tol: f64,
}

impl TruncationConfig {
    pub const DEFAULT_N_MAX: usize = 60;

    pub fn new(n_max: usize, eig_tol: f64, conv_tol: f64) -> Result<Self> {
        if n_max < 4 {
            return Err(RabiError::InvalidParameter(format!(
                "n_max must be at least 4, got {n_max}"
            )));
        }
        if n_max > 2048 {
            return Err(RabiError::InvalidParameter(format!(
                "n_max = {n_max} exceeds the dense-solver budget (max 2048)"
            )));
        }
        if !(eig_tol > 0.0) || !(conv_tol > 0.0) {
            return Err(RabiError::InvalidParameter(
                "eig_tol and conv_tol must be strictly positive".into(),
            ));
        }
        Ok(Self {
            n_max,
            eig_tol,
            conv_tol,
        })
    }

    pub fn with_n_max(n_max: usize) -> Result<Self> {
        Self::new(n_max, 1e-12, 1e-10)
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
            eig_tol: 1e-12,
            conv_tol: 1e-10,
        }
    }
}

/// Rotated-frame Hamiltonian H_z as a 2·n_max dense symmetric matrix.
///
/// Diagonal ω(N + ½); spin-flip block ½Ω between (up,N) and (down,N);
/// photon ladder −g·s·√(N+1) between (s,N) and (s,N+1) with s = ±1 the
/// σ_z eigenvalue.
pub fn build_h_z(params: &ModelParams, cutoff: &TruncationConfig) -> SymMatrix {
    let n_max = cutoff.n_max;
    let mut h = SymMatrix::zeros(2 * n_max);
    for n in 0..n_max {
        for spin in [Spin::Up, Spin::Down] {
            let i = BasisIndex { spin, photon_n: n }.flat();
            h[(i, i)] = params.omega * (n as f64 + 0.5);
        }
        // ½Ω σ_x couples the two spins at fixed N.
        let up = BasisIndex {
            spin: Spin::Up,
            photon_n: n,
        }
        .flat();
        let down = BasisIndex {
            spin: Spin::Down,
            photon_n: n,
        }
        .flat();
        h.set_sym(up, down, 0.5 * params.omega_a);
        // −g σ_z (a† + a) couples N to N+1 within each spin sector.
        if n + 1 < n_max {
            for spin in [Spin::Up, Spin::Down] {
                let i = BasisIndex { spin, photon_n: n }.flat();
                let j = BasisIndex {
                    spin,
                    photon_n: n + 1,
                }
                .flat();
                h.set_sym(i, j, -params.g * spin.sign() * ((n + 1) as f64).sqrt());
            }
        }
    }
    h
}

/// Lab-frame Hamiltonian H_x, unitarily equivalent to [`build_h_z`].
///
/// Diagonal ω(N + ½) ± ½Ω; coupling g√(N+1) between (up,N)↔(down,N+1)
/// and (down,N)↔(up,N+1).
pub fn build_h_x(params: &ModelParams, cutoff: &TruncationConfig) -> SymMatrix {
    let n_max = cutoff.n_max;
    let mut h = SymMatrix::zeros(2 * n_max);
    for n in 0..n_max {
        for spin in [Spin::Up, Spin::Down] {
            let i = BasisIndex { spin, photon_n: n }.flat();
            h[(i, i)] = params.omega * (n as f64 + 0.5) + 0.5 * params.omega_a * spin.sign();
        }
        if n + 1 < n_max {
            let amp = params.g * ((n + 1) as f64).sqrt();
            for spin in [Spin::Up, Spin::Down] {
                let i = BasisIndex { spin, photon_n: n }.flat();
                let j = BasisIndex {
                    spin: match spin {
                        Spin::Up => Spin::Down,
                        Spin::Down => Spin::Up,
                    },
                    photon_n: n + 1,
                }
                .flat();
                h.set_sym(i, j, amp);
            }
        }
    }
    h
}

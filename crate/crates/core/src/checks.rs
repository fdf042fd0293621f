//! Self-check suite: every module's invariants behind one entry point,
//! reported as pass/fail outcomes rather than panics. The CLI `check`
//! subcommand and the test suite both run through here.

use crate::exact;
use crate::grwa;
use crate::gvm;
use crate::harness::{self, Method};
use crate::model::{build_h_x, build_h_z, BasisIndex, ModelParams, Parity, Spin, TruncationConfig};
use crate::specfun::{displacement_element, laguerre};

/// Result of one invariant check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: false,
            detail: detail.into(),
        }
    }

    fn from_worst(name: &'static str, worst: f64, bound: f64) -> Self {
        Self {
            name,
            passed: worst <= bound,
            detail: format!("worst {worst:.3e}, bound {bound:.3e}"),
        }
    }
}

/// Parameter grids and tolerances for the suite. `omega_a` / `g`
/// overrides collapse the corresponding grid to a single value.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub n_max: usize,
    pub eig_tol: f64,
    pub omega: f64,
    pub omega_a: Option<f64>,
    pub g: Option<f64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            n_max: TruncationConfig::DEFAULT_N_MAX,
            eig_tol: 1e-12,
            omega: 1.0,
            omega_a: None,
            g: None,
        }
    }
}

impl CheckConfig {
    fn omega_a_grid(&self) -> Vec<f64> {
        match self.omega_a {
            Some(v) => vec![v],
            None => vec![0.0, 0.5, 1.0, 1.5, 2.0],
        }
    }

    fn g_grid(&self) -> Vec<f64> {
        match self.g {
            Some(v) => vec![v],
            None => vec![0.1, 0.3, 0.6, 1.0],
        }
    }

    fn cutoff(&self) -> TruncationConfig {
        TruncationConfig {
            n_max: self.n_max.max(4),
            eig_tol: self.eig_tol,
            conv_tol: 1e-10 * self.omega,
        }
    }
}

/// Run every invariant check; outcomes come back in a fixed order.
pub fn run_checks(cfg: &CheckConfig) -> Vec<CheckOutcome> {
    vec![
        laguerre_recurrence_vs_series(),
        displacement_unitarity(),
        displacement_parity(),
        builders_symmetric(cfg),
        uncoupled_ground_energy(cfg),
        frame_spectra_agree(cfg),
        ground_parity_sector(cfg),
        ns_truncation_monotone(cfg),
        ns_convergence(cfg),
        gvm_root_residual(cfg),
        gvm_decoupling_identity(cfg),
        variational_upper_bound(cfg),
        gvm_root_is_local_minimum(cfg),
        gvm_second_order_nonpositive(cfg),
        closed_energy_zero_atom_identity(cfg),
        closed_photon_monotone(cfg),
        p_matches_displacement_oracle(cfg),
        grwa_identities(cfg),
        gvm_beats_grwa_at_positive_detuning(cfg),
    ]
}

/// Explicit series Σ_{i=0}^{n} (-1)^i C(n+k, n-i) x^i / i!, evaluated
/// in exact rational arithmetic (the alternating sum cancels
/// catastrophically in f64 for large x). Independent of the recurrence
/// path it checks.
pub(crate) fn laguerre_series_exact(n: usize, k: usize, x: f64) -> f64 {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    let x = BigRational::from_float(x).expect("finite x");
    let mut sum = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut factorial = BigInt::one();
    for i in 0..=n {
        if i > 0 {
            x_pow *= &x;
            factorial *= BigInt::from(i);
        }
        // C(n+k, n-i) by the multiplicative formula.
        let mut binom = BigInt::one();
        for j in 0..(n - i) {
            binom = binom * BigInt::from(n + k - j) / BigInt::from(j + 1);
        }
        let term = BigRational::from(binom) * &x_pow / BigRational::from(factorial.clone());
        sum += if i % 2 == 0 { term } else { -term };
    }
    sum.to_f64().expect("rational fits f64")
}

fn laguerre_recurrence_vs_series() -> CheckOutcome {
    const NAME: &str = "specfun: Laguerre recurrence matches explicit series";
    let mut worst = 0.0f64;
    for n in 0..=30 {
        for k in 0..=10 {
            for &x in &[0.1, 1.0, 4.0, 16.0] {
                let rec = match laguerre(n, k, x) {
                    Ok(v) => v,
                    Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
                };
                let ser = laguerre_series_exact(n, k, x);
                let scale = rec.abs().max(ser.abs()).max(1.0);
                worst = worst.max((rec - ser).abs() / scale);
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-10)
}

fn displacement_unitarity() -> CheckOutcome {
    const NAME: &str = "specfun: displacement rows have unit norm";
    let mut worst = 0.0f64;
    for n in 0..=10 {
        for &alpha in &[0.25, 0.75, 1.5, -1.5] {
            let sum: f64 = (0..=n + 60)
                .map(|m| displacement_element(alpha, n, m).powi(2))
                .sum();
            worst = worst.max((sum - 1.0).abs());
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-8)
}

fn displacement_parity() -> CheckOutcome {
    const NAME: &str = "specfun: displacement parity symmetry D(-α) = (-1)^{N-M} D(α)";
    let mut worst = 0.0f64;
    for n in 0..=12usize {
        for m in 0..=12usize {
            for &alpha in &[0.3, 0.9, 1.4] {
                let sign = if (n as i64 - m as i64).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                let diff = (displacement_element(-alpha, n, m)
                    - sign * displacement_element(alpha, n, m))
                .abs();
                worst = worst.max(diff);
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-12)
}

fn builders_symmetric(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "model: Hamiltonian builders are exactly symmetric";
    let cutoff = TruncationConfig {
        n_max: 16,
        ..cfg.cutoff()
    };
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            worst = worst.max(build_h_z(&p, &cutoff).asymmetry());
            worst = worst.max(build_h_x(&p, &cutoff).asymmetry());
        }
    }
    CheckOutcome::from_worst(NAME, worst, 0.0)
}

fn uncoupled_ground_energy(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "model: g = 0 ground energy equals (ω-Ω)/2";
    let cutoff = TruncationConfig {
        n_max: 8,
        ..cfg.cutoff()
    };
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        let p = match ModelParams::new(cfg.omega, omega_a, 0.0) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        };
        match exact::eigensolve_symmetric(&build_h_z(&p, &cutoff), cfg.eig_tol) {
            Ok((evals, _)) => {
                worst = worst.max((evals[0] - 0.5 * (cfg.omega - omega_a)).abs());
            }
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-10 * cfg.omega)
}

fn frame_spectra_agree(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "model: H_x and H_z spectra agree (unitary equivalence)";
    let cutoff = TruncationConfig {
        n_max: 32,
        ..cfg.cutoff()
    };
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let hz = build_h_z(&p, &cutoff);
            let norm = hz.frobenius_norm();
            let ez = exact::eigensolve_symmetric(&hz, cfg.eig_tol);
            let ex = exact::eigensolve_symmetric(&build_h_x(&p, &cutoff), cfg.eig_tol);
            match (ez, ex) {
                (Ok((ez, _)), Ok((ex, _))) => {
                    // Only low-lying levels: the truncation edge differs
                    // between frames. Normalized by the matrix norm, the
                    // scale eig_tol is measured against.
                    for i in 0..6 {
                        worst = worst.max((ez[i] - ex[i]).abs() / norm);
                    }
                }
                _ => return CheckOutcome::fail(NAME, "eigensolver failure"),
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 10.0 * cfg.eig_tol)
}

fn ground_parity_sector(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "model: ground state lies in a single parity sector (|⟨Π⟩| = 1)";
    let cutoff = cfg.cutoff();
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let r = match exact::ground_state(&p, &cutoff) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let v = &r.ground_vector;
            let mut expectation = 0.0;
            for (i, &ci) in v.iter().enumerate() {
                let b = BasisIndex::from_flat(i);
                let image = BasisIndex {
                    spin: match b.spin {
                        Spin::Up => Spin::Down,
                        Spin::Down => Spin::Up,
                    },
                    photon_n: b.photon_n,
                };
                let sign = if b.photon_n % 2 == 0 { 1.0 } else { -1.0 };
                expectation += ci * sign * v[image.flat()];
            }
            worst = worst.max((expectation.abs() - 1.0).abs());
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-8)
}

fn ns_truncation_monotone(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "exact: ground energy is non-increasing in the Fock cutoff";
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let mut last = f64::INFINITY;
            for n_max in [8, 16, 32] {
                let cutoff = TruncationConfig {
                    n_max,
                    ..cfg.cutoff()
                };
                match exact::eigensolve_symmetric(&build_h_z(&p, &cutoff), cfg.eig_tol) {
                    Ok((evals, _)) => {
                        worst = worst.max(evals[0] - last);
                        last = evals[0];
                    }
                    Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
                }
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-12)
}

fn ns_convergence(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "exact: |E(2·n_max) - E(n_max)| within conv_tol across the grid";
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lo = TruncationConfig {
                n_max: cfg.n_max,
                ..cfg.cutoff()
            };
            let hi = TruncationConfig {
                n_max: 2 * cfg.n_max,
                ..cfg.cutoff()
            };
            let e_lo = exact::eigensolve_symmetric(&build_h_z(&p, &lo), cfg.eig_tol);
            let e_hi = exact::eigensolve_symmetric(&build_h_z(&p, &hi), cfg.eig_tol);
            match (e_lo, e_hi) {
                (Ok((lo, _)), Ok((hi, _))) => worst = worst.max((hi[0] - lo[0]).abs()),
                _ => return CheckOutcome::fail(NAME, "eigensolver failure"),
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-10 * cfg.omega)
}

fn gvm_root_residual(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: root residual |λ(ω+Ωe^{-2λ²})+g| within tolerance";
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lambda = match gvm::solve_lambda(&p, gvm::ROOT_TOL) {
                Ok(l) => l,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let residual =
                lambda * (p.omega + p.omega_a * (-2.0 * lambda * lambda).exp()) + p.g;
            worst = worst.max(residual.abs());
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-12 * cfg.omega)
}

fn gvm_decoupling_identity(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: |+,1⟩ channel closes at the variational point";
    let mut worst = 0.0f64;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lambda = match gvm::solve_lambda(&p, gvm::ROOT_TOL) {
                Ok(l) => l,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            worst = worst.max(gvm::decoupling_residual(&p, lambda).abs());
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-11 * cfg.omega)
}

fn variational_upper_bound(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: trial energy bounds the exact ground energy from above";
    let cutoff = cfg.cutoff();
    let mut worst = f64::NEG_INFINITY;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let ns = match exact::ground_state(&p, &cutoff) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lo = -2.0 * g / cfg.omega;
            for i in 0..=100 {
                let lambda = lo * (1.0 - i as f64 / 100.0);
                let e0 = gvm::e0_unperturbed(&p, lambda);
                // Violation depth (positive = bound broken).
                worst = worst.max(ns.ground_energy - e0);
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-9 * cfg.omega)
}

fn gvm_root_is_local_minimum(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: trial energy is locally minimal at the root";
    let mut worst = f64::NEG_INFINITY;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lambda = match gvm::solve_lambda(&p, gvm::ROOT_TOL) {
                Ok(l) => l,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let at_root = gvm::e0_unperturbed(&p, lambda);
            for step in [-1e-4, 1e-4] {
                worst = worst.max(at_root - gvm::e0_unperturbed(&p, lambda + step));
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-12 * cfg.omega)
}

fn gvm_second_order_nonpositive(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: second-order correction is non-positive";
    let mut worst = f64::NEG_INFINITY;
    for &omega_a in &cfg.omega_a_grid() {
        for &g in &cfg.g_grid() {
            let p = match ModelParams::new(cfg.omega, omega_a, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let lambda = match gvm::solve_lambda(&p, gvm::ROOT_TOL) {
                Ok(l) => l,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            match gvm::e0_second_order(&p, lambda, gvm::SERIES_TOL) {
                Ok((value, _)) => worst = worst.max(value),
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 0.0)
}

fn closed_energy_zero_atom_identity(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: closed-form energy reduces to ω/2 - g²/ω at Ω = 0";
    let mut worst = 0.0f64;
    for &g in &cfg.g_grid() {
        let p = match ModelParams::new(cfg.omega, 0.0, g) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        };
        let expected = 0.5 * cfg.omega - g * g / cfg.omega;
        worst = worst.max((gvm::energy_closed_form(&p) - expected).abs());
    }
    CheckOutcome::from_worst(NAME, worst, 0.0)
}

fn closed_photon_monotone(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: closed-form photon number strictly decreasing in Ω";
    for &g in &cfg.g_grid() {
        if g == 0.0 {
            continue;
        }
        let mut last = f64::INFINITY;
        for i in 0..=40 {
            let p = match ModelParams::new(cfg.omega, i as f64 * 0.05 * cfg.omega, g) {
                Ok(p) => p,
                Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
            };
            let v = gvm::mean_photon_closed(&p);
            if v >= last {
                return CheckOutcome::fail(NAME, format!("not decreasing at Ω index {i}, g={g}"));
            }
            last = v;
        }
    }
    CheckOutcome::pass(NAME, "strictly decreasing on the Ω grid")
}

fn p_matches_displacement_oracle(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "gvm: P_{N,M} equals ±½Ω·⟨N|e^{2λ(a†-a)}|M⟩";
    let p = match ModelParams::new(cfg.omega, cfg.omega_a.unwrap_or(1.5), cfg.g.unwrap_or(0.45)) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
    };
    let mut worst = 0.0f64;
    for &lambda in &[-0.05, -0.3, -0.6] {
        for n in 0..=20usize {
            for m in n.saturating_sub(8)..=n {
                let oracle = 0.5 * p.omega_a * displacement_element(2.0 * lambda, n, m);
                for parity in [Parity::Plus, Parity::Minus] {
                    let elem = match gvm::matrix_element_p(&p, lambda, n, m, parity) {
                        Ok(v) => v,
                        Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
                    };
                    worst = worst.max((elem - parity.sign() * oracle).abs());
                }
            }
        }
    }
    CheckOutcome::from_worst(NAME, worst, 1e-10)
}

fn grwa_identities(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "grwa: Ω = 0 energy identity and Ω-independent photon number";
    for &g in &cfg.g_grid() {
        let p0 = match ModelParams::new(cfg.omega, 0.0, g) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        };
        if grwa::grwa_energy(&p0) != gvm::energy_closed_form(&p0) {
            return CheckOutcome::fail(NAME, format!("Ω=0 energies differ at g={g}"));
        }
        let pa = ModelParams::new(cfg.omega, 0.3, g).unwrap();
        let pb = ModelParams::new(cfg.omega, 2.7, g).unwrap();
        if grwa::grwa_mean_photon(&pa).to_bits() != grwa::grwa_mean_photon(&pb).to_bits() {
            return CheckOutcome::fail(NAME, format!("photon number depends on Ω at g={g}"));
        }
    }
    CheckOutcome::pass(NAME, "identities hold bitwise")
}

fn gvm_beats_grwa_at_positive_detuning(cfg: &CheckConfig) -> CheckOutcome {
    const NAME: &str = "harness: GVM error below GRWA error for Ω > ω";
    let cutoff = cfg.cutoff();
    for &g in &[0.2, 0.6] {
        let spec = harness::SweepSpec {
            axis: harness::Axis::Omega,
            start: 0.0,
            stop: 2.0 * cfg.omega,
            count: 41,
            fixed: g * cfg.omega,
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: harness::Observable::Energy,
            omega: cfg.omega,
        };
        let rows = match harness::run_sweep(&spec, &cutoff) {
            Ok(rows) => rows,
            Err(e) => return CheckOutcome::fail(NAME, e.to_string()),
        };
        for row in rows.iter().filter(|r| r.x > cfg.omega) {
            let (gvm_err, grwa_err) = (row.err_gvm.unwrap(), row.err_grwa.unwrap());
            if gvm_err >= grwa_err {
                return CheckOutcome::fail(
                    NAME,
                    format!("g={g}, Ω={}: err_gvm {gvm_err:.3e} ≥ err_grwa {grwa_err:.3e}", row.x),
                );
            }
        }
    }
    CheckOutcome::pass(NAME, "strict ordering holds on both coupling lines")
}

//! Preparation of the six two-qubit circuit output states as density matrices.
//!
//! Qubit ordering: qubit 0 is the most significant bit of the basis index,
//! so the basis is |00>, |01>, |10>, |11> and a gate G on qubit 0 acts as
//! `kron(G, I)`.

use std::fmt;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Seed used for the `random_entangled` circuit whenever the caller does not
/// pick one explicitly (CLI name resolution, canonical experiment ordering).
pub const DEFAULT_RANDOM_CIRCUIT_SEED: u64 = 42;

/// The six circuits of the experiment suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitId {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    Qft2,
    RandomEntangled(u64),
}

impl CircuitId {
    /// Canonical experiment order used for file naming and train-all output.
    pub fn canonical_order() -> [CircuitId; 6] {
        [
            CircuitId::BellPhiPlus,
            CircuitId::BellPhiMinus,
            CircuitId::BellPsiPlus,
            CircuitId::BellPsiMinus,
            CircuitId::Qft2,
            CircuitId::RandomEntangled(DEFAULT_RANDOM_CIRCUIT_SEED),
        ]
    }

    /// Resolves a CLI name. `random_entangled` gets the default circuit seed.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "bell_phi_plus" => Ok(CircuitId::BellPhiPlus),
            "bell_phi_minus" => Ok(CircuitId::BellPhiMinus),
            "bell_psi_plus" => Ok(CircuitId::BellPsiPlus),
            "bell_psi_minus" => Ok(CircuitId::BellPsiMinus),
            "qft2" => Ok(CircuitId::Qft2),
            "random_entangled" => Ok(CircuitId::RandomEntangled(DEFAULT_RANDOM_CIRCUIT_SEED)),
            other => Err(Error::InvalidInput(format!(
                "unknown circuit '{other}' (expected one of: bell_phi_plus, bell_phi_minus, \
                 bell_psi_plus, bell_psi_minus, qft2, random_entangled)"
            ))),
        }
    }
}

impl fmt::Display for CircuitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CircuitId::BellPhiPlus => "bell_phi_plus",
            CircuitId::BellPhiMinus => "bell_phi_minus",
            CircuitId::BellPsiPlus => "bell_psi_plus",
            CircuitId::BellPsiMinus => "bell_psi_minus",
            CircuitId::Qft2 => "qft2",
            CircuitId::RandomEntangled(_) => "random_entangled",
        };
        f.write_str(name)
    }
}

/// Validated two-qubit quantum state: Hermitian, unit trace, positive
/// semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the three state invariants and wraps the matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::InvalidState(format!(
                "expected a 4x4 density matrix, got {}x{}",
                mat.dim(),
                mat.dim()
            )));
        }
        let herm = mat.hermiticity_residual();
        if herm >= 1e-12 {
            return Err(Error::InvalidState(format!(
                "not Hermitian: residual {herm:.3e}"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() >= 1e-12 || trace.im.abs() >= 1e-12 {
            return Err(Error::InvalidState(format!(
                "trace {trace} differs from 1"
            )));
        }
        let min_eig = mat.hermitian_eigen()?.min_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Purity `tr(rho^2)`; equals 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.mat
            .matmul(&self.mat)
            .expect("same dimension")
            .trace()
            .re
    }
}

/// Outer product |psi><psi| of a normalized length-4 amplitude vector.
pub fn pure_to_density(amplitudes: &[Complex64; 4]) -> Result<DensityMatrix> {
    let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() >= 1e-10 {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let mut mat = ComplexMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            mat.set(i, j, amplitudes[i] * amplitudes[j].conj());
        }
    }
    DensityMatrix::new(mat)
}

/// Returns the pure output state of the circuit applied to |00>.
pub fn prepare(circuit: CircuitId) -> DensityMatrix {
    let amplitudes = state_vector(circuit);
    pure_to_density(&amplitudes).expect("circuit outputs are normalized")
}

fn state_vector(circuit: CircuitId) -> [Complex64; 4] {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match circuit {
        CircuitId::BellPhiPlus => [h, z, z, h],
        CircuitId::BellPhiMinus => [h, z, z, -h],
        CircuitId::BellPsiPlus => [z, h, h, z],
        CircuitId::BellPsiMinus => [z, h, -h, z],
        CircuitId::Qft2 => {
            // Image of |00> under the QFT is the first column of its matrix.
            let f = qft2_matrix();
            [f.get(0, 0), f.get(1, 0), f.get(2, 0), f.get(3, 0)]
        }
        CircuitId::RandomEntangled(seed) => random_entangled_vector(seed),
    }
}

/// Two-qubit quantum Fourier transform matrix, entries `omega^(jk) / 2` with
/// `omega = i`.
fn qft2_matrix() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for j in 0..4 {
        for k in 0..4 {
            let phase = std::f64::consts::TAU * (j * k % 4) as f64 / 4.0;
            m.set(j, k, Complex64::new(0.5 * phase.cos(), 0.5 * phase.sin()));
        }
    }
    m
}

fn rx(theta: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ],
    )
    .expect("static shape")
}

fn ry(theta: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ComplexMatrix::from_real(2, &[c, -s, s, c]).expect("static shape")
}

fn rz(theta: f64) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ],
    )
    .expect("static shape")
}

/// CNOT with control on qubit 0 (most significant bit), target on qubit 1:
/// swaps |10> and |11>.
fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("static shape")
}

/// Deterministic entangling circuit on |00>: two layers of
/// `Rx (x) Rx`, `Rz (x) Rz`, CNOT(0 -> 1), followed by `Ry (x) Ry`.
/// All ten angles come from one SplitMix64 stream seeded with `seed`.
fn random_entangled_vector(seed: u64) -> [Complex64; 4] {
    let mut rng = SplitMix64::new(seed);
    let mut draw = || rng.next_angle();

    let mut psi = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];

    for _layer in 0..2 {
        let gate = rx(draw()).kron(&rx(draw()));
        psi = apply_gate(&gate, &psi);
        let gate = rz(draw()).kron(&rz(draw()));
        psi = apply_gate(&gate, &psi);
        psi = apply_gate(&cnot(), &psi);
    }
    let gate = ry(draw()).kron(&ry(draw()));
    apply_gate(&gate, &psi)
}

fn apply_gate(gate: &ComplexMatrix, psi: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, slot) in out.iter_mut().enumerate() {
        for (j, amp) in psi.iter().enumerate() {
            *slot += gate.get(i, j) * amp;
        }
    }
    out
}

/// Partial transpose over qubit 1; a negative eigenvalue certifies
/// entanglement for two-qubit states (Peres-Horodecki).
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for i0 in 0..2 {
        for i1 in 0..2 {
            for j0 in 0..2 {
                for j1 in 0..2 {
                    // (i0 i1, j0 j1) <- (i0 j1, j0 i1)
                    out.set(
                        2 * i0 + i1,
                        2 * j0 + j1,
                        m.get(2 * i0 + j1, 2 * j0 + i1),
                    );
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_display_round_trip() {
        for name in [
            "bell_phi_plus",
            "bell_phi_minus",
            "bell_psi_plus",
            "bell_psi_minus",
            "qft2",
            "random_entangled",
        ] {
            let id = CircuitId::parse(name).unwrap();
            assert_eq!(id.to_string(), name);
        }
        assert!(CircuitId::parse("ghz").is_err());
    }

    #[test]
    fn bell_phi_plus_matches_known_matrix() {
        let rho = prepare(CircuitId::BellPhiPlus);
        let m = rho.matrix();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((m.get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
        }
        let mass: f64 = m.entries().iter().map(|z| z.norm_sqr()).sum();
        assert!((mass - 4.0 * 0.25).abs() < 1e-14); // nothing outside the four corners
        assert!((m.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qft2_is_the_uniform_projector() {
        let rho = prepare(CircuitId::Qft2);
        for &z in rho.matrix().entries() {
            assert!((z - c(0.25, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn psi_minus_has_negative_coherence() {
        let rho = prepare(CircuitId::BellPsiMinus);
        let m = rho.matrix();
        assert!((m.get(1, 2) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((m.get(2, 1) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((m.get(1, 1) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pure_to_density_examples() {
        let rho = pure_to_density(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((rho.matrix().get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let err = pure_to_density(&[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]);
        assert!(matches!(err, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn prepared_states_are_pure() {
        for circuit in CircuitId::canonical_order() {
            let rho = prepare(circuit);
            assert!((rho.purity() - 1.0).abs() < 1e-10, "{circuit} not pure");
        }
    }

    #[test]
    fn bell_states_are_pairwise_orthogonal() {
        let bells: Vec<_> = [
            CircuitId::BellPhiPlus,
            CircuitId::BellPhiMinus,
            CircuitId::BellPsiPlus,
            CircuitId::BellPsiMinus,
        ]
        .iter()
        .map(|&c| prepare(c))
        .collect();
        for i in 0..4 {
            for j in 0..4 {
                let overlap = bells[i]
                    .matrix()
                    .matmul(bells[j].matrix())
                    .unwrap()
                    .trace()
                    .re;
                if i == j {
                    assert!((overlap - 1.0).abs() < 1e-12);
                } else {
                    assert!(overlap.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn random_circuit_is_deterministic() {
        let a = prepare(CircuitId::RandomEntangled(42));
        let b = prepare(CircuitId::RandomEntangled(42));
        assert_eq!(a.matrix().entries(), b.matrix().entries());

        let other = prepare(CircuitId::RandomEntangled(43));
        assert!(a.matrix().frobenius_distance(other.matrix()).unwrap() > 1e-3);
    }

    #[test]
    fn random_circuit_seed_42_is_entangled() {
        let rho = prepare(CircuitId::RandomEntangled(42));
        let pt = partial_transpose(&rho);
        let min_eig = pt.hermitian_eigen().unwrap().min_eigenvalue();
        assert!(min_eig < -1e-3, "partial transpose min eigenvalue {min_eig}");
    }

    #[test]
    fn partial_transpose_detects_separability_of_product_states() {
        let rho = pure_to_density(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let pt = partial_transpose(&rho);
        assert!(pt.hermitian_eigen().unwrap().min_eigenvalue() > -1e-12);
    }
}

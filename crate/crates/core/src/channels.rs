//! The five noise channels as Kraus sets on the full two-qubit space.
//!
//! Depolarizing noise is global on the d = 4 system, realized as the uniform
//! two-qubit Pauli twirl, so that the channel action equals
//! `(1 - p) rho + p I/4`. The four single-qubit channels act independently on
//! each qubit at the same rate: the composite operators are all products
//! `K_i (x) K_j` of the single-qubit Kraus pairs.

use std::fmt;

use crate::linalg::{pauli_basis, pauli_x, pauli_z, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// The five supported noise channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelId {
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    PhaseFlip,
    BitFlip,
}

impl ChannelId {
    /// Canonical experiment order used for file naming and train-all output.
    pub fn canonical_order() -> [ChannelId; 5] {
        [
            ChannelId::Depolarizing,
            ChannelId::AmplitudeDamping,
            ChannelId::PhaseDamping,
            ChannelId::PhaseFlip,
            ChannelId::BitFlip,
        ]
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "depolarizing" => Ok(ChannelId::Depolarizing),
            "amplitude_damping" => Ok(ChannelId::AmplitudeDamping),
            "phase_damping" => Ok(ChannelId::PhaseDamping),
            "phase_flip" => Ok(ChannelId::PhaseFlip),
            "bit_flip" => Ok(ChannelId::BitFlip),
            other => Err(Error::InvalidInput(format!(
                "unknown channel '{other}' (expected one of: depolarizing, amplitude_damping, \
                 phase_damping, phase_flip, bit_flip)"
            ))),
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ChannelId::Depolarizing => "depolarizing",
            ChannelId::AmplitudeDamping => "amplitude_damping",
            ChannelId::PhaseDamping => "phase_damping",
            ChannelId::PhaseFlip => "phase_flip",
            ChannelId::BitFlip => "bit_flip",
        };
        f.write_str(name)
    }
}

/// Kraus operators realizing one channel at one noise rate on the two-qubit
/// space. Construction through [`kraus`] guarantees CPTP completeness.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub channel: ChannelId,
    pub rate: f64,
    pub operators: Vec<ComplexMatrix>,
}

/// Builds the Kraus set for `channel` at `rate`. Errors if `rate` lies
/// outside `[0, 1)`.
pub fn kraus(channel: ChannelId, rate: f64) -> Result<KrausSet> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::RateOutOfRange(rate));
    }
    let operators = match channel {
        ChannelId::Depolarizing => depolarizing_operators(rate),
        ChannelId::AmplitudeDamping => composite(&amplitude_damping_pair(rate)),
        ChannelId::PhaseDamping => composite(&phase_damping_pair(rate)),
        ChannelId::PhaseFlip => composite(&flip_pair(rate, pauli_z())),
        ChannelId::BitFlip => composite(&flip_pair(rate, pauli_x())),
    };
    Ok(KrausSet {
        channel,
        rate,
        operators,
    })
}

/// Uniform two-qubit Pauli twirl: `sqrt(1 - 15p/16) I4` plus
/// `sqrt(p/16) sig_a (x) sig_b` over the fifteen non-identity Pauli pairs.
fn depolarizing_operators(p: f64) -> Vec<ComplexMatrix> {
    let paulis = pauli_basis();
    let mut ops = Vec::with_capacity(16);
    for (a, pa) in paulis.iter().enumerate() {
        for (b, pb) in paulis.iter().enumerate() {
            let weight = if a == 0 && b == 0 {
                (1.0 - 15.0 * p / 16.0).sqrt()
            } else {
                (p / 16.0).sqrt()
            };
            ops.push(pa.kron(pb).scale_re(weight));
        }
    }
    ops
}

/// Amplitude damping pair: E0 = diag(1, sqrt(1-g)), E1 = sqrt(g) |0><1|.
fn amplitude_damping_pair(gamma: f64) -> [ComplexMatrix; 2] {
    let e0 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]).expect("static");
    let e1 = ComplexMatrix::from_real(2, &[0.0, gamma.sqrt(), 0.0, 0.0]).expect("static");
    [e0, e1]
}

/// Phase damping pair: E0 = diag(1, sqrt(1-g)), E1 = sqrt(g) |1><1|.
fn phase_damping_pair(gamma: f64) -> [ComplexMatrix; 2] {
    let e0 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]).expect("static");
    let e1 = ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, gamma.sqrt()]).expect("static");
    [e0, e1]
}

/// Probabilistic Pauli pair: {sqrt(1-p) I, sqrt(p) P}.
fn flip_pair(p: f64, pauli: ComplexMatrix) -> [ComplexMatrix; 2] {
    let e0 = ComplexMatrix::identity(2).scale_re((1.0 - p).sqrt());
    let e1 = pauli.scale_re(p.sqrt());
    [e0, e1]
}

/// Extends a single-qubit pair to both qubits: all products `E_i (x) E_j`.
fn composite(pair: &[ComplexMatrix; 2]) -> Vec<ComplexMatrix> {
    let mut ops = Vec::with_capacity(4);
    for ei in pair {
        for ej in pair {
            ops.push(ei.kron(ej));
        }
    }
    ops
}

/// Applies the channel: `sum_i K_i rho K_i'`. The result is validated
/// against all density-matrix invariants.
pub fn apply(k: &KrausSet, rho: &DensityMatrix) -> DensityMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for op in &k.operators {
        let term = op
            .matmul(rho.matrix())
            .and_then(|m| m.matmul(&op.adjoint()))
            .expect("uniform 4x4 dimensions");
        out = out.add(&term).expect("uniform 4x4 dimensions");
    }
    DensityMatrix::new(out).expect("CPTP channels preserve state invariants")
}

/// Exact evaluation of the global depolarizing action
/// `(1 - p) rho + p I/4`; serves as the oracle for the Kraus path.
pub fn apply_depolarizing_closed_form(rho: &DensityMatrix, p: f64) -> DensityMatrix {
    let mixed = ComplexMatrix::identity(4).scale_re(p / 4.0);
    let mat = rho.matrix().scale_re(1.0 - p).add(&mixed).expect("4x4");
    DensityMatrix::new(mat).expect("convex mixture of states is a state")
}

/// CPTP completeness residual `||sum_i K_i' K_i - I4||_F`.
pub fn validate_cptp(k: &KrausSet) -> f64 {
    completeness_residual(&k.operators)
}

/// Completeness residual of an arbitrary operator list.
pub fn completeness_residual(operators: &[ComplexMatrix]) -> f64 {
    let mut sum = ComplexMatrix::zeros(4);
    for op in operators {
        let term = op.adjoint().matmul(op).expect("uniform dimensions");
        sum = sum.add(&term).expect("uniform dimensions");
    }
    sum.frobenius_distance(&ComplexMatrix::identity(4))
        .expect("uniform dimensions")
}

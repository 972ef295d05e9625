//! Parameterized Hermitian observables, expectation values, invariance
//! residuals and the learned-observable property report.
//!
//! Observables are parameterized by real Pauli coefficients (four per qubit)
//! rather than raw matrix entries, so Hermiticity holds by construction and
//! gradients are unconstrained.

use num_complex::Complex64;
use serde::Deserialize;

use crate::channels::{kraus, KrausSet};
use crate::learning::NoiseGrid;
use crate::linalg::{pauli_basis, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// The eight learnable coefficients: `(c_I, c_X, c_Y, c_Z)` per qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableParams {
    pub qubit0: [f64; 4],
    pub qubit1: [f64; 4],
}

impl ObservableParams {
    pub fn new(qubit0: [f64; 4], qubit1: [f64; 4]) -> Result<Self> {
        if !qubit0.iter().chain(&qubit1).all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { qubit0, qubit1 })
    }

    /// Parameters encoding the identity observable I (x) I.
    pub fn identity() -> Self {
        Self {
            qubit0: [1.0, 0.0, 0.0, 0.0],
            qubit1: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Parameters encoding Z (x) Z.
    pub fn pauli_zz() -> Self {
        Self {
            qubit0: [0.0, 0.0, 0.0, 1.0],
            qubit1: [0.0, 0.0, 0.0, 1.0],
        }
    }

    /// Flat view in the update order used by the trainer: qubit 0 first.
    pub fn to_flat(self) -> [f64; 8] {
        let mut out = [0.0; 8];
        out[..4].copy_from_slice(&self.qubit0);
        out[4..].copy_from_slice(&self.qubit1);
        out
    }

    pub fn from_flat(flat: [f64; 8]) -> Self {
        let mut qubit0 = [0.0; 4];
        let mut qubit1 = [0.0; 4];
        qubit0.copy_from_slice(&flat[..4]);
        qubit1.copy_from_slice(&flat[4..]);
        Self { qubit0, qubit1 }
    }
}

/// A Hermitian 4x4 observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    mat: ComplexMatrix,
}

impl Observable {
    /// Wraps an explicit matrix, enforcing Hermiticity within 1e-12.
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self> {
        let residual = mat.hermiticity_residual();
        if residual >= 1e-12 {
            return Err(Error::NotHermitian {
                residual,
                tolerance: 1e-12,
            });
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Builds `O = O1 (x) O2` where each factor is the real Pauli combination
/// given by the coefficients.
pub fn build(params: &ObservableParams) -> Observable {
    let o1 = single_qubit_combination(&params.qubit0);
    let o2 = single_qubit_combination(&params.qubit1);
    Observable { mat: o1.kron(&o2) }
}

fn single_qubit_combination(coeffs: &[f64; 4]) -> ComplexMatrix {
    let paulis = pauli_basis();
    let mut out = ComplexMatrix::zeros(2);
    for (c, p) in coeffs.iter().zip(&paulis) {
        out = out.add(&p.scale_re(*c)).expect("2x2");
    }
    out
}

/// Expectation value `Re tr(O rho)`. Errors if the imaginary residue of the
/// trace reaches 1e-10, which signals corrupted inputs.
pub fn expectation(o: &Observable, rho: &DensityMatrix) -> Result<f64> {
    let value = o.mat.matmul(rho.matrix())?.trace();
    if value.im.abs() >= 1e-10 {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// Invariance diagnostics for one observable against one Kraus set.
///
/// `sum_residual` is the fixed-point residual `||sum_i K_i' O K_i - O||_F`.
/// `per_kraus_residuals` holds the commutation residuals `||K_i O - O K_i||_F`
/// (one per operator); these are the per-operator conditions, and neither
/// quantity is inferred from the other. `state_gap`, when a state and a grid
/// are supplied, is the worst deviation of the expectation from its ideal
/// value across the grid rates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InvarianceReport {
    pub sum_residual: f64,
    pub per_kraus_residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_gap: Option<f64>,
}

/// Computes the invariance report for `o` under `k`; see
/// [`InvarianceReport`] for the exact quantities.
pub fn invariance_report(
    o: &Observable,
    k: &KrausSet,
    rho: Option<&DensityMatrix>,
    grid: Option<&NoiseGrid>,
) -> InvarianceReport {
    let mut sum = ComplexMatrix::zeros(4);
    let mut per_kraus = Vec::with_capacity(k.operators.len());
    for op in &k.operators {
        let conj = op
            .adjoint()
            .matmul(&o.mat)
            .and_then(|m| m.matmul(op))
            .expect("uniform 4x4 dimensions");
        sum = sum.add(&conj).expect("uniform 4x4 dimensions");

        let commutator = op
            .matmul(&o.mat)
            .and_then(|ko| o.mat.matmul(op).map(|ok| (ko, ok)))
            .and_then(|(ko, ok)| ko.sub(&ok))
            .expect("uniform 4x4 dimensions");
        per_kraus.push(commutator.frobenius_norm());
    }
    let sum_residual = sum.frobenius_distance(&o.mat).expect("uniform dimensions");

    let state_gap = match (rho, grid) {
        (Some(rho), Some(grid)) => {
            let ideal = expectation(o, rho).expect("validated inputs");
            let gap = grid
                .rates()
                .iter()
                .map(|&rate| {
                    let noisy = crate::channels::apply(
                        &kraus(k.channel, rate).expect("grid rates lie in [0, 1)"),
                        rho,
                    );
                    (expectation(o, &noisy).expect("validated inputs") - ideal).abs()
                })
                .fold(0.0_f64, f64::max);
            Some(gap)
        }
        _ => None,
    };

    InvarianceReport {
        sum_residual,
        per_kraus_residuals: per_kraus,
        state_gap,
    }
}

/// `|tr(O rho) - tr(O)/4|`: zero exactly when the expectation of `O` on
/// `rho` is rate-independent under global depolarizing noise, because
/// `<O>(p) = (1-p) tr(O rho) + p tr(O)/4`.
pub fn state_invariance_condition_depolarizing(o: &Observable, rho: &DensityMatrix) -> f64 {
    let ideal = expectation(o, rho).expect("validated inputs");
    let mixed = o.mat.trace().re / 4.0;
    (ideal - mixed).abs()
}

/// Spectral and structural properties of one observable.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertiesReport {
    /// `||O - O'||_F`.
    pub hermiticity_residual: f64,
    /// Real spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Largest pairwise eigenvector overlap `|<v_i|v_j>|`, i != j.
    pub max_eigenvector_overlap: f64,
    /// `|sum(lambda) - tr(O)|`.
    pub eigenvalue_sum_trace_gap: f64,
    /// Two-qubit Pauli coefficients `c_ab = tr((sig_a (x) sig_b) O) / 4`,
    /// indexed `[a][b]` over I, X, Y, Z.
    pub pauli_coefficients: [[f64; 4]; 4],
}

/// Computes the property report used to verify the learned observables.
pub fn properties_report(o: &Observable) -> PropertiesReport {
    let eigen = o
        .mat
        .hermitian_eigen()
        .expect("observables are Hermitian by construction");

    let mut max_overlap: f64 = 0.0;
    let n = eigen.eigenvectors.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let inner: Complex64 = eigen.eigenvectors[i]
                .iter()
                .zip(&eigen.eigenvectors[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            max_overlap = max_overlap.max(inner.norm());
        }
    }

    let eig_sum: f64 = eigen.eigenvalues.iter().sum();

    PropertiesReport {
        hermiticity_residual: o.mat.hermiticity_residual(),
        eigenvalues: eigen.eigenvalues,
        max_eigenvector_overlap: max_overlap,
        eigenvalue_sum_trace_gap: (eig_sum - o.mat.trace().re).abs(),
        pauli_coefficients: pauli_decompose(o),
    }
}

/// Two-qubit Pauli decomposition `c_ab = tr((sig_a (x) sig_b) O) / 4`.
pub fn pauli_decompose(o: &Observable) -> [[f64; 4]; 4] {
    let paulis = pauli_basis();
    let mut coeffs = [[0.0; 4]; 4];
    for (a, pa) in paulis.iter().enumerate() {
        for (b, pb) in paulis.iter().enumerate() {
            let basis = pa.kron(pb);
            coeffs[a][b] = basis.matmul(&o.mat).expect("4x4").trace().re / 4.0;
        }
    }
    coeffs
}

/// Rebuilds an observable from its sixteen Pauli coefficients.
pub fn from_pauli_coefficients(coeffs: &[[f64; 4]; 4]) -> Observable {
    let paulis = pauli_basis();
    let mut mat = ComplexMatrix::zeros(4);
    for (a, pa) in paulis.iter().enumerate() {
        for (b, pb) in paulis.iter().enumerate() {
            mat = mat
                .add(&pa.kron(pb).scale_re(coeffs[a][b]))
                .expect("4x4");
        }
    }
    Observable { mat }
}

/// One qubit's serialized coefficients.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct QubitCoeffs {
    pub coeffs: [f64; 4],
}

/// The observable file schema. Written with every coefficient at 17
/// significant digits so files round-trip bit for bit; `loss_history` is
/// present on trainer output and optional on read.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ObservableRecord {
    pub circuit: String,
    pub channel: String,
    pub seed: u64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub qubit_observables: [QubitCoeffs; 2],
    pub final_loss: f64,
    #[serde(default)]
    pub loss_history: Option<Vec<f64>>,
}

/// Formats a float as a JSON number with 17 significant digits.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_f64_list(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", body.join(", "))
}

impl ObservableRecord {
    pub fn new(params: &ObservableParams) -> Self {
        Self {
            circuit: String::new(),
            channel: String::new(),
            seed: 0,
            epochs: 0,
            learning_rate: 0.0,
            qubit_observables: [
                QubitCoeffs {
                    coeffs: params.qubit0,
                },
                QubitCoeffs {
                    coeffs: params.qubit1,
                },
            ],
            final_loss: 0.0,
            loss_history: None,
        }
    }

    pub fn params(&self) -> Result<ObservableParams> {
        ObservableParams::new(
            self.qubit_observables[0].coeffs,
            self.qubit_observables[1].coeffs,
        )
    }

    /// Serializes to the fixed JSON schema. Field order and float formatting
    /// are pinned so identical records produce identical bytes.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"circuit\": {},\n", json_string(&self.circuit)));
        out.push_str(&format!("  \"channel\": {},\n", json_string(&self.channel)));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"epochs\": {},\n", self.epochs));
        out.push_str(&format!(
            "  \"learning_rate\": {},\n",
            fmt_f64(self.learning_rate)
        ));
        out.push_str("  \"qubit_observables\": [\n");
        for (i, q) in self.qubit_observables.iter().enumerate() {
            let sep = if i == 0 { "," } else { "" };
            out.push_str(&format!(
                "    {{\"coeffs\": {}}}{sep}\n",
                fmt_f64_list(&q.coeffs)
            ));
        }
        out.push_str("  ],\n");
        out.push_str(&format!("  \"final_loss\": {}", fmt_f64(self.final_loss)));
        if let Some(history) = &self.loss_history {
            out.push_str(&format!(
                ",\n  \"loss_history\": {}",
                fmt_f64_list(history)
            ));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

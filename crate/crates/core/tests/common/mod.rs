//! Shared helpers for the integration suites: seeded random states,
//! observables and Kraus sets.

use num_complex::Complex64;
use qrobs_core::linalg::ComplexMatrix;
use qrobs_core::observables::{build, Observable, ObservableParams};
use qrobs_core::rng::SplitMix64;
use qrobs_core::states::DensityMatrix;

pub fn random_complex(rng: &mut SplitMix64) -> Complex64 {
    Complex64::new(rng.next_symmetric(), rng.next_symmetric())
}

/// Ginibre construction: `A A'` normalized to unit trace is a valid state.
pub fn random_density(rng: &mut SplitMix64) -> DensityMatrix {
    let entries = (0..16).map(|_| random_complex(rng)).collect();
    let a = ComplexMatrix::new(4, entries).expect("shape");
    let aa = a.matmul(&a.adjoint()).expect("4x4");
    DensityMatrix::new(aa.scale_re(1.0 / aa.trace().re)).expect("Ginibre states are valid")
}

/// Random pure state density matrix.
pub fn random_pure_density(rng: &mut SplitMix64) -> DensityMatrix {
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    loop {
        for a in &mut amps {
            *a = random_complex(rng);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            for a in &mut amps {
                *a /= norm;
            }
            break;
        }
    }
    qrobs_core::states::pure_to_density(&amps).expect("normalized amplitudes")
}

pub fn random_params(rng: &mut SplitMix64) -> ObservableParams {
    let mut flat = [0.0; 8];
    for x in &mut flat {
        *x = rng.next_symmetric();
    }
    ObservableParams::from_flat(flat)
}

pub fn random_observable(rng: &mut SplitMix64) -> Observable {
    build(&random_params(rng))
}

/// Random Hermitian 4x4 matrix wrapped as an observable (not necessarily a
/// Pauli product).
pub fn random_hermitian_observable(rng: &mut SplitMix64) -> Observable {
    let entries = (0..16).map(|_| random_complex(rng)).collect();
    let a = ComplexMatrix::new(4, entries).expect("shape");
    let herm = a.add(&a.adjoint()).expect("4x4").scale_re(0.5);
    Observable::from_matrix(herm).expect("symmetrized matrix is Hermitian")
}

/// A random two-operator Kraus set: the two 4x4 blocks of a random 8x4
/// isometry, so completeness holds by construction.
pub fn random_kraus_pair(rng: &mut SplitMix64) -> Vec<ComplexMatrix> {
    // Gram-Schmidt on four random vectors in C^8.
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(4);
    while columns.len() < 4 {
        let mut v: Vec<Complex64> = (0..8).map(|_| random_complex(rng)).collect();
        for existing in &columns {
            let overlap: Complex64 = existing.iter().zip(&v).map(|(e, x)| e.conj() * x).sum();
            for (x, e) in v.iter_mut().zip(existing) {
                *x -= overlap * e;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in &mut v {
                *x /= norm;
            }
            columns.push(v);
        }
    }

    let mut top = ComplexMatrix::zeros(4);
    let mut bottom = ComplexMatrix::zeros(4);
    for (col, v) in columns.iter().enumerate() {
        for row in 0..4 {
            top.set(row, col, v[row]);
            bottom.set(row, col, v[row + 4]);
        }
    }
    vec![top, bottom]
}

//! Minimal dense complex linear algebra for 2x2 and 4x4 matrices.
//!
//! Row-major storage with value semantics; matrices are tiny, so there is no
//! sparsity or blocking. The Hermitian eigensolver uses cyclic Jacobi
//! rotations (the 2x2 case is solved in closed form).

use num_complex::Complex64;

use crate::{Error, Result};

/// Hermiticity tolerance on `||A - A'||_F` accepted by [`ComplexMatrix::hermitian_eigen`].
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius mass below which the Jacobi iteration stops.
const JACOBI_OFF_TOL: f64 = 1e-12;

/// Maximum number of Jacobi sweeps before reporting non-convergence.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Standard matrix product. Errors on dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; the result has dimension `self.dim * other.dim`
    /// with block structure `a[i,j] * b`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let aij = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, aij * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Frobenius norm `sqrt(sum |a_ij|^2)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `||a - b||_F`. Errors on dimension mismatch.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// `||A - A'||_F`, zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint())
            .expect("same dimension")
            .frobenius_norm()
    }

    /// Full real spectrum with orthonormal eigenvectors, ascending eigenvalue
    /// order. The input must be Hermitian within [`HERMITICITY_TOL`].
    pub fn hermitian_eigen(&self) -> Result<EigenDecomposition> {
        let residual = self.hermiticity_residual();
        if residual >= HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                residual,
                tolerance: HERMITICITY_TOL,
            });
        }
        if self.dim == 2 {
            return Ok(eigen_2x2(self));
        }
        jacobi_eigen(self)
    }
}

/// Result of a Hermitian eigendecomposition: eigenvalues ascending, each
/// paired with a unit-norm eigenvector.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Rebuilds `V diag(lambda) V'`; used by reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    let add = v[i] * v[j].conj() * lambda;
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        out
    }
}

/// Closed-form eigendecomposition of a Hermitian 2x2 matrix.
fn eigen_2x2(a: &ComplexMatrix) -> EigenDecomposition {
    let alpha = a.get(0, 0).re;
    let delta = a.get(1, 1).re;
    let beta = a.get(0, 1);
    let r = beta.norm();

    if r < 1e-300 {
        // Diagonal already; order the basis vectors by eigenvalue.
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (vals, vecs) = if alpha <= delta {
            (vec![alpha, delta], vec![vec![one, zero], vec![zero, one]])
        } else {
            (vec![delta, alpha], vec![vec![zero, one], vec![one, zero]])
        };
        return EigenDecomposition {
            eigenvalues: vals,
            eigenvectors: vecs,
        };
    }

    let mid = 0.5 * (alpha + delta);
    let half = 0.5 * (alpha - delta);
    let disc = half.hypot(r);
    let lo = mid - disc;
    let hi = mid + disc;

    // Eigenvector for the eigenvalue farther from a11, where (beta, l - alpha)
    // is well conditioned; the second vector is its orthogonal complement.
    let lambda = if (lo - alpha).abs() >= (hi - alpha).abs() { lo } else { hi };
    let v0 = beta;
    let v1 = Complex64::new(lambda - alpha, 0.0);
    let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let v = [v0 / norm, v1 / norm];
    let w = [-v[1].conj(), v[0].conj()];

    if lambda == lo {
        EigenDecomposition {
            eigenvalues: vec![lo, hi],
            eigenvectors: vec![v.to_vec(), w.to_vec()],
        }
    } else {
        EigenDecomposition {
            eigenvalues: vec![lo, hi],
            eigenvectors: vec![w.to_vec(), v.to_vec()],
        }
    }
}

/// Off-diagonal Frobenius mass, the Jacobi convergence measure.
fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi iteration for Hermitian matrices of any dimension.
///
/// Each rotation zeroes one off-diagonal pair with a unitary plane rotation
/// whose phase absorbs the complex argument of the pivot entry.
fn jacobi_eigen(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    while off_diagonal_norm(&m) >= JACOBI_OFF_TOL {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;

        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m.get(p, q);
                let r = beta.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = beta / r;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // A <- J' A J with J[p,p] = c, J[p,q] = s, J[q,p] = -conj(s), J[q,q] = c.
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp * c - akq * s.conj());
                    m.set(k, q, akp * s + akq * c);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, apk * c - aqk * s);
                    m.set(q, k, apk * s.conj() + aqk * c);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s.conj());
                    v.set(k, q, vkp * s + vkq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v.get(row, col)).collect())
        .collect();

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// 2x2 identity.
pub fn pauli_i() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static entries")
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("static entries")
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static entries")
}

/// Hadamard gate (also a valid Hermitian observable).
pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, &[h, h, h, -h]).expect("static entries")
}

/// The single-qubit Pauli basis in the fixed order I, X, Y, Z.
pub fn pauli_basis() -> [ComplexMatrix; 4] {
    [pauli_i(), pauli_x(), pauli_y(), pauli_z()]
}

//! Fixed toy sweep on the depolarized Bell state, cross-evaluation of all
//! learned observables over every circuit-channel pair, and the
//! standard-deviation histogram.

use num_complex::Complex64;

use crate::channels::apply_depolarizing_closed_form;
use crate::learning::{canonical_pairs, EvalContext, NoiseGrid, TrainResult};
use crate::linalg::{hadamard, pauli_x, pauli_z, ComplexMatrix};
use crate::observables::{expectation, Observable};
use crate::states::{prepare, CircuitId};
use crate::{Error, Result};

/// Histogram bin width for the standard-deviation counts.
pub const DEFAULT_BIN_WIDTH: f64 = 0.02;

/// Standard deviations below this threshold land in the dedicated zero bin.
pub const ZERO_BIN_THRESHOLD: f64 = 1e-6;

/// One row of the toy sweep: depolarization rate and four expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyRow {
    pub p: f64,
    pub exp_zz: f64,
    pub exp_xx: f64,
    pub exp_hh: f64,
    pub exp_o_optimized: f64,
}

/// The 25-row toy sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyTable {
    pub rows: Vec<ToyRow>,
}

impl ToyTable {
    /// Renders the fixed CSV layout `p,exp_zz,exp_xx,exp_hh,exp_o_optimized`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,exp_zz,exp_xx,exp_hh,exp_o_optimized\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.p, row.exp_zz, row.exp_xx, row.exp_hh, row.exp_o_optimized
            ));
        }
        out
    }
}

/// The fixed benchmark observable of the toy sweep, embedded with its
/// printed three-decimal precision.
pub fn toy_optimized_observable() -> Observable {
    let c = Complex64::new;
    let entries = vec![
        c(0.804, 0.0), c(0.086, 0.138), c(0.739, 0.050), c(0.070, 0.132),
        c(0.086, -0.138), c(0.302, 0.0), c(0.087, -0.122), c(0.277, 0.019),
        c(0.739, -0.050), c(0.087, 0.122), c(1.253, 0.0), c(0.133, 0.215),
        c(0.070, -0.132), c(0.277, -0.019), c(0.133, -0.215), c(0.470, 0.0),
    ];
    let mat = ComplexMatrix::new(4, entries).expect("static entries");
    Observable::from_matrix(mat).expect("Hermitian by construction")
}

/// Sweeps Z(x)Z, X(x)X, H(x)H and the fixed benchmark observable over the
/// depolarized Bell state across the standard grid.
pub fn toy_experiment() -> ToyTable {
    let rho = prepare(CircuitId::BellPhiPlus);
    let grid = NoiseGrid::standard();

    let zz = Observable::from_matrix(pauli_z().kron(&pauli_z())).expect("Hermitian");
    let xx = Observable::from_matrix(pauli_x().kron(&pauli_x())).expect("Hermitian");
    let hh = Observable::from_matrix(hadamard().kron(&hadamard())).expect("Hermitian");
    let opt = toy_optimized_observable();

    let rows = grid
        .rates()
        .iter()
        .map(|&p| {
            let noisy = apply_depolarizing_closed_form(&rho, p);
            let ev = |o: &Observable| expectation(o, &noisy).expect("validated inputs");
            ToyRow {
                p,
                exp_zz: ev(&zz),
                exp_xx: ev(&xx),
                exp_hh: ev(&hh),
                exp_o_optimized: ev(&opt),
            }
        })
        .collect();

    ToyTable { rows }
}

/// Summary statistics of one observable evaluated across the grid on one
/// circuit-channel pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl CellStats {
    /// Population statistics of a non-empty sample.
    fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Self {
            mean,
            std: var.max(0.0).sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// 30x30 cross-evaluation: rows are learned observables, columns are
/// circuit-channel pairs, each cell summarizing the 25 grid expectations.
#[derive(Debug, Clone)]
pub struct CrossEvalReport {
    /// The canonical pair labels shared by rows and columns.
    pub pairs: Vec<(CircuitId, crate::channels::ChannelId)>,
    cells: Vec<CellStats>,
}

impl CrossEvalReport {
    pub fn cell(&self, row: usize, col: usize) -> &CellStats {
        &self.cells[row * self.pairs.len() + col]
    }

    pub fn cells(&self) -> &[CellStats] {
        &self.cells
    }

    /// Renders the fixed CSV layout
    /// `observable_circuit,observable_channel,eval_circuit,eval_channel,mean,std,min,max`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("observable_circuit,observable_channel,eval_circuit,eval_channel,mean,std,min,max\n");
        for (row, (oc, och)) in self.pairs.iter().enumerate() {
            for (col, (ec, ech)) in self.pairs.iter().enumerate() {
                let cell = self.cell(row, col);
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    oc, och, ec, ech, cell.mean, cell.std, cell.min, cell.max
                ));
            }
        }
        out
    }
}

/// Evaluates every learned observable on every circuit-channel pair.
/// Expects exactly the thirty results in canonical order.
pub fn cross_evaluate(results: &[TrainResult]) -> Result<CrossEvalReport> {
    let pairs = canonical_pairs();
    if results.len() != pairs.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} training results, got {}",
            pairs.len(),
            results.len()
        )));
    }
    for (result, (circuit, channel)) in results.iter().zip(&pairs) {
        if result.config.circuit != *circuit || result.config.channel != *channel {
            return Err(Error::InvalidInput(format!(
                "results out of canonical order: found {}/{} where {}/{} was expected",
                result.config.circuit, result.config.channel, circuit, channel
            )));
        }
    }

    let grid = NoiseGrid::standard();
    let contexts: Vec<EvalContext> = pairs
        .iter()
        .map(|&(circuit, channel)| EvalContext::new(circuit, channel, &grid))
        .collect();

    let mut cells = Vec::with_capacity(pairs.len() * pairs.len());
    for result in results {
        for context in &contexts {
            let values = context.predictions(&result.params);
            cells.push(CellStats::from_values(&values));
        }
    }

    Ok(CrossEvalReport { pairs, cells })
}

/// Histogram of the 900 cell standard deviations.
///
/// The first entry is a dedicated zero bin (lower edge 0) counting cells
/// with `std < 1e-6`; the remaining values are binned uniformly by
/// `floor(std / bin_width)`, empty in-range bins included.
pub fn stddev_histogram(report: &CrossEvalReport, bin_width: f64) -> Vec<(f64, u64)> {
    assert!(bin_width > 0.0, "bin width must be positive");

    let mut zero_count = 0u64;
    let mut binned: Vec<u64> = Vec::new();
    for cell in report.cells() {
        if cell.std < ZERO_BIN_THRESHOLD {
            zero_count += 1;
        } else {
            let index = (cell.std / bin_width).floor() as usize;
            if binned.len() <= index {
                binned.resize(index + 1, 0);
            }
            binned[index] += 1;
        }
    }

    let mut out = vec![(0.0, zero_count)];
    for (index, count) in binned.into_iter().enumerate() {
        out.push((index as f64 * bin_width, count));
    }
    out
}

/// Renders a histogram as `bin_lower,count` CSV; the zero bin comes first.
pub fn histogram_to_csv(histogram: &[(f64, u64)]) -> String {
    let mut out = String::from("bin_lower,count\n");
    for (lower, count) in histogram {
        out.push_str(&format!("{lower},{count}\n"));
    }
    out
}

//! Training framework: noise-rate grid, ideal target, absolute-square loss,
//! three gradient modes and plain gradient descent over the thirty
//! circuit-channel combinations.

use std::fmt;

use crate::channels::{apply, kraus, ChannelId};
use crate::observables::{build, expectation, ObservableParams, ObservableRecord};
use crate::rng::{derive_seed, SplitMix64};
use crate::states::{prepare, CircuitId, DensityMatrix};
use crate::{Error, Result};

/// Default number of gradient-descent steps.
pub const DEFAULT_EPOCHS: usize = 300;

/// Default learning rate.
pub const DEFAULT_LEARNING_RATE: f64 = 0.1;

/// Initialization scale of the traceless (X, Y, Z) coefficients relative to
/// the identity coefficient. Training starts in a small random neighborhood
/// of a multiple of the identity, the trivially noise-invariant observable,
/// and grows only the structure the circuit-channel pair rewards.
pub const TRACELESS_INIT_SCALE: f64 = 1e-8;

/// Number of grid points.
pub const GRID_POINTS: usize = 25;

/// The noise-rate grid: 25 uniform rates `i/25` spanning `[0, 0.96]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseGrid {
    rates: Vec<f64>,
}

impl NoiseGrid {
    /// The standard experiment grid, `rates[i] = i/25` for `i = 0..24`.
    pub fn standard() -> Self {
        Self {
            rates: (0..GRID_POINTS).map(|i| i as f64 / GRID_POINTS as f64).collect(),
        }
    }

    /// Validates a custom grid: 25 strictly increasing rates in `[0, 1)`.
    pub fn from_rates(rates: Vec<f64>) -> Result<Self> {
        if rates.len() != GRID_POINTS {
            return Err(Error::InvalidInput(format!(
                "expected {GRID_POINTS} grid rates, got {}",
                rates.len()
            )));
        }
        for pair in rates.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidInput("grid rates must be strictly increasing".into()));
            }
        }
        if rates.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(Error::InvalidInput("grid rates must lie in [0, 1)".into()));
        }
        Ok(Self { rates })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

/// How the cost gradient is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    /// Exact gradient from the bilinearity of the expectation in the two
    /// coefficient vectors (the default).
    Analytic,
    /// Central finite differences with step 1e-6.
    FiniteDifference,
    /// Per-coordinate secant with shifts of pi/2.
    ShiftRule,
}

impl GradientMode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "analytic" => Ok(GradientMode::Analytic),
            "finite_difference" => Ok(GradientMode::FiniteDifference),
            "shift_rule" => Ok(GradientMode::ShiftRule),
            other => Err(Error::InvalidInput(format!(
                "unknown gradient mode '{other}' (expected analytic, finite_difference or shift_rule)"
            ))),
        }
    }
}

impl fmt::Display for GradientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GradientMode::Analytic => "analytic",
            GradientMode::FiniteDifference => "finite_difference",
            GradientMode::ShiftRule => "shift_rule",
        };
        f.write_str(name)
    }
}

/// Full specification of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub circuit: CircuitId,
    pub channel: ChannelId,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub gradient_mode: GradientMode,
}

impl TrainConfig {
    /// Experiment defaults: 300 epochs, learning rate 0.1, analytic gradients.
    pub fn new(circuit: CircuitId, channel: ChannelId, seed: u64) -> Self {
        Self {
            circuit,
            channel,
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LEARNING_RATE,
            seed,
            gradient_mode: GradientMode::Analytic,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidInput("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidInput("learning rate must be positive".into()));
        }
        Ok(())
    }
}

/// Output of one training run: the learned parameters, the loss recorded
/// before every step plus once after the last, and the ideal target.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub config: TrainConfig,
    pub params: ObservableParams,
    pub loss_history: Vec<f64>,
    pub target: f64,
}

impl TrainResult {
    pub fn final_loss(&self) -> f64 {
        *self.loss_history.last().expect("history is never empty")
    }

    /// Converts to the observable file schema.
    pub fn to_record(&self) -> ObservableRecord {
        let mut record = ObservableRecord::new(&self.params);
        record.circuit = self.config.circuit.to_string();
        record.channel = self.config.channel.to_string();
        record.seed = self.config.seed;
        record.epochs = self.config.epochs;
        record.learning_rate = self.config.learning_rate;
        record.final_loss = self.final_loss();
        record.loss_history = Some(self.loss_history.clone());
        record
    }

    /// Rebuilds a result from a stored record, re-validating the training
    /// invariants. The gradient mode is not part of the schema and defaults
    /// to analytic.
    pub fn from_record(record: &ObservableRecord) -> Result<Self> {
        let circuit = CircuitId::parse(&record.circuit)?;
        let channel = ChannelId::parse(&record.channel)?;
        let loss_history = record.loss_history.clone().ok_or_else(|| {
            Error::InvalidInput(format!(
                "record for {}/{} has no loss_history",
                record.circuit, record.channel
            ))
        })?;
        if loss_history.len() != record.epochs + 1 {
            return Err(Error::InvalidInput(format!(
                "loss_history has {} entries, expected epochs + 1 = {}",
                loss_history.len(),
                record.epochs + 1
            )));
        }
        if !loss_history.iter().all(|l| l.is_finite() && *l >= 0.0) {
            return Err(Error::InvalidInput(
                "loss_history entries must be finite and non-negative".into(),
            ));
        }
        if loss_history.last() > loss_history.first() {
            return Err(Error::InvalidInput(
                "final loss exceeds initial loss; record is not a descent trace".into(),
            ));
        }
        Ok(Self {
            config: TrainConfig {
                circuit,
                channel,
                epochs: record.epochs,
                learning_rate: record.learning_rate,
                seed: record.seed,
                gradient_mode: GradientMode::Analytic,
            },
            params: record.params()?,
            loss_history,
            target: target_expectation(circuit),
        })
    }
}

/// The noiseless target `y`: expectation of Z (x) Z on the circuit output.
pub fn target_expectation(circuit: CircuitId) -> f64 {
    let zz = build(&ObservableParams::pauli_zz());
    expectation(&zz, &prepare(circuit)).expect("validated inputs")
}

/// Precomputed evaluation grid for one circuit-channel pair.
///
/// The expectation of a parameterized observable is bilinear in the two
/// coefficient vectors: `<O(theta)> = theta0^T G_i theta1` where
/// `G_i[a][b] = tr((sig_a (x) sig_b) rho_i)` and `rho_i` is the circuit
/// state after the channel at grid rate `i`. The matrices `G_i` depend only
/// on the pair and the grid, so they are computed once and every loss or
/// gradient evaluation reduces to a handful of dot products.
pub struct EvalContext {
    gram: Vec<[[f64; 4]; 4]>,
    target: f64,
}

impl EvalContext {
    pub fn new(circuit: CircuitId, channel: ChannelId, grid: &NoiseGrid) -> Self {
        let rho = prepare(circuit);
        let gram = grid
            .rates()
            .iter()
            .map(|&rate| {
                let noisy = apply(&kraus(channel, rate).expect("grid rates lie in [0, 1)"), &rho);
                pauli_gram(&noisy)
            })
            .collect();
        Self {
            gram,
            target: target_expectation(circuit),
        }
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// Noisy expectations of `build(params)` across the grid.
    pub fn predictions(&self, params: &ObservableParams) -> Vec<f64> {
        self.gram.iter().map(|g| bilinear(&params.qubit0, g, &params.qubit1)).collect()
    }

    /// Mean squared deviation of the noisy expectations from the target.
    pub fn loss(&self, params: &ObservableParams) -> f64 {
        let n = self.gram.len() as f64;
        self.gram
            .iter()
            .map(|g| {
                let err = bilinear(&params.qubit0, g, &params.qubit1) - self.target;
                err * err
            })
            .sum::<f64>()
            / n
    }

    /// Exact gradient of the loss via the product rule on the bilinear form.
    pub fn grad_analytic(&self, params: &ObservableParams) -> [f64; 8] {
        let n = self.gram.len() as f64;
        let mut grad = [0.0; 8];
        for g in &self.gram {
            let err = bilinear(&params.qubit0, g, &params.qubit1) - self.target;
            let scale = 2.0 * err / n;
            for (a, g_row) in g.iter().enumerate() {
                let row: f64 = g_row.iter().zip(&params.qubit1).map(|(x, t)| x * t).sum();
                grad[a] += scale * row;
            }
            for b in 0..4 {
                let col: f64 = g.iter().zip(&params.qubit0).map(|(g_row, t)| g_row[b] * t).sum();
                grad[4 + b] += scale * col;
            }
        }
        grad
    }

    /// Central finite differences, `(C(x + h e_k) - C(x - h e_k)) / 2h`.
    pub fn grad_finite_difference(&self, params: &ObservableParams, h: f64) -> [f64; 8] {
        self.shifted_secant(params, h, 2.0 * h)
    }

    /// Literal per-coordinate shift rule:
    /// `(C(x + (pi/2) e_k) - C(x - (pi/2) e_k)) / 2`.
    pub fn grad_shift_rule(&self, params: &ObservableParams) -> [f64; 8] {
        self.shifted_secant(params, std::f64::consts::FRAC_PI_2, 2.0)
    }

    fn shifted_secant(&self, params: &ObservableParams, shift: f64, denom: f64) -> [f64; 8] {
        let flat = params.to_flat();
        let mut grad = [0.0; 8];
        for k in 0..8 {
            let mut plus = flat;
            let mut minus = flat;
            plus[k] += shift;
            minus[k] -= shift;
            let c_plus = self.loss(&ObservableParams::from_flat(plus));
            let c_minus = self.loss(&ObservableParams::from_flat(minus));
            grad[k] = (c_plus - c_minus) / denom;
        }
        grad
    }

    fn grad(&self, params: &ObservableParams, mode: GradientMode) -> [f64; 8] {
        match mode {
            GradientMode::Analytic => self.grad_analytic(params),
            GradientMode::FiniteDifference => self.grad_finite_difference(params, 1e-6),
            GradientMode::ShiftRule => self.grad_shift_rule(params),
        }
    }
}

/// `theta0^T G theta1`.
fn bilinear(left: &[f64; 4], g: &[[f64; 4]; 4], right: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for a in 0..4 {
        let mut row = 0.0;
        for b in 0..4 {
            row += g[a][b] * right[b];
        }
        acc += left[a] * row;
    }
    acc
}

/// Pauli correlation matrix `G[a][b] = tr((sig_a (x) sig_b) rho)`.
fn pauli_gram(rho: &DensityMatrix) -> [[f64; 4]; 4] {
    let paulis = crate::linalg::pauli_basis();
    let mut g = [[0.0; 4]; 4];
    for (a, pa) in paulis.iter().enumerate() {
        for (b, pb) in paulis.iter().enumerate() {
            g[a][b] = pa
                .kron(pb)
                .matmul(rho.matrix())
                .expect("4x4")
                .trace()
                .re;
        }
    }
    g
}

/// Loss `C(theta) = (1/N) sum_i |<O(theta)>_noisy,i - y|^2` over the grid.
pub fn loss(
    params: &ObservableParams,
    circuit: CircuitId,
    channel: ChannelId,
    grid: &NoiseGrid,
) -> f64 {
    EvalContext::new(circuit, channel, grid).loss(params)
}

/// Exact loss gradient; see [`EvalContext::grad_analytic`].
pub fn grad_analytic(
    params: &ObservableParams,
    circuit: CircuitId,
    channel: ChannelId,
    grid: &NoiseGrid,
) -> [f64; 8] {
    EvalContext::new(circuit, channel, grid).grad_analytic(params)
}

/// Central-difference gradient, the verification oracle for the analytic path.
pub fn grad_finite_difference(
    params: &ObservableParams,
    circuit: CircuitId,
    channel: ChannelId,
    grid: &NoiseGrid,
    h: f64,
) -> [f64; 8] {
    EvalContext::new(circuit, channel, grid).grad_finite_difference(params, h)
}

/// Pi/2 per-coordinate secant; provided as a documented alternative mode,
/// not the default, since the cost here is polynomial rather than sinusoidal
/// in the coefficients. The cost is quadratic along each coordinate, so this
/// returns exactly pi/2 times the analytic gradient (descent direction
/// preserved, step rescaled).
pub fn grad_shift_rule(
    params: &ObservableParams,
    circuit: CircuitId,
    channel: ChannelId,
    grid: &NoiseGrid,
) -> [f64; 8] {
    EvalContext::new(circuit, channel, grid).grad_shift_rule(params)
}

/// Runs plain gradient descent from a seeded random initialization.
///
/// The eight coefficients come from a SplitMix64 stream seeded with
/// `config.seed`, drawn in flat order (qubit 0 first, I, X, Y, Z within each
/// qubit). Each identity coefficient is uniform on [-1, 1]; each traceless
/// coefficient is uniform on [-1e-8, 1e-8] (see [`TRACELESS_INIT_SCALE`]),
/// with no preference among X, Y and Z. The loss is recorded before every
/// step and once after the last, so the history has `epochs + 1` entries.
pub fn train(config: &TrainConfig) -> Result<TrainResult> {
    config.validate()?;
    let grid = NoiseGrid::standard();
    let context = EvalContext::new(config.circuit, config.channel, &grid);

    let mut rng = SplitMix64::new(config.seed);
    let mut flat = [0.0; 8];
    for (slot_index, slot) in flat.iter_mut().enumerate() {
        let scale = if slot_index % 4 == 0 { 1.0 } else { TRACELESS_INIT_SCALE };
        *slot = scale * rng.next_symmetric();
    }

    let mut history = Vec::with_capacity(config.epochs + 1);
    for epoch in 0..config.epochs {
        let params = ObservableParams::from_flat(flat);
        let current = context.loss(&params);
        if !current.is_finite() {
            return Err(Error::TrainingDiverged {
                epoch,
                reason: format!("loss became {current}"),
            });
        }
        history.push(current);

        let grad = context.grad(&params, config.gradient_mode);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::TrainingDiverged {
                epoch,
                reason: "gradient became non-finite".into(),
            });
        }
        for (slot, g) in flat.iter_mut().zip(&grad) {
            *slot -= config.learning_rate * g;
        }
    }

    let params = ObservableParams::from_flat(flat);
    let final_loss = context.loss(&params);
    if !final_loss.is_finite() {
        return Err(Error::TrainingDiverged {
            epoch: config.epochs,
            reason: format!("loss became {final_loss}"),
        });
    }
    history.push(final_loss);

    Ok(TrainResult {
        config: config.clone(),
        params,
        loss_history: history,
        target: context.target(),
    })
}

/// The thirty circuit-channel combinations in canonical order: circuits
/// outer, channels inner.
pub fn canonical_pairs() -> Vec<(CircuitId, ChannelId)> {
    let mut pairs = Vec::with_capacity(30);
    for circuit in CircuitId::canonical_order() {
        for channel in ChannelId::canonical_order() {
            pairs.push((circuit, channel));
        }
    }
    pairs
}

/// Trains every circuit-channel pair with defaults. Per-pair seeds derive
/// deterministically from the master seed: `splitmix64(master ^ index)`.
pub fn train_all(master_seed: u64) -> Result<Vec<TrainResult>> {
    canonical_pairs()
        .into_iter()
        .enumerate()
        .map(|(index, (circuit, channel))| {
            let seed = derive_seed(master_seed ^ index as u64);
            train(&TrainConfig::new(circuit, channel, seed)).map_err(|e| {
                Error::InvalidInput(format!("training {circuit}/{channel} failed: {e}"))
            })
        })
        .collect()
}

//! Default tolerances and horizons.

/// Spread below which a limit is declared to exist (a heuristic verdict).
pub const TOL_EXIST: f64 = 5e-3;
/// Slack for the α-monotonicity chain.
pub const EPS_MONO: f64 = 1e-2;
/// Slack added to the continuity bounds in α.
pub const EPS_NUM: f64 = 1e-2;
/// Default reporting tolerance (CLI `--tolerance`, filter limits).
pub const TOL: f64 = 1e-2;
/// Slack for additivity/extension checks of measures.
pub const EPS_MEASURE: f64 = 2e-2;
/// Slack for the density-set line `y = λx`.
pub const EPS_LINE: f64 = 5e-2;

/// Tail window starts at `horizon / TAIL_DIVISOR`.
pub const TAIL_DIVISOR: u64 = 64;
/// Ratio of the geometric checkpoint grid.
pub const GRID_GROWTH: f64 = 1.05;
pub const MIN_TAIL_CHECKPOINTS: usize = 32;
/// Smallest admissible Pólya window, in integers.
pub const MIN_WINDOW: u64 = 16;
/// Pólya estimates only use windows this wide, so that rounding the window
/// end points moves a ratio by at most `1/ESTIMATE_WINDOW`.
pub const ESTIMATE_WINDOW: u64 = 256;

pub const DEFAULT_HORIZON: u64 = 1 << 22;
pub const CONSTRUCTION_HORIZON: u64 = 1_000_000;

/// `{1 - 2^-4, 1 - 2^-6, 1 - 2^-8, 1 - 2^-10}`.
pub const DEFAULT_THETAS: [f64; 4] = [
    1.0 - 1.0 / 16.0,
    1.0 - 1.0 / 64.0,
    1.0 - 1.0 / 256.0,
    1.0 - 1.0 / 1024.0,
];

/// Inclusion probabilities cycled by the density-set sampler.
pub const SAMPLE_PALETTE: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

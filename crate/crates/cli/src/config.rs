use std::path::PathBuf;

use kronpoly::RowBounds;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Slack on `Σ r_i = 1` when parsing spectra.
    pub spectrum: f64,
    /// Slack on `Σ_λ dim V_λ s_λ(r) = 1`.
    pub normalization: f64,
    /// Largest acceptable L1 distance from a sampled triple to the hull.
    pub hull: f64,
    /// Feasibility slack of floating-point membership.
    pub membership: f64,
    pub pinsker: f64,
    /// Constant `c` in the convergence check `‖λ̄* − r‖₁ ≤ c/√k`.
    pub convergence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spectrum: 1e-12,
            normalization: 1e-10,
            hull: 0.02,
            membership: 1e-9,
            pinsker: 1e-12,
            convergence: 2.0,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> CliResult<()> {
        let named = [
            ("spectrum", self.spectrum),
            ("normalization", self.normalization),
            ("hull", self.hull),
            ("membership", self.membership),
            ("pinsker", self.pinsker),
            ("convergence", self.convergence),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Input(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub bounds: RowBounds,
    pub max_boxes: u32,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            bounds: RowBounds::bipartite(2, 2),
            max_boxes: 4,
            seed: 0,
            tolerances: Tolerances::default(),
            out: None,
            cache: None,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.tolerances.validate()?;
        let RowBounds { m, n, mn_bound } = self.bounds;
        if m == 0 || n == 0 || mn_bound == 0 {
            return Err(CliError::Input(format!("row bounds must be positive, got ({m},{n},{mn_bound})")));
        }
        if self.threads == Some(0) {
            return Err(CliError::Input("thread count must be positive".into()));
        }
        Ok(())
    }
}

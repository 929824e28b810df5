/// Per-outer-iteration solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    /// `‖F_new − F_old‖_F / ‖F_old‖_F` for each factor in update order.
    pub factor_changes: Vec<f64>,
    /// Wall time since the solve started.
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

impl SolverTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_objective(&self) -> Option<f64> {
        self.records.last().map(|r| r.objective)
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    /// Largest relative increase between consecutive objectives, or 0 when
    /// the sequence never increases.
    pub fn max_relative_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| (w[1].objective - w[0].objective) / w[0].objective.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

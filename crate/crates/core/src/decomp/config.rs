use crate::error::{Error, Result};

/// How the ADMM penalty is chosen for each sub-solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoPolicy {
    /// `trace(HᵀH) / K`, i.e. `‖H‖_F² / K`.
    GramTrace,
    /// `‖Z_init‖_F² / K`.
    InitNorm,
    /// A fixed value.
    Fixed(f64),
}

impl std::fmt::Display for RhoPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RhoPolicy::GramTrace => write!(f, "gram"),
            RhoPolicy::InitNorm => write!(f, "init"),
            RhoPolicy::Fixed(v) => write!(f, "{v}"),
        }
    }
}

impl std::str::FromStr for RhoPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gram" => Ok(RhoPolicy::GramTrace),
            "init" => Ok(RhoPolicy::InitNorm),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .map(RhoPolicy::Fixed)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "rho policy must be 'gram', 'init' or a non-negative number, got '{other}'"
                    ))
                }),
        }
    }
}

/// Settings shared by the tensor solvers and the matrix baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Upper bound on the number of communities.
    pub rank: usize,
    /// Ridge weight on the two nonnegative factors.
    pub lambda: f64,
    pub max_outer: usize,
    pub max_admm: usize,
    /// Stop once every factor's relative change falls to this value.
    pub eps_outer: f64,
    pub eps_admm: f64,
    pub seed: u64,
    pub rho_policy: RhoPolicy,
    /// Carry ADMM duals across outer iterations instead of resetting them.
    pub warm_duals: bool,
    /// After each sweep, rescale paired columns of A and B to equal norms.
    /// The model is unchanged and the ridge term can only drop.
    pub balance: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rank: 2,
            lambda: 0.1,
            max_outer: 500,
            max_admm: 25,
            eps_outer: 1e-5,
            eps_admm: 1e-4,
            seed: 0,
            rho_policy: RhoPolicy::GramTrace,
            warm_duals: true,
            balance: true,
        }
    }
}

impl SolverConfig {
    pub fn with_rank(rank: usize) -> Self {
        SolverConfig {
            rank,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::InvalidParameter("rank K must be at least 1".into()));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and non-negative, got {}",
                self.lambda
            )));
        }
        if self.max_outer == 0 || self.max_admm == 0 {
            return Err(Error::InvalidParameter("iteration caps must be at least 1".into()));
        }
        if !(self.eps_outer > 0.0 && self.eps_admm > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if let RhoPolicy::Fixed(rho) = self.rho_policy {
            if !(rho.is_finite() && rho >= 0.0) {
                return Err(Error::InvalidParameter(format!("fixed rho must be non-negative, got {rho}")));
            }
        }
        Ok(())
    }
}

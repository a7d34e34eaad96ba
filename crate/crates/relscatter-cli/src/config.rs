//! Run configuration: TOML sections for the quadrature grid, the potential,
//! the solver and the verification suites. Every physical parameter is
//! explicit; defaults are the desk-scale weak-coupling setup.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub potential: PotentialConfig,
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Truncation radius of the solve ball.
    pub r_dom: f64,
    pub n_r: usize,
    /// Polar (cos theta) node count.
    pub n_ang: usize,
    /// Azimuthal node count for the reduced radial rule.
    pub n_phi: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { r_dom: 6.0, n_r: 20, n_ang: 12, n_phi: 48 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    /// Profile name; "power" is c <r>^(-sigma).
    pub profile: String,
    pub c: f64,
    pub sigma: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig { profile: "power".into(), c: 0.05, sigma: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// "nystrom-radial" or "born".
    pub mode: String,
    pub lambda: f64,
    /// Boundary-value sign, "+" or "-".
    pub sign: String,
    pub tol: f64,
    pub max_iter: usize,
    pub relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: "nystrom-radial".into(),
            lambda: 1.0,
            sign: "+".into(),
            tol: 1e-8,
            max_iter: 60,
            relaxation: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub suites: Vec<String>,
    /// Multiplies every suite bound; > 1 loosens, < 1 tightens.
    pub tolerance_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { suites: vec!["kernels".into()], tolerance_scale: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// CSV destination for sampled fields; stdout when absent.
    pub csv: Option<String>,
    /// JSON-lines destination for check results; stdout when absent.
    pub json: Option<String>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: RunConfig =
            toml::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))?;
        Ok(cfg)
    }

    /// Structural checks shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if !(self.solver.tol > 0.0) {
            bail!("solver tolerance must be positive, got {}", self.solver.tol);
        }
        if !(self.verify.tolerance_scale > 0.0) {
            bail!("tolerance scale must be positive, got {}", self.verify.tolerance_scale);
        }
        if !(self.solver.relaxation > 0.0 && self.solver.relaxation <= 1.0) {
            bail!("relaxation must lie in (0, 1], got {}", self.solver.relaxation);
        }
        if self.solver.mode != "born" && self.solver.mode != "nystrom-radial" {
            bail!("solver mode must be \"born\" or \"nystrom-radial\", got {:?}", self.solver.mode);
        }
        if self.potential.profile != "power" {
            bail!("unknown potential profile {:?}", self.potential.profile);
        }
        self.sign()?;
        Ok(())
    }

    /// Additional admission checks when a solve is requested.
    pub fn validate_for_solve(&self) -> Result<()> {
        self.validate()?;
        if !(self.potential.sigma > 2.0) {
            bail!(
                "potential decay exponent sigma must exceed 2 for solver admission, got {}",
                self.potential.sigma
            );
        }
        if !(self.solver.lambda > 0.0) {
            bail!("solver energy lambda must be positive, got {}", self.solver.lambda);
        }
        Ok(())
    }

    pub fn sign(&self) -> Result<relscatter::kernels::Sign> {
        self.solver
            .sign
            .parse()
            .map_err(|e| anyhow::anyhow!("bad sign {:?}: {e}", self.solver.sign))
    }

    pub fn potential(&self) -> Result<relscatter::solver::Potential> {
        relscatter::solver::Potential::power(self.potential.c, self.potential.sigma)
            .map_err(|e| anyhow::anyhow!("{e}"))
    }
}

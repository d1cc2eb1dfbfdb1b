use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, DEFAULT_QUBIT_CAP};
use crate::landscape::ProbeConfig;
use crate::optimizer::BfgsConfig;

/// Which study a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Fraction of random starts reaching the cutoff.
    Quality,
    /// Basin-volume estimate of the number of minima.
    Quantity,
    /// Per-vector basin radii and their spread.
    RadiusStats,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Quality => "quality",
            Mode::Quantity => "quantity",
            Mode::RadiusStats => "radius-stats",
        }
    }

    pub fn probes_basins(self) -> bool {
        !matches!(self, Mode::Quality)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quality" => Ok(Mode::Quality),
            "quantity" => Ok(Mode::Quantity),
            "radius-stats" | "radius" => Ok(Mode::RadiusStats),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// How the round count `p` is chosen for each `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PRule {
    /// Every listed `p` for every `n`.
    Fixed { values: Vec<usize> },
    /// `p = round(coeff · log_base(n))`, at least 1.
    Log { coeff: f64, base: f64 },
}

impl PRule {
    pub fn fixed(p: usize) -> Self {
        PRule::Fixed { values: vec![p] }
    }

    pub fn rounds(&self, n: usize) -> Vec<usize> {
        match self {
            PRule::Fixed { values } => values.clone(),
            PRule::Log { coeff, base } => {
                vec![((coeff * (n as f64).ln() / base.ln()).round() as usize).max(1)]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PRule::Fixed { values } if values.is_empty() || values.contains(&0) => {
                Err(Error::Config("fixed p values must be non-empty and at least 1".into()))
            }
            PRule::Log { coeff, base } if !(*coeff > 0.0) || !(*base > 1.0) => {
                Err(Error::Config("log rule needs coeff > 0 and base > 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Everything needed to reproduce a sweep. Serialized verbatim into the JSON
/// sidecar next to the CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mode: Mode,
    pub n_values: Vec<usize>,
    pub p_rule: PRule,
    pub p_edge: f64,
    pub num_graphs: usize,
    pub num_inits: usize,
    pub cutoff: f64,
    pub master_seed: u64,
    pub precision: f64,
    pub eps: f64,
    /// Probe only the first this-many converged minima of each instance.
    #[serde(default)]
    pub probe_minima: Option<usize>,
    /// Probe directions per minimum; `None` means `2p`.
    #[serde(default)]
    pub num_vectors: Option<usize>,
    #[serde(default)]
    pub bfgs: BfgsConfig,
    /// Use this graph for every graph index instead of sampling.
    #[serde(default)]
    pub graph_override: Option<Graph>,
    #[serde(default = "default_cap")]
    pub qubit_cap: usize,
    /// Fill the `wall_seconds` column. Off by default so reruns are
    /// byte-identical.
    #[serde(default)]
    pub record_timing: bool,
    /// Worker threads; `None` uses rayon's default. Never affects results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

fn default_cap() -> usize {
    DEFAULT_QUBIT_CAP
}

impl SweepConfig {
    /// Desk-scale defaults: 10 graphs × 100 starts, p = 5, cutoff 0.99.
    pub fn desk(mode: Mode, n_values: Vec<usize>) -> Self {
        Self {
            mode,
            n_values,
            p_rule: PRule::fixed(5),
            p_edge: 0.5,
            num_graphs: 10,
            num_inits: 100,
            cutoff: 0.99,
            master_seed: 0,
            precision: 1e-3,
            eps: 1e-3,
            probe_minima: None,
            num_vectors: None,
            bfgs: BfgsConfig::default(),
            graph_override: None,
            qubit_cap: DEFAULT_QUBIT_CAP,
            record_timing: false,
            threads: None,
        }
    }

    /// Full budgets: 40 graphs, and 200 starts per graph (1000 when `p`
    /// grows logarithmically with `n`).
    pub fn paper_scale(mut self) -> Self {
        self.num_graphs = 40;
        self.num_inits = match self.p_rule {
            PRule::Log { .. } => 1000,
            PRule::Fixed { .. } => 200,
        };
        self
    }

    pub fn probe_config(&self) -> ProbeConfig {
        ProbeConfig {
            precision: self.precision,
            eps: self.eps,
            num_vectors: self.num_vectors,
            bfgs: self.bfgs.clone(),
            ..ProbeConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Config("n values must be non-empty and at least 1".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n > self.qubit_cap) {
            return Err(Error::TooManyQubits { n, cap: self.qubit_cap });
        }
        self.p_rule.validate()?;
        if !(0.0..=1.0).contains(&self.p_edge) {
            return Err(Error::InvalidProbability(self.p_edge));
        }
        if self.num_graphs == 0 || self.num_inits == 0 {
            return Err(Error::Config("graph and init counts must be at least 1".into()));
        }
        if !(self.cutoff > 0.0 && self.cutoff <= 1.0) {
            return Err(Error::Config(format!("cutoff {} is outside (0, 1]", self.cutoff)));
        }
        if self.probe_minima == Some(0) {
            return Err(Error::Config("probe_minima must be at least 1".into()));
        }
        if let Some(g) = &self.graph_override {
            if self.n_values.iter().any(|&n| n != g.n()) {
                return Err(Error::Config(format!(
                    "override graph has {} vertices but n values are {:?}",
                    g.n(),
                    self.n_values
                )));
            }
            if g.num_edges() == 0 {
                return Err(Error::ZeroOptimum);
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.probe_config().validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_rule_rounds_to_nearest() {
        let rule = PRule::Log { coeff: 6.0, base: 2.0 };
        assert_eq!(rule.rounds(4), vec![12]);
        assert_eq!(rule.rounds(8), vec![18]);
        // 6 log2 12 = 21.51
        assert_eq!(rule.rounds(12), vec![22]);
        assert_eq!(rule.rounds(1), vec![1]);
        let natural = PRule::Log { coeff: 6.0, base: std::f64::consts::E };
        assert_eq!(natural.rounds(8), vec![12]);
    }

    #[test]
    fn validation() {
        let ok = SweepConfig::desk(Mode::Quality, vec![6, 8]);
        ok.validate().unwrap();
        let mut bad = ok.clone();
        bad.cutoff = 0.0;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.num_inits = 0;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.n_values = vec![30];
        assert!(matches!(bad.validate(), Err(Error::TooManyQubits { .. })));
        let mut bad = ok.clone();
        bad.p_rule = PRule::Fixed { values: vec![] };
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.graph_override = Some(Graph::new(2, [(0, 1)]).unwrap());
        assert!(bad.validate().is_err());
    }

    #[test]
    fn paper_scale_budgets() {
        let q = SweepConfig::desk(Mode::Quality, vec![8]).paper_scale();
        assert_eq!((q.num_graphs, q.num_inits), (40, 200));
        let mut l = SweepConfig::desk(Mode::Quality, vec![8]);
        l.p_rule = PRule::Log { coeff: 6.0, base: 2.0 };
        let l = l.paper_scale();
        assert_eq!((l.num_graphs, l.num_inits), (40, 1000));
    }

    #[test]
    fn sidecar_round_trip() {
        let mut c = SweepConfig::desk(Mode::RadiusStats, vec![6]);
        c.p_rule = PRule::Log { coeff: 6.0, base: 2.0 };
        c.threads = Some(3);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"mode\":\"radius-stats\""));
        let back: SweepConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.threads, None);
        assert_eq!(back.p_rule, c.p_rule);
    }
}

//! Run configuration: plain-text key-value files with section headers, plus
//! command-line overrides. Unknown keys and malformed values are rejected
//! with file/line diagnostics, and an accepted configuration fully
//! determines a run.

use std::fmt;
use std::path::{Path, PathBuf};

use mfplt_core::determinacy::ModelKind;
use mfplt_core::model::{make_rule, ModelParams, RuleCoeffs, RuleKind, RuleScaling};
use mfplt_core::simulate::ShockKind;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    None,
    /// Floor the gross rate at one: `-ln(pi_ss / beta)`.
    Auto,
    Value(f64),
}

/// Experiment block: one shock, one horizon, optional bound, grid axes.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub shock: ShockKind,
    pub size: f64,
    pub horizon: usize,
    pub bound: Bound,
    pub coef_min: Option<f64>,
    pub coef_max: Option<f64>,
    pub coef_steps: usize,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub gamma_steps: usize,
    pub gamma_active: f64,
    pub gamma_passive: f64,
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub rule: RuleKind,
    pub params: ModelParams,
    pub experiment: Experiment,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    /// Rule coefficients in the units of the configured model.
    pub fn rule_coeffs(&self) -> RuleCoeffs {
        let scaling = match self.model {
            ModelKind::Leeper => RuleScaling::Level,
            ModelKind::Nk => RuleScaling::Log,
        };
        make_rule(
            self.params.phi_p,
            self.params.phi_pi,
            self.params.delta,
            scaling,
            self.params.pi_ss,
        )
    }
}

/// Raw parse state: sectioned key-value pairs with provenance for errors,
/// later resolved into a [`RunConfig`].
///
/// Entries apply strictly in the order received (file lines, then `--model`
/// and `--rule`, then `--set` overrides), with later entries winning. A
/// `rule.kind` entry resets the rule coefficients to that kind's reference
/// values, so coefficient keys belong after it.
#[derive(Debug, Default)]
pub struct Builder {
    entries: Vec<(String, String, String, String)>, // section, key, value, where
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

const MODEL_KEYS: &[&str] = &[
    "kind",
    "beta",
    "pi_ss",
    "r_ss",
    "c_ss",
    "b_ss",
    "m_ss",
    "tau_ss",
    "kappa",
    "gamma",
    "rho_theta",
    "rho_psi",
    "rho_eps",
    "omega_pi",
    "omega_x",
    "omega_r",
];
const RULE_KEYS: &[&str] = &["kind", "phi_p", "phi_pi", "delta"];
const EXPERIMENT_KEYS: &[&str] = &[
    "shock",
    "size",
    "horizon",
    "bound",
    "coef_min",
    "coef_max",
    "coef_steps",
    "gamma_min",
    "gamma_max",
    "gamma_steps",
    "gamma_active",
    "gamma_passive",
];
const OUTPUT_KEYS: &[&str] = &["path", "format"];

impl Builder {
    /// Parses a configuration file, accumulating entries in order.
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let name = path.display().to_string();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let Some(sec) = inner.strip_suffix(']') else {
                    return Err(ConfigError(format!(
                        "{name}:{lineno}: malformed section header '{raw}'"
                    )));
                };
                section = sec.trim().to_string();
                if !["model", "rule", "experiment", "output"].contains(&section.as_str()) {
                    return Err(ConfigError(format!(
                        "{name}:{lineno}: unknown section [{section}]"
                    )));
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "{name}:{lineno}: expected 'key = value', got '{raw}'"
                )));
            };
            if section.is_empty() {
                return Err(ConfigError(format!(
                    "{name}:{lineno}: key '{}' appears before any [section] header",
                    key.trim()
                )));
            }
            self.push(
                &section,
                key.trim(),
                value.trim(),
                &format!("{name}:{lineno}"),
            )?;
        }
        Ok(())
    }

    /// Applies one `--set section.key=value` override.
    pub fn set_override(&mut self, spec: &str) -> Result<()> {
        let Some((path, value)) = spec.split_once('=') else {
            return Err(ConfigError(format!(
                "--set {spec}: expected section.key=value"
            )));
        };
        let Some((section, key)) = path.trim().split_once('.') else {
            return Err(ConfigError(format!(
                "--set {spec}: key must be qualified as section.key (e.g. model.beta)"
            )));
        };
        self.push(
            section.trim(),
            key.trim(),
            value.trim(),
            &format!("--set {spec}"),
        )
    }

    fn push(&mut self, section: &str, key: &str, value: &str, origin: &str) -> Result<()> {
        let known: &[&str] = match section {
            "model" => MODEL_KEYS,
            "rule" => RULE_KEYS,
            "experiment" => EXPERIMENT_KEYS,
            "output" => OUTPUT_KEYS,
            other => {
                return Err(ConfigError(format!("{origin}: unknown section [{other}]")));
            }
        };
        if !known.contains(&key) {
            return Err(ConfigError(format!(
                "{origin}: unknown key '{key}' in [{section}] (known: {})",
                known.join(", ")
            )));
        }
        self.entries.push((
            section.to_string(),
            key.to_string(),
            value.to_string(),
            origin.to_string(),
        ));
        Ok(())
    }

    pub fn set_model(&mut self, kind: &str, origin: &str) -> Result<()> {
        parse_model_kind(kind, origin)?;
        self.push("model", "kind", kind, origin)
    }

    pub fn set_rule(&mut self, kind: &str, origin: &str) -> Result<()> {
        parse_rule_kind(kind, origin)?;
        self.push("rule", "kind", kind, origin)
    }

    /// Resolves entries over the defaults into a validated configuration.
    pub fn finish(mut self) -> Result<RunConfig> {
        let mut model = ModelKind::Nk;
        let mut rule = RuleKind::It;
        let mut params = ModelParams {
            phi_pi: 1.2, // reference IT coefficient, matching the default rule
            ..ModelParams::default()
        };
        let mut experiment = Experiment {
            shock: ShockKind::Demand,
            size: -0.01,
            horizon: 40,
            bound: Bound::None,
            coef_min: None,
            coef_max: None,
            coef_steps: 40,
            gamma_min: None,
            gamma_max: None,
            gamma_steps: 40,
            gamma_active: 0.0,
            gamma_passive: 0.2,
        };
        let mut r_ss_explicit = false;
        let mut m_ss_explicit = false;

        let entries = std::mem::take(&mut self.entries);
        for (section, key, value, origin) in &entries {
            let fail = |what: &str| ConfigError(format!("{origin}: {what} (got '{value}')"));
            let num =
                || -> Result<f64> { value.parse::<f64>().map_err(|_| fail("expected a number")) };
            match (section.as_str(), key.as_str()) {
                ("model", "kind") => model = parse_model_kind(value, origin)?,
                ("model", "beta") => params.beta = num()?,
                ("model", "pi_ss") => params.pi_ss = num()?,
                ("model", "r_ss") => {
                    params.r_ss = num()?;
                    r_ss_explicit = true;
                }
                ("model", "c_ss") => params.c_ss = num()?,
                ("model", "b_ss") => params.b_ss = num()?,
                ("model", "m_ss") => {
                    params.m_ss = num()?;
                    m_ss_explicit = true;
                }
                ("model", "tau_ss") => params.tau_ss = num()?,
                ("model", "kappa") => params.kappa = num()?,
                ("model", "gamma") => params.gamma = num()?,
                ("model", "rho_theta") => params.rho_theta = num()?,
                ("model", "rho_psi") => params.rho_psi = num()?,
                ("model", "rho_eps") => params.rho_eps = num()?,
                ("model", "omega_pi") => params.weights.omega_pi = num()?,
                ("model", "omega_x") => params.weights.omega_x = num()?,
                ("model", "omega_r") => params.weights.omega_r = num()?,
                ("rule", "kind") => {
                    rule = parse_rule_kind(value, origin)?;
                    // Switching kinds resets the rule block to that kind's
                    // reference coefficients; later entries refine them.
                    match rule {
                        RuleKind::It => {
                            params.phi_p = 0.0;
                            params.phi_pi = 1.2;
                            params.delta = 0.0;
                        }
                        RuleKind::Plt => {
                            params.phi_p = 1.2;
                            params.phi_pi = 0.0;
                            params.delta = 1.0;
                        }
                        RuleKind::General => {}
                    }
                }
                ("rule", "phi_p") => params.phi_p = num()?,
                ("rule", "phi_pi") => params.phi_pi = num()?,
                ("rule", "delta") => params.delta = num()?,
                ("experiment", "shock") => {
                    experiment.shock = match value.as_str() {
                        "demand" => ShockKind::Demand,
                        "monetary" => ShockKind::Monetary,
                        "fiscal" => ShockKind::Fiscal,
                        _ => return Err(fail("shock must be demand, monetary, or fiscal")),
                    }
                }
                ("experiment", "size") => experiment.size = num()?,
                ("experiment", "horizon") => {
                    experiment.horizon = value
                        .parse::<usize>()
                        .map_err(|_| fail("expected a non-negative integer"))?
                }
                ("experiment", "bound") => {
                    experiment.bound = match value.as_str() {
                        "none" => Bound::None,
                        "auto" => Bound::Auto,
                        _ => Bound::Value(num()?),
                    }
                }
                ("experiment", "coef_min") => experiment.coef_min = Some(num()?),
                ("experiment", "coef_max") => experiment.coef_max = Some(num()?),
                ("experiment", "coef_steps") => {
                    experiment.coef_steps = value
                        .parse::<usize>()
                        .map_err(|_| fail("expected a positive integer"))?
                }
                ("experiment", "gamma_min") => experiment.gamma_min = Some(num()?),
                ("experiment", "gamma_max") => experiment.gamma_max = Some(num()?),
                ("experiment", "gamma_steps") => {
                    experiment.gamma_steps = value
                        .parse::<usize>()
                        .map_err(|_| fail("expected a positive integer"))?
                }
                ("experiment", "gamma_active") => experiment.gamma_active = num()?,
                ("experiment", "gamma_passive") => experiment.gamma_passive = num()?,
                ("output", "path") => self.out = Some(PathBuf::from(value)),
                ("output", "format") => {
                    self.format = Some(parse_format(value, origin)?);
                }
                _ => unreachable!("keys validated on push"),
            }
        }

        // The resolved block must still be the strict rule the kind names.
        match rule {
            RuleKind::It => {
                if params.delta != 0.0 || params.phi_p != 0.0 {
                    return Err(ConfigError(
                        "rule kind 'it' requires delta = 0 and phi_p = 0; use kind = general \
                         for mixed rules"
                            .into(),
                    ));
                }
            }
            RuleKind::Plt => {
                if params.delta != 1.0 || params.phi_pi != 0.0 {
                    return Err(ConfigError(
                        "rule kind 'plt' requires delta = 1 and phi_pi = 0; use kind = general \
                         for mixed rules"
                            .into(),
                    ));
                }
            }
            RuleKind::General => {}
        }

        // Derived steady-state values unless pinned by the user.
        if !r_ss_explicit {
            params.r_ss = params.pi_ss / params.beta;
        }
        if !m_ss_explicit {
            params.m_ss = params.c_ss * params.r_ss / (params.r_ss - 1.0);
        }

        let check = match model {
            ModelKind::Leeper => params.validate_leeper(),
            ModelKind::Nk => params.validate_nk(),
        };
        check.map_err(|e| ConfigError(format!("invalid configuration: {e}")))?;

        Ok(RunConfig {
            model,
            rule,
            params,
            experiment,
            out: self.out,
            format: self.format,
        })
    }
}

fn parse_model_kind(s: &str, origin: &str) -> Result<ModelKind> {
    match s {
        "leeper" => Ok(ModelKind::Leeper),
        "nk" => Ok(ModelKind::Nk),
        _ => Err(ConfigError(format!(
            "{origin}: model kind must be 'leeper' or 'nk', got '{s}'"
        ))),
    }
}

fn parse_rule_kind(s: &str, origin: &str) -> Result<RuleKind> {
    match s {
        "it" => Ok(RuleKind::It),
        "plt" => Ok(RuleKind::Plt),
        "general" => Ok(RuleKind::General),
        _ => Err(ConfigError(format!(
            "{origin}: rule kind must be 'it', 'plt', or 'general', got '{s}'"
        ))),
    }
}

fn parse_format(s: &str, origin: &str) -> Result<OutputFormat> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        "text" => Ok(OutputFormat::Text),
        _ => Err(ConfigError(format!(
            "{origin}: format must be 'csv', 'json', or 'text', got '{s}'"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile_lite::TempPath {
        let mut f = tempfile_lite::TempPath::new("mfplt-config-test");
        f.write_all(content.as_bytes());
        f
    }

    /// Minimal self-cleaning temp file helper for tests.
    mod tempfile_lite {
        use std::path::{Path, PathBuf};
        use std::sync::atomic::{AtomicU64, Ordering};

        static COUNTER: AtomicU64 = AtomicU64::new(0);

        pub struct TempPath(PathBuf);

        impl TempPath {
            pub fn new(prefix: &str) -> Self {
                let n = COUNTER.fetch_add(1, Ordering::Relaxed);
                let path =
                    std::env::temp_dir().join(format!("{prefix}-{}-{n}.conf", std::process::id()));
                TempPath(path)
            }

            pub fn write_all(&mut self, bytes: &[u8]) {
                std::fs::write(&self.0, bytes).unwrap();
            }

            pub fn path(&self) -> &Path {
                &self.0
            }
        }

        impl Drop for TempPath {
            fn drop(&mut self) {
                let _ = std::fs::remove_file(&self.0);
            }
        }
    }

    #[test]
    fn parses_sections_and_applies_defaults() {
        let f = write_temp(
            "# demo\n[model]\nkind = nk\nbeta = 0.98\n[rule]\nkind = plt\nphi_p = -0.1\n\
             [experiment]\nshock = demand\nsize = -0.02\n",
        );
        let mut b = Builder::default();
        b.load_file(f.path()).unwrap();
        let cfg = b.finish().unwrap();
        assert_eq!(cfg.model, ModelKind::Nk);
        assert_eq!(cfg.rule, RuleKind::Plt);
        assert_eq!(cfg.params.beta, 0.98);
        assert_eq!(cfg.params.phi_p, -0.1);
        assert_eq!(cfg.params.delta, 1.0);
        assert_eq!(cfg.params.phi_pi, 0.0);
        assert_eq!(cfg.experiment.size, -0.02);
        assert_eq!(cfg.experiment.horizon, 40);
    }

    #[test]
    fn unknown_key_reports_line() {
        let f = write_temp("[model]\nbeta = 0.99\nbogus = 1\n");
        let mut b = Builder::default();
        let err = b.load_file(f.path()).unwrap_err();
        assert!(err.0.contains(":3:"), "error should carry the line: {err}");
        assert!(err.0.contains("bogus"));
    }

    #[test]
    fn key_outside_section_rejected() {
        let f = write_temp("beta = 0.99\n");
        let mut b = Builder::default();
        let err = b.load_file(f.path()).unwrap_err();
        assert!(err.0.contains("before any [section]"));
    }

    #[test]
    fn set_override_wins_over_file() {
        let f = write_temp("[model]\nbeta = 0.98\n");
        let mut b = Builder::default();
        b.load_file(f.path()).unwrap();
        b.set_override("model.beta=0.97").unwrap();
        let cfg = b.finish().unwrap();
        assert_eq!(cfg.params.beta, 0.97);
    }

    #[test]
    fn unqualified_set_rejected() {
        let mut b = Builder::default();
        let err = b.set_override("beta=0.97").unwrap_err();
        assert!(err.0.contains("section.key"));
    }

    #[test]
    fn it_rule_with_inertia_rejected() {
        let mut b = Builder::default();
        b.set_override("rule.kind=it").unwrap();
        b.set_override("rule.delta=0.5").unwrap();
        assert!(b.finish().is_err());
    }

    #[test]
    fn rule_flag_overrides_file_kind_and_resets_coefficients() {
        // A file written for IT switched to PLT from the command line: the
        // IT coefficient must not leak into the PLT block.
        let f = write_temp("[rule]\nkind = it\nphi_pi = 1.2\n");
        let mut b = Builder::default();
        b.load_file(f.path()).unwrap();
        b.set_rule("plt", "--rule").unwrap();
        b.set_override("rule.phi_p=0.7").unwrap();
        let cfg = b.finish().unwrap();
        assert_eq!(cfg.rule, RuleKind::Plt);
        assert_eq!(cfg.params.phi_p, 0.7);
        assert_eq!(cfg.params.phi_pi, 0.0);
        assert_eq!(cfg.params.delta, 1.0);
    }

    #[test]
    fn inconsistent_steady_state_rejected_for_leeper() {
        let mut b = Builder::default();
        b.set_model("leeper", "test").unwrap();
        b.set_rule("plt", "test").unwrap();
        b.set_override("model.m_ss=5.0").unwrap();
        assert!(b.finish().is_err());
    }
}

//! Flat key-value experiment configuration.
//!
//! ```text
//! command = compare
//! output_dir = out
//! golden_dir = goldens/v1
//! golden_mode = record
//! method = product-rule
//! radial_order = 32
//! sphere_samples = 16
//! seed = 42
//!
//! [params]
//! n = 1
//! p = 2
//! q = 2
//! alpha = 0
//!
//! [function]
//! label = z
//! descriptor = poly n=1 {(1):1.0}
//! ```
//!
//! Repeated `[params]` blocks form the parameter grid, repeated `[function]`
//! blocks the test family.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::functionals::WeightParams;
use crate::holo::HoloFunction;
use crate::parse::parse_function;
use crate::quad::{Method, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenMode {
    Record,
    Verify,
}

impl GoldenMode {
    pub fn label(&self) -> &'static str {
        match self {
            GoldenMode::Record => "record",
            GoldenMode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub output_dir: PathBuf,
    pub golden_dir: PathBuf,
    pub golden_mode: GoldenMode,
    pub spec: QuadratureSpec,
    pub params: Vec<WeightParams>,
    pub family: Vec<(String, HoloFunction)>,
    /// Top-level scalar settings, echoed verbatim into CSV headers.
    pub echo: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        if let Ok(dir) = std::env::var("BERGMAN_OUTPUT_DIR") {
            cfg.output_dir = PathBuf::from(dir);
            cfg.echo
                .insert("output_dir".into(), cfg.output_dir.display().to_string());
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut top: BTreeMap<String, (String, usize)> = BTreeMap::new();
        let mut params_blocks: Vec<BTreeMap<String, (String, usize)>> = Vec::new();
        let mut function_blocks: Vec<BTreeMap<String, (String, usize)>> = Vec::new();
        enum Section {
            Top,
            Params,
            Function,
        }
        let mut section = Section::Top;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                match name.trim() {
                    "params" => {
                        params_blocks.push(BTreeMap::new());
                        section = Section::Params;
                    }
                    "function" => {
                        function_blocks.push(BTreeMap::new());
                        section = Section::Function;
                    }
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            column: 1,
                            message: format!("unknown section `[{other}]`"),
                        })
                    }
                }
                continue;
            }
            let eq = line.find('=').ok_or(Error::Parse {
                line: lineno,
                column: 1,
                message: "expected `key = value`".into(),
            })?;
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    column: eq + 1,
                    message: "empty key or value".into(),
                });
            }
            match section {
                Section::Top => {
                    top.insert(key, (value, lineno));
                }
                Section::Params => {
                    params_blocks.last_mut().unwrap().insert(key, (value, lineno));
                }
                Section::Function => {
                    function_blocks.last_mut().unwrap().insert(key, (value, lineno));
                }
            }
        }

        let get = |map: &BTreeMap<String, (String, usize)>, key: &str| -> Option<(String, usize)> {
            map.get(key).cloned()
        };
        let bad = |lineno: usize, msg: String| Error::Parse {
            line: lineno,
            column: 1,
            message: msg,
        };
        let parse_f64 = |v: &(String, usize)| -> Result<f64> {
            v.0.parse()
                .map_err(|e| bad(v.1, format!("bad number `{}`: {e}", v.0)))
        };
        let parse_usize = |v: &(String, usize)| -> Result<usize> {
            v.0.parse()
                .map_err(|e| bad(v.1, format!("bad integer `{}`: {e}", v.0)))
        };

        let method = match get(&top, "method") {
            Some(v) => Method::parse(&v.0).map_err(|e| bad(v.1, e.to_string()))?,
            None => Method::ProductRule,
        };
        let mut spec = match method {
            Method::ProductRule => QuadratureSpec::product(32, 16),
            Method::MonteCarlo => QuadratureSpec::monte_carlo(100_000, 0),
            Method::StratifiedMc => QuadratureSpec::stratified(100_000, 0),
        };
        if let Some(v) = get(&top, "radial_order") {
            spec.radial_order = parse_usize(&v)?;
        }
        if let Some(v) = get(&top, "sphere_samples") {
            spec.sphere_samples = parse_usize(&v)?;
        }
        if let Some(v) = get(&top, "mc_samples") {
            spec.mc_samples = parse_usize(&v)?;
        }
        if let Some(v) = get(&top, "seed") {
            spec.seed = v
                .0
                .parse()
                .map_err(|e| bad(v.1, format!("bad seed `{}`: {e}", v.0)))?;
        }

        let golden_mode = match get(&top, "golden_mode") {
            Some(v) => match v.0.as_str() {
                "record" => GoldenMode::Record,
                "verify" => GoldenMode::Verify,
                other => return Err(bad(v.1, format!("golden_mode must be record|verify, got `{other}`"))),
            },
            None => GoldenMode::Record,
        };

        let mut params = Vec::new();
        for block in &params_blocks {
            let need = |key: &str| -> Result<(String, usize)> {
                get(block, key).ok_or_else(|| {
                    bad(
                        block.values().next().map(|v| v.1).unwrap_or(0),
                        format!("[params] block missing `{key}`"),
                    )
                })
            };
            let n_entry = need("n")?;
            let n = parse_usize(&n_entry)?;
            let p = parse_f64(&need("p")?)?;
            let q = parse_f64(&need("q")?)?;
            let alpha = parse_f64(&need("alpha")?)?;
            params.push(WeightParams::new(n, p, q, alpha).map_err(|e| bad(n_entry.1, e.to_string()))?);
        }

        let mut family = Vec::new();
        for block in &function_blocks {
            let desc = get(block, "descriptor").ok_or_else(|| {
                bad(
                    block.values().next().map(|v| v.1).unwrap_or(0),
                    "[function] block missing `descriptor`".into(),
                )
            })?;
            let f = parse_function(&desc.0, desc.1)?;
            let label = get(block, "label")
                .map(|v| v.0)
                .unwrap_or_else(|| format!("f{}", family.len() + 1));
            family.push((label, f));
        }

        let mut echo: BTreeMap<String, String> = top
            .iter()
            .map(|(k, (v, _))| (k.clone(), v.clone()))
            .collect();
        echo.insert("method".into(), method.name().into());
        echo.insert("seed".into(), spec.seed.to_string());
        echo.insert("golden_mode".into(), golden_mode.label().into());

        Ok(Self {
            command: get(&top, "command").map(|v| v.0),
            output_dir: get(&top, "output_dir")
                .map(|v| PathBuf::from(v.0))
                .unwrap_or_else(|| PathBuf::from("out")),
            golden_dir: get(&top, "golden_dir")
                .map(|v| PathBuf::from(v.0))
                .unwrap_or_else(|| PathBuf::from("goldens/v1")),
            golden_mode,
            spec,
            params,
            family,
            echo,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.spec.seed = seed;
        self.echo.insert("seed".into(), seed.to_string());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# demo
command = compare
output_dir = out
seed = 42
method = product-rule
radial_order = 24

[params]
n = 1
p = 2
q = 2
alpha = 0

[params]
n = 2
p = 1
q = 0.5
alpha = 1

[function]
label = z
descriptor = poly n=1 {(1):1.0}
";

    #[test]
    fn parses_grid_and_family() {
        let cfg = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.command.as_deref(), Some("compare"));
        assert_eq!(cfg.params.len(), 2);
        assert_eq!(cfg.params[1].n, 2);
        assert_eq!(cfg.family.len(), 1);
        assert_eq!(cfg.family[0].0, "z");
        assert_eq!(cfg.spec.seed, 42);
        assert_eq!(cfg.spec.radial_order, 24);
        assert_eq!(cfg.golden_mode, GoldenMode::Record);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("command compare\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }

        let err = ExperimentConfig::parse("[widgets]\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }

        let bad_fn = "x = 1\n\n[function]\ndescriptor = poly n=1 {(1,2):1.0}\n";
        let err = ExperimentConfig::parse(bad_fn).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn descriptor_errors_point_into_the_file() {
        let text = "seed = 1\n[function]\nlabel = bad\ndescriptor = spline n=1 {}\n";
        match ExperimentConfig::parse(text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}

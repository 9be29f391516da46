//! Problem files: the JSON input accepted by every subcommand but `verify`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use regrates::builtin::ExampleId;
use regrates::noisy::{ChoiceRule, NoiseStrategy, DEFAULT_TAU};
use regrates::spectral::{SpectralElement, SpectralProblem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    /// Inline `(lambda, c)` pairs.
    #[serde(default)]
    pub atoms: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    pub example: Option<ExampleId>,
    /// Coefficients of the initial guess `x0`; the analysed element is
    /// `x - x0`. Aligned with `atoms` as written, or with the sorted
    /// spectrum of `example`.
    #[serde(default)]
    pub prior: Option<Vec<f64>>,
    #[serde(default)]
    pub noise: Option<NoiseBlock>,
    #[serde(default)]
    pub method: MethodBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub strategy: StrategyName,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    #[default]
    WorstAligned,
    WorstAlignedFlipped,
    Random,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterName {
    #[default]
    Tikhonov,
    Cutoff,
    Landweber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    Apriori,
    Optimal,
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NuSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl NuSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            NuSpec::List(ref v) => v.clone(),
            NuSpec::Range { start, stop, steps } => match steps {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }

    /// `a,b,c` or `start:stop:steps`; the empty string is the empty range.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(NuSpec::List(Vec::new()));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                bail!("--nu range must be start:stop:steps, got {s:?}");
            }
            return Ok(NuSpec::Range {
                start: parse_f64("--nu start", parts[0])?,
                stop: parse_f64("--nu stop", parts[1])?,
                steps: parts[2]
                    .trim()
                    .parse()
                    .with_context(|| format!("--nu steps: {:?} is not a count", parts[2]))?,
            });
        }
        Ok(NuSpec::List(parse_list("--nu", s)?))
    }
}

pub fn parse_f64(what: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .with_context(|| format!("{what}: {s:?} is not a number"))
}

pub fn parse_list(what: &str, s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| parse_f64(what, p)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodBlock {
    #[serde(default)]
    pub filter: FilterName,
    #[serde(default)]
    pub nu: Option<NuSpec>,
    #[serde(default = "one")]
    pub gamma: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default = "one_u32")]
    pub k: u32,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub rule: Option<RuleName>,
}

impl Default for MethodBlock {
    fn default() -> Self {
        Self {
            filter: FilterName::default(),
            nu: None,
            gamma: 1.0,
            r: 0.0,
            k: 1,
            sigma: None,
            tau: DEFAULT_TAU,
            rule: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

fn default_tau() -> f64 {
    DEFAULT_TAU
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in problem file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).context("schema violation")?;
        file.validate()?;
        Ok(file)
    }

    /// Field-level checks that do not need the element built.
    pub fn validate(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            bail!(
                "version: unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            );
        }
        match (&self.atoms, &self.example) {
            (Some(_), Some(_)) => bail!("atoms/example: give exactly one of the two, not both"),
            (None, None) => bail!("atoms/example: one of the two is required"),
            _ => {}
        }
        if let Some(atoms) = &self.atoms {
            if atoms.is_empty() {
                bail!("atoms: the list is empty");
            }
            for (i, &(l, c)) in atoms.iter().enumerate() {
                SpectralElement::single(l, c).with_context(|| format!("atoms[{i}]"))?;
            }
            if let Some(prior) = &self.prior {
                if prior.len() != atoms.len() {
                    bail!("prior: {} coefficients for {} atoms", prior.len(), atoms.len());
                }
            }
        }
        if let Some(prior) = &self.prior {
            if let Some(i) = prior.iter().position(|c| !c.is_finite()) {
                bail!("prior[{i}]: non-finite coefficient");
            }
        }
        if let Some(noise) = &self.noise {
            for (i, &d) in noise.deltas.iter().enumerate() {
                if !(d >= 0.0) || !d.is_finite() {
                    bail!("noise.deltas[{i}]: {d} is not a finite non-negative level");
                }
            }
        }
        let m = &self.method;
        positive("method.gamma", m.gamma)?;
        positive("method.tau", m.tau)?;
        if let Some(s) = m.sigma {
            positive("method.sigma", s)?;
        }
        if !(m.r >= 0.0) || !m.r.is_finite() {
            bail!("method.r: {} is not a finite non-negative number", m.r);
        }
        if m.k == 0 {
            bail!("method.k: must be at least 1");
        }
        if let Some(nu) = &m.nu {
            for (i, &v) in nu.values().iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    bail!("method.nu[{i}]: {v} is not a finite non-negative exponent");
                }
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<SpectralProblem> {
        let element = match (&self.atoms, &self.example) {
            (Some(atoms), _) => {
                let pairs = atoms.iter().enumerate().map(|(i, &(l, c))| {
                    let x0 = self.prior.as_ref().map_or(0.0, |p| p[i]);
                    (l, c - x0)
                });
                SpectralElement::from_atoms(pairs.collect::<Vec<_>>()).context("atoms")?
            }
            (None, Some(id)) => {
                let x = id.build().context("example")?.element;
                match &self.prior {
                    None => x,
                    Some(prior) => {
                        if prior.len() != x.len() {
                            bail!(
                                "prior: {} coefficients for {} atoms of {}",
                                prior.len(),
                                x.len(),
                                id.label()
                            );
                        }
                        let c = x.coefficients().iter().zip(prior).map(|(c, p)| c - p).collect();
                        x.with_coefficients(c).context("prior")?
                    }
                }
            }
            (None, None) => bail!("atoms/example: one of the two is required"),
        };
        let label = match &self.example {
            Some(id) => id.label(),
            None => format!("inline({} atoms)", element.len()),
        };
        SpectralProblem::new(element, label).context("problem")
    }

    pub fn strategy(&self, seed: Option<u64>) -> NoiseStrategy {
        let block = self.noise.as_ref();
        match block.map(|n| n.strategy).unwrap_or_default() {
            StrategyName::WorstAligned => NoiseStrategy::WorstAligned,
            StrategyName::WorstAlignedFlipped => NoiseStrategy::WorstAlignedFlipped,
            StrategyName::Random => NoiseStrategy::Random {
                seed: seed.unwrap_or_else(|| block.map_or(0, |n| n.seed)),
            },
        }
    }

    pub fn rule(&self, p: &SpectralProblem) -> Result<ChoiceRule> {
        let m = &self.method;
        let rule = m.rule.unwrap_or(match m.filter {
            FilterName::Landweber => RuleName::Discrepancy,
            _ => RuleName::Apriori,
        });
        Ok(match (m.filter, rule) {
            (FilterName::Tikhonov, RuleName::Apriori) => ChoiceRule::TikhonovApriori,
            (FilterName::Tikhonov, RuleName::Optimal) => ChoiceRule::TikhonovOptimal,
            (FilterName::Landweber, RuleName::Discrepancy) => ChoiceRule::LandweberDiscrepancy {
                tau: m.tau,
                sigma: m.sigma.unwrap_or(1.0 / p.operator_norm()),
                nu: m.nu.as_ref().and_then(|n| n.values().first().copied()).unwrap_or(1.0),
            },
            (f, r) => bail!("method: rule {r:?} is not available for filter {f:?}"),
        })
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        bail!("{field}: {v} is not a finite positive number");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_spec_forms() {
        assert_eq!(NuSpec::parse("").unwrap().values(), Vec::<f64>::new());
        assert_eq!(NuSpec::parse("0.25,0.5").unwrap().values(), vec![0.25, 0.5]);
        assert_eq!(NuSpec::parse("0:1:3").unwrap().values(), vec![0.0, 0.5, 1.0]);
        assert!(NuSpec::parse("0:1:x").is_err());
        assert!(NuSpec::parse("0:1").is_err());
        assert_eq!(NuSpec::parse("0:1:0").unwrap().values(), Vec::<f64>::new());
    }

    #[test]
    fn minimal_inline_file() {
        let f = ProblemFile::parse(r#"{"version":1,"atoms":[[1.0,1.0],[0.5,-2.0]]}"#).unwrap();
        let p = f.problem().unwrap();
        assert_eq!(p.element.len(), 2);
        assert_eq!(f.method.gamma, 1.0);
    }

    #[test]
    fn prior_is_subtracted() {
        let f = ProblemFile::parse(r#"{"version":1,"atoms":[[1.0,1.0],[0.5,-2.0]],"prior":[1.0,0.0]}"#).unwrap();
        let p = f.problem().unwrap();
        assert_eq!(p.element.coefficients(), &[-2.0, 0.0]);
        let f = ProblemFile::parse(r#"{"version":1,"example":{"kind":"dirac","lambda0":1.0},"prior":[0.25]}"#).unwrap();
        assert_eq!(f.problem().unwrap().element.coefficients(), &[0.75]);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = ProblemFile::parse(r#"{"version":1,"atoms":[[1.0,1.0],[-0.5,1.0]]}"#).unwrap_err();
        assert!(format!("{e:#}").contains("atoms[1]"), "{e:#}");
        let e = ProblemFile::parse(r#"{"version":2,"atoms":[[1.0,1.0]]}"#).unwrap_err();
        assert!(format!("{e:#}").contains("version"));
        let e = ProblemFile::parse("{\"version\":1,\n\"atomz\":[]}").unwrap_err();
        assert!(format!("{e:#}").contains("line 2"), "{e:#}");
        let e = ProblemFile::parse(r#"{"version":1,"atoms":[[1.0,1.0]],"method":{"gamma":-1}}"#).unwrap_err();
        assert!(format!("{e:#}").contains("method.gamma"));
    }
}

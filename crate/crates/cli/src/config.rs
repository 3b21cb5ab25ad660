use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use swb_core::borcherds::WeaklyHolomorphicInput;
use swb_core::hdomain::DEFAULT_C_MAX;
use swb_core::qspace::{CosetId, Kappa};
use swb_core::verify::{Tolerances, VerifyOptions};
use swb_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum KappaChoice {
    #[serde(rename = "1")]
    #[value(name = "1")]
    One,
    #[serde(rename = "4")]
    #[value(name = "4")]
    Four,
    #[serde(rename = "both")]
    #[value(name = "both")]
    Both,
}

impl KappaChoice {
    pub fn values(self) -> Vec<Kappa> {
        match self {
            KappaChoice::One => vec![Kappa::One],
            KappaChoice::Four => vec![Kappa::Four],
            KappaChoice::Both => Kappa::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: BTreeMap<String, f64>,
    pub t_hat_list: Vec<f64>,
    pub t_list: Vec<f64>,
    pub divergence_t_hats: Vec<f64>,
    pub kappa: KappaChoice,
    pub c_max: u32,
    pub input_form_path: Option<PathBuf>,
    /// b-values keyed "mu0:m" / "mu1:m" with m a rational.
    pub b_values: BTreeMap<String, f64>,
    pub output: OutputFormat,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: BTreeMap::new(),
            t_hat_list: vec![2.0, 10.0],
            t_list: vec![100.0, 400.0, 10000.0],
            divergence_t_hats: vec![8.0, 16.0, 32.0, 64.0],
            kappa: KappaChoice::Both,
            c_max: DEFAULT_C_MAX,
            input_form_path: None,
            b_values: BTreeMap::new(),
            output: OutputFormat::Json,
            out_dir: PathBuf::from("reports"),
            seed: 0,
            workers: 1,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::MissingInput(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerance_table().validate()?;
        for (name, list, min) in [
            ("t_hat_list", &self.t_hat_list, 1.0),
            ("t_list", &self.t_list, 1.0),
            ("divergence_t_hats", &self.divergence_t_hats, 1.0),
        ] {
            if list.is_empty() {
                return Err(Error::Domain(format!("{name} must not be empty")));
            }
            if let Some(v) = list.iter().find(|v| !(**v >= min) || !v.is_finite()) {
                return Err(Error::Domain(format!("{name} entries must be finite and >= {min}, got {v}")));
            }
        }
        if self.c_max == 0 {
            return Err(Error::Domain("c_max must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be positive".into()));
        }
        self.b_table()?;
        Ok(())
    }

    pub fn tolerance_table(&self) -> Tolerances {
        Tolerances(self.tolerances.clone())
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions { tolerances: self.tolerance_table(), c_max: self.c_max, ..VerifyOptions::default() }
    }

    /// The input form and the label reports carry for it.
    pub fn input_form(&self) -> Result<(WeaklyHolomorphicInput, String)> {
        match &self.input_form_path {
            Some(p) => Ok((WeaklyHolomorphicInput::from_file(p)?, p.display().to_string())),
            None => Ok((WeaklyHolomorphicInput::delta(20), "delta".to_string())),
        }
    }

    pub fn b_table(&self) -> Result<BTreeMap<(CosetId, Rational64), f64>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.b_values {
            let (coset, m) = k.split_once(':').ok_or_else(|| Error::Parse(format!("b-value key {k:?} is not coset:m")))?;
            let coset = match coset {
                "mu0" => CosetId::Mu0,
                "mu1" => CosetId::Mu1,
                other => return Err(Error::Parse(format!("unknown coset {other:?} in b-value key"))),
            };
            let m: Rational64 = m.trim().parse().map_err(|e| Error::Parse(format!("bad m in {k:?}: {e}")))?;
            out.insert((coset, m), *v);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn parses_partial_json() {
        let c: RunConfig = serde_json::from_str(r#"{"kappa": "4", "t_hat_list": [3], "tolerances": {"zagier": 1e-5}}"#).unwrap();
        assert_eq!(c.kappa, KappaChoice::Four);
        assert_eq!(c.t_hat_list, vec![3.0]);
        assert_eq!(c.t_list.len(), 3);
        assert!(serde_json::from_str::<RunConfig>(r#"{"kapa": "4"}"#).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let c = RunConfig { t_list: vec![], ..RunConfig::default() };
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.tolerances.insert("zagier".into(), 0.0);
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.b_values.insert("mu2:1".into(), 1.0);
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.b_values.insert("mu1:3/4".into(), 1.0);
        assert_eq!(c.b_table().unwrap()[&(CosetId::Mu1, Rational64::new(3, 4))], 1.0);
    }
}

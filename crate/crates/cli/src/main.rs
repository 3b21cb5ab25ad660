mod config;
mod jobs;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{KappaChoice, OutputFormat, RunConfig};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use swb_core::eisenstein::weight32_a0_constant;
use swb_core::specfun::{
    constant_a, constant_a_alternative, constant_btilde, erf, zeta_prime, zeta_star_prime, EULER_GAMMA,
};
use swb_core::verify::selftest::{specfun_battery, theta_battery};
use swb_core::verify::{assemble_main_theorem, AVariant, OrdinaryCaseInputs, VerificationReport};
use swb_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "swb", version, about = "Numerical verification workbench")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Flags that override fields of the JSON config one-to-one.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// JSON config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Per-identity tolerance, as id=value (repeatable)
    #[arg(long = "tolerance", value_name = "ID=VALUE", global = true)]
    tolerances: Vec<String>,
    #[arg(long, value_delimiter = ',', global = true)]
    t_hat_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', global = true)]
    t_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', global = true)]
    divergence_t_hats: Option<Vec<f64>>,
    #[arg(long, global = true)]
    kappa: Option<KappaChoice>,
    #[arg(long, global = true)]
    c_max: Option<u32>,
    #[arg(long, global = true)]
    input_form_path: Option<PathBuf>,
    /// b-value, as coset:m=value (repeatable)
    #[arg(long = "b-value", value_name = "COSET:M=VALUE", global = true)]
    b_values: Vec<String>,
    #[arg(long, global = true)]
    output: Option<OutputFormat>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one identity check, or all of them
    Verify { id: String },
    /// Truncated integral of E(z,s) against its closed form
    Zagier {
        /// s as re or re,im
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
        #[arg(long)]
        t_hat: Option<f64>,
    },
    /// Limit-case decomposition and the closed-form comparisons
    LimitCase,
    /// Fit of the log-norm integral of Delta against log T^
    Divergence,
    /// Assembled expansion for the input form
    Assemble,
    /// Print the numerical constants
    Constants,
    /// Property batteries for special functions and theta series
    Selftest,
}

fn split_pair<'a>(s: &'a str, what: &str) -> Result<(&'a str, f64)> {
    let (k, v) = s.rsplit_once('=').ok_or_else(|| Error::Parse(format!("{what} {s:?} is not key=value")))?;
    let v: f64 = v.trim().parse().map_err(|e| Error::Parse(format!("{what} {s:?}: {e}")))?;
    Ok((k.trim(), v))
}

fn build_config(o: &Overrides) -> Result<RunConfig> {
    let mut c = match &o.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    for t in &o.tolerances {
        let (k, v) = split_pair(t, "tolerance")?;
        c.tolerances.insert(k.to_string(), v);
    }
    for b in &o.b_values {
        let (k, v) = split_pair(b, "b-value")?;
        c.b_values.insert(k.to_string(), v);
    }
    if let Some(v) = &o.t_hat_list {
        c.t_hat_list = v.clone();
    }
    if let Some(v) = &o.t_list {
        c.t_list = v.clone();
    }
    if let Some(v) = &o.divergence_t_hats {
        c.divergence_t_hats = v.clone();
    }
    if let Some(v) = o.kappa {
        c.kappa = v;
    }
    if let Some(v) = o.c_max {
        c.c_max = v;
    }
    if let Some(v) = &o.input_form_path {
        c.input_form_path = Some(v.clone());
    }
    if let Some(v) = o.output {
        c.output = v;
    }
    if let Some(v) = &o.out_dir {
        c.out_dir = v.clone();
    }
    if let Some(v) = o.seed {
        c.seed = v;
    }
    if let Some(v) = o.workers {
        c.workers = v;
    }
    c.validate()?;
    Ok(c)
}

/// Writes the reports, prints one line each and returns whether every hard
/// check passed.
fn emit(reports: &[VerificationReport], cfg: &RunConfig) -> Result<bool> {
    for r in reports {
        println!("{}", output::text_line(r));
    }
    let paths = output::write_reports(reports, cfg)?;
    println!("wrote {} report file(s) to {}", paths.len(), cfg.out_dir.display());
    let hard_fail = reports.iter().filter(|r| r.is_hard() && !r.pass).count();
    let soft = reports.iter().filter(|r| !r.is_hard() && !r.pass).count();
    println!(
        "{} report(s): {} hard failure(s), {} soft discrepancy(ies)",
        reports.len(),
        hard_fail,
        soft
    );
    Ok(hard_fail == 0)
}

fn run_reports(jobs: Vec<jobs::Job>, cfg: &RunConfig, only: Option<&str>) -> Result<bool> {
    let reports = jobs::run_jobs(&jobs, &cfg.verify_options(), cfg.workers, only)?;
    emit(&reports, cfg)
}

fn constants() -> Result<()> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let rows: Vec<(&str, f64)> = vec![
        ("A", constant_a()),
        ("A (alternative assembly)", constant_a_alternative()),
        ("B~", constant_btilde()),
        ("euler gamma", EULER_GAMMA),
        ("zeta'(-1)", zeta_prime(c(-1.0))?.re),
        ("zeta'(2)", zeta_prime(c(2.0))?.re),
        ("zeta*'(2)", zeta_star_prime(c(2.0))?.re),
        ("zeta*'(-1)", zeta_star_prime(c(-1.0))?.re),
        ("erf(sqrt(pi/2))", erf((std::f64::consts::PI / 2.0).sqrt())),
        ("weight 3/2 constant-term constant", weight32_a0_constant()?),
    ];
    for (name, v) in rows {
        println!("{name:<36} {}", output::sci(v));
    }
    Ok(())
}

fn assemble(cfg: &RunConfig) -> Result<()> {
    let (f, label) = cfg.input_form()?;
    let b_values = cfg.b_table()?;
    let mut out = BTreeMap::new();
    for variant in AVariant::BOTH {
        let inputs = OrdinaryCaseInputs { f: f.clone(), b_values: b_values.clone(), a_variant: variant };
        let mut per_t = Vec::new();
        for &t in &cfg.t_hat_list {
            let b = assemble_main_theorem(&inputs, t)?;
            println!("input {label}, A {}, T^ = {t}", variant.name());
            for term in &b.terms {
                println!("  {:<32} {}", term.label, output::sci(term.value));
            }
            println!("  {:<32} {}", "total", output::sci(b.total));
            println!("  {:<32} {}", "log T^ coefficient", output::sci(b.log_t_hat_coefficient));
            per_t.push(b);
        }
        out.insert(variant.name(), per_t);
    }
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::MissingInput(format!("{}: {e}", cfg.out_dir.display())))?;
    let path = cfg.out_dir.join("assemble.json");
    let text = serde_json::to_string_pretty(&out).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(&path, text + "\n").map_err(|e| Error::MissingInput(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn selftest(cfg: &RunConfig) -> Result<bool> {
    let mut ok = true;
    for b in specfun_battery(cfg.seed)?.into_iter().chain(theta_battery(cfg.seed)?) {
        println!(
            "{} {:<32} samples={:<4} max_err={} tol={}",
            if b.pass { "PASS" } else { "FAIL" },
            b.name,
            b.samples,
            output::sci(b.max_err),
            output::sci(b.tolerance)
        );
        ok &= b.pass;
    }
    Ok(ok)
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = build_config(&cli.overrides)?;
    match &cli.command {
        Command::Verify { id } => {
            let all = jobs::all_jobs(&cfg)?;
            let picked = jobs::select(all, id)?;
            run_reports(picked, &cfg, Some(id))
        }
        Command::Zagier { s, t_hat } => {
            let cases = match (s, t_hat) {
                (None, None) => jobs::ZAGIER_CASES.to_vec(),
                (s, t) => {
                    let s = s.clone().unwrap_or_else(|| vec![2.0]);
                    if s.is_empty() || s.len() > 2 {
                        return Err(Error::Parse("--s takes re or re,im".into()));
                    }
                    vec![(s[0], s.get(1).copied().unwrap_or(0.0), t.unwrap_or(2.0))]
                }
            };
            run_reports(jobs::zagier_jobs(&cases), &cfg, None)
        }
        Command::LimitCase => run_reports(jobs::limit_jobs(&cfg), &cfg, None),
        Command::Divergence => run_reports(jobs::divergence_jobs(cfg.divergence_t_hats.clone()), &cfg, None),
        Command::Assemble => assemble(&cfg).map(|_| true),
        Command::Constants => constants().map(|_| true),
        Command::Selftest => selftest(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

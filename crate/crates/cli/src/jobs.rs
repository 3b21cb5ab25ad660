use crate::config::RunConfig;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;
use swb_core::borcherds::WeaklyHolomorphicInput;
use swb_core::hdomain::HPoint;
use swb_core::qspace::{CosetId, Kappa};
use swb_core::verify::*;
use swb_core::{Error, Result};

type Runner = Box<dyn Fn(&VerifyOptions) -> Result<Vec<VerificationReport>> + Send + Sync>;

/// One unit of work: the ids it reports under and how to produce them.
pub struct Job {
    pub ids: &'static [&'static str],
    run: Runner,
}

impl Job {
    fn new<F>(ids: &'static [&'static str], f: F) -> Self
    where
        F: Fn(&VerifyOptions) -> Result<Vec<VerificationReport>> + Send + Sync + 'static,
    {
        Self { ids, run: Box::new(f) }
    }

    fn one<F>(id: &'static [&'static str], f: F) -> Self
    where
        F: Fn(&VerifyOptions) -> Result<VerificationReport> + Send + Sync + 'static,
    {
        Self::new(id, move |o| Ok(vec![f(o)?]))
    }

    fn execute(&self, opts: &VerifyOptions) -> Vec<VerificationReport> {
        match (self.run)(opts) {
            Ok(r) => r,
            Err(e) => vec![VerificationReport::errored(self.ids[0], &e, opts, ConfigSnapshot::default())],
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub const ZAGIER_CASES: [(f64, f64, f64); 3] = [(2.0, 0.0, 2.0), (3.0, 0.0, 1.5), (2.5, 0.5, 4.0)];

pub fn zagier_jobs(cases: &[(f64, f64, f64)]) -> Vec<Job> {
    cases
        .iter()
        .map(|&(re, im, t)| Job::one(&["zagier"], move |o| verify_zagier(Complex64::new(re, im), t, o)))
        .collect()
}

pub fn limit_jobs(cfg: &RunConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &t in &cfg.t_hat_list {
        for k in cfg.kappa.values() {
            jobs.push(Job::new(&["limit_case", "cor213"], move |o| {
                let d = limit_case_decomposition(t, k, o)?;
                let mut out = vec![verify_limit_case(&d, o)?];
                for v in AVariant::BOTH {
                    out.push(verify_cor213(&d, v, o)?);
                }
                Ok(out)
            }));
        }
    }
    jobs
}

pub fn divergence_jobs(t_hats: Vec<f64>) -> Vec<Job> {
    vec![Job::new(&["divergence", "divergence_residual"], move |o| verify_divergence(&t_hats, o))]
}

/// Every verifier under the given configuration, in a fixed order.
pub fn all_jobs(cfg: &RunConfig) -> Result<Vec<Job>> {
    let (input, label) = cfg.input_form()?;
    let input = Arc::new(input);
    let label: Arc<str> = label.into();
    let t_hats = cfg.t_hat_list.clone();
    let t0 = t_hats[0];
    let taus = [HPoint::i(), HPoint::new(0.3, 0.7)];
    let mut jobs = zagier_jobs(&ZAGIER_CASES);
    for z in [HPoint::i(), HPoint::new(0.3, 1.7)] {
        jobs.push(Job::one(&["eisenstein_fourier"], move |o| verify_eisenstein_fourier(c(2.0), z, o)));
    }
    for &t in &t_hats {
        jobs.push(Job::one(&["lemma212"], move |o| verify_lemma212(t, o)));
        jobs.push(Job::one(&["lemma212_e2e"], move |o| verify_lemma212_e2e(t, o)));
        jobs.push(Job::one(&["lemma221"], move |o| verify_lemma221(t, o)));
        jobs.push(Job::one(&["derivadaeis"], move |o| verify_derivadaeis(t, o)));
        jobs.push(Job::one(&["lemma224"], move |o| verify_lemma224(c(2.0), t, o)));
    }
    for k in cfg.kappa.values() {
        jobs.push(Job::one(&["lemma225"], move |o| verify_lemma225(&[2.0, 2.5, 3.0], t0, k, o)));
    }
    jobs.push(Job::one(&["lemma243"], verify_lemma243));
    for tau in taus {
        for coset in CosetId::ALL {
            jobs.push(Job::one(&["prop185"], move |o| verify_prop185(tau, coset, o)));
            jobs.push(Job::one(&["lemma184"], move |o| verify_lemma184(tau, coset, o)));
            for &t in &t_hats {
                jobs.push(Job::one(&["lemma115"], move |o| verify_lemma115(tau, t, coset, o)));
            }
        }
    }
    let one = Arc::new(WeaklyHolomorphicInput::constant(1.0));
    let f5 = Arc::new(WeaklyHolomorphicInput::from_json(
        r#"{"weight": "-1/2", "cosets": {"mu0": [["0", 1], ["1", 5]], "mu1": []}}"#,
    )?);
    for &t in &cfg.t_list {
        for (f, name) in [(one.clone(), "one"), (f5.clone(), "one_plus_5q")] {
            jobs.push(Job::one(&["integralsola"], move |o| verify_integralsola("integralsola", &f, name, t, o)));
        }
        let (f, l) = (input.clone(), label.clone());
        jobs.push(Job::one(&["integralsola_input"], move |o| verify_integralsola("integralsola_input", &f, &l, t, o)));
        let (f, l) = (input.clone(), label.clone());
        jobs.push(Job::one(&["prop215"], move |o| verify_prop215(&f, &l, t, o)));
        let (f, l) = (input.clone(), label.clone());
        jobs.push(Job::one(&["prop226"], move |o| verify_prop226(&f, &l, t, t0, o)));
        let (f, l) = (input.clone(), label.clone());
        jobs.push(Job::one(&["lemma232"], move |o| verify_lemma232(&f, &l, t, t0, o)));
    }
    jobs.extend(limit_jobs(cfg));
    jobs.push(Job::one(&["lema513"], move |o| verify_lema513(t0, 50.0, Kappa::One, 4, o)));
    for &t in &t_hats {
        for v in AVariant::BOTH {
            let f = input.clone();
            jobs.push(Job::one(&["mainresult"], move |o| verify_mainresult(&f, t, v, o)));
        }
    }
    jobs.extend(divergence_jobs(cfg.divergence_t_hats.clone()));
    Ok(jobs)
}

/// Known identity ids, in report order.
pub fn known_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = Vec::new();
    for j in all_jobs(&RunConfig::default()).unwrap_or_default() {
        for id in j.ids {
            if !ids.contains(id) {
                ids.push(id);
            }
        }
    }
    ids
}

pub fn select(jobs: Vec<Job>, id: &str) -> Result<Vec<Job>> {
    if id == "all" {
        return Ok(jobs);
    }
    let picked: Vec<Job> = jobs.into_iter().filter(|j| j.ids.contains(&id)).collect();
    if picked.is_empty() {
        return Err(Error::Domain(format!("unknown identity id {id:?}; known: {}", known_ids().join(", "))));
    }
    Ok(picked)
}

/// Runs the jobs on a pool of `workers` threads; reports come back in job
/// order, restricted to `only` when given.
pub fn run_jobs(jobs: &[Job], opts: &VerifyOptions, workers: usize, only: Option<&str>) -> Result<Vec<VerificationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
    let nested: Vec<Vec<VerificationReport>> = pool.install(|| jobs.par_iter().map(|j| j.execute(opts)).collect());
    Ok(nested
        .into_iter()
        .flatten()
        .filter(|r| only.map_or(true, |id| id == "all" || r.identity_id == id))
        .collect())
}

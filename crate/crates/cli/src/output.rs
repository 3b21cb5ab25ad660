use crate::config::{OutputFormat, RunConfig};
use serde_json::{Map, Number, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use swb_core::verify::VerificationReport;
use swb_core::{Error, Result};

/// Scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.16e}");
    // a zero exponent is written e+0, which is also how the JSON number text keeps it
    match s.strip_suffix("e0") {
        Some(m) => format!("{m}e+0"),
        None => s,
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        // the text is kept verbatim (serde_json built with arbitrary_precision)
        Value::Number(sci(x).parse::<Number>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn complex(re: f64, im: f64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(re));
    m.insert("im".into(), num(im));
    Value::Object(m)
}

pub fn report_json(r: &VerificationReport, run: &RunConfig) -> Result<Value> {
    let mut config = serde_json::to_value(&r.config).map_err(|e| Error::Parse(e.to_string()))?;
    if let Value::Object(m) = &mut config {
        m.insert("tolerance".into(), num(r.config.tolerance));
        m.insert("lhs_provenance".into(), serde_json::to_value(r.lhs_provenance).map_err(|e| Error::Parse(e.to_string()))?);
        m.insert("rhs_provenance".into(), serde_json::to_value(r.rhs_provenance).map_err(|e| Error::Parse(e.to_string()))?);
        m.insert("run".into(), serde_json::to_value(run).map_err(|e| Error::Parse(e.to_string()))?);
    }
    let mut m = Map::new();
    m.insert("identity_id".into(), Value::String(r.identity_id.clone()));
    m.insert("lhs".into(), complex(r.lhs.re, r.lhs.im));
    m.insert("rhs".into(), complex(r.rhs.re, r.rhs.im));
    m.insert("abs_err".into(), num(r.abs_err));
    m.insert("rel_err".into(), num(r.rel_err));
    m.insert("pass".into(), Value::Bool(r.pass));
    m.insert("notes".into(), Value::Array(r.notes.iter().cloned().map(Value::String).collect()));
    m.insert("config".into(), config);
    Ok(Value::Object(m))
}

pub const CSV_HEADER: &str = "identity_id,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,pass";

pub fn csv_row(r: &VerificationReport) -> String {
    let f = |x: f64| if x.is_nan() { "nan".to_string() } else { sci(x) };
    format!(
        "{},{},{},{},{},{},{},{}",
        r.identity_id,
        f(r.lhs.re),
        f(r.lhs.im),
        f(r.rhs.re),
        f(r.rhs.im),
        f(r.abs_err),
        f(r.rel_err),
        r.pass
    )
}

pub fn text_line(r: &VerificationReport) -> String {
    let tag = match (r.pass, r.is_hard()) {
        (true, _) => "PASS",
        (false, true) => "FAIL",
        (false, false) => "DIFF",
    };
    let mut s = format!(
        "{tag} {:<20} lhs={} rhs={} abs_err={} rel_err={}",
        r.identity_id,
        sci(r.lhs.re),
        sci(r.rhs.re),
        sci(r.abs_err),
        sci(r.rel_err)
    );
    for n in &r.notes {
        let _ = write!(s, "\n     {n}");
    }
    s
}

/// Writes one file per identity id under the output directory and returns
/// the paths written.
pub fn write_reports(reports: &[VerificationReport], run: &RunConfig) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::MissingInput(format!("{}: {e}", run.out_dir.display()));
    std::fs::create_dir_all(&run.out_dir).map_err(io)?;
    let mut by_id: BTreeMap<&str, Vec<&VerificationReport>> = BTreeMap::new();
    for r in reports {
        by_id.entry(r.identity_id.as_str()).or_default().push(r);
    }
    let mut paths = Vec::new();
    for (id, rs) in by_id {
        let (ext, body) = match run.output {
            OutputFormat::Json => {
                let arr = rs.iter().map(|r| report_json(r, run)).collect::<Result<Vec<_>>>()?;
                let mut text = serde_json::to_string_pretty(&Value::Array(arr)).map_err(|e| Error::Parse(e.to_string()))?;
                text.push('\n');
                ("json", text)
            }
            OutputFormat::Csv => {
                let mut text = format!("{CSV_HEADER}\n");
                for r in rs {
                    text.push_str(&csv_row(r));
                    text.push('\n');
                }
                ("csv", text)
            }
            OutputFormat::Text => {
                let mut text = String::new();
                for r in rs {
                    text.push_str(&text_line(r));
                    text.push('\n');
                }
                ("txt", text)
            }
        };
        let path = run.out_dir.join(format!("{id}.{ext}"));
        std::fs::write(&path, body).map_err(io)?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use swb_core::verify::{verify_lemma212, VerifyOptions};

    #[test]
    fn json_and_csv_carry_the_same_digits() {
        let r = verify_lemma212(2.0, &VerifyOptions::default()).unwrap();
        let j = report_json(&r, &RunConfig::default()).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let row = csv_row(&r);
        let lhs = sci(r.lhs.re);
        assert!(text.contains(&format!("\"re\":{lhs}")), "{text}");
        assert!(row.contains(&lhs));
        assert_eq!(lhs.parse::<f64>().unwrap(), r.lhs.re);
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(sci(0.5), "5.0000000000000000e-1");
        assert_eq!(sci(1.5), "1.5000000000000000e+0");
        assert_eq!(serde_json::to_string(&num(0.0)).unwrap(), sci(0.0));
    }
}

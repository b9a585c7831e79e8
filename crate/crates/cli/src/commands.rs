//! Command implementations. Each returns the document to write and the exit
//! status; `main` only routes output.

use std::fmt::Write as _;
use std::path::Path;

use lfframe::framekit::WaveletSystem;
use lfframe::harmonic::{fast_inverse_transform, fast_transform, inverse_transform, transform};
use lfframe::report::{run_periodic, run_verify};
use lfframe::{Exec, FieldConfig, StepFunction};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::{exit, CliError, CliResult, Outcome};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    version: u32,
    tool_version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn document<T: Serialize>(command: &'static str, config: &RunConfig, body: T) -> String {
    to_json(&Document {
        version: crate::REPORT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        body,
    })
}

/// Text and JSON description of the field and the first `count` translations `u(n)`.
pub fn field_info(cfg: &RunConfig, count: u64) -> CliResult<(String, String)> {
    let field = cfg.field()?;
    let q = field.q();
    let mut text = String::new();
    let _ = writeln!(text, "field      GF({q})((t)), q = {q} = {}^{}", field.p(), field.c());
    if let Some(m) = field.modulus() {
        let _ = writeln!(text, "modulus    {m:?} (coefficients from the constant term)");
    }
    let _ = writeln!(text, "prime      t, |t| = 1/{q}");
    let _ = writeln!(text, "ring       D = {{|x| <= 1}}, D/B = GF({q})");
    let _ = writeln!(text, "ideal      B = tD = {{|x| < 1}}, B^k = t^k D has measure {q}^-k");
    let _ = writeln!(text, "character  chi(1*t^-1) = exp(2 pi i/{}), trivial on D", field.p());
    let _ = writeln!(text, "{:>4}  u(n)", "n");
    let table = uindex_rows(&field, 0..count);
    for (n, u) in &table {
        let _ = writeln!(text, "{n:>4}  {u}");
    }
    let body = json!({
        "field": {"p": field.p(), "c": field.c(), "q": q, "modulus": field.modulus()},
        "prime_element": "1*t^1",
        "residue_field_order": q,
        "uindex": table.iter().map(|(n, u)| json!({"n": n, "u": u})).collect::<Vec<_>>(),
    });
    Ok((text, document("field-info", cfg, body)))
}

fn uindex_rows(field: &FieldConfig, ns: impl IntoIterator<Item = u64>) -> Vec<(u64, String)> {
    ns.into_iter().map(|n| (n, field.format_element(&field.uindex(n)))).collect()
}

pub fn uindex(cfg: &RunConfig, ns: &[u64]) -> CliResult<(String, String)> {
    let field = cfg.field()?;
    let rows = uindex_rows(&field, ns.iter().copied());
    let mut text = String::new();
    for (n, u) in &rows {
        let _ = writeln!(text, "{n}\t{u}");
    }
    let body = json!({ "uindex": rows.iter().map(|(n, u)| json!({"n": n, "u": u})).collect::<Vec<_>>() });
    Ok((text, document("uindex", cfg, body)))
}

/// Forward or inverse transform of a CSV dump; returns the output dump.
pub fn transform_csv(input: &Path, inverse: bool, naive: bool) -> CliResult<String> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    let (field, f) = StepFunction::from_csv(&text).map_err(|e| CliError::data(input, e))?;
    let g = match (inverse, naive) {
        (false, false) => fast_transform(&field, &f),
        (false, true) => transform(&field, &f),
        (true, false) => fast_inverse_transform(&field, &f),
        (true, true) => inverse_transform(&field, &f),
    };
    Ok(g.to_csv(&field))
}

pub fn verify(cfg: &RunConfig, base: &Path, exec: Exec) -> CliResult<Outcome> {
    let sys = cfg.system(base)?;
    let report = run_verify(&sys, &cfg.verify_settings(), exec).map_err(CliError::config)?;
    let pass = report.verdicts.all;
    let summary = format!(
        "verify: {} (gram_max_dev {:e}, frame ratio [{}, {}])",
        if pass { "pass" } else { "FAIL" },
        report.gram_max_dev,
        report.frame_ratio_min,
        report.frame_ratio_max
    );
    Ok(Outcome {
        output: document("verify", cfg, json!({ "report": report })),
        code: if pass { exit::PASS } else { exit::VERIFIED_FALSE },
        summary: Some(summary),
    })
}

pub fn periodic(cfg: &RunConfig, base: &Path, exec: Exec) -> CliResult<Outcome> {
    let sys = cfg.system(base)?;
    let report = run_periodic(&sys, &cfg.periodic_settings()?, exec).map_err(CliError::config)?;
    let pass = report.verdicts.all;
    let summary = format!(
        "periodic: {} (frame-sum residual {:e})",
        if pass { "pass" } else { "FAIL" },
        report.frame_sum.max_residual
    );
    Ok(Outcome {
        output: document("periodic", cfg, json!({ "periodic": report })),
        code: if pass { exit::PASS } else { exit::VERIFIED_FALSE },
        summary: Some(summary),
    })
}

/// Writes `phi.csv`, `psi_<l>.csv` and their `_hat` transforms into `dir`
/// and returns a JSON manifest.
pub fn dump_wavelets(cfg: &RunConfig, base: &Path, dir: &Path) -> CliResult<String> {
    let sys = cfg.system(base)?;
    let field = sys.field().clone();
    let ws = WaveletSystem::build(sys, cfg.run.cascade_iterations);
    std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for l in 0..ws.generator_count() {
        let name = if l == 0 { "phi".to_string() } else { format!("psi_{l}") };
        for (suffix, g) in [("", ws.generator(l)), ("_hat", ws.generator_hat(l))] {
            let file = format!("{name}{suffix}.csv");
            std::fs::write(dir.join(&file), g.to_csv(&field))
                .map_err(|e| CliError::Config(format!("cannot write {file}: {e}")))?;
            files.push(json!({
                "file": file,
                "resolution": g.resolution(),
                "support_exponent": g.support_exponent(),
                "cells": g.len(),
                "norm2": g.norm2(),
            }));
        }
    }
    Ok(document("dump-wavelets", cfg, json!({ "cascade": ws.cascade(), "files": files })))
}

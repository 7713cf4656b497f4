//! Command line front end for the scenario engine.
//!
//! Four subcommands cover the whole workflow. `check` parses a scenario
//! file and verifies the global consistency identity, `compute` prints the
//! full per-value report (optionally as JSON), `catalog` exposes the
//! built-in worked examples, and `skeleton` turns a polynomial expression
//! into a scenario template ready for editing.
//!
//! The entry point is [`run`], which takes the argument list and explicit
//! output streams and returns the process exit code, so the whole binary
//! is testable in memory.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use merozeta::catalog;
use merozeta::{
    emit_germ_json, emit_json, parse_poly, parse_scenario, skeleton, NCModel, PolyValueExtras,
    ProjValue, Report, ScenarioBody, ScenarioFile, ValueRecord,
};
use num_bigint::BigInt;

/// Everything parsed and every checked identity held.
pub const EXIT_OK: i32 = 0;
/// Bad usage, unreadable input, or a scenario that does not parse.
pub const EXIT_USAGE: i32 = 1;
/// The scenario parses but its declared data is inconsistent.
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "merozeta",
    version,
    about = "Zeta-functions of local monodromies from stratified scenario files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a scenario and verify the global consistency identity
    Check {
        /// Scenario file
        file: String,
    },
    /// Print the full report for a scenario
    Compute {
        /// Scenario file
        file: String,
        /// Only report these values (repeatable); undeclared values get
        /// their typical record
        #[arg(long)]
        value: Vec<String>,
        /// Emit the report as a single line of JSON
        #[arg(long)]
        json: bool,
    },
    /// List the built-in examples, or print one
    Catalog {
        /// Entry name; omit to list all entries
        name: Option<String>,
        /// Print the computed report as JSON instead of the scenario source
        #[arg(long)]
        json: bool,
    },
    /// Generate a scenario template from a polynomial expression
    Skeleton {
        /// Polynomial in the affine variables, e.g. "x + x^2*y"
        polynomial: String,
        /// Name for the generated scenario
        #[arg(long, default_value = "draft")]
        name: String,
    },
}

/// Runs the command line with explicit argument and output streams.
///
/// `args` must include the program name in first position, as in
/// `std::env::args`. The return value is the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match cli.command {
        Command::Check { file } => check_cmd(&file, out, err),
        Command::Compute { file, value, json } => compute_cmd(&file, &value, json, out, err),
        Command::Catalog { name, json } => catalog_cmd(name.as_deref(), json, out, err),
        Command::Skeleton { polynomial, name } => skeleton_cmd(&polynomial, &name, out, err),
    }
}

/// Reads and parses a scenario file, reporting failures on `err` with the
/// usage exit code.
fn load(path: &str, err: &mut dyn Write) -> Result<ScenarioFile, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(err, "error: {path}: {e}");
            return Err(EXIT_USAGE);
        }
    };
    match parse_scenario(&text) {
        Ok(file) => Ok(file),
        Err(e) => {
            let _ = writeln!(err, "{path}:{e}");
            Err(EXIT_USAGE)
        }
    }
}

fn check_cmd(path: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let file = match load(path, err) {
        Ok(file) => file,
        Err(code) => return code,
    };
    let residual = match &file.body {
        ScenarioBody::Germ(_) => {
            // A germ scenario is a single local model; parsing already
            // validated it and there is no global identity to test.
            let _ = writeln!(out, "ok: {} (germ)", file.name);
            return EXIT_OK;
        }
        ScenarioBody::Meromorphic(scn) => scn.consistency_residual(),
        ScenarioBody::Polynomial { scenario, .. } => scenario.consistency_residual(),
    };
    match residual {
        Ok(r) if r == BigInt::from(0) => {
            let _ = writeln!(out, "ok: {} ({}), residual 0", file.name, file.kind_name());
            EXIT_OK
        }
        Ok(r) => {
            let _ = writeln!(err, "consistency failure: {}: residual {r}", file.name);
            EXIT_INCONSISTENT
        }
        Err(e) => {
            let _ = writeln!(err, "consistency failure: {}: {e}", file.name);
            EXIT_INCONSISTENT
        }
    }
}

fn compute_cmd(
    path: &str,
    values: &[String],
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let file = match load(path, err) {
        Ok(file) => file,
        Err(code) => return code,
    };
    emit_file(&file, values, json, out, err)
}

/// Shared back end of `compute` and `catalog --json`.
fn emit_file(
    file: &ScenarioFile,
    values: &[String],
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if let ScenarioBody::Germ(model) = &file.body {
        if !values.is_empty() {
            let _ = writeln!(err, "error: --value does not apply to germ scenarios");
            return EXIT_USAGE;
        }
        if json {
            let _ = writeln!(out, "{}", emit_germ_json(&file.name, model));
        } else {
            write_germ_text(&file.name, model, out);
        }
        return EXIT_OK;
    }
    let mut report = match report_for(file) {
        Ok(report) => report,
        Err(msg) => {
            let _ = writeln!(err, "consistency failure: {}: {msg}", file.name);
            return EXIT_INCONSISTENT;
        }
    };
    if let Err(msg) = select_values(file, &mut report, values) {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    if json {
        let _ = writeln!(out, "{}", emit_json(&report));
    } else {
        write_report_text(file.kind_name(), &report, out);
    }
    if report.residual == BigInt::from(0) {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}

fn report_for(file: &ScenarioFile) -> Result<Report, String> {
    match &file.body {
        ScenarioBody::Meromorphic(scn) => scn.build_report().map_err(|e| e.to_string()),
        ScenarioBody::Polynomial { scenario, .. } => {
            scenario.build_report().map_err(|e| e.to_string())
        }
        ScenarioBody::Germ(_) => Err("germ scenarios have no value report".into()),
    }
}

/// Restricts the report to the requested values, synthesising the typical
/// record for values the scenario does not declare.
fn select_values(
    file: &ScenarioFile,
    report: &mut Report,
    requested: &[String],
) -> Result<(), String> {
    if requested.is_empty() {
        return Ok(());
    }
    let wanted: std::collections::BTreeSet<ProjValue> =
        requested.iter().map(|s| ProjValue::finite(s.as_str())).collect();
    let mut selected = Vec::new();
    for value in wanted {
        match report.values.iter().find(|r| r.value == value) {
            Some(record) => selected.push(record.clone()),
            None => selected.push(typical_record(file, value)?),
        }
    }
    report.values = selected;
    Ok(())
}

/// Builds the record the report would contain if `value` were declared
/// with only typical data. All fields come from the scenario's own
/// accessors, so a value that is secretly atypical still reports honestly.
fn typical_record(file: &ScenarioFile, value: ProjValue) -> Result<ValueRecord, String> {
    let fail = |e: merozeta::ScenarioError| e.to_string();
    match &file.body {
        ScenarioBody::Meromorphic(scn) => {
            let zeta = scn.zeta_value(&value).map_err(fail)?;
            let typical = scn.typical_zeta().map_err(fail)?;
            let chi_gen = scn.resolve_chi_gen().map_err(fail)?;
            let chi_fiber = small(scn.chi_fiber_at(&value).map_err(fail)?)?;
            let atypical = zeta != typical || BigInt::from(chi_fiber) != chi_gen;
            Ok(ValueRecord {
                degree: zeta.degree(),
                zeta,
                chi_fiber,
                mu: scn.mu_at(&value),
                lambda: scn.lambda_at(&value),
                atypical,
                poly: None,
                value,
            })
        }
        ScenarioBody::Polynomial { scenario, .. } => {
            let zeta = scenario.zeta_poly_at(&value).map_err(fail)?;
            let typical = scenario.typical_zeta().map_err(fail)?;
            let chi_gen = scenario.resolve_chi_gen().map_err(fail)?;
            let chi_fiber = small(scenario.chi_fiber_at(&value).map_err(fail)?)?;
            let atypical = zeta != typical || BigInt::from(chi_fiber) != chi_gen;
            let mero = scenario.to_meromorphic().map_err(fail)?;
            Ok(ValueRecord {
                degree: zeta.degree(),
                zeta,
                chi_fiber,
                mu: mero.mu_at(&value),
                lambda: mero.lambda_at(&value),
                atypical,
                poly: Some(PolyValueExtras {
                    atypical_at_infinity: scenario.atypical_at_infinity(&value),
                    mu_p: scenario.mu_p_at(&value),
                    lambda_p: scenario.lambda_p_at(&value),
                }),
                value,
            })
        }
        ScenarioBody::Germ(_) => Err("germ scenarios have no value records".into()),
    }
}

fn small(value: BigInt) -> Result<i64, String> {
    i64::try_from(value).map_err(|e| format!("fibre characteristic out of range: {e}"))
}

fn write_germ_text(name: &str, model: &NCModel, out: &mut dyn Write) {
    let zero = model.zeta_zero();
    let infinity = model.zeta_infinity();
    let _ = writeln!(out, "scenario {name} (germ)");
    let _ = writeln!(out, "zeta_zero {zero} degree {}", zero.degree());
    let _ = writeln!(out, "zeta_infinity {infinity} degree {}", infinity.degree());
}

fn write_report_text(kind: &str, report: &Report, out: &mut dyn Write) {
    let _ = writeln!(out, "scenario {} ({kind}, dim {})", report.scenario, report.n);
    let _ = writeln!(out, "chi_gen {}", report.chi_gen);
    for record in &report.values {
        let _ = writeln!(
            out,
            "value {}: zeta {} degree {} chi_fiber {} mu {} lambda {} {}",
            record.value,
            record.zeta,
            record.degree,
            record.chi_fiber,
            record.mu,
            record.lambda,
            flag(record.atypical),
        );
        if let Some(extra) = &record.poly {
            let _ = writeln!(
                out,
                "  at infinity: mu_P {} lambda_P {} {}",
                extra.mu_p,
                extra.lambda_p,
                flag(extra.atypical_at_infinity),
            );
        }
    }
    let _ = writeln!(out, "totals: mu {} lambda {}", report.mu_total, report.lambda_total);
    let _ = writeln!(out, "residual {}", report.residual);
    if let Some(chi) = &report.chi_gen_from_defects {
        let _ = writeln!(out, "chi_gen_from_defects {chi}");
    }
    if let Some(chi) = &report.chi_gen_classic {
        let _ = writeln!(out, "chi_gen_classic {chi}");
    }
}

fn flag(atypical: bool) -> &'static str {
    if atypical {
        "atypical"
    } else {
        "typical"
    }
}

fn catalog_cmd(name: Option<&str>, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(name) = name else {
        for entry in catalog::entries() {
            let _ = writeln!(out, "{:<24} {}", entry.name, entry.parse().kind_name());
        }
        return EXIT_OK;
    };
    let Some(entry) = catalog::entry(name) else {
        let names: Vec<&str> = catalog::entries().iter().map(|e| e.name).collect();
        let _ = writeln!(
            err,
            "unknown catalog entry `{name}`; available: {}",
            names.join(", ")
        );
        return EXIT_USAGE;
    };
    if json {
        emit_file(&entry.parse(), &[], true, out, err)
    } else {
        let _ = write!(out, "{}", entry.source);
        EXIT_OK
    }
}

fn skeleton_cmd(expr: &str, name: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match parse_poly(expr) {
        Ok(poly) => {
            let _ = write!(out, "{}", skeleton(name, &poly));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "polynomial: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let full: Vec<&str> = std::iter::once("merozeta").chain(args.iter().copied()).collect();
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).expect("stdout is utf-8"),
            String::from_utf8(err).expect("stderr is utf-8"),
        )
    }

    #[test]
    fn no_arguments_is_a_usage_error() {
        let (code, _, err) = run_vec(&[]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"), "stderr was: {err}");
    }

    #[test]
    fn help_goes_to_stdout_and_succeeds() {
        let (code, out, _) = run_vec(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("check"));
        assert!(out.contains("skeleton"));
    }

    #[test]
    fn catalog_lists_every_entry() {
        let (code, out, _) = run_vec(&["catalog"]);
        assert_eq!(code, EXIT_OK);
        for entry in catalog::entries() {
            assert!(out.contains(entry.name), "missing {}", entry.name);
        }
    }

    #[test]
    fn catalog_prints_the_source_verbatim() {
        let (code, out, _) = run_vec(&["catalog", "broughton"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, catalog::entry("broughton").unwrap().source);
    }

    #[test]
    fn unknown_catalog_entry_lists_the_options() {
        let (code, _, err) = run_vec(&["catalog", "no-such-entry"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("broughton"));
        assert!(err.contains("cusp-germ"));
    }

    #[test]
    fn catalog_json_carries_the_residual_key() {
        let (code, out, _) = run_vec(&["catalog", "quadric", "--json"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"theorem3_residual\":0"));
        assert!(out.ends_with('\n'));
        assert_eq!(out.lines().count(), 1);
    }

    #[test]
    fn germ_catalog_json_uses_the_germ_schema() {
        let (code, out, _) = run_vec(&["catalog", "cusp-germ", "--json"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"zeta_zero\""));
        assert!(out.contains("\"degree_infinity\""));
    }

    #[test]
    fn skeleton_output_parses_and_checks() {
        let (code, out, _) = run_vec(&["skeleton", "x + x^2*y", "--name", "draft"]);
        assert_eq!(code, EXIT_OK);
        let file = parse_scenario(&out).expect("skeleton parses");
        assert_eq!(file.name, "draft");
    }

    #[test]
    fn bad_polynomial_is_a_usage_error() {
        let (code, _, err) = run_vec(&["skeleton", "x + "]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("polynomial:"));
    }

    #[test]
    fn missing_file_reports_on_stderr() {
        let (code, _, err) = run_vec(&["check", "/no/such/file.mz"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("/no/such/file.mz"));
    }

    #[test]
    fn check_passes_on_a_catalog_source_written_to_disk() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("linear.mz");
        std::fs::write(&path, catalog::entry("linear").unwrap().source).expect("write");
        let (code, out, _) = run_vec(&["check", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("ok: linear"));
        assert!(out.contains("residual 0"));
    }

    #[test]
    fn compute_value_filter_keeps_totals_global() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("broughton.mz");
        std::fs::write(&path, catalog::entry("broughton").unwrap().source).expect("write");
        let (code, out, _) = run_vec(&[
            "compute",
            path.to_str().unwrap(),
            "--value",
            "7",
            "--json",
        ]);
        assert_eq!(code, EXIT_OK);
        // The record for the undeclared value 7 is typical, but the totals
        // still describe the whole scenario.
        assert!(out.contains("\"value\":\"7\""));
        assert!(out.contains("\"atypical\":false"));
        assert!(out.contains("\"totals\":{\"mu\":0,\"lambda\":1}"));
    }

    #[test]
    fn compute_text_mentions_every_declared_value() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("quadric.mz");
        std::fs::write(&path, catalog::entry("quadric").unwrap().source).expect("write");
        let (code, out, _) = run_vec(&["compute", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("value 0:"));
        assert!(out.contains("atypical"));
        assert!(out.contains("residual 0"));
        assert!(out.contains("chi_gen_classic 0"));
    }
}

//! One function per subcommand: resolve parameters (flag over config
//! file over documented default), run the library call, and package the
//! result as a [`Document`].

use serde_json::{json, Map, Value};

use ptlattice::linalg::poly_real_roots;
use ptlattice::metric::{
    beta_linear_estimate, dieudonne_basis, linearized_metric, positivity_beta, secular_polynomial,
    theta_zero,
};
use ptlattice::observables::{cpt_charge_general, observable_basis};
use ptlattice::spectra::{find_alpha, reality_intervals, sweep, AlphaOutcome, RealityInterval};
use ptlattice::topology::{classify, critical_exponents, detect_anomalies, enumerate_patterns};
use ptlattice::{CMatrix, HamiltonianSpec};

use crate::config::{need, pick, FileConfig};
use crate::emit::{CsvSection, Document, Meta};
use crate::{CliError, Command, Format, TableKind};

/// Reality-flag threshold used by the eigenvalue sweep: |Im ε| ≤
/// REALITY_IM·(1 + |ε|).
const REALITY_IM: f64 = 1e-9;
/// Edge refinement tolerance of the reality-interval scan.
const REALITY_EDGE: f64 = 1e-8;

/// Reference exceptional points at z = 3: (n, coupling, degenerate energy).
const ALPHA_TABLE: [(usize, f64, f64); 7] = [
    (2, 1.0, 2.0),
    (4, 0.0385208965, 2.0),
    (6, 0.011344897, 2.0),
    (8, 0.003383828, 0.9285),
    (10, 0.001246890, 0.6194),
    (12, 0.000543788, 0.4438),
    (14, 0.000266880, 0.3335),
];

/// Reference pattern-change boundaries for n = 8, z descending.
const EXPONENT_TABLE: [f64; 4] = [3.982, 3.178, 1.630, 1.0358];

/// Reference pattern counts for k = 1..6 merge events.
const FIBONACCI_TABLE: [usize; 6] = [1, 2, 3, 5, 8, 13];

pub fn execute(
    cmd: &Command,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Document, CliError> {
    match *cmd {
        Command::Spectrum { n, z, a_min, a_max, steps } => {
            cmd_spectrum(file, format, n, z, a_min, a_max, steps)
        }
        Command::Alpha { n, z, tol } => cmd_alpha(file, format, n, z, tol),
        Command::Reality { n, z, a_cap } => cmd_reality(file, format, n, z, a_cap),
        Command::Classify { n, z } => cmd_classify(file, format, n, z),
        Command::Zcritical { n, z_min, z_max, tol } => {
            cmd_zcritical(file, format, n, z_min, z_max, tol)
        }
        Command::Anomalies { n, z, a_cap } => cmd_anomalies(file, format, n, z, a_cap),
        Command::MetricBasis { n, a, z, tol } => cmd_metric_basis(file, format, n, a, z, tol),
        Command::Beta { n, z, tol } => cmd_beta(file, format, n, z, tol),
        Command::Secular { n } => cmd_secular(file, format, n),
        Command::Linearized { n } => cmd_linearized(file, format, n),
        Command::Charge { n, a, z } => cmd_charge(file, format, n, a, z),
        Command::Observables { n, a, z, tol } => cmd_observables(file, format, n, a, z, tol),
        Command::Tables { table } => cmd_tables(file, format, table),
    }
}

/// Tabular commands default to CSV.
fn tabular(format: Option<Format>) -> Format {
    format.unwrap_or(Format::Csv)
}

/// Record commands emit JSON only.
fn record_only(format: Option<Format>) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(
            "this command emits a json record; csv is only available for tabular commands".into(),
        )),
        _ => Ok(()),
    }
}

fn matrix_value(m: &CMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.data().iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
    })
}

fn interval_rows(intervals: &[RealityInterval]) -> Vec<String> {
    intervals
        .iter()
        .map(|iv| format!("{},{},{}", iv.a_lo, iv.a_hi, iv.real_count))
        .collect()
}

fn interval_values(intervals: &[RealityInterval]) -> Vec<Value> {
    intervals
        .iter()
        .map(|iv| json!({"a_lo": iv.a_lo, "a_hi": iv.a_hi, "real_count": iv.real_count}))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_spectrum(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
    a_min: Option<f64>,
    a_max: Option<f64>,
    steps: Option<usize>,
) -> Result<Document, CliError> {
    let n = need(n, file.n, "n")?;
    let z = need(z, file.z, "z")?;
    let a_min = pick(a_min, file.a_min, -1.0);
    let a_max = pick(a_max, file.a_max, 1.0);
    let steps = pick(steps, file.steps, 201);
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    if !(a_min < a_max) {
        return Err(CliError::Usage(format!(
            "need --a-min < --a-max, got [{a_min}, {a_max}]"
        )));
    }
    let spec = HamiltonianSpec::new(n, 0.0, z)?;
    let result = sweep(&spec, a_min, a_max, steps)?;
    let meta = Meta {
        config: json!({"n": n, "z": z, "a_min": a_min, "a_max": a_max, "steps": steps}),
        tolerances: json!({"reality_im": REALITY_IM}),
    };
    match tabular(format) {
        Format::Csv => {
            let mut rows = Vec::with_capacity(steps * n);
            for (i, &a) in result.a_grid.iter().enumerate() {
                for (k, e) in result.branches[i].iter().enumerate() {
                    rows.push(format!("{a},{k},{},{},{}", e.value.re, e.value.im, e.is_real));
                }
            }
            let section =
                CsvSection { label: None, header: "a,index,re,im,is_real".into(), rows };
            Ok(Document::Csv { meta, sections: vec![section] })
        }
        Format::Json => {
            let mut rows = Vec::with_capacity(steps * n);
            for (i, &a) in result.a_grid.iter().enumerate() {
                for (k, e) in result.branches[i].iter().enumerate() {
                    rows.push(json!({
                        "a": a,
                        "index": k,
                        "re": e.value.re,
                        "im": e.value.im,
                        "is_real": e.is_real,
                    }));
                }
            }
            let mut payload = Map::new();
            payload.insert("rows".into(), Value::Array(rows));
            Ok(Document::Json { meta, payload })
        }
    }
}

fn cmd_alpha(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
    tol: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let z = need(z, file.z, "z")?;
    let tol = pick(tol, file.tol, 1e-10);
    let meta = Meta {
        config: json!({"n": n, "z": z}),
        tolerances: json!({"alpha": tol}),
    };
    let mut payload = Map::new();
    match find_alpha(n, z, tol)? {
        AlphaOutcome::Point(p) => {
            payload.insert("n".into(), json!(p.n));
            payload.insert("z".into(), json!(p.z));
            payload.insert("alpha".into(), json!(p.alpha));
            payload.insert("degenerate_energy".into(), json!(p.degenerate_energy));
        }
        AlphaOutcome::UnboundedReality { n, z, scanned_up_to } => {
            payload.insert("n".into(), json!(n));
            payload.insert("z".into(), json!(z));
            payload.insert("alpha".into(), Value::Null);
            payload.insert("degenerate_energy".into(), Value::Null);
            payload.insert("scanned_up_to".into(), json!(scanned_up_to));
        }
    }
    Ok(Document::Json { meta, payload })
}

fn cmd_reality(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
    a_cap: Option<f64>,
) -> Result<Document, CliError> {
    let n = need(n, file.n, "n")?;
    let z = need(z, file.z, "z")?;
    let a_cap = pick(a_cap, file.a_cap, 2.0);
    let spec = HamiltonianSpec::new(n, 0.0, z)?;
    let intervals = reality_intervals(&spec, a_cap)?;
    let meta = Meta {
        config: json!({"n": n, "z": z, "a_cap": a_cap}),
        tolerances: json!({"edge": REALITY_EDGE, "reality_im": REALITY_IM}),
    };
    match tabular(format) {
        Format::Csv => {
            let section = CsvSection {
                label: None,
                header: "a_lo,a_hi,real_count".into(),
                rows: interval_rows(&intervals),
            };
            Ok(Document::Csv { meta, sections: vec![section] })
        }
        Format::Json => {
            let mut payload = Map::new();
            payload.insert("intervals".into(), Value::Array(interval_values(&intervals)));
            Ok(Document::Json { meta, payload })
        }
    }
}

fn cmd_classify(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let z = need(z, file.z, "z")?;
    let pattern = classify(n, z)?;
    let meta = Meta { config: json!({"n": n, "z": z}), tolerances: json!({}) };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("z".into(), json!(z));
    payload.insert("pattern".into(), json!(pattern.serialize()));
    Ok(Document::Json { meta, payload })
}

fn cmd_zcritical(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z_min: Option<f64>,
    z_max: Option<f64>,
    tol: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let z_min = need(z_min, file.z_min, "z-min")?;
    let z_max = need(z_max, file.z_max, "z-max")?;
    let tol = pick(tol, file.tol, 1e-4);
    let report = critical_exponents(n, z_min, z_max, tol)?;
    let meta = Meta {
        config: json!({"n": n, "z_min": z_min, "z_max": z_max}),
        tolerances: json!({"z": tol}),
    };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("boundaries".into(), json!(report.boundaries));
    payload.insert(
        "patterns".into(),
        json!(report.patterns.iter().map(|p| p.serialize()).collect::<Vec<_>>()),
    );
    Ok(Document::Json { meta, payload })
}

fn cmd_anomalies(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
    a_cap: Option<f64>,
) -> Result<Document, CliError> {
    let n = need(n, file.n, "n")?;
    let z = need(z, file.z, "z")?;
    let a_cap = pick(a_cap, file.a_cap, 2.0);
    let spec = HamiltonianSpec::new(n, 0.0, z)?;
    let islands = detect_anomalies(&spec, a_cap)?;
    let meta = Meta {
        config: json!({"n": n, "z": z, "a_cap": a_cap}),
        tolerances: json!({"edge": REALITY_EDGE, "reality_im": REALITY_IM}),
    };
    match tabular(format) {
        Format::Csv => {
            let section = CsvSection {
                label: None,
                header: "a_lo,a_hi,real_count".into(),
                rows: interval_rows(&islands),
            };
            Ok(Document::Csv { meta, sections: vec![section] })
        }
        Format::Json => {
            let mut payload = Map::new();
            payload.insert("islands".into(), Value::Array(interval_values(&islands)));
            Ok(Document::Json { meta, payload })
        }
    }
}

fn cmd_metric_basis(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    a: Option<f64>,
    z: Option<f64>,
    tol: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let a = need(a, file.a, "a")?;
    let z = need(z, file.z, "z")?;
    let tol = pick(tol, file.tol, 1e-10);
    let family = dieudonne_basis(&HamiltonianSpec::new(n, a, z)?, tol)?;
    let meta = Meta {
        config: json!({"n": n, "a": a, "z": z}),
        tolerances: json!({"rank": tol}),
    };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("a".into(), json!(a));
    payload.insert("z".into(), json!(z));
    payload.insert("dim".into(), json!(family.dim()));
    payload.insert("residuals".into(), json!(family.residuals));
    payload.insert(
        "warning".into(),
        family.warning.as_deref().map_or(Value::Null, |w| json!(w)),
    );
    payload.insert(
        "basis".into(),
        Value::Array(family.basis.iter().map(matrix_value).collect()),
    );
    Ok(Document::Json { meta, payload })
}

fn cmd_beta(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    z: Option<f64>,
    tol: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let z = pick(z, file.z, 0.0);
    let tol = pick(tol, file.tol, 1e-10);
    let beta = positivity_beta(|b| theta_zero(&HamiltonianSpec::new(n, b, z)?), tol)?;
    let estimate = beta_linear_estimate(n)?;
    let meta = Meta {
        config: json!({"n": n, "z": z}),
        tolerances: json!({"beta": tol}),
    };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("z".into(), json!(z));
    payload.insert("beta".into(), json!(beta));
    payload.insert("linear_estimate".into(), json!(estimate));
    Ok(Document::Json { meta, payload })
}

fn cmd_secular(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let poly = secular_polynomial(n)?;
    let positive_roots: Vec<f64> = poly_real_roots(&poly.coefficients)?
        .into_iter()
        .filter(|&r| r > 0.0)
        .collect();
    let meta = Meta { config: json!({"n": n}), tolerances: json!({}) };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("variable".into(), json!(poly.variable));
    payload.insert("coefficients".into(), json!(poly.coefficients));
    payload.insert("positive_roots".into(), json!(positive_roots));
    Ok(Document::Json { meta, payload })
}

fn cmd_linearized(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let t = linearized_metric(n)?;
    let meta = Meta { config: json!({"n": n}), tolerances: json!({}) };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("matrix".into(), matrix_value(&t));
    Ok(Document::Json { meta, payload })
}

fn cmd_charge(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    a: Option<f64>,
    z: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let a = need(a, file.a, "a")?;
    let z = pick(z, file.z, 0.0);
    let c = cpt_charge_general(&HamiltonianSpec::new(n, a, z)?)?;
    let meta = Meta {
        config: json!({"n": n, "a": a, "z": z}),
        tolerances: json!({"postconditions": 1e-10}),
    };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("a".into(), json!(a));
    payload.insert("z".into(), json!(z));
    payload.insert("matrix".into(), matrix_value(&c));
    Ok(Document::Json { meta, payload })
}

fn cmd_observables(
    file: &FileConfig,
    format: Option<Format>,
    n: Option<usize>,
    a: Option<f64>,
    z: Option<f64>,
    tol: Option<f64>,
) -> Result<Document, CliError> {
    record_only(format)?;
    let n = need(n, file.n, "n")?;
    let a = need(a, file.a, "a")?;
    let z = pick(z, file.z, 0.0);
    let tol = pick(tol, file.tol, 1e-10);
    let spec = HamiltonianSpec::new(n, a, z)?;
    let theta = theta_zero(&spec)?;
    let basis = observable_basis(&theta, tol)?;
    let meta = Meta {
        config: json!({"n": n, "a": a, "z": z}),
        tolerances: json!({"rank": tol}),
    };
    let mut payload = Map::new();
    payload.insert("n".into(), json!(n));
    payload.insert("a".into(), json!(a));
    payload.insert("z".into(), json!(z));
    payload.insert("dim".into(), json!(basis.len()));
    payload.insert("basis".into(), Value::Array(basis.iter().map(matrix_value).collect()));
    Ok(Document::Json { meta, payload })
}

fn table_name(kind: TableKind) -> &'static str {
    match kind {
        TableKind::Alpha => "alpha",
        TableKind::Exponents => "exponents",
        TableKind::Fibonacci => "fibonacci",
        TableKind::All => "all",
    }
}

fn parse_table(name: &str) -> Result<TableKind, CliError> {
    match name {
        "alpha" => Ok(TableKind::Alpha),
        "exponents" => Ok(TableKind::Exponents),
        "fibonacci" => Ok(TableKind::Fibonacci),
        "all" => Ok(TableKind::All),
        other => Err(CliError::Usage(format!(
            "unknown table {other:?}; expected alpha, exponents, fibonacci, or all"
        ))),
    }
}

fn alpha_section() -> Result<CsvSection, CliError> {
    let mut rows = Vec::with_capacity(ALPHA_TABLE.len());
    for &(n, alpha_ref, energy_ref) in &ALPHA_TABLE {
        let point = match find_alpha(n, 3.0, 1e-10)? {
            AlphaOutcome::Point(p) => p,
            AlphaOutcome::UnboundedReality { scanned_up_to, .. } => {
                return Err(CliError::Numerical(ptlattice::Error::OutsideReality(format!(
                    "no exceptional point for n = {n} up to a = {scanned_up_to}"
                ))))
            }
        };
        rows.push(format!(
            "{n},3,{},{alpha_ref},{},{},{energy_ref},{}",
            point.alpha,
            (point.alpha - alpha_ref).abs(),
            point.degenerate_energy,
            (point.degenerate_energy - energy_ref).abs(),
        ));
    }
    Ok(CsvSection {
        label: Some("alpha".into()),
        header: "n,z,alpha,reference,deviation,energy,energy_reference,energy_deviation".into(),
        rows,
    })
}

fn exponents_section() -> Result<CsvSection, CliError> {
    let report = critical_exponents(8, 0.5, 5.0, 1e-4)?;
    let mut rows = Vec::with_capacity(report.boundaries.len());
    for (i, &zc) in report.boundaries.iter().enumerate() {
        let reference = EXPONENT_TABLE.get(i).copied();
        let (reference, deviation) = match reference {
            Some(r) => (format!("{r}"), format!("{}", (zc - r).abs())),
            None => (String::new(), String::new()),
        };
        // patterns holding just above and just below the boundary; quoted
        // because the serialization contains commas
        let above = report.patterns[i].serialize();
        let below = report.patterns[i + 1].serialize();
        rows.push(format!("8,{i},{zc},{reference},{deviation},\"{above}\",\"{below}\""));
    }
    Ok(CsvSection {
        label: Some("exponents".into()),
        header: "n,index,z_c,reference,deviation,pattern_above,pattern_below".into(),
        rows,
    })
}

fn fibonacci_section() -> Result<CsvSection, CliError> {
    let mut rows = Vec::with_capacity(FIBONACCI_TABLE.len());
    for (k, &reference) in (1..).zip(&FIBONACCI_TABLE) {
        let count = enumerate_patterns(k)?.len();
        rows.push(format!("{k},{count},{reference},{}", count.abs_diff(reference)));
    }
    Ok(CsvSection {
        label: Some("fibonacci".into()),
        header: "k,count,reference,deviation".into(),
        rows,
    })
}

fn cmd_tables(
    file: &FileConfig,
    format: Option<Format>,
    table: Option<TableKind>,
) -> Result<Document, CliError> {
    if tabular(format) == Format::Json {
        return Err(CliError::Usage("tables output is csv only".into()));
    }
    let kind = match table {
        Some(k) => k,
        None => match &file.table {
            Some(name) => parse_table(name)?,
            None => TableKind::All,
        },
    };
    let mut sections = Vec::new();
    if matches!(kind, TableKind::Alpha | TableKind::All) {
        sections.push(alpha_section()?);
    }
    if matches!(kind, TableKind::Exponents | TableKind::All) {
        sections.push(exponents_section()?);
    }
    if matches!(kind, TableKind::Fibonacci | TableKind::All) {
        sections.push(fibonacci_section()?);
    }
    let meta = Meta {
        config: json!({"table": table_name(kind)}),
        tolerances: json!({"alpha": 1e-10, "z": 1e-4}),
    };
    Ok(Document::Csv { meta, sections })
}

//! Output documents: CSV tables and JSON records, both carrying the same
//! metadata (tool version, effective parameters, tolerances) so any
//! artifact can be traced back to the run that produced it. Numbers are
//! written in the shortest round-trip decimal form; nothing
//! non-deterministic (timestamps, host names, thread counts) is emitted.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::CliError;

pub struct Meta {
    /// Effective scientific parameters after flag/config merging.
    pub config: Value,
    /// Tolerances the command actually used.
    pub tolerances: Value,
}

pub fn tool_version() -> String {
    format!("ptlattice {}", env!("CARGO_PKG_VERSION"))
}

/// One CSV table: header line plus data rows, optionally labeled when
/// several tables share a file.
pub struct CsvSection {
    pub label: Option<String>,
    pub header: String,
    pub rows: Vec<String>,
}

pub enum Document {
    Csv { meta: Meta, sections: Vec<CsvSection> },
    Json { meta: Meta, payload: Map<String, Value> },
}

fn render(doc: &Document) -> String {
    match doc {
        Document::Csv { meta, sections } => {
            let mut out = String::new();
            out.push_str(&format!("# tool: {}\n", tool_version()));
            out.push_str(&format!("# config: {}\n", meta.config));
            out.push_str(&format!("# tolerances: {}\n", meta.tolerances));
            for (i, s) in sections.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                if let Some(label) = &s.label {
                    out.push_str(&format!("# table: {label}\n"));
                }
                out.push_str(&s.header);
                out.push('\n');
                for row in &s.rows {
                    out.push_str(row);
                    out.push('\n');
                }
            }
            out
        }
        Document::Json { meta, payload } => {
            let mut root = Map::new();
            root.insert(
                "meta".into(),
                serde_json::json!({
                    "tool": tool_version(),
                    "config": meta.config,
                    "tolerances": meta.tolerances,
                }),
            );
            for (k, v) in payload {
                root.insert(k.clone(), v.clone());
            }
            let mut text = serde_json::to_string_pretty(&Value::Object(root))
                .expect("output contains no non-finite numbers");
            text.push('\n');
            text
        }
    }
}

pub fn write(doc: &Document, output: Option<&Path>) -> Result<(), CliError> {
    let text = render(doc);
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}

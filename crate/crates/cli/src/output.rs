use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::{Cli, Format};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// A command's artifact. `table` is the CSV form, when there is one.
pub struct Outcome {
    pub json: Value,
    pub table: Option<Table>,
    pub pass: bool,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Outcome {
    pub fn new(json: impl Serialize) -> Self {
        Outcome {
            json: serde_json::to_value(json).expect("serializable"),
            table: None,
            pass: true,
        }
    }

    pub fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": self.kind, "message": self.message })
    }
}

impl From<ahecke::Error> for Failure {
    fn from(e: ahecke::Error) -> Self {
        use ahecke::Error as E;
        let (code, kind) = match &e {
            E::InvalidDatum(_) | E::UnknownPreset(_) => (EXIT_USAGE, "datum"),
            E::Parse(_) => (EXIT_USAGE, "parse"),
            E::NotInSubgroup(_) | E::Precondition(_) => (EXIT_USAGE, "precondition"),
            E::Io(_) | E::Json(_) => (EXIT_USAGE, "io"),
            E::SearchExhausted(_) => (EXIT_INTERNAL, "search_exhausted"),
            E::Invariant(_) => (EXIT_INTERNAL, "invariant"),
            E::Cache(_) => (EXIT_INTERNAL, "cache"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn render(cli: &Cli, o: &Outcome) -> Result<Vec<u8>, Failure> {
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&o.json).expect("serializable");
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let t = o
                .table
                .as_ref()
                .ok_or_else(|| Failure::usage("this command has no CSV form"))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure {
                code: EXIT_USAGE,
                kind: "io",
                message: e.to_string(),
            };
            w.write_record(&t.header).map_err(io)?;
            for r in &t.rows {
                w.write_record(r).map_err(io)?;
            }
            w.into_inner().map_err(|e| Failure {
                code: EXIT_USAGE,
                kind: "io",
                message: e.to_string(),
            })
        }
    }
}

/// Writes the artifact and returns the exit code.
pub fn emit(cli: &Cli, o: Outcome) -> Result<u8, Failure> {
    let bytes = render(cli, &o)?;
    let io = |e: std::io::Error| Failure {
        code: EXIT_USAGE,
        kind: "io",
        message: e.to_string(),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, &bytes).map_err(io)?,
        None => std::io::stdout().write_all(&bytes).map_err(io)?,
    }
    if o.pass {
        Ok(0)
    } else {
        eprintln!("{}", serde_json::json!({ "error": "verification_failed" }));
        Ok(EXIT_VERIFICATION)
    }
}

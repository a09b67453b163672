use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

use crate::{CliResult, Format, OutputArgs};

pub const SCHEMA_VERSION: u32 = 1;
pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn open(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Emits either a CSV table or a JSON document, depending on `--format`.
pub struct Table<'a> {
    pub header: &'a [&'a str],
    pub rows: Vec<Vec<String>>,
}

pub fn emit<T: Serialize>(
    output: &OutputArgs,
    command: &str,
    json_body: &T,
    csv: impl FnOnce() -> Table<'static>,
) -> CliResult<()> {
    let mut sink = open(&output.out)?;
    match output.format {
        Format::Json => {
            let doc = Envelope {
                schema_version: SCHEMA_VERSION,
                command,
                body: json_body,
            };
            serde_json::to_writer_pretty(&mut sink, &doc)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let table = csv();
            let mut writer = csv::Writer::from_writer(&mut sink);
            writer.write_record(table.header)?;
            for row in &table.rows {
                writer.write_record(row)?;
            }
            writer.flush()?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn print_schema() -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(SCHEMA.as_bytes())?;
    Ok(())
}

//! Byte-stable emission: every float is rendered with 17 significant
//! decimal digits, enough to round-trip binary64 exactly, in both JSON
//! and CSV output.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::CliError;

/// 17-significant-digit scientific rendering, round-trip safe.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

struct Fixed17;

impl Formatter for Fixed17 {
    // serde_json lowers NaN and infinities to null; optional fields are
    // skipped instead of emitted, so any null reaching the formatter is
    // a non-finite float escaping.
    fn write_null<W>(&mut self, _writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "refusing to emit null (non-finite float?)",
        ))
    }

    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("refusing to emit non-finite value {value}"),
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes to compact JSON with fixed-width float rendering.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(format!("JSON emission failed: {e}")))?;
    String::from_utf8(out)
        .map_err(|e| CliError::Io(format!("JSON emission produced non-UTF8: {e}")))
}

/// A CSV table with `# key = value` metadata lines ahead of the header.
pub struct CsvTable {
    lines: Vec<String>,
}

impl CsvTable {
    pub fn new() -> Self {
        Self { lines: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.lines.push(format!("# {key} = {}", value.as_ref()));
        self
    }

    pub fn header(&mut self, columns: &[&str]) -> &mut Self {
        self.lines.push(columns.join(","));
        self
    }

    pub fn row(&mut self, fields: &[String]) -> &mut Self {
        self.lines.push(fields.join(","));
        self
    }

    pub fn finish(&self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }
}

/// Filename-safe rendering of a float: shortest round-trip digits with
/// `.` as `p` and `-` as `m`.
pub fn slug(x: f64) -> String {
    format!("{x}").replace('-', "m").replace('.', "p")
}

pub fn write_file(
    dir: &std::path::Path,
    name: &str,
    contents: &str,
) -> Result<std::path::PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

//! Artifact writers. Numbers carry 17 significant digits, lines end in LF.

use crate::LabError;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use terrace_core::StatePair;

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LabError + '_ {
    move |e| LabError::Io {
        path: path.display().to_string(),
        source: e,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), LabError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Opens `dir/name` for buffered writing.
pub fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), LabError> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(io_err(&path))?;
    Ok((path, BufWriter::new(f)))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, LabError> {
    let (path, mut w) = create(dir, name)?;
    let text = serde_json::to_string_pretty(value).expect("artifact serializes");
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(io_err(&path))?;
    Ok(path)
}

/// `field_t<t>.csv` name for a snapshot time, zero-padded so files sort by time.
pub fn field_file_name(t: f64) -> String {
    format!("field_t{t:010.3}.csv")
}

/// `x,u,v` rows of one snapshot.
pub fn write_field_csv(dir: &Path, s: &StatePair) -> Result<PathBuf, LabError> {
    let (path, w) = create(dir, &field_file_name(s.t))?;
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["x", "u", "v"])?;
    for i in 0..s.grid.n() {
        out.write_record([num(s.grid.x(i)), num(s.u[i]), num(s.v[i])])?;
    }
    out.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// Final path component, used to list artifacts independently of the output directory.
pub fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

use std::collections::HashSet;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{DataError, ParallelRecord};

/// Parses JSON-lines records. Blank lines are skipped; line numbers in
/// errors are 1-based.
pub fn read_jsonl<R: Read>(reader: R) -> Result<Vec<ParallelRecord>, DataError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DataError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ParallelRecord = serde_json::from_str(&line).map_err(|e| DataError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if record.source_en.is_empty() && !record.is_draft() {
            return Err(DataError::Parse {
                line: line_no,
                message: "source_en is empty".into(),
            });
        }
        if !seen.insert(record.id.clone()) {
            return Err(DataError::DuplicateId {
                id: record.id,
                line: line_no,
            });
        }
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[ParallelRecord], writer: W) -> Result<(), DataError> {
    let mut w = BufWriter::new(writer);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| DataError::Io(e.to_string()))?;
        w.write_all(b"\n").map_err(|e| DataError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| DataError::Io(e.to_string()))
}

pub fn load(path: &Path) -> Result<Vec<ParallelRecord>, DataError> {
    let file = std::fs::File::open(path).map_err(|e| DataError::Io(format!("{}: {e}", path.display())))?;
    read_jsonl(file)
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn save(records: &[ParallelRecord], path: &Path) -> Result<(), DataError> {
    let io = |e: std::io::Error| DataError::Io(format!("{}: {e}", path.display()));
    let tmp = path.with_extension("jsonl.tmp");
    write_jsonl(records, std::fs::File::create(&tmp).map_err(io)?)?;
    std::fs::rename(&tmp, path).map_err(io)
}

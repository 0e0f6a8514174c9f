use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{Questionnaire, SurveyError, SurveyResponse};

fn io_err(path: &Path, e: impl std::fmt::Display) -> SurveyError {
    SurveyError::Journal(format!("{}: {e}", path.display()))
}

/// Append-only JSON-lines file. Each entry is written with a single
/// `write_all`, so concurrent appends never interleave.
pub struct Journal<T> {
    path: PathBuf,
    file: Mutex<File>,
    _entry: PhantomData<fn() -> T>,
}

impl<T: Serialize + DeserializeOwned> Journal<T> {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, SurveyError> {
        let path = path.into();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        Ok(Self {
            path,
            file: Mutex::new(file),
            _entry: PhantomData,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, entry: &T) -> Result<(), SurveyError> {
        let mut line = serde_json::to_vec(entry).map_err(|e| io_err(&self.path, e))?;
        line.push(b'\n');
        let mut f = self.file.lock().expect("journal lock poisoned");
        f.write_all(&line).map_err(|e| io_err(&self.path, e))?;
        f.flush().map_err(|e| io_err(&self.path, e))
    }

    /// All entries in append order. A final line cut short by a crash is
    /// ignored; any other bad line is an error.
    pub fn read_all(&self) -> Result<Vec<T>, SurveyError> {
        read_journal(&self.path)
    }
}

pub(crate) fn read_journal<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, SurveyError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path, e)),
    };
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| io_err(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(v) => out.push(v),
            Err(_) if i + 1 == lines.len() => break,
            Err(e) => return Err(io_err(path, format!("line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}

struct Index {
    questionnaires: BTreeMap<String, Questionnaire>,
    responses: Vec<SurveyResponse>,
    positions: BTreeMap<String, usize>,
}

/// Questionnaires and responses journaled under one directory, with an
/// in-memory index. A later journal entry for the same response id replaces
/// the earlier one, which is how overrides are recorded.
pub struct SurveyStore {
    questionnaires: Journal<Questionnaire>,
    responses: Journal<SurveyResponse>,
    index: Mutex<Index>,
}

impl SurveyStore {
    pub const QUESTIONNAIRES: &'static str = "questionnaires.jsonl";
    pub const RESPONSES: &'static str = "responses.jsonl";

    pub fn open(dir: impl AsRef<Path>) -> Result<Self, SurveyError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let questionnaires: Journal<Questionnaire> = Journal::open(dir.join(Self::QUESTIONNAIRES))?;
        let responses: Journal<SurveyResponse> = Journal::open(dir.join(Self::RESPONSES))?;
        let mut index = Index {
            questionnaires: BTreeMap::new(),
            responses: Vec::new(),
            positions: BTreeMap::new(),
        };
        for q in questionnaires.read_all()? {
            index.questionnaires.entry(q.id.clone()).or_insert(q);
        }
        for r in responses.read_all()? {
            Self::index_response(&mut index, r);
        }
        Ok(Self {
            questionnaires,
            responses,
            index: Mutex::new(index),
        })
    }

    fn index_response(index: &mut Index, r: SurveyResponse) {
        match index.positions.get(&r.response_id) {
            Some(&i) => index.responses[i] = r,
            None => {
                index.positions.insert(r.response_id.clone(), index.responses.len());
                index.responses.push(r);
            }
        }
    }

    /// Stores `q` unless one with the same id exists; returns the stored copy.
    pub fn put_questionnaire(&self, q: Questionnaire) -> Result<Questionnaire, SurveyError> {
        let mut index = self.index.lock().expect("store lock poisoned");
        if let Some(existing) = index.questionnaires.get(&q.id) {
            return Ok(existing.clone());
        }
        self.questionnaires.append(&q)?;
        index.questionnaires.insert(q.id.clone(), q.clone());
        Ok(q)
    }

    pub fn questionnaire(&self, id: &str) -> Option<Questionnaire> {
        self.index.lock().expect("store lock poisoned").questionnaires.get(id).cloned()
    }

    pub fn questionnaires(&self) -> BTreeMap<String, Questionnaire> {
        self.index.lock().expect("store lock poisoned").questionnaires.clone()
    }

    /// Stores `r` unless its id is already present; returns the stored copy.
    pub fn put_response(&self, r: SurveyResponse) -> Result<SurveyResponse, SurveyError> {
        let mut index = self.index.lock().expect("store lock poisoned");
        if let Some(&i) = index.positions.get(&r.response_id) {
            return Ok(index.responses[i].clone());
        }
        self.responses.append(&r)?;
        Self::index_response(&mut index, r.clone());
        Ok(r)
    }

    pub fn set_override(&self, response_id: &str, accepted: Option<bool>) -> Result<SurveyResponse, SurveyError> {
        let mut index = self.index.lock().expect("store lock poisoned");
        let i = *index
            .positions
            .get(response_id)
            .ok_or_else(|| SurveyError::Journal(format!("no response {response_id}")))?;
        let mut r = index.responses[i].clone();
        r.validity.override_accepted = accepted;
        self.responses.append(&r)?;
        index.responses[i] = r.clone();
        Ok(r)
    }

    /// Responses in first-submission order.
    pub fn responses(&self) -> Vec<SurveyResponse> {
        self.index.lock().expect("store lock poisoned").responses.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::super::build::tests::{systems, test_set};
    use super::super::validate::tests::submission;
    use super::super::{build_questionnaire, validate_response, SurveyConfig};
    use super::*;

    #[test]
    fn journal_round_trip_and_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("j.jsonl");
        let j: Journal<Vec<u32>> = Journal::open(&p).unwrap();
        j.append(&vec![1]).unwrap();
        j.append(&vec![2, 3]).unwrap();
        std::fs::OpenOptions::new()
            .append(true)
            .open(&p)
            .unwrap()
            .write_all(b"[4,")
            .unwrap();
        assert_eq!(j.read_all().unwrap(), vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("j.jsonl");
        std::fs::write(&p, "[1]\nnope\n[2]\n").unwrap();
        assert!(read_journal::<Vec<u32>>(&p).is_err());
    }

    #[test]
    fn store_reopens_with_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let pool = systems(6);
        let cfg = SurveyConfig::default();
        let q = build_questionnaire(&test_set(12, &pool), &pool, 1, &cfg, 100).unwrap();
        let r = validate_response(&submission(&q, "a", 50.0, true), &q, &cfg).unwrap();
        {
            let store = SurveyStore::open(dir.path()).unwrap();
            store.put_questionnaire(q.clone()).unwrap();
            let mut later = q.clone();
            later.created_at = 999;
            assert_eq!(store.put_questionnaire(later).unwrap().created_at, 100);
            store.put_response(r.clone()).unwrap();
            store.put_response(r.clone()).unwrap();
            store.set_override(&r.response_id, Some(true)).unwrap();
        }
        let store = SurveyStore::open(dir.path()).unwrap();
        assert_eq!(store.questionnaire(&q.id), Some(q));
        let rs = store.responses();
        assert_eq!(rs.len(), 1);
        assert!(rs[0].validity.is_accepted());
        assert!(!rs[0].validity.accepted);
    }
}

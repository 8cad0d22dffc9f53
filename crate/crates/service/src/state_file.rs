//! Persisted temperament and needs: one JSON document, replaced atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use affect_core::engine::PersistedState;

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("state file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("state file {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

/// Returns `None` when the file does not exist yet.
pub fn load(path: &Path) -> Result<Option<PersistedState>, StateFileError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(source) => return Err(StateFileError::Io { path: path.into(), source }),
    };
    serde_json::from_str(&text).map(Some).map_err(|source| StateFileError::Json { path: path.into(), source })
}

/// Writes to a sibling temp file, syncs it, then renames over `path`.
pub fn save(path: &Path, state: &PersistedState) -> Result<(), StateFileError> {
    let io = |source| StateFileError::Io { path: path.into(), source };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let text = serde_json::to_string_pretty(state).expect("state serializes");
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use affect_core::{NeedsState, VaPoint};

    #[test]
    fn round_trip_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        assert!(load(&path).unwrap().is_none());
        let state = PersistedState { temperament: VaPoint::new(0.25, -0.5), needs: NeedsState::default(), day_index: 3 };
        save(&path, &state).unwrap();
        assert_eq!(load(&path).unwrap(), Some(state));
        assert!(!dir.path().join("state.json.tmp").exists());
        let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let mut keys: Vec<_> = doc.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["day_index", "needs", "temperament"]);
    }

    #[test]
    fn corrupt_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        std::fs::write(&path, "{").unwrap();
        assert!(matches!(load(&path), Err(StateFileError::Json { .. })));
    }
}

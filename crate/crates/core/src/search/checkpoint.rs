//! On-disk levels: a JSON manifest plus newline-delimited graph6 files per order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::level::SearchLevel;
use super::{LambdaKey, SearchError};
use crate::embedding::Branch;
use crate::graph::{graph6_decode, graph6_encode, Graph};

pub const MANIFEST: &str = "manifest.json";

/// Sizes of one stored level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSize {
    pub n: usize,
    pub l: usize,
    pub lprime: usize,
}

/// Contents of `manifest.json` in a bucket directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckpointManifest {
    pub schema: u32,
    pub p: usize,
    pub q: usize,
    pub key: LambdaKey,
    pub levels: Vec<LevelSize>,
    /// No further extension is needed.
    pub finished: bool,
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SearchError + '_ {
    move |source| SearchError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `contents` to `path` through a temporary file and a rename.
pub(crate) fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), SearchError> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(contents).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn level_file(dir: &Path, prefix: &str, n: usize) -> PathBuf {
    dir.join(format!("{prefix}_{n}.g6"))
}

fn graph_lines<'a>(gs: impl Iterator<Item = &'a Graph>) -> String {
    let mut s = String::new();
    for g in gs {
        s.push_str(&graph6_encode(g));
        s.push('\n');
    }
    s
}

pub fn read_manifest(dir: &Path) -> Result<CheckpointManifest, SearchError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let m: CheckpointManifest =
        serde_json::from_str(&text).map_err(|e| SearchError::CorruptCheckpoint {
            file: path.display().to_string(),
            record: 0,
            reason: e.to_string(),
        })?;
    m.key.validate()?;
    Ok(m)
}

pub(crate) fn write_manifest(dir: &Path, m: &CheckpointManifest) -> Result<(), SearchError> {
    let text = serde_json::to_string_pretty(m).expect("manifest serializes");
    write_atomic(&dir.join(MANIFEST), text.as_bytes())
}

/// Checks that a stored bucket belongs to cell `(p, q)` and, when given, to `key`.
pub fn checkpoint_validate(
    dir: &Path,
    p: usize,
    q: usize,
    key: Option<&LambdaKey>,
) -> Result<CheckpointManifest, SearchError> {
    let m = read_manifest(dir)?;
    if (m.p, m.q) != (p, q) {
        return Err(SearchError::CheckpointMismatch(format!(
            "{} holds cell ({}, {}), requested ({p}, {q})",
            dir.display(),
            m.p,
            m.q
        )));
    }
    if let Some(k) = key {
        if !m.key.same_lambda(k) || m.key.factor != k.factor {
            return Err(SearchError::CheckpointMismatch(format!(
                "{} holds λ = {} on branch {}, requested {} on branch {}",
                dir.display(),
                m.key.root,
                m.key.branch,
                k.root,
                k.branch
            )));
        }
    }
    Ok(m)
}

/// Stores `level` under `dir`, appending it to the manifest.
pub fn checkpoint_save(
    dir: &Path,
    p: usize,
    q: usize,
    level: &SearchLevel,
) -> Result<(), SearchError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut manifest = if dir.join(MANIFEST).exists() {
        checkpoint_validate(dir, p, q, Some(&level.key))?
    } else {
        CheckpointManifest {
            schema: 1,
            p,
            q,
            key: level.key.clone(),
            levels: Vec::new(),
            finished: false,
        }
    };
    write_atomic(
        &level_file(dir, "L", level.n),
        graph_lines(level.graphs.iter()).as_bytes(),
    )?;
    write_atomic(
        &level_file(dir, "Lprime", level.n),
        graph_lines(level.lprime()).as_bytes(),
    )?;
    manifest.levels.retain(|s| s.n < level.n);
    manifest.levels.push(LevelSize {
        n: level.n,
        l: level.len(),
        lprime: level.lprime_len(),
    });
    manifest.finished = false;
    write_manifest(dir, &manifest)
}

/// Marks a stored bucket as fully extended.
pub fn checkpoint_finish(dir: &Path) -> Result<(), SearchError> {
    let mut m = read_manifest(dir)?;
    m.finished = true;
    write_manifest(dir, &m)
}

fn read_graphs(path: &Path, n: usize) -> Result<Vec<Graph>, SearchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let corrupt = |record: usize, reason: String| SearchError::CorruptCheckpoint {
        file: path.display().to_string(),
        record,
        reason,
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let g = graph6_decode(line).map_err(|e| corrupt(i, e.to_string()))?;
        if g.order() != n {
            return Err(corrupt(
                i,
                format!("order {} in a level of order {n}", g.order()),
            ));
        }
        out.push(g);
    }
    Ok(out)
}

/// Only the `L'` members stored for order `n`.
pub fn checkpoint_load_lprime(dir: &Path, n: usize) -> Result<Vec<Graph>, SearchError> {
    read_graphs(&level_file(dir, "Lprime", n), n)
}

/// The stored level of order `n`.
pub fn checkpoint_load_level(dir: &Path, n: usize) -> Result<SearchLevel, SearchError> {
    let m = read_manifest(dir)?;
    if !m.levels.iter().any(|s| s.n == n) {
        return Err(SearchError::CheckpointMismatch(format!(
            "{} has no level {n}",
            dir.display()
        )));
    }
    let lpath = level_file(dir, "L", n);
    let graphs = read_graphs(&lpath, n)?;
    let primes = checkpoint_load_lprime(dir, n)?;
    let mut entries: Vec<(Graph, bool)> = graphs.into_iter().map(|g| (g, false)).collect();
    entries.sort_unstable_by_key(|e| e.0);
    for (i, g) in primes.iter().enumerate() {
        match entries.binary_search_by(|e| e.0.cmp(g)) {
            Ok(pos) => entries[pos].1 = true,
            Err(_) => {
                return Err(SearchError::CorruptCheckpoint {
                    file: level_file(dir, "Lprime", n).display().to_string(),
                    record: i,
                    reason: "graph is missing from L".into(),
                })
            }
        }
    }
    let level = SearchLevel::new(n, m.key, entries);
    Ok(level)
}

/// The highest stored level.
pub fn checkpoint_load(dir: &Path) -> Result<SearchLevel, SearchError> {
    let m = read_manifest(dir)?;
    let n = m.levels.iter().map(|s| s.n).max().ok_or_else(|| {
        SearchError::CheckpointMismatch(format!("{} stores no levels", dir.display()))
    })?;
    checkpoint_load_level(dir, n)
}

/// Directory name of the `index`-th bucket of a branch.
pub fn bucket_dir_name(branch: Branch, index: usize) -> String {
    let tag = match branch {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    };
    format!("{tag}_{index:04}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::build_base_levels;

    #[test]
    fn round_trip_and_rejections() {
        let tmp = tempfile::tempdir().unwrap();
        let base = build_base_levels(3, 0, &[Branch::Plus, Branch::Minus]).unwrap();
        let level = base.levels.iter().max_by_key(|l| l.len()).unwrap();
        let dir = tmp.path().join("b");
        checkpoint_save(&dir, 3, 0, level).unwrap();
        let back = checkpoint_load(&dir).unwrap();
        assert_eq!(&back, level);

        let mut other = level.clone();
        let one = crate::arith::IntPoly::from_i64s(&[-1, 1]);
        other.key = LambdaKey::new(
            Branch::Plus,
            one,
            crate::arith::AlgebraicNumber::from_int(1),
        )
        .unwrap();
        assert!(matches!(
            checkpoint_save(&dir, 3, 0, &other),
            Err(SearchError::CheckpointMismatch(_))
        ));
        assert!(matches!(
            checkpoint_validate(&dir, 2, 1, None),
            Err(SearchError::CheckpointMismatch(_))
        ));

        let path = dir.join(format!("L_{}.g6", level.n));
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("not graph6\n");
        fs::write(&path, text).unwrap();
        match checkpoint_load(&dir) {
            Err(SearchError::CorruptCheckpoint { record, .. }) => assert_eq!(record, level.len()),
            other => panic!("expected corruption error, got {other:?}"),
        }
    }
}

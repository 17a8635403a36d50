//! The corpus index and validated ingestion of group, table and decomposition files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::{Golden, TableFragment};
use super::PipelineError;
use crate::groups::{brauer_values, CharacterTable, ClassData, DecompositionMatrix, GroupData, GroupFile, TableFile};

/// One corpus group with its input files, relative to the corpus root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub key: String,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fragment: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct IndexFile {
    entries: Vec<CorpusEntry>,
}

#[derive(Clone, Debug)]
pub struct CorpusIndex {
    pub root: PathBuf,
    pub entries: Vec<CorpusEntry>,
}

/// Everything the pipeline needs about one group.
#[derive(Clone, Debug)]
pub struct GroupInput {
    pub group: GroupData,
    pub table: Option<CharacterTable>,
    pub decompositions: Vec<DecompositionMatrix>,
}

impl GroupInput {
    pub fn from_group(group: GroupData) -> Self {
        GroupInput { group, table: None, decompositions: Vec::new() }
    }

    /// SHA-256 over the canonical JSON of every input.
    pub fn input_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&GroupFile::from_group(&self.group)).expect("serializable"));
        if let Some(t) = &self.table {
            h.update(b"\0table\0");
            h.update(serde_json::to_vec(&t.to_file()).expect("serializable"));
        }
        for d in &self.decompositions {
            h.update(b"\0decomposition\0");
            h.update(serde_json::to_vec(d).expect("serializable"));
        }
        hex::encode(h.finalize())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::input(path.display(), e))?;
    serde_json::from_str(&text).map_err(|e| {
        PipelineError::input(path.display(), format!("line {} column {}: {e}", e.line(), e.column()))
    })
}

/// Reads and builds a group file.
pub fn load_group(path: &Path) -> Result<GroupData, PipelineError> {
    let f: GroupFile = read_json(path)?;
    f.build().map_err(|e| PipelineError::input(path.display(), e))
}

/// Reads a character table, validates it and checks it against the group's classes.
pub fn load_table(path: &Path, cd: Option<&ClassData>) -> Result<CharacterTable, PipelineError> {
    let f: TableFile = read_json(path)?;
    let t = CharacterTable::from_file(f).map_err(|e| PipelineError::input(path.display(), e))?;
    if let Some(cd) = cd {
        if t.classes != cd.classes {
            return Err(PipelineError::input(path.display(), "classes differ from the group's conjugacy classes"));
        }
    }
    Ok(t)
}

/// Reads a decomposition matrix and checks it against the table.
pub fn load_decomposition(path: &Path, t: &CharacterTable) -> Result<DecompositionMatrix, PipelineError> {
    let d: DecompositionMatrix = read_json(path)?;
    check_decomposition(&d, t).map_err(|e| PipelineError::input(path.display(), e))?;
    Ok(d)
}

pub fn check_decomposition(d: &DecompositionMatrix, t: &CharacterTable) -> Result<(), String> {
    if d.matrix.len() != t.num_characters() || d.ordinary.len() != t.num_characters() {
        return Err(format!("{} rows for a table with {} characters", d.matrix.len(), t.num_characters()));
    }
    brauer_values(t, d).map(|_| ()).map_err(|e| e.to_string())
}

/// Validates a group file and returns a corpus entry for it, keyed by the file stem.
pub fn ingest(path: &Path) -> Result<CorpusEntry, PipelineError> {
    let g = load_group(path)?;
    let key = path.file_stem().and_then(|s| s.to_str()).unwrap_or("group").to_string();
    Ok(CorpusEntry {
        name: g.name().to_string(),
        key,
        group: path.display().to_string(),
        table: None,
        decompositions: Vec::new(),
        expected: None,
        fragment: None,
    })
}

impl CorpusIndex {
    /// Loads `index.json` from the corpus root.
    pub fn load(root: &Path) -> Result<Self, PipelineError> {
        let f: IndexFile = read_json(&root.join("index.json"))?;
        let mut seen = std::collections::HashSet::new();
        for e in &f.entries {
            if !seen.insert(e.name.clone()) || !seen.insert(format!("key:{}", e.key)) {
                return Err(PipelineError::input(root.join("index.json").display(), format!("duplicate entry {}", e.name)));
            }
        }
        Ok(CorpusIndex { root: root.to_path_buf(), entries: f.entries })
    }

    /// Default corpus location: `ZCV_CORPUS`, else `./corpus`, else the workspace copy.
    pub fn default_root() -> PathBuf {
        if let Ok(p) = std::env::var("ZCV_CORPUS") {
            return PathBuf::from(p);
        }
        let local = PathBuf::from("corpus");
        if local.join("index.json").exists() {
            return local;
        }
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
    }

    /// Finds an entry by name, key, or `order,id` shorthand.
    pub fn find(&self, query: &str) -> Option<&CorpusEntry> {
        let short = query.replace(',', "_").replace(' ', "");
        self.entries.iter().find(|e| e.name == query || e.key == query || e.key == short)
    }

    fn path(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.root.join(p)
        }
    }

    pub fn load_input(&self, e: &CorpusEntry) -> Result<GroupInput, PipelineError> {
        let group = load_group(&self.path(&e.group))?;
        let mut table = None;
        if let Some(tp) = &e.table {
            let cd = ClassData::compute(&group);
            table = Some(load_table(&self.path(tp), Some(&cd))?);
        }
        let mut decompositions = Vec::new();
        if !e.decompositions.is_empty() {
            let t = match &table {
                Some(t) => t.clone(),
                None => crate::groups::dixon_character_table(&group, &ClassData::compute(&group))?,
            };
            for d in &e.decompositions {
                decompositions.push(load_decomposition(&self.path(d), &t)?);
            }
        }
        Ok(GroupInput { group, table, decompositions })
    }

    pub fn load_golden(&self, e: &CorpusEntry) -> Result<Option<Golden>, PipelineError> {
        e.expected.as_ref().map(|p| read_json(&self.path(p))).transpose()
    }

    pub fn load_fragment(&self, e: &CorpusEntry) -> Result<Option<TableFragment>, PipelineError> {
        e.fragment.as_ref().map(|p| read_json(&self.path(p))).transpose()
    }
}

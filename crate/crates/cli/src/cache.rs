//! On-disk table cache. One directory per group spec, named after the
//! canonical spec and a hash of spec, code version and schema. Writes go
//! to a temporary file that is then renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use charlab::classes::conjugacy_classes;
use charlab::dixon::{compute_table, CharacterTable, TableRecord, TABLE_SCHEMA_VERSION};
use charlab::matgrp::{build_group, quotient_by_center};
use charlab::theorems::GroupContext;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::spec::GroupSpecAst;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    schema: u32,
    version: String,
    spec: String,
    spec_hash: String,
    table: TableRecord,
}

pub struct Cache {
    root: PathBuf,
}

pub fn spec_hash(spec: &GroupSpecAst) -> String {
    let mut h = Sha256::new();
    h.update(format!("{spec}|{CODE_VERSION}|{TABLE_SCHEMA_VERSION}"));
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Cache {
        Cache { root: root.into() }
    }

    pub fn dir_for(&self, spec: &GroupSpecAst) -> PathBuf {
        let name: String = spec
            .to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        self.root.join(format!("{name}-{}", spec_hash(spec)))
    }

    pub fn table_path(&self, spec: &GroupSpecAst) -> PathBuf {
        self.dir_for(spec).join("table.json")
    }

    /// The cached record, if present and written for this spec, code
    /// version and schema. Anything unreadable counts as a miss.
    pub fn load(&self, spec: &GroupSpecAst) -> Option<TableRecord> {
        let text = fs::read_to_string(self.table_path(spec)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        let valid = entry.schema == TABLE_SCHEMA_VERSION
            && entry.version == CODE_VERSION
            && entry.spec == spec.to_string()
            && entry.spec_hash == spec_hash(spec);
        valid.then_some(entry.table)
    }

    pub fn store(&self, spec: &GroupSpecAst, table: &CharacterTable) -> Result<PathBuf> {
        let dir = self.dir_for(spec);
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let entry = CacheEntry {
            schema: TABLE_SCHEMA_VERSION,
            version: CODE_VERSION.to_string(),
            spec: spec.to_string(),
            spec_hash: spec_hash(spec),
            table: table.record(),
        };
        let path = self.table_path(spec);
        write_atomic(&path, serde_json::to_string(&entry)?.as_bytes())?;
        Ok(path)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Builds the group of `spec` and its table, going through the cache when
/// one is given. A cached table must match the class layout and pass
/// the orthogonality checks, otherwise it is recomputed.
pub fn load_context(spec: &GroupSpecAst, cap: u64, cache: Option<&Cache>) -> Result<(GroupContext, CacheStatus)> {
    let g = Arc::new(build_group(spec.family, spec.n, spec.q, cap)?);
    let g = if spec.quotient {
        Arc::new(quotient_by_center(&g))
    } else {
        g
    };
    let classes = conjugacy_classes(&g);
    let Some(cache) = cache else {
        let table = compute_table(&classes)?;
        return Ok((GroupContext::from_parts(g, classes, table), CacheStatus::Disabled));
    };
    if let Some(rec) = cache.load(spec) {
        if let Ok(table) = CharacterTable::from_record(rec, classes.space()) {
            if table.verify().is_ok() {
                return Ok((GroupContext::from_parts(g, classes, table), CacheStatus::Hit));
            }
        }
    }
    let table = compute_table(&classes)?;
    cache.store(spec, &table)?;
    Ok((GroupContext::from_parts(g, classes, table), CacheStatus::Miss))
}

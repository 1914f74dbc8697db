//! Censuses of small groups, skew braces and involutive solutions, stored as
//! JSON-lines catalogs.

mod braces;
mod groups;
mod solutions;

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use braces::{
    enumerate_skew_braces, enumerate_skew_braces_direct, merge_braces, regular_subgroup_braces, BraceEnumOptions,
    Reduction,
};
pub use groups::{automorphisms, groups_of_order, AutomorphismGroup, GroupJson, EXPECTED_GROUP_COUNTS};
pub use solutions::{canonical_solution_key, enumerate_involutive_solutions, SolutionItem};

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("order {order} exceeds the supported bound {limit}")]
    BudgetExceeded { order: usize, limit: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed catalog line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogKind {
    Braces,
    Solutions,
    Groups,
}

/// Header line of a catalog file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogMeta {
    pub kind: CatalogKind,
    pub order: usize,
    pub count: usize,
    pub wall_time_s: f64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog<T> {
    pub meta: CatalogMeta,
    pub items: Vec<T>,
}

impl<T: Serialize + DeserializeOwned> Catalog<T> {
    pub fn new(kind: CatalogKind, order: usize, method: &str, wall_time_s: f64, items: Vec<T>) -> Self {
        Catalog {
            meta: CatalogMeta {
                kind,
                order,
                count: items.len(),
                wall_time_s,
                method: method.to_string(),
            },
            items,
        }
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut w, &self.meta)?;
        writeln!(w)?;
        for item in &self.items {
            serde_json::to_writer(&mut w, item)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_jsonl(&mut w)?;
        w.flush()
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Self, EnumError> {
        let mut lines = r
            .lines()
            .enumerate()
            .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
        let (_, head) = lines.next().ok_or(EnumError::Format {
            line: 1,
            msg: "missing header".into(),
        })?;
        let meta: CatalogMeta = serde_json::from_str(&head?).map_err(|e| EnumError::Format {
            line: 1,
            msg: e.to_string(),
        })?;
        let mut items = Vec::new();
        for (i, line) in lines {
            let item = serde_json::from_str(&line?).map_err(|e| EnumError::Format {
                line: i + 1,
                msg: e.to_string(),
            })?;
            items.push(item);
        }
        if items.len() != meta.count {
            return Err(EnumError::Format {
                line: 1,
                msg: format!("header count {} but {} items", meta.count, items.len()),
            });
        }
        Ok(Catalog { meta, items })
    }

    pub fn load(path: &Path) -> Result<Self, EnumError> {
        let f = std::fs::File::open(path)?;
        Catalog::read_jsonl(std::io::BufReader::new(f))
    }
}

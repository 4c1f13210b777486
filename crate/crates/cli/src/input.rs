//! JSON ingestion: systems and named potentials.
//!
//! Schema:
//! ```json
//! {
//!   "alphabet_size": 2,
//!   "adjacency": [[1, 1], [1, 0]],
//!   "potentials": [
//!     {"name": "phi_t", "depth": 1, "table": {"1": 1.0, "2": 0.0}}
//!   ]
//! }
//! ```
//! Word strings are 1-indexed symbols concatenated: `"12"` is symbol 1
//! followed by symbol 2.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use thermopress_core::sft::{make_potential, make_sft, Potential, SftSystem, Word};

use crate::CliError;

#[derive(Deserialize)]
struct SystemFile {
    alphabet_size: usize,
    adjacency: Vec<Vec<u8>>,
    #[serde(default)]
    potentials: Vec<PotentialEntry>,
}

#[derive(Deserialize)]
struct PotentialEntry {
    name: String,
    depth: usize,
    table: BTreeMap<String, f64>,
}

pub struct LoadedSystem {
    pub system: SftSystem,
    pub potentials: BTreeMap<String, Potential>,
}

impl LoadedSystem {
    pub fn potential(&self, name: &str) -> Result<&Potential, CliError> {
        self.potentials
            .get(name)
            .ok_or_else(|| CliError::Input(format!("no potential named {name:?} in the input")))
    }
}

pub fn load(path: &Path) -> Result<LoadedSystem, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: SystemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))?;
    let system = make_sft(file.alphabet_size, &file.adjacency)
        .map_err(|e| CliError::Input(format!("invalid system: {e}")))?;
    let mut potentials = BTreeMap::new();
    for entry in file.potentials {
        if entry.depth == 0 {
            return Err(CliError::Input(format!(
                "potential {:?} has depth 0",
                entry.name
            )));
        }
        let mut table = BTreeMap::new();
        for (key, value) in &entry.table {
            let word = Word::parse_digits(key)
                .map_err(|e| CliError::Input(format!("potential {:?}: {e}", entry.name)))?;
            table.insert(word.symbols().to_vec(), *value);
        }
        let potential = make_potential(&system, entry.depth, table)
            .map_err(|e| CliError::Input(format!("potential {:?}: {e}", entry.name)))?;
        potentials.insert(entry.name, potential);
    }
    Ok(LoadedSystem { system, potentials })
}

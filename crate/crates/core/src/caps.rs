//! Resource limits shared by the expensive operations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-operation resource limits. Exceeding one is reported as
/// [`Error::ResourceCap`], never silently truncated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest `m` for the expanded `per_m` / `det_m` (`m!` terms).
    pub symbolic_order: u32,
    /// Search nodes allowed in a symbolic determinant expansion.
    pub det_nodes: u64,
    /// Largest degree `d` for exhaustive tomography counts.
    pub tomography_degree: u32,
    /// Largest Latin square order enumerated.
    pub latin_order: u32,
    /// Candidates allowed in one obstruction search.
    pub obstruction_candidates: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            symbolic_order: 8,
            det_nodes: 50_000_000,
            tomography_degree: 10,
            latin_order: 5,
            obstruction_candidates: crate::kronecker::DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl Caps {
    /// Applies overrides written as `key=value` pairs separated by commas,
    /// e.g. `latin=6,tomography=12`. Keys: `symbolic`, `det-nodes`,
    /// `tomography`, `latin`, `obstruct`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("cap override {item:?} lacks '='")))?;
            let bad = || Error::InvalidInput(format!("cap override {item:?} has a bad value"));
            match key.trim() {
                "symbolic" => self.symbolic_order = value.trim().parse().map_err(|_| bad())?,
                "det-nodes" => self.det_nodes = value.trim().parse().map_err(|_| bad())?,
                "tomography" => self.tomography_degree = value.trim().parse().map_err(|_| bad())?,
                "latin" => self.latin_order = value.trim().parse().map_err(|_| bad())?,
                "obstruct" => self.obstruction_candidates = value.trim().parse().map_err(|_| bad())?,
                other => {
                    return Err(Error::InvalidInput(format!("unknown cap {other:?}")));
                }
            }
        }
        Ok(self)
    }
}

pub(crate) fn check(what: &'static str, requested: u128, limit: u128) -> Result<()> {
    if requested > limit {
        Err(Error::ResourceCap {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}

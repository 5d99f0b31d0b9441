use std::path::Path;

use super::{parse_greechie, parse_rays, GreechieDiagram, RaySet};
use crate::error::{Error, Result};
use crate::lattice::{LatticeTable, RawOrtholattice};

/// A parsed input file, by extension: `.json` lattice table, `.gdl`
/// diagram, `.rays` ray set.
#[derive(Debug, Clone)]
pub enum Input {
    Lattice(RawOrtholattice),
    Diagram(GreechieDiagram),
    Rays(RaySet),
}

impl Input {
    pub fn parse(text: &str, extension: &str) -> Result<Self> {
        match extension {
            "json" => Ok(Self::Lattice(LatticeTable::from_json(text)?.to_raw()?)),
            "gdl" => Ok(Self::Diagram(parse_greechie(text)?)),
            "rays" => Ok(Self::Rays(parse_rays(text)?)),
            other => Err(Error::Input(format!("unknown input extension `.{other}` (expected .json, .gdl or .rays)"))),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let extension = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, extension)
    }
}

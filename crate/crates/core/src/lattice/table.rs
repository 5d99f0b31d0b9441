use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{FiniteOrtholattice, RawOrtholattice};
use crate::error::{Error, Result};

/// JSON lattice table: element names (including `"0"` and `"1"`), order
/// pairs, and the orthocomplement map.
///
/// `leq` may omit reflexive pairs and need not be transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeTable {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
    pub neg: BTreeMap<String, String>,
}

impl LatticeTable {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("lattice table: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice table serializes")
    }

    /// Resolves names to indices, rejecting malformed tables before any
    /// axiom is checked.
    pub fn to_raw(&self) -> Result<RawOrtholattice> {
        let mut index = HashMap::new();
        for (i, name) in self.elements.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Input("empty element name".into()));
            }
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::Input(format!("duplicate element name `{name}`")));
            }
        }
        let lookup = |name: &str, what: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Input(format!("unknown element `{name}` in {what}")))
        };
        let bottom = index.get("0").copied().ok_or_else(|| Error::Input("missing bottom element `0`".into()))?;
        let top = index.get("1").copied().ok_or_else(|| Error::Input("missing top element `1`".into()))?;

        let leq = self
            .leq
            .iter()
            .map(|[a, b]| Ok((lookup(a, "leq")?, lookup(b, "leq")?)))
            .collect::<Result<Vec<_>>>()?;

        for key in self.neg.keys() {
            lookup(key, "neg")?;
        }
        let ortho = self
            .elements
            .iter()
            .map(|name| {
                let target = self
                    .neg
                    .get(name)
                    .ok_or_else(|| Error::Input(format!("neg has no entry for `{name}`")))?;
                lookup(target, "neg")
            })
            .collect::<Result<Vec<_>>>()?;

        RawOrtholattice::new(self.elements.clone(), leq, ortho, bottom, top)
    }

    /// Table for a validated lattice, listing only covering pairs in `leq`.
    pub fn from_lattice(l: &FiniteOrtholattice) -> Result<Self> {
        if l.name(l.bottom()) != "0" || l.name(l.top()) != "1" {
            return Err(Error::Input("lattice table requires bottom named `0` and top named `1`".into()));
        }
        Ok(Self {
            elements: l.names().to_vec(),
            leq: l
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| [l.name(a).to_string(), l.name(b).to_string()])
                .collect(),
            neg: l
                .elements()
                .map(|x| (l.name(x).to_string(), l.name(l.ortho(x)).to_string()))
                .collect(),
        })
    }
}

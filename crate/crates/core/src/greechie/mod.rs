//! Greechie diagrams, context hypergraphs and ray sets: parsing, pasting
//! into lattices, and export.

mod export;
mod hypergraph;
mod input;
mod rays;

use std::collections::HashMap;

pub use export::{
    diagram_to_dot, diagram_to_gdl, diagram_to_json, hypergraph_to_dot, hypergraph_to_json, lattice_to_dot,
    lattice_to_json,
};
pub use hypergraph::ContextHypergraph;
pub use input::Input;
pub use rays::{contexts_from_rays, parse_rays, IncompleteContext, RaySet};

use crate::error::{Error, Result};
use crate::lattice::{validate_structure, FiniteOrtholattice, RawOrtholattice, ValidationOptions};

/// Largest block accepted for pasting; a block of `k` atoms contributes
/// `2^k - 2` subset pairs.
pub const MAX_BLOCK_ATOMS: usize = 16;

/// Atoms plus blocks (sets of mutually orthogonal atoms).
///
/// Atoms are numbered in order of first appearance; each block keeps its
/// atoms in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreechieDiagram {
    atoms: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

impl GreechieDiagram {
    /// Builds a diagram from named blocks, enforcing: blocks have ≥ 2
    /// distinct atoms, no block repeats or contains another, and two blocks
    /// share at most one atom.
    pub fn new<I, B, S>(blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut d = Self { atoms: Vec::new(), blocks: Vec::new() };
        let mut index = HashMap::new();
        for block in blocks {
            let names: Vec<String> = block.into_iter().map(Into::into).collect();
            d.push_block(&mut index, names)?;
        }
        Ok(d)
    }

    fn push_block(&mut self, index: &mut HashMap<String, usize>, names: Vec<String>) -> Result<()> {
        if names.len() < 2 {
            return Err(Error::Input(format!("block has {} atom(s); at least 2 are required", names.len())));
        }
        if names.len() > MAX_BLOCK_ATOMS {
            return Err(Error::Input(format!("block has {} atoms; at most {MAX_BLOCK_ATOMS} are supported", names.len())));
        }
        let mut block = Vec::with_capacity(names.len());
        for name in names {
            if !is_atom_name(&name) {
                return Err(Error::Input(format!("invalid atom name `{name}`")));
            }
            if name == "0" || name == "1" {
                return Err(Error::Input(format!("atom name `{name}` is reserved for a bound")));
            }
            let next = self.atoms.len();
            let id = *index.entry(name.clone()).or_insert(next);
            if id == next {
                self.atoms.push(name.clone());
            }
            if block.contains(&id) {
                return Err(Error::Input(format!("atom `{name}` repeated within a block")));
            }
            block.push(id);
        }
        for (k, other) in self.blocks.iter().enumerate() {
            let shared = block.iter().filter(|a| other.contains(a)).count();
            if shared == block.len() && shared == other.len() {
                return Err(Error::Input(format!("duplicate of block {}", k + 1)));
            }
            if shared == block.len() || shared == other.len() {
                return Err(Error::Input(format!("block is nested with block {}", k + 1)));
            }
            if shared > 1 {
                return Err(Error::Input(format!("block shares {shared} atoms with block {}", k + 1)));
            }
        }
        self.blocks.push(block);
        Ok(())
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_names(&self, k: usize) -> Vec<&str> {
        self.blocks[k].iter().map(|&a| self.atoms[a].as_str()).collect()
    }

    pub fn to_hypergraph(&self) -> ContextHypergraph {
        ContextHypergraph::new(self.atoms.clone(), self.blocks.clone()).expect("diagram invariants imply hypergraph invariants")
    }

    /// Reads a hypergraph as a diagram; fails when its contexts violate the
    /// diagram invariants (e.g. two contexts sharing two outcomes).
    pub fn from_hypergraph(h: &ContextHypergraph) -> Result<Self> {
        Self::new(h.contexts().iter().map(|c| c.iter().map(|&o| h.outcomes()[o].clone())))
    }
}

fn is_atom_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Parses the line-oriented diagram format: blank lines, `#` comments, and
/// `block: a b c ...` lines. Errors carry 1-based line numbers.
pub fn parse_greechie(text: &str) -> Result<GreechieDiagram> {
    let mut d = GreechieDiagram { atoms: Vec::new(), blocks: Vec::new() };
    let mut index = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rest = trimmed
            .strip_prefix("block:")
            .ok_or_else(|| Error::Parse { line, message: format!("expected `block:`, found `{trimmed}`") })?;
        let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
        d.push_block(&mut index, names).map_err(|e| Error::Parse {
            line,
            message: match e {
                Error::Input(m) => m,
                other => other.to_string(),
            },
        })?;
    }
    Ok(d)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Pastes the diagram's Boolean blocks into one orthostructure and
/// validates it.
///
/// Elements are `0`, `1`, and classes of (block, proper non-empty atom
/// subset) pairs, where two pairs are identified when their subsets or
/// their complements coincide. A class containing a single atom takes the
/// atom's name; other classes are named `x+y+...` after their atoms, or
/// `~z+...` after their complement when that is strictly shorter.
///
/// Returns [`Error::NotOml`] with the validation report when the pasting is
/// not an orthomodular lattice.
pub fn paste_to_lattice(d: &GreechieDiagram) -> Result<FiniteOrtholattice> {
    validate_structure(&paste_raw(d)?, &ValidationOptions::default()).into_lattice()
}

/// The unvalidated pasting: element names, generating order pairs and
/// orthocomplement, as described for [`paste_to_lattice`].
pub fn paste_raw(d: &GreechieDiagram) -> Result<RawOrtholattice> {
    // pair = (block, mask over the block's atom positions)
    let mut pairs: Vec<(usize, u32)> = Vec::new();
    let mut pair_id: HashMap<(usize, u32), usize> = HashMap::new();
    for (b, atoms) in d.blocks.iter().enumerate() {
        let full = (1u32 << atoms.len()) - 1;
        for mask in 1..full {
            pair_id.insert((b, mask), pairs.len());
            pairs.push((b, mask));
        }
    }
    let atom_set = |b: usize, mask: u32| -> Vec<usize> {
        let mut s: Vec<usize> =
            d.blocks[b].iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        s.sort_unstable();
        s
    };
    let complement = |b: usize, mask: u32| mask ^ ((1u32 << d.blocks[b].len()) - 1);

    let mut uf = UnionFind((0..pairs.len()).collect());
    let mut by_set: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut by_complement: HashMap<Vec<usize>, usize> = HashMap::new();
    for (p, &(b, mask)) in pairs.iter().enumerate() {
        if let Some(&q) = by_set.get(&atom_set(b, mask)) {
            uf.union(p, q);
        } else {
            by_set.insert(atom_set(b, mask), p);
        }
        let comp = atom_set(b, complement(b, mask));
        if let Some(&q) = by_complement.get(&comp) {
            uf.union(p, q);
        } else {
            by_complement.insert(comp, p);
        }
    }

    // name each class, preferring the shortest description
    let mut best: HashMap<usize, (usize, bool, String)> = HashMap::new();
    for (p, &(b, mask)) in pairs.iter().enumerate() {
        let root = uf.find(p);
        let pos = atom_set(b, mask);
        let neg = atom_set(b, complement(b, mask));
        let join = |s: &[usize]| s.iter().map(|&a| d.atoms[a].as_str()).collect::<Vec<_>>().join("+");
        let candidates = [(pos.len(), false, join(&pos)), (neg.len(), true, format!("~{}", join(&neg)))];
        for c in candidates {
            let slot = best.entry(root).or_insert_with(|| c.clone());
            if c < *slot {
                *slot = c;
            }
        }
    }

    // order: 0, atoms in diagram order, other positive names by size, then
    // complement names by decreasing complement size, 1
    let atom_pos: HashMap<&str, usize> = d.atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let mut classes: Vec<(usize, (usize, bool, String))> = best.into_iter().collect();
    classes.sort_by(|(_, x), (_, y)| {
        let key = |(size, neg, name): &(usize, bool, String)| {
            let bucket = match (*neg, *size) {
                (false, 1) => (0, atom_pos[name.as_str()], 0),
                (false, s) => (1, s, 0),
                (true, s) => (2, usize::MAX - s, 0),
            };
            (bucket, name.clone())
        };
        key(x).cmp(&key(y))
    });

    let n = classes.len() + 2;
    let mut names = Vec::with_capacity(n);
    names.push("0".to_string());
    let mut element_of_root = HashMap::new();
    for (k, (root, (_, _, name))) in classes.iter().enumerate() {
        element_of_root.insert(*root, k + 1);
        names.push(name.clone());
    }
    names.push("1".to_string());
    let (bottom, top) = (0, n - 1);

    let mut element_of_pair = vec![0; pairs.len()];
    for p in 0..pairs.len() {
        element_of_pair[p] = element_of_root[&uf.find(p)];
    }
    let mut ortho = vec![0; n];
    ortho[bottom] = top;
    ortho[top] = bottom;
    let mut leq = Vec::new();
    for (p, &(b, mask)) in pairs.iter().enumerate() {
        let x = element_of_pair[p];
        ortho[x] = element_of_pair[pair_id[&(b, complement(b, mask))]];
        leq.push((bottom, x));
        leq.push((x, top));
        for i in 0..d.blocks[b].len() {
            let bigger = mask | 1 << i;
            if bigger != mask {
                if let Some(&q) = pair_id.get(&(b, bigger)) {
                    leq.push((x, element_of_pair[q]));
                }
            }
        }
    }
    leq.sort_unstable();
    leq.dedup();
    if d.blocks.is_empty() {
        leq.push((bottom, top));
    }

    RawOrtholattice::new(names, leq, ortho, bottom, top)
}

use std::fmt;

use serde::Serialize;

use super::FiniteOrtholattice;
use crate::error::{Error, Result};

/// Default number of witnesses kept per failed axiom.
pub const DEFAULT_WITNESS_CAP: usize = 32;

/// An unvalidated orthostructure: names, generating order pairs, and an
/// orthocomplement map.
///
/// `leq` need not be reflexive or transitively closed; validation takes the
/// reflexive-transitive closure before checking anything else.
#[derive(Debug, Clone)]
pub struct RawOrtholattice {
    names: Vec<String>,
    leq: Vec<(usize, usize)>,
    ortho: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl RawOrtholattice {
    pub fn new(
        names: Vec<String>,
        leq: Vec<(usize, usize)>,
        ortho: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Input("no elements".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::Input("empty element name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Input(format!("duplicate element name `{name}`")));
            }
        }
        if bottom >= n || top >= n {
            return Err(Error::Input("bottom/top index out of range".into()));
        }
        if ortho.len() != n {
            return Err(Error::Input(format!(
                "orthocomplement map has {} entries for {n} elements",
                ortho.len()
            )));
        }
        if let Some(&bad) = ortho.iter().find(|&&o| o >= n) {
            return Err(Error::Input(format!("orthocomplement index {bad} out of range")));
        }
        if let Some(&(a, b)) = leq.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Input(format!("order pair ({a}, {b}) out of range")));
        }
        Ok(Self { names, leq, ortho, bottom, top })
    }

    /// Builds a raw structure from an order predicate evaluated on every pair.
    pub fn from_order(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        ortho: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = names.len();
        let pairs = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && leq(a, b))
            .collect();
        Self::new(names, pairs, ortho, bottom, top)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The individual axioms checked by [`validate_structure`], grouped in three
/// layers: lattice, ortholattice, orthomodular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Antisymmetry,
    Bounds,
    Meet,
    Join,
    Involution,
    Antitone,
    Noncontradiction,
    ExcludedMiddle,
    Orthomodular,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Bounds => "bounds",
            Axiom::Meet => "meet",
            Axiom::Join => "join",
            Axiom::Involution => "involution",
            Axiom::Antitone => "antitone",
            Axiom::Noncontradiction => "noncontradiction",
            Axiom::ExcludedMiddle => "excluded-middle",
            Axiom::Orthomodular => "orthomodular",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    /// Number of failing instances found (may exceed `witnesses.len()`).
    pub count: usize,
    /// Witness tuples by element name, capped.
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub witness_cap: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { witness_cap: DEFAULT_WITNESS_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub elements: usize,
    pub failures: Vec<AxiomFailure>,
    #[serde(skip)]
    pub lattice: Option<FiniteOrtholattice>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }

    pub fn into_lattice(self) -> Result<FiniteOrtholattice> {
        match self.lattice {
            Some(l) if self.failures.is_empty() => Ok(l),
            _ => Err(Error::NotOml(Box::new(self))),
        }
    }
}

struct Collector<'a> {
    names: &'a [String],
    cap: usize,
    failures: Vec<AxiomFailure>,
}

impl Collector<'_> {
    fn record(&mut self, axiom: Axiom, witness: &[usize]) {
        let idx = match self.failures.iter().position(|f| f.axiom == axiom) {
            Some(i) => i,
            None => {
                self.failures.push(AxiomFailure { axiom, count: 0, witnesses: Vec::new() });
                self.failures.len() - 1
            }
        };
        let entry = &mut self.failures[idx];
        entry.count += 1;
        if entry.witnesses.len() < self.cap {
            entry
                .witnesses
                .push(witness.iter().map(|&i| self.names[i].clone()).collect());
        }
    }
}

/// Square boolean matrix stored as rows of 64-bit words.
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { words, bits: vec![0; n * words] }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.bits[src * w + k];
            self.bits[dst * w + k] |= v;
        }
    }
}

fn iter_bits(words: impl Iterator<Item = u64>) -> impl Iterator<Item = usize> {
    words.enumerate().flat_map(|(w, mut word)| {
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

/// Finds the greatest element of the set given as a bitset, using `below`
/// (row i = elements below i) to test candidates.
fn extremum(set: &[u64], below: &BitMatrix, size: &[usize]) -> Option<usize> {
    let cand = iter_bits(set.iter().copied()).max_by_key(|&g| (size[g], std::cmp::Reverse(g)))?;
    let row = below.row(cand);
    set.iter().zip(row).all(|(s, r)| s & !r == 0).then_some(cand)
}

/// Checks the lattice, ortholattice and orthomodular layers exhaustively.
///
/// Failures are collected per axiom up to `options.witness_cap` witnesses.
/// When the lattice layer fails the later layers are not evaluated, since
/// meets and joins are undefined.
pub fn validate_structure(raw: &RawOrtholattice, options: &ValidationOptions) -> ValidationReport {
    let n = raw.len();
    let mut out = Collector { names: &raw.names, cap: options.witness_cap, failures: Vec::new() };

    // up.row(i) = { j : i <= j }
    let mut up = BitMatrix::new(n);
    for i in 0..n {
        up.set(i, i);
    }
    for &(a, b) in &raw.leq {
        up.set(a, b);
    }
    for k in 0..n {
        for i in 0..n {
            if i != k && up.get(i, k) {
                up.or_row_into(k, i);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if up.get(i, j) && up.get(j, i) {
                out.record(Axiom::Antisymmetry, &[i, j]);
            }
        }
    }
    if !out.failures.is_empty() {
        return ValidationReport { elements: n, failures: out.failures, lattice: None };
    }

    for x in 0..n {
        if !up.get(raw.bottom, x) || !up.get(x, raw.top) {
            out.record(Axiom::Bounds, &[x]);
        }
    }

    let mut down = BitMatrix::new(n);
    for i in 0..n {
        for j in iter_bits(up.row(i).iter().copied()) {
            down.set(j, i);
        }
    }
    let down_size: Vec<usize> =
        (0..n).map(|i| down.row(i).iter().map(|w| w.count_ones() as usize).sum()).collect();
    let up_size: Vec<usize> =
        (0..n).map(|i| up.row(i).iter().map(|w| w.count_ones() as usize).sum()).collect();

    let mut meet = vec![usize::MAX; n * n];
    let mut join = vec![usize::MAX; n * n];
    let mut scratch = vec![0u64; up.words];
    for a in 0..n {
        for b in a..n {
            for (k, s) in scratch.iter_mut().enumerate() {
                *s = down.row(a)[k] & down.row(b)[k];
            }
            match extremum(&scratch, &down, &down_size) {
                Some(m) => {
                    meet[a * n + b] = m;
                    meet[b * n + a] = m;
                }
                None => out.record(Axiom::Meet, &[a, b]),
            }
            for (k, s) in scratch.iter_mut().enumerate() {
                *s = up.row(a)[k] & up.row(b)[k];
            }
            match extremum(&scratch, &up, &up_size) {
                Some(j) => {
                    join[a * n + b] = j;
                    join[b * n + a] = j;
                }
                None => out.record(Axiom::Join, &[a, b]),
            }
        }
    }
    if !out.failures.is_empty() {
        return ValidationReport { elements: n, failures: out.failures, lattice: None };
    }

    let ortho = &raw.ortho;
    let leq = |a: usize, b: usize| up.get(a, b);
    for x in 0..n {
        if ortho[ortho[x]] != x {
            out.record(Axiom::Involution, &[x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && leq(x, y) && !leq(ortho[y], ortho[x]) {
                out.record(Axiom::Antitone, &[x, y]);
            }
        }
    }
    for x in 0..n {
        if meet[x * n + ortho[x]] != raw.bottom {
            out.record(Axiom::Noncontradiction, &[x]);
        }
    }
    for x in 0..n {
        if join[x * n + ortho[x]] != raw.top {
            out.record(Axiom::ExcludedMiddle, &[x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            if leq(x, y) {
                let inner = meet[y * n + ortho[x]];
                if join[x * n + inner] != y {
                    out.record(Axiom::Orthomodular, &[x, y]);
                }
            }
        }
    }

    let lattice = out.failures.is_empty().then(|| {
        let mut leq_table = vec![false; n * n];
        for i in 0..n {
            for j in iter_bits(up.row(i).iter().copied()) {
                leq_table[i * n + j] = true;
            }
        }
        FiniteOrtholattice::from_parts(
            raw.names.clone(),
            leq_table,
            raw.ortho.clone(),
            meet,
            join,
            raw.bottom,
            raw.top,
        )
    });
    ValidationReport { elements: n, failures: out.failures, lattice }
}

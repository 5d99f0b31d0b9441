//! Backtracking search for global valuations: one selected atom per block,
//! agreeing on every shared element.

use serde::Serialize;

use super::{enumerate_blocks, BlockView, TwoValuedHom};
use crate::error::{internal, Error, Result};
use crate::lattice::FiniteOrtholattice;

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first witness.
    First,
    /// Explore the whole tree and count witnesses (the first one is kept).
    Count,
    /// Collect up to `cap` witnesses; finding one more marks the result truncated.
    Enumerate { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_MAX_NODES }
    }
}

/// One homomorphism per maximal block, compatible on all overlaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalValuation {
    pub per_block: Vec<TwoValuedHom>,
}

impl GlobalValuation {
    /// Re-verifies every hom and agreement on every pairwise block
    /// intersection, element by element.
    pub fn verify(&self, l: &FiniteOrtholattice) -> Result<()> {
        for (i, h) in self.per_block.iter().enumerate() {
            h.verify(l).map_err(|e| internal(format!("block {i}: {e}")))?;
        }
        for (i, hi) in self.per_block.iter().enumerate() {
            for (j, hj) in self.per_block.iter().enumerate().skip(i + 1) {
                for &x in hi.domain().members() {
                    if let Some(vj) = hj.value(x) {
                        if hi.value(x) != Some(vj) {
                            return Err(internal(format!(
                                "blocks {i} and {j} disagree on `{}`",
                                l.name(x)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Value of `x` according to any block containing it.
    pub fn value(&self, x: usize) -> Option<bool> {
        self.per_block.iter().find_map(|h| h.value(x))
    }

    /// `{"W0": "atom", ...}` keyed by block id.
    pub fn to_json(&self, l: &FiniteOrtholattice) -> serde_json::Value {
        let map = self
            .per_block
            .iter()
            .enumerate()
            .map(|(i, h)| (block_id(i), serde_json::Value::from(l.name(h.selected_atom()))))
            .collect::<serde_json::Map<_, _>>();
        serde_json::json!({ "valuation": map })
    }
}

pub fn block_id(i: usize) -> String {
    format!("W{i}")
}

/// Record of an exhaustive search that found nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnsatCertificate {
    pub exhausted: bool,
    pub nodes: u64,
    pub order: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub witnesses: Vec<GlobalValuation>,
    pub count: u64,
    pub nodes: u64,
    pub truncated: bool,
    /// The whole search tree was explored.
    pub exhausted: bool,
    /// Block visiting order (block indices).
    pub order: Vec<usize>,
}

impl SearchReport {
    pub fn satisfiable(&self) -> bool {
        self.count > 0
    }

    pub fn certificate(&self) -> Option<UnsatCertificate> {
        (self.exhausted && self.count == 0).then(|| UnsatCertificate {
            exhausted: true,
            nodes: self.nodes,
            order: self.order.iter().map(|&i| block_id(i)).collect(),
        })
    }
}

/// Enumerates the blocks of `l` and searches them in canonical order.
pub fn find_global_valuation(
    l: &FiniteOrtholattice,
    mode: SearchMode,
    limits: SearchLimits,
) -> Result<SearchReport> {
    let blocks = enumerate_blocks(l)?;
    search_blocks(l, &blocks, mode, limits, &|_, _| true)
}

/// Re-runs the search with the certificate's node count as the budget and
/// checks that it exhausts again with the same count.
pub fn replay_certificate(l: &FiniteOrtholattice, cert: &UnsatCertificate) -> Result<bool> {
    let blocks = enumerate_blocks(l)?;
    let expected: Vec<String> = (0..blocks.len()).map(block_id).collect();
    if cert.order != expected {
        return Ok(false);
    }
    let report = search_blocks(l, &blocks, SearchMode::First, SearchLimits { max_nodes: cert.nodes }, &|_, _| true)?;
    Ok(report.exhausted && report.count == 0 && report.nodes == cert.nodes)
}

/// An atom of a block together with the value it forces on each member.
type Choice = (usize, Vec<(usize, bool)>);

struct Solver<'a> {
    /// choices[block] = the block's atoms
    choices: Vec<Vec<Choice>>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    chosen: Vec<usize>,
    blocks: &'a [BlockView],
    mode: SearchMode,
    limits: SearchLimits,
    nodes: u64,
    count: u64,
    witnesses: Vec<GlobalValuation>,
    truncated: bool,
}

enum Flow {
    Continue,
    Stop,
}

impl Solver<'_> {
    fn consistent(&self, assignment: &[(usize, bool)]) -> bool {
        assignment.iter().all(|&(x, v)| self.values[x].is_none_or(|w| w == v))
    }

    fn forward_check(&self, from: usize) -> bool {
        self.choices[from..]
            .iter()
            .all(|opts| opts.iter().any(|(_, assignment)| self.consistent(assignment)))
    }

    fn run(&mut self, k: usize) -> Result<Flow> {
        if k == self.choices.len() {
            return Ok(self.record());
        }
        for c in 0..self.choices[k].len() {
            self.nodes += 1;
            if self.nodes > self.limits.max_nodes {
                return Err(Error::LimitExceeded(format!(
                    "search exceeded {} nodes",
                    self.limits.max_nodes
                )));
            }
            if !self.consistent(&self.choices[k][c].1) {
                continue;
            }
            let mark = self.trail.len();
            for i in 0..self.choices[k][c].1.len() {
                let (x, v) = self.choices[k][c].1[i];
                if self.values[x].is_none() {
                    self.values[x] = Some(v);
                    self.trail.push(x);
                }
            }
            self.chosen.push(self.choices[k][c].0);
            let flow = if self.forward_check(k + 1) { self.run(k + 1)? } else { Flow::Continue };
            self.chosen.pop();
            for x in self.trail.drain(mark..) {
                self.values[x] = None;
            }
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn record(&mut self) -> Flow {
        if let SearchMode::Enumerate { cap } = self.mode {
            if self.witnesses.len() >= cap {
                self.truncated = true;
                return Flow::Stop;
            }
        }
        self.count += 1;
        let keep = match self.mode {
            SearchMode::Count => self.witnesses.is_empty(),
            _ => true,
        };
        if keep {
            let per_block = self
                .blocks
                .iter()
                .zip(&self.chosen)
                .map(|(b, &a)| b.hom(a).expect("chosen element is an atom"))
                .collect();
            self.witnesses.push(GlobalValuation { per_block });
        }
        match self.mode {
            SearchMode::First => Flow::Stop,
            _ => Flow::Continue,
        }
    }
}

/// Backtracking over `blocks` in the given order. `allowed(block, atom)`
/// filters the candidate atoms of each block. Every shared element's value
/// is propagated after each assignment, and later blocks are checked for a
/// remaining consistent atom before descending.
pub fn search_blocks(
    l: &FiniteOrtholattice,
    blocks: &[BlockView],
    mode: SearchMode,
    limits: SearchLimits,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Result<SearchReport> {
    let choices = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            b.atoms()
                .iter()
                .copied()
                .filter(|&a| allowed(k, a))
                .map(|a| (a, b.members().iter().map(|&m| (m, l.leq(a, m))).collect()))
                .collect()
        })
        .collect();
    let mut solver = Solver {
        choices,
        values: vec![None; l.len()],
        trail: Vec::new(),
        chosen: Vec::new(),
        blocks,
        mode,
        limits,
        nodes: 0,
        count: 0,
        witnesses: Vec::new(),
        truncated: false,
    };
    let flow = if solver.forward_check(0) { solver.run(0)? } else { Flow::Continue };
    let exhausted = matches!(flow, Flow::Continue);
    for w in &solver.witnesses {
        w.verify(l)?;
    }
    Ok(SearchReport {
        witnesses: solver.witnesses,
        count: solver.count,
        nodes: solver.nodes,
        truncated: solver.truncated,
        exhausted,
        order: (0..blocks.len()).collect(),
    })
}

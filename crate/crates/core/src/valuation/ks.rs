//! Exact-one assignments on context hypergraphs: every context gets exactly
//! one outcome valued 1, and each outcome has one value across contexts.

use serde::Serialize;

use super::search::{SearchLimits, SearchMode};
use crate::error::{Error, Result};
use crate::greechie::ContextHypergraph;

/// Counting argument: if each outcome lies in an even number of contexts,
/// summing the exact-one constraints counts every 1 an even number of times,
/// so an odd number of contexts admits no assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCertificate {
    pub contexts: usize,
    pub all_even_incidence: bool,
}

impl ParityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "parity": self })
    }
}

pub fn parity_certificate(h: &ContextHypergraph) -> Option<ParityCertificate> {
    let all_even = h.incidence().iter().all(|n| n % 2 == 0);
    (all_even && h.contexts().len() % 2 == 1)
        .then(|| ParityCertificate { contexts: h.contexts().len(), all_even_incidence: true })
}

#[derive(Debug, Clone)]
pub struct KsReport {
    /// Present when the parity fast path decided the instance.
    pub parity: Option<ParityCertificate>,
    /// Each assignment as the sorted list of outcomes valued 1.
    pub assignments: Vec<Vec<usize>>,
    pub count: u64,
    pub nodes: u64,
    pub exhausted: bool,
    pub truncated: bool,
}

impl KsReport {
    pub fn satisfiable(&self) -> bool {
        self.count > 0
    }
}

/// Parity fast path first, then exhaustive search.
pub fn ks_hypergraph_check(h: &ContextHypergraph, mode: SearchMode, limits: SearchLimits) -> Result<KsReport> {
    if h.contexts().is_empty() {
        return Err(Error::Input("hypergraph has no contexts".into()));
    }
    if let Some(cert) = parity_certificate(h) {
        return Ok(KsReport {
            parity: Some(cert),
            assignments: Vec::new(),
            count: 0,
            nodes: 0,
            exhausted: false,
            truncated: false,
        });
    }
    search_assignments(h, mode, limits)
}

/// Backtracking over contexts in order; a node is one trial of an outcome
/// as the context's 1.
pub fn search_assignments(h: &ContextHypergraph, mode: SearchMode, limits: SearchLimits) -> Result<KsReport> {
    if h.contexts().is_empty() {
        return Err(Error::Input("hypergraph has no contexts".into()));
    }
    let mut s = Ks {
        contexts: h.contexts(),
        values: vec![None; h.outcomes().len()],
        mode,
        limits,
        nodes: 0,
        count: 0,
        assignments: Vec::new(),
        truncated: false,
    };
    let exhausted = !s.run(0)?;
    for a in &s.assignments {
        verify_assignment(h, a)?;
    }
    Ok(KsReport {
        parity: None,
        assignments: s.assignments,
        count: s.count,
        nodes: s.nodes,
        exhausted,
        truncated: s.truncated,
    })
}

fn verify_assignment(h: &ContextHypergraph, ones: &[usize]) -> Result<()> {
    for c in h.contexts() {
        let n = c.iter().filter(|o| ones.binary_search(o).is_ok()).count();
        if n != 1 {
            return Err(crate::error::internal(format!("assignment puts {n} ones in a context")));
        }
    }
    Ok(())
}

struct Ks<'a> {
    contexts: &'a [Vec<usize>],
    values: Vec<Option<bool>>,
    mode: SearchMode,
    limits: SearchLimits,
    nodes: u64,
    count: u64,
    assignments: Vec<Vec<usize>>,
    truncated: bool,
}

impl Ks<'_> {
    fn feasible(&self) -> bool {
        self.contexts.iter().all(|c| {
            let ones = c.iter().filter(|&&o| self.values[o] == Some(true)).count();
            ones == 1 || (ones == 0 && c.iter().any(|&o| self.values[o].is_none()))
        })
    }

    /// Returns true when the search should stop.
    fn run(&mut self, k: usize) -> Result<bool> {
        if k == self.contexts.len() {
            return Ok(self.record());
        }
        let contexts = self.contexts;
        let ctx = &contexts[k];
        for &o in ctx {
            if self.values[o] == Some(false) {
                continue;
            }
            if ctx.iter().any(|&x| x != o && self.values[x] == Some(true)) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limits.max_nodes {
                return Err(Error::LimitExceeded(format!("search exceeded {} nodes", self.limits.max_nodes)));
            }
            let mut set = Vec::new();
            for &x in ctx {
                if self.values[x].is_none() {
                    self.values[x] = Some(x == o);
                    set.push(x);
                }
            }
            let stop = self.feasible() && self.run(k + 1)?;
            for x in set {
                self.values[x] = None;
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn record(&mut self) -> bool {
        if let SearchMode::Enumerate { cap } = self.mode {
            if self.assignments.len() >= cap {
                self.truncated = true;
                return true;
            }
        }
        self.count += 1;
        if self.mode != SearchMode::Count || self.assignments.is_empty() {
            let ones = (0..self.values.len()).filter(|&o| self.values[o] == Some(true)).collect();
            self.assignments.push(ones);
        }
        self.mode == SearchMode::First
    }
}

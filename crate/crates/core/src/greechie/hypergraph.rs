use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Named outcomes and contexts (sets of outcomes). Each context is stored
/// sorted by outcome index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextHypergraph {
    outcomes: Vec<String>,
    contexts: Vec<Vec<usize>>,
}

impl ContextHypergraph {
    /// Checks that contexts are non-empty, duplicate-free and distinct, and
    /// that every outcome lies in some context.
    pub fn new(outcomes: Vec<String>, contexts: Vec<Vec<usize>>) -> Result<Self> {
        let mut names = HashSet::new();
        if let Some(dup) = outcomes.iter().find(|o| !names.insert(o.as_str())) {
            return Err(Error::Input(format!("duplicate outcome `{dup}`")));
        }
        let mut used = vec![false; outcomes.len()];
        let mut seen = HashSet::new();
        let mut sorted = Vec::with_capacity(contexts.len());
        for (k, mut c) in contexts.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Input(format!("context {k} is empty")));
            }
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("context {k} repeats an outcome")));
            }
            if let Some(&bad) = c.iter().find(|&&o| o >= outcomes.len()) {
                return Err(Error::Input(format!("context {k} refers to unknown outcome {bad}")));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::Input(format!("context {k} is a duplicate")));
            }
            for &o in &c {
                used[o] = true;
            }
            sorted.push(c);
        }
        if let Some(o) = used.iter().position(|&u| !u) {
            return Err(Error::Input(format!("outcome `{}` lies in no context", outcomes[o])));
        }
        Ok(Self { outcomes, contexts: sorted })
    }

    /// Outcomes are numbered in order of first appearance.
    pub fn from_named<I, C>(contexts: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = String>,
    {
        let mut outcomes = Vec::new();
        let mut index = HashMap::new();
        let contexts = contexts
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|name| {
                        *index.entry(name.clone()).or_insert_with(|| {
                            outcomes.push(name);
                            outcomes.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(outcomes, contexts)
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn context_names(&self, k: usize) -> Vec<&str> {
        self.contexts[k].iter().map(|&o| self.outcomes[o].as_str()).collect()
    }

    /// Number of contexts containing each outcome.
    pub fn incidence(&self) -> Vec<usize> {
        let mut n = vec![0; self.outcomes.len()];
        for c in &self.contexts {
            for &o in c {
                n[o] += 1;
            }
        }
        n
    }
}

//! Finite ortholattices: validation, commutation, center, and central
//! (factor) congruences.
//!
//! Elements are dense indices `0..n` with a name table. The order,
//! orthocomplement, meet and join are stored as dense tables so every later
//! check is a lookup.

mod congruence;
mod product;
mod table;
mod validate;

use std::collections::HashMap;
use std::fmt;

pub use congruence::{
    central_decomposition, congruence_quotient, CentralCongruence, CentralDecomposition, Quotient,
};
pub use product::{find_isomorphism, product};
pub use table::LatticeTable;
pub use validate::{
    validate_structure, Axiom, AxiomFailure, RawOrtholattice, ValidationOptions, ValidationReport,
    DEFAULT_WITNESS_CAP,
};

use crate::error::{Error, Result};
use crate::valuation::BlockView;

/// A validated finite orthomodular lattice.
///
/// Values of this type only come out of [`validate_structure`], so every
/// instance satisfies the lattice, ortholattice and orthomodular axioms.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteOrtholattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    ortho: Vec<usize>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl fmt::Debug for FiniteOrtholattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteOrtholattice")
            .field("elements", &self.names)
            .field("ortho", &self.ortho)
            .finish_non_exhaustive()
    }
}

impl FiniteOrtholattice {
    pub(crate) fn from_parts(
        names: Vec<String>,
        leq: Vec<bool>,
        ortho: Vec<usize>,
        meet: Vec<usize>,
        join: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Self {
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { names, index, leq, ortho, meet, join, bottom, top }
    }

    /// Validates `raw` with default options and returns the lattice, or
    /// [`Error::NotOml`] carrying the full report.
    pub fn new(raw: &RawOrtholattice) -> Result<Self> {
        validate_structure(raw, &ValidationOptions::default()).into_lattice()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Like [`index_of`](Self::index_of) but reports unknown names as input errors.
    pub fn element(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::Input(format!("unknown element `{name}`")))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// `a` commutes with `b` iff `a = (a ∧ b) ∨ (a ∧ ¬b)`.
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        a == self.join(self.meet(a, b), self.meet(a, self.ortho(b)))
    }

    /// `z` is central iff every element commutes with it.
    pub fn is_central(&self, z: usize) -> bool {
        self.elements().all(|a| self.commutes(a, z))
    }

    pub fn central_elements(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.is_central(z)).collect()
    }

    /// The center Z(L) as a Boolean subalgebra.
    pub fn center(&self) -> Result<BlockView> {
        BlockView::new(self, self.central_elements())
            .map_err(|e| crate::error::internal(format!("center is not Boolean: {e}")))
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.bottom && self.covers(self.bottom, x))
            .collect()
    }

    /// True when `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        x != y
            && self.leq(x, y)
            && !self
                .elements()
                .any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
    }

    /// All covering pairs `(lower, upper)` in index order.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if self.covers(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Returns the raw form of this lattice (all strict order pairs).
    pub fn to_raw(&self) -> RawOrtholattice {
        RawOrtholattice::from_order(
            self.names.clone(),
            |a, b| self.leq(a, b),
            self.ortho.clone(),
            self.bottom,
            self.top,
        )
        .expect("validated lattice is a well-formed raw structure")
    }

    /// Returns a copy with elements renamed; names must stay unique.
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::Input("rename table has the wrong length".into()));
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if index.len() != names.len() || names.iter().any(String::is_empty) {
            return Err(Error::Input("renamed elements must be unique and non-empty".into()));
        }
        Ok(Self { names, index, ..self.clone() })
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn b4_validates() {
        let l = b4();
        assert_eq!(l.len(), 4);
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 3);
    }

    #[test]
    fn benzene_fails_orthomodular_law_with_x_y() {
        let report = validate_structure(&o6_raw(), &ValidationOptions::default());
        assert!(!report.passed());
        assert!(report.lattice.is_none());
        let fail = report.failure(Axiom::Orthomodular).unwrap();
        assert_eq!(fail.witnesses[0], vec!["x".to_string(), "y".to_string()]);
        // O6 is still an ortholattice: only the orthomodular layer fails.
        assert_eq!(report.failures.len(), 1);
    }

    #[test]
    fn mo2_validates() {
        let l = mo(2);
        assert_eq!(l.len(), 6);
        assert_eq!(l.atoms().len(), 4);
    }

    #[test]
    fn antisymmetry_failure_is_reported() {
        let r = raw(&["0", "a", "b", "1"], &[("a", "b"), ("b", "a")], &[("0", "1"), ("1", "0"), ("a", "b"), ("b", "a")])
            .unwrap();
        let report = validate_structure(&r, &ValidationOptions::default());
        assert_eq!(report.failures[0].axiom, Axiom::Antisymmetry);
    }

    #[test]
    fn missing_meet_is_a_lattice_failure() {
        // 0 < a, b < c, d < 1: a and b have two minimal upper bounds.
        let names = ["0", "a", "b", "c", "d", "1"];
        let pairs = [
            ("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1"),
        ];
        let neg = [("0", "1"), ("1", "0"), ("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")];
        let report = validate_structure(&raw(&names, &pairs, &neg).unwrap(), &ValidationOptions::default());
        let join = report.failure(Axiom::Join).unwrap();
        assert_eq!(join.witnesses[0], vec!["a".to_string(), "b".to_string()]);
        assert!(report.failure(Axiom::Meet).is_some());
        assert!(report.failure(Axiom::Orthomodular).is_none());
    }

    #[test]
    fn witness_cap_is_respected() {
        let opts = ValidationOptions { witness_cap: 1 };
        let report = validate_structure(&o6_raw(), &opts);
        let fail = report.failure(Axiom::Orthomodular).unwrap();
        assert_eq!(fail.witnesses.len(), 1);
        assert!(fail.count >= 2);
    }

    #[test]
    fn commutation_examples() {
        let l = mo(2);
        let a = l.element("a").unwrap();
        let a_ = l.element("a'").unwrap();
        let b = l.element("b").unwrap();
        assert!(l.commutes(a, a_));
        assert!(!l.commutes(a, b));
        let b4 = b4();
        for x in b4.elements() {
            for y in b4.elements() {
                assert!(b4.commutes(x, y));
            }
        }
    }

    #[test]
    fn centrality_examples() {
        let l = mo(2);
        assert!(l.is_central(l.top()));
        assert!(l.is_central(l.bottom()));
        assert!(!l.is_central(l.element("a").unwrap()));
        assert_eq!(l.central_elements(), vec![l.bottom(), l.top()]);
        let b4 = b4();
        assert!(b4.elements().all(|z| b4.is_central(z)));
        assert_eq!(b4.center().unwrap().members().len(), 4);
    }

    #[test]
    fn covering_pairs_of_mo2() {
        let l = mo(2);
        let covers = l.covering_pairs();
        assert_eq!(covers.len(), 8);
        assert!(covers.iter().all(|&(x, y)| x == l.bottom() || y == l.top()));
    }
}

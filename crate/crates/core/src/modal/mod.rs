//! Necessity and possibility on Boolean saturated orthomodular lattices.
//!
//! `□a` is the largest central element below `a` and `◇a = ¬□¬a` the
//! smallest central element above it. Every finite OML is Boolean
//! saturated, so the canonical modal extension of a finite lattice is the
//! lattice itself with the canonical box.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::lattice::{central_decomposition, FiniteOrtholattice};
use crate::valuation::{closure, BlockView};

/// Computes `□a` as the join of all central elements below `a`, then checks
/// that the result is central, below `a`, and maximal.
pub fn box_of(l: &FiniteOrtholattice, center: &[usize], a: usize) -> Result<usize> {
    let b = l.join_all(center.iter().copied().filter(|&z| l.leq(z, a)));
    let saturated = center.contains(&b)
        && l.leq(b, a)
        && center.iter().all(|&z| !l.leq(z, a) || l.leq(z, b));
    if saturated {
        Ok(b)
    } else {
        Err(internal(format!("not Boolean saturated at `{}`", l.name(a))))
    }
}

/// The canonical box table of `l`.
pub fn canonical_box(l: &FiniteOrtholattice) -> Result<Vec<usize>> {
    let center = l.central_elements();
    l.elements().map(|a| box_of(l, &center, a)).collect()
}

/// Resolves a name → name box table, rejecting partial or unknown entries.
pub fn box_table_from_names(l: &FiniteOrtholattice, table: &BTreeMap<String, String>) -> Result<Vec<usize>> {
    for key in table.keys() {
        l.element(key)?;
    }
    l.elements()
        .map(|x| {
            let target = table
                .get(l.name(x))
                .ok_or_else(|| Error::Input(format!("box table has no entry for `{}`", l.name(x))))?;
            l.element(target)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub pass: bool,
    pub witnesses: Vec<Vec<String>>,
}

/// Per-axiom outcome of the S1–S7 check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModalAxiomReport {
    pub axioms: BTreeMap<String, AxiomResult>,
}

impl ModalAxiomReport {
    pub fn passed(&self) -> bool {
        self.axioms.values().all(|r| r.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.axioms.get(axiom)
    }
}

/// Evaluates S1–S7 exhaustively: S1–S3 per element, S4–S7 per ordered
/// pair `(x, y)`. Witness tuples are element names in `[x]` or `[x, y]`
/// order, capped at `witness_cap` per axiom.
pub fn verify_modal_axioms(l: &FiniteOrtholattice, boxes: &[usize], witness_cap: usize) -> Result<ModalAxiomReport> {
    if boxes.len() != l.len() || boxes.iter().any(|&b| b >= l.len()) {
        return Err(Error::Input(format!(
            "box table must map all {} elements to elements",
            l.len()
        )));
    }
    let bx = |x: usize| boxes[x];
    let mut axioms: BTreeMap<String, AxiomResult> = (1..=7)
        .map(|i| (format!("S{i}"), AxiomResult { pass: true, witnesses: Vec::new() }))
        .collect();
    let mut fail = |axiom: &str, w: &[usize]| {
        let r = axioms.get_mut(axiom).expect("known axiom");
        r.pass = false;
        if r.witnesses.len() < witness_cap {
            r.witnesses.push(w.iter().map(|&i| l.name(i).to_string()).collect());
        }
    };

    for x in l.elements() {
        if !l.leq(bx(x), x) {
            fail("S1", &[x]);
        }
        if bx(bx(x)) != bx(x) {
            fail("S3", &[x]);
        }
    }
    if bx(l.top()) != l.top() {
        fail("S2", &[l.top()]);
    }
    for x in l.elements() {
        for y in l.elements() {
            if bx(l.meet(x, y)) != l.meet(bx(x), bx(y)) {
                fail("S4", &[x, y]);
            }
            let bxv = bx(x);
            if y != l.join(l.meet(y, bxv), l.meet(y, l.ortho(bxv))) {
                fail("S5", &[x, y]);
            }
            if bx(l.join(x, bx(y))) != l.join(bx(x), bx(y)) {
                fail("S6", &[x, y]);
            }
            let lhs = bx(l.join(l.ortho(x), l.meet(y, x)));
            let rhs = l.join(l.ortho(bx(x)), bx(y));
            if !l.leq(lhs, rhs) {
                fail("S7", &[x, y]);
            }
        }
    }
    Ok(ModalAxiomReport { axioms })
}

/// An OML together with its box table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalAlgebra {
    base: FiniteOrtholattice,
    boxes: Vec<usize>,
}

impl ModalAlgebra {
    pub fn canonical(base: FiniteOrtholattice) -> Result<Self> {
        let boxes = canonical_box(&base)?;
        Ok(Self { base, boxes })
    }

    pub fn base(&self) -> &FiniteOrtholattice {
        &self.base
    }

    pub fn box_table(&self) -> &[usize] {
        &self.boxes
    }

    pub fn necessity(&self, a: usize) -> usize {
        self.boxes[a]
    }

    /// `◇a = ¬□¬a`.
    pub fn possibility(&self, a: usize) -> usize {
        let l = &self.base;
        l.ortho(self.boxes[l.ortho(a)])
    }

    /// `◇a` checked against the least central element above `a`.
    pub fn diamond(&self, a: usize) -> Result<usize> {
        let l = &self.base;
        let d = self.possibility(a);
        let center = l.central_elements();
        let least = center.iter().copied().find(|&z| {
            l.leq(a, z) && center.iter().all(|&w| !l.leq(a, w) || l.leq(z, w))
        });
        if least == Some(d) {
            Ok(d)
        } else {
            Err(internal(format!("◇`{}` is not the least central element above it", l.name(a))))
        }
    }

    pub fn diamond_table(&self) -> Vec<usize> {
        self.base.elements().map(|a| self.possibility(a)).collect()
    }

    pub fn table_names(&self, table: &[usize]) -> BTreeMap<String, String> {
        table
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.base.name(a).to_string(), self.base.name(b).to_string()))
            .collect()
    }
}

/// An orthomodular monomorphism of `source` into a modal algebra.
#[derive(Debug, Clone)]
pub struct ModalExtension {
    pub source: FiniteOrtholattice,
    pub target: ModalAlgebra,
    pub embedding: Vec<usize>,
    preimage: HashMap<usize, usize>,
}

impl ModalExtension {
    pub fn embed(&self, x: usize) -> usize {
        self.embedding[x]
    }

    /// The source element mapped to `y`, if any.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.preimage.get(&y).copied()
    }

    /// Checks injectivity and preservation of ∧, ∨, ¬, 0, 1 on all pairs.
    pub fn verify_embedding(&self) -> Result<()> {
        let (s, t, f) = (&self.source, self.target.base(), &self.embedding);
        if f.len() != s.len() || self.preimage.len() != s.len() {
            return Err(internal("embedding is not injective"));
        }
        if f[s.bottom()] != t.bottom() || f[s.top()] != t.top() {
            return Err(internal("embedding does not preserve 0 and 1"));
        }
        for x in s.elements() {
            if f[s.ortho(x)] != t.ortho(f[x]) {
                return Err(internal("embedding does not preserve ¬"));
            }
            for y in s.elements() {
                if f[s.meet(x, y)] != t.meet(f[x], f[y]) || f[s.join(x, y)] != t.join(f[x], f[y]) {
                    return Err(internal("embedding does not preserve ∧/∨"));
                }
            }
        }
        Ok(())
    }
}

/// The canonical finite modal extension: `l` itself with its canonical box,
/// embedded by the identity.
///
/// Also certifies that `l` splits into factors with trivial center and that
/// the canonical box satisfies S1–S7.
pub fn modal_extension(l: &FiniteOrtholattice) -> Result<ModalExtension> {
    central_decomposition(l)?;
    let target = ModalAlgebra::canonical(l.clone())?;
    let report = verify_modal_axioms(l, target.box_table(), 1)?;
    if !report.passed() {
        return Err(internal("canonical box violates S1–S7"));
    }
    let embedding: Vec<usize> = l.elements().collect();
    let preimage = embedding.iter().enumerate().map(|(x, &y)| (y, x)).collect();
    let ext = ModalExtension { source: l.clone(), target, embedding, preimage };
    ext.verify_embedding()?;
    Ok(ext)
}

/// `◇L`: the subalgebra of the target generated by all `◇f(p)`.
pub fn possibility_space(ext: &ModalExtension) -> Result<BlockView> {
    let t = ext.target.base();
    let gens: Vec<usize> = ext.source.elements().map(|p| ext.target.possibility(ext.embed(p))).collect();
    let members = closure(t, gens, true);
    let center = t.central_elements();
    if let Some(&x) = members.iter().find(|x| !center.contains(x)) {
        return Err(internal(format!("possibility space contains non-central `{}`", t.name(x))));
    }
    BlockView::new(t, members).map_err(|e| internal(format!("possibility space is not Boolean: {e}")))
}

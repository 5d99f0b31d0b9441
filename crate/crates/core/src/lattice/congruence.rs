use super::{product, FiniteOrtholattice, RawOrtholattice};
use crate::error::{internal, Error, Result};

/// The factor congruence `x ~ y ⇔ x ∧ z = y ∧ z` of a central element `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCongruence {
    pub central_element: usize,
    /// Classes in order of their first member's index.
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl CentralCongruence {
    pub fn new(l: &FiniteOrtholattice, z: usize) -> Result<Self> {
        if !l.is_central(z) {
            return Err(Error::Precondition(format!("`{}` is not central", l.name(z))));
        }
        let mut rep_class = vec![usize::MAX; l.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; l.len()];
        for x in l.elements() {
            let rep = l.meet(x, z);
            if rep_class[rep] == usize::MAX {
                rep_class[rep] = classes.len();
                classes.push(Vec::new());
            }
            class_of[x] = rep_class[rep];
            classes[rep_class[rep]].push(x);
        }
        Ok(Self { central_element: z, classes, class_of })
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Checks that ∧, ∨ and ¬ are well defined on classes.
    pub fn is_congruence(&self, l: &FiniteOrtholattice) -> bool {
        for x in l.elements() {
            for x2 in l.elements().filter(|&x2| self.related(x, x2)) {
                if !self.related(l.ortho(x), l.ortho(x2)) {
                    return false;
                }
                for y in l.elements() {
                    if !self.related(l.meet(x, y), l.meet(x2, y)) || !self.related(l.join(x, y), l.join(x2, y)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that `self` and `other` intersect in the diagonal and compose
    /// to the full relation, i.e. that they are a pair of factor congruences.
    pub fn is_factor_pair(&self, other: &CentralCongruence, l: &FiniteOrtholattice) -> bool {
        for x in l.elements() {
            for y in l.elements() {
                if x != y && self.related(x, y) && other.related(x, y) {
                    return false;
                }
                // x Θ w Θ' y with the canonical witness w = (x∧z) ∨ (y∧z').
                let w = l.join(l.meet(x, self.central_element), l.meet(y, other.central_element));
                let composes = (self.related(x, w) && other.related(w, y))
                    || l.elements().any(|w| self.related(x, w) && other.related(w, y));
                if !composes {
                    return false;
                }
            }
        }
        true
    }
}

/// A quotient `L/Θ_z` with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub lattice: FiniteOrtholattice,
    /// `projection[x]` is the quotient element holding `x`.
    pub projection: Vec<usize>,
    pub congruence: CentralCongruence,
}

/// Builds `L/Θ_z` for a central `z`, which is isomorphic to the interval
/// `[0, z]`. Each class is named after its representative `x ∧ z`; the
/// bottom and top classes are named `"0"` and `"1"`.
pub fn congruence_quotient(l: &FiniteOrtholattice, z: usize) -> Result<Quotient> {
    let cong = CentralCongruence::new(l, z)?;
    let k = cong.classes.len();
    let reps: Vec<usize> = cong.classes.iter().map(|c| l.meet(c[0], z)).collect();
    let bottom = cong.class_of(l.bottom());
    let top = cong.class_of(l.top());
    let names = (0..k)
        .map(|c| {
            if c == bottom {
                "0".to_string()
            } else if c == top {
                "1".to_string()
            } else {
                l.name(reps[c]).to_string()
            }
        })
        .collect();
    let ortho = (0..k).map(|c| cong.class_of(l.ortho(reps[c]))).collect();
    let raw = RawOrtholattice::from_order(names, |a, b| l.leq(reps[a], reps[b]), ortho, bottom, top)?;
    let quotient = FiniteOrtholattice::new(&raw)
        .map_err(|e| internal(format!("quotient by `{}` is not an OML: {e}", l.name(z))))?;

    let projection: Vec<usize> = l.elements().map(|x| cong.class_of(x)).collect();
    for x in l.elements() {
        if projection[l.ortho(x)] != quotient.ortho(projection[x]) {
            return Err(internal("projection does not preserve ¬"));
        }
        for y in l.elements() {
            if projection[l.meet(x, y)] != quotient.meet(projection[x], projection[y])
                || projection[l.join(x, y)] != quotient.join(projection[x], projection[y])
            {
                return Err(internal("projection does not preserve ∧/∨"));
            }
        }
    }
    Ok(Quotient { lattice: quotient, projection, congruence: cong })
}

/// `L ≅ ∏ L/Θ_z` over the atoms `z` of the center.
#[derive(Debug, Clone)]
pub struct CentralDecomposition {
    /// Directly indecomposable factors, smallest first.
    pub factors: Vec<FiniteOrtholattice>,
    /// The central atom each factor was cut out by.
    pub central_atoms: Vec<usize>,
    /// The product of `factors` in the listed order.
    pub product: FiniteOrtholattice,
    /// `isomorphism[x]` is the product element corresponding to `x`.
    pub isomorphism: Vec<usize>,
}

/// Splits `l` into factors with trivial center and verifies that the
/// product of the factors reproduces `l`'s tables exactly.
pub fn central_decomposition(l: &FiniteOrtholattice) -> Result<CentralDecomposition> {
    let center = l.center()?;
    let mut parts: Vec<(usize, Quotient)> = center
        .atoms()
        .iter()
        .map(|&z| congruence_quotient(l, z).map(|q| (z, q)))
        .collect::<Result<_>>()?;
    parts.sort_by_key(|(z, q)| (q.lattice.len(), *z));

    for (z, q) in &parts {
        if q.lattice.central_elements().len() > 2 {
            return Err(internal(format!(
                "factor at central atom `{}` has a non-trivial center",
                l.name(*z)
            )));
        }
    }

    let factor_refs: Vec<&FiniteOrtholattice> = parts.iter().map(|(_, q)| &q.lattice).collect();
    let product = product(&factor_refs);
    let isomorphism: Vec<usize> = l
        .elements()
        .map(|x| {
            parts
                .iter()
                .fold(0, |acc, (_, q)| acc * q.lattice.len() + q.projection[x])
        })
        .collect();

    let mut hit = vec![false; product.len()];
    for &p in &isomorphism {
        if std::mem::replace(&mut hit[p], true) {
            return Err(internal("decomposition map is not injective"));
        }
    }
    if isomorphism.len() != product.len() {
        return Err(internal("decomposition map is not surjective"));
    }
    for x in l.elements() {
        if isomorphism[l.ortho(x)] != product.ortho(isomorphism[x]) {
            return Err(internal("decomposition map does not preserve ¬"));
        }
        for y in l.elements() {
            if l.leq(x, y) != product.leq(isomorphism[x], isomorphism[y]) {
                return Err(internal("decomposition map does not preserve order"));
            }
        }
    }

    let (central_atoms, factors) = parts.into_iter().map(|(z, q)| (z, q.lattice)).unzip();
    Ok(CentralDecomposition { factors, central_atoms, product, isomorphism })
}

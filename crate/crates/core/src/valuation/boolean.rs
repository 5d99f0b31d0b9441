//! Boolean subalgebras of a finite OML, their two-valued homomorphisms, and
//! filters.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::FiniteOrtholattice;

/// A Boolean subalgebra of an ambient lattice, with its atoms.
///
/// Each member carries the bitmask of atoms below it. Construction verifies
/// that the member ↦ mask map is an isomorphism onto the power set of the
/// atoms, which certifies the subalgebra as Boolean.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockView {
    members: Vec<usize>,
    atoms: Vec<usize>,
    masks: Vec<u64>,
}

impl BlockView {
    pub fn new(l: &FiniteOrtholattice, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: Vec<usize> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let bad = |msg: String| Err(Error::Precondition(msg));
        if let Some(&x) = members.iter().find(|&&x| x >= l.len()) {
            return bad(format!("element index {x} out of range"));
        }
        let has = |x: usize| members.binary_search(&x).is_ok();
        if !has(l.bottom()) || !has(l.top()) {
            return bad("subalgebra must contain 0 and 1".into());
        }
        for &a in &members {
            if !has(l.ortho(a)) {
                return bad(format!("not closed under ¬ at `{}`", l.name(a)));
            }
            for &b in &members {
                if !l.commutes(a, b) {
                    return bad(format!("`{}` and `{}` do not commute", l.name(a), l.name(b)));
                }
                if !has(l.meet(a, b)) || !has(l.join(a, b)) {
                    return bad(format!("not closed under ∧/∨ at (`{}`, `{}`)", l.name(a), l.name(b)));
                }
            }
        }
        let atoms: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&a| a != l.bottom() && members.iter().all(|&b| b == l.bottom() || b == a || !l.leq(b, a)))
            .collect();
        if atoms.len() > 63 {
            return bad(format!("{} atoms exceed the supported 63", atoms.len()));
        }
        let masks: Vec<u64> = members
            .iter()
            .map(|&m| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| l.leq(a, m))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        if members.len() as u128 != 1u128 << atoms.len() {
            return bad(format!(
                "{} members but {} atoms: not a Boolean algebra",
                members.len(),
                atoms.len()
            ));
        }
        let full = (1u64 << atoms.len()) - 1;
        let view = Self { members, atoms, masks };
        for (i, &a) in view.members.iter().enumerate() {
            if l.join_all(view.atoms_of_mask(view.masks[i])) != a {
                return bad(format!("`{}` is not the join of the atoms below it", l.name(a)));
            }
            if view.mask(l.ortho(a)) != Some(!view.masks[i] & full) {
                return bad(format!("¬ is not set complement at `{}`", l.name(a)));
            }
            for (j, &b) in view.members.iter().enumerate() {
                let (ma, mb) = (view.masks[i], view.masks[j]);
                if view.mask(l.meet(a, b)) != Some(ma & mb) || view.mask(l.join(a, b)) != Some(ma | mb) {
                    return bad(format!("not distributive at (`{}`, `{}`)", l.name(a), l.name(b)));
                }
            }
        }
        Ok(view)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Bitmask of the atoms below `x` (bit `i` ↔ `atoms()[i]`).
    pub fn mask(&self, x: usize) -> Option<u64> {
        self.members.binary_search(&x).ok().map(|i| self.masks[i])
    }

    fn atoms_of_mask(&self, mask: u64) -> impl Iterator<Item = usize> + '_ {
        self.atoms
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
    }

    pub fn is_subalgebra_of(&self, other: &BlockView) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// One homomorphism per atom, in atom order.
    pub fn homs(&self) -> Vec<TwoValuedHom> {
        self.atoms.iter().map(|&a| TwoValuedHom { domain: self.clone(), atom: a }).collect()
    }

    pub fn hom(&self, atom: usize) -> Result<TwoValuedHom> {
        if self.atoms.contains(&atom) {
            Ok(TwoValuedHom { domain: self.clone(), atom })
        } else {
            Err(Error::Precondition(format!("element {atom} is not an atom of the subalgebra")))
        }
    }

    pub fn member_names(&self, l: &FiniteOrtholattice) -> Vec<String> {
        self.members.iter().map(|&x| l.name(x).to_string()).collect()
    }
}

/// All two-valued homomorphisms of a Boolean subalgebra.
pub fn boolean_homs(w: &BlockView) -> Vec<TwoValuedHom> {
    w.homs()
}

/// A homomorphism `W → 2`, identified by the unique atom it sends to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoValuedHom {
    domain: BlockView,
    atom: usize,
}

impl TwoValuedHom {
    pub fn domain(&self) -> &BlockView {
        &self.domain
    }

    pub fn selected_atom(&self) -> usize {
        self.atom
    }

    /// Value at `x`, or `None` outside the domain.
    pub fn value(&self, x: usize) -> Option<bool> {
        let i = self.domain.atoms.iter().position(|&a| a == self.atom)?;
        self.domain.mask(x).map(|m| m >> i & 1 == 1)
    }

    /// Members sent to 1, i.e. the maximal filter of this hom.
    pub fn filter(&self) -> FilterView {
        let members = self.domain.members.iter().copied().filter(|&x| self.value(x) == Some(true)).collect();
        FilterView { members, least: self.atom, proper: true }
    }

    /// Re-checks the homomorphism laws on every member and member pair.
    pub fn verify(&self, l: &FiniteOrtholattice) -> Result<(), String> {
        let v = |x: usize| self.value(x).ok_or_else(|| format!("`{}` outside the domain", l.name(x)));
        if v(l.bottom())? || !v(l.top())? {
            return Err("hom must send 0 to 0 and 1 to 1".into());
        }
        let ones = self.domain.atoms.iter().filter(|&&a| self.value(a) == Some(true)).count();
        if ones != 1 {
            return Err(format!("{ones} atoms sent to 1"));
        }
        for &a in &self.domain.members {
            if v(l.ortho(a))? == v(a)? {
                return Err(format!("¬ not preserved at `{}`", l.name(a)));
            }
            for &b in &self.domain.members {
                if v(l.meet(a, b))? != (v(a)? && v(b)?) || v(l.join(a, b))? != (v(a)? || v(b)?) {
                    return Err(format!("∧/∨ not preserved at (`{}`, `{}`)", l.name(a), l.name(b)));
                }
            }
        }
        Ok(())
    }

    /// Restriction to a Boolean subalgebra of the domain.
    pub fn restrict(&self, sub: &BlockView) -> Result<TwoValuedHom> {
        if !sub.is_subalgebra_of(&self.domain) {
            return Err(Error::Precondition("restriction target is not a subalgebra of the domain".into()));
        }
        let ones: Vec<usize> = sub.atoms.iter().copied().filter(|&a| self.value(a) == Some(true)).collect();
        match ones.as_slice() {
            [a] => Ok(TwoValuedHom { domain: sub.clone(), atom: *a }),
            _ => Err(crate::error::internal(format!("restriction selects {} atoms", ones.len()))),
        }
    }

    /// True when both homs agree on every element of both domains.
    pub fn agrees_with(&self, other: &TwoValuedHom) -> bool {
        self.domain
            .members
            .iter()
            .all(|&x| other.value(x).is_none_or(|v| Some(v) == self.value(x)))
    }
}

/// A filter of a Boolean subalgebra, with its least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterView {
    pub members: Vec<usize>,
    pub least: usize,
    pub proper: bool,
}

impl FilterView {
    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Upward closed within `w` and closed under ∧.
    pub fn is_filter(&self, l: &FiniteOrtholattice, w: &BlockView) -> bool {
        self.members.iter().all(|&a| {
            w.members().iter().all(|&x| !l.leq(a, x) || self.contains(x))
                && self.members.iter().all(|&b| self.contains(l.meet(a, b)))
        })
    }

    /// Exactly one of `x`, `¬x` is a member for every `x` in `w`.
    pub fn is_maximal(&self, l: &FiniteOrtholattice, w: &BlockView) -> bool {
        w.members().iter().all(|&x| self.contains(x) != self.contains(l.ortho(x)))
    }
}

/// The least filter of `w` containing `xs`: the up-set of their meet.
pub fn generated_filter(l: &FiniteOrtholattice, w: &BlockView, xs: &[usize]) -> Result<FilterView> {
    if let Some(&x) = xs.iter().find(|&&x| !w.contains(x)) {
        return Err(Error::Precondition(format!("`{}` is not in the subalgebra", l.name(x))));
    }
    let least = l.meet_all(xs.iter().copied());
    let members = w.members().iter().copied().filter(|&x| l.leq(least, x)).collect();
    Ok(FilterView { members, least, proper: least != l.bottom() })
}

/// Extends a proper filter to a maximal one, choosing the lowest-index atom
/// below the filter's least element. Returns the filter and its hom.
pub fn extend_to_maximal(
    l: &FiniteOrtholattice,
    w: &BlockView,
    f: &FilterView,
) -> Result<(FilterView, TwoValuedHom)> {
    let least = l.meet_all(f.members.iter().copied());
    if least == l.bottom() {
        return Err(Error::Precondition("cannot extend an improper filter".into()));
    }
    let atom = w
        .atoms()
        .iter()
        .copied()
        .filter(|&a| l.leq(a, least))
        .min()
        .ok_or_else(|| crate::error::internal("proper filter has no atom below its least element"))?;
    let hom = w.hom(atom)?;
    Ok((hom.filter(), hom))
}

/// Every three distinct members include one that commutes with the other two.
pub fn is_greechie_set(l: &FiniteOrtholattice, set: &[usize]) -> bool {
    let xs: Vec<usize> = set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let c = |a: usize, b: usize, d: usize| l.commutes(a, b) && l.commutes(a, d);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            for k in j + 1..xs.len() {
                let (a, b, d) = (xs[i], xs[j], xs[k]);
                if !(c(a, b, d) || c(b, a, d) || c(d, a, b)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Fixpoint closure of `gens` under ∧ and ∨, and also ¬ when `with_ortho`.
pub fn closure(l: &FiniteOrtholattice, gens: impl IntoIterator<Item = usize>, with_ortho: bool) -> Vec<usize> {
    let mut inside = vec![false; l.len()];
    let mut members: Vec<usize> = Vec::new();
    let push = |x: usize, inside: &mut Vec<bool>, members: &mut Vec<usize>| {
        if !inside[x] {
            inside[x] = true;
            members.push(x);
        }
    };
    for g in gens {
        push(g, &mut inside, &mut members);
    }
    let mut done = 0;
    while done < members.len() {
        let a = members[done];
        done += 1;
        if with_ortho {
            push(l.ortho(a), &mut inside, &mut members);
        }
        for i in 0..done {
            let b = members[i];
            push(l.meet(a, b), &mut inside, &mut members);
            push(l.join(a, b), &mut inside, &mut members);
        }
    }
    members.sort_unstable();
    members
}

/// The sublattice generated by a set, with Boolean diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub members: Vec<usize>,
    pub closed_under_ortho: bool,
    /// First `(x, y, z)` with `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`, if any.
    pub distributivity_witness: Option<[usize; 3]>,
}

impl Sublattice {
    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness.is_none()
    }

    pub fn is_boolean(&self) -> bool {
        self.closed_under_ortho && self.is_distributive()
    }
}

pub fn generated_sublattice(l: &FiniteOrtholattice, set: &[usize]) -> Result<Sublattice> {
    if set.is_empty() {
        return Err(Error::Precondition("generating set must be non-empty".into()));
    }
    let members = closure(l, set.iter().copied(), false);
    let has = |x: usize| members.binary_search(&x).is_ok();
    let closed_under_ortho = members.iter().all(|&x| has(l.ortho(x)));
    let distributivity_witness = members.iter().find_map(|&x| {
        members.iter().find_map(|&y| {
            members.iter().find_map(|&z| {
                let lhs = l.meet(x, l.join(y, z));
                let rhs = l.join(l.meet(x, y), l.meet(x, z));
                (lhs != rhs).then_some([x, y, z])
            })
        })
    });
    Ok(Sublattice { members, closed_under_ortho, distributivity_witness })
}

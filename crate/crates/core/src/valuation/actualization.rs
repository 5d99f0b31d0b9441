//! Actualization of possible properties, extension of block valuations to
//! the possibility space, and the check that a global valuation exists iff
//! some valuation of the possibility space admits a compatible one.

use super::search::{search_blocks, SearchLimits, SearchMode, SearchReport};
use super::{closure, enumerate_blocks, extend_to_maximal, generated_filter, BlockView, TwoValuedHom};
use crate::error::{internal, Error, Result};
use crate::modal::{possibility_space, ModalExtension};

/// `⟨W ∪ ◇L⟩` inside the target of `ext`, for a Boolean subalgebra `w` of
/// the source.
pub fn joined_algebra(ext: &ModalExtension, w: &BlockView) -> Result<BlockView> {
    let space = possibility_space(ext)?;
    joined_with(ext, w, &space)
}

fn joined_with(ext: &ModalExtension, w: &BlockView, space: &BlockView) -> Result<BlockView> {
    let t = ext.target.base();
    let gens = w.members().iter().map(|&x| ext.embed(x)).chain(space.members().iter().copied());
    BlockView::new(t, closure(t, gens, false))
        .map_err(|e| internal(format!("⟨W ∪ ◇L⟩ is not a Boolean subalgebra: {e}")))
}

fn embedded_block(ext: &ModalExtension, w: &BlockView) -> Result<BlockView> {
    BlockView::new(ext.target.base(), w.members().iter().map(|&x| ext.embed(x)))
        .map_err(|e| internal(format!("embedded block is not Boolean: {e}")))
}

/// Pulls a hom on the embedded copy of `w` back to `w` itself.
fn pull_back(ext: &ModalExtension, w: &BlockView, h: &TwoValuedHom) -> Result<TwoValuedHom> {
    let atom = ext
        .preimage(h.selected_atom())
        .ok_or_else(|| internal("selected atom has no preimage"))?;
    w.hom(atom)
}

fn check_space_hom(space: &BlockView, f: &TwoValuedHom) -> Result<()> {
    if f.domain() != space {
        return Err(Error::Precondition("hom is not defined on the possibility space".into()));
    }
    Ok(())
}

/// The pair `(f_p, g)` witnessing an actualization.
#[derive(Debug, Clone)]
pub struct Actualization {
    /// Hom on `W` (source coordinates) with `f_p(p) = 1`.
    pub f_p: TwoValuedHom,
    /// Hom on `⟨W ∪ ◇L⟩` (target coordinates) with `g|W = f_p`, `g|◇L = f`.
    pub g: TwoValuedHom,
}

/// Actualizes `p ∈ W` compatibly with a hom `f` on `◇L` that has
/// `f(◇p) = 1`.
///
/// The filter of `f` together with `p` generates a filter of `⟨W ∪ ◇L⟩`,
/// which must be proper; its maximal extension (lowest-index atom) is `g`
/// and `f_p` is `g` restricted to `W`. Both defining clauses are re-checked
/// before returning.
pub fn actualize(ext: &ModalExtension, w: &BlockView, p: usize, f: &TwoValuedHom) -> Result<Actualization> {
    let src = &ext.source;
    let t = ext.target.base();
    if !w.contains(p) {
        return Err(Error::Precondition(format!("`{}` is not in the block", src.name(p))));
    }
    let space = possibility_space(ext)?;
    check_space_hom(&space, f)?;
    let p_t = ext.embed(p);
    let dp = ext.target.possibility(p_t);
    if f.value(dp) != Some(true) {
        return Err(Error::Precondition(format!(
            "f(◇{}) = 0, so `{}` cannot be actualized",
            src.name(p),
            src.name(p)
        )));
    }

    let joined = joined_with(ext, w, &space)?;
    let mut gens: Vec<usize> = f.filter().members;
    gens.push(p_t);
    let filter = generated_filter(t, &joined, &gens)?;
    if !filter.proper {
        return Err(internal(format!(
            "filter generated by f and `{}` is improper although f(◇p) = 1",
            src.name(p)
        )));
    }
    let (_, g) = extend_to_maximal(t, &joined, &filter)?;
    let f_p = pull_back(ext, w, &g.restrict(&embedded_block(ext, w)?)?)?;

    if f_p.value(p) != Some(true) {
        return Err(internal("actualization does not send p to 1"));
    }
    for &x in w.members() {
        if g.value(ext.embed(x)) != f_p.value(x) {
            return Err(internal(format!("g|W differs from f_p at `{}`", src.name(x))));
        }
    }
    for &x in space.members() {
        if g.value(x) != f.value(x) {
            return Err(internal(format!("g|◇L differs from f at `{}`", t.name(x))));
        }
    }
    g.verify(t).map_err(internal)?;
    f_p.verify(src).map_err(internal)?;
    Ok(Actualization { f_p, g })
}

/// Extends a hom `f` on `W` to `f*` on `⟨W ∪ ◇L⟩` with `f*|W = f`.
pub fn born_extension(ext: &ModalExtension, w: &BlockView, f: &TwoValuedHom) -> Result<TwoValuedHom> {
    if f.domain() != w {
        return Err(Error::Precondition("hom is not defined on the given block".into()));
    }
    let t = ext.target.base();
    let joined = joined_algebra(ext, w)?;
    let filter = generated_filter(t, &joined, &[ext.embed(f.selected_atom())])?;
    if !filter.proper {
        return Err(internal("filter of f is improper in ⟨W ∪ ◇L⟩"));
    }
    let (_, star) = extend_to_maximal(t, &joined, &filter)?;
    for &x in w.members() {
        if star.value(ext.embed(x)) != f.value(x) {
            return Err(internal(format!("f*|W differs from f at `{}`", ext.source.name(x))));
        }
    }
    star.verify(t).map_err(internal)?;
    Ok(star)
}

/// Searches for a global valuation of the source whose hom on every block
/// agrees with `f` on the block's intersection with `◇L`.
pub fn compatible_actualization(
    ext: &ModalExtension,
    f: &TwoValuedHom,
    limits: SearchLimits,
) -> Result<SearchReport> {
    let space = possibility_space(ext)?;
    check_space_hom(&space, f)?;
    let blocks = enumerate_blocks(&ext.source)?;
    compatible_with(ext, &blocks, f, limits)
}

fn compatible_with(
    ext: &ModalExtension,
    blocks: &[BlockView],
    f: &TwoValuedHom,
    limits: SearchLimits,
) -> Result<SearchReport> {
    let src = &ext.source;
    let t = ext.target.base();
    // central part of each block, in target coordinates
    let shared: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            b.members()
                .iter()
                .map(|&x| ext.embed(x))
                .filter(|&y| f.value(y).is_some())
                .collect()
        })
        .collect();
    let allowed = |k: usize, atom: usize| {
        let a = ext.embed(atom);
        shared[k].iter().all(|&y| t.leq(a, y) == f.value(y).unwrap())
    };
    let report = search_blocks(src, blocks, SearchMode::First, limits, &allowed)?;
    for w in &report.witnesses {
        for (k, h) in w.per_block.iter().enumerate() {
            for &y in &shared[k] {
                let x = ext.preimage(y).ok_or_else(|| internal("central element outside the source"))?;
                if h.value(x) != f.value(y) {
                    return Err(internal("compatible actualization disagrees with f"));
                }
            }
        }
    }
    Ok(report)
}

/// Outcome for one hom on the possibility space.
#[derive(Debug, Clone)]
pub struct PossibilityHomResult {
    pub f: TwoValuedHom,
    pub search: SearchReport,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub has_global_valuation: bool,
    pub some_f_admits_actualization: bool,
    pub equivalent: bool,
    pub global: SearchReport,
    pub per_f: Vec<PossibilityHomResult>,
}

/// Decides both sides of "`L` has a global valuation iff some hom on `◇L`
/// admits a compatible actualization" and fails with an internal error if
/// they disagree.
///
/// When a global valuation exists, the subalgebra generated by the central
/// parts of all blocks is also checked to be a Boolean subalgebra of `◇L`.
pub fn check_modal_ks_equivalence(ext: &ModalExtension, limits: SearchLimits) -> Result<EquivalenceReport> {
    let src = &ext.source;
    let t = ext.target.base();
    let blocks = enumerate_blocks(src)?;
    let global = search_blocks(src, &blocks, SearchMode::First, limits, &|_, _| true)?;
    let space = possibility_space(ext)?;

    if global.satisfiable() {
        let central_parts = blocks
            .iter()
            .flat_map(|b| b.members().iter().map(|&x| ext.embed(x)))
            .filter(|&y| space.contains(y));
        let generated = closure(t, central_parts, true);
        let sub = BlockView::new(t, generated)
            .map_err(|e| internal(format!("subalgebra generated by the central parts is not Boolean: {e}")))?;
        if !sub.is_subalgebra_of(&space) {
            return Err(internal("central parts generate elements outside ◇L"));
        }
    }

    let per_f = space
        .homs()
        .into_iter()
        .map(|f| compatible_with(ext, &blocks, &f, limits).map(|search| PossibilityHomResult { f, search }))
        .collect::<Result<Vec<_>>>()?;
    let has_global_valuation = global.satisfiable();
    let some_f_admits_actualization = per_f.iter().any(|r| r.search.satisfiable());
    let equivalent = has_global_valuation == some_f_admits_actualization;
    if !equivalent {
        return Err(internal(format!(
            "global valuation exists: {has_global_valuation}, compatible actualization exists: {some_f_admits_actualization}"
        )));
    }
    Ok(EquivalenceReport { has_global_valuation, some_f_admits_actualization, equivalent, global, per_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::*;
    use crate::lattice::{product, FiniteOrtholattice};
    use crate::modal::modal_extension;

    fn block_with(l: &FiniteOrtholattice, name: &str) -> BlockView {
        let x = l.element(name).unwrap();
        enumerate_blocks(l).unwrap().into_iter().find(|b| b.contains(x)).unwrap()
    }

    #[test]
    fn actualize_in_mo2() {
        let l = mo(2);
        let ext = modal_extension(&l).unwrap();
        let w = block_with(&l, "a");
        let space = possibility_space(&ext).unwrap();
        let f = &space.homs()[0];
        let a = l.element("a").unwrap();
        let act = actualize(&ext, &w, a, f).unwrap();
        assert_eq!(act.f_p.value(a), Some(true));
        assert_eq!(act.f_p.value(l.element("a'").unwrap()), Some(false));
    }

    #[test]
    fn actualize_in_product() {
        let l = product(&[&b2(), &mo(2)]);
        let ext = modal_extension(&l).unwrap();
        let w = block_with(&l, "(1,a)");
        let space = possibility_space(&ext).unwrap();
        let z = l.element("(1,0)").unwrap();
        let f = space.hom(z).unwrap();
        let p = l.element("(1,a)").unwrap();
        let act = actualize(&ext, &w, p, &f).unwrap();
        assert_eq!(act.g.value(p), Some(true));
        assert_eq!(act.g.value(z), Some(true));
    }

    #[test]
    fn actualizing_zero_is_a_precondition_error() {
        let l = mo(2);
        let ext = modal_extension(&l).unwrap();
        let w = block_with(&l, "a");
        let f = possibility_space(&ext).unwrap().homs().remove(0);
        assert!(matches!(actualize(&ext, &w, l.bottom(), &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn actualize_rejects_f_with_diamond_p_false() {
        let l = product(&[&b2(), &mo(2)]);
        let ext = modal_extension(&l).unwrap();
        let w = block_with(&l, "(0,a)");
        let f = possibility_space(&ext).unwrap().hom(l.element("(1,0)").unwrap()).unwrap();
        let p = l.element("(0,a)").unwrap();
        assert_eq!(ext.target.possibility(p), l.element("(0,1)").unwrap());
        assert!(matches!(actualize(&ext, &w, p, &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn born_extension_examples() {
        let l = mo(2);
        let ext = modal_extension(&l).unwrap();
        let w = block_with(&l, "a");
        let f = w.hom(l.element("a").unwrap()).unwrap();
        let star = born_extension(&ext, &w, &f).unwrap();
        assert_eq!(star.domain(), &w);
        assert_eq!(star.selected_atom(), f.selected_atom());

        let p = product(&[&b2(), &mo(2)]);
        let ext = modal_extension(&p).unwrap();
        for w in enumerate_blocks(&p).unwrap() {
            assert!(p.center().unwrap().is_subalgebra_of(&w));
            for f in w.homs() {
                let star = born_extension(&ext, &w, &f).unwrap();
                assert_eq!(star, f);
            }
        }

        let trivial = BlockView::new(&p, [p.bottom(), p.top()]).unwrap();
        let f = trivial.homs().remove(0);
        let star = born_extension(&ext, &trivial, &f).unwrap();
        let center = p.center().unwrap();
        assert_eq!(star.domain(), &center);
        assert_eq!(star.selected_atom(), center.atoms()[0]);
    }

    #[test]
    fn compatible_actualizations() {
        let l = mo(2);
        let ext = modal_extension(&l).unwrap();
        let f = possibility_space(&ext).unwrap().homs().remove(0);
        let r = compatible_actualization(&ext, &f, SearchLimits::default()).unwrap();
        assert!(r.satisfiable());

        let b = b4();
        let ext = modal_extension(&b).unwrap();
        let a = b.element("a").unwrap();
        let f = possibility_space(&ext).unwrap().hom(a).unwrap();
        let r = compatible_actualization(&ext, &f, SearchLimits::default()).unwrap();
        assert_eq!(r.witnesses[0].per_block[0].selected_atom(), a);
    }

    #[test]
    fn equivalence_on_small_lattices() {
        for l in [b4(), mo(2), mo(3), product(&[&b2(), &mo(2)])] {
            let ext = modal_extension(&l).unwrap();
            let r = check_modal_ks_equivalence(&ext, SearchLimits::default()).unwrap();
            assert!(r.has_global_valuation && r.some_f_admits_actualization && r.equivalent);
        }
    }
}

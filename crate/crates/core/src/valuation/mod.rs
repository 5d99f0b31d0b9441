//! Blocks, two-valued homomorphisms, global valuations, and the
//! actualization constructions built on them.

mod actualization;
mod boolean;
mod ks;
mod search;

pub use actualization::{
    actualize, born_extension, check_modal_ks_equivalence, compatible_actualization, joined_algebra,
    Actualization, EquivalenceReport, PossibilityHomResult,
};
pub use boolean::{
    boolean_homs, closure, extend_to_maximal, generated_filter, generated_sublattice, is_greechie_set,
    BlockView, FilterView, Sublattice, TwoValuedHom,
};
pub use ks::{ks_hypergraph_check, parity_certificate, search_assignments, KsReport, ParityCertificate};
pub use search::{
    find_global_valuation, replay_certificate, search_blocks, GlobalValuation, SearchLimits, SearchMode,
    SearchReport, UnsatCertificate, DEFAULT_MAX_NODES,
};

use crate::clique::Graph;
use crate::error::{internal, Result};
use crate::lattice::FiniteOrtholattice;

/// All maximal Boolean subalgebras, as maximal cliques of the commutation
/// graph, in lexicographic order of their sorted members.
pub fn enumerate_blocks(l: &FiniteOrtholattice) -> Result<Vec<BlockView>> {
    let g = Graph::from_fn(l.len(), |a, b| l.commutes(a, b));
    g.maximal_cliques()
        .into_iter()
        .map(|clique| {
            BlockView::new(l, clique.iter().copied()).map_err(|e| {
                internal(format!("maximal commuting set {:?} is not a Boolean block: {e}", clique))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::*;
    use crate::lattice::product;

    #[test]
    fn blocks_of_small_lattices() {
        let b4 = b4();
        let blocks = enumerate_blocks(&b4).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].len(), 4);

        let l = mo(2);
        let blocks = enumerate_blocks(&l).unwrap();
        let names: Vec<Vec<String>> = blocks.iter().map(|b| b.member_names(&l)).collect();
        assert_eq!(names, vec![vec!["0", "a", "a'", "1"], vec!["0", "b", "b'", "1"]]);

        let p = product(&[&b2(), &mo(2)]);
        let blocks = enumerate_blocks(&p).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.len() == 8));
    }
}

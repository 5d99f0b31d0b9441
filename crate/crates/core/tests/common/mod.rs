#![allow(dead_code)]

use std::path::PathBuf;

use omlab_core::greechie::{contexts_from_rays, paste_to_lattice, ContextHypergraph, GreechieDiagram, Input};
use omlab_core::lattice::{FiniteOrtholattice, RawOrtholattice};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn raw(name: &str) -> RawOrtholattice {
    match Input::from_path(&data(name)).unwrap() {
        Input::Lattice(raw) => raw,
        other => panic!("{name} is not a lattice table: {other:?}"),
    }
}

pub fn diagram(name: &str) -> GreechieDiagram {
    match Input::from_path(&data(name)).unwrap() {
        Input::Diagram(d) => d,
        other => panic!("{name} is not a diagram: {other:?}"),
    }
}

pub fn hypergraph(name: &str) -> ContextHypergraph {
    match Input::from_path(&data(name)).unwrap() {
        Input::Rays(r) => contexts_from_rays(&r).unwrap().0,
        Input::Diagram(d) => d.to_hypergraph(),
        other => panic!("{name} has no hypergraph: {other:?}"),
    }
}

/// Lattice from a `.json` table or a `.gdl` diagram.
pub fn lattice(name: &str) -> FiniteOrtholattice {
    match Input::from_path(&data(name)).unwrap() {
        Input::Lattice(raw) => FiniteOrtholattice::new(&raw).unwrap(),
        Input::Diagram(d) => paste_to_lattice(&d).unwrap(),
        Input::Rays(_) => panic!("{name} is a ray set"),
    }
}

/// Every valid orthomodular lattice in the corpus.
pub const VALID: [&str; 9] = [
    "boolean-2.json",
    "boolean-4.json",
    "boolean-8.json",
    "mo2.json",
    "product-b2-mo2.json",
    "mo2.gdl",
    "mo3.gdl",
    "two-triangles.gdl",
    "stateless-36.gdl",
];

pub const DIAGRAMS: [&str; 4] = ["mo2.gdl", "mo3.gdl", "two-triangles.gdl", "stateless-36.gdl"];

pub const HYPERGRAPHS: [&str; 6] =
    ["cabello18.rays", "stateless-49.rays", "mo2.gdl", "mo3.gdl", "two-triangles.gdl", "stateless-36.gdl"];

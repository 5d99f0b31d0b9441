//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock bound. Exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use omlab_core::greechie::{diagram_to_dot, hypergraph_to_dot, lattice_to_dot, lattice_to_json, paste_to_lattice};
use omlab_core::lattice::{
    central_decomposition, find_isomorphism, validate_structure, Axiom, FiniteOrtholattice, LatticeTable,
    ValidationOptions,
};
use omlab_core::modal::{canonical_box, modal_extension, possibility_space, verify_modal_axioms, ModalAlgebra};
use omlab_core::valuation::{
    actualize, born_extension, check_modal_ks_equivalence, enumerate_blocks, find_global_valuation,
    ks_hypergraph_check, parity_certificate, replay_certificate, search_assignments, SearchLimits, SearchMode,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const ONE_SECOND: Duration = Duration::from_secs(1);
const TEN_SECONDS: Duration = Duration::from_secs(10);
const ONE_MINUTE: Duration = Duration::from_secs(60);

fn structure_validation() -> Check {
    for name in ["boolean-4.json", "mo2.json", "mo2.gdl", "mo3.gdl", "two-triangles.gdl", "product-b2-mo2.json"] {
        let l = lattice(name);
        ensure!(l.len() >= 4, "{name}: unexpected size {}", l.len());
    }
    let report = validate_structure(&raw("o6.json"), &ValidationOptions::default());
    ensure!(!report.passed(), "O6 passed validation");
    let om = report.failure(Axiom::Orthomodular).ok_or("O6 has no orthomodular-law failure")?;
    ensure!(om.witnesses.iter().any(|w| w == &["x", "y"]), "O6 witnesses {:?} lack (x, y)", om.witnesses);
    Ok(())
}

fn modal_axioms() -> Check {
    for name in VALID {
        let l = lattice(name);
        let report = verify_modal_axioms(&l, &canonical_box(&l).map_err(|e| e.to_string())?, 32)
            .map_err(|e| e.to_string())?;
        ensure!(report.passed(), "{name}: canonical box fails {:?}", report);
    }
    let l = lattice("mo2.json");
    let identity: Vec<usize> = l.elements().collect();
    let report = verify_modal_axioms(&l, &identity, 32).map_err(|e| e.to_string())?;
    let s5 = report.get("S5").ok_or("no S5 entry")?;
    ensure!(!s5.pass, "identity box passes S5 on MO2");
    ensure!(s5.witnesses.iter().any(|w| w == &["b", "a"]), "S5 witnesses {:?} lack (b, a)", s5.witnesses);
    Ok(())
}

fn modal_duality() -> Check {
    for name in VALID {
        let l = lattice(name);
        let m = ModalAlgebra::canonical(l.clone()).map_err(|e| e.to_string())?;
        let center = l.central_elements();
        for a in l.elements() {
            let above: Vec<usize> = center.iter().copied().filter(|&z| l.leq(a, z)).collect();
            let below: Vec<usize> = center.iter().copied().filter(|&z| l.leq(z, a)).collect();
            let min_above = above.iter().copied().find(|&z| above.iter().all(|&w| l.leq(z, w)));
            let max_below = below.iter().copied().find(|&z| below.iter().all(|&w| l.leq(w, z)));
            ensure!(min_above == Some(m.possibility(a)), "{name}: ◇{} is not the least central above", l.name(a));
            ensure!(max_below == Some(m.necessity(a)), "{name}: □{} is not the greatest central below", l.name(a));
            ensure!(m.possibility(a) == l.ortho(m.necessity(l.ortho(a))), "{name}: ◇ ≠ ¬□¬ at {}", l.name(a));
            m.diamond(a).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(())
}

fn global_valuation_counts() -> Check {
    for (name, expected) in [("boolean-4.json", 2), ("mo2.json", 4), ("mo2.gdl", 4), ("mo3.gdl", 8)] {
        let l = lattice(name);
        let r = find_global_valuation(&l, SearchMode::Enumerate { cap: 10_000 }, SearchLimits::default())
            .map_err(|e| e.to_string())?;
        ensure!(r.exhausted && r.count == expected, "{name}: {} valuations, expected {expected}", r.count);
        for v in &r.witnesses {
            v.verify(&l).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(())
}

fn ks_hypergraph() -> Check {
    let h = hypergraph("cabello18.rays");
    ensure!(h.outcomes().len() == 18 && h.contexts().len() == 9, "unexpected shape");
    let fast = ks_hypergraph_check(&h, SearchMode::First, SearchLimits::default()).map_err(|e| e.to_string())?;
    ensure!(fast.parity.is_some() && !fast.satisfiable(), "parity fast path did not fire");
    let full = search_assignments(&h, SearchMode::First, SearchLimits::default()).map_err(|e| e.to_string())?;
    ensure!(full.exhausted && !full.satisfiable(), "exhaustive search disagrees");
    ensure!(full.nodes <= 4u64.pow(9), "{} nodes exceed 4^9", full.nodes);
    ensure!(parity_certificate(&h) == fast.parity, "certificate differs");
    Ok(())
}

fn stateless_lattice() -> Check {
    let l = lattice("stateless-36.gdl");
    let r = find_global_valuation(&l, SearchMode::First, SearchLimits::default()).map_err(|e| e.to_string())?;
    ensure!(!r.satisfiable(), "stateless lattice has a global valuation");
    let cert = r.certificate().ok_or("no UNSAT certificate")?;
    ensure!(replay_certificate(&l, &cert).map_err(|e| e.to_string())?, "certificate does not replay");
    Ok(())
}

fn actualization() -> Check {
    for name in VALID {
        let l = lattice(name);
        let ext = modal_extension(&l).map_err(|e| e.to_string())?;
        let space = possibility_space(&ext).map_err(|e| e.to_string())?;
        for w in enumerate_blocks(&l).map_err(|e| e.to_string())? {
            for &p in w.members().iter().filter(|&&p| p != l.bottom()) {
                let dp = ext.target.possibility(ext.embed(p));
                for f in space.homs().iter().filter(|f| f.value(dp) == Some(true)) {
                    let act = actualize(&ext, &w, p, f).map_err(|e| format!("{name}: {e}"))?;
                    ensure!(act.f_p.value(p) == Some(true), "{name}: f_p({}) = 0", l.name(p));
                    ensure!(
                        w.members().iter().all(|&x| act.g.value(ext.embed(x)) == act.f_p.value(x)),
                        "{name}: g|W ≠ f_p"
                    );
                    ensure!(space.members().iter().all(|&x| act.g.value(x) == f.value(x)), "{name}: g|◇L ≠ f");
                }
            }
        }
    }
    Ok(())
}

fn born_extensions() -> Check {
    for name in VALID {
        let l = lattice(name);
        let ext = modal_extension(&l).map_err(|e| e.to_string())?;
        for w in enumerate_blocks(&l).map_err(|e| e.to_string())? {
            for f in w.homs() {
                let star = born_extension(&ext, &w, &f).map_err(|e| format!("{name}: {e}"))?;
                ensure!(
                    w.members().iter().all(|&x| star.value(ext.embed(x)) == f.value(x)),
                    "{name}: f*|W ≠ f"
                );
            }
        }
    }
    Ok(())
}

fn modal_ks_equivalence() -> Check {
    for name in VALID {
        let l = lattice(name);
        let ext = modal_extension(&l).map_err(|e| e.to_string())?;
        let r = check_modal_ks_equivalence(&ext, SearchLimits::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.equivalent, "{name}: not equivalent");
        let expected = name != "stateless-36.gdl";
        ensure!(
            r.has_global_valuation == expected && r.some_f_admits_actualization == expected,
            "{name}: sides ({}, {}), expected {expected}",
            r.has_global_valuation,
            r.some_f_admits_actualization
        );
    }
    Ok(())
}

fn central_decomposition_of_product() -> Check {
    let l = lattice("product-b2-mo2.json");
    let d = central_decomposition(&l).map_err(|e| e.to_string())?;
    ensure!(d.factors.len() == 2, "{} factors", d.factors.len());
    ensure!(find_isomorphism(&d.factors[0], &lattice("boolean-2.json")).is_some(), "first factor is not B2");
    ensure!(find_isomorphism(&d.factors[1], &lattice("mo2.json")).is_some(), "second factor is not MO2");
    for f in &d.factors {
        ensure!(f.central_elements().len() == 2, "factor has non-trivial center");
    }
    let (p, iso) = (&d.product, &d.isomorphism);
    ensure!(p.len() == l.len(), "product has {} elements", p.len());
    for x in l.elements() {
        ensure!(iso[l.ortho(x)] == p.ortho(iso[x]), "¬ table differs");
        for y in l.elements() {
            ensure!(l.leq(x, y) == p.leq(iso[x], iso[y]), "order table differs");
            ensure!(iso[l.meet(x, y)] == p.meet(iso[x], iso[y]), "meet table differs");
            ensure!(iso[l.join(x, y)] == p.join(iso[x], iso[y]), "join table differs");
        }
    }
    Ok(())
}

/// Minimal DOT grammar check for the subset this crate emits: a header,
/// one statement per line ending in `;`, and a closing brace. Node ids are
/// quoted strings or identifiers, optionally followed by an attribute list.
fn dot_is_well_formed(dot: &str) -> bool {
    fn id(s: &str) -> Option<&str> {
        if let Some(rest) = s.strip_prefix('"') {
            let mut escaped = false;
            for (i, c) in rest.char_indices() {
                match c {
                    _ if escaped => escaped = false,
                    '\\' => escaped = true,
                    '"' => return Some(&rest[i + 1..]),
                    _ => {}
                }
            }
            None
        } else {
            let end = s.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(s.len());
            (end > 0).then(|| &s[end..])
        }
    }
    fn attrs(s: &str) -> bool {
        let Some(inner) = s.strip_prefix(" [").and_then(|r| r.strip_suffix(']')) else { return s.is_empty() };
        inner.split(", ").all(|kv| kv.split_once('=').is_some_and(|(k, v)| id(k) == Some("") && id(v) == Some("")))
    }
    let mut lines = dot.lines();
    let Some(header) = lines.next() else { return false };
    let edge = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["digraph", name, "{"] if id(name) == Some("") => " -> ",
        ["graph", name, "{"] if id(name) == Some("") => " -- ",
        _ => return false,
    };
    let body: Vec<&str> = lines.collect();
    if body.last() != Some(&"}") || !dot.ends_with("}\n") {
        return false;
    }
    body[..body.len() - 1].iter().all(|line| {
        let Some(stmt) = line.strip_prefix("  ").and_then(|l| l.strip_suffix(';')) else { return false };
        if stmt.starts_with("rankdir=") {
            return true;
        }
        match id(stmt) {
            Some(rest) if rest.starts_with(edge) => id(&rest[edge.len()..]).is_some_and(attrs),
            Some(rest) => attrs(rest),
            None => false,
        }
    })
}

fn round_trips() -> Check {
    ensure!(!dot_is_well_formed("digraph g {\n  \"a -> \"b\";\n}\n"), "DOT checker accepts an unterminated id");
    ensure!(!dot_is_well_formed("digraph g {\n  a -- b;\n}\n"), "DOT checker accepts an undirected edge in a digraph");
    for name in DIAGRAMS {
        let l = lattice(name);
        let json = lattice_to_json(&l).map_err(|e| e.to_string())?;
        let table = LatticeTable::from_json(&json).map_err(|e| e.to_string())?;
        let report = validate_structure(&table.to_raw().map_err(|e| e.to_string())?, &ValidationOptions::default());
        ensure!(report.passed(), "{name}: verdict changed after round trip");
        let back: FiniteOrtholattice = report.into_lattice().map_err(|e| e.to_string())?;
        ensure!(back == l, "{name}: structure changed after round trip");
        ensure!(lattice_to_json(&back).map_err(|e| e.to_string())? == json, "{name}: JSON not stable");

        let dot = lattice_to_dot(&l);
        ensure!(dot == lattice_to_dot(&paste_to_lattice(&diagram(name)).map_err(|e| e.to_string())?), "{name}: DOT not byte-stable");
        ensure!(dot_is_well_formed(&dot), "{name}: malformed Hasse DOT");
        ensure!(dot_is_well_formed(&diagram_to_dot(&diagram(name))), "{name}: malformed diagram DOT");
        ensure!(dot_is_well_formed(&hypergraph_to_dot(&diagram(name).to_hypergraph())), "{name}: malformed DOT");
    }
    let o6 = LatticeTable::from_json(&std::fs::read_to_string(data("o6.json")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let again = LatticeTable::from_json(&o6.to_json()).map_err(|e| e.to_string())?;
    ensure!(
        !validate_structure(&again.to_raw().map_err(|e| e.to_string())?, &ValidationOptions::default()).passed(),
        "O6 verdict changed after round trip"
    );
    Ok(())
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("structure validation", ONE_SECOND, structure_validation),
        ("modal axioms S1-S7", ONE_SECOND, modal_axioms),
        ("necessity/possibility duality", ONE_SECOND, modal_duality),
        ("global valuation counts", ONE_SECOND, global_valuation_counts),
        ("KS hypergraph UNSAT with parity", ONE_SECOND, ks_hypergraph),
        ("stateless OML has no global valuation", ONE_MINUTE, stateless_lattice),
        ("actualization", TEN_SECONDS, actualization),
        ("Born extension", TEN_SECONDS, born_extensions),
        ("valuation/actualization equivalence", ONE_MINUTE, modal_ks_equivalence),
        ("central decomposition", ONE_SECOND, central_decomposition_of_product),
        ("round trips", ONE_SECOND, round_trips),
    ];
    let mut failed = 0;
    for (i, (label, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= *limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("PASS {:>2} {label} ({:.1} ms, limit {limit:?})", i + 1, elapsed.as_secs_f64() * 1e3),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {label}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

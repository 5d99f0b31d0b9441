use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use super::ContextHypergraph;
use crate::clique::Graph;
use crate::error::{Error, Result};

/// Named rays with exact rational coordinates.
///
/// Each ray is stored as its primitive integer direction: scaled to clear
/// denominators, divided by the gcd, and signed so the first non-zero
/// coordinate is positive. Two rays are parallel iff these coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySet {
    dimension: usize,
    names: Vec<String>,
    directions: Vec<Vec<i128>>,
}

/// A maximal set of mutually orthogonal rays smaller than the dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteContext {
    pub rays: Vec<String>,
    pub dimension: usize,
}

impl fmt::Display for IncompleteContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "incomplete context {{{}}} ({} of {} rays)",
            self.rays.join(", "),
            self.rays.len(),
            self.dimension
        )
    }
}

/// `(numerator, denominator)` with a positive denominator.
type Rational = (i128, i128);

fn overflow() -> Error {
    Error::Input("ray coordinates overflow 128-bit arithmetic".into())
}

fn primitive(coords: &[Rational]) -> Result<Vec<i128>> {
    let lcm = coords.iter().fold(1i128, |acc, &(_, q)| acc.lcm(&q));
    let mut v = coords
        .iter()
        .map(|&(p, q)| p.checked_mul(lcm / q).ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g == 0 {
        return Err(Error::Input("zero vector is not a ray".into()));
    }
    let sign = if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
    for x in &mut v {
        *x = *x / g * sign;
    }
    Ok(v)
}

impl RaySet {
    /// Rays given as rational `(numerator, denominator)` coordinates.
    pub fn new(dimension: usize, rays: Vec<(String, Vec<(i128, i128)>)>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Input(format!("dimension {dimension} is below 2")));
        }
        let mut set = Self { dimension, names: Vec::new(), directions: Vec::new() };
        let mut by_direction: HashMap<Vec<i128>, usize> = HashMap::new();
        for (name, coords) in rays {
            if coords.len() != dimension {
                return Err(Error::Input(format!(
                    "ray `{name}` has {} coordinates, expected {dimension}",
                    coords.len()
                )));
            }
            if coords.iter().any(|&(_, q)| q == 0) {
                return Err(Error::Input(format!("ray `{name}` has a zero denominator")));
            }
            let coords: Vec<Rational> = coords.into_iter().map(|(p, q)| if q < 0 { (-p, -q) } else { (p, q) }).collect();
            if set.names.contains(&name) {
                return Err(Error::Input(format!("duplicate ray name `{name}`")));
            }
            let dir = primitive(&coords).map_err(|e| match e {
                Error::Input(m) => Error::Input(format!("ray `{name}`: {m}")),
                other => other,
            })?;
            if let Some(&k) = by_direction.get(&dir) {
                return Err(Error::Input(format!("ray `{name}` is parallel to `{}`", set.names[k])));
            }
            by_direction.insert(dir.clone(), set.names.len());
            set.names.push(name);
            set.directions.push(dir);
        }
        Ok(set)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Primitive integer direction of ray `i`.
    pub fn direction(&self, i: usize) -> &[i128] {
        &self.directions[i]
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> Result<bool> {
        let mut dot = 0i128;
        for (a, b) in self.directions[i].iter().zip(&self.directions[j]) {
            dot = a.checked_mul(*b).and_then(|p| dot.checked_add(p)).ok_or_else(overflow)?;
        }
        Ok(dot == 0)
    }
}

fn parse_component(token: &str) -> Option<Rational> {
    match token.split_once('/') {
        Some((p, q)) => Some((p.parse().ok()?, q.parse().ok()?)),
        None => Some((token.parse().ok()?, 1)),
    }
}

/// Parses `dim: N` followed by `ray NAME: c1 ... cN` lines, where each
/// coordinate is an integer or `p/q`. Blank lines and `#` comments are
/// skipped.
pub fn parse_rays(text: &str) -> Result<RaySet> {
    let mut dimension = None;
    let mut rays = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let Some(dim) = dimension else {
            let n = trimmed
                .strip_prefix("dim:")
                .ok_or_else(|| err(format!("expected `dim: N`, found `{trimmed}`")))?;
            let n: usize = n.trim().parse().map_err(|_| err(format!("invalid dimension `{}`", n.trim())))?;
            if n < 2 {
                return Err(Error::Input(format!("dimension {n} is below 2")));
            }
            dimension = Some(n);
            continue;
        };
        let rest = trimmed
            .strip_prefix("ray ")
            .ok_or_else(|| err(format!("expected `ray NAME: ...`, found `{trimmed}`")))?;
        let (name, coords) = rest.split_once(':').ok_or_else(|| err("missing `:` after ray name".into()))?;
        let name = name.trim();
        if !super::is_atom_name(name) {
            return Err(err(format!("invalid ray name `{name}`")));
        }
        let coords = coords
            .split_whitespace()
            .map(|t| parse_component(t).ok_or_else(|| err(format!("invalid coordinate `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != dim {
            return Err(err(format!("{} coordinates, expected {dim}", coords.len())));
        }
        if coords.iter().any(|&(_, q)| q == 0) {
            return Err(err("zero denominator".into()));
        }
        rays.push((name.to_owned(), coords));
    }
    let dimension = dimension.ok_or_else(|| Error::Input("missing `dim:` line".into()))?;
    RaySet::new(dimension, rays)
}

/// Contexts are the maximal sets of mutually orthogonal rays of size equal
/// to the dimension. Smaller maximal sets are returned as warnings and never
/// become contexts. Only rays lying in some context become outcomes.
pub fn contexts_from_rays(r: &RaySet) -> Result<(ContextHypergraph, Vec<IncompleteContext>)> {
    let n = r.len();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if r.orthogonal(i, j)? {
                g.add_edge(i, j);
            }
        }
    }
    let mut contexts = Vec::new();
    let mut warnings = Vec::new();
    for clique in g.maximal_cliques() {
        if clique.len() == r.dimension() {
            contexts.push(clique);
        } else {
            warnings.push(IncompleteContext {
                rays: clique.iter().map(|&i| r.names[i].clone()).collect(),
                dimension: r.dimension(),
            });
        }
    }
    let mut used: Vec<usize> = contexts.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let renumber: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let outcomes = used.iter().map(|&i| r.names[i].clone()).collect();
    let contexts = contexts.into_iter().map(|c| c.iter().map(|i| renumber[i]).collect()).collect();
    Ok((ContextHypergraph::new(outcomes, contexts)?, warnings))
}

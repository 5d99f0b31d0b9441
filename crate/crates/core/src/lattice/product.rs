use super::FiniteOrtholattice;

/// Direct product of finitely many lattices.
///
/// Element `(x₁, …, x_k)` sits at the mixed-radix index with the first
/// factor most significant. The bottom and top are named `"0"` and `"1"`,
/// every other element `"(x₁,…,x_k)"`.
pub fn product(factors: &[&FiniteOrtholattice]) -> FiniteOrtholattice {
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let n: usize = sizes.iter().product();
    let tuples: Vec<Vec<usize>> = (0..n)
        .map(|mut idx| {
            let mut t = vec![0; factors.len()];
            for k in (0..factors.len()).rev() {
                t[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            t
        })
        .collect();
    let encode = |t: &[usize]| t.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x);

    let bottom = encode(&factors.iter().map(|f| f.bottom()).collect::<Vec<_>>());
    let top = encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
    let names = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if i == bottom {
                "0".to_string()
            } else if i == top {
                "1".to_string()
            } else {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, f)| f.name(x)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();

    let mut leq = vec![false; n * n];
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    let mut buf = vec![0; factors.len()];
    for a in 0..n {
        for b in 0..n {
            let (ta, tb) = (&tuples[a], &tuples[b]);
            leq[a * n + b] = factors.iter().enumerate().all(|(k, f)| f.leq(ta[k], tb[k]));
            for (k, f) in factors.iter().enumerate() {
                buf[k] = f.meet(ta[k], tb[k]);
            }
            meet[a * n + b] = encode(&buf);
            for (k, f) in factors.iter().enumerate() {
                buf[k] = f.join(ta[k], tb[k]);
            }
            join[a * n + b] = encode(&buf);
        }
    }
    let ortho = tuples
        .iter()
        .map(|t| encode(&t.iter().zip(factors).map(|(&x, f)| f.ortho(x)).collect::<Vec<_>>()))
        .collect();
    FiniteOrtholattice::from_parts(names, leq, ortho, meet, join, bottom, top)
}

/// Searches for an order- and orthocomplement-preserving bijection `a → b`.
///
/// Backtracking with up/down-set size invariants; intended for lattices of
/// at most a few hundred elements.
pub fn find_isomorphism(a: &FiniteOrtholattice, b: &FiniteOrtholattice) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let signature = |l: &FiniteOrtholattice, x: usize| {
        let below = l.elements().filter(|&y| l.leq(y, x)).count();
        let above = l.elements().filter(|&y| l.leq(x, y)).count();
        (below, above)
    };
    let sig_a: Vec<_> = a.elements().map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = b.elements().map(|x| signature(b, x)).collect();
    let mut ms = sig_a.clone();
    let mut ns = sig_b.clone();
    ms.sort_unstable();
    ns.sort_unstable();
    if ms != ns {
        return None;
    }

    let mut order: Vec<usize> = a.elements().collect();
    order.sort_by_key(|&x| (sig_a[x].0, x));

    struct Search<'s> {
        a: &'s FiniteOrtholattice,
        b: &'s FiniteOrtholattice,
        sig_a: &'s [(usize, usize)],
        sig_b: &'s [(usize, usize)],
        order: &'s [usize],
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn consistent(&self, x: usize, y: usize) -> bool {
            if self.sig_a[x] != self.sig_b[y] || self.used[y] {
                return false;
            }
            self.a.elements().all(|x2| match self.map[x2] {
                Some(y2) => self.a.leq(x, x2) == self.b.leq(y, y2) && self.a.leq(x2, x) == self.b.leq(y2, y),
                None => true,
            })
        }

        fn assign(&mut self, x: usize, y: usize) {
            self.map[x] = Some(y);
            self.used[y] = true;
        }

        fn unassign(&mut self, x: usize) {
            if let Some(y) = self.map[x].take() {
                self.used[y] = false;
            }
        }

        fn run(&mut self, k: usize) -> bool {
            let Some(&x) = self.order.get(k) else { return true };
            if self.map[x].is_some() {
                return self.run(k + 1);
            }
            let ox = self.a.ortho(x);
            for y in self.b.elements() {
                if !self.consistent(x, y) {
                    continue;
                }
                self.assign(x, y);
                let oy = self.b.ortho(y);
                let mut placed_partner = false;
                let ortho_ok = if ox == x {
                    oy == y
                } else {
                    match self.map[ox] {
                        Some(m) => m == oy,
                        None if self.consistent(ox, oy) => {
                            self.assign(ox, oy);
                            placed_partner = true;
                            true
                        }
                        None => false,
                    }
                };
                if ortho_ok && self.run(k + 1) {
                    return true;
                }
                if placed_partner {
                    self.unassign(ox);
                }
                self.unassign(x);
            }
            false
        }
    }

    let mut search = Search {
        a,
        b,
        sig_a: &sig_a,
        sig_b: &sig_b,
        order: &order,
        map: vec![None; n],
        used: vec![false; n],
    };
    search.run(0).then(|| search.map.into_iter().map(|m| m.unwrap()).collect())
}

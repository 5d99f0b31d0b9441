//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting) over a
//! dense adjacency bitset.

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, adj: vec![0; n * words] }
    }

    pub fn from_fn(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = Self::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if edge(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a * self.words + b / 64] |= 1 << (b % 64);
            self.adj[b * self.words + a / 64] |= 1 << (a % 64);
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Every maximal clique, each sorted ascending, the list sorted
    /// lexicographically.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut p = vec![0u64; self.words];
        for v in 0..self.n {
            p[v / 64] |= 1 << (v % 64);
        }
        let x = vec![0u64; self.words];
        let mut r = Vec::new();
        self.expand(&mut r, p, x, &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: Vec<u64>, mut x: Vec<u64>, out: &mut Vec<Vec<usize>>) {
        if p.iter().all(|&w| w == 0) {
            if x.iter().all(|&w| w == 0) {
                out.push(r.clone());
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)| over u ∈ P ∪ X
        let pivot = bits(&p)
            .chain(bits(&x))
            .max_by_key(|&u| p.iter().zip(self.row(u)).map(|(a, b)| (a & b).count_ones()).sum::<u32>())
            .expect("P is non-empty");
        let candidates: Vec<usize> = bits(&p).filter(|&v| !self.has_edge(pivot, v)).collect();
        for v in candidates {
            let nv = self.row(v);
            let p2 = p.iter().zip(nv).map(|(a, b)| a & b).collect();
            let x2 = x.iter().zip(nv).map(|(a, b)| a & b).collect();
            r.push(v);
            self.expand(r, p2, x2, out);
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }
}

fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

//! Brute-force reference implementations, written against plain index
//! graphs so they share no code with the crate.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use vis_enrich::vis::VisRecord;
use vis_enrich::vocab::{Color, Spatial, Texture};

/// Random DAG where every parent index is lower than its child index.
#[derive(Debug, Clone)]
pub struct Dag {
    pub parents: Vec<Vec<usize>>,
}

impl Dag {
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Dag {
        let mut parents = Vec::with_capacity(n);
        for i in 0..n {
            let mut ps = Vec::new();
            if i > 0 && !rng.gen_bool(0.15) {
                let k = if rng.gen_bool(0.3) { 2 } else { 1 };
                for _ in 0..k {
                    let p = rng.gen_range(0..i);
                    if !ps.contains(&p) {
                        ps.push(p);
                    }
                }
            }
            parents.push(ps);
        }
        Dag { parents }
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn name(i: usize) -> String {
        format!("k{i:02}")
    }

    pub fn taxonomy(&self) -> String {
        let mut out = String::new();
        for (i, ps) in self.parents.iter().enumerate() {
            let ps: Vec<String> = ps.iter().map(|p| Dag::name(*p)).collect();
            out.push_str(&format!("{}\t{}\t\n", Dag::name(i), ps.join(",")));
        }
        out
    }

    /// Shortest upward distance from `i` to every node, `None` when not an ancestor.
    pub fn up(&self, i: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[i] = Some(0);
        let mut queue = VecDeque::from([i]);
        while let Some(cur) = queue.pop_front() {
            for &p in &self.parents[cur] {
                if dist[p].is_none() {
                    dist[p] = Some(dist[cur].unwrap() + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    /// Undirected shortest path length between two nodes.
    pub fn undirected(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for (c, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                adj[c].push(p);
                adj[p].push(c);
            }
        }
        let mut dist = vec![None; n];
        dist[a] = Some(0);
        let mut queue = VecDeque::from([a]);
        while let Some(cur) = queue.pop_front() {
            for &m in &adj[cur] {
                if dist[m].is_none() {
                    dist[m] = Some(dist[cur].unwrap() + 1);
                    queue.push_back(m);
                }
            }
        }
        dist[b]
    }

    /// Longest root-to-node chain over the whole graph.
    pub fn longest(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        for i in 0..self.len() {
            for &p in &self.parents[i] {
                depth[i] = depth[i].max(depth[p] + 1);
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Membership of `c` given source `s` with value `v`.
    pub fn membership(&self, c: usize, s: usize, v: f64) -> f64 {
        if self.up(s)[c].is_some() {
            return v;
        }
        match self.up(c)[s] {
            Some(d) => {
                let norm = d as f64 / self.longest() as f64;
                if v + norm > 1.0 {
                    1.0
                } else {
                    v + norm
                }
            }
            None => 0.0,
        }
    }
}

pub fn s_max(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn s_psum(a: f64, b: f64) -> f64 {
    a + b - a * b
}

pub fn s_bsum(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s > 1.0 {
        1.0
    } else {
        s
    }
}

/// `(vis, cx, tot)` for concept `c`, folding each side from 0 in order.
pub fn mu_row(
    dag: &Dag,
    c: usize,
    vis: &[(usize, f64)],
    cx: &[(usize, f64)],
    s: fn(f64, f64) -> f64,
) -> (f64, f64, f64) {
    let mut acc_vis = 0.0;
    for &(src, v) in vis {
        acc_vis = s(acc_vis, dag.membership(c, src, v));
    }
    let mut acc_cx = 0.0;
    for &(src, v) in cx {
        acc_cx = s(acc_cx, dag.membership(c, src, v));
    }
    (acc_vis, acc_cx, s(acc_vis, acc_cx))
}

/// Per-column winner by full enumeration: every row within `tol` of the
/// column maximum competes, highest head impact first, then lowest index.
pub fn argmax_columns(values: &[Vec<f64>], imps: &[f64], floor: f64, tol: f64) -> Vec<(usize, usize)> {
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 0..cols {
        let mut max = f64::NEG_INFINITY;
        for row in values {
            if row[k] > max {
                max = row[k];
            }
        }
        let mut winner: Option<usize> = None;
        for i in 0..rows {
            if values[i][k] < max - tol {
                continue;
            }
            winner = match winner {
                None => Some(i),
                Some(w) if imps[i] > imps[w] => Some(i),
                keep => keep,
            };
        }
        if let Some(w) = winner {
            if values[w][k] >= floor {
                out.push((w, k));
            }
        }
    }
    out
}

/// A valid VIS document of `n` records with spatial links among themselves.
pub fn random_vis_doc<R: Rng>(rng: &mut R, n: usize, concepts: &[&str]) -> Vec<VisRecord> {
    let ids: Vec<String> = (0..n).map(|i| format!("vo{i}")).collect();
    let mut out = Vec::new();
    for id in &ids {
        let mut rec = VisRecord::new(id.as_str(), *concepts.choose(rng).unwrap(), rng.gen_range(0.0..=1.0));
        let mut left = 1.0f64;
        let k = rng.gen_range(0..4);
        let colors: Vec<Color> = Color::ALL.choose_multiple(rng, k).copied().collect();
        for c in colors {
            let w = rng.gen_range(0.0..=left);
            left -= w;
            rec = rec.color(c, w);
        }
        let k = rng.gen_range(0..3);
        let textures: Vec<Texture> = Texture::ALL.choose_multiple(rng, k).copied().collect();
        for t in textures {
            let w = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(0.0..=1.0) };
            rec = rec.texture(t, w);
        }
        for _ in 0..rng.gen_range(0..3) {
            rec = rec.link(*Spatial::ALL.choose(rng).unwrap(), ids.choose(rng).unwrap().as_str());
        }
        out.push(rec);
    }
    out
}

/// Index graph of a lattice, with ids in topological order.
pub fn dag_of(lattice: &vis_enrich::lattice::SemanticLattice) -> (Dag, Vec<String>) {
    let text = lattice.to_taxonomy();
    let mut ids: Vec<String> = Vec::new();
    let mut parents = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut f = line.split('\t');
        ids.push(f.next().unwrap().to_owned());
        let ps = f.next().unwrap_or_default();
        parents.push(
            ps.split(',')
                .filter(|p| !p.is_empty())
                .map(|p| ids.iter().position(|x| x == p).expect("parents come first"))
                .collect(),
        );
    }
    (Dag { parents }, ids)
}

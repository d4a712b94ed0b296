//! The configuration model: clone pairings, multigraph views, spin
//! configurations with cached energy, switches, and neighborhoods.
//!
//! A d-regular multigraph on n vertices is stored as a perfect matching
//! `mate` on the d·n clones; clone `c` belongs to vertex `c / d`. Loops and
//! parallel edges are kept throughout; a loop is a matched pair of clones of
//! the same vertex and counts as one (always monochromatic) edge of degree
//! two.

use std::fmt::Write as _;

use crate::rng::CounterRng;
use crate::{Error, Result};

/// A perfect matching on d·n clones, i.e. a d-regular multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    n: usize,
    d: usize,
    mate: Vec<u32>,
}

impl Pairing {
    /// Build from an explicit involution; validates shape.
    pub fn from_mates(n: usize, d: usize, mate: Vec<u32>) -> Result<Self> {
        let clones = n * d;
        if clones % 2 != 0 {
            return Err(Error::invalid_parameter(format!(
                "dn = {clones} is odd; no perfect matching exists"
            )));
        }
        if mate.len() != clones {
            return Err(Error::invalid_parameter(format!(
                "mate vector has length {} but dn = {clones}",
                mate.len()
            )));
        }
        for c in 0..clones {
            let m = mate[c] as usize;
            if m >= clones || m == c || mate[m] as usize != c {
                return Err(Error::invalid_parameter(format!(
                    "mate is not a fixed-point-free involution at clone {c}"
                )));
            }
        }
        Ok(Pairing { n, d, mate })
    }

    /// Build a simple-graph realization from a vertex edge list. Each vertex
    /// must appear in exactly d edges (loops count twice).
    pub fn from_edges(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let clones = n * d;
        if edges.len() * 2 != clones {
            return Err(Error::invalid_parameter(format!(
                "{} edges cannot saturate {} clones",
                edges.len(),
                clones
            )));
        }
        let mut next_free = vec![0usize; n];
        let mut mate = vec![u32::MAX; clones];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid_parameter(format!("edge ({u},{v}) out of range")));
            }
            let mut take = |w: usize| -> Result<u32> {
                if next_free[w] >= d {
                    return Err(Error::invalid_parameter(format!("vertex {w} exceeds degree {d}")));
                }
                let c = (w * d + next_free[w]) as u32;
                next_free[w] += 1;
                Ok(c)
            };
            let cu = take(u)?;
            let cv = take(v)?;
            mate[cu as usize] = cv;
            mate[cv as usize] = cu;
        }
        Pairing::from_mates(n, d, mate)
    }

    /// Uniform sample over all (dn−1)!! pairings: repeatedly match the lowest
    /// unmatched clone to a uniformly chosen remaining clone.
    pub fn sample_uniform(n: usize, d: usize, rng: &mut CounterRng) -> Result<Self> {
        let clones = n * d;
        if clones % 2 != 0 {
            return Err(Error::invalid_parameter(format!(
                "dn = {clones} is odd; no perfect matching exists"
            )));
        }
        let mut mate = vec![u32::MAX; clones];
        let mut avail: Vec<u32> = (0..clones as u32).collect();
        let mut pos: Vec<u32> = (0..clones as u32).collect();
        let remove = |avail: &mut Vec<u32>, pos: &mut Vec<u32>, c: u32| {
            let p = pos[c as usize] as usize;
            let last = *avail.last().unwrap();
            avail.swap_remove(p);
            if p < avail.len() {
                pos[last as usize] = p as u32;
            }
        };
        let mut cursor = 0usize;
        while !avail.is_empty() {
            while mate[cursor] != u32::MAX {
                cursor += 1;
            }
            let c = cursor as u32;
            remove(&mut avail, &mut pos, c);
            let j = rng.index(avail.len());
            let p = avail[j];
            remove(&mut avail, &mut pos, p);
            mate[c as usize] = p;
            mate[p as usize] = c;
        }
        Ok(Pairing { n, d, mate })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_clones(&self) -> usize {
        self.n * self.d
    }

    pub fn num_edges(&self) -> usize {
        self.n * self.d / 2
    }

    #[inline]
    pub fn mate(&self, clone: u32) -> u32 {
        self.mate[clone as usize]
    }

    #[inline]
    pub fn vertex_of(&self, clone: u32) -> usize {
        clone as usize / self.d
    }

    /// Clone indices of vertex v.
    pub fn clones_of(&self, v: usize) -> std::ops::Range<u32> {
        (v * self.d) as u32..((v + 1) * self.d) as u32
    }

    /// Edges as clone pairs with the lower clone first, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(c, &m)| (c as u32) < m)
            .map(|(c, &m)| (c as u32, m))
    }

    /// Neighbor vertices of v, one entry per incident half-edge. A loop at v
    /// contributes v twice.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.clones_of(v).map(move |c| self.vertex_of(self.mate(c)))
    }

    /// Compact canonical encoding (the mate vector), usable as a map key.
    pub fn key(&self) -> Vec<u32> {
        self.mate.clone()
    }

    /// Text serialization: header `n d`, then one `c mate(c)` line per edge
    /// with the lower clone first, ascending by clone index.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.d);
        for (c, m) in self.edges() {
            let _ = writeln!(out, "{c} {m}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty pairing text".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let d: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let clones = n * d;
        let mut mate = vec![u32::MAX; clones];
        let mut count = 0usize;
        for line in lines {
            let mut it = line.split_whitespace();
            let c: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let m: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            if c >= clones || m >= clones || c == m {
                return Err(Error::Parse(format!("edge ({c},{m}) out of range")));
            }
            if mate[c] != u32::MAX || mate[m] != u32::MAX {
                return Err(Error::Parse(format!("clone reused in edge ({c},{m})")));
            }
            mate[c] = m as u32;
            mate[m] = c as u32;
            count += 1;
        }
        if count != clones / 2 {
            return Err(Error::Parse(format!("expected {} edges, got {count}", clones / 2)));
        }
        Pairing::from_mates(n, d, mate)
    }
}

/// Count monochromatic edges; loops are always monochromatic.
pub fn count_mono(pairing: &Pairing, spins: &[i8]) -> usize {
    debug_assert_eq!(spins.len(), pairing.n());
    pairing
        .edges()
        .filter(|&(c, m)| spins[pairing.vertex_of(c)] == spins[pairing.vertex_of(m)])
        .count()
}

/// Neighbor spin counts (m₊, m₋) at v over non-loop incident edges, with
/// multiplicity. Loop edges at v are invariant under any update of v's spin,
/// so they contribute equally to both conditional weights and are left out.
pub fn neighbor_counts(pairing: &Pairing, spins: &[i8], v: usize) -> (u32, u32) {
    let mut plus = 0;
    let mut minus = 0;
    for c in pairing.clones_of(v) {
        let w = pairing.vertex_of(pairing.mate(c));
        if w == v {
            continue;
        }
        if spins[w] == 1 {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    (plus, minus)
}

/// Sum of neighbor spins at v over non-loop incident edges: the energy
/// change H(σ with v = +) − H(σ with v = −) of the two completions.
pub fn local_field(pairing: &Pairing, spins: &[i8], v: usize) -> i64 {
    let (p, m) = neighbor_counts(pairing, spins, v);
    p as i64 - m as i64
}

/// A ±1 assignment with cached plus count and monochromatic-edge count for
/// the pairing it was built against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinConfig {
    spins: Vec<i8>,
    k_plus: usize,
    h: usize,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>, pairing: &Pairing) -> Result<Self> {
        if spins.len() != pairing.n() {
            return Err(Error::invalid_parameter(format!(
                "config has {} spins for n = {}",
                spins.len(),
                pairing.n()
            )));
        }
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid_parameter("spins must be ±1"));
        }
        let k_plus = spins.iter().filter(|&&s| s == 1).count();
        let h = count_mono(pairing, &spins);
        Ok(SpinConfig { spins, k_plus, h })
    }

    pub fn all_plus(pairing: &Pairing) -> Self {
        SpinConfig {
            spins: vec![1; pairing.n()],
            k_plus: pairing.n(),
            h: pairing.num_edges(),
        }
    }

    pub fn all_minus(pairing: &Pairing) -> Self {
        SpinConfig {
            spins: vec![-1; pairing.n()],
            k_plus: 0,
            h: pairing.num_edges(),
        }
    }

    /// Uniform configuration with exactly k_plus pluses.
    pub fn uniform_with_k_plus(pairing: &Pairing, k_plus: usize, rng: &mut CounterRng) -> Result<Self> {
        if k_plus > pairing.n() {
            return Err(Error::invalid_parameter(format!(
                "k_plus = {k_plus} exceeds n = {}",
                pairing.n()
            )));
        }
        let mut spins = vec![-1i8; pairing.n()];
        for s in spins.iter_mut().take(k_plus) {
            *s = 1;
        }
        rng.shuffle(&mut spins);
        SpinConfig::new(spins, pairing)
    }

    /// Independent fair spins at each vertex.
    pub fn uniform(pairing: &Pairing, rng: &mut CounterRng) -> Self {
        let spins: Vec<i8> = (0..pairing.n()).map(|_| rng.spin()).collect();
        SpinConfig::new(spins, pairing).expect("uniform spins are valid")
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    #[inline]
    pub fn spin(&self, v: usize) -> i8 {
        self.spins[v]
    }

    pub fn k_plus(&self) -> usize {
        self.k_plus
    }

    /// Cached monochromatic edge count.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn magnetization(&self) -> f64 {
        (2.0 * self.k_plus as f64 - self.spins.len() as f64) / self.spins.len() as f64
    }

    /// Flip vertex v, updating the caches in O(d).
    pub fn flip(&mut self, v: usize, pairing: &Pairing) {
        let (p, m) = neighbor_counts(pairing, &self.spins, v);
        let (same, diff) = if self.spins[v] == 1 { (p, m) } else { (m, p) };
        self.h = self.h - same as usize + diff as usize;
        if self.spins[v] == 1 {
            self.k_plus -= 1;
        } else {
            self.k_plus += 1;
        }
        self.spins[v] = -self.spins[v];
    }

    /// Set vertex v to s (no-op if unchanged).
    pub fn set_spin(&mut self, v: usize, s: i8, pairing: &Pairing) {
        debug_assert!(s == 1 || s == -1);
        if self.spins[v] != s {
            self.flip(v, pairing);
        }
    }

    /// Exchange the (distinct) spins at u and v; k_plus is conserved.
    pub fn swap(&mut self, u: usize, v: usize, pairing: &Pairing) {
        debug_assert_ne!(self.spins[u], self.spins[v]);
        self.flip(u, pairing);
        self.flip(v, pairing);
    }
}

/// Replacement mode for a switch on edges (c1,c2), (c3,c4).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwitchMode {
    /// Rewire to (c1,c4), (c2,c3).
    Cross,
    /// Rewire to (c1,c3), (c2,c4).
    Parallel,
}

/// Two pairing edges and how to rewire them.
#[derive(Clone, Copy, Debug)]
pub struct Switch {
    pub first: (u32, u32),
    pub second: (u32, u32),
    pub mode: SwitchMode,
}

impl Switch {
    /// The switch that undoes this one.
    pub fn inverse(&self) -> Switch {
        let (c1, c2) = self.first;
        let (c3, c4) = self.second;
        match self.mode {
            // cross produced (c1,c4),(c2,c3); crossing (c1,c4),(c3,c2)
            // restores (c1,c2),(c4,c3)
            SwitchMode::Cross => Switch {
                first: (c1, c4),
                second: (c3, c2),
                mode: SwitchMode::Cross,
            },
            SwitchMode::Parallel => Switch {
                first: (c1, c3),
                second: (c2, c4),
                mode: SwitchMode::Parallel,
            },
        }
    }
}

/// Apply a switch, returning the rewired pairing. Degrees are unchanged and
/// |ΔH| ≤ 2 for any spin configuration.
pub fn apply_switch(pairing: &Pairing, switch: &Switch) -> Result<Pairing> {
    let (c1, c2) = switch.first;
    let (c3, c4) = switch.second;
    let clones = [c1, c2, c3, c4];
    for &c in &clones {
        if c as usize >= pairing.num_clones() {
            return Err(Error::InvalidSwitch(format!("clone {c} out of range")));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if clones[i] == clones[j] {
                return Err(Error::InvalidSwitch("switch clones must be distinct".into()));
            }
        }
    }
    if pairing.mate(c1) != c2 || pairing.mate(c3) != c4 {
        return Err(Error::InvalidSwitch("switch edges not present in pairing".into()));
    }
    let mut mate = pairing.mate.clone();
    let pairs: [(u32, u32); 2] = match switch.mode {
        SwitchMode::Cross => [(c1, c4), (c2, c3)],
        SwitchMode::Parallel => [(c1, c3), (c2, c4)],
    };
    for (a, b) in pairs {
        mate[a as usize] = b;
        mate[b as usize] = a;
    }
    Ok(Pairing {
        n: pairing.n,
        d: pairing.d,
        mate,
    })
}

/// BFS ball of radius r around a root vertex, with multigraph edges kept.
///
/// The ball's edge set consists of the edges reached by the BFS: every edge
/// (loops and parallels included) with at least one endpoint at depth < r.
/// Edges joining two depth-r vertices lie outside the ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub root: usize,
    /// Vertices in BFS order; `vertices[0] == root`.
    pub vertices: Vec<usize>,
    /// Depth of each ball vertex, parallel to `vertices`.
    pub depth: Vec<usize>,
    /// BFS-tree parent (ball index), None for the root.
    pub parent: Vec<Option<usize>>,
    /// BFS-tree children (ball indices).
    pub children: Vec<Vec<usize>>,
    /// Number of ball edges, with multiplicity.
    pub edge_count: usize,
    /// True iff the ball is acyclic and loopless.
    pub is_tree: bool,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of vertices at depth exactly r.
    pub fn boundary_size(&self, r: usize) -> usize {
        self.depth.iter().filter(|&&dep| dep == r).count()
    }
}

/// Depth-r neighborhood of v in the multigraph.
pub fn neighborhood(pairing: &Pairing, v: usize, r: usize) -> Ball {
    let mut index = vec![usize::MAX; pairing.n()];
    let mut vertices = vec![v];
    let mut depth = vec![0usize];
    let mut parent = vec![None];
    index[v] = 0;
    let mut head = 0;
    while head < vertices.len() {
        let u = vertices[head];
        let du = depth[head];
        if du < r {
            for c in pairing.clones_of(u) {
                let w = pairing.vertex_of(pairing.mate(c));
                if index[w] == usize::MAX {
                    index[w] = vertices.len();
                    vertices.push(w);
                    depth.push(du + 1);
                    parent.push(Some(head));
                }
            }
        }
        head += 1;
    }
    // edges explored by the BFS: at least one endpoint at depth < r; edges
    // with two interior endpoints are deduplicated by clone order
    let mut edge_count = 0;
    for (i, &u) in vertices.iter().enumerate() {
        if depth[i] >= r {
            continue;
        }
        for c in pairing.clones_of(u) {
            let m = pairing.mate(c);
            let w_interior = depth[index[pairing.vertex_of(m)]] < r;
            if !w_interior || c < m {
                edge_count += 1;
            }
        }
    }
    // BFS-tree children; a ball is a tree iff its edge count is |V| − 1
    let mut children = vec![Vec::new(); vertices.len()];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(i);
        }
    }
    let is_tree = edge_count == vertices.len() - 1;
    Ball {
        root: v,
        vertices,
        depth,
        parent,
        children,
        edge_count,
        is_tree,
    }
}

//! Simple undirected graphs, commuting-family generators, the H-product and
//! universal adjacency matrices.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Add;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Simple undirected graph on vertices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from unordered vertex pairs. Loops, out-of-range
    /// endpoints and repeated pairs are rejected.
    pub fn from_edge_pairs(order: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("graph order must be >= 1".into()));
        }
        let mut edges = BTreeSet::new();
        for &(u, v) in pairs {
            if u == v || u >= order || v >= order {
                return Err(Error::InvalidEdge { u, v, order });
            }
            let e = (u.min(v), u.max(v));
            if !edges.insert(e) {
                return Err(Error::DuplicateEdge { u: e.0, v: e.1 });
            }
        }
        Ok(Self::from_set(order, edges))
    }

    fn from_set(order: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); order];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            order,
            edges,
            neighbors,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// `Some(r)` iff every vertex has degree `r`.
    pub fn is_regular(&self) -> Option<usize> {
        let r = self.degree(0);
        self.neighbors.iter().all(|n| n.len() == r).then_some(r)
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.order];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.neighbors[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn adjacency_matrix(&self) -> SymMatrix {
        universal_matrix(self, &UniversalParams::ADJACENCY)
    }

    /// Integer adjacency matrix, row-major.
    pub fn adjacency_int(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.order]; self.order];
        for &(u, v) in &self.edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }
}

fn require_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("graph order must be >= 1".into()))
    } else {
        Ok(())
    }
}

pub fn empty(n: usize) -> Result<Graph> {
    require_order(n)?;
    Ok(Graph::from_set(n, BTreeSet::new()))
}

pub fn complete(n: usize) -> Result<Graph> {
    require_order(n)?;
    let edges = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_set(n, edges))
}

pub fn path(n: usize) -> Result<Graph> {
    require_order(n)?;
    let edges = (1..n).map(|v| (v - 1, v)).collect();
    Ok(Graph::from_set(n, edges))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::CycleTooSmall(n));
    }
    let mut edges: BTreeSet<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.insert((0, n - 1));
    Ok(Graph::from_set(n, edges))
}

/// Vertices of `b` are renumbered to follow those of `a`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.order;
    let edges = a
        .edges()
        .chain(b.edges().map(|(u, v)| (u + shift, v + shift)))
        .collect();
    Graph::from_set(a.order + b.order, edges)
}

/// Circulant graph: `i ~ i +- s (mod n)` for each step `s`, with steps in
/// `1..=n/2`. A step of exactly `n/2` (even `n`) contributes one edge per
/// vertex.
pub fn circulant(n: usize, steps: &[usize]) -> Result<Graph> {
    require_order(n)?;
    if steps.is_empty() {
        return Err(Error::InvalidInput(
            "circulant needs at least one step".into(),
        ));
    }
    let mut edges = BTreeSet::new();
    for &s in steps {
        if s == 0 || s > n / 2 {
            return Err(Error::InvalidStep { step: s, order: n });
        }
        for i in 0..n {
            let j = (i + s) % n;
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Ok(Graph::from_set(n, edges))
}

/// Cayley graph of the elementary abelian group `Z_2^k`: `x ~ x xor s` for
/// each connection element `s`. Elements are bit masks in `1..2^k`.
pub fn cayley_z2k(k: u32, connections: &[u64]) -> Result<Graph> {
    if k == 0 || k > 20 {
        return Err(Error::InvalidInput(format!(
            "dimension {k} must lie in 1..=20"
        )));
    }
    if connections.is_empty() {
        return Err(Error::InvalidInput(
            "Cayley graph needs at least one element".into(),
        ));
    }
    let n = 1usize << k;
    let mut edges = BTreeSet::new();
    for &s in connections {
        if s == 0 || s >= n as u64 {
            return Err(Error::InvalidElement {
                element: s,
                dimension: k,
            });
        }
        for x in 0..n {
            let y = x ^ s as usize;
            edges.insert((x.min(y), x.max(y)));
        }
    }
    Ok(Graph::from_set(n, edges))
}

/// The H-product: `l = |V(H)|` copies of equal-order factors, with vertex
/// `(j, i)` at index `j * n + i`, plus a perfect matching
/// `(j, i) ~ (k, i)` for every edge `jk` of `h`.
pub fn h_product(h: &Graph, factors: &[Graph]) -> Result<Graph> {
    let l = h.order();
    if factors.len() != l {
        return Err(Error::FactorCountMismatch {
            expected: l,
            actual: factors.len(),
        });
    }
    let n = factors[0].order();
    for (index, f) in factors.iter().enumerate() {
        if f.order() != n {
            return Err(Error::OrderMismatch {
                index,
                expected: n,
                actual: f.order(),
            });
        }
    }
    let mut edges = BTreeSet::new();
    for (j, f) in factors.iter().enumerate() {
        edges.extend(f.edges().map(|(u, v)| (j * n + u, j * n + v)));
    }
    for (j, k) in h.edges() {
        edges.extend((0..n).map(|i| (j * n + i, k * n + i)));
    }
    Ok(Graph::from_set(l * n, edges))
}

/// Coefficients of `U(G) = alpha A + beta D + gamma I + eta J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl UniversalParams {
    pub const ADJACENCY: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const LAPLACIAN: Self = Self::new(-1.0, 1.0, 0.0, 0.0);
    pub const SIGNLESS_LAPLACIAN: Self = Self::new(1.0, 1.0, 0.0, 0.0);
    pub const SEIDEL: Self = Self::new(-2.0, 0.0, -1.0, 1.0);

    pub const fn new(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Self {
        UniversalParams {
            alpha,
            beta,
            gamma,
            eta,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.eta]
    }
}

impl From<[f64; 4]> for UniversalParams {
    fn from(p: [f64; 4]) -> Self {
        Self::new(p[0], p[1], p[2], p[3])
    }
}

impl Add for UniversalParams {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(
            self.alpha + o.alpha,
            self.beta + o.beta,
            self.gamma + o.gamma,
            self.eta + o.eta,
        )
    }
}

pub fn universal_matrix(g: &Graph, p: &UniversalParams) -> SymMatrix {
    let n = g.order();
    let mut m = DMatrix::from_element(n, n, p.eta);
    for v in 0..n {
        m[(v, v)] = p.beta * g.degree(v) as f64 + p.gamma + p.eta;
    }
    for (u, v) in g.edges() {
        m[(u, v)] = p.alpha + p.eta;
        m[(v, u)] = p.alpha + p.eta;
    }
    SymMatrix::new(m).expect("universal matrix is symmetric by construction")
}

/// Exact commutation test on integer adjacency matrices.
pub fn adjacency_commute(a: &Graph, b: &Graph) -> Result<bool> {
    if a.order() != b.order() {
        return Err(Error::SizeMismatch {
            expected: a.order(),
            actual: b.order(),
        });
    }
    // (AB)_{uv} = #{w : u~w in A, w~v in B}; AB = BA iff (AB)_{uv} = (AB)_{vu}
    // since both matrices are symmetric.
    let n = a.order();
    let mut ab = vec![vec![0i64; n]; n];
    for (u, row) in ab.iter_mut().enumerate() {
        for &w in a.neighbors(u) {
            for &v in b.neighbors(w) {
                row[v] += 1;
            }
        }
    }
    Ok((0..n).all(|u| (0..u).all(|v| ab[u][v] == ab[v][u])))
}

/// True iff for every ordered pair of distinct parts `(i, j)`, all vertices
/// of part `i` have the same number of neighbours in part `j`.
pub fn is_almost_equitable(g: &Graph, partition: &[Vec<usize>]) -> Result<bool> {
    Ok(quotient_counts(g, partition)?.is_some())
}

/// The neighbour-count matrix `d[i][j]` of an almost equitable partition
/// (diagonal left at 0), or `None` if the partition is not almost equitable.
pub fn quotient_counts(g: &Graph, partition: &[Vec<usize>]) -> Result<Option<Vec<Vec<usize>>>> {
    let n = g.order();
    let mut part_of = vec![usize::MAX; n];
    for (p, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::NotAPartition(format!("part {p} is empty")));
        }
        for &v in part {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if part_of[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} appears twice")));
            }
            part_of[v] = p;
        }
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} is not covered")));
    }
    let parts = partition.len();
    let mut d = vec![vec![0usize; parts]; parts];
    for (i, part) in partition.iter().enumerate() {
        for (idx, &v) in part.iter().enumerate() {
            let mut counts = vec![0usize; parts];
            for &w in g.neighbors(v) {
                counts[part_of[w]] += 1;
            }
            for j in (0..parts).filter(|&j| j != i) {
                if idx == 0 {
                    d[i][j] = counts[j];
                } else if d[i][j] != counts[j] {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(d))
}

/// Parses the edge-list text format: the first non-comment line is the
/// order `n`, each following one is `u v` with `0 <= u < v < n`. `#` starts
/// a comment; blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut order: Option<usize> = None;
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = order else {
            if fields.len() != 1 {
                return Err(err(format!("expected vertex count, found {line:?}")));
            }
            let n: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("invalid vertex count {:?}", fields[0])))?;
            if n == 0 {
                return Err(err("vertex count must be >= 1".into()));
            }
            order = Some(n);
            continue;
        };
        if fields.len() != 2 {
            return Err(err(format!("expected \"u v\", found {line:?}")));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("invalid vertex {s:?}")))
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u >= v || v >= n {
            return Err(err(format!("edge {u} {v} violates 0 <= u < v < {n}")));
        }
        if !edges.insert((u, v)) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
    }
    let n = order.ok_or(Error::Parse {
        line: 0,
        message: "missing vertex count".into(),
    })?;
    Ok(Graph::from_set(n, edges))
}

/// Serializes to the edge-list format, edges in lexicographic order.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

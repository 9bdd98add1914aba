use crate::error::{Error, Result};
use crate::scag::delaunay::Triangulation;
use crate::scag::hull::dist;
use crate::Real;

/// Euclidean minimum spanning tree with its total length and diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree<T> {
    /// `(i, j, length)` with `i < j`.
    pub edges: Vec<(usize, usize, T)>,
    pub total_length: T,
    pub diameter: T,
    nodes: usize,
}

impl<T: Real> SpanningTree<T> {
    /// Validates that `edges` form a spanning tree over `nodes` vertices.
    pub fn from_edges(nodes: usize, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: nodes });
        }
        if edges.len() != nodes - 1 {
            return Err(Error::InvalidData(format!(
                "a tree on {nodes} nodes has {} edges, got {}",
                nodes - 1,
                edges.len()
            )));
        }
        let mut dsu = DisjointSets::new(nodes);
        for &(a, b, w) in &edges {
            if a >= nodes || b >= nodes || !(w >= T::zero()) {
                return Err(Error::InvalidData(format!("bad edge ({a}, {b}, {w})")));
            }
            if !dsu.union(a, b) {
                return Err(Error::InvalidData("edges contain a cycle".into()));
            }
        }
        let total_length = edges.iter().fold(T::zero(), |acc, e| acc + e.2);
        let mut tree = Self {
            edges,
            total_length,
            diameter: T::zero(),
            nodes,
        };
        tree.diameter = mst_diameter(&tree);
        Ok(tree)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal over the Delaunay edges (or every pair when the points are collinear).
///
/// Ties are broken by the lexicographic `(i, j)` edge index.
pub fn mst<T: Real>(points: &[[T; 2]]) -> Result<SpanningTree<T>> {
    let candidates = match Triangulation::new(points) {
        Ok(tri) => tri.edges(),
        Err(Error::CollinearInput) => all_pairs(points.len()),
        Err(e) => return Err(e),
    };
    mst_over(points, candidates)
}

pub(crate) fn mst_from_triangulation<T: Real>(points: &[[T; 2]], tri: &Triangulation) -> Result<SpanningTree<T>> {
    mst_over(points, tri.edges())
}

fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect()
}

fn mst_over<T: Real>(points: &[[T; 2]], candidates: Vec<(usize, usize)>) -> Result<SpanningTree<T>> {
    let m = points.len();
    if m < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: m });
    }
    let mut weighted: Vec<(T, usize, usize)> = candidates
        .into_iter()
        .map(|(i, j)| (dist(points[i], points[j]), i, j))
        .collect();
    weighted.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut dsu = DisjointSets::new(m);
    let mut edges = Vec::with_capacity(m - 1);
    for (w, i, j) in weighted {
        if dsu.union(i, j) {
            edges.push((i, j, w));
            if edges.len() == m - 1 {
                break;
            }
        }
    }
    if edges.len() != m - 1 {
        // duplicate locations collapse in the triangulation; fall back to every pair
        return mst_over(points, all_pairs(m));
    }
    SpanningTree::from_edges(m, edges)
}

/// Weight of the longest simple path: farthest node from an arbitrary start,
/// then the farthest node from that one.
pub fn mst_diameter<T: Real>(t: &SpanningTree<T>) -> T {
    let m = t.nodes;
    let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); m];
    for &(a, b, w) in &t.edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let farthest = |src: usize| -> (usize, T) {
        let mut distance = vec![T::neg_infinity(); m];
        distance[src] = T::zero();
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &(u, w) in &adj[v] {
                if distance[u] == T::neg_infinity() {
                    distance[u] = distance[v] + w;
                    stack.push(u);
                }
            }
        }
        let mut best = (src, T::zero());
        for (v, &d) in distance.iter().enumerate() {
            if d > best.1 {
                best = (v, d);
            }
        }
        best
    };
    // a path has every node of degree at most two and its diameter is the whole tree
    if adj.iter().all(|a| a.len() <= 2) {
        return t.total_length;
    }
    let (end, _) = farthest(0);
    farthest(end).1.min(t.total_length)
}

//! Signed multigraphs.
//!
//! A [`SignedMultigraph`] is a finite undirected multigraph (parallel edges
//! and loops are first-class) together with a sign on every edge. Loops count
//! twice towards the degree of their vertex. Vertices are `0..vertex_count`,
//! edges are `0..edge_count`, and the edge id doubles as the index into every
//! per-edge table in the crate.
//!
//! The central equivalence on signed graphs is *switching*: negating every
//! edge with exactly one endpoint in a vertex set `U`. A graph is *balanced*
//! when some bipartition puts every negative edge across the parts and every
//! positive edge inside a part (equivalently, no circuit has negative sign),
//! and *antibalanced* when negating all signs makes it balanced.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::error::{invalid, Result};

/// Sign of an edge, multiplicatively `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn negated(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Positive),
            '-' => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Parity of the number of negative edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// One signed edge. The edge id is its index in the graph's edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Which side of an edge a half-edge lies on: slot 0 sits at `u`, slot 1 at
/// `v`. A loop owns both slots at the same vertex.
pub type Slot = u8;

/// An undirected multigraph with signed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMultigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    /// Per-vertex incidence list of (edge id, slot), ascending by edge id.
    /// A loop at `v` contributes two entries to `adj[v]`.
    adj: Vec<Vec<(usize, Slot)>>,
}

impl SignedMultigraph {
    /// Builds a graph from an edge list; edge ids are assigned `0..` in list
    /// order. Fails when an endpoint is out of range.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, Sign)>) -> Result<Self> {
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(invalid(format!(
                    "edge {i} endpoints ({u}, {v}) exceed vertex count {vertex_count}"
                )));
            }
        }
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(u, v, sign)| Edge { u, v, sign })
            .collect();
        let mut adj = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            adj[e.u].push((id, 0));
            adj[e.v].push((id, 1));
        }
        Ok(SignedMultigraph {
            vertex_count,
            edges,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].u, self.edges[e].v)
    }

    pub fn sign(&self, e: usize) -> Sign {
        self.edges[e].sign
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].is_loop()
    }

    /// The endpoint of `e` that is not `v`; `v` itself for a loop at `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.u == v {
            edge.v
        } else {
            edge.u
        }
    }

    /// Incidences of `v` as (edge id, slot) pairs, ascending by edge id; a
    /// loop at `v` appears twice.
    pub fn incidences(&self, v: usize) -> &[(usize, Slot)] {
        &self.adj[v]
    }

    /// Degree of `v`; a loop at `v` counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(invalid(format!(
                "vertex {v} exceeds vertex count {}",
                self.vertex_count
            )));
        }
        Ok(())
    }

    pub(crate) fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.edges.len() {
            return Err(invalid(format!(
                "edge {e} exceeds edge count {}",
                self.edges.len()
            )));
        }
        Ok(())
    }

    /// Switches the signature at the vertex set `at`: every edge with exactly
    /// one endpoint in `at` flips its sign; loops and edges with both or no
    /// endpoints in `at` are unchanged. Vertex and edge ids are preserved.
    pub fn switch(&self, at: &BTreeSet<usize>) -> Result<SignedMultigraph> {
        for &v in at {
            self.check_vertex(v)?;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let crossings = at.contains(&e.u) as u8 + at.contains(&e.v) as u8;
                let sign = if crossings == 1 { e.sign.negated() } else { e.sign };
                (e.u, e.v, sign)
            })
            .collect();
        SignedMultigraph::new(self.vertex_count, edges)
    }

    /// The same graph with every sign negated.
    pub fn negated(&self) -> SignedMultigraph {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.sign.negated()))
            .collect();
        SignedMultigraph::new(self.vertex_count, edges).expect("endpoints unchanged")
    }

    /// Product of the signs over an edge set; the empty set has sign `+1`.
    pub fn subgraph_sign(&self, edge_set: &BTreeSet<usize>) -> Result<Sign> {
        let mut sign = Sign::Positive;
        for &e in edge_set {
            self.check_edge(e)?;
            sign = sign.product(self.edges[e].sign);
        }
        Ok(sign)
    }

    /// Number of negative edges modulo 2.
    pub fn negative_parity(&self) -> Parity {
        let negatives = self
            .edges
            .iter()
            .filter(|e| e.sign == Sign::Negative)
            .count();
        if negatives % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Connected components over the full vertex set, each sorted ascending;
    /// components are ordered by their smallest vertex. Isolated vertices form
    /// singleton components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.masked_components(&self.full_mask())
    }

    /// Vertex components of the subgraph keeping only edges with `mask[e]`
    /// true, over the full vertex set; same ordering as [`Self::components`].
    pub(crate) fn masked_components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for root in 0..self.vertex_count {
            if seen[root] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([root]);
            seen[root] = true;
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &(e, _) in &self.adj[x] {
                    if !mask[e] {
                        continue;
                    }
                    let y = self.other_end(e, x);
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True when the graph has at least one edge, no isolated vertex, every
    /// degree even, and a single component. The edgeless one-vertex graph is
    /// rejected.
    pub fn is_eulerian(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        if (0..self.vertex_count).any(|v| self.degree(v) == 0 || !self.degree(v).is_multiple_of(2)) {
            return false;
        }
        self.components().len() == 1
    }

    /// `|E| - |V| + c` where `c` is the number of components.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertex_count
    }

    /// Repeatedly replaces a degree-2 vertex whose two half-edges belong to
    /// two distinct non-loop edges by a single edge carrying the sign product
    /// of the pair, until no such vertex remains. Vertices carrying a loop are
    /// never suppressed. Preserves the flow number and the cycle rank.
    ///
    /// Deterministic: the lowest-index eligible vertex is suppressed first;
    /// surviving vertices are relabelled in ascending order and edges are
    /// relabelled by the smallest original edge id they absorbed.
    pub fn suppress_degree_two(&self) -> SignedMultigraph {
        // Work on an optional edge table; `key` tracks the smallest original
        // id merged into the edge and decides the final ordering.
        #[derive(Clone)]
        struct Merged {
            u: usize,
            v: usize,
            sign: Sign,
            key: usize,
        }
        let mut work: Vec<Option<Merged>> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                Some(Merged {
                    u: e.u,
                    v: e.v,
                    sign: e.sign,
                    key: id,
                })
            })
            .collect();
        let mut alive_vertex = vec![true; self.vertex_count];

        loop {
            // Incidences of the current graph, loops listed twice.
            let mut inc: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
            for (i, m) in work.iter().enumerate() {
                if let Some(m) = m {
                    inc[m.u].push(i);
                    inc[m.v].push(i);
                }
            }
            let candidate = (0..self.vertex_count).find(|&w| {
                alive_vertex[w] && inc[w].len() == 2 && inc[w][0] != inc[w][1] && {
                    let (a, b) = (inc[w][0], inc[w][1]);
                    let (ma, mb) = (work[a].as_ref().unwrap(), work[b].as_ref().unwrap());
                    ma.u != ma.v && mb.u != mb.v
                }
            });
            let Some(w) = candidate else { break };
            let (a, b) = (inc[w][0], inc[w][1]);
            let ma = work[a].clone().unwrap();
            let mb = work[b].clone().unwrap();
            let x = if ma.u == w { ma.v } else { ma.u };
            let y = if mb.u == w { mb.v } else { mb.u };
            let merged = Merged {
                u: x.min(y),
                v: x.max(y),
                sign: ma.sign.product(mb.sign),
                key: ma.key.min(mb.key),
            };
            work[a] = Some(merged);
            work[b] = None;
            alive_vertex[w] = false;
        }

        let vertex_map: Vec<Option<usize>> = {
            let mut next = 0;
            (0..self.vertex_count)
                .map(|v| {
                    if alive_vertex[v] {
                        let id = next;
                        next += 1;
                        Some(id)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let mut survivors: Vec<Merged> = work.into_iter().flatten().collect();
        survivors.sort_by_key(|m| m.key);
        let edges = survivors
            .into_iter()
            .map(|m| {
                (
                    vertex_map[m.u].expect("endpoint survives"),
                    vertex_map[m.v].expect("endpoint survives"),
                    m.sign,
                )
            })
            .collect();
        let n = vertex_map.iter().flatten().count();
        SignedMultigraph::new(n, edges).expect("relabelled endpoints are in range")
    }

    // ----- edge-set views ------------------------------------------------

    /// Vertices incident with at least one edge of the set.
    pub fn vertices_of(&self, edge_set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut vs = BTreeSet::new();
        for &e in edge_set {
            let (u, v) = self.endpoints(e);
            vs.insert(u);
            vs.insert(v);
        }
        vs
    }

    /// Degree of `v` counting only edges in the mask; loops count twice.
    pub fn masked_degree(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&(e, _)| mask[e]).count()
    }

    pub(crate) fn mask_from(&self, edge_set: &BTreeSet<usize>) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.edges.len()];
        for &e in edge_set {
            self.check_edge(e)?;
            mask[e] = true;
        }
        Ok(mask)
    }

    pub(crate) fn full_mask(&self) -> Vec<bool> {
        vec![true; self.edges.len()]
    }

    /// True when the edge-induced subgraph on the set is connected (all its
    /// edges reachable from one another; vertices outside the set ignored).
    /// The empty set counts as connected.
    pub(crate) fn edge_induced_connected(&self, mask: &[bool]) -> bool {
        let Some(start) = (0..self.edges.len()).find(|&e| mask[e]) else {
            return true;
        };
        let mut seen_edge = vec![false; self.edges.len()];
        let mut seen_vertex = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([self.edges[start].u]);
        seen_vertex[self.edges[start].u] = true;
        while let Some(x) = queue.pop_front() {
            for &(e, _) in &self.adj[x] {
                if !mask[e] {
                    continue;
                }
                seen_edge[e] = true;
                let y = self.other_end(e, x);
                if !seen_vertex[y] {
                    seen_vertex[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.edges.len()).all(|e| !mask[e] || seen_edge[e])
    }

    /// True when the set is nonempty, every incident vertex has even degree
    /// within the set, and the edge-induced subgraph is connected — i.e. the
    /// set carries a closed trail through all its edges.
    pub fn is_even_connected_subgraph(&self, edge_set: &BTreeSet<usize>) -> bool {
        if edge_set.is_empty() {
            return false;
        }
        let Ok(mask) = self.mask_from(edge_set) else {
            return false;
        };
        let vs = self.vertices_of(edge_set);
        vs.iter().all(|&v| self.masked_degree(v, &mask).is_multiple_of(2))
            && self.edge_induced_connected(&mask)
    }

    /// Number of negative edges in the set.
    pub fn negative_count(&self, edge_set: &BTreeSet<usize>) -> usize {
        edge_set
            .iter()
            .filter(|&&e| self.edges[e].sign == Sign::Negative)
            .count()
    }

    // ----- balance --------------------------------------------------------

    /// A bipartition witnessing balance: negative edges cross the parts,
    /// positive edges stay inside a part. Deterministic: in every component
    /// the lowest-index vertex lands in part one. Absent iff some circuit has
    /// negative sign.
    pub fn balanced_bipartition(&self) -> Option<Bipartition> {
        match self.balance_scan(&self.full_mask()) {
            BalanceScan::Balanced(parts) => Some(Bipartition { parts }),
            BalanceScan::Violation { .. } => None,
        }
    }

    /// A bipartition witnessing balance of the negated graph.
    pub fn antibalanced_bipartition(&self) -> Option<Bipartition> {
        self.negated().balanced_bipartition()
    }

    /// BFS two-colouring over the edges in the mask. Either yields a complete
    /// labelling or stops at the first inconsistent edge in processing order
    /// (vertices dequeued in BFS order from ascending roots, incidences
    /// scanned ascending by edge id), returning the BFS forest grown so far.
    pub(crate) fn balance_scan(&self, mask: &[bool]) -> BalanceScan {
        let mut parts: Vec<Option<Part>> = vec![None; self.vertex_count];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count];
        for root in 0..self.vertex_count {
            if parts[root].is_some() {
                continue;
            }
            parts[root] = Some(Part::One);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let px = parts[x].expect("queued vertices are labelled");
                for &(e, slot) in &self.adj[x] {
                    if !mask[e] {
                        continue;
                    }
                    // A loop is scanned from its slot-0 entry only.
                    if self.is_loop(e) {
                        if slot == 1 {
                            continue;
                        }
                        if self.edges[e].sign == Sign::Negative {
                            return BalanceScan::Violation { edge: e, parent, parts };
                        }
                        continue;
                    }
                    let y = self.other_end(e, x);
                    let want = match self.edges[e].sign {
                        Sign::Positive => px,
                        Sign::Negative => px.other(),
                    };
                    match parts[y] {
                        None => {
                            parts[y] = Some(want);
                            parent[y] = Some((x, e));
                            queue.push_back(y);
                        }
                        // Tree edges re-scanned from the far side are always
                        // consistent; any mismatch is a genuine violation.
                        Some(py) if py != want => {
                            return BalanceScan::Violation { edge: e, parent, parts };
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let parts = parts.into_iter().map(|p| p.expect("all labelled")).collect();
        BalanceScan::Balanced(parts)
    }
}

/// Result of a balance scan: a full two-colouring, or the first edge that
/// cannot be made consistent plus the BFS forest needed to extract the
/// fundamental circuit it closes.
pub(crate) enum BalanceScan {
    Balanced(Vec<Part>),
    Violation {
        edge: usize,
        /// `parent[v] = (u, e)`: `v` was discovered from `u` along tree edge `e`.
        parent: Vec<Option<(usize, usize)>>,
        #[allow(dead_code)]
        parts: Vec<Option<Part>>,
    },
}

/// Side of a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    One,
    Two,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::One => Part::Two,
            Part::Two => Part::One,
        }
    }
}

/// Assignment of every vertex to one of two parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    parts: Vec<Part>,
}

impl Bipartition {
    pub fn part(&self, v: usize) -> Part {
        self.parts[v]
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// True when the bipartition witnesses balance of `g`: every negative
    /// edge crosses the parts and every positive edge stays inside one.
    pub fn witnesses_balance_of(&self, g: &SignedMultigraph) -> bool {
        if self.parts.len() != g.vertex_count() {
            return false;
        }
        g.edges().all(|(_, e)| match e.sign {
            Sign::Positive => self.parts[e.u] == self.parts[e.v],
            Sign::Negative => self.parts[e.u] != self.parts[e.v],
        })
    }
}

/// A walk `v0, e1, v1, …, ek, vk` using no edge twice. Consecutive vertices
/// are the endpoints of the edge between them; a loop repeats its vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Trail {
    /// Validates the alternation against `g`: `vertices` has one entry more
    /// than `edges`, each edge joins its neighbouring vertices, and no edge
    /// repeats.
    pub fn new(g: &SignedMultigraph, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Trail> {
        if vertices.is_empty() || vertices.len() != edges.len() + 1 {
            return Err(invalid(
                "trail must alternate vertices and edges, with one more vertex than edges",
            ));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let mut used = BTreeSet::new();
        for (i, &e) in edges.iter().enumerate() {
            g.check_edge(e)?;
            if !used.insert(e) {
                return Err(invalid(format!("edge {e} repeats; not a trail")));
            }
            let (u, v) = g.endpoints(e);
            let (a, b) = (vertices[i], vertices[i + 1]);
            if (a, b) != (u, v) && (a, b) != (v, u) {
                return Err(invalid(format!(
                    "edge {e} joins ({u}, {v}), not trail step ({a}, {b})"
                )));
            }
        }
        Ok(Trail { vertices, edges })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("trail is nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// True for a nonempty closed trail that visits no vertex twice except at
    /// its matching endpoints.
    pub fn is_circuit(&self) -> bool {
        if self.is_empty() || !self.is_closed() {
            return false;
        }
        let interior = &self.vertices[..self.vertices.len() - 1];
        let distinct: BTreeSet<usize> = interior.iter().copied().collect();
        distinct.len() == interior.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize, Sign)]) -> SignedMultigraph {
        SignedMultigraph::new(n, edges.to_vec()).unwrap()
    }

    use Sign::{Negative as N, Positive as P};

    #[test]
    fn endpoints_out_of_range_are_rejected() {
        assert!(SignedMultigraph::new(2, vec![(0, 2, P)]).is_err());
    }

    #[test]
    fn loops_count_twice_in_degree() {
        let b = g(1, &[(0, 0, N), (0, 0, N)]);
        assert_eq!(b.degree(0), 4);
    }

    #[test]
    fn switch_positive_digon_at_one_endpoint_negates_both_edges() {
        let d = g(2, &[(0, 1, P), (0, 1, P)]);
        let s = d.switch(&BTreeSet::from([0])).unwrap();
        assert_eq!(s.sign(0), N);
        assert_eq!(s.sign(1), N);
    }

    #[test]
    fn switch_keeps_loops_and_double_crossings() {
        let h = g(2, &[(0, 0, N), (0, 1, N)]);
        let s = h.switch(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(s.sign(0), N, "loop endpoints both switch");
        assert_eq!(s.sign(1), N, "both endpoints in U");
    }

    #[test]
    fn switch_twice_is_identity() {
        let h = g(3, &[(0, 1, P), (1, 2, N), (0, 0, N), (1, 2, P)]);
        let u = BTreeSet::from([1, 2]);
        assert_eq!(h.switch(&u).unwrap().switch(&u).unwrap(), h);
    }

    #[test]
    fn switch_rejects_bad_vertex() {
        let h = g(1, &[(0, 0, P)]);
        assert!(h.switch(&BTreeSet::from([1])).is_err());
    }

    #[test]
    fn all_positive_triangle_is_balanced_in_one_part() {
        let t = g(3, &[(0, 1, P), (1, 2, P), (0, 2, P)]);
        let b = t.balanced_bipartition().unwrap();
        assert!(b.parts().iter().all(|&p| p == Part::One));
        assert!(b.witnesses_balance_of(&t));
    }

    #[test]
    fn negative_digon_is_balanced_across_parts() {
        let d = g(2, &[(0, 1, N), (0, 1, N)]);
        let b = d.balanced_bipartition().unwrap();
        assert_eq!(b.part(0), Part::One);
        assert_eq!(b.part(1), Part::Two);
        assert!(b.witnesses_balance_of(&d));
    }

    #[test]
    fn single_negative_loop_is_unbalanced_but_antibalanced() {
        let l = g(1, &[(0, 0, N)]);
        assert!(l.balanced_bipartition().is_none());
        let a = l.antibalanced_bipartition().unwrap();
        assert_eq!(a.part(0), Part::One);
    }

    #[test]
    fn positive_digon_antibalanced_across_parts() {
        let d = g(2, &[(0, 1, P), (0, 1, P)]);
        let a = d.antibalanced_bipartition().unwrap();
        assert_eq!(a.part(0), Part::One);
        assert_eq!(a.part(1), Part::Two);
    }

    #[test]
    fn all_positive_triangle_is_not_antibalanced() {
        let t = g(3, &[(0, 1, P), (1, 2, P), (0, 2, P)]);
        assert!(t.antibalanced_bipartition().is_none());
    }

    #[test]
    fn subgraph_sign_multiplies() {
        let h = g(2, &[(0, 0, N), (0, 1, P), (0, 1, N)]);
        assert_eq!(h.subgraph_sign(&BTreeSet::new()).unwrap(), P);
        assert_eq!(h.subgraph_sign(&BTreeSet::from([0])).unwrap(), N);
        assert_eq!(h.subgraph_sign(&BTreeSet::from([0, 2])).unwrap(), P);
        assert!(h.subgraph_sign(&BTreeSet::from([7])).is_err());
    }

    #[test]
    fn eulerian_requires_even_degrees_and_one_component() {
        assert!(g(1, &[(0, 0, N), (0, 0, N), (0, 0, N)]).is_eulerian());
        assert!(g(2, &[(0, 1, P), (0, 1, P)]).is_eulerian());
        assert!(!g(2, &[(0, 1, P)]).is_eulerian(), "odd degrees");
        assert!(!g(1, &[]).is_eulerian(), "edgeless single vertex");
        assert!(
            !g(3, &[(0, 1, P), (0, 1, P)]).is_eulerian(),
            "isolated vertex"
        );
        assert!(
            !g(4, &[(0, 1, P), (0, 1, P), (2, 3, N), (2, 3, N)]).is_eulerian(),
            "two components"
        );
    }

    #[test]
    fn parity_counts_negative_edges() {
        assert_eq!(g(2, &[(0, 1, N), (0, 1, N)]).negative_parity(), Parity::Even);
        assert_eq!(
            g(1, &[(0, 0, N), (0, 0, N), (0, 0, N)]).negative_parity(),
            Parity::Odd
        );
    }

    #[test]
    fn cycle_rank_counts_independent_circuits() {
        assert_eq!(g(1, &[(0, 0, N), (0, 0, N), (0, 0, N)]).cycle_rank(), 3);
        assert_eq!(
            g(4, &[(0, 1, P), (1, 2, P), (2, 3, N), (3, 0, N)]).cycle_rank(),
            1
        );
        assert_eq!(g(3, &[(0, 1, P), (1, 2, P)]).cycle_rank(), 0);
        assert_eq!(g(2, &[]).cycle_rank(), 0);
    }

    #[test]
    fn components_include_isolated_vertices() {
        let h = g(4, &[(0, 0, P), (2, 3, N)]);
        assert_eq!(h.components(), vec![vec![0], vec![1], vec![2, 3]]);
    }

    #[test]
    fn suppress_path_merges_signs() {
        let p = g(3, &[(0, 1, P), (1, 2, N)]);
        let s = p.suppress_degree_two();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.edge_count(), 1);
        assert_eq!(s.endpoints(0), (0, 1));
        assert_eq!(s.sign(0), N);
    }

    #[test]
    fn suppress_four_circuit_to_positive_loop() {
        let c = g(4, &[(0, 1, P), (1, 2, P), (2, 3, N), (3, 0, N)]);
        let s = c.suppress_degree_two();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 1);
        assert!(s.is_loop(0));
        assert_eq!(s.sign(0), P);
        assert_eq!(s.cycle_rank(), c.cycle_rank());
    }

    #[test]
    fn suppress_never_touches_loop_carriers() {
        // Loop plus digon at the same vertex: vertex 0 has degree 4, vertex 1
        // degree 2 with two distinct parallel edges, which merge into a loop.
        let h = g(2, &[(0, 0, N), (0, 1, P), (0, 1, N)]);
        let s = h.suppress_degree_two();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 2);
        assert!(s.is_loop(0) && s.is_loop(1));
        assert_eq!(s.sign(0), N);
        assert_eq!(s.sign(1), N, "merged digon signs multiply");
    }

    #[test]
    fn even_connected_subgraph_recognises_closed_trails() {
        let h = g(3, &[(0, 1, P), (1, 2, P), (0, 2, N), (0, 0, N)]);
        assert!(h.is_even_connected_subgraph(&BTreeSet::from([0, 1, 2])));
        assert!(h.is_even_connected_subgraph(&BTreeSet::from([3])));
        assert!(!h.is_even_connected_subgraph(&BTreeSet::from([0])));
        assert!(!h.is_even_connected_subgraph(&BTreeSet::new()));
        assert!(h.is_even_connected_subgraph(&BTreeSet::from([0, 1, 2, 3])));
    }

    #[test]
    fn trail_validation() {
        let h = g(2, &[(0, 1, P), (0, 1, N), (1, 1, N)]);
        assert!(Trail::new(&h, vec![0, 1, 1, 0], vec![0, 2, 1]).is_ok());
        assert!(Trail::new(&h, vec![0, 1, 0], vec![0, 0]).is_err(), "repeat");
        assert!(Trail::new(&h, vec![0, 0], vec![0]).is_err(), "bad step");
        assert!(Trail::new(&h, vec![0], vec![0]).is_err(), "alternation");
        assert!(Trail::new(&h, vec![0], vec![]).unwrap().is_closed());
    }
}

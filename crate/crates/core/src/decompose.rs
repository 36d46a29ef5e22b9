//! Structural decompositions: eulerian trails, circuit decompositions,
//! unbalanced circuits, odd triples, and even covers.
//!
//! A *circuit* is a closed trail repeating no vertex; it is *unbalanced* when
//! it carries an odd number of negative edges. An *odd triple* splits the
//! edge set into three connected even subgraphs, each with an odd number of
//! negative edges; an *even cover* is a pair of connected even subgraphs with
//! evenly many negative edges each whose union is the whole edge set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::graph::{BalanceScan, Parity, Sign, SignedMultigraph, Trail};

pub(crate) fn vertex_set(trail: &Trail) -> BTreeSet<usize> {
    trail.vertices().iter().copied().collect()
}

pub(crate) fn is_unbalanced(g: &SignedMultigraph, trail: &Trail) -> bool {
    trail
        .edges()
        .iter()
        .filter(|&&e| g.sign(e) == Sign::Negative)
        .count()
        % 2
        == 1
}

// ----- eulerian trails ------------------------------------------------------

/// A closed trail through every edge, starting at the lowest vertex carrying
/// an edge and preferring the lowest-numbered edge at each step.
pub fn eulerian_trail(g: &SignedMultigraph) -> Result<Trail> {
    eulerian_trail_in(g, &(0..g.edge_count()).collect())
}

/// [`eulerian_trail`] restricted to an edge subset, which must be nonempty,
/// connected, and even at every vertex it touches.
pub fn eulerian_trail_in(g: &SignedMultigraph, edge_set: &BTreeSet<usize>) -> Result<Trail> {
    if edge_set.is_empty() {
        return Err(invalid("edge set carries no closed trail: it is empty"));
    }
    let start = *g
        .vertices_of(edge_set)
        .iter()
        .next()
        .expect("nonempty edge set has vertices");
    eulerian_trail_from(g, edge_set, start)
}

/// [`eulerian_trail_in`] anchored at a chosen start vertex, which must lie on
/// the subgraph.
pub fn eulerian_trail_from(
    g: &SignedMultigraph,
    edge_set: &BTreeSet<usize>,
    start: usize,
) -> Result<Trail> {
    if !g.is_even_connected_subgraph(edge_set) {
        return Err(invalid(
            "edge set carries no closed trail: it must be nonempty, connected, and even at every vertex",
        ));
    }
    if !g.vertices_of(edge_set).contains(&start) {
        return Err(invalid(format!(
            "vertex {start} does not lie on the subgraph"
        )));
    }
    let mask = g.mask_from(edge_set)?;
    let mut ptr = vec![0usize; g.vertex_count()];
    let mut used = vec![false; g.edge_count()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut rev_vertices = Vec::with_capacity(edge_set.len() + 1);
    let mut rev_edges = Vec::with_capacity(edge_set.len());
    while let Some(&(x, _)) = stack.last() {
        let mut next = None;
        while ptr[x] < g.incidences(x).len() {
            let (e, _) = g.incidences(x)[ptr[x]];
            ptr[x] += 1;
            if mask[e] && !used[e] {
                next = Some(e);
                break;
            }
        }
        match next {
            Some(e) => {
                used[e] = true;
                stack.push((g.other_end(e, x), Some(e)));
            }
            None => {
                let (x, via) = stack.pop().expect("stack is nonempty");
                rev_vertices.push(x);
                rev_edges.extend(via);
            }
        }
    }
    rev_vertices.reverse();
    rev_edges.reverse();
    Trail::new(g, rev_vertices, rev_edges)
}

// ----- circuit decompositions -----------------------------------------------

/// A partition of the edge set into edge-disjoint circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDecomposition {
    circuits: Vec<Trail>,
}

impl CircuitDecomposition {
    pub fn circuits(&self) -> &[Trail] {
        &self.circuits
    }

    /// Validates against `g`: every member is a circuit of `g` and every edge
    /// of `g` lies in exactly one member.
    pub fn check(&self, g: &SignedMultigraph) -> Result<()> {
        let mut count = vec![0usize; g.edge_count()];
        for (i, c) in self.circuits.iter().enumerate() {
            let c = Trail::new(g, c.vertices().to_vec(), c.edges().to_vec())?;
            if !c.is_circuit() {
                return Err(invalid(format!("member {i} is not a circuit")));
            }
            for &e in c.edges() {
                count[e] += 1;
            }
        }
        match count.iter().position(|&k| k != 1) {
            None => Ok(()),
            Some(e) => Err(invalid(format!(
                "edge {e} is covered {} times; a decomposition covers each edge once",
                count[e]
            ))),
        }
    }
}

/// Splits the edges into circuits. Deterministic: walks start from the
/// lowest remaining edge, extend along the lowest usable edge, and close a
/// circuit at the first repeated vertex; the edges walked before the repeat
/// return to the pool. Requires every vertex degree to be even.
pub fn circuit_decomposition(g: &SignedMultigraph) -> Result<CircuitDecomposition> {
    Ok(CircuitDecomposition {
        circuits: circuit_decomposition_in(g, &g.full_mask())?,
    })
}

pub(crate) fn circuit_decomposition_in(g: &SignedMultigraph, mask: &[bool]) -> Result<Vec<Trail>> {
    for v in 0..g.vertex_count() {
        if !g.masked_degree(v, mask).is_multiple_of(2) {
            return Err(invalid(format!(
                "vertex {v} has odd degree; only even graphs decompose into circuits"
            )));
        }
    }
    let mut remaining = mask.to_vec();
    let mut circuits = Vec::new();
    while let Some(e0) = (0..g.edge_count()).find(|&e| remaining[e]) {
        let start = g.endpoints(e0).0;
        let mut path_vertices = vec![start];
        let mut path_edges: Vec<usize> = Vec::new();
        let mut position: BTreeMap<usize, usize> = BTreeMap::from([(start, 0)]);
        let mut on_path = vec![false; g.edge_count()];
        let mut x = start;
        loop {
            let e = g
                .incidences(x)
                .iter()
                .map(|&(e, _)| e)
                .find(|&e| remaining[e] && !on_path[e])
                .expect("even degrees let an open walk continue");
            on_path[e] = true;
            let y = g.other_end(e, x);
            path_edges.push(e);
            if let Some(&j) = position.get(&y) {
                path_vertices.push(y);
                let circuit = Trail::new(
                    g,
                    path_vertices[j..].to_vec(),
                    path_edges[j..].to_vec(),
                )?;
                for &ce in circuit.edges() {
                    remaining[ce] = false;
                }
                circuits.push(circuit);
                break;
            }
            path_vertices.push(y);
            position.insert(y, path_vertices.len() - 1);
            x = y;
        }
    }
    Ok(circuits)
}

// ----- unbalanced circuits --------------------------------------------------

/// An unbalanced circuit when one exists: the fundamental circuit closed by
/// the first edge at which the balance scan fails.
pub fn find_unbalanced_circuit(g: &SignedMultigraph) -> Option<Trail> {
    find_unbalanced_circuit_in(g, &g.full_mask())
}

pub(crate) fn find_unbalanced_circuit_in(g: &SignedMultigraph, mask: &[bool]) -> Option<Trail> {
    let BalanceScan::Violation { edge, parent, .. } = g.balance_scan(mask) else {
        return None;
    };
    let chain = |mut x: usize| {
        let mut vs = vec![x];
        let mut es = Vec::new();
        while let Some((p, e)) = parent[x] {
            vs.push(p);
            es.push(e);
            x = p;
        }
        (vs, es)
    };
    let (u, v) = g.endpoints(edge);
    let (uv, ue) = chain(u);
    let depth: BTreeMap<usize, usize> = uv.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // Walk v's chain up to the first vertex shared with u's chain.
    let mut vv = vec![v];
    let mut ve = Vec::new();
    let mut x = v;
    while !depth.contains_key(&x) {
        let (p, e) = parent[x].expect("both chains reach the scan root");
        vv.push(p);
        ve.push(e);
        x = p;
    }
    let j = depth[&x];
    let mut vertices: Vec<usize> = uv[..=j].iter().rev().copied().collect();
    let mut edges: Vec<usize> = ue[..j].iter().rev().copied().collect();
    edges.push(edge);
    vertices.extend(&vv);
    edges.extend(&ve);
    let circuit = Trail::new(g, vertices, edges).expect("scan forest yields a valid circuit");
    debug_assert!(circuit.is_circuit() && is_unbalanced(g, &circuit));
    Some(circuit)
}

/// Hunts for an unbalanced circuit in the complement of `c1`'s edges.
fn complement_unbalanced(g: &SignedMultigraph, c1: &Trail) -> Option<Trail> {
    let mut mask = g.full_mask();
    for &e in c1.edges() {
        mask[e] = false;
    }
    find_unbalanced_circuit_in(g, &mask)
}

/// Enumerates the circuits of `g` in a deterministic order (ascending start
/// vertex, then lexicographic by traversal), stopping early when `visit`
/// returns `true`.
pub(crate) fn for_each_circuit(g: &SignedMultigraph, visit: &mut dyn FnMut(&Trail) -> bool) -> bool {
    fn extend(
        g: &SignedMultigraph,
        s: usize,
        path_vertices: &mut Vec<usize>,
        path_edges: &mut Vec<usize>,
        on_vertex: &mut Vec<bool>,
        on_edge: &mut Vec<bool>,
        visit: &mut dyn FnMut(&Trail) -> bool,
    ) -> bool {
        let x = *path_vertices.last().expect("path starts at s");
        for &(e, slot) in g.incidences(x) {
            if on_edge[e] || (g.is_loop(e) && slot == 1) {
                continue;
            }
            let y = g.other_end(e, x);
            if y == s {
                // Closing the walk; keep one of the two traversal directions.
                if path_edges.first().is_none_or(|&first| first < e) {
                    path_vertices.push(s);
                    path_edges.push(e);
                    let t = Trail::new(g, path_vertices.clone(), path_edges.clone())
                        .expect("walk is a valid trail");
                    let stop = visit(&t);
                    path_vertices.pop();
                    path_edges.pop();
                    if stop {
                        return true;
                    }
                }
            } else if y > s && !on_vertex[y] {
                path_vertices.push(y);
                path_edges.push(e);
                on_vertex[y] = true;
                on_edge[e] = true;
                if extend(g, s, path_vertices, path_edges, on_vertex, on_edge, visit) {
                    return true;
                }
                on_edge[e] = false;
                on_vertex[y] = false;
                path_edges.pop();
                path_vertices.pop();
            }
        }
        false
    }

    let mut on_vertex = vec![false; g.vertex_count()];
    let mut on_edge = vec![false; g.edge_count()];
    for s in 0..g.vertex_count() {
        on_vertex[s] = true;
        let stopped = extend(
            g,
            s,
            &mut vec![s],
            &mut Vec::new(),
            &mut on_vertex,
            &mut on_edge,
            visit,
        );
        on_vertex[s] = false;
        if stopped {
            return true;
        }
    }
    false
}

/// Two edge-disjoint unbalanced circuits when they exist; requires a
/// connected eulerian graph. Tries the balance scan's circuit against its
/// complement, then any circuit decomposition with two unbalanced members,
/// and finally falls back to exhaustive circuit enumeration, so an
/// `Ok(None)` is conclusive.
pub fn two_disjoint_unbalanced_circuits(
    g: &SignedMultigraph,
) -> Result<Option<(Trail, Trail)>> {
    if !g.is_eulerian() {
        return Err(invalid("graph is not connected eulerian"));
    }
    let Some(c1) = find_unbalanced_circuit(g) else {
        return Ok(None);
    };
    if let Some(c2) = complement_unbalanced(g, &c1) {
        return Ok(Some((c1, c2)));
    }
    if let Ok(d) = circuit_decomposition(g) {
        let unbalanced: Vec<&Trail> = d
            .circuits()
            .iter()
            .filter(|c| is_unbalanced(g, c))
            .collect();
        if let [a, b, ..] = unbalanced.as_slice() {
            return Ok(Some(((*a).clone(), (*b).clone())));
        }
    }
    let mut found = None;
    for_each_circuit(g, &mut |c| {
        if !is_unbalanced(g, c) {
            return false;
        }
        if let Some(c2) = complement_unbalanced(g, c) {
            found = Some((c.clone(), c2));
            return true;
        }
        false
    });
    Ok(found)
}

// ----- tree partition -------------------------------------------------------

/// Splits a tree into three connected parts, each containing an odd number
/// of black vertices. Requires an odd black count of at least three.
///
/// While the two lowest-numbered leaves are not both black, the lowest white
/// leaf is removed and later rejoins the part of its neighbour; once they
/// are, those two leaves split off as singleton parts and everything else
/// (holding the remaining odd number of blacks) forms the third.
pub fn tree_partition_odd_black(
    vertex_count: usize,
    tree_edges: &[(usize, usize)],
    black: &[bool],
) -> Result<[Vec<usize>; 3]> {
    if black.len() != vertex_count {
        return Err(invalid("one colour per vertex required"));
    }
    if tree_edges.len() + 1 != vertex_count {
        return Err(invalid("a tree has exactly one edge fewer than vertices"));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); vertex_count];
    for &(u, v) in tree_edges {
        if u >= vertex_count || v >= vertex_count || u == v {
            return Err(invalid("tree edge endpoints out of range"));
        }
        if !adj[u].insert(v) || !adj[v].insert(u) {
            return Err(invalid("repeated tree edge"));
        }
    }
    // Connectivity: |E| = |V| - 1 plus connected means a tree.
    {
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(invalid("edges do not form a connected tree"));
        }
    }
    let colour = black.to_vec();
    let blacks = colour.iter().filter(|&&b| b).count();
    if blacks % 2 == 0 || blacks < 3 {
        return Err(invalid(format!(
            "{blacks} black vertices; an odd count of at least three is required"
        )));
    }

    // Only white leaves are ever removed, so the alive tree always keeps all
    // blacks (at least three vertices) and therefore at least two leaves.
    let mut alive = vec![true; vertex_count];
    let mut removed: Vec<(usize, usize)> = Vec::new(); // (leaf, neighbour), removal order
    let (s1, s2) = loop {
        let leaves: Vec<usize> = (0..vertex_count)
            .filter(|&v| alive[v] && adj[v].len() == 1)
            .collect();
        if colour[leaves[0]] && colour[leaves[1]] {
            break (leaves[0], leaves[1]);
        }
        let leaf = *leaves
            .iter()
            .find(|&&v| !colour[v])
            .expect("a white leaf exists when the two lowest are not both black");
        let nb = *adj[leaf].iter().next().expect("leaf has a neighbour");
        alive[leaf] = false;
        adj[nb].remove(&leaf);
        adj[leaf].clear();
        removed.push((leaf, nb));
    };

    // The two black leaves become singleton parts; the rest of the alive
    // tree, holding the remaining odd number of blacks, is the third.
    let mut part_of: Vec<Option<u8>> = vec![None; vertex_count];
    part_of[s1] = Some(1);
    part_of[s2] = Some(2);
    for v in 0..vertex_count {
        if alive[v] && part_of[v].is_none() {
            part_of[v] = Some(0);
        }
    }

    // Reattach removed leaves to their neighbour's part, most recent first.
    for &(leaf, nb) in removed.iter().rev() {
        part_of[leaf] = part_of[nb];
    }

    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (v, assigned) in part_of.iter().enumerate() {
        let p = assigned.ok_or_else(|| Error::Internal("vertex left unassigned".into()))?;
        parts[p as usize].push(v);
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Internal("a part came out empty".into()));
    }
    parts.sort_by_key(|p| p[0]);
    Ok(parts)
}

// ----- odd triples and even covers ------------------------------------------

/// Three edge-disjoint connected even subgraphs, each with an odd number of
/// negative edges, that together exhaust the edge set. `common_vertex` is a
/// vertex on all three parts when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddTriple {
    pub parts: [BTreeSet<usize>; 3],
    pub common_vertex: Option<usize>,
}

impl OddTriple {
    /// Validates every defining property against `g`.
    pub fn check(&self, g: &SignedMultigraph) -> Result<()> {
        let mut count = vec![0usize; g.edge_count()];
        for part in &self.parts {
            for &e in part {
                g.check_edge(e)?;
                count[e] += 1;
            }
        }
        if let Some(e) = count.iter().position(|&k| k != 1) {
            return Err(invalid(format!(
                "edge {e} appears in {} parts; the parts must partition the edges",
                count[e]
            )));
        }
        for (i, part) in self.parts.iter().enumerate() {
            if !g.is_even_connected_subgraph(part) {
                return Err(invalid(format!(
                    "part {} is not a connected even subgraph",
                    i + 1
                )));
            }
            if g.negative_count(part).is_multiple_of(2) {
                return Err(invalid(format!(
                    "part {} has evenly many negative edges",
                    i + 1
                )));
            }
        }
        if let Some(v) = self.common_vertex {
            for (i, part) in self.parts.iter().enumerate() {
                if !g.vertices_of(part).contains(&v) {
                    return Err(invalid(format!(
                        "vertex {v} does not lie on part {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Two connected even subgraphs with evenly many negative edges each, jointly
/// covering every edge. Edges in both halves are covered twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenCover {
    pub halves: [BTreeSet<usize>; 2],
}

impl EvenCover {
    /// Validates every defining property against `g`.
    pub fn check(&self, g: &SignedMultigraph) -> Result<()> {
        for (i, half) in self.halves.iter().enumerate() {
            for &e in half {
                g.check_edge(e)?;
            }
            if !g.is_even_connected_subgraph(half) {
                return Err(invalid(format!(
                    "half {} is not a connected even subgraph",
                    i + 1
                )));
            }
            if g.negative_count(half) % 2 == 1 {
                return Err(invalid(format!(
                    "half {} has oddly many negative edges",
                    i + 1
                )));
            }
        }
        for e in 0..g.edge_count() {
            if !self.halves[0].contains(&e) && !self.halves[1].contains(&e) {
                return Err(invalid(format!("edge {e} is covered by neither half")));
            }
        }
        Ok(())
    }
}

/// Builds an odd triple for a connected eulerian graph with oddly many
/// negative edges and two edge-disjoint unbalanced circuits: the circuits of
/// a decomposition anchored at those two are grouped by a spanning tree of
/// their intersection graph, partitioned so each group holds oddly many
/// unbalanced circuits.
pub fn odd_triple_decomposition(g: &SignedMultigraph) -> Result<OddTriple> {
    if !g.is_eulerian() {
        return Err(invalid("graph is not connected eulerian"));
    }
    if g.negative_parity() != Parity::Odd {
        return Err(invalid("graph has evenly many negative edges"));
    }
    let (c1, c2) = two_disjoint_unbalanced_circuits(g)?.ok_or_else(|| {
        invalid("graph has no two edge-disjoint unbalanced circuits")
    })?;
    let mut mask = g.full_mask();
    for &e in c1.edges().iter().chain(c2.edges()) {
        mask[e] = false;
    }
    let mut circuits = vec![c1, c2];
    circuits.extend(circuit_decomposition_in(g, &mask)?);

    let vertex_sets: Vec<BTreeSet<usize>> = circuits.iter().map(vertex_set).collect();
    let k = circuits.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in (i + 1)..k {
            if !vertex_sets[i].is_disjoint(&vertex_sets[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    // BFS spanning tree of the circuit intersection graph.
    let mut tree_edges = Vec::with_capacity(k.saturating_sub(1));
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                tree_edges.push((x, y));
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Internal(
            "circuit intersection graph of a connected graph must be connected".into(),
        ));
    }
    let black: Vec<bool> = circuits.iter().map(|c| is_unbalanced(g, c)).collect();
    let groups = tree_partition_odd_black(k, &tree_edges, &black)?;
    let mut parts: Vec<BTreeSet<usize>> = groups
        .iter()
        .map(|group| {
            group
                .iter()
                .flat_map(|&i| circuits[i].edges().iter().copied())
                .collect()
        })
        .collect();
    parts.sort_by_key(|p| *p.iter().next().expect("parts are nonempty"));
    let vs: Vec<BTreeSet<usize>> = parts.iter().map(|p| g.vertices_of(p)).collect();
    let common_vertex = vs[0]
        .iter()
        .find(|v| vs[1].contains(v) && vs[2].contains(v))
        .copied();
    let triple = OddTriple {
        parts: [parts[0].clone(), parts[1].clone(), parts[2].clone()],
        common_vertex,
    };
    triple
        .check(g)
        .map_err(|e| Error::Internal(format!("constructed triple fails validation: {e}")))?;
    Ok(triple)
}

/// Merges an odd triple into an even cover: the part sharing vertices with
/// both others becomes the middle, and each half unites the middle with one
/// outer part. When all three parts pairwise share vertices the second part
/// is the middle.
pub fn even_cover_from_triple(g: &SignedMultigraph, triple: &OddTriple) -> Result<EvenCover> {
    triple.check(g)?;
    let vs: Vec<BTreeSet<usize>> = triple.parts.iter().map(|p| g.vertices_of(p)).collect();
    let share = |i: usize, j: usize| !vs[i].is_disjoint(&vs[j]);
    let middle = match (share(0, 1), share(0, 2), share(1, 2)) {
        (true, true, true) => 1,
        (true, true, false) => 0,
        (true, false, true) => 1,
        (false, true, true) => 2,
        _ => {
            // The triple's union is connected, so its parts always chain.
            return Err(Error::Internal(
                "the triple's parts do not chain together".into(),
            ));
        }
    };
    let outer: Vec<usize> = (0..3).filter(|&i| i != middle).collect();
    let unite = |a: usize, b: usize| -> BTreeSet<usize> {
        triple.parts[a].union(&triple.parts[b]).copied().collect()
    };
    let cover = EvenCover {
        halves: [unite(outer[0], middle), unite(middle, outer[1])],
    };
    cover
        .check(g)
        .map_err(|e| Error::Internal(format!("constructed cover fails validation: {e}")))?;
    Ok(cover)
}

// ----- triply odd search ----------------------------------------------------

/// Node allowance for [`triply_odd`].
pub const DEFAULT_TRIPLY_ODD_BUDGET: u64 = 100_000_000;

/// Searches for an odd triple whose three parts share a vertex; requires a
/// connected eulerian graph. `Ok(None)` is conclusive: no such triple exists.
pub fn triply_odd(g: &SignedMultigraph) -> Result<Option<OddTriple>> {
    triply_odd_with_budget(g, DEFAULT_TRIPLY_ODD_BUDGET)
}

struct TriplySearch<'a> {
    g: &'a SignedMultigraph,
    v: usize,
    assign: Vec<Option<u8>>,
    // Degree parity per part per vertex, negative-count parity per part.
    deg_odd: [Vec<bool>; 3],
    neg_odd: [bool; 3],
    edges_at_v: [usize; 3],
    parts_used: usize,
    rem_nonloop_half: Vec<usize>,
    rem_half_at_v: usize,
    rem_neg: usize,
    nodes: u64,
    budget: u64,
}

impl TriplySearch<'_> {
    fn feasible(&self) -> bool {
        for u in 0..self.g.vertex_count() {
            let odd_parts = (0..3).filter(|&p| self.deg_odd[p][u]).count();
            let rem = self.rem_nonloop_half[u];
            if rem < odd_parts || !(rem - odd_parts).is_multiple_of(2) {
                return false;
            }
        }
        let even_neg_parts = (0..3).filter(|&p| !self.neg_odd[p]).count();
        if self.rem_neg < even_neg_parts || !(self.rem_neg - even_neg_parts).is_multiple_of(2) {
            return false;
        }
        let lacking = (0..3).filter(|&p| self.edges_at_v[p] == 0).count();
        self.rem_half_at_v >= 2 * lacking
    }

    fn place(&mut self, e: usize, p: usize) {
        let g = self.g;
        let (u, w) = g.endpoints(e);
        self.assign[e] = Some(p as u8);
        if g.is_loop(e) {
            if u == self.v {
                self.rem_half_at_v -= 2;
                self.edges_at_v[p] += 1;
            }
        } else {
            for end in [u, w] {
                self.deg_odd[p][end] = !self.deg_odd[p][end];
                self.rem_nonloop_half[end] -= 1;
                if end == self.v {
                    self.rem_half_at_v -= 1;
                    self.edges_at_v[p] += 1;
                }
            }
        }
        if g.sign(e) == Sign::Negative {
            self.neg_odd[p] = !self.neg_odd[p];
            self.rem_neg -= 1;
        }
    }

    fn unplace(&mut self, e: usize, p: usize) {
        let g = self.g;
        let (u, w) = g.endpoints(e);
        self.assign[e] = None;
        if g.is_loop(e) {
            if u == self.v {
                self.rem_half_at_v += 2;
                self.edges_at_v[p] -= 1;
            }
        } else {
            for end in [u, w] {
                self.deg_odd[p][end] = !self.deg_odd[p][end];
                self.rem_nonloop_half[end] += 1;
                if end == self.v {
                    self.rem_half_at_v += 1;
                    self.edges_at_v[p] -= 1;
                }
            }
        }
        if g.sign(e) == Sign::Negative {
            self.neg_odd[p] = !self.neg_odd[p];
            self.rem_neg += 1;
        }
    }

    fn search(&mut self, e: usize) -> Result<Option<[BTreeSet<usize>; 3]>> {
        if e == self.g.edge_count() {
            let mut parts: [BTreeSet<usize>; 3] = Default::default();
            for (id, a) in self.assign.iter().enumerate() {
                parts[a.expect("complete assignment") as usize].insert(id);
            }
            if parts.iter().all(|p| self.g.is_even_connected_subgraph(p)) {
                return Ok(Some(parts));
            }
            return Ok(None);
        }
        // A part enters play only in index order.
        let limit = (self.parts_used + 1).min(3);
        for p in 0..limit {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExhausted { nodes: self.nodes });
            }
            let fresh = p == self.parts_used;
            self.place(e, p);
            if fresh {
                self.parts_used += 1;
            }
            if self.feasible() {
                if let Some(found) = self.search(e + 1)? {
                    return Ok(Some(found));
                }
            }
            if fresh {
                self.parts_used -= 1;
            }
            self.unplace(e, p);
        }
        Ok(None)
    }
}

/// [`triply_odd`] with an explicit node budget; exhausting it reports the
/// question as undecided rather than answering it.
pub fn triply_odd_with_budget(g: &SignedMultigraph, budget: u64) -> Result<Option<OddTriple>> {
    if !g.is_eulerian() {
        return Err(invalid("graph is not connected eulerian"));
    }
    // A triple's union has oddly many negative edges spread over three parts,
    // so fewer than three edges or even parity is conclusively negative.
    if g.edge_count() < 3 || g.negative_parity() != Parity::Odd {
        return Ok(None);
    }
    let mut nodes_spent = 0u64;
    for v in 0..g.vertex_count() {
        if g.degree(v) < 6 {
            continue;
        }
        let mut search = TriplySearch {
            g,
            v,
            assign: vec![None; g.edge_count()],
            deg_odd: [
                vec![false; g.vertex_count()],
                vec![false; g.vertex_count()],
                vec![false; g.vertex_count()],
            ],
            neg_odd: [false; 3],
            edges_at_v: [0; 3],
            parts_used: 0,
            rem_nonloop_half: (0..g.vertex_count())
                .map(|u| {
                    g.incidences(u)
                        .iter()
                        .filter(|&&(e, _)| !g.is_loop(e))
                        .count()
                })
                .collect(),
            rem_half_at_v: g.degree(v),
            rem_neg: g.edges().filter(|(_, e)| e.sign == Sign::Negative).count(),
            nodes: nodes_spent,
            budget,
        };
        if let Some(parts) = search.search(0)? {
            let vs: Vec<BTreeSet<usize>> = parts.iter().map(|p| g.vertices_of(p)).collect();
            let common_vertex = vs[0]
                .iter()
                .find(|x| vs[1].contains(x) && vs[2].contains(x))
                .copied();
            debug_assert!(common_vertex.is_some());
            let triple = OddTriple {
                parts,
                common_vertex,
            };
            triple
                .check(g)
                .map_err(|e| Error::Internal(format!("found triple fails validation: {e}")))?;
            return Ok(Some(triple));
        }
        nodes_spent = search.nodes;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign::{Negative as N, Positive as P};
    use proptest::prelude::*;

    fn g(n: usize, edges: &[(usize, usize, Sign)]) -> SignedMultigraph {
        SignedMultigraph::new(n, edges.to_vec()).unwrap()
    }

    fn edge_set(trail: &Trail) -> BTreeSet<usize> {
        trail.edges().iter().copied().collect()
    }

    fn bouquet3() -> SignedMultigraph {
        g(1, &[(0, 0, N), (0, 0, N), (0, 0, N)])
    }

    fn phi4_prototype() -> SignedMultigraph {
        g(
            4,
            &[
                (0, 0, N),
                (0, 1, P),
                (0, 1, P),
                (1, 2, N),
                (1, 2, P),
                (2, 3, P),
                (2, 3, P),
                (3, 3, N),
            ],
        )
    }

    #[test]
    fn eulerian_trail_prefers_low_edges() {
        let t = eulerian_trail(&bouquet3()).unwrap();
        assert_eq!(t.edges(), &[0, 1, 2]);
        assert_eq!(t.vertices(), &[0, 0, 0, 0]);

        let tri = g(3, &[(0, 1, P), (1, 2, P), (0, 2, P)]);
        let t = eulerian_trail(&tri).unwrap();
        assert_eq!(t.edges(), &[0, 1, 2]);
        assert!(t.is_closed());
    }

    #[test]
    fn eulerian_trail_rejects_odd_and_disconnected() {
        let path = g(2, &[(0, 1, P)]);
        assert!(eulerian_trail(&path).is_err());
        let two_loops = g(2, &[(0, 0, P), (1, 1, P)]);
        assert!(eulerian_trail(&two_loops).is_err());
    }

    #[test]
    fn masked_eulerian_trail_stays_in_the_mask() {
        let h = g(3, &[(0, 1, P), (1, 2, P), (0, 2, P), (2, 2, N)]);
        let t = eulerian_trail_in(&h, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(t.edges(), &[0, 1, 2]);
        let t = eulerian_trail_in(&h, &BTreeSet::from([3])).unwrap();
        assert_eq!(t.edges(), &[3]);
    }

    #[test]
    fn circuit_decomposition_partitions_even_graphs() {
        let eight = g(3, &[(0, 1, P), (0, 1, N), (1, 2, P), (1, 2, N)]);
        let d = circuit_decomposition(&eight).unwrap();
        d.check(&eight).unwrap();
        assert_eq!(d.circuits().len(), 2);

        let d = circuit_decomposition(&phi4_prototype()).unwrap();
        d.check(&phi4_prototype()).unwrap();

        let odd = g(2, &[(0, 1, P)]);
        assert!(circuit_decomposition(&odd).is_err());
    }

    #[test]
    fn unbalanced_circuit_comes_from_the_scan() {
        let balanced = g(2, &[(0, 1, N), (0, 1, N)]);
        assert!(find_unbalanced_circuit(&balanced).is_none());

        let c = find_unbalanced_circuit(&phi4_prototype()).unwrap();
        assert_eq!(c.edges(), &[0]);

        let tri = g(3, &[(0, 1, P), (1, 2, P), (0, 2, N)]);
        let c = find_unbalanced_circuit(&tri).unwrap();
        assert!(c.is_circuit());
        assert_eq!(edge_set(&c), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn disjoint_unbalanced_circuits_on_the_prototype() {
        let h = phi4_prototype();
        let (c1, c2) = two_disjoint_unbalanced_circuits(&h).unwrap().unwrap();
        assert_eq!(edge_set(&c1), BTreeSet::from([0]));
        assert_eq!(edge_set(&c2), BTreeSet::from([3, 4]));
        assert!(is_unbalanced(&h, &c1) && is_unbalanced(&h, &c2));
    }

    #[test]
    fn disjoint_unbalanced_circuits_absent_when_tightly_unbalanced() {
        let neg_tri = g(3, &[(0, 1, N), (1, 2, N), (0, 2, N)]);
        assert!(two_disjoint_unbalanced_circuits(&neg_tri).unwrap().is_none());
        let one_loop = g(1, &[(0, 0, N)]);
        assert!(two_disjoint_unbalanced_circuits(&one_loop).unwrap().is_none());
        let two_comps = g(2, &[(0, 0, N), (1, 1, N)]);
        assert!(two_disjoint_unbalanced_circuits(&two_comps).is_err());
    }

    #[test]
    fn circuit_enumeration_counts_match() {
        // Complete graph on four vertices: four triangles plus three squares.
        let k4 = g(
            4,
            &[
                (0, 1, P),
                (0, 2, P),
                (0, 3, P),
                (1, 2, P),
                (1, 3, P),
                (2, 3, P),
            ],
        );
        let mut count = 0;
        for_each_circuit(&k4, &mut |c| {
            assert!(c.is_circuit());
            count += 1;
            false
        });
        assert_eq!(count, 7);

        // A loop and a digon.
        let h = g(2, &[(0, 0, N), (0, 1, P), (0, 1, N)]);
        let mut seen = Vec::new();
        for_each_circuit(&h, &mut |c| {
            seen.push(edge_set(c));
            false
        });
        assert_eq!(seen, vec![BTreeSet::from([0]), BTreeSet::from([1, 2])]);
    }

    #[test]
    fn tree_partition_on_small_trees() {
        // Path on three black vertices: three singletons.
        let parts = tree_partition_odd_black(3, &[(0, 1), (1, 2)], &[true; 3]).unwrap();
        assert_eq!(parts, [vec![0], vec![1], vec![2]]);

        // Star with white centre: the two lowest black leaves split off and
        // the centre stays with the remaining leaf.
        let parts = tree_partition_odd_black(
            4,
            &[(0, 1), (0, 2), (0, 3)],
            &[false, true, true, true],
        )
        .unwrap();
        assert_eq!(parts, [vec![0, 3], vec![1], vec![2]]);
    }

    #[test]
    fn tree_partition_rejects_bad_inputs() {
        assert!(tree_partition_odd_black(3, &[(0, 1)], &[true; 3]).is_err());
        assert!(tree_partition_odd_black(3, &[(0, 1), (1, 2)], &[true, true, false]).is_err());
        assert!(tree_partition_odd_black(4, &[(0, 1), (1, 0), (2, 3)], &[true; 4]).is_err());
    }

    fn check_tree_partition(
        vertex_count: usize,
        tree_edges: &[(usize, usize)],
        black: &[bool],
        parts: &[Vec<usize>; 3],
    ) {
        let mut seen = vec![false; vertex_count];
        for part in parts {
            assert!(!part.is_empty());
            for &v in part {
                assert!(!seen[v], "vertex {v} in two parts");
                seen[v] = true;
            }
            let blacks = part.iter().filter(|&&v| black[v]).count();
            assert_eq!(blacks % 2, 1, "part {part:?} has {blacks} blacks");
            // Connectivity within the tree.
            let inside: BTreeSet<usize> = part.iter().copied().collect();
            let mut reached = BTreeSet::from([part[0]]);
            let mut queue = VecDeque::from([part[0]]);
            while let Some(x) = queue.pop_front() {
                for &(a, b) in tree_edges {
                    for (s, t) in [(a, b), (b, a)] {
                        if s == x && inside.contains(&t) && reached.insert(t) {
                            queue.push_back(t);
                        }
                    }
                }
            }
            assert_eq!(reached.len(), part.len(), "part {part:?} is disconnected");
        }
        assert!(seen.iter().all(|&s| s), "some vertex is unassigned");
    }

    proptest! {
        #[test]
        fn tree_partition_is_valid_on_random_trees(
            pruefer in proptest::collection::vec(0usize..12, 1..10),
            black_seed in proptest::collection::vec(any::<bool>(), 12),
        ) {
            let n = pruefer.len() + 2;
            let pruefer: Vec<usize> = pruefer.iter().map(|&x| x % n).collect();
            // Standard decoding of a Pruefer sequence into tree edges.
            let mut degree = vec![1usize; n];
            for &x in &pruefer {
                degree[x] += 1;
            }
            let mut edges = Vec::new();
            let mut degree_now = degree.clone();
            for &x in &pruefer {
                let leaf = (0..n).find(|&v| degree_now[v] == 1).unwrap();
                edges.push((leaf, x));
                degree_now[leaf] -= 1;
                degree_now[x] -= 1;
            }
            let last: Vec<usize> = (0..n).filter(|&v| degree_now[v] == 1).collect();
            edges.push((last[0], last[1]));

            let mut black: Vec<bool> = (0..n).map(|v| black_seed[v]).collect();
            // Force an odd count of at least three.
            let mut count = black.iter().filter(|&&b| b).count();
            if count % 2 == 0 {
                if count == n {
                    black[0] = false;
                    count -= 1;
                } else {
                    let w = (0..n).position(|v| !black[v]).unwrap();
                    black[w] = true;
                    count += 1;
                }
            }
            if count < 3 {
                let whites: Vec<usize> = (0..n).filter(|&v| !black[v]).collect();
                for &w in whites.iter().take(2) {
                    black[w] = true;
                }
                count += 2;
            }
            prop_assert!(count >= 3 && count % 2 == 1);

            let parts = tree_partition_odd_black(n, &edges, &black).unwrap();
            check_tree_partition(n, &edges, &black, &parts);
        }
    }

    #[test]
    fn prototype_pipeline_produces_triple_and_cover() {
        let h = phi4_prototype();
        let triple = odd_triple_decomposition(&h).unwrap();
        triple.check(&h).unwrap();
        // No vertex can lie on all three parts: that would witness a
        // three-part structure this graph does not admit.
        assert_eq!(triple.common_vertex, None);
        let cover = even_cover_from_triple(&h, &triple).unwrap();
        cover.check(&h).unwrap();
    }

    #[test]
    fn bouquet_pipeline_produces_common_vertex() {
        let b = bouquet3();
        let triple = odd_triple_decomposition(&b).unwrap();
        triple.check(&b).unwrap();
        assert_eq!(triple.common_vertex, Some(0));
        let cover = even_cover_from_triple(&b, &triple).unwrap();
        assert_eq!(
            cover.halves,
            [BTreeSet::from([0, 1]), BTreeSet::from([1, 2])]
        );
    }

    #[test]
    fn pipeline_rejects_even_or_inadmissible_graphs() {
        let digon = g(2, &[(0, 1, N), (0, 1, N)]);
        assert!(odd_triple_decomposition(&digon).is_err());
        let neg_tri = g(3, &[(0, 1, N), (1, 2, N), (0, 2, N)]);
        assert!(odd_triple_decomposition(&neg_tri).is_err());
    }

    #[test]
    fn triply_odd_finds_the_bouquet_split() {
        let b = bouquet3();
        let triple = triply_odd(&b).unwrap().unwrap();
        assert_eq!(
            triple.parts,
            [
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([2])
            ]
        );
        assert_eq!(triple.common_vertex, Some(0));
    }

    #[test]
    fn triply_odd_conclusive_negatives() {
        // Even negative count.
        assert!(triply_odd(&g(2, &[(0, 1, N), (0, 1, N)])).unwrap().is_none());
        // Odd but too sparse at every vertex.
        let neg_tri = g(3, &[(0, 1, N), (1, 2, N), (0, 2, N)]);
        assert!(triply_odd(&neg_tri).unwrap().is_none());
        // The prototype admits triples but none with a shared vertex.
        assert!(triply_odd(&phi4_prototype()).unwrap().is_none());
    }

    #[test]
    fn triply_odd_on_tripled_triangle() {
        // Three parallel edges per side of a triangle, all negative: one
        // triangle per parallel class gives three odd parts sharing vertex 0.
        let mut edges = Vec::new();
        for _ in 0..3 {
            edges.extend([(0, 1, N), (1, 2, N), (0, 2, N)]);
        }
        let h = g(3, &edges);
        let triple = triply_odd(&h).unwrap().unwrap();
        triple.check(&h).unwrap();
        assert!(triple.common_vertex.is_some());
    }

    #[test]
    fn triply_odd_budget_exhaustion_reports_undecided() {
        let b = bouquet3();
        match triply_odd_with_budget(&b, 1) {
            Err(Error::BudgetExhausted { .. }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}

//! Bidirected orientations and group-valued flows.
//!
//! Each edge is oriented per *half-edge*: slot 0 at its `u` end, slot 1 at
//! its `v` end. Compatibility with the signature: a positive edge has exactly
//! one half-edge directed out (an ordinary directed edge), a negative edge
//! has both half-edges out (*extroverted*) or both in (*introverted*).
//! Reversing an edge flips both half-edges and negates its value; a flow and
//! its edge-reversals represent the same object.
//!
//! A flow assigns a group value to every edge so that Kirchhoff's law holds
//! at each vertex: summing over the half-edges at the vertex, outgoing values
//! count positively and incoming negatively. A loop contributes once per
//! half-edge, so an extroverted loop adds twice its value at its vertex and
//! an ordinary loop cancels itself.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::graph::{Sign, SignedMultigraph, Trail};
use crate::groups::{GroupElement, GroupSpec};

/// Direction of one half-edge, relative to its vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfDir {
    Out,
    In,
}

impl HalfDir {
    pub fn flipped(self) -> HalfDir {
        match self {
            HalfDir::Out => HalfDir::In,
            HalfDir::In => HalfDir::Out,
        }
    }

    /// Contribution sign at the half-edge's vertex: `Out` adds, `In` subtracts.
    pub fn signum(self) -> i64 {
        match self {
            HalfDir::Out => 1,
            HalfDir::In => -1,
        }
    }
}

/// A bidirected orientation: one direction per half-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    dirs: Vec<(HalfDir, HalfDir)>,
}

impl Orientation {
    pub fn new(dirs: Vec<(HalfDir, HalfDir)>) -> Orientation {
        Orientation { dirs }
    }

    /// The canonical compatible orientation: positive edges directed from `u`
    /// to `v`, negative edges extroverted.
    pub fn canonical(g: &SignedMultigraph) -> Orientation {
        let dirs = g
            .edges()
            .map(|(_, e)| match e.sign {
                Sign::Positive => (HalfDir::Out, HalfDir::In),
                Sign::Negative => (HalfDir::Out, HalfDir::Out),
            })
            .collect();
        Orientation { dirs }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Half-edge directions of edge `e` as (slot 0 at `u`, slot 1 at `v`).
    pub fn dirs(&self, e: usize) -> (HalfDir, HalfDir) {
        self.dirs[e]
    }

    pub fn reverse(&mut self, e: usize) {
        let (a, b) = self.dirs[e];
        self.dirs[e] = (a.flipped(), b.flipped());
    }

    /// Checks compatibility with the signature of `g`: positive edges carry
    /// one outgoing and one incoming half-edge, negative edges two equal ones.
    pub fn is_compatible_with(&self, g: &SignedMultigraph) -> bool {
        self.dirs.len() == g.edge_count()
            && g.edges().all(|(id, e)| {
                let (a, b) = self.dirs[id];
                match e.sign {
                    Sign::Positive => a != b,
                    Sign::Negative => a == b,
                }
            })
    }
}

/// A group-valued assignment on the edges of a graph under a bidirected
/// orientation. Not every `Flow` satisfies Kirchhoff's law; [`Flow::verify`]
/// reports whether it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    group: GroupSpec,
    orientation: Orientation,
    values: Vec<GroupElement>,
}

/// Outcome of verifying a flow: whether Kirchhoff's law holds everywhere,
/// which vertices violate it, which edges carry zero, and (for integer flows)
/// the largest absolute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub kirchhoff_ok: bool,
    pub violating_vertices: Vec<usize>,
    pub zero_edges: Vec<usize>,
    pub max_abs: Option<u64>,
}

impl VerifyReport {
    /// True when the assignment is a flow (Kirchhoff everywhere) with no zero
    /// edge.
    pub fn is_nowhere_zero_flow(&self) -> bool {
        self.kirchhoff_ok && self.zero_edges.is_empty()
    }
}

impl Flow {
    pub fn new(group: GroupSpec, orientation: Orientation, values: Vec<GroupElement>) -> Result<Flow> {
        if orientation.len() != values.len() {
            return Err(invalid(format!(
                "orientation covers {} edges but {} values given",
                orientation.len(),
                values.len()
            )));
        }
        // Surface rank/range mismatches immediately.
        for v in &values {
            group.is_zero(v)?;
        }
        Ok(Flow {
            group,
            orientation,
            values,
        })
    }

    /// The all-zero assignment under the canonical orientation.
    pub fn zero(g: &SignedMultigraph, group: GroupSpec) -> Flow {
        let values = vec![group.zero(); g.edge_count()];
        Flow {
            orientation: Orientation::canonical(g),
            group,
            values,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn value(&self, e: usize) -> &GroupElement {
        &self.values[e]
    }

    /// Checks that this flow lives on `g`: matching edge count and an
    /// orientation compatible with the signature.
    pub fn validate_for(&self, g: &SignedMultigraph) -> Result<()> {
        if self.values.len() != g.edge_count() {
            return Err(invalid(format!(
                "flow covers {} edges but the graph has {}",
                self.values.len(),
                g.edge_count()
            )));
        }
        if !self.orientation.is_compatible_with(g) {
            return Err(invalid(
                "orientation is incompatible with the graph's signature",
            ));
        }
        Ok(())
    }

    /// Flips both half-edges of `e` and negates its value. The represented
    /// flow is unchanged.
    pub fn reverse_edge(&mut self, e: usize) -> Result<()> {
        if e >= self.values.len() {
            return Err(invalid(format!("edge {e} exceeds flow size")));
        }
        self.orientation.reverse(e);
        self.values[e] = self.group.negate(&self.values[e])?;
        Ok(())
    }

    /// Evaluates Kirchhoff's law at every vertex of `g` and summarises the
    /// result. Fails only when the flow does not live on `g` at all.
    pub fn verify(&self, g: &SignedMultigraph) -> Result<VerifyReport> {
        self.validate_for(g)?;
        let mut sums = vec![self.group.zero(); g.vertex_count()];
        for (id, e) in g.edges() {
            let (du, dv) = self.orientation.dirs(id);
            for (end, dir) in [(e.u, du), (e.v, dv)] {
                let term = self.group.scalar_mul(dir.signum(), &self.values[id])?;
                sums[end] = self.group.add(&sums[end], &term)?;
            }
        }
        let mut violating_vertices = Vec::new();
        for (v, s) in sums.iter().enumerate() {
            if !self.group.is_zero(s)? {
                violating_vertices.push(v);
            }
        }
        let mut zero_edges = Vec::new();
        for (e, val) in self.values.iter().enumerate() {
            if self.group.is_zero(val)? {
                zero_edges.push(e);
            }
        }
        let max_abs = match self.group {
            GroupSpec::Integers => Some(
                self.values
                    .iter()
                    .map(|v| v.coords()[0].unsigned_abs())
                    .max()
                    .unwrap_or(0),
            ),
            GroupSpec::Cyclic(_) => None,
        };
        Ok(VerifyReport {
            kirchhoff_ok: violating_vertices.is_empty(),
            violating_vertices,
            zero_edges,
            max_abs,
        })
    }

    /// Sum of the values on negative edges, read in the extroverted sense:
    /// an introverted edge contributes its negated value. For any flow
    /// satisfying Kirchhoff's law this sum is zero.
    pub fn extroverted_negative_sum(&self, g: &SignedMultigraph) -> Result<GroupElement> {
        self.validate_for(g)?;
        let mut sum = self.group.zero();
        for (id, e) in g.edges() {
            if e.sign != Sign::Negative {
                continue;
            }
            let term = match self.orientation.dirs(id).0 {
                HalfDir::Out => self.values[id].clone(),
                HalfDir::In => self.group.negate(&self.values[id])?,
            };
            sum = self.group.add(&sum, &term)?;
        }
        Ok(sum)
    }
}

/// Reorients the trail consistently — first edge directed out of the start
/// vertex, every internal vertex with exactly one of its two trail half-edges
/// incoming — then adds `b` to each trail edge. Edges whose current
/// orientation disagrees with the consistent one are reversed first (flipping
/// their value), so Kirchhoff's law is preserved at internal vertices; a
/// closed trail with an even number of negative edges preserves it at the
/// start vertex too.
pub fn send_along_trail(
    g: &SignedMultigraph,
    f: &Flow,
    trail: &Trail,
    b: &GroupElement,
) -> Result<Flow> {
    f.validate_for(g)?;
    // Revalidate against this graph: a Trail is plain data and may have been
    // built elsewhere.
    let trail = Trail::new(g, trail.vertices().to_vec(), trail.edges().to_vec())?;
    let group = f.group().clone();
    group.is_zero(b)?;
    let mut out = f.clone();
    let mut depart = HalfDir::Out;
    for (i, &e) in trail.edges().iter().enumerate() {
        let x = trail.vertices()[i];
        let far = match g.sign(e) {
            Sign::Positive => depart.flipped(),
            Sign::Negative => depart,
        };
        let (u, _) = g.endpoints(e);
        // Desired half-directions by slot; for a loop the departure occupies
        // slot 0 by convention (the two slots sit at the same vertex, so the
        // choice does not affect Kirchhoff sums).
        let desired = if g.is_loop(e) || u == x {
            (depart, far)
        } else {
            (far, depart)
        };
        if out.orientation.dirs(e) != desired {
            out.reverse_edge(e)?;
        }
        debug_assert_eq!(out.orientation.dirs(e), desired);
        out.values[e] = group.add(&out.values[e], b)?;
        depart = far.flipped();
    }
    Ok(out)
}

/// Transports a flow across a switch: returns the switched graph and the
/// same values under the transported orientation, where every half-edge at a
/// vertex of `at` flips direction. Verification verdicts are preserved.
pub fn switch_flow(
    g: &SignedMultigraph,
    f: &Flow,
    at: &BTreeSet<usize>,
) -> Result<(SignedMultigraph, Flow)> {
    f.validate_for(g)?;
    let switched = g.switch(at)?;
    let mut out = f.clone();
    for (id, e) in g.edges() {
        let (mut du, mut dv) = out.orientation.dirs(id);
        if at.contains(&e.u) {
            du = du.flipped();
        }
        if at.contains(&e.v) {
            dv = dv.flipped();
        }
        out.orientation.dirs[id] = (du, dv);
    }
    debug_assert!(out.orientation.is_compatible_with(&switched));
    Ok((switched, out))
}

/// Integer-flow combination `f1 + c·f2`. The second flow's orientation is
/// transported onto the first's edge by edge (reversal negates the value);
/// fails when either flow is not integer-valued, the edge counts differ, or
/// some edge is ordinary in one flow and extroverted/introverted in the
/// other (the flows then live on different signatures).
pub fn combine_integer_flows(f1: &Flow, f2: &Flow, c: i64) -> Result<Flow> {
    let z = GroupSpec::Integers;
    if *f1.group() != z || *f2.group() != z {
        return Err(invalid("flow combination is defined for integer flows"));
    }
    if f1.values.len() != f2.values.len() {
        return Err(invalid(format!(
            "flows cover {} and {} edges; not the same graph",
            f1.values.len(),
            f2.values.len()
        )));
    }
    let mut values = Vec::with_capacity(f1.values.len());
    for e in 0..f1.values.len() {
        let d1 = f1.orientation.dirs(e);
        let d2 = f2.orientation.dirs(e);
        let x2 = if d2 == d1 {
            f2.values[e].clone()
        } else if d2 == (d1.0.flipped(), d1.1.flipped()) {
            z.negate(&f2.values[e])?
        } else {
            return Err(invalid(format!(
                "edge {e} is oriented for different signatures in the two flows"
            )));
        };
        let term = z.scalar_mul(c, &x2)?;
        values.push(z.add(&f1.values[e], &term)?);
    }
    Flow::new(z, f1.orientation.clone(), values)
}

/// Stability of a nowhere-zero integer flow with `max_abs <= 2`: after
/// reversing negatively-valued edges so every value is positive, no vertex
/// may see two half-edges of equal value pointing in opposite directions.
/// A positive loop is always unstable at its vertex: its two half-edges carry
/// the same value in opposite directions.
pub fn is_stable(g: &SignedMultigraph, f: &Flow) -> Result<bool> {
    let report = f.verify(g)?;
    if *f.group() != GroupSpec::Integers {
        return Err(invalid("stability is defined for integer flows"));
    }
    if !report.is_nowhere_zero_flow() || report.max_abs.unwrap_or(0) > 2 {
        return Err(invalid("stability requires a nowhere-zero flow with values in {±1, ±2}"));
    }
    let mut positive = f.clone();
    for e in 0..g.edge_count() {
        if positive.values[e].coords()[0] < 0 {
            positive.reverse_edge(e)?;
        }
    }
    for v in 0..g.vertex_count() {
        // (value, direction) per half-edge at v; a loop shows up twice.
        let mut seen: Vec<(i64, HalfDir)> = Vec::new();
        for &(e, slot) in g.incidences(v) {
            let dirs = positive.orientation.dirs(e);
            let dir = if slot == 0 { dirs.0 } else { dirs.1 };
            let val = positive.values[e].coords()[0];
            if seen.iter().any(|&(w, d)| w == val && d != dir) {
                return Ok(false);
            }
            seen.push((val, dir));
        }
    }
    Ok(true)
}

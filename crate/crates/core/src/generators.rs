//! Deterministic prototype graphs: the smallest member of each flow-number
//! class, plus parametric families used for stress-testing. Every generator
//! is a pure function of its parameters, so serialized output is stable
//! across runs.

use crate::error::{invalid, Result};
use crate::graph::{Sign, SignedMultigraph};

/// A single negative loop: unbalanced, eulerian, and tightly unbalanced, so
/// it admits no flow at all.
pub fn neg_loop() -> SignedMultigraph {
    build(1, vec![(0, 0, Sign::Negative)])
}

/// A single positive loop: balanced and eulerian, the smallest 2-flow graph.
pub fn pos_loop() -> SignedMultigraph {
    build(1, vec![(0, 0, Sign::Positive)])
}

/// Two parallel negative edges: balanced (switch at one endpoint), eulerian,
/// flow number 2.
pub fn neg_digon() -> SignedMultigraph {
    build(
        2,
        vec![(0, 1, Sign::Negative), (0, 1, Sign::Negative)],
    )
}

/// `k` negative loops on one vertex. `bouquet(3)` is the smallest graph of
/// flow number 3.
pub fn bouquet(k: usize) -> Result<SignedMultigraph> {
    if k == 0 {
        return Err(invalid("a bouquet needs at least one loop"));
    }
    Ok(build(1, vec![(0, 0, Sign::Negative); k]))
}

/// The 4-vertex, 8-edge prototype of flow number 4: negative loops at `a`
/// (vertex 0) and `c` (vertex 3), positive digons `a–x` and `c–y`, and a
/// digon `x–y` with one negative and one positive edge.
pub fn phi4_prototype() -> SignedMultigraph {
    build(
        4,
        vec![
            (0, 0, Sign::Negative),
            (0, 1, Sign::Positive),
            (0, 1, Sign::Positive),
            (1, 2, Sign::Negative),
            (1, 2, Sign::Positive),
            (2, 3, Sign::Positive),
            (2, 3, Sign::Positive),
            (3, 3, Sign::Negative),
        ],
    )
}

/// Two unbalanced circuits of lengths `l1` and `l2` joined by a path of
/// length `p` (sharing a single vertex when `p = 0`): the path-joined kind
/// of signed circuit. A circuit of length 1 is a negative loop; longer
/// circuits carry exactly one negative edge.
pub fn barbell(l1: usize, l2: usize, p: usize) -> Result<SignedMultigraph> {
    if l1 < 1 || l2 < 1 {
        return Err(invalid("circuit lengths must be at least 1"));
    }
    let mut edges = Vec::new();

    // First circuit on vertices 0..c1, anchored at 0.
    let c1 = l1.max(1);
    push_unbalanced_circuit(&mut edges, &(0..l1).collect::<Vec<_>>());

    // Path of p edges from vertex 0 through fresh vertices.
    let mut at = 0;
    for i in 0..p {
        let next = c1 + i;
        edges.push((at.min(next), at.max(next), Sign::Positive));
        at = next;
    }

    // Second circuit anchored at the path's far end.
    let base2 = c1 + p;
    let mut vs2 = vec![at];
    vs2.extend(base2..base2 + l2 - 1);
    push_unbalanced_circuit(&mut edges, &vs2);

    let n = base2 + l2 - 1;
    Ok(build(n.max(at + 1), edges))
}

/// Appends an unbalanced circuit through `vs` in order: all edges positive
/// except the closing one. A single vertex yields a negative loop.
fn push_unbalanced_circuit(edges: &mut Vec<(usize, usize, Sign)>, vs: &[usize]) {
    if vs.len() == 1 {
        edges.push((vs[0], vs[0], Sign::Negative));
        return;
    }
    for w in vs.windows(2) {
        edges.push((w[0].min(w[1]), w[0].max(w[1]), Sign::Positive));
    }
    let (first, last) = (vs[0], *vs.last().expect("nonempty"));
    edges.push((first.min(last), first.max(last), Sign::Negative));
}

/// A connected all-negative 6-regular multigraph on `n` vertices, `n` odd:
/// three negative loops for `n = 1`, otherwise the circulant with doubled
/// `(i, i+1)` edges and single `(i, i+2)` edges, all negative. With `3n`
/// edges the negative parity is always odd.
pub fn six_regular_antibalanced(n: usize) -> Result<SignedMultigraph> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(invalid("the vertex count must be odd"));
    }
    if n == 1 {
        return bouquet(3);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push((i.min(j), i.max(j), Sign::Negative));
        edges.push((i.min(j), i.max(j), Sign::Negative));
    }
    for i in 0..n {
        let j = (i + 2) % n;
        edges.push((i.min(j), i.max(j), Sign::Negative));
    }
    Ok(build(n, edges))
}

/// Dispatch by name with positional integer parameters, for the CLI.
/// Names: `neg-loop`, `pos-loop`, `neg-digon`, `bouquet K`,
/// `phi4-prototype`, `barbell L1 L2 P`, `six-regular-antibalanced N`.
pub fn generate(name: &str, params: &[usize]) -> Result<SignedMultigraph> {
    let arity = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(invalid(format!(
                "{name} takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match name {
        "neg-loop" => arity(0).map(|()| neg_loop()),
        "pos-loop" => arity(0).map(|()| pos_loop()),
        "neg-digon" => arity(0).map(|()| neg_digon()),
        "bouquet" => arity(1).and_then(|()| bouquet(params[0])),
        "phi4-prototype" => arity(0).map(|()| phi4_prototype()),
        "barbell" => arity(3).and_then(|()| barbell(params[0], params[1], params[2])),
        "six-regular-antibalanced" => arity(1).and_then(|()| six_regular_antibalanced(params[0])),
        _ => Err(invalid(format!("unknown generator {name:?}"))),
    }
}

fn build(n: usize, edges: Vec<(usize, usize, Sign)>) -> SignedMultigraph {
    SignedMultigraph::new(n, edges).expect("generator edges are in range")
}

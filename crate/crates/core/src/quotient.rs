//! Orbits of `ker f` on `T(m,n)` and graphs of circles.
//!
//! `ker f = phi^-1(Z[1/mn] x| {0})` fixes every level `f(g)` of a vertex
//! `gH` and is transitive on each level, so the quotient of a ball is a path
//! graph `-R -> ... -> R` whose edges carry the embedding degrees `(m, n)`.
//! The general machinery here (signed counts, loop parity) works on any
//! oriented multigraph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Direction, EdgeAddress, OrientedPath, PathStep, Tree, TreeError, VertexAddress};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    InvalidPath(#[from] TreeError),
    #[error("steps do not form a closed loop (break at step {index})")]
    NotALoop { index: usize },
    #[error("loop with unequal forward and backward counts: {witness:?}")]
    UnbalancedLoop { witness: Vec<LoopStep> },
    #[error("vertex {vertex} is not reachable from the base vertex")]
    Disconnected { vertex: usize },
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub id: usize,
    pub mark: i64,
}

/// An oriented edge; `tail_degree` and `head_degree` are the indices of
/// the edge circle in its endpoint circles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    #[serde(rename = "dt")]
    pub tail_degree: i64,
    #[serde(rename = "dh")]
    pub head_degree: i64,
}

/// Graph of groups with every vertex and edge group infinite cyclic.
/// Loops and parallel edges are allowed. Ids equal positions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphOfCircles {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopStep {
    pub edge: usize,
    pub direction: Direction,
}

impl LoopStep {
    pub fn new(edge: usize, direction: Direction) -> Self {
        LoopStep { edge, direction }
    }

    fn reversed(self) -> Self {
        LoopStep {
            edge: self.edge,
            direction: self.direction.reversed(),
        }
    }
}

impl GraphOfCircles {
    pub fn new() -> Self {
        GraphOfCircles::default()
    }

    pub fn add_vertex(&mut self, mark: i64) -> usize {
        let id = self.vertices.len();
        self.vertices.push(GraphVertex { id, mark });
        id
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, tail_degree: i64, head_degree: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(GraphEdge {
            id,
            tail,
            head,
            tail_degree,
            head_degree,
        });
        id
    }

    /// One vertex with one loop edge: the graph of `BS(dt, dh)` itself.
    pub fn single_loop(tail_degree: i64, head_degree: i64) -> Self {
        let mut g = GraphOfCircles::new();
        let v = g.add_vertex(0);
        g.add_edge(v, v, tail_degree, head_degree);
        g
    }

    /// Path `lo -> lo+1 -> ... -> hi` with vertex marks equal to levels.
    pub fn path(lo: i64, hi: i64, tail_degree: i64, head_degree: i64) -> Self {
        let mut g = GraphOfCircles::new();
        for level in lo..=hi {
            g.add_vertex(level);
        }
        for i in 1..g.vertices.len() {
            g.add_edge(i - 1, i, tail_degree, head_degree);
        }
        g
    }

    pub fn validate(&self) -> Result<(), QuotientError> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(QuotientError::MalformedGraph(format!("vertex at position {i} has id {}", v.id)));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i {
                return Err(QuotientError::MalformedGraph(format!("edge at position {i} has id {}", e.id)));
            }
            if e.tail >= self.vertices.len() || e.head >= self.vertices.len() {
                return Err(QuotientError::MalformedGraph(format!("edge {i} has an unknown endpoint")));
            }
            if e.tail_degree == 0 || e.head_degree == 0 {
                return Err(QuotientError::MalformedGraph(format!("edge {i} has a zero degree")));
            }
        }
        Ok(())
    }

    pub fn step_source(&self, s: LoopStep) -> usize {
        let e = &self.edges[s.edge];
        match s.direction {
            Direction::Forward => e.tail,
            Direction::Backward => e.head,
        }
    }

    pub fn step_target(&self, s: LoopStep) -> usize {
        let e = &self.edges[s.edge];
        match s.direction {
            Direction::Forward => e.head,
            Direction::Backward => e.tail,
        }
    }

    /// Whether the graph is a single oriented path `v0 -> v1 -> ... -> vk`
    /// along the vertex order.
    pub fn is_oriented_path(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
            && self
                .edges
                .iter()
                .enumerate()
                .all(|(i, e)| e.tail == i && e.head == i + 1)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph Y {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  v{} [label=\"{}\"];", v.id, v.mark);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{}:{}\"];",
                e.tail, e.head, e.tail_degree, e.head_degree
            );
        }
        out.push_str("}\n");
        out
    }
}

/// How a spanning tree is grown; results that are well defined must not
/// depend on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStrategy {
    BreadthFirst,
    DepthFirst,
}

/// A rooted spanning tree of a connected graph of circles.
#[derive(Debug, Clone)]
pub(crate) struct SpanningTree {
    /// Step from the parent into each vertex; `None` at the root.
    pub parent_step: Vec<Option<LoopStep>>,
    /// Vertices in discovery order, root first.
    pub order: Vec<usize>,
    pub in_tree: Vec<bool>,
}

impl SpanningTree {
    pub fn grow(g: &GraphOfCircles, root: usize, strategy: TreeStrategy) -> Result<Self, QuotientError> {
        g.validate()?;
        if root >= g.vertices.len() {
            return Err(QuotientError::MalformedGraph(format!("no base vertex {root}")));
        }
        let mut incident: Vec<Vec<LoopStep>> = vec![Vec::new(); g.vertices.len()];
        for e in &g.edges {
            incident[e.tail].push(LoopStep::new(e.id, Direction::Forward));
            incident[e.head].push(LoopStep::new(e.id, Direction::Backward));
        }
        let mut parent_step = vec![None; g.vertices.len()];
        let mut seen = vec![false; g.vertices.len()];
        let mut in_tree = vec![false; g.edges.len()];
        let mut order = Vec::new();
        let mut pending = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = match strategy {
            TreeStrategy::BreadthFirst => pending.pop_front(),
            TreeStrategy::DepthFirst => pending.pop_back(),
        } {
            order.push(v);
            for &step in &incident[v] {
                let w = g.step_target(step);
                if !seen[w] {
                    seen[w] = true;
                    parent_step[w] = Some(step);
                    in_tree[step.edge] = true;
                    pending.push_back(w);
                }
            }
        }
        if let Some(vertex) = seen.iter().position(|s| !s) {
            return Err(QuotientError::Disconnected { vertex });
        }
        Ok(SpanningTree {
            parent_step,
            order,
            in_tree,
        })
    }

    /// Tree path from the root to `v`.
    pub fn path_to(&self, g: &GraphOfCircles, mut v: usize) -> Vec<LoopStep> {
        let mut steps = Vec::new();
        while let Some(step) = self.parent_step[v] {
            steps.push(step);
            v = g.step_source(step);
        }
        steps.reverse();
        steps
    }

    /// The closed loop `root -> tail -e-> head -> root` through a non-tree edge.
    pub fn fundamental_loop(&self, g: &GraphOfCircles, edge: usize) -> Vec<LoopStep> {
        let e = &g.edges[edge];
        let mut lp = self.path_to(g, e.tail);
        lp.push(LoopStep::new(edge, Direction::Forward));
        lp.extend(self.path_to(g, e.head).into_iter().rev().map(LoopStep::reversed));
        lp
    }
}

/// `#(v)` for a vertex address: the sum of its signs.
pub fn level(v: &VertexAddress) -> i64 {
    v.level()
}

/// A witness `beta` in `ker f` with `beta . u = v`, when one exists.
pub fn same_ker_f_orbit(tree: &Tree, u: &VertexAddress, v: &VertexAddress) -> Option<Word> {
    if u.level() != v.level() {
        return None;
    }
    let beta = v.representative().multiply(&u.representative().invert());
    debug_assert!(beta.b_exponent_sum().is_zero());
    debug_assert_eq!(tree.act(&beta, u), *v);
    Some(beta)
}

/// Quotient of a ball by `ker f`, with the orbit representatives it used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBall {
    pub graph: GraphOfCircles,
    /// Least ball address in each vertex orbit, indexed by graph vertex id.
    pub vertex_representatives: Vec<VertexAddress>,
    pub edge_representatives: Vec<EdgeAddress>,
    /// Number of witnesses constructed and verified by the action.
    pub witness_checks: usize,
}

/// Partitions the radius-`radius` ball into `ker f`-orbits, certifying each
/// membership by an explicit witness whose action is checked.
pub fn quotient_ball_ker_f(tree: &Tree, radius: usize) -> QuotientBall {
    let mut witness_checks = 0;
    let certified = |rep_word: &Word, word: &Word, check: &dyn Fn(&Word) -> bool| -> bool {
        let beta = word.multiply(&rep_word.invert());
        beta.b_exponent_sum().is_zero() && check(&beta)
    };

    let mut vertex_orbits: Vec<VertexAddress> = Vec::new();
    let mut vertex_orbit_of = std::collections::HashMap::new();
    for v in tree.ball(radius) {
        let v_word = v.representative();
        let found = vertex_orbits.iter().position(|rep| {
            witness_checks += 1;
            certified(&rep.representative(), &v_word, &|beta| tree.act(beta, rep) == v)
        });
        let idx = found.unwrap_or_else(|| {
            vertex_orbits.push(v.clone());
            vertex_orbits.len() - 1
        });
        vertex_orbit_of.insert(v, idx);
    }

    let mut edge_orbits: Vec<EdgeAddress> = Vec::new();
    for e in tree.ball_edges(radius) {
        let e_word = e.representative();
        let found = edge_orbits.iter().position(|rep| {
            witness_checks += 1;
            certified(&rep.representative(), &e_word, &|beta| tree.act_edge(beta, rep) == e)
        });
        if found.is_none() {
            edge_orbits.push(e);
        }
    }

    // vertex ids in increasing level
    let mut by_level: Vec<usize> = (0..vertex_orbits.len()).collect();
    by_level.sort_by_key(|&i| vertex_orbits[i].level());
    let mut id_of = vec![0; vertex_orbits.len()];
    let mut graph = GraphOfCircles::new();
    let mut vertex_representatives = Vec::new();
    for &i in &by_level {
        id_of[i] = graph.add_vertex(vertex_orbits[i].level());
        vertex_representatives.push(vertex_orbits[i].clone());
    }
    edge_orbits.sort_by_key(|e| e.tail.level());
    let p = tree.params();
    for e in &edge_orbits {
        let tail = id_of[vertex_orbit_of[&e.tail]];
        let head = id_of[vertex_orbit_of[&tree.edge_head(e)]];
        graph.add_edge(tail, head, p.m(), p.n());
    }
    QuotientBall {
        graph,
        vertex_representatives,
        edge_representatives: edge_orbits,
        witness_checks,
    }
}

/// Cancels adjacent `e, -e` pairs until none remain; the result is the
/// geodesic between the endpoints.
pub fn reduce_path(tree: &Tree, path: &OrientedPath) -> Result<OrientedPath, QuotientError> {
    tree.path_end(path)?;
    let mut stack: Vec<PathStep> = Vec::with_capacity(path.steps.len());
    for step in &path.steps {
        match stack.last() {
            Some(top) if top.edge == step.edge && top.direction == step.direction.reversed() => {
                stack.pop();
            }
            _ => stack.push(step.clone()),
        }
    }
    Ok(OrientedPath {
        start: path.start.clone(),
        steps: stack,
    })
}

/// A walk of `len` uniformly chosen incident steps.
pub fn random_walk<R: Rng>(tree: &Tree, start: &VertexAddress, len: usize, rng: &mut R) -> OrientedPath {
    let mut cur = start.clone();
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let mut options = tree.incident_steps(&cur);
        let step = options.swap_remove(rng.gen_range(0..options.len()));
        cur = tree.step_target(&step);
        steps.push(step);
    }
    OrientedPath {
        start: start.clone(),
        steps,
    }
}

/// Forward and backward step counts of a closed loop.
pub fn loop_parity(lp: &[LoopStep], g: &GraphOfCircles) -> Result<(usize, usize), QuotientError> {
    if let Some(index) = lp.iter().position(|s| s.edge >= g.edges.len()) {
        return Err(QuotientError::NotALoop { index });
    }
    for i in 1..lp.len() {
        if g.step_source(lp[i]) != g.step_target(lp[i - 1]) {
            return Err(QuotientError::NotALoop { index: i });
        }
    }
    if let (Some(first), Some(last)) = (lp.first(), lp.last()) {
        if g.step_source(*first) != g.step_target(*last) {
            return Err(QuotientError::NotALoop { index: lp.len() });
        }
    }
    let plus = lp.iter().filter(|s| s.direction == Direction::Forward).count();
    Ok((plus, lp.len() - plus))
}

pub fn is_balanced(lp: &[LoopStep], g: &GraphOfCircles) -> Result<bool, QuotientError> {
    let (plus, minus) = loop_parity(lp, g)?;
    Ok(plus == minus)
}

/// `#(v)` for every vertex: forward edges minus backward edges along any
/// path from `base`. Fails with a witness loop when that is path dependent.
pub fn signed_counts(g: &GraphOfCircles, base: usize) -> Result<Vec<i64>, QuotientError> {
    signed_counts_with(g, base, TreeStrategy::BreadthFirst)
}

pub fn signed_counts_with(g: &GraphOfCircles, base: usize, strategy: TreeStrategy) -> Result<Vec<i64>, QuotientError> {
    let st = SpanningTree::grow(g, base, strategy)?;
    let mut counts = vec![0i64; g.vertices.len()];
    for &v in &st.order[1..] {
        let step = st.parent_step[v].expect("non-root has a parent");
        counts[v] = counts[g.step_source(step)] + step.direction.value();
    }
    for e in &g.edges {
        if !st.in_tree[e.id] && counts[e.head] != counts[e.tail] + 1 {
            return Err(QuotientError::UnbalancedLoop {
                witness: st.fundamental_loop(g, e.id),
            });
        }
    }
    Ok(counts)
}

pub fn signed_count(g: &GraphOfCircles, base: usize, v: usize) -> Result<i64, QuotientError> {
    let counts = signed_counts(g, base)?;
    counts
        .get(v)
        .copied()
        .ok_or_else(|| QuotientError::MalformedGraph(format!("no vertex {v}")))
}

//! The Bass-Serre tree `T(m,n)` of the HNN extension `BS(m,n)`.
//!
//! Vertices are cosets `gH` with `H = <a>`, edges are cosets `gN` with
//! `N = <a^m>`, and the edge `gN` runs from `gH` to `gbH`. A vertex is named
//! by its canonical address `[(i_1, e_1), ..., (i_k, e_k)]`, which spells the
//! coset representative `a^i_1 b^e_1 ... a^i_k b^e_k` and at the same time
//! the geodesic from the base vertex `H`:
//!
//! * `0 <= i_t < |m|` when `e_t = +1` and `0 <= i_t < |n|` when `e_t = -1`;
//! * `i_t != 0` whenever `e_t != e_(t-1)` (no backtracking).
//!
//! Only `|m|` and `|n|` enter the combinatorics; every vertex has `|m|`
//! outgoing and `|n|` incoming edges.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{CyclicSubgroup, Gamma, GammaElement};
use crate::words::{BsParams, Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unsupported export format {0:?} (expected dot or json)")]
    UnsupportedFormat(String),
    #[error("invalid vertex address {address:?}: {reason}")]
    InvalidAddress { address: String, reason: String },
    #[error("edge slot {slot} out of range for {params}")]
    InvalidSlot { slot: u64, params: BsParams },
    #[error("path does not chain at step {index}")]
    InvalidPath { index: usize },
}

/// One syllable `a^index b^sign` of a vertex address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddressStep {
    pub index: u64,
    pub sign: Sign,
}

impl AddressStep {
    pub fn new(index: u64, sign: Sign) -> Self {
        AddressStep { index, sign }
    }
}

/// Canonical name of the vertex `gH`. The empty address is `H` itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexAddress {
    steps: Vec<AddressStep>,
}

impl VertexAddress {
    pub fn base() -> Self {
        VertexAddress::default()
    }

    pub fn steps(&self) -> &[AddressStep] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_base(&self) -> bool {
        self.steps.is_empty()
    }

    /// Signed edge count from the base vertex: `sum e_t`.
    pub fn level(&self) -> i64 {
        self.steps.iter().map(|s| s.sign.value()).sum()
    }

    pub fn parent(&self) -> Option<VertexAddress> {
        if self.steps.is_empty() {
            return None;
        }
        Some(VertexAddress {
            steps: self.steps[..self.steps.len() - 1].to_vec(),
        })
    }

    /// The coset representative `a^i_1 b^e_1 ... a^i_k b^e_k`.
    pub fn representative(&self) -> Word {
        Word::free_reduce(self.steps.iter().flat_map(|s| {
            [
                crate::words::Syllable::new(Letter::A, s.index),
                crate::words::Syllable::new(Letter::B, s.sign.value()),
            ]
        }))
    }

    /// Checks the canonical-address invariants for the given parameters.
    pub fn validate(&self, p: &BsParams) -> Result<(), TreeError> {
        let bad = |reason: String| TreeError::InvalidAddress {
            address: self.to_string(),
            reason,
        };
        for (t, step) in self.steps.iter().enumerate() {
            let modulus = modulus_for(p, step.sign);
            if step.index >= modulus {
                return Err(bad(format!("index {} at position {t} must be < {modulus}", step.index)));
            }
            if t > 0 && self.steps[t - 1].sign != step.sign && step.index == 0 {
                return Err(bad(format!("backtracking at position {t}")));
            }
        }
        Ok(())
    }

    pub fn from_steps(steps: Vec<AddressStep>, p: &BsParams) -> Result<Self, TreeError> {
        let v = VertexAddress { steps };
        v.validate(p)?;
        Ok(v)
    }

    /// Parses the `i:+,j:-` syntax and validates it.
    pub fn parse(s: &str, p: &BsParams) -> Result<Self, TreeError> {
        let v: VertexAddress = s.parse()?;
        v.validate(p)?;
        Ok(v)
    }

    fn with_step(&self, step: AddressStep) -> VertexAddress {
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.extend_from_slice(&self.steps);
        steps.push(step);
        VertexAddress { steps }
    }

    fn prefix(&self, len: usize) -> VertexAddress {
        VertexAddress {
            steps: self.steps[..len].to_vec(),
        }
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, s) in self.steps.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            let sign = match s.sign {
                Sign::Plus => '+',
                Sign::Minus => '-',
            };
            write!(f, "{}:{sign}", s.index)?;
        }
        Ok(())
    }
}

impl FromStr for VertexAddress {
    type Err = TreeError;

    /// Syntax only; use [`VertexAddress::parse`] to also check the moduli.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| TreeError::InvalidAddress {
            address: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(VertexAddress::base());
        }
        let steps = trimmed
            .split(',')
            .map(|tok| {
                let (idx, sign) = tok.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
                let index = idx.trim().parse().map_err(|_| bad("bad index"))?;
                let sign = match sign.trim() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    _ => return Err(bad("sign must be + or -")),
                };
                Ok(AddressStep { index, sign })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VertexAddress { steps })
    }
}

impl Serialize for VertexAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VertexAddress {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn modulus_for(p: &BsParams, sign: Sign) -> u64 {
    match sign {
        Sign::Plus => p.out_degree(),
        Sign::Minus => p.in_degree(),
    }
}

/// The edge `repr(tail) a^slot N`, with `0 <= slot < |m|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeAddress {
    pub tail: VertexAddress,
    pub slot: u64,
}

impl EdgeAddress {
    pub fn new(tail: VertexAddress, slot: u64) -> Self {
        EdgeAddress { tail, slot }
    }

    pub fn representative(&self) -> Word {
        self.tail.representative().multiply(&Word::a(self.slot))
    }
}

impl fmt::Display for EdgeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]#{}", self.tail, self.slot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathStep {
    pub edge: EdgeAddress,
    pub direction: Direction,
}

/// A path in the tree. Each step traverses an edge with or against its
/// orientation; consecutive steps share a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedPath {
    pub start: VertexAddress,
    pub steps: Vec<PathStep>,
}

impl OrientedPath {
    pub fn empty(start: VertexAddress) -> Self {
        OrientedPath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn forward_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.direction == Direction::Forward)
            .count()
    }

    pub fn backward_count(&self) -> usize {
        self.len() - self.forward_count()
    }

    /// `+1` per forward step, `-1` per backward step.
    pub fn signed_length(&self) -> i64 {
        self.steps.iter().map(|s| s.direction.value()).sum()
    }
}

/// Outcome of [`Tree::free_action_check`]. Passing is a bounded
/// certificate over the ball, not a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeActionReport {
    pub generator: GammaElement,
    pub radius: usize,
    pub exponent_bound: u64,
    pub checks: u64,
    pub passed: bool,
    pub witness: Option<FreeActionWitness>,
}

/// A vertex `gH` and `k != 0` with `phi(g a^k g^-1) = generator^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeActionWitness {
    pub vertex: VertexAddress,
    pub k: i64,
    pub j: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            _ => Err(TreeError::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Serialize)]
struct BallJson<'a> {
    params: &'a BsParams,
    vertices: Vec<String>,
    edges: Vec<BallEdgeJson>,
}

#[derive(Serialize)]
struct BallEdgeJson {
    tail: String,
    head: String,
    slot: u64,
}

/// `T(m,n)` together with the action of `BS(m,n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tree {
    params: BsParams,
}

impl Tree {
    pub fn new(params: BsParams) -> Self {
        Tree { params }
    }

    pub fn params(&self) -> &BsParams {
        &self.params
    }

    /// Left multiplication by `a^s`.
    fn act_a(&self, s: &BigInt, v: &VertexAddress) -> VertexAddress {
        let m = BigInt::from(self.params.m());
        let n = BigInt::from(self.params.n());
        let mut carry = s.clone();
        let mut steps = Vec::with_capacity(v.steps.len());
        for (t, step) in v.steps.iter().enumerate() {
            if carry.is_zero() {
                steps.extend_from_slice(&v.steps[t..]);
                break;
            }
            let modulus = BigInt::from(modulus_for(&self.params, step.sign));
            let (q, r) = (carry + step.index).div_mod_floor(&modulus);
            steps.push(AddressStep::new(r.to_u64().expect("index < modulus"), step.sign));
            // a^(q|m|) b = b a^(q sgn(m) n),  a^(q|n|) b^-1 = b^-1 a^(q sgn(n) m)
            carry = match step.sign {
                Sign::Plus => q * self.params.m().signum() * &n,
                Sign::Minus => q * self.params.n().signum() * &m,
            };
        }
        VertexAddress { steps }
    }

    /// Left multiplication by `b^e`.
    fn act_b(&self, e: Sign, v: &VertexAddress) -> VertexAddress {
        match v.steps.first() {
            Some(first) if first.index == 0 && first.sign == e.flip() => VertexAddress {
                steps: v.steps[1..].to_vec(),
            },
            _ => {
                let mut steps = Vec::with_capacity(v.steps.len() + 1);
                steps.push(AddressStep::new(0, e));
                steps.extend_from_slice(&v.steps);
                VertexAddress { steps }
            }
        }
    }

    /// The left action `w . v`.
    pub fn act(&self, w: &Word, v: &VertexAddress) -> VertexAddress {
        let mut cur = v.clone();
        for syl in w.syllables().iter().rev() {
            match syl.letter {
                Letter::A => cur = self.act_a(&syl.exp, &cur),
                Letter::B => {
                    let e = Sign::of(&syl.exp);
                    let mut count = num_traits::Signed::abs(&syl.exp);
                    while count > BigInt::zero() {
                        cur = self.act_b(e, &cur);
                        count -= 1;
                    }
                }
            }
        }
        cur
    }

    /// Canonical address of `gH`.
    pub fn vertex_from_word(&self, g: &Word) -> VertexAddress {
        self.act(g, &VertexAddress::base())
    }

    /// Image of an edge under `w`: the edge through `w . repr(e)`.
    pub fn act_edge(&self, w: &Word, e: &EdgeAddress) -> EdgeAddress {
        self.edge_from_word(&w.multiply(&e.representative()))
    }

    /// Canonical address of the edge `gN`.
    pub fn edge_from_word(&self, g: &Word) -> EdgeAddress {
        let tail = self.vertex_from_word(g);
        let head = self.vertex_from_word(&g.multiply(&Word::b(1)));
        self.edge_between(&tail, &head)
            .expect("gH and gbH are adjacent")
            .0
    }

    pub fn edge(&self, tail: VertexAddress, slot: u64) -> Result<EdgeAddress, TreeError> {
        if slot >= self.params.out_degree() {
            return Err(TreeError::InvalidSlot {
                slot,
                params: self.params,
            });
        }
        tail.validate(&self.params)?;
        Ok(EdgeAddress { tail, slot })
    }

    pub fn edge_head(&self, e: &EdgeAddress) -> VertexAddress {
        match e.tail.steps.last() {
            Some(last) if last.sign == Sign::Minus && e.slot == 0 => e.tail.parent().expect("nonempty"),
            _ => e.tail.with_step(AddressStep::new(e.slot, Sign::Plus)),
        }
    }

    pub fn edge_endpoints(&self, e: &EdgeAddress) -> (VertexAddress, VertexAddress) {
        (e.tail.clone(), self.edge_head(e))
    }

    pub fn out_edges(&self, v: &VertexAddress) -> Vec<EdgeAddress> {
        (0..self.params.out_degree())
            .map(|slot| EdgeAddress::new(v.clone(), slot))
            .collect()
    }

    /// Edges `repr(v) a^j b^-1 N` for `0 <= j < |n|`, in canonical form.
    pub fn in_edges(&self, v: &VertexAddress) -> Vec<EdgeAddress> {
        (0..self.params.in_degree())
            .map(|j| match v.steps.last() {
                Some(last) if last.sign == Sign::Plus && j == 0 => {
                    EdgeAddress::new(v.parent().expect("nonempty"), last.index)
                }
                _ => EdgeAddress::new(v.with_step(AddressStep::new(j, Sign::Minus)), 0),
            })
            .collect()
    }

    /// All `|m| + |n|` steps leaving `v`: out-edges forward, in-edges backward.
    pub fn incident_steps(&self, v: &VertexAddress) -> Vec<PathStep> {
        let fwd = self.out_edges(v).into_iter().map(|edge| PathStep {
            edge,
            direction: Direction::Forward,
        });
        let bwd = self.in_edges(v).into_iter().map(|edge| PathStep {
            edge,
            direction: Direction::Backward,
        });
        fwd.chain(bwd).collect()
    }

    pub fn neighbors(&self, v: &VertexAddress) -> Vec<VertexAddress> {
        self.incident_steps(v)
            .iter()
            .map(|s| self.step_target(s))
            .collect()
    }

    pub fn step_source(&self, s: &PathStep) -> VertexAddress {
        match s.direction {
            Direction::Forward => s.edge.tail.clone(),
            Direction::Backward => self.edge_head(&s.edge),
        }
    }

    pub fn step_target(&self, s: &PathStep) -> VertexAddress {
        match s.direction {
            Direction::Forward => self.edge_head(&s.edge),
            Direction::Backward => s.edge.tail.clone(),
        }
    }

    /// Endpoint of a path, checking that consecutive steps chain.
    pub fn path_end(&self, path: &OrientedPath) -> Result<VertexAddress, TreeError> {
        let mut cur = path.start.clone();
        for (index, step) in path.steps.iter().enumerate() {
            if self.step_source(step) != cur {
                return Err(TreeError::InvalidPath { index });
            }
            cur = self.step_target(step);
        }
        Ok(cur)
    }

    /// The edge joining two adjacent vertices, and the direction of travel
    /// from `from` to `to`.
    pub fn edge_between(&self, from: &VertexAddress, to: &VertexAddress) -> Option<(EdgeAddress, Direction)> {
        if to.depth() == from.depth() + 1 && to.steps.starts_with(&from.steps) {
            return Some(self.descent_step(to, from.depth()));
        }
        if from.depth() == to.depth() + 1 && from.steps.starts_with(&to.steps) {
            let (edge, dir) = self.descent_step(from, to.depth());
            return Some((edge, dir.reversed()));
        }
        None
    }

    /// The edge crossed by syllable `t` of `v`, travelling away from the base.
    fn descent_step(&self, v: &VertexAddress, t: usize) -> (EdgeAddress, Direction) {
        let step = v.steps[t];
        match step.sign {
            Sign::Plus => (EdgeAddress::new(v.prefix(t), step.index), Direction::Forward),
            Sign::Minus => (EdgeAddress::new(v.prefix(t + 1), 0), Direction::Backward),
        }
    }

    /// The unique reduced path from `u` to `v`: up from `u` to the longest
    /// common prefix, then down to `v`.
    pub fn geodesic(&self, u: &VertexAddress, v: &VertexAddress) -> OrientedPath {
        let common = u
            .steps
            .iter()
            .zip(&v.steps)
            .take_while(|(x, y)| x == y)
            .count();
        let up = (common..u.depth()).rev().map(|t| {
            let (edge, dir) = self.descent_step(u, t);
            PathStep {
                edge,
                direction: dir.reversed(),
            }
        });
        let down = (common..v.depth()).map(|t| {
            let (edge, direction) = self.descent_step(v, t);
            PathStep { edge, direction }
        });
        OrientedPath {
            start: u.clone(),
            steps: up.chain(down).collect(),
        }
    }

    pub fn tree_distance(&self, u: &VertexAddress, v: &VertexAddress) -> usize {
        let common = u
            .steps
            .iter()
            .zip(&v.steps)
            .take_while(|(x, y)| x == y)
            .count();
        u.depth() + v.depth() - 2 * common
    }

    /// Distance counted with signs: forward steps `+1`, backward `-1`.
    pub fn signed_distance(&self, u: &VertexAddress, v: &VertexAddress) -> i64 {
        v.level() - u.level()
    }

    /// `g a g^-1` with `g = repr(v)`, generating the stabilizer `gHg^-1`.
    pub fn stabilizer_generator(&self, v: &VertexAddress) -> Word {
        v.representative().conjugate(&Word::a(1))
    }

    /// Non-backtracking one-step extensions of `v`, in sorted order.
    pub fn children(&self, v: &VertexAddress) -> Vec<VertexAddress> {
        let last = v.steps.last().map(|s| s.sign);
        let mut out = Vec::new();
        for (sign, modulus) in [
            (Sign::Plus, self.params.out_degree()),
            (Sign::Minus, self.params.in_degree()),
        ] {
            for index in 0..modulus {
                if index == 0 && last == Some(sign.flip()) {
                    continue;
                }
                out.push(v.with_step(AddressStep::new(index, sign)));
            }
        }
        out.sort();
        out
    }

    /// Vertices within distance `radius` of the base, ordered by depth and
    /// then lexicographically.
    pub fn ball(&self, radius: usize) -> Vec<VertexAddress> {
        let mut out = vec![VertexAddress::base()];
        let mut frontier = out.clone();
        for _ in 0..radius {
            let mut next: Vec<VertexAddress> =
                frontier.iter().flat_map(|v| self.children(v)).collect();
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Edges of the ball: one per non-base vertex, joining it to its parent.
    pub fn ball_edges(&self, radius: usize) -> Vec<EdgeAddress> {
        self.ball(radius)
            .iter()
            .skip(1)
            .map(|v| self.descent_step(v, v.depth() - 1).0)
            .collect()
    }

    /// Looks for `k` with `0 < |k| <= bound` and a ball vertex `gH` such that
    /// `phi(g a^k g^-1)` lies in `C`. None exists when `C` acts freely.
    pub fn free_action_check(&self, c: &CyclicSubgroup, radius: usize, bound: u64) -> FreeActionReport {
        let gamma = Gamma::new(self.params);
        let mut checks = 0;
        let mut witness = None;
        'outer: for v in self.ball(radius) {
            let g = v.representative();
            for k in 1..=bound as i64 {
                for k in [k, -k] {
                    checks += 1;
                    let image = gamma.phi(&g.conjugate(&Word::a(k)));
                    if let Some(j) = gamma.cyclic_membership(c, &image) {
                        witness = Some(FreeActionWitness {
                            vertex: v.clone(),
                            k,
                            j: j.to_string(),
                        });
                        break 'outer;
                    }
                }
            }
        }
        FreeActionReport {
            generator: c.generator.clone(),
            radius,
            exponent_bound: bound,
            checks,
            passed: witness.is_none(),
            witness,
        }
    }

    pub fn export_ball(&self, radius: usize, format: ExportFormat) -> String {
        let vertices = self.ball(radius);
        let edges: Vec<(EdgeAddress, VertexAddress)> = self
            .ball_edges(radius)
            .into_iter()
            .map(|e| {
                let head = self.edge_head(&e);
                (e, head)
            })
            .collect();
        match format {
            ExportFormat::Dot => {
                let mut out = String::from("digraph T {\n");
                for v in &vertices {
                    out.push_str(&format!("  \"{v}\";\n"));
                }
                for (e, head) in &edges {
                    out.push_str(&format!("  \"{}\" -> \"{head}\";\n", e.tail));
                }
                out.push_str("}\n");
                out
            }
            ExportFormat::Json => {
                let doc = BallJson {
                    params: &self.params,
                    vertices: vertices.iter().map(|v| v.to_string()).collect(),
                    edges: edges
                        .iter()
                        .map(|(e, head)| BallEdgeJson {
                            tail: e.tail.to_string(),
                            head: head.to_string(),
                            slot: e.slot,
                        })
                        .collect(),
                };
                serde_json::to_string_pretty(&doc).expect("serializable")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{in_vertex_group, random_word, rng_for, sample_word};
    use proptest::prelude::*;
    use std::collections::{HashMap, VecDeque};

    fn tree(m: i64, n: i64) -> Tree {
        Tree::new(BsParams::new(m, n).unwrap())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn addr(s: &str) -> VertexAddress {
        s.parse().unwrap()
    }

    /// Brute-force coset test: `g1 H = g2 H` iff `g1^-1 g2` is in `<a>`.
    fn same_coset(t: &Tree, g1: &Word, g2: &Word) -> bool {
        in_vertex_group(&g1.invert().multiply(g2), t.params())
    }

    /// BFS distances from `src` inside the ball of the given radius.
    fn bfs(t: &Tree, src: &VertexAddress, radius: usize) -> HashMap<VertexAddress, usize> {
        let mut dist = HashMap::from([(src.clone(), 0)]);
        let mut queue = VecDeque::from([src.clone()]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for nb in t.neighbors(&v) {
                if nb.depth() <= radius && !dist.contains_key(&nb) {
                    dist.insert(nb.clone(), d + 1);
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    #[test]
    fn act_examples() {
        let t = tree(2, 3);
        let base = VertexAddress::base();
        assert_eq!(t.act(&w("a"), &base), base);
        assert_eq!(t.act(&w("b"), &base), addr("0:+"));
        let g = w("b a^2 B");
        let got = t.act(&g, &base);
        assert_eq!(got, addr("0:+,2:-"));
        assert!(same_coset(&t, &got.representative(), &g));
    }

    #[test]
    fn vertex_from_word_examples() {
        let t = tree(2, 3);
        assert!(t.vertex_from_word(&w("a^9")).is_base());
        assert_eq!(t.vertex_from_word(&w("b^2")), addr("0:+,0:+"));
        let v = t.vertex_from_word(&w("a b"));
        assert_eq!(v, addr("1:+"));
        assert!(same_coset(&t, &v.representative(), &w("a b")));
    }

    #[test]
    fn carries_propagate_through_address() {
        // a^2 b = b a^3 in BS(2,3), so a^2 . bH = bH and a^3 fixes bH only mod 3
        let t = tree(2, 3);
        let v = addr("0:+,1:-");
        for g in ["a^2", "a^5", "A^7", "b a^4 B", "a b A^3 B^2"] {
            let g = w(g);
            let got = t.act(&g, &v);
            got.validate(t.params()).unwrap();
            assert!(same_coset(&t, &got.representative(), &g.multiply(&v.representative())));
        }
    }

    #[test]
    fn endpoints_examples() {
        let t = tree(2, 3);
        let base = VertexAddress::base();
        assert_eq!(
            t.edge_endpoints(&EdgeAddress::new(base.clone(), 0)),
            (base.clone(), addr("0:+"))
        );
        assert_eq!(
            t.edge_endpoints(&EdgeAddress::new(base.clone(), 1)),
            (base.clone(), addr("1:+"))
        );
        let e = EdgeAddress::new(addr("0:-"), 0);
        assert_eq!(t.edge_head(&e), base);
        // coset oracle: head is repr(tail) a^slot b H
        let head_word = e.representative().multiply(&Word::b(1));
        assert!(same_coset(&t, &head_word, &Word::identity()));
    }

    #[test]
    fn degree_examples() {
        let t = tree(2, 3);
        let base = VertexAddress::base();
        assert_eq!(t.out_edges(&base).len(), 2);
        assert_eq!(t.in_edges(&base).len(), 3);
        let t = tree(3, 2);
        for v in t.ball(3) {
            let outs = t.out_edges(&v);
            let ins = t.in_edges(&v);
            assert_eq!(outs.len(), 3);
            assert_eq!(ins.len(), 2);
            for e in &ins {
                assert_eq!(t.edge_head(e), v);
                e.tail.validate(t.params()).unwrap();
            }
            let mut heads: Vec<_> = outs.iter().map(|e| t.edge_head(e)).collect();
            heads.sort();
            heads.dedup();
            assert_eq!(heads.len(), 3);
        }
    }

    #[test]
    fn in_edges_match_coset_definition() {
        let t = tree(3, -2);
        for v in t.ball(2) {
            for (j, e) in t.in_edges(&v).iter().enumerate() {
                let g = v.representative().multiply(&Word::a(j as i64)).multiply(&Word::b(-1));
                // same edge coset gN: tail cosets agree and heads agree
                assert!(same_coset(&t, &e.representative(), &g));
                assert_eq!(t.edge_head(e), v);
            }
        }
    }

    #[test]
    fn geodesic_examples() {
        let t = tree(2, 3);
        let base = VertexAddress::base();
        let p = t.geodesic(&base, &base);
        assert!(p.is_empty());
        assert_eq!(t.tree_distance(&base, &base), 0);

        let target = t.vertex_from_word(&w("b^2"));
        let p = t.geodesic(&base, &target);
        assert_eq!(p.forward_count(), 2);
        assert_eq!(p.backward_count(), 0);
        assert_eq!(t.path_end(&p).unwrap(), target);
        assert_eq!(bfs(&t, &base, 3)[&target], 2);

        let target = t.vertex_from_word(&w("b a^2 B"));
        let p = t.geodesic(&base, &target);
        let dirs: Vec<_> = p.steps.iter().map(|s| s.direction).collect();
        assert_eq!(dirs, vec![Direction::Forward, Direction::Backward]);
        assert_eq!(t.tree_distance(&base, &target), 2);
        assert_eq!(bfs(&t, &base, 3)[&target], 2);
    }

    #[test]
    fn signed_distance_examples() {
        let t = tree(2, 3);
        let base = VertexAddress::base();
        for k in 1..=5i64 {
            assert_eq!(t.signed_distance(&base, &t.vertex_from_word(&Word::b(k))), k);
        }
        assert_eq!(t.signed_distance(&base, &t.vertex_from_word(&w("b a^2 B"))), 0);
        let v = addr("1:+,2:-,2:-");
        assert_eq!(t.signed_distance(&v, &v), 0);
    }

    #[test]
    fn signed_distance_equals_geodesic_step_sum() {
        let t = tree(4, -3);
        let ball = t.ball(2);
        for u in ball.iter().step_by(7) {
            for v in ball.iter().step_by(5) {
                assert_eq!(t.geodesic(u, v).signed_length(), t.signed_distance(u, v));
            }
        }
    }

    #[test]
    fn stabilizer_examples() {
        let t = tree(2, 3);
        assert_eq!(t.stabilizer_generator(&VertexAddress::base()), w("a"));
        assert_eq!(t.stabilizer_generator(&addr("0:+")), w("b a B"));
        for v in t.ball(2) {
            let s = t.stabilizer_generator(&v);
            for k in -10..=10 {
                assert_eq!(t.act(&s.pow(k), &v), v);
            }
        }
    }

    #[test]
    fn free_action_examples() {
        let t = tree(3, 2);
        let rep = t.free_action_check(&CyclicSubgroup::new(GammaElement::from_ints(0, 1)), 3, 20);
        assert!(rep.passed);
        assert_eq!(rep.checks, 106 * 40);

        let rep = t.free_action_check(&CyclicSubgroup::new(GammaElement::from_ints(1, 0)), 3, 20);
        assert!(!rep.passed);
        let wit = rep.witness.unwrap();
        assert!(wit.vertex.is_base());
        assert_eq!(wit.k, 1);

        let rep = t.free_action_check(&CyclicSubgroup::new(GammaElement::from_ints(1, 2)), 3, 20);
        assert!(rep.passed);
    }

    #[test]
    fn export_examples() {
        let t = tree(2, 3);
        let dot = t.export_ball(1, ExportFormat::Dot);
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";") && !l.contains("->")).count(), 6);
        let json: serde_json::Value = serde_json::from_str(&t.export_ball(1, ExportFormat::Json)).unwrap();
        assert_eq!(json["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(json["edges"].as_array().unwrap().len(), 5);
        assert_eq!(json["params"]["m"], 2);

        let dot = t.export_ball(0, ExportFormat::Dot);
        assert_eq!(dot, "digraph T {\n  \"\";\n}\n");

        let t = tree(3, 2);
        assert_eq!(t.ball(2).len(), 26);
        assert_eq!(bfs(&t, &VertexAddress::base(), 2).len(), 26);
        assert_eq!(
            "svg".parse::<ExportFormat>(),
            Err(TreeError::UnsupportedFormat("svg".into()))
        );
    }

    #[test]
    fn address_parsing() {
        let p = BsParams::new(2, 3).unwrap();
        assert_eq!(VertexAddress::parse("", &p).unwrap(), VertexAddress::base());
        let v = VertexAddress::parse("0:+, 2:-", &p).unwrap();
        assert_eq!(v.to_string(), "0:+,2:-");
        assert!(VertexAddress::parse("2:+", &p).is_err());
        assert!(VertexAddress::parse("0:+,0:-", &p).is_err());
        assert!(VertexAddress::parse("0:*", &p).is_err());
        assert!(VertexAddress::parse("x", &p).is_err());
    }

    #[test]
    fn path_end_rejects_broken_chain() {
        let t = tree(2, 3);
        let path = OrientedPath {
            start: VertexAddress::base(),
            steps: vec![PathStep {
                edge: EdgeAddress::new(addr("1:+"), 0),
                direction: Direction::Forward,
            }],
        };
        assert_eq!(t.path_end(&path), Err(TreeError::InvalidPath { index: 0 }));
    }

    #[test]
    fn geodesics_agree_with_bfs_on_ball() {
        let t = tree(2, 3);
        let ball = t.ball(4);
        for src in ball.iter().step_by(23) {
            let dist = bfs(&t, src, 4);
            for v in ball.iter() {
                assert_eq!(t.tree_distance(src, v), dist[v], "{src} -> {v}");
            }
        }
    }

    proptest! {
        #[test]
        fn action_matches_cosets(seed in any::<u64>(), idx in 0usize..4) {
            let t = [tree(3, 2), tree(2, 3), tree(4, -3), tree(2, -2)][idx];
            let mut rng = rng_for(seed, 3);
            let g = sample_word(t.params(), 6, &mut rng);
            let h = sample_word(t.params(), 6, &mut rng);
            let v = t.vertex_from_word(&h);
            prop_assert!(v.validate(t.params()).is_ok());
            prop_assert!(same_coset(&t, &v.representative(), &h));
            // action is a left action
            prop_assert_eq!(t.act(&g, &v), t.vertex_from_word(&g.multiply(&h)));
        }

        #[test]
        fn d_is_invariant_and_a_cocycle(seed in any::<u64>()) {
            let t = tree(3, 2);
            let mut rng = rng_for(seed, 4);
            let g = sample_word(t.params(), 7, &mut rng);
            let [p, q, r] = [0, 1, 2].map(|_| t.vertex_from_word(&sample_word(t.params(), 7, &mut rng)));
            prop_assert_eq!(t.signed_distance(&t.act(&g, &p), &t.act(&g, &q)), t.signed_distance(&p, &q));
            prop_assert_eq!(t.signed_distance(&p, &q), -t.signed_distance(&q, &p));
            prop_assert_eq!(t.signed_distance(&p, &q) + t.signed_distance(&q, &r), t.signed_distance(&p, &r));
            let base = VertexAddress::base();
            let bg = t.vertex_from_word(&Word::b(1).multiply(&g));
            prop_assert_eq!(t.signed_distance(&base, &bg), 1 + t.signed_distance(&base, &t.vertex_from_word(&g)));
        }

        #[test]
        fn edges_map_to_edges(seed in any::<u64>()) {
            let t = tree(3, 2);
            let g = random_word(t.params(), 6, seed);
            let e = EdgeAddress::new(t.vertex_from_word(&random_word(t.params(), 5, seed ^ 1)), seed % 3);
            let ge = t.act_edge(&g, &e);
            prop_assert_eq!(&ge.tail, &t.act(&g, &e.tail));
            prop_assert_eq!(t.edge_head(&ge), t.act(&g, &t.edge_head(&e)));
        }
    }
}

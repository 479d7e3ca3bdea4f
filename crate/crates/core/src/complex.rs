//! Cylinder complexes built from graphs of circles, and the link condition.
//!
//! Every vertex and edge of a graph of circles becomes a flat cylinder
//! `S^1 x [0,1]`. An edge with degrees `(dt, dh)` has its end `0` wrapped
//! `|dt|` times around circle `1` of the tail cylinder and its end `1`
//! wrapped `|dh|` times around circle `0` of the head cylinder; the sign of
//! a degree records orientation. Local isometry forces
//! `r(e) = |dt| r(tail) = |dh| r(head)`.
//!
//! The only non-manifold points lie on vertex circles. A point there has a
//! link made of two nodes (the two directions along the circle) joined by
//! one arc of length `pi` from the vertex cylinder and one more per sheet of
//! every edge end glued to that circle. The universal cover is CAT(0) when
//! every such link has no cycle shorter than `2 pi`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::affine::parse_rational;
use crate::quotient::{quotient_ball_ker_f, GraphOfCircles, LoopStep, QuotientBall, QuotientError, SpanningTree, TreeStrategy};
use crate::tree::Tree;
use crate::words::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("circumferences cannot be matched around loop {witness:?}")]
    InconsistentLoop { witness: Vec<LoopStep> },
    #[error(transparent)]
    Graph(#[from] QuotientError),
    #[error("gluing {gluing}: edge radius is not |degree| times the vertex radius")]
    RadiusMismatch { gluing: usize },
    #[error("malformed complex: {0}")]
    Malformed(String),
}

mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

mod opt_rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CylinderKind {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub id: usize,
    pub kind: CylinderKind,
    #[serde(with = "rational_str")]
    pub radius: BigRational,
}

/// End `end` of edge cylinder `edge` wrapped `|degree|` times around circle
/// `circle` of vertex cylinder `vertex`; a negative degree reverses
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub edge: usize,
    pub end: u8,
    pub vertex: usize,
    pub circle: u8,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CylinderComplex {
    pub cylinders: Vec<Cylinder>,
    pub gluings: Vec<Gluing>,
}

impl CylinderComplex {
    /// Checks ids, references, and circumference matching of every gluing.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let bad = |msg: String| Err(ComplexError::Malformed(msg));
        for (i, c) in self.cylinders.iter().enumerate() {
            if c.id != i {
                return bad(format!("cylinder at position {i} has id {}", c.id));
            }
            if !c.radius.is_positive() {
                return bad(format!("cylinder {i} has nonpositive radius"));
            }
        }
        let kind = |id: usize| self.cylinders.get(id).map(|c| c.kind);
        let mut used_ends = std::collections::HashSet::new();
        for (i, g) in self.gluings.iter().enumerate() {
            if kind(g.edge) != Some(CylinderKind::Edge) || kind(g.vertex) != Some(CylinderKind::Vertex) {
                return bad(format!("gluing {i} must join an edge cylinder to a vertex cylinder"));
            }
            if g.end > 1 || g.circle > 1 {
                return bad(format!("gluing {i}: ends and circles are 0 or 1"));
            }
            if g.degree == 0 {
                return bad(format!("gluing {i} has degree 0"));
            }
            if !used_ends.insert((g.edge, g.end)) {
                return bad(format!("gluing {i}: edge end glued twice"));
            }
            let expected = &self.cylinders[g.vertex].radius * BigRational::from_integer(g.degree.abs().into());
            if self.cylinders[g.edge].radius != expected {
                return Err(ComplexError::RadiusMismatch { gluing: i });
            }
        }
        Ok(())
    }

    pub fn radii_of(&self, kind: CylinderKind) -> Vec<BigRational> {
        self.cylinders
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| c.radius.clone())
            .collect()
    }
}

/// Cylinder radii for a graph of circles, indexed by vertex and edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radii {
    pub vertex: Vec<BigRational>,
    pub edge: Vec<BigRational>,
}

pub fn assign_radii(g: &GraphOfCircles, base: usize) -> Result<Radii, ComplexError> {
    assign_radii_with(g, base, TreeStrategy::BreadthFirst)
}

/// `r(base) = 1`, `r(head) = |dt|/|dh| r(tail)` along a spanning tree, and
/// `r(e) = |dh| r(head)`. Every remaining edge must match both ends.
pub fn assign_radii_with(g: &GraphOfCircles, base: usize, strategy: TreeStrategy) -> Result<Radii, ComplexError> {
    let st = SpanningTree::grow(g, base, strategy)?;
    let abs = |d: i64| BigRational::from_integer(d.abs().into());
    let mut vertex = vec![BigRational::zero(); g.vertices.len()];
    vertex[base] = BigRational::one();
    for &v in &st.order[1..] {
        let step = st.parent_step[v].expect("non-root has a parent");
        let e = &g.edges[step.edge];
        let from = &vertex[g.step_source(step)];
        vertex[v] = match step.direction {
            crate::tree::Direction::Forward => from * abs(e.tail_degree) / abs(e.head_degree),
            crate::tree::Direction::Backward => from * abs(e.head_degree) / abs(e.tail_degree),
        };
    }
    let mut edge = Vec::with_capacity(g.edges.len());
    for e in &g.edges {
        let at_head = &vertex[e.head] * abs(e.head_degree);
        if &vertex[e.tail] * abs(e.tail_degree) != at_head {
            return Err(ComplexError::InconsistentLoop {
                witness: st.fundamental_loop(g, e.id),
            });
        }
        edge.push(at_head);
    }
    Ok(Radii { vertex, edge })
}

/// One cylinder per vertex (ids `0..V`) and per edge (ids `V..V+E`), with
/// two gluings per edge.
pub fn build_complex(g: &GraphOfCircles, radii: &Radii) -> Result<CylinderComplex, ComplexError> {
    g.validate()?;
    if radii.vertex.len() != g.vertices.len() || radii.edge.len() != g.edges.len() {
        return Err(ComplexError::Malformed("radii do not match the graph".into()));
    }
    let nv = g.vertices.len();
    let mut cylinders: Vec<Cylinder> = radii
        .vertex
        .iter()
        .enumerate()
        .map(|(id, r)| Cylinder {
            id,
            kind: CylinderKind::Vertex,
            radius: r.clone(),
        })
        .collect();
    cylinders.extend(radii.edge.iter().enumerate().map(|(i, r)| Cylinder {
        id: nv + i,
        kind: CylinderKind::Edge,
        radius: r.clone(),
    }));
    let gluings = g
        .edges
        .iter()
        .flat_map(|e| {
            [
                Gluing {
                    edge: nv + e.id,
                    end: 0,
                    vertex: e.tail,
                    circle: 1,
                    degree: e.tail_degree,
                },
                Gluing {
                    edge: nv + e.id,
                    end: 1,
                    vertex: e.head,
                    circle: 0,
                    degree: e.head_degree,
                },
            ]
        })
        .collect();
    let complex = CylinderComplex { cylinders, gluings };
    complex.validate()?;
    Ok(complex)
}

/// The two-cylinder model of `BS(m, m)` (or `BS(m, -m)`): a radius-`m`
/// cylinder whose two ends wrap `m` times around the two ends of a
/// radius-1 cylinder, the second wrap reversed for `Sign::Minus`.
pub fn intro_complex(m: u64, sign: Sign) -> CylinderComplex {
    assert!(m >= 1, "m must be positive");
    let m = i64::try_from(m).expect("m fits in i64");
    let cylinders = vec![
        Cylinder {
            id: 0,
            kind: CylinderKind::Edge,
            radius: BigRational::from_integer(m.into()),
        },
        Cylinder {
            id: 1,
            kind: CylinderKind::Vertex,
            radius: BigRational::one(),
        },
    ];
    let gluings = vec![
        Gluing {
            edge: 0,
            end: 0,
            vertex: 1,
            circle: 0,
            degree: m,
        },
        Gluing {
            edge: 0,
            end: 1,
            vertex: 1,
            circle: 1,
            degree: m * sign.value(),
        },
    ];
    CylinderComplex { cylinders, gluings }
}

/// The radius-`radius` quotient by `ker f` together with its radii and
/// complex.
pub fn ker_f_quotient_complex(tree: &Tree, radius: usize) -> Result<(QuotientBall, Radii, CylinderComplex), ComplexError> {
    let q = quotient_ball_ker_f(tree, radius);
    let base = q
        .graph
        .vertices
        .iter()
        .position(|v| v.mark == 0)
        .expect("level 0 is always present");
    let radii = assign_radii(&q.graph, base)?;
    let complex = build_complex(&q.graph, &radii)?;
    Ok((q, radii, complex))
}

/// Arc of a link graph; `length` is in units of `pi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkArc {
    pub from: usize,
    pub to: usize,
    #[serde(with = "rational_str")]
    pub length: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub nodes: usize,
    pub arcs: Vec<LinkArc>,
}

impl LinkGraph {
    /// Length of the shortest cycle, in units of `pi`. Each arc closes a
    /// cycle with the shortest path between its ends that avoids it.
    pub fn girth(&self) -> Option<BigRational> {
        let mut best: Option<BigRational> = None;
        for (i, arc) in self.arcs.iter().enumerate() {
            let closing = if arc.from == arc.to {
                Some(BigRational::zero())
            } else {
                self.shortest_path(arc.from, arc.to, i)
            };
            if let Some(rest) = closing {
                let len = rest + &arc.length;
                if best.as_ref().is_none_or(|b| len < *b) {
                    best = Some(len);
                }
            }
        }
        best
    }

    /// Dijkstra on the arcs other than `skip`.
    fn shortest_path(&self, from: usize, to: usize, skip: usize) -> Option<BigRational> {
        let mut dist: Vec<Option<BigRational>> = vec![None; self.nodes];
        let mut done = vec![false; self.nodes];
        dist[from] = Some(BigRational::zero());
        loop {
            let cur = (0..self.nodes)
                .filter(|&v| !done[v] && dist[v].is_some())
                .min_by(|&a, &b| dist[a].cmp(&dist[b]))?;
            if cur == to {
                return dist[to].clone();
            }
            done[cur] = true;
            let here = dist[cur].clone().expect("reached");
            for (i, arc) in self.arcs.iter().enumerate() {
                if i == skip {
                    continue;
                }
                let other = if arc.from == cur {
                    arc.to
                } else if arc.to == cur {
                    arc.from
                } else {
                    continue;
                };
                let cand = &here + &arc.length;
                if dist[other].as_ref().is_none_or(|d| cand < *d) {
                    dist[other] = Some(cand);
                }
            }
        }
    }
}

/// The link at a point of circle `circle` of vertex cylinder `cylinder`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleLink {
    pub cylinder: usize,
    pub circle: u8,
    pub link: LinkGraph,
}

pub fn link_graphs(x: &CylinderComplex) -> Vec<CircleLink> {
    let mut out = Vec::new();
    for c in x.cylinders.iter().filter(|c| c.kind == CylinderKind::Vertex) {
        for circle in 0..2u8 {
            let sheets: u64 = x
                .gluings
                .iter()
                .filter(|g| g.vertex == c.id && g.circle == circle)
                .map(|g| g.degree.unsigned_abs())
                .sum();
            let arcs = (0..1 + sheets)
                .map(|_| LinkArc {
                    from: 0,
                    to: 1,
                    length: BigRational::one(),
                })
                .collect();
            out.push(CircleLink {
                cylinder: c.id,
                circle,
                link: LinkGraph { nodes: 2, arcs },
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleReport {
    pub cylinder: usize,
    pub circle: u8,
    pub arcs: usize,
    /// Shortest link cycle in units of `pi`; `None` on a free boundary.
    #[serde(with = "opt_rational_str")]
    pub girth: Option<BigRational>,
    pub boundary: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cat0Report {
    pub passed: bool,
    /// Points off the vertex circles have flat or half-flat links and are
    /// not listed.
    pub circles: Vec<CircleReport>,
}

pub fn check_cat0(x: &CylinderComplex) -> Cat0Report {
    let two = BigRational::from_integer(2.into());
    let circles: Vec<CircleReport> = link_graphs(x)
        .into_iter()
        .map(|cl| {
            let girth = cl.link.girth();
            let passed = girth.as_ref().is_none_or(|g| *g >= two);
            CircleReport {
                cylinder: cl.cylinder,
                circle: cl.circle,
                arcs: cl.link.arcs.len(),
                boundary: girth.is_none(),
                girth,
                passed,
            }
        })
        .collect();
    Cat0Report {
        passed: circles.iter().all(|c| c.passed),
        circles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{loop_parity, signed_counts};
    use crate::words::{rng_for, BsParams};
    use rand::Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn int(a: i64) -> BigRational {
        q(a, 1)
    }

    #[test]
    fn radii_on_a_path() {
        let g = GraphOfCircles::path(0, 2, 2, 3);
        let r = assign_radii(&g, 0).unwrap();
        assert_eq!(r.vertex, vec![int(1), q(2, 3), q(4, 9)]);
        assert_eq!(r.edge, vec![int(2), q(4, 3)]);
        for e in &g.edges {
            assert_eq!(r.edge[e.id], int(2) * &r.vertex[e.tail]);
            assert_eq!(r.edge[e.id], int(3) * &r.vertex[e.head]);
        }
    }

    #[test]
    fn radii_on_loops() {
        let r = assign_radii(&GraphOfCircles::single_loop(2, 2), 0).unwrap();
        assert_eq!(r.vertex, vec![int(1)]);
        assert_eq!(r.edge, vec![int(2)]);
        let r = assign_radii(&GraphOfCircles::single_loop(2, -2), 0).unwrap();
        assert_eq!(r.edge, vec![int(2)]);

        match assign_radii(&GraphOfCircles::single_loop(3, 2), 0) {
            Err(ComplexError::InconsistentLoop { witness }) => {
                assert_eq!(witness.len(), 1);
            }
            other => panic!("expected InconsistentLoop, got {other:?}"),
        }
    }

    #[test]
    fn radii_independent_of_spanning_tree() {
        let mut g = GraphOfCircles::new();
        for _ in 0..5 {
            g.add_vertex(0);
        }
        for (t, h) in [(0, 1), (1, 2), (0, 3), (3, 2), (2, 4), (3, 1), (4, 4)] {
            g.add_edge(t, h, 4, 4);
        }
        // the (4,4) loop and the 3 -> 1 chord are compatible only because |dt| = |dh|
        let a = assign_radii_with(&g, 0, TreeStrategy::BreadthFirst).unwrap();
        let b = assign_radii_with(&g, 0, TreeStrategy::DepthFirst).unwrap();
        assert_eq!(a, b);

        let mut g = GraphOfCircles::path(-3, 3, 5, -2);
        g.add_vertex(0);
        g.add_edge(3, 7, 5, -2);
        g.add_edge(7, 5, 5, -2);
        let a = assign_radii_with(&g, 3, TreeStrategy::BreadthFirst).unwrap();
        let b = assign_radii_with(&g, 3, TreeStrategy::DepthFirst).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertex[7], q(5, 2));
    }

    #[test]
    fn build_examples() {
        let x = intro_complex(2, Sign::Plus);
        assert_eq!(x.cylinders.len(), 2);
        assert_eq!(x.gluings.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![2, 2]);
        x.validate().unwrap();
        let x = intro_complex(2, Sign::Minus);
        assert_eq!(x.gluings.iter().map(|g| g.degree).collect::<Vec<_>>(), vec![2, -2]);
        x.validate().unwrap();

        let g = GraphOfCircles::path(-1, 1, 3, 2);
        let r = assign_radii(&g, 1).unwrap();
        let x = build_complex(&g, &r).unwrap();
        assert_eq!(x.radii_of(CylinderKind::Vertex).len(), 3);
        assert_eq!(x.radii_of(CylinderKind::Edge).len(), 2);
        assert_eq!(x.gluings.len(), 4);
        assert_eq!(x.gluings[0], Gluing { edge: 3, end: 0, vertex: 0, circle: 1, degree: 3 });
        assert_eq!(x.gluings[1], Gluing { edge: 3, end: 1, vertex: 1, circle: 0, degree: 2 });
    }

    #[test]
    fn build_rejects_mismatched_radii() {
        let g = GraphOfCircles::path(0, 1, 3, 2);
        let r = Radii { vertex: vec![int(1), int(1)], edge: vec![int(3)] };
        assert_eq!(build_complex(&g, &r), Err(ComplexError::RadiusMismatch { gluing: 1 }));
    }

    #[test]
    fn link_examples() {
        let links = link_graphs(&intro_complex(2, Sign::Plus));
        assert_eq!(links.len(), 2);
        for l in &links {
            assert_eq!(l.link.arcs.len(), 3);
            assert_eq!(l.link.girth(), Some(int(2)));
        }

        let g = GraphOfCircles::path(0, 1, 2, 2);
        let x = build_complex(&g, &assign_radii(&g, 0).unwrap()).unwrap();
        let links = link_graphs(&x);
        // circle 0 of the bottom vertex and circle 1 of the top vertex are free
        let free: Vec<_> = links.iter().filter(|l| l.link.arcs.len() == 1).collect();
        assert_eq!(free.len(), 2);
        assert!(free.iter().all(|l| l.link.girth().is_none()));
    }

    #[test]
    fn girth_is_a_weighted_search() {
        // triangle with a long chord: girth comes from the triangle
        let arc = |from, to, len: BigRational| LinkArc { from, to, length: len };
        let link = LinkGraph {
            nodes: 3,
            arcs: vec![arc(0, 1, q(1, 2)), arc(1, 2, q(1, 3)), arc(2, 0, q(1, 4)), arc(0, 1, int(5))],
        };
        assert_eq!(link.girth(), Some(q(13, 12)));
        let tree_like = LinkGraph { nodes: 3, arcs: vec![arc(0, 1, int(1)), arc(1, 2, int(1))] };
        assert_eq!(tree_like.girth(), None);
        let with_loop = LinkGraph { nodes: 1, arcs: vec![arc(0, 0, q(3, 2))] };
        assert_eq!(with_loop.girth(), Some(q(3, 2)));
    }

    #[test]
    fn cat0_examples() {
        for sign in [Sign::Plus, Sign::Minus] {
            let rep = check_cat0(&intro_complex(2, sign));
            assert!(rep.passed);
            assert!(rep.circles.iter().all(|c| c.girth == Some(int(2))));
        }
        let tree = Tree::new(BsParams::new(3, 2).unwrap());
        for radius in 0..4 {
            let (_, _, x) = ker_f_quotient_complex(&tree, radius).unwrap();
            let rep = check_cat0(&x);
            assert!(rep.passed);
            for c in &rep.circles {
                assert!(c.boundary || c.girth == Some(int(2)));
            }
        }
        // a one-sheet gluing leaves a boundary-like circle with no cycle at all
        let x = CylinderComplex {
            cylinders: vec![
                Cylinder { id: 0, kind: CylinderKind::Vertex, radius: int(1) },
            ],
            gluings: vec![],
        };
        let rep = check_cat0(&x);
        assert!(rep.passed);
        assert!(rep.circles.iter().all(|c| c.boundary && c.arcs == 1));

        let torus = check_cat0(&intro_complex(1, Sign::Plus));
        assert!(torus.passed);
        assert!(torus.circles.iter().all(|c| c.arcs == 2 && c.girth == Some(int(2))));
    }

    #[test]
    fn complex_json_schema() {
        let x = intro_complex(2, Sign::Minus);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with(r#"{"cylinders":[{"id":0,"kind":"edge","radius":"2"}"#));
        assert!(s.contains(r#"{"edge":0,"end":1,"vertex":1,"circle":1,"degree":-2}"#));
        let back: CylinderComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let rep = serde_json::to_value(check_cat0(&x)).unwrap();
        assert_eq!(rep["circles"][0]["girth"], "2");
    }

    #[test]
    fn validate_catches_bad_input() {
        let mut x = intro_complex(3, Sign::Plus);
        x.cylinders[0].radius = int(2);
        assert_eq!(x.validate(), Err(ComplexError::RadiusMismatch { gluing: 0 }));
        let mut x = intro_complex(3, Sign::Plus);
        x.gluings[1].end = 0;
        assert!(matches!(x.validate(), Err(ComplexError::Malformed(_))));
    }

    /// Every simple cycle of an undirected multigraph, as step lists.
    fn simple_cycles(g: &GraphOfCircles) -> Vec<Vec<LoopStep>> {
        fn extend(
            g: &GraphOfCircles,
            start: usize,
            at: usize,
            path: &mut Vec<LoopStep>,
            seen: &mut Vec<bool>,
            out: &mut Vec<Vec<LoopStep>>,
        ) {
            for e in &g.edges {
                for (dir, from, to) in [
                    (crate::tree::Direction::Forward, e.tail, e.head),
                    (crate::tree::Direction::Backward, e.head, e.tail),
                ] {
                    if from != at || path.iter().any(|s| s.edge == e.id) {
                        continue;
                    }
                    let step = LoopStep::new(e.id, dir);
                    if to == start {
                        let mut cyc = path.clone();
                        cyc.push(step);
                        out.push(cyc);
                    } else if to > start && !seen[to] {
                        seen[to] = true;
                        path.push(step);
                        extend(g, start, to, path, seen, out);
                        path.pop();
                        seen[to] = false;
                    }
                }
            }
        }
        let mut out = Vec::new();
        for s in 0..g.vertices.len() {
            let mut seen = vec![false; g.vertices.len()];
            seen[s] = true;
            extend(g, s, s, &mut Vec::new(), &mut seen, &mut out);
        }
        out
    }

    #[test]
    fn assignability_matches_brute_force_balance() {
        let mut rng = rng_for(2024, 0);
        let mut inconsistent = 0;
        for _ in 0..100 {
            let nv = rng.gen_range(1..=4);
            let mut g = GraphOfCircles::new();
            for _ in 0..nv {
                g.add_vertex(0);
            }
            // spanning path keeps the graph connected
            for v in 1..nv {
                let (t, h) = if rng.gen_bool(0.5) { (v - 1, v) } else { (v, v - 1) };
                g.add_edge(t, h, 3, 2);
            }
            for _ in 0..rng.gen_range(0..=3) {
                g.add_edge(rng.gen_range(0..nv), rng.gen_range(0..nv), 3, 2);
            }
            let all_balanced = simple_cycles(&g)
                .iter()
                .all(|c| matches!(loop_parity(c, &g), Ok((p, m)) if p == m));
            let assignable = assign_radii(&g, 0).is_ok();
            assert_eq!(assignable, all_balanced, "{g:?}");
            assert_eq!(signed_counts(&g, 0).is_ok(), all_balanced);
            inconsistent += usize::from(!assignable);
        }
        assert!(inconsistent > 10 && inconsistent < 90);
    }
}

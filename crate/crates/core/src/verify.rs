//! Seeded property suites over the whole library.
//!
//! Each suite returns a [`SuiteReport`] listing one [`PropertyResult`] per
//! property with the first counterexample found. Output depends only on the
//! parameters and the [`VerifyConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::Rng;
use serde::Serialize;

use crate::affine::{CyclicSubgroup, Gamma, GammaElement};
use crate::complex::{assign_radii, check_cat0, intro_complex, ker_f_quotient_complex};
use crate::quotient::{quotient_ball_ker_f, random_walk, reduce_path, GraphOfCircles};
use crate::tree::{Tree, VertexAddress};
use crate::words::{britton_reduce, rng_for, sample_ker_f_word, sample_word, BsParams, Sign, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Eq1,
    LemmaLoo,
    FreeAction,
    Quotient,
    Radii,
    Cat0,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Eq1,
        Suite::LemmaLoo,
        Suite::FreeAction,
        Suite::Quotient,
        Suite::Radii,
        Suite::Cat0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1 => "eq1",
            Suite::LemmaLoo => "lemma-loo",
            Suite::FreeAction => "free-action",
            Suite::Quotient => "quotient",
            Suite::Radii => "radii",
            Suite::Cat0 => "cat0",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .iter()
            .chain([&Suite::All])
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub radius: usize,
    /// Generator for the free-action suite; `None` runs the standard set.
    pub generator: Option<GammaElement>,
    pub exponent_bound: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 500,
            radius: 3,
            generator: None,
            exponent_bound: 50,
        }
    }
}

/// Generators `(x, y)` with `y != 0`, whose preimages act freely.
pub fn standard_free_generators() -> Vec<GammaElement> {
    [(0, 1), (1, 1), (1, 2), (-2, 3)]
        .into_iter()
        .map(|(x, y)| GammaElement::from_ints(x, y))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub passed: bool,
    pub checks: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, i64>,
}

impl PropertyResult {
    fn new(property: impl Into<String>) -> Self {
        PropertyResult {
            property: property.into(),
            passed: true,
            checks: 0,
            counterexample: None,
            stats: BTreeMap::new(),
        }
    }

    /// Counts one check; records the first failure.
    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(counterexample());
        }
    }

    fn stat(&mut self, key: &str, delta: i64) {
        *self.stats.entry(key.to_string()).or_insert(0) += delta;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub params: BsParams,
    pub config: VerifyConfig,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

pub fn run_suite(suite: Suite, params: BsParams, config: &VerifyConfig) -> SuiteReport {
    let properties = match suite {
        Suite::Eq1 => eq1(params, config),
        Suite::LemmaLoo => lemma_loo(params, config),
        Suite::FreeAction => free_action(params, config),
        Suite::Quotient => quotient(params, config),
        Suite::Radii => radii(params, config),
        Suite::Cat0 => cat0(params, config),
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|&s| {
                run_suite(s, params, config).properties.into_iter().map(move |mut p| {
                    p.property = format!("{s}/{}", p.property);
                    p
                })
            })
            .collect(),
    };
    SuiteReport {
        suite,
        params,
        config: config.clone(),
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}

const WORD_LEN: usize = 8;

fn eq1(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let gamma = Gamma::new(p);

    let mut formula = PropertyResult::new("conjugation-formula");
    let mut rng = rng_for(cfg.seed, 10);
    for _ in 0..cfg.samples {
        let g = sample_word(&p, WORD_LEN, &mut rng);
        let k: i64 = rng.gen_range(-20..=20);
        let lhs = gamma.phi(&g.conjugate(&Word::a(k)));
        let rhs = gamma.conjugation_formula(&gamma.phi(&g), &BigInt::from(k));
        formula.check(lhs == rhs, || format!("g = {g}, k = {k}: {lhs} != {rhs}"));
    }

    let mut hom = PropertyResult::new("phi-homomorphism");
    let mut rng = rng_for(cfg.seed, 11);
    for _ in 0..cfg.samples {
        let u = sample_word(&p, WORD_LEN, &mut rng);
        let v = sample_word(&p, WORD_LEN, &mut rng);
        let ok = gamma.phi(&u.multiply(&v)) == gamma.mul(&gamma.phi(&u), &gamma.phi(&v));
        hom.check(ok, || format!("u = {u}, v = {v}"));
    }

    let mut britton = PropertyResult::new("phi-invariant-under-reduction");
    let mut rng = rng_for(cfg.seed, 12);
    for _ in 0..cfg.samples {
        let w = sample_word(&p, 2 * WORD_LEN, &mut rng);
        let r = britton_reduce(&w, &p).to_word();
        britton.check(gamma.phi(&w) == gamma.phi(&r), || format!("w = {w}, reduced = {r}"));
    }
    vec![formula, hom, britton]
}

fn lemma_loo(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let tree = Tree::new(p);

    let mut balanced = PropertyResult::new("ker-f-geodesics-balanced");
    let mut rng = rng_for(cfg.seed, 20);
    for _ in 0..cfg.samples {
        let beta = sample_ker_f_word(&p, WORD_LEN, &mut rng);
        let g = sample_word(&p, WORD_LEN, &mut rng);
        let v = tree.vertex_from_word(&g);
        let w = tree.act(&beta, &v);
        let path = tree.geodesic(&v, &w);
        let (fwd, bwd) = (path.forward_count(), path.backward_count());
        balanced.stat("forward", fwd as i64);
        balanced.stat("backward", bwd as i64);
        let d = tree.signed_distance(&v, &w);
        balanced.check(fwd == bwd && d == 0 && path.len().is_multiple_of(2), || {
            format!("beta = {beta}, g = {g}: {fwd} forward, {bwd} backward, D = {d}")
        });
    }

    let mut cocycle = PropertyResult::new("signed-distance-identities");
    let mut rng = rng_for(cfg.seed, 21);
    let base = VertexAddress::base();
    for _ in 0..cfg.samples {
        let g = sample_word(&p, WORD_LEN, &mut rng);
        let [x, y, z] = [0, 1, 2].map(|_| tree.vertex_from_word(&sample_word(&p, WORD_LEN, &mut rng)));
        let d = |u: &VertexAddress, v: &VertexAddress| tree.signed_distance(u, v);
        let ok = d(&x, &y) == -d(&y, &x)
            && d(&x, &y) + d(&y, &z) == d(&x, &z)
            && d(&tree.act(&g, &x), &tree.act(&g, &y)) == d(&x, &y)
            && d(&base, &tree.vertex_from_word(&Word::b(1).multiply(&g))) == 1 + d(&base, &tree.vertex_from_word(&g))
            && tree.geodesic(&x, &y).signed_length() == d(&x, &y);
        cocycle.check(ok, || format!("g = {g}, P = [{x}], Q = [{y}], R = [{z}]"));
    }

    let mut reduction = PropertyResult::new("path-reduction-gives-geodesic");
    let mut rng = rng_for(cfg.seed, 22);
    for _ in 0..(cfg.samples / 10).max(1) {
        let start = tree.vertex_from_word(&sample_word(&p, 4, &mut rng));
        let walk = random_walk(&tree, &start, 200, &mut rng);
        let end = tree.path_end(&walk).expect("walks chain");
        let ok = match reduce_path(&tree, &walk) {
            Ok(r) => r == tree.geodesic(&start, &end) && r.signed_length() == walk.signed_length(),
            Err(_) => false,
        };
        reduction.check(ok, || format!("200-step walk from [{start}] to [{end}]"));
    }
    vec![balanced, cocycle, reduction]
}

fn free_action(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let tree = Tree::new(p);
    let gens = match &cfg.generator {
        Some(g) => vec![g.clone()],
        None => standard_free_generators(),
    };
    gens.into_iter()
        .map(|g| {
            let report = tree.free_action_check(&CyclicSubgroup::new(g.clone()), cfg.radius, cfg.exponent_bound);
            let mut res = PropertyResult::new(format!("free-action <{}>", g));
            res.checks = report.checks;
            res.passed = report.passed;
            res.counterexample = report
                .witness
                .map(|w| format!("vertex [{}], k = {}, generator^{} = phi(g a^k g^-1)", w.vertex, w.k, w.j));
            res
        })
        .collect()
}

fn quotient(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let tree = Tree::new(p);
    let mut shape = PropertyResult::new("quotient-is-level-path");
    let mut partition = PropertyResult::new("orbits-are-levels");
    for r in 0..=cfg.radius {
        let q = quotient_ball_ker_f(&tree, r);
        let expected = GraphOfCircles::path(-(r as i64), r as i64, p.m(), p.n());
        shape.check(q.graph == expected, || format!("radius {r}: {:?}", q.graph));
        shape.stat("witness-checks", q.witness_checks as i64);

        // every ball vertex is certified into the orbit of its level's representative
        for v in tree.ball(r) {
            let rep = &q.vertex_representatives[(v.level() + r as i64) as usize];
            let beta = v.representative().multiply(&rep.representative().invert());
            let ok = beta.b_exponent_sum().is_zero() && tree.act(&beta, rep) == v && rep.level() == v.level();
            partition.check(ok, || format!("radius {r}: vertex [{v}] vs representative [{rep}]"));
        }
    }
    vec![shape, partition]
}

fn radii(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let tree = Tree::new(p);
    let ratio = BigRational::new(p.m().abs().into(), p.n().abs().into());
    let n_abs = BigRational::from_integer(p.n().abs().into());
    let m_abs = BigRational::from_integer(p.m().abs().into());
    let mut formula = PropertyResult::new("radius-formula");
    let mut criteria = PropertyResult::new("edge-radius-criteria");
    for r in 0..=cfg.radius {
        let q = quotient_ball_ker_f(&tree, r);
        let base = r;
        let radii = match assign_radii(&q.graph, base) {
            Ok(x) => x,
            Err(e) => {
                formula.check(false, || format!("radius {r}: {e}"));
                continue;
            }
        };
        for v in &q.graph.vertices {
            let want: BigRational = Pow::pow(&ratio, v.mark);
            formula.check(radii.vertex[v.id] == want, || format!("radius {r}, level {}", v.mark));
        }
        for e in &q.graph.edges {
            let head_level = q.graph.vertices[e.head].mark;
            let want = &n_abs * Pow::pow(&ratio, head_level);
            formula.check(radii.edge[e.id] == want, || format!("radius {r}, edge {}", e.id));
            let ok = radii.edge[e.id] == &m_abs * &radii.vertex[e.tail] && radii.edge[e.id] == &n_abs * &radii.vertex[e.head];
            criteria.check(ok, || format!("radius {r}, edge {}", e.id));
        }
    }
    vec![formula, criteria]
}

fn cat0(p: BsParams, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let tree = Tree::new(p);
    let two = BigRational::from_integer(2.into());
    let mut quotient_links = PropertyResult::new("quotient-complex-link-condition");
    for r in 0..=cfg.radius {
        match ker_f_quotient_complex(&tree, r) {
            Ok((_, _, x)) => {
                for c in check_cat0(&x).circles {
                    quotient_links.stat(if c.boundary { "boundary-circles" } else { "glued-circles" }, 1);
                    let ok = c.passed && (c.boundary || c.girth.as_ref() == Some(&two));
                    quotient_links.check(ok, || format!("radius {r}: cylinder {} circle {}", c.cylinder, c.circle));
                }
            }
            Err(e) => quotient_links.check(false, || format!("radius {r}: {e}")),
        }
    }

    let mut intro = PropertyResult::new("two-cylinder-model-link-condition");
    let m = p.m().unsigned_abs();
    for sign in [Sign::Plus, Sign::Minus] {
        let x = intro_complex(m, sign);
        let rep = check_cat0(&x);
        let ok = x.validate().is_ok()
            && rep.passed
            && rep.circles.iter().all(|c| c.girth.as_ref() == Some(&two));
        intro.check(ok, || format!("m = {m}, sign = {sign:?}"));
    }
    vec![quotient_links, intro]
}

/// Parses `"x,y"` with `x` an integer or fraction and `y` an integer.
pub fn parse_generator(s: &str) -> Result<GammaElement, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("generator {s:?} must look like \"x,y\""))?;
    let u = crate::affine::parse_rational(x)?;
    let v = y.trim().parse().map_err(|_| format!("bad second coordinate in {s:?}"))?;
    Ok(GammaElement::new(u, v))
}

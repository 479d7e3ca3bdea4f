use bsforest::affine::{Gamma, GammaElement};
use bsforest::complex::{check_cat0, ker_f_quotient_complex, CylinderComplex};
use bsforest::quotient::GraphOfCircles;
use bsforest::tree::{Tree, VertexAddress};
use bsforest::words::{britton_reduce, is_identity, rng_for, sample_word, BsParams, Word};

const PARAM_SETS: [(i64, i64); 5] = [(3, 2), (2, 3), (4, -3), (-2, 5), (2, 2)];

#[test]
fn reduced_forms_act_like_their_words() {
    for (i, (m, n)) in PARAM_SETS.into_iter().enumerate() {
        let p = BsParams::new(m, n).unwrap();
        let t = Tree::new(p);
        let ball = t.ball(2);
        let mut rng = rng_for(21, i as u64);
        for _ in 0..100 {
            let w = sample_word(&p, 10, &mut rng);
            let r = britton_reduce(&w, &p).to_word();
            for v in &ball {
                assert_eq!(t.act(&w, v), t.act(&r, v), "({m},{n}) {w} at [{v}]");
            }
        }
    }
}

#[test]
fn pinch_free_forms_with_stable_letters_move_the_base() {
    for (i, (m, n)) in PARAM_SETS.into_iter().enumerate() {
        let p = BsParams::new(m, n).unwrap();
        let t = Tree::new(p);
        let mut rng = rng_for(22, i as u64);
        for _ in 0..300 {
            let w = sample_word(&p, 10, &mut rng);
            let form = britton_reduce(&w, &p);
            let moved = !t.vertex_from_word(&w).is_base();
            assert_eq!(moved, form.b_length() > 0, "({m},{n}) {w} -> {form}");
            assert_eq!(t.tree_distance(&VertexAddress::base(), &t.vertex_from_word(&w)), form.b_length());
        }
    }
}

#[test]
fn trivial_words_have_trivial_image() {
    for (i, (m, n)) in PARAM_SETS.into_iter().enumerate() {
        let p = BsParams::new(m, n).unwrap();
        let gamma = Gamma::new(p);
        let mut rng = rng_for(23, i as u64);
        for _ in 0..200 {
            let w = sample_word(&p, 8, &mut rng);
            let loop_word = w.multiply(&Word::b(-1)).multiply(&Word::a(m)).multiply(&Word::b(1)).multiply(&Word::a(-n)).multiply(&w.invert());
            assert!(is_identity(&loop_word, &p));
            assert!(gamma.phi(&loop_word).is_identity());
        }
    }
}

#[test]
fn serialized_objects_round_trip() {
    let g: GammaElement = serde_json::from_str(r#"{"u":"-7/12","v":-3}"#).unwrap();
    assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"u":"-7/12","v":-3}"#);

    let p = BsParams::new(3, 2).unwrap();
    let t = Tree::new(p);
    for v in t.ball(2) {
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<VertexAddress>(&s).unwrap(), v);
    }

    let (q, _, x) = ker_f_quotient_complex(&t, 2).unwrap();
    let g2: GraphOfCircles = serde_json::from_str(&serde_json::to_string(&q.graph).unwrap()).unwrap();
    assert_eq!(g2, q.graph);
    let x2: CylinderComplex = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(x2, x);
    assert!(check_cat0(&x2).passed);
}

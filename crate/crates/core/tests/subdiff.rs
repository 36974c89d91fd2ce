use proptest::prelude::*;
use subjet::piecewise::{
    load_corpus, negate, random_piecewise_affine, refine, sum, GeneratorConfig, PiecewiseFunction,
};
use subjet::scalar::rat;
use subjet::subdiff::{
    oracle_subdiff, probe_points, sum_rule_check_points, Engine, Kind, OracleConfig, SubdiffSet,
};
use subjet::Error;

fn lipschitz(seed: u64, dim: usize) -> PiecewiseFunction {
    let cfg = GeneratorConfig {
        box_probability: 0.0,
        ..GeneratorConfig::new(dim)
    };
    random_piecewise_affine(seed, &cfg)
}

fn any_fixture(seed: u64, dim: usize) -> PiecewiseFunction {
    random_piecewise_affine(seed, &GeneratorConfig::new(dim))
}

fn check_oracle(name: &str, points: usize) {
    let f = load_corpus(name).unwrap();
    let n = f.ambient_dim;
    let cfg = OracleConfig::for_dim(n);
    let engine = Engine::new(&f).unwrap();
    for x in probe_points(&f, points, 1).unwrap() {
        for kind in [Kind::Frechet, Kind::Limiting, Kind::Clarke] {
            let exact = match engine.subdiff(&x, kind) {
                Ok(s) => s,
                Err(Error::NotLipschitz(_)) => continue,
                Err(e) => panic!("{name} {kind} at {x:?}: {e}"),
            };
            let o = oracle_subdiff(&f, &x, kind, &cfg).unwrap();
            assert!(
                o.agrees_with(&exact, n, &rat(1, 1_000_000)).unwrap(),
                "{name} {kind} at {x:?}"
            );
        }
    }
}

#[test]
fn oracle_matches_engine_in_one_dimension() {
    for name in [
        "abs",
        "neg_abs",
        "min_kink",
        "indicator_interval",
        "segment_indicator",
    ] {
        check_oracle(name, 25);
    }
}

#[test]
fn oracle_matches_engine_in_two_dimensions() {
    for name in ["hinge2d", "indicator_orthant", "min3_plane"] {
        check_oracle(name, 6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn inclusion_chain_and_clarke_hull(seed in any::<u64>(), dim in 1usize..=2) {
        let f = lipschitz(seed, dim);
        let e = Engine::new(&f).unwrap();
        for x in probe_points(&f, 10, seed).unwrap() {
            let fr = e.frechet(&x).unwrap();
            let li = e.limiting(&x).unwrap();
            let cl = e.clarke(&x).unwrap();
            prop_assert!(fr.is_subset_of(&li));
            prop_assert!(li.is_subset_of(&cl));
            let hull = SubdiffSet::normalized(Kind::Clarke, vec![li.convex_hull(dim)]);
            prop_assert!(hull.same_set(&cl));
        }
    }

    #[test]
    fn subjet_pieces_agree_with_pointwise_values(seed in any::<u64>(), dim in 1usize..=2) {
        let f = any_fixture(seed, dim);
        let e = Engine::new(&f).unwrap();
        let pieces = e.subjet_pieces(Kind::Limiting);
        for p in &pieces {
            let x = p.base.relint_point().unwrap();
            let v = p.subgrad.relint_point().unwrap();
            prop_assert!(e.limiting(&x).unwrap().contains(&v));
        }
        for x in probe_points(&f, 8, seed).unwrap() {
            for piece in e.limiting(&x).unwrap().pieces {
                for v in piece.v_representation().unwrap().vertices {
                    prop_assert!(pieces.iter().any(|p| p.contains(&x, &v)), "({x:?}, {v:?})");
                }
            }
        }
    }

    #[test]
    fn refinement_and_builders_preserve_values(seed in any::<u64>(), dim in 1usize..=3) {
        let f = any_fixture(seed, dim);
        let g = lipschitz(seed.wrapping_add(1), dim);
        let r = refine(&f).unwrap();
        let nn = negate(&negate(&g).unwrap()).unwrap();
        let s = sum(&g, &f).unwrap();
        for x in probe_points(&f, 10, seed).unwrap() {
            let fx = f.evaluate(&x).unwrap();
            let gx = g.evaluate(&x).unwrap();
            prop_assert_eq!(r.evaluate(&x).unwrap(), fx.clone());
            prop_assert_eq!(nn.evaluate(&x).unwrap(), gx.clone());
            let want = match (fx.finite(), gx.finite()) {
                (Some(a), Some(b)) => Some(a.clone() + b.clone()),
                _ => None,
            };
            prop_assert_eq!(s.evaluate(&x).unwrap().finite().cloned(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn sum_rule_holds_for_random_pairs(seed in any::<u64>(), dim in 1usize..=2) {
        // small arrangements: the complex of the sum overlays both
        let f1 = random_piecewise_affine(seed, &GeneratorConfig { max_hyperplanes: 3, box_probability: 0.0, ..GeneratorConfig::new(dim) });
        let f2 = random_piecewise_affine(seed ^ 0x5eed, &GeneratorConfig { max_hyperplanes: 3, ..GeneratorConfig::new(dim) });
        let points = probe_points(&sum(&f1, &f2).unwrap(), 6, seed).unwrap();
        for (x, rep) in points.iter().zip(sum_rule_check_points(&f1, &f2, &points).unwrap()) {
            prop_assert!(rep.holds, "at {x:?}");
        }
    }
}

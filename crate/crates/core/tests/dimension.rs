use subjet::dimension::numeric::default_radii;
use subjet::dimension::{
    estimate_local_dim_numeric, pullback_union, sample_union, subjet_union,
    verify_local_dim_theorem, PointStatus,
};
use subjet::piecewise::load_corpus;
use subjet::scalar::{ivec, rat, vec_to_f64};
use subjet::subdiff::Kind;
use subjet::{Dim, Rational};

fn half(a: i64, b: i64, c: i64) -> Vec<Rational> {
    vec![rat(a, 2), rat(b, 2), rat(c, 2)]
}

#[test]
fn neg_abs_graph_dimensions() {
    let f = load_corpus("neg_abs").unwrap();
    let u = subjet_union(&f, Kind::Limiting).unwrap();
    assert_eq!(
        u.local_dim(&ivec(&[0, 1])).unwrap().local_dim,
        Dim::Finite(1)
    );
    assert_eq!(u.global_dim(), Dim::Finite(1));
}

#[test]
fn orthant_indicator_global_dim() {
    let f = load_corpus("indicator_orthant").unwrap();
    let u = subjet_union(&f, Kind::Limiting).unwrap();
    assert_eq!(u.pieces.len(), 4);
    assert_eq!(u.global_dim(), Dim::Finite(2));
}

#[test]
fn pullback_sum_isolated_point() {
    let g = load_corpus("pullback_sum").unwrap();
    let u = pullback_union(&g, &[ivec(&[1]), ivec(&[1])], &ivec(&[0, 0]), 1).unwrap();
    let r = u.local_dim(&ivec(&[0, 0])).unwrap();
    assert_eq!(r.local_dim, Dim::Finite(0));
    assert_eq!(r.certificate.len(), 1);
}

#[test]
fn clarke3d_local_dim_two_global_three() {
    let f = load_corpus("clarke3d").unwrap();
    let u = subjet_union(&f, Kind::Clarke).unwrap();
    let mut p = ivec(&[0, 0, 0]);
    p.extend(half(1, -1, 0));
    assert_eq!(u.local_dim(&p).unwrap().local_dim, Dim::Finite(2));
    assert_eq!(u.global_dim(), Dim::Finite(3));
}

#[test]
fn clarke3d_verification_finds_the_documented_violations() {
    let f = load_corpus("clarke3d").unwrap();
    let r = verify_local_dim_theorem(&f, Kind::Clarke).unwrap();
    let viol: Vec<&Vec<Rational>> = r.violations().map(|p| &p.point).collect();
    let mut a = ivec(&[0, 0, 0]);
    a.extend(half(1, -1, 0));
    let mut b = ivec(&[0, 0, 0]);
    b.extend(half(-1, 1, 0));
    assert_eq!(viol.len(), 2, "{viol:?}");
    assert!(viol.contains(&&a) && viol.contains(&&b));
    for p in r.violations() {
        assert_eq!(p.local_dim, Some(Dim::Finite(2)));
    }
    assert!(r.undecided().all(|p| p.point[..3] == ivec(&[0, 0, 0])[..]));
}

#[test]
fn disc_plus_point_violation() {
    let f = load_corpus("disc_plus_point").unwrap();
    let r = verify_local_dim_theorem(&f, Kind::Limiting).unwrap();
    let v: Vec<_> = r.violations().collect();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].point, ivec(&[1, 0, 1, 0]));
    assert_eq!(v[0].local_dim, Some(Dim::Finite(1)));
}

#[test]
fn lsc_fixtures_pass() {
    for name in [
        "abs",
        "neg_abs",
        "min_kink",
        "indicator_box",
        "min3_plane",
        "hinge2d",
        "segment_indicator",
    ] {
        let f = load_corpus(name).unwrap();
        for kind in [Kind::Frechet, Kind::Limiting] {
            let r = verify_local_dim_theorem(&f, kind).unwrap();
            assert!(
                r.passed(),
                "{name} {kind}: {:?}",
                r.violations().collect::<Vec<_>>()
            );
            assert!(r.points.iter().all(|p| p.status == PointStatus::Ok));
        }
    }
}

#[test]
fn numeric_estimate_matches_clarke3d_fiber() {
    let f = load_corpus("clarke3d").unwrap();
    let u = subjet_union(&f, Kind::Clarke).unwrap();
    let mut p = ivec(&[0, 0, 0]);
    p.extend(half(1, -1, 0));
    let samples = sample_union(&u, &p, 0.2, 3000, 11);
    let e = estimate_local_dim_numeric(&samples, &vec_to_f64(&p), &default_radii(0.2, 4)).unwrap();
    assert_eq!((e.slope_dim, e.pca_rank), (2, 2), "{e:?}");
}

#[test]
fn numeric_estimate_matches_exact_on_affine_fixtures() {
    for name in ["abs", "neg_abs", "min_kink", "indicator_orthant", "hinge2d"] {
        let f = load_corpus(name).unwrap();
        let u = subjet_union(&f, Kind::Limiting).unwrap();
        for p in subjet::dimension::verify::covering_points(&u) {
            let exact = u.local_dim(&p).unwrap().local_dim;
            let samples = sample_union(&u, &p, 0.25, 3000, 5);
            let e = estimate_local_dim_numeric(&samples, &vec_to_f64(&p), &default_radii(0.25, 4))
                .unwrap();
            assert_eq!(Dim::Finite(e.slope_dim), exact, "{name} at {p:?}: {e:?}");
        }
    }
}

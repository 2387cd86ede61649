mod common;

use common::r;
use dmlwb::algebra::{compose_map, parse_poly, AffinePoint, Poly2, PolyMap, Rat, UPoly};
use dmlwb::curves::{is_fixed_curve, push_forward_curve, Curve};
use dmlwb::degrees::{algebraic_degree, degree_sequence, StabilityVerdict, stability_from_profile};
use dmlwb::dml::{ap_decompose, visit_set, visit_set_via_iterate};
use dmlwb::heights::{
    abs_value, height_proj, northcott_enumerate, product_formula_check, Place, ProjPoint,
};
use dmlwb::hirzebruch::{embed_a2, extend_to_fn, normalize_fn_point, TriangularMap};
use dmlwb::intersection::{intersection_multiplicity, Multiplicity};
use dmlwb::metrics::{basin_probe_affine, metric_dv_raw, BasinParams, BasinVerdict};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| r(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |x| !x.is_zero())
}

/// Total degree at most `max_deg`.
fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, rat()), 0..=max_terms).prop_map(move |terms| {
        Poly2::from_terms(terms.into_iter().map(|(i, j, c)| ([i, j.min(max_deg - i)], c)))
    })
}

fn point() -> impl Strategy<Value = AffinePoint> {
    (rat(), rat()).prop_map(|(x, y)| AffinePoint::new(x, y))
}

fn small_map() -> impl Strategy<Value = PolyMap> {
    (poly(2, 3), poly(2, 3)).prop_map(|(a, b)| PolyMap::new(a, b))
}

fn upoly(min_deg: usize, max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-3i64..=3, min_deg + 1..=max_deg + 1).prop_map(|mut c| {
        let last = c.len() - 1;
        if c[last] == 0 {
            c[last] = 1;
        }
        UPoly::from_ints(&c)
    })
}

fn triangular() -> impl Strategy<Value = TriangularMap> {
    (nonzero_rat(), rat(), upoly(1, 3), upoly(0, 5)).prop_map(|(a, b, ap, bp)| {
        TriangularMap::new(a, b, ap, bp).expect("deg A >= 1 and a != 0")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_and_evaluation(p in poly(3, 5), q in poly(3, 5), s in poly(3, 5), pt in point()) {
        prop_assert_eq!(&(&p + &q) * &s, &(&p * &s) + &(&q * &s));
        let lhs = (&p * &q).eval_at(&pt.x, &pt.y);
        prop_assert_eq!(lhs, p.eval_at(&pt.x, &pt.y) * q.eval_at(&pt.x, &pt.y));
    }

    #[test]
    fn printing_round_trips(p in poly(4, 6)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn composition_is_associative(f in small_map(), g in small_map(), h in small_map()) {
        let left = compose_map(&compose_map(&f, &g).unwrap(), &h).unwrap();
        let right = compose_map(&f, &compose_map(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left.f1, right.f1);
        prop_assert_eq!(left.f2, right.f2);
    }

    #[test]
    fn degree_profiles(f in small_map().prop_filter("nonconstant", |f| !f.is_constant())) {
        let prof = degree_sequence(&f, 4).unwrap();
        prop_assert!(prof.is_submultiplicative());
        let mut acc = f.clone();
        for n in 1..=4 {
            prop_assert_eq!(prof.degree(n), algebraic_degree(&acc));
            acc = compose_map(&f, &acc).unwrap();
        }
        if let StabilityVerdict::StableUpToN(_) = stability_from_profile(&prof) {
            prop_assert_eq!(prof.lambda_estimate, algebraic_degree(&f) as f64);
        }
    }

    #[test]
    fn places_are_multiplicative_and_ultrametric(x in rat(), y in rat(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let v = Place::finite(p).unwrap();
        prop_assert_eq!(abs_value(&(&x * &y), v), abs_value(&x, v) * abs_value(&y, v));
        prop_assert!(abs_value(&(&x + &y), v) <= abs_value(&x, v).max(abs_value(&y, v)));
        let inf = Place::Archimedean;
        prop_assert_eq!(abs_value(&(&x * &y), inf), abs_value(&x, inf) * abs_value(&y, inf));
    }

    #[test]
    fn product_formula(x in nonzero_rat()) {
        prop_assert!(product_formula_check(&x).unwrap());
    }

    #[test]
    fn height_is_scale_invariant(c in prop::collection::vec(rat(), 3), s in nonzero_rat()) {
        prop_assume!(c.iter().any(|v| !v.is_zero()));
        let scaled: Vec<Rat> = c.iter().map(|v| v * &s).collect();
        prop_assert_eq!(
            height_proj(&ProjPoint::from_rats(&c).unwrap()),
            height_proj(&ProjPoint::from_rats(&scaled).unwrap())
        );
    }

    #[test]
    fn metric_axioms(
        a in prop::collection::vec(rat(), 3),
        b in prop::collection::vec(rat(), 3),
        c in prop::collection::vec(rat(), 3),
        s in nonzero_rat(),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        for v in [&a, &b, &c] {
            prop_assume!(v.iter().any(|x| !x.is_zero()));
        }
        let fin = Place::finite(p).unwrap();
        let inf = Place::Archimedean;
        let d = |x: &[Rat], y: &[Rat], v| metric_dv_raw(x, y, v).unwrap();
        prop_assert!(d(&a, &c, fin) <= d(&a, &b, fin).max(d(&b, &c, fin)));
        prop_assert!(d(&a, &c, inf) <= (d(&a, &b, inf) + d(&b, &c, inf)) * r(2, 1));
        prop_assert!(d(&a, &b, fin) <= Rat::one());
        prop_assert_eq!(d(&a, &b, inf), d(&b, &a, inf));
        let scaled: Vec<Rat> = a.iter().map(|x| x * &s).collect();
        prop_assert_eq!(d(&scaled, &b, fin), d(&a, &b, fin));
        prop_assert_eq!(d(&scaled, &b, inf), d(&a, &b, inf));
        prop_assert!(d(&a, &scaled, inf).is_zero());
    }

    #[test]
    fn extension_commutes_with_embedding(t in triangular(), pts in prop::collection::vec(point(), 5)) {
        let f = t.to_map();
        let thr = t.stability_threshold();
        for n in thr..=thr + 2 {
            let m = extend_to_fn(&t, n);
            for p in &pts {
                prop_assert_eq!(m.apply(&embed_a2(p, n)).unwrap(), embed_a2(&f.apply(p), n));
            }
        }
    }

    #[test]
    fn normalization_is_canonical(
        raw in prop::collection::vec(rat(), 4),
        lam in nonzero_rat(),
        mu in nonzero_rat(),
        n in 0u32..5,
    ) {
        let raw: [Rat; 4] = raw.try_into().unwrap();
        let Ok(p) = normalize_fn_point(raw.clone(), n) else {
            return Ok(());
        };
        prop_assert_eq!(&normalize_fn_point(p.coords.clone(), n).unwrap(), &p);
        let lam_n = num_traits::pow(lam.clone(), n as usize);
        let moved = [&raw[0] * &lam, &raw[1] * &lam, &raw[2] * &mu, &raw[3] * &mu / lam_n];
        prop_assert_eq!(normalize_fn_point(moved, n).unwrap(), p);
    }

    #[test]
    fn fixed_graphs_push_forward_to_themselves(
        a in nonzero_rat(), b in rat(), ap in upoly(1, 2), pp in upoly(1, 3)
    ) {
        // B = P(ax + b) - A P makes y = P(x) invariant.
        let inner = UPoly::from_coeffs(vec![b.clone(), a.clone()]);
        let bp = &pp.compose(&inner) - &(&ap * &pp);
        prop_assume!(!bp.is_zero());
        let t = TriangularMap::new(a, b, ap, bp).unwrap();
        let f = t.to_map();
        let c = Curve::new(&(&Poly2::y() - &pp.to_poly2(0))).unwrap();
        prop_assert!(is_fixed_curve(&c, &f).unwrap());
        let img = push_forward_curve(&c, &f).unwrap();
        prop_assert!(img.same_as(&c));
    }

    #[test]
    fn multiplicity_symmetry_and_transversality(
        f in poly(3, 4), g in poly(3, 4), s1 in rat(), s2 in rat(), pt in point()
    ) {
        let o = AffinePoint::origin();
        prop_assert_eq!(intersection_multiplicity(&f, &g, &o), intersection_multiplicity(&g, &f, &o));
        prop_assume!(s1 != s2);
        let line = |s: &Rat| {
            &(&Poly2::y() - &Poly2::constant(pt.y.clone()))
                - &(&Poly2::x() - &Poly2::constant(pt.x.clone())).scale(s)
        };
        prop_assert_eq!(intersection_multiplicity(&line(&s1), &line(&s2), &pt), Multiplicity::Finite(1));
    }

    #[test]
    fn ap_decomposition_reconstructs(bits in prop::collection::vec(any::<bool>(), 0..120)) {
        let n = bits.len().saturating_sub(1);
        let s: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
        let ap = ap_decompose(&s, n);
        prop_assert_eq!(ap.reconstruct(), s);
        for (i, p) in ap.progressions.iter().enumerate() {
            for q in &ap.progressions[i + 1..] {
                prop_assert!((0..=n).all(|k| !(p.contains(k) && q.contains(k))));
            }
        }
    }

    #[test]
    fn visit_sets_through_iterates(
        a in prop::sample::select(vec![-1i64, 1]),
        b in -2i64..=2,
        c in -2i64..=2,
        px in -3i64..=3,
        py in -3i64..=3,
        line in (-2i64..=2, -2i64..=2, -3i64..=3),
    ) {
        let f = PolyMap::new(
            &Poly2::x().scale(&r(a, 1)) + &Poly2::constant(r(b, 1)),
            &Poly2::y().scale(&r(-1, 1)) + &Poly2::x().scale(&r(c, 1)),
        );
        let (l1, l2, l0) = line;
        prop_assume!(l1 != 0 || l2 != 0);
        let curve = Curve::new(&Poly2::from_terms([([1, 0], r(l1, 1)), ([0, 1], r(l2, 1)), ([0, 0], r(l0, 1))])).unwrap();
        let p = AffinePoint::from_ints(px, py);
        let direct = visit_set(&f, &p, &curve, 40).unwrap();
        for m in 2..=3 {
            prop_assert_eq!(&visit_set_via_iterate(&f, &p, &curve, m, 40).unwrap(), &direct);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn northcott_is_monotone(bound in 1u64..5, dim in 1usize..=2) {
        let small = northcott_enumerate(bound, dim).unwrap();
        let big = northcott_enumerate(bound + 1, dim).unwrap();
        prop_assert!(small.iter().all(|p| big.contains(p)));
        for p in &big {
            let h = height_proj(p);
            prop_assert_eq!(small.contains(p), h <= bound.into());
        }
    }

    #[test]
    fn converged_probes_decrease_strictly(x in -8i64..=8, y in -8i64..=8, p in prop::sample::select(vec![2u64, 3])) {
        let f = PolyMap::parse(&format!("{p}*x"), &format!("{p}*y + x^2")).unwrap();
        let params = BasinParams { horizon: 60, ..BasinParams::default() };
        let rep = basin_probe_affine(&f, &AffinePoint::from_ints(x, y), &AffinePoint::origin(), Place::finite(p).unwrap(), &params).unwrap();
        if let BasinVerdict::ConvergedAt(n) = rep.verdict {
            let tail = &rep.samples[n + 1 - 5..=n];
            prop_assert!(tail.windows(2).all(|w| w[1].distance < w[0].distance));
        }
    }
}

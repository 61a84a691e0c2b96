use proptest::prelude::*;
use wittlab::exactlin::BitMatrix;
use wittlab::forms::{factor_quadric, quadric_space_dim, KInvariantSet, LinearForm, QuadraticForm};
use wittlab::presets;
use wittlab::series::PoincareSeries;
use wittlab::wgroup::WGroup;

fn quadric(n: usize) -> impl Strategy<Value = QuadraticForm> {
    proptest::collection::vec(any::<bool>(), quadric_space_dim(n))
        .prop_map(move |v| QuadraticForm::from_coefficient_vector(n, &v))
}

fn mask(n: usize) -> impl Strategy<Value = u64> {
    0..(1u64 << n)
}

proptest! {
    #[test]
    fn display_parse_round_trip(q in quadric(6)) {
        let text = q.to_string();
        prop_assert_eq!(QuadraticForm::parse(&text, 6).unwrap(), q);
    }

    #[test]
    fn polarization_is_bilinear(q in quadric(5), a in mask(5), b in mask(5), c in mask(5)) {
        prop_assert_eq!(q.evaluate(a ^ b), q.evaluate(a) ^ q.evaluate(b) ^ q.polarize(a, b));
        prop_assert_eq!(q.polarize(a ^ c, b), q.polarize(a, b) ^ q.polarize(c, b));
        prop_assert_eq!(q.polarize(a, b), q.polarize(b, a));
    }

    #[test]
    fn products_evaluate_pointwise(u in 1u64..64, v in 1u64..64, a in mask(6)) {
        let (u, v) = (LinearForm::new(6, u), LinearForm::new(6, v));
        let q = QuadraticForm::product(&u, &v);
        prop_assert_eq!(q.evaluate(a), u.evaluate(a) && v.evaluate(a));
        let (x, y) = factor_quadric(&q).unwrap().expect("products factor");
        prop_assert_eq!(QuadraticForm::product(&x, &y), q);
    }

    #[test]
    fn factorizations_multiply_back(q in quadric(5)) {
        if let Some((u, v)) = factor_quadric(&q).unwrap() {
            prop_assert_eq!(QuadraticForm::product(&u, &v), q);
        }
    }

    #[test]
    fn w_group_axioms(
        forms in proptest::collection::vec(quadric(4), 1..6),
        x in (mask(4), any::<u64>()),
        y in (mask(4), any::<u64>()),
        z in (mask(4), any::<u64>()),
    ) {
        let Ok(kinv) = KInvariantSet::new(4, forms) else { return Ok(()) };
        let g = WGroup::new(kinv).unwrap();
        let phi = (1u64 << g.r()) - 1;
        let el = |(a, b): (u64, u64)| g.element(a, b & phi).unwrap();
        let (x, y, z) = (el(x), el(y), el(z));
        let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(g.multiply(&x, &g.inverse(&x).unwrap()).unwrap(), g.identity());
        let sq = g.power(&x, 2).unwrap();
        prop_assert_eq!(sq.a, 0);
        prop_assert_eq!(sq.b, g.square_map(x.a));
        let c = g.commutator(&x, &y).unwrap();
        prop_assert_eq!(c.a, 0);
        prop_assert_eq!(c.b, g.commutator_pairing(x.a, y.a));
        prop_assert_eq!(g.power(&x, 4).unwrap(), g.identity());
    }

    #[test]
    fn rank_is_transpose_invariant(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 13), 1..12)) {
        let m = BitMatrix::from_bool_rows(13, &rows);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= rows.len().min(13));
        let sq = m.mul(&m.transpose());
        prop_assert!(sq.rank() <= m.rank());
    }

    #[test]
    fn rational_series_expand_consistently(num in proptest::collection::vec(-5i64..6, 1..6), m in 1usize..4, k in 0usize..3) {
        let s = PoincareSeries::new(num.iter().map(|&x| x.into()).collect(), &[(m, k)]);
        let once = PoincareSeries::new(num.iter().map(|&x| x.into()).collect(), &[(m, k + 1)]);
        let a = s.expand(12);
        let b = once.expand(12);
        for i in 0..=12 {
            let prev = if i >= m { b[i - m].clone() } else { 0.into() };
            prop_assert_eq!(&b[i] - prev, a[i].clone());
        }
    }
}

#[test]
fn catalog_round_trips_through_json() {
    for p in presets::catalog().unwrap() {
        let back = presets::FieldPreset::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}

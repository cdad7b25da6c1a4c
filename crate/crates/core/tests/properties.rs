//! Property tests for the algebraic invariants: ultrametricity and
//! multiplicativity of the valuation, canonical-form stability, and
//! projective invariance of the cross ratio.

use a2flats_core::linalg::Mat3;
use a2flats_core::projplane::{cross_ratio_points, join, meet, ProjPoint};
use a2flats_core::valfield::{Field, Scalar, Val};
use proptest::prelude::*;

fn small_int() -> impl Strategy<Value = i64> {
    -9i64..=9
}

fn qt_scalar() -> impl Strategy<Value = Scalar> {
    (
        proptest::collection::vec(small_int(), 1..4),
        proptest::collection::vec(small_int(), 1..3),
    )
        .prop_filter_map("nonzero denominator", |(num, den)| {
            let f = Field::qt();
            let t = f.uniformizer();
            let build = |coeffs: &[i64]| {
                let mut acc = f.zero();
                for (k, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        acc = acc.add(&f.from_int(c).mul(&t.pow(k as i64).unwrap()));
                    }
                }
                acc
            };
            let n = build(&num);
            let d = build(&den);
            if d.is_zero() {
                None
            } else {
                Some(n.div(&d).unwrap())
            }
        })
}

fn qp_scalar() -> impl Strategy<Value = Scalar> {
    (small_int(), 1i64..=9, prop::bool::ANY).prop_map(|(n, d, neg)| {
        let f = Field::qp(5).unwrap();
        let d = if neg { -d } else { d };
        f.from_int(n).div(&f.from_int(d)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultrametric_inequality_qt(a in qt_scalar(), b in qt_scalar()) {
        let f = Field::qt();
        let va = f.val(&a);
        let vb = f.val(&b);
        let vsum = f.val(&a.add(&b));
        let min = if va <= vb { va.clone() } else { vb.clone() };
        prop_assert!(vsum >= min);
        if va != vb {
            prop_assert_eq!(vsum, min);
        }
    }

    #[test]
    fn ultrametric_inequality_qp(a in qp_scalar(), b in qp_scalar()) {
        let f = Field::qp(5).unwrap();
        let va = f.val(&a);
        let vb = f.val(&b);
        let vsum = f.val(&a.add(&b));
        let min = if va <= vb { va.clone() } else { vb.clone() };
        prop_assert!(vsum >= min);
        if va != vb {
            prop_assert_eq!(vsum, min);
        }
    }

    #[test]
    fn valuation_multiplicative(a in qt_scalar(), b in qt_scalar()) {
        let f = Field::qt();
        let lhs = f.val(&a.mul(&b));
        let rhs = f.val(&a).add(&f.val(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_is_stable(a in qt_scalar()) {
        // Formatting and reparsing reproduces the scalar exactly, and the
        // valuation of a nonzero scalar is finite.
        let f = Field::qt();
        let again = f.parse(&a.to_string()).unwrap();
        prop_assert_eq!(&again, &a);
        if !a.is_zero() {
            prop_assert!(matches!(f.val(&a), Val::Finite(_)));
        }
    }

    #[test]
    fn cross_ratio_projective_invariance(
        xs in proptest::collection::vec(small_int(), 8),
        g_entries in proptest::collection::vec(small_int(), 9),
    ) {
        let f = Field::qt();
        // Four points on the line x3 = 0 with homogeneous integer pairs.
        let mk = |a: i64, b: i64| -> Option<ProjPoint> {
            ProjPoint::new([f.from_int(a), f.from_int(b), f.zero()]).ok()
        };
        let pts: Vec<ProjPoint> = (0..4)
            .filter_map(|i| mk(xs[2 * i], xs[2 * i + 1]))
            .collect();
        prop_assume!(pts.len() == 4);
        let q: [ProjPoint; 4] = pts.try_into().unwrap();
        let base = cross_ratio_points(&q);
        prop_assume!(base.is_ok());
        let m = Mat3::from_cols(
            [f.from_int(g_entries[0]), f.from_int(g_entries[1]), f.from_int(g_entries[2])],
            [f.from_int(g_entries[3]), f.from_int(g_entries[4]), f.from_int(g_entries[5])],
            [f.from_int(g_entries[6]), f.from_int(g_entries[7]), f.from_int(g_entries[8])],
        );
        prop_assume!(!m.det().is_zero());
        let mapped: Vec<ProjPoint> = q
            .iter()
            .map(|p| ProjPoint::new(m.apply(&p.rep())).unwrap())
            .collect();
        let mq: [ProjPoint; 4] = mapped.try_into().unwrap();
        prop_assert_eq!(base.unwrap(), cross_ratio_points(&mq).unwrap());
    }

    #[test]
    fn join_meet_round_trip(xs in proptest::collection::vec(small_int(), 9)) {
        let f = Field::qt();
        let mk = |a: i64, b: i64, c: i64| ProjPoint::new([
            f.from_int(a), f.from_int(b), f.from_int(c),
        ]);
        let p = mk(xs[0], xs[1], xs[2]);
        let q = mk(xs[3], xs[4], xs[5]);
        let r = mk(xs[6], xs[7], xs[8]);
        prop_assume!(p.is_ok() && q.is_ok() && r.is_ok());
        let (p, q, r) = (p.unwrap(), q.unwrap(), r.unwrap());
        let l1 = join(&p, &q);
        let l2 = join(&p, &r);
        prop_assume!(l1.is_ok() && l2.is_ok());
        let (l1, l2) = (l1.unwrap(), l2.unwrap());
        prop_assume!(l1 != l2);
        prop_assert_eq!(meet(&l1, &l2).unwrap(), p);
    }
}

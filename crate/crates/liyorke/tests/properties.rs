//! Property tests for the metric and the cocycle algebra.

use liyorke::analysis::{characteristic_chains, verify_chain};
use liyorke::cell::CellPartition;
use liyorke::perm::Perm;
use liyorke::skew::{FiniteCocycle, SkewProduct};
use liyorke::systems::{FullShift, Odometer, Rotation};
use liyorke::{distance, CircleAngle, OdometerDigits, Point, SymbolicWord, System};

use proptest::prelude::*;

fn word_triple(len: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>, Vec<u8>)> {
    (
        prop::collection::vec(0u8..2, len),
        prop::collection::vec(0u8..2, len),
        prop::collection::vec(0u8..2, len),
    )
}

fn point(digits: Vec<u8>) -> Point {
    Point::Word(SymbolicWord::new(2, digits).unwrap())
}

proptest! {
    #[test]
    fn symbolic_metric_axioms((a, b, c) in word_triple(24)) {
        let (x, y, z) = (point(a), point(b), point(c));
        let dxy = distance(&x, &y).unwrap();
        let dyx = distance(&y, &x).unwrap();
        prop_assert_eq!(dxy, dyx);
        let dxz = distance(&x, &z).unwrap();
        let dyz = distance(&y, &z).unwrap();
        // ultrametric, hence the triangle inequality holds exactly
        prop_assert!(dxz <= dxy.max(dyz));
        prop_assert!(dxz <= dxy + dyz);
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(dxy == 0.0, x == y);
    }

    #[test]
    fn shift_doubles_interior_disagreements((a, b) in (prop::collection::vec(0u8..2, 16), prop::collection::vec(0u8..2, 16))) {
        let sys = System::Shift(FullShift::new(2).unwrap());
        let x = point(a);
        let y = point(b);
        let d0 = distance(&x, &y).unwrap();
        if d0 > 0.0 && d0 < 1.0 {
            let sx = sys.step(&x).unwrap();
            let sy = sys.step(&y).unwrap();
            prop_assert_eq!(distance(&sx, &sy).unwrap(), 2.0 * d0);
        }
    }

    #[test]
    fn circle_metric_axioms(u in 0.0f64..1.0, v in 0.0f64..1.0, w in 0.0f64..1.0) {
        let (x, y, z) = (CircleAngle::new(u), CircleAngle::new(v), CircleAngle::new(w));
        prop_assert!((x.arc_distance(y) - y.arc_distance(x)).abs() < 1e-15);
        prop_assert!(x.arc_distance(y) <= 0.5 + 1e-15);
        prop_assert!(x.arc_distance(z) <= x.arc_distance(y) + y.arc_distance(z) + 1e-12);
    }

    #[test]
    fn rotation_is_an_isometry(u in 0.0f64..1.0, v in 0.0f64..1.0, alpha in 1e-6f64..0.999) {
        let rot = Rotation::new(alpha).unwrap();
        let x = CircleAngle::new(u);
        let y = CircleAngle::new(v);
        let before = x.arc_distance(y);
        let after = rot.step(&x).arc_distance(rot.step(&y));
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn odometer_step_preserves_first_disagreement(
        a in prop::collection::vec(0u32..2, 12),
        b in prop::collection::vec(0u32..2, 12),
    ) {
        let sys = Odometer::dyadic(12);
        let x = OdometerDigits::new(sys.shared_bases(), a).unwrap();
        let y = OdometerDigits::new(sys.shared_bases(), b).unwrap();
        let before = x.first_disagreement(&y).unwrap();
        let sx = sys.step(&x).unwrap();
        let sy = sys.step(&y).unwrap();
        if !sx.is_poisoned() && !sy.is_poisoned() {
            prop_assert_eq!(sx.first_disagreement(&sy).unwrap(), before);
            let d0 = distance(&Point::Odometer(x), &Point::Odometer(y)).unwrap();
            let d1 = distance(&Point::Odometer(sx), &Point::Odometer(sy)).unwrap();
            prop_assert_eq!(d0, d1);
        }
    }

    #[test]
    fn depth_is_spent_one_symbol_per_step(digits in prop::collection::vec(0u8..2, 3..20)) {
        let sys = System::Shift(FullShift::new(2).unwrap());
        let depth = digits.len();
        let mut p = point(digits);
        for left in (0..depth).rev() {
            p = sys.step(&p).unwrap();
            match &p {
                Point::Word(w) => prop_assert_eq!(w.depth(), left),
                _ => unreachable!(),
            }
        }
        prop_assert!(sys.step(&p).is_err());
        prop_assert!(distance(&p, &p).is_err());
    }

    #[test]
    fn cocycle_composition_law(
        digits in prop::collection::vec(0u8..2, 60),
        i in 0usize..30,
        j in 0usize..30,
        which in 0usize..3,
    ) {
        let cocycle = match which {
            0 => FiniteCocycle::swap_on_symbol(2, 1).unwrap(),
            1 => FiniteCocycle::constant(
                Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                CellPartition::symbol_window(2, 1).unwrap(),
            )
            .unwrap(),
            _ => FiniteCocycle::new(
                4,
                CellPartition::symbol_window(2, 2).unwrap(),
                vec![
                    Perm::from_cycles(4, &[&[0, 1]]).unwrap(),
                    Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
                    Perm::identity(4),
                    Perm::from_cycles(4, &[&[0, 3]]).unwrap(),
                ],
            )
            .unwrap(),
        };
        let base = System::Shift(FullShift::new(2).unwrap());
        let x = point(digits);
        let g_i = cocycle.compose_along(&base, &x, i).unwrap();
        let shifted = base.iterate(&x, i).unwrap();
        let g_j_shifted = cocycle.compose_along(&base, &shifted, j).unwrap();
        let g_ij = cocycle.compose_along(&base, &x, i + j).unwrap();
        prop_assert_eq!(g_ij, g_j_shifted.compose(&g_i));
    }

    #[test]
    fn chain_records_are_sound_and_monotone(
        a in prop::collection::vec(0u8..2, 400),
        b in prop::collection::vec(0u8..2, 400),
    ) {
        let sys = System::Skew(SkewProduct::new(
            System::Shift(FullShift::new(2).unwrap()),
            FiniteCocycle::swap_on_symbol(2, 1).unwrap(),
        ));
        let x = point(a);
        let y = point(b);
        let recs = characteristic_chains(&sys, &x, &y, &[0.5, 0.125], 300).unwrap();
        verify_chain(&sys, &recs[0]).unwrap();
        verify_chain(&sys, &recs[1]).unwrap();
        // smaller eta gives a subset of indices and elements
        for &i in &recs[1].indices {
            prop_assert!(recs[0].indices.binary_search(&i).is_ok());
        }
        for e in &recs[1].c_set {
            prop_assert!(recs[0].contains_element(e));
        }
    }
}

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use freearr::arrangement::Arrangement;
use freearr::counting::{count_complement_extension, crapo_rota_count, monotonicity_check};
use freearr::derivations::{
    decide_freeness, defining_polynomial, determinant, free_hilbert_value, graded_piece,
    Derivation, Verdict,
};
use freearr::field::{field_of_order, make_field, Elem, FieldCtx};
use freearr::format::{parse_arrangement, write_arrangement};
use freearr::harness::census::{run_census, CensusMode, CensusSpec};
use freearr::harness::theorems::{verify_all_hyperplane_tests, zeros_descend};
use freearr::lattice::{build_lattice, char_poly, char_poly_recursion_check};
use freearr::poly::PolyRing;

use common::{naive_complement, reference_add, reference_mul, whitney_char_poly};

/// `(q, ell, raw covectors)` with entries below `q`.
fn raw_arrangement(
    qs: &'static [u64],
    ells: std::ops::RangeInclusive<usize>,
    max_len: usize,
) -> impl Strategy<Value = (u64, usize, Vec<Vec<u32>>)> {
    (proptest::sample::select(qs), ells).prop_flat_map(move |(q, ell)| {
        let row = proptest::collection::vec(0..q as u32, ell);
        (
            Just(q),
            Just(ell),
            proptest::collection::vec(row, 0..=max_len),
        )
    })
}

fn build(q: u64, ell: usize, rows: &[Vec<u32>]) -> Arrangement {
    let rows: Vec<Vec<Elem>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| Elem(x)).collect())
        .collect();
    Arrangement::new(field_of_order(q).unwrap(), ell, &rows).unwrap()
}

fn combine(ring: &PolyRing, members: &[Derivation], coeffs: &[Elem], degree: u32) -> Derivation {
    let mut comps = vec![ring.zero(); ring.nvars()];
    for (m, &c) in members.iter().zip(coeffs) {
        for (acc, f) in comps.iter_mut().zip(m.components()) {
            *acc = ring.add(acc, &ring.scale(f, c));
        }
    }
    Derivation::new(comps, degree).unwrap()
}

fn field(spec: (u64, u32)) -> Arc<FieldCtx> {
    make_field(spec.0, spec.1).unwrap()
}

const FIELDS: &[(u64, u32)] = &[
    (2, 1),
    (3, 1),
    (2, 2),
    (7, 1),
    (2, 3),
    (3, 2),
    (2, 4),
    (5, 2),
    (7, 2),
    (3, 5),
    (251, 1),
    (2, 8),
];

proptest! {
    #[test]
    fn field_operations_match_polynomial_arithmetic(
        spec in proptest::sample::select(FIELDS),
        x in any::<u32>(), y in any::<u32>(), z in any::<u32>(),
    ) {
        let f = field(spec);
        let q = f.order();
        let (a, b, c) = (f.elem(x % q), f.elem(y % q), f.elem(z % q));
        prop_assert_eq!(f.add(a, b), reference_add(&f, a, b));
        prop_assert_eq!(f.mul(a, b), reference_mul(&f, a, b));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn rescaled_and_repeated_covectors_change_nothing(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4, 5], 2..=3, 6),
        scalars in proptest::collection::vec(1u32..5, 6),
    ) {
        let ctx = field_of_order(q).unwrap();
        let a = build(q, ell, &rows);
        let mut scaled: Vec<Vec<Elem>> = rows
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .zip(&scalars)
            .map(|(r, &s)| {
                let s = ctx.elem(s % (q as u32 - 1) + 1);
                r.iter().map(|&x| ctx.mul(Elem(x), s)).collect()
            })
            .collect();
        scaled.reverse();
        if let Some(first) = scaled.first().cloned() {
            scaled.push(first);
        }
        let b = Arrangement::new(ctx, ell, &scaled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.id(), b.id());
        if ell == 3 && q <= 3 {
            for d in 0..3 {
                prop_assert_eq!(graded_piece(&a, d).dim(), graded_piece(&b, d).dim());
            }
            prop_assert_eq!(
                decide_freeness(&a).unwrap().verdict,
                decide_freeness(&b).unwrap().verdict
            );
        }
    }

    #[test]
    fn char_poly_matches_whitney_and_point_count(
        (q, ell, rows) in raw_arrangement(&[2, 3, 5], 1..=4, 7),
    ) {
        let a = build(q, ell, &rows);
        let cp = char_poly(&a).unwrap();
        prop_assert_eq!(cp.coeffs().to_vec(), whitney_char_poly(&a));
        let naive = naive_complement(&a);
        prop_assert_eq!(cp.eval(q as i64).unwrap(), naive as i64);
        prop_assert_eq!(count_complement_extension(&a, 1).unwrap(), naive);
        prop_assert!(build_lattice(&a).unwrap().mobius_is_consistent());
    }

    #[test]
    fn deletion_restriction_recursion(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4, 5, 9], 2..=4, 8),
        pick in any::<prop::sample::Index>(),
    ) {
        let a = build(q, ell, &rows);
        prop_assume!(!a.is_empty());
        let h = &a.hyperplanes()[pick.index(a.len())];
        prop_assert!(char_poly_recursion_check(&a, h).unwrap());
    }

    #[test]
    fn counts_shrink_as_hyperplanes_are_added(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4], 2..=3, 8),
        keep in proptest::collection::vec(any::<bool>(), 8),
    ) {
        let a = build(q, ell, &rows);
        let idx: Vec<usize> = (0..a.len()).filter(|&i| keep[i]).collect();
        let sub = a.subset(&idx);
        for k in 1..=2 {
            prop_assert!(monotonicity_check(&sub, &a, k).unwrap());
            let direct = count_complement_extension(&a, k).unwrap();
            prop_assert_eq!(char_poly(&a).unwrap().eval((q as i64).pow(k)).unwrap(), direct as i64);
            if q <= 3 {
                prop_assert_eq!(crapo_rota_count(&a, k).unwrap(), direct);
            }
        }
    }

    #[test]
    fn zeros_descend_and_all_hyperplane_tests_agree(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4], 2..=3, 21),
    ) {
        let a = build(q, ell, &rows);
        prop_assert!(zeros_descend(&char_poly(&a).unwrap(), q as u32, 3).unwrap());
        prop_assert!(verify_all_hyperplane_tests(&a).unwrap());
    }

    #[test]
    fn format_round_trip(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4, 8, 9, 25], 1..=4, 8),
    ) {
        let a = build(q, ell, &rows);
        let text = write_arrangement(&a);
        prop_assert_eq!(parse_arrangement(&text).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_and_frobenius_fields_are_logarithmic(
        (q, ell, rows) in raw_arrangement(&[2, 3, 4], 3..=3, 10),
    ) {
        let a = build(q, ell, &rows);
        let ring = PolyRing::new(a.ctx().clone(), 3);
        prop_assert!(Derivation::euler(&ring).is_logarithmic(&ring, &a));
        for k in 1..=2 {
            prop_assert!(Derivation::frobenius(&ring, k).is_logarithmic(&ring, &a));
        }
    }

    #[test]
    fn graded_piece_members_are_divisible(
        (q, ell, rows) in raw_arrangement(&[2, 3], 3..=3, 8),
        d in 0u32..4,
    ) {
        let a = build(q, ell, &rows);
        let ring = PolyRing::new(a.ctx().clone(), 3);
        for m in graded_piece(&a, d).members {
            for h in a.hyperplanes() {
                let image = m.apply_linear(&ring, h.covector());
                let alpha = ring.linear_form(h.covector());
                prop_assert!(ring.div_exact(&image, &alpha).is_some());
            }
        }
    }

    #[test]
    fn determinants_of_logarithmic_fields_are_divisible_by_q(
        (q, ell, rows) in raw_arrangement(&[2, 3], 3..=3, 7),
        degrees in proptest::collection::vec(1u32..4, 3),
        coeffs in proptest::collection::vec(any::<u32>(), 64),
    ) {
        let a = build(q, ell, &rows);
        let ring = PolyRing::new(a.ctx().clone(), 3);
        let mut coeffs = coeffs.into_iter().map(|c| ring.ctx().elem(c % q as u32));
        let fields: Vec<Derivation> = degrees
            .iter()
            .map(|&d| {
                let basis = graded_piece(&a, d).members;
                let cs: Vec<Elem> = basis.iter().map(|_| coeffs.next().unwrap_or(Elem::ONE)).collect();
                combine(&ring, &basis, &cs, d)
            })
            .collect();
        let m: Vec<Vec<_>> = fields.iter().map(|f| f.components().to_vec()).collect();
        let det = determinant(&ring, &m);
        let qpoly = defining_polynomial(&ring, &a);
        prop_assert!(det.is_zero() || ring.div_exact(&det, &qpoly).is_some());
    }

    #[test]
    fn free_arrangements_factor_and_have_free_hilbert_function(
        (q, ell, rows) in raw_arrangement(&[2, 3], 3..=3, 9),
    ) {
        let a = build(q, ell, &rows);
        let r = decide_freeness(&a).unwrap();
        prop_assert_ne!(r.verdict, Verdict::Undetermined);
        prop_assert!(r.verify(&a));
        if let Some(e) = &r.exponents {
            let roots: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            prop_assert_eq!(r.char_poly.integer_roots(), Some(roots));
            for (d, &dim) in r.hilbert.iter().enumerate() {
                prop_assert_eq!(dim, free_hilbert_value(3, e, d as u32));
            }
        }
    }
}

#[test]
fn field_operations_match_reference_on_all_pairs() {
    for &spec in FIELDS {
        let f = field(spec);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), reference_add(&f, a, b));
                assert_eq!(f.mul(a, b), reference_mul(&f, a, b));
            }
        }
    }
}

#[test]
fn census_output_is_independent_of_thread_count() {
    let runs: Vec<(String, String)> = [1, 2, 3]
        .into_iter()
        .map(|t| {
            let mut spec = CensusSpec::new(3, 1, 3, CensusMode::Sample { n: 40, seed: 11 });
            spec.threads = Some(t);
            let r = run_census(&spec).unwrap();
            (r.tsv(), r.summary_json())
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

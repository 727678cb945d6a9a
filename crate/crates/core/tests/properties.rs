use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torclass::apolarity::{annihilator, random_compressed_gorenstein, DualForm, DEFAULT_RETRY_CAP};
use torclass::experiment::{draw_pair, emit, run_trials, Format, Observation};
use torclass::graded_ring::{basis, hq, macaulay_growth, Form};
use torclass::ideal::GradedIdeal;
use torclass::koszul::{BettiTable, TorAlgebra, TorClass};
use torclass::linalg::{subspace_intersect, subspace_sum, MatrixGF};
use torclass::predictor::{
    a_value, allowed_classes, b_polynomial, betti_shape, f_vector, generic_class, golod_by_degree,
    gorenstein_profile, initial_degree, minimal_beta, type2_h, type2_profile, valid_pairs,
};
use torclass::FieldPrime;

const P: u32 = 32003;

fn field() -> FieldPrime {
    FieldPrime::new(P).unwrap()
}

fn small_field() -> FieldPrime {
    FieldPrime::new(7).unwrap()
}

fn matrix(rows: usize, cols: usize, entries: &[u32]) -> MatrixGF {
    let f = small_field();
    let data: Vec<Vec<u32>> = entries
        .chunks(cols)
        .take(rows)
        .map(|r| r.iter().map(|&v| v % f.p()).collect())
        .collect();
    MatrixGF::from_rows(f, cols, &data)
}

fn matrix_strategy() -> impl Strategy<Value = MatrixGF> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(0u32..7, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn pair_of_spaces() -> impl Strategy<Value = (MatrixGF, MatrixGF)> {
    (1usize..6, 1usize..6, 1usize..7).prop_flat_map(|(r1, r2, c)| {
        (
            proptest::collection::vec(0u32..7, r1 * c),
            proptest::collection::vec(0u32..7, r2 * c),
        )
            .prop_map(move |(a, b)| (matrix(r1, c, &a), matrix(r2, c, &b)))
    })
}

fn form(degree: usize, coeffs: &[u32]) -> Form {
    let f = field();
    let n = basis(degree).len();
    Form::from_coeffs(
        f,
        degree,
        coeffs.iter().cycle().take(n).map(|&c| c % P).collect(),
    )
    .unwrap()
}

fn type2_socle(s1: usize, s: usize) -> Vec<u64> {
    let mut v = vec![0; s + 1];
    v[s1] += 1;
    v[s] += 1;
    v
}

fn pad(v: &[u64], n: usize) -> Vec<u64> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

fn gorenstein(s: usize, seed: u64) -> GradedIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_compressed_gorenstein(s, field(), &mut rng, DEFAULT_RETRY_CAP)
        .unwrap()
        .0
}

fn valid_pair(max_s: usize) -> impl Strategy<Value = (usize, usize)> {
    (2usize..=max_s).prop_flat_map(|s| ((s / 2 + 1).max(2)..=s, Just(s)))
}

fn b_of(h: &[u64], len: usize) -> Vec<i64> {
    let mut b = b_polynomial(h);
    b.resize(len, 0);
    b
}

fn check_betti_against_ideal(i: &GradedIdeal, betti: &BettiTable) {
    let len = i.truncation() + 8;
    let mut from_betti = betti.b_polynomial();
    from_betti.resize(len, 0);
    assert_eq!(from_betti, b_of(&i.hilbert(), len));
    assert_eq!(from_betti.iter().sum::<i64>(), 0);

    let gens: BTreeMap<usize, u64> = i
        .minimal_generator_degrees()
        .into_iter()
        .map(|(d, n)| (d, n as u64))
        .collect();
    assert_eq!(betti.column(1), gens);

    let socle: BTreeMap<usize, u64> = i
        .socle_polynomial()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| (d + 3, c))
        .collect();
    assert_eq!(betti.column(3), socle);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in matrix_strategy()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().rows(), m.cols());
        let k = m.kernel_basis();
        for row in k.row_iter() {
            prop_assert!(m.apply(row).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn row_reduce_is_idempotent(m in matrix_strategy()) {
        let (r1, once) = m.row_reduce();
        let (r2, twice) = once.row_reduce();
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn intersection_and_sum_dimensions((u, v) in pair_of_spaces()) {
        let meet = subspace_intersect(&u, &v).unwrap().rank();
        let join = subspace_sum(&u, &v).unwrap().rank();
        prop_assert_eq!(meet + join, u.rank() + v.rank());
    }

    #[test]
    fn contraction_is_a_module_action(
        dg in 0usize..3,
        dh in 0usize..3,
        extra in 0usize..3,
        cg in proptest::collection::vec(0u32..P, 1..8),
        ch in proptest::collection::vec(0u32..P, 1..8),
        cf in proptest::collection::vec(0u32..P, 1..12),
    ) {
        let (g, h, big) = (form(dg, &cg), form(dh, &ch), form(dg + dh + extra, &cf));
        let lhs = g.mul(&h).contract(&big).unwrap();
        let rhs = g.contract(&h.contract(&big).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_rings_grow_maximally(e in 1u32..6, d in 1u64..15) {
        prop_assert_eq!(macaulay_growth(hq(e, d as i64), d), hq(e, d as i64 + 1));
    }

    #[test]
    fn f_vector_balances(a in 0u64..200) {
        let (f0, f1, f2) = f_vector(a);
        prop_assert_eq!(f0 + f2, f1 + 1);
    }
}

#[test]
fn basis_sizes_match_hq() {
    for d in 0..=20 {
        assert_eq!(basis(d).len() as u64, hq(3, d as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn annihilators_are_gorenstein(s in 2usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dual = DualForm::random(s, field(), &mut rng).unwrap();
        let i = annihilator(&dual, None).unwrap();
        prop_assert_eq!(i.ring_type(), 1);
        let mut socle = vec![0; s + 1];
        socle[s] = 1;
        prop_assert_eq!(i.socle_polynomial(), socle);
        prop_assert_eq!(i.socle_degree(), s);
    }

    #[test]
    fn gorenstein_betti_tables(s in 2usize..7, seed in any::<u64>()) {
        let i = gorenstein(s, seed);
        let t = i.initial_degree();
        prop_assert!(2 <= t && t <= s + 1);
        prop_assert_eq!(i.hilbert(), gorenstein_profile(3, s).0);
        let tor = TorAlgebra::new(&i);
        check_betti_against_ideal(&i, &tor.betti);
        prop_assert_eq!(tor.q, 1);
        prop_assert_eq!(tor.r, tor.m);
    }

    #[test]
    fn truncations_of_gorenstein_rings_are_level(s in 2usize..7, seed in any::<u64>()) {
        let i = gorenstein(s, seed);
        for u in i.initial_degree()..=s {
            let j = i.add_power(u);
            prop_assert!(j.is_level());
            prop_assert_eq!(j.socle_degree(), u - 1);
        }
    }

    #[test]
    fn arbitrary_gorenstein_pairs_satisfy_mayer_vietoris(
        s1 in 2usize..6, s in 2usize..6, seed in any::<u64>(),
    ) {
        let (i1, i2) = (gorenstein(s1, seed), gorenstein(s, seed ^ 0x9e37));
        let meet = i1.intersect(&i2).unwrap();
        let join = i1.sum(&i2).unwrap();
        let n = s1.max(s) + 3;
        let (h, hp) = (pad(&meet.hilbert(), n), pad(&join.hilbert(), n));
        let (h1, h2) = (pad(&i1.hilbert(), n), pad(&i2.hilbert(), n));
        for d in 0..n {
            prop_assert_eq!(h[d] + hp[d], h1[d] + h2[d]);
        }
        let nested = i1.contains(&i2) || i2.contains(&i1);
        prop_assert_eq!(meet.ring_type() == 2, !nested);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn random_type2_pairs_satisfy_ideal_invariants((s1, s) in valid_pair(6), seed in any::<u64>()) {
        let pair = draw_pair(s1, s, field(), seed).unwrap();
        let i = &pair.intersection;
        prop_assert_eq!(i.socle_polynomial(), type2_socle(s1, s));
        prop_assert_eq!(i.hilbert(), type2_h(s1, s));

        let (h, hp) = (i.hilbert(), pad(&pair.sum.hilbert(), s + 1));
        let (h1, h2) = (pad(&pair.i1.hilbert(), s + 1), pad(&pair.i2.hilbert(), s + 1));
        for d in 0..=s {
            prop_assert_eq!(h[d] + hp[d], h1[d] + h2[d]);
            let bound = (h1[d] + h2[d]).saturating_sub(hq(3, d as i64));
            prop_assert_eq!(hp[d], bound);
        }

        let obs = Observation::from_pair(&pair).unwrap();
        prop_assert!(obs.all_compressed());
        prop_assert!(2 <= obs.t1 && obs.t1 <= obs.t2 && obs.t2 <= obs.t);
        prop_assert!(obs.t <= s1 && s1 <= s && s < 2 * s1);
        prop_assert_eq!(obs.a, s1 - obs.t2 + 1);
        prop_assert!(obs.in_allowed, "{} not allowed for {:?}", obs.class, (s1, s, obs.m));
        if let TorClass::G(r) = obs.class {
            prop_assert!(r + 3 <= obs.m);
        }
        check_betti_against_ideal(i, &obs.betti);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn predicted_profiles_fit_gorenstein_profiles((s1, s) in valid_pair(20)) {
        let h = type2_h(s1, s);
        let (g1, g2) = (pad(&gorenstein_profile(3, s1).0, s + 1), gorenstein_profile(3, s).0);
        for d in 0..=s {
            let q = hq(3, d as i64);
            let sum_side = (g1[d] + g2[d]).saturating_sub(q);
            prop_assert_eq!(h[d] + sum_side, g1[d] + g2[d]);
        }
        prop_assert_eq!(initial_degree(&h), type2_profile(s1, s).unwrap().t);
    }

    #[test]
    fn generic_class_is_allowed((s1, s) in valid_pair(20)) {
        let (class, m) = generic_class(s1, s).unwrap();
        prop_assert!(allowed_classes(s1, s, m).unwrap().contains(&class), "{} m={}", class, m);
    }

    #[test]
    fn betti_shapes_balance((s1, s) in valid_pair(20), extra in 0u64..6) {
        let Ok(shape) = betti_shape(s1, s, minimal_beta(s1, s) + extra) else {
            prop_assert!(golod_by_degree(s, initial_degree(&type2_h(s1, s))));
            return Ok(());
        };
        let alternating: i64 = (0..4).map(|i| (-1i64).pow(i as u32) * shape.total(i) as i64).sum();
        prop_assert_eq!(alternating, 0);
        let len = s + 6;
        let mut b = shape.b_polynomial();
        b.resize(len, 0);
        prop_assert_eq!(b, b_of(&type2_h(s1, s), len));
    }
}

#[test]
fn degree_criterion_matches_square_root_bound() {
    for s in 2..=20usize {
        for s1 in 2..=s {
            if s >= 2 * s1 {
                continue;
            }
            let t = initial_degree(&type2_h(s1, s));
            let sf = s as f64;
            let bound = if s % 2 == 1 {
                (sf + 2.0 - (4.0 * sf + 13.0).sqrt()) / 2.0
            } else {
                (sf + 1.0 - (8.0 * sf + 25.0).sqrt()) / 2.0
            };
            assert_eq!(
                golod_by_degree(s, t),
                (s - s1) as f64 <= bound,
                "({s1}, {s})"
            );
        }
    }
}

#[test]
fn odd_generic_classes_follow_the_threshold() {
    for (s1, s) in valid_pairs(25) {
        if s % 2 == 0 || s < 5 {
            continue;
        }
        let n = (s as f64 - 2.0 + (4.0 * s as f64 + 13.0).sqrt()) / 2.0;
        let (class, _) = generic_class(s1, s).unwrap();
        if (s1 as f64) < n {
            let a = a_value(s1, s) as usize;
            let r = (s + 3 - a * (a + 1)) / 2;
            assert!(r >= 1);
            assert_eq!(class, TorClass::G(r), "({s1}, {s})");
        } else {
            assert_eq!(class, TorClass::golod(), "({s1}, {s})");
        }
    }
}

#[test]
fn tallies_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let rows = vec![
                run_trials(3, 4, field(), 6, 11).unwrap(),
                run_trials(4, 5, field(), 6, 11).unwrap(),
            ];
            (emit(&rows, Format::Csv), emit(&rows, Format::Markdown))
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn tally_counts_cover_successful_trials() {
    let row = run_trials(3, 5, field(), 8, 3).unwrap();
    let compressed = row
        .records
        .iter()
        .filter(|r| r.observation.as_ref().is_some_and(|o| o.all_compressed()))
        .count();
    assert_eq!(row.counts.values().sum::<usize>(), compressed);
    assert_eq!(compressed + row.failed, row.trials);
    assert_eq!(row.records.len(), row.trials);
}

//! Property tests for the invariants of sequences, sets, filters, products, paths and
//! g-functions.

use std::collections::HashSet;

use invset_core::filter::{construct_prop_4_2, construct_thm_1, invariance_check, log_modulus, qmf_residual, ThmParams};
use invset_core::gfun::{construct_thm_1_2, g_invariance_check, g_sum_residual, strict_g, GFunction, LocalG};
use invset_core::interval::{doubling, exit_and_barrier, star_interval, tau, ClosedSet1D, Interval, IntervalUnion, TauPart};
use invset_core::rational::{half, int, pow2, rat, to_f64};
use invset_core::sampler::{simulate, Driver, Start};
use invset_core::spectral::{code_k, coded_path_probability, phi_hat, run_recursion, sum_phi_hat, xi_t_of_k};
use invset_core::symbolic::{near_exit_points, rho, rho_to_set, GeneratorFamily, GeneratorRule, SubshiftInput};
use invset_core::{Rational, SftSubshift, SymbolSeq, TransitionFn};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn seq_of(j: u8) -> impl Strategy<Value = SymbolSeq> {
    (prop::collection::vec(0..=j, 1..5), prop::collection::vec(0..=j, 0..8))
        .prop_map(move |(p, s)| SymbolSeq::new(p, s, j).unwrap())
}

fn binary_seq() -> impl Strategy<Value = SymbolSeq> {
    seq_of(1)
}

fn fixtures() -> Vec<SftSubshift> {
    vec![
        SftSubshift::from_strs(1, &["00", "11"]).unwrap(),
        SftSubshift::from_strs(1, &["000", "111"]).unwrap(),
        SftSubshift::from_strs(1, &["11"]).unwrap(),
        SftSubshift::from_strs(1, &["010", "11"]).unwrap(),
        SftSubshift::from_strs(2, &["00", "11", "22"]).unwrap(),
    ]
}

fn invariant_sets() -> Vec<ClosedSet1D> {
    vec![
        ClosedSet1D::points([rat(1, 3), rat(2, 3)]),
        ClosedSet1D::points([rat(1, 7), rat(2, 7), rat(4, 7)]),
        ClosedSet1D::points([rat(1, 5), rat(2, 5), rat(4, 5), rat(3, 5)]),
        ClosedSet1D::points([rat(1, 3), rat(2, 3), rat(1, 7), rat(2, 7), rat(4, 7)]),
    ]
}

fn rational_in_unit() -> impl Strategy<Value = Rational> {
    (1i64..200).prop_flat_map(|d| (0..d, Just(d))).prop_map(|(n, d)| rat(n, d))
}

/// Longest `l ≤ cap` such that the last `l` symbols of `seq` end some arbitrarily long
/// allowed word, found by brute-force extension.
fn brute_agreement(k: &SftSubshift, seq: &SymbolSeq, cap: usize) -> usize {
    let endings = brute_endings(k, cap);
    (0..=cap).rev().find(|&l| endings.contains(&seq.last_symbols(l))).unwrap_or(0)
}

fn brute_endings(k: &SftSubshift, cap: usize) -> HashSet<Vec<u8>> {
    let j = k.alphabet_bound();
    // A left extension longer than the number of follower states must revisit a state.
    let len = cap + (j as usize + 1).pow(k.window().saturating_sub(1) as u32) + k.window();
    let allowed = |w: &[u8]| !k.forbidden().iter().any(|f| w.windows(f.len()).any(|x| x == f.symbols()));
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..len {
        let mut grown = Vec::new();
        for w in &words {
            for a in 0..=j {
                let mut v = vec![a];
                v.extend_from_slice(w);
                if allowed(&v[..v.len().min(k.window())]) {
                    grown.push(v);
                }
            }
        }
        words = grown;
    }
    let mut out = HashSet::new();
    for w in &words {
        for l in 0..=cap {
            out.insert(w[w.len() - l..].to_vec());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho_is_an_ultrametric(a in binary_seq(), b in binary_seq(), c in binary_seq()) {
        let ab = rho(&a, &b).unwrap();
        let bc = rho(&b, &c).unwrap();
        let ac = rho(&a, &c).unwrap();
        prop_assert_eq!(ab, rho(&b, &a).unwrap());
        prop_assert_eq!(ab.is_zero(), a == b);
        prop_assert!(ac <= ab.max(bc));
    }

    #[test]
    fn shift_forgets_star(s in seq_of(2), j in 0u8..=2) {
        prop_assert_eq!(s.star(j).shift(), s.shift());
        prop_assert_eq!(s.star(j).star_inv(j), s);
    }

    #[test]
    fn subshifts_are_shift_invariant(s in binary_seq(), idx in 0usize..4) {
        let k = &fixtures()[idx];
        if k.contains(&s) {
            prop_assert!(k.contains(&s.shift()));
        }
        // A member of the exit set leaves K but its shift does not.
        let exits = k.exit_set();
        if exits.contains(&s) {
            prop_assert!(!k.contains(&s) && k.contains(&s.shift()));
        }
    }

    #[test]
    fn barriers_are_starred_exits(s in binary_seq(), idx in 0usize..4) {
        let k = &fixtures()[idx];
        // The star relation between barriers and exits needs K = Θ(K).
        prop_assume!(k.is_shift_onto());
        prop_assert_eq!(k.barrier_set().contains(&s), k.exit_set().contains(&s.star(1)));
    }

    #[test]
    fn automaton_distance_matches_brute_force(s in seq_of(1), idx in 0usize..4) {
        let k = &fixtures()[idx];
        let d = rho_to_set(&s, k).unwrap();
        let auto = d.exponent().map_or(12, |l| (l as usize).min(12));
        prop_assert_eq!(auto, brute_agreement(k, &s, 12));
    }

    #[test]
    fn ternary_distance_matches_brute_force(s in seq_of(2)) {
        let k = &fixtures()[4];
        let d = rho_to_set(&s, k).unwrap();
        let auto = d.exponent().map_or(10, |l| (l as usize).min(10));
        prop_assert_eq!(auto, brute_agreement(k, &s, 10));
    }

    #[test]
    fn tau_follows_the_recursion(s in binary_seq(), j in 0u8..=1) {
        let lhs = tau(&s.append(j)).unwrap();
        prop_assert_eq!(lhs, tau(&s).unwrap() * half() + int(j as i64) * half());
    }

    #[test]
    fn tau_intertwines_stars(s in binary_seq()) {
        let x = tau(&s).unwrap();
        // At 1/2 the sequence (0)*1 maps to 0 while the interval convention gives 1.
        prop_assume!(!x.is_zero() && !(x == half() && s.last() == 1));
        prop_assert_eq!(tau(&s.star(1)).unwrap(), star_interval(&x));
    }

    #[test]
    fn doubling_is_two_to_one(x in rational_in_unit()) {
        prop_assert_eq!(doubling(&(&x * half())).unwrap(), x.clone());
        prop_assert_eq!(doubling(&(&x * half() + half())).unwrap(), x);
    }

    #[test]
    fn closure_commutes_with_star(parts in prop::collection::vec((0i64..=16, 0i64..=16, any::<bool>(), any::<bool>()), 1..4)) {
        let ivs: Vec<Interval> = parts
            .into_iter()
            .filter_map(|(a, b, lc, hc)| {
                let (lo, hi) = (a.min(b), a.max(b));
                let (lc, hc) = if lo == hi { (true, true) } else { (lc, hc) };
                Interval::new(rat(lo, 16), rat(hi, 16), lc, hc).ok()
            })
            .collect();
        let e = IntervalUnion::new(ivs);
        // On [0,1] the two sides can differ only by the endpoint 1 versus 0, since 1/2 maps
        // to 1 while points just above 1/2 map near 0; they agree once 0 and 1 are identified.
        let ends = IntervalUnion::from_points(&[rat(0, 1), rat(1, 1)]);
        let (lhs, rhs) = (e.closure().star(), e.star().closure());
        prop_assert_eq!(lhs.minus(&ends), rhs.minus(&ends));
        let touches = |u: &IntervalUnion| u.contains(&rat(0, 1)) || u.contains(&rat(1, 1));
        prop_assert_eq!(touches(&lhs), touches(&rhs));
    }

    #[test]
    fn coding_identity(num in 0i64..97, k in -64i64..=64, t in 0u32..=40) {
        let x0 = rat(num, 97);
        let w = code_k(k, 40).unwrap();
        let path = run_recursion(&x0, w.symbols());
        prop_assert_eq!(&path[t as usize], &xi_t_of_k(&x0, k, t));
    }

    #[test]
    fn brackets_nest(num in 0i64..64, k in -20i64..=20, t in 2u32..30) {
        for name in ["haar", "cos3"] {
            let p = TransitionFn::builtin(name).unwrap();
            let x = rat(num, 64) + int(k);
            let a = phi_hat(&p, &x, t);
            let b = phi_hat(&p, &x, t + 1);
            prop_assert!(b.upper <= a.upper + 1e-15);
            prop_assert!(b.lower + 1e-15 >= a.lower);
            prop_assert!(a.upper <= 1.0 && a.lower <= a.upper);
        }
    }

    #[test]
    fn coded_paths_reproduce_the_product(num in 0i64..64, k in -30i64..=30, t in 1u32..20) {
        let p = TransitionFn::builtin("haar").unwrap();
        let x0 = rat(num, 64);
        let direct = coded_path_probability(&p, &x0, k, t);
        let product = phi_hat(&p, &(&x0 + int(k)), t).upper;
        prop_assert!((direct - product).abs() <= 1e-14);
    }

    #[test]
    fn interval_states_are_exact(num in 0i64..50, seed in any::<u64>()) {
        let p = TransitionFn::builtin("cos3").unwrap();
        let x0 = rat(num, 50);
        let path = simulate(Driver::Filter(&p), &Start::Point(x0.clone()), 30, seed, 0).unwrap();
        let states = path.interval_states().unwrap();
        for t in 1..=30usize {
            let s: Rational = path.symbols[..t].iter().enumerate().map(|(i, &d)| int(d as i64) * pow2(i as i64)).sum();
            prop_assert_eq!(&states[t], &((&x0 + s) / pow2(t as i64)));
        }
    }

    #[test]
    fn paths_never_return(x0 in binary_seq(), seed in any::<u64>(), idx in 0usize..2) {
        let k = &fixtures()[idx];
        prop_assume!(!k.contains(&x0));
        let g = GFunction::Local(LocalG::constant(1, half()));
        let path = simulate(Driver::G(&g), &Start::Seq(x0.clone()), 16, seed, 0).unwrap();
        let d0 = rho_to_set(&x0, k).unwrap();
        for (t, s) in path.symbolic_states().unwrap().iter().enumerate() {
            prop_assert!(rho_to_set(s, k).unwrap() >= d0.scaled_down(t as u32));
        }
    }

    #[test]
    fn constructed_g_sums_exactly(s in seq_of(1), idx in 0usize..2) {
        let k = &fixtures()[idx];
        let g = construct_thm_1_2(k).unwrap();
        prop_assert_eq!(g_sum_residual(&g, [&s]).unwrap(), 0.0);
        // Zero set is exactly the exit set.
        let v = g.eval_exact(&s).unwrap().unwrap();
        prop_assert_eq!(v.is_zero(), k.exit_set().contains(&s));
    }

    #[test]
    fn ternary_g_sums_exactly(s in seq_of(2)) {
        let k = &fixtures()[4];
        let g = construct_thm_1_2(k).unwrap();
        prop_assert_eq!(g_sum_residual(&g, [&s]).unwrap(), 0.0);
        let v = g.eval_exact(&s).unwrap().unwrap();
        prop_assert_eq!(v.is_zero(), k.exit_set().contains(&s));
    }

    #[test]
    fn constructed_g_is_lipschitz_in_cells(a in binary_seq(), b in binary_seq(), w in prop::collection::vec(0u8..=1, 3..8), idx in 0usize..2) {
        let k = &fixtures()[idx];
        let g = construct_thm_1_2(k).unwrap();
        let GFunction::Constructed(c) = &g else { unreachable!() };
        prop_assume!(c.is_separated() && w.len() >= c.window());
        let (x, y) = (a.append_word(&w), b.append_word(&w));
        let diff = g.eval_exact(&x).unwrap().unwrap() - g.eval_exact(&y).unwrap().unwrap();
        let r = rho(&x, &y).unwrap().to_rational();
        prop_assert!(num_traits::Signed::abs(&diff) <= r / int(k.alphabet_bound() as i64));
    }
}

#[test]
fn every_fixture_has_exits() {
    for k in fixtures() {
        assert!(!k.exit_set().is_empty(), "{k:?}");
    }
}

#[test]
fn barrier_words_match_starred_exit_words() {
    for k in fixtures().into_iter().filter(|k| k.alphabet_bound() == 1 && k.is_shift_onto()) {
        for n in 1..=12 {
            assert_eq!(k.barrier_set().initial_words(n), k.exit_set().star(1).initial_words(n), "{k:?} at {n}");
        }
    }
}

#[test]
fn finite_type_exit_closure_is_disjoint() {
    for k in fixtures() {
        assert!(k.points().intersect(&k.exit_set()).is_empty(), "{k:?}");
    }
}

#[test]
fn witnesses_persist_under_longer_truncations() {
    for l in 5..=13 {
        let k = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, l).subshift().unwrap();
        for w in near_exit_points(&k).unwrap() {
            for l2 in l + 1..=15 {
                let k2 = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, l2).subshift().unwrap();
                assert!(k2.contains(&w.point), "{} at L = {l2}", w.point);
                let d2 = rho_to_set(&w.point, &k2.exit_set()).unwrap();
                assert!(d2 <= w.dist, "{} drifts away at L = {l2}", w.point);
            }
        }
    }
}

#[test]
fn exits_of_invariant_sets_avoid_binary_rationals() {
    let mut sets = invariant_sets();
    for words in [["00", "11"], ["000", "111"]] {
        let k = SftSubshift::from_strs(1, &words).unwrap();
        sets.push(ClosedSet1D::tau_image(k, TauPart::Subshift).unwrap());
    }
    for b in sets {
        let (e, bb) = exit_and_barrier(&b).unwrap();
        assert!(!e.has_binary_rational() && !bb.has_binary_rational(), "{b}");
    }
}

#[test]
fn constructed_filters_hit_exact_zeros_and_ones() {
    for b in invariant_sets() {
        for p in [construct_prop_4_2(&b).unwrap(), construct_thm_1(&b, &ThmParams::default()).unwrap()] {
            let r = p.regions().unwrap();
            let ClosedSet1D::Points(exits) = &r.exits else { panic!("finite exits") };
            for e in exits {
                assert_eq!(p.eval_exact(e), Some(Rational::zero()), "{p} at {e}");
                assert_eq!(p.eval_exact(&star_interval(e)), Some(Rational::one()), "{p} at {e}*");
            }
            assert!(qmf_residual(&p, 4096) <= 1e-12, "{p}");
            for x in p.region_endpoints() {
                let y = if x >= half() { &x - half() } else { &x + half() };
                assert!((p.eval(&x) + p.eval(&y) - 1.0).abs() <= 1e-15, "{p} at {x}");
            }
            assert!(invariance_check(&p, &b).unwrap().pass, "{p}");
        }
        let p = construct_thm_1(&b, &ThmParams::default()).unwrap();
        assert!(p.regions().unwrap().step1_report(32).all(), "{b}");
    }
}

#[test]
fn theorem_filters_have_log_modulus_near_exits() {
    for b in invariant_sets() {
        let p = construct_thm_1(&b, &ThmParams::default()).unwrap();
        let r = p.regions().unwrap();
        let invset_core::filter::Method::LogModulus { k } = r.method else { panic!() };
        let ClosedSet1D::Points(exits) = &r.exits else { panic!() };
        let mut prev = f64::INFINITY;
        let mut first = None;
        let e = exits.iter().next().unwrap().clone();
        for t in 4..=60 {
            let x = &e + pow2(-t);
            if !r.n_e.contains(&x) {
                continue;
            }
            let v = p.eval(&x);
            assert!((v - log_modulus(to_f64(&pow2(-t)), k)).abs() < 1e-12, "{b} t = {t}");
            assert!(v <= prev);
            first.get_or_insert(v);
            prev = v;
        }
        assert!(prev < first.unwrap());
    }
}

#[test]
fn sums_grow_with_k_max_and_stay_below_one() {
    for name in ["haar", "cos3", "shannon"] {
        let p = TransitionFn::builtin(name).unwrap();
        for x0 in [rat(0, 1), rat(1, 3), rat(3, 8), rat(5, 7)] {
            let mut prev = 0.0;
            for k_max in [0, 4, 16, 64] {
                let s = sum_phi_hat(&p, &x0, k_max, 48);
                assert!(s.upper >= prev && s.upper <= 1.0 + 1e-9, "{name} {x0} {k_max}: {s:?}");
                prev = s.upper;
            }
        }
    }
    let p = TransitionFn::builtin("haar").unwrap();
    assert_eq!(phi_hat(&p, &rat(0, 1), 10).lower, 1.0);
}

#[test]
fn lifted_theorem_filter_is_invariant_for_the_preimage() {
    let b = ClosedSet1D::points([rat(1, 3), rat(2, 3)]);
    let p = construct_thm_1(&b, &ThmParams::default()).unwrap();
    let k = SftSubshift::from_strs(1, &["00", "11"]).unwrap();
    assert!(g_invariance_check(&GFunction::lift(p), &k).unwrap().pass);
}

#[test]
fn strict_g_bound_holds_on_k() {
    for k in fixtures() {
        if !k.condition_star_intersection().0 {
            continue;
        }
        let s = strict_g(&SubshiftInput::Finite(k.clone())).unwrap();
        let pts = k.points();
        for n in 1..=8 {
            for u in pts.initial_words(n) {
                let x = pts.some_point_ending_with(&u).unwrap();
                let v = s.g.eval_exact(&x).unwrap().unwrap();
                assert!(v >= s.lower_bound, "{k:?} at {x}: {v} < {}", s.lower_bound);
            }
        }
    }
}

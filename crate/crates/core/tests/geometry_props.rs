mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_line_class, to_f64};
use stokes_core::functor::{is_stokes, iso_exists, IsoOptions};
use stokes_core::geometry::{
    circle_space, from_stokes_matrices, interval_space, random_stokes_data, realized_sign_vectors, sign_poset,
    to_stokes_matrices, AffineForm, Polyhedron,
};
use stokes_core::linalg::{q, q_frac};
use stokes_core::ops::{search, ElementaryOptions};

/// Sampling radius for the real-part oracle.
const RADIUS: f64 = 1e-4;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arc_orders_flip_exactly_at_directions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lc = random_line_class(&mut rng, &[q(1), q(2)], 3);
        let class = lc.class();
        let Ok(cs) = circle_space(&class) else { return Ok(()) };
        let m = cs.num_directions();
        for i in 0..class.len() {
            for j in 0..class.len() {
                if i == j {
                    continue;
                }
                for a in 0..m {
                    let theta = to_f64(&cs.arc_midpoint(a)) * std::f64::consts::PI;
                    let sampled = lc.re_difference(i, j, RADIUS, theta) < 0.0;
                    prop_assert_eq!(cs.space.fiber(cs.arc(a)).lt(i, j), sampled);
                }
                let dirs = class.directions(i, j).unwrap();
                for d in 0..m {
                    let (l, r) = cs.adjacent_arcs(d);
                    let flips = cs.space.fiber(l).lt(i, j) != cs.space.fiber(r).lt(i, j);
                    prop_assert_eq!(flips, dirs.contains(&cs.directions[d]));
                }
            }
        }
    }

    #[test]
    fn stokes_data_functors_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lc = random_line_class(&mut rng, &[q(1), q(2)], 3);
        let Ok(cs) = circle_space(&lc.class()) else { return Ok(()) };
        let data = random_stokes_data(&mut rng, &cs, 1, 3);
        let f = from_stokes_matrices(&cs, &data).unwrap();
        prop_assert!(is_stokes(&f, &cs.space).unwrap().stokes);
        let g = from_stokes_matrices(&cs, &to_stokes_matrices(&cs, &f).unwrap()).unwrap();
        let verdict = iso_exists(&f, &g, IsoOptions { seed, ..IsoOptions::default() }).unwrap();
        prop_assert!(verdict.is_iso(), "{}", verdict.label());
    }

    #[test]
    fn positive_scaling_keeps_the_sign_poset(seed in any::<u64>(), nforms in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = |c: Vec<i64>, k| AffineForm::new(c.into_iter().map(q).collect(), q(k)).unwrap();
        let square = Polyhedron::new(2, vec![half(vec![1, 0], 2), half(vec![-1, 0], 2), half(vec![0, 1], 2), half(vec![0, -1], 2)]).unwrap();
        let forms: Vec<AffineForm> = (0..nforms)
            .map(|_| loop {
                let c = vec![rng.random_range(-2..=2), rng.random_range(-2..=2)];
                if c.iter().any(|&x| x != 0) {
                    break half(c, rng.random_range(-2..=2));
                }
            })
            .collect();
        let scaled: Vec<AffineForm> = forms
            .iter()
            .map(|f| {
                let s = q_frac(rng.random_range(1..20), rng.random_range(1..20));
                AffineForm::new(f.coeffs.iter().map(|c| c * &s).collect(), &f.constant * &s).unwrap()
            })
            .collect();
        let (a, b) = (realized_sign_vectors(&square, &forms), realized_sign_vectors(&square, &scaled));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(sign_poset(&a), sign_poset(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_intervals_have_no_counterexample(seed in any::<u64>(), ncuts in 1usize..4, nelem in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = ["a", "b", "c"];
        let elements = &names[..nelem];
        let chains: Vec<Vec<&str>> = (0..=ncuts)
            .map(|_| {
                let mut c = elements.to_vec();
                for i in (1..c.len()).rev() {
                    c.swap(i, rng.random_range(0..=i));
                }
                c
            })
            .collect();
        let chain_refs: Vec<&[&str]> = chains.iter().map(Vec::as_slice).collect();
        let cuts: Vec<_> = (1..=ncuts as i64).map(q).collect();
        let space = interval_space(q(0), q(ncuts as i64 + 1), &cuts, elements, &chain_refs).unwrap();
        prop_assume!(space.elementarity_criterion().is_certified());
        let v = search(&space.space, ElementaryOptions { trials: 16, seed, ..ElementaryOptions::default() }).unwrap();
        prop_assert!(!v.is_counterexample(), "{}", v.label());
    }
}

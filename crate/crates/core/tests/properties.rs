//! Randomized invariants over the public API. Instances come from the seeded
//! generators so that proptest shrinks over seeds and sizes.

use anticonc::dist::{int, weighted_sum};
use anticonc::families::u_alpha;
use anticonc::random::{self, random_birnbaum, random_bounded, random_dist, random_gabriel, random_small_scalar, random_symmetric_unimodal};
use anticonc::reduction::{alternating_self_sum, balancing_bound, extreme_decompose, mix, Decomposition};
use anticonc::search::{is_non_increasing, monotonicity_check, sign_vector_max, theorem2_check, Target};
use anticonc::transforms::{birnbaum_check, gabriel_lhs_rhs};
use anticonc::{ratio, AlphaParam, Dist, LatticePoint, Rational, WeightVector};
use proptest::prelude::*;
use rand::Rng;

fn nonzero_weight(g: &mut impl Rng) -> i64 {
    let w = g.gen_range(1..=3);
    if g.gen_bool(0.5) {
        w
    } else {
        -w
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn vector_weights_on_iid_scalars(seed in any::<u64>(), half in 1usize..=2) {
        let mut g = random::rng(seed);
        let n = 2 * half;
        let d = random_small_scalar(&mut g, 4);
        let ws: Vec<Vec<Rational>> = (0..n)
            .map(|_| {
                let mut a = vec![int(g.gen_range(-2..=2)), int(g.gen_range(-2..=2))];
                if a.iter().all(|c| *c == int(0)) {
                    a[0] = int(1);
                }
                a
            })
            .collect();
        let lhs = weighted_sum(&WeightVector::Vectors(ws), &vec![d.clone(); n]).unwrap().dist.concentration().0;
        let rhs = alternating_self_sum(&d, n).unwrap().atom_at(0);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn scalar_weights_on_iid_vectors(seed in any::<u64>(), half in 1usize..=2) {
        let mut g = random::rng(seed);
        let n = 2 * half;
        let d = random_dist(&mut g, 2, 4, 2);
        let ws: Vec<i64> = (0..n).map(|_| nonzero_weight(&mut g)).collect();
        let lhs = weighted_sum(&WeightVector::integers(&ws), &vec![d.clone(); n]).unwrap().dist.concentration().0;
        let rhs = alternating_self_sum(&d, n).unwrap().atom(&LatticePoint::zero(2));
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn balancing_equality_only_with_identity(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let n = 2 * g.gen_range(1..=2);
        let dim = g.gen_range(1..=2);
        let ds: Vec<Dist> = (0..n).map(|_| random_dist(&mut g, dim, 3, 1)).collect();
        let sum = Dist::convolve_all(&ds).unwrap();
        for x in sum.support() {
            let b = balancing_bound(&ds, x).unwrap();
            prop_assert!(b.holds());
            prop_assert_eq!(b.strict, b.equality_witness.is_none() && b.lhs < b.rhs);
        }
    }

    #[test]
    fn identical_pairs_reach_balancing_equality(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let d = random_dist(&mut g, 1, 4, 3);
        let ds = vec![d.clone(), d.negate()];
        let b = balancing_bound(&ds, &LatticePoint::scalar(0)).unwrap();
        prop_assert!(!b.strict);
        prop_assert!(b.equality_witness.is_some());
    }

    #[test]
    fn bounded_concentration_bound(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let alpha = random::random_alpha(&mut g);
        let n = 2 * g.gen_range(1..=2);
        let ds: Vec<Dist> = (0..n).map(|_| random_bounded(&mut g, &alpha, 1, 5)).collect();
        let (q, x) = Dist::convolve_all(&ds).unwrap().concentration();
        let (lhs, rhs) = theorem2_check(&ds, &alpha, &x).unwrap();
        prop_assert_eq!(&lhs, &q);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn partial_sums_never_concentrate(seed in any::<u64>(), len in 1usize..6) {
        let mut g = random::rng(seed);
        let ds: Vec<Dist> = (0..len).map(|_| random_small_scalar(&mut g, 4)).collect();
        prop_assert!(is_non_increasing(&monotonicity_check(&ds).unwrap()));
    }

    #[test]
    fn symmetric_unimodal_closed_under_convolution(r1 in 0usize..4, r2 in 0usize..4, seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let a = random_symmetric_unimodal(&mut g, r1);
        let b = random_symmetric_unimodal(&mut g, r2);
        let c = a.convolve(&b).unwrap();
        prop_assert!(c.is_symmetric());
        prop_assert!(c.is_unimodal().unwrap());
    }

    #[test]
    fn rearrangement_inequality(seed in any::<u64>(), extra in 0usize..=2) {
        let mut g = random::rng(seed);
        let seqs = random_gabriel(&mut g, extra, 3);
        let (lhs, rhs) = gabriel_lhs_rhs(&seqs, 2).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn peakedness_inequality(seed in any::<u64>(), k in 0u64..6) {
        let mut g = random::rng(seed);
        let (x, y, yp) = random_birnbaum(&mut g, 3);
        let (lhs, rhs) = birnbaum_check(&x, &y, &yp, k).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn balanced_signs_are_optimal_for_even_n(seed in any::<u64>(), half in 1usize..=3) {
        let mut g = random::rng(seed);
        let d = random_small_scalar(&mut g, 3);
        let n = 2 * half;
        let s = sign_vector_max(&d, n, &Target::All).unwrap();
        prop_assert_eq!(s.value, alternating_self_sum(&d, n).unwrap().atom_at(0));
    }

    #[test]
    fn decomposition_parts_stay_bounded(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let alpha = random::random_alpha(&mut g);
        let mu = random_bounded(&mut g, &alpha, 1, 5);
        match extreme_decompose(&mu, &alpha).unwrap() {
            Decomposition::Extremal { .. } => {}
            Decomposition::Mixture { p, mu1, mu2, .. } => {
                prop_assert!(&mu1.concentration().0 <= alpha.value());
                prop_assert!(&mu2.concentration().0 <= alpha.value());
                prop_assert_eq!(mix(&p, &mu1, &mu2).unwrap(), mu);
            }
        }
    }
}

#[test]
fn u_alpha_against_its_reflection_is_tight() {
    for (a, b) in [(1, 3), (2, 5), (1, 2), (3, 4), (2, 7)] {
        let alpha = AlphaParam::new(ratio(a, b)).unwrap();
        let u = u_alpha(&alpha);
        let (lhs, rhs) = theorem2_check(&[u.clone(), u.negate()], &alpha, &LatticePoint::scalar(0)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

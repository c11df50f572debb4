mod common;

use circular_coords::analysis::{cyclic_ordering, degree_between, histogram};
use circular_coords::circular::{coordinates_from_potential, integrate_cocycle, CircularCoordinate};
use circular_coords::cochain::{adjoint0, coboundary0, coboundary1, inner, norm, Cochain, Integers, PrimeField, Reals};
use circular_coords::complex::OrderedFiltration;
use circular_coords::harmonic::{harmonic_representative, to_real, HarmonicOptions};
use circular_coords::lift::{centered_representative, lift_cocycle, reduce_mod_p};
use circular_coords::persistence::persistent_cocycles;
use circular_coords::scalar::{frac, wrap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn filtration(seed: u64) -> (OrderedFiltration<f64>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = common::random_filtration(&mut rng, 60);
    (f, rng)
}

fn random_integer_cochain(f: &OrderedFiltration<f64>, dim: usize, rng: &mut ChaCha8Rng) -> Cochain<i64> {
    let entries: Vec<(usize, i64)> = f.indices_of_dim(dim).map(|k| (k, rng.random_range(-5..=5))).collect();
    Cochain::from_entries(&Integers, dim, f, entries).unwrap()
}

fn random_real_cochain(f: &OrderedFiltration<f64>, dim: usize, rng: &mut ChaCha8Rng) -> Cochain<f64> {
    let entries: Vec<(usize, f64)> = f.indices_of_dim(dim).map(|k| (k, rng.random_range(-1.0..1.0))).collect();
    Cochain::from_entries(&Reals::default(), dim, f, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>()) {
        let (f, mut rng) = filtration(seed);
        let g = random_integer_cochain(&f, 0, &mut rng);
        let dd = coboundary1(&Integers, &coboundary0(&Integers, &g, &f).unwrap(), &f).unwrap();
        prop_assert_eq!(dd.support_len(), 0);
        let field = PrimeField::new(7).unwrap();
        let gp = reduce_mod_p(&g, &field);
        let ddp = coboundary1(&field, &coboundary0(&field, &gp, &f).unwrap(), &f).unwrap();
        prop_assert_eq!(ddp.support_len(), 0);
    }

    #[test]
    fn adjoint_matches_inner_products(seed in any::<u64>()) {
        let (f, mut rng) = filtration(seed);
        let g = random_real_cochain(&f, 0, &mut rng);
        let alpha = random_real_cochain(&f, 1, &mut rng);
        let lhs = inner(&coboundary0(&Reals::default(), &g, &f).unwrap(), &alpha);
        let rhs = inner(&g, &adjoint0(&alpha, &f).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn reduction_commutes_with_coboundary(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5, 47])) {
        let (f, mut rng) = filtration(seed);
        let field = PrimeField::new(p).unwrap();
        let alpha = random_integer_cochain(&f, 1, &mut rng);
        let over_z = reduce_mod_p(&coboundary1(&Integers, &alpha, &f).unwrap(), &field);
        let over_p = coboundary1(&field, &reduce_mod_p(&alpha, &field), &f).unwrap();
        prop_assert_eq!(over_z, over_p);
    }

    #[test]
    fn total_order_is_a_filtration(seed in any::<u64>()) {
        let (f, _) = filtration(seed);
        for k in 0..f.len() {
            if k > 0 {
                prop_assert!(f.value(k - 1) <= f.value(k));
            }
            for &face in f.facets(k) {
                prop_assert!(face < k);
                prop_assert!(f.value(face) <= f.value(k));
            }
            prop_assert_eq!(f.index_of(f.simplex(k)), Some(k));
        }
    }

    #[test]
    fn oracles_agree(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 47])) {
        let (f, _) = filtration(seed);
        prop_assert_eq!(common::check_rank_oracle(&f, p), Ok(()));
        prop_assert_eq!(common::check_homology_pairs(&f, p), Ok(()));
    }

    #[test]
    fn representatives_live_on_their_interval(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 47])) {
        let (f, _) = filtration(seed);
        let d = persistent_cocycles(f.clone(), p).unwrap();
        let field = d.field();
        for iv in d.all_intervals().iter().filter(|iv| iv.dimension <= 1) {
            let end = iv.death_index.unwrap_or(f.len());
            let rep = &iv.representative;
            prop_assert_eq!(rep.get(iv.birth_index).map(|c| c != 0), Some(true));
            prop_assert!(rep.iter().all(|(k, _)| k >= iv.birth_index && k < end));
            let on_live = f.prefix(end);
            let dr = match iv.dimension {
                0 => coboundary0(&field, rep, &on_live).unwrap(),
                _ => coboundary1(&field, rep, &on_live).unwrap(),
            };
            prop_assert_eq!(dr.support_len(), 0, "not a cocycle before death");
            if let Some(death) = iv.death_index {
                // The killing simplex sees the cocycle.
                let dr = match iv.dimension {
                    0 => coboundary0(&field, rep, &f.prefix(death + 1)).unwrap(),
                    _ => coboundary1(&field, rep, &f.prefix(death + 1)).unwrap(),
                };
                prop_assert!(dr.get(death).is_some());
            }
        }
    }

    #[test]
    fn lift_round_trip_and_bound(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5, 47])) {
        let (f, _) = filtration(seed);
        let d = persistent_cocycles(f.clone(), p).unwrap();
        let field = d.field();
        for iv in d.intervals_of_dim(1) {
            let end = iv.death_index.unwrap_or(f.len());
            let sub = f.prefix(end);
            match lift_cocycle(&iv.representative, &field, &sub) {
                Ok(lift) => {
                    prop_assert_eq!(&reduce_mod_p(&lift.cocycle, &field), &iv.representative);
                    prop_assert!(lift.cocycle.iter().all(|(_, c)| c.unsigned_abs() <= (p as u64 - 1) / 2));
                    prop_assert_eq!(coboundary1(&Integers, &lift.cocycle, &sub).unwrap().support_len(), 0);
                }
                Err(circular_coords::Error::TorsionObstruction { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }

    #[test]
    fn harmonic_representative_invariants(seed in any::<u64>()) {
        let (f, _) = filtration(seed);
        let d = persistent_cocycles(f.clone(), 47).unwrap();
        for iv in d.intervals_of_dim(1) {
            let end = iv.death_index.unwrap_or(f.len());
            let sub = f.prefix(end);
            let Ok(lift) = lift_cocycle(&iv.representative, &d.field(), &sub) else { continue };
            let alpha = to_real::<f64>(&lift.cocycle);
            let h = harmonic_representative(&alpha, &sub, &HarmonicOptions::default()).unwrap();
            let scale = norm(&alpha).max(1.0);
            prop_assert!(norm(&adjoint0(&h.smoothed, &sub).unwrap()) <= 1e-8 * scale);
            prop_assert!(norm(&h.smoothed) <= norm(&alpha) + 1e-12);
            // Still a cocycle, differing from alpha by d0 of the potential.
            prop_assert!(norm(&coboundary1(&Reals::default(), &h.smoothed, &sub).unwrap()) <= 1e-9 * scale);
            let d0f = coboundary0(&Reals::default(), &h.potential, &sub).unwrap();
            for e in sub.indices_of_dim(1) {
                let gap = h.smoothed.get(e).unwrap_or(0.0) - alpha.get(e).unwrap_or(0.0) - d0f.get(e).unwrap_or(0.0);
                prop_assert!(gap.abs() <= 1e-9 * scale);
            }
            // The two ways of producing angles agree modulo a rotation per component.
            let from_potential = coordinates_from_potential(&h.potential, &sub);
            let integrated = integrate_cocycle(&h.smoothed, &sub, &[]).unwrap();
            for e in sub.indices_of_dim(1) {
                let v = sub.simplex(e).vertices();
                let a = wrap(from_potential.theta[v[1]] - from_potential.theta[v[0]]);
                let b = wrap(integrated.theta[v[1]] - integrated.theta[v[0]]);
                prop_assert!(wrap(a - b).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn centered_representatives(c in 0u32..1000, p in prop::sample::select(vec![2u32, 3, 47, 61])) {
        let c = c % p;
        let r = centered_representative(c, p);
        prop_assert_eq!(r.rem_euclid(p as i64) as u32, c);
        if p == 2 {
            prop_assert!(r == 0 || r == 1);
        } else {
            prop_assert!(r.unsigned_abs() <= (p as u64 - 1) / 2);
        }
    }

    #[test]
    fn wrap_and_frac_ranges(x in -1e6f64..1e6) {
        let w = wrap(x);
        prop_assert!((-0.5..0.5).contains(&w));
        prop_assert!(((x - w) - (x - w).round()).abs() < 1e-6);
        let t = frac(x);
        prop_assert!((0.0..1.0).contains(&t));
    }

    #[test]
    fn histogram_counts_every_vertex(theta in prop::collection::vec(0.0f64..1.0, 0..200), bins in 1usize..40) {
        let c = CircularCoordinate { theta: theta.clone() };
        prop_assert_eq!(histogram(&c, bins).unwrap().iter().sum::<usize>(), theta.len());
    }

    #[test]
    fn degree_of_a_circle_against_itself(theta in prop::collection::vec(0.0f64..1.0, 8..80)) {
        let ordering = cyclic_ordering(&theta, None);
        let gaps_ok = (0..ordering.len()).all(|i| {
            let (a, b) = (ordering[i], ordering[(i + 1) % ordering.len()]);
            wrap(theta[b] - theta[a]).abs() < 0.5
        });
        let winding: f64 = (0..ordering.len())
            .map(|i| wrap(theta[ordering[(i + 1) % ordering.len()]] - theta[ordering[i]]))
            .sum();
        prop_assume!(gaps_ok && winding.round() != 0.0);
        let c = CircularCoordinate { theta: theta.clone() };
        let flipped = CircularCoordinate { theta: theta.iter().map(|t| frac(-t)).collect() };
        prop_assert_eq!(degree_between(&c, &c, &ordering).unwrap(), 1);
        prop_assert_eq!(degree_between(&c, &flipped, &ordering).unwrap(), -1);
    }
}

#[test]
fn noisy_circle_cocycles_lift_without_torsion() {
    use circular_coords::complex::{rips_2skeleton, total_order};
    use circular_coords::datasets::{generate, DatasetKind, DatasetSpec};
    use circular_coords::metric::euclidean_distances;

    for seed in 0..50 {
        let data = generate::<f64>(&DatasetSpec::new(DatasetKind::NoisyCircle, 60, 0.3, seed)).unwrap();
        let f = total_order(&rips_2skeleton(&euclidean_distances(&data.cloud), 1.0)).unwrap();
        let d = persistent_cocycles(f.clone(), 47).unwrap();
        for iv in d.intervals_of_dim(1) {
            let sub = f.prefix(iv.death_index.unwrap_or(f.len()));
            assert!(lift_cocycle(&iv.representative, &d.field(), &sub).is_ok(), "seed {seed}");
        }
    }
}

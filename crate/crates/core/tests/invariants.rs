//! Structural invariants on seeded random inputs.

mod oracles;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toposfactor_core::constructions::{all_functors, find_natural_iso};
use toposfactor_core::factorization::{comprehensive_factorize, is_terminally_connected_essential, lift_global_element};
use toposfactor_core::fincat::{FinCategory, FinFunctor};
use toposfactor_core::presheaf::{find_iso, FinPresheaf};
use toposfactor_core::sites::{all_sieves, is_sheaf, sheafify, GrothendieckTopology};
use toposfactor_core::universe::random_category;

fn random_functor(seed: u64, n: usize, m: usize) -> Option<FinFunctor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Arc::new(random_category(&mut rng, n, 2, "C"));
    let d = Arc::new(random_category(&mut rng, m, 2, "D"));
    let fs = all_functors(&c, &d);
    if fs.is_empty() {
        return None;
    }
    let k = rng.gen_range(0..fs.len());
    Some(fs[k].clone())
}

fn random_presheaf(rng: &mut ChaCha8Rng, c: &Arc<FinCategory>) -> FinPresheaf {
    let all = oracles::presheaves(c, 2);
    all[rng.gen_range(0..all.len())].clone()
}

fn random_topology(rng: &mut ChaCha8Rng, c: &Arc<FinCategory>) -> GrothendieckTopology {
    let sieves: Vec<_> = c.objects().flat_map(|o| all_sieves(c, o)).collect();
    let seeds: Vec<_> = sieves.into_iter().filter(|_| rng.gen_bool(0.3)).collect();
    GrothendieckTopology::saturate_sieves(c.clone(), seeds)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_parts_have_their_properties(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        if let Some(u) = random_functor(seed, n, m) {
            let f = comprehensive_factorize(&u);
            prop_assert!(oracles::is_final(&f.left));
            prop_assert!(oracles::is_discrete_fibration(&f.right));
            prop_assert!(find_natural_iso(&f.left.then(&f.right), &u).is_some());
            prop_assert_eq!(is_terminally_connected_essential(&u), oracles::is_final(&u));
        }
    }

    #[test]
    fn lifting_inverts_restriction(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let Some(u) = random_functor(seed, n, m) else { return Ok(()) };
        if !is_terminally_connected_essential(&u) {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let e = random_presheaf(&mut rng, u.codomain());
        let down: Vec<Vec<usize>> = oracles::global_elements(&e.restrict(&u));
        let up = oracles::global_elements(&e);
        prop_assert_eq!(down.len(), up.len());
        for a in e.restrict(&u).global_elements() {
            let b = lift_global_element(&u, &e, &a).unwrap();
            let back: Vec<usize> = u.domain().objects().map(|c| b.family[u.ob(c).0]).collect();
            prop_assert_eq!(back, a.family);
        }
    }

    #[test]
    fn saturation_is_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, n, 2, "C"));
        let j = random_topology(&mut rng, &c);
        prop_assert!(j.check_axioms().is_ok());
        let seeds: Vec<_> = c.objects().flat_map(|o| j.covers(o).iter().cloned().collect::<Vec<_>>()).collect();
        prop_assert_eq!(GrothendieckTopology::saturate_sieves(c.clone(), seeds), j);
    }

    #[test]
    fn sheafification_is_a_sheaf_and_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, n, 2, "C"));
        let j = random_topology(&mut rng, &c);
        let x = Arc::new(random_presheaf(&mut rng, &c));
        let a = sheafify(&x, &j);
        prop_assert!(is_sheaf(&a.sheaf, &j));
        let aa = sheafify(&a.sheaf, &j);
        prop_assert!(find_iso(&a.sheaf, &aa.sheaf).is_some());
        prop_assert!(aa.unit.is_iso());
    }
}

//! Enumerative operations against the brute-force reference code.

mod oracles;

use std::collections::BTreeSet;
use std::sync::Arc;

use toposfactor_core::constructions::{all_functors, comma, is_discrete_fibration, is_final_functor, pi0};
use toposfactor_core::fincat::{fixtures, FinFunctor};
use toposfactor_core::presheaf::FinPresheaf;
use toposfactor_core::proetale::{build_oplax_colimit, fixtures as diagrams, localize, pro_hom, ProObject};
use toposfactor_core::universe::{universe, Bounds};

fn small() -> Vec<Arc<toposfactor_core::fincat::FinCategory>> {
    let mut cats = universe(Bounds { max_objects: 2, max_hom: 2 });
    cats.extend(fixtures::catalog());
    cats
}

#[test]
fn pi0_matches_dfs() {
    for c in small() {
        assert_eq!(oracles::blocks_of(&pi0(&c).label), oracles::components(&c), "{}", c.name());
    }
}

#[test]
fn comma_matches_pairs_of_arrows() {
    let cats = small();
    let mut checked = 0;
    for d in cats.iter().filter(|d| d.n_objects() <= 3) {
        let into: Vec<FinFunctor> = cats
            .iter()
            .filter(|c| c.n_objects() <= 2)
            .flat_map(|c| all_functors(c, d))
            .take(12)
            .collect();
        for f in &into {
            for g in &into {
                let cc = comma(f, g);
                let (objects, morphisms) = oracles::comma(f, g);
                let got: BTreeSet<_> = cc.objects.iter().copied().collect();
                assert_eq!(got, objects);
                let got_m: BTreeSet<_> = cc
                    .category
                    .morphisms()
                    .map(|m| {
                        let (k, l) = cc.morphisms[m.0];
                        (
                            cc.objects[cc.category.source(m).0],
                            cc.objects[cc.category.target(m).0],
                            k,
                            l,
                        )
                    })
                    .collect();
                assert_eq!(got_m.len(), cc.category.n_morphisms());
                assert_eq!(got_m, morphisms);
                checked += 1;
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn global_elements_match_enumeration() {
    for c in [fixtures::arrow(), fixtures::par_pair(), fixtures::span(), fixtures::idem(), fixtures::chain(3)] {
        for p in oracles::presheaves(&c, 2) {
            let got: Vec<Vec<usize>> = p.global_elements().into_iter().map(|a| a.family).collect();
            assert_eq!(got, oracles::global_elements(&p), "{}", c.name());
        }
    }
}

#[test]
fn finality_and_fibrations_match() {
    let cats = universe(Bounds { max_objects: 2, max_hom: 2 });
    for c in &cats {
        for d in &cats {
            for u in all_functors(c, d) {
                assert_eq!(is_final_functor(&u), oracles::is_final(&u));
                assert_eq!(is_discrete_fibration(&u), oracles::is_discrete_fibration(&u));
            }
        }
    }
}

#[test]
fn fraction_classes_match_roofs() {
    for d in diagrams::catalog().into_iter().chain([diagrams::idem_on_idem()]) {
        let mol = Arc::new(build_oplax_colimit(&d));
        let fc = localize(&mol).unwrap();
        let got: BTreeSet<Vec<_>> = fc
            .category()
            .morphisms()
            .map(|m| {
                let mut v = fc.members(m);
                v.sort();
                v
            })
            .collect();
        assert_eq!(got, oracles::fraction_classes(mol.category(), mol.cartesian()), "{}", d.name());
    }
}

#[test]
fn pro_hom_matches_limit_of_colimits() {
    let catalog = diagrams::catalog();
    let mut checked = 0;
    for x in &catalog {
        for y in &catalog {
            if x.target() != y.target() {
                continue;
            }
            let (px, py) = (
                ProObject::new("X", x.functor().clone()).unwrap(),
                ProObject::new("Y", y.functor().clone()).unwrap(),
            );
            let got = pro_hom(&px, &py).unwrap();
            let want = oracles::pro_hom(x.functor(), y.functor());
            let fams: BTreeSet<Vec<usize>> = got
                .iter()
                .map(|m| m.components.iter().enumerate().map(|(j, &r)| want.class_of(j, r)).collect())
                .collect();
            assert_eq!(fams.len(), got.len());
            assert_eq!(fams, want.families, "{} -> {}", x.name(), y.name());
            checked += 1;
        }
    }
    assert!(checked >= 50, "{checked}");
}

#[test]
fn representables_have_the_expected_global_elements() {
    let sq = fixtures::sq();
    for o in sq.objects() {
        let y = FinPresheaf::representable(sq.clone(), o);
        assert_eq!(y.global_elements().len(), oracles::global_elements(&y).len());
    }
}

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use colimkit::bicolim::{verify_bicolimit, ColimOptions};
use colimkit::cat::{FinCat, Functor, MorId, ObjId};
use colimkit::corpus;
use colimkit::pseudocone::{check_modification, check_pseudocone, enumerate_modifications, enumerate_pseudocones};
use colimkit::restriction::{restrict_diagram, restrict_to};
use colimkit::sites::{
    build_colim_site, check_continuous, check_sheaf, enumerate_presheaves, is_covering, restrict_modification,
    restrict_pseudocone, validate_site, verify_site_pseudocolimit, Cover, Presheaf, Site, SiteDiagram, SiteMorphism,
};
use colimkit::Budget;
use common::*;

fn sites() -> Vec<Arc<Site>> {
    corpus::load("sites.site")
        .unwrap()
        .sites()
        .map(|(_, s)| s.clone())
        .collect()
}

fn site(name: &str) -> Arc<Site> {
    corpus::load("sites.site").unwrap().site(name).unwrap().clone()
}

fn site_diagrams() -> Vec<(String, SiteDiagram)> {
    ["covered_chain.site", "const_two.site", "point_diamond.site"]
        .iter()
        .flat_map(|f| {
            let ws = corpus::load(f).unwrap();
            ws.site_diagrams()
                .map(|(n, d)| (n.to_string(), d.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn site_diagram(name: &str) -> SiteDiagram {
    site_diagrams().into_iter().find(|(n, _)| n == name).unwrap().1
}

fn identity(c: &Arc<FinCat>) -> Functor {
    Functor {
        source: c.clone(),
        target: c.clone(),
        obj_map: c.objects().collect(),
        mor_map: c.arrow_ids().collect(),
    }
}

fn subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|m| (0..items.len()).filter(|i| m >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

#[test]
fn corpus_sites_validate() {
    for s in sites() {
        assert!(validate_site(&s, Budget::default()).unwrap().is_ok(), "{}", s.name);
    }
}

#[test]
fn uncovered_non_generators_are_reported() {
    let s = site("CoveredDiamond");
    let c = s.category.clone();
    let bot = c.object_id("bot").unwrap();
    let thin = Site::new("Thin", c.clone(), s.basis.clone(), [bot]).unwrap();
    let report = validate_site(&thin, Budget::default()).unwrap();
    assert!(report.violations.iter().any(|v| v.contains("`a`")), "{report:?}");
    assert!(report.violations.iter().any(|v| v.contains("`top`")), "{report:?}");
    assert!(!report.violations.iter().any(|v| v.contains("`bot`")), "{report:?}");

    let top = c.object_id("top").unwrap();
    let bad = Site::new(
        "Bad",
        c.clone(),
        vec![Cover::new(top, [c.arrow_id("bot<=a").unwrap()])],
        c.objects(),
    );
    assert!(bad.is_err());
}

#[test]
fn covering_agrees_with_oracle_on_every_family() {
    let mut checked = 0;
    for s in sites() {
        let c = &*s.category;
        for t in c.objects() {
            let into: Vec<MorId> = c.arrow_ids().filter(|&f| c.target(f) == t).collect();
            for family in subsets(&into) {
                assert_eq!(
                    is_covering(&s, t, &family),
                    naive_is_covering(&s, t, &family),
                    "{} {family:?}",
                    s.name
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 30, "{checked}");
}

#[test]
fn covering_agrees_with_oracle_on_mutated_bases() {
    let s = site("CoveredDiamond");
    let c = s.category.clone();
    let mut checked = 0;
    for t in c.objects() {
        let into: Vec<MorId> = c.arrow_ids().filter(|&f| c.target(f) == t).collect();
        for legs in subsets(&into).into_iter().filter(|l| !l.is_empty()) {
            let basis = vec![Cover::new(t, legs)];
            let m = Site::new("Mutant", c.clone(), basis, c.objects()).unwrap();
            for x in c.objects() {
                let into_x: Vec<MorId> = c.arrow_ids().filter(|&f| c.target(f) == x).collect();
                for family in subsets(&into_x) {
                    assert_eq!(is_covering(&m, x, &family), naive_is_covering(&m, x, &family));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn continuity_examples() {
    let covered = site("CoveredDiamond");
    let trivial = site("DiamondTrivial");
    let c = covered.category.clone();
    let mirror = corpus::load("basics.cat").unwrap().functor("Mirror").unwrap().clone();
    let top = corpus::load("basics.cat").unwrap().functor("Top").unwrap().clone();

    let m = |s: &Arc<Site>, t: &Arc<Site>, f: Functor| SiteMorphism::new(s.clone(), t.clone(), f).unwrap();
    assert!(check_continuous(&m(&covered, &covered, identity(&c))).holds());
    assert!(m(&covered, &covered, mirror.clone()).check().unwrap().holds());
    assert!(check_continuous(&m(&trivial, &covered, identity(&c))).holds());
    let forgetful = check_continuous(&m(&covered, &trivial, identity(&c)));
    assert!(
        forgetful.counterexample().unwrap().contains("does not cover"),
        "{forgetful:?}"
    );
    // constant at top sends every cover to a family containing the identity
    assert!(check_continuous(&m(&covered, &trivial, top.clone())).holds());
    assert!(check_continuous(&m(&covered, &covered, top)).holds());
}

#[test]
fn continuity_agrees_with_oracle_on_every_endofunctor() {
    let all = sites();
    let mut checked = 0;
    for s in &all {
        for t in &all {
            for (ob, mor) in naive_functors(&s.category, &t.category) {
                let f = Functor {
                    source: s.category.clone(),
                    target: t.category.clone(),
                    obj_map: ob,
                    mor_map: mor,
                };
                let expected = s.basis.iter().all(|k| {
                    let image: Vec<MorId> = k.legs.iter().map(|&l| f.mor_map[l]).collect();
                    naive_is_covering(t, f.obj_map[k.target], &image)
                });
                let m = SiteMorphism::new(s.clone(), t.clone(), f.clone()).unwrap();
                assert_eq!(check_continuous(&m).holds(), expected);
                assert_eq!(m.check().unwrap().holds(), naive_site_functor(&f, s, t));
                checked += 1;
            }
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn site_diagrams_validate() {
    for (name, d) in site_diagrams() {
        assert!(d.validate(Budget::default()).unwrap().is_ok(), "{name}");
    }
}

#[test]
fn colimit_site_is_generated_by_the_image_covers() {
    for (name, d) in site_diagrams() {
        let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
        let basis: BTreeSet<(ObjId, BTreeSet<MorId>)> =
            cs.site.basis.iter().map(|k| (k.target, k.legs.clone())).collect();
        assert_eq!(basis, image_covers(&d.sites, &cs.colim.lambda.legs), "{name}");
        let generators: BTreeSet<ObjId> = d
            .sites
            .iter()
            .zip(&cs.colim.lambda.legs)
            .flat_map(|(s, leg)| s.generators.iter().map(|&g| leg.obj_map[g]))
            .collect();
        assert_eq!(cs.site.generators, generators, "{name}");
        assert!(validate_site(&cs.site, Budget::default()).unwrap().is_ok(), "{name}");
        for (a, leg) in cs.legs.iter().enumerate() {
            assert!(leg.check().unwrap().holds(), "{name} leg {a}");
            assert!(
                naive_site_functor(&leg.functor, &d.sites[a], &cs.site),
                "{name} leg {a}"
            );
        }
    }
}

#[test]
fn trivial_fibers_give_the_trivial_topology() {
    let cs = build_colim_site(&site_diagram("ConstTwoSites"), ColimOptions::default()).unwrap();
    assert!(cs.site.basis.is_empty());
    assert_eq!(cs.site.generators.len(), cs.site.category.object_count());
}

#[test]
fn single_fiber_colimit_site_is_the_fiber() {
    let d = site_diagram("PointCovered");
    let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
    let fiber = &d.sites[0];
    let leg = &cs.colim.lambda.legs[0];
    assert_eq!(cs.site.category.object_count(), fiber.category.object_count());
    assert!(leg.is_full_inclusion());
    let mapped: Vec<Cover> = fiber
        .basis
        .iter()
        .filter(|k| !k.legs.iter().any(|&f| fiber.category.is_identity(f)))
        .map(|k| Cover::new(leg.ob(k.target), k.legs.iter().map(|&f| leg.mor(f))))
        .collect();
    assert_eq!(mapped.len(), 1);
    assert_eq!(cs.site.basis, mapped);
}

#[test]
fn every_generated_cover_is_needed_for_continuity() {
    for (name, d) in site_diagrams() {
        let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
        for drop in 0..cs.site.basis.len() {
            let mut basis = cs.site.basis.clone();
            basis.remove(drop);
            let weaker = Arc::new(
                Site::new(
                    "Weaker",
                    cs.site.category.clone(),
                    basis,
                    cs.site.generators.iter().copied(),
                )
                .unwrap(),
            );
            let broken = cs.legs.iter().any(|leg| {
                let m = SiteMorphism::new(leg.source.clone(), weaker.clone(), leg.functor.clone()).unwrap();
                !check_continuous(&m).holds()
            });
            assert!(broken, "{name}: cover {drop} is redundant");
        }
    }
}

/// Site functors `L → X` counted straight from the raw tables.
fn naive_site_functor_count(cs: &colimkit::sites::ColimSite, x: &Site) -> Option<usize> {
    let (l, xc) = (&cs.site.category, &x.category);
    let candidates = (xc.object_count() as f64).powi(l.object_count() as i32);
    if candidates > 1e5 {
        return None;
    }
    let count = naive_functors(l, xc)
        .into_iter()
        .filter(|(ob, mor)| {
            let f = Functor {
                source: l.clone(),
                target: xc.clone(),
                obj_map: ob.clone(),
                mor_map: mor.clone(),
            };
            naive_site_functor(&f, &cs.site, x)
        })
        .count();
    Some(count)
}

#[test]
fn site_pseudocolimit_is_exact_against_every_small_site() {
    let mut naive_checked = 0;
    for (name, d) in site_diagrams() {
        let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
        for x in sites() {
            assert!(x.category.object_count() <= 4);
            let start = Instant::now();
            let report = verify_site_pseudocolimit(&d, &cs, &x, Budget::default()).unwrap();
            assert!(report.is_isomorphism(), "{name} vs {}: {report:?}", x.name);
            assert!(start.elapsed().as_secs() < 60, "{name} vs {}", x.name);
            assert!(report.covers_checked >= report.comparison.functors);
            if let Some(n) = naive_site_functor_count(&cs, &x) {
                assert_eq!(report.comparison.functors, n, "{name} vs {}", x.name);
                naive_checked += 1;
            }
        }
    }
    assert!(naive_checked >= 8, "{naive_checked}");
}

#[test]
fn site_tallies_are_bounded_by_the_plain_comparison() {
    for (name, d) in site_diagrams() {
        if name == "CoveredChain" {
            continue;
        }
        let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
        for x in sites() {
            let site_report = verify_site_pseudocolimit(&d, &cs, &x, Budget::default())
                .unwrap()
                .comparison;
            let plain = verify_bicolimit(&cs.colim, &x.category, Budget::default()).unwrap();
            assert!(site_report.functors <= plain.functors, "{name} vs {}", x.name);
            assert!(site_report.cones <= plain.cones, "{name} vs {}", x.name);
            assert!(
                site_report.transformations <= plain.transformations,
                "{name} vs {}",
                x.name
            );
        }
    }
}

#[test]
fn covered_diamond_rules_out_functors_that_split_the_cover() {
    let d = site_diagram("PointCovered");
    let cs = build_colim_site(&d, ColimOptions::default()).unwrap();
    let covered = verify_site_pseudocolimit(&d, &cs, &site("CoveredDiamond"), Budget::default()).unwrap();
    let plain = verify_bicolimit(&cs.colim, &site("CoveredDiamond").category, Budget::default()).unwrap();
    // the identity and the mirror survive; the inclusion of a alone does not
    assert!(covered.comparison.functors >= 2);
    assert!(covered.comparison.functors < plain.functors);
}

fn ambients() -> Vec<colimkit::restriction::AmbientDiagram> {
    [
        ("diamond_chain.amb", "DiamondAmbient"),
        ("point_diamond.amb", "PointAmbient"),
        ("collapse_diamond.amb", "CollapseAmbient"),
    ]
    .iter()
    .map(|(f, n)| corpus::load(f).unwrap().ambient(n).unwrap().clone())
    .collect()
}

#[test]
fn restricted_cones_and_modifications_stay_valid() {
    let mut checked = 0;
    for amb in ambients() {
        let r = restrict_diagram(&amb).unwrap();
        for x in [vertex("Two"), vertex("One"), vertex("ChaoticPair")] {
            let cones = enumerate_pseudocones(&amb.diagram, &x, Budget::default()).unwrap();
            for h in cones.iter().take(12) {
                let rh = restrict_pseudocone(h, &r.diagram, &r.inclusions).unwrap();
                assert!(check_pseudocone(&rh).holds());
                assert!(naive_cone(&rh));
                for g in cones.iter().take(12) {
                    for phi in enumerate_modifications(g, h, Budget::default()).unwrap() {
                        let rphi = restrict_modification(&phi, &r.diagram, &r.inclusions).unwrap();
                        assert!(check_modification(&rphi).holds());
                        assert!(naive_modification(&rphi));
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn restricting_along_identities_changes_nothing() {
    for amb in ambients() {
        let all: Vec<BTreeSet<ObjId>> = amb.diagram.fibers.iter().map(|f| f.objects().collect()).collect();
        let (sub, inclusions) = restrict_to(&amb.diagram, &all).unwrap();
        for h in enumerate_pseudocones(&amb.diagram, &vertex("Two"), Budget::default()).unwrap() {
            let rh = restrict_pseudocone(&h, &sub, &inclusions).unwrap();
            let obs =
                |c: &colimkit::pseudocone::Pseudocone| c.legs.iter().map(|l| l.obj_map.clone()).collect::<Vec<_>>();
            assert_eq!(obs(&rh), obs(&h));
            assert_eq!(cone_components(&rh), cone_components(&h));
        }
    }
}

#[test]
fn mismatched_inclusions_are_rejected() {
    let amb = corpus::load("collapse_diamond.amb")
        .unwrap()
        .ambient("CollapseAmbient")
        .unwrap()
        .clone();
    let r = restrict_diagram(&amb).unwrap();
    assert!(r
        .subsets
        .iter()
        .zip(&amb.diagram.fibers)
        .any(|(s, f)| s.len() < f.object_count()));
    let h = enumerate_pseudocones(&amb.diagram, &vertex("Two"), Budget::default())
        .unwrap()
        .remove(0);
    let all: Vec<BTreeSet<ObjId>> = amb.diagram.fibers.iter().map(|f| f.objects().collect()).collect();
    let (_, identities) = restrict_to(&amb.diagram, &all).unwrap();
    assert!(restrict_pseudocone(&h, &r.diagram, &identities).is_err());
}

#[test]
fn presheaf_enumeration_matches_brute_force() {
    for name in ["One", "Two", "Diamond", "Z2", "ChaoticPair"] {
        let c = vertex(name);
        let max = if c.object_count() > 2 { 2 } else { 3 };
        let mine: BTreeSet<(Vec<usize>, Vec<Vec<usize>>)> = enumerate_presheaves(&c, max, Budget::default())
            .unwrap()
            .into_iter()
            .map(|p| (p.sets, p.maps))
            .collect();
        let naive: BTreeSet<(Vec<usize>, Vec<Vec<usize>>)> = naive_presheaves(&c, max).into_iter().collect();
        assert_eq!(mine, naive, "{name}");
    }
}

#[test]
fn trivial_topology_accepts_every_presheaf() {
    for s in sites().into_iter().filter(|s| s.basis.is_empty()) {
        for p in enumerate_presheaves(&s.category, 2, Budget::default()).unwrap() {
            assert!(check_sheaf(&p, &s, Budget::default()).unwrap().holds(), "{}", s.name);
        }
    }
}

#[test]
fn sheaf_check_agrees_with_amalgamation_oracle() {
    let s = site("CoveredDiamond");
    let (mut sheaves, mut total) = (0, 0);
    for p in enumerate_presheaves(&s.category, 2, Budget::default()).unwrap() {
        let verdict = check_sheaf(&p, &s, Budget::default()).unwrap();
        assert_eq!(verdict.holds(), naive_is_sheaf(&p, &s), "{p:?}");
        sheaves += usize::from(verdict.holds());
        total += 1;
    }
    assert!(sheaves > 0 && sheaves < total, "{sheaves}/{total}");
}

#[test]
fn named_presheaves() {
    let ws = corpus::load("presheaves.psh").unwrap();
    let s = site("CoveredDiamond");
    let rep = ws.presheaf("RepTop").unwrap();
    assert!(check_sheaf(rep, &s, Budget::default()).unwrap().holds());
    let no_glue = check_sheaf(ws.presheaf("NoGlue").unwrap(), &s, Budget::default()).unwrap();
    assert!(
        no_glue.counterexample().unwrap().contains("0 amalgamations"),
        "{no_glue:?}"
    );
    for x in s.category.objects() {
        let p = Presheaf::representable(&s.category, x);
        assert_eq!(
            check_sheaf(&p, &s, Budget::default()).unwrap().holds(),
            naive_is_sheaf(&p, &s)
        );
    }
}

#[test]
fn malformed_presheaves_are_rejected() {
    let c = vertex("Two");
    assert!(Presheaf::new(c.clone(), vec![1, 1], vec![vec![0], vec![0], vec![1]]).is_err());
    assert!(Presheaf::new(c.clone(), vec![1], vec![]).is_err());
    let p = Presheaf::representable(&c, 0);
    assert!(check_sheaf(&p, &site("DiamondTrivial"), Budget::default()).is_err());
}

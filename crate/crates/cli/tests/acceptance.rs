//! Acceptance suite: one line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use colimkit::bicolim::{
    build_pseudocolimit, colim_finite_limit, verify_bicolimit, verify_cone_exactness, ColimOptions,
};
use colimkit::cat::{check_exact, equivalence_witness, FiniteDiagram, Functor, NatTrans};
use colimkit::corpus;
use colimkit::pseudocone::{
    check_modification, check_pseudocone, conjugate, enumerate_modifications, enumerate_pseudocones, Pseudocone,
};
use colimkit::restriction::{restrict_diagram, verify_restriction, AmbientDiagram};
use colimkit::sites::{
    build_colim_site, check_continuous, check_sheaf, enumerate_presheaves, validate_site, verify_site_pseudocolimit,
    Site, SiteMorphism,
};
use colimkit::Budget;
use common::*;

const AC1_LIMIT: Duration = Duration::from_secs(10);
const AC3_LIMIT: Duration = Duration::from_secs(60);
const AC6_LIMIT: Duration = Duration::from_secs(60);
const MAX_ROUNDS: usize = 3;
const MAX_VALUE_SET: usize = 2;

type Outcome = Result<String, String>;

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Checkers against the naive equation evaluator.
fn ac1() -> Outcome {
    let start = Instant::now();
    let diagrams = filtered_diagrams();
    check(diagrams.len() >= 6, || format!("only {} diagrams", diagrams.len()))?;
    let mut cones: Vec<Pseudocone> = corpus_cones().into_iter().map(|(_, h)| h).collect();
    let named = cones.len();
    check(named >= 10, || format!("only {named} corpus cones"))?;
    for d in &diagrams {
        for x in ["One", "Two", "Z2"] {
            let found = enumerate_pseudocones(d, &vertex(x), Budget::default()).map_err(|e| e.to_string())?;
            cones.extend(found.into_iter().take(12));
        }
    }
    let (mut judged, mut disagreements) = (0usize, 0usize);
    for h in &cones {
        for k in std::iter::once(h.clone()).chain(mutations(h)) {
            judged += 1;
            disagreements += usize::from(check_pseudocone(&k).holds() != naive_cone(&k));
        }
    }
    let mut mods = 0usize;
    for d in &diagrams {
        let x = vertex("Two");
        let cs = enumerate_pseudocones(d, &x, Budget::default()).map_err(|e| e.to_string())?;
        let cs = &cs[..cs.len().min(6)];
        for g in cs {
            for h in cs {
                for phi in enumerate_modifications(g, h, Budget::default()).map_err(|e| e.to_string())? {
                    mods += 1;
                    disagreements += usize::from(check_modification(&phi).holds() != naive_modification(&phi));
                    for a in 0..phi.components.len() {
                        for y in 0..phi.components[a].components.len() {
                            for m in x.arrow_ids() {
                                let mut bad = phi.clone();
                                bad.components[a].components[y] = m;
                                mods += 1;
                                disagreements +=
                                    usize::from(check_modification(&bad).holds() != naive_modification(&bad));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(disagreements == 0, || format!("{disagreements} disagreements"))?;
    check(elapsed < AC1_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} diagrams, {named} corpus cones, {judged} cones and {mods} modifications judged, 0 disagreements, {:.2}s",
        diagrams.len(),
        elapsed.as_secs_f64()
    ))
}

/// Conjugation yields the unique coherence found by brute force.
fn ac2() -> Outcome {
    let (mut checked, mut identities) = (0usize, 0usize);
    for (name, g) in corpus_cones().into_iter().filter(|(_, g)| naive_cone(g)) {
        let d = &*g.diagram;
        let base = d.index.base();
        for phi in invertible_families(&g) {
            let (h, _) = conjugate(&g, &phi).map_err(|e| format!("{name}: {e}"))?;
            let comps: Vec<Vec<usize>> = phi.iter().map(|p| p.components.clone()).collect();
            let solutions: Vec<Vec<Vec<usize>>> = brute_coherences(d, &g.vertex, &h.legs)
                .into_iter()
                .filter(|coh| {
                    let candidate = Pseudocone {
                        coherence: base
                            .arrow_ids()
                            .map(|u| NatTrans {
                                source: h.legs[base.source(u)].clone(),
                                target: h.legs[base.target(u)].compose(d.transition(u)),
                                components: coh[u].clone(),
                            })
                            .collect(),
                        ..h.clone()
                    };
                    naive_modification_parts(&g, &candidate, &comps)
                })
                .collect();
            check(solutions.len() == 1, || {
                format!("{name}: brute force finds {} coherences", solutions.len())
            })?;
            check(solutions[0] == cone_components(&h), || {
                format!("{name}: conjugate differs from the unique coherence")
            })?;
            checked += 1;
        }
        let ids: Vec<NatTrans> = g.legs.iter().map(NatTrans::identity).collect();
        let (h, _) = conjugate(&g, &ids).map_err(|e| format!("{name}: {e}"))?;
        check(h == g, || format!("{name}: identity conjugation changes the cone"))?;
        identities += 1;
    }
    check(checked > 0, || "no families checked".to_string())?;
    Ok(format!(
        "{checked} invertible families unique, {identities} identity conjugations exact"
    ))
}

/// Isomorphism of categories for Chain3 diagrams against small vertices.
fn ac3() -> Outcome {
    let names = [
        ("const_two.diag", "ConstTwo"),
        ("incl_two.diag", "InclTwo"),
        ("collapse.diag", "Collapse"),
        ("swap_chain.diag", "SwapChain"),
    ];
    let mut slowest = Duration::ZERO;
    let mut instances = 0;
    for (file, name) in names {
        let d = diagram(file, name);
        check(d.index.name() == "Chain3", || format!("{name} is not over Chain3"))?;
        let r = build_pseudocolimit(&d, ColimOptions::default()).map_err(|e| e.to_string())?;
        for x in vertices() {
            check(x.object_count() <= 4, || format!("{} is too large", x.name()))?;
            let start = Instant::now();
            let rep =
                verify_bicolimit(&r, &x, Budget::default()).map_err(|e| format!("{name} vs {}: {e}", x.name()))?;
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            check(rep.is_isomorphism(), || format!("{name} vs {}: {rep:?}", x.name()))?;
            check(elapsed < AC3_LIMIT, || {
                format!("{name} vs {} took {elapsed:?}", x.name())
            })?;
            let naive = naive_functors(&r.colim, &x).len();
            check(rep.functors == naive, || {
                format!("{name} vs {}: {} functors, oracle {naive}", x.name(), rep.functors)
            })?;
            instances += 1;
        }
    }
    Ok(format!(
        "{instances} instances exact, functor tallies match the oracle, slowest {:.2}s",
        slowest.as_secs_f64()
    ))
}

/// Weakly terminal index with full inclusions collapses onto the top fiber.
fn ac4() -> Outcome {
    let mut checked = Vec::new();
    for d in filtered_diagrams() {
        let Some(t) = weakly_terminal(&d) else { continue };
        if !d.transitions.iter().all(Functor::is_full_inclusion) {
            continue;
        }
        let r = build_pseudocolimit(&d, ColimOptions::default()).map_err(|e| e.to_string())?;
        let w = equivalence_witness(&r.colim, d.fiber(t), Budget::default()).map_err(|e| e.to_string())?;
        let w = w
            .witness()
            .ok_or_else(|| format!("{}: no equivalence witness", d.name))?;
        check(w.first_violation().is_none(), || format!("{}: witness fails", d.name))?;
        checked.push(d.name.clone());
    }
    check(!checked.is_empty(), || "no degenerate diagrams".to_string())?;
    Ok(format!(
        "{} diagrams equivalent to their top fiber: {}",
        checked.len(),
        checked.join(", ")
    ))
}

/// Finite limits of the Diamond chain colimit.
fn ac5() -> Outcome {
    let d = diagram("diamond_chain.diag", "DiamondChain");
    let r = build_pseudocolimit(&d, ColimOptions::default()).map_err(|e| e.to_string())?;
    let l = &*r.colim;
    let t = colim_finite_limit(&r, &FiniteDiagram::empty()).map_err(|e| e.to_string())?;
    check(is_terminal(l, t.apex), || "terminal fails".to_string())?;
    let mut products = 0;
    for a in l.objects() {
        for b in l.objects() {
            let p = colim_finite_limit(&r, &FiniteDiagram::discrete(&[a, b])).map_err(|e| e.to_string())?;
            check(is_product(l, a, b, p.apex, p.legs[0], p.legs[1]), || {
                format!("product {a} x {b} fails")
            })?;
            products += 1;
        }
    }
    let mut equalizers = 0;
    for f in l.arrow_ids() {
        for &g in l.hom(l.source(f), l.target(f)) {
            let e = colim_finite_limit(&r, &FiniteDiagram::parallel_pair(l, f, g)).map_err(|e| e.to_string())?;
            check(is_equalizer(l, f, g, e.apex, e.legs[0]), || {
                format!("equalizer of {f}, {g} fails")
            })?;
            equalizers += 1;
        }
    }
    for (a, leg) in r.lambda.legs.iter().enumerate() {
        check(check_exact(leg).map_err(|e| e.to_string())?.holds(), || {
            format!("leg {a} is not exact")
        })?;
        check(naive_exact(leg), || format!("leg {a} fails the exactness oracle"))?;
    }
    check(
        verify_cone_exactness(&r, Budget::default())
            .map_err(|e| e.to_string())?
            .is_ok(),
        || "exactness report fails".to_string(),
    )?;
    Ok(format!(
        "terminal, {products} products, {equalizers} equalizers universal; {} legs exact",
        r.lambda.legs.len()
    ))
}

/// Colimit site of the covered Diamond chain.
fn ac6() -> Outcome {
    let ws = corpus::load("covered_chain.site").map_err(|e| e.to_string())?;
    let d = ws.site_diagram("CoveredChain").ok_or("no CoveredChain")?;
    let cs = build_colim_site(d, ColimOptions::default()).map_err(|e| e.to_string())?;
    let sites: Vec<Arc<Site>> = corpus::load("sites.site")
        .map_err(|e| e.to_string())?
        .sites()
        .map(|(_, s)| s.clone())
        .collect();
    let mut slowest = Duration::ZERO;
    for x in &sites {
        check(x.category.object_count() <= 4, || format!("{} is too large", x.name))?;
        let start = Instant::now();
        let rep = verify_site_pseudocolimit(d, &cs, x, Budget::default()).map_err(|e| format!("vs {}: {e}", x.name))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        check(rep.is_isomorphism(), || format!("vs {}: {rep:?}", x.name))?;
        check(elapsed < AC6_LIMIT, || format!("vs {} took {elapsed:?}", x.name))?;
    }
    let coverage = validate_site(&cs.site, Budget::default()).map_err(|e| e.to_string())?;
    check(coverage.is_ok(), || {
        format!("generators fail coverage: {:?}", coverage.violations)
    })?;
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
            .map_err(|e| e.to_string())?,
        );
        let broken = cs.legs.iter().any(|leg| {
            SiteMorphism::new(leg.source.clone(), weaker.clone(), leg.functor.clone())
                .map(|m| !check_continuous(&m).holds())
                .unwrap_or(false)
        });
        check(broken, || format!("deleting cover {drop} keeps every leg continuous"))?;
    }
    Ok(format!(
        "exact against {} sites (slowest {:.2}s), {} generators cover, all {} cover deletions break continuity",
        sites.len(),
        slowest.as_secs_f64(),
        cs.site.generators.len(),
        cs.site.basis.len()
    ))
}

/// Restriction fixpoints.
fn ac7() -> Outcome {
    let fixtures = [
        ("diamond_chain.amb", "DiamondAmbient"),
        ("point_diamond.amb", "PointAmbient"),
        ("collapse_diamond.amb", "CollapseAmbient"),
    ];
    let mut rounds = Vec::new();
    let mut monotone_pairs = 0;
    for (file, name) in fixtures {
        let amb = corpus::load(file)
            .map_err(|e| e.to_string())?
            .ambient(name)
            .ok_or(name)?
            .clone();
        let r = restrict_diagram(&amb).map_err(|e| e.to_string())?;
        check(r.rounds <= MAX_ROUNDS, || format!("{name}: {} rounds", r.rounds))?;
        let report = verify_restriction(&r);
        check(report.is_ok(), || format!("{name}: {:?}", report.violations))?;
        let again =
            restrict_diagram(&AmbientDiagram::new(amb.diagram.clone(), r.subsets.clone()).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        check(again.subsets == r.subsets, || format!("{name}: not idempotent"))?;
        for a in 0..amb.generators.len() {
            for x in amb.diagram.fiber(a).objects() {
                let mut bigger = amb.generators.clone();
                bigger[a].insert(x);
                let r2 =
                    restrict_diagram(&AmbientDiagram::new(amb.diagram.clone(), bigger).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                check(r.subsets.iter().zip(&r2.subsets).all(|(s, t)| s.is_subset(t)), || {
                    format!("{name}: not monotone")
                })?;
                monotone_pairs += 1;
            }
        }
        rounds.push(format!("{name} {}", r.rounds));
    }
    Ok(format!(
        "rounds: {}; idempotent; {monotone_pairs} monotone extensions",
        rounds.join(", ")
    ))
}

/// Sheaf checks against the trivial topology and the amalgamation oracle.
fn ac8() -> Outcome {
    let mut accepted = 0;
    let mut seen = BTreeSet::new();
    let mut categories = Vec::new();
    for (file, _) in corpus::FILES {
        for (name, c) in corpus::load(file).map_err(|e| e.to_string())?.categories() {
            if c.object_count() <= 4 && seen.insert(name.to_string()) {
                categories.push(c.clone());
            }
        }
    }
    let count = categories.len();
    for c in categories {
        let site = Site::trivial("Trivial", c.clone());
        for p in enumerate_presheaves(&c, MAX_VALUE_SET, Budget::default()).map_err(|e| e.to_string())? {
            check(
                check_sheaf(&p, &site, Budget::default())
                    .map_err(|e| e.to_string())?
                    .holds(),
                || format!("trivial topology on {} rejects a presheaf", c.name()),
            )?;
            accepted += 1;
        }
    }
    let covered = corpus::load("sites.site")
        .map_err(|e| e.to_string())?
        .site("CoveredDiamond")
        .ok_or("no site")?
        .clone();
    let (mut agreed, mut sheaves) = (0, 0);
    for p in enumerate_presheaves(&covered.category, MAX_VALUE_SET, Budget::default()).map_err(|e| e.to_string())? {
        let mine = check_sheaf(&p, &covered, Budget::default())
            .map_err(|e| e.to_string())?
            .holds();
        check(mine == naive_is_sheaf(&p, &covered), || {
            format!("disagreement on {:?}", p.sets)
        })?;
        agreed += 1;
        sheaves += usize::from(mine);
    }
    Ok(format!(
        "{accepted} presheaves on {count} categories accepted under trivial topologies; covered Diamond agrees on {agreed} ({sheaves} sheaves)"
    ))
}

fn cli_runs() -> Vec<Vec<&'static str>> {
    vec![
        vec!["validate", "one.cat"],
        vec!["validate", "cones.cone"],
        vec!["colim", "notfiltered.diag"],
        vec!["colim", "diamond_chain.diag", "--seed", "7"],
        vec!["site-colim", "covered_chain.site"],
        vec!["restrict", "collapse_diamond.amb"],
        vec!["verify-bicolim", "consttwo.diag", "--vertex", "two.cat"],
        vec!["verify-bicolim", "diamond_chain.diag", "--vertex", "z2.cat"],
        vec![
            "verify-site",
            "point_diamond.site",
            "--vertex",
            "sites.site",
            "--vertex-name",
            "CoveredDiamond",
        ],
        vec![
            "sheaf-check",
            "sites.site",
            "--name",
            "CoveredDiamond",
            "--presheaf",
            "presheaves.psh",
        ],
        vec!["sheaf-check", "sites.site", "--name", "CoveredDiamond"],
    ]
}

/// Byte-identical reports across repeated runs.
fn ac9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut codes = BTreeSet::new();
    let runs = cli_runs();
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let path = dir.path().join(format!("{i}-{round}.report"));
            let out = Command::new(env!("CARGO_BIN_EXE_colimkit"))
                .args(args)
                .arg("--report")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?;
            let file = std::fs::read(&path).map_err(|e| format!("{args:?}: {e}"))?;
            check(file == out.stdout, || {
                format!("{args:?}: report file differs from stdout")
            })?;
            outputs.push((out.status.code(), out.stdout));
        }
        check(outputs[0] == outputs[1], || {
            format!("{args:?}: reports differ between runs")
        })?;
        codes.insert(outputs[0].0.unwrap_or(-1));
    }
    let codes: Vec<String> = codes.iter().map(i32::to_string).collect();
    Ok(format!(
        "{} commands byte-identical twice, exit codes seen {{{}}}",
        runs.len(),
        codes.join(", ")
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 pseudocone and modification checkers", ac1),
        ("AC2 conjugation", ac2),
        ("AC3 pseudocolimit universal property", ac3),
        ("AC4 degenerate index", ac4),
        ("AC5 finite limits in the colimit", ac5),
        ("AC6 colimit site", ac6),
        ("AC7 restriction", ac7),
        ("AC8 sheaf checks", ac8),
        ("AC9 report determinism", ac9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use super::{factor_cone, Ctx, Pseudocolimit};
use crate::cat::{enumerate_functors, enumerate_nat_trans, FinCat, Functor, ObjId};
use crate::pseudocone::{
    check_modification, check_pseudocone, enumerate_modifications, enumerate_pseudocones, postcompose_cell,
    postcompose_cone, Modification, Pseudocone,
};
use crate::{Budget, Report, Result};

/// Comparison of `Functors(L, X)` with pseudocones over the diagram with
/// vertex `X`, along `t ↦ tλ` and `ξ ↦ ξλ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BicolimitReport {
    pub functors: usize,
    pub cones: usize,
    pub transformations: usize,
    pub modifications: usize,
    pub injective_on_objects: bool,
    pub surjective_on_objects: bool,
    pub essentially_surjective: bool,
    pub fully_faithful: bool,
    pub bijective_on_morphisms: bool,
    /// Cones `h` for which the factorization `ℓ` does not satisfy `ℓλ = h`.
    pub factorization_failures: usize,
    pub violations: Vec<String>,
}

impl BicolimitReport {
    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        self.injective_on_objects
            && self.surjective_on_objects
            && self.bijective_on_morphisms
            && self.factorization_failures == 0
            && self.violations.is_empty()
    }

    pub fn is_equivalence(&self) -> bool {
        self.essentially_surjective && self.fully_faithful && self.violations.is_empty()
    }
}

fn cone_key(h: &Pseudocone) -> Vec<usize> {
    let mut key = Vec::new();
    for l in &h.legs {
        key.extend(&l.obj_map);
        key.extend(&l.mor_map);
    }
    for c in &h.coherence {
        key.extend(&c.components);
    }
    key
}

fn modification_key(m: &Modification) -> Vec<usize> {
    m.components.iter().flat_map(|c| c.components.iter().copied()).collect()
}

/// Enumerates both sides against the vertex `x` and compares them.
pub fn verify_bicolimit(r: &Pseudocolimit, x: &Arc<FinCat>, budget: Budget) -> Result<BicolimitReport> {
    let functors = enumerate_functors(&r.colim, x, budget)?;
    let cones = enumerate_pseudocones(&r.diagram, x, budget)?;
    compare(r, &functors, &cones, budget)
}

/// Compares a family of functors out of `L` with a family of pseudocones
/// along `t ↦ tλ`. Both families must be closed under the comparison for
/// the tallies to be meaningful.
pub(crate) fn compare(
    r: &Pseudocolimit,
    functors: &[Functor],
    cones: &[Pseudocone],
    budget: Budget,
) -> Result<BicolimitReport> {
    let thin = cones
        .first()
        .map(|h| h.vertex.clone())
        .or_else(|| functors.first().map(|t| t.target.clone()))
        .is_some_and(|x| x.is_thin());
    compare_with(r, functors, cones, budget, thin)
}

fn compare_with(
    r: &Pseudocolimit,
    functors: &[Functor],
    cones: &[Pseudocone],
    budget: Budget,
    thin: bool,
) -> Result<BicolimitReport> {
    let (nf, nc) = (functors.len() as u64, cones.len() as u64);
    // a thin vertex needs no per-pair enumeration
    let pairs = if thin {
        nf.saturating_add(nc)
    } else {
        nf.saturating_mul(nf).saturating_add(nc.saturating_mul(nc))
    };
    budget.meter("comparing hom-categories").charge(pairs)?;
    let mut report = BicolimitReport {
        functors: functors.len(),
        cones: cones.len(),
        ..Default::default()
    };
    let cone_index: HashMap<Vec<usize>, usize> = cones.iter().enumerate().map(|(i, c)| (cone_key(c), i)).collect();
    let images: Vec<Pseudocone> = functors.iter().map(|t| postcompose_cone(&r.lambda, t)).collect();
    let mut image_of: Vec<Option<usize>> = Vec::with_capacity(images.len());
    for (t, img) in images.iter().enumerate() {
        if let Some(why) = check_pseudocone(img).counterexample() {
            report
                .violations
                .push(format!("image of functor {t} is not a pseudocone: {why}"));
        }
        let hit = cone_index.get(&cone_key(img)).copied();
        if hit.is_none() {
            report
                .violations
                .push(format!("image of functor {t} is missing from the cone enumeration"));
        }
        image_of.push(hit);
    }
    let hit: HashSet<usize> = image_of.iter().flatten().copied().collect();
    report.injective_on_objects = image_of.iter().all(Option::is_some) && hit.len() == functors.len();
    report.surjective_on_objects = hit.len() == cones.len();

    for h in cones {
        match factor_cone(r, h) {
            Ok(ell) if postcompose_cone(&r.lambda, &ell) == *h => {}
            _ => report.factorization_failures += 1,
        }
    }

    if thin {
        thin_morphisms(functors, cones, &image_of, &hit, &mut report);
        return Ok(report);
    }

    // modifications between every pair of cones
    let mods: Vec<Vec<Vec<Vec<usize>>>> = cones
        .par_iter()
        .map(|g| {
            cones
                .iter()
                .map(|h| {
                    Ok(enumerate_modifications(g, h, budget)?
                        .iter()
                        .map(modification_key)
                        .collect())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    report.modifications = mods.iter().flatten().map(Vec::len).sum();

    report.essentially_surjective = (0..cones.len()).all(|i| {
        hit.contains(&i)
            || hit.iter().any(|&j| {
                enumerate_modifications(&cones[i], &cones[j], budget)
                    .map(|ms| ms.iter().any(Modification::is_invertible))
                    .unwrap_or(false)
            })
    });

    // transformations between every pair of functors, mapped by ξ ↦ ξλ
    let per_source: Vec<(usize, bool, Vec<String>)> = (0..functors.len())
        .into_par_iter()
        .map(|s| {
            let mut count = 0;
            let mut bijective = true;
            let mut problems = Vec::new();
            for t in 0..functors.len() {
                let nts = enumerate_nat_trans(&functors[s], &functors[t], budget)?;
                count += nts.len();
                let keys: Vec<Vec<usize>> = nts
                    .iter()
                    .map(|xi| {
                        let m = postcompose_cell(&r.lambda, xi);
                        if let Some(why) = check_modification(&m).counterexample() {
                            problems.push(format!("image of a transformation is not a modification: {why}"));
                        }
                        modification_key(&m)
                    })
                    .collect();
                let distinct: HashSet<&Vec<usize>> = keys.iter().collect();
                let (Some(i), Some(j)) = (image_of[s], image_of[t]) else {
                    bijective = false;
                    continue;
                };
                let targets: HashSet<&Vec<usize>> = mods[i][j].iter().collect();
                if distinct.len() != keys.len() || distinct != targets {
                    bijective = false;
                }
            }
            Ok((count, bijective, problems))
        })
        .collect::<Result<_>>()?;
    report.fully_faithful = per_source.iter().all(|p| p.1);
    report.transformations = per_source.iter().map(|p| p.0).sum();
    for (_, _, problems) in per_source {
        report.violations.extend(problems);
    }
    report.bijective_on_morphisms =
        report.fully_faithful && report.injective_on_objects && report.surjective_on_objects;
    Ok(report)
}

/// Whether every component hom-set `s_i → t_i` is inhabited. In a thin
/// category this decides whether the unique candidate transformation or
/// modification exists: naturality and the modification equation hold
/// automatically.
fn inhabited(x: &FinCat, s: &[ObjId], t: &[ObjId]) -> bool {
    s.iter().zip(t).all(|(&a, &b)| !x.hom(a, b).is_empty())
}

/// Morphism part of the comparison for a thin vertex, where hom-sets of
/// both hom-categories have at most one element.
fn thin_morphisms(
    functors: &[Functor],
    cones: &[Pseudocone],
    image_of: &[Option<usize>],
    hit: &HashSet<usize>,
    report: &mut BicolimitReport,
) {
    let f_obs: Vec<&[ObjId]> = functors.iter().map(|t| t.obj_map.as_slice()).collect();
    let c_obs: Vec<Vec<ObjId>> = cones
        .iter()
        .map(|h| h.legs.iter().flat_map(|l| l.obj_map.iter().copied()).collect())
        .collect();
    let Some(x) = cones
        .first()
        .map(|h| h.vertex.clone())
        .or_else(|| functors.first().map(|t| t.target.clone()))
    else {
        report.fully_faithful = true;
        report.essentially_surjective = true;
        report.bijective_on_morphisms = report.injective_on_objects && report.surjective_on_objects;
        return;
    };
    let x = &*x;
    report.modifications = (0..cones.len())
        .into_par_iter()
        .map(|i| c_obs.iter().filter(|o| inhabited(x, &c_obs[i], o)).count())
        .sum();
    let per_source: Vec<(usize, bool)> = (0..functors.len())
        .into_par_iter()
        .map(|s| {
            let mut count = 0;
            let mut bijective = true;
            for t in 0..functors.len() {
                let exists = inhabited(x, f_obs[s], f_obs[t]);
                count += usize::from(exists);
                match (image_of[s], image_of[t]) {
                    (Some(i), Some(j)) => bijective &= exists == inhabited(x, &c_obs[i], &c_obs[j]),
                    _ => bijective = false,
                }
            }
            (count, bijective)
        })
        .collect();
    report.transformations = per_source.iter().map(|p| p.0).sum();
    report.fully_faithful = per_source.iter().all(|p| p.1);
    report.essentially_surjective = (0..cones.len()).all(|i| {
        hit.contains(&i)
            || hit
                .iter()
                .any(|&j| inhabited(x, &c_obs[i], &c_obs[j]) && inhabited(x, &c_obs[j], &c_obs[i]))
    });
    report.bijective_on_morphisms =
        report.fully_faithful && report.injective_on_objects && report.surjective_on_objects;
}

/// Checks that the generating relation on spans is already transitive on
/// every hom-set of the colimit.
pub fn check_span_transitivity(r: &Pseudocolimit, budget: Budget) -> Result<Report> {
    let ctx = Ctx::new(&r.diagram);
    let meter = budget.meter("checking span transitivity");
    let mut report = Report::default();
    for &p in &r.objects {
        for &q in &r.objects {
            let spans = ctx.all_spans(p, q);
            let n = spans.len();
            let mut rel = vec![false; n * n];
            for i in 0..n {
                for j in 0..n {
                    rel[i * n + j] = ctx.related(&spans[i], &spans[j], &meter)?;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if !rel[i * n + j] {
                        continue;
                    }
                    for k in 0..n {
                        if rel[j * n + k] && !rel[i * n + k] {
                            report.push(format!(
                                "`{}` ~ `{}` ~ `{}` but the outer pair is unrelated",
                                r.span_name(&spans[i]),
                                r.span_name(&spans[j]),
                                r.span_name(&spans[k])
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicolim::{build_pseudocolimit, ColimOptions};
    use crate::corpus;

    #[test]
    fn thin_shortcut_agrees_with_full_enumeration() {
        let basics = corpus::load("basics.cat").unwrap();
        let mut compared = 0;
        for (file, name) in corpus::FILTERED_DIAGRAMS {
            let d = corpus::load(file).unwrap().diagram(name).unwrap().clone();
            let r = build_pseudocolimit(&d, ColimOptions::default()).unwrap();
            if r.colim.object_count() > 8 {
                continue;
            }
            for (_, x) in basics.categories().filter(|(_, x)| x.is_thin()) {
                let functors = enumerate_functors(&r.colim, x, Budget::default()).unwrap();
                let cones = enumerate_pseudocones(&r.diagram, x, Budget::default()).unwrap();
                let fast = compare_with(&r, &functors, &cones, Budget::default(), true).unwrap();
                let full = compare_with(&r, &functors, &cones, Budget::default(), false).unwrap();
                assert_eq!(fast, full, "{name} vs {}", x.name());
                compared += 1;
            }
        }
        assert!(compared >= 20, "{compared}");
    }
}

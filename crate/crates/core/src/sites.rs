//! Finite sites with finite limits, the colimit site and a sheaf check.
//!
//! A topology is presented by a basis of covering families. Identity
//! singletons are implicit covers, and a family over `c` counts as covering
//! when some basis cover of `c` (or `{id_c}`) factors through it, leg by leg.
//! Continuity of a functor is tested against this refinement rule, so the
//! image of a basis cover need only be refined by a cover of the target.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bicolim::{build_pseudocolimit, compare, BicolimitReport, ColimOptions, Pseudocolimit};
use crate::budget::Meter;
use crate::cat::{
    check_exact_with, chosen_limit, enumerate_functors, FinCat, FiniteDiagram, Functor, MorId, NatTrans, ObjId,
};
use crate::pseudocone::{enumerate_pseudocones, Modification, Pseudocone};
use crate::twocat::TwoDiagram;
use crate::{Budget, Error, Report, Result, Verdict};

/// A covering family `{legs → target}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cover {
    pub target: ObjId,
    pub legs: BTreeSet<MorId>,
}

impl Cover {
    pub fn new(target: ObjId, legs: impl IntoIterator<Item = MorId>) -> Cover {
        Cover {
            target,
            legs: legs.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub name: String,
    /// Carries the chosen finite limits.
    pub category: Arc<FinCat>,
    pub basis: Vec<Cover>,
    pub generators: BTreeSet<ObjId>,
}

impl Site {
    /// Checks that every leg of every cover ends at the cover's target.
    pub fn new(
        name: &str,
        category: Arc<FinCat>,
        basis: Vec<Cover>,
        generators: impl IntoIterator<Item = ObjId>,
    ) -> Result<Site> {
        let c = &*category;
        for cover in &basis {
            if cover.target >= c.object_count() {
                return Err(Error::InvalidSite(format!(
                    "cover target {} is not an object",
                    cover.target
                )));
            }
            for &f in &cover.legs {
                if f >= c.arrow_count() || c.target(f) != cover.target {
                    return Err(Error::InvalidSite(format!(
                        "leg {f} of a cover of `{}` does not end there",
                        c.object_name(cover.target)
                    )));
                }
            }
        }
        let generators: BTreeSet<ObjId> = generators.into_iter().collect();
        if let Some(&g) = generators.iter().find(|&&g| g >= c.object_count()) {
            return Err(Error::InvalidSite(format!("generator {g} is not an object")));
        }
        let mut basis = basis;
        basis.sort();
        basis.dedup();
        Ok(Site {
            name: name.to_string(),
            category,
            basis,
            generators,
        })
    }

    /// No covers beyond the identities; every object is a generator.
    pub fn trivial(name: &str, category: Arc<FinCat>) -> Site {
        let generators = category.objects().collect();
        Site {
            name: name.to_string(),
            category,
            basis: Vec::new(),
            generators,
        }
    }

    pub fn covers_of(&self, c: ObjId) -> impl Iterator<Item = &Cover> {
        self.basis.iter().filter(move |k| k.target == c)
    }

    pub fn cover_name(&self, k: &Cover) -> String {
        let c = &*self.category;
        let legs: Vec<&str> = k.legs.iter().map(|&f| c.arrow_name(f)).collect();
        format!("{{{}}} → `{}`", legs.join(", "), c.object_name(k.target))
    }
}

/// Limit assignment present and valid, covers well typed, and every object
/// either a generator or covered by a basis family with generator sources.
pub fn validate_site(site: &Site, budget: Budget) -> Result<Report> {
    let c = &*site.category;
    let mut report = c.validate();
    if !report.is_ok() {
        return Ok(report);
    }
    match c.limits() {
        None => report.push("the category has no limit assignment"),
        Some(l) if !l.is_complete(c) => report.push("the limit assignment is not complete"),
        Some(l) => report.violations.extend(l.validate(c, budget)?.violations),
    }
    for k in &site.basis {
        if k.legs.iter().any(|&f| c.target(f) != k.target) {
            report.push(format!("cover {} is not a family into its target", site.cover_name(k)));
        }
    }
    for x in c.objects() {
        if site.generators.contains(&x) {
            continue;
        }
        let covered = site
            .covers_of(x)
            .any(|k| k.legs.iter().all(|&f| site.generators.contains(&c.source(f))));
        if !covered {
            report.push(format!(
                "`{}` is neither a generator nor covered by generators",
                c.object_name(x)
            ));
        }
    }
    Ok(report)
}

/// Whether `k` factors through some member of `family`.
fn factors_through(c: &FinCat, k: MorId, family: &[MorId]) -> bool {
    family
        .iter()
        .any(|&f| c.hom(c.source(k), c.source(f)).iter().any(|&g| c.compose(f, g) == k))
}

/// Whether `family`, a set of arrows into `target`, is covering: some basis
/// cover of `target`, or the identity, factors through it.
pub fn is_covering(site: &Site, target: ObjId, family: &[MorId]) -> bool {
    let c = &*site.category;
    if family.iter().any(|&f| c.target(f) != target) {
        return false;
    }
    factors_through(c, c.identity(target), family)
        || site
            .covers_of(target)
            .any(|k| k.legs.iter().all(|&l| factors_through(c, l, family)))
}

/// Exact, cover-preserving functor `f*` between the underlying categories.
/// As a morphism of sites it points from `target` to `source`.
#[derive(Clone, Debug)]
pub struct SiteMorphism {
    pub source: Arc<Site>,
    pub target: Arc<Site>,
    pub functor: Functor,
}

impl SiteMorphism {
    pub fn new(source: Arc<Site>, target: Arc<Site>, functor: Functor) -> Result<SiteMorphism> {
        if *functor.source != *source.category || *functor.target != *target.category {
            return Err(Error::InvalidSite(
                "functor does not run between the categories of the two sites".to_string(),
            ));
        }
        Ok(SiteMorphism {
            source,
            target,
            functor,
        })
    }

    /// Exactness followed by continuity.
    pub fn check(&self) -> Result<Verdict> {
        let (s, t) = (&*self.source.category, &*self.target.category);
        let missing = |c: &FinCat| Error::IncompleteAssignment(format!("{} has no limit assignment", c.name()));
        let exact = check_exact_with(
            &self.functor,
            s.limits().ok_or_else(|| missing(s))?,
            t.limits().ok_or_else(|| missing(t))?,
        )?;
        if !exact.holds() {
            return Ok(exact);
        }
        Ok(check_continuous(self))
    }
}

fn preserves_covers(f: &Functor, source: &Site, target: &Site) -> Option<String> {
    for k in &source.basis {
        let image: Vec<MorId> = k.legs.iter().map(|&l| f.mor(l)).collect();
        if !is_covering(target, f.ob(k.target), &image) {
            return Some(format!(
                "the image of cover {} does not cover `{}`",
                source.cover_name(k),
                target.category.object_name(f.ob(k.target))
            ));
        }
    }
    None
}

/// Every basis cover is sent to a covering family.
pub fn check_continuous(m: &SiteMorphism) -> Verdict {
    Verdict::from_first(preserves_covers(&m.functor, &m.source, &m.target))
}

/// A 2-diagram whose fibers carry site structure and whose transitions
/// are site morphisms.
#[derive(Clone, Debug)]
pub struct SiteDiagram {
    pub diagram: Arc<TwoDiagram>,
    pub sites: Vec<Arc<Site>>,
}

impl SiteDiagram {
    pub fn new(diagram: Arc<TwoDiagram>, sites: Vec<Arc<Site>>) -> Result<SiteDiagram> {
        let base = diagram.index.base();
        if sites.len() != base.object_count() {
            return Err(Error::InvalidSite(format!(
                "{} sites for {} index objects",
                sites.len(),
                base.object_count()
            )));
        }
        for a in base.objects() {
            if *sites[a].category != **diagram.fiber(a) {
                return Err(Error::InvalidSite(format!(
                    "site over `{}` is not on the fiber category",
                    base.object_name(a)
                )));
            }
        }
        Ok(SiteDiagram { diagram, sites })
    }

    pub fn transition(&self, u: MorId) -> SiteMorphism {
        let base = self.diagram.index.base();
        SiteMorphism {
            source: self.sites[base.source(u)].clone(),
            target: self.sites[base.target(u)].clone(),
            functor: self.diagram.transition(u).clone(),
        }
    }

    /// Fibers valid and transitions exact and continuous.
    pub fn validate(&self, budget: Budget) -> Result<Report> {
        let base = self.diagram.index.base();
        let mut report = Report::default();
        for a in base.objects() {
            for v in validate_site(&self.sites[a], budget)?.violations {
                report.push(format!("site over `{}`: {v}", base.object_name(a)));
            }
        }
        if !report.is_ok() {
            return Ok(report);
        }
        for u in base.arrow_ids() {
            if let Verdict::Fails(why) = self.transition(u).check()? {
                report.push(format!("transition `{}`: {why}", base.arrow_name(u)));
            }
        }
        Ok(report)
    }
}

/// The pseudocolimit equipped with the topology generated by the images of
/// the fiber covers.
#[derive(Clone, Debug)]
pub struct ColimSite {
    pub colim: Pseudocolimit,
    pub site: Arc<Site>,
    /// `λ_A` as site morphisms.
    pub legs: Vec<SiteMorphism>,
}

/// Basis: `λ_A c_α → λ_A c` for every fiber cover, omitting images that
/// contain an identity. Generators: `λ_A c` for every fiber generator `c`.
pub fn build_colim_site(d: &SiteDiagram, options: ColimOptions) -> Result<ColimSite> {
    let colim = build_pseudocolimit(&d.diagram, options)?;
    if colim.colim.limits().is_none() {
        return Err(Error::IncompleteAssignment(
            "the colimit has no limits: some fiber is incomplete or some transition is not exact".to_string(),
        ));
    }
    let base = d.diagram.index.base();
    let mut basis = Vec::new();
    let mut generators = BTreeSet::new();
    for a in base.objects() {
        let leg = &colim.lambda.legs[a];
        for k in &d.sites[a].basis {
            let image = Cover::new(leg.ob(k.target), k.legs.iter().map(|&f| leg.mor(f)));
            // covers containing an identity are implicit
            if !image.legs.iter().any(|&f| colim.colim.is_identity(f)) {
                basis.push(image);
            }
        }
        generators.extend(d.sites[a].generators.iter().map(|&c| leg.ob(c)));
    }
    let site = Arc::new(Site::new(colim.colim.name(), colim.colim.clone(), basis, generators)?);
    let legs = base
        .objects()
        .map(|a| SiteMorphism {
            source: d.sites[a].clone(),
            target: site.clone(),
            functor: colim.lambda.legs[a].clone(),
        })
        .collect();
    Ok(ColimSite { colim, site, legs })
}

/// Comparison of continuous exact functors `L → X` with pseudocones whose
/// legs are continuous and exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SiteBicolimitReport {
    pub comparison: BicolimitReport,
    /// Covering families checked while testing that functors preserving the
    /// generating covers preserve all covers.
    pub covers_checked: usize,
    pub cover_preservation_failures: Vec<String>,
}

impl SiteBicolimitReport {
    pub fn is_isomorphism(&self) -> bool {
        self.comparison.is_isomorphism() && self.cover_preservation_failures.is_empty()
    }
}

fn is_site_functor(f: &Functor, source: &Site, target: &Site) -> Result<bool> {
    let (s, t) = (&*source.category, &*target.category);
    let (Some(sl), Some(tl)) = (s.limits(), t.limits()) else {
        return Err(Error::IncompleteAssignment("site without limit assignment".to_string()));
    };
    Ok(check_exact_with(f, sl, tl)?.holds() && preserves_covers(f, source, target).is_none())
}

/// Every covering family of `site` is sent to a covering family of `x`.
/// Covering families are upward closed, so it suffices to try one arrow
/// through which each leg of a basis cover (or the identity) factors.
fn preserves_all_covers(f: &Functor, site: &Site, x: &Site, meter: &Meter) -> Result<(usize, Option<String>)> {
    let c = &*site.category;
    let mut checked = 0;
    for p in c.objects() {
        let identity = Cover::new(p, [c.identity(p)]);
        for k in std::iter::once(&identity).chain(site.covers_of(p)) {
            let options: Vec<Vec<MorId>> = k
                .legs
                .iter()
                .map(|&l| {
                    c.arrow_ids()
                        .filter(|&g| c.target(g) == p && factors_through(c, l, &[g]))
                        .collect()
                })
                .collect();
            let mut pos = vec![0usize; options.len()];
            loop {
                meter.tick()?;
                checked += 1;
                let family: Vec<MorId> = pos.iter().zip(&options).map(|(&i, o)| f.mor(o[i])).collect();
                if !is_covering(x, f.ob(p), &family) {
                    let names: Vec<&str> = pos.iter().zip(&options).map(|(&i, o)| c.arrow_name(o[i])).collect();
                    return Ok((
                        checked,
                        Some(format!(
                            "covering family {{{}}} of `{}` is not preserved",
                            names.join(", "),
                            c.object_name(p)
                        )),
                    ));
                }
                let mut i = 0;
                while i < pos.len() {
                    pos[i] += 1;
                    if pos[i] < options[i].len() {
                        break;
                    }
                    pos[i] = 0;
                    i += 1;
                }
                if i == pos.len() {
                    break;
                }
            }
        }
    }
    Ok((checked, None))
}

/// Enumerates both sides against the site `x` and compares them. Also
/// checks that each functor preserving the generating covers preserves
/// every covering family.
pub fn verify_site_pseudocolimit(
    d: &SiteDiagram,
    colim: &ColimSite,
    x: &Site,
    budget: Budget,
) -> Result<SiteBicolimitReport> {
    let r = &colim.colim;
    let xc = &x.category;
    let mut functors = Vec::new();
    for f in enumerate_functors(&r.colim, xc, budget)? {
        if is_site_functor(&f, &colim.site, x)? {
            functors.push(f);
        }
    }
    let base = d.diagram.index.base();
    let mut cones = Vec::new();
    'cones: for h in enumerate_pseudocones(&d.diagram, xc, budget)? {
        for a in base.objects() {
            if !is_site_functor(&h.legs[a], &d.sites[a], x)? {
                continue 'cones;
            }
        }
        cones.push(h);
    }
    let comparison = compare(r, &functors, &cones, budget)?;
    let meter = budget.meter("checking preservation of all covers");
    let mut report = SiteBicolimitReport {
        comparison,
        ..Default::default()
    };
    for (i, f) in functors.iter().enumerate() {
        let (n, failure) = preserves_all_covers(f, &colim.site, x, &meter)?;
        report.covers_checked += n;
        if let Some(why) = failure {
            report.cover_preservation_failures.push(format!("functor {i}: {why}"));
        }
    }
    Ok(report)
}

fn restricted_leg(h: &Pseudocone, sub: &Arc<TwoDiagram>, inclusions: &[Functor], a: ObjId) -> Functor {
    let leg = h.legs[a].compose(&inclusions[a]);
    Functor {
        source: sub.fiber(a).clone(),
        ..leg
    }
}

fn check_inclusions(ambient: &TwoDiagram, sub: &TwoDiagram, inclusions: &[Functor]) -> Result<()> {
    let base = ambient.index.base();
    for a in base.objects() {
        let i = &inclusions[a];
        if *i.target != **ambient.fiber(a) || *i.source != **sub.fiber(a) || !i.is_full_inclusion() {
            return Err(Error::ClosureViolation(format!(
                "inclusion over `{}` is not a full inclusion into the ambient fiber",
                base.object_name(a)
            )));
        }
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let outer = ambient.transition(u).compose(&inclusions[a]);
        let inner = inclusions[b].compose(sub.transition(u));
        if outer.obj_map != inner.obj_map || outer.mor_map != inner.mor_map {
            return Err(Error::ClosureViolation(format!(
                "transition `{}` does not restrict to the subcategories",
                base.arrow_name(u)
            )));
        }
    }
    Ok(())
}

/// Restricts a pseudocone over the ambient diagram along full inclusions
/// `i_A: C_A → E_A` that commute with the transitions: legs `h_A i_A`,
/// coherence `h_u i_A`.
pub fn restrict_pseudocone(h: &Pseudocone, sub: &Arc<TwoDiagram>, inclusions: &[Functor]) -> Result<Pseudocone> {
    check_inclusions(&h.diagram, sub, inclusions)?;
    let base = sub.index.base();
    let legs: Vec<Functor> = base.objects().map(|a| restricted_leg(h, sub, inclusions, a)).collect();
    let coherence = base
        .arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            let target = legs[b].compose(sub.transition(u));
            let components = sub
                .fiber(a)
                .objects()
                .map(|x| h.coherence[u].component(inclusions[a].ob(x)))
                .collect();
            NatTrans::new(legs[a].clone(), target, components)
        })
        .collect::<Result<_>>()
        .map_err(|e| Error::ClosureViolation(e.to_string()))?;
    Ok(Pseudocone {
        diagram: sub.clone(),
        vertex: h.vertex.clone(),
        legs,
        coherence,
    })
}

/// Restricts a modification componentwise: `φ_A i_A`.
pub fn restrict_modification(
    phi: &Modification,
    sub: &Arc<TwoDiagram>,
    inclusions: &[Functor],
) -> Result<Modification> {
    let source = restrict_pseudocone(&phi.source, sub, inclusions)?;
    let target = restrict_pseudocone(&phi.target, sub, inclusions)?;
    let components = sub
        .index
        .base()
        .objects()
        .map(|a| {
            let comps = sub
                .fiber(a)
                .objects()
                .map(|x| phi.components[a].component(inclusions[a].ob(x)))
                .collect();
            NatTrans::new(source.legs[a].clone(), target.legs[a].clone(), comps)
        })
        .collect::<Result<_>>()
        .map_err(|e| Error::ClosureViolation(e.to_string()))?;
    Ok(Modification {
        source,
        target,
        components,
    })
}

/// A finite presheaf: `P(x) = {0, .., sets[x] - 1}`, and for `f: a → b`
/// the function `maps[f]: P(b) → P(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub category: Arc<FinCat>,
    pub sets: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Checks that the maps are well typed and functorial.
    pub fn new(category: Arc<FinCat>, sets: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Presheaf> {
        let p = Presheaf { category, sets, maps };
        match p.first_violation() {
            None => Ok(p),
            Some(v) => Err(Error::InvalidPresheaf(v)),
        }
    }

    fn first_violation(&self) -> Option<String> {
        let c = &*self.category;
        if self.sets.len() != c.object_count() || self.maps.len() != c.arrow_count() {
            return Some("wrong number of sets or maps".to_string());
        }
        for f in c.arrow_ids() {
            let (a, b) = (c.source(f), c.target(f));
            let m = &self.maps[f];
            if m.len() != self.sets[b] || m.iter().any(|&s| s >= self.sets[a]) {
                return Some(format!(
                    "map of `{}` is not a function P(target) → P(source)",
                    c.arrow_name(f)
                ));
            }
            if c.is_identity(f) && m.iter().enumerate().any(|(s, &t)| s != t) {
                return Some(format!("identity `{}` is not sent to an identity", c.arrow_name(f)));
            }
        }
        for f in c.arrow_ids() {
            for g in c.arrow_ids() {
                if let Some(gf) = c.try_compose(g, f) {
                    if (0..self.sets[c.target(g)]).any(|s| self.maps[gf][s] != self.maps[f][self.maps[g][s]]) {
                        return Some(format!(
                            "P({} ∘ {}) differs from P({}) ∘ P({})",
                            c.arrow_name(g),
                            c.arrow_name(f),
                            c.arrow_name(f),
                            c.arrow_name(g)
                        ));
                    }
                }
            }
        }
        None
    }

    /// `hom(-, c)`, with elements numbered in hom-set order.
    pub fn representable(category: &Arc<FinCat>, c: ObjId) -> Presheaf {
        let cat = &**category;
        let sets = cat.objects().map(|x| cat.hom(x, c).len()).collect();
        let maps = cat
            .arrow_ids()
            .map(|f| {
                let (a, b) = (cat.source(f), cat.target(f));
                cat.hom(b, c)
                    .iter()
                    .map(|&g| {
                        let gf = cat.compose(g, f);
                        cat.hom(a, c)
                            .iter()
                            .position(|&h| h == gf)
                            .expect("composite lies in the hom-set")
                    })
                    .collect()
            })
            .collect();
        Presheaf {
            category: category.clone(),
            sets,
            maps,
        }
    }

    pub fn restrict(&self, f: MorId, s: usize) -> usize {
        self.maps[f][s]
    }
}

/// All presheaves with every value set of size at most `max`.
pub fn enumerate_presheaves(category: &Arc<FinCat>, max: usize, budget: Budget) -> Result<Vec<Presheaf>> {
    let c = &**category;
    let meter = budget.meter("enumerating presheaves");
    let n = c.object_count();
    let mut out = Vec::new();
    let mut sets = vec![0usize; n];
    loop {
        // functions for every non-identity arrow, odometer style
        let arrows: Vec<MorId> = c.arrow_ids().filter(|&f| !c.is_identity(f)).collect();
        let domains: Vec<usize> = arrows.iter().map(|&f| sets[c.target(f)]).collect();
        let codomains: Vec<usize> = arrows.iter().map(|&f| sets[c.source(f)]).collect();
        let inhabited = domains.iter().zip(&codomains).all(|(&d, &k)| d == 0 || k > 0);
        if inhabited {
            let mut funcs: Vec<Vec<usize>> = domains.iter().map(|&d| vec![0; d]).collect();
            loop {
                meter.tick()?;
                let mut maps: Vec<Vec<usize>> = c.arrow_ids().map(|f| (0..sets[c.target(f)]).collect()).collect();
                for (i, &f) in arrows.iter().enumerate() {
                    maps[f] = funcs[i].clone();
                }
                if let Ok(p) = Presheaf::new(category.clone(), sets.clone(), maps) {
                    out.push(p);
                }
                let mut advanced = false;
                'outer: for (i, func) in funcs.iter_mut().enumerate() {
                    for v in func.iter_mut() {
                        *v += 1;
                        if *v < codomains[i] {
                            advanced = true;
                            break 'outer;
                        }
                        *v = 0;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        let mut i = 0;
        while i < n {
            sets[i] += 1;
            if sets[i] <= max {
                break;
            }
            sets[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(out)
}

/// For every basis cover, every family that agrees on the chosen fiber
/// products of the legs has exactly one amalgamation.
pub fn check_sheaf(p: &Presheaf, site: &Site, budget: Budget) -> Result<Verdict> {
    let c = &*site.category;
    if *p.category != *c {
        return Err(Error::InvalidPresheaf(
            "presheaf is not on the site's category".to_string(),
        ));
    }
    let meter = budget.meter("checking the sheaf condition");
    for k in &site.basis {
        let legs: Vec<MorId> = k.legs.iter().copied().collect();
        let mut pullbacks = Vec::new();
        for &f in &legs {
            for &g in &legs {
                let cone = chosen_limit(c, &FiniteDiagram::cospan(c, f, g))?;
                pullbacks.push((f, g, cone.legs[0], cone.legs[1]));
            }
        }
        let sizes: Vec<usize> = legs.iter().map(|&f| p.sets[c.source(f)]).collect();
        if sizes.contains(&0) {
            // no families at all
            continue;
        }
        let mut family = vec![0usize; legs.len()];
        loop {
            meter.tick()?;
            let position = |f: MorId| legs.iter().position(|&l| l == f).expect("leg");
            let compatible = pullbacks
                .iter()
                .all(|&(f, g, pf, pg)| p.restrict(pf, family[position(f)]) == p.restrict(pg, family[position(g)]));
            if compatible {
                let count = (0..p.sets[k.target])
                    .filter(|&s| legs.iter().zip(&family).all(|(&f, &t)| p.restrict(f, s) == t))
                    .count();
                if count != 1 {
                    return Ok(Verdict::Fails(format!(
                        "a compatible family on cover {} has {count} amalgamations",
                        site.cover_name(k)
                    )));
                }
            }
            let mut i = 0;
            while i < family.len() {
                family[i] += 1;
                if family[i] < sizes[i] {
                    break;
                }
                family[i] = 0;
                i += 1;
            }
            if i == family.len() {
                break;
            }
        }
    }
    Ok(Verdict::Holds)
}

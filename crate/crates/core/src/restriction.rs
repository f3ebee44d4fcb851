//! Restriction of a diagram of finite complete categories to full
//! subcategories generated by chosen generator sets.
//!
//! Each generator set is closed under the chosen terminal, binary products
//! and equalizers, then pushed along every transition into the other
//! fibers, and the two steps alternate until nothing changes. Transitions
//! and 2-cells then restrict on the nose.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cat::{check_exact, EqualizerCone, FinCat, Functor, LimitAssignment, MorId, NatTrans, ObjId, ProductCone};
use crate::twocat::TwoDiagram;
use crate::{Budget, Error, Report, Result, Verdict};

/// A diagram of finite complete categories with exact transitions and a
/// generator set in each fiber.
#[derive(Clone, Debug)]
pub struct AmbientDiagram {
    pub diagram: Arc<TwoDiagram>,
    pub generators: Vec<BTreeSet<ObjId>>,
}

impl AmbientDiagram {
    pub fn new(diagram: Arc<TwoDiagram>, generators: Vec<BTreeSet<ObjId>>) -> Result<AmbientDiagram> {
        let base = diagram.index.base();
        if generators.len() != base.object_count() {
            return Err(Error::InvalidDiagram(format!(
                "{} generator sets for {} index objects",
                generators.len(),
                base.object_count()
            )));
        }
        for a in base.objects() {
            if generators[a].iter().any(|&x| x >= diagram.fiber(a).object_count()) {
                return Err(Error::InvalidDiagram(format!(
                    "generator over `{}` is not an object of the fiber",
                    base.object_name(a)
                )));
            }
        }
        Ok(AmbientDiagram { diagram, generators })
    }

    /// Generator sets nonempty, fibers with valid complete assignments and
    /// exact transitions.
    pub fn validate(&self, budget: Budget) -> Result<Report> {
        let d = &*self.diagram;
        let base = d.index.base();
        let mut report = Report::default();
        for a in base.objects() {
            let name = base.object_name(a);
            if self.generators[a].is_empty() {
                report.push(format!("generator set over `{name}` is empty"));
            }
            let fiber = &**d.fiber(a);
            match fiber.limits() {
                None => report.push(format!("fiber over `{name}` has no limit assignment")),
                Some(l) if !l.is_complete(fiber) => {
                    report.push(format!("fiber over `{name}` has an incomplete limit assignment"))
                }
                Some(l) => {
                    for v in l.validate(fiber, budget)?.violations {
                        report.push(format!("fiber over `{name}`: {v}"));
                    }
                }
            }
        }
        if !report.is_ok() {
            return Ok(report);
        }
        for u in base.arrow_ids() {
            if let Verdict::Fails(why) = check_exact(d.transition(u))? {
                report.push(format!("transition `{}` is not exact: {why}", base.arrow_name(u)));
            }
        }
        Ok(report)
    }
}

fn assignment(e: &FinCat) -> Result<&LimitAssignment> {
    match e.limits() {
        Some(l) if l.is_complete(e) => Ok(l),
        _ => Err(Error::IncompleteAssignment(format!(
            "{} has no complete limit assignment",
            e.name()
        ))),
    }
}

/// Least superset of `s` containing the chosen terminal and closed under
/// chosen binary products and chosen equalizers of arrows between members.
pub fn finite_limit_closure(e: &FinCat, s: &BTreeSet<ObjId>) -> Result<BTreeSet<ObjId>> {
    let lim = assignment(e)?;
    let mut closed = s.clone();
    closed.insert(lim.terminal.expect("complete"));
    loop {
        let mut next = closed.clone();
        for &a in &closed {
            for &b in &closed {
                next.insert(lim.products[&(a, b)].apex);
                for &f in e.hom(a, b) {
                    for &g in e.hom(a, b) {
                        next.insert(lim.equalizers[&(f, g)].apex);
                    }
                }
            }
        }
        if next == closed {
            return Ok(closed);
        }
        closed = next;
    }
}

/// Full subcategories `C_A` with their inclusions and the restricted
/// diagram.
#[derive(Clone, Debug)]
pub struct RestrictionResult {
    pub ambient: Arc<TwoDiagram>,
    pub generators: Vec<BTreeSet<ObjId>>,
    pub subsets: Vec<BTreeSet<ObjId>>,
    /// `i_A: C_A → E_A`.
    pub inclusions: Vec<Functor>,
    pub diagram: Arc<TwoDiagram>,
    /// Number of push-and-close steps until the sets stopped changing.
    pub rounds: usize,
}

/// Alternates closure under finite limits with pushing along transitions,
/// starting from the closures of the generator sets.
pub fn restrict_diagram(a: &AmbientDiagram) -> Result<RestrictionResult> {
    let d = &*a.diagram;
    let base = d.index.base();
    let mut current: Vec<BTreeSet<ObjId>> = base
        .objects()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| finite_limit_closure(d.fiber(x), &a.generators[x]))
        .collect::<Result<_>>()?;
    let mut rounds = 0;
    loop {
        let pushed: Vec<BTreeSet<ObjId>> = base
            .objects()
            .map(|t| {
                base.arrow_ids()
                    .filter(|&u| base.target(u) == t)
                    .flat_map(|u| current[base.source(u)].iter().map(move |&x| d.transition(u).ob(x)))
                    .collect()
            })
            .collect();
        let next: Vec<BTreeSet<ObjId>> = base
            .objects()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&x| finite_limit_closure(d.fiber(x), &pushed[x]))
            .collect::<Result<_>>()?;
        rounds += 1;
        if next == current {
            break;
        }
        current = next;
    }
    let (diagram, inclusions) = restrict_to(&a.diagram, &current)?;
    Ok(RestrictionResult {
        ambient: a.diagram.clone(),
        generators: a.generators.clone(),
        subsets: current,
        inclusions,
        diagram,
        rounds,
    })
}

/// Chosen limits of `e` whose vertices lie in the subcategory, rewritten
/// in the subcategory's numbering.
fn restricted_assignment(
    e: &FinCat,
    keep: &BTreeSet<ObjId>,
    sub: &FinCat,
    arrows: &[MorId],
) -> Option<LimitAssignment> {
    let lim = e.limits()?;
    let objs: Vec<ObjId> = keep.iter().copied().collect();
    let ob = |x: ObjId| objs.iter().position(|&o| o == x);
    let mor = |f: MorId| arrows.iter().position(|&g| g == f);
    let mut out = LimitAssignment {
        terminal: lim.terminal.and_then(ob),
        ..Default::default()
    };
    for (&(a, b), p) in &lim.products {
        if let (Some(a2), Some(b2), Some(apex), Some(left), Some(right)) =
            (ob(a), ob(b), ob(p.apex), mor(p.left), mor(p.right))
        {
            out.products.insert((a2, b2), ProductCone { apex, left, right });
        }
    }
    for (&(f, g), q) in &lim.equalizers {
        if let (Some(f2), Some(g2), Some(apex), Some(inclusion)) = (mor(f), mor(g), ob(q.apex), mor(q.inclusion)) {
            out.equalizers.insert((f2, g2), EqualizerCone { apex, inclusion });
        }
    }
    out.is_complete(sub).then_some(out)
}

/// Builds the sub-diagram on the given object sets. Fails with a closure
/// violation when some transition leaves the sets.
pub fn restrict_to(ambient: &Arc<TwoDiagram>, subsets: &[BTreeSet<ObjId>]) -> Result<(Arc<TwoDiagram>, Vec<Functor>)> {
    let d = &**ambient;
    let base = d.index.base();
    let mut fibers = Vec::new();
    let mut inclusions = Vec::new();
    for a in base.objects() {
        let e = &**d.fiber(a);
        let (sub, arrows) = e.full_subcategory(&format!("{}|C", e.name()), &subsets[a]);
        let sub = match restricted_assignment(e, &subsets[a], &sub, &arrows) {
            Some(l) => sub.with_limits(l),
            None => sub,
        };
        let sub = Arc::new(sub);
        let i = Functor::new(
            sub.clone(),
            d.fiber(a).clone(),
            subsets[a].iter().copied().collect(),
            arrows,
        )?;
        fibers.push(sub);
        inclusions.push(i);
    }
    let mut transitions = Vec::new();
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let t = d.transition(u);
        let lift_ob = |x: ObjId| {
            let y = t.ob(inclusions[a].ob(x));
            inclusions[b].obj_map.iter().position(|&z| z == y)
        };
        let lift_mor = |f: MorId| {
            let g = t.mor(inclusions[a].mor(f));
            inclusions[b].mor_map.iter().position(|&h| h == g)
        };
        let obj_map: Option<Vec<ObjId>> = fibers[a].objects().map(lift_ob).collect();
        let mor_map: Option<Vec<MorId>> = fibers[a].arrow_ids().map(lift_mor).collect();
        let (Some(obj_map), Some(mor_map)) = (obj_map, mor_map) else {
            return Err(Error::ClosureViolation(format!(
                "transition `{}` leaves the subcategory over `{}`",
                base.arrow_name(u),
                base.object_name(b)
            )));
        };
        transitions.push(Functor::new(fibers[a].clone(), fibers[b].clone(), obj_map, mor_map)?);
    }
    let mut cells = Vec::new();
    for c in d.index.cell_ids() {
        let cell = d.index.cell(c);
        let a = base.source(cell.source);
        let b = base.target(cell.source);
        let comps = fibers[a]
            .objects()
            .map(|x| {
                let f = d.cell(c).component(inclusions[a].ob(x));
                inclusions[b]
                    .mor_map
                    .iter()
                    .position(|&h| h == f)
                    .expect("full subcategory contains the component")
            })
            .collect();
        cells.push(NatTrans::new(
            transitions[cell.source].clone(),
            transitions[cell.target].clone(),
            comps,
        )?);
    }
    let restricted = TwoDiagram {
        name: format!("{}|C", d.name),
        index: d.index.clone(),
        fibers,
        transitions,
        cells,
        orientation: d.orientation,
    };
    Ok((Arc::new(restricted), inclusions))
}

/// Independent check of a restriction: generators contained, closure under
/// the ambient chosen limits, transitions preserve the sets, and the
/// restricted transitions and 2-cells agree with the ambient ones.
pub fn verify_restriction(r: &RestrictionResult) -> Report {
    let d = &*r.ambient;
    let base = d.index.base();
    let mut report = Report::default();
    for a in base.objects() {
        let e = &**d.fiber(a);
        let name = base.object_name(a);
        let c = &r.subsets[a];
        for &g in r.generators[a].difference(c) {
            report.push(format!("generator `{}` over `{name}` is missing", e.object_name(g)));
        }
        let Some(lim) = e.limits() else {
            report.push(format!("fiber over `{name}` has no limit assignment"));
            continue;
        };
        if let Some(t) = lim.terminal {
            if !c.contains(&t) {
                report.push(format!("terminal `{}` over `{name}` is missing", e.object_name(t)));
            }
        }
        for &x in c {
            for &y in c {
                if let Some(p) = lim.products.get(&(x, y)) {
                    if !c.contains(&p.apex) {
                        report.push(format!(
                            "product of `{}` and `{}` over `{name}` is missing",
                            e.object_name(x),
                            e.object_name(y)
                        ));
                    }
                }
                for &f in e.hom(x, y) {
                    for &g in e.hom(x, y) {
                        if let Some(q) = lim.equalizers.get(&(f, g)) {
                            if !c.contains(&q.apex) {
                                report.push(format!(
                                    "equalizer of `{}` and `{}` over `{name}` is missing",
                                    e.arrow_name(f),
                                    e.arrow_name(g)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        for &x in &r.subsets[a] {
            let y = d.transition(u).ob(x);
            if !r.subsets[b].contains(&y) {
                report.push(format!(
                    "transition `{}` sends `{}` outside the subcategory over `{}`",
                    base.arrow_name(u),
                    d.fiber(a).object_name(x),
                    base.object_name(b)
                ));
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    let sub = &*r.diagram;
    for a in base.objects() {
        let i = &r.inclusions[a];
        let typed = *i.source == **sub.fiber(a) && *i.target == **d.fiber(a);
        if !typed || !i.is_full_inclusion() || i.obj_map.iter().copied().collect::<BTreeSet<_>>() != r.subsets[a] {
            report.push(format!(
                "inclusion over `{}` is not the full inclusion of the subset",
                base.object_name(a)
            ));
        }
    }
    if !report.is_ok() {
        return report;
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let outer = d.transition(u).compose(&r.inclusions[a]);
        let inner = r.inclusions[b].compose(sub.transition(u));
        if outer.obj_map != inner.obj_map || outer.mor_map != inner.mor_map {
            report.push(format!(
                "square for transition `{}` does not commute",
                base.arrow_name(u)
            ));
        }
    }
    for c in d.index.cell_ids() {
        let cell = d.index.cell(c);
        let (a, b) = (base.source(cell.source), base.target(cell.source));
        for x in sub.fiber(a).objects() {
            let ambient = d.cell(c).component(r.inclusions[a].ob(x));
            let restricted = r.inclusions[b].mor(sub.cell(c).component(x));
            if ambient != restricted {
                report.push(format!(
                    "2-cell `{}` does not restrict at `{}`",
                    d.index.cell_name(c),
                    sub.fiber(a).object_name(x)
                ));
            }
        }
    }
    report
}

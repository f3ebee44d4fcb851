//! Chosen finite limits.
//!
//! A [`LimitAssignment`] records a terminal object, a product cone for every
//! ordered pair of objects and an equalizer for every parallel pair of
//! arrows. Limits of arbitrary finite diagrams are assembled from these by
//! the usual product-then-equalize reduction. Universal properties are
//! checked by enumerating every competing cone.

use std::collections::BTreeMap;

use super::{FinCat, Functor, MorId, ObjId};
use crate::budget::Meter;
use crate::{Budget, Error, Report, Result, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductCone {
    pub apex: ObjId,
    pub left: MorId,
    pub right: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EqualizerCone {
    pub apex: ObjId,
    pub inclusion: MorId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LimitAssignment {
    pub terminal: Option<ObjId>,
    pub products: BTreeMap<(ObjId, ObjId), ProductCone>,
    pub equalizers: BTreeMap<(MorId, MorId), EqualizerCone>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramArrow {
    pub from: usize,
    pub to: usize,
    pub arrow: MorId,
}

/// A finite diagram in a category: a list of objects and arrows between
/// list positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteDiagram {
    pub objects: Vec<ObjId>,
    pub arrows: Vec<DiagramArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

impl FiniteDiagram {
    pub fn empty() -> Self {
        FiniteDiagram::default()
    }

    pub fn discrete(objects: &[ObjId]) -> Self {
        FiniteDiagram {
            objects: objects.to_vec(),
            arrows: Vec::new(),
        }
    }

    pub fn parallel_pair(cat: &FinCat, f: MorId, g: MorId) -> Self {
        FiniteDiagram {
            objects: vec![cat.source(f), cat.target(f)],
            arrows: vec![
                DiagramArrow {
                    from: 0,
                    to: 1,
                    arrow: f,
                },
                DiagramArrow {
                    from: 0,
                    to: 1,
                    arrow: g,
                },
            ],
        }
    }

    /// `a --f--> c <--g-- b`; its limit is the pullback of `f` and `g`.
    pub fn cospan(cat: &FinCat, f: MorId, g: MorId) -> Self {
        FiniteDiagram {
            objects: vec![cat.source(f), cat.source(g), cat.target(f)],
            arrows: vec![
                DiagramArrow {
                    from: 0,
                    to: 2,
                    arrow: f,
                },
                DiagramArrow {
                    from: 1,
                    to: 2,
                    arrow: g,
                },
            ],
        }
    }

    pub fn is_cone(&self, cat: &FinCat, cone: &Cone) -> bool {
        cone.legs.len() == self.objects.len()
            && cone
                .legs
                .iter()
                .zip(&self.objects)
                .all(|(&l, &o)| cat.source(l) == cone.apex && cat.target(l) == o)
            && self
                .arrows
                .iter()
                .all(|e| cat.compose(e.arrow, cone.legs[e.from]) == cone.legs[e.to])
    }

    fn is_well_formed(&self, cat: &FinCat) -> bool {
        self.objects.iter().all(|&o| o < cat.object_count())
            && self.arrows.iter().all(|e| {
                e.from < self.objects.len()
                    && e.to < self.objects.len()
                    && cat.source(e.arrow) == self.objects[e.from]
                    && cat.target(e.arrow) == self.objects[e.to]
            })
    }
}

/// Every cone over `diagram`, ordered by apex then legs.
fn all_cones(cat: &FinCat, diagram: &FiniteDiagram, meter: &Meter) -> Result<Vec<Cone>> {
    let mut out = Vec::new();
    let k = diagram.objects.len();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, e) in diagram.arrows.iter().enumerate() {
        checks[e.from.max(e.to)].push(i);
    }
    for apex in cat.objects() {
        let mut legs = vec![0; k];
        #[allow(clippy::too_many_arguments)]
        fn go(
            i: usize,
            apex: ObjId,
            cat: &FinCat,
            diagram: &FiniteDiagram,
            checks: &[Vec<usize>],
            legs: &mut Vec<MorId>,
            meter: &Meter,
            out: &mut Vec<Cone>,
        ) -> Result<()> {
            if i == diagram.objects.len() {
                out.push(Cone {
                    apex,
                    legs: legs.clone(),
                });
                return Ok(());
            }
            for &l in cat.hom(apex, diagram.objects[i]) {
                meter.tick()?;
                legs[i] = l;
                let ok = checks[i].iter().all(|&a| {
                    let e = diagram.arrows[a];
                    cat.compose(e.arrow, legs[e.from]) == legs[e.to]
                });
                if ok {
                    go(i + 1, apex, cat, diagram, checks, legs, meter, out)?;
                }
            }
            Ok(())
        }
        go(0, apex, cat, diagram, &checks, &mut legs, meter, &mut out)?;
    }
    Ok(out)
}

/// Arrows `m: competitor.apex → limit.apex` with `limit.legs[i] ∘ m =
/// competitor.legs[i]` for every `i`.
fn mediators(cat: &FinCat, limit: &Cone, competitor: &Cone) -> Vec<MorId> {
    cat.hom(competitor.apex, limit.apex)
        .iter()
        .copied()
        .filter(|&m| {
            limit
                .legs
                .iter()
                .zip(&competitor.legs)
                .all(|(&l, &c)| cat.compose(l, m) == c)
        })
        .collect()
}

/// First mediating arrow from `competitor` to `limit`, if any.
pub fn mediating_morphism(cat: &FinCat, limit: &Cone, competitor: &Cone) -> Option<MorId> {
    mediators(cat, limit, competitor).first().copied()
}

/// Exhaustive universal-property check: `cone` is a cone over `diagram` and
/// every cone over `diagram` factors through it in exactly one way.
pub fn is_limiting_cone(cat: &FinCat, diagram: &FiniteDiagram, cone: &Cone, budget: Budget) -> Result<Verdict> {
    if !diagram.is_well_formed(cat) {
        return Ok(Verdict::Fails("diagram is ill-formed".to_string()));
    }
    if !diagram.is_cone(cat, cone) {
        return Ok(Verdict::Fails(format!(
            "legs out of `{}` do not form a cone",
            cat.object_name(cone.apex)
        )));
    }
    let meter = budget.meter("checking a universal property");
    for other in all_cones(cat, diagram, &meter)? {
        let n = mediators(cat, cone, &other).len();
        if n != 1 {
            return Ok(Verdict::Fails(format!(
                "cone with apex `{}` has {n} mediating arrows",
                cat.object_name(other.apex)
            )));
        }
    }
    Ok(Verdict::Holds)
}

/// The first limiting cone over `diagram` in (apex, legs) order.
fn search_limit(cat: &FinCat, diagram: &FiniteDiagram, meter: &Meter) -> Result<Option<Cone>> {
    let cones = all_cones(cat, diagram, meter)?;
    for candidate in &cones {
        let mut limiting = true;
        for other in &cones {
            meter.tick()?;
            if mediators(cat, candidate, other).len() != 1 {
                limiting = false;
                break;
            }
        }
        if limiting {
            return Ok(Some(candidate.clone()));
        }
    }
    Ok(None)
}

fn parallel_pairs(cat: &FinCat) -> impl Iterator<Item = (MorId, MorId)> + '_ {
    cat.arrow_ids()
        .flat_map(move |f| cat.hom(cat.source(f), cat.target(f)).iter().map(move |&g| (f, g)))
}

impl LimitAssignment {
    /// Chooses, for every required limit, the first limiting cone in
    /// (apex, legs) order. Limits that do not exist are left unassigned.
    pub fn choose(cat: &FinCat, budget: Budget) -> Result<LimitAssignment> {
        let meter = budget.meter("choosing limits");
        let mut out = LimitAssignment {
            terminal: search_limit(cat, &FiniteDiagram::empty(), &meter)?.map(|c| c.apex),
            ..Default::default()
        };
        for a in cat.objects() {
            for b in cat.objects() {
                if let Some(c) = search_limit(cat, &FiniteDiagram::discrete(&[a, b]), &meter)? {
                    out.products.insert(
                        (a, b),
                        ProductCone {
                            apex: c.apex,
                            left: c.legs[0],
                            right: c.legs[1],
                        },
                    );
                }
            }
        }
        for (f, g) in parallel_pairs(cat) {
            if let Some(c) = search_limit(cat, &FiniteDiagram::parallel_pair(cat, f, g), &meter)? {
                out.equalizers.insert(
                    (f, g),
                    EqualizerCone {
                        apex: c.apex,
                        inclusion: c.legs[0],
                    },
                );
            }
        }
        Ok(out)
    }

    /// Terminal, all binary products and all equalizers are assigned.
    pub fn is_complete(&self, cat: &FinCat) -> bool {
        self.terminal.is_some()
            && cat
                .objects()
                .all(|a| cat.objects().all(|b| self.products.contains_key(&(a, b))))
            && parallel_pairs(cat).all(|p| self.equalizers.contains_key(&p))
    }

    /// Checks every assigned cone against its universal property.
    pub fn validate(&self, cat: &FinCat, budget: Budget) -> Result<Report> {
        let mut report = Report::default();
        if let Some(t) = self.terminal {
            let cone = Cone {
                apex: t,
                legs: Vec::new(),
            };
            if let Verdict::Fails(why) = is_limiting_cone(cat, &FiniteDiagram::empty(), &cone, budget)? {
                report.push(format!("terminal `{}`: {why}", cat.object_name(t)));
            }
        }
        for (&(a, b), p) in &self.products {
            let cone = Cone {
                apex: p.apex,
                legs: vec![p.left, p.right],
            };
            let d = FiniteDiagram::discrete(&[a, b]);
            if let Verdict::Fails(why) = is_limiting_cone(cat, &d, &cone, budget)? {
                report.push(format!(
                    "product of `{}` and `{}`: {why}",
                    cat.object_name(a),
                    cat.object_name(b)
                ));
            }
        }
        for (&(f, g), e) in &self.equalizers {
            let d = FiniteDiagram::parallel_pair(cat, f, g);
            let legs = if cat.target(e.inclusion) == cat.source(f) && cat.source(e.inclusion) == e.apex {
                vec![e.inclusion, cat.compose(f, e.inclusion)]
            } else {
                report.push(format!(
                    "equalizer of `{}` and `{}` has a mistyped inclusion",
                    cat.arrow_name(f),
                    cat.arrow_name(g)
                ));
                continue;
            };
            let cone = Cone { apex: e.apex, legs };
            if let Verdict::Fails(why) = is_limiting_cone(cat, &d, &cone, budget)? {
                report.push(format!(
                    "equalizer of `{}` and `{}`: {why}",
                    cat.arrow_name(f),
                    cat.arrow_name(g)
                ));
            }
        }
        if !self.is_complete(cat) {
            report.push("assignment is not complete");
        }
        Ok(report)
    }
}

fn missing(what: String) -> Error {
    Error::IncompleteAssignment(what)
}

fn product_cone(cat: &FinCat, lim: &LimitAssignment, objs: &[ObjId]) -> Result<Cone> {
    match objs {
        [] => {
            let t = lim.terminal.ok_or_else(|| missing("terminal object".to_string()))?;
            Ok(Cone {
                apex: t,
                legs: Vec::new(),
            })
        }
        [first, rest @ ..] => {
            let mut acc = Cone {
                apex: *first,
                legs: vec![cat.identity(*first)],
            };
            for &b in rest {
                let p = lim.products.get(&(acc.apex, b)).ok_or_else(|| {
                    missing(format!(
                        "product of `{}` and `{}`",
                        cat.object_name(acc.apex),
                        cat.object_name(b)
                    ))
                })?;
                acc.legs = acc.legs.iter().map(|&l| cat.compose(l, p.left)).collect();
                acc.legs.push(p.right);
                acc.apex = p.apex;
            }
            Ok(acc)
        }
    }
}

fn pairing(cat: &FinCat, product: &Cone, from: ObjId, legs: Vec<MorId>) -> Result<MorId> {
    let competitor = Cone { apex: from, legs };
    mediating_morphism(cat, product, &competitor).ok_or_else(|| {
        missing(format!(
            "chosen product `{}` does not receive the pairing from `{}`",
            cat.object_name(product.apex),
            cat.object_name(from)
        ))
    })
}

/// Limit of `diagram` assembled from the category's own chosen limits.
pub fn chosen_limit(cat: &FinCat, diagram: &FiniteDiagram) -> Result<Cone> {
    let lim = cat
        .limits()
        .ok_or_else(|| missing(format!("{} has no limit assignment", cat.name())))?;
    chosen_limit_with(cat, lim, diagram)
}

/// Limit of `diagram` from the chosen terminal, binary products and
/// equalizers in `lim`.
///
/// Discrete diagrams use iterated products. A single arrow `a → b` has
/// limit `a`, and a parallel pair uses its chosen equalizer directly. Any
/// other shape is reduced to the equalizer of the two induced arrows
/// `∏ objects ⇉ ∏ arrow targets`.
pub fn chosen_limit_with(cat: &FinCat, lim: &LimitAssignment, diagram: &FiniteDiagram) -> Result<Cone> {
    if !diagram.is_well_formed(cat) {
        return Err(Error::InvalidDiagram("finite diagram is ill-formed".to_string()));
    }
    let objs = &diagram.objects;
    let arrows = &diagram.arrows;
    if arrows.is_empty() {
        return product_cone(cat, lim, objs);
    }
    if objs.len() == 2 && arrows.iter().all(|e| e.from == 0 && e.to == 1) {
        match arrows.as_slice() {
            [e] => {
                return Ok(Cone {
                    apex: objs[0],
                    legs: vec![cat.identity(objs[0]), e.arrow],
                })
            }
            [e1, e2] => {
                let eq = lim.equalizers.get(&(e1.arrow, e2.arrow)).ok_or_else(|| {
                    missing(format!(
                        "equalizer of `{}` and `{}`",
                        cat.arrow_name(e1.arrow),
                        cat.arrow_name(e2.arrow)
                    ))
                })?;
                return Ok(Cone {
                    apex: eq.apex,
                    legs: vec![eq.inclusion, cat.compose(e1.arrow, eq.inclusion)],
                });
            }
            _ => {}
        }
    }
    let p = product_cone(cat, lim, objs)?;
    let targets: Vec<ObjId> = arrows.iter().map(|e| objs[e.to]).collect();
    let q = product_cone(cat, lim, &targets)?;
    let s = pairing(
        cat,
        &q,
        p.apex,
        arrows.iter().map(|e| cat.compose(e.arrow, p.legs[e.from])).collect(),
    )?;
    let t = pairing(cat, &q, p.apex, arrows.iter().map(|e| p.legs[e.to]).collect())?;
    let eq = lim.equalizers.get(&(s, t)).ok_or_else(|| {
        missing(format!(
            "equalizer of `{}` and `{}`",
            cat.arrow_name(s),
            cat.arrow_name(t)
        ))
    })?;
    Ok(Cone {
        apex: eq.apex,
        legs: p.legs.iter().map(|&l| cat.compose(l, eq.inclusion)).collect(),
    })
}

/// Exactness against the limit assignments stored in the functor's source
/// and target categories.
pub fn check_exact(f: &Functor) -> Result<Verdict> {
    let src = f
        .source
        .limits()
        .ok_or_else(|| missing(format!("{} has no limit assignment", f.source.name())))?;
    let tgt = f
        .target
        .limits()
        .ok_or_else(|| missing(format!("{} has no limit assignment", f.target.name())))?;
    check_exact_with(f, src, tgt)
}

/// Does `f` send every chosen limit cone of its source to a limiting cone?
///
/// The image cone is compared with the target's chosen cone over the same
/// diagram: it is limiting exactly when the mediating arrow into the chosen
/// cone is an isomorphism. The target assignment is assumed valid.
pub fn check_exact_with(f: &Functor, src: &LimitAssignment, tgt: &LimitAssignment) -> Result<Verdict> {
    let (c, d) = (&*f.source, &*f.target);
    if !src.is_complete(c) {
        return Err(missing(format!("assignment on {} is not complete", c.name())));
    }
    if !tgt.is_complete(d) {
        return Err(missing(format!("assignment on {} is not complete", d.name())));
    }
    let preserved = |image: Cone, limit: Cone| mediating_morphism(d, &limit, &image).is_some_and(|m| d.is_iso(m));
    let t = src.terminal.expect("complete");
    let t_target = tgt.terminal.expect("complete");
    let image = Cone {
        apex: f.ob(t),
        legs: Vec::new(),
    };
    let limit = Cone {
        apex: t_target,
        legs: Vec::new(),
    };
    if !preserved(image, limit) {
        return Ok(Verdict::Fails(format!(
            "terminal `{}` is sent to `{}`, which is not terminal",
            c.object_name(t),
            d.object_name(f.ob(t))
        )));
    }
    for (&(a, b), p) in &src.products {
        let q = tgt.products[&(f.ob(a), f.ob(b))];
        let image = Cone {
            apex: f.ob(p.apex),
            legs: vec![f.mor(p.left), f.mor(p.right)],
        };
        let limit = Cone {
            apex: q.apex,
            legs: vec![q.left, q.right],
        };
        if !preserved(image, limit) {
            return Ok(Verdict::Fails(format!(
                "product of `{}` and `{}` is not preserved",
                c.object_name(a),
                c.object_name(b)
            )));
        }
    }
    for (&(g, h), e) in &src.equalizers {
        let q = tgt.equalizers[&(f.mor(g), f.mor(h))];
        let image = Cone {
            apex: f.ob(e.apex),
            legs: vec![f.mor(e.inclusion)],
        };
        let limit = Cone {
            apex: q.apex,
            legs: vec![q.inclusion],
        };
        if !preserved(image, limit) {
            return Ok(Verdict::Fails(format!(
                "equalizer of `{}` and `{}` is not preserved",
                c.arrow_name(g),
                c.arrow_name(h)
            )));
        }
    }
    Ok(Verdict::Holds)
}

use std::collections::BTreeMap;

use super::{Pseudocolimit, Span};
use crate::cat::{
    check_exact_with, chosen_limit, Cone, DiagramArrow, EqualizerCone, FiniteDiagram, LimitAssignment, MorId, ObjId,
    ProductCone,
};
use crate::{Budget, Error, Report, Result, Verdict};

/// A copy of a diagram in `L` inside the fiber over one index object.
struct Lift {
    apex: ObjId,
    /// `w_i: A_i → apex` for each diagram object.
    ways: Vec<MorId>,
    diagram: FiniteDiagram,
}

fn lift(r: &Pseudocolimit, diagram: &FiniteDiagram) -> Option<Lift> {
    let d = &*r.diagram;
    let base = d.index.base();
    let places: Vec<(ObjId, ObjId)> = diagram.objects.iter().map(|&o| r.objects[o]).collect();
    for c in base.objects() {
        let fc = d.fiber(c);
        let mut ways = vec![0; places.len()];
        // odometer over the choices of w_i
        let choices: Vec<&[MorId]> = places.iter().map(|&(a, _)| base.hom(a, c)).collect();
        if choices.iter().any(|h| h.is_empty()) {
            continue;
        }
        let mut pos = vec![0usize; places.len()];
        loop {
            for (i, &p) in pos.iter().enumerate() {
                ways[i] = choices[i][p];
            }
            let objects: Vec<ObjId> = places
                .iter()
                .zip(&ways)
                .map(|(&(_, x), &w)| d.transition(w).ob(x))
                .collect();
            let arrows: Option<Vec<DiagramArrow>> = diagram
                .arrows
                .iter()
                .map(|e| {
                    fc.hom(objects[e.from], objects[e.to])
                        .iter()
                        .copied()
                        .find(|&f| {
                            r.class_of(&Span {
                                source: places[e.from],
                                target: places[e.to],
                                apex: c,
                                left: ways[e.from],
                                right: ways[e.to],
                                arrow: f,
                            }) == Some(e.arrow)
                        })
                        .map(|f| DiagramArrow {
                            from: e.from,
                            to: e.to,
                            arrow: f,
                        })
                })
                .collect();
            if let Some(arrows) = arrows {
                return Some(Lift {
                    apex: c,
                    ways,
                    diagram: FiniteDiagram { objects, arrows },
                });
            }
            // advance
            let mut i = 0;
            loop {
                if i == pos.len() {
                    break;
                }
                pos[i] += 1;
                if pos[i] < choices[i].len() {
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
    None
}

/// Limit of a finite diagram in the colimit: the diagram is lifted to the
/// first fiber (in index order) that contains a copy of it, the chosen
/// limit is taken there and pushed forward along the cone.
pub fn colim_finite_limit(r: &Pseudocolimit, diagram: &FiniteDiagram) -> Result<Cone> {
    let l = lift(r, diagram).ok_or_else(|| {
        Error::NotLiftable(format!(
            "no fiber contains a copy of the {}-object diagram",
            diagram.objects.len()
        ))
    })?;
    let d = &*r.diagram;
    let base = d.index.base();
    let c = l.apex;
    let cone = chosen_limit(d.fiber(c), &l.diagram)?;
    let legs = diagram
        .objects
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let span = Span {
                source: (c, cone.apex),
                target: r.objects[o],
                apex: c,
                left: base.identity(c),
                right: l.ways[i],
                arrow: cone.legs[i],
            };
            r.class_of(&span).expect("every span has a class")
        })
        .collect();
    Ok(Cone {
        apex: r.object(c, cone.apex),
        legs,
    })
}

/// Chosen limits of the colimit category, all computed by
/// [`colim_finite_limit`].
pub(super) fn colim_assignment(r: &Pseudocolimit, budget: Budget) -> Result<LimitAssignment> {
    let meter = budget.meter("choosing limits in the colimit");
    let l = &*r.colim;
    let terminal = colim_finite_limit(r, &FiniteDiagram::empty())?.apex;
    let mut products = BTreeMap::new();
    for a in l.objects() {
        for b in l.objects() {
            meter.tick()?;
            let c = colim_finite_limit(r, &FiniteDiagram::discrete(&[a, b]))?;
            products.insert(
                (a, b),
                ProductCone {
                    apex: c.apex,
                    left: c.legs[0],
                    right: c.legs[1],
                },
            );
        }
    }
    let mut equalizers = BTreeMap::new();
    for f in l.arrow_ids() {
        for &g in l.hom(l.source(f), l.target(f)) {
            meter.tick()?;
            let c = colim_finite_limit(r, &FiniteDiagram::parallel_pair(l, f, g))?;
            equalizers.insert(
                (f, g),
                EqualizerCone {
                    apex: c.apex,
                    inclusion: c.legs[0],
                },
            );
        }
    }
    Ok(LimitAssignment {
        terminal: Some(terminal),
        products,
        equalizers,
    })
}

/// Exhaustively validates the colimit's limit assignment and checks that
/// every leg of the colimit cone is exact.
pub fn verify_cone_exactness(r: &Pseudocolimit, budget: Budget) -> Result<Report> {
    let d = &*r.diagram;
    let base = d.index.base();
    let l = &*r.colim;
    let target = l
        .limits()
        .ok_or_else(|| Error::IncompleteAssignment("the colimit has no limit assignment".to_string()))?;
    let mut report = Report::default();
    for v in target.validate(l, budget)?.violations {
        report.push(format!("colimit limits: {v}"));
    }
    for a in base.objects() {
        let leg = &r.lambda.legs[a];
        let source = d.fiber(a).limits().ok_or_else(|| {
            Error::IncompleteAssignment(format!("fiber over `{}` has no limit assignment", base.object_name(a)))
        })?;
        if let Verdict::Fails(why) = check_exact_with(leg, source, target)? {
            report.push(format!("leg at `{}`: {why}", base.object_name(a)));
        }
    }
    Ok(report)
}

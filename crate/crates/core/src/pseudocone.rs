//! Pseudocones over a 2-diagram, modifications between them, whiskering
//! and conjugation.
//!
//! A pseudocone with vertex `X` has a leg `h_A: FA → X` for each index
//! object and an invertible coherence `h_u: h_A ⇒ h_B ∘ Fu` for every
//! 1-cell `u: A → B`, subject to:
//!
//! - `h_{id_A}` is the identity of `h_A`;
//! - `(h_v Fu) ∘ h_u = h_{vu}` for composable `u, v`;
//! - `(h_B Fγ) ∘ h_s = h_t` for every 2-cell `γ: s ⇒ t` between 1-cells
//!   `A → B`.
//!
//! A modification `φ: g → h` has components `φ_A: g_A ⇒ h_A` with
//! `h_u ∘ φ_A = (φ_B Fu) ∘ g_u` for every 1-cell `u`.

use std::sync::Arc;

use crate::budget::Meter;
use crate::cat::{enumerate_functors, enumerate_nat_trans, FinCat, Functor, MorId, NatTrans, ObjId};
use crate::twocat::TwoDiagram;
use crate::{Budget, Error, Result, Verdict};

#[derive(Clone, Debug)]
pub struct Pseudocone {
    pub diagram: Arc<TwoDiagram>,
    pub vertex: Arc<FinCat>,
    /// `h_A` for each index object.
    pub legs: Vec<Functor>,
    /// `h_u` for each 1-cell, including identities.
    pub coherence: Vec<NatTrans>,
}

/// Cones are equal when their legs and coherence cells are.
impl PartialEq for Pseudocone {
    fn eq(&self, other: &Self) -> bool {
        self.legs == other.legs && self.coherence == other.coherence
    }
}

impl Eq for Pseudocone {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modification {
    pub source: Pseudocone,
    pub target: Pseudocone,
    /// `φ_A: g_A ⇒ h_A` for each index object.
    pub components: Vec<NatTrans>,
}

impl Pseudocone {
    /// Cone with strictly commuting triangles: every coherence cell is an
    /// identity. Fails if some triangle does not commute.
    pub fn strict(diagram: &Arc<TwoDiagram>, vertex: &Arc<FinCat>, legs: Vec<Functor>) -> Result<Pseudocone> {
        let base = diagram.index.base();
        let mut coherence = Vec::with_capacity(base.arrow_count());
        for u in base.arrow_ids() {
            let (a, b) = (base.source(u), base.target(u));
            let target = legs[b].compose(diagram.transition(u));
            if target != legs[a] {
                return Err(Error::IllFormedCone(format!(
                    "triangle at `{}` does not commute",
                    base.arrow_name(u)
                )));
            }
            coherence.push(NatTrans::identity(&legs[a]));
        }
        Ok(Pseudocone {
            diagram: diagram.clone(),
            vertex: vertex.clone(),
            legs,
            coherence,
        })
    }

    pub fn leg(&self, a: ObjId) -> &Functor {
        &self.legs[a]
    }

    /// `(h_u)_x`.
    pub fn coherence_at(&self, u: MorId, x: ObjId) -> MorId {
        self.coherence[u].component(x)
    }
}

impl Modification {
    pub fn identity(h: &Pseudocone) -> Modification {
        Modification {
            source: h.clone(),
            target: h.clone(),
            components: h.legs.iter().map(NatTrans::identity).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(NatTrans::is_identity)
    }

    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(NatTrans::is_invertible)
    }

    pub fn inverse(&self) -> Option<Modification> {
        Some(Modification {
            source: self.target.clone(),
            target: self.source.clone(),
            components: self
                .components
                .iter()
                .map(NatTrans::inverse)
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Checks leg shapes, naturality and invertibility of every coherence cell,
/// and the three coherence equations, reporting the first failure.
pub fn check_pseudocone(h: &Pseudocone) -> Verdict {
    Verdict::from_first(cone_violation(h))
}

fn cone_violation(h: &Pseudocone) -> Option<String> {
    let d = &*h.diagram;
    let idx = &*d.index;
    let base = &**idx.base();
    let x = &*h.vertex;
    if h.legs.len() != base.object_count() || h.coherence.len() != base.arrow_count() {
        return Some("wrong number of legs or coherence cells".to_string());
    }
    for a in base.objects() {
        let leg = &h.legs[a];
        if !same_cat(&leg.source, d.fiber(a)) || !same_cat(&leg.target, &h.vertex) {
            return Some(format!("leg at `{}` has the wrong endpoints", base.object_name(a)));
        }
        if let Some(v) = leg.first_violation() {
            return Some(format!("leg at `{}`: {v}", base.object_name(a)));
        }
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let c = &h.coherence[u];
        if c.source != h.legs[a] || c.target != h.legs[b].compose(d.transition(u)) {
            return Some(format!("coherence at `{}` has the wrong boundary", base.arrow_name(u)));
        }
        if let Some(v) = c.first_violation() {
            return Some(format!("coherence at `{}`: {v}", base.arrow_name(u)));
        }
        if !c.is_invertible() {
            return Some(format!("coherence at `{}` is not invertible", base.arrow_name(u)));
        }
    }
    for a in base.objects() {
        if !h.coherence[base.identity(a)].is_identity() {
            return Some(format!(
                "identity coherence fails: cell at `{}` is not an identity",
                base.arrow_name(base.identity(a))
            ));
        }
    }
    for u in base.arrow_ids() {
        for v in base.arrow_ids() {
            let Some(vu) = base.try_compose(v, u) else {
                continue;
            };
            let fu = d.transition(u);
            let ok = d
                .fiber(base.source(u))
                .objects()
                .all(|y| x.compose(h.coherence_at(v, fu.ob(y)), h.coherence_at(u, y)) == h.coherence_at(vu, y));
            if !ok {
                return Some(format!(
                    "composite coherence fails at `{}` after `{}`",
                    base.arrow_name(v),
                    base.arrow_name(u)
                ));
            }
        }
    }
    for g in idx.cell_ids() {
        let cell = idx.cell(g);
        let b = base.target(cell.source);
        let fg = d.cell(g);
        let ok = d.fiber(base.source(cell.source)).objects().all(|y| {
            x.compose(h.legs[b].mor(fg.component(y)), h.coherence_at(cell.source, y)) == h.coherence_at(cell.target, y)
        });
        if !ok {
            return Some(format!("2-cell coherence fails at `{}`", cell.name));
        }
    }
    None
}

/// Checks component shapes, naturality and the modification equation at
/// every 1-cell.
pub fn check_modification(phi: &Modification) -> Verdict {
    Verdict::from_first(modification_violation(phi))
}

fn modification_violation(phi: &Modification) -> Option<String> {
    let (g, h) = (&phi.source, &phi.target);
    let d = &*g.diagram;
    let base = &**d.index.base();
    let x = &*g.vertex;
    if !same_cat(&g.vertex, &h.vertex) {
        return Some("source and target cones have different vertices".to_string());
    }
    if phi.components.len() != base.object_count() {
        return Some("wrong number of components".to_string());
    }
    for a in base.objects() {
        let c = &phi.components[a];
        if c.source != g.legs[a] || c.target != h.legs[a] {
            return Some(format!("component at `{}` has the wrong boundary", base.object_name(a)));
        }
        if let Some(v) = c.first_violation() {
            return Some(format!("component at `{}`: {v}", base.object_name(a)));
        }
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let fu = d.transition(u);
        let ok = d.fiber(a).objects().all(|y| {
            x.compose(h.coherence_at(u, y), phi.components[a].component(y))
                == x.compose(phi.components[b].component(fu.ob(y)), g.coherence_at(u, y))
        });
        if !ok {
            return Some(format!("modification equation fails at `{}`", base.arrow_name(u)));
        }
    }
    None
}

/// `ψ ∘ φ`, componentwise.
pub fn compose_modifications(psi: &Modification, phi: &Modification) -> Result<Modification> {
    if phi.target != psi.source {
        return Err(Error::BoundaryMismatch(
            "the first modification does not end where the second starts".to_string(),
        ));
    }
    let components = psi
        .components
        .iter()
        .zip(&phi.components)
        .map(|(b, a)| b.vcompose(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(Modification {
        source: phi.source.clone(),
        target: psi.target.clone(),
        components,
    })
}

/// `s ∘ f`: legs `s f_A`, coherence cells `s f_u`.
pub fn postcompose_cone(f: &Pseudocone, s: &Functor) -> Pseudocone {
    Pseudocone {
        diagram: f.diagram.clone(),
        vertex: s.target.clone(),
        legs: f.legs.iter().map(|l| s.compose(l)).collect(),
        coherence: f.coherence.iter().map(|c| c.postcompose(s)).collect(),
    }
}

/// `ξ f: s f → t f` for a transformation `ξ: s ⇒ t`.
pub fn postcompose_cell(f: &Pseudocone, xi: &NatTrans) -> Modification {
    Modification {
        source: postcompose_cone(f, &xi.source),
        target: postcompose_cone(f, &xi.target),
        components: f.legs.iter().map(|l| xi.precompose(l)).collect(),
    }
}

/// Transports the structure of `g` along invertible `φ_A: g_A ⇒ h_A`,
/// where the new legs `h_A` are the targets of the `φ_A`:
/// `h_u = (φ_B Fu) ∘ g_u ∘ φ_A⁻¹`. Returns the new cone and `φ` as a
/// modification `g → h`.
pub fn conjugate(g: &Pseudocone, phi: &[NatTrans]) -> Result<(Pseudocone, Modification)> {
    let d = &*g.diagram;
    let base = &**d.index.base();
    let x = &*g.vertex;
    if phi.len() != base.object_count() {
        return Err(Error::BoundaryMismatch("wrong number of components".to_string()));
    }
    let mut inverses = Vec::with_capacity(phi.len());
    for a in base.objects() {
        if phi[a].source != g.legs[a] || !same_cat(&phi[a].target.target, &g.vertex) {
            return Err(Error::BoundaryMismatch(format!(
                "component at `{}` does not start at the leg",
                base.object_name(a)
            )));
        }
        inverses.push(
            phi[a]
                .inverse()
                .ok_or_else(|| Error::NonInvertibleComponent(format!("component at `{}`", base.object_name(a))))?,
        );
    }
    let legs: Vec<Functor> = phi.iter().map(|p| p.target.clone()).collect();
    let coherence = base
        .arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            let fu = d.transition(u);
            let components = d
                .fiber(a)
                .objects()
                .map(|y| {
                    let back = inverses[a].component(y);
                    x.compose(phi[b].component(fu.ob(y)), x.compose(g.coherence_at(u, y), back))
                })
                .collect();
            NatTrans {
                source: legs[a].clone(),
                target: legs[b].compose(fu),
                components,
            }
        })
        .collect();
    let h = Pseudocone {
        diagram: g.diagram.clone(),
        vertex: g.vertex.clone(),
        legs,
        coherence,
    };
    let m = Modification {
        source: g.clone(),
        target: h.clone(),
        components: phi.to_vec(),
    };
    Ok((h, m))
}

/// Candidate coherence cells per 1-cell for fixed legs: the invertible
/// transformations `h_A ⇒ h_B ∘ Fu`; identities only for identity 1-cells.
fn coherence_candidates(d: &TwoDiagram, legs: &[Functor], budget: Budget) -> Result<Vec<Vec<NatTrans>>> {
    let base = d.index.base();
    base.arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            if base.is_identity(u) {
                return Ok(vec![NatTrans::identity(&legs[a])]);
            }
            let target = legs[b].compose(d.transition(u));
            Ok(enumerate_nat_trans(&legs[a], &target, budget)?
                .into_iter()
                .filter(NatTrans::is_invertible)
                .collect())
        })
        .collect()
}

/// Every pseudocone structure on the given legs, in lexicographic order of
/// coherence choices.
pub fn enumerate_coherences(
    diagram: &Arc<TwoDiagram>,
    vertex: &Arc<FinCat>,
    legs: &[Functor],
    budget: Budget,
) -> Result<Vec<Pseudocone>> {
    let meter = budget.meter("enumerating coherence families");
    coherences_with(diagram, vertex, legs, budget, &meter)
}

fn coherences_with(
    diagram: &Arc<TwoDiagram>,
    vertex: &Arc<FinCat>,
    legs: &[Functor],
    budget: Budget,
    meter: &Meter,
) -> Result<Vec<Pseudocone>> {
    let d = &**diagram;
    let idx = &*d.index;
    let base = &**idx.base();
    let x = &**vertex;
    let candidates = coherence_candidates(d, legs, budget)?;
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    // equations are checked once every 1-cell they mention is chosen
    let m = base.arrow_count();
    let mut comp_checks: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); m];
    for u in base.arrow_ids() {
        for v in base.arrow_ids() {
            if let Some(vu) = base.try_compose(v, u) {
                comp_checks[u.max(v).max(vu)].push((u, v, vu));
            }
        }
    }
    let mut cell_checks: Vec<Vec<usize>> = vec![Vec::new(); m];
    for g in idx.cell_ids() {
        let c = idx.cell(g);
        cell_checks[c.source.max(c.target)].push(g);
    }
    let mut chosen: Vec<usize> = vec![0; m];
    let mut out = Vec::new();
    struct Ctx<'a> {
        d: &'a TwoDiagram,
        x: &'a FinCat,
        legs: &'a [Functor],
        candidates: &'a [Vec<NatTrans>],
        comp_checks: &'a [Vec<(MorId, MorId, MorId)>],
        cell_checks: &'a [Vec<usize>],
        meter: &'a Meter,
    }
    fn ok_at(ctx: &Ctx, chosen: &[usize], i: usize) -> bool {
        let d = ctx.d;
        let base = d.index.base();
        let cell = |u: MorId| &ctx.candidates[u][chosen[u]];
        let comp_ok = ctx.comp_checks[i].iter().all(|&(u, v, vu)| {
            let fu = d.transition(u);
            d.fiber(base.source(u))
                .objects()
                .all(|y| ctx.x.compose(cell(v).component(fu.ob(y)), cell(u).component(y)) == cell(vu).component(y))
        });
        comp_ok
            && ctx.cell_checks[i].iter().all(|&g| {
                let c = d.index.cell(g);
                let b = base.target(c.source);
                d.fiber(base.source(c.source)).objects().all(|y| {
                    ctx.x
                        .compose(ctx.legs[b].mor(d.cell(g).component(y)), cell(c.source).component(y))
                        == cell(c.target).component(y)
                })
            })
    }
    fn go(ctx: &Ctx, chosen: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
        if i == chosen.len() {
            out.push(chosen.clone());
            return Ok(());
        }
        for k in 0..ctx.candidates[i].len() {
            ctx.meter.tick()?;
            chosen[i] = k;
            if ok_at(ctx, chosen, i) {
                go(ctx, chosen, i + 1, out)?;
            }
        }
        Ok(())
    }
    let ctx = Ctx {
        d,
        x,
        legs,
        candidates: &candidates,
        comp_checks: &comp_checks,
        cell_checks: &cell_checks,
        meter,
    };
    go(&ctx, &mut chosen, 0, &mut out)?;
    Ok(out
        .into_iter()
        .map(|choice| Pseudocone {
            diagram: diagram.clone(),
            vertex: vertex.clone(),
            legs: legs.to_vec(),
            coherence: choice
                .iter()
                .enumerate()
                .map(|(u, &k)| candidates[u][k].clone())
                .collect(),
        })
        .collect())
}

/// Every pseudocone over `diagram` with vertex `vertex`: leg families in
/// lexicographic order, then coherence structures on each.
pub fn enumerate_pseudocones(
    diagram: &Arc<TwoDiagram>,
    vertex: &Arc<FinCat>,
    budget: Budget,
) -> Result<Vec<Pseudocone>> {
    let meter = budget.meter("enumerating pseudocones");
    let d = &**diagram;
    let base = d.index.base();
    let per_object: Vec<Vec<Functor>> = base
        .objects()
        .map(|a| enumerate_functors(d.fiber(a), vertex, budget))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut legs: Vec<Functor> = Vec::with_capacity(per_object.len());
    fn go(
        per_object: &[Vec<Functor>],
        legs: &mut Vec<Functor>,
        diagram: &Arc<TwoDiagram>,
        vertex: &Arc<FinCat>,
        budget: Budget,
        meter: &Meter,
        out: &mut Vec<Pseudocone>,
    ) -> Result<()> {
        let a = legs.len();
        if a == per_object.len() {
            out.extend(coherences_with(diagram, vertex, legs, budget, meter)?);
            return Ok(());
        }
        for leg in &per_object[a] {
            meter.tick()?;
            legs.push(leg.clone());
            go(per_object, legs, diagram, vertex, budget, meter, out)?;
            legs.pop();
        }
        Ok(())
    }
    go(&per_object, &mut legs, diagram, vertex, budget, &meter, &mut out)?;
    Ok(out)
}

/// Every modification `g → h`, in lexicographic order of components.
pub fn enumerate_modifications(g: &Pseudocone, h: &Pseudocone, budget: Budget) -> Result<Vec<Modification>> {
    let meter = budget.meter("enumerating modifications");
    let d = &*g.diagram;
    let base = &**d.index.base();
    let x = &*g.vertex;
    let candidates: Vec<Vec<NatTrans>> = base
        .objects()
        .map(|a| enumerate_nat_trans(&g.legs[a], &h.legs[a], budget))
        .collect::<Result<_>>()?;
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); base.object_count()];
    for u in base.arrow_ids() {
        checks[base.source(u).max(base.target(u))].push(u);
    }
    let mut chosen = vec![0; base.object_count()];
    let mut found = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        a: usize,
        chosen: &mut Vec<usize>,
        candidates: &[Vec<NatTrans>],
        checks: &[Vec<MorId>],
        g: &Pseudocone,
        h: &Pseudocone,
        x: &FinCat,
        meter: &Meter,
        found: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if a == chosen.len() {
            found.push(chosen.clone());
            return Ok(());
        }
        let d = &*g.diagram;
        let base = d.index.base();
        for k in 0..candidates[a].len() {
            meter.tick()?;
            chosen[a] = k;
            let ok = checks[a].iter().all(|&u| {
                let (s, t) = (base.source(u), base.target(u));
                let (ps, pt) = (&candidates[s][chosen[s]], &candidates[t][chosen[t]]);
                let fu = d.transition(u);
                d.fiber(s).objects().all(|y| {
                    x.compose(h.coherence_at(u, y), ps.component(y))
                        == x.compose(pt.component(fu.ob(y)), g.coherence_at(u, y))
                })
            });
            if ok {
                go(a + 1, chosen, candidates, checks, g, h, x, meter, found)?;
            }
        }
        Ok(())
    }
    go(0, &mut chosen, &candidates, &checks, g, h, x, &meter, &mut found)?;
    Ok(found
        .into_iter()
        .map(|choice| Modification {
            source: g.clone(),
            target: h.clone(),
            components: choice
                .iter()
                .enumerate()
                .map(|(a, &k)| candidates[a][k].clone())
                .collect(),
        })
        .collect())
}

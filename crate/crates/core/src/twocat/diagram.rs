use std::sync::Arc;

use super::{CellId, TwoCat};
use crate::cat::{FinCat, Functor, MorId, NatTrans, ObjId};
use crate::{Error, Result, Verdict};

/// Direction in which the user's data was given.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// `A → Cat`: a 1-cell `u: A → B` maps to a functor `FA → FB`.
    #[default]
    Covariant,
    /// `A^op → Cat`: a 1-cell `u: A → B` maps to a functor `u*: FB → FA`,
    /// and a 2-cell `γ: u ⇒ v` to a transformation `u* ⇒ v*`. Stored
    /// internally over the opposite index.
    Opposite,
}

/// A strict 2-functor from a finite index 2-category to categories,
/// always stored covariantly.
#[derive(Clone, Debug)]
pub struct TwoDiagram {
    pub name: String,
    pub index: Arc<TwoCat>,
    /// One category per index object.
    pub fibers: Vec<Arc<FinCat>>,
    /// One functor per 1-cell.
    pub transitions: Vec<Functor>,
    /// One transformation per 2-cell.
    pub cells: Vec<NatTrans>,
    pub orientation: Orientation,
}

impl TwoDiagram {
    /// Checked constructor. With [`Orientation::Opposite`], `index` is the
    /// index as the user wrote it and is replaced by its opposite.
    pub fn new(
        name: &str,
        index: Arc<TwoCat>,
        fibers: Vec<Arc<FinCat>>,
        transitions: Vec<Functor>,
        cells: Vec<NatTrans>,
        orientation: Orientation,
    ) -> Result<TwoDiagram> {
        let d = TwoDiagram::from_parts(name, index, fibers, transitions, cells, orientation);
        match check_two_functor(&d) {
            Verdict::Holds => Ok(d),
            Verdict::Fails(why) => Err(Error::InvalidDiagram(why)),
        }
    }

    /// Unchecked constructor, used to build deliberately broken diagrams.
    pub fn from_parts(
        name: &str,
        index: Arc<TwoCat>,
        fibers: Vec<Arc<FinCat>>,
        transitions: Vec<Functor>,
        cells: Vec<NatTrans>,
        orientation: Orientation,
    ) -> TwoDiagram {
        let index = match orientation {
            Orientation::Covariant => index,
            Orientation::Opposite => Arc::new(index.opposite_two_cat()),
        };
        TwoDiagram {
            name: name.to_string(),
            index,
            fibers,
            transitions,
            cells,
            orientation,
        }
    }

    /// Diagram over a locally discrete index given by its 1-cell images;
    /// unit 2-cells go to identity transformations.
    pub fn over_category(
        name: &str,
        index: Arc<TwoCat>,
        fibers: Vec<Arc<FinCat>>,
        transitions: Vec<Functor>,
    ) -> Result<TwoDiagram> {
        let cells = index
            .cell_ids()
            .map(|c| {
                let u = index.cell(c).source;
                transitions
                    .get(u)
                    .map(NatTrans::identity)
                    .ok_or_else(|| Error::InvalidDiagram("missing transition".to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        TwoDiagram::new(name, index, fibers, transitions, cells, Orientation::Covariant)
    }

    pub fn fiber(&self, a: ObjId) -> &Arc<FinCat> {
        &self.fibers[a]
    }

    pub fn transition(&self, u: MorId) -> &Functor {
        &self.transitions[u]
    }

    pub fn cell(&self, c: CellId) -> &NatTrans {
        &self.cells[c]
    }

    /// `(F(β*α))_x` computed from the images of `α` and `β`.
    fn godement(&self, b: CellId, a: CellId, x: ObjId) -> MorId {
        let idx = &*self.index;
        let (fa, fb) = (&self.cells[a], &self.cells[b]);
        let g = &self.transitions[idx.cell(b).source];
        let f2 = &self.transitions[idx.cell(a).target];
        let tgt = &*self.fibers[idx.base().target(idx.cell(b).source)];
        // β_{f' x} ∘ g(α_x)
        tgt.compose(fb.component(f2.ob(x)), g.mor(fa.component(x)))
    }
}

fn same(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Strict functoriality at all three levels: 1-cell images compose on the
/// nose, 2-cell images compose vertically and horizontally (Godement
/// product) and units go to identities.
pub fn check_two_functor(d: &TwoDiagram) -> Verdict {
    Verdict::from_first(first_violation(d))
}

fn first_violation(d: &TwoDiagram) -> Option<String> {
    let idx = &*d.index;
    let base = &**idx.base();
    if d.fibers.len() != base.object_count() {
        return Some(format!(
            "{} fibers for {} index objects",
            d.fibers.len(),
            base.object_count()
        ));
    }
    if d.transitions.len() != base.arrow_count() {
        return Some(format!(
            "{} transitions for {} 1-cells",
            d.transitions.len(),
            base.arrow_count()
        ));
    }
    if d.cells.len() != idx.cell_count() {
        return Some(format!(
            "{} 2-cell images for {} 2-cells",
            d.cells.len(),
            idx.cell_count()
        ));
    }
    for u in base.arrow_ids() {
        let f = &d.transitions[u];
        if !same(&f.source, &d.fibers[base.source(u)]) || !same(&f.target, &d.fibers[base.target(u)]) {
            return Some(format!("image of `{}` has the wrong fibers", base.arrow_name(u)));
        }
        if let Some(v) = f.first_violation() {
            return Some(format!("image of `{}`: {v}", base.arrow_name(u)));
        }
    }
    for a in base.objects() {
        let id = base.identity(a);
        if d.transitions[id] != Functor::identity(&d.fibers[a]) {
            return Some(format!("image of `{}` is not the identity", base.arrow_name(id)));
        }
    }
    for u in base.arrow_ids() {
        for v in base.arrow_ids() {
            if let Some(vu) = base.try_compose(v, u) {
                if d.transitions[v].compose(&d.transitions[u]) != d.transitions[vu] {
                    return Some(format!(
                        "composite `{} ∘ {}` is not preserved",
                        base.arrow_name(v),
                        base.arrow_name(u)
                    ));
                }
            }
        }
    }
    for c in idx.cell_ids() {
        let cell = idx.cell(c);
        let t = &d.cells[c];
        if t.source != d.transitions[cell.source] || t.target != d.transitions[cell.target] {
            return Some(format!("image of 2-cell `{}` has the wrong boundary", cell.name));
        }
        if let Some(v) = t.first_violation() {
            return Some(format!("image of 2-cell `{}`: {v}", cell.name));
        }
        if idx.is_unit(c) && !t.is_identity() {
            return Some(format!("unit 2-cell `{}` is not sent to an identity", cell.name));
        }
    }
    for a in idx.cell_ids() {
        for b in idx.cell_ids() {
            if let Some(ba) = idx.try_vcompose(b, a) {
                let composite = d.cells[b].vcompose(&d.cells[a]).expect("adjacent");
                if composite.components != d.cells[ba].components {
                    return Some(format!(
                        "vertical composite `{} ∘ {}` is not preserved",
                        idx.cell_name(b),
                        idx.cell_name(a)
                    ));
                }
            }
            if let Some(ba) = idx.try_hcompose(b, a) {
                let src = base.source(idx.cell(a).source);
                let ok = d.fibers[src]
                    .objects()
                    .all(|x| d.godement(b, a, x) == d.cells[ba].component(x));
                if !ok {
                    return Some(format!(
                        "horizontal composite `{} * {}` is not preserved",
                        idx.cell_name(b),
                        idx.cell_name(a)
                    ));
                }
            }
        }
    }
    None
}

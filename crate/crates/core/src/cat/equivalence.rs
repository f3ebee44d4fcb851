//! Searching for equivalences of finite categories.

use std::sync::Arc;

use super::{enumerate_functors, FinCat, Functor, MorId, NatTrans, ObjId};
use crate::{Budget, Result};

/// `forward: C → D`, `backward: D → C` with invertible
/// `unit: id_C ⇒ backward ∘ forward` and `counit: forward ∘ backward ⇒ id_D`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub forward: Functor,
    pub backward: Functor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

#[derive(Clone, Debug)]
pub enum EquivalenceSearch {
    Found(Box<EquivalenceWitness>),
    /// Every candidate functor was examined; the categories are not
    /// equivalent.
    Exhausted,
}

impl EquivalenceSearch {
    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            EquivalenceSearch::Found(w) => Some(w),
            EquivalenceSearch::Exhausted => None,
        }
    }
}

impl EquivalenceWitness {
    /// Re-checks functoriality, naturality and invertibility of every part.
    pub fn first_violation(&self) -> Option<String> {
        for f in [&self.forward, &self.backward] {
            if let Some(v) = f.first_violation() {
                return Some(v);
            }
        }
        let c = &self.forward.source;
        let d = &self.forward.target;
        let gf = self.backward.compose(&self.forward);
        let fg = self.forward.compose(&self.backward);
        if self.unit.source != Functor::identity(c) || self.unit.target != gf {
            return Some("unit has the wrong boundary".to_string());
        }
        if self.counit.source != fg || self.counit.target != Functor::identity(d) {
            return Some("counit has the wrong boundary".to_string());
        }
        for t in [&self.unit, &self.counit] {
            if let Some(v) = t.first_violation() {
                return Some(v);
            }
            if !t.is_invertible() {
                return Some("a component is not invertible".to_string());
            }
        }
        None
    }
}

fn iso_class_count(c: &FinCat) -> usize {
    let mut reps: Vec<ObjId> = Vec::new();
    for x in c.objects() {
        let known = reps.iter().any(|&r| c.hom(r, x).iter().any(|&m| c.is_iso(m)));
        if !known {
            reps.push(x);
        }
    }
    reps.len()
}

/// Pseudo-inverse of a full, faithful, essentially surjective `f: A → B`,
/// with `unit: id_A ⇒ g∘f` and `counit: f∘g ⇒ id_B`.
fn pseudo_inverse(f: &Functor) -> Option<(Functor, NatTrans, NatTrans)> {
    let (a, b) = (&f.source, &f.target);
    // for each y, the first x with an iso eps_y: f x → y
    let mut g_obj = Vec::with_capacity(b.object_count());
    let mut eps = Vec::with_capacity(b.object_count());
    for y in b.objects() {
        let (x, m) = a
            .objects()
            .find_map(|x| b.hom(f.ob(x), y).iter().copied().find(|&m| b.is_iso(m)).map(|m| (x, m)))?;
        g_obj.push(x);
        eps.push(m);
    }
    let preimage = |s: ObjId, t: ObjId, target: MorId| -> Option<MorId> {
        a.hom(s, t).iter().copied().find(|&h| f.mor(h) == target)
    };
    let mut g_mor = Vec::with_capacity(b.arrow_count());
    for m in b.arrow_ids() {
        let (y, y2) = (b.source(m), b.target(m));
        let conj = b.compose(b.inverse(eps[y2])?, b.compose(m, eps[y]));
        g_mor.push(preimage(g_obj[y], g_obj[y2], conj)?);
    }
    let g = Functor::new(b.clone(), a.clone(), g_obj, g_mor).ok()?;
    let counit = NatTrans::new(f.compose(&g), Functor::identity(b), eps.clone()).ok()?;
    let mut unit = Vec::with_capacity(a.object_count());
    for x in a.objects() {
        let fx = f.ob(x);
        unit.push(preimage(x, g.ob(fx), b.inverse(eps[fx])?)?);
    }
    let unit = NatTrans::new(Functor::identity(a), g.compose(f), unit).ok()?;
    Some((g, unit, counit))
}

/// Searches for an equivalence `C ≃ D`.
///
/// Functors are enumerated out of whichever category has fewer objects;
/// the first full, faithful and essentially surjective one is completed to
/// a witness. Categories with different numbers of isomorphism classes are
/// rejected without search.
pub fn equivalence_witness(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: Budget) -> Result<EquivalenceSearch> {
    if iso_class_count(c) != iso_class_count(d) {
        return Ok(EquivalenceSearch::Exhausted);
    }
    let flipped = d.object_count() < c.object_count();
    let (from, to) = if flipped { (d, c) } else { (c, d) };
    for f in enumerate_functors(from, to, budget)? {
        if !(f.is_faithful() && f.is_full() && f.is_essentially_surjective()) {
            continue;
        }
        let Some((g, unit, counit)) = pseudo_inverse(&f) else {
            continue;
        };
        let witness = if flipped {
            EquivalenceWitness {
                forward: g,
                backward: f,
                unit: counit.inverse().expect("invertible"),
                counit: unit.inverse().expect("invertible"),
            }
        } else {
            EquivalenceWitness {
                forward: f,
                backward: g,
                unit,
                counit,
            }
        };
        return Ok(EquivalenceSearch::Found(Box::new(witness)));
    }
    Ok(EquivalenceSearch::Exhausted)
}

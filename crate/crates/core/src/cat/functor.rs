use std::fmt;
use std::sync::Arc;

use super::{FinCat, MorId, ObjId};
use crate::{Error, Result};

/// A functor between finite categories, stored as object and arrow maps.
#[derive(Clone)]
pub struct Functor {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && same_cat(&self.source, &other.source)
            && same_cat(&self.target, &other.target)
    }
}

impl Eq for Functor {}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: Vec<String> = self
            .obj_map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.source.object_name(x), self.target.object_name(y)))
            .collect();
        write!(
            f,
            "Functor({} → {}: {})",
            self.source.name(),
            self.target.name(),
            objs.join(", ")
        )
    }
}

impl Functor {
    /// Checked constructor.
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, obj_map: Vec<ObjId>, mor_map: Vec<MorId>) -> Result<Functor> {
        let f = Functor {
            source,
            target,
            obj_map,
            mor_map,
        };
        match f.first_violation() {
            None => Ok(f),
            Some(v) => Err(Error::InvalidFunctor(v)),
        }
    }

    /// Builds a functor from its object map and the images of all
    /// non-identity arrows; identities are mapped to identities.
    pub fn from_maps(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        arrow_images: impl Fn(MorId) -> MorId,
    ) -> Result<Functor> {
        if obj_map.len() != source.object_count() {
            return Err(Error::InvalidFunctor(format!(
                "object map has {} entries, {} has {} objects",
                obj_map.len(),
                source.name(),
                source.object_count()
            )));
        }
        let mor_map = source
            .arrow_ids()
            .map(|f| {
                if source.is_identity(f) {
                    target.identity(obj_map[source.source(f)])
                } else {
                    arrow_images(f)
                }
            })
            .collect();
        Functor::new(source, target, obj_map, mor_map)
    }

    pub fn identity(cat: &Arc<FinCat>) -> Functor {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            obj_map: cat.objects().collect(),
            mor_map: cat.arrow_ids().collect(),
        }
    }

    pub fn constant(source: &Arc<FinCat>, target: &Arc<FinCat>, value: ObjId) -> Functor {
        Functor {
            source: source.clone(),
            target: target.clone(),
            obj_map: vec![value; source.object_count()],
            mor_map: vec![target.identity(value); source.arrow_count()],
        }
    }

    pub fn ob(&self, x: ObjId) -> ObjId {
        self.obj_map[x]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Functor) -> Functor {
        debug_assert!(same_cat(&inner.target, &self.source));
        Functor {
            source: inner.source.clone(),
            target: self.target.clone(),
            obj_map: inner.obj_map.iter().map(|&x| self.obj_map[x]).collect(),
            mor_map: inner.mor_map.iter().map(|&f| self.mor_map[f]).collect(),
        }
    }

    pub fn first_violation(&self) -> Option<String> {
        let (c, d) = (&*self.source, &*self.target);
        if self.obj_map.len() != c.object_count() || self.mor_map.len() != c.arrow_count() {
            return Some(format!("maps have the wrong length for source {}", c.name()));
        }
        if let Some(&y) = self.obj_map.iter().find(|&&y| y >= d.object_count()) {
            return Some(format!("object image {y} outside {}", d.name()));
        }
        if let Some(&g) = self.mor_map.iter().find(|&&g| g >= d.arrow_count()) {
            return Some(format!("arrow image {g} outside {}", d.name()));
        }
        for f in c.arrow_ids() {
            let g = self.mor_map[f];
            if d.source(g) != self.obj_map[c.source(f)] || d.target(g) != self.obj_map[c.target(f)] {
                return Some(format!(
                    "image of `{}` is `{}`, which has the wrong endpoints",
                    c.arrow_name(f),
                    d.arrow_name(g)
                ));
            }
        }
        for x in c.objects() {
            if self.mor_map[c.identity(x)] != d.identity(self.obj_map[x]) {
                return Some(format!("identity of `{}` is not preserved", c.object_name(x)));
            }
        }
        for f in c.arrow_ids() {
            for g in c.arrow_ids() {
                if let Some(h) = c.try_compose(g, f) {
                    if d.compose(self.mor_map[g], self.mor_map[f]) != self.mor_map[h] {
                        return Some(format!(
                            "composite `{} ∘ {}` is not preserved",
                            c.arrow_name(g),
                            c.arrow_name(f)
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn is_faithful(&self) -> bool {
        let c = &*self.source;
        c.objects().all(|a| {
            c.objects().all(|b| {
                let hom = c.hom(a, b);
                hom.iter()
                    .enumerate()
                    .all(|(i, &f)| hom[i + 1..].iter().all(|&g| self.mor(f) != self.mor(g)))
            })
        })
    }

    pub fn is_full(&self) -> bool {
        let (c, d) = (&*self.source, &*self.target);
        c.objects().all(|a| {
            c.objects().all(|b| {
                d.hom(self.ob(a), self.ob(b))
                    .iter()
                    .all(|g| c.hom(a, b).iter().any(|&f| self.mor(f) == *g))
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let d = &*self.target;
        d.objects()
            .all(|y| self.obj_map.iter().any(|&fx| d.hom(fx, y).iter().any(|&m| d.is_iso(m))))
    }

    /// Injective on objects, full and faithful.
    pub fn is_full_inclusion(&self) -> bool {
        let mut objs = self.obj_map.clone();
        objs.sort_unstable();
        objs.dedup();
        objs.len() == self.obj_map.len() && self.is_full() && self.is_faithful()
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<MorId>,
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &*self.source.target;
        let comps: Vec<&str> = self.components.iter().map(|&m| d.arrow_name(m)).collect();
        write!(f, "NatTrans[{}]", comps.join(", "))
    }
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, components: Vec<MorId>) -> Result<NatTrans> {
        let t = NatTrans {
            source,
            target,
            components,
        };
        match t.first_violation() {
            None => Ok(t),
            Some(v) => Err(Error::InvalidTransformation(v)),
        }
    }

    pub fn identity(f: &Functor) -> NatTrans {
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f.obj_map.iter().map(|&y| f.target.identity(y)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        let d = &*self.source.target;
        self.components.iter().all(|&m| d.is_identity(m))
    }

    pub fn component(&self, x: ObjId) -> MorId {
        self.components[x]
    }

    pub fn first_violation(&self) -> Option<String> {
        let (f, g) = (&self.source, &self.target);
        if !same_cat(&f.source, &g.source) || !same_cat(&f.target, &g.target) {
            return Some("functors are not parallel".to_string());
        }
        let (c, d) = (&*f.source, &*f.target);
        if self.components.len() != c.object_count() {
            return Some("wrong number of components".to_string());
        }
        for x in c.objects() {
            let m = self.components[x];
            if m >= d.arrow_count() || d.source(m) != f.ob(x) || d.target(m) != g.ob(x) {
                return Some(format!("component at `{}` has the wrong endpoints", c.object_name(x)));
            }
        }
        for h in c.arrow_ids() {
            let (a, b) = (c.source(h), c.target(h));
            let lhs = d.compose(g.mor(h), self.components[a]);
            let rhs = d.compose(self.components[b], f.mor(h));
            if lhs != rhs {
                return Some(format!("naturality fails at `{}`", c.arrow_name(h)));
            }
        }
        None
    }

    /// `self ∘ inner`, componentwise.
    pub fn vcompose(&self, inner: &NatTrans) -> Result<NatTrans> {
        if inner.target != self.source {
            return Err(Error::BoundaryMismatch(
                "vertical composite of non-adjacent transformations".to_string(),
            ));
        }
        let d = &*self.source.target;
        Ok(NatTrans {
            source: inner.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .zip(&inner.components)
                .map(|(&b, &a)| d.compose(b, a))
                .collect(),
        })
    }

    /// Whiskering `self · k`: components `self_{k x}`.
    pub fn precompose(&self, k: &Functor) -> NatTrans {
        NatTrans {
            source: self.source.compose(k),
            target: self.target.compose(k),
            components: k.obj_map.iter().map(|&y| self.components[y]).collect(),
        }
    }

    /// Whiskering `k · self`: components `k(self_x)`.
    pub fn postcompose(&self, k: &Functor) -> NatTrans {
        NatTrans {
            source: k.compose(&self.source),
            target: k.compose(&self.target),
            components: self.components.iter().map(|&m| k.mor(m)).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        let d = &*self.source.target;
        self.components.iter().all(|&m| d.is_iso(m))
    }

    pub fn inverse(&self) -> Option<NatTrans> {
        let d = &*self.source.target;
        let components = self
            .components
            .iter()
            .map(|&m| d.inverse(m))
            .collect::<Option<Vec<_>>>()?;
        Some(NatTrans {
            source: self.target.clone(),
            target: self.source.clone(),
            components,
        })
    }
}

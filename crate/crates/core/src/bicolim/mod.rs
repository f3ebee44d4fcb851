//! The pseudocolimit of a 2-filtered diagram of finite categories.
//!
//! Objects of the colimit `L` are pairs `(A, x)` with `x` an object of the
//! fiber `FA`, named `x@A`. A morphism `(A, x) → (B, y)` is a class of
//! spans `(C, u: A → C, v: B → C, f: (Fu)x → (Fv)y)`. Two spans are related
//! when both can be pushed to a common index object `D` along `w₁, w₂`
//! with invertible 2-cells `α: w₁u₁ ⇒ w₂u₂`, `β: w₁v₁ ⇒ w₂v₂` such that
//! `(Fβ)_y ∘ (Fw₁)f₁ = (Fw₂)f₂ ∘ (Fα)_x`; classes are the connected
//! components of this relation. Each class is represented by its least
//! span and the arrow is named `[x@A;C;u;f;v;y@B]` after it.
//!
//! Composition pushes two spans to a common apex: for `[C, u, v, f]`
//! followed by `[C', u', v', g]` the first `(E, w, w', γ: wv ⇒ w'u')` with
//! `γ` invertible gives `[E, wu, w'v', (Fw')g ∘ (Fγ)_y ∘ (Fw)f]`.

mod factor;
mod limits;
mod verify;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

pub use factor::{factor_cell, factor_cone};
pub use limits::{colim_finite_limit, verify_cone_exactness};
pub(crate) use verify::compare;
pub use verify::{check_span_transitivity, verify_bicolimit, BicolimitReport};

use crate::budget::Meter;
use crate::cat::{check_exact_with, Arrow, FinCat, Functor, MorId, NatTrans, ObjId};
use crate::pseudocone::Pseudocone;
use crate::twocat::{check_2filtered, CellId, TwoDiagram};
use crate::{Budget, Error, Result, Verdict};

/// A premorphism `(A, x) → (B, y)` through the index object `apex`.
/// The derived order compares fields in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    /// `(A, x)`.
    pub source: (ObjId, ObjId),
    /// `(B, y)`.
    pub target: (ObjId, ObjId),
    pub apex: ObjId,
    /// `u: A → apex`.
    pub left: MorId,
    /// `v: B → apex`.
    pub right: MorId,
    /// `f: (Fu)x → (Fv)y` in the apex fiber.
    pub arrow: MorId,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ColimOptions {
    pub budget: Budget,
    /// Shuffle the order in which common apexes are tried during
    /// composition. The resulting category must not depend on it.
    pub seed: Option<u64>,
}

/// The colimit category, its cone and the span classes behind each arrow.
#[derive(Clone, Debug)]
pub struct Pseudocolimit {
    pub diagram: Arc<TwoDiagram>,
    pub colim: Arc<FinCat>,
    pub lambda: Pseudocone,
    /// `(A, x)` for each object of `colim`.
    pub objects: Vec<(ObjId, ObjId)>,
    /// All spans of each arrow's class, least first.
    pub classes: Vec<Vec<Span>>,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    span_class: HashMap<Span, MorId>,
}

/// Read-only context shared by the construction steps.
struct Ctx<'a> {
    d: &'a TwoDiagram,
    /// Invertible 2-cells by boundary.
    inv_cells: HashMap<(MorId, MorId), Vec<CellId>>,
}

impl<'a> Ctx<'a> {
    fn new(d: &'a TwoDiagram) -> Self {
        let idx = &*d.index;
        let mut inv_cells: HashMap<(MorId, MorId), Vec<CellId>> = HashMap::new();
        for c in idx.cell_ids() {
            if idx.is_invertible(c) {
                let cell = idx.cell(c);
                inv_cells.entry((cell.source, cell.target)).or_default().push(c);
            }
        }
        Ctx { d, inv_cells }
    }

    fn invertible(&self, s: MorId, t: MorId) -> &[CellId] {
        self.inv_cells.get(&(s, t)).map_or(&[], Vec::as_slice)
    }

    fn all_spans(&self, (a, x): (ObjId, ObjId), (b, y): (ObjId, ObjId)) -> Vec<Span> {
        let base = self.d.index.base();
        let mut out = Vec::new();
        for c in base.objects() {
            let fc = self.d.fiber(c);
            for &u in base.hom(a, c) {
                let fx = self.d.transition(u).ob(x);
                for &v in base.hom(b, c) {
                    let fy = self.d.transition(v).ob(y);
                    for &f in fc.hom(fx, fy) {
                        out.push(Span {
                            source: (a, x),
                            target: (b, y),
                            apex: c,
                            left: u,
                            right: v,
                            arrow: f,
                        });
                    }
                }
            }
        }
        out
    }

    /// The generating relation between spans with equal endpoints.
    fn related(&self, s1: &Span, s2: &Span, meter: &Meter) -> Result<bool> {
        let d = self.d;
        let base = d.index.base();
        let (x, y) = (s1.source.1, s1.target.1);
        for dd in base.objects() {
            let fd = d.fiber(dd);
            for &w1 in base.hom(s1.apex, dd) {
                let pushed1 = d.transition(w1).mor(s1.arrow);
                for &w2 in base.hom(s2.apex, dd) {
                    meter.tick()?;
                    let pushed2 = d.transition(w2).mor(s2.arrow);
                    let alphas = self.invertible(base.compose(w1, s1.left), base.compose(w2, s2.left));
                    let betas = self.invertible(base.compose(w1, s1.right), base.compose(w2, s2.right));
                    for &al in alphas {
                        let rhs = fd.compose(pushed2, d.cell(al).component(x));
                        for &be in betas {
                            if fd.compose(d.cell(be).component(y), pushed1) == rhs {
                                return Ok(true);
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    /// Union-find classes of `spans`, each sorted, ordered by least member.
    fn classes(&self, spans: &[Span], meter: &Meter) -> Result<Vec<Vec<Span>>> {
        let n = spans.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if find(&mut parent, i) == find(&mut parent, j) {
                    continue;
                }
                if self.related(&spans[i], &spans[j], meter)? {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<Span>> = HashMap::new();
        for (i, &s) in spans.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(s);
        }
        let mut out: Vec<Vec<Span>> = groups.into_values().collect();
        for g in &mut out {
            g.sort();
        }
        out.sort_by_key(|g| g[0]);
        Ok(out)
    }

    /// Common refinements `(E, w, w', γ)` for composing `s1` then `s2`, in
    /// breadth-first order over apexes.
    fn refinements(&self, s1: &Span, s2: &Span) -> Vec<(ObjId, MorId, MorId, CellId)> {
        let base = self.d.index.base();
        let mut out = Vec::new();
        for e in base.objects() {
            for &w in base.hom(s1.apex, e) {
                for &w2 in base.hom(s2.apex, e) {
                    let (wv, wu) = (base.compose(w, s1.right), base.compose(w2, s2.left));
                    for &g in self.invertible(wv, wu) {
                        out.push((e, w, w2, g));
                    }
                }
            }
        }
        out
    }

    fn compose_with(&self, s1: &Span, s2: &Span, (e, w, w2, g): (ObjId, MorId, MorId, CellId)) -> Span {
        let d = self.d;
        let base = d.index.base();
        let fe = d.fiber(e);
        let y = s1.target.1;
        let arrow = fe.compose(
            d.transition(w2).mor(s2.arrow),
            fe.compose(d.cell(g).component(y), d.transition(w).mor(s1.arrow)),
        );
        Span {
            source: s1.source,
            target: s2.target,
            apex: e,
            left: base.compose(w, s1.left),
            right: base.compose(w2, s2.right),
            arrow,
        }
    }
}

fn span_name(d: &TwoDiagram, s: &Span) -> String {
    let base = d.index.base();
    format!(
        "[{}@{};{};{};{};{};{}@{}]",
        d.fiber(s.source.0).object_name(s.source.1),
        base.object_name(s.source.0),
        base.object_name(s.apex),
        base.arrow_name(s.left),
        d.fiber(s.apex).arrow_name(s.arrow),
        base.arrow_name(s.right),
        d.fiber(s.target.0).object_name(s.target.1),
        base.object_name(s.target.0),
    )
}

/// Builds the colimit category and its cone.
///
/// When every fiber carries a complete limit assignment and every
/// transition is exact, the colimit is given the limits computed by
/// [`colim_finite_limit`].
pub fn build_pseudocolimit(diagram: &Arc<TwoDiagram>, options: ColimOptions) -> Result<Pseudocolimit> {
    let d = &**diagram;
    if let Verdict::Fails(why) = check_2filtered(&d.index) {
        return Err(Error::NotFiltered(why));
    }
    let ctx = Ctx::new(d);
    let base = d.index.base();
    let meter = options.budget.meter("building the pseudocolimit");
    let objects: Vec<(ObjId, ObjId)> = base
        .objects()
        .flat_map(|a| d.fiber(a).objects().map(move |x| (a, x)))
        .collect();
    let object_index: HashMap<(ObjId, ObjId), ObjId> = objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let pairs: Vec<(usize, usize)> = (0..objects.len())
        .flat_map(|i| (0..objects.len()).map(move |j| (i, j)))
        .collect();
    let per_pair: Vec<Vec<Vec<Span>>> = pairs
        .par_iter()
        .map(|&(i, j)| ctx.classes(&ctx.all_spans(objects[i], objects[j]), &meter))
        .collect::<Result<_>>()?;

    // identities first, in object order
    let n = objects.len();
    let mut classes: Vec<Vec<Span>> = Vec::new();
    for (i, &(a, x)) in objects.iter().enumerate() {
        let id = Span {
            source: (a, x),
            target: (a, x),
            apex: a,
            left: base.identity(a),
            right: base.identity(a),
            arrow: d.fiber(a).identity(x),
        };
        let class = per_pair[i * n + i]
            .iter()
            .find(|c| c.binary_search(&id).is_ok())
            .expect("every span lies in a class");
        classes.push(class.clone());
    }
    let identity_heads: HashSet<Span> = classes.iter().map(|c| c[0]).collect();
    for group in per_pair.into_iter().flatten() {
        if !identity_heads.contains(&group[0]) {
            classes.push(group);
        }
    }
    let span_class: HashMap<Span, MorId> = classes
        .iter()
        .enumerate()
        .flat_map(|(m, c)| c.iter().map(move |s| (*s, m)))
        .collect();
    let arrows: Vec<Arrow> = classes
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let s = &c[0];
            let name = if m < n {
                format!(
                    "id_{}@{}",
                    d.fiber(s.source.0).object_name(s.source.1),
                    base.object_name(s.source.0)
                )
            } else {
                span_name(d, s)
            };
            Arrow {
                name,
                source: object_index[&s.source],
                target: object_index[&s.target],
            }
        })
        .collect();

    let mut rng = options.seed.map(StdRng::seed_from_u64);
    let m = classes.len();
    let mut comp = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            if arrows[f].target != arrows[g].source {
                continue;
            }
            let (s1, s2) = (&classes[f][0], &classes[g][0]);
            let mut candidates = ctx.refinements(s1, s2);
            meter.tick()?;
            if let Some(r) = rng.as_mut() {
                candidates.shuffle(r);
            }
            let Some(&choice) = candidates.first() else {
                return Err(Error::NotFiltered(format!(
                    "no common refinement for `{}` then `{}`",
                    arrows[f].name, arrows[g].name
                )));
            };
            let composite = ctx.compose_with(s1, s2, choice);
            comp[g * m + f] = Some(span_class[&composite]);
        }
    }
    let object_names: Vec<String> = objects
        .iter()
        .map(|&(a, x)| format!("{}@{}", d.fiber(a).object_name(x), base.object_name(a)))
        .collect();
    let colim = Arc::new(FinCat::from_indexed(
        format!("colim({})", d.name),
        object_names,
        arrows,
        (0..n).collect(),
        comp,
    )?);
    let lambda = colimit_cone(diagram, &colim, &object_index, &span_class);
    let mut result = Pseudocolimit {
        diagram: diagram.clone(),
        colim,
        lambda,
        objects,
        classes,
        object_index,
        span_class,
    };
    if fibers_are_exact(d)? {
        let assignment = limits::colim_assignment(&result, options.budget)?;
        let with = (*result.colim).clone().with_limits(assignment);
        result = result.with_colim(Arc::new(with));
    }
    Ok(result)
}

fn fibers_are_exact(d: &TwoDiagram) -> Result<bool> {
    for a in d.index.objects() {
        match d.fiber(a).limits() {
            Some(l) if l.is_complete(d.fiber(a)) => {}
            _ => return Ok(false),
        }
    }
    for t in &d.transitions {
        let (src, tgt) = (t.source.limits().expect("checked"), t.target.limits().expect("checked"));
        if !check_exact_with(t, src, tgt)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn colimit_cone(
    diagram: &Arc<TwoDiagram>,
    colim: &Arc<FinCat>,
    object_index: &HashMap<(ObjId, ObjId), ObjId>,
    span_class: &HashMap<Span, MorId>,
) -> Pseudocone {
    let d = &**diagram;
    let base = d.index.base();
    let legs: Vec<Functor> = base
        .objects()
        .map(|a| {
            let fa = d.fiber(a);
            Functor {
                source: fa.clone(),
                target: colim.clone(),
                obj_map: fa.objects().map(|x| object_index[&(a, x)]).collect(),
                mor_map: fa
                    .arrow_ids()
                    .map(|f| {
                        span_class[&Span {
                            source: (a, fa.source(f)),
                            target: (a, fa.target(f)),
                            apex: a,
                            left: base.identity(a),
                            right: base.identity(a),
                            arrow: f,
                        }]
                    })
                    .collect(),
            }
        })
        .collect();
    let coherence = base
        .arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            let fu = d.transition(u);
            let components = d
                .fiber(a)
                .objects()
                .map(|x| {
                    let y = fu.ob(x);
                    span_class[&Span {
                        source: (a, x),
                        target: (b, y),
                        apex: b,
                        left: u,
                        right: base.identity(b),
                        arrow: d.fiber(b).identity(y),
                    }]
                })
                .collect();
            NatTrans {
                source: legs[a].clone(),
                target: legs[b].compose(fu),
                components,
            }
        })
        .collect();
    Pseudocone {
        diagram: diagram.clone(),
        vertex: colim.clone(),
        legs,
        coherence,
    }
}

impl Pseudocolimit {
    /// The object `(A, x)`.
    pub fn object(&self, a: ObjId, x: ObjId) -> ObjId {
        self.object_index[&(a, x)]
    }

    /// The arrow whose class contains `span`.
    pub fn class_of(&self, span: &Span) -> Option<MorId> {
        self.span_class.get(span).copied()
    }

    /// Least span of an arrow's class.
    pub fn canonical(&self, m: MorId) -> &Span {
        &self.classes[m][0]
    }

    pub fn members(&self, m: MorId) -> &[Span] {
        &self.classes[m]
    }

    pub fn span_name(&self, s: &Span) -> String {
        span_name(&self.diagram, s)
    }

    /// Composes two spans through the first common refinement found in
    /// the given order (breadth-first, or shuffled by `seed`).
    pub fn compose_spans(&self, first: &Span, second: &Span, seed: Option<u64>) -> Option<Span> {
        let ctx = Ctx::new(&self.diagram);
        let mut candidates = ctx.refinements(first, second);
        if let Some(s) = seed {
            candidates.shuffle(&mut StdRng::seed_from_u64(s));
        }
        candidates.first().map(|&c| ctx.compose_with(first, second, c))
    }

    /// Replaces the colimit category (for instance to attach or corrupt a
    /// limit assignment), re-pointing the cone at it.
    pub fn with_colim(mut self, colim: Arc<FinCat>) -> Pseudocolimit {
        for leg in &mut self.lambda.legs {
            leg.target = colim.clone();
        }
        for c in &mut self.lambda.coherence {
            c.source.target = colim.clone();
            c.target.target = colim.clone();
        }
        self.lambda.vertex = colim.clone();
        self.colim = colim;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudocone::check_pseudocone;
    use crate::twocat::TwoCat;

    fn const_two() -> Arc<TwoDiagram> {
        let base = FinCat::preorder("Chain3", &["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap();
        let idx = Arc::new(TwoCat::locally_discrete("Chain3", Arc::new(base)));
        let two = Arc::new(FinCat::preorder("Two", &["0", "1"], &[("0", "1")]).unwrap());
        let id = Functor::identity(&two);
        Arc::new(TwoDiagram::over_category("ConstTwo", idx, vec![two; 3], vec![id; 6]).unwrap())
    }

    #[test]
    fn constant_two_over_chain() {
        let r = build_pseudocolimit(&const_two(), ColimOptions::default()).unwrap();
        assert_eq!(r.colim.object_count(), 6);
        assert!(r.colim.validate().is_ok());
        assert!(check_pseudocone(&r.lambda).holds());
        let (from, to) = (r.object(0, 0), r.object(2, 1));
        assert_eq!(r.colim.hom(from, to).len(), 1);
        assert_eq!(r.colim.hom(to, from).len(), 0);
    }

    #[test]
    fn seeded_refinement_gives_the_same_category() {
        let d = const_two();
        let a = build_pseudocolimit(&d, ColimOptions::default()).unwrap();
        for seed in 0..4 {
            let b = build_pseudocolimit(
                &d,
                ColimOptions {
                    seed: Some(seed),
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(*a.colim, *b.colim);
        }
    }

    #[test]
    fn constant_two_is_a_pseudocolimit_against_small_vertices() {
        let r = build_pseudocolimit(&const_two(), ColimOptions::default()).unwrap();
        let one = Arc::new(FinCat::preorder("One", &["*"], &[]).unwrap());
        let two = Arc::new(FinCat::preorder("Two", &["0", "1"], &[("0", "1")]).unwrap());
        for x in [one, two] {
            let rep = verify_bicolimit(&r, &x, Budget::default()).unwrap();
            assert!(rep.is_isomorphism(), "{rep:?}");
            assert_eq!(rep.functors, rep.cones);
            assert_eq!(rep.transformations, rep.modifications);
        }
        assert!(check_span_transitivity(&r, Budget::default()).unwrap().is_ok());
    }
}

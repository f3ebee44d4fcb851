//! Brute-force oracles shared by the integration tests.
//!
//! Everything here works from raw composition tables, object maps and
//! component lists. Nothing calls the checkers or enumerators under test.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use colimkit::bicolim::Pseudocolimit;
use colimkit::cat::{FinCat, Functor, MorId, NatTrans, ObjId};
use colimkit::corpus;
use colimkit::pseudocone::{Modification, Pseudocone};
use colimkit::sites::{Presheaf, Site};
use colimkit::twocat::TwoDiagram;

// ---------------------------------------------------------------- corpus

pub fn diagram(file: &str, name: &str) -> Arc<TwoDiagram> {
    corpus::load(file).unwrap().diagram(name).unwrap().clone()
}

pub fn filtered_diagrams() -> Vec<Arc<TwoDiagram>> {
    corpus::FILTERED_DIAGRAMS.iter().map(|(f, n)| diagram(f, n)).collect()
}

/// Every named category of the basic corpus, all of which have at most four
/// objects.
pub fn vertices() -> Vec<Arc<FinCat>> {
    let ws = corpus::load("basics.cat").unwrap();
    let out: Vec<Arc<FinCat>> = ws.categories().map(|(_, c)| c.clone()).collect();
    assert!(out.iter().all(|c| c.object_count() <= 4));
    out
}

pub fn vertex(name: &str) -> Arc<FinCat> {
    corpus::load("basics.cat").unwrap().category(name).unwrap().clone()
}

pub fn corpus_cones() -> Vec<(String, Pseudocone)> {
    corpus::load("cones.cone")
        .unwrap()
        .cones()
        .map(|(n, h)| (n.to_string(), h.clone()))
        .collect()
}

/// Every single-component change of every coherence cell.
pub fn mutations(h: &Pseudocone) -> Vec<Pseudocone> {
    let x = &*h.vertex;
    let mut out = Vec::new();
    for u in 0..h.coherence.len() {
        for y in 0..h.coherence[u].components.len() {
            let old = h.coherence[u].components[y];
            for m in x.arrow_ids().filter(|&m| m != old) {
                let mut k = h.clone();
                k.coherence[u].components[y] = m;
                out.push(k);
            }
        }
    }
    out
}

/// Every family of invertible transformations out of the legs of `g`.
pub fn invertible_families(g: &Pseudocone) -> Vec<Vec<NatTrans>> {
    let x = &g.vertex;
    let per: Vec<Vec<NatTrans>> = g
        .legs
        .iter()
        .map(|leg| {
            let mut out = Vec::new();
            for (ob, mor) in naive_functors(&leg.source, x) {
                let t = Functor {
                    source: leg.source.clone(),
                    target: x.clone(),
                    obj_map: ob,
                    mor_map: mor,
                };
                for comps in naive_transformations(leg, &t) {
                    if comps.iter().all(|&m| naive_invertible(x, m)) {
                        out.push(NatTrans {
                            source: leg.clone(),
                            target: t.clone(),
                            components: comps,
                        });
                    }
                }
            }
            out
        })
        .collect();
    let idx: Vec<Vec<usize>> = per.iter().map(|p| (0..p.len()).collect()).collect();
    product(&idx)
        .into_iter()
        .map(|choice| choice.iter().enumerate().map(|(a, &k)| per[a][k].clone()).collect())
        .collect()
}

/// An index object receiving a 1-cell from every object.
pub fn weakly_terminal(d: &TwoDiagram) -> Option<ObjId> {
    let base = d.index.base();
    base.objects()
        .find(|&t| base.objects().all(|a| !arrows_between(base, a, t).is_empty()))
}

// ----------------------------------------------------- raw category data

pub fn comp(c: &FinCat, g: MorId, f: MorId) -> Option<MorId> {
    c.try_compose(g, f)
}

/// Every arrow `a → b`, found by scanning the arrow list.
pub fn arrows_between(c: &FinCat, a: ObjId, b: ObjId) -> Vec<MorId> {
    c.arrow_ids()
        .filter(|&f| c.source(f) == a && c.target(f) == b)
        .collect()
}

pub fn naive_invertible(c: &FinCat, f: MorId) -> bool {
    let (a, b) = (c.source(f), c.target(f));
    arrows_between(c, b, a)
        .into_iter()
        .any(|g| comp(c, g, f) == Some(c.identity(a)) && comp(c, f, g) == Some(c.identity(b)))
}

/// Functoriality of raw object and arrow maps between `c` and `d`.
pub fn naive_functor(c: &FinCat, d: &FinCat, ob: &[ObjId], mor: &[MorId]) -> bool {
    if ob.len() != c.object_count() || mor.len() != c.arrow_count() {
        return false;
    }
    for f in c.arrow_ids() {
        if mor[f] >= d.arrow_count() || d.source(mor[f]) != ob[c.source(f)] || d.target(mor[f]) != ob[c.target(f)] {
            return false;
        }
    }
    for x in c.objects() {
        if mor[c.identity(x)] != d.identity(ob[x]) {
            return false;
        }
    }
    for f in c.arrow_ids() {
        for g in c.arrow_ids() {
            if let Some(gf) = comp(c, g, f) {
                if comp(d, mor[g], mor[f]) != Some(mor[gf]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn naive_natural(s: &Functor, t: &Functor, comps: &[MorId]) -> bool {
    let (c, d) = (&*s.source, &*s.target);
    if comps.len() != c.object_count() {
        return false;
    }
    for x in c.objects() {
        let m = comps[x];
        if m >= d.arrow_count() || d.source(m) != s.obj_map[x] || d.target(m) != t.obj_map[x] {
            return false;
        }
    }
    c.arrow_ids().all(|f| {
        let (a, b) = (c.source(f), c.target(f));
        comp(d, t.mor_map[f], comps[a]) == comp(d, comps[b], s.mor_map[f])
    })
}

/// Every functor `c → d`, by trying all object maps and then
/// backtracking over arrow images.
pub fn naive_functors(c: &FinCat, d: &FinCat) -> Vec<(Vec<ObjId>, Vec<MorId>)> {
    let per: Vec<Vec<ObjId>> = c.objects().map(|_| d.objects().collect()).collect();
    let mut out = Vec::new();
    for ob in product(&per) {
        let candidates: Vec<Vec<MorId>> = c
            .arrow_ids()
            .map(|f| arrows_between(d, ob[c.source(f)], ob[c.target(f)]))
            .collect();
        for mor in arrow_maps(c, d, &ob, &candidates) {
            out.push((ob.clone(), mor));
        }
    }
    out
}

/// Every functorial arrow map over the object map `ob` choosing each
/// arrow's image from `candidates`, by backtracking in arrow order.
pub fn arrow_maps(c: &FinCat, d: &FinCat, ob: &[ObjId], candidates: &[Vec<MorId>]) -> Vec<Vec<MorId>> {
    fn go(
        c: &FinCat,
        d: &FinCat,
        i: usize,
        ob: &[ObjId],
        candidates: &[Vec<MorId>],
        mor: &mut Vec<MorId>,
        out: &mut Vec<Vec<MorId>>,
    ) {
        if i == mor.len() {
            if naive_functor(c, d, ob, mor) {
                out.push(mor.clone());
            }
            return;
        }
        for &m in &candidates[i] {
            mor[i] = m;
            // prune on composites whose three arrows are already chosen
            let ok = (0..=i).all(|f| {
                (0..=i).all(|g| match comp(c, g, f) {
                    Some(gf) if gf <= i && (f == i || g == i || gf == i) => comp(d, mor[g], mor[f]) == Some(mor[gf]),
                    _ => true,
                })
            });
            if ok {
                go(c, d, i + 1, ob, candidates, mor, out);
            }
        }
        mor[i] = usize::MAX;
    }
    let mut out = Vec::new();
    let mut mor = vec![usize::MAX; c.arrow_count()];
    go(c, d, 0, ob, candidates, &mut mor, &mut out);
    out
}

/// Every natural transformation `s ⇒ t`, as component lists.
pub fn naive_transformations(s: &Functor, t: &Functor) -> Vec<Vec<MorId>> {
    let c = &*s.source;
    let d = &*s.target;
    let per: Vec<Vec<MorId>> = c
        .objects()
        .map(|x| arrows_between(d, s.obj_map[x], t.obj_map[x]))
        .collect();
    product(&per)
        .into_iter()
        .filter(|comps| naive_natural(s, t, comps))
        .collect()
}

/// Cartesian product of candidate lists.
pub fn product(per: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for options in per {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for &o in options {
                let mut p = prefix.clone();
                p.push(o);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn after(f: &Functor, g: &Functor) -> (Vec<ObjId>, Vec<MorId>) {
    (
        g.obj_map.iter().map(|&x| f.obj_map[x]).collect(),
        g.mor_map.iter().map(|&m| f.mor_map[m]).collect(),
    )
}

// ------------------------------------------------- pseudocone equations

/// Evaluates every pseudocone equation directly on component lists.
pub fn naive_cone(h: &Pseudocone) -> bool {
    naive_cone_parts(&h.diagram, &h.vertex, &h.legs, &cone_components(h))
}

pub fn cone_components(h: &Pseudocone) -> Vec<Vec<MorId>> {
    h.coherence.iter().map(|c| c.components.clone()).collect()
}

/// `coh[u][y]` is the component of the coherence cell at `u` and `y`.
pub fn naive_cone_parts(d: &TwoDiagram, x: &FinCat, legs: &[Functor], coh: &[Vec<MorId>]) -> bool {
    let idx = &*d.index;
    let base = &**idx.base();
    if legs.len() != base.object_count() || coh.len() != base.arrow_count() {
        return false;
    }
    for a in base.objects() {
        let leg = &legs[a];
        if *leg.source != **d.fiber(a) || *leg.target != *x {
            return false;
        }
        if !naive_functor(d.fiber(a), x, &leg.obj_map, &leg.mor_map) {
            return false;
        }
    }
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let (tob, tmor) = after(&legs[b], d.transition(u));
        let target = Functor {
            source: d.fiber(a).clone(),
            target: legs[b].target.clone(),
            obj_map: tob,
            mor_map: tmor,
        };
        if !naive_natural(&legs[a], &target, &coh[u]) {
            return false;
        }
        if !coh[u].iter().all(|&m| naive_invertible(x, m)) {
            return false;
        }
        if base.is_identity(u) && coh[u].iter().any(|&m| !x.is_identity(m)) {
            return false;
        }
    }
    for u in base.arrow_ids() {
        for v in base.arrow_ids() {
            let Some(vu) = comp(base, v, u) else { continue };
            let fu = d.transition(u);
            for y in d.fiber(base.source(u)).objects() {
                if comp(x, coh[v][fu.obj_map[y]], coh[u][y]) != Some(coh[vu][y]) {
                    return false;
                }
            }
        }
    }
    for g in idx.cell_ids() {
        let cell = idx.cell(g);
        let b = base.target(cell.source);
        for y in d.fiber(base.source(cell.source)).objects() {
            let fg = d.cell(g).components[y];
            if comp(x, legs[b].mor_map[fg], coh[cell.source][y]) != Some(coh[cell.target][y]) {
                return false;
            }
        }
    }
    true
}

/// Evaluates the modification equation directly on component lists.
pub fn naive_modification(phi: &Modification) -> bool {
    let comps: Vec<Vec<MorId>> = phi.components.iter().map(|c| c.components.clone()).collect();
    naive_modification_parts(&phi.source, &phi.target, &comps)
}

pub fn naive_modification_parts(g: &Pseudocone, h: &Pseudocone, comps: &[Vec<MorId>]) -> bool {
    let d = &*g.diagram;
    let base = &**d.index.base();
    let x = &*g.vertex;
    if *g.vertex != *h.vertex || comps.len() != base.object_count() {
        return false;
    }
    for a in base.objects() {
        if !naive_natural(&g.legs[a], &h.legs[a], &comps[a]) {
            return false;
        }
    }
    base.arrow_ids().all(|u| {
        let (a, b) = (base.source(u), base.target(u));
        let fu = d.transition(u);
        d.fiber(a).objects().all(|y| {
            comp(x, h.coherence[u].components[y], comps[a][y])
                == comp(x, comps[b][fu.obj_map[y]], g.coherence[u].components[y])
        })
    })
}

/// Every coherence family on fixed legs that satisfies the pseudocone
/// equations. Candidates per 1-cell are the natural families of invertible
/// arrows (identities at identity 1-cells); all combinations are tried.
pub fn brute_coherences(d: &TwoDiagram, x: &FinCat, legs: &[Functor]) -> Vec<Vec<Vec<MorId>>> {
    let base = d.index.base();
    let per: Vec<Vec<Vec<MorId>>> = base
        .arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            let (ob, mor) = after(&legs[b], d.transition(u));
            let target = Functor {
                source: d.fiber(a).clone(),
                target: legs[b].target.clone(),
                obj_map: ob,
                mor_map: mor,
            };
            naive_transformations(&legs[a], &target)
                .into_iter()
                .filter(|c| c.iter().all(|&m| naive_invertible(x, m)))
                .filter(|c| !base.is_identity(u) || c.iter().all(|&m| x.is_identity(m)))
                .collect()
        })
        .collect();
    let total: f64 = per.iter().map(|p| p.len() as f64).product();
    assert!(total <= 1e6, "coherence search space too large for the oracle");
    let idx: Vec<Vec<usize>> = per.iter().map(|p| (0..p.len()).collect()).collect();
    product(&idx)
        .into_iter()
        .map(|choice| {
            choice
                .iter()
                .enumerate()
                .map(|(u, &k)| per[u][k].clone())
                .collect::<Vec<_>>()
        })
        .filter(|coh| naive_cone_parts(d, x, legs, coh))
        .collect()
}

/// Number of modifications `g → h`, by trying all component choices.
pub fn brute_modification_count(g: &Pseudocone, h: &Pseudocone) -> usize {
    let per: Vec<Vec<Vec<MorId>>> = g
        .legs
        .iter()
        .zip(&h.legs)
        .map(|(s, t)| naive_transformations(s, t))
        .collect();
    let idx: Vec<Vec<usize>> = per.iter().map(|p| (0..p.len()).collect()).collect();
    product(&idx)
        .into_iter()
        .filter(|choice| {
            let comps: Vec<Vec<MorId>> = choice.iter().enumerate().map(|(a, &k)| per[a][k].clone()).collect();
            naive_modification_parts(g, h, &comps)
        })
        .count()
}

// --------------------------------------------------------- span classes

/// A span `(A, x) → (B, y)` as `(C, u, v, f)`.
pub type RawSpan = (ObjId, MorId, MorId, MorId);

pub fn raw_spans(d: &TwoDiagram, (a, x): (ObjId, ObjId), (b, y): (ObjId, ObjId)) -> Vec<RawSpan> {
    let base = d.index.base();
    let mut out = Vec::new();
    for c in base.objects() {
        for u in arrows_between(base, a, c) {
            for v in arrows_between(base, b, c) {
                let fc = d.fiber(c);
                let (fx, fy) = (d.transition(u).obj_map[x], d.transition(v).obj_map[y]);
                for f in arrows_between(fc, fx, fy) {
                    out.push((c, u, v, f));
                }
            }
        }
    }
    out
}

/// One step of the span relation: a common refinement `w₁, w₂` with
/// invertible 2-cells on both sides making the transported arrows agree.
pub fn spans_related(d: &TwoDiagram, x: ObjId, y: ObjId, s1: RawSpan, s2: RawSpan) -> bool {
    let idx = &*d.index;
    let base = &**idx.base();
    let (c1, u1, v1, f1) = s1;
    let (c2, u2, v2, f2) = s2;
    for dd in base.objects() {
        let fd = d.fiber(dd);
        for w1 in arrows_between(base, c1, dd) {
            for w2 in arrows_between(base, c2, dd) {
                let (l1, l2) = (comp(base, w1, u1).unwrap(), comp(base, w2, u2).unwrap());
                let (r1, r2) = (comp(base, w1, v1).unwrap(), comp(base, w2, v2).unwrap());
                for alpha in idx.cell_ids() {
                    let ca = idx.cell(alpha);
                    if ca.source != l1 || ca.target != l2 || !idx.is_invertible(alpha) {
                        continue;
                    }
                    for beta in idx.cell_ids() {
                        let cb = idx.cell(beta);
                        if cb.source != r1 || cb.target != r2 || !idx.is_invertible(beta) {
                            continue;
                        }
                        let lhs = comp(fd, d.cell(beta).components[y], d.transition(w1).mor_map[f1]);
                        let rhs = comp(fd, d.transition(w2).mor_map[f2], d.cell(alpha).components[x]);
                        if lhs.is_some() && lhs == rhs {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Equivalence classes of spans `(A, x) → (B, y)` under the closure of
/// [`spans_related`], as sorted member lists.
pub fn span_classes(d: &TwoDiagram, p: (ObjId, ObjId), q: (ObjId, ObjId)) -> Vec<Vec<RawSpan>> {
    let spans = raw_spans(d, p, q);
    let n = spans.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..n {
            if spans_related(d, p.1, q.1, spans[i], spans[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<RawSpan>> = Default::default();
    for (i, &s) in spans.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(s);
    }
    classes.into_values().collect()
}

// ------------------------------------------------------- factorizations

/// Every functor `ℓ: L → X` with `ℓλ = h` on legs and coherence cells.
pub fn brute_factorizations(r: &Pseudocolimit, h: &Pseudocone) -> Vec<Vec<MorId>> {
    let l = &*r.colim;
    let x = &*h.vertex;
    let d = &*r.diagram;
    let base = d.index.base();
    let ob: Vec<ObjId> = r.objects.iter().map(|&(a, y)| h.legs[a].obj_map[y]).collect();
    let mut forced: Vec<Option<MorId>> = vec![None; l.arrow_count()];
    let mut clash = false;
    let mut force = |m: MorId, v: MorId, forced: &mut Vec<Option<MorId>>| match forced[m] {
        Some(w) if w != v => clash = true,
        _ => forced[m] = Some(v),
    };
    for a in base.objects() {
        for f in d.fiber(a).arrow_ids() {
            force(r.lambda.legs[a].mor_map[f], h.legs[a].mor_map[f], &mut forced);
        }
    }
    for u in base.arrow_ids() {
        for y in d.fiber(base.source(u)).objects() {
            force(
                r.lambda.coherence[u].components[y],
                h.coherence[u].components[y],
                &mut forced,
            );
        }
    }
    if clash {
        return Vec::new();
    }
    let per: Vec<Vec<MorId>> = l
        .arrow_ids()
        .map(|m| match forced[m] {
            Some(v) => vec![v],
            None => arrows_between(x, ob[l.source(m)], ob[l.target(m)]),
        })
        .collect();
    arrow_maps(l, x, &ob, &per)
}

// --------------------------------------------------- universal properties

pub fn is_terminal(c: &FinCat, t: ObjId) -> bool {
    c.objects().all(|w| arrows_between(c, w, t).len() == 1)
}

pub fn is_product(c: &FinCat, a: ObjId, b: ObjId, p: ObjId, l: MorId, r: MorId) -> bool {
    if c.source(l) != p || c.source(r) != p || c.target(l) != a || c.target(r) != b {
        return false;
    }
    c.objects().all(|w| {
        let to_p = arrows_between(c, w, p);
        arrows_between(c, w, a).into_iter().all(|f| {
            arrows_between(c, w, b).into_iter().all(|g| {
                to_p.iter()
                    .filter(|&&m| comp(c, l, m) == Some(f) && comp(c, r, m) == Some(g))
                    .count()
                    == 1
            })
        })
    })
}

pub fn is_equalizer(c: &FinCat, f: MorId, g: MorId, e: ObjId, i: MorId) -> bool {
    let a = c.source(f);
    if c.source(i) != e || c.target(i) != a || comp(c, f, i) != comp(c, g, i) {
        return false;
    }
    c.objects().all(|w| {
        let to_e = arrows_between(c, w, e);
        arrows_between(c, w, a)
            .into_iter()
            .filter(|&k| comp(c, f, k) == comp(c, g, k))
            .all(|k| to_e.iter().filter(|&&m| comp(c, i, m) == Some(k)).count() == 1)
    })
}

/// The images of the source's chosen terminal, products and equalizers
/// have the universal property in the target.
pub fn naive_exact(f: &Functor) -> bool {
    let (c, d) = (&*f.source, &*f.target);
    let lim = c.limits().expect("source has chosen limits");
    let (ob, mor) = (&f.obj_map, &f.mor_map);
    lim.terminal.is_none_or(|t| is_terminal(d, ob[t]))
        && lim
            .products
            .iter()
            .all(|(&(a, b), p)| is_product(d, ob[a], ob[b], ob[p.apex], mor[p.left], mor[p.right]))
        && lim
            .equalizers
            .iter()
            .all(|(&(g, h), q)| is_equalizer(d, mor[g], mor[h], ob[q.apex], mor[q.inclusion]))
}

/// Exact and sending every basis cover of `source` to a covering family.
pub fn naive_site_functor(f: &Functor, source: &Site, target: &Site) -> bool {
    naive_exact(f)
        && source.basis.iter().all(|k| {
            let image: Vec<MorId> = k.legs.iter().map(|&l| f.mor_map[l]).collect();
            naive_is_covering(target, f.obj_map[k.target], &image)
        })
}

// ---------------------------------------------------------------- sites

/// `family` covers `target` if some basis cover of `target`, or the
/// identity cover, has every leg factoring through a member.
pub fn naive_is_covering(site: &Site, target: ObjId, family: &[MorId]) -> bool {
    let c = &*site.category;
    let factors = |k: MorId| {
        family.iter().any(|&f| {
            arrows_between(c, c.source(k), c.source(f))
                .into_iter()
                .any(|m| comp(c, f, m) == Some(k))
        })
    };
    if factors(c.identity(target)) {
        return true;
    }
    site.basis
        .iter()
        .filter(|k| k.target == target)
        .any(|k| k.legs.iter().all(|&leg| factors(leg)))
}

/// The image of every fiber basis cover under the colimit legs, leaving
/// out images with an identity leg.
pub fn image_covers(sites: &[Arc<Site>], legs: &[Functor]) -> BTreeSet<(ObjId, BTreeSet<MorId>)> {
    let mut out = BTreeSet::new();
    for (s, leg) in sites.iter().zip(legs) {
        let l = &*leg.target;
        for k in &s.basis {
            let image: BTreeSet<MorId> = k.legs.iter().map(|&f| leg.mor_map[f]).collect();
            let trivial = image
                .iter()
                .any(|&f| l.source(f) == l.target(f) && l.objects().any(|x| l.identity(x) == f));
            if !trivial {
                out.insert((leg.obj_map[k.target], image));
            }
        }
    }
    out
}

/// Every presheaf with value sets of size at most `max`, as
/// `(sets, maps)` with `maps[f]: P(target f) → P(source f)`.
pub fn naive_presheaves(c: &FinCat, max: usize) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    let size_choices: Vec<Vec<usize>> = c.objects().map(|_| (0..=max).collect()).collect();
    for sets in product(&size_choices) {
        let per: Vec<Vec<Vec<usize>>> = c
            .arrow_ids()
            .map(|f| {
                let (src, tgt) = (sets[c.source(f)], sets[c.target(f)]);
                let funcs: Vec<Vec<usize>> = (0..tgt).map(|_| (0..src).collect()).collect();
                product(&funcs)
            })
            .collect();
        let idx: Vec<Vec<usize>> = per.iter().map(|p| (0..p.len()).collect()).collect();
        for choice in product(&idx) {
            let maps: Vec<Vec<usize>> = choice.iter().enumerate().map(|(f, &k)| per[f][k].clone()).collect();
            let ids = c
                .objects()
                .all(|x| maps[c.identity(x)].iter().enumerate().all(|(i, &j)| i == j));
            // P(g ∘ f) = P(f) ∘ P(g)
            let comps = c.arrow_ids().all(|f| {
                c.arrow_ids().all(|g| match comp(c, g, f) {
                    Some(gf) => (0..sets[c.target(g)]).all(|s| maps[gf][s] == maps[f][maps[g][s]]),
                    None => true,
                })
            });
            if ids && comps {
                out.push((sets.clone(), maps));
            }
        }
    }
    out
}

/// Sheaf condition with compatibility over every commuting square rather
/// than chosen pullbacks.
pub fn naive_is_sheaf(p: &Presheaf, site: &Site) -> bool {
    let c = &*site.category;
    site.basis.iter().all(|k| {
        let legs: Vec<MorId> = k.legs.iter().copied().collect();
        let per: Vec<Vec<usize>> = legs.iter().map(|&f| (0..p.sets[c.source(f)]).collect()).collect();
        product(&per).into_iter().all(|family| {
            let compatible = legs.iter().enumerate().all(|(i, &fi)| {
                legs.iter().enumerate().all(|(j, &fj)| {
                    c.objects().all(|w| {
                        arrows_between(c, w, c.source(fi)).into_iter().all(|g| {
                            arrows_between(c, w, c.source(fj)).into_iter().all(|h| {
                                comp(c, fi, g) != comp(c, fj, h) || p.maps[g][family[i]] == p.maps[h][family[j]]
                            })
                        })
                    })
                })
            });
            if !compatible {
                return true;
            }
            let glue = (0..p.sets[k.target])
                .filter(|&s| legs.iter().enumerate().all(|(i, &f)| p.maps[f][s] == family[i]))
                .count();
            glue == 1
        })
    })
}

//! Finite categories stored as explicit composition tables.
//!
//! A [`CatTable`] is the name-level description read from fixtures and is
//! allowed to be wrong; [`validate_category`] lists what is wrong with it.
//! A [`FinCat`] is the validated, index-based form every algorithm works on.
//! Arrows of a `FinCat` are numbered with the identities first (in object
//! order), followed by the remaining arrows in declaration order.

mod enumerate;
mod equivalence;
mod functor;
mod limits;
mod present;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub use enumerate::{enumerate_functors, enumerate_nat_trans};
pub use equivalence::{equivalence_witness, EquivalenceSearch, EquivalenceWitness};
pub use functor::{Functor, NatTrans};
pub use limits::{
    check_exact, check_exact_with, chosen_limit, chosen_limit_with, is_limiting_cone, mediating_morphism, Cone,
    DiagramArrow, EqualizerCone, FiniteDiagram, LimitAssignment, ProductCone,
};
pub use present::{build_category, Presentation};

use crate::{Error, Report, Result};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// Name-level category description, possibly inconsistent.
///
/// `compositions` holds entries `(g, f, h)` meaning `g ∘ f = h`. Entries
/// forced by the identity laws may be omitted; they are filled in before the
/// totality check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatTable {
    pub name: String,
    pub objects: Vec<String>,
    /// Identity arrow name for each object, in object order.
    pub identities: Vec<String>,
    /// Non-identity arrows: `(name, source, target)`.
    pub arrows: Vec<(String, String, String)>,
    pub compositions: Vec<(String, String, String)>,
}

impl CatTable {
    /// Table with the given objects, identities named `id_<object>`.
    pub fn new(name: &str, objects: &[&str]) -> Self {
        CatTable {
            name: name.to_string(),
            objects: objects.iter().map(|o| o.to_string()).collect(),
            identities: objects.iter().map(|o| format!("id_{o}")).collect(),
            arrows: Vec::new(),
            compositions: Vec::new(),
        }
    }

    pub fn arrow(mut self, name: &str, source: &str, target: &str) -> Self {
        self.arrows
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn compose(mut self, g: &str, f: &str, h: &str) -> Self {
        self.compositions.push((g.to_string(), f.to_string(), h.to_string()));
        self
    }
}

/// Raw indexed tables shared by the validator and the law checks.
struct Indexed {
    arrows: Vec<Arrow>,
    identities: Vec<MorId>,
    comp: Vec<Option<MorId>>,
}

impl Indexed {
    fn at(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g * self.arrows.len() + f]
    }

    fn name(&self, m: MorId) -> &str {
        &self.arrows[m].name
    }

    /// Identity and associativity laws; assumes a well-formed total table.
    fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.arrows.len();
        for f in 0..m {
            let a = &self.arrows[f];
            let left = self.at(self.identities[a.target], f);
            if left != Some(f) {
                out.push(format!(
                    "identity law: {} ∘ {} ≠ {}",
                    self.name(self.identities[a.target]),
                    self.name(f),
                    self.name(f)
                ));
            }
            let right = self.at(f, self.identities[a.source]);
            if right != Some(f) {
                out.push(format!(
                    "identity law: {} ∘ {} ≠ {}",
                    self.name(f),
                    self.name(self.identities[a.source]),
                    self.name(f)
                ));
            }
        }
        for f in 0..m {
            for g in 0..m {
                if self.arrows[f].target != self.arrows[g].source {
                    continue;
                }
                let gf = self.at(g, f).expect("total table");
                for h in 0..m {
                    if self.arrows[g].target != self.arrows[h].source {
                        continue;
                    }
                    let hg = self.at(h, g).expect("total table");
                    let lhs = self.at(h, gf).expect("total table");
                    let rhs = self.at(hg, f).expect("total table");
                    if lhs != rhs {
                        out.push(format!(
                            "associativity: {h} ∘ ({g} ∘ {f}) = {} but ({h} ∘ {g}) ∘ {f} = {}",
                            self.name(lhs),
                            self.name(rhs),
                            h = self.name(h),
                            g = self.name(g),
                            f = self.name(f),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Lists every violated constraint of a category table.
///
/// Well-formedness problems (unknown names, wrong hom-sets, missing
/// composites) are reported first; the identity and associativity laws are
/// only examined once the table is well formed, so each bad entry is
/// reported once.
pub fn validate_category(table: &CatTable) -> Report {
    index_table(table).err().unwrap_or_default()
}

fn index_table(table: &CatTable) -> std::result::Result<Indexed, Report> {
    let mut report = Report::default();
    let mut obj_ids: HashMap<&str, ObjId> = HashMap::new();
    for (i, o) in table.objects.iter().enumerate() {
        if obj_ids.insert(o.as_str(), i).is_some() {
            report.push(format!("duplicate object `{o}`"));
        }
    }
    if table.identities.len() != table.objects.len() {
        report.push(format!(
            "{} identities declared for {} objects",
            table.identities.len(),
            table.objects.len()
        ));
        return Err(report);
    }
    let mut arrows: Vec<Arrow> = Vec::new();
    for (i, name) in table.identities.iter().enumerate() {
        arrows.push(Arrow {
            name: name.clone(),
            source: i,
            target: i,
        });
    }
    for (name, s, t) in &table.arrows {
        match (obj_ids.get(s.as_str()), obj_ids.get(t.as_str())) {
            (Some(&source), Some(&target)) => arrows.push(Arrow {
                name: name.clone(),
                source,
                target,
            }),
            _ => report.push(format!("arrow `{name}` has an unknown endpoint ({s} -> {t})")),
        }
    }
    let mut arrow_ids: HashMap<&str, MorId> = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if arrow_ids.insert(a.name.as_str(), i).is_some() {
            report.push(format!("duplicate arrow `{}`", a.name));
        }
    }
    let m = arrows.len();
    let identities: Vec<MorId> = (0..table.objects.len()).collect();
    let mut comp: Vec<Option<MorId>> = vec![None; m * m];
    let mut seen: HashSet<(MorId, MorId)> = HashSet::new();
    for (g, f, h) in &table.compositions {
        let (Some(&gi), Some(&fi)) = (arrow_ids.get(g.as_str()), arrow_ids.get(f.as_str())) else {
            report.push(format!("composition `{g} ∘ {f}` names an unknown arrow"));
            continue;
        };
        let first = seen.insert((gi, fi));
        if arrows[fi].target != arrows[gi].source {
            report.push(format!("composition `{g} ∘ {f}` is not composable"));
            continue;
        }
        let Some(&hi) = arrow_ids.get(h.as_str()) else {
            report.push(format!("composite `{g} ∘ {f} = {h}` names an unknown arrow"));
            continue;
        };
        if arrows[hi].source != arrows[fi].source || arrows[hi].target != arrows[gi].target {
            report.push(format!("composite `{g} ∘ {f} = {h}` lands in the wrong hom-set"));
            continue;
        }
        if !first {
            if comp[gi * m + fi] != Some(hi) {
                report.push(format!("conflicting entries for `{g} ∘ {f}`"));
            }
            continue;
        }
        comp[gi * m + fi] = Some(hi);
    }
    // identity-law entries may be left implicit
    for f in 0..m {
        let (s, t) = (arrows[f].source, arrows[f].target);
        let (ids, idt) = (identities[s], identities[t]);
        if !seen.contains(&(idt, f)) {
            comp[idt * m + f] = Some(f);
            seen.insert((idt, f));
        }
        if !seen.contains(&(f, ids)) {
            comp[f * m + ids] = Some(f);
            seen.insert((f, ids));
        }
    }
    for f in 0..m {
        for g in 0..m {
            if arrows[f].target == arrows[g].source && !seen.contains(&(g, f)) {
                report.push(format!("missing composite `{} ∘ {}`", arrows[g].name, arrows[f].name));
            }
        }
    }
    if !report.is_ok() {
        return Err(report);
    }
    let indexed = Indexed {
        arrows,
        identities,
        comp,
    };
    let laws = indexed.law_violations();
    if laws.is_empty() {
        Ok(indexed)
    } else {
        Err(Report { violations: laws })
    }
}

/// A validated finite category.
#[derive(Clone)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<MorId>,
    comp: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
    obj_lookup: HashMap<String, ObjId>,
    arrow_lookup: HashMap<String, MorId>,
    limits: Option<LimitAssignment>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} arrows)",
            self.name,
            self.objects.len(),
            self.arrows.len()
        )
    }
}

/// Structural equality: names of objects and arrows and the composition
/// table. The category name and any limit assignment are ignored.
impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.identities == other.identities
            && self.comp == other.comp
    }
}

impl Eq for FinCat {}

impl FinCat {
    pub fn from_table(table: &CatTable) -> Result<FinCat> {
        let indexed = index_table(table).map_err(|r| Error::InvalidCategory {
            name: table.name.clone(),
            violations: r.violations,
        })?;
        Ok(FinCat::assemble(table.name.clone(), table.objects.clone(), indexed))
    }

    /// Builds a category from indexed data produced by a trusted
    /// construction, then re-checks the laws.
    pub(crate) fn from_indexed(
        name: String,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<MorId>,
        comp: Vec<Option<MorId>>,
    ) -> Result<FinCat> {
        let indexed = Indexed {
            arrows,
            identities,
            comp,
        };
        let mut problems = Vec::new();
        let m = indexed.arrows.len();
        for f in 0..m {
            for g in 0..m {
                if indexed.arrows[f].target == indexed.arrows[g].source {
                    match indexed.at(g, f) {
                        None => problems.push(format!("missing composite `{} ∘ {}`", indexed.name(g), indexed.name(f))),
                        Some(h)
                            if indexed.arrows[h].source != indexed.arrows[f].source
                                || indexed.arrows[h].target != indexed.arrows[g].target =>
                        {
                            problems.push(format!(
                                "composite `{} ∘ {}` lands in the wrong hom-set",
                                indexed.name(g),
                                indexed.name(f)
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
        if problems.is_empty() {
            problems = indexed.law_violations();
        }
        if !problems.is_empty() {
            return Err(Error::InvalidCategory {
                name,
                violations: problems,
            });
        }
        Ok(FinCat::assemble(name, objects, indexed))
    }

    fn assemble(name: String, objects: Vec<String>, indexed: Indexed) -> FinCat {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for (i, a) in indexed.arrows.iter().enumerate() {
            homs[a.source * n + a.target].push(i);
        }
        let obj_lookup = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let arrow_lookup = indexed
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), i))
            .collect();
        FinCat {
            name,
            objects,
            arrows: indexed.arrows,
            identities: indexed.identities,
            comp: indexed.comp,
            homs,
            obj_lookup,
            arrow_lookup,
            limits: None,
        }
    }

    /// The preorder on `objects` generated by `le`, one arrow `a<=b` for each
    /// related pair and identities `id_a`.
    pub fn preorder(name: &str, objects: &[&str], le: &[(&str, &str)]) -> Result<FinCat> {
        let n = objects.len();
        let pos: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (a, b) in le {
            let (Some(&i), Some(&j)) = (pos.get(a), pos.get(b)) else {
                return Err(Error::InvalidCategory {
                    name: name.to_string(),
                    violations: vec![format!("relation `{a} <= {b}` names an unknown object")],
                });
            };
            rel[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i * n + k] && rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        let mut arrows: Vec<Arrow> = (0..n)
            .map(|i| Arrow {
                name: format!("id_{}", objects[i]),
                source: i,
                target: i,
            })
            .collect();
        let mut id_of = vec![usize::MAX; n * n];
        for i in 0..n {
            id_of[i * n + i] = i;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && rel[i * n + j] {
                    id_of[i * n + j] = arrows.len();
                    arrows.push(Arrow {
                        name: format!("{}<={}", objects[i], objects[j]),
                        source: i,
                        target: j,
                    });
                }
            }
        }
        let m = arrows.len();
        let mut comp = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if arrows[f].target == arrows[g].source {
                    comp[g * m + f] = Some(id_of[arrows[f].source * n + arrows[g].target]);
                }
            }
        }
        FinCat::from_indexed(
            name.to_string(),
            objects.iter().map(|o| o.to_string()).collect(),
            arrows,
            (0..n).collect(),
            comp,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> FinCat {
        self.name = name.to_string();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        0..self.objects.len()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = MorId> {
        0..self.arrows.len()
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow(&self, f: MorId) -> &Arrow {
        &self.arrows[f]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_name(&self, f: MorId) -> &str {
        &self.arrows[f].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_lookup.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<MorId> {
        self.arrow_lookup.get(name).copied()
    }

    pub fn source(&self, f: MorId) -> ObjId {
        self.arrows[f].source
    }

    pub fn target(&self, f: MorId) -> ObjId {
        self.arrows[f].target
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.arrows[f].source] == f
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a * self.objects.len() + b]
    }

    /// `g ∘ f`, or `None` if the pair is not composable.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g * self.arrows.len() + f]
    }

    /// `g ∘ f`; panics if `f` does not end where `g` starts.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "`{}` ∘ `{}` is not composable in {}",
                self.arrow_name(g),
                self.arrow_name(f),
                self.name
            )
        })
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let a = &self.arrows[f];
        self.hom(a.target, a.source).iter().copied().find(|&g| {
            self.compose(g, f) == self.identities[a.source] && self.compose(f, g) == self.identities[a.target]
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    pub fn limits(&self) -> Option<&LimitAssignment> {
        self.limits.as_ref()
    }

    pub fn with_limits(mut self, limits: LimitAssignment) -> FinCat {
        self.limits = Some(limits);
        self
    }

    pub fn without_limits(mut self) -> FinCat {
        self.limits = None;
        self
    }

    /// Identity and associativity laws of the stored table.
    pub fn validate(&self) -> Report {
        let indexed = Indexed {
            arrows: self.arrows.clone(),
            identities: self.identities.clone(),
            comp: self.comp.clone(),
        };
        Report {
            violations: indexed.law_violations(),
        }
    }

    /// Name-level table reproducing this category; non-identity-law
    /// composites only.
    pub fn to_table(&self) -> CatTable {
        let mut table = CatTable {
            name: self.name.clone(),
            objects: self.objects.clone(),
            identities: self.identities.iter().map(|&i| self.arrows[i].name.clone()).collect(),
            arrows: Vec::new(),
            compositions: Vec::new(),
        };
        for (i, a) in self.arrows.iter().enumerate() {
            if !self.is_identity(i) {
                table.arrows.push((
                    a.name.clone(),
                    self.objects[a.source].clone(),
                    self.objects[a.target].clone(),
                ));
            }
        }
        for g in self.arrow_ids() {
            for f in self.arrow_ids() {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(h) = self.try_compose(g, f) {
                    table.compositions.push((
                        self.arrows[g].name.clone(),
                        self.arrows[f].name.clone(),
                        self.arrows[h].name.clone(),
                    ));
                }
            }
        }
        table
    }

    /// Same objects and arrow names with arrows reversed. Involutive.
    pub fn opposite(&self) -> FinCat {
        let m = self.arrows.len();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                comp[g * m + f] = self.comp[f * m + g];
            }
        }
        let indexed = Indexed {
            arrows,
            identities: self.identities.clone(),
            comp,
        };
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        FinCat::assemble(name, self.objects.clone(), indexed)
    }

    /// Full subcategory on `keep` (in increasing object order). Returns the
    /// subcategory and, for each of its arrows, the ambient arrow.
    pub fn full_subcategory(&self, name: &str, keep: &BTreeSet<ObjId>) -> (FinCat, Vec<MorId>) {
        let objs: Vec<ObjId> = keep.iter().copied().collect();
        let new_obj: HashMap<ObjId, ObjId> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut ambient_arrows: Vec<MorId> = objs.iter().map(|&o| self.identities[o]).collect();
        for (i, a) in self.arrows.iter().enumerate() {
            if !self.is_identity(i) && keep.contains(&a.source) && keep.contains(&a.target) {
                ambient_arrows.push(i);
            }
        }
        let new_arrow: HashMap<MorId, MorId> = ambient_arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let arrows: Vec<Arrow> = ambient_arrows
            .iter()
            .map(|&a| Arrow {
                name: self.arrows[a].name.clone(),
                source: new_obj[&self.arrows[a].source],
                target: new_obj[&self.arrows[a].target],
            })
            .collect();
        let m = arrows.len();
        let mut comp = vec![None; m * m];
        for (gi, &g) in ambient_arrows.iter().enumerate() {
            for (fi, &f) in ambient_arrows.iter().enumerate() {
                if let Some(h) = self.try_compose(g, f) {
                    comp[gi * m + fi] = Some(new_arrow[&h]);
                }
            }
        }
        let indexed = Indexed {
            arrows,
            identities: (0..objs.len()).collect(),
            comp,
        };
        let sub = FinCat::assemble(
            name.to_string(),
            objs.iter().map(|&o| self.objects[o].clone()).collect(),
            indexed,
        );
        (sub, ambient_arrows)
    }
}

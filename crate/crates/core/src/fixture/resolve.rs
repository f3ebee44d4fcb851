//! Turns parsed blocks into categories, diagrams, sites and the rest.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{Block, Document, Line, Token};
use crate::cat::{
    build_category, CatTable, EqualizerCone, FinCat, Functor, LimitAssignment, MorId, NatTrans, ObjId, Presentation,
    ProductCone,
};
use crate::pseudocone::Pseudocone;
use crate::restriction::AmbientDiagram;
use crate::sites::{Cover, Presheaf, Site, SiteDiagram};
use crate::twocat::{Orientation, TwoCat, TwoCatTable, TwoDiagram};
use crate::{Budget, Error, Result};

#[derive(Clone, Debug)]
pub enum Item {
    Category(Arc<FinCat>),
    Functor(Functor),
    TwoCat(Arc<TwoCat>),
    Diagram(Arc<TwoDiagram>),
    Cone(Pseudocone),
    Site(Arc<Site>),
    SiteDiagram(SiteDiagram),
    Ambient(AmbientDiagram),
    Presheaf(Presheaf),
}

impl Item {
    fn kind_of(variant: &str) -> &'static str {
        match variant {
            "Category" => "category",
            "Functor" => "functor",
            "TwoCat" => "twocat",
            "Diagram" => "diagram",
            "Cone" => "cone",
            "Site" => "site",
            "SiteDiagram" => "sitediagram",
            "Ambient" => "ambient",
            _ => "presheaf",
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Item::Category(_) => "category",
            Item::Functor(_) => "functor",
            Item::TwoCat(_) => "twocat",
            Item::Diagram(_) => "diagram",
            Item::Cone(_) => "cone",
            Item::Site(_) => "site",
            Item::SiteDiagram(_) => "sitediagram",
            Item::Ambient(_) => "ambient",
            Item::Presheaf(_) => "presheaf",
        }
    }
}

/// Named items in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    items: Vec<(String, Item)>,
    index: BTreeMap<(&'static str, String), usize>,
    included: BTreeSet<String>,
}

macro_rules! getter {
    ($name:ident, $all:ident, $variant:ident, $ty:ty) => {
        pub fn $name(&self, name: &str) -> Option<&$ty> {
            match self.get(stringify!($variant), name)? {
                Item::$variant(x) => Some(x),
                _ => None,
            }
        }

        pub fn $all(&self) -> impl Iterator<Item = (&str, &$ty)> {
            self.items.iter().filter_map(|(n, i)| match i {
                Item::$variant(x) => Some((n.as_str(), x)),
                _ => None,
            })
        }
    };
}

impl Workspace {
    pub fn items(&self) -> &[(String, Item)] {
        &self.items
    }

    fn get(&self, variant: &'static str, name: &str) -> Option<&Item> {
        let kind = Item::kind_of(variant);
        self.index.get(&(kind, name.to_string())).map(|&i| &self.items[i].1)
    }

    /// Adds an item; names are unique within each kind.
    pub fn insert(&mut self, name: &str, item: Item) -> Result<()> {
        let key = (item.kind(), name.to_string());
        if self.index.contains_key(&key) {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: format!("`{name}` is declared twice"),
            });
        }
        self.index.insert(key, self.items.len());
        self.items.push((name.to_string(), item));
        Ok(())
    }

    getter!(category, categories, Category, Arc<FinCat>);
    getter!(functor, functors, Functor, Functor);
    getter!(twocat, twocats, TwoCat, Arc<TwoCat>);
    getter!(diagram, diagrams, Diagram, Arc<TwoDiagram>);
    getter!(cone, cones, Cone, Pseudocone);
    getter!(site, sites, Site, Arc<Site>);
    getter!(site_diagram, site_diagrams, SiteDiagram, SiteDiagram);
    getter!(ambient, ambients, Ambient, AmbientDiagram);
    getter!(presheaf, presheaves, Presheaf, Presheaf);
}

/// Checks the shape of a line against a pattern: `_` captures one token,
/// `*` captures the rest (possibly empty), anything else must match.
fn shape<'a>(line: &'a Line, pattern: &[&str]) -> Result<Vec<&'a Token>> {
    let toks = &line.tokens;
    let mut out = Vec::new();
    let mut i = 0;
    for (k, &p) in pattern.iter().enumerate() {
        if p == "*" {
            out.extend(&toks[i..]);
            return Ok(out);
        }
        let Some(t) = toks.get(i) else {
            let last = toks.last().expect("nonempty line");
            return Err(Error::Parse {
                line: last.line,
                column: last.column + last.text.chars().count(),
                message: format!("expected `{}`", pattern[k..].join(" ")),
            });
        };
        if p == "_" {
            out.push(t);
        } else if t.text != p {
            return Err(t.error(format!("expected `{p}`, found `{}`", t.text)));
        }
        i += 1;
    }
    if let Some(t) = toks.get(i) {
        return Err(t.error(format!("unexpected token `{}`", t.text)));
    }
    Ok(out)
}

fn obj(cat: &FinCat, t: &Token) -> Result<ObjId> {
    cat.object_id(&t.text).ok_or_else(|| t.unknown("object"))
}

fn mor(cat: &FinCat, t: &Token) -> Result<MorId> {
    cat.arrow_id(&t.text).ok_or_else(|| t.unknown("arrow"))
}

fn number(t: &Token) -> Result<usize> {
    t.text
        .parse()
        .map_err(|_| t.error(format!("expected a number, found `{}`", t.text)))
}

fn unknown_line(line: &Line, block: &str) -> Error {
    line.tokens[0].error(format!("unknown `{}` line in a {block} block", line.keyword()))
}

impl Workspace {
    fn lookup<'a, T>(
        &'a self,
        t: &Token,
        kind: &'static str,
        f: impl Fn(&'a Workspace, &str) -> Option<T>,
    ) -> Result<T> {
        f(self, &t.text).ok_or_else(|| t.unknown(kind))
    }
}

pub fn resolve(doc: &Document) -> Result<Workspace> {
    resolve_with(doc, Budget::default())
}

/// Resolves a document without includes. `budget` bounds `limits auto`
/// searches.
pub fn resolve_with(doc: &Document, budget: Budget) -> Result<Workspace> {
    let mut ws = Workspace::default();
    resolve_in(&mut ws, doc, budget, &mut |t: &Token| {
        Err(t.error(format!("cannot include `{}` without a file loader", t.text)))
    })?;
    Ok(ws)
}

/// Resolves a document into `ws`, loading each include once through
/// `loader` before the document's own blocks.
pub fn resolve_in(
    ws: &mut Workspace,
    doc: &Document,
    budget: Budget,
    loader: &mut dyn FnMut(&Token) -> Result<Document>,
) -> Result<()> {
    for inc in &doc.includes {
        if ws.included.insert(inc.text.clone()) {
            let sub = loader(inc)?;
            resolve_in(ws, &sub, budget, loader)?;
        }
    }
    let ws = &mut *ws;
    for block in &doc.blocks {
        let head = &block.head;
        let kw = &head.tokens[0];
        let (name, item) = match kw.text.as_str() {
            "category" => {
                let n = shape(head, &["category", "_"])?[0];
                (n, Item::Category(Arc::new(category(block, &n.text, budget)?)))
            }
            "presentation" => {
                let a = shape(head, &["presentation", "_", "bound", "_"])?;
                (
                    a[0],
                    Item::Category(Arc::new(presentation(block, &a[0].text, number(a[1])?)?)),
                )
            }
            "functor" => {
                let a = shape(head, &["functor", "_", ":", "_", "->", "_"])?;
                let c = ws.lookup(a[1], "category", |w, n| w.category(n).cloned())?;
                let d = ws.lookup(a[2], "category", |w, n| w.category(n).cloned())?;
                let mut spec = FunctorSpec::default();
                for line in &block.body {
                    spec.line(line, false)
                        .and_then(|ok| if ok { Ok(()) } else { Err(unknown_line(line, "functor")) })?;
                }
                (a[0], Item::Functor(spec.build(ws, &c, &d, kw)?))
            }
            "twocat" => {
                let a = shape(head, &["twocat", "_", "over", "_"])?;
                let base = ws.lookup(a[1], "category", |w, n| w.category(n).cloned())?;
                (a[0], Item::TwoCat(Arc::new(twocat(block, &a[0].text, base)?)))
            }
            "diagram" => {
                let a = if head.tokens.len() == 5 {
                    shape(head, &["diagram", "_", "over", "_", "opposite"])?
                } else {
                    shape(head, &["diagram", "_", "over", "_"])?
                };
                let orientation = if head.tokens.len() == 5 {
                    Orientation::Opposite
                } else {
                    Orientation::Covariant
                };
                let index = ws.lookup(a[1], "twocat", |w, n| w.twocat(n).cloned())?;
                (
                    a[0],
                    Item::Diagram(Arc::new(diagram(ws, block, &a[0].text, index, orientation)?)),
                )
            }
            "cone" => {
                let a = shape(head, &["cone", "_", "over", "_", "vertex", "_"])?;
                let d = ws.lookup(a[1], "diagram", |w, n| w.diagram(n).cloned())?;
                let x = ws.lookup(a[2], "category", |w, n| w.category(n).cloned())?;
                (a[0], Item::Cone(cone(ws, block, d, x)?))
            }
            "site" => {
                let a = shape(head, &["site", "_", "on", "_"])?;
                let c = ws.lookup(a[1], "category", |w, n| w.category(n).cloned())?;
                (a[0], Item::Site(Arc::new(site(block, &a[0].text, c)?)))
            }
            "sitediagram" => {
                let a = shape(head, &["sitediagram", "_", "on", "_"])?;
                let d = ws.lookup(a[1], "diagram", |w, n| w.diagram(n).cloned())?;
                (a[0], Item::SiteDiagram(site_diagram(ws, block, d)?))
            }
            "ambient" => {
                let a = shape(head, &["ambient", "_", "on", "_"])?;
                let d = ws.lookup(a[1], "diagram", |w, n| w.diagram(n).cloned())?;
                (a[0], Item::Ambient(ambient(block, d)?))
            }
            "presheaf" => {
                let a = shape(head, &["presheaf", "_", "on", "_"])?;
                let c = ws.lookup(a[1], "category", |w, n| w.category(n).cloned())?;
                (a[0], Item::Presheaf(presheaf(block, c)?))
            }
            other => return Err(kw.error(format!("unknown block kind `{other}`"))),
        };
        ws.insert(&name.text, item)
            .map_err(|_| name.error(format!("`{}` is declared twice", name.text)))?;
    }
    Ok(())
}

fn category(block: &Block, name: &str, budget: Budget) -> Result<FinCat> {
    let mut objects: Vec<String> = Vec::new();
    let mut identities: BTreeMap<String, String> = BTreeMap::new();
    let mut arrows = Vec::new();
    let mut compositions = Vec::new();
    let mut le = Vec::new();
    let mut limit_lines = Vec::new();
    for line in &block.body {
        match line.keyword() {
            "objects" => {
                for t in shape(line, &["objects", "*"])? {
                    if objects.contains(&t.text) {
                        return Err(t.error(format!("object `{}` listed twice", t.text)));
                    }
                    objects.push(t.text.clone());
                }
            }
            "identity" => {
                let a = shape(line, &["identity", "_", "_"])?;
                identities.insert(a[0].text.clone(), a[1].text.clone());
            }
            "arrow" => {
                let a = shape(line, &["arrow", "_", ":", "_", "->", "_"])?;
                arrows.push((a[0].text.clone(), a[1].text.clone(), a[2].text.clone()));
            }
            "compose" => {
                let a = shape(line, &["compose", "_", "_", "=", "_"])?;
                compositions.push((a[0].text.clone(), a[1].text.clone(), a[2].text.clone()));
            }
            "le" => {
                let a = shape(line, &["le", "_", "_"])?;
                le.push((a[0].clone(), a[1].clone()));
            }
            "terminal" | "product" | "equalizer" | "limits" => limit_lines.push(line),
            _ => return Err(unknown_line(line, "category")),
        }
    }
    let cat = if le.is_empty() {
        let mut table = CatTable {
            name: name.to_string(),
            objects: objects.clone(),
            identities: objects
                .iter()
                .map(|o| identities.get(o).cloned().unwrap_or_else(|| format!("id_{o}")))
                .collect(),
            arrows,
            compositions,
        };
        table.name = name.to_string();
        FinCat::from_table(&table)?
    } else {
        if !arrows.is_empty() || !compositions.is_empty() || !identities.is_empty() {
            return Err(block.head.tokens[0].error("a category uses either `le` lines or explicit arrows"));
        }
        for (a, b) in &le {
            for t in [a, b] {
                if !objects.contains(&t.text) {
                    return Err(t.unknown("object"));
                }
            }
        }
        let objs: Vec<&str> = objects.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = le.iter().map(|(a, b)| (a.text.as_str(), b.text.as_str())).collect();
        FinCat::preorder(name, &objs, &pairs)?
    };
    if limit_lines.is_empty() {
        return Ok(cat);
    }
    let mut lim = LimitAssignment::default();
    for line in limit_lines {
        match line.keyword() {
            "limits" => {
                shape(line, &["limits", "auto"])?;
                if limit_lines_other(block) {
                    return Err(line.tokens[0].error("`limits auto` cannot be mixed with explicit limits"));
                }
                let chosen = LimitAssignment::choose(&cat, budget)?;
                return Ok(cat.with_limits(chosen));
            }
            "terminal" => {
                let a = shape(line, &["terminal", "_"])?;
                lim.terminal = Some(obj(&cat, a[0])?);
            }
            "product" => {
                let a = shape(line, &["product", "_", "_", "=", "_", ":", "_", "_"])?;
                lim.products.insert(
                    (obj(&cat, a[0])?, obj(&cat, a[1])?),
                    ProductCone {
                        apex: obj(&cat, a[2])?,
                        left: mor(&cat, a[3])?,
                        right: mor(&cat, a[4])?,
                    },
                );
            }
            _ => {
                let a = shape(line, &["equalizer", "_", "_", "=", "_", ":", "_"])?;
                lim.equalizers.insert(
                    (mor(&cat, a[0])?, mor(&cat, a[1])?),
                    EqualizerCone {
                        apex: obj(&cat, a[2])?,
                        inclusion: mor(&cat, a[3])?,
                    },
                );
            }
        }
    }
    Ok(cat.with_limits(lim))
}

fn limit_lines_other(block: &Block) -> bool {
    block
        .body
        .iter()
        .any(|l| matches!(l.keyword(), "terminal" | "product" | "equalizer"))
}

fn presentation(block: &Block, name: &str, bound: usize) -> Result<FinCat> {
    let mut p = Presentation {
        name: name.to_string(),
        objects: Vec::new(),
        generators: Vec::new(),
        relations: Vec::new(),
    };
    for line in &block.body {
        match line.keyword() {
            "objects" => p
                .objects
                .extend(shape(line, &["objects", "*"])?.iter().map(|t| t.text.clone())),
            "generator" => {
                let a = shape(line, &["generator", "_", ":", "_", "->", "_"])?;
                p.generators
                    .push((a[0].text.clone(), a[1].text.clone(), a[2].text.clone()));
            }
            "relation" => {
                let rest = shape(line, &["relation", "*"])?;
                let Some(eq) = rest.iter().position(|t| t.text == "=") else {
                    return Err(line.tokens[0].error("a relation needs `=`"));
                };
                let side = |ts: &[&Token]| -> Vec<String> {
                    ts.iter().filter(|t| t.text != "1").map(|t| t.text.clone()).collect()
                };
                p.relations.push((side(&rest[..eq]), side(&rest[eq + 1..])));
            }
            _ => return Err(unknown_line(line, "presentation")),
        }
    }
    build_category(&p, bound)
}

fn twocat(block: &Block, name: &str, base: Arc<FinCat>) -> Result<TwoCat> {
    if block.body.is_empty() {
        return Ok(TwoCat::locally_discrete(name, base));
    }
    let mut table = TwoCatTable::new(name, base);
    for line in &block.body {
        match line.keyword() {
            "cell" => {
                let a = shape(line, &["cell", "_", ":", "_", "=>", "_"])?;
                table = table.cell(&a[0].text, &a[1].text, &a[2].text);
            }
            "vcompose" => {
                let a = shape(line, &["vcompose", "_", "_", "=", "_"])?;
                table = table.vcompose(&a[0].text, &a[1].text, &a[2].text);
            }
            "hcompose" => {
                let a = shape(line, &["hcompose", "_", "_", "=", "_"])?;
                table = table.hcompose(&a[0].text, &a[1].text, &a[2].text);
            }
            _ => return Err(unknown_line(line, "twocat")),
        }
    }
    TwoCat::from_table(&table)
}

/// Functor given as `identity`, `= Name`, or inline `ob`/`mor` lines.
#[derive(Default)]
struct FunctorSpec<'a> {
    identity: bool,
    named: Option<&'a Token>,
    ob: Vec<(&'a Token, &'a Token)>,
    mor: Vec<(&'a Token, &'a Token)>,
    first: Option<&'a Token>,
}

impl<'a> FunctorSpec<'a> {
    /// Consumes `ob x y` / `mor f g` lines, or `ob k x y` / `mor k f g`
    /// when `keyed`; returns false for other lines.
    fn line(&mut self, line: &'a Line, keyed: bool) -> Result<bool> {
        let skip = usize::from(keyed);
        let toks = &line.tokens;
        let kw = line.keyword();
        if kw != "ob" && kw != "mor" {
            return Ok(false);
        }
        if toks.len() != 3 + skip {
            return Err(toks[0].error(format!("expected `{kw}{} _ _`", if skip == 1 { " _" } else { "" })));
        }
        self.first.get_or_insert(&toks[0]);
        let pair = (&toks[1 + skip], &toks[2 + skip]);
        if kw == "ob" {
            self.ob.push(pair);
        } else {
            self.mor.push(pair);
        }
        Ok(true)
    }

    fn build(&self, ws: &Workspace, c: &Arc<FinCat>, d: &Arc<FinCat>, at_token: &Token) -> Result<Functor> {
        let here = self.first.unwrap_or(at_token);
        if self.identity {
            if **c != **d {
                return Err(here.error("`identity` needs equal source and target"));
            }
            return Ok(Functor::identity(c));
        }
        if let Some(n) = self.named {
            let f = ws.functor(&n.text).ok_or_else(|| n.unknown("functor"))?;
            if *f.source != **c || *f.target != **d {
                return Err(n.error(format!("functor `{}` has the wrong source or target", n.text)));
            }
            return Ok(Functor {
                source: c.clone(),
                target: d.clone(),
                ..f.clone()
            });
        }
        let mut obj_map = vec![None; c.object_count()];
        for (x, y) in &self.ob {
            obj_map[obj(c, x)?] = Some(obj(d, y)?);
        }
        let obj_map: Vec<ObjId> = obj_map
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| here.error(format!("object `{}` is not mapped", c.object_name(x)))))
            .collect::<Result<_>>()?;
        let mut mor_map: Vec<Option<MorId>> = c
            .arrow_ids()
            .map(|f| c.is_identity(f).then(|| d.identity(obj_map[c.source(f)])))
            .collect();
        for (f, g) in &self.mor {
            mor_map[mor(c, f)?] = Some(mor(d, g)?);
        }
        let mor_map: Vec<MorId> = mor_map
            .into_iter()
            .enumerate()
            .map(|(f, g)| g.ok_or_else(|| here.error(format!("arrow `{}` is not mapped", c.arrow_name(f)))))
            .collect::<Result<_>>()?;
        Functor::new(c.clone(), d.clone(), obj_map, mor_map)
    }
}

/// Collects `transition k ...` / `leg k ...` and keyed `ob k x y`,
/// `mor k f g` lines into one functor spec per key.
fn keyed_specs<'a>(
    block: &'a Block,
    keyword: &str,
    other: &[&str],
) -> Result<(BTreeMap<String, FunctorSpec<'a>>, Vec<&'a Line>)> {
    let mut specs: BTreeMap<String, FunctorSpec<'a>> = BTreeMap::new();
    let mut rest = Vec::new();
    for line in &block.body {
        let kw = line.keyword();
        if kw == keyword {
            let toks = &line.tokens;
            let key = toks
                .get(1)
                .ok_or_else(|| toks[0].error(format!("expected `{keyword} _ ...`")))?;
            let spec = specs.entry(key.text.clone()).or_default();
            spec.first.get_or_insert(&toks[0]);
            match (toks.get(2).map(|t| t.text.as_str()), toks.len()) {
                (Some("identity"), 3) => spec.identity = true,
                (Some("="), 4) => spec.named = Some(&toks[3]),
                _ => return Err(toks[0].error(format!("expected `{keyword} _ identity` or `{keyword} _ = _`"))),
            }
        } else if kw == "ob" || kw == "mor" {
            let key = line.tokens.get(1).ok_or_else(|| line.tokens[0].error("missing key"))?;
            specs.entry(key.text.clone()).or_default().line(line, true)?;
        } else if other.contains(&kw) {
            rest.push(line);
        } else {
            return Err(unknown_line(line, block.head.keyword()));
        }
    }
    Ok((specs, rest))
}

fn key_token<'a>(spec: &FunctorSpec<'a>) -> &'a Token {
    spec.first.expect("specs are created from lines")
}

fn diagram(
    ws: &Workspace,
    block: &Block,
    name: &str,
    index: Arc<TwoCat>,
    orientation: Orientation,
) -> Result<TwoDiagram> {
    let (specs, rest) = keyed_specs(block, "transition", &["fiber", "component"])?;
    let internal = match orientation {
        Orientation::Covariant => index.clone(),
        Orientation::Opposite => Arc::new(index.opposite_two_cat()),
    };
    let base = internal.base();
    let mut fibers: Vec<Option<Arc<FinCat>>> = vec![None; base.object_count()];
    let mut components: BTreeMap<(usize, ObjId), MorId> = BTreeMap::new();
    let mut component_lines = Vec::new();
    for line in &rest {
        if line.keyword() == "fiber" {
            let a = shape(line, &["fiber", "_", "_"])?;
            let x = obj(base, a[0])?;
            fibers[x] = Some(
                ws.category(&a[1].text)
                    .cloned()
                    .ok_or_else(|| a[1].unknown("category"))?,
            );
        } else {
            component_lines.push(*line);
        }
    }
    let fibers: Vec<Arc<FinCat>> = fibers
        .into_iter()
        .enumerate()
        .map(|(x, f)| f.ok_or_else(|| block.head.tokens[1].error(format!("no fiber over `{}`", base.object_name(x)))))
        .collect::<Result<_>>()?;
    for (key, spec) in &specs {
        if base.arrow_id(key).is_none() {
            return Err(key_token(spec).error(format!("unknown 1-cell `{key}`")));
        }
    }
    let mut transitions = Vec::new();
    for u in base.arrow_ids() {
        let (a, b) = (base.source(u), base.target(u));
        let t = match specs.get(base.arrow_name(u)) {
            Some(spec) => spec.build(ws, &fibers[a], &fibers[b], &block.head.tokens[0])?,
            None if base.is_identity(u) => Functor::identity(&fibers[a]),
            None => {
                return Err(block.head.tokens[1].error(format!("no transition for 1-cell `{}`", base.arrow_name(u))))
            }
        };
        transitions.push(t);
    }
    for line in component_lines {
        let a = shape(line, &["component", "_", "_", "_"])?;
        let c = internal.cell_id(&a[0].text).ok_or_else(|| a[0].unknown("2-cell"))?;
        let src = base.source(internal.cell(c).source);
        let tgt = base.target(internal.cell(c).source);
        let x = obj(&fibers[src], a[1])?;
        components.insert((c, x), mor(&fibers[tgt], a[2])?);
    }
    let mut cells = Vec::new();
    for c in internal.cell_ids() {
        let cell = internal.cell(c);
        let (s, t) = (&transitions[cell.source], &transitions[cell.target]);
        let comps: Vec<MorId> = if internal.is_unit(c) {
            fibers[base.source(cell.source)]
                .objects()
                .map(|x| {
                    components
                        .get(&(c, x))
                        .copied()
                        .unwrap_or_else(|| s.target.identity(s.ob(x)))
                })
                .collect()
        } else {
            fibers[base.source(cell.source)]
                .objects()
                .map(|x| {
                    components.get(&(c, x)).copied().ok_or_else(|| {
                        block.head.tokens[1].error(format!(
                            "no component of `{}` at `{}`",
                            internal.cell_name(c),
                            fibers[base.source(cell.source)].object_name(x)
                        ))
                    })
                })
                .collect::<Result<_>>()?
        };
        cells.push(NatTrans::new(s.clone(), t.clone(), comps)?);
    }
    TwoDiagram::new(name, index, fibers, transitions, cells, orientation)
}

fn cone(ws: &Workspace, block: &Block, d: Arc<TwoDiagram>, x: Arc<FinCat>) -> Result<Pseudocone> {
    let (specs, rest) = keyed_specs(block, "leg", &["coherence"])?;
    let base = d.index.base();
    for (key, spec) in &specs {
        if base.object_id(key).is_none() {
            return Err(key_token(spec).error(format!("unknown index object `{key}`")));
        }
    }
    let legs: Vec<Functor> = base
        .objects()
        .map(|a| match specs.get(base.object_name(a)) {
            Some(spec) => spec.build(ws, d.fiber(a), &x, &block.head.tokens[0]),
            None => Err(block.head.tokens[1].error(format!("no leg over `{}`", base.object_name(a)))),
        })
        .collect::<Result<_>>()?;
    let mut given: BTreeMap<(MorId, ObjId), MorId> = BTreeMap::new();
    for line in rest {
        let a = shape(line, &["coherence", "_", "_", "_"])?;
        let u = mor(base, a[0])?;
        let xo = obj(d.fiber(base.source(u)), a[1])?;
        given.insert((u, xo), mor(&x, a[2])?);
    }
    let coherence = base
        .arrow_ids()
        .map(|u| {
            let (a, b) = (base.source(u), base.target(u));
            let target = legs[b].compose(d.transition(u));
            let comps = d
                .fiber(a)
                .objects()
                .map(|y| given.get(&(u, y)).copied().unwrap_or_else(|| x.identity(legs[a].ob(y))))
                .collect();
            NatTrans::new(legs[a].clone(), target, comps)
        })
        .collect::<Result<_>>()?;
    Ok(Pseudocone {
        diagram: d,
        vertex: x,
        legs,
        coherence,
    })
}

fn site(block: &Block, name: &str, c: Arc<FinCat>) -> Result<Site> {
    let mut generators = BTreeSet::new();
    let mut basis = Vec::new();
    for line in &block.body {
        match line.keyword() {
            "generators" => {
                let toks = shape(line, &["generators", "*"])?;
                if toks.len() == 1 && toks[0].text == "all" && c.object_id("all").is_none() {
                    generators.extend(c.objects());
                } else {
                    for t in toks {
                        generators.insert(obj(&c, t)?);
                    }
                }
            }
            "cover" => {
                let a = shape(line, &["cover", "_", ":", "*"])?;
                let target = obj(&c, a[0])?;
                let legs = a[1..].iter().map(|t| mor(&c, t)).collect::<Result<Vec<_>>>()?;
                basis.push(Cover::new(target, legs));
            }
            _ => return Err(unknown_line(line, "site")),
        }
    }
    Site::new(name, c, basis, generators)
}

fn site_diagram(ws: &Workspace, block: &Block, d: Arc<TwoDiagram>) -> Result<SiteDiagram> {
    let base = d.index.base();
    let mut sites = vec![None; base.object_count()];
    for line in &block.body {
        if line.keyword() != "site" {
            return Err(unknown_line(line, "sitediagram"));
        }
        let a = shape(line, &["site", "_", "_"])?;
        sites[obj(base, a[0])?] = Some(ws.site(&a[1].text).cloned().ok_or_else(|| a[1].unknown("site"))?);
    }
    let sites = sites
        .into_iter()
        .enumerate()
        .map(|(x, s)| s.ok_or_else(|| block.head.tokens[1].error(format!("no site over `{}`", base.object_name(x)))))
        .collect::<Result<_>>()?;
    SiteDiagram::new(d, sites)
}

fn ambient(block: &Block, d: Arc<TwoDiagram>) -> Result<AmbientDiagram> {
    let base = d.index.base();
    let mut generators = vec![BTreeSet::new(); base.object_count()];
    for line in &block.body {
        if line.keyword() != "generators" {
            return Err(unknown_line(line, "ambient"));
        }
        let a = shape(line, &["generators", "_", "*"])?;
        let x = obj(base, a[0])?;
        for t in &a[1..] {
            generators[x].insert(obj(d.fiber(x), t)?);
        }
    }
    AmbientDiagram::new(d, generators)
}

fn presheaf(block: &Block, c: Arc<FinCat>) -> Result<Presheaf> {
    if let [line] = block.body.as_slice() {
        if line.keyword() == "representable" {
            let a = shape(line, &["representable", "_"])?;
            return Ok(Presheaf::representable(&c, obj(&c, a[0])?));
        }
    }
    let mut sets = vec![None; c.object_count()];
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; c.arrow_count()];
    for line in &block.body {
        match line.keyword() {
            "set" => {
                let a = shape(line, &["set", "_", "_"])?;
                sets[obj(&c, a[0])?] = Some(number(a[1])?);
            }
            "map" => {
                let a = shape(line, &["map", "_", "*"])?;
                maps[mor(&c, a[0])?] = Some(a[1..].iter().map(|t| number(t)).collect::<Result<_>>()?);
            }
            _ => return Err(unknown_line(line, "presheaf")),
        }
    }
    let here = &block.head.tokens[1];
    let sets: Vec<usize> = sets
        .into_iter()
        .enumerate()
        .map(|(x, s)| s.ok_or_else(|| here.error(format!("no set for `{}`", c.object_name(x)))))
        .collect::<Result<_>>()?;
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(f, m)| match m {
            Some(m) => Ok(m),
            None if c.is_identity(f) => Ok((0..sets[c.source(f)]).collect()),
            None => Err(here.error(format!("no map for `{}`", c.arrow_name(f)))),
        })
        .collect::<Result<_>>()?;
    Presheaf::new(c, sets, maps)
}

//! Canonical printing of resolved items back into fixture blocks.

use super::{Block, Document, Item, Line, Workspace, VERSION};
use crate::cat::{FinCat, Functor};
use crate::pseudocone::Pseudocone;
use crate::restriction::AmbientDiagram;
use crate::sites::{Presheaf, Site, SiteDiagram};
use crate::twocat::{Orientation, TwoCat, TwoDiagram};

fn line<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Line {
    Line::bare(words)
}

fn block(head: Line, body: Vec<Line>) -> Block {
    Block { head, body }
}

pub fn print_category(c: &FinCat) -> Block {
    let table = c.to_table();
    let mut body = vec![line(
        std::iter::once("objects".to_string()).chain(table.objects.iter().cloned()),
    )];
    for (o, id) in table.objects.iter().zip(&table.identities) {
        if *id != format!("id_{o}") {
            body.push(line(["identity", o, id]));
        }
    }
    for (f, a, b) in &table.arrows {
        body.push(line(["arrow", f, ":", a, "->", b]));
    }
    for (g, f, h) in &table.compositions {
        body.push(line(["compose", g, f, "=", h]));
    }
    if let Some(lim) = c.limits() {
        if let Some(t) = lim.terminal {
            body.push(line(["terminal", c.object_name(t)]));
        }
        for (&(a, b), p) in &lim.products {
            body.push(line([
                "product",
                c.object_name(a),
                c.object_name(b),
                "=",
                c.object_name(p.apex),
                ":",
                c.arrow_name(p.left),
                c.arrow_name(p.right),
            ]));
        }
        for (&(f, g), q) in &lim.equalizers {
            body.push(line([
                "equalizer",
                c.arrow_name(f),
                c.arrow_name(g),
                "=",
                c.object_name(q.apex),
                ":",
                c.arrow_name(q.inclusion),
            ]));
        }
    }
    block(line(["category", c.name()]), body)
}

fn is_identity_functor(f: &Functor) -> bool {
    *f.source == *f.target
        && f.obj_map.iter().enumerate().all(|(i, &j)| i == j)
        && f.mor_map.iter().enumerate().all(|(i, &j)| i == j)
}

/// `ob`/`mor` lines for a functor, prefixed with `key` when given.
fn functor_lines(f: &Functor, key: Option<&str>) -> Vec<Line> {
    let (c, d) = (&*f.source, &*f.target);
    let prefix = |kw: &str| -> Vec<String> { std::iter::once(kw.to_string()).chain(key.map(str::to_string)).collect() };
    let mut out = Vec::new();
    for x in c.objects() {
        let mut w = prefix("ob");
        w.extend([c.object_name(x).to_string(), d.object_name(f.ob(x)).to_string()]);
        out.push(line(w));
    }
    for g in c.arrow_ids().filter(|&g| !c.is_identity(g)) {
        let mut w = prefix("mor");
        w.extend([c.arrow_name(g).to_string(), d.arrow_name(f.mor(g)).to_string()]);
        out.push(line(w));
    }
    out
}

fn print_functor(name: &str, f: &Functor) -> Block {
    block(
        line(["functor", name, ":", f.source.name(), "->", f.target.name()]),
        functor_lines(f, None),
    )
}

fn print_twocat(t: &TwoCat) -> Block {
    let table = t.to_table();
    let mut body = Vec::new();
    for (g, u, v) in &table.cells {
        body.push(line(["cell", g, ":", u, "=>", v]));
    }
    for (b, a, c) in &table.vcompose {
        body.push(line(["vcompose", b, a, "=", c]));
    }
    for (b, a, c) in &table.hcompose {
        body.push(line(["hcompose", b, a, "=", c]));
    }
    block(line(["twocat", t.name(), "over", t.base().name()]), body)
}

fn print_diagram(d: &TwoDiagram) -> Block {
    let base = d.index.base();
    let head = match d.orientation {
        Orientation::Covariant => line(["diagram", &d.name, "over", d.index.name()]),
        Orientation::Opposite => {
            let written = d.index.opposite_two_cat();
            line(["diagram", &d.name, "over", written.name(), "opposite"])
        }
    };
    let mut body = Vec::new();
    for a in base.objects() {
        body.push(line(["fiber", base.object_name(a), d.fiber(a).name()]));
    }
    for u in base.arrow_ids().filter(|&u| !base.is_identity(u)) {
        let t = d.transition(u);
        if is_identity_functor(t) {
            body.push(line(["transition", base.arrow_name(u), "identity"]));
        } else {
            body.extend(functor_lines(t, Some(base.arrow_name(u))));
        }
    }
    for c in d.index.cell_ids().filter(|&c| !d.index.is_unit(c)) {
        let fa = d.fiber(base.source(d.index.cell(c).source));
        let fb = d.fiber(base.target(d.index.cell(c).source));
        for x in fa.objects() {
            body.push(line([
                "component",
                d.index.cell_name(c),
                fa.object_name(x),
                fb.arrow_name(d.cell(c).component(x)),
            ]));
        }
    }
    block(head, body)
}

fn print_cone(name: &str, h: &Pseudocone) -> Block {
    let d = &*h.diagram;
    let base = d.index.base();
    let x = &*h.vertex;
    let mut body = Vec::new();
    for a in base.objects() {
        if is_identity_functor(&h.legs[a]) {
            body.push(line(["leg", base.object_name(a), "identity"]));
        } else {
            body.extend(functor_lines(&h.legs[a], Some(base.object_name(a))));
        }
    }
    for u in base.arrow_ids() {
        let fa = d.fiber(base.source(u));
        for y in fa.objects() {
            let f = h.coherence_at(u, y);
            if !x.is_identity(f) {
                body.push(line([
                    "coherence",
                    base.arrow_name(u),
                    fa.object_name(y),
                    x.arrow_name(f),
                ]));
            }
        }
    }
    block(line(["cone", name, "over", &d.name, "vertex", x.name()]), body)
}

fn print_site(s: &Site) -> Block {
    let c = &*s.category;
    let mut body = vec![line(
        std::iter::once("generators").chain(s.generators.iter().map(|&g| c.object_name(g))),
    )];
    for k in &s.basis {
        body.push(line(
            ["cover", c.object_name(k.target), ":"]
                .into_iter()
                .chain(k.legs.iter().map(|&f| c.arrow_name(f))),
        ));
    }
    block(line(["site", &s.name, "on", c.name()]), body)
}

fn print_site_diagram(name: &str, d: &SiteDiagram) -> Block {
    let base = d.diagram.index.base();
    let body = base
        .objects()
        .map(|a| line(["site", base.object_name(a), &d.sites[a].name]))
        .collect();
    block(line(["sitediagram", name, "on", &d.diagram.name]), body)
}

fn print_ambient(name: &str, a: &AmbientDiagram) -> Block {
    let d = &*a.diagram;
    let base = d.index.base();
    let body = base
        .objects()
        .map(|x| {
            line(
                ["generators", base.object_name(x)]
                    .into_iter()
                    .chain(a.generators[x].iter().map(|&g| d.fiber(x).object_name(g))),
            )
        })
        .collect();
    block(line(["ambient", name, "on", &d.name]), body)
}

fn print_presheaf(name: &str, p: &Presheaf) -> Block {
    let c = &*p.category;
    let mut body: Vec<Line> = c
        .objects()
        .map(|x| line(["set".to_string(), c.object_name(x).to_string(), p.sets[x].to_string()]))
        .collect();
    for f in c.arrow_ids().filter(|&f| !c.is_identity(f)) {
        body.push(line(
            ["map".to_string(), c.arrow_name(f).to_string()]
                .into_iter()
                .chain(p.maps[f].iter().map(|v| v.to_string())),
        ));
    }
    block(line(["presheaf", name, "on", c.name()]), body)
}

/// Every item in declaration order, in canonical form.
pub fn print_workspace(ws: &Workspace) -> Document {
    let blocks = ws
        .items()
        .iter()
        .map(|(name, item)| match item {
            Item::Category(c) => print_category(c),
            Item::Functor(f) => print_functor(name, f),
            Item::TwoCat(t) => print_twocat(t),
            Item::Diagram(d) => print_diagram(d),
            Item::Cone(h) => print_cone(name, h),
            Item::Site(s) => print_site(s),
            Item::SiteDiagram(d) => print_site_diagram(name, d),
            Item::Ambient(a) => print_ambient(name, a),
            Item::Presheaf(p) => print_presheaf(name, p),
        })
        .collect();
    Document {
        version: VERSION,
        includes: Vec::new(),
        blocks,
    }
}

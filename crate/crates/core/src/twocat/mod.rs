//! Finite strict 2-categories.
//!
//! A [`TwoCat`] has a [`FinCat`] of objects and 1-cells, plus 2-cells with
//! vertical and horizontal composition tables. Every 1-cell `u` carries a
//! unit 2-cell named `1_u`; unit cells come first, numbered like their
//! 1-cells, followed by the declared 2-cells.
//!
//! Horizontal composition is written like composition of 1-cells: for
//! `α: f ⇒ f'` with `f: A → B` and `β: g ⇒ g'` with `g: B → C`, the table
//! entry `(β, α, β*α)` gives `β*α: g∘f ⇒ g'∘f'`.

mod diagram;
mod filtered;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

pub use diagram::{check_two_functor, Orientation, TwoDiagram};
pub use filtered::check_2filtered;

use crate::cat::{FinCat, MorId, ObjId};
use crate::{Error, Report, Result};

pub type CellId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub source: MorId,
    pub target: MorId,
}

/// Name-level 2-category description, possibly inconsistent.
///
/// Entries forced by the unit laws may be omitted: `1_v ∘ α`, `α ∘ 1_u`,
/// `1_g * 1_f`, and horizontal composites with units of identity 1-cells.
#[derive(Clone, Debug)]
pub struct TwoCatTable {
    pub name: String,
    pub base: Arc<FinCat>,
    /// Non-unit 2-cells: `(name, source 1-cell, target 1-cell)`.
    pub cells: Vec<(String, String, String)>,
    /// `(β, α, β∘α)`.
    pub vcompose: Vec<(String, String, String)>,
    /// `(β, α, β*α)`.
    pub hcompose: Vec<(String, String, String)>,
}

impl TwoCatTable {
    pub fn new(name: &str, base: Arc<FinCat>) -> Self {
        TwoCatTable {
            name: name.to_string(),
            base,
            cells: Vec::new(),
            vcompose: Vec::new(),
            hcompose: Vec::new(),
        }
    }

    pub fn cell(mut self, name: &str, source: &str, target: &str) -> Self {
        self.cells
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn vcompose(mut self, b: &str, a: &str, c: &str) -> Self {
        self.vcompose.push((b.to_string(), a.to_string(), c.to_string()));
        self
    }

    pub fn hcompose(mut self, b: &str, a: &str, c: &str) -> Self {
        self.hcompose.push((b.to_string(), a.to_string(), c.to_string()));
        self
    }
}

pub(crate) fn unit_name(base: &FinCat, u: MorId) -> String {
    format!("1_{}", base.arrow_name(u))
}

struct Tables<'a> {
    base: &'a FinCat,
    cells: Vec<Cell>,
    vcomp: Vec<Option<CellId>>,
    hcomp: Vec<Option<CellId>>,
}

impl Tables<'_> {
    fn v(&self, b: CellId, a: CellId) -> Option<CellId> {
        self.vcomp[b * self.cells.len() + a]
    }

    fn h(&self, b: CellId, a: CellId) -> Option<CellId> {
        self.hcomp[b * self.cells.len() + a]
    }

    fn name(&self, c: CellId) -> &str {
        &self.cells[c].name
    }

    fn v_composable(&self, b: CellId, a: CellId) -> bool {
        self.cells[a].target == self.cells[b].source
    }

    fn h_composable(&self, b: CellId, a: CellId) -> bool {
        self.base.target(self.cells[a].source) == self.base.source(self.cells[b].source)
    }

    /// Category laws of each hom-category, horizontal unit and associativity
    /// laws, and interchange. Assumes total, well-typed tables.
    fn law_violations(&self) -> Vec<String> {
        let base = self.base;
        let n = self.cells.len();
        let mut out = Vec::new();
        let unit = |u: MorId| u;
        for a in 0..n {
            let (s, t) = (self.cells[a].source, self.cells[a].target);
            if self.v(unit(t), a) != Some(a) || self.v(a, unit(s)) != Some(a) {
                out.push(format!("vertical unit law fails at `{}`", self.name(a)));
            }
            let (x, y) = (base.source(s), base.target(s));
            if self.h(unit(base.identity(y)), a) != Some(a) || self.h(a, unit(base.identity(x))) != Some(a) {
                out.push(format!("horizontal unit law fails at `{}`", self.name(a)));
            }
        }
        for f in base.arrow_ids() {
            for g in base.arrow_ids() {
                if let Some(gf) = base.try_compose(g, f) {
                    if self.h(unit(g), unit(f)) != Some(unit(gf)) {
                        out.push(format!(
                            "`1_{} * 1_{}` is not `1_{}`",
                            base.arrow_name(g),
                            base.arrow_name(f),
                            base.arrow_name(gf)
                        ));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.v_composable(b, a) {
                    let ba = self.v(b, a).expect("total");
                    for c in 0..n {
                        if self.v_composable(c, b) {
                            let l = self.v(c, ba).expect("total");
                            let r = self.v(self.v(c, b).expect("total"), a).expect("total");
                            if l != r {
                                out.push(format!(
                                    "vertical associativity fails at `{}`, `{}`, `{}`",
                                    self.name(c),
                                    self.name(b),
                                    self.name(a)
                                ));
                            }
                        }
                    }
                }
                if self.h_composable(b, a) {
                    let ba = self.h(b, a).expect("total");
                    for c in 0..n {
                        if self.h_composable(c, b) {
                            let l = self.h(c, ba).expect("total");
                            let r = self.h(self.h(c, b).expect("total"), a).expect("total");
                            if l != r {
                                out.push(format!(
                                    "horizontal associativity fails at `{}`, `{}`, `{}`",
                                    self.name(c),
                                    self.name(b),
                                    self.name(a)
                                ));
                            }
                        }
                    }
                }
            }
        }
        // (b2 ∘ b1) * (a2 ∘ a1) = (b2 * a2) ∘ (b1 * a1)
        for a1 in 0..n {
            for a2 in 0..n {
                if !self.v_composable(a2, a1) {
                    continue;
                }
                for b1 in 0..n {
                    if !self.h_composable(b1, a1) {
                        continue;
                    }
                    for b2 in 0..n {
                        if !self.v_composable(b2, b1) {
                            continue;
                        }
                        let l = self
                            .h(self.v(b2, b1).expect("total"), self.v(a2, a1).expect("total"))
                            .expect("total");
                        let r = self
                            .v(self.h(b2, a2).expect("total"), self.h(b1, a1).expect("total"))
                            .expect("total");
                        if l != r {
                            out.push(format!(
                                "interchange fails at `{}`, `{}`, `{}`, `{}`",
                                self.name(b2),
                                self.name(b1),
                                self.name(a2),
                                self.name(a1)
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Lists every violated constraint of a 2-category table: well-formedness
/// first, then (only if well formed) the enrichment and interchange laws.
pub fn validate_two_cat(table: &TwoCatTable) -> Report {
    match index_two_table(table) {
        Ok(t) => Report {
            violations: t.law_violations(),
        },
        Err(r) => r,
    }
}

fn index_two_table(table: &TwoCatTable) -> std::result::Result<Tables<'_>, Report> {
    let base = &*table.base;
    let mut report = Report::default();
    let mut cells: Vec<Cell> = base
        .arrow_ids()
        .map(|u| Cell {
            name: unit_name(base, u),
            source: u,
            target: u,
        })
        .collect();
    for (name, s, t) in &table.cells {
        match (base.arrow_id(s), base.arrow_id(t)) {
            (Some(s), Some(t)) if base.source(s) == base.source(t) && base.target(s) == base.target(t) => {
                cells.push(Cell {
                    name: name.clone(),
                    source: s,
                    target: t,
                })
            }
            (Some(_), Some(_)) => report.push(format!("2-cell `{name}` joins non-parallel 1-cells")),
            _ => report.push(format!("2-cell `{name}` names an unknown 1-cell")),
        }
    }
    let mut ids: HashMap<&str, CellId> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        if ids.insert(c.name.as_str(), i).is_some() {
            report.push(format!("duplicate 2-cell `{}`", c.name));
        }
    }
    let n = cells.len();
    let mut vcomp = vec![None; n * n];
    let mut hcomp = vec![None; n * n];
    let mut vseen: HashSet<(CellId, CellId)> = HashSet::new();
    let mut hseen: HashSet<(CellId, CellId)> = HashSet::new();
    for (horizontal, entries) in [(false, &table.vcompose), (true, &table.hcompose)] {
        let sym = if horizontal { "*" } else { "∘" };
        for (b, a, c) in entries {
            let (Some(&bi), Some(&ai), Some(&ci)) = (ids.get(b.as_str()), ids.get(a.as_str()), ids.get(c.as_str()))
            else {
                report.push(format!("entry `{b} {sym} {a} = {c}` names an unknown 2-cell"));
                continue;
            };
            let (ca, cb, cc) = (&cells[ai], &cells[bi], &cells[ci]);
            let expected = if horizontal {
                if base.target(ca.source) != base.source(cb.source) {
                    report.push(format!("`{b} {sym} {a}` is not composable"));
                    continue;
                }
                (base.compose(cb.source, ca.source), base.compose(cb.target, ca.target))
            } else {
                if ca.target != cb.source {
                    report.push(format!("`{b} {sym} {a}` is not composable"));
                    continue;
                }
                (ca.source, cb.target)
            };
            if (cc.source, cc.target) != expected {
                report.push(format!("entry `{b} {sym} {a} = {c}` has the wrong boundary"));
                continue;
            }
            let (table, seen) = if horizontal {
                (&mut hcomp, &mut hseen)
            } else {
                (&mut vcomp, &mut vseen)
            };
            if !seen.insert((bi, ai)) {
                if table[bi * n + ai] != Some(ci) {
                    report.push(format!("conflicting entries for `{b} {sym} {a}`"));
                }
                continue;
            }
            table[bi * n + ai] = Some(ci);
        }
    }
    // entries forced by unit laws
    let fill = |table: &mut Vec<Option<CellId>>, seen: &mut HashSet<(CellId, CellId)>, b, a, c| {
        if seen.insert((b, a)) {
            table[b * n + a] = Some(c);
        }
    };
    for (a, cell) in cells.iter().enumerate() {
        let (s, t) = (cell.source, cell.target);
        fill(&mut vcomp, &mut vseen, t, a, a);
        fill(&mut vcomp, &mut vseen, a, s, a);
        let (x, y) = (base.source(s), base.target(s));
        fill(&mut hcomp, &mut hseen, base.identity(y), a, a);
        fill(&mut hcomp, &mut hseen, a, base.identity(x), a);
    }
    for f in base.arrow_ids() {
        for g in base.arrow_ids() {
            if let Some(gf) = base.try_compose(g, f) {
                fill(&mut hcomp, &mut hseen, g, f, gf);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if cells[a].target == cells[b].source && !vseen.contains(&(b, a)) {
                report.push(format!(
                    "missing vertical composite `{} ∘ {}`",
                    cells[b].name, cells[a].name
                ));
            }
            if base.target(cells[a].source) == base.source(cells[b].source) && !hseen.contains(&(b, a)) {
                report.push(format!(
                    "missing horizontal composite `{} * {}`",
                    cells[b].name, cells[a].name
                ));
            }
        }
    }
    if report.is_ok() {
        Ok(Tables {
            base,
            cells,
            vcomp,
            hcomp,
        })
    } else {
        Err(report)
    }
}

/// A validated finite strict 2-category.
#[derive(Clone)]
pub struct TwoCat {
    name: String,
    base: Arc<FinCat>,
    cells: Vec<Cell>,
    vcomp: Vec<Option<CellId>>,
    hcomp: Vec<Option<CellId>>,
    between: HashMap<(MorId, MorId), Vec<CellId>>,
    lookup: HashMap<String, CellId>,
}

impl fmt::Debug for TwoCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TwoCat({}: {} objects, {} 1-cells, {} 2-cells)",
            self.name,
            self.base.object_count(),
            self.base.arrow_count(),
            self.cells.len()
        )
    }
}

impl PartialEq for TwoCat {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.cells == other.cells && self.vcomp == other.vcomp && self.hcomp == other.hcomp
    }
}

impl Eq for TwoCat {}

impl TwoCat {
    pub fn from_table(table: &TwoCatTable) -> Result<TwoCat> {
        let tables = index_two_table(table).map_err(|r| Error::InvalidTwoCat {
            name: table.name.clone(),
            violations: r.violations,
        })?;
        let laws = tables.law_violations();
        if !laws.is_empty() {
            return Err(Error::InvalidTwoCat {
                name: table.name.clone(),
                violations: laws,
            });
        }
        let Tables {
            cells, vcomp, hcomp, ..
        } = tables;
        Ok(TwoCat::assemble(
            table.name.clone(),
            table.base.clone(),
            cells,
            vcomp,
            hcomp,
        ))
    }

    /// The 1-category `base` with unit 2-cells only.
    pub fn locally_discrete(name: &str, base: Arc<FinCat>) -> TwoCat {
        TwoCat::from_table(&TwoCatTable::new(name, base)).expect("unit cells satisfy every law")
    }

    fn assemble(
        name: String,
        base: Arc<FinCat>,
        cells: Vec<Cell>,
        vcomp: Vec<Option<CellId>>,
        hcomp: Vec<Option<CellId>>,
    ) -> TwoCat {
        let mut between: HashMap<(MorId, MorId), Vec<CellId>> = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            between.entry((c.source, c.target)).or_default().push(i);
        }
        let lookup = cells.iter().enumerate().map(|(i, c)| (c.name.clone(), i)).collect();
        TwoCat {
            name,
            base,
            cells,
            vcomp,
            hcomp,
            between,
            lookup,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn object_count(&self) -> usize {
        self.base.object_count()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        self.base.objects()
    }

    pub fn one_cells(&self) -> impl Iterator<Item = MorId> {
        self.base.arrow_ids()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> {
        0..self.cells.len()
    }

    pub fn cell(&self, c: CellId) -> &Cell {
        &self.cells[c]
    }

    pub fn cell_name(&self, c: CellId) -> &str {
        &self.cells[c].name
    }

    pub fn cell_id(&self, name: &str) -> Option<CellId> {
        self.lookup.get(name).copied()
    }

    pub fn unit(&self, u: MorId) -> CellId {
        u
    }

    pub fn is_unit(&self, c: CellId) -> bool {
        c < self.base.arrow_count()
    }

    /// 2-cells `s ⇒ t`.
    pub fn cells_between(&self, s: MorId, t: MorId) -> &[CellId] {
        self.between.get(&(s, t)).map_or(&[], Vec::as_slice)
    }

    pub fn try_vcompose(&self, b: CellId, a: CellId) -> Option<CellId> {
        self.vcomp[b * self.cells.len() + a]
    }

    /// `β ∘ α`; panics unless `α` ends where `β` starts.
    pub fn vcompose(&self, b: CellId, a: CellId) -> CellId {
        self.try_vcompose(b, a).unwrap_or_else(|| {
            panic!(
                "`{}` ∘ `{}` is not vertically composable",
                self.cell_name(b),
                self.cell_name(a)
            )
        })
    }

    pub fn try_hcompose(&self, b: CellId, a: CellId) -> Option<CellId> {
        self.hcomp[b * self.cells.len() + a]
    }

    /// `β * α`; panics unless the 1-cells of `α` end where those of `β`
    /// start.
    pub fn hcompose(&self, b: CellId, a: CellId) -> CellId {
        self.try_hcompose(b, a).unwrap_or_else(|| {
            panic!(
                "`{}` * `{}` is not horizontally composable",
                self.cell_name(b),
                self.cell_name(a)
            )
        })
    }

    /// `w α`: whiskering by a 1-cell on the left.
    pub fn whisker(&self, w: MorId, a: CellId) -> CellId {
        self.hcompose(self.unit(w), a)
    }

    /// `α w`: whiskering by a 1-cell on the right.
    pub fn whisker_right(&self, a: CellId, w: MorId) -> CellId {
        self.hcompose(a, self.unit(w))
    }

    pub fn inverse(&self, a: CellId) -> Option<CellId> {
        let c = &self.cells[a];
        self.cells_between(c.target, c.source)
            .iter()
            .copied()
            .find(|&b| self.vcompose(b, a) == self.unit(c.source) && self.vcompose(a, b) == self.unit(c.target))
    }

    pub fn is_invertible(&self, a: CellId) -> bool {
        self.inverse(a).is_some()
    }

    pub fn is_locally_discrete(&self) -> bool {
        self.cells.len() == self.base.arrow_count()
    }

    /// Re-checks all enrichment and interchange laws.
    pub fn validate(&self) -> Report {
        let t = Tables {
            base: &self.base,
            cells: self.cells.clone(),
            vcomp: self.vcomp.clone(),
            hcomp: self.hcomp.clone(),
        };
        Report {
            violations: t.law_violations(),
        }
    }

    /// 1-cells reversed, 2-cells kept with the same boundaries. Involutive.
    pub fn opposite_two_cat(&self) -> TwoCat {
        let base = Arc::new(self.base.opposite());
        let n = self.cells.len();
        let mut hcomp = vec![None; n * n];
        for b in 0..n {
            for a in 0..n {
                hcomp[b * n + a] = self.hcomp[a * n + b];
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(s) => s.to_string(),
            None => format!("{}^op", self.name),
        };
        TwoCat::assemble(name, base, self.cells.clone(), self.vcomp.clone(), hcomp)
    }

    pub fn renamed(mut self, name: &str) -> TwoCat {
        self.name = name.to_string();
        self
    }

    /// Name-level table; entries forced by unit laws are left out.
    pub fn to_table(&self) -> TwoCatTable {
        let base = &*self.base;
        let mut table = TwoCatTable::new(&self.name, self.base.clone());
        let n = self.cells.len();
        for c in base.arrow_count()..n {
            let cell = &self.cells[c];
            table.cells.push((
                cell.name.clone(),
                base.arrow_name(cell.source).to_string(),
                base.arrow_name(cell.target).to_string(),
            ));
        }
        let names = |b: CellId, a: CellId, c: CellId| {
            (
                self.cells[b].name.clone(),
                self.cells[a].name.clone(),
                self.cells[c].name.clone(),
            )
        };
        for b in 0..n {
            for a in 0..n {
                if let Some(c) = self.try_vcompose(b, a) {
                    if !self.is_unit(a) && !self.is_unit(b) {
                        table.vcompose.push(names(b, a, c));
                    }
                }
                if let Some(c) = self.try_hcompose(b, a) {
                    let forced = (self.is_unit(a) && self.is_unit(b))
                        || (self.is_unit(b) && base.is_identity(b))
                        || (self.is_unit(a) && base.is_identity(a));
                    if !forced {
                        table.hcompose.push(names(b, a, c));
                    }
                }
            }
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Arc<FinCat> {
        Arc::new(FinCat::preorder("Chain3", &["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap())
    }

    fn parallel() -> Arc<FinCat> {
        use crate::cat::CatTable;
        Arc::new(
            FinCat::from_table(
                &CatTable::new("Par", &["A", "B"])
                    .arrow("u", "A", "B")
                    .arrow("v", "A", "B"),
            )
            .unwrap(),
        )
    }

    pub(crate) fn walking_iso() -> TwoCatTable {
        TwoCatTable::new("Iso", parallel())
            .cell("g", "u", "v")
            .cell("gi", "v", "u")
            .vcompose("gi", "g", "1_u")
            .vcompose("g", "gi", "1_v")
    }

    #[test]
    fn locally_discrete_chain_is_valid() {
        let t = TwoCatTable::new("Chain3", chain3());
        assert!(validate_two_cat(&t).is_ok());
        let a = TwoCat::from_table(&t).unwrap();
        assert_eq!(a.cell_count(), 6);
        assert!(a.validate().is_ok());
    }

    #[test]
    fn corrupted_unit_entry_is_one_violation() {
        let t = TwoCatTable::new("Chain3", chain3()).vcompose("1_0<=1", "1_0<=1", "1_0<=2");
        let r = validate_two_cat(&t);
        assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    }

    #[test]
    fn walking_iso_is_valid_and_self_dual() {
        let t = walking_iso();
        let r = validate_two_cat(&t);
        assert!(r.is_ok(), "{:?}", r.violations);
        let a = TwoCat::from_table(&t).unwrap();
        let g = a.cell_id("g").unwrap();
        assert_eq!(a.inverse(g), a.cell_id("gi"));
        let op = a.opposite_two_cat();
        assert!(op.validate().is_ok());
        assert!(op.is_invertible(g));
        assert_eq!(op.opposite_two_cat(), a);
    }

    #[test]
    fn opposite_reverses_one_cells() {
        let a = TwoCat::locally_discrete("Chain3", chain3());
        let op = a.opposite_two_cat();
        assert_eq!(op.base().hom(2, 0).len(), 1);
        assert_eq!(op.opposite_two_cat(), a);
        assert_eq!(op.opposite_two_cat().name(), "Chain3");
    }

    #[test]
    fn missing_interchange_data_is_reported() {
        // a non-invertible loop on u with no composite declared
        let t = TwoCatTable::new("Bad", parallel()).cell("e", "u", "u");
        let r = validate_two_cat(&t);
        assert_eq!(r.violations, vec!["missing vertical composite `e ∘ e`".to_string()]);
    }

    #[test]
    fn round_trip_through_table() {
        let a = TwoCat::from_table(&walking_iso()).unwrap();
        let b = TwoCat::from_table(&a.to_table()).unwrap();
        assert_eq!(a, b);
    }
}

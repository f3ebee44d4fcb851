//! Exhaustive enumeration of functors and natural transformations.
//!
//! Both searches assign variables in a fixed order and check each
//! constraint as soon as the last variable it mentions is assigned, so
//! results come out in a deterministic lexicographic order.

use std::sync::Arc;

use rayon::prelude::*;

use super::{FinCat, Functor, MorId, NatTrans, ObjId};
use crate::budget::Meter;
use crate::{Budget, Result};

#[derive(Clone, Copy)]
enum Var {
    Obj(ObjId),
    Mor(MorId),
}

struct FunctorPlan {
    vars: Vec<Var>,
    /// Composition constraints `(g, f, g∘f)` checked after assigning `vars[i]`.
    checks: Vec<Vec<(MorId, MorId, MorId)>>,
}

fn plan(c: &FinCat) -> FunctorPlan {
    let mut vars = Vec::new();
    let mut pos_obj = vec![0; c.object_count()];
    let mut pos_mor = vec![usize::MAX; c.arrow_count()];
    for x in c.objects() {
        pos_obj[x] = vars.len();
        vars.push(Var::Obj(x));
        for f in c.arrow_ids() {
            let (s, t) = (c.source(f), c.target(f));
            if s.max(t) == x && !c.is_identity(f) {
                pos_mor[f] = vars.len();
                vars.push(Var::Mor(f));
            }
        }
    }
    // identities are forced by their object; treat them as assigned with it
    for x in c.objects() {
        pos_mor[c.identity(x)] = pos_obj[x];
    }
    let mut checks = vec![Vec::new(); vars.len()];
    for f in c.arrow_ids() {
        for g in c.arrow_ids() {
            if let Some(h) = c.try_compose(g, f) {
                let last = pos_mor[f].max(pos_mor[g]).max(pos_mor[h]);
                checks[last].push((g, f, h));
            }
        }
    }
    FunctorPlan { vars, checks }
}

struct FunctorSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    plan: &'a FunctorPlan,
    meter: &'a Meter,
    /// Image of object 0; fixes which partition this search covers.
    first: ObjId,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
    out: Vec<(Vec<ObjId>, Vec<MorId>)>,
}

impl FunctorSearch<'_> {
    fn consistent(&self, step: usize) -> bool {
        self.plan.checks[step]
            .iter()
            .all(|&(g, f, h)| self.d.compose(self.mor_map[g], self.mor_map[f]) == self.mor_map[h])
    }

    fn run(&mut self, step: usize) -> Result<()> {
        if step == self.plan.vars.len() {
            self.out.push((self.obj_map.clone(), self.mor_map.clone()));
            return Ok(());
        }
        match self.plan.vars[step] {
            Var::Obj(x) => {
                let candidates: Vec<ObjId> = if step == 0 {
                    vec![self.first]
                } else {
                    self.d.objects().collect()
                };
                for y in candidates {
                    self.meter.tick()?;
                    self.obj_map[x] = y;
                    self.mor_map[self.c.identity(x)] = self.d.identity(y);
                    if self.consistent(step) {
                        self.run(step + 1)?;
                    }
                }
            }
            Var::Mor(f) => {
                let (s, t) = (self.c.source(f), self.c.target(f));
                let hom = self.d.hom(self.obj_map[s], self.obj_map[t]);
                for &g in hom {
                    self.meter.tick()?;
                    self.mor_map[f] = g;
                    if self.consistent(step) {
                        self.run(step + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// All functors `c → d`, without duplicates, in lexicographic order of
/// (object map, arrow map). The search is split by the image of the first
/// object and the parts run in parallel.
pub fn enumerate_functors(c: &Arc<FinCat>, d: &Arc<FinCat>, budget: Budget) -> Result<Vec<Functor>> {
    let meter = budget.meter("enumerating functors");
    let plan = plan(c);
    let found: Vec<(Vec<ObjId>, Vec<MorId>)> = if c.object_count() == 0 {
        vec![(Vec::new(), Vec::new())]
    } else {
        let parts: Vec<Result<Vec<_>>> = d
            .objects()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|first| {
                let mut search = FunctorSearch {
                    c,
                    d,
                    plan: &plan,
                    meter: &meter,
                    first,
                    obj_map: vec![usize::MAX; c.object_count()],
                    mor_map: vec![usize::MAX; c.arrow_count()],
                    out: Vec::new(),
                };
                search.run(0)?;
                Ok(search.out)
            })
            .collect();
        let mut all = Vec::new();
        for part in parts {
            all.extend(part?);
        }
        all
    };
    Ok(found
        .into_iter()
        .map(|(obj_map, mor_map)| Functor {
            source: c.clone(),
            target: d.clone(),
            obj_map,
            mor_map,
        })
        .collect())
}

/// All natural transformations `f ⇒ g`, in lexicographic order of
/// components.
pub fn enumerate_nat_trans(f: &Functor, g: &Functor, budget: Budget) -> Result<Vec<NatTrans>> {
    let meter = budget.meter("enumerating natural transformations");
    let (c, d) = (&*f.source, &*f.target);
    // naturality square of h: a → b is checked once both a and b are assigned
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); c.object_count()];
    for h in c.arrow_ids() {
        if !c.is_identity(h) {
            checks[c.source(h).max(c.target(h))].push(h);
        }
    }
    let mut out = Vec::new();
    let mut comps = vec![usize::MAX; c.object_count()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        x: usize,
        c: &FinCat,
        d: &FinCat,
        f: &Functor,
        g: &Functor,
        checks: &[Vec<MorId>],
        comps: &mut Vec<MorId>,
        meter: &Meter,
        out: &mut Vec<Vec<MorId>>,
    ) -> Result<()> {
        if x == c.object_count() {
            out.push(comps.clone());
            return Ok(());
        }
        for &m in d.hom(f.ob(x), g.ob(x)) {
            meter.tick()?;
            comps[x] = m;
            let natural = checks[x].iter().all(|&h| {
                let (a, b) = (c.source(h), c.target(h));
                d.compose(g.mor(h), comps[a]) == d.compose(comps[b], f.mor(h))
            });
            if natural {
                go(x + 1, c, d, f, g, checks, comps, meter, out)?;
            }
        }
        Ok(())
    }
    go(0, c, d, f, g, &checks, &mut comps, &meter, &mut out)?;
    Ok(out
        .into_iter()
        .map(|components| NatTrans {
            source: f.clone(),
            target: g.clone(),
            components,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn cat(name: &str, objs: &[&str], le: &[(&str, &str)]) -> Arc<FinCat> {
        Arc::new(FinCat::preorder(name, objs, le).unwrap())
    }

    #[test]
    fn functor_counts_on_small_posets() {
        let one = cat("One", &["*"], &[]);
        let two = cat("Two", &["0", "1"], &[("0", "1")]);
        let b = Budget::default();
        assert_eq!(enumerate_functors(&one, &two, b).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&two, &two, b).unwrap().len(), 3);
        assert_eq!(enumerate_functors(&two, &one, b).unwrap().len(), 1);
        for f in enumerate_functors(&two, &two, b).unwrap() {
            assert!(f.first_violation().is_none());
        }
    }

    #[test]
    fn transformations_between_constants() {
        let one = cat("One", &["*"], &[]);
        let two = cat("Two", &["0", "1"], &[("0", "1")]);
        let b = Budget::default();
        let c0 = Functor::constant(&one, &two, 0);
        let c1 = Functor::constant(&one, &two, 1);
        assert_eq!(enumerate_nat_trans(&c0, &c1, b).unwrap().len(), 1);
        assert_eq!(enumerate_nat_trans(&c1, &c0, b).unwrap().len(), 0);
        let id = Functor::identity(&one);
        assert_eq!(enumerate_nat_trans(&id, &id, b).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let four = cat("Four", &["0", "1", "2", "3"], &[]);
        let err = enumerate_functors(&four, &four, Budget::new(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { cap: 10, .. }));
    }
}

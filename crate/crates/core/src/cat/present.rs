//! Categories from generators and relations, by bounded saturation.

use std::collections::HashMap;

use super::{Arrow, FinCat, MorId};
use crate::{Error, Result};

/// Generators and path relations.
///
/// Paths list generators in the order they are applied, so `["f", "g"]`
/// is `g ∘ f`. An empty side of a relation stands for the identity on the
/// object where the other side starts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub objects: Vec<String>,
    pub generators: Vec<(String, String, String)>,
    pub relations: Vec<(Vec<String>, Vec<String>)>,
}

impl Presentation {
    pub fn new(name: &str, objects: &[&str]) -> Self {
        Presentation {
            name: name.to_string(),
            objects: objects.iter().map(|o| o.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn generator(mut self, name: &str, source: &str, target: &str) -> Self {
        self.generators
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn relation(mut self, lhs: &[&str], rhs: &[&str]) -> Self {
        let own = |p: &[&str]| p.iter().map(|s| s.to_string()).collect();
        self.relations.push((own(lhs), own(rhs)));
        self
    }
}

/// A path: start object and generator indices in application order.
type Path = (usize, Vec<usize>);

struct Gens {
    src: Vec<usize>,
    tgt: Vec<usize>,
}

impl Gens {
    fn end(&self, p: &Path) -> usize {
        p.1.last().map_or(p.0, |&g| self.tgt[g])
    }

    /// Object reached after the first `i` generators of `p`.
    fn at(&self, p: &Path, i: usize) -> usize {
        if i == 0 {
            p.0
        } else {
            self.tgt[p.1[i - 1]]
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Saturates all paths of length at most `bound` modulo the relations and
/// returns the resulting composition table.
///
/// Two paths are identified when one is obtained from the other by
/// replacing an occurrence of one side of a relation by the other side,
/// staying within the bound. Saturation has converged when every path of
/// length `bound` is identified with a shorter one; otherwise
/// [`Error::SaturationExceeded`] is returned. Arrows are named by their
/// shortest (then least) path, generator names joined by `.` in
/// composition order.
pub fn build_category(p: &Presentation, bound: usize) -> Result<FinCat> {
    let invalid = |msg: String| Error::InvalidCategory {
        name: p.name.clone(),
        violations: vec![msg],
    };
    let obj: HashMap<&str, usize> = p.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut gens = Gens {
        src: Vec::new(),
        tgt: Vec::new(),
    };
    let mut gen_id: HashMap<&str, usize> = HashMap::new();
    for (name, s, t) in &p.generators {
        let (Some(&s), Some(&t)) = (obj.get(s.as_str()), obj.get(t.as_str())) else {
            return Err(invalid(format!("generator `{name}` has an unknown endpoint")));
        };
        gen_id.insert(name.as_str(), gens.src.len());
        gens.src.push(s);
        gens.tgt.push(t);
    }
    let resolve = |side: &[String]| -> Result<Vec<usize>> {
        let ids = side
            .iter()
            .map(|g| {
                gen_id
                    .get(g.as_str())
                    .copied()
                    .ok_or_else(|| invalid(format!("relation names unknown generator `{g}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ids.windows(2).any(|w| gens.tgt[w[0]] != gens.src[w[1]]) {
            return Err(invalid(format!("relation path `{}` is not composable", side.join(" "))));
        }
        Ok(ids)
    };
    let mut rels: Vec<(Path, Path)> = Vec::new();
    for (l, r) in &p.relations {
        let (l, r) = (resolve(l)?, resolve(r)?);
        let start = match (l.first(), r.first()) {
            (Some(&g), _) | (None, Some(&g)) => gens.src[g],
            (None, None) => continue,
        };
        let (l, r) = ((start, l), (start, r));
        if (!r.1.is_empty() && gens.src[r.1[0]] != start) || gens.end(&l) != gens.end(&r) {
            return Err(invalid("relation sides have different endpoints".to_string()));
        }
        rels.push((l.clone(), r.clone()));
        rels.push((r, l));
    }

    // all paths of length <= bound, shortest first
    let mut paths: Vec<Path> = (0..p.objects.len()).map(|o| (o, Vec::new())).collect();
    let mut layer_start = 0;
    for _ in 0..bound {
        let layer_end = paths.len();
        for i in layer_start..layer_end {
            let e = gens.end(&paths[i]);
            for g in 0..gens.src.len() {
                if gens.src[g] == e {
                    let mut next = paths[i].clone();
                    next.1.push(g);
                    paths.push(next);
                }
            }
        }
        layer_start = layer_end;
    }
    let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
    let mut parent: Vec<usize> = (0..paths.len()).collect();
    for (i, q) in paths.iter().enumerate() {
        for (l, r) in &rels {
            let n = l.1.len();
            for pos in 0..=q.1.len().saturating_sub(n) {
                if pos + n > q.1.len() || q.1[pos..pos + n] != l.1[..] || gens.at(q, pos) != l.0 {
                    continue;
                }
                if q.1.len() - n + r.1.len() > bound {
                    continue;
                }
                let mut word = q.1[..pos].to_vec();
                word.extend(&r.1);
                word.extend(&q.1[pos + n..]);
                let j = index[&(q.0, word)];
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    // paths are sorted by length, so each root is its shortest member
    let roots: Vec<usize> = (0..paths.len()).map(|i| find(&mut parent, i)).collect();
    if bound == 0 && !gens.src.is_empty() {
        return Err(Error::SaturationExceeded {
            bound,
            detail: "generators need paths of length 1".to_string(),
        });
    }
    if let Some(i) = (0..paths.len()).find(|&i| bound > 0 && paths[i].1.len() == bound && roots[i] == i) {
        return Err(Error::SaturationExceeded {
            bound,
            detail: format!("path `{}` has no shorter equivalent", path_name(p, &paths[i])),
        });
    }
    let mut rep: Vec<usize> = (0..paths.len()).filter(|&i| roots[i] == i).collect();
    // identities first: the empty path of each object is the root of its class
    rep.sort_by_key(|&i| (!paths[i].1.is_empty(), paths[i].1.len(), paths[i].1.clone(), paths[i].0));
    let mor_of_root: HashMap<usize, MorId> = rep.iter().enumerate().map(|(m, &i)| (i, m)).collect();
    let class = |i: usize| mor_of_root[&roots[i]];
    let arrows: Vec<Arrow> = rep
        .iter()
        .map(|&i| Arrow {
            name: if paths[i].1.is_empty() {
                format!("id_{}", p.objects[paths[i].0])
            } else {
                path_name(p, &paths[i])
            },
            source: paths[i].0,
            target: gens.end(&paths[i]),
        })
        .collect();
    let m = arrows.len();
    let mut comp = vec![None; m * m];
    for (fi, &f) in rep.iter().enumerate() {
        for (gi, &g) in rep.iter().enumerate() {
            if gens.end(&paths[f]) != paths[g].0 {
                continue;
            }
            let mut word = paths[f].1.clone();
            word.extend(&paths[g].1);
            // shorten a too-long word one bounded prefix at a time
            while word.len() > bound {
                let head = index[&(paths[f].0, word[..bound].to_vec())];
                let mut shorter = paths[rep[class(head)]].1.clone();
                shorter.extend(&word[bound..]);
                word = shorter;
            }
            comp[gi * m + fi] = Some(class(index[&(paths[f].0, word)]));
        }
    }
    FinCat::from_indexed(
        p.name.clone(),
        p.objects.clone(),
        arrows,
        (0..p.objects.len()).collect(),
        comp,
    )
}

fn path_name(p: &Presentation, q: &Path) -> String {
    q.1.iter()
        .rev()
        .map(|&g| p.generators[g].0.as_str())
        .collect::<Vec<_>>()
        .join(".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_generators_gives_discrete_category() {
        let c = build_category(&Presentation::new("One", &["*"]), 2).unwrap();
        assert_eq!(c.arrow_count(), 1);
    }

    #[test]
    fn single_generator_gives_arrow_category() {
        let p = Presentation::new("Two", &["0", "1"]).generator("a", "0", "1");
        let c = build_category(&p, 2).unwrap();
        assert_eq!(c.arrow_count(), 3);
        assert_eq!(c.hom(0, 1).len(), 1);
    }

    #[test]
    fn idempotent_monoid() {
        let p = Presentation::new("E", &["*"])
            .generator("e", "*", "*")
            .relation(&["e", "e"], &["e"]);
        let c = build_category(&p, 3).unwrap();
        assert_eq!(c.arrow_count(), 2);
        let e = c.arrow_id("e").unwrap();
        assert_eq!(c.compose(e, e), e);
    }

    #[test]
    fn free_loop_does_not_saturate() {
        let p = Presentation::new("N", &["*"]).generator("s", "*", "*");
        let err = build_category(&p, 4).unwrap_err();
        assert!(matches!(err, Error::SaturationExceeded { bound: 4, .. }));
    }

    #[test]
    fn split_idempotent_and_composite_names() {
        let p = Presentation::new("Split", &["p", "q"])
            .generator("s", "p", "q")
            .generator("r", "q", "p")
            .relation(&["s", "r"], &[]);
        let c = build_category(&p, 3).unwrap();
        // id_p, id_q, s, r, s.r
        assert_eq!(c.arrow_count(), 5);
        let (s, r) = (c.arrow_id("s").unwrap(), c.arrow_id("r").unwrap());
        assert!(c.is_identity(c.compose(r, s)));
        assert_eq!(c.arrow_name(c.compose(s, r)), "s.r");
    }

    #[test]
    fn cyclic_group_of_order_two() {
        let p = Presentation::new("Z2", &["*"])
            .generator("t", "*", "*")
            .relation(&["t", "t"], &[]);
        let c = build_category(&p, 2).unwrap();
        assert_eq!(c.arrow_count(), 2);
        assert!(c.is_iso(c.arrow_id("t").unwrap()));
    }
}

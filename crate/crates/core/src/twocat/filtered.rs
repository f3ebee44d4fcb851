use super::TwoCat;
use crate::Verdict;

/// Exhaustive 2-filteredness test.
///
/// The index must be nonempty and satisfy:
/// - every pair of objects has a cospan of 1-cells;
/// - for parallel 1-cells `u, v: A → B` there is `w: B → C` and an
///   invertible 2-cell `wu ⇒ wv`;
/// - for parallel 2-cells `γ, δ: u ⇒ v` there is `w` with `wγ = wδ`.
///
/// The first failing datum is reported.
pub fn check_2filtered(a: &TwoCat) -> Verdict {
    let base = &**a.base();
    if base.object_count() == 0 {
        return Verdict::Fails("cospan condition: the index has no objects".to_string());
    }
    for x in base.objects() {
        for y in base.objects() {
            let joined = base
                .objects()
                .any(|z| !base.hom(x, z).is_empty() && !base.hom(y, z).is_empty());
            if !joined {
                return Verdict::Fails(format!(
                    "cospan condition: objects `{}` and `{}` have no common 1-cell target",
                    base.object_name(x),
                    base.object_name(y)
                ));
            }
        }
    }
    for x in base.objects() {
        for y in base.objects() {
            let hom = base.hom(x, y);
            for &u in hom {
                for &v in hom {
                    let merged = base.objects().any(|z| {
                        base.hom(y, z).iter().any(|&w| {
                            let (wu, wv) = (base.compose(w, u), base.compose(w, v));
                            a.cells_between(wu, wv).iter().any(|&c| a.is_invertible(c))
                        })
                    });
                    if !merged {
                        return Verdict::Fails(format!(
                            "parallel 1-cell condition: no 1-cell out of `{}` relates `{}` and `{}` by an invertible 2-cell",
                            base.object_name(y),
                            base.arrow_name(u),
                            base.arrow_name(v)
                        ));
                    }
                }
            }
        }
    }
    for g in a.cell_ids() {
        let (u, v) = (a.cell(g).source, a.cell(g).target);
        let y = base.target(u);
        for &d in a.cells_between(u, v) {
            let equalized = base
                .objects()
                .any(|z| base.hom(y, z).iter().any(|&w| a.whisker(w, g) == a.whisker(w, d)));
            if !equalized {
                return Verdict::Fails(format!(
                    "parallel 2-cell condition: no 1-cell out of `{}` equalizes `{}` and `{}`",
                    base.object_name(y),
                    a.cell_name(g),
                    a.cell_name(d)
                ));
            }
        }
    }
    Verdict::Holds
}

use super::Pseudocolimit;
use crate::cat::{Functor, NatTrans};
use crate::pseudocone::{check_pseudocone, postcompose_cone, Modification, Pseudocone};
use crate::{Error, Result, Verdict};

/// The functor `ℓ: L → X` with `ℓλ = h` on the nose.
///
/// `ℓ(A, x) = h_A x`, and a span `(C, u, v, f)` from `(A, x)` to `(B, y)`
/// goes to `(h_v)_y⁻¹ ∘ h_C(f) ∘ (h_u)_x`. Every member of a class is
/// evaluated and must give the same arrow.
pub fn factor_cone(r: &Pseudocolimit, h: &Pseudocone) -> Result<Functor> {
    if let Verdict::Fails(why) = check_pseudocone(h) {
        return Err(Error::IllFormedCone(why));
    }
    let x = &*h.vertex;
    let l = &*r.colim;
    let obj_map = r.objects.iter().map(|&(a, y)| h.legs[a].ob(y)).collect();
    let mut mor_map = Vec::with_capacity(l.arrow_count());
    for m in l.arrow_ids() {
        let mut value = None;
        for s in r.members(m) {
            let back = x
                .inverse(h.coherence_at(s.right, s.target.1))
                .ok_or_else(|| Error::IllFormedCone("coherence cell is not invertible".to_string()))?;
            let image = x.compose(
                back,
                x.compose(h.legs[s.apex].mor(s.arrow), h.coherence_at(s.left, s.source.1)),
            );
            match value {
                None => value = Some(image),
                Some(v) if v != image => {
                    return Err(Error::IllFormedCone(format!(
                        "the cone takes different values on the class of `{}`",
                        l.arrow_name(m)
                    )))
                }
                Some(_) => {}
            }
        }
        mor_map.push(value.expect("classes are nonempty"));
    }
    Functor::new(r.colim.clone(), h.vertex.clone(), obj_map, mor_map)
        .map_err(|e| Error::IllFormedCone(format!("factorization is not a functor: {e}")))
}

/// The transformation `ξ: ℓ ⇒ t` corresponding to a modification
/// `φ: h → tλ`, where `ℓ` factors `h`: `ξ_(A, x) = (φ_A)_x`.
pub fn factor_cell(r: &Pseudocolimit, t: &Functor, phi: &Modification) -> Result<NatTrans> {
    let expected = postcompose_cone(&r.lambda, t);
    if phi.target != expected {
        return Err(Error::BoundaryMismatch(
            "modification does not end at the cone induced by the functor".to_string(),
        ));
    }
    let ell = factor_cone(r, &phi.source)?;
    let components = r.objects.iter().map(|&(a, y)| phi.components[a].component(y)).collect();
    NatTrans::new(ell, t.clone(), components).map_err(|e| Error::NoSolution(e.to_string()))
}

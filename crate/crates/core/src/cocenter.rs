//! Class polynomials and cocenter reduction.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{ClassId, ClassKeyJson};
use crate::element::{Elt, GroupOps};
use crate::engine::Engine;
use crate::hecke::{HeckeElt, Laurent, XiPoly};

/// Class polynomials of one element: `(class, f)` sorted by class id.
pub type ClassPolys = Vec<(ClassId, XiPoly)>;

/// Image of a Hecke element in the cocenter, in the basis `{T_O}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocenterVector {
    pub entries: BTreeMap<ClassId, Laurent>,
}

impl CocenterVector {
    pub fn unit(id: ClassId) -> Self {
        CocenterVector {
            entries: BTreeMap::from([(id, Laurent::one())]),
        }
    }

    pub fn add_scaled(&mut self, polys: &ClassPolys, c: &Laurent) {
        for (id, f) in polys {
            let slot = self.entries.entry(*id).or_default();
            *slot += &(&f.to_laurent() * c);
            if slot.is_zero() {
                self.entries.remove(id);
            }
        }
    }

    pub fn from_polys(polys: &ClassPolys) -> Self {
        let mut v = CocenterVector::default();
        v.add_scaled(polys, &Laurent::one());
        v
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocenterEntryJson {
    pub class: ClassKeyJson,
    /// Present when the coefficient is a polynomial in `ξ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_xi: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laurent: Option<Laurent>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocenterJson {
    pub entries: Vec<CocenterEntryJson>,
}

fn merge(a: &ClassPolys, shift_a: bool, b: &ClassPolys) -> ClassPolys {
    let mut m: BTreeMap<ClassId, XiPoly> = BTreeMap::new();
    for (id, f) in a {
        let f = if shift_a { f.shift() } else { f.clone() };
        let slot = m.entry(*id).or_default();
        *slot = slot.add(&f);
    }
    for (id, f) in b {
        let slot = m.entry(*id).or_default();
        *slot = slot.add(f);
    }
    m.into_iter().filter(|(_, f)| !f.is_zero()).collect()
}

impl Engine {
    /// `f_{w,O}` for all classes `O`, by the length-descent recursion
    /// `f_w = ξ f_{s w₁} + f_{s w₁ s}` where `w₁ ≈ w` and `ℓ(s w₁ s) < ℓ(w₁)`.
    pub fn class_polynomials(&self, e: &Elt) -> Arc<ClassPolys> {
        if let Some(v) = self.memo.get(e) {
            return v.clone();
        }
        let orb = self.orbit(e, false);
        let res = match orb.descent {
            None => Arc::new(vec![(self.class_id(e), XiPoly::one())]),
            Some((idx, i)) => {
                let s = &self.simples[i];
                let sx = self.mul(s, &orb.elems[idx]);
                let sxs = self.mul(&sx, s);
                let a = self.class_polynomials(&sx);
                let b = self.class_polynomials(&sxs);
                Arc::new(merge(&a, true, &b))
            }
        };
        // every element of the orbit has the same image in the cocenter
        for x in &orb.elems {
            self.memo.insert(x.clone(), res.clone());
        }
        res
    }

    /// The same recursion with a random admissible pivot at every step and
    /// no memoization.
    pub fn class_polynomials_random<R: Rng>(&self, e: &Elt, rng: &mut R) -> ClassPolys {
        let orb = self.orbit(e, true);
        let len = self.length(e);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for (k, x) in orb.elems.iter().enumerate() {
            for i in 0..self.simples.len() {
                if self.length(&self.simple_conj(i, x)) < len {
                    pivots.push((k, i));
                }
            }
        }
        match pivots.choose(rng) {
            None => vec![(self.class_id(e), XiPoly::one())],
            Some(&(k, i)) => {
                let s = &self.simples[i];
                let sx = self.mul(s, &orb.elems[k]);
                let sxs = self.mul(&sx, s);
                let a = self.class_polynomials_random(&sx, rng);
                let b = self.class_polynomials_random(&sxs, rng);
                merge(&a, true, &b)
            }
        }
    }

    /// Image of `h` in the cocenter.
    pub fn reduce_t(&self, h: &HeckeElt) -> CocenterVector {
        let mut out = CocenterVector::default();
        for (w, c) in h.iter() {
            out.add_scaled(&self.class_polynomials(w), c);
        }
        out
    }

    pub fn cocenter_json(&self, v: &CocenterVector) -> CocenterJson {
        let mut ids: Vec<ClassId> = v.entries.keys().copied().collect();
        ids.sort_by_cached_key(|&id| self.class_sort_key(id));
        let entries = ids
            .into_iter()
            .map(|id| {
                let c = &v.entries[&id];
                let xi = c.to_xi();
                CocenterEntryJson {
                    class: self.key_json(&self.key_of_id(id)),
                    laurent: if xi.is_none() { Some(c.clone()) } else { None },
                    poly_xi: xi.map(|p| p.0),
                }
            })
            .collect();
        CocenterJson { entries }
    }

    /// Number of memoized elements.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_elt(eng: &Engine, rng: &mut ChaCha8Rng, bound: i64) -> Elt {
        let lam: Vec<i64> = (0..eng.rank())
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        Elt {
            lam: lam.into(),
            fin: rng.gen_range(0..eng.group.len() as FinId),
        }
    }

    #[test]
    fn minimal_elements_give_unit_vectors() {
        let eng = Engine::load("GL3").unwrap();
        for s in ["t[1,0,0]", "t[2,1,0]*(1 2)", "(1 2 3)", "1"] {
            let e = eng.parse(s).unwrap();
            assert!(eng.is_minimal(&e));
            assert_eq!(
                *eng.class_polynomials(&e),
                vec![(eng.class_id(&e), XiPoly::one())]
            );
            assert_eq!(
                eng.reduce_t(&eng.t(&e)),
                CocenterVector::unit(eng.class_id(&e))
            );
        }
    }

    #[test]
    fn one_descent_step() {
        // s m s with m minimal and ℓ(sms) = ℓ(m) + 2
        let eng = Engine::load("C2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 10 {
            let (m, _) = eng.reduce_to_min(&random_elt(&eng, &mut rng, 2));
            for (i, s) in eng.simples.iter().enumerate() {
                let w = eng.mul(&eng.mul(s, &m), s);
                if eng.length(&w) != eng.length(&m) + 2 {
                    continue;
                }
                let f = eng.class_polynomials(&w);
                let id = eng.class_id(&m);
                let at_m = f
                    .iter()
                    .find(|(c, _)| *c == id)
                    .map(|(_, p)| p.clone())
                    .unwrap();
                assert_eq!(at_m.0[0], 1, "constant term at the class of m ({i})");
                assert_eq!(*f, eng.class_polynomials_random(&w, &mut rng));
                checked += 1;
            }
        }
    }

    #[test]
    fn trace_property_small() {
        let eng = Engine::load("GL3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let a = eng.t(&random_elt(&eng, &mut rng, 1));
            let b = eng.t(&random_elt(&eng, &mut rng, 1));
            assert_eq!(
                eng.reduce_t(&eng.hmul(&a, &b)),
                eng.reduce_t(&eng.hmul(&b, &a))
            );
        }
    }

    #[test]
    fn path_independence_and_nonnegativity() {
        for name in ["A2ad", "C2", "G2"] {
            let eng = Engine::load(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..30 {
                let e = random_elt(&eng, &mut rng, 2);
                let f = eng.class_polynomials(&e);
                assert_eq!(*f, eng.class_polynomials_random(&e, &mut rng), "{name}");
                for (id, p) in f.iter() {
                    assert!(p.0.iter().all(|&c| c >= 0));
                    let bound = eng.length(&e) - eng.class_info(*id).min_len;
                    assert!(p.degree().unwrap() as u32 <= bound);
                }
            }
        }
    }

    #[test]
    fn gl8_example_is_its_own_class() {
        let eng = Engine::load("GL8").unwrap();
        let e = eng.parse("t[1,1,1,1,1,0,0,0]*(1 6 3)(2 7 4 8 5)").unwrap();
        assert_eq!(
            *eng.class_polynomials(&e),
            vec![(eng.class_id(&e), XiPoly::one())]
        );
    }

    #[test]
    fn json_shape() {
        let eng = Engine::load("GL2").unwrap();
        let e = eng.parse("t[1,0]*s1*s0").unwrap();
        let v = eng.reduce_t(&eng.t(&e));
        let j = serde_json::to_value(eng.cocenter_json(&v)).unwrap();
        assert!(j["entries"]
            .as_array()
            .unwrap()
            .iter()
            .all(|x| x["poly_xi"].is_array()));
    }
}

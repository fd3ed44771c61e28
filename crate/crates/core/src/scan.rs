//! Finite enumerations of elements modulo central translations.
//!
//! A translation `t^c` is central when `c` is fixed by `W_J ⋊ Γ_J`.
//! Conjugacy, lengths and class polynomials are all compatible with
//! multiplication by central translations, so scans only visit one element
//! of every coset.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::conjugacy::ClassId;
use crate::element::{Elt, GroupOps};
use crate::engine::Engine;
use crate::group::FinId;
use crate::linalg;
use crate::{Error, Result};

/// Upper bound on `|Ω / central|` before a scan is refused.
const OMEGA_LIMIT: usize = 4096;

/// A `(J, z)`-alcove element together with `J` and `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAlcove {
    pub elt: Elt,
    pub j: Vec<usize>,
    pub z: FinId,
}

impl Engine {
    /// Hermite basis of the lattice of central translations.
    pub fn central_lattice(&self) -> Vec<Vec<i64>> {
        let d = self.rank();
        let mut gens: Vec<FinId> = self
            .sub
            .j
            .iter()
            .map(|&i| self.group.simple_ids[i])
            .collect();
        gens.extend(self.sub.gammas.iter().map(|&g| self.group.gamma_id(g)));
        // stack (M_g - 1) for every generator and take the integer kernel
        let mut a = Vec::with_capacity(gens.len() * d * d);
        for &g in &gens {
            let m = self.group.mat(g);
            for r in 0..d {
                for c in 0..d {
                    a.push(m[r * d + c] - i64::from(r == c));
                }
            }
        }
        if gens.is_empty() {
            return (0..d)
                .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
                .collect();
        }
        linalg::hnf_rows(&linalg::kernel_int(&a, gens.len() * d, d), d)
    }

    /// Reduce the translation part of `e` modulo central translations.
    pub fn central_normal_form(&self, e: &Elt, lattice: &[Vec<i64>]) -> Elt {
        let mut out = e.clone();
        for row in lattice {
            let Some(p) = row.iter().position(|&x| x != 0) else {
                continue;
            };
            let f = out.lam[p].div_euclid(row[p]);
            if f != 0 {
                for (x, r) in out.lam.iter_mut().zip(row) {
                    *x -= f * r;
                }
            }
        }
        out
    }

    /// Length-zero elements modulo central translations.
    pub fn omega_reps(&self) -> Result<Vec<Elt>> {
        let lattice = self.central_lattice();
        let start = self.identity();
        let mut seen: FxHashSet<Elt> = FxHashSet::default();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &self.omega_gens {
                let y = self.central_normal_form(&self.mul(&x, g), &lattice);
                if seen.insert(y.clone()) {
                    if seen.len() > OMEGA_LIMIT {
                        return Err(Error::SearchExhausted(
                            "the length-zero subgroup is infinite modulo central translations"
                                .into(),
                        ));
                    }
                    queue.push_back(y);
                }
            }
            out.push(x);
        }
        out.sort_by_cached_key(|e| self.order_key(e));
        Ok(out)
    }

    /// All elements of length at most `max_len` modulo central translations,
    /// sorted by the canonical order.
    pub fn elements_up_to(&self, max_len: u32) -> Result<Vec<Elt>> {
        let lattice = self.central_lattice();
        let omegas = self.omega_reps()?;
        let mut out: Vec<Elt> = self
            .coxeter_ball(max_len)
            .iter()
            .flat_map(|x| {
                omegas
                    .iter()
                    .map(|w| self.central_normal_form(&self.mul(x, w), &lattice))
            })
            .collect();
        out.sort_by_cached_key(|e| self.order_key(e));
        out.dedup();
        Ok(out)
    }

    /// Classes meeting length at most `max_len`, modulo central translations,
    /// each with its first element in the canonical order.
    pub fn classes_up_to(&self, max_len: u32) -> Result<Vec<(ClassId, Elt)>> {
        let mut seen = FxHashSet::default();
        Ok(self
            .elements_up_to(max_len)?
            .into_iter()
            .filter_map(|e| {
                let id = self.class_id(&e);
                seen.insert(id).then_some((id, e))
            })
            .collect())
    }

    /// Every `(J, z)`-alcove triple with `J ⊆ S₀`, `z` minimal in `W_J z`,
    /// and `ℓ(w̃) ≤ max_len` (modulo central translations).
    pub fn p_alcove_triples(&self, max_len: u32) -> Result<Vec<PAlcove>> {
        let elts = self.elements_up_to(max_len)?;
        let s0 = &self.sub.j;
        let mut out = Vec::new();
        for mask in 0u32..(1 << s0.len()) {
            let j: Vec<usize> = (0..s0.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| s0[b])
                .collect();
            for z in 0..self.group.w0_size as FinId {
                if !self.fin_in_parabolic(s0, z) || !self.is_min_left_coset_fin(z, &j) {
                    continue;
                }
                for e in &elts {
                    if self.is_p_alcove(e, &j, z) {
                        out.push(PAlcove {
                            elt: e.clone(),
                            j: j.clone(),
                            z,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_counts() {
        let eng = Engine::load("GL3").unwrap();
        assert_eq!(eng.central_lattice(), vec![vec![1, 1, 1]]);
        assert_eq!(eng.omega_reps().unwrap().len(), 3);
        // the affine A2 Coxeter group has 3l elements of length l >= 1
        let elts = eng.elements_up_to(6).unwrap();
        let per_len = |l| elts.iter().filter(|e| eng.length(e) == l).count();
        assert_eq!(
            (0..=6).map(per_len).collect::<Vec<_>>(),
            vec![3, 9, 18, 27, 36, 45, 54]
        );
    }

    #[test]
    fn semisimple_center_is_trivial() {
        let eng = Engine::load("C2").unwrap();
        assert!(eng.central_lattice().is_empty());
        let omegas = eng.omega_reps().unwrap();
        assert!(omegas.iter().all(|w| eng.length(w) == 0));
    }

    #[test]
    fn whole_s0_triples_are_everything() {
        let eng = Engine::load("GL3").unwrap();
        let n = eng.elements_up_to(3).unwrap().len();
        let triples = eng.p_alcove_triples(3).unwrap();
        assert_eq!(triples.iter().filter(|t| t.j.len() == 2).count(), n);
        assert!(triples.iter().all(|t| eng.is_min_left_coset_fin(t.z, &t.j)));
    }
}

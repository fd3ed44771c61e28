//! Exhaustive checks of partial conjugation by finite parabolic subgroups.

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::element::{Elt, GroupOps};
use crate::engine::Engine;
use crate::{Error, Result};

/// Refuse to enumerate a parabolic subgroup larger than this.
const PARABOLIC_LIMIT: usize = 200_000;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ScanSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub(crate) fn subsets(set: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << set.len())
        .map(|m| {
            (0..set.len())
                .filter(|b| m >> b & 1 == 1)
                .map(|b| set[b])
                .collect()
        })
        .collect()
}

impl Engine {
    /// Elements of the subgroup generated by the given simple reflections of
    /// this engine (finite or affine), which must be finite.
    pub fn parabolic_elements(&self, idx: &[usize]) -> Result<Vec<Elt>> {
        let mut out = vec![self.identity()];
        let mut seen: FxHashSet<Elt> = out.iter().cloned().collect();
        let mut k = 0;
        while k < out.len() {
            for &i in idx {
                let y = self.mul(&out[k], &self.simples[i]);
                if seen.insert(y.clone()) {
                    if seen.len() > PARABOLIC_LIMIT {
                        return Err(Error::SearchExhausted(format!(
                            "parabolic subgroup {idx:?} is too large"
                        )));
                    }
                    out.push(y);
                }
            }
            k += 1;
        }
        Ok(out)
    }

    /// Orbit of `e` under conjugation by a finite group given by its elements.
    fn conj_orbit(&self, group: &[Elt], e: &Elt) -> Vec<Elt> {
        let mut seen = FxHashSet::default();
        group
            .iter()
            .map(|h| self.conj(h, e))
            .filter(|y| seen.insert(y.clone()))
            .collect()
    }

    /// Uniqueness of the partial-conjugation normal form: every element of
    /// the `W_J`-orbit of `e` reaches some `x·u` by `→_J` steps, and every
    /// element of that orbit of the form `x·u` (`u ∈ ^J W̃`,
    /// `x ∈ W_{I(J,u)}`) has the same `u`.
    pub fn check_partial_decomposition(&self, e: &Elt, j: &[usize]) -> Result<bool> {
        let wj = self.parabolic_elements(j)?;
        let orbit = self.conj_orbit(&wj, e);
        let mut us: FxHashSet<Elt> = FxHashSet::default();
        for y in &orbit {
            us.insert(self.partial_min(y, j)?.0);
            let (u, word) = self.coset_min(y, j, true);
            let x = word
                .iter()
                .fold(0, |acc, &i| self.group.mul(acc, self.group.simple_ids[i]));
            if self
                .finite_parabolic(&self.i_of(j, &u)?)
                .binary_search(&x)
                .is_ok()
            {
                us.insert(u);
            }
        }
        Ok(us.len() == 1)
    }

    /// Configurations `(I ⊆ J, w, u)` built from elements of length at most
    /// `max_len`: `w ∈ ^I W̃` with `wIw⁻¹ = I`, `u ∈ ^J W̃`, both minimal in
    /// their common `W_J`-orbit. Each must admit `h ∈ ^{I(J,u)} W_J ^I` with
    /// `h I h⁻¹ ⊆ I(J,u)` and `h w h⁻¹ = u`, checked independently.
    pub fn partial_conjugation_scan(&self, max_len: u32) -> Result<ScanSummary> {
        let mut summary = ScanSummary::default();
        let elts = self.elements_up_to(max_len)?;
        let s0: Vec<usize> = (0..self.n_finite).collect();
        for j in subsets(&s0) {
            let wj = self.parabolic_elements(&j)?;
            for w in &elts {
                let orbit = self.conj_orbit(&wj, w);
                let min_len = orbit
                    .iter()
                    .map(|y| self.length(y))
                    .min()
                    .expect("nonempty");
                if self.length(w) != min_len {
                    continue;
                }
                let targets: Vec<&Elt> = orbit
                    .iter()
                    .filter(|u| self.length(u) == min_len && self.coset_min(u, &j, true).0 == **u)
                    .collect();
                for i in subsets(&j) {
                    let stable = self.coset_min(w, &i, true).0 == *w
                        && i.iter().all(|&s| {
                            let c = self.conj(w, &self.simples[s]);
                            i.iter().any(|&t| self.simples[t] == c)
                        });
                    if !stable {
                        continue;
                    }
                    for &u in &targets {
                        let h = self.partial_conjugator(&i, &j, w, u)?;
                        let ok = h.is_some_and(|h| self.conjugator_conditions(&i, &j, w, u, h));
                        summary.record(ok, || {
                            format!("I={i:?} J={j:?} w={} u={}", self.format(w), self.format(u))
                        });
                    }
                }
            }
        }
        Ok(summary)
    }

    /// Independent check of the conditions on `h`.
    fn conjugator_conditions(
        &self,
        i: &[usize],
        j: &[usize],
        w: &Elt,
        u: &Elt,
        h: crate::group::FinId,
    ) -> bool {
        let Ok(iju) = self.i_of(j, u) else {
            return false;
        };
        let h_elt = Elt::finite(self.rank(), h);
        let in_wj = self.fin_in_parabolic(j, h) && self.group.gamma_of(h) == 0;
        let lh = self.length(&h_elt);
        let left_min = iju
            .iter()
            .all(|&s| self.length(&self.mul(&self.simples[s], &h_elt)) > lh);
        let right_min = i
            .iter()
            .all(|&s| self.length(&self.mul(&h_elt, &self.simples[s])) > lh);
        let maps_i = i.iter().all(|&s| {
            let c = self.conj(&h_elt, &self.simples[s]);
            iju.iter().any(|&t| self.simples[t] == c)
        });
        in_wj && left_min && right_min && maps_i && self.conj(&h_elt, w) == *u
    }

    /// An element of `W_I ⋊ Γ_I` is minimal in its `W_I`-class exactly when
    /// it is minimal in its class in the whole group. Checked for the finite
    /// Weyl group with every `I ⊆ S₀`, and for the affine group with every
    /// proper `I ⊊ S̃` together with the length-zero elements normalizing `I`.
    pub fn min_in_parabolic_scan(&self) -> Result<ScanSummary> {
        let mut summary = ScanSummary::default();
        let d = self.rank();
        // finite Weyl group ⋊ Γ
        let all_fin: Vec<Elt> = (0..self.group.len() as u32)
            .map(|f| Elt::finite(d, f))
            .collect();
        let s0: Vec<usize> = (0..self.n_finite).collect();
        let w0 = self.parabolic_elements(&s0)?;
        for i in subsets(&s0) {
            let wi = self.parabolic_elements(&i)?;
            for x in &all_fin {
                if !self.fin_in_parabolic(&i, x.fin) {
                    continue;
                }
                let fl = |y: &Elt| self.group.length(y.fin);
                let min_i = self
                    .conj_orbit(&wi, x)
                    .iter()
                    .map(fl)
                    .min()
                    .expect("nonempty");
                let min_w = self
                    .conj_orbit(&w0, x)
                    .iter()
                    .map(fl)
                    .min()
                    .expect("nonempty");
                summary.record((fl(x) == min_i) == (fl(x) == min_w), || {
                    format!("finite I={i:?} x={}", self.format(x))
                });
            }
        }
        // affine group, proper subsets of the simple reflections
        let all: Vec<usize> = (0..self.simples.len()).collect();
        let omegas = self.omega_reps()?;
        for i in subsets(&all) {
            if i.len() == all.len() {
                continue;
            }
            let wi = self.parabolic_elements(&i)?;
            let normalizing: Vec<&Elt> = omegas
                .iter()
                .filter(|o| {
                    i.iter().all(|&s| {
                        let c = self.conj(o, &self.simples[s]);
                        i.iter().any(|&t| self.simples[t] == c)
                    })
                })
                .collect();
            for x in &wi {
                for o in &normalizing {
                    let y = self.mul(x, o);
                    let min_i = self
                        .conj_orbit(&wi, &y)
                        .iter()
                        .map(|z| self.length(z))
                        .min()
                        .expect("nonempty");
                    let minimal_i = self.length(&y) == min_i;
                    summary.record(minimal_i == self.is_minimal(&y), || {
                        format!("affine I={i:?} y={}", self.format(&y))
                    });
                }
            }
        }
        Ok(summary)
    }
}

//! Conjugacy classes: exact class invariants, reduction to minimal length,
//! minimal-length sets, canonical keys and partial conjugation.
//!
//! Two elements `t^λ r` and `t^μ r'` of `X ⋊ G` (`G = W_J ⋊ Γ_J`) are
//! conjugate iff after moving `r` and `r'` to a common class representative
//! `r₀` the translation parts agree in `X / (1 − r₀)X` up to the centralizer
//! of `r₀`. The Smith form of `1 − r₀` makes that quotient explicit, which
//! gives a complete invariant; canonical minimal representatives are then
//! derived from the invariant alone.

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock, RwLock};

use dashmap::DashMap;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::element::{Elt, GroupOps};
use crate::engine::{Engine, Kappa};
use crate::group::FinId;
use crate::linalg::{self, QVec};
use crate::{Error, Result};

pub type ClassId = u32;

/// Complete invariant of a `W̃_J`-conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassInv {
    pub fin_class: u32,
    pub coords: Vec<i64>,
}

#[derive(Debug)]
pub(crate) struct ClassSmith {
    u: Vec<i64>,
    u_inv: Vec<i64>,
    diag: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub canonical_min: Elt,
    pub min_len: u32,
    pub nu: QVec,
    pub kappa: Kappa,
}

pub(crate) struct ClassRecord {
    pub(crate) inv: ClassInv,
    info: OnceLock<ClassInfo>,
}

#[derive(Default)]
pub(crate) struct Registry {
    ids: DashMap<ClassInv, ClassId, FxBuildHasher>,
    records: RwLock<Vec<Arc<ClassRecord>>>,
    by_elt: DashMap<Elt, ClassId, FxBuildHasher>,
}

/// Canonical name of a conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjClassKey {
    pub nu: QVec,
    pub kappa: Kappa,
    pub canonical_min: Elt,
}

/// JSON form of a class key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassKeyJson {
    pub nu: Vec<String>,
    pub kappa: String,
    pub min_rep: String,
}

/// A conjugation move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Conjugation by the simple reflection with this index.
    Simple(usize),
    /// Conjugation by the length-zero generator with this index.
    Omega(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPath {
    pub start: Elt,
    pub steps: Vec<(Move, Elt)>,
    pub end: Elt,
}

/// Outcome of a search through the `≈`-orbit of an element.
pub(crate) struct Orbit {
    pub(crate) elems: Vec<Elt>,
    parents: Vec<(u32, Move)>,
    /// `(index into elems, simple index)` of the first strict descent found.
    pub(crate) descent: Option<(usize, usize)>,
}

impl Orbit {
    fn trail(&self, mut idx: usize) -> Vec<(Move, Elt)> {
        let mut out = Vec::new();
        while idx != 0 {
            let (p, m) = self.parents[idx];
            out.push((m, self.elems[idx].clone()));
            idx = p as usize;
        }
        out.reverse();
        out
    }
}

const ORBIT_LIMIT: usize = 4_000_000;

impl Engine {
    pub fn apply_move(&self, m: Move, e: &Elt) -> Elt {
        match m {
            Move::Simple(i) => self.simple_conj(i, e),
            Move::Omega(k) => self.conj(&self.omega_gens[k], e),
        }
    }

    /// Breadth-first search through the elements reachable from `e` by
    /// length-preserving simple and length-zero conjugations, stopping at
    /// the first element with a strictly length-decreasing simple
    /// conjugation (unless `exhaust`).
    pub(crate) fn orbit(&self, e: &Elt, exhaust: bool) -> Orbit {
        let len = self.length(e);
        let mut elems = vec![e.clone()];
        let mut parents = vec![(0u32, Move::Simple(0))];
        let mut index: FxHashMap<Elt, u32> = FxHashMap::default();
        index.insert(e.clone(), 0);
        let mut descent = None;
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k].clone();
            for i in 0..self.simples.len() {
                let y = self.simple_conj(i, &x);
                let ly = self.length(&y);
                if ly < len {
                    if descent.is_none() {
                        descent = Some((k, i));
                    }
                    if !exhaust {
                        return Orbit {
                            elems,
                            parents,
                            descent,
                        };
                    }
                } else if ly == len && !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len() as u32);
                    elems.push(y);
                    parents.push((k as u32, Move::Simple(i)));
                }
            }
            for (j, w) in self.omega_gens.iter().enumerate() {
                let y = self.conj(w, &x);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len() as u32);
                    elems.push(y);
                    parents.push((k as u32, Move::Omega(j)));
                }
            }
            assert!(
                elems.len() < ORBIT_LIMIT,
                "≈-orbit exceeds {ORBIT_LIMIT} elements"
            );
            k += 1;
        }
        Orbit {
            elems,
            parents,
            descent,
        }
    }

    /// Whether `e` has minimal length in its conjugacy class.
    pub fn is_minimal(&self, e: &Elt) -> bool {
        self.orbit(e, false).descent.is_none()
    }

    /// Conjugates `e` down to a minimal-length element, recording every step.
    pub fn reduce_to_min(&self, e: &Elt) -> (Elt, ReductionPath) {
        let mut cur = e.clone();
        let mut steps = Vec::new();
        loop {
            let orb = self.orbit(&cur, false);
            let Some((idx, s)) = orb.descent else { break };
            steps.extend(orb.trail(idx));
            cur = self.simple_conj(s, &orb.elems[idx]);
            steps.push((Move::Simple(s), cur.clone()));
        }
        (
            cur.clone(),
            ReductionPath {
                start: e.clone(),
                steps,
                end: cur,
            },
        )
    }

    /// Elements `x` of the Coxeter part with `ℓ(x) ≤ bound`.
    pub fn coxeter_ball(&self, bound: u32) -> Vec<Elt> {
        let mut out = vec![self.identity()];
        let mut seen: FxHashSet<Elt> = out.iter().cloned().collect();
        let mut layer = out.clone();
        for l in 1..=bound {
            let mut next = Vec::new();
            for x in &layer {
                for s in &self.simples {
                    let y = self.mul(x, s);
                    if self.length(&y) == l && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Closure of a minimal element under length-preserving simple and
    /// length-zero conjugation and elementary strong conjugation by Coxeter
    /// elements of length at most `opts.ball_bound`, sorted by the canonical
    /// order.
    pub fn min_set(&self, m: &Elt) -> Vec<Elt> {
        let ball = self.coxeter_ball(self.opts.ball_bound);
        self.min_set_with(m, &ball)
    }

    pub fn min_set_with(&self, m: &Elt, ball: &[Elt]) -> Vec<Elt> {
        let len = self.length(m);
        let mut set: FxHashSet<Elt> = FxHashSet::default();
        let mut queue: VecDeque<Elt> = VecDeque::new();
        set.insert(m.clone());
        queue.push_back(m.clone());
        while let Some(x) = queue.pop_front() {
            let add = |y: Elt, set: &mut FxHashSet<Elt>, queue: &mut VecDeque<Elt>| {
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            };
            for i in 0..self.simples.len() {
                let y = self.simple_conj(i, &x);
                if self.length(&y) == len {
                    add(y, &mut set, &mut queue);
                }
            }
            for w in &self.omega_gens {
                add(self.conj(w, &x), &mut set, &mut queue);
            }
            for c in ball.iter().skip(1) {
                let y = self.conj(c, &x);
                if self.length(&y) != len {
                    continue;
                }
                let lc = self.length(c);
                let left = self.length(&self.mul(c, &x)) == lc + len;
                let right = self.length(&self.mul(&x, &self.inv(c))) == lc + len;
                if left || right {
                    add(y, &mut set, &mut queue);
                }
            }
        }
        let mut out: Vec<Elt> = set.into_iter().collect();
        out.sort_by_cached_key(|e| self.order_key(e));
        out
    }

    fn class_smith(&self, c: u32) -> &ClassSmith {
        self.smith[c as usize].get_or_init(|| {
            let d = self.rank();
            let r0 = self.classes.reps[c as usize];
            let m = self.group.mat(r0);
            let a: Vec<i64> = (0..d * d)
                .map(|k| i64::from(k / d == k % d) - m[k])
                .collect();
            let (u, diag, _) = linalg::smith(&a, d, d);
            let u_inv = linalg::imat_inverse(&u, d).expect("unimodular");
            ClassSmith { u, u_inv, diag }
        })
    }

    fn normalize_coords(sm: &ClassSmith, y: &[i64]) -> Vec<i64> {
        y.iter()
            .zip(&sm.diag)
            .filter(|(_, &di)| di != 1)
            .map(|(&yi, &di)| if di == 0 { yi } else { yi.rem_euclid(di) })
            .collect()
    }

    /// Complete conjugacy invariant of an element of `W̃_J`.
    pub fn class_inv(&self, e: &Elt) -> ClassInv {
        let d = self.rank();
        let c = self.classes.class_of[e.fin as usize];
        assert!(c != u32::MAX, "class_inv of an element outside W̃_J");
        let g0 = self.classes.conj_to_rep[e.fin as usize];
        let lam = self.group.apply(g0, &e.lam);
        let sm = self.class_smith(c);
        let coords = self
            .classes
            .centralizer(&self.group, c)
            .iter()
            .map(|&h| {
                Self::normalize_coords(
                    sm,
                    &linalg::imat_apply(&sm.u, &self.group.apply(h, &lam), d),
                )
            })
            .min()
            .expect("centralizer contains the identity");
        ClassInv {
            fin_class: c,
            coords,
        }
    }

    /// An element with the given invariant.
    pub fn class_rep(&self, inv: &ClassInv) -> Elt {
        let d = self.rank();
        let sm = self.class_smith(inv.fin_class);
        let mut y = vec![0i64; d];
        let mut it = inv.coords.iter();
        for (yi, &di) in y.iter_mut().zip(&sm.diag) {
            if di != 1 {
                *yi = *it.next().expect("coordinate count");
            }
        }
        let lam = linalg::imat_apply(&sm.u_inv, &y, d);
        Elt {
            lam: lam.into(),
            fin: self.classes.reps[inv.fin_class as usize],
        }
    }

    pub fn intern(&self, inv: ClassInv) -> ClassId {
        if let Some(id) = self.registry.ids.get(&inv) {
            return *id;
        }
        *self.registry.ids.entry(inv.clone()).or_insert_with(|| {
            let mut recs = self.registry.records.write().expect("registry lock");
            recs.push(Arc::new(ClassRecord {
                inv,
                info: OnceLock::new(),
            }));
            (recs.len() - 1) as ClassId
        })
    }

    /// Interned class of an element of `W̃_J`.
    pub fn class_id(&self, e: &Elt) -> ClassId {
        if let Some(id) = self.registry.by_elt.get(e) {
            return *id;
        }
        let id = self.intern(self.class_inv(e));
        self.registry.by_elt.insert(e.clone(), id);
        id
    }

    fn record(&self, id: ClassId) -> Arc<ClassRecord> {
        self.registry.records.read().expect("registry lock")[id as usize].clone()
    }

    pub fn class_invariant_of(&self, id: ClassId) -> ClassInv {
        self.record(id).inv.clone()
    }

    /// Minimal length, Newton point, Kottwitz value and canonical minimal
    /// representative of a class.
    pub fn class_info(&self, id: ClassId) -> ClassInfo {
        let rec = self.record(id);
        rec.info
            .get_or_init(|| {
                let rep = self.class_rep(&rec.inv);
                let (m, _) = self.reduce_to_min(&rep);
                let canonical_min = self.min_set(&m).into_iter().next().expect("nonempty");
                ClassInfo {
                    min_len: self.length(&canonical_min),
                    nu: self.newton_dominant(&canonical_min),
                    kappa: self.kappa(&canonical_min),
                    canonical_min,
                }
            })
            .clone()
    }

    pub fn key_of_id(&self, id: ClassId) -> ConjClassKey {
        let info = self.class_info(id);
        ConjClassKey {
            nu: info.nu,
            kappa: info.kappa,
            canonical_min: info.canonical_min,
        }
    }

    pub fn class_key(&self, e: &Elt) -> ConjClassKey {
        self.key_of_id(self.class_id(e))
    }

    pub fn key_json(&self, k: &ConjClassKey) -> ClassKeyJson {
        ClassKeyJson {
            nu: k.nu.iter().map(linalg::fmt_q).collect(),
            kappa: k.kappa.to_string(),
            min_rep: self.format(&k.canonical_min),
        }
    }

    /// Sort key for class ids that does not depend on interning order.
    pub fn class_sort_key(&self, id: ClassId) -> (u32, smallvec::SmallVec<[i64; 8]>, Vec<u32>) {
        self.order_key(&self.class_info(id).canonical_min)
    }

    /// Whether two elements of `W̃_J` are conjugate.
    pub fn conjugate(&self, a: &Elt, b: &Elt) -> bool {
        self.class_inv(a) == self.class_inv(b)
    }

    /// Ids of the finite simple reflections `s_i` (`i` a datum simple index).
    fn simple_elt(&self, i: usize) -> Elt {
        Elt::finite(self.rank(), self.group.simple_ids[i])
    }

    /// `I(J, w) = ∩_{i≥0} w^{-i} J w^i` for `w ∈ ^J W̃` (datum simple indices).
    pub fn i_of(&self, j: &[usize], w: &Elt) -> Result<Vec<usize>> {
        let lw = self.length(w);
        if j.iter()
            .any(|&i| self.length(&self.mul(&self.simple_elt(i), w)) < lw)
        {
            return Err(Error::Precondition(format!(
                "{} is not minimal in W_J w",
                self.format(w)
            )));
        }
        let mut k: Vec<usize> = j.to_vec();
        k.sort_unstable();
        k.dedup();
        loop {
            let next: Vec<usize> = k
                .iter()
                .copied()
                .filter(|&i| {
                    let c = self.conj(w, &self.simple_elt(i));
                    k.iter().any(|&t| c == self.simple_elt(t))
                })
                .collect();
            if next.len() == k.len() {
                return Ok(k);
            }
            k = next;
        }
    }

    /// Elements of the finite parabolic subgroup `W_K` (no Γ part).
    pub fn finite_parabolic(&self, k: &[usize]) -> Vec<FinId> {
        let mut out = vec![0 as FinId];
        let mut seen: FxHashSet<FinId> = out.iter().copied().collect();
        let mut i = 0;
        while i < out.len() {
            for &s in k {
                let y = self.group.mul(out[i], self.group.simple_ids[s]);
                if seen.insert(y) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Partial conjugation: returns `(u, x, path)` with the path made of
    /// `→_J` steps (conjugation by `s ∈ J` not increasing length) ending at
    /// `x·u`, where `u ∈ ^J W̃` and `x ∈ W_{I(J,u)}`.
    pub fn partial_min(&self, e: &Elt, j: &[usize]) -> Result<(Elt, FinId, Vec<(usize, Elt)>)> {
        let mut elems = vec![e.clone()];
        let mut parents: Vec<(usize, usize)> = vec![(0, 0)];
        let mut index: FxHashMap<Elt, usize> = FxHashMap::default();
        index.insert(e.clone(), 0);
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k].clone();
            let lx = self.length(&x);
            for &i in j {
                let s = self.simple_elt(i);
                let y = self.mul(&self.mul(&s, &x), &s);
                if self.length(&y) <= lx && !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                    parents.push((k, i));
                }
            }
            k += 1;
        }
        let mut best: Option<(usize, Elt, FinId)> = None;
        let min_len = elems
            .iter()
            .map(|x| self.length(x))
            .min()
            .expect("nonempty");
        for (idx, y) in elems.iter().enumerate() {
            if self.length(y) != min_len {
                continue;
            }
            let (u, word) = self.coset_min(y, j, true);
            let i_set = self.i_of(j, &u)?;
            // y = s_{word[0]} ... s_{word[k-1]} u
            let x = word.iter().fold(0 as FinId, |acc, &i| {
                self.group.mul(acc, self.group.simple_ids[i])
            });
            let wi = self.finite_parabolic(&i_set);
            if wi.binary_search(&x).is_ok() {
                let better = match &best {
                    None => true,
                    Some((bi, _, _)) => self.order_key(y) < self.order_key(&elems[*bi]),
                };
                if better {
                    best = Some((idx, u, x));
                }
            }
        }
        let (idx, u, x) = best.ok_or_else(|| {
            Error::Invariant(format!(
                "no element of the form x·u reached from {}",
                self.format(e)
            ))
        })?;
        let mut path = Vec::new();
        let mut cur = idx;
        while cur != 0 {
            let (p, s) = parents[cur];
            path.push((s, elems[cur].clone()));
            cur = p;
        }
        path.reverse();
        Ok((u, x, path))
    }

    /// Whether `V^{p(e)} ⊆ V^{W_J ⋊ Γ_J}` (this engine's `J`).
    pub fn is_elliptic(&self, e: &Elt) -> Result<bool> {
        self.check_member(e)?;
        let fixed = self.fixed_linear(e.fin);
        Ok(fixed.dirs.iter().all(|v| {
            self.sub
                .j
                .iter()
                .all(|&i| linalg::dot_iq(self.datum.simple_coroot_fn(i), v) == linalg::q(0))
                && self
                    .sub
                    .gammas
                    .iter()
                    .all(|&g| self.group.apply_q(self.group.gamma_id(g), v) == *v)
        }))
    }

    /// Searches `h ∈ ^{I(J,u)} W_J ^I` with `h I h⁻¹ ⊆ I(J,u)` and `h w h⁻¹ = u`.
    pub fn partial_conjugator(
        &self,
        i: &[usize],
        j: &[usize],
        w: &Elt,
        u: &Elt,
    ) -> Result<Option<FinId>> {
        let iju = self.i_of(j, u)?;
        let ok_left = |h: FinId| {
            iju.iter().all(|&s| {
                self.group
                    .length(self.group.mul(self.group.simple_ids[s], h))
                    > self.group.length(h)
            })
        };
        let ok_right = |h: FinId| {
            i.iter().all(|&s| {
                self.group
                    .length(self.group.mul(h, self.group.simple_ids[s]))
                    > self.group.length(h)
            })
        };
        for h in self.finite_parabolic(j) {
            if !ok_left(h) || !ok_right(h) || self.conj_fin(h, w) != *u {
                continue;
            }
            let inside = i.iter().all(|&s| {
                let c = self.group.conj(h, self.group.simple_ids[s]);
                iju.iter().any(|&t| self.group.simple_ids[t] == c)
            });
            if inside {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }

    /// `(J, C) ∼ (J', C')` for elliptic classes of `W̃_J`, `W̃_{J'}` given by
    /// representatives with dominant Newton points. Returns the transporting
    /// element `x ∈ ^{J'}(W_K ⋊ Γ_K)^J`, `K = J_ν`.
    pub fn pair_equivalent(&self, j: &[usize], c: &Elt, j2: &[usize], c2: &Elt) -> Option<FinId> {
        let nu = self.newton_point(c);
        if nu != self.newton_point(c2) {
            return None;
        }
        let k = self.datum.stabilizer_simples(&nu);
        let eng_k = self.parabolic(&k);
        let eng_j2 = self.parabolic(j2);
        let target = eng_j2.class_inv(c2);
        let fl = |x: FinId| self.group.length(x);
        let mut set_j: Vec<FinId> = j.iter().map(|&s| self.group.simple_ids[s]).collect();
        set_j.sort_unstable();
        let mut set_j2: Vec<FinId> = j2.iter().map(|&s| self.group.simple_ids[s]).collect();
        set_j2.sort_unstable();
        eng_k.classes.members.iter().copied().find(|&x| {
            let min_left = j2
                .iter()
                .all(|&s| fl(self.group.mul(self.group.simple_ids[s], x)) > fl(x));
            let min_right = j
                .iter()
                .all(|&s| fl(self.group.mul(x, self.group.simple_ids[s])) > fl(x));
            if !min_left || !min_right {
                return false;
            }
            let mut img: Vec<FinId> = set_j.iter().map(|&s| self.group.conj(x, s)).collect();
            img.sort_unstable();
            if img != set_j2 {
                return false;
            }
            let y = self.conj_fin(x, c);
            eng_j2.contains(&y) && eng_j2.class_inv(&y) == target
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Lam;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elt(eng: &Engine, rng: &mut ChaCha8Rng, bound: i64) -> Elt {
        let lam: Vec<i64> = (0..eng.rank())
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        Elt {
            lam: lam.into(),
            fin: rng.gen_range(0..eng.group.len() as u32),
        }
    }

    /// All `t^μ f` with `|μ|_∞ ≤ r`.
    fn box_elts(eng: &Engine, r: i64) -> Vec<Elt> {
        let d = eng.rank();
        let mut out = Vec::new();
        let side = (2 * r + 1) as usize;
        for code in 0..side.pow(d as u32) {
            let mut c = code;
            let lam: Lam = (0..d)
                .map(|_| {
                    let v = (c % side) as i64 - r;
                    c /= side;
                    v
                })
                .collect();
            for f in 0..eng.group.len() as FinId {
                out.push(Elt {
                    lam: lam.clone(),
                    fin: f,
                });
            }
        }
        out
    }

    #[test]
    fn class_inv_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["GL3", "A2ad", "C2", "G2", "SL3tw", "GL4"] {
            let eng = Engine::load(name).unwrap();
            for _ in 0..200 {
                let e = random_elt(&eng, &mut rng, 3);
                let x = random_elt(&eng, &mut rng, 3);
                assert_eq!(
                    eng.class_inv(&e),
                    eng.class_inv(&eng.conj(&x, &e)),
                    "{name}"
                );
                let inv = eng.class_inv(&e);
                assert_eq!(eng.class_inv(&eng.class_rep(&inv)), inv, "{name}");
            }
        }
    }

    #[test]
    fn equal_invariants_are_conjugate_in_a_box() {
        for name in ["A2ad", "C2", "SL3tw"] {
            let eng = Engine::load(name).unwrap();
            let elems = box_elts(&eng, 1);
            let conjugators = box_elts(&eng, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for _ in 0..150 {
                let a = &elems[rng.gen_range(0..elems.len())];
                let b = &elems[rng.gen_range(0..elems.len())];
                let same = eng.class_inv(a) == eng.class_inv(b);
                let found = conjugators.iter().any(|x| eng.conj(x, a) == *b);
                if found {
                    assert!(same, "{name}");
                }
                if same {
                    assert!(found, "{name}: {} {}", eng.format(a), eng.format(b));
                }
            }
        }
    }

    #[test]
    fn reduction_reaches_the_brute_force_minimum() {
        for name in ["A2ad", "C2", "G2"] {
            let eng = Engine::load(name).unwrap();
            let conjugators = box_elts(&eng, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..40 {
                let e = random_elt(&eng, &mut rng, 2);
                let (m, path) = eng.reduce_to_min(&e);
                let brute = conjugators
                    .iter()
                    .map(|x| eng.length(&eng.conj(x, &e)))
                    .min()
                    .unwrap();
                assert_eq!(eng.length(&m), brute, "{name} {}", eng.format(&e));
                assert!(eng.is_minimal(&m));
                let mut cur = e.clone();
                for (mv, next) in &path.steps {
                    assert_eq!(eng.apply_move(*mv, &cur), *next);
                    assert!(eng.length(next) <= eng.length(&cur));
                    cur = next.clone();
                }
                assert_eq!(cur, m);
                assert_eq!(eng.class_inv(&m), eng.class_inv(&e));
            }
        }
    }

    #[test]
    fn min_set_contains_all_minimal_conjugates_in_a_box() {
        for name in ["A2ad", "C2"] {
            let eng = Engine::load(name).unwrap();
            let conjugators = box_elts(&eng, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..25 {
                let (m, _) = eng.reduce_to_min(&random_elt(&eng, &mut rng, 2));
                let len = eng.length(&m);
                let set = eng.min_set(&m);
                let inv = eng.class_inv(&m);
                for y in &set {
                    assert_eq!(eng.length(y), len);
                    assert_eq!(eng.class_inv(y), inv);
                }
                for x in &conjugators {
                    let y = eng.conj(x, &m);
                    if eng.length(&y) == len {
                        assert!(
                            set.binary_search_by_key(&eng.order_key(&y), |z| eng.order_key(z))
                                .is_ok(),
                            "{name}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn central_translation_is_alone() {
        let eng = Engine::load("GL3").unwrap();
        let e = eng.parse("t[2,2,2]").unwrap();
        assert_eq!(eng.min_set(&e), vec![e.clone()]);
        assert_eq!(eng.class_key(&e).canonical_min, e);
    }

    #[test]
    fn class_keys_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for name in ["GL3", "C2", "SL3tw"] {
            let eng = Engine::load(name).unwrap();
            for _ in 0..60 {
                let e = random_elt(&eng, &mut rng, 2);
                let x = random_elt(&eng, &mut rng, 2);
                assert_eq!(
                    eng.class_key(&e),
                    eng.class_key(&eng.conj(&x, &e)),
                    "{name}"
                );
            }
        }
    }

    fn subsets(j: &[usize]) -> Vec<Vec<usize>> {
        (0..1usize << j.len())
            .map(|m| {
                j.iter()
                    .enumerate()
                    .filter(|(b, _)| m >> b & 1 == 1)
                    .map(|(_, &s)| s)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn i_of_matches_subset_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for name in ["GL3", "GL4", "C2"] {
            let eng = Engine::load(name).unwrap();
            let all: Vec<usize> = (0..eng.datum.num_simples()).collect();
            for j in subsets(&all) {
                for _ in 0..20 {
                    let (w, _) = eng.coset_min(&random_elt(&eng, &mut rng, 2), &j, true);
                    let got = eng.i_of(&j, &w).unwrap();
                    let normalizes = |k: &[usize]| {
                        let mut img: Vec<Elt> = k
                            .iter()
                            .map(|&s| eng.conj(&w, &eng.simple_elt(s)))
                            .collect();
                        let mut want: Vec<Elt> = k.iter().map(|&s| eng.simple_elt(s)).collect();
                        img.sort();
                        want.sort();
                        img == want
                    };
                    let best = subsets(&j)
                        .into_iter()
                        .filter(|k| normalizes(k))
                        .max_by_key(|k| k.len())
                        .unwrap();
                    assert_eq!(got, best, "{name}");
                }
            }
        }
    }

    #[test]
    fn i_of_rejects_non_minimal() {
        let eng = Engine::load("GL3").unwrap();
        assert!(eng.i_of(&[0], &eng.simples[0]).is_err());
        assert_eq!(eng.i_of(&[0, 1], &eng.identity()).unwrap(), vec![0, 1]);
    }

    #[test]
    fn partial_min_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for name in ["GL3", "C2", "A2ad"] {
            let eng = Engine::load(name).unwrap();
            let all: Vec<usize> = (0..eng.datum.num_simples()).collect();
            for j in subsets(&all) {
                for _ in 0..15 {
                    let e = random_elt(&eng, &mut rng, 2);
                    let (u, x, path) = eng.partial_min(&e, &j).unwrap();
                    assert_eq!(eng.coset_min(&u, &j, true).0, u);
                    let i = eng.i_of(&j, &u).unwrap();
                    assert!(eng.finite_parabolic(&i).contains(&x));
                    let mut cur = e.clone();
                    for (s, next) in &path {
                        assert!(j.contains(s));
                        let sx = eng.simple_elt(*s);
                        assert_eq!(eng.mul(&eng.mul(&sx, &cur), &sx), *next);
                        assert!(eng.length(next) <= eng.length(&cur));
                        cur = next.clone();
                    }
                    assert_eq!(cur, eng.mul(&Elt::finite(eng.rank(), x), &u));
                    // u is determined by the W_J-class
                    let wj = eng.finite_parabolic(&j);
                    let h = wj[rng.gen_range(0..wj.len())];
                    let (u2, _, _) = eng.partial_min(&eng.conj_fin(h, &e), &j).unwrap();
                    assert_eq!(u, u2, "{name}");
                }
            }
        }
    }

    #[test]
    fn ellipticity() {
        let eng = Engine::load("GL3").unwrap();
        let full = eng.parabolic(&[0, 1]);
        assert!(!full.is_elliptic(&eng.identity()).unwrap());
        assert!(full.is_elliptic(&eng.parse("(1 2 3)").unwrap()).unwrap());
        assert!(!full.is_elliptic(&eng.parse("(1 2)").unwrap()).unwrap());
        let empty = eng.parabolic(&[]);
        assert!(empty.is_elliptic(&eng.parse("t[1,0,0]").unwrap()).unwrap());
        assert!(empty.is_elliptic(&eng.parse("(1 2)").unwrap()).is_err());
    }

    #[test]
    fn pair_equivalence_gl3() {
        let eng = Engine::load("GL3").unwrap();
        let s1 = eng.parse("s1").unwrap();
        let s2 = eng.parse("s2").unwrap();
        let x = eng.pair_equivalent(&[0], &s1, &[1], &s2).unwrap();
        assert_eq!(
            eng.format(&Elt::finite(3, x)),
            eng.format(&eng.parse("s1*s2").unwrap())
        );
        assert_eq!(eng.pair_equivalent(&[0], &s1, &[0], &s1), Some(0));
        let t = eng.parse("t[1,1,1]*s1").unwrap();
        assert!(eng.pair_equivalent(&[0], &t, &[1], &s2).is_none());
        assert!(eng
            .pair_equivalent(&[0], &t, &[1], &eng.parse("t[1,1,1]*s2").unwrap())
            .is_some());
    }
}

//! The finite group `W₀ ⋊ Γ`, enumerated once and shared by every engine.
//!
//! Elements are identified by a dense `u32` id. Id `g * |W₀| + w` is the
//! product `w · γ_g` of the `w`-th Weyl element and the `g`-th element of Γ,
//! so id 0 is the identity and the Γ-component is a division away.

use std::collections::VecDeque;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;

use crate::datum::{pair, RootDatum};
use crate::linalg;

pub type FinId = u32;

#[derive(Clone, Debug)]
pub struct FinElt {
    /// Matrix on X, row-major.
    pub mat: Vec<i64>,
    /// Images of the tracked points (roots first).
    pub perm: Box<[u16]>,
    pub inv: FinId,
    /// Bit `k` set iff `M⁻¹(positive[k]) < 0`.
    pub neg_mask: u64,
}

pub struct FinGroup {
    pub rank: usize,
    pub n_roots: usize,
    pub w0_size: usize,
    pub gamma_size: usize,
    pub elems: Vec<FinElt>,
    index: FxHashMap<Box<[u16]>, FinId>,
    points: Vec<Vec<i64>>,
    point_index: FxHashMap<Vec<i64>, usize>,
    table: Option<Vec<FinId>>,
    /// Ids of the simple reflections, indexed like the simple roots.
    pub simple_ids: Vec<FinId>,
    /// Ids of the Γ generators.
    pub gamma_gen_ids: Vec<FinId>,
    /// Root index of each positive slot.
    pub positive: Vec<usize>,
    longest: OnceLock<FinId>,
}

impl std::fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FinGroup(|W0|={}, |Γ|={})",
            self.w0_size, self.gamma_size
        )
    }
}

const TABLE_LIMIT: usize = 1500;

impl FinGroup {
    pub fn new(datum: &RootDatum) -> Self {
        let d = datum.rank;
        assert!(
            datum.positive.len() <= 64,
            "at most 64 positive roots are supported"
        );
        let mut gens: Vec<Vec<i64>> = datum.simple_mats.clone();
        gens.extend(
            datum
                .gamma_gens
                .iter()
                .map(|&g| datum.gamma_elems[g].clone()),
        );
        // tracked points: roots, then the orbits of the standard basis
        let mut points: Vec<Vec<i64>> = datum.spec.roots.clone();
        let mut pidx: FxHashMap<Vec<i64>, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..d {
            let e: Vec<i64> = (0..d).map(|k| i64::from(k == i)).collect();
            if !pidx.contains_key(&e) {
                pidx.insert(e.clone(), points.len());
                queue.push_back(points.len());
                points.push(e);
            }
        }
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let img = linalg::imat_apply(g, &points[i], d);
                if !pidx.contains_key(&img) {
                    pidx.insert(img.clone(), points.len());
                    queue.push_back(points.len());
                    points.push(img);
                }
            }
        }
        assert!(points.len() < u16::MAX as usize);
        let perm_of = |m: &[i64]| -> Box<[u16]> {
            points
                .iter()
                .map(|p| pidx[&linalg::imat_apply(m, p, d)] as u16)
                .collect()
        };
        // W₀ by breadth-first search
        let id_mat = linalg::imat_identity(d);
        let simple_perms: Vec<Box<[u16]>> = datum.simple_mats.iter().map(|m| perm_of(m)).collect();
        let mut w_perms: Vec<Box<[u16]>> = vec![perm_of(&id_mat)];
        let mut w_mats: Vec<Vec<i64>> = vec![id_mat.clone()];
        let mut w_index: FxHashMap<Box<[u16]>, usize> = FxHashMap::default();
        w_index.insert(w_perms[0].clone(), 0);
        let mut k = 0;
        while k < w_perms.len() {
            for (s, sp) in simple_perms.iter().enumerate() {
                let np: Box<[u16]> = w_perms[k].iter().map(|&x| sp[x as usize]).collect();
                if !w_index.contains_key(&np) {
                    w_index.insert(np.clone(), w_perms.len());
                    w_mats.push(linalg::imat_mul(&datum.simple_mats[s], &w_mats[k], d));
                    w_perms.push(np);
                }
            }
            k += 1;
        }
        let w0_size = w_perms.len();
        let gamma_size = datum.gamma_elems.len();
        let mut elems = Vec::with_capacity(w0_size * gamma_size);
        let mut index = FxHashMap::default();
        for g in &datum.gamma_elems {
            let gp = perm_of(g);
            for (wp, wm) in w_perms.iter().zip(&w_mats) {
                let perm: Box<[u16]> = gp.iter().map(|&x| wp[x as usize]).collect();
                index.insert(perm.clone(), elems.len() as FinId);
                elems.push(FinElt {
                    mat: linalg::imat_mul(wm, g, d),
                    perm,
                    inv: 0,
                    neg_mask: 0,
                });
            }
        }
        let n = elems.len();
        let n_roots = datum.spec.roots.len();
        for i in 0..n {
            let mut inv = vec![0u16; elems[i].perm.len()];
            for (p, &q) in elems[i].perm.iter().enumerate() {
                inv[q as usize] = p as u16;
            }
            let inv: Box<[u16]> = inv.into();
            let j = index[&inv];
            elems[i].inv = j;
            let mut mask = 0u64;
            for (slot, &r) in datum.positive.iter().enumerate() {
                if !datum.is_positive(inv[r] as usize) {
                    mask |= 1 << slot;
                }
            }
            elems[i].neg_mask = mask;
        }
        let simple_ids = simple_perms.iter().map(|p| index[p]).collect();
        let gamma_gen_ids = datum
            .gamma_gens
            .iter()
            .map(|&g| (g * w0_size) as FinId)
            .collect();
        let mut grp = FinGroup {
            rank: d,
            n_roots,
            w0_size,
            gamma_size,
            elems,
            index,
            points,
            point_index: pidx,
            table: None,
            simple_ids,
            gamma_gen_ids,
            positive: datum.positive.clone(),
            longest: OnceLock::new(),
        };
        if n <= TABLE_LIMIT {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = grp.mul_slow(a as FinId, b as FinId);
                }
            }
            grp.table = Some(t);
        }
        grp
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn mul_slow(&self, a: FinId, b: FinId) -> FinId {
        let pa = &self.elems[a as usize].perm;
        let pb = &self.elems[b as usize].perm;
        let p: Box<[u16]> = pb.iter().map(|&x| pa[x as usize]).collect();
        self.index[&p]
    }

    #[inline]
    pub fn mul(&self, a: FinId, b: FinId) -> FinId {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: FinId) -> FinId {
        self.elems[a as usize].inv
    }

    pub fn conj(&self, g: FinId, x: FinId) -> FinId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn mat(&self, a: FinId) -> &[i64] {
        &self.elems[a as usize].mat
    }

    #[inline]
    pub fn neg_mask(&self, a: FinId) -> u64 {
        self.elems[a as usize].neg_mask
    }

    /// Image of root index `r`.
    #[inline]
    pub fn root_image(&self, a: FinId, r: usize) -> usize {
        self.elems[a as usize].perm[r] as usize
    }

    pub fn gamma_of(&self, a: FinId) -> usize {
        a as usize / self.w0_size
    }

    /// The `W₀`-component `w` of `a = w γ`.
    pub fn w_part(&self, a: FinId) -> FinId {
        (a as usize % self.w0_size) as FinId
    }

    pub fn gamma_id(&self, g: usize) -> FinId {
        (g * self.w0_size) as FinId
    }

    pub fn is_identity(&self, a: FinId) -> bool {
        a == 0
    }

    /// Finite length (number of inversions of the `W₀` part).
    pub fn length(&self, a: FinId) -> u32 {
        self.neg_mask(a).count_ones()
    }

    pub fn apply(&self, a: FinId, v: &[i64]) -> Vec<i64> {
        linalg::imat_apply(self.mat(a), v, self.rank)
    }

    pub fn apply_q(&self, a: FinId, v: &[linalg::Q]) -> linalg::QVec {
        linalg::imat_apply_q(self.mat(a), self.rank, self.rank, v)
    }

    /// Id of the element with the given matrix, if it belongs to the group.
    pub fn find_mat(&self, m: &[i64]) -> Option<FinId> {
        let mut perm = Vec::with_capacity(self.points.len());
        for p in &self.points {
            perm.push(*self.point_index.get(&linalg::imat_apply(m, p, self.rank))? as u16);
        }
        self.index.get(&perm.into_boxed_slice()).copied()
    }

    /// Reduced word `[i_1, ..., i_k]` of the `W₀`-part: `w = s_{i_1} ... s_{i_k}`.
    pub fn reduced_word(&self, a: FinId) -> Vec<usize> {
        let mut w = self.w_part(a);
        let mut word = Vec::new();
        while w != 0 {
            // a left descent s: ℓ(s w) < ℓ(w)
            let (i, s) = self
                .simple_ids
                .iter()
                .enumerate()
                .find(|(_, &s)| self.length(self.mul(s, w)) < self.length(w))
                .expect("nontrivial element has a descent");
            word.push(i);
            w = self.mul(*s, w);
        }
        word
    }

    pub fn longest(&self) -> FinId {
        *self.longest.get_or_init(|| {
            (0..self.w0_size as FinId)
                .max_by_key(|&w| self.length(w))
                .unwrap_or(0)
        })
    }
}

/// Conjugacy classes of a subgroup `G' ⊆ W₀ ⋊ Γ` given by generators.
#[derive(Debug)]
pub struct ClassTable {
    /// Class index of each element (`u32::MAX` outside the subgroup).
    pub class_of: Vec<u32>,
    /// Representative of each class (its smallest id).
    pub reps: Vec<FinId>,
    /// `conj_to_rep[x] = g` with `g x g⁻¹ = rep(class(x))`, `g` in the subgroup.
    pub conj_to_rep: Vec<FinId>,
    /// Elements of the subgroup.
    pub members: Vec<FinId>,
    centralizers: Vec<OnceLock<Vec<FinId>>>,
}

impl ClassTable {
    pub fn new(grp: &FinGroup, gens: &[FinId]) -> Self {
        let n = grp.len();
        let mut inside = vec![false; n];
        let mut members = vec![0];
        inside[0] = true;
        let mut k = 0;
        while k < members.len() {
            for &g in gens {
                let y = grp.mul(g, members[k]);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        let mut class_of = vec![u32::MAX; n];
        let mut conj_to_rep = vec![0; n];
        let mut reps = Vec::new();
        for &x in &members {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            class_of[x as usize] = c;
            conj_to_rep[x as usize] = 0;
            let mut queue = VecDeque::from([x]);
            while let Some(y) = queue.pop_front() {
                for &g in gens {
                    let z = grp.conj(g, y);
                    if class_of[z as usize] == u32::MAX {
                        class_of[z as usize] = c;
                        // y = g⁻¹ z g, so c(y) g⁻¹ conjugates z to the representative
                        conj_to_rep[z as usize] = grp.mul(conj_to_rep[y as usize], grp.inv(g));
                        queue.push_back(z);
                    }
                }
            }
        }
        let centralizers = (0..reps.len()).map(|_| OnceLock::new()).collect();
        ClassTable {
            class_of,
            reps,
            conj_to_rep,
            members,
            centralizers,
        }
    }

    pub fn contains(&self, x: FinId) -> bool {
        self.class_of[x as usize] != u32::MAX
    }

    /// Centralizer in the subgroup of the representative of class `c`.
    pub fn centralizer(&self, grp: &FinGroup, c: u32) -> &[FinId] {
        self.centralizers[c as usize].get_or_init(|| {
            let r = self.reps[c as usize];
            self.members
                .iter()
                .copied()
                .filter(|&g| grp.mul(g, r) == grp.mul(r, g))
                .collect()
        })
    }
}

/// `<x, α∨>` for each positive slot, used by length computations.
pub fn pairings(datum: &RootDatum, x: &[i64]) -> Vec<i64> {
    datum
        .positive
        .iter()
        .map(|&r| pair(x, &datum.coroot_fn[r]))
        .collect()
}

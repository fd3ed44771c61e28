//! The extended affine Weyl group `W̃_J = X ⋊ (W_J ⋊ Γ_J)` attached to a
//! subset `J` of the simple roots (`J = S₀` gives `W̃` itself).
//!
//! One [`Engine`] serves both the full group and its parabolic subgroups; a
//! parabolic engine shares the datum and the finite group with its parent and
//! only restricts the root subsystem used by lengths, simple reflections and
//! alcoves.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num::{Signed, Zero};
use rustc_hash::{FxBuildHasher, FxHashSet};
use smallvec::SmallVec;

use crate::cocenter::ClassPolys;
use crate::conjugacy::{ClassSmith, Registry};
use crate::datum::{pair, KottwitzGroup, KottwitzValue, ParabolicSubdatum, RootDatum};
use crate::element::{is_permutation_type, one_line, Elt, GroupOps, Lam, Notation};
use crate::group::{ClassTable, FinGroup, FinId};
use crate::hecke::HeckeElt;
use crate::linalg::{self, QVec, Q};
use crate::{Error, Result};

/// Tunable search bounds.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Length bound `B` of the conjugators tried by the elementary strong
    /// conjugation search in [`Engine::min_set`].
    pub ball_bound: u32,
}

impl Options {
    pub fn for_datum(datum: &RootDatum) -> Self {
        Options {
            ball_bound: if datum.num_simples() <= 3 { 6 } else { 2 },
        }
    }
}

/// Value of the Kottwitz map: the image of `λ` in `X / ZR_J` and the Γ-part.
#[derive(
    Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Kappa {
    pub value: KottwitzValue,
    pub gamma: usize,
}

impl std::fmt::Display for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.gamma == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} @g{}", self.value, self.gamma)
        }
    }
}

/// A rational affine subspace `base + span(dirs)` in normal form: `dirs` is
/// in reduced row echelon form and `base` vanishes at its pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub base: QVec,
    pub dirs: Vec<QVec>,
}

impl AffineSubspace {
    pub fn new(base: QVec, dirs: Vec<QVec>) -> Self {
        let d = base.len();
        let (rows, pivots) = linalg::rref(dirs, d);
        let mut base = base;
        for (row, &p) in rows.iter().zip(&pivots) {
            let c = base[p].clone();
            if !c.is_zero() {
                for (b, r) in base.iter_mut().zip(row) {
                    *b -= &c * r;
                }
            }
        }
        AffineSubspace { base, dirs: rows }
    }

    pub fn whole(d: usize) -> Self {
        let dirs = (0..d)
            .map(|i| (0..d).map(|k| linalg::q(i64::from(i == k))).collect())
            .collect();
        AffineSubspace::new(linalg::qzero(d), dirs)
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        linalg::in_span(&self.dirs, &linalg::sub(p, &self.base), self.base.len())
    }

    /// Whether `E ⊆ {x : <x, f> = c}` for the row `f`.
    pub fn inside_hyperplane(&self, f: &[i64], c: &Q) -> bool {
        self.dirs.iter().all(|v| linalg::dot_iq(f, v).is_zero())
            && linalg::dot_iq(f, &self.base) == *c
    }
}

/// Closed regions used by [`Engine::regular_point_in_closure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// The closure of the base alcove; regularity refers to all affine root
    /// hyperplanes.
    Alcove,
    /// The closure of the dominant chamber; regularity refers to the linear
    /// root hyperplanes.
    Chamber,
}

pub struct Engine {
    pub datum: Arc<RootDatum>,
    pub group: Arc<FinGroup>,
    pub sub: ParabolicSubdatum,
    pub full: bool,
    /// Positive slots (indices into `datum.positive`) of the roots in `R_J⁺`.
    pub slots: Vec<usize>,
    slot_fns: Vec<i64>,
    pub slot_mask: u64,
    /// Conjugacy classes of `W_J ⋊ Γ_J`.
    pub classes: ClassTable,
    /// Simple reflections: the finite ones (indexed like `sub.j`), then one
    /// affine reflection per irreducible component.
    pub simples: Vec<Elt>,
    pub n_finite: usize,
    /// Root `θ` of each affine simple reflection `t^θ s_θ`.
    pub affine_roots: Vec<usize>,
    pub p0: QVec,
    pub kottwitz: KottwitzGroup,
    /// Generators (with inverses) of the length-zero subgroup.
    pub omega_gens: Vec<Elt>,
    two_rho: Vec<i64>,
    pub perm_type: bool,
    pub opts: Options,
    pub(crate) smith: Vec<OnceLock<ClassSmith>>,
    pub(crate) registry: Registry,
    pub(crate) memo: DashMap<Elt, Arc<ClassPolys>, FxBuildHasher>,
    pub(crate) thetas: DashMap<Lam, Arc<HeckeElt>, FxBuildHasher>,
    parabolics: DashMap<Vec<usize>, Arc<Engine>, FxBuildHasher>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Engine({}, J={:?})", self.datum.name(), self.sub.j)
    }
}

impl GroupOps for Engine {
    fn fin_group(&self) -> &FinGroup {
        &self.group
    }
}

impl Engine {
    pub fn new(datum: RootDatum) -> Arc<Engine> {
        let datum = Arc::new(datum);
        let group = Arc::new(FinGroup::new(&datum));
        let j: Vec<usize> = (0..datum.num_simples()).collect();
        Arc::new(Engine::build(datum, group, &j, true))
    }

    pub fn load(source: &str) -> Result<Arc<Engine>> {
        Ok(Engine::new(crate::datum::load(source)?))
    }

    /// The engine of `W̃_J` sharing this engine's datum and finite group.
    pub fn parabolic(&self, j: &[usize]) -> Arc<Engine> {
        let mut key: Vec<usize> = j.to_vec();
        key.sort_unstable();
        key.dedup();
        self.parabolics
            .entry(key.clone())
            .or_insert_with(|| {
                let full = key.len() == self.datum.num_simples();
                Arc::new(Engine::build(
                    self.datum.clone(),
                    self.group.clone(),
                    &key,
                    full,
                ))
            })
            .clone()
    }

    fn build(datum: Arc<RootDatum>, group: Arc<FinGroup>, j: &[usize], full: bool) -> Engine {
        let d = datum.rank;
        let sub = datum.subdatum(j);
        let slots: Vec<usize> = sub
            .roots
            .iter()
            .filter_map(|&r| datum.pos_slot[r])
            .collect::<Vec<_>>();
        let mut slots = slots;
        slots.sort_unstable();
        let slot_fns: Vec<i64> = slots
            .iter()
            .flat_map(|&k| datum.coroot_fn[datum.positive[k]].iter().copied())
            .collect();
        let slot_mask = slots.iter().fold(0u64, |m, &k| m | (1 << k));
        let mut gens: Vec<FinId> = sub.j.iter().map(|&i| group.simple_ids[i]).collect();
        gens.extend(
            sub.gammas
                .iter()
                .filter(|&&g| g != 0)
                .map(|&g| group.gamma_id(g)),
        );
        let classes = ClassTable::new(&group, &gens);
        let mut simples: Vec<Elt> = sub
            .j
            .iter()
            .map(|&i| Elt::finite(d, group.simple_ids[i]))
            .collect();
        let n_finite = simples.len();
        let mut affine_roots = Vec::new();
        for comp in datum.components(&sub.j) {
            let roots = datum.roots_in_span(&comp);
            let theta = *roots
                .iter()
                .filter(|&&r| datum.is_positive(r))
                .max_by_key(|&&r| {
                    (
                        datum.coroot_coords[r].iter().sum::<i64>(),
                        std::cmp::Reverse(r),
                    )
                })
                .expect("nonempty component");
            let a = datum.root(theta);
            let f = &datum.coroot_fn[theta];
            let mut m = linalg::imat_identity(d);
            for r in 0..d {
                for c in 0..d {
                    m[r * d + c] -= a[r] * f[c];
                }
            }
            let s_theta = group.find_mat(&m).expect("root reflections lie in W₀");
            simples.push(Elt {
                lam: SmallVec::from_slice(a),
                fin: s_theta,
            });
            affine_roots.push(theta);
        }
        let p0 = interior_point(&datum, &sub);
        let kottwitz = KottwitzGroup::new(&datum, &sub.j);
        let two_rho =
            datum.two_rho_vee_fn(&slots.iter().map(|&k| datum.positive[k]).collect::<Vec<_>>());
        let n_classes = classes.reps.len();
        let perm_type = is_permutation_type(&datum);
        let opts = Options::for_datum(&datum);
        let mut eng = Engine {
            datum,
            group,
            sub,
            full,
            slots,
            slot_fns,
            slot_mask,
            classes,
            simples,
            n_finite,
            affine_roots,
            p0,
            kottwitz,
            omega_gens: Vec::new(),
            two_rho,
            perm_type,
            opts,
            smith: (0..n_classes).map(|_| OnceLock::new()).collect(),
            registry: Registry::default(),
            memo: DashMap::default(),
            thetas: DashMap::default(),
            parabolics: DashMap::default(),
        };
        eng.omega_gens = eng.compute_omega_gens();
        eng
    }

    fn compute_omega_gens(&self) -> Vec<Elt> {
        let d = self.rank();
        let mut out: Vec<Elt> = Vec::new();
        let mut seen = FxHashSet::default();
        let mut push = |e: Elt, out: &mut Vec<Elt>| {
            if e != Elt::identity(d) && seen.insert(e.clone()) {
                out.push(e);
            }
        };
        for &g in &self.sub.gammas {
            if g != 0 {
                push(Elt::finite(d, self.group.gamma_id(g)), &mut out);
            }
        }
        for i in 0..d {
            let e: Vec<i64> = (0..d).map(|k| i64::from(k == i)).collect();
            let (omega, _) = self.omega_decompose(&Elt::translation(&e));
            push(omega, &mut out);
        }
        let invs: Vec<Elt> = out.iter().map(|e| self.inv(e)).collect();
        for e in invs {
            push(e, &mut out);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn identity(&self) -> Elt {
        Elt::identity(self.rank())
    }

    pub fn notation(&self) -> Notation<'_> {
        Notation::new(&self.datum, &self.group, &self.simples[self.n_finite..])
    }

    pub fn format(&self, e: &Elt) -> String {
        self.notation().format(e)
    }

    pub fn parse(&self, s: &str) -> Result<Elt> {
        self.notation().parse(s)
    }

    /// Whether `e` lies in `W̃_J`.
    pub fn contains(&self, e: &Elt) -> bool {
        self.classes.contains(e.fin)
    }

    pub fn check_member(&self, e: &Elt) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInSubgroup(format!(
                "{} is not in W̃_J for J={:?}",
                self.format(e),
                self.sub.j
            )))
        }
    }

    #[inline]
    fn slot_pairing(&self, idx: usize, lam: &[i64]) -> i64 {
        let d = lam.len();
        self.slot_fns[idx * d..(idx + 1) * d]
            .iter()
            .zip(lam)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Length by the closed formula, restricted to `R_J⁺` (no membership check).
    pub fn length(&self, e: &Elt) -> u32 {
        let nm = self.group.neg_mask(e.fin);
        let mut l = 0u64;
        for (idx, &slot) in self.slots.iter().enumerate() {
            let bit = ((nm >> slot) & 1) as i64;
            l += (self.slot_pairing(idx, &e.lam) - bit).unsigned_abs();
        }
        l as u32
    }

    pub fn length_checked(&self, e: &Elt) -> Result<u32> {
        self.check_member(e)?;
        Ok(self.length(e))
    }

    /// Length as the number of root hyperplanes separating the base alcove
    /// from its image, computed from the sample point `p₀`.
    pub fn length_oracle(&self, e: &Elt) -> u32 {
        self.k_vector_oracle(e)
            .iter()
            .map(|k| (k - 1).unsigned_abs() as u32)
            .sum()
    }

    /// `k(α, w̃C)` for the positive roots of `R_J` (in slot order).
    pub fn k_vector(&self, e: &Elt) -> Vec<i64> {
        let nm = self.group.neg_mask(e.fin);
        self.slots
            .iter()
            .enumerate()
            .map(|(idx, &slot)| self.slot_pairing(idx, &e.lam) + 1 - ((nm >> slot) & 1) as i64)
            .collect()
    }

    /// `k(α, w̃C) = ⌈<w̃(p₀), α∨>⌉`.
    pub fn k_vector_oracle(&self, e: &Elt) -> Vec<i64> {
        let p = self.act_q(e, &self.p0);
        self.slots
            .iter()
            .map(|&k| linalg::ceil_i64(&self.datum.pair_q(&p, self.datum.positive[k])))
            .collect()
    }

    /// `k(α, w̃C)` for an arbitrary root `α` (by index).
    pub fn k_root(&self, e: &Elt, root: usize) -> i64 {
        let nm = self.group.neg_mask(e.fin);
        let p = pair(&e.lam, &self.datum.coroot_fn[root]);
        match self.datum.pos_slot[root] {
            Some(k) => p + 1 - ((nm >> k) & 1) as i64,
            None => {
                let k = self.datum.pos_slot[self.datum.neg_of[root]]
                    .expect("negative of a positive root");
                p + ((nm >> k) & 1) as i64
            }
        }
    }

    /// `<λ, 2ρ_J∨>`.
    pub fn two_rho(&self, lam: &[i64]) -> i64 {
        pair(lam, &self.two_rho)
    }

    pub fn two_rho_q(&self, v: &[Q]) -> Q {
        linalg::dot_iq(&self.two_rho, v)
    }

    /// Whether `<λ, α∨> ≥ 0` for the simple roots of `J`.
    pub fn is_dominant(&self, lam: &[i64]) -> bool {
        self.sub
            .j
            .iter()
            .all(|&i| pair(lam, self.datum.simple_coroot_fn(i)) >= 0)
    }

    /// The `J`-dominant element of the `W_J`-orbit of `v`, with the finite element
    /// `x ∈ W_J` such that the result is `x(v)`.
    pub fn dominant_rep(&self, v: &[Q]) -> (QVec, FinId) {
        let mut cur = v.to_vec();
        let mut x: FinId = 0;
        loop {
            let bad = self
                .sub
                .j
                .iter()
                .copied()
                .find(|&i| linalg::dot_iq(self.datum.simple_coroot_fn(i), &cur).is_negative());
            let Some(i) = bad else { break };
            let s = self.group.simple_ids[i];
            cur = self.group.apply_q(s, &cur);
            x = self.group.mul(s, x);
        }
        (cur, x)
    }

    /// Right-descent reduction `e = ω · s_{w[0]} ⋯ s_{w[k-1]}` with `ℓ(ω) = 0`
    /// and `k = ℓ(e)`; indices refer to [`Engine::simples`].
    pub fn omega_decompose(&self, e: &Elt) -> (Elt, Vec<usize>) {
        let mut w = e.clone();
        let mut len = self.length(&w);
        let mut word = Vec::with_capacity(len as usize);
        while len > 0 {
            let (i, next) = self
                .simples
                .iter()
                .enumerate()
                .map(|(i, s)| (i, self.mul(&w, s)))
                .find(|(_, x)| self.length(x) < len)
                .expect("an element of positive length has a right descent");
            w = next;
            len -= 1;
            word.push(i);
        }
        word.reverse();
        (w, word)
    }

    /// Left-descent reduction `e = s_{w[0]} ⋯ s_{w[k-1]} · ω`.
    pub fn reduced_word_left(&self, e: &Elt) -> (Vec<usize>, Elt) {
        let mut w = e.clone();
        let mut len = self.length(&w);
        let mut word = Vec::with_capacity(len as usize);
        while len > 0 {
            let (i, next) = self
                .simples
                .iter()
                .enumerate()
                .map(|(i, s)| (i, self.mul(s, &w)))
                .find(|(_, x)| self.length(x) < len)
                .expect("an element of positive length has a left descent");
            w = next;
            len -= 1;
            word.push(i);
        }
        (word, w)
    }

    pub fn kappa(&self, e: &Elt) -> Kappa {
        Kappa {
            value: self.kottwitz.project(&e.lam),
            gamma: self.group.gamma_of(e.fin),
        }
    }

    /// Order of the finite part.
    pub fn fin_order(&self, f: FinId) -> u64 {
        let mut x = f;
        let mut n = 1;
        while x != 0 {
            x = self.group.mul(x, f);
            n += 1;
        }
        n
    }

    pub fn newton_point(&self, e: &Elt) -> QVec {
        let n = self.fin_order(e.fin);
        let p = self.pow(e, n);
        debug_assert!(p.is_translation());
        p.lam.iter().map(|&x| linalg::qfrac(x, n as i64)).collect()
    }

    /// The `J`-dominant representative of the Newton point.
    pub fn newton_dominant(&self, e: &Elt) -> QVec {
        self.dominant_rep(&self.newton_point(e)).0
    }

    /// `V_w̃ = {v : w̃(v) = v + ν_w̃}`.
    pub fn fixed_space(&self, e: &Elt) -> AffineSubspace {
        let d = self.rank();
        let m = self.group.mat(e.fin);
        let nu = self.newton_point(e);
        let rows: Vec<QVec> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| linalg::q(m[r * d + c] - i64::from(r == c)))
                    .collect()
            })
            .collect();
        let rhs: QVec = nu
            .iter()
            .zip(&e.lam)
            .map(|(n, &l)| n - linalg::q(l))
            .collect();
        let base = linalg::solve(&rows, &rhs, d).expect("V_w̃ is nonempty");
        AffineSubspace::new(base, linalg::nullspace(&rows, d))
    }

    /// `V^{f}` for a finite element.
    pub fn fixed_linear(&self, f: FinId) -> AffineSubspace {
        let d = self.rank();
        let m = self.group.mat(f);
        let rows: Vec<QVec> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| linalg::q(m[r * d + c] - i64::from(r == c)))
                    .collect()
            })
            .collect();
        AffineSubspace::new(linalg::qzero(d), linalg::nullspace(&rows, d))
    }

    /// Inequalities `a x ≤ b` cutting out the closed region.
    fn region_inequalities(&self, region: Region) -> Vec<(Vec<i64>, Q)> {
        let mut out: Vec<(Vec<i64>, Q)> = self
            .sub
            .j
            .iter()
            .map(|&i| {
                (
                    self.datum.simple_coroot_fn(i).iter().map(|x| -x).collect(),
                    Q::zero(),
                )
            })
            .collect();
        if region == Region::Alcove {
            for &t in &self.affine_roots {
                out.push((self.datum.coroot_fn[t].clone(), linalg::q(1)));
            }
        }
        out
    }

    /// Whether every root hyperplane through `p` (affine ones for
    /// [`Region::Alcove`], linear ones for [`Region::Chamber`]) contains `E`.
    pub fn is_regular_in(&self, e: &AffineSubspace, p: &[Q], region: Region) -> bool {
        self.slots.iter().all(|&k| {
            let f = &self.datum.coroot_fn[self.datum.positive[k]];
            let v = linalg::dot_iq(f, p);
            let hit = match region {
                Region::Alcove => v.is_integer(),
                Region::Chamber => v.is_zero(),
            };
            !hit || e.inside_hyperplane(f, &v)
        })
    }

    /// A point of `E ∩ region` lying on no root hyperplane that does not
    /// contain `E`, if one exists. The region lies on one side of each
    /// relevant hyperplane, so a relative-interior point is as regular as any
    /// point of the intersection.
    pub fn regular_point_in_closure(&self, e: &AffineSubspace, region: Region) -> Option<QVec> {
        let ineq = self.region_inequalities(region);
        let n = e.dim();
        let a: Vec<QVec> = ineq
            .iter()
            .map(|(f, _)| e.dirs.iter().map(|v| linalg::dot_iq(f, v)).collect())
            .collect();
        let b: Vec<Q> = ineq
            .iter()
            .map(|(f, c)| c - linalg::dot_iq(f, &e.base))
            .collect();
        let y = if n == 0 {
            if b.iter().any(|x| x.is_negative()) {
                return None;
            }
            vec![]
        } else {
            crate::lp::relint_point(&a, &b, n)?
        };
        let mut p = e.base.clone();
        for (yk, v) in y.iter().zip(&e.dirs) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += yk * vi;
            }
        }
        self.is_regular_in(e, &p, region).then_some(p)
    }

    /// Total order used for canonical representatives: length, then the
    /// translation vector, then the finite part.
    pub fn order_key(&self, e: &Elt) -> (u32, Lam, Vec<u32>) {
        (self.length(e), e.lam.clone(), self.fin_key(e.fin))
    }

    pub fn fin_key(&self, f: FinId) -> Vec<u32> {
        let w = self.group.w_part(f);
        let mut key: Vec<u32> = if self.perm_type {
            one_line(self.group.mat(w), self.rank())
                .into_iter()
                .map(|x| x as u32)
                .collect()
        } else {
            self.datum
                .spec
                .simples
                .iter()
                .map(|&r| self.group.root_image(w, r) as u32)
                .collect()
        };
        key.push(self.group.gamma_of(f) as u32);
        key
    }

    /// Whether a finite element lies in `W_K ⋊ Γ_K` for the simple subset `K`.
    pub fn fin_in_parabolic(&self, k: &[usize], f: FinId) -> bool {
        if k.len() == self.datum.num_simples() {
            return true;
        }
        let sub = self.datum.subdatum(k);
        let mask = sub
            .roots
            .iter()
            .filter_map(|&r| self.datum.pos_slot[r])
            .fold(0u64, |m, s| m | (1 << s));
        let w = self.group.w_part(f);
        self.group.neg_mask(w) & !mask == 0 && sub.gammas.contains(&self.group.gamma_of(f))
    }

    /// `(J, z)`-alcove test: `z w̃ z⁻¹ ∈ W̃_J` and `w̃C₀ ≥_α C₀` for every
    /// `α ∈ z⁻¹(R⁺ − R_J⁺)`.
    pub fn is_p_alcove(&self, e: &Elt, j: &[usize], z: FinId) -> bool {
        let c = self.conj_fin(z, e);
        if !self.fin_in_parabolic(j, c.fin) {
            return false;
        }
        let rj: FxHashSet<usize> = self.datum.roots_in_span(j).into_iter().collect();
        let zi = self.group.inv(z);
        self.datum
            .positive
            .iter()
            .filter(|r| !rj.contains(r))
            .all(|&beta| {
                let alpha = self.group.root_image(zi, beta);
                let base = i64::from(self.datum.is_positive(alpha));
                self.k_root(e, alpha) >= base
            })
    }

    /// Minimal representative of `W_K e` (left) or `e W_K` (right) together
    /// with the word stripped off.
    pub fn coset_min(&self, e: &Elt, k: &[usize], left: bool) -> (Elt, Vec<usize>) {
        let mut w = e.clone();
        let mut len = self.length(&w);
        let mut word = Vec::new();
        loop {
            let step = k.iter().find_map(|&i| {
                let s = Elt::finite(self.rank(), self.group.simple_ids[i]);
                let x = if left {
                    self.mul(&s, &w)
                } else {
                    self.mul(&w, &s)
                };
                (self.length(&x) < len).then_some((i, x))
            });
            let Some((i, x)) = step else { break };
            w = x;
            len -= 1;
            word.push(i);
        }
        (w, word)
    }

    /// Whether a finite Weyl element `z` is the minimal element of `W_K z`.
    pub fn is_min_left_coset_fin(&self, z: FinId, k: &[usize]) -> bool {
        k.iter().all(|&i| {
            self.group
                .length(self.group.mul(self.group.simple_ids[i], z))
                > self.group.length(z)
        })
    }

    /// `s e s` for the `i`-th simple reflection of this engine.
    pub fn simple_conj(&self, i: usize, e: &Elt) -> Elt {
        let s = &self.simples[i];
        self.mul(&self.mul(s, e), s)
    }
}

/// The point `p₀` with `<p₀, α_i∨> = 1/(2h)` for `i ∈ J`, `h` one more than
/// the largest coroot height in `R_J`; free coordinates are set to zero.
fn interior_point(datum: &RootDatum, sub: &ParabolicSubdatum) -> QVec {
    let d = datum.rank;
    if sub.j.is_empty() {
        return linalg::qzero(d);
    }
    let h = 1 + sub
        .roots
        .iter()
        .map(|&r| datum.coroot_coords[r].iter().sum::<i64>())
        .max()
        .unwrap_or(0);
    let rows: Vec<QVec> = sub
        .j
        .iter()
        .map(|&i| linalg::qvec(datum.simple_coroot_fn(i)))
        .collect();
    let rhs = vec![linalg::qfrac(1, 2 * h); sub.j.len()];
    linalg::solve(&rows, &rhs, d).expect("simple coroots are independent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elt(eng: &Engine, rng: &mut ChaCha8Rng, bound: i64) -> Elt {
        let d = eng.rank();
        let lam: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
        Elt {
            lam: lam.into(),
            fin: rng.gen_range(0..eng.group.len() as u32),
        }
    }

    #[test]
    fn gl3_translation_length() {
        let eng = Engine::load("GL3").unwrap();
        let e = eng.parse("t[1,0,0]").unwrap();
        assert_eq!(eng.length(&e), 2);
        assert_eq!(eng.length_oracle(&e), 2);
    }

    #[test]
    fn gl8_example_length_and_newton() {
        let eng = Engine::load("GL8").unwrap();
        let e = eng.parse("t[1,1,1,1,1,0,0,0]*(1 6 3)(2 7 4 8 5)").unwrap();
        assert_eq!(
            one_line(eng.group.mat(e.fin), 8),
            vec![5, 6, 0, 7, 1, 2, 3, 4]
        );
        assert_eq!(eng.length(&e), 1);
        assert_eq!(eng.length_oracle(&e), 1);
        for s in &eng.simples[..7] {
            assert_eq!(eng.length(&eng.mul(s, &e)), 2);
        }
        let nu: Vec<String> = eng.newton_dominant(&e).iter().map(linalg::fmt_q).collect();
        assert_eq!(nu, ["2/3", "2/3", "2/3", "3/5", "3/5", "3/5", "3/5", "3/5"]);
        assert_eq!(eng.kappa(&e).to_string(), "5");
        assert_eq!(eng.format(&e), "t[1,1,1,1,1,0,0,0]*(1 6 3)(2 7 4 8 5)");
    }

    #[test]
    fn simple_reflections_and_omega() {
        for name in ["GL3", "A2ad", "C2", "G2", "SL3tw", "GL4"] {
            let eng = Engine::load(name).unwrap();
            for s in &eng.simples {
                assert_eq!(eng.length(s), 1, "{name}");
                assert_eq!(eng.length_oracle(s), 1, "{name}");
                assert_eq!(eng.mul(s, s), eng.identity());
            }
            for w in &eng.omega_gens {
                assert_eq!(eng.length(w), 0, "{name}");
            }
        }
    }

    #[test]
    fn random_lengths_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["GL3", "A2ad", "C2", "G2", "SL3tw"] {
            let eng = Engine::load(name).unwrap();
            for _ in 0..300 {
                let e = random_elt(&eng, &mut rng, 3);
                assert_eq!(eng.length(&e), eng.length_oracle(&e));
                assert_eq!(eng.length(&e), eng.length(&eng.inv(&e)));
                assert_eq!(eng.k_vector(&e), eng.k_vector_oracle(&e));
            }
        }
    }

    #[test]
    fn parabolic_lengths() {
        let eng = Engine::load("GL8").unwrap();
        let sub = eng.parabolic(&[0, 1, 3, 5, 6]);
        assert_eq!(sub.slots.len(), 7);
        assert_eq!(sub.simples.len(), 8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut e = random_elt(&eng, &mut rng, 2);
            e.fin = sub.classes.members[rng.gen_range(0..sub.classes.members.len())];
            assert_eq!(sub.length(&e), sub.length_oracle(&e));
        }
        for w in &sub.omega_gens {
            assert_eq!(sub.length(w), 0);
        }
    }

    #[test]
    fn omega_decomposition_is_reduced() {
        let eng = Engine::load("C2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let e = random_elt(&eng, &mut rng, 2);
            let (omega, word) = eng.omega_decompose(&e);
            assert_eq!(eng.length(&omega), 0);
            assert_eq!(word.len() as u32, eng.length(&e));
            let back = word
                .iter()
                .fold(omega, |acc, &i| eng.mul(&acc, &eng.simples[i]));
            assert_eq!(back, e);
        }
    }

    #[test]
    fn fixed_space_gl2() {
        let eng = Engine::load("GL2").unwrap();
        let e = eng.parse("t[1,0]*(1 2)").unwrap();
        let v = eng.fixed_space(&e);
        assert_eq!(v.dim(), 1);
        let nu = eng.newton_point(&e);
        let p = v.base.clone();
        assert_eq!(eng.act_q(&e, &p), linalg::add(&p, &nu));
    }

    #[test]
    fn regular_points() {
        let eng = Engine::load("GL3").unwrap();
        let whole = AffineSubspace::whole(3);
        let p = eng
            .regular_point_in_closure(&whole, Region::Alcove)
            .unwrap();
        assert!(eng.k_vector_oracle(&eng.identity()).iter().all(|&k| k == 1));
        assert!(eng.is_regular_in(&whole, &p, Region::Alcove));
        let origin = AffineSubspace::new(linalg::qzero(3), vec![]);
        assert_eq!(
            eng.regular_point_in_closure(&origin, Region::Alcove),
            Some(linalg::qzero(3))
        );
    }

    #[test]
    fn notation_roundtrip() {
        for name in ["GL3", "C2", "SL3tw", "G2"] {
            let eng = Engine::load(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..50 {
                let e = random_elt(&eng, &mut rng, 3);
                assert_eq!(eng.parse(&eng.format(&e)).unwrap(), e, "{name}");
            }
        }
    }
}

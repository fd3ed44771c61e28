//! Based root data, their automorphisms, parabolic subdata and the
//! quotient `X / ZR` that carries the Kottwitz invariant.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, QVec, Q};

/// Serialized form of a root datum (the on-disk JSON schema).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub pairing: Vec<Vec<i64>>,
    /// Indices into `roots` (0-based).
    pub simples: Vec<usize>,
    #[serde(default)]
    pub gammas: Vec<Vec<Vec<i64>>>,
}

/// A failed root-datum invariant together with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub witness: String,
}

impl Violation {
    fn new(invariant: &str, witness: impl Into<String>) -> Self {
        Self {
            invariant: invariant.to_string(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.invariant, self.witness)
    }
}

/// Pairing of `x` with the coroot functional `a` (`<x, a^vee>` precomputed as a row).
#[inline]
pub fn pair(x: &[i64], a: &[i64]) -> i64 {
    x.iter().zip(a).map(|(p, q)| p * q).sum()
}

/// Checks every structural invariant of a based root datum.
pub fn validate(spec: &DatumSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = spec.rank;
    if d == 0 {
        out.push(Violation::new("rank must be positive", "rank = 0"));
        return out;
    }
    let shape_ok = spec.roots.iter().all(|r| r.len() == d)
        && spec.coroots.iter().all(|r| r.len() == d)
        && spec.pairing.len() == d
        && spec.pairing.iter().all(|r| r.len() == d)
        && spec
            .gammas
            .iter()
            .all(|g| g.len() == d && g.iter().all(|r| r.len() == d));
    if !shape_ok {
        out.push(Violation::new(
            "vector and matrix sizes must match the rank",
            format!("rank {d}"),
        ));
        return out;
    }
    if spec.roots.len() != spec.coroots.len() {
        out.push(Violation::new(
            "roots and coroots must be in bijection",
            format!(
                "{} roots vs {} coroots",
                spec.roots.len(),
                spec.coroots.len()
            ),
        ));
        return out;
    }
    let p: Vec<i64> = spec.pairing.iter().flatten().copied().collect();
    if linalg::idet(&p, d).abs() != 1 {
        out.push(Violation::new(
            "pairing must be perfect (unimodular)",
            format!("det = {}", linalg::idet(&p, d)),
        ));
    }
    let funcs: Vec<Vec<i64>> = spec
        .coroots
        .iter()
        .map(|c| linalg::imat_apply(&p, c, d))
        .collect();
    // dual functionals: <x, y> = x^T P y, so pairing a root-side vector against y is
    // y^T P^T x; we need the map on Y side for coroot reflections.
    let pt = linalg::imat_transpose(&p, d);
    let root_index: HashMap<&Vec<i64>, usize> =
        spec.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let coroot_index: HashMap<&Vec<i64>, usize> = spec
        .coroots
        .iter()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    if root_index.len() != spec.roots.len() {
        out.push(Violation::new("roots must be distinct", "duplicate root"));
    }
    for (i, a) in spec.roots.iter().enumerate() {
        let v = pair(a, &funcs[i]);
        if v != 2 {
            out.push(Violation::new(
                "pairing(α,α∨)≠2",
                format!("root {i} = {a:?}, pairing {v}"),
            ));
        }
    }
    if !out.is_empty() {
        return out;
    }
    // reflections permute R and R∨ compatibly with the bijection
    for (i, a) in spec.roots.iter().enumerate() {
        let av = &spec.coroots[i];
        let a_on_y = linalg::imat_apply(&pt, a, d); // y -> <a, y> as a row
        for (j, b) in spec.roots.iter().enumerate() {
            let c = pair(b, &funcs[i]);
            let img: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - c * y).collect();
            let Some(&k) = root_index.get(&img) else {
                out.push(Violation::new(
                    "s_α must permute R",
                    format!("s_{i}(root {j}) = {img:?}"),
                ));
                continue;
            };
            let bv = &spec.coroots[j];
            let cv = pair(&a_on_y, bv);
            let imgv: Vec<i64> = bv.iter().zip(av).map(|(x, y)| x - cv * y).collect();
            match coroot_index.get(&imgv) {
                Some(&kv) if kv == k => {}
                _ => out.push(Violation::new(
                    "s_α∨ must permute R∨ compatibly",
                    format!("s_{i}(coroot {j}) = {imgv:?}"),
                )),
            }
        }
    }
    // positivity with respect to the simple roots
    let sdim = spec.simples.len();
    if spec.simples.iter().any(|&s| s >= spec.roots.len()) {
        out.push(Violation::new(
            "simples must index roots",
            format!("{:?}", spec.simples),
        ));
        return out;
    }
    let srows: Vec<QVec> = (0..d)
        .map(|k| {
            spec.simples
                .iter()
                .map(|&s| linalg::q(spec.roots[s][k]))
                .collect()
        })
        .collect();
    if linalg::rank(&srows.to_vec(), sdim) != sdim {
        out.push(Violation::new(
            "simple roots must be linearly independent",
            format!("{:?}", spec.simples),
        ));
        return out;
    }
    for (i, a) in spec.roots.iter().enumerate() {
        match simple_coords(spec, a) {
            Some(c) if c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0) => {}
            _ => out.push(Violation::new(
                "R = R⁺ ⊔ −R⁺",
                format!("root {i} = {a:?} is not a signed combination of simples"),
            )),
        }
    }
    // automorphisms
    let simple_set: HashSet<&Vec<i64>> = spec.simples.iter().map(|&s| &spec.roots[s]).collect();
    for (g_i, g) in spec.gammas.iter().enumerate() {
        let gm: Vec<i64> = g.iter().flatten().copied().collect();
        if linalg::idet(&gm, d).abs() != 1 {
            out.push(Violation::new(
                "Γ generator must be an automorphism of X",
                format!("gamma {g_i}"),
            ));
            continue;
        }
        let imgs: HashSet<Vec<i64>> = spec
            .simples
            .iter()
            .map(|&s| linalg::imat_apply(&gm, &spec.roots[s], d))
            .collect();
        if imgs.len() != simple_set.len() || !imgs.iter().all(|v| simple_set.contains(v)) {
            out.push(Violation::new(
                "Γ generator must map F₀ onto F₀",
                format!("gamma {g_i}"),
            ));
        }
        let mut perm = vec![usize::MAX; spec.roots.len()];
        for (i, a) in spec.roots.iter().enumerate() {
            match root_index.get(&linalg::imat_apply(&gm, a, d)) {
                Some(&k) => perm[i] = k,
                None => out.push(Violation::new(
                    "Γ generator must preserve R",
                    format!("gamma {g_i}, root {i}"),
                )),
            }
        }
        if perm.iter().all(|&k| k != usize::MAX) {
            for i in 0..spec.roots.len() {
                for j in 0..spec.roots.len() {
                    if pair(&spec.roots[i], &funcs[j])
                        != pair(&spec.roots[perm[i]], &funcs[perm[j]])
                    {
                        out.push(Violation::new(
                            "Γ generator must preserve the pairing",
                            format!("gamma {g_i}, roots {i},{j}"),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Coefficients of `v` in the simple roots, if integral.
fn simple_coords(spec: &DatumSpec, v: &[i64]) -> Option<Vec<i64>> {
    let d = spec.rank;
    let rows: Vec<QVec> = (0..d)
        .map(|k| {
            spec.simples
                .iter()
                .map(|&s| linalg::q(spec.roots[s][k]))
                .collect()
        })
        .collect();
    let x = linalg::solve(&rows, &linalg::qvec(v), spec.simples.len())?;
    linalg::to_i64_vec(&x)
}

/// A validated root datum with derived data used throughout the engine.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub spec: DatumSpec,
    pub rank: usize,
    /// Pairing matrix, row-major.
    pub pairing: Vec<i64>,
    /// For each root, the row `a` with `<x, α∨> = x · a`.
    pub coroot_fn: Vec<Vec<i64>>,
    /// Indices of the positive roots, ordered by (height, index).
    pub positive: Vec<usize>,
    /// Positive-root slot of each root (`Some(k)` if root is `positive[k]`).
    pub pos_slot: Vec<Option<usize>>,
    /// For each root, the index of its negative.
    pub neg_of: Vec<usize>,
    /// Coefficients of each root in the simple roots.
    pub simple_coords: Vec<Vec<i64>>,
    /// Coefficients of each coroot in the simple coroots.
    pub coroot_coords: Vec<Vec<i64>>,
    /// Simple reflection matrices (acting on X), indexed like `spec.simples`.
    pub simple_mats: Vec<Vec<i64>>,
    /// Γ as an explicit list of matrices; element 0 is the identity.
    pub gamma_elems: Vec<Vec<i64>>,
    /// Indices into `gamma_elems` of the given generators.
    pub gamma_gens: Vec<usize>,
    root_index: HashMap<Vec<i64>, usize>,
}

impl RootDatum {
    pub fn new(spec: DatumSpec) -> Result<Self> {
        let v = validate(&spec);
        if !v.is_empty() {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            return Err(Error::InvalidDatum(msg.join("; ")));
        }
        let d = spec.rank;
        let pairing: Vec<i64> = spec.pairing.iter().flatten().copied().collect();
        let coroot_fn: Vec<Vec<i64>> = spec
            .coroots
            .iter()
            .map(|c| linalg::imat_apply(&pairing, c, d))
            .collect();
        let simple_coords: Vec<Vec<i64>> = spec
            .roots
            .iter()
            .map(|r| simple_coords(&spec, r).expect("validated"))
            .collect();
        let root_index: HashMap<Vec<i64>, usize> = spec
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let neg_of: Vec<usize> = spec
            .roots
            .iter()
            .map(|r| root_index[&r.iter().map(|x| -x).collect::<Vec<_>>()])
            .collect();
        let mut positive: Vec<usize> = (0..spec.roots.len())
            .filter(|&i| simple_coords[i].iter().all(|&c| c >= 0))
            .collect();
        positive.sort_by_key(|&i| (simple_coords[i].iter().sum::<i64>(), i));
        let mut pos_slot = vec![None; spec.roots.len()];
        for (k, &i) in positive.iter().enumerate() {
            pos_slot[i] = Some(k);
        }
        // coroot coordinates in the simple coroots
        let srows: Vec<QVec> = (0..d)
            .map(|k| {
                spec.simples
                    .iter()
                    .map(|&s| linalg::q(spec.coroots[s][k]))
                    .collect()
            })
            .collect();
        let mut coroot_coords = Vec::new();
        for c in &spec.coroots {
            let x = linalg::solve(&srows, &linalg::qvec(c), spec.simples.len())
                .and_then(|x| linalg::to_i64_vec(&x))
                .ok_or_else(|| {
                    Error::InvalidDatum(format!("coroot {c:?} not in the simple coroot lattice"))
                })?;
            coroot_coords.push(x);
        }
        let simple_mats = spec
            .simples
            .iter()
            .map(|&s| {
                let a = &spec.roots[s];
                let f = &coroot_fn[s];
                let mut m = linalg::imat_identity(d);
                for i in 0..d {
                    for j in 0..d {
                        m[i * d + j] -= a[i] * f[j];
                    }
                }
                m
            })
            .collect();
        // close Γ
        let id = linalg::imat_identity(d);
        let gens: Vec<Vec<i64>> = spec
            .gammas
            .iter()
            .map(|g| g.iter().flatten().copied().collect())
            .collect();
        let mut gamma_elems = vec![id.clone()];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let m = linalg::imat_mul(g, &gamma_elems[i], d);
                if !seen.contains_key(&m) {
                    seen.insert(m.clone(), gamma_elems.len());
                    queue.push_back(gamma_elems.len());
                    gamma_elems.push(m);
                }
                if gamma_elems.len() > 10_000 {
                    return Err(Error::InvalidDatum("Γ is not finite".into()));
                }
            }
        }
        let gamma_gens = gens.iter().map(|g| seen[g]).collect();
        Ok(Self {
            rank: d,
            pairing,
            coroot_fn,
            positive,
            pos_slot,
            neg_of,
            simple_coords,
            coroot_coords,
            simple_mats,
            gamma_elems,
            gamma_gens,
            root_index,
            spec,
        })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn num_simples(&self) -> usize {
        self.spec.simples.len()
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.spec.roots[i]
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.spec.roots[self.spec.simples[i]]
    }

    pub fn simple_coroot_fn(&self, i: usize) -> &[i64] {
        &self.coroot_fn[self.spec.simples[i]]
    }

    pub fn is_positive(&self, root: usize) -> bool {
        self.pos_slot[root].is_some()
    }

    /// Row computing `<x, 2ρ∨>` restricted to the roots in `mask` positions of
    /// `positive` (all of them for the full datum).
    pub fn two_rho_vee_fn(&self, roots: &[usize]) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for &r in roots {
            for (o, a) in out.iter_mut().zip(&self.coroot_fn[r]) {
                *o += a;
            }
        }
        out
    }

    /// `<v, α∨>` for a rational vector.
    pub fn pair_q(&self, v: &[Q], root: usize) -> Q {
        linalg::dot_iq(&self.coroot_fn[root], v)
    }

    /// Irreducible components of the Dynkin diagram (lists of simple indices).
    pub fn components(&self, simples: &[usize]) -> Vec<Vec<usize>> {
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        for &s in simples {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &t in simples {
                    if !seen.contains(&t)
                        && pair(self.simple_root(x), self.simple_coroot_fn(t)) != 0
                    {
                        seen.insert(t);
                        stack.push(t);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps.sort();
        comps
    }

    /// Roots in the span of the simple roots indexed by `j`.
    pub fn roots_in_span(&self, j: &[usize]) -> Vec<usize> {
        (0..self.spec.roots.len())
            .filter(|&r| {
                self.simple_coords[r]
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| c == 0 || j.contains(&k))
            })
            .collect()
    }

    /// Stable digest of the datum (used to bind caches).
    pub fn digest(&self) -> String {
        let s = serde_json::to_string(&self.spec).expect("serializable");
        hex::encode(Sha256::digest(s.as_bytes()))
    }

    /// Dominant representative of `v` under W₀ together with a reduced word
    /// `[i_1, .., i_k]` such that `s_{i_k} ... s_{i_1}(v)` is the result.
    pub fn dominant_rep(&self, v: &[Q]) -> (QVec, Vec<usize>) {
        let mut cur = v.to_vec();
        let mut word = Vec::new();
        loop {
            let bad = (0..self.num_simples())
                .find(|&i| linalg::sign(&linalg::dot_iq(self.simple_coroot_fn(i), &cur)) < 0);
            let Some(i) = bad else { break };
            let c = linalg::dot_iq(self.simple_coroot_fn(i), &cur);
            let a = self.simple_root(i);
            for (x, ai) in cur.iter_mut().zip(a) {
                *x -= &c * num::BigInt::from(*ai);
            }
            word.push(i);
        }
        (cur, word)
    }

    pub fn is_dominant_q(&self, v: &[Q]) -> bool {
        (0..self.num_simples())
            .all(|i| linalg::sign(&linalg::dot_iq(self.simple_coroot_fn(i), v)) >= 0)
    }

    /// Simple indices `i` with `<v, α_i∨> = 0`.
    pub fn stabilizer_simples(&self, v: &[Q]) -> Vec<usize> {
        (0..self.num_simples())
            .filter(|&i| linalg::dot_iq(self.simple_coroot_fn(i), v) == Q::from_integer(0.into()))
            .collect()
    }

    pub fn subdatum(&self, j: &[usize]) -> ParabolicSubdatum {
        let mut j: Vec<usize> = j.to_vec();
        j.sort();
        j.dedup();
        let roots = self.roots_in_span(&j);
        let set: HashSet<usize> = roots.iter().copied().collect();
        let gammas = (0..self.gamma_elems.len())
            .filter(|&g| {
                roots.iter().all(|&r| {
                    let img = linalg::imat_apply(&self.gamma_elems[g], self.root(r), self.rank);
                    self.root_index(&img).is_some_and(|k| set.contains(&k))
                })
            })
            .collect();
        ParabolicSubdatum { j, roots, gammas }
    }

    pub fn kottwitz_group(&self) -> KottwitzGroup {
        KottwitzGroup::new(self, &(0..self.num_simples()).collect::<Vec<_>>())
    }
}

/// `(R_J, Γ_J)` for a subset `J` of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubdatum {
    /// Simple indices (positions in `simples`).
    pub j: Vec<usize>,
    /// Root indices of `R_J`.
    pub roots: Vec<usize>,
    /// Indices into the parent's `gamma_elems` of `Γ_J`.
    pub gammas: Vec<usize>,
}

/// `X / Z R_J` presented by invariant factors.
#[derive(Clone, Debug)]
pub struct KottwitzGroup {
    pub rank: usize,
    /// Rows computing the torsion coordinates, with their moduli (> 1).
    torsion_rows: Vec<(Vec<i64>, i64)>,
    /// Rows computing the free coordinates (a normalized basis of the annihilator of `ZR_J`).
    free_rows: Vec<Vec<i64>>,
}

/// Image of a lattice vector in `X / ZR_J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KottwitzValue {
    pub free: Vec<i64>,
    pub torsion: Vec<(i64, i64)>,
}

impl fmt::Display for KottwitzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        parts.extend(self.torsion.iter().map(|(a, n)| format!("{a} mod {n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

impl KottwitzValue {
    pub fn add(&self, other: &Self) -> Self {
        Self {
            free: self
                .free
                .iter()
                .zip(&other.free)
                .map(|(a, b)| a + b)
                .collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|((a, n), (b, _))| ((a + b).rem_euclid(*n), *n))
                .collect(),
        }
    }
}

impl KottwitzGroup {
    pub fn new(datum: &RootDatum, j: &[usize]) -> Self {
        let d = datum.rank;
        let r = j.len();
        let mut a = vec![0i64; d * r];
        for (c, &s) in j.iter().enumerate() {
            for i in 0..d {
                a[i * r + c] = datum.simple_root(s)[i];
            }
        }
        let (u, diag, _) = linalg::smith(&a, d, r);
        let torsion_rows = (0..r)
            .filter(|&i| diag[i] > 1)
            .map(|i| (u[i * d..(i + 1) * d].to_vec(), diag[i]))
            .collect();
        let free_rows = if r == 0 {
            (0..d)
                .map(|i| (0..d).map(|k| i64::from(i == k)).collect())
                .collect()
        } else {
            linalg::left_kernel_int(&a, d, r)
        };
        Self {
            rank: d,
            torsion_rows,
            free_rows,
        }
    }

    pub fn project(&self, x: &[i64]) -> KottwitzValue {
        KottwitzValue {
            free: self.free_rows.iter().map(|row| pair(row, x)).collect(),
            torsion: self
                .torsion_rows
                .iter()
                .map(|(row, n)| (pair(row, x).rem_euclid(*n), *n))
                .collect(),
        }
    }

    /// Parses the printed form: free coordinates, then torsion coordinates
    /// written `a` or `a mod n`, separated by commas; `0` for the trivial group.
    pub fn parse_value(&self, s: &str) -> Result<KottwitzValue> {
        let err = || Error::Parse(format!("bad Kottwitz value `{s}`"));
        let moduli = self.invariant_factors();
        let parts: Vec<&str> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .collect();
        if self.free_rank() + moduli.len() == 0 {
            return if parts.is_empty() || parts == ["0"] {
                Ok(KottwitzValue {
                    free: vec![],
                    torsion: vec![],
                })
            } else {
                Err(err())
            };
        }
        if parts.len() != self.free_rank() + moduli.len() {
            return Err(err());
        }
        let (free, tors) = parts.split_at(self.free_rank());
        let free = free
            .iter()
            .map(|p| p.parse().map_err(|_| err()))
            .collect::<Result<_>>()?;
        let torsion = tors
            .iter()
            .zip(&moduli)
            .map(|(p, &n)| {
                let a: i64 = match p.split_once("mod") {
                    Some((a, m)) if m.trim().parse::<i64>().ok() == Some(n) => {
                        a.trim().parse().map_err(|_| err())?
                    }
                    Some(_) => return Err(err()),
                    None => p.parse().map_err(|_| err())?,
                };
                Ok((a.rem_euclid(n), n))
            })
            .collect::<Result<_>>()?;
        Ok(KottwitzValue { free, torsion })
    }

    pub fn invariant_factors(&self) -> Vec<i64> {
        self.torsion_rows.iter().map(|(_, n)| *n).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rows.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lattice {
    Root,
    Weight,
}

fn cartan_a(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Builds a datum from a Cartan matrix `a[i][j] = <α_i, α_j∨>` with `X` the
/// root lattice or the weight lattice.
fn from_cartan(
    name: &str,
    a: &[Vec<i64>],
    lattice: Lattice,
    gammas: Vec<Vec<Vec<i64>>>,
) -> DatumSpec {
    let n = a.len();
    // positive roots in simple coordinates, with coroots in simple-coroot coordinates
    let unit = |i: usize| (0..n).map(|k| i64::from(k == i)).collect::<Vec<_>>();
    let mut pos: Vec<(Vec<i64>, Vec<i64>)> = (0..n).map(|i| (unit(i), unit(i))).collect();
    let mut seen: HashSet<Vec<i64>> = pos.iter().map(|p| p.0.clone()).collect();
    let mut k = 0;
    while k < pos.len() {
        let (c, dv) = pos[k].clone();
        for j in 0..n {
            let cj: i64 = (0..n).map(|i| c[i] * a[i][j]).sum();
            let dj: i64 = (0..n).map(|i| dv[i] * a[j][i]).sum();
            let mut c2 = c.clone();
            c2[j] -= cj;
            let mut d2 = dv.clone();
            d2[j] -= dj;
            if c2.iter().all(|&x| x >= 0) && c2.iter().any(|&x| x > 0) && !seen.contains(&c2) {
                seen.insert(c2.clone());
                pos.push((c2, d2));
            }
        }
        k += 1;
    }
    let to_x = |c: &Vec<i64>| -> Vec<i64> {
        match lattice {
            Lattice::Root => c.clone(),
            Lattice::Weight => (0..n)
                .map(|i| (0..n).map(|j| c[j] * a[j][i]).sum())
                .collect(),
        }
    };
    let to_y = |dv: &Vec<i64>| -> Vec<i64> {
        match lattice {
            Lattice::Root => (0..n)
                .map(|j| (0..n).map(|i| dv[i] * a[j][i]).sum())
                .collect(),
            Lattice::Weight => dv.clone(),
        }
    };
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for (c, dv) in &pos {
        roots.push(to_x(c));
        coroots.push(to_y(dv));
    }
    for (c, dv) in &pos {
        roots.push(to_x(c).iter().map(|x| -x).collect());
        coroots.push(to_y(dv).iter().map(|x| -x).collect());
    }
    DatumSpec {
        name: name.to_string(),
        rank: n,
        roots,
        coroots,
        pairing: (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect(),
        simples: (0..n).collect(),
        gammas,
    }
}

fn gl(n: usize) -> DatumSpec {
    let e = |i: usize, j: usize| -> Vec<i64> {
        (0..n)
            .map(|k| {
                if k == i {
                    1
                } else if k == j {
                    -1
                } else {
                    0
                }
            })
            .collect()
    };
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            roots.push(e(i, j));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            roots.push(e(j, i));
        }
    }
    let simples = (0..n - 1)
        .map(|i| roots.iter().position(|r| *r == e(i, i + 1)).unwrap())
        .collect();
    DatumSpec {
        name: format!("GL{n}"),
        rank: n,
        coroots: roots.clone(),
        roots,
        pairing: (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect(),
        simples,
        gammas: vec![],
    }
}

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &["GL1..GL8", "SL2..SL8", "A2ad", "C2", "C2ad", "G2", "SL3tw"];

/// Shipped data: `GLn` (n ≤ 8), `SLn` (X = root lattice), `A2ad`
/// (X = weight lattice of A₂), `C2`, `C2ad`, `G2`, and `SL3tw` (SL₃ with the
/// diagram automorphism in Γ).
pub fn preset(name: &str) -> Result<DatumSpec> {
    let name = name.strip_prefix("preset:").unwrap_or(name);
    let c2 = vec![vec![2, -1], vec![-2, 2]];
    let g2 = vec![vec![2, -1], vec![-3, 2]];
    let spec = match name {
        "A2ad" => from_cartan("A2ad", &cartan_a(2), Lattice::Weight, vec![]),
        "C2" => from_cartan("C2", &c2, Lattice::Root, vec![]),
        "C2ad" => from_cartan("C2ad", &c2, Lattice::Weight, vec![]),
        "G2" => from_cartan("G2", &g2, Lattice::Root, vec![]),
        "SL3tw" => from_cartan(
            "SL3tw",
            &cartan_a(2),
            Lattice::Root,
            vec![vec![vec![0, 1], vec![1, 0]]],
        ),
        _ => {
            if let Some(n) = name
                .strip_prefix("GL")
                .and_then(|s| s.parse::<usize>().ok())
            {
                if (1..=8).contains(&n) {
                    return Ok(gl(n));
                }
            }
            if let Some(n) = name
                .strip_prefix("SL")
                .and_then(|s| s.parse::<usize>().ok())
            {
                if (2..=8).contains(&n) {
                    return Ok(from_cartan(
                        &format!("SL{n}"),
                        &cartan_a(n - 1),
                        Lattice::Root,
                        vec![],
                    ));
                }
            }
            return Err(Error::UnknownPreset(name.to_string()));
        }
    };
    Ok(spec)
}

/// Reads the spec behind `preset:NAME`, a bare preset name, or a JSON file
/// path, without validating it.
pub fn load_spec(source: &str) -> Result<DatumSpec> {
    if let Some(p) = source.strip_prefix("preset:") {
        return preset(p);
    }
    if let Ok(spec) = preset(source) {
        return Ok(spec);
    }
    let text = std::fs::read_to_string(source)?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads and validates a root datum; see [`load_spec`].
pub fn load(source: &str) -> Result<RootDatum> {
    RootDatum::new(load_spec(source)?)
}

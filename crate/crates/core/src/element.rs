//! Elements `t^λ · w · γ` of the extended affine Weyl group and their text
//! notation.
//!
//! Notation: factors joined by `*` and multiplied left to right. A factor is
//! `t[a,b,..]` (translation), a product of disjoint cycles `(1 6 3)(2 7 4 8 5)`
//! naming the permutation `σ` with `i ↦ next` and `σ e_i = e_{σ(i)}` (only
//! when the simple reflections permute the standard basis, as for `GLn`),
//! `w[r1,..,rk]` (the finite Weyl element sending the `i`-th simple root to
//! root `ri`), `s1`..`sn` (finite simple reflections, 1-based), `s0` or `a0`,
//! `a1`, .. (affine simple reflections, one per irreducible component), `g1`,
//! `g2`, .. (elements of Γ, `g0` being the identity) or `1`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::datum::RootDatum;
use crate::group::{FinGroup, FinId};
use crate::{Error, Result};

pub type Lam = SmallVec<[i64; 8]>;

/// `t^lam · fin` where `fin` indexes an element of `W₀ ⋊ Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elt {
    pub lam: Lam,
    pub fin: FinId,
}

impl Elt {
    pub fn identity(rank: usize) -> Self {
        Elt {
            lam: SmallVec::from_elem(0, rank),
            fin: 0,
        }
    }

    pub fn translation(lam: &[i64]) -> Self {
        Elt {
            lam: SmallVec::from_slice(lam),
            fin: 0,
        }
    }

    pub fn finite(rank: usize, fin: FinId) -> Self {
        Elt {
            lam: SmallVec::from_elem(0, rank),
            fin,
        }
    }

    pub fn is_translation(&self) -> bool {
        self.fin == 0
    }
}

/// Group law and action, which only need the finite group.
pub trait GroupOps {
    fn fin_group(&self) -> &FinGroup;

    fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let g = self.fin_group();
        let m = g.mat(a.fin);
        let d = a.lam.len();
        let mut lam = a.lam.clone();
        for i in 0..d {
            let row = &m[i * d..(i + 1) * d];
            lam[i] += row.iter().zip(&b.lam).map(|(x, y)| x * y).sum::<i64>();
        }
        Elt {
            lam,
            fin: g.mul(a.fin, b.fin),
        }
    }

    fn inv(&self, a: &Elt) -> Elt {
        let g = self.fin_group();
        let fi = g.inv(a.fin);
        let lam: Lam = g.apply(fi, &a.lam).into_iter().map(|x| -x).collect();
        Elt { lam, fin: fi }
    }

    /// `a b a⁻¹`.
    fn conj(&self, a: &Elt, b: &Elt) -> Elt {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    /// Conjugation by a finite element: `x (t^λ f) x⁻¹ = t^{xλ} x f x⁻¹`.
    fn conj_fin(&self, x: FinId, b: &Elt) -> Elt {
        let g = self.fin_group();
        Elt {
            lam: g.apply(x, &b.lam).into(),
            fin: g.conj(x, b.fin),
        }
    }

    fn pow(&self, a: &Elt, n: u64) -> Elt {
        let mut acc = Elt::identity(a.lam.len());
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Affine action on a rational point.
    fn act_q(&self, a: &Elt, v: &[crate::linalg::Q]) -> crate::linalg::QVec {
        let g = self.fin_group();
        let mut out = g.apply_q(a.fin, v);
        for (o, l) in out.iter_mut().zip(&a.lam) {
            *o += crate::linalg::q(*l);
        }
        out
    }
}

impl GroupOps for FinGroup {
    fn fin_group(&self) -> &FinGroup {
        self
    }
}

/// Whether the simple reflections of the datum permute the standard basis.
pub fn is_permutation_type(datum: &RootDatum) -> bool {
    let d = datum.rank;
    datum.simple_mats.iter().all(|m| {
        (0..d).all(|c| {
            let col: Vec<i64> = (0..d).map(|r| m[r * d + c]).collect();
            col.iter().filter(|&&x| x == 1).count() == 1 && col.iter().all(|&x| x == 0 || x == 1)
        })
    })
}

/// One-line form `σ` with `M e_i = e_{σ(i)}` (0-based) of a permutation matrix.
pub fn one_line(mat: &[i64], d: usize) -> Vec<usize> {
    (0..d)
        .map(|c| {
            (0..d)
                .find(|&r| mat[r * d + c] == 1)
                .expect("permutation matrix")
        })
        .collect()
}

fn cycles(sigma: &[usize]) -> String {
    let mut seen = vec![false; sigma.len()];
    let mut out = String::new();
    for start in 0..sigma.len() {
        if seen[start] || sigma[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", i + 1);
            i = sigma[i];
        }
        out.push(')');
    }
    out
}

/// Printer/parser for element notation over one datum.
pub struct Notation<'a> {
    pub datum: &'a RootDatum,
    pub group: &'a FinGroup,
    /// Affine simple reflections (one per irreducible component).
    pub affine: &'a [Elt],
    perm_type: bool,
}

impl<'a> Notation<'a> {
    pub fn new(datum: &'a RootDatum, group: &'a FinGroup, affine: &'a [Elt]) -> Self {
        Notation {
            datum,
            group,
            affine,
            perm_type: is_permutation_type(datum),
        }
    }

    pub fn format(&self, e: &Elt) -> String {
        let mut parts = Vec::new();
        if e.lam.iter().any(|&x| x != 0) {
            let v: Vec<String> = e.lam.iter().map(|x| x.to_string()).collect();
            parts.push(format!("t[{}]", v.join(",")));
        }
        let w = self.group.w_part(e.fin);
        if w != 0 {
            if self.perm_type {
                parts.push(cycles(&one_line(self.group.mat(w), self.datum.rank)));
            } else {
                let imgs: Vec<String> = self
                    .datum
                    .spec
                    .simples
                    .iter()
                    .map(|&r| self.group.root_image(w, r).to_string())
                    .collect();
                parts.push(format!("w[{}]", imgs.join(",")));
            }
        }
        let g = self.group.gamma_of(e.fin);
        if g != 0 {
            parts.push(format!("g{g}"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn parse(&self, s: &str) -> Result<Elt> {
        let d = self.datum.rank;
        let err = |m: &str| Error::Parse(format!("{m} in `{s}`"));
        let mut acc = Elt::identity(d);
        for raw in s.split('*') {
            let f = raw.trim();
            let factor = if f == "1" || f == "()" {
                Elt::identity(d)
            } else if let Some(body) = f.strip_prefix("t[").and_then(|r| r.strip_suffix(']')) {
                let v = parse_ints(body).ok_or_else(|| err("bad translation"))?;
                if v.len() != d {
                    return Err(err("translation has wrong rank"));
                }
                Elt::translation(&v)
            } else if let Some(body) = f.strip_prefix("w[").and_then(|r| r.strip_suffix(']')) {
                let v = parse_ints(body).ok_or_else(|| err("bad image list"))?;
                Elt::finite(
                    d,
                    self.find_by_images(&v)
                        .ok_or_else(|| err("no Weyl element with these simple-root images"))?,
                )
            } else if f.starts_with('(') {
                if !self.perm_type {
                    return Err(err("cycle notation needs a permutation-type datum"));
                }
                Elt::finite(d, self.parse_cycles(f).ok_or_else(|| err("bad cycles"))?)
            } else if let Some(k) = f.strip_prefix('g') {
                let k: usize = k.parse().map_err(|_| err("bad Γ index"))?;
                if k >= self.group.gamma_size {
                    return Err(err("Γ index out of range"));
                }
                Elt::finite(d, self.group.gamma_id(k))
            } else if let Some(k) = f.strip_prefix('a') {
                let k: usize = k.parse().map_err(|_| err("bad affine index"))?;
                self.affine
                    .get(k)
                    .cloned()
                    .ok_or_else(|| err("affine index out of range"))?
            } else if let Some(k) = f.strip_prefix('s') {
                let k: usize = k.parse().map_err(|_| err("bad simple index"))?;
                if k == 0 {
                    self.affine
                        .first()
                        .cloned()
                        .ok_or_else(|| err("no affine reflection"))?
                } else {
                    let id = *self
                        .group
                        .simple_ids
                        .get(k - 1)
                        .ok_or_else(|| err("simple index out of range"))?;
                    Elt::finite(d, id)
                }
            } else {
                return Err(err(&format!("unknown factor `{f}`")));
            };
            acc = GroupOps::mul(self.group, &acc, &factor);
        }
        Ok(acc)
    }

    fn find_by_images(&self, imgs: &[i64]) -> Option<FinId> {
        let simples = &self.datum.spec.simples;
        if imgs.len() != simples.len() {
            return None;
        }
        (0..self.group.w0_size as FinId).find(|&w| {
            simples
                .iter()
                .zip(imgs)
                .all(|(&r, &i)| self.group.root_image(w, r) as i64 == i)
        })
    }

    fn parse_cycles(&self, s: &str) -> Option<FinId> {
        let d = self.datum.rank;
        let mut sigma: Vec<usize> = (0..d).collect();
        for cyc in s.split(')') {
            let cyc = cyc.trim();
            if cyc.is_empty() {
                continue;
            }
            let body = cyc.strip_prefix('(')?;
            let pts: Vec<usize> = body
                .split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .ok()
                        .filter(|&v| (1..=d).contains(&v))
                        .map(|v| v - 1)
                })
                .collect::<Option<_>>()?;
            // cycles must be disjoint
            for (k, &p) in pts.iter().enumerate() {
                if sigma[p] != p {
                    return None;
                }
                sigma[p] = pts[(k + 1) % pts.len()];
            }
        }
        let mut m = vec![0i64; d * d];
        for (c, &r) in sigma.iter().enumerate() {
            m[r * d + c] = 1;
        }
        self.group
            .find_mat(&m)
            .filter(|&id| self.group.gamma_of(id) == 0)
    }
}

fn parse_ints(s: &str) -> Option<Vec<i64>> {
    if s.trim().is_empty() {
        return Some(vec![]);
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

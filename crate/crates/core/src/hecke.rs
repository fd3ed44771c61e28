//! Equal-parameter affine Hecke algebra in the Iwahori–Matsumoto basis,
//! Bernstein elements `θ_λ` and central elements `z_λ`.

use std::collections::hash_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::datum::pair;
use crate::element::{Elt, GroupOps, Lam};
use crate::engine::Engine;
use crate::linalg;
use crate::{Error, Result};

/// Laurent polynomial in `v`, stored densely from the lowest exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    lo: i32,
    c: Vec<i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::mono(1, 0)
    }

    /// `c · v^k`.
    pub fn mono(c: i64, k: i32) -> Self {
        Laurent { lo: k, c: vec![c] }.normalized()
    }

    /// `ξ = v − v⁻¹`.
    pub fn xi() -> Self {
        Laurent {
            lo: -1,
            c: vec![-1, 0, 1],
        }
    }

    pub fn from_terms(terms: &[(i32, i64)]) -> Self {
        terms
            .iter()
            .fold(Laurent::zero(), |acc, &(k, c)| acc + Laurent::mono(c, k))
    }

    fn normalized(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&x| x == 0).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i32;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: i32) -> i64 {
        usize::try_from(k - self.lo)
            .ok()
            .and_then(|i| self.c.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(move |(i, &x)| (self.lo + i as i32, x))
    }

    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.lo + self.c.len() as i32 - 1)
    }

    pub fn scale(&self, k: i64) -> Self {
        Laurent {
            lo: self.lo,
            c: self.c.iter().map(|x| x * k).collect(),
        }
        .normalized()
    }

    /// Value at `v = x`.
    pub fn eval(&self, x: &linalg::Q) -> linalg::Q {
        self.terms().fold(linalg::q(0), |acc, (k, c)| {
            let p = if k >= 0 {
                num::pow(x.clone(), k as usize)
            } else {
                num::pow(x.recip(), (-k) as usize)
            };
            acc + p * linalg::q(c)
        })
    }

    /// Rewrites the polynomial in `ξ = v − v⁻¹`, if possible.
    pub fn to_xi(&self) -> Option<XiPoly> {
        let mut rest = self.clone();
        let mut out: Vec<i64> = Vec::new();
        while let Some(d) = rest.degree() {
            if d < 0 {
                return None;
            }
            let c = rest.coeff(d);
            let du = d as usize;
            if out.len() <= du {
                out.resize(du + 1, 0);
            }
            out[du] += c;
            rest = rest - xi_power(du).scale(c);
        }
        Some(XiPoly::new(out))
    }
}

fn xi_power(k: usize) -> Laurent {
    (0..k).fold(Laurent::one(), |acc, _| &acc * &Laurent::xi())
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let lo = self.lo.min(rhs.lo);
        let hi = (self.lo + self.c.len() as i32).max(rhs.lo + rhs.c.len() as i32);
        if lo < self.lo || hi > self.lo + self.c.len() as i32 {
            let mut c = vec![0; (hi - lo) as usize];
            let off = (self.lo - lo) as usize;
            c[off..off + self.c.len()].copy_from_slice(&self.c);
            self.c = c;
            self.lo = lo;
        }
        let off = (rhs.lo - self.lo) as usize;
        for (a, b) in self.c[off..].iter_mut().zip(&rhs.c) {
            *a += b;
        }
        *self = std::mem::take(self).normalized();
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut c = vec![0i64; self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent {
            lo: self.lo + rhs.lo,
            c,
        }
        .normalized()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let (sign, a) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, a) {
                (0, a) => write!(f, "{a}")?,
                (k, 1) => write!(f, "{}", vpow(k))?,
                (k, a) => write!(f, "{a}{}", vpow(k))?,
            }
        }
        Ok(())
    }
}

fn vpow(k: i32) -> String {
    if k == 1 {
        "v".into()
    } else {
        format!("v^{k}")
    }
}

/// JSON form: exponent (as a string key) to coefficient.
impl Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, i64> = self.terms().map(|(k, c)| (k.to_string(), c)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        let mut out = Laurent::zero();
        for (k, c) in m {
            let k: i32 = k.parse().map_err(serde::de::Error::custom)?;
            out += &Laurent::mono(c, k);
        }
        Ok(out)
    }
}

/// Polynomial in `ξ = v − v⁻¹`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct XiPoly(pub Vec<i64>);

impl XiPoly {
    pub fn new(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        XiPoly(c)
    }

    pub fn one() -> Self {
        XiPoly(vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &XiPoly) -> XiPoly {
        let n = self.0.len().max(other.0.len());
        XiPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    /// Multiplication by `ξ`.
    pub fn shift(&self) -> XiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0];
        c.extend_from_slice(&self.0);
        XiPoly(c)
    }

    pub fn to_laurent(&self) -> Laurent {
        let mut acc = Laurent::zero();
        let mut p = Laurent::one();
        for &c in &self.0 {
            acc += &p.scale(c);
            p = &p * &Laurent::xi();
        }
        acc
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 if c == 1 => "ξ".into(),
                1 => format!("{c}ξ"),
                _ if c == 1 => format!("ξ^{k}"),
                _ => format!("{c}ξ^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Finite combination `Σ c_w T_w` of Iwahori–Matsumoto basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: FxHashMap<Elt, Laurent>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        HeckeElt::default()
    }

    /// `c · T_w`.
    pub fn basis(w: Elt, c: Laurent) -> Self {
        let mut h = HeckeElt::zero();
        h.add_term(w, &c);
        h
    }

    pub fn add_term(&mut self, w: Elt, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Elt) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elt, &Laurent)> {
        self.terms.iter()
    }

    /// Terms sorted by element, for deterministic output.
    pub fn sorted(&self) -> Vec<(Elt, Laurent)> {
        let mut v: Vec<(Elt, Laurent)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn scale(&self, c: &Laurent) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &(a * c));
        }
        out
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        self.add(&other.scale(&Laurent::mono(-1, 0)))
    }
}

/// JSON entry of a Hecke element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeTermJson {
    pub elt: String,
    pub coeff: Laurent,
}

impl Engine {
    pub fn t(&self, w: &Elt) -> HeckeElt {
        HeckeElt::basis(w.clone(), Laurent::one())
    }

    pub fn hecke_one(&self) -> HeckeElt {
        self.t(&self.identity())
    }

    pub fn hecke_json(&self, h: &HeckeElt) -> Vec<HeckeTermJson> {
        let mut v: Vec<(Elt, Laurent)> = h.sorted();
        v.sort_by_cached_key(|(e, _)| self.order_key(e));
        v.into_iter()
            .map(|(e, c)| HeckeTermJson {
                elt: self.format(&e),
                coeff: c,
            })
            .collect()
    }

    /// `h · T_s` for the simple reflection `simples[i]`.
    pub fn mul_simple(&self, h: &HeckeElt, i: usize) -> HeckeElt {
        let s = &self.simples[i];
        let xi = Laurent::xi();
        let mut out = HeckeElt::zero();
        for (x, c) in &h.terms {
            let y = self.mul(x, s);
            if self.length(&y) < self.length(x) {
                out.add_term(x.clone(), &(c * &xi));
            }
            out.add_term(y, c);
        }
        out
    }

    /// `h · T_s⁻¹`, using `T_s⁻¹ = T_s − ξ`.
    pub fn mul_simple_inv(&self, h: &HeckeElt, i: usize) -> HeckeElt {
        let s = &self.simples[i];
        let xi = Laurent::xi();
        let mut out = HeckeElt::zero();
        for (x, c) in &h.terms {
            let y = self.mul(x, s);
            if self.length(&y) > self.length(x) {
                out.add_term(x.clone(), &-(c * &xi));
            }
            out.add_term(y, c);
        }
        out
    }

    /// `h · T_ω` for a length-zero `ω`.
    pub fn mul_omega(&self, h: &HeckeElt, omega: &Elt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in &h.terms {
            out.add_term(self.mul(x, omega), c);
        }
        out
    }

    /// `h · T_y`.
    pub fn mul_basis(&self, h: &HeckeElt, y: &Elt) -> HeckeElt {
        let (omega, word) = self.omega_decompose(y);
        let mut acc = self.mul_omega(h, &omega);
        for i in word {
            acc = self.mul_simple(&acc, i);
        }
        acc
    }

    pub fn hmul(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (y, c) in &b.terms {
            let part = self.mul_basis(a, y);
            for (w, d) in &part.terms {
                out.add_term(w.clone(), &(d * c));
            }
        }
        out
    }

    /// `h · T_y⁻¹`.
    pub fn mul_basis_inv(&self, h: &HeckeElt, y: &Elt) -> HeckeElt {
        let (omega, word) = self.omega_decompose(y);
        let mut acc = h.clone();
        for &i in word.iter().rev() {
            acc = self.mul_simple_inv(&acc, i);
        }
        self.mul_omega(&acc, &self.inv(&omega))
    }

    /// `T_y⁻¹`.
    pub fn inv_basis(&self, y: &Elt) -> HeckeElt {
        self.mul_basis_inv(&self.hecke_one(), y)
    }

    /// Dominant `χ'` (for this engine's simple roots) of least length such
    /// that `λ + χ'` is dominant too.
    pub fn dominant_shift(&self, lam: &[i64]) -> Lam {
        let d = self.rank();
        let js = &self.sub.j;
        let fns: Vec<&[i64]> = js.iter().map(|&i| self.datum.simple_coroot_fn(i)).collect();
        let need: Vec<i64> = fns.iter().map(|f| (-pair(lam, f)).max(0)).collect();
        if need.iter().all(|&c| c == 0) {
            return Lam::from_elem(0, d);
        }
        // weight of each simple coroot in 2ρ∨_J
        let mut weights = vec![0i64; js.len()];
        for &k in &self.slots {
            let r = self.datum.positive[k];
            for (w, &i) in weights.iter_mut().zip(js) {
                *w += self.datum.coroot_coords[r][i];
            }
        }
        let a: Vec<i64> = fns.iter().flat_map(|f| f.iter().copied()).collect();
        for extra in 0.. {
            for delta in compositions(&weights, extra) {
                let y: Vec<i64> = need.iter().zip(&delta).map(|(c, e)| c + e).collect();
                if let Some(x) = linalg::solve_int(&a, js.len(), d, &y) {
                    return x.into();
                }
            }
        }
        unreachable!("the pairing with simple coroots has finite-index image")
    }

    /// Bernstein element `θ_λ = T_{t^{λ+χ'}} T_{t^{χ'}}⁻¹`.
    pub fn theta(&self, lam: &[i64]) -> HeckeElt {
        let key: Lam = lam.into();
        if let Some(h) = self.thetas.get(&key) {
            return (**h).clone();
        }
        let chi2 = self.dominant_shift(lam);
        let chi: Vec<i64> = lam.iter().zip(&chi2).map(|(a, b)| a + b).collect();
        let h = self.mul_basis_inv(&self.t(&Elt::translation(&chi)), &Elt::translation(&chi2));
        self.thetas.insert(key, Arc::new(h.clone()));
        h
    }

    /// `θ_λ` from a caller-chosen split `λ = χ − χ'` into dominant parts.
    pub fn theta_split(&self, chi: &[i64], chi2: &[i64]) -> Result<HeckeElt> {
        if !self.is_dominant(chi) || !self.is_dominant(chi2) {
            return Err(Error::Precondition("split parts must be dominant".into()));
        }
        Ok(self.mul_basis_inv(&self.t(&Elt::translation(chi)), &Elt::translation(chi2)))
    }

    /// Orbit of `λ` under `W_J ⋊ Γ_J`, sorted.
    pub fn weyl_orbit(&self, lam: &[i64]) -> Vec<Lam> {
        let mut out: Vec<Lam> = self
            .classes
            .members
            .iter()
            .map(|&f| Lam::from(self.group.apply(f, lam)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `z_λ = Σ θ_μ` over the `W_J ⋊ Γ_J`-orbit of a dominant `λ`.
    pub fn central_z(&self, lam: &[i64]) -> Result<HeckeElt> {
        if !self.is_dominant(lam) {
            return Err(Error::Precondition(format!("{lam:?} is not dominant")));
        }
        Ok(self
            .weyl_orbit(lam)
            .iter()
            .fold(HeckeElt::zero(), |acc, mu| acc.add(&self.theta(mu))))
    }

    /// Both sides of `θ_χ T_s − T_s θ_{s(χ)} = ξ (θ_χ − θ_{s(χ)})/(1 − θ_{−α})`
    /// for the simple root `α_i`, with the right side expanded as a finite
    /// geometric sum.
    pub fn bernstein_sides(&self, chi: &[i64], i: usize) -> Result<(HeckeElt, HeckeElt)> {
        let pos = self.sub.j.iter().position(|&x| x == i).ok_or_else(|| {
            Error::Precondition(format!("s{} is not a simple reflection here", i + 1))
        })?;
        let fnv = self.datum.simple_coroot_fn(i);
        if fnv.iter().all(|x| x % 2 == 0) {
            return Err(Error::Precondition("α∨ ∈ 2Y is excluded".into()));
        }
        let alpha = self.datum.simple_root(i);
        let n = pair(chi, fnv);
        let s_chi: Vec<i64> = chi.iter().zip(alpha).map(|(c, a)| c - n * a).collect();
        let ts = self.t(&self.simples[pos]);
        let lhs = self
            .hmul(&self.theta(chi), &ts)
            .sub(&self.hmul(&ts, &self.theta(&s_chi)));
        let shifted =
            |k: i64| -> Vec<i64> { chi.iter().zip(alpha).map(|(c, a)| c + k * a).collect() };
        let mut sum = HeckeElt::zero();
        if n > 0 {
            for k in 0..n {
                sum = sum.add(&self.theta(&shifted(-k)));
            }
        } else {
            for k in 1..=-n {
                sum = sum.sub(&self.theta(&shifted(k)));
            }
        }
        Ok((lhs, sum.scale(&Laurent::xi())))
    }

    pub fn bernstein_comm_check(&self, chi: &[i64], i: usize) -> Result<bool> {
        let (l, r) = self.bernstein_sides(chi, i)?;
        Ok(l == r)
    }

    /// `θ_λ · T_{w₁⁻¹}⁻¹ · T_{x₁}` for `λ` dominant with respect to `J`.
    pub fn embed_special(&self, lam: &[i64], j: &[usize], w1: &Elt, x1: &Elt) -> Result<HeckeElt> {
        for &i in j {
            if pair(lam, self.datum.simple_coroot_fn(i)) < 0 {
                return Err(Error::Precondition(format!(
                    "{lam:?} is not dominant for J = {j:?}"
                )));
            }
        }
        let h = self.mul_basis_inv(&self.theta(lam), &self.inv(w1));
        Ok(self.mul_basis(&h, x1))
    }
}

impl Engine {
    /// Image of `T^J_ω` (length zero in `W̃_J`) in this algebra:
    /// writing `ω = t^μ u`, it is `θ_μ T_{u⁻¹}⁻¹`.
    fn embed_omega(&self, omega: &Elt) -> HeckeElt {
        let d = self.rank();
        let u = Elt::finite(d, omega.fin);
        self.mul_basis_inv(&self.theta(&omega.lam), &self.inv(&u))
    }

    /// Image of `T^J_s` for the `k`-th simple reflection of `W̃_J`.
    fn embed_simple(&self, sub: &Engine, k: usize) -> HeckeElt {
        let s = &sub.simples[k];
        if k < sub.n_finite {
            return self.t(s);
        }
        // s = t^θ s_θ and T^J_{t^θ} = T^J_s T^J_{s_θ}
        let s_theta = Elt::finite(self.rank(), s.fin);
        self.mul_basis_inv(&self.theta(&s.lam), &s_theta)
    }

    /// The embedding `H_J → H` of the parabolic algebra `sub` into this
    /// (full) algebra.
    pub fn embed(&self, sub: &Engine, h: &HeckeElt) -> HeckeElt {
        let mut simple_images: Vec<Option<HeckeElt>> = vec![None; sub.simples.len()];
        let mut out = HeckeElt::zero();
        for (e, c) in h.iter() {
            let (omega, word) = sub.omega_decompose(e);
            let mut acc = self.embed_omega(&omega);
            for k in word {
                if k < sub.n_finite {
                    let i = sub.sub.j[k];
                    acc = self.mul_simple(&acc, i);
                } else {
                    let img = simple_images[k].get_or_insert_with(|| self.embed_simple(sub, k));
                    acc = self.hmul(&acc, img);
                }
            }
            out = out.add(&acc.scale(c));
        }
        out
    }
}

/// All `δ ≥ 0` with `Σ w_i δ_i = total`.
fn compositions(weights: &[i64], total: i64) -> Vec<Vec<i64>> {
    fn rec(w: &[i64], total: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match w.split_first() {
            None => {
                if total == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&w0, rest)) => {
                let mut k = 0;
                while k * w0 <= total {
                    cur.push(k);
                    rec(rest, total - k * w0, cur, out);
                    cur.pop();
                    k += 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(weights, total, &mut Vec::new(), &mut out);
    out
}


#[cfg(test)]
mod embedding_tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embedding_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (name, j) in [
            ("GL3", vec![0]),
            ("GL3", vec![1]),
            ("C2", vec![0]),
            ("C2", vec![1]),
            ("G2", vec![1]),
            ("GL4", vec![0, 2]),
        ] {
            let eng = Engine::load(name).unwrap();
            let sub = eng.parabolic(&j);
            let d = eng.rank();
            let pick = |rng: &mut ChaCha8Rng| {
                let lam: Vec<i64> = (0..d).map(|_| rng.gen_range(-1..=1)).collect();
                let f = sub.classes.members[rng.gen_range(0..sub.classes.members.len())];
                Elt {
                    lam: lam.into(),
                    fin: f,
                }
            };
            for _ in 0..12 {
                let (a, b) = (sub.t(&pick(&mut rng)), sub.t(&pick(&mut rng)));
                let lhs = eng.embed(&sub, &sub.hmul(&a, &b));
                let rhs = eng.hmul(&eng.embed(&sub, &a), &eng.embed(&sub, &b));
                assert_eq!(lhs, rhs, "{name} {j:?}");
            }
            for s in sub.simples.iter().take(sub.n_finite) {
                assert_eq!(eng.embed(&sub, &sub.t(s)), eng.t(s));
            }
        }
    }

    #[test]
    fn full_embedding_is_identity() {
        let eng = Engine::load("C2").unwrap();
        let full = eng.parabolic(&[0, 1]);
        let e = eng.parse("t[1,-1]*s1*s2").unwrap();
        assert_eq!(eng.embed(&full, &full.t(&e)), eng.t(&e));
    }
}

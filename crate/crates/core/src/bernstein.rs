//! Bernstein-type representatives of cocenter classes.
//!
//! For a class `O` we look for a small parabolic `J` and an element `w̃₀` of
//! `W̃_J`, elliptic and of minimal `ℓ_J`-length there, such that `T_{w_O}`
//! and the image of `T^J_{w̃₀}` agree in the cocenter. The image is written
//! as `θ_λ T_{w₁⁻¹}⁻¹ T_{x₁}` after a partial conjugation inside `W̃_J`.

use num::{Signed, Zero};
use serde::Serialize;

use crate::cocenter::{CocenterJson, CocenterVector};
use crate::conjugacy::ClassId;
use crate::datum::pair;
use crate::element::{Elt, GroupOps};
use crate::engine::{Engine, Region};
use crate::group::FinId;
use crate::hecke::HeckeTermJson;
use crate::linalg::{self, QVec, Q};
use crate::{Error, Result};

/// Data attached to a class: `w̃'` minimal with a regular point `e'` of
/// `V_{w̃'}` in the closed base alcove, a regular direction `v`, the
/// parabolic `J` and `z ∈ ^J W₀` with `w̃₀ = z w̃' z⁻¹`.
#[derive(Clone, Debug)]
pub struct BernsteinDatum {
    pub class: ClassId,
    pub w_prime: Elt,
    pub e_prime: QVec,
    pub nu: QVec,
    pub nu_bar: QVec,
    pub v: QVec,
    pub v_bar: QVec,
    pub j: Vec<usize>,
    pub z: FinId,
    pub w0: Elt,
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinDatumJson {
    pub class: crate::conjugacy::ClassKeyJson,
    pub w_prime: String,
    pub e_prime: Vec<String>,
    pub nu_bar: Vec<String>,
    pub v: Vec<String>,
    pub j: Vec<usize>,
    pub z: String,
    pub w0: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Audit {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBReport {
    pub datum: BernsteinDatumJson,
    pub e: Vec<String>,
    pub j_e: Vec<usize>,
    /// `w̃₁ = t^λ w₁ x₁`.
    pub w1_tilde: String,
    pub lambda: Vec<i64>,
    pub w1: String,
    pub x1: String,
    pub audits: Vec<Audit>,
    pub bernstein_side: Vec<HeckeTermJson>,
    pub expected: CocenterJson,
    pub got: CocenterJson,
    pub pass: bool,
}

fn qstrings(v: &[Q]) -> Vec<String> {
    v.iter().map(linalg::fmt_q).collect()
}

impl Engine {
    fn pair_q(&self, v: &[Q], root: usize) -> Q {
        linalg::dot_iq(&self.datum.coroot_fn[root], v)
    }

    /// A point of the linear subspace `L` lying on no root hyperplane that
    /// does not contain `L`. Tries `Σ N^k b_k` for `N = 2, 3, ...`.
    fn generic_point(&self, l: &crate::engine::AffineSubspace) -> QVec {
        let d = self.rank();
        for n in 2i64.. {
            let mut p = linalg::qzero(d);
            let mut c = linalg::q(1);
            for b in &l.dirs {
                for (pi, bi) in p.iter_mut().zip(b) {
                    *pi += &c * bi;
                }
                c *= linalg::q(n);
            }
            if self.is_regular_in(l, &p, Region::Chamber) {
                return p;
            }
        }
        unreachable!("a regular point exists for some N")
    }

    /// `v = ν + εr` with `r` generic in `V^{p(w̃')}` and `ε > 0` small enough
    /// that `v` has the sign of `ν` on every root where `ν` is nonzero.
    fn regular_direction(&self, w: &Elt, nu: &[Q]) -> QVec {
        let l = self.fixed_linear(w.fin);
        let r = self.generic_point(&l);
        let mut eps = linalg::q(1);
        for &a in &self.datum.positive {
            let x = self.pair_q(nu, a);
            let y = self.pair_q(&r, a);
            if !x.is_zero() && !y.is_zero() {
                let bound = (&x / &y).abs() / linalg::q(2);
                if bound < eps {
                    eps = bound;
                }
            }
        }
        linalg::add(nu, &linalg::scale(&eps, &r))
    }

    pub fn bernstein_datum(&self, class: ClassId) -> Result<BernsteinDatum> {
        if !self.full {
            return Err(Error::Precondition(
                "Bernstein data are built on the full datum".into(),
            ));
        }
        let m = self.class_info(class).canonical_min;
        // prefer elements whose Newton point is already dominant
        let candidates: Vec<(Elt, QVec)> = self
            .min_set(&m)
            .into_iter()
            .filter_map(|w| {
                let p = self.regular_point_in_closure(&self.fixed_space(&w), Region::Alcove)?;
                Some((w, p))
            })
            .collect();
        let found = candidates
            .iter()
            .find(|(w, _)| self.datum.is_dominant_q(&self.newton_point(w)))
            .or(candidates.first())
            .cloned();
        let (w_prime, e_prime) = found.ok_or_else(|| {
            Error::SearchExhausted(format!(
                "no minimal element of the class of {} has a regular point in the closed base alcove",
                self.format(&m)
            ))
        })?;
        let nu = self.newton_point(&w_prime);
        let v = self.regular_direction(&w_prime, &nu);
        let (v_bar, z0) = self.dominant_rep(&v);
        let nu_bar = self.group.apply_q(z0, &nu);
        if !self.datum.is_dominant_q(&nu_bar) {
            return Err(Error::Invariant(
                "ν and v do not share a closed chamber".into(),
            ));
        }
        let jn = self.datum.stabilizer_simples(&nu_bar);
        let jv = self.datum.stabilizer_simples(&v_bar);
        let j: Vec<usize> = jn.into_iter().filter(|i| jv.contains(i)).collect();
        let (zmin, _) = self.coset_min(&Elt::finite(self.rank(), z0), &j, true);
        let z = zmin.fin;
        let w0 = self.conj_fin(z, &w_prime);
        Ok(BernsteinDatum {
            class,
            w_prime,
            e_prime,
            nu,
            nu_bar,
            v,
            v_bar,
            j,
            z,
            w0,
        })
    }

    pub fn bernstein_datum_json(&self, b: &BernsteinDatum) -> BernsteinDatumJson {
        BernsteinDatumJson {
            class: self.key_json(&self.key_of_id(b.class)),
            w_prime: self.format(&b.w_prime),
            e_prime: qstrings(&b.e_prime),
            nu_bar: qstrings(&b.nu_bar),
            v: qstrings(&b.v),
            j: b.j.clone(),
            z: self.format(&Elt::finite(self.rank(), b.z)),
            w0: self.format(&b.w0),
        }
    }

    /// Checks that `w̃₀` lies in `W̃_J`, is `ℓ_J`-minimal and is elliptic there.
    pub fn bernstein_datum_audits(&self, b: &BernsteinDatum) -> Result<Vec<Audit>> {
        let sub = self.parabolic(&b.j);
        let inside = sub.contains(&b.w0);
        let mut out = vec![
            Audit {
                name: "z is minimal in W_J z".into(),
                ok: self.is_min_left_coset_fin(b.z, &b.j),
            },
            Audit {
                name: "z(v) is dominant".into(),
                ok: self.group.apply_q(b.z, &b.v) == b.v_bar,
            },
            Audit {
                name: "z(nu) is dominant".into(),
                ok: self.group.apply_q(b.z, &b.nu) == b.nu_bar,
            },
            Audit {
                name: "w0 lies in the parabolic subgroup".into(),
                ok: inside,
            },
        ];
        if inside {
            out.push(Audit {
                name: "w0 is of minimal J-length".into(),
                ok: sub.is_minimal(&b.w0),
            });
            out.push(Audit {
                name: "w0 is elliptic in the parabolic".into(),
                ok: sub.is_elliptic(&b.w0)?,
            });
        }
        Ok(out)
    }

    /// Builds `θ_λ T_{w₁⁻¹}⁻¹ T_{x₁}` from the Bernstein datum of the class
    /// of `e` and compares its cocenter image with the class of `e`.
    pub fn verify_theorem_b(&self, e: &Elt) -> Result<TheoremBReport> {
        let class = self.class_id(e);
        let b = self.bernstein_datum(class)?;
        let mut audits = self.bernstein_datum_audits(&b)?;
        if audits.iter().any(|a| !a.ok) {
            let failed: Vec<&str> = audits
                .iter()
                .filter(|a| !a.ok)
                .map(|a| a.name.as_str())
                .collect();
            return Err(Error::Invariant(format!(
                "Bernstein datum audit failed: {}",
                failed.join(", ")
            )));
        }
        let d = self.rank();
        let point = self.group.apply_q(b.z, &b.e_prime);
        let j_e: Vec<usize> =
            b.j.iter()
                .copied()
                .filter(|&i| self.pair_q(&point, self.datum.spec.simples[i]).is_zero())
                .collect();
        let rj = self.datum.roots_in_span(&b.j);
        let on_walls = self.datum.positive.iter().all(|&a| {
            let x = self.pair_q(&point, a);
            x.abs() <= linalg::q(1) && (!x.is_integer() || rj.contains(&a))
        });
        audits.push(Audit {
            name: "|<e, a>| <= 1 and integral values only on R_J".into(),
            ok: on_walls,
        });

        let (u, x, _) = self.partial_min(&b.w0, &j_e)?;
        let x_elt = Elt::finite(d, x);
        let w1_tilde = self.mul(&x_elt, &u);
        let x1 = self.mul(&self.mul(&self.inv(&u), &x_elt), &u);
        let lambda: Vec<i64> = u.lam.to_vec();
        let w1 = Elt::finite(d, u.fin);

        let sub = self.parabolic(&b.j);
        let pos_j: Vec<usize> = rj
            .iter()
            .copied()
            .filter(|&a| self.datum.is_positive(a))
            .collect();
        let pairings = |a: usize| pair(&lambda, &self.datum.coroot_fn[a]);
        audits.push(Audit {
            name: "<lambda, a> >= -1 on positive roots".into(),
            ok: self.datum.positive.iter().all(|&a| pairings(a) >= -1),
        });
        audits.push(Audit {
            name: "<lambda, a> >= 0 on positive roots of J".into(),
            ok: pos_j.iter().all(|&a| pairings(a) >= 0),
        });
        audits.push(Audit {
            name: "<lambda, a> = -1 forces <e, a> < 0".into(),
            ok: self
                .datum
                .positive
                .iter()
                .all(|&a| pairings(a) != -1 || self.pair_q(&point, a).is_negative()),
        });
        audits.push(Audit {
            name: "t^lambda w1 is minimal in W_J t^lambda w1".into(),
            ok: b.j.iter().all(|&i| {
                let s = Elt::finite(d, self.group.simple_ids[i]);
                self.length(&self.mul(&s, &u)) > self.length(&u)
            }),
        });
        let w1_in_sub = sub.contains(&w1_tilde);
        audits.push(Audit {
            name: "w1~ lies in the parabolic subgroup".into(),
            ok: w1_in_sub,
        });
        if w1_in_sub {
            audits.push(Audit {
                name: "w1~ is of minimal J-length".into(),
                ok: sub.is_minimal(&w1_tilde),
            });
        }
        let nu_term = self.two_rho_q(&b.nu_bar);
        let zi = Elt::finite(d, self.group.inv(b.z));
        let conj_back = |y: &Elt| self.conj(&zi, y);
        let lam_term = linalg::q(sub.two_rho(&lambda));
        let lw1 = linalg::q(i64::from(self.group.length(w1.fin)));
        let lx1 = linalg::q(i64::from(self.group.length(x1.fin)));
        audits.push(Audit {
            name: "length formula for z^-1 t^lambda w1 z".into(),
            ok: linalg::q(i64::from(self.length(&conj_back(&u)))) == &(&nu_term + &lam_term) - &lw1,
        });
        audits.push(Audit {
            name: "length formula for z^-1 w1~ z".into(),
            ok: linalg::q(i64::from(self.length(&conj_back(&w1_tilde))))
                == &(&(&nu_term + &lam_term) - &lw1) + &lx1,
        });

        let side = self.embed_special(&lambda, &b.j, &w1, &x1)?;
        let expected = CocenterVector::unit(class);
        let got = self.reduce_t(&side);
        let pass = expected == got && audits.iter().all(|a| a.ok);
        Ok(TheoremBReport {
            datum: self.bernstein_datum_json(&b),
            e: qstrings(&point),
            j_e,
            w1_tilde: self.format(&w1_tilde),
            lambda,
            w1: self.format(&w1),
            x1: self.format(&x1),
            audits,
            bernstein_side: self.hecke_json(&side),
            expected: self.cocenter_json(&expected),
            got: self.cocenter_json(&got),
            pass,
        })
    }
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use ahecke::adlv::{DimensionReport, SigmaClassSpec};
use ahecke::cache::Cache;
use ahecke::cocenter::{CocenterJson, CocenterVector};
use ahecke::conjugacy::{ClassKeyJson, Move};
use ahecke::datum::{self, RootDatum};
use ahecke::element::Elt;
use ahecke::engine::Engine;
use ahecke::group::FinId;
use ahecke::linalg::{self, QVec};
use ahecke::Error;

use crate::output::{Failure, Outcome};
use crate::{Cli, Command, SpecArgs, TripleArgs};

type Res = Result<Outcome, Failure>;

fn parse_elt(eng: &Engine, s: &str) -> Result<Elt, Failure> {
    Ok(eng.parse(s)?)
}

/// `s1,s2` or 0-based indices `0,1`; the empty string is the empty set.
fn parse_j(eng: &Engine, s: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let idx = match tok.strip_prefix('s') {
            Some(k) => k.parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1),
            None => tok.parse::<usize>().ok(),
        };
        match idx {
            Some(i) if i < eng.n_finite => out.push(i),
            _ => {
                return Err(Failure::usage(format!(
                    "`{tok}` is not a finite simple reflection"
                )))
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_z(eng: &Engine, s: &str) -> Result<FinId, Failure> {
    let e = eng.parse(s)?;
    if e.lam.iter().any(|&c| c != 0) {
        return Err(Failure::usage(format!(
            "z = {s} is not in the finite Weyl group"
        )));
    }
    Ok(e.fin)
}

fn parse_nu(eng: &Engine, s: &str) -> Result<QVec, Failure> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let v: Option<QVec> = s.split(',').map(linalg::parse_q).collect();
    match v {
        Some(v) if v.len() == eng.rank() => Ok(v),
        _ => Err(Failure::usage(format!(
            "expected {} comma-separated rationals for --nu",
            eng.rank()
        ))),
    }
}

fn qlist(v: &[String]) -> String {
    format!("[{}]", v.join(","))
}

fn ilist(v: &[usize]) -> String {
    format!(
        "[{}]",
        v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    )
}

pub fn validate(source: &str) -> Res {
    let spec = datum::load_spec(source)?;
    let violations = datum::validate(&spec);
    if !violations.is_empty() {
        return Ok(Outcome::new(
            json!({ "datum": spec.name, "valid": false, "violations": violations }),
        )
        .pass(false));
    }
    let d = RootDatum::new(spec)?;
    Ok(Outcome::new(json!({
        "datum": d.name(),
        "valid": true,
        "rank": d.rank,
        "simple_roots": d.num_simples(),
        "positive_roots": d.positive.len(),
        "gamma_order": d.gamma_elems.len(),
        "digest": d.digest(),
    })))
}

pub fn cache_gc(eng: &Engine, cache: &mut Cache) -> Res {
    let stats = cache.gc(eng)?;
    Ok(Outcome::new(
        json!({ "path": cache.path(), "stats": stats }),
    ))
}

pub fn dispatch(cli: &Cli, eng: &Engine) -> Res {
    match &cli.command {
        Command::Validate | Command::Cache { .. } => {
            unreachable!("handled before the engine is built")
        }
        Command::Length(a) => {
            let e = parse_elt(eng, &a.elt)?;
            Ok(Outcome::new(
                json!({ "elt": eng.format(&e), "length": eng.length(&e) }),
            ))
        }
        Command::Minimize(a) => minimize(eng, &a.elt),
        Command::Classes { max_len } => classes(eng, *max_len),
        Command::Classpoly { elt, check_pivots } => {
            classpoly(eng, &elt.elt, *check_pivots, cli.seed)
        }
        Command::Reduce { elts } => reduce(eng, elts),
        Command::PalcoveScan { max_len } => palcove_scan(eng, *max_len),
        Command::BernsteinDatum(a) => bernstein_datum(eng, &a.elt),
        Command::VerifyA(t) => verify_ac(eng, t, false),
        Command::VerifyC(t) => verify_ac(eng, t, true),
        Command::VerifyB { elt, max_len } => verify_b(eng, elt.as_deref(), *max_len),
        Command::AdlvDim { elt, spec } => adlv_dim(eng, &elt.elt, spec),
        Command::AdlvEmpty { elt, j, z, spec } => adlv_empty(eng, &elt.elt, j, z, spec),
    }
}

fn minimize(eng: &Engine, s: &str) -> Res {
    let e = parse_elt(eng, s)?;
    let (m, path) = eng.reduce_to_min(&e);
    let steps: Vec<_> = path
        .steps
        .iter()
        .map(|(mv, y)| {
            let by = match *mv {
                Move::Simple(i) => eng.format(&eng.simples[i]),
                Move::Omega(k) => eng.format(&eng.omega_gens[k]),
            };
            json!({ "conjugate_by": by, "elt": eng.format(y) })
        })
        .collect();
    Ok(Outcome::new(json!({
        "elt": eng.format(&e),
        "length": eng.length(&e),
        "minimal": eng.format(&m),
        "min_length": eng.length(&m),
        "class": eng.key_json(&eng.class_key(&e)),
        "steps": steps,
    })))
}

#[derive(Serialize)]
struct ClassRow {
    class: ClassKeyJson,
    min_len: u32,
    straight: bool,
    elliptic: bool,
}

fn classes(eng: &Engine, max_len: u32) -> Res {
    let mut rows = Vec::new();
    for (id, _) in eng.classes_up_to(max_len)? {
        let info = eng.class_info(id);
        let straight = linalg::q(i64::from(info.min_len)) == eng.two_rho_q(&info.nu);
        rows.push(ClassRow {
            class: eng.key_json(&eng.key_of_id(id)),
            min_len: info.min_len,
            straight,
            elliptic: eng.is_elliptic(&info.canonical_min)?,
        });
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.class.min_rep.clone(),
                qlist(&r.class.nu),
                r.class.kappa.clone(),
                r.min_len.to_string(),
                r.straight.to_string(),
                r.elliptic.to_string(),
            ]
        })
        .collect();
    Ok(
        Outcome::new(json!({ "max_len": max_len, "count": rows.len(), "classes": rows }))
            .with_table(
                vec!["min_rep", "nu", "kappa", "min_len", "straight", "elliptic"],
                table,
            ),
    )
}

fn cocenter_rows(c: &CocenterJson) -> Vec<Vec<String>> {
    c.entries
        .iter()
        .map(|en| {
            let coeff = match (&en.poly_xi, &en.laurent) {
                (Some(p), _) => serde_json::to_string(p).expect("serializable"),
                (None, Some(l)) => serde_json::to_string(l).expect("serializable"),
                (None, None) => String::new(),
            };
            vec![
                en.class.min_rep.clone(),
                qlist(&en.class.nu),
                en.class.kappa.clone(),
                coeff,
            ]
        })
        .collect()
}

const COCENTER_HEADER: [&str; 4] = ["min_rep", "nu", "kappa", "coefficient"];

fn classpoly(eng: &Engine, s: &str, runs: usize, seed: u64) -> Res {
    let e = parse_elt(eng, s)?;
    let v = CocenterVector::from_polys(&eng.class_polynomials(&e));
    let cj = eng.cocenter_json(&v);
    let rows = cocenter_rows(&cj);
    if runs == 0 {
        return Ok(Outcome::new(cj).with_table(COCENTER_HEADER.to_vec(), rows));
    }
    let agree = (0..runs as u64)
        .into_par_iter()
        .filter(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(*k));
            CocenterVector::from_polys(&eng.class_polynomials_random(&e, &mut rng)) == v
        })
        .count();
    Ok(Outcome::new(json!({ "elt": eng.format(&e), "cocenter": cj, "seed": seed, "pivot_runs": runs, "pivot_agree": agree }))
        .with_table(COCENTER_HEADER.to_vec(), rows)
        .pass(agree == runs))
}

fn reduce(eng: &Engine, elts: &[String]) -> Res {
    let factors: Vec<Elt> = elts
        .iter()
        .map(|s| parse_elt(eng, s))
        .collect::<Result<_, _>>()?;
    let mut h = eng.hecke_one();
    for f in &factors {
        h = eng.mul_basis(&h, f);
    }
    let cj = eng.cocenter_json(&eng.reduce_t(&h));
    let rows = cocenter_rows(&cj);
    Ok(Outcome::new(json!({
        "factors": factors.iter().map(|f| eng.format(f)).collect::<Vec<_>>(),
        "cocenter": cj,
    }))
    .with_table(COCENTER_HEADER.to_vec(), rows))
}

fn palcove_scan(eng: &Engine, max_len: u32) -> Res {
    let triples = eng.p_alcove_triples(max_len)?;
    let rows: Vec<Vec<String>> = triples
        .iter()
        .map(|t| {
            vec![
                eng.format(&t.elt),
                ilist(&t.j),
                eng.format(&Elt::finite(eng.rank(), t.z)),
            ]
        })
        .collect();
    let items: Vec<_> = rows
        .iter()
        .map(|r| json!({ "elt": r[0], "j": r[1], "z": r[2] }))
        .collect();
    Ok(
        Outcome::new(json!({ "max_len": max_len, "count": items.len(), "triples": items }))
            .with_table(vec!["elt", "j", "z"], rows),
    )
}

fn bernstein_datum(eng: &Engine, s: &str) -> Res {
    let e = parse_elt(eng, s)?;
    let b = eng.bernstein_datum(eng.class_id(&e))?;
    let audits = eng.bernstein_datum_audits(&b)?;
    let ok = audits.iter().all(|a| a.ok);
    Ok(Outcome::new(
        json!({ "elt": eng.format(&e), "datum": eng.bernstein_datum_json(&b), "audits": audits }),
    )
    .pass(ok))
}

fn verify_ac(eng: &Engine, t: &TripleArgs, theorem_c: bool) -> Res {
    let one = |e: &Elt, j: &[usize], z: FinId| -> Result<(serde_json::Value, bool), Error> {
        Ok(if theorem_c {
            let r = eng.verify_theorem_c(e, j, z)?;
            (serde_json::to_value(&r).expect("serializable"), r.pass)
        } else {
            let r = eng.verify_theorem_a(e, j, z)?;
            (serde_json::to_value(&r).expect("serializable"), r.pass)
        })
    };
    match (&t.elt, t.max_len) {
        (Some(s), _) => {
            let e = parse_elt(eng, s)?;
            let j = parse_j(eng, t.j.as_deref().unwrap_or(""))?;
            let z = parse_z(eng, t.z.as_deref().unwrap_or("1"))?;
            let (v, pass) = one(&e, &j, z)?;
            Ok(Outcome::new(v).pass(pass))
        }
        (None, Some(max_len)) => {
            let triples = eng.p_alcove_triples(max_len)?;
            let results: Vec<(serde_json::Value, bool)> = triples
                .par_iter()
                .map(|t| one(&t.elt, &t.j, t.z))
                .collect::<Result<_, _>>()?;
            let rows: Vec<Vec<String>> = triples
                .iter()
                .zip(&results)
                .map(|(t, (_, p))| {
                    vec![
                        eng.format(&t.elt),
                        ilist(&t.j),
                        eng.format(&Elt::finite(eng.rank(), t.z)),
                        p.to_string(),
                    ]
                })
                .collect();
            let failed = results.iter().filter(|(_, p)| !p).count();
            let reports: Vec<_> = results.into_iter().map(|(v, _)| v).collect();
            Ok(Outcome::new(json!({ "max_len": max_len, "checked": reports.len(), "failed": failed, "reports": reports }))
                .with_table(vec!["elt", "j", "z", "pass"], rows)
                .pass(failed == 0))
        }
        (None, None) => Err(Failure::usage(
            "give either --elt with --j and --z, or --max-len",
        )),
    }
}

fn verify_b(eng: &Engine, elt: Option<&str>, max_len: Option<u32>) -> Res {
    let elts: Vec<Elt> = match (elt, max_len) {
        (Some(s), _) => vec![parse_elt(eng, s)?],
        (None, Some(l)) => eng.classes_up_to(l)?.into_iter().map(|(_, e)| e).collect(),
        (None, None) => return Err(Failure::usage("give either --elt or --max-len")),
    };
    let reports: Vec<_> = elts
        .par_iter()
        .map(|e| eng.verify_theorem_b(e))
        .collect::<Result<_, _>>()?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.datum.class.min_rep.clone(),
                qlist(&r.datum.nu_bar),
                ilist(&r.datum.j),
                format!("{:?}", r.lambda).replace(' ', ""),
                r.w1.clone(),
                r.x1.clone(),
                r.pass.to_string(),
            ]
        })
        .collect();
    let header = vec!["class", "nu_bar", "j", "lambda", "w1", "x1", "pass"];
    if elt.is_some() {
        let r = &reports[0];
        return Ok(Outcome::new(r).with_table(header, rows).pass(r.pass));
    }
    Ok(Outcome::new(json!({ "max_len": max_len, "checked": reports.len(), "failed": failed, "reports": reports }))
        .with_table(header, rows)
        .pass(failed == 0))
}

fn parse_spec(
    eng: &Engine,
    kottwitz_of: &Engine,
    a: &SpecArgs,
    levi: Option<Vec<usize>>,
) -> Result<SigmaClassSpec, Failure> {
    let (Some(nu), Some(kappa)) = (&a.nu, &a.kappa) else {
        return Err(Failure::usage("--nu and --kappa go together"));
    };
    Ok(SigmaClassSpec {
        nu_bar: parse_nu(eng, nu)?,
        kappa: kottwitz_of.kottwitz.parse_value(kappa)?,
        levi,
    })
}

fn adlv_dim(eng: &Engine, s: &str, a: &SpecArgs) -> Res {
    let e = parse_elt(eng, s)?;
    let specs: Vec<SigmaClassSpec> = if a.nu.is_none() && a.kappa.is_none() {
        eng.support_by_spec(&e, a.delta)?.into_keys().collect()
    } else {
        vec![parse_spec(eng, eng, a, None)?]
    };
    let reports: Vec<DimensionReport> = specs
        .iter()
        .map(|sp| eng.adlv_dimension(&e, sp, a.delta))
        .collect::<Result<_, _>>()?;
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.elt.clone(),
                qlist(&r.spec.nu_bar),
                r.spec.kappa.clone(),
                r.dimension.clone().unwrap_or_else(|| "empty".into()),
                r.contributors
                    .iter()
                    .map(|c| c.class.min_rep.as_str())
                    .collect::<Vec<_>>()
                    .join(";"),
            ]
        })
        .collect();
    Ok(
        Outcome::new(json!({ "elt": eng.format(&e), "delta": a.delta, "reports": reports }))
            .with_table(
                vec![
                    "element",
                    "nu_bar",
                    "kappa",
                    "dimension",
                    "contributing_classes",
                ],
                rows,
            ),
    )
}

fn adlv_empty(eng: &Engine, s: &str, j: &str, z: &str, a: &SpecArgs) -> Res {
    let e = parse_elt(eng, s)?;
    let j = parse_j(eng, j)?;
    let z = parse_z(eng, z)?;
    let sub = eng.parabolic(&j);
    let spec = parse_spec(eng, &sub, a, Some(j.clone()))?;
    let r = eng.emptiness_check(&e, &j, z, &spec, a.delta)?;
    let row = vec![
        r.elt.clone(),
        ilist(&r.j),
        r.z.clone(),
        qlist(&r.spec.nu_bar),
        r.spec.kappa.clone(),
        r.kappa_j.clone(),
        serde_json::to_value(&r.verdict)
            .expect("serializable")
            .as_str()
            .unwrap_or_default()
            .to_string(),
        r.audit_agrees.to_string(),
    ];
    let pass = r.audit_agrees;
    Ok(Outcome::new(&r)
        .with_table(
            vec![
                "element",
                "j",
                "z",
                "nu_bar",
                "kappa",
                "kappa_j",
                "verdict",
                "audit_agrees",
            ],
            vec![row],
        )
        .pass(pass))
}

//! On-disk memo of class polynomials.
//!
//! One JSON-lines file per datum. The first line is a header carrying the
//! datum digest; every following line is one element together with its
//! class polynomials and a sha256 of that payload. Classes are stored by the
//! notation of their canonical minimal representative, so a cache is
//! independent of the order in which a process happens to number classes.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cocenter::ClassPolys;
use crate::engine::Engine;
use crate::hecke::XiPoly;
use crate::{Error, Result};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "AHECKE_CACHE_DIR";

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Header {
    format: String,
    version: u32,
    datum: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Payload {
    elt: String,
    polys: Vec<(String, Vec<i64>)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    #[serde(flatten)]
    payload: Payload,
    sha256: String,
}

fn checksum(p: &Payload) -> String {
    let s = serde_json::to_string(p).expect("serializable");
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// What a load or a garbage collection found.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CacheStats {
    /// Entries that passed every check.
    pub valid: usize,
    /// Lines with a bad checksum, malformed JSON or unparsable contents.
    pub corrupt: usize,
    /// Duplicate entries for an element already seen.
    pub duplicate: usize,
    /// The header was missing or bound to a different datum; nothing was used.
    pub invalidated: bool,
}

/// A cache file bound to one engine's datum.
pub struct Cache {
    path: PathBuf,
    digest: String,
    /// Elements already present in the file.
    stored: BTreeSet<String>,
}

impl Cache {
    /// The cache file for `eng` inside `dir`.
    pub fn in_dir(dir: &Path, eng: &Engine) -> Self {
        let digest = eng.datum.digest();
        let path = dir.join(format!("classpoly-{}.jsonl", &digest[..16]));
        Cache {
            path,
            digest,
            stored: BTreeSet::new(),
        }
    }

    /// The cache file under `$AHECKE_CACHE_DIR`, if the variable is set.
    pub fn from_env(eng: &Engine) -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(|d| Cache::in_dir(Path::new(&d), eng))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn header_line(&self) -> String {
        let h = Header {
            format: "ahecke-classpoly".into(),
            version: FORMAT_VERSION,
            datum: self.digest.clone(),
        };
        serde_json::to_string(&h).expect("serializable")
    }

    /// Reads the file and decodes every valid entry.
    fn scan(&self, eng: &Engine) -> Result<(CacheStats, Vec<(String, ClassPolys)>)> {
        let mut stats = CacheStats::default();
        let mut out = Vec::new();
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((stats, out)),
            Err(e) => return Err(Error::Io(e)),
        };
        let mut lines = BufReader::new(file).lines();
        let header_ok = match lines.next() {
            Some(Ok(l)) => serde_json::from_str::<Header>(&l)
                .map(|h| h.version == FORMAT_VERSION && h.datum == self.digest)
                .unwrap_or(false),
            _ => false,
        };
        if !header_ok {
            stats.invalidated = true;
            return Ok((stats, out));
        }
        let mut seen = BTreeSet::new();
        for line in lines {
            let Ok(line) = line else {
                stats.corrupt += 1;
                continue;
            };
            if line.trim().is_empty() {
                continue;
            }
            match decode(eng, &line) {
                Some((elt, polys)) => {
                    if seen.insert(elt.clone()) {
                        stats.valid += 1;
                        out.push((elt, polys));
                    } else {
                        stats.duplicate += 1;
                    }
                }
                None => stats.corrupt += 1,
            }
        }
        Ok((stats, out))
    }

    /// Prefills the engine memo from the file.
    pub fn load(&mut self, eng: &Engine) -> Result<CacheStats> {
        let (stats, entries) = self.scan(eng)?;
        for (elt, polys) in entries {
            let e = eng.parse(&elt).expect("checked during decoding");
            eng.memo.insert(e, Arc::new(polys));
            self.stored.insert(elt);
        }
        Ok(stats)
    }

    /// Appends every memoized element not yet in the file, in a fixed order.
    /// Returns the number of entries written.
    pub fn save(&mut self, eng: &Engine) -> Result<usize> {
        let mut fresh: Vec<(String, Arc<ClassPolys>)> = eng
            .memo
            .iter()
            .map(|kv| (eng.format(kv.key()), kv.value().clone()))
            .filter(|(s, _)| !self.stored.contains(s))
            .collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        let (stats, _) = self.scan(eng)?;
        let exists = self.path.exists();
        if exists && stats.invalidated {
            // a file bound to another datum under our name is replaced
            fs::remove_file(&self.path)?;
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let new_file = !self.path.exists();
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut buf = String::new();
        if new_file {
            buf.push_str(&self.header_line());
            buf.push('\n');
        }
        for (elt, polys) in &fresh {
            buf.push_str(&encode(eng, elt, polys));
            buf.push('\n');
        }
        f.write_all(buf.as_bytes())?;
        let n = fresh.len();
        self.stored.extend(fresh.into_iter().map(|(s, _)| s));
        Ok(n)
    }

    /// Rewrites the file keeping only valid, distinct entries.
    pub fn gc(&mut self, eng: &Engine) -> Result<CacheStats> {
        let (stats, entries) = self.scan(eng)?;
        if !self.path.exists() {
            return Ok(stats);
        }
        let mut buf = self.header_line();
        buf.push('\n');
        for (elt, polys) in &entries {
            buf.push_str(&encode(eng, elt, polys));
            buf.push('\n');
        }
        let tmp = self.path.with_extension("jsonl.tmp");
        fs::write(&tmp, buf)?;
        fs::rename(&tmp, &self.path)?;
        self.stored = entries.into_iter().map(|(s, _)| s).collect();
        Ok(stats)
    }
}

fn encode(eng: &Engine, elt: &str, polys: &ClassPolys) -> String {
    let mut named: Vec<(String, Vec<i64>)> = polys
        .iter()
        .map(|(id, f)| (eng.format(&eng.class_info(*id).canonical_min), f.0.clone()))
        .collect();
    named.sort();
    let payload = Payload {
        elt: elt.to_string(),
        polys: named,
    };
    let sha256 = checksum(&payload);
    serde_json::to_string(&Entry { payload, sha256 }).expect("serializable")
}

fn decode(eng: &Engine, line: &str) -> Option<(String, ClassPolys)> {
    let entry: Entry = serde_json::from_str(line).ok()?;
    if checksum(&entry.payload) != entry.sha256 {
        return None;
    }
    let e = eng.parse(&entry.payload.elt).ok()?;
    if eng.format(&e) != entry.payload.elt {
        return None;
    }
    let mut polys: ClassPolys = Vec::with_capacity(entry.payload.polys.len());
    for (rep, coeffs) in &entry.payload.polys {
        let r = eng.parse(rep).ok()?;
        let f = XiPoly::new(coeffs.clone());
        if f.is_zero() {
            return None;
        }
        polys.push((eng.class_id(&r), f));
    }
    polys.sort_by_key(|(id, _)| *id);
    if polys.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    Some((entry.payload.elt, polys))
}

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use sha2::{Digest, Sha256};

use super::{Method, MzvResult};
use crate::error::{Error, Result};
use crate::ncseries::Index;
use crate::scalars::{BigFloat, GUARD_DIGITS};

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub digits: u32,
    pub decimal: String,
    pub method: Method,
}

/// Append-only store of evaluated values, one `index;digits;decimal;method`
/// line per record. When an index appears more than once the record with the
/// most digits wins.
#[derive(Debug, Default)]
pub struct MzvCache {
    path: Option<PathBuf>,
    records: RwLock<BTreeMap<Index, Record>>,
    writer: Mutex<()>,
}

fn index_key(k: &Index) -> String {
    k.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_line(line: &str) -> Result<(Index, Record)> {
    let fields: Vec<&str> = line.split(';').collect();
    let [k, d, dec, m] = fields[..] else {
        return Err(Error::Parse(format!("cache record needs four fields: {line:?}")));
    };
    let index: Index = k.parse()?;
    let digits = d.parse().map_err(|_| Error::Parse(format!("bad digits in cache record {line:?}")))?;
    Ok((index, Record { digits, decimal: dec.to_string(), method: Method::from_tag(m)? }))
}

impl MzvCache {
    /// A cache that lives only as long as the process.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads the file at `path` if it exists; new records are appended to it.
    pub fn open(path: &Path) -> Result<Self> {
        let cache = MzvCache { path: Some(path.to_path_buf()), ..Default::default() };
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let mut recs = cache.records.write().unwrap();
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                let (k, r) = parse_line(line)?;
                merge(&mut recs, k, r);
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn record(&self, k: &Index) -> Option<Record> {
        self.records.read().unwrap().get(k).cloned()
    }

    /// The stored value re-read at `digits`, if the record holds at least that many.
    pub fn get(&self, k: &Index, digits: u32) -> Option<BigFloat> {
        let recs = self.records.read().unwrap();
        let r = recs.get(k).filter(|r| r.digits >= digits)?;
        BigFloat::parse_with(&r.decimal, digits).ok()
    }

    /// Appends all results in one write; on failure nothing is recorded.
    pub fn insert_all(&self, results: &[MzvResult]) -> Result<()> {
        let new: Vec<(Index, Record)> = results
            .iter()
            .map(|r| {
                let decimal = r.value.to_decimal((r.digits + GUARD_DIGITS) as usize);
                (r.index.clone(), Record { digits: r.digits, decimal, method: r.method })
            })
            .collect();
        let _guard = self.writer.lock().unwrap();
        if let Some(path) = &self.path {
            let mut text = String::new();
            for (k, r) in &new {
                text.push_str(&format!("{};{};{};{}\n", index_key(k), r.digits, r.decimal, r.method.tag()));
            }
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            f.write_all(text.as_bytes())?;
        }
        let mut recs = self.records.write().unwrap();
        for (k, r) in new {
            merge(&mut recs, k, r);
        }
        Ok(())
    }

    /// SHA-256 of the current records in canonical order.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (k, r) in self.records.read().unwrap().iter() {
            h.update(format!("{};{};{};{}\n", index_key(k), r.digits, r.decimal, r.method.tag()));
        }
        hex::encode(h.finalize())
    }
}

fn merge(recs: &mut BTreeMap<Index, Record>, k: Index, r: Record) {
    match recs.get(&k) {
        Some(old) if old.digits >= r.digits => {}
        _ => {
            recs.insert(k, r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mzv::{eval, table};

    #[test]
    fn higher_precision_is_never_faked() {
        let c = MzvCache::in_memory();
        let k: Index = "2".parse().unwrap();
        c.insert_all(&[eval(&k, 30).unwrap()]).unwrap();
        assert!(c.get(&k, 30).is_some());
        assert!(c.get(&k, 20).is_some());
        assert!(c.get(&k, 31).is_none());
    }

    #[test]
    fn file_roundtrip_and_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeta.cache");
        let first = {
            let c = MzvCache::open(&path).unwrap();
            table(4, 30, &c).unwrap()
        };
        assert_eq!(first.len(), 7);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().any(|l| l.starts_with("1,2;30;1.2020569031595942853997381615114499907650;accelerated")));

        let c = MzvCache::open(&path).unwrap();
        let again = table(4, 30, &c).unwrap();
        for (k, v) in &first {
            assert_eq!(v.to_decimal(40), again[k].to_decimal(40));
        }
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 7);

        // a lower-precision duplicate does not replace the stored record
        std::fs::write(&path, format!("{text}2;10;1.64;partial-sum\n")).unwrap();
        let c = MzvCache::open(&path).unwrap();
        assert_eq!(c.record(&"2".parse().unwrap()).unwrap().digits, 30);
    }

    #[test]
    fn malformed_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad");
        std::fs::write(&path, "2;30;1.6\n").unwrap();
        assert!(MzvCache::open(&path).is_err());
    }

    #[test]
    fn write_failure_discards_results() {
        let dir = tempfile::tempdir().unwrap();
        let c = MzvCache::open(&dir.path().join("missing/dir/cache")).unwrap();
        assert!(table(3, 20, &c).is_err());
        assert!(c.is_empty());
    }
}

//! JSON records of computed tables and the on-disk store.
//!
//! A store directory holds one `entries/<hash>.json` document per diagram,
//! keyed by [`LinkDiagram::diagram_hash`], and an `index.csv` summary. Every
//! file is written to a temporary name and renamed into place.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, LinkMetadata};
use crate::error::{Error, Result};
use crate::invariants::{Bidegree, HomologyTable, ThinnessReport};
use crate::linalg::AbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub i: i32,
    pub j: i32,
    pub rank: u64,
    /// `[prime power, multiplicity]` pairs.
    pub torsion: Vec<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPJson {
    pub p: u64,
    /// `[i, j, betti]` triples.
    pub betti: Vec<(i32, i32, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolysJson {
    /// `[i, j, coefficient]` of `Kh(t, q)`.
    pub kh: Vec<(i32, i32, i64)>,
    /// `[i, prime power, j, multiplicity]` of `Kh_T`.
    #[serde(rename = "kT")]
    pub kt: Vec<(i32, u64, i32, u64)>,
    /// `[exponent, coefficient]` of the graded Euler characteristic.
    #[serde(rename = "K")]
    pub k: Vec<(i32, i64)>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none", default)]
    pub j: Option<Vec<(i32, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub h_class: String,
    pub t_class: String,
    pub verdict: String,
    pub diagonal_support: Vec<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kh_prime: Option<Vec<(i32, i32, i64)>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub excess: Vec<(i32, i32)>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub t_reason: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub knight_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub determinant: Option<u64>,
}

/// The serialized form of a [`ResultRecord`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub name: String,
    pub pd: String,
    pub diagram_hash: String,
    pub crossings: usize,
    pub components: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub linking: Vec<Vec<i32>>,
    pub meta: LinkMetadata,
    pub groups: Vec<GroupJson>,
    pub reduced_present: bool,
    #[serde(default)]
    pub reduced: Vec<GroupJson>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mod_p: Vec<ModPJson>,
    pub polys: PolysJson,
    pub classification: ClassificationJson,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRecord {
    pub name: String,
    pub diagram_hash: String,
    pub table: HomologyTable,
    pub report: ThinnessReport,
    pub timing_ms: u64,
}

fn groups_to_json(m: &BTreeMap<Bidegree, AbelianGroup>) -> Vec<GroupJson> {
    m.iter()
        .map(|(&(i, j), g)| GroupJson {
            i,
            j,
            rank: g.rank,
            torsion: g.torsion.iter().map(|(&q, &k)| [q, k]).collect(),
        })
        .collect()
}

fn groups_from_json(v: &[GroupJson]) -> Result<BTreeMap<Bidegree, AbelianGroup>> {
    let mut out = BTreeMap::new();
    for g in v {
        let mut a = AbelianGroup::free(g.rank);
        for &[q, k] in &g.torsion {
            if q < 2 || k == 0 {
                return Err(Error::Store(format!(
                    "bad torsion entry [{q},{k}] at ({},{})",
                    g.i, g.j
                )));
            }
            a.add_torsion(q, k);
        }
        if out.insert((g.i, g.j), a).is_some() {
            return Err(Error::Store(format!(
                "bidegree ({},{}) listed twice",
                g.i, g.j
            )));
        }
    }
    Ok(out)
}

impl ResultRecord {
    pub fn new(
        name: impl Into<String>,
        diagram: &LinkDiagram,
        table: HomologyTable,
        timing_ms: u64,
    ) -> Self {
        let report = table.thinness_report();
        ResultRecord {
            name: name.into(),
            diagram_hash: diagram.diagram_hash(),
            table,
            report,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> RecordJson {
        let t = &self.table;
        let r = &self.report;
        let jones = t.jones().ok();
        RecordJson {
            name: self.name.clone(),
            pd: t.pd.clone(),
            diagram_hash: self.diagram_hash.clone(),
            crossings: t.n_crossings,
            components: t.components,
            linking: t.linking.clone(),
            meta: t.meta.clone(),
            groups: groups_to_json(&t.groups),
            reduced_present: t.reduced.is_some(),
            reduced: t.reduced.as_ref().map(groups_to_json).unwrap_or_default(),
            mod_p: t
                .mod_p
                .iter()
                .map(|(&p, m)| ModPJson {
                    p,
                    betti: m.iter().map(|(&(i, j), &b)| (i, j, b)).collect(),
                })
                .collect(),
            polys: PolysJson {
                kh: t
                    .khovanov_polynomial()
                    .terms()
                    .map(|((i, j), c)| (i, j, c))
                    .collect(),
                kt: t
                    .torsion_polynomial()
                    .terms()
                    .map(|((i, q, j), m)| (i, q, j, m))
                    .collect(),
                k: t.graded_euler().terms().collect(),
                j: jones.as_ref().map(|p| p.terms().collect()),
            },
            classification: ClassificationJson {
                h_class: r.h_class.to_string(),
                t_class: r.t_class.to_string(),
                verdict: r.verdict(),
                diagonal_support: r.diagonal_support.iter().copied().collect(),
                s: r.s_value,
                kh_prime: r
                    .knight_poly
                    .as_ref()
                    .map(|p| p.terms().map(|((i, j), c)| (i, j, c)).collect()),
                excess: r.excess.clone(),
                t_reason: r.t_reason.clone(),
                knight_failure: r.knight_failure.clone(),
                determinant: jones.and_then(|j| j.abs_at_i().ok()),
            },
            timing_ms: self.timing_ms,
        }
    }

    /// Rebuilds the record; the classification is recomputed from the table.
    pub fn from_json(j: RecordJson) -> Result<Self> {
        let mut mod_p = BTreeMap::new();
        for m in &j.mod_p {
            mod_p.insert(m.p, m.betti.iter().map(|&(i, k, b)| ((i, k), b)).collect());
        }
        let table = HomologyTable {
            name: Some(j.name.clone()),
            pd: j.pd,
            n_crossings: j.crossings,
            components: j.components,
            linking: j.linking,
            meta: j.meta,
            groups: groups_from_json(&j.groups)?,
            reduced: if j.reduced_present {
                Some(groups_from_json(&j.reduced)?)
            } else {
                None
            },
            mod_p,
        };
        let report = table.thinness_report();
        Ok(ResultRecord {
            name: j.name,
            diagram_hash: j.diagram_hash,
            table,
            report,
            timing_ms: j.timing_ms,
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(serde_json::from_str(s)?)
    }

    /// Whether this record answers a request for the given extras.
    pub fn covers(&self, reduced: bool, mod_primes: &[u64]) -> bool {
        (!reduced || self.table.reduced.is_some())
            && mod_primes.iter().all(|p| self.table.mod_p.contains_key(p))
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Result<Store> {
        let root = root.into();
        fs::create_dir_all(root.join("entries"))?;
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entry_path(&self, hash: &str) -> PathBuf {
        self.root.join("entries").join(format!("{hash}.json"))
    }

    pub fn index_path(&self) -> PathBuf {
        self.root.join("index.csv")
    }

    pub fn load(&self, hash: &str) -> Result<Option<ResultRecord>> {
        let path = self.entry_path(hash);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(ResultRecord::from_json_str(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, r: &ResultRecord) -> Result<()> {
        write_atomic(
            &self.entry_path(&r.diagram_hash),
            r.to_json_string()?.as_bytes(),
        )
    }

    /// Every stored record, sorted by name.
    pub fn records(&self) -> Result<Vec<ResultRecord>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.root.join("entries"))? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                out.push(ResultRecord::from_json_str(&fs::read_to_string(&path)?)?);
            }
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(out)
    }

    pub fn find_by_name(&self, name: &str) -> Result<Option<ResultRecord>> {
        Ok(self.records()?.into_iter().find(|r| r.name == name))
    }

    /// Rewrites `index.csv` from the given records.
    pub fn write_index(&self, records: &[ResultRecord]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "name",
            "crossings",
            "h_class",
            "t_class",
            "total_rank",
            "torsion_orders",
            "determinant",
        ])?;
        for r in records {
            let orders: Vec<String> = r
                .table
                .torsion_orders()
                .iter()
                .map(u64::to_string)
                .collect();
            let det = r
                .table
                .determinant()
                .map(|d| d.to_string())
                .unwrap_or_default();
            w.write_record([
                r.name.clone(),
                r.table.n_crossings.to_string(),
                r.report.h_class.to_string(),
                r.report.t_class.to_string(),
                r.table.total_rank().to_string(),
                orders.join(";"),
                det,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Store(e.to_string()))?;
        write_atomic(&self.index_path(), &bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{compute_table, ComputeOptions};

    fn trefoil_record() -> ResultRecord {
        let d = LinkDiagram::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
            .unwrap()
            .with_name("3_1");
        let opts = ComputeOptions {
            reduced: true,
            mod_primes: vec![2],
            ..Default::default()
        };
        let mut t = compute_table(&d, &opts).unwrap();
        t.meta.signature = Some(-2);
        ResultRecord::new("3_1", &d, t, 3)
    }

    #[test]
    fn json_round_trip() {
        let r = trefoil_record();
        let s = r.to_json_string().unwrap();
        assert!(!s.contains('.'), "no floats in {s}");
        let back = ResultRecord::from_json_str(&s).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(
            v["polys"]["J"],
            serde_json::json!([[2, 1], [6, 1], [8, -1]])
        );
        assert_eq!(
            v["groups"][3],
            serde_json::json!({"i": 3, "j": 7, "rank": 0, "torsion": [[2, 1]]})
        );
        assert_eq!(v["meta"], serde_json::json!({"signature": -2}));
        assert_eq!(v["classification"]["verdict"], "H-slim, T-thin");
    }

    #[test]
    fn rejects_malformed_groups() {
        let mut j = trefoil_record().to_json();
        j.groups.push(j.groups[0].clone());
        assert!(ResultRecord::from_json(j).is_err());
    }

    #[test]
    fn store_save_load_index() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let r = trefoil_record();
        assert!(store.load(&r.diagram_hash).unwrap().is_none());
        store.save(&r).unwrap();
        assert_eq!(store.load(&r.diagram_hash).unwrap().as_ref(), Some(&r));
        assert_eq!(
            store.find_by_name("3_1").unwrap().map(|x| x.diagram_hash),
            Some(r.diagram_hash.clone())
        );
        store.write_index(&store.records().unwrap()).unwrap();
        let index = fs::read_to_string(store.index_path()).unwrap();
        assert_eq!(index.lines().nth(1), Some("3_1,3,H-slim,T-thin,4,2,3"));
        assert!(r.covers(true, &[2]));
        assert!(!r.covers(true, &[3]));
    }
}

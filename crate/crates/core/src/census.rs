//! Census files: one entry per line, `name <tab> pd [<tab> key=value ...]`.
//!
//! Recognized keys are `signature`, `alternating`, `split`, `basepoint` and
//! `mirror_of`. Blank lines and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::path::Path;

use crate::diagram::{LinkDiagram, LinkMetadata};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub name: String,
    /// 1-based line number in the source.
    pub line: usize,
    pub diagram: LinkDiagram,
    pub meta: LinkMetadata,
}

/// Parsed entries plus the per-line errors; one bad line never hides the rest.
#[derive(Debug, Default)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
    pub errors: Vec<Error>,
    pub warnings: Vec<String>,
}

impl Census {
    pub fn get(&self, name: &str) -> Option<&CensusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{v}`")),
    }
}

pub fn parse_line(line: &str, number: usize) -> Result<Option<CensusEntry>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let err = |message: String| Error::Census {
        line: number,
        message,
    };
    let mut fields = line.split('\t').map(str::trim);
    let name = fields
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err("missing name".into()))?;
    let pd = fields
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err(format!("`{name}` has no PD code")))?;
    let mut meta = LinkMetadata::default();
    let mut base_point = None;
    for word in fields.flat_map(str::split_whitespace) {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| err(format!("metadata `{word}` is not key=value")))?;
        match k {
            "signature" => {
                meta.signature = Some(v.parse().map_err(|_| err(format!("bad signature `{v}`")))?)
            }
            "alternating" => meta.alternating = Some(parse_bool(v).map_err(err)?),
            "split" => meta.split = Some(parse_bool(v).map_err(err)?),
            "mirror_of" => meta.mirror_of = Some(v.to_string()),
            "basepoint" => {
                base_point = Some(v.parse().map_err(|_| err(format!("bad basepoint `{v}`")))?)
            }
            _ => return Err(err(format!("unknown metadata key `{k}`"))),
        }
    }
    let mut diagram = LinkDiagram::parse_pd(pd)
        .map_err(|e| err(format!("`{name}`: {e}")))?
        .with_name(name);
    if let Some(b) = base_point {
        diagram = diagram.with_base_point(b).map_err(|e| err(e.to_string()))?;
    }
    meta.check_parity(diagram.n_components()).map_err(err)?;
    Ok(Some(CensusEntry {
        name: name.to_string(),
        line: number,
        diagram,
        meta,
    }))
}

/// Parses a whole census. A repeated name replaces the earlier entry and
/// leaves a warning.
pub fn parse_census(text: &str) -> Census {
    let mut census = Census::default();
    let mut position: HashMap<String, usize> = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        match parse_line(line, k + 1) {
            Ok(None) => {}
            Ok(Some(entry)) => {
                if let Some(&at) = position.get(&entry.name) {
                    census.warnings.push(format!(
                        "line {}: duplicate name `{}` replaces line {}",
                        entry.line, entry.name, census.entries[at].line
                    ));
                    census.entries[at] = entry;
                } else {
                    position.insert(entry.name.clone(), census.entries.len());
                    census.entries.push(entry);
                }
            }
            Err(e) => census.errors.push(e),
        }
    }
    for w in &census.warnings {
        log::warn!("{w}");
    }
    census
}

pub fn read_census(path: &Path) -> Result<Census> {
    Ok(parse_census(&std::fs::read_to_string(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_metadata() {
        let text = "# comment\n\n3_1\tX[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\tsignature=-2 alternating=true\nU\tunlink 1\n";
        let c = parse_census(text);
        assert!(c.errors.is_empty());
        assert_eq!(c.entries.len(), 2);
        let t = c.get("3_1").unwrap();
        assert_eq!(t.meta.signature, Some(-2));
        assert_eq!(t.meta.alternating, Some(true));
        assert_eq!(t.line, 3);
        assert_eq!(t.diagram.name(), Some("3_1"));
    }

    #[test]
    fn bad_lines_are_isolated() {
        let text = "a\tX[1,2,3]\nb\tunlink 1\nc\tunlink 1\tsignature=1\nd\tunlink 1\tcolor=red\n";
        let c = parse_census(text);
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.errors.len(), 3);
        assert!(matches!(c.errors[0], Error::Census { line: 1, .. }));
    }

    #[test]
    fn duplicates_keep_the_later_entry() {
        let c = parse_census("k\tunlink 1\nk\tunlink 2\n");
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[0].diagram.n_components(), 2);
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn basepoint_key() {
        let c = parse_census("h\tX[3,2,4,1] X[2,3,1,4]\tbasepoint=3\nx\tunlink 1\tbasepoint=9\n");
        assert_eq!(c.entries[0].diagram.base_point(), 3);
        assert_eq!(c.errors.len(), 1);
    }

    #[test]
    fn bundled_census_files_parse() {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/census");
        for f in [
            "prime_knots_le10.tsv",
            "torus_2k.tsv",
            "links_le7.tsv",
            "notable.tsv",
        ] {
            let c = read_census(&root.join(f)).unwrap();
            assert!(c.errors.is_empty(), "{f}: {:?}", c.errors);
            assert!(!c.entries.is_empty());
        }
    }
}

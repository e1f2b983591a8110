//! On-disk catalog cache.
//!
//! One file per `(format_version, base, bound)`. A file that fails to parse,
//! carries another key, or whose cycles do not verify is ignored and
//! overwritten on the next write.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use gausshappy::{Base, Cycle, CycleCatalog};
use serde_json::{json, Value};

use crate::json;

pub const FORMAT_VERSION: u64 = 1;
pub const TOOL: &str = "gausshappy";

pub fn cache_path(dir: &Path, base: Base, bound: u64) -> PathBuf {
    dir.join(format!("catalog-v{FORMAT_VERSION}-b{base}-n{bound}.json"))
}

/// The catalog as a cache document, keys in sorted order.
pub fn to_document(catalog: &CycleCatalog, created_unix: u64) -> Value {
    let cycles: Vec<Value> = catalog
        .cycles()
        .iter()
        .map(|c| json::gaussians(c.elements()))
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "base": catalog.base().get(),
        "bound": catalog.bound(),
        "cycles": cycles,
        "generator": {
            "tool": TOOL,
            "version": env!("CARGO_PKG_VERSION"),
            "created_unix": created_unix,
        },
    })
}

/// Canonical bytes of a cache document: compact, sorted keys, trailing
/// newline.
pub fn serialize(doc: &Value) -> String {
    let mut text = serde_json::to_string(doc).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Rebuilds a catalog from a document, or `None` if the document is for a
/// different key or does not verify.
pub fn from_document(doc: &Value, base: Base, bound: u64) -> Option<CycleCatalog> {
    if doc.get("format_version")?.as_u64()? != FORMAT_VERSION
        || doc.get("base")?.as_u64()? != base.get() as u64
        || doc.get("bound")?.as_u64()? != bound
    {
        return None;
    }
    let mut cycles = Vec::new();
    for entry in doc.get("cycles")?.as_array()? {
        let elements = entry
            .as_array()?
            .iter()
            .map(json::to_gaussian)
            .collect::<Option<Vec<_>>>()?;
        let cycle = Cycle::from_orbit(base, elements.clone()).ok()?;
        // Stored anchor-first in orbit order; anything else is not ours.
        if cycle.elements() != elements.as_slice() {
            return None;
        }
        cycles.push(cycle);
    }
    let catalog = CycleCatalog::new(base, bound, cycles).ok()?;
    (catalog.cycles().len() == doc["cycles"].as_array()?.len()).then_some(catalog)
}

pub fn load(dir: &Path, base: Base, bound: u64) -> Option<CycleCatalog> {
    let text = fs::read_to_string(cache_path(dir, base, bound)).ok()?;
    let doc: Value = serde_json::from_str(&text).ok()?;
    from_document(&doc, base, bound)
}

/// Writes atomically through a temporary file in `dir`.
pub fn store(dir: &Path, catalog: &CycleCatalog) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let path = cache_path(dir, catalog.base(), catalog.bound());
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serialize(&to_document(catalog, created)).as_bytes())?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

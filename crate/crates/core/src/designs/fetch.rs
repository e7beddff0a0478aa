//! Optional download of design files into an on-disk cache.
//!
//! Nothing here is used unless asked for: tests and the bundled catalog never
//! touch the network. Configuration comes from the environment:
//!
//! * `SPHERE_LECAM_DESIGN_URL` — base URL the file name is appended to;
//! * `SPHERE_LECAM_CACHE_DIR` — cache directory (default
//!   `$XDG_CACHE_HOME/sphere-lecam/designs` or `~/.cache/sphere-lecam/designs`);
//! * `SPHERE_LECAM_OFFLINE=1` — serve only from the cache.
//!
//! Each cached file `NAME` is accompanied by `NAME.sha256`; a cache entry is
//! used only if its content still hashes to the recorded digest.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const URL_VAR: &str = "SPHERE_LECAM_DESIGN_URL";
pub const CACHE_VAR: &str = "SPHERE_LECAM_CACHE_DIR";
pub const OFFLINE_VAR: &str = "SPHERE_LECAM_OFFLINE";

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub base_url: Option<String>,
    pub cache_dir: PathBuf,
    pub offline: bool,
}

impl FetchConfig {
    pub fn from_env() -> Self {
        let cache_dir = std::env::var_os(CACHE_VAR)
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|p| PathBuf::from(p).join("sphere-lecam/designs")))
            .or_else(|| std::env::var_os("HOME").map(|p| PathBuf::from(p).join(".cache/sphere-lecam/designs")))
            .unwrap_or_else(|| PathBuf::from(".sphere-lecam-cache"));
        Self {
            base_url: std::env::var(URL_VAR).ok().filter(|s| !s.is_empty()),
            cache_dir,
            offline: std::env::var(OFFLINE_VAR).is_ok_and(|v| v == "1" || v == "true"),
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn cached(path: &Path, expected: Option<&str>) -> Option<PathBuf> {
    let body = std::fs::read(path).ok()?;
    let recorded = std::fs::read_to_string(path.with_extension(sidecar_ext(path))).ok()?;
    let digest = hex_digest(&body);
    let ok = digest == recorded.trim() && expected.is_none_or(|e| e.eq_ignore_ascii_case(&digest));
    ok.then(|| path.to_path_buf())
}

fn sidecar_ext(path: &Path) -> String {
    match path.extension() {
        Some(ext) => format!("{}.sha256", ext.to_string_lossy()),
        None => "sha256".into(),
    }
}

/// Returns a local path for design file `name`, downloading it if needed.
///
/// `expected_sha256`, when given, must match the file's digest.
pub fn fetch_design(name: &str, expected_sha256: Option<&str>, config: &FetchConfig) -> Result<PathBuf> {
    if name.contains('/') || name.contains('\\') || name.starts_with('.') {
        return Err(Error::InvalidArgument(format!("not a plain design file name: {name}")));
    }
    let path = config.cache_dir.join(name);
    if let Some(p) = cached(&path, expected_sha256) {
        return Ok(p);
    }
    if config.offline {
        return Err(Error::Fetch(format!("{name} is not cached and offline mode is set")));
    }
    let base = config
        .base_url
        .as_deref()
        .ok_or_else(|| Error::Fetch(format!("{name} is not cached and {URL_VAR} is unset")))?;
    let url = format!("{}/{}", base.trim_end_matches('/'), name);
    let response = ureq::get(&url).call().map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    let mut body = Vec::new();
    std::io::Read::read_to_end(&mut response.into_reader(), &mut body)?;
    let digest = hex_digest(&body);
    if let Some(e) = expected_sha256 {
        if !e.eq_ignore_ascii_case(&digest) {
            return Err(Error::Fetch(format!("{url}: checksum {digest} does not match {e}")));
        }
    }
    std::fs::create_dir_all(&config.cache_dir)?;
    std::fs::write(&path, &body)?;
    std::fs::write(path.with_extension(sidecar_ext(&path)), format!("{digest}\n"))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serves_verified_cache_offline() {
        let dir = tempfile::tempdir().unwrap();
        let config = FetchConfig {
            base_url: None,
            cache_dir: dir.path().to_path_buf(),
            offline: true,
        };
        let body = b"0 0 1\n0 0 -1\n";
        let path = dir.path().join("ss001.00002");
        std::fs::write(&path, body).unwrap();
        assert!(fetch_design("ss001.00002", None, &config).is_err());
        std::fs::write(dir.path().join("ss001.00002.sha256"), hex_digest(body)).unwrap();
        assert_eq!(fetch_design("ss001.00002", None, &config).unwrap(), path);
        assert!(fetch_design("ss001.00002", Some("00"), &config).is_err());
        std::fs::write(&path, b"tampered").unwrap();
        assert!(fetch_design("ss001.00002", None, &config).is_err());
        assert!(fetch_design("../x", None, &config).is_err());
    }
}

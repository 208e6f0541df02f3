//! Versioned on-disk envelope shared by the binary artifacts
//! (`corpus.bin`, `indices.bin`): magic, format version, payload digest,
//! then a bincode payload.

use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Digest type used to pair artifacts (indices remember the corpus digest).
pub type ArtifactDigest = [u8; 32];

fn digest_of(payload: &[u8]) -> ArtifactDigest {
    let mut hasher = Sha256::new();
    hasher.update(payload);
    hasher.finalize().into()
}

/// Renders a digest as lowercase hex, for error messages and reports.
pub fn digest_hex(digest: &ArtifactDigest) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `magic | version | payload_len | sha256(payload) | payload` and
/// returns the payload digest.
pub fn write_artifact(path: &Path, magic: &[u8; 8], version: u32, payload: &[u8]) -> Result<ArtifactDigest> {
    let digest = digest_of(payload);
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut write = |bytes: &[u8]| file.write_all(bytes).map_err(|e| Error::io(path, e));
    write(magic)?;
    write(&version.to_le_bytes())?;
    write(&(payload.len() as u64).to_le_bytes())?;
    write(&digest)?;
    write(payload)?;
    Ok(digest)
}

/// Reads an artifact previously written by `write_artifact`, validating the
/// magic, version, length, and digest. Returns the payload and its digest.
pub fn read_artifact(path: &Path, magic: &[u8; 8], version: u32) -> Result<(Vec<u8>, ArtifactDigest)> {
    let kind = String::from_utf8_lossy(magic).into_owned();
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = [0u8; 8 + 4 + 8 + 32];
    file.read_exact(&mut header).map_err(|_| {
        Error::artifact(format!("{}: file too short to be a {kind} artifact", path.display()))
    })?;
    if &header[..8] != magic {
        return Err(Error::artifact(format!(
            "{}: bad magic (not a {kind} artifact)",
            path.display()
        )));
    }
    let got_version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if got_version != version {
        return Err(Error::artifact(format!(
            "{}: unsupported {kind} version {got_version} (expected {version})",
            path.display()
        )));
    }
    let len = u64::from_le_bytes(header[12..20].try_into().unwrap()) as usize;
    let stored_digest: ArtifactDigest = header[20..52].try_into().unwrap();
    let mut payload = vec![0u8; len];
    file.read_exact(&mut payload).map_err(|_| {
        Error::artifact(format!("{}: truncated {kind} payload", path.display()))
    })?;
    let digest = digest_of(&payload);
    if digest != stored_digest {
        return Err(Error::artifact(format!(
            "{}: digest mismatch, {kind} artifact is corrupt",
            path.display()
        )));
    }
    Ok((payload, digest))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAGIC: &[u8; 8] = b"CROKTEST";

    #[test]
    fn test_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        let digest = write_artifact(&path, MAGIC, 1, b"hello world").unwrap();
        let (payload, read_digest) = read_artifact(&path, MAGIC, 1).unwrap();
        assert_eq!(payload, b"hello world");
        assert_eq!(digest, read_digest);
    }

    #[test]
    fn test_bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        write_artifact(&path, b"OTHERMGC", 1, b"data").unwrap();
        let err = read_artifact(&path, MAGIC, 1).unwrap_err();
        assert!(err.to_string().contains("bad magic"), "{err}");
    }

    #[test]
    fn test_version_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        write_artifact(&path, MAGIC, 2, b"data").unwrap();
        let err = read_artifact(&path, MAGIC, 1).unwrap_err();
        assert!(err.to_string().contains("version 2"), "{err}");
    }

    #[test]
    fn test_corruption_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        write_artifact(&path, MAGIC, 1, b"payload bytes").unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        std::fs::write(&path, bytes).unwrap();
        let err = read_artifact(&path, MAGIC, 1).unwrap_err();
        assert!(err.to_string().contains("corrupt"), "{err}");
    }

    #[test]
    fn test_truncated_payload_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        write_artifact(&path, MAGIC, 1, b"payload bytes").unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 4]).unwrap();
        let err = read_artifact(&path, MAGIC, 1).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
    }

    #[test]
    fn test_digest_hex_formats() {
        let digest = [0xabu8; 32];
        let hex = digest_hex(&digest);
        assert_eq!(hex.len(), 64);
        assert!(hex.starts_with("abab"));
    }
}

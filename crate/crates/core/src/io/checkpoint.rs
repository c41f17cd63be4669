//! Checkpoint container: an 8-byte magic, a little-endian `u32` format
//! version, a `u64` payload length, the JSON-encoded search state, and a
//! SHA-256 digest of everything before it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::search::SearchState;

pub const MAGIC: &[u8; 8] = b"VDCKPT\0\0";
pub const VERSION: u32 = 1;
const HEADER: usize = 8 + 4 + 8;
const DIGEST: usize = 32;
/// Refuse payloads beyond 4 GiB.
const MAX_PAYLOAD: u64 = 1 << 32;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("not a checkpoint file")]
    BadMagic,
    #[error("checkpoint format version {found}, this build reads version {supported}")]
    Version { found: u32, supported: u32 },
    #[error("checkpoint is truncated or has trailing bytes")]
    Length,
    #[error("checkpoint digest mismatch (file corrupted)")]
    Digest,
    #[error("checkpoint payload: {0}")]
    Payload(String),
}

/// Header fields readable without decoding the payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointInfo {
    pub version: u32,
    pub payload_len: u64,
    pub digest: String,
}

pub fn encode(state: &SearchState) -> Result<Vec<u8>, CheckpointError> {
    let payload = serde_json::to_vec(state).map_err(|e| CheckpointError::Payload(e.to_string()))?;
    let mut out = Vec::with_capacity(HEADER + payload.len() + DIGEST);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

/// Validates the container and returns its header and payload.
pub fn inspect(bytes: &[u8]) -> Result<(CheckpointInfo, &[u8]), CheckpointError> {
    if bytes.len() < 8 || &bytes[..8] != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    if bytes.len() < HEADER + DIGEST {
        return Err(CheckpointError::Length);
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(CheckpointError::Version { found: version, supported: VERSION });
    }
    let payload_len = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    if payload_len > MAX_PAYLOAD || (bytes.len() - HEADER - DIGEST) as u64 != payload_len {
        return Err(CheckpointError::Length);
    }
    let body_end = bytes.len() - DIGEST;
    let digest = Sha256::digest(&bytes[..body_end]);
    if digest.as_slice() != &bytes[body_end..] {
        return Err(CheckpointError::Digest);
    }
    let info = CheckpointInfo { version, payload_len, digest: hex::encode(digest) };
    Ok((info, &bytes[HEADER..body_end]))
}

pub fn decode(bytes: &[u8]) -> Result<SearchState, CheckpointError> {
    let (_, payload) = inspect(bytes)?;
    serde_json::from_slice(payload).map_err(|e| CheckpointError::Payload(e.to_string()))
}

/// Writes atomically: a sibling temporary file is written, synced, then renamed.
pub fn save(path: &Path, state: &SearchState) -> Result<(), CheckpointError> {
    let bytes = encode(state)?;
    let io = |source| CheckpointError::Io { path: path.to_path_buf(), source };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

pub fn load(path: &Path) -> Result<SearchState, CheckpointError> {
    let bytes = fs::read(path).map_err(|source| CheckpointError::Io { path: path.to_path_buf(), source })?;
    decode(&bytes)
}

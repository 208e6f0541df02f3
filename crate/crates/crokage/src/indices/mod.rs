//! Index layer: the BM25 inverted index, the corpus IDF map, and the API
//! class index, persisted together and pinned to the corpus they were built
//! from.

pub mod api_index;
pub mod bm25;
pub mod idf;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::artifact::{self, ArtifactDigest};
use crate::corpus::ThreadDoc;
use crate::error::{Error, Result};

pub use api_index::{build_api_index, extract_api_classes, ApiIndex, DEFAULT_MIN_CLASS_FREQ};
pub use bm25::{Bm25Index, Bm25Params};
pub use idf::{build_idf_map, IdfMap};

const INDICES_MAGIC: &[u8; 8] = b"CROKINDX";
const INDICES_VERSION: u32 = 1;

/// All query-time indexes plus the digest of the corpus artifact they
/// were derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexBundle {
    pub corpus_digest: ArtifactDigest,
    pub bm25: Bm25Index,
    pub idf: IdfMap,
    pub api: ApiIndex,
}

impl IndexBundle {
    /// Builds every index over the documents of the corpus with the given
    /// digest.
    pub fn build(
        docs: &[ThreadDoc],
        corpus_digest: ArtifactDigest,
        params: Bm25Params,
        min_class_freq: usize,
    ) -> Result<Self> {
        Ok(IndexBundle {
            corpus_digest,
            bm25: Bm25Index::build(docs, params)?,
            idf: build_idf_map(docs)?,
            api: build_api_index(docs, min_class_freq)?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let payload = bincode::serialize(self)
            .map_err(|e| Error::internal(format!("index encode failed: {e}")))?;
        artifact::write_artifact(path, INDICES_MAGIC, INDICES_VERSION, &payload)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (payload, _) = artifact::read_artifact(path, INDICES_MAGIC, INDICES_VERSION)?;
        bincode::deserialize(&payload).map_err(|e| {
            Error::artifact(format!("{}: index payload undecodable: {e}", path.display()))
        })
    }
}

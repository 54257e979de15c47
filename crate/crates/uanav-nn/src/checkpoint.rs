//! Checkpoint container: magic bytes, a length-prefixed JSON manifest, then
//! raw little-endian float64 arrays in manifest order. Save → load → save is
//! byte-identical.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use uanav_num::Real;

use crate::error::NnError;
use crate::params::ParameterSet;
use crate::tensor::Tensor;

pub const CHECKPOINT_MAGIC: &[u8; 7] = b"UANAV1\n";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ParamInfo {
    pub name: String,
    pub shape: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckpointManifest {
    pub format: u32,
    pub dtype: String,
    pub params: Vec<ParamInfo>,
    /// Training metadata (episode counts, temperature, normalization bounds,
    /// architecture) — owned by whoever produced the checkpoint.
    pub meta: serde_json::Value,
}

pub fn save_checkpoint<T: Real>(
    path: &Path,
    params: &ParameterSet<T>,
    meta: &serde_json::Value,
) -> Result<(), NnError> {
    let manifest = CheckpointManifest {
        format: 1,
        dtype: "f64".to_string(),
        params: params
            .iter()
            .map(|(name, tensor)| ParamInfo {
                name: name.to_string(),
                shape: tensor.shape().to_vec(),
            })
            .collect(),
        meta: meta.clone(),
    };
    let manifest_bytes = serde_json::to_vec(&manifest)?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(CHECKPOINT_MAGIC)?;
    out.write_all(&(manifest_bytes.len() as u64).to_le_bytes())?;
    out.write_all(&manifest_bytes)?;
    for (_, tensor) in params.iter() {
        for v in tensor.data() {
            out.write_all(&v.to_f64_lossy().to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn load_checkpoint<T: Real>(
    path: &Path,
) -> Result<(ParameterSet<T>, CheckpointManifest), NnError> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 7];
    file.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(NnError::BadCheckpoint(format!(
            "bad magic {magic:?} in {}",
            path.display()
        )));
    }
    let mut len_bytes = [0u8; 8];
    file.read_exact(&mut len_bytes)?;
    let manifest_len = u64::from_le_bytes(len_bytes) as usize;
    let mut manifest_bytes = vec![0u8; manifest_len];
    file.read_exact(&mut manifest_bytes)?;
    let manifest: CheckpointManifest = serde_json::from_slice(&manifest_bytes)?;
    if manifest.dtype != "f64" {
        return Err(NnError::BadCheckpoint(format!(
            "unsupported dtype {}",
            manifest.dtype
        )));
    }

    let mut params = ParameterSet::new();
    let mut buf = [0u8; 8];
    for info in &manifest.params {
        let numel: usize = info.shape.iter().product();
        let mut data = Vec::with_capacity(numel);
        for _ in 0..numel {
            file.read_exact(&mut buf)?;
            data.push(T::of(f64::from_le_bytes(buf)));
        }
        params.insert(info.name.clone(), Tensor::from_vec(info.shape.clone(), data))?;
    }
    // Trailing bytes mean corruption or a mismatched manifest.
    let mut extra = [0u8; 1];
    if file.read(&mut extra)? != 0 {
        return Err(NnError::BadCheckpoint("trailing bytes".into()));
    }
    Ok((params, manifest))
}

pub fn file_sha256(path: &Path) -> Result<String, NnError> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut params: ParameterSet<f64> = ParameterSet::new();
        params
            .insert(
                "a/w",
                Tensor::from_vec(vec![3, 2], (0..6).map(|_| rng.random::<f64>() - 0.5).collect()),
            )
            .unwrap();
        params
            .insert(
                "b/w",
                Tensor::from_vec(vec![4], (0..4).map(|_| rng.random::<f64>() * 1e-7).collect()),
            )
            .unwrap();
        let meta = serde_json::json!({"beams": 60, "u_lo": -3.25, "u_hi": 1.5});

        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.ckpt");
        let p2 = dir.path().join("b.ckpt");
        save_checkpoint(&p1, &params, &meta).unwrap();
        let (loaded, manifest) = load_checkpoint::<f64>(&p1).unwrap();
        assert_eq!(manifest.meta, meta);
        for (name, tensor) in params.iter() {
            assert_eq!(loaded.get(name).unwrap(), tensor);
        }
        save_checkpoint(&p2, &loaded, &manifest.meta).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("junk.ckpt");
        std::fs::write(&p, b"NOTACKPTxxxxxxxxxxxx").unwrap();
        assert!(matches!(
            load_checkpoint::<f64>(&p),
            Err(NnError::BadCheckpoint(_))
        ));
    }

    #[test]
    fn sha256_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x");
        std::fs::write(&p, b"hello").unwrap();
        assert_eq!(
            file_sha256(&p).unwrap(),
            "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824"
        );
    }
}

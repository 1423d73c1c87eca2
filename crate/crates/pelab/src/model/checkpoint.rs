//! Checkpoint serialization: a JSON shape manifest plus a flat
//! little-endian `f64` payload, so evaluation can run without retraining
//! and round-trips are bit-exact.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::encodings::{LearnedTable, RelativeTable, SchemeConfig};
use crate::error::{Error, Result};
use crate::model::params::{EncoderParams, LayerParams, N_LAYERS};
use crate::numkit::Matrix;

const FORMAT: &str = "pelab-checkpoint";
const VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    rows: usize,
    cols: usize,
    /// Offset into the payload, in f64 elements.
    offset: usize,
}

/// Everything the manifest records besides tensor shapes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub scheme: SchemeConfig,
    pub d_ff: usize,
    pub causal: bool,
    /// Sequence length the model was trained at.
    pub trained_seq_len: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Manifest {
    format: String,
    version: u32,
    #[serde(flatten)]
    meta: CheckpointMeta,
    payload_file: String,
    payload_len: usize,
    tensors: Vec<TensorEntry>,
}

fn manifest_path(base: &Path) -> PathBuf {
    base.with_extension("json")
}

fn payload_path(base: &Path) -> PathBuf {
    base.with_extension("bin")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), detail: e.to_string() }
}

/// Write `<base>.json` and `<base>.bin`.
pub fn save_checkpoint(params: &EncoderParams, meta: &CheckpointMeta, base: &Path) -> Result<()> {
    let entries = params.entries();
    let mut tensors = Vec::with_capacity(entries.len());
    let mut payload: Vec<u8> = Vec::new();
    let mut offset = 0usize;
    for (name, m) in &entries {
        tensors.push(TensorEntry { name: name.clone(), rows: m.rows(), cols: m.cols(), offset });
        for &v in m.data() {
            payload.extend_from_slice(&v.to_le_bytes());
        }
        offset += m.data().len();
    }
    let manifest = Manifest {
        format: FORMAT.into(),
        version: VERSION,
        meta: meta.clone(),
        payload_file: payload_path(base).file_name().unwrap().to_string_lossy().into_owned(),
        payload_len: offset,
        tensors,
    };
    let mpath = manifest_path(base);
    let ppath = payload_path(base);
    if let Some(dir) = base.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
    }
    fs::write(&ppath, payload).map_err(|e| io_err(&ppath, e))?;
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&mpath, e))?;
    fs::write(&mpath, json).map_err(|e| io_err(&mpath, e))?;
    Ok(())
}

/// Load a checkpoint written by [`save_checkpoint`].
pub fn load_checkpoint(base: &Path) -> Result<(EncoderParams, CheckpointMeta)> {
    let mpath = manifest_path(base);
    let text = fs::read_to_string(&mpath).map_err(|e| io_err(&mpath, e))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| Error::Io { path: mpath.display().to_string(), detail: format!("bad manifest: {e}") })?;
    if manifest.format != FORMAT || manifest.version != VERSION {
        return Err(Error::Io {
            path: mpath.display().to_string(),
            detail: format!("unsupported checkpoint format {}/{}", manifest.format, manifest.version),
        });
    }
    let ppath = base.parent().unwrap_or(Path::new("")).join(&manifest.payload_file);
    let bytes = fs::read(&ppath).map_err(|e| io_err(&ppath, e))?;
    if bytes.len() != manifest.payload_len * 8 {
        return Err(Error::Io {
            path: ppath.display().to_string(),
            detail: format!("payload is {} bytes, manifest says {}", bytes.len(), manifest.payload_len * 8),
        });
    }

    let read_tensor = |entry: &TensorEntry| -> Result<Matrix> {
        let start = entry.offset * 8;
        let len = entry.rows * entry.cols * 8;
        if start + len > bytes.len() {
            return Err(Error::Io {
                path: ppath.display().to_string(),
                detail: format!("tensor {} overruns payload", entry.name),
            });
        }
        let data: Vec<f64> = bytes[start..start + len]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Matrix::from_vec(entry.rows, entry.cols, data)
    };

    let find = |name: &str| -> Result<&TensorEntry> {
        manifest.tensors.iter().find(|t| t.name == name).ok_or_else(|| Error::Io {
            path: mpath.display().to_string(),
            detail: format!("manifest is missing tensor {name}"),
        })
    };

    let mut layers = Vec::with_capacity(N_LAYERS);
    for i in 0..N_LAYERS {
        layers.push(LayerParams {
            w_q: read_tensor(find(&format!("layer{i}.w_q"))?)?,
            w_k: read_tensor(find(&format!("layer{i}.w_k"))?)?,
            w_v: read_tensor(find(&format!("layer{i}.w_v"))?)?,
            w_o: read_tensor(find(&format!("layer{i}.w_o"))?)?,
            w_ff1: read_tensor(find(&format!("layer{i}.w_ff1"))?)?,
            b_ff1: read_tensor(find(&format!("layer{i}.b_ff1"))?)?,
            w_ff2: read_tensor(find(&format!("layer{i}.w_ff2"))?)?,
            b_ff2: read_tensor(find(&format!("layer{i}.b_ff2"))?)?,
        });
    }
    let learned_table = match manifest.tensors.iter().find(|t| t.name == "learned_table") {
        Some(entry) => Some(LearnedTable { values: read_tensor(entry)? }),
        None => None,
    };
    let relative_table = match manifest.tensors.iter().find(|t| t.name == "relative_table") {
        Some(entry) => {
            let values = read_tensor(entry)?;
            let clip_k = (values.cols() - 1) / 2;
            Some(RelativeTable { values, clip_k })
        }
        None => None,
    };
    let params = EncoderParams {
        w_in: read_tensor(find("w_in")?)?,
        layers,
        w_out: read_tensor(find("w_out")?)?,
        learned_table,
        relative_table,
    };
    Ok((params, manifest.meta))
}

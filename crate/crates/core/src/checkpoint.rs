//! JSON checkpoints for [`SeriesState`], sealed with a SHA-256 content hash.
//!
//! Reals are stored as decimal strings that parse back to the identical
//! binary value, so a resumed run continues bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diophantine::Regime;
use crate::error::{Error, Result};
use crate::precision::{Complex, PrecisionContext, PrecisionStamp, Real};
use crate::series::{SeriesId, SeriesState, SpikeRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpikeEntry {
    pub n: u64,
    pub value_re: String,
    pub value_im: String,
    pub abs_delta: String,
    pub regime: Regime,
}

/// Everything the hash covers, in serialization order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointBody {
    pub series: SeriesId,
    pub last_index: u64,
    pub precision: PrecisionStamp,
    pub accumulator_re: String,
    pub accumulator_im: String,
    pub spike_threshold: String,
    pub spikes: Vec<SpikeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    #[serde(flatten)]
    pub body: CheckpointBody,
    pub content_hash: String,
}

impl CheckpointBody {
    pub fn hash(&self) -> Result<String> {
        let bytes = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }
}

impl Checkpoint {
    pub fn seal(body: CheckpointBody) -> Result<Self> {
        let content_hash = body.hash()?;
        Ok(Checkpoint { body, content_hash })
    }

    pub fn verify(&self) -> Result<()> {
        let computed = self.body.hash()?;
        if computed != self.content_hash {
            return Err(Error::HashMismatch { stored: self.content_hash.clone(), computed });
        }
        Ok(())
    }
}

impl<T: Real> SeriesState<T> {
    pub fn to_checkpoint(&self) -> Result<Checkpoint> {
        let spikes = self
            .spikes
            .iter()
            .map(|s| SpikeEntry {
                n: s.n,
                value_re: s.value.re.to_exact_string(),
                value_im: s.value.im.to_exact_string(),
                abs_delta: s.abs_delta.to_exact_string(),
                regime: s.regime,
            })
            .collect();
        Checkpoint::seal(CheckpointBody {
            series: self.id,
            last_index: self.last_index,
            precision: self.stamp,
            accumulator_re: self.re.to_exact_string(),
            accumulator_im: self.im.to_exact_string(),
            spike_threshold: self.spike_threshold.to_string(),
            spikes,
        })
    }

    /// Rebuilds a state; the checkpoint must be intact and match `ctx`.
    pub fn from_checkpoint(ck: &Checkpoint, ctx: &PrecisionContext<T>) -> Result<Self> {
        ck.verify()?;
        let b = &ck.body;
        if b.precision != ctx.stamp() {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint precision {:?} differs from the context {:?}",
                b.precision,
                ctx.stamp()
            )));
        }
        let parse = |s: &str| {
            ctx.parse(s).ok_or_else(|| Error::Malformed(format!("{s:?} is not a decimal number")))
        };
        let spikes = b
            .spikes
            .iter()
            .map(|e| {
                Ok(SpikeRecord {
                    n: e.n,
                    value: Complex::new(parse(&e.value_re)?, parse(&e.value_im)?),
                    abs_delta: parse(&e.abs_delta)?,
                    regime: e.regime,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spike_threshold: f64 = b
            .spike_threshold
            .parse()
            .map_err(|_| Error::Malformed(format!("spike threshold {:?}", b.spike_threshold)))?;
        Ok(SeriesState {
            id: b.series,
            last_index: b.last_index,
            re: parse(&b.accumulator_re)?,
            im: parse(&b.accumulator_im)?,
            stamp: b.precision,
            spike_threshold,
            spikes,
        })
    }
}

pub fn save_checkpoint<T: Real>(state: &SeriesState<T>, path: &Path) -> Result<()> {
    let ck = state.to_checkpoint()?;
    let text = serde_json::to_string_pretty(&ck)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_checkpoint<T: Real>(path: &Path, ctx: &PrecisionContext<T>) -> Result<SeriesState<T>> {
    let text = fs::read_to_string(path)?;
    let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("checkpoint: {e}")))?;
    SeriesState::from_checkpoint(&ck, ctx)
}

/// Save, then load back.
pub fn checkpoint_roundtrip<T: Real>(
    state: &SeriesState<T>,
    path: &Path,
    ctx: &PrecisionContext<T>,
) -> Result<SeriesState<T>> {
    save_checkpoint(state, path)?;
    load_checkpoint(path, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::partial_sum;
    use rug::Float;

    #[test]
    fn roundtrip_is_exact() {
        let c = PrecisionContext::<Float>::new(30).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let st = partial_sum(SeriesId::C, 400, &c, None).unwrap();
        let back = checkpoint_roundtrip(&st, &path, &c).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn f64_states_roundtrip() {
        let c = PrecisionContext::<f64>::with_guard(10, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let st = partial_sum(SeriesId::H3, 1000, &c, None).unwrap();
        assert_eq!(checkpoint_roundtrip(&st, &path, &c).unwrap(), st);
    }

    #[test]
    fn tampering_is_detected() {
        let c = PrecisionContext::<Float>::new(30).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let st = partial_sum(SeriesId::S, 400, &c, None).unwrap();
        save_checkpoint(&st, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("\"last_index\": 400", "\"last_index\": 401");
        fs::write(&path, text).unwrap();
        assert!(matches!(load_checkpoint::<Float>(&path, &c), Err(Error::HashMismatch { .. })));
    }

    #[test]
    fn hash_covers_every_field_name_in_order() {
        let c = PrecisionContext::<Float>::new(30).unwrap();
        let st = partial_sum(SeriesId::R1Star, 400, &c, None).unwrap();
        let ck = st.to_checkpoint().unwrap();
        let json = serde_json::to_value(&ck).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in [
            "series",
            "last_index",
            "precision",
            "accumulator_re",
            "accumulator_im",
            "spike_threshold",
            "spikes",
            "content_hash",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(ck.content_hash.len(), 64);
        assert_eq!(json["spikes"][0]["n"], 3);
    }
}

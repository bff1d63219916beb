//! JSON file format of a [`CodeSpec`].

use std::fs;
use std::path::Path;

use pcm_core::construction::{CodeSpec, ConstructionMethod};
use pcm_core::demapper::DemapperKind;
use pcm_core::polar::{CrcConfig, FrozenMask, CRC16_CCITT};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

pub const FORMAT_VERSION: u32 = 1;

/// Name of the only CRC the format knows.
pub const CRC16_NAME: &str = "crc16-ccitt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: u32,
    pub method: String,
    pub demapper: String,
    pub snr_db: f64,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub crc: Option<String>,
    /// Frozen indices of every level, ascending.
    pub frozen: Vec<Vec<usize>>,
    pub metadata: SpecMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecMetadata {
    /// Per-level rates the construction started from (empty for MC).
    pub rates: Vec<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surrogate_sigmas: Vec<f64>,
}

fn crc_name(crc: &Option<CrcConfig>) -> Result<Option<String>> {
    match crc {
        None => Ok(None),
        Some(c) if *c == CRC16_CCITT => Ok(Some(CRC16_NAME.to_owned())),
        Some(_) => Err(SimError::SpecFormat("only crc16-ccitt can be stored".into())),
    }
}

impl SpecFile {
    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            version: FORMAT_VERSION,
            method: spec.method.name().to_owned(),
            demapper: spec.demapper.name().to_owned(),
            snr_db: spec.snr_db,
            m: spec.m,
            n: spec.n,
            k: spec.k,
            crc: crc_name(&spec.crc)?,
            frozen: spec.masks.iter().map(FrozenMask::frozen_indices).collect(),
            metadata: SpecMetadata {
                rates: spec.rates.clone(),
                seed: spec.seed,
                surrogate_sigmas: spec.surrogate_sigmas.clone(),
            },
        })
    }

    pub fn into_spec(self) -> Result<CodeSpec> {
        if self.version != FORMAT_VERSION {
            return Err(SimError::SpecFormat(format!("unsupported version {}", self.version)));
        }
        let method = ConstructionMethod::from_name(&self.method)
            .ok_or_else(|| SimError::SpecFormat(format!("unknown method `{}`", self.method)))?;
        let demapper = DemapperKind::from_name(&self.demapper)
            .ok_or_else(|| SimError::SpecFormat(format!("unknown demapper `{}`", self.demapper)))?;
        let crc = match self.crc.as_deref() {
            None => None,
            Some(CRC16_NAME) => Some(CRC16_CCITT),
            Some(other) => return Err(SimError::SpecFormat(format!("unknown crc `{other}`"))),
        };
        if self.frozen.len() != self.m {
            return Err(SimError::SpecFormat(format!(
                "{} frozen lists for {} levels",
                self.frozen.len(),
                self.m
            )));
        }
        let masks = self
            .frozen
            .iter()
            .map(|f| {
                if f.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(SimError::SpecFormat("frozen indices must be strictly ascending".into()));
                }
                Ok(FrozenMask::from_frozen_indices(self.n, f)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = CodeSpec {
            m: self.m,
            n: self.n,
            k: self.k,
            masks,
            method,
            demapper,
            label_kind: demapper.label_kind(),
            snr_db: self.snr_db,
            crc,
            rates: self.metadata.rates,
            surrogate_sigmas: self.metadata.surrogate_sigmas,
            seed: self.metadata.seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// One field per line, each frozen list on a single line.
    pub fn to_json(&self) -> Result<String> {
        use serde_json::to_string as compact;
        let frozen = self
            .frozen
            .iter()
            .map(compact)
            .collect::<std::result::Result<Vec<_>, _>>()?
            .join(",\n    ");
        let fields = [
            ("version", compact(&self.version)?),
            ("method", compact(&self.method)?),
            ("demapper", compact(&self.demapper)?),
            ("snr_db", compact(&self.snr_db)?),
            ("m", compact(&self.m)?),
            ("n", compact(&self.n)?),
            ("k", compact(&self.k)?),
            ("crc", compact(&self.crc)?),
            ("frozen", format!("[\n    {frozen}\n  ]")),
            ("metadata", compact(&self.metadata)?),
        ];
        let body = fields
            .iter()
            .map(|(k, v)| format!("  \"{k}\": {v}"))
            .collect::<Vec<_>>()
            .join(",\n");
        Ok(format!("{{\n{body}\n}}\n"))
    }
}

pub fn write_spec(path: &Path, spec: &CodeSpec) -> Result<()> {
    let json = SpecFile::from_spec(spec)?.to_json()?;
    fs::write(path, json).map_err(|source| SimError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_spec(path: &Path) -> Result<CodeSpec> {
    let text = fs::read_to_string(path).map_err(|source| SimError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<CodeSpec> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| SimError::SpecFormat(e.to_string()))?;
    file.into_spec()
}

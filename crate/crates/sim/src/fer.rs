//! Frame error rate simulation over an SNR sweep.
//!
//! Frame `f` of sweep point `p` draws its payload and noise from the stream
//! `frame_stream(p, f)` of the master seed. Frames run in fixed batches and
//! the stopping rule is checked between batches only, so results do not
//! depend on the number of worker threads. Two codes with equal payload
//! length see identical payloads and noise (paired simulation).

use std::time::Instant;

use pcm_core::construction::CodeSpec;
use pcm_core::demapper::{Demapper, DemapperKind};
use pcm_core::modulation::{awgn, snr_to_sigma, Constellation};
use pcm_core::pcm::PcmCode;
use pcm_core::polar::CRC16_CCITT;
use pcm_core::rng::{frame_stream, stream_rng};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SimError};

/// Frames simulated between two checks of the stopping rule.
pub const BATCH_FRAMES: u64 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    Sc,
    Scl { list: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn single(snr_db: f64) -> Self {
        Self {
            start: snr_db,
            stop: snr_db,
            step: 1.0,
        }
    }

    /// `start, start + step, …` up to and including `stop` (with a small
    /// tolerance), rounded to 1e-9 dB.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub demapper: DemapperKind,
    pub decoder: Decoder,
    /// Enables the 16-bit CRC on a spec stored without one.
    pub crc: bool,
    pub sweep: Sweep,
    pub max_frames: u64,
    pub target_errors: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(SimError::Config(msg.to_owned()));
        let Sweep { start, stop, step } = self.sweep;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return bad("SNR sweep values must be finite");
        }
        if step <= 0.0 {
            return bad("SNR step must be positive");
        }
        if stop < start {
            return bad("SNR stop is below SNR start");
        }
        if self.sweep.points().len() > 10_000 {
            return bad("SNR sweep has more than 10000 points");
        }
        if let Decoder::Scl { list } = self.decoder {
            if list < 1 {
                return bad("list size must be at least 1");
            }
        }
        if self.target_errors < 1 {
            return bad("target frame errors must be at least 1");
        }
        if self.max_frames < 1 {
            return bad("max frames must be at least 1");
        }
        Ok(())
    }
}

/// Result of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub payload_bits: u64,
    /// Wall-clock time spent on the point.
    pub seconds: f64,
}

impl PointResult {
    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.frames as f64
        }
    }

    pub fn ber(&self) -> f64 {
        let bits = self.frames * self.payload_bits;
        if bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / bits as f64
        }
    }

    /// Equality of everything except the wall-clock time.
    pub fn same_counts(&self, other: &PointResult) -> bool {
        PointResult {
            seconds: 0.0,
            ..*self
        } == PointResult {
            seconds: 0.0,
            ..*other
        }
    }
}

/// Applies the CRC flag and checks that the demapper fits the code's label map.
pub fn prepare_code(mut spec: CodeSpec, config: &SimConfig) -> Result<PcmCode> {
    if config.crc && spec.crc.is_none() {
        spec.crc = Some(CRC16_CCITT);
    }
    if spec.crc.is_some_and(|c| c.width as usize > spec.k) {
        return Err(SimError::Config(format!("k = {} cannot hold the CRC", spec.k)));
    }
    if spec.label_kind != config.demapper.label_kind() {
        return Err(SimError::Config(format!(
            "demapper `{}` does not use the label map of the code (constructed for `{}`)",
            config.demapper.name(),
            spec.demapper.name()
        )));
    }
    Ok(PcmCode::new(spec)?)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            frame_errors: self.frame_errors + o.frame_errors,
            bit_errors: self.bit_errors + o.bit_errors,
        }
    }
}

fn run_frame(code: &PcmCode, demapper: &Demapper, decoder: Decoder, seed: u64, point: u32, frame: u64) -> Tally {
    let mut rng = stream_rng(seed, frame_stream(point, frame));
    let info: Vec<u8> = (0..code.payload_len()).map(|_| rng.random_range(0..2u8)).collect();
    let encoded = code.encode(&info).expect("payload length matches");
    let y = awgn(&encoded.amplitudes, demapper.sigma(), &mut rng);
    let decoded = match decoder {
        Decoder::Sc => code.decode_sc(&y, demapper),
        Decoder::Scl { list } => code.decode_scl(&y, demapper, list),
    }
    .expect("inputs validated")
    .0;
    let bit_errors = decoded.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
    Tally {
        frames: 1,
        frame_errors: (bit_errors > 0) as u64,
        bit_errors,
    }
}

/// Simulates sweep point number `point` at `snr_db`.
pub fn run_point(code: &PcmCode, config: &SimConfig, point: u32, snr_db: f64) -> Result<PointResult> {
    config.validate()?;
    let sigma = snr_to_sigma(snr_db, &Constellation::new(code.spec().m as u32)?);
    let demapper = Demapper::new(config.demapper, sigma)?;
    let started = Instant::now();
    let mut total = Tally::default();
    while total.frames < config.max_frames && total.frame_errors < config.target_errors {
        let end = (total.frames + BATCH_FRAMES).min(config.max_frames);
        let batch = (total.frames..end)
            .into_par_iter()
            .map(|f| run_frame(code, &demapper, config.decoder, config.seed, point, f))
            .reduce(Tally::default, Tally::merge);
        total = total.merge(batch);
    }
    Ok(PointResult {
        snr_db,
        frames: total.frames,
        frame_errors: total.frame_errors,
        bit_errors: total.bit_errors,
        payload_bits: code.payload_len() as u64,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Runs the whole sweep, calling `on_point` as each point completes.
pub fn run_fer(
    code: &PcmCode,
    config: &SimConfig,
    mut on_point: impl FnMut(&PointResult) -> Result<()>,
) -> Result<Vec<PointResult>> {
    config.validate()?;
    let mut out = Vec::new();
    for (i, snr) in config.sweep.points().into_iter().enumerate() {
        let r = run_point(code, config, i as u32, snr)?;
        on_point(&r)?;
        out.push(r);
    }
    Ok(out)
}

/// SNR at which the FER curve crosses `target`, by linear interpolation of
/// `log10(FER)` between the first pair of consecutive points that brackets
/// it. A point without errors counts as FER `0.5 / frames`.
pub fn snr_at_fer(points: &[PointResult], target: f64) -> Option<f64> {
    let log_fer = |p: &PointResult| {
        let fer = if p.frame_errors == 0 {
            0.5 / p.frames.max(1) as f64
        } else {
            p.fer()
        };
        fer.log10()
    };
    let t = target.log10();
    points.windows(2).find_map(|w| {
        let (a, b) = (log_fer(&w[0]), log_fer(&w[1]));
        if a >= t && b < t {
            Some(w[0].snr_db + (a - t) / (a - b) * (w[1].snr_db - w[0].snr_db))
        } else {
            None
        }
    })
}

#[derive(Debug, Serialize)]
struct CsvRow {
    snr_db: f64,
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
    fer: f64,
    ber: f64,
    seconds: Option<f64>,
}

/// CSV writer for sweep results. Wall-clock seconds are written only when
/// `timing` is set; otherwise the column stays empty and the output is a
/// pure function of the configuration.
pub struct ResultWriter<W: std::io::Write> {
    inner: csv::Writer<W>,
    timing: bool,
}

impl<W: std::io::Write> ResultWriter<W> {
    pub fn new(out: W, timing: bool) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        inner.write_record(["snr_db", "frames", "frame_errors", "bit_errors", "fer", "ber", "seconds"])?;
        inner.flush().map_err(csv::Error::from)?;
        Ok(Self { inner, timing })
    }

    pub fn write(&mut self, p: &PointResult) -> Result<()> {
        self.inner.serialize(CsvRow {
            snr_db: p.snr_db,
            frames: p.frames,
            frame_errors: p.frame_errors,
            bit_errors: p.bit_errors,
            fer: p.fer(),
            ber: p.ber(),
            seconds: self.timing.then_some(p.seconds),
        })?;
        self.inner.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner.into_inner().map_err(|e| SimError::Csv(e.into_error().into()))
    }
}

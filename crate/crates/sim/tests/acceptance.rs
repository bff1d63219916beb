//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Criteria can be selected by number:
//! `cargo test -p pcm-sim --test acceptance -- 1 4 7`.

mod common;

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use pcm_core::construction::{construct_ga_from_rates, CodeSpec, ConstructionMethod, ConstructionParams};
use pcm_core::demapper::{Demapper, DemapperKind};
use pcm_core::modulation::{awgn, snr_to_sigma, Constellation};
use pcm_core::pcm::PcmCode;
use pcm_core::polar::{polar_transform_in_place, CRC16_CCITT};
use pcm_core::rates::{
    estimate_profile, j_fun, j_inv, mi_histogram_estimate, LevelSamples, RateMethod, RateProfile,
    DEFAULT_HISTOGRAM_BINS,
};
use pcm_core::rng::{frame_stream, stream_rng};
use pcm_sim::fer::{prepare_code, run_point, snr_at_fer, Decoder, PointResult, SimConfig, Sweep};
use pcm_sim::parallel::{construct_mc_par, sample_levels_par};
use rand::Rng;

const SEED: u64 = 20_251_016;
const TABLE_SNR: f64 = 11.77;
const SAMPLES: usize = 1_000_000;
const N: usize = 512;
const K: usize = 768;
const STEP: f64 = 0.25;

const KINDS: [DemapperKind; 3] = [DemapperKind::Mm, DemapperKind::MmSp, DemapperKind::Sp];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details,
        }
    }
}

/// Sweep recipe shared by every FER comparison.
#[derive(Clone, Copy)]
struct CurvePlan {
    decoder: Decoder,
    crc: bool,
    start: f64,
    target_fer: f64,
    target_errors: u64,
    max_frames: u64,
}

/// A simulated curve keyed by frozen sets, demapper and plan.
type CachedCurve = (Vec<Vec<usize>>, DemapperKind, u64, Vec<PointResult>);

#[derive(Default)]
struct Ctx {
    samples: HashMap<(DemapperKind, u64), LevelSamples>,
    profiles: HashMap<(DemapperKind, u64, &'static str), RateProfile>,
    curves: Vec<CachedCurve>,
}

fn snr_key(snr_db: f64) -> u64 {
    (snr_db * 1000.0).round() as u64
}

fn sigma(snr_db: f64) -> f64 {
    snr_to_sigma(snr_db, &Constellation::new(3).unwrap())
}

impl Ctx {
    fn samples(&mut self, kind: DemapperKind, snr_db: f64) -> &LevelSamples {
        self.samples.entry((kind, snr_key(snr_db))).or_insert_with(|| {
            let demapper = Demapper::new(kind, sigma(snr_db)).unwrap();
            sample_levels_par(&demapper, SEED, SAMPLES)
        })
    }

    fn profile(&mut self, kind: DemapperKind, snr_db: f64, method: RateMethod) -> RateProfile {
        let key = (kind, snr_key(snr_db), method.name());
        if let Some(p) = self.profiles.get(&key) {
            return p.clone();
        }
        let profile = estimate_profile(self.samples(kind, snr_db), method, kind, snr_db).unwrap();
        self.profiles.insert(key, profile.clone());
        profile
    }

    fn ga_code(&mut self, method: ConstructionMethod, kind: DemapperKind, snr_db: f64) -> CodeSpec {
        let rates = self.profile(kind, snr_db, method.rate_method().unwrap()).rates;
        construct_ga_from_rates(method, &params(kind, snr_db), &rates).unwrap().0
    }

    /// FER points from `plan.start` in steps of 0.25 dB until the FER drops
    /// below the target. Point indices follow the SNR, so curves of codes
    /// with equal payload length see the same payloads and noise.
    fn curve(&mut self, spec: &CodeSpec, kind: DemapperKind, plan: CurvePlan) -> Vec<PointResult> {
        let masks: Vec<Vec<usize>> = spec.masks.iter().map(|m| m.frozen_indices()).collect();
        let key = snr_key(plan.start) ^ ((plan.target_fer.log10() * -1000.0) as u64) << 32;
        if let Some((_, _, _, c)) = self.curves.iter().find(|c| c.0 == masks && c.1 == kind && c.2 == key) {
            return c.clone();
        }
        let config = SimConfig {
            demapper: kind,
            decoder: plan.decoder,
            crc: plan.crc,
            sweep: Sweep::single(plan.start),
            max_frames: plan.max_frames,
            target_errors: plan.target_errors,
            seed: SEED,
        };
        let code = prepare_code(spec.clone(), &config).unwrap();
        let mut points = Vec::new();
        for i in 0..16 {
            let snr = ((plan.start + i as f64 * STEP) * 1e9).round() / 1e9;
            let p = run_point(&code, &config, (snr * 100.0).round() as u32, snr).unwrap();
            let done = p.fer() < plan.target_fer;
            points.push(p);
            if done {
                break;
            }
        }
        self.curves.push((masks, kind, key, points.clone()));
        points
    }
}

fn params(kind: DemapperKind, snr_db: f64) -> ConstructionParams {
    ConstructionParams {
        kind,
        snr_db,
        n: N,
        k: K,
        crc: None,
        seed: SEED,
    }
}

fn describe_curve(label: &str, points: &[PointResult]) -> String {
    let body: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2} dB {}/{}", p.snr_db, p.frame_errors, p.frames))
        .collect();
    format!("{label}: {}", body.join(", "))
}

fn fmt_rates(r: &[f64]) -> String {
    let parts: Vec<String> = r.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn criterion_1(ctx: &mut Ctx) -> Outcome {
    let table: [(DemapperKind, [f64; 3], f64, [f64; 3]); 3] = [
        (DemapperKind::Mm, [0.1294, 0.9109, 0.8212], 1.8615, [0.8319, 0.6641, 0.3589]),
        (DemapperKind::MmSp, [0.1295, 0.7397, 0.9885], 1.8577, [0.3589, 0.6641, 0.8319]),
        (DemapperKind::Sp, [0.1312, 0.7503, 0.9986], 1.8801, [f64::NAN; 3]),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    let mut worst: f64 = 0.0;
    for (kind, levels, sum, aux) in table {
        let lm = ctx.profile(kind, TABLE_SNR, RateMethod::Lm);
        let aux_mi = ctx.profile(kind, TABLE_SNR, RateMethod::AuxMi);
        let mut dev = (lm.sum() - sum).abs();
        for j in 0..3 {
            dev = dev.max((lm.rates[j] - levels[j]).abs());
            if !aux[j].is_nan() {
                dev = dev.max((aux_mi.rates[j] - aux[j]).abs());
            }
        }
        worst = worst.max(dev);
        pass &= dev <= 0.01;
        details.push(format!(
            "{}: levels {} sum {:.4}, auxiliary MI {}",
            kind.name(),
            fmt_rates(&lm.rates),
            lm.sum(),
            fmt_rates(&aux_mi.rates)
        ));
    }
    Outcome::new(
        pass,
        format!("LM rates at {TABLE_SNR} dB reproduce the reference table (largest deviation {worst:.4}, tolerance 0.01)"),
        details,
    )
}

fn criterion_2(ctx: &mut Ctx) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for snr in [8.0, TABLE_SNR, 14.0] {
        let lm = ctx.profile(DemapperKind::Sp, snr, RateMethod::Lm);
        let matched = ctx.profile(DemapperKind::Sp, snr, RateMethod::MiMatched);
        let gap = lm
            .rates
            .iter()
            .zip(&matched.rates)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pass &= gap <= 0.005;
        details.push(format!(
            "SP at {snr} dB: LM {} matched MI {} largest gap {gap:.5}",
            fmt_rates(&lm.rates),
            fmt_rates(&matched.rates)
        ));
    }
    Outcome::new(pass, "LM-rate of the SP demapper equals its matched MI within 0.005", details)
}

fn criterion_3(ctx: &mut Ctx) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for kind in KINDS {
        let lm = ctx.profile(kind, TABLE_SNR, RateMethod::Lm);
        let samples = ctx.samples(kind, TABLE_SNR);
        let mut line = format!("{}:", kind.name());
        for (j, level) in samples.polar.iter().enumerate() {
            let hist = mi_histogram_estimate(level, DEFAULT_HISTOGRAM_BINS);
            let ok = lm.rates[j] <= hist.rate + 3.0 * hist.std_error;
            pass &= ok;
            line += &format!(
                " L{} lm {:.4} <= mi {:.4} + 3*{:.4}{}",
                j + 1,
                lm.rates[j],
                hist.rate,
                hist.std_error,
                if ok { "" } else { " (violated)" }
            );
        }
        details.push(line);
    }
    Outcome::new(pass, "LM-rate never exceeds the histogram MI by more than 3 standard errors", details)
}

fn criterion_4(ctx: &mut Ctx) -> Outcome {
    let lm = ctx.profile(DemapperKind::Sp, TABLE_SNR, RateMethod::Lm);
    let sd = common::ask8_sigma(TABLE_SNR);
    let quad = common::awgn_mutual_information(&common::ASK8, sd, 128);
    let check = common::awgn_mutual_information(&common::ASK8, sd, 96);
    let gap = (lm.sum() - quad).abs();
    Outcome::new(
        gap <= 0.01,
        format!("SP level rates add up to I(X;Y) (sum {:.4}, quadrature {quad:.4}, gap {gap:.4})", lm.sum()),
        vec![format!("quadrature with 96 nodes: {check:.6}")],
    )
}

fn criterion_5(_: &mut Ctx) -> Outcome {
    let mut round_trip: f64 = 0.0;
    let mut sigma = 0.05;
    while sigma <= 20.0 {
        round_trip = round_trip.max((j_inv(j_fun(sigma)).unwrap() - sigma).abs() / sigma);
        sigma *= 1.01;
    }
    round_trip = round_trip.max((j_inv(j_fun(20.0)).unwrap() - 20.0).abs() / 20.0);
    let mut integral: f64 = 0.0;
    for i in 0..=990 {
        let s = 0.1 + i as f64 * 0.01;
        integral = integral.max((j_fun(s).value() - common::j_integral(s)).abs());
    }
    Outcome::new(
        round_trip <= 1e-6 && integral <= 0.01,
        format!("J round trip relative error {round_trip:.2e} (<= 1e-6), J vs integral {integral:.4} (<= 0.01)"),
        Vec::new(),
    )
}

fn random_payload(code: &PcmCode, frame: u64) -> Vec<u8> {
    let mut rng = stream_rng(SEED ^ 0x6c, frame);
    (0..code.payload_len()).map(|_| rng.random_range(0..2)).collect()
}

fn criterion_6(ctx: &mut Ctx) -> Outcome {
    let mut details = Vec::new();

    let spec = ctx.ga_code(ConstructionMethod::LmDga, DemapperKind::MmSp, TABLE_SNR);
    let code = PcmCode::new(spec).unwrap();
    let sd = sigma(11.0);
    let demapper = Demapper::new(DemapperKind::MmSp, sd).unwrap();
    let mut mismatches = 0;
    let mut sc_errors = 0;
    for f in 0..1000 {
        let info = random_payload(&code, f);
        let x = code.encode(&info).unwrap().amplitudes;
        let y = awgn(&x, sd, &mut stream_rng(SEED, frame_stream(7, f)));
        let (sc_info, sc_u) = code.decode_sc(&y, &demapper).unwrap();
        let (_, scl_u) = code.decode_scl(&y, &demapper, 1).unwrap();
        mismatches += (sc_u != scl_u) as u32;
        sc_errors += (sc_info != info) as u32;
    }
    details.push(format!("SCL-1 vs SC at 11 dB: {mismatches} differing frames of 1000 ({sc_errors} SC frame errors)"));

    let mut noiseless_failures = 0;
    for kind in KINDS {
        let spec = ctx.ga_code(ConstructionMethod::LmDga, kind, TABLE_SNR);
        let code = PcmCode::new(CodeSpec {
            crc: Some(CRC16_CCITT),
            ..spec
        })
        .unwrap();
        let demapper = Demapper::new(kind, sigma(TABLE_SNR)).unwrap();
        for f in 0..200 {
            let info = random_payload(&code, 10_000 + f);
            let y = code.encode(&info).unwrap().amplitudes;
            noiseless_failures += (code.decode_sc(&y, &demapper).unwrap().0 != info) as u32;
            if f < 10 {
                noiseless_failures += (code.decode_scl(&y, &demapper, 8).unwrap().0 != info) as u32;
            }
        }
    }
    details.push(format!("noiseless decoding failures: {noiseless_failures} of 630 decodes"));

    let mut involution_failures = 0;
    let mut rng = stream_rng(SEED, 99);
    for log in 0..=11 {
        for _ in 0..25 {
            let u: Vec<u8> = (0..1usize << log).map(|_| rng.random_range(0..2)).collect();
            let mut c = u.clone();
            polar_transform_in_place(&mut c).unwrap();
            polar_transform_in_place(&mut c).unwrap();
            involution_failures += (c != u) as u32;
        }
    }
    details.push(format!("transform involution failures for n = 1..2048: {involution_failures}"));

    Outcome::new(
        mismatches == 0 && noiseless_failures == 0 && involution_failures == 0,
        "SCL with one path equals SC, noiseless frames decode exactly, the transform is an involution",
        details,
    )
}

fn fer_plan(start: f64) -> CurvePlan {
    CurvePlan {
        decoder: Decoder::Sc,
        crc: false,
        start,
        target_fer: 1e-2,
        target_errors: 200,
        max_frames: 100_000,
    }
}

fn start_snr(kind: DemapperKind) -> f64 {
    match kind {
        DemapperKind::Mm => 11.75,
        DemapperKind::MmSp => 11.0,
        DemapperKind::Sp => 10.5,
    }
}

fn design_snr(kind: DemapperKind) -> f64 {
    match kind {
        DemapperKind::Mm => 12.25,
        DemapperKind::MmSp => TABLE_SNR,
        DemapperKind::Sp => 11.25,
    }
}

fn criterion_7(ctx: &mut Ctx) -> Outcome {
    let kind = DemapperKind::MmSp;
    let mut details = Vec::new();
    let mut crossings = Vec::new();
    for (method, start) in [
        (ConstructionMethod::LmDga, start_snr(kind)),
        (ConstructionMethod::MiDga, start_snr(kind)),
        (ConstructionMethod::Cga, 12.25),
    ] {
        let spec = ctx.ga_code(method, kind, TABLE_SNR);
        let curve = ctx.curve(&spec, kind, fer_plan(start));
        let at = snr_at_fer(&curve, 1e-2);
        details.push(format!(
            "{} (dims {:?}) at FER 1e-2: {}; {}",
            method.name(),
            spec.masks.iter().map(|m| m.dimension()).collect::<Vec<_>>(),
            at.map_or("not bracketed".into(), |s| format!("{s:.3} dB")),
            describe_curve("points", &curve)
        ));
        crossings.push(at);
    }
    let (summary, pass) = match (crossings[0], crossings[1], crossings[2]) {
        (Some(lm), Some(mi), Some(cga)) => (
            format!("MM-SP with SC at FER 1e-2: LM-DGA {lm:.3} dB, MI-DGA {mi:.3} dB, CGA {cga:.3} dB (need LM < MI < CGA, CGA - LM >= 0.5)"),
            lm < mi && mi < cga && cga - lm >= 0.5,
        ),
        _ => ("a FER curve does not bracket 1e-2".to_owned(), false),
    };
    Outcome::new(pass, summary, details)
}

fn criterion_8(ctx: &mut Ctx) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    let mut gaps = Vec::new();
    for kind in KINDS {
        let design = design_snr(kind);
        let lm_spec = ctx.ga_code(ConstructionMethod::LmDga, kind, design);
        let mc = construct_mc_par(&params(kind, design), 100_000).unwrap();
        let differing = lm_spec
            .masks
            .iter()
            .zip(&mc.spec.masks)
            .map(|(a, b)| (0..N).filter(|&i| a.is_frozen(i) != b.is_frozen(i)).count())
            .sum::<usize>()
            / 2;
        let lm_curve = ctx.curve(&lm_spec, kind, fer_plan(start_snr(kind)));
        let mc_curve = ctx.curve(&mc.spec, kind, fer_plan(start_snr(kind)));
        let (lm, mcs) = (snr_at_fer(&lm_curve, 1e-2), snr_at_fer(&mc_curve, 1e-2));
        details.push(format!(
            "{} design {design} dB: {differing} positions differ; {}; {}",
            kind.name(),
            describe_curve("LM-DGA", &lm_curve),
            describe_curve("MC", &mc_curve)
        ));
        match (lm, mcs) {
            (Some(a), Some(b)) => {
                pass &= (a - b).abs() <= 0.25;
                gaps.push(format!("{} {:+.3} dB", kind.name(), a - b));
            }
            _ => {
                pass = false;
                gaps.push(format!("{} not bracketed", kind.name()));
            }
        }
    }
    Outcome::new(
        pass,
        format!("LM-DGA minus MC SNR at FER 1e-2 within 0.25 dB: {}", gaps.join(", ")),
        details,
    )
}

fn criterion_9(ctx: &mut Ctx) -> Outcome {
    let mut details = Vec::new();
    let sp = ctx.ga_code(ConstructionMethod::LmDga, DemapperKind::Sp, TABLE_SNR);
    let sc_curve = ctx.curve(
        &sp,
        DemapperKind::Sp,
        CurvePlan {
            decoder: Decoder::Sc,
            crc: false,
            start: 11.0,
            target_fer: 1e-3,
            target_errors: 100,
            max_frames: 100_000,
        },
    );
    details.push(describe_curve("SP SC", &sc_curve));
    let Some(sc_snr) = snr_at_fer(&sc_curve, 1e-3) else {
        return Outcome::new(false, "SC curve does not bracket FER 1e-3", details);
    };

    let scl_config = |kind, snr: f64, max_frames, target_errors| SimConfig {
        demapper: kind,
        decoder: Decoder::Scl { list: 32 },
        crc: true,
        sweep: Sweep::single(snr),
        max_frames,
        target_errors,
        seed: SEED,
    };
    let scl_snr = ((sc_snr - 1.0) * 1000.0).round() / 1000.0;
    let config = scl_config(DemapperKind::Sp, scl_snr, 10_000, 11);
    let code = prepare_code(sp.clone(), &config).unwrap();
    let scl = run_point(&code, &config, 900, scl_snr).unwrap();
    details.push(format!(
        "SP SCL-32 + CRC at {scl_snr:.3} dB: {}/{} frame errors",
        scl.frame_errors, scl.frames
    ));
    let gain_ok = scl.frames == 10_000 && scl.fer() <= 1e-3;

    let cmp_snr = scl_snr - 0.5;
    let mut errors = Vec::new();
    for kind in [DemapperKind::Sp, DemapperKind::MmSp] {
        let spec = ctx.ga_code(ConstructionMethod::LmDga, kind, TABLE_SNR);
        let config = scl_config(kind, cmp_snr, 2000, u64::MAX);
        let code = prepare_code(spec, &config).unwrap();
        let r = run_point(&code, &config, 901, cmp_snr).unwrap();
        details.push(format!(
            "{} SCL-32 + CRC at {cmp_snr:.3} dB: {}/{} frame errors",
            kind.name(),
            r.frame_errors,
            r.frames
        ));
        errors.push(r.frame_errors);
    }
    let order_ok = errors[0] < errors[1];
    Outcome::new(
        gain_ok && order_ok,
        format!(
            "SC reaches FER 1e-3 at {sc_snr:.3} dB, SCL-32 + CRC has FER {:.1e} 1 dB lower; SP {} vs MM-SP {} errors under SCL",
            scl.fer(),
            errors[0],
            errors[1]
        ),
        details,
    )
}

fn criterion_10(_: &mut Ctx) -> Outcome {
    let dir = std::env::temp_dir().join(format!("pcm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    let spec_str = spec.to_str().unwrap().to_owned();
    let run = |args: &[&str]| -> Option<Vec<u8>> {
        let out = Command::new(env!("CARGO_BIN_EXE_pcm")).args(args).output().ok()?;
        out.status.success().then_some(out.stdout)
    };
    let read_after = |args: &[&str]| -> Option<Vec<u8>> {
        run(args)?;
        std::fs::read(&spec).ok()
    };
    let construct_lm = [
        "construct", "--method", "lm-dga", "--demapper", "mmsp", "--snr-db", "11.5", "--n", "128", "--k", "192",
        "--samples", "100000", "--seed", "7", "--out", &spec_str,
    ];
    let construct_mc = [
        "construct", "--method", "mc", "--demapper", "sp", "--snr-db", "11.5", "--n", "64", "--k", "96", "--trials",
        "2000", "--seed", "7", "--out", &spec_str,
    ];
    let rates = [
        "rates", "--demapper", "mm", "--snr-db", "11.77", "--method", "lm", "--samples", "100000", "--seed", "7",
        "--csv",
    ];
    let simulate = [
        "simulate", "--spec", &spec_str, "--demapper", "mmsp", "--decoder", "scl", "--list", "8", "--crc16",
        "--snr-start", "10", "--snr-stop", "11", "--snr-step", "0.5", "--max-frames", "500", "--target-errors", "30",
        "--seed", "7",
    ];
    let mut details = Vec::new();
    let mut pass = true;
    let mut check = |name: &str, a: Option<Vec<u8>>, b: Option<Vec<u8>>| {
        let same = a.is_some() && a == b;
        pass &= same;
        details.push(format!("{name}: {}", if same { "identical" } else { "differs or failed" }));
    };
    check("tables", run(&["tables"]), run(&["tables"]));
    check("rates", run(&rates), run(&rates));
    check("construct mc", read_after(&construct_mc), read_after(&construct_mc));
    check("construct lm-dga", read_after(&construct_lm), read_after(&construct_lm));
    check("simulate", run(&simulate), run(&simulate));
    let _ = std::fs::remove_dir_all(&dir);
    Outcome::new(pass, "repeated CLI runs with the same seed are byte-identical", details)
}

fn main() -> ExitCode {
    type Criterion = fn(&mut Ctx) -> Outcome;
    let criteria: [Criterion; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut ctx = Ctx::default();
    let mut failed = 0;
    let mut ran = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let number = i + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let started = Instant::now();
        let outcome = criterion(&mut ctx);
        for d in &outcome.details {
            println!("    {d}");
        }
        println!(
            "{} criterion {number}: {} [{:.1} s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.summary,
            started.elapsed().as_secs_f64()
        );
        ran += 1;
        failed += (!outcome.pass) as usize;
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

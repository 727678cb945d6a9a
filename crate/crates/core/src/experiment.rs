//! Randomized trials: draw compressed type-2 intersections, classify them,
//! and tally the outcomes against the closed-form predictions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apolarity::{check_type2_range, random_type2_pair, Type2Pair, DEFAULT_RETRY_CAP};
use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::ideal::{CompressedKind, GradedIdeal};
use crate::koszul::{BettiTable, TorAlgebra, TorClass};
use crate::predictor::{allowed_classes, generic_class, type2_profile, valid_pairs};

pub const DEFAULT_PRIME: u32 = 32003;
pub const DEFAULT_TRIALS: usize = 25;
/// Largest socle degree accepted by `reproduce_table1`.
pub const TABLE1_MAX_S: usize = 12;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` for `(s1, s)` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, s1: usize, s: usize, index: usize) -> u64 {
    let pair = ((s1 as u64) << 32) | s as u64;
    splitmix64(splitmix64(seed ^ splitmix64(pair)) ^ index as u64)
}

/// Invariants of one accepted intersection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub h: Vec<u64>,
    pub t: usize,
    pub socle: Vec<u64>,
    pub m: usize,
    pub generator_degrees: BTreeMap<usize, usize>,
    pub betti: BettiTable,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub class: TorClass,
    pub a: usize,
    pub b: usize,
    pub t1: usize,
    pub t2: usize,
    pub compressed_r1: bool,
    pub compressed_r2: bool,
    pub compressed_r: bool,
    pub in_allowed: bool,
}

impl Observation {
    pub fn from_pair(pair: &Type2Pair) -> Result<Observation> {
        let i = &pair.intersection;
        let tor = TorAlgebra::new(i);
        let gor = |x: &GradedIdeal| x.is_compressed(CompressedKind::Gorenstein);
        let compressed_r1 = gor(&pair.i1)?;
        let compressed_r2 = gor(&pair.i2)?;
        let compressed_r = i.ring_type() == 2 && i.is_compressed(CompressedKind::Type2)?;
        let in_allowed = allowed_classes(pair.s1, pair.s, tor.m)?.contains(&tor.class);
        Ok(Observation {
            h: i.hilbert(),
            t: i.initial_degree(),
            socle: i.socle_polynomial(),
            m: tor.m,
            generator_degrees: i.minimal_generator_degrees(),
            betti: tor.betti.clone(),
            p: tor.p,
            q: tor.q,
            r: tor.r,
            class: tor.class,
            a: GradedIdeal::compute_a(&pair.i1, &pair.i2)?,
            b: GradedIdeal::compute_b(&pair.i1, &pair.i2)?,
            t1: pair.i1.initial_degree(),
            t2: pair.i2.initial_degree(),
            compressed_r1,
            compressed_r2,
            compressed_r,
            in_allowed,
        })
    }

    pub fn all_compressed(&self) -> bool {
        self.compressed_r1 && self.compressed_r2 && self.compressed_r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub s1: usize,
    pub s: usize,
    pub prime: u32,
    /// Intersections drawn, including the accepted one.
    pub pair_draws: usize,
    pub gorenstein_draws: usize,
    pub observation: Option<Observation>,
    pub error: Option<String>,
}

/// One random pair drawn from an RNG seeded with `seed`.
pub fn draw_pair(s1: usize, s: usize, field: FieldPrime, seed: u64) -> Result<Type2Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_type2_pair(s1, s, field, &mut rng, DEFAULT_RETRY_CAP)
}

/// Draws and classifies one pair; failures are recorded rather than returned.
pub fn run_trial(s1: usize, s: usize, field: FieldPrime, seed: u64, index: usize) -> TrialRecord {
    let trial = trial_seed(seed, s1, s, index);
    let mut record = TrialRecord {
        index,
        seed: trial,
        s1,
        s,
        prime: field.p(),
        pair_draws: 0,
        gorenstein_draws: 0,
        observation: None,
        error: None,
    };
    let outcome = draw_pair(s1, s, field, trial).and_then(|pair| {
        record.pair_draws = pair.pair_draws;
        record.gorenstein_draws = pair.gorenstein_draws;
        Observation::from_pair(&pair)
    });
    match outcome {
        Ok(obs) => record.observation = Some(obs),
        Err(e) => {
            log::warn!("trial {index} for ({s1}, {s}) failed: {e}");
            if let Error::Genericity { attempts, .. } = e {
                record.pair_draws = record.pair_draws.max(attempts);
            }
            record.error = Some(e.to_string());
        }
    }
    record
}

/// Outcome counts for one `(s1, s)`, next to the predicted generic values.
#[derive(Debug, Clone, PartialEq)]
pub struct TallyRow {
    pub s1: usize,
    pub s: usize,
    pub prime: u32,
    pub trials: usize,
    pub seed: u64,
    pub h: Vec<u64>,
    pub t: usize,
    pub counts: BTreeMap<(TorClass, usize), usize>,
    pub failed: usize,
    /// Draws whose intersection was not compressed of type 2.
    pub rejected_draws: usize,
    pub modal: Option<(TorClass, usize)>,
    pub predictor_class: TorClass,
    pub predictor_m: usize,
    pub records: Vec<TrialRecord>,
}

impl TallyRow {
    pub fn agree(&self) -> bool {
        self.modal == Some((self.predictor_class, self.predictor_m))
    }

    pub fn successes(&self) -> usize {
        self.counts.values().sum()
    }

    /// Observed pairs other than the modal one, as `class/m xcount`.
    pub fn other_observed(&self) -> String {
        self.counts
            .iter()
            .filter(|(k, _)| Some(**k) != self.modal)
            .map(|((c, m), n)| format!("{c}/{m} x{n}"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

pub fn run_trials(s1: usize, s: usize, field: FieldPrime, n: usize, seed: u64) -> Result<TallyRow> {
    check_type2_range(s1, s)?;
    if n == 0 {
        return Err(Error::Range("number of trials must be at least 1".into()));
    }
    let profile = type2_profile(s1, s)?;
    let (predictor_class, predictor_m) = generic_class(s1, s)?;
    let records: Vec<TrialRecord> = (0..n)
        .into_par_iter()
        .map(|i| run_trial(s1, s, field, seed, i))
        .collect();
    let mut counts = BTreeMap::new();
    let mut failed = 0;
    let mut rejected_draws = 0;
    for r in &records {
        match &r.observation {
            Some(o) if o.all_compressed() => {
                *counts.entry((o.class, o.m)).or_insert(0) += 1;
                rejected_draws += r.pair_draws - 1;
            }
            _ => failed += 1,
        }
    }
    let modal = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&k, _)| k);
    Ok(TallyRow {
        s1,
        s,
        prime: field.p(),
        trials: n,
        seed,
        h: profile.h,
        t: profile.t,
        counts,
        failed,
        rejected_draws,
        modal,
        predictor_class,
        predictor_m,
        records,
    })
}

pub fn reproduce_table1(
    max_s: usize,
    field: FieldPrime,
    n: usize,
    seed: u64,
) -> Result<Vec<TallyRow>> {
    if max_s > TABLE1_MAX_S {
        return Err(Error::Range(format!(
            "max_s = {max_s} exceeds the cap {TABLE1_MAX_S}"
        )));
    }
    valid_pairs(max_s)
        .into_iter()
        .map(|(s1, s)| {
            log::info!("running ({s1}, {s})");
            run_trials(s1, s, field, n, seed)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

pub const CSV_COLUMNS: [&str; 10] = [
    "s1",
    "s",
    "h",
    "t",
    "modal_class",
    "modal_m",
    "other_observed",
    "predictor_class",
    "predictor_m",
    "agree",
];

fn tuple(h: &[u64]) -> String {
    let parts: Vec<String> = h.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn modal_cells(row: &TallyRow) -> (String, String) {
    match row.modal {
        Some((c, m)) => (c.to_string(), m.to_string()),
        None => ("-".into(), "-".into()),
    }
}

/// One line describing the run parameters shared by `rows`.
pub fn metadata(rows: &[TallyRow]) -> Option<String> {
    let r = rows.first()?;
    let failed: usize = rows.iter().map(|r| r.failed).sum();
    let rejected: usize = rows.iter().map(|r| r.rejected_draws).sum();
    Some(format!(
        "prime = {}, trials = {}, seed = {}, failed trials = {failed}, rejected draws = {rejected}",
        r.prime, r.trials, r.seed
    ))
}

pub fn emit(rows: &[TallyRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("in-memory write");
            for row in rows {
                let (mc, mm) = modal_cells(row);
                w.write_record([
                    row.s1.to_string(),
                    row.s.to_string(),
                    tuple(&row.h),
                    row.t.to_string(),
                    mc,
                    mm,
                    row.other_observed(),
                    row.predictor_class.to_string(),
                    row.predictor_m.to_string(),
                    row.agree().to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 output")
        }
        Format::Markdown => {
            let mut out = String::new();
            if let Some(meta) = metadata(rows) {
                let _ = writeln!(out, "{meta}\n");
            }
            out += "| s1 | s | h | t | Generic class | m | Other compressed classes | Predicted | agree |\n";
            out += "|---|---|---|---|---|---|---|---|---|\n";
            for row in rows {
                let (mc, mm) = modal_cells(row);
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {}/{} | {} |",
                    row.s1,
                    row.s,
                    tuple(&row.h),
                    row.t,
                    mc,
                    mm,
                    row.other_observed(),
                    row.predictor_class,
                    row.predictor_m,
                    if row.agree() { "yes" } else { "no" }
                );
            }
            out
        }
    }
}

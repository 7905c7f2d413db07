//! Parity sweeps comparing moderated teaching with unmoderated baselines.

mod config;
mod plot;

pub use config::{LearnerKind, SweepConfig, SweepMode};
pub use plot::{emit_plot_data, render_svg};

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::seq::index::sample as index_sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{train_boosted_stumps, train_greedy_tree, train_majority};
use crate::concepts::{build_parity, Concept};
use crate::error::{Error, Result};
use crate::learner::LearnMode;
use crate::sampling::{derive_seed, draw_sample, score, Distribution, Scores};
use crate::session::{teach_on_sample, SessionConfig};

/// Seed component reserved for choosing problem-size subsets.
const SUBSET_STREAM: u64 = 0x5eed_5b5e;

/// One CSV row. `trial = -1` marks a per-learner, per-point mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub sweep: String,
    pub learner: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub trial: i64,
    pub seed: u64,
    pub accuracy: f64,
    pub dont_know_rate: f64,
    pub runtime_ms: f64,
}

pub const CSV_HEADER: [&str; 10] = [
    "sweep",
    "learner",
    "n",
    "k",
    "m",
    "trial",
    "seed",
    "accuracy",
    "dont_know_rate",
    "runtime_ms",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub learner: String,
    pub k: usize,
    pub m: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_dont_know: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub sweep: SweepMode,
    /// Raw trial rows followed by summary rows.
    pub rows: Vec<TrialRow>,
    pub summaries: Vec<Summary>,
    /// Parity inputs used at each sweep point, as `(k, subset)`.
    pub subsets: Vec<(usize, Vec<usize>)>,
}

impl ResultTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn trial_rows(&self) -> impl Iterator<Item = &TrialRow> {
        self.rows.iter().filter(|r| r.trial >= 0)
    }

    pub fn summary(&self, learner: LearnerKind, k: usize, m: usize) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.learner == learner.name() && s.k == k && s.m == m)
    }

    /// Swept value of a summary: `m` or `k`.
    pub fn x_of(&self, s: &Summary) -> usize {
        match self.sweep {
            SweepMode::SampleSize => s.m,
            SweepMode::ProblemSize => s.k,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(CSV_HEADER)?;
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        if let Some(dir) = path.as_ref().parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Point of a sweep: one target at one sample size.
struct Point {
    k: usize,
    m: usize,
    concept: Concept,
}

pub fn sweep_sample_size(cfg: &SweepConfig) -> Result<ResultTable> {
    let mut cfg = cfg.clone();
    cfg.mode = Some(SweepMode::SampleSize);
    cfg.validate()?;
    let concept = Concept::Dag(build_parity(cfg.n, &cfg.subset)?);
    let points = cfg
        .m_values
        .iter()
        .map(|&m| Point {
            k: cfg.subset.len(),
            m,
            concept: concept.clone(),
        })
        .collect();
    run_sweep(&cfg, points, vec![(cfg.subset.len(), cfg.subset.clone())])
}

/// The seeded `k`-subset of `0..n` used at problem size `k`, sorted.
pub fn problem_subset(seed: u64, n: usize, k: usize) -> Vec<usize> {
    let mut rng = Distribution::uniform(n, derive_seed(seed, &[SUBSET_STREAM, k as u64])).rng();
    let mut v = index_sample(&mut rng, n, k).into_vec();
    v.sort_unstable();
    v
}

pub fn sweep_problem_size(cfg: &SweepConfig) -> Result<ResultTable> {
    let mut cfg = cfg.clone();
    cfg.mode = Some(SweepMode::ProblemSize);
    cfg.validate()?;
    let mut points = Vec::new();
    let mut subsets = Vec::new();
    for &k in &cfg.k_values {
        let subset = problem_subset(cfg.seed, cfg.n, k);
        points.push(Point {
            k,
            m: cfg.m,
            concept: Concept::Dag(build_parity(cfg.n, &subset)?),
        });
        subsets.push((k, subset));
    }
    run_sweep(&cfg, points, subsets)
}

pub fn run_configured_sweep(cfg: &SweepConfig) -> Result<ResultTable> {
    match cfg.mode()? {
        SweepMode::SampleSize => sweep_sample_size(cfg),
        SweepMode::ProblemSize => sweep_problem_size(cfg),
    }
}

fn run_sweep(cfg: &SweepConfig, points: Vec<Point>, subsets: Vec<(usize, Vec<usize>)>) -> Result<ResultTable> {
    let mode = cfg.mode()?;
    let mut jobs = Vec::new();
    for p in 0..points.len() {
        for &learner in &cfg.learners {
            for trial in 0..cfg.trials {
                jobs.push((p, learner, trial));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<TrialRow>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, learner, trial)| {
                let point = &points[p];
                let x = match mode {
                    SweepMode::SampleSize => point.m,
                    SweepMode::ProblemSize => point.k,
                };
                let seed = derive_seed(cfg.seed, &[learner.id(), x as u64, trial as u64]);
                let start = Instant::now();
                let scores = run_trial(cfg, learner, &point.concept, point.m, seed)?;
                let runtime_ms = if cfg.timing {
                    start.elapsed().as_secs_f64() * 1000.0
                } else {
                    0.0
                };
                Ok(TrialRow {
                    sweep: mode.tag().into(),
                    learner: learner.name().into(),
                    n: cfg.n,
                    k: point.k,
                    m: point.m,
                    trial: trial as i64,
                    seed,
                    accuracy: scores.accuracy,
                    dont_know_rate: scores.dont_know_rate,
                    runtime_ms,
                })
            })
            .collect()
    });
    let rows: Vec<TrialRow> = results.into_iter().collect::<Result<_>>()?;

    let mut summaries = Vec::new();
    let mut summary_rows = Vec::new();
    for group in rows.chunks(cfg.trials) {
        let t = group.len() as f64;
        let mean = group.iter().map(|r| r.accuracy).sum::<f64>() / t;
        let var = group.iter().map(|r| (r.accuracy - mean).powi(2)).sum::<f64>() / t;
        let dk = group.iter().map(|r| r.dont_know_rate).sum::<f64>() / t;
        let rt = group.iter().map(|r| r.runtime_ms).sum::<f64>() / t;
        let first = &group[0];
        summaries.push(Summary {
            learner: first.learner.clone(),
            k: first.k,
            m: first.m,
            mean_accuracy: mean,
            std_accuracy: var.sqrt(),
            mean_dont_know: dk,
            trials: group.len(),
        });
        summary_rows.push(TrialRow {
            trial: -1,
            seed: cfg.seed,
            accuracy: mean,
            dont_know_rate: dk,
            runtime_ms: rt,
            ..first.clone()
        });
    }
    let mut all = rows;
    all.extend(summary_rows);
    Ok(ResultTable {
        sweep: mode,
        rows: all,
        summaries,
        subsets,
    })
}

/// One trial: a fresh training sample and a fresh test set from the uniform
/// distribution, seeded by `seed`.
pub fn run_trial(cfg: &SweepConfig, learner: LearnerKind, concept: &Concept, m: usize, seed: u64) -> Result<Scores> {
    let d = Distribution::uniform(cfg.n, seed);
    let mut rng = d.rng();
    let s = draw_sample(&d, concept, m, &mut rng)?;
    let test = draw_sample(&d, concept, cfg.test_size, &mut rng)?;
    let session = |mode| SessionConfig {
        mode,
        moderation: cfg.moderation,
        ..SessionConfig::default()
    };
    match learner {
        LearnerKind::Impact => score(&teach_on_sample(concept, &s, &session(LearnMode::BestFit))?.0, &test),
        LearnerKind::ImpactReliable => score(&teach_on_sample(concept, &s, &session(LearnMode::Reliable))?.0, &test),
        LearnerKind::GreedyTree => score(&train_greedy_tree(&s, cfg.tree_max_depth.unwrap_or(cfg.n))?, &test),
        LearnerKind::BoostedStumps => score(&train_boosted_stumps(&s, cfg.boost_rounds)?, &test),
        LearnerKind::Majority => score(&train_majority(&s)?, &test),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: SweepMode) -> SweepConfig {
        SweepConfig {
            mode: Some(mode),
            n: 6,
            subset: vec![0, 3],
            m_values: vec![10, 40],
            k_values: vec![1, 2],
            m: 40,
            trials: 3,
            seed: 9,
            learners: vec![LearnerKind::Impact, LearnerKind::Majority],
            test_size: 200,
            moderation: Default::default(),
            tree_max_depth: None,
            boost_rounds: 10,
            workers: 2,
            timing: false,
            output: None,
        }
    }

    #[test]
    fn summaries_match_raw_rows() {
        let t = sweep_sample_size(&small(SweepMode::SampleSize)).unwrap();
        assert_eq!(t.trial_rows().count(), 2 * 2 * 3);
        assert_eq!(t.summaries.len(), 4);
        for s in &t.summaries {
            let accs: Vec<f64> = t
                .trial_rows()
                .filter(|r| r.learner == s.learner && r.m == s.m)
                .map(|r| r.accuracy)
                .collect();
            let mean = accs.iter().sum::<f64>() / accs.len() as f64;
            assert!((mean - s.mean_accuracy).abs() < 1e-12);
        }
    }

    #[test]
    fn adding_a_learner_keeps_other_rows() {
        let base = small(SweepMode::ProblemSize);
        let a = sweep_problem_size(&base).unwrap();
        let mut more = base.clone();
        more.learners.insert(0, LearnerKind::GreedyTree);
        let b = sweep_problem_size(&more).unwrap();
        for r in a.trial_rows() {
            assert!(b.trial_rows().any(|q| q == r), "{r:?}");
        }
    }

    #[test]
    fn subsets_are_seeded() {
        assert_eq!(problem_subset(1, 10, 4), problem_subset(1, 10, 4));
        let s = problem_subset(1, 10, 10);
        assert_eq!(s, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = small(SweepMode::ProblemSize);
        c.k_values = vec![7];
        assert!(matches!(sweep_problem_size(&c), Err(Error::Config(_))));
        let mut c = small(SweepMode::SampleSize);
        c.trials = 0;
        assert!(sweep_sample_size(&c).is_err());
    }
}

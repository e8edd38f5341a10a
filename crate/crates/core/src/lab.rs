//! The convergence experiment: repeated relaxed EDI on random belief states,
//! recording how much each step still moves the distribution.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::belief::BeliefState;
use crate::error::{EdiError, Result};
use crate::imaging::iterate;
use crate::logic::{World, WorldSet, MAX_ATOMS};
use crate::metric::PseudoDistance;
use crate::operators::{inner_weight, InnerKind};
use crate::rational::{int, sum_balanced, to_decimal_string, to_fraction_string, Rational};
use crate::weights::WeightFunction;

const GRANULARITY: f64 = 1_000_000.0;

/// How each trial picks its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvidenceMode {
    /// Uniform over non-empty proper subsets of the worlds.
    Proper,
    /// Two distinct worlds, uniformly.
    Pair,
    Fixed(WorldSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub weight: InnerKind,
    pub eta: Rational,
    pub atoms: usize,
    pub trials: usize,
    pub iterations: usize,
    pub seed: u64,
    pub evidence: EvidenceMode,
    /// Keep each trial's per-step differences in the table.
    pub keep_rows: bool,
}

impl TrialConfig {
    pub fn new(weight: InnerKind, eta: Rational, atoms: usize, trials: usize, iterations: usize, seed: u64) -> Self {
        TrialConfig {
            weight,
            eta,
            atoms,
            trials,
            iterations,
            seed,
            evidence: EvidenceMode::Proper,
            keep_rows: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EdiError::InvalidParameter(m));
        if self.trials < 1 {
            return bad("at least one trial is required".into());
        }
        if self.iterations < 2 {
            return bad(format!("need at least 2 iterations, got {}", self.iterations));
        }
        if self.atoms < 1 || self.atoms > MAX_ATOMS {
            return bad(format!("atoms must lie in [1,{MAX_ATOMS}], got {}", self.atoms));
        }
        if !self.eta.is_positive() {
            return bad(format!("eta must be positive, got {}", to_fraction_string(&self.eta)));
        }
        if let EvidenceMode::Fixed(set) = &self.evidence {
            if set.atoms() != self.atoms || set.is_empty() {
                return bad("fixed evidence must be a non-empty set over the configured atoms".into());
            }
        }
        Ok(())
    }

    /// `{weight}_eta{num}-{den}_seed{seed}.csv`
    pub fn file_name(&self) -> String {
        let name = match self.weight {
            InnerKind::Rcp => "rcp",
            InnerKind::Dfr => "dfr",
        };
        format!("{name}_eta{}-{}_seed{}.csv", self.eta.numer(), self.eta.denom(), self.seed)
    }
}

/// Trial-averaged per-step change.
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub config: TrialConfig,
    /// Entry `t-1` is the mean over trials and worlds of `|b_t(w) − b_{t−1}(w)|`.
    pub mean: Vec<Rational>,
    /// Per-trial rows of the same quantity, if requested.
    pub rows: Option<Vec<Vec<Rational>>>,
    pub evidence: Vec<WorldSet>,
    pub terminal: Vec<BeliefState>,
}

/// Fixed 64-bit mixing function for deriving per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ trial))
}

/// Uniform on the simplex via normalized exponential spacings, rounded to
/// millionths and renormalized exactly.
pub fn sample_belief_state<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> BeliefState {
    let worlds = 1usize << atoms;
    loop {
        let draws: Vec<f64> = (0..worlds).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        let counts: Vec<i64> = draws.iter().map(|x| (x / total * GRANULARITY).round() as i64).collect();
        let sum: i64 = counts.iter().sum();
        if sum == 0 {
            continue;
        }
        let probs = counts.iter().map(|&k| Rational::new(k.into(), sum.into())).collect();
        return BeliefState::new(atoms, probs).expect("normalized by construction");
    }
}

/// Uniform over non-empty proper subsets of the worlds.
pub fn sample_evidence<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> WorldSet {
    let worlds = 1usize << atoms;
    loop {
        let mut set = WorldSet::empty(atoms);
        for i in 0..worlds {
            if rng.random_bool(0.5) {
                set.insert(World::from_index(i));
            }
        }
        if !set.is_empty() && set.len() < worlds {
            return set;
        }
    }
}

pub fn sample_pair<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> WorldSet {
    let worlds = 1usize << atoms;
    let u = rng.random_range(0..worlds);
    let mut v = rng.random_range(0..worlds - 1);
    if v >= u {
        v += 1;
    }
    WorldSet::from_worlds(atoms, [World::from_index(u), World::from_index(v)])
}

/// Runs the experiment with the configured rcp or dfr weight over Hamming
/// distance.
pub fn run_convergence(cfg: &TrialConfig) -> Result<ConvergenceTable> {
    cfg.validate()?;
    let d = Arc::new(PseudoDistance::hamming(cfg.atoms));
    let f = inner_weight(cfg.weight, d, cfg.eta.clone())?;
    run_convergence_with(cfg, &f)
}

/// As [`run_convergence`] but with an arbitrary weight; `cfg.weight` and
/// `cfg.eta` only label the output.
pub fn run_convergence_with(cfg: &TrialConfig, f: &WeightFunction) -> Result<ConvergenceTable> {
    cfg.validate()?;
    let trials: Vec<(WorldSet, Vec<Rational>, BeliefState)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, f, t))
        .collect::<Result<_>>()?;
    let n = int(cfg.trials as i64);
    let mean = (0..cfg.iterations)
        .map(|k| sum_balanced(&trials.iter().map(|(_, diffs, _)| &diffs[k]).collect::<Vec<_>>()) / &n)
        .collect();
    let mut evidence = Vec::with_capacity(trials.len());
    let mut terminal = Vec::with_capacity(trials.len());
    let mut rows = Vec::with_capacity(trials.len());
    for (e, diffs, last) in trials {
        evidence.push(e);
        terminal.push(last);
        rows.push(diffs);
    }
    Ok(ConvergenceTable {
        config: cfg.clone(),
        mean,
        rows: cfg.keep_rows.then_some(rows),
        evidence,
        terminal,
    })
}

fn run_trial(cfg: &TrialConfig, f: &WeightFunction, trial: u64) -> Result<(WorldSet, Vec<Rational>, BeliefState)> {
    let mut rng = trial_rng(cfg.seed, trial);
    let b = sample_belief_state(&mut rng, cfg.atoms);
    let evidence = match &cfg.evidence {
        EvidenceMode::Proper => sample_evidence(&mut rng, cfg.atoms),
        EvidenceMode::Pair => sample_pair(&mut rng, cfg.atoms),
        EvidenceMode::Fixed(set) => set.clone(),
    };
    let steps = iterate(&b, &evidence, f, cfg.iterations)?;
    let worlds = int(b.world_count() as i64);
    let mut prev = &b;
    let mut diffs = Vec::with_capacity(steps.len());
    for s in &steps {
        let total: Rational = prev
            .probs()
            .iter()
            .zip(s.posterior.probs())
            .map(|(x, y)| (x - y).abs())
            .sum();
        diffs.push(total / &worlds);
        prev = &s.posterior;
    }
    let last = steps.last().expect("at least two iterations").posterior.clone();
    Ok((evidence, diffs, last))
}

fn ensure_rows(table: &ConvergenceTable) -> Result<()> {
    if table.mean.is_empty() {
        return Err(EdiError::InvalidParameter("convergence table has no rows".into()));
    }
    Ok(())
}

pub fn csv_string(table: &ConvergenceTable) -> Result<String> {
    ensure_rows(table)?;
    let mut out = String::from("iteration,mean_abs_diff\n");
    for (k, m) in table.mean.iter().enumerate() {
        writeln!(out, "{},{}", k + 1, to_decimal_string(m, 12)).expect("writing to a string");
    }
    Ok(out)
}

pub fn emit_csv(table: &ConvergenceTable, path: &Path) -> Result<()> {
    let text = csv_string(table)?;
    Ok(std::fs::write(path, text)?)
}

/// First and last mean difference and their ratio.
pub fn emit_summary(table: &ConvergenceTable) -> Result<String> {
    ensure_rows(table)?;
    let first = &table.mean[0];
    let last = table.mean.last().expect("non-empty");
    let ratio = if first.is_zero() {
        "undefined".to_string()
    } else {
        to_decimal_string(&(last / first), 12)
    };
    let c = &table.config;
    Ok(format!(
        "{} eta={} atoms={} trials={} iterations={} seed={}\nfirst mean |diff| {}\nlast mean |diff| {}\nlast/first {}\n",
        match c.weight {
            InnerKind::Rcp => "rcp",
            InnerKind::Dfr => "dfr",
        },
        to_fraction_string(&c.eta),
        c.atoms,
        c.trials,
        c.iterations,
        c.seed,
        to_decimal_string(first, 12),
        to_decimal_string(last, 12),
        ratio
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::weights::bc_weight;

    fn cfg(weight: InnerKind, eta: Rational) -> TrialConfig {
        TrialConfig::new(weight, eta, 3, 20, 6, 42)
    }

    #[test]
    fn sampled_states_are_normalized() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let b = sample_belief_state(&mut rng, 3);
            assert_eq!(b.probs().iter().sum::<Rational>(), int(1));
        }
    }

    #[test]
    fn evidence_is_proper() {
        let mut rng = trial_rng(2, 0);
        for _ in 0..200 {
            let e = sample_evidence(&mut rng, 2);
            assert!(!e.is_empty() && e.len() < 4);
        }
        for _ in 0..20 {
            assert_eq!(sample_evidence(&mut rng, 1).len(), 1);
            assert_eq!(sample_pair(&mut rng, 1).len(), 2);
        }
    }

    #[test]
    fn config_is_validated() {
        let mut c = cfg(InnerKind::Rcp, int(1));
        c.iterations = 1;
        assert!(run_convergence(&c).is_err());
        c.iterations = 5;
        c.trials = 0;
        assert!(run_convergence(&c).is_err());
        c.trials = 1;
        c.atoms = 17;
        assert!(run_convergence(&c).is_err());
        let c = cfg(InnerKind::Dfr, int(0));
        assert_eq!(run_convergence(&c).unwrap_err().name(), "InvalidParameter");
    }

    #[test]
    fn differences_shrink() {
        let t = run_convergence(&cfg(InnerKind::Rcp, int(1))).unwrap();
        assert_eq!(t.mean.len(), 6);
        assert!(t.mean.iter().all(|m| !m.is_negative()));
        assert!(t.mean[5] < t.mean[0]);
    }

    #[test]
    fn retentive_weight_stops_after_one_step() {
        let c = cfg(InnerKind::Rcp, int(1));
        let t = run_convergence_with(&c, &bc_weight(3)).unwrap();
        assert!(t.mean[0].is_positive());
        assert!(t.mean[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn file_names() {
        assert_eq!(cfg(InnerKind::Dfr, ratio(1, 10000)).file_name(), "dfr_eta1-10000_seed42.csv");
        assert_eq!(cfg(InnerKind::Rcp, int(1)).file_name(), "rcp_eta1-1_seed42.csv");
    }

    #[test]
    fn csv_shape() {
        let t = run_convergence(&cfg(InnerKind::Dfr, int(1))).unwrap();
        let csv = csv_string(&t).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "iteration,mean_abs_diff");
        assert!(lines[1].starts_with("1,"));
        let mut empty = t.clone();
        empty.mean.clear();
        assert!(csv_string(&empty).is_err());
        assert!(emit_summary(&t).unwrap().contains("last/first"));
    }
}

//! Named checks over the catalog, B-field sweeps and report assembly.

pub mod fano_map;
mod checks;
pub mod json;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{BFieldParams, MUKAI_CONVENTION};

pub const SUITE_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown check {name:?}; known checks: {}", known.join(", "))]
    UnknownCheck { name: String, known: Vec<String> },
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Ambiguous,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Ambiguous => "ambiguous",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sampling parameters: `samples` admissible triples whose numerators are
/// odd and bounded by `bound` in absolute value, drawn from a ChaCha8 stream
/// seeded with `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub bound: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 100,
            seed: 0,
            bound: 9,
        }
    }
}

/// RNG stream ids, one per consumer.
pub(crate) const STREAM_TRIPLES: u64 = 1;
pub(crate) const STREAM_RELIFTS: u64 = 2;

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.bound == 0 {
            return Err(SuiteError::InvalidConfig(
                "numerator bound must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn odd_numerator(&self, rng: &mut ChaCha8Rng) -> i64 {
        // odd values in [−bound, bound]: −m, −m+2, …, m with m the largest odd ≤ bound
        let m = if self.bound % 2 == 1 {
            self.bound as i64
        } else {
            self.bound as i64 - 1
        };
        let k = rng.gen_range(0..=m);
        2 * k - m
    }

    /// `samples` pairs of admissible triples. The first entry of each pair is
    /// the sample; the second is the independent lift on the other side of
    /// the composed map.
    pub fn sample_pairs(&self) -> Vec<(BFieldParams, BFieldParams)> {
        let mut rng = self.rng(STREAM_TRIPLES);
        let draw = |rng: &mut ChaCha8Rng| {
            let a = self.odd_numerator(rng);
            let b = self.odd_numerator(rng);
            let c = self.odd_numerator(rng);
            BFieldParams::from_numerators(a, b, c).expect("odd numerators are admissible")
        };
        (0..self.samples)
            .map(|_| {
                let first = draw(&mut rng);
                let second = draw(&mut rng);
                (first, second)
            })
            .collect()
    }

    pub fn sample_triples(&self) -> Vec<BFieldParams> {
        self.sample_pairs().into_iter().map(|(p, _)| p).collect()
    }

    fn to_json(self) -> Value {
        json!({"samples": self.samples, "seed": self.seed, "bound": self.bound})
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub anchor: String,
    pub witness: Value,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": self.status.as_str(),
            "anchor": self.anchor,
            "witness": self.witness,
            "notes": self.notes,
        })
    }
}

/// Per-check outcome counts from [`sweep_bfields`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepFragment {
    pub samples: usize,
    /// check name → status name → count
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
    /// check name → sampled triples (printed) on which it failed
    pub failures: BTreeMap<String, Vec<String>>,
}

impl SweepFragment {
    pub fn all_passed(&self) -> bool {
        self.failures.values().all(|f| f.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "samples": self.samples,
            "counts": self.counts,
            "failures": self.failures,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: SweepConfig,
    pub checks: Vec<CheckResult>,
    pub sweep: SweepFragment,
    pub overall: Status,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "suite_version": SUITE_VERSION,
            "convention": MUKAI_CONVENTION,
            "config": self.config.to_json(),
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "sweep": self.sweep.to_json(),
            "overall": self.overall.as_str(),
        })
    }

    /// Canonical serialization: sorted keys, two-space indentation, trailing
    /// newline.
    pub fn to_canonical_json(&self) -> String {
        json::canonical(&self.to_json())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("lattk verification suite {SUITE_VERSION}\n"));
        out.push_str(&format!("Mukai pairing: {MUKAI_CONVENTION}\n"));
        out.push_str(&format!(
            "seed {}, samples {}, numerator bound {}\n\n",
            self.config.seed, self.config.samples, self.config.bound
        ));
        for c in &self.checks {
            out.push_str(&format!("{:<10} {}\n", c.status.as_str().to_uppercase(), c.name));
            for n in &c.notes {
                out.push_str(&format!("           note: {n}\n"));
            }
        }
        if self.sweep.samples > 0 {
            out.push_str(&format!("\nsweep over {} B-fields:\n", self.sweep.samples));
            for (name, counts) in &self.sweep.counts {
                let parts: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
                out.push_str(&format!("  {name}: {}\n", parts.join(", ")));
            }
        }
        out.push_str(&format!("\noverall: {}\n", self.overall.as_str().to_uppercase()));
        out
    }
}

/// `pass` unless some check failed; skipped and ambiguous checks do not fail
/// the report (an ambiguous result always has a passing reading).
pub fn overall_status(checks: &[CheckResult]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    }
}

pub fn check_names() -> Vec<&'static str> {
    checks::REGISTRY.iter().map(|c| c.name).collect()
}

/// `(name, anchor)` for every registered check.
pub fn check_anchors() -> Vec<(&'static str, &'static str)> {
    checks::REGISTRY.iter().map(|c| (c.name, c.anchor)).collect()
}

/// Names of the checks re-run for every sampled B-field.
pub fn sweep_check_names() -> Vec<&'static str> {
    checks::SWEEP_CHECKS.to_vec()
}

pub fn run_check(name: &str, config: &SweepConfig) -> Result<CheckResult, SuiteError> {
    config.validate()?;
    let entry = checks::REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| SuiteError::UnknownCheck {
            name: name.to_string(),
            known: check_names().iter().map(|s| s.to_string()).collect(),
        })?;
    Ok(checks::run_entry(entry, config))
}

pub fn run_all(config: &SweepConfig) -> Result<Report, SuiteError> {
    run_selected(&check_names(), config)
}

/// Runs the named checks (concurrently) and assembles a report sorted by
/// check name.
pub fn run_selected(names: &[&str], config: &SweepConfig) -> Result<Report, SuiteError> {
    config.validate()?;
    let entries: Vec<&checks::Entry> = names
        .iter()
        .map(|name| {
            checks::REGISTRY
                .iter()
                .find(|c| c.name == *name)
                .ok_or_else(|| SuiteError::UnknownCheck {
                    name: name.to_string(),
                    known: check_names().iter().map(|s| s.to_string()).collect(),
                })
        })
        .collect::<Result<_, _>>()?;
    let mut results: Vec<CheckResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|entry| scope.spawn(move || checks::run_entry(entry, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results.dedup_by(|a, b| a.name == b.name);
    let sweep = sweep_from_results(config, &results);
    let overall = overall_status(&results);
    Ok(Report {
        config: *config,
        checks: results,
        sweep,
        overall,
    })
}

fn sweep_from_results(config: &SweepConfig, results: &[CheckResult]) -> SweepFragment {
    let mut fragment = SweepFragment {
        samples: config.samples,
        ..Default::default()
    };
    if config.samples == 0 {
        return fragment;
    }
    for r in results {
        if !checks::SWEEP_CHECKS.contains(&r.name.as_str()) {
            continue;
        }
        let counts: BTreeMap<String, usize> = r.witness["sweep"]["counts"]
            .as_object()
            .map(|m| {
                m.iter()
                    .map(|(k, v)| (k.clone(), v.as_u64().unwrap_or(0) as usize))
                    .collect()
            })
            .unwrap_or_default();
        let failures: Vec<String> = r.witness["sweep"]["failed_samples"]
            .as_array()
            .map(|a| a.iter().filter_map(|v| v.as_str().map(str::to_string)).collect())
            .unwrap_or_default();
        fragment.counts.insert(r.name.clone(), counts);
        fragment.failures.insert(r.name.clone(), failures);
    }
    fragment
}

/// Re-runs the parameter-dependent checks for every sampled B-field and
/// summarizes the per-sample outcomes.
pub fn sweep_bfields(config: &SweepConfig) -> Result<SweepFragment, SuiteError> {
    config.validate()?;
    if config.samples == 0 {
        return Ok(SweepFragment::default());
    }
    let results: Vec<CheckResult> = checks::SWEEP_CHECKS
        .iter()
        .map(|name| run_check(name, config))
        .collect::<Result<_, _>>()?;
    Ok(sweep_from_results(config, &results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_odd_and_bounded() {
        let cfg = SweepConfig {
            samples: 50,
            seed: 7,
            bound: 9,
        };
        for (p, q) in cfg.sample_pairs() {
            for v in [&p.bsq, &p.bh, &p.bs, &q.bsq, &q.bh, &q.bs] {
                assert!(v.numer().clone() <= 9.into() && v.numer().clone() >= (-9).into());
            }
            assert!(p.is_admissible() && q.is_admissible());
        }
        assert_eq!(cfg.sample_pairs(), cfg.sample_pairs());
        let other = SweepConfig { seed: 8, ..cfg };
        assert_ne!(cfg.sample_pairs(), other.sample_pairs());
    }

    #[test]
    fn even_bound_uses_largest_odd_below() {
        let cfg = SweepConfig {
            samples: 30,
            seed: 1,
            bound: 2,
        };
        for p in cfg.sample_triples() {
            assert!(p.bh == crate::linalg::rat(1, 2) || p.bh == crate::linalg::rat(-1, 2));
        }
        assert!(SweepConfig { bound: 0, ..cfg }.validate().is_err());
    }

    #[test]
    fn unknown_check_lists_registry() {
        match run_check("nonexistent", &SweepConfig::default()) {
            Err(SuiteError::UnknownCheck { known, .. }) => assert_eq!(known.len(), 19),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overall_ignores_skipped_and_ambiguous() {
        let mk = |status| CheckResult {
            name: "x".into(),
            status,
            anchor: String::new(),
            witness: Value::Null,
            notes: vec![],
        };
        assert_eq!(overall_status(&[mk(Status::Pass), mk(Status::Skipped)]), Status::Pass);
        assert_eq!(overall_status(&[mk(Status::Ambiguous)]), Status::Pass);
        assert_eq!(overall_status(&[mk(Status::Pass), mk(Status::Fail)]), Status::Fail);
    }
}

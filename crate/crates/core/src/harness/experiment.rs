use rayon::prelude::*;

use super::config::TrialConfig;
use super::trial::{run_trial, TrialEnv, TrialRecord};
use crate::planner::{BackendError, PlannerBackend};

/// Builds a fresh backend for one trial.
pub type BackendFactory<'a> = dyn Fn(&TrialConfig) -> Result<Box<dyn PlannerBackend>, BackendError> + Sync + 'a;

/// Expands each config into `trials` configs with seeds `seed + i`.
pub fn expand_trials(configs: &[TrialConfig]) -> Vec<TrialConfig> {
    configs
        .iter()
        .flat_map(|c| {
            (0..c.trials as u64).map(move |i| TrialConfig { seed: c.seed.wrapping_add(i), ..c.clone() })
        })
        .collect()
}

/// Runs every trial on a pool of `parallelism` threads. Records come back
/// in expansion order whatever the scheduling.
pub fn run_experiment(
    configs: &[TrialConfig],
    env: &TrialEnv,
    factory: &BackendFactory<'_>,
    parallelism: usize,
) -> Vec<TrialRecord> {
    let jobs = expand_trials(configs);
    let run_one = |cfg: &TrialConfig| match factory(cfg) {
        Ok(mut backend) => run_trial(cfg, env, &mut backend),
        Err(e) => TrialRecord {
            config: cfg.clone(),
            rules_fingerprint: env.rules.fingerprint(),
            backend: crate::planner::BackendDescriptor { name: "unavailable".into(), model: String::new(), deterministic: false },
            iterations: Vec::new(),
            milestones: crate::curriculum::MILESTONES
                .iter()
                .map(|m| (*m, super::trial::MilestoneHit::Censored))
                .collect(),
            reached_goal: false,
            aborted: Some(format!("backend setup: {e}")),
        },
    };
    match rayon::ThreadPoolBuilder::new().num_threads(parallelism.max(1)).build() {
        Ok(pool) => pool.install(|| jobs.par_iter().map(run_one).collect()),
        Err(_) => jobs.iter().map(run_one).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Arm;
    use crate::planner::OracleBackend;

    #[test]
    fn seeds_and_order_are_stable() {
        let env = TrialEnv::default();
        let cfgs = vec![
            TrialConfig { seed: 100, trials: 3, max_iterations: 4, ..TrialConfig::for_arm(Arm::Conventional) },
            TrialConfig { seed: 200, trials: 2, max_iterations: 4, ..TrialConfig::for_arm(Arm::Predictive) },
        ];
        let rules = env.rules.clone();
        let factory = move |_: &TrialConfig| -> Result<Box<dyn PlannerBackend>, BackendError> {
            Ok(Box::new(OracleBackend::new(rules.clone())))
        };
        let serial = run_experiment(&cfgs, &env, &factory, 1);
        let parallel = run_experiment(&cfgs, &env, &factory, 4);
        let seeds: Vec<u64> = serial.iter().map(|r| r.config.seed).collect();
        assert_eq!(seeds, vec![100, 101, 102, 200, 201]);
        let key = |rs: &[TrialRecord]| -> Vec<(String, Vec<Option<crate::craftworld::Task>>)> {
            rs.iter().map(|r| (r.config.arm.clone(), r.iterations.iter().map(|i| i.adopted).collect())).collect()
        };
        assert_eq!(key(&serial), key(&parallel));
    }

    #[test]
    fn factory_failure_becomes_aborted_record() {
        let env = TrialEnv::default();
        let cfgs = vec![TrialConfig { trials: 2, ..TrialConfig::default() }];
        let factory = |_: &TrialConfig| -> Result<Box<dyn PlannerBackend>, BackendError> {
            Err(BackendError::Config("no endpoint".into()))
        };
        let out = run_experiment(&cfgs, &env, &factory, 2);
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|r| r.aborted.is_some()));
    }
}

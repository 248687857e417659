use ppt_core::campaign::run_campaign;
use ppt_core::exec::{map_indices, Execution, THREADS_ENV};
use ppt_core::sampling::{Method, SampleSpec};
use ppt_core::verify::{hunt_sj_counterexample, HuntConfig, VerifierKind, VerifyOptions};

#[test]
fn sequential_and_parallel_runs_agree() {
    let spec = SampleSpec::new(Method::PptRejection, 3, 24, 99);
    let kinds = VerifierKind::all();
    let opts = VerifyOptions::default();
    let seq = run_campaign(&spec, &kinds, &opts, Execution::Sequential).unwrap();
    let par = run_campaign(&spec, &kinds, &opts, Execution::Parallel).unwrap();
    assert_eq!(seq.json_lines(), par.json_lines());

    let mut cfg = HuntConfig::new(3, 2, 5);
    cfg.budget = 3_000;
    let a = hunt_sj_counterexample(&cfg, Execution::Sequential).unwrap();
    let b = hunt_sj_counterexample(&cfg, Execution::Parallel).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    // A thread cap changes scheduling only.
    std::env::set_var(THREADS_ENV, "2");
    let capped = run_campaign(&spec, &kinds, &opts, Execution::Parallel).unwrap();
    std::env::set_var(THREADS_ENV, "1");
    let single = map_indices(10, Execution::Parallel, |i| i * i);
    std::env::remove_var(THREADS_ENV);
    assert_eq!(capped.json_lines(), seq.json_lines());
    assert_eq!(single, (0..10).map(|i| i * i).collect::<Vec<_>>());
}

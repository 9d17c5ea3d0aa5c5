use std::path::{Path, PathBuf};
use std::process::Command;

use ippmm::solver::PipelineOptions;
use ippmm::Status;
use ippmm_bench::{perf_profile, read_records, run_suite, write_records, BenchRecord, Comparison, Metric, IPPMM, NOREG};
use proptest::prelude::*;

fn corpus(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(sub)
}

fn ippmm(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ippmm")).args(args).env_remove("IPPMM_TOL").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn field(report: &str, name: &str) -> f64 {
    let line = report.lines().find(|l| l.starts_with(name)).unwrap();
    line[name.len()..].trim().parse().unwrap()
}

#[test]
fn cli_solves_the_symmetric_qp() {
    let file = corpus("feasible/qp_sym2.qps");
    let (code, out) = ippmm(&["solve", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("Optimal"));
    assert!((field(&out, "objective") - 2.0).abs() <= 1e-5, "{out}");

    let (code, out) = ippmm(&["solve", file.to_str().unwrap(), "--tol", "1e-10"]);
    assert_eq!(code, 0);
    assert!(field(&out, "mu") <= 1e-10, "{out}");
}

#[test]
fn cli_tolerance_from_environment() {
    let file = corpus("feasible/qp_sym2.qps");
    let out = Command::new(env!("CARGO_BIN_EXE_ippmm"))
        .args(["solve", file.to_str().unwrap()])
        .env("IPPMM_TOL", "1e-10")
        .output()
        .unwrap();
    assert!(field(&String::from_utf8(out.stdout).unwrap(), "mu") <= 1e-10);
}

#[test]
fn cli_exit_codes() {
    let (code, out) = ippmm(&["solve", corpus("infeasible/inf_blend.qps").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(out.lines().next(), Some("Infeasible"));

    let (code, _) = ippmm(&["solve", "/definitely/not/here.qps"]);
    assert_eq!(code, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qps");
    std::fs::write(&bad, "NAME X\nROWS\n N obj\nCOLUMNS\n    x  nosuchrow  1.0\nENDATA\n").unwrap();
    let (code, _) = ippmm(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn cli_writes_iteration_log() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.csv");
    let (code, out) =
        ippmm(&["solve", corpus("feasible/lp_diet.qps").to_str().unwrap(), "--log", log.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("k,mu,"));
    assert_eq!(text.lines().count() as f64, field(&out, "iterations") + 1.0);
}

#[test]
fn cli_bench_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let recs = dir.path().join("recs.csv");
    let prof = dir.path().join("prof.csv");
    let (code, _) = ippmm(&["bench", corpus("rank_deficient").to_str().unwrap(), "-o", recs.to_str().unwrap()]);
    assert_eq!(code, 0);
    let records = read_records(std::fs::File::open(&recs).unwrap()).unwrap();
    assert_eq!(records.len(), 8);
    let (code, _) =
        ippmm(&["profile", recs.to_str().unwrap(), "--metric", "iterations", "-o", prof.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&prof).unwrap();
    assert!(text.lines().any(|l| l == "ippmm,1,1"), "{text}");
    assert!(text.lines().any(|l| l == "noreg,1,0"), "{text}");
}

fn three_lps() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for name in ["lp_diet", "lp_vertex", "lp_production"] {
        std::fs::copy(corpus("feasible").join(format!("{name}.qps")), dir.path().join(format!("{name}.qps"))).unwrap();
    }
    dir
}

#[test]
fn suite_records_every_pair() {
    let dir = three_lps();
    let recs = run_suite(dir.path(), &PipelineOptions::default(), Comparison::Both).unwrap();
    assert_eq!(recs.len(), 6);
    assert!(recs.iter().all(|r| r.status.is_some() && r.time >= 0.0));
    let names: Vec<(&str, &str)> = recs.iter().map(|r| (r.problem.as_str(), r.config.as_str())).collect();
    assert_eq!(
        names,
        [
            ("lp_diet", IPPMM),
            ("lp_diet", NOREG),
            ("lp_production", IPPMM),
            ("lp_production", NOREG),
            ("lp_vertex", IPPMM),
            ("lp_vertex", NOREG)
        ]
    );

    let mut buf = Vec::new();
    write_records(&mut buf, &recs).unwrap();
    assert_eq!(read_records(buf.as_slice()).unwrap(), recs);
}

#[test]
fn suite_keeps_going_past_bad_files() {
    let dir = three_lps();
    std::fs::write(dir.path().join("broken.qps"), "ROWS\n N obj\n Q r1\nENDATA\n").unwrap();
    let recs = run_suite(dir.path(), &PipelineOptions::default(), Comparison::Ippmm).unwrap();
    assert_eq!(recs.len(), 4);
    let broken = recs.iter().find(|r| r.problem == "broken").unwrap();
    assert_eq!(broken.status, None);
    assert!(!broken.error.is_empty());
    assert_eq!(recs.iter().filter(|r| r.solved()).count(), 3);
}

#[test]
fn suite_is_deterministic() {
    let opts = PipelineOptions::default();
    let iters = |recs: Vec<BenchRecord>| recs.into_iter().map(|r| (r.problem, r.config, r.status, r.iterations)).collect::<Vec<_>>();
    let a = iters(run_suite(&corpus("feasible"), &opts, Comparison::Both).unwrap());
    let b = iters(run_suite(&corpus("feasible"), &opts, Comparison::Both).unwrap());
    assert_eq!(a, b);
}

#[test]
fn regularization_handles_rank_deficiency() {
    let recs = run_suite(&corpus("rank_deficient"), &PipelineOptions::default(), Comparison::Both).unwrap();
    for r in &recs {
        if r.config == IPPMM {
            assert_eq!(r.status, Some(Status::Optimal), "{}", r.problem);
        } else {
            assert_ne!(r.status, Some(Status::Optimal), "{}", r.problem);
        }
    }
}

fn records() -> impl Strategy<Value = Vec<BenchRecord>> {
    let statuses = prop_oneof![
        3 => Just(Status::Optimal),
        1 => Just(Status::IllConditioned),
        1 => Just(Status::NoConvergence),
        1 => Just(Status::Infeasible),
    ];
    proptest::collection::vec((0usize..6, 0usize..3, statuses, 0.0f64..10.0, 0usize..40), 1..30).prop_map(|rows| {
        rows.into_iter()
            .map(|(p, c, status, time, iterations)| BenchRecord {
                problem: format!("p{p}"),
                config: format!("c{c}"),
                status: Some(status),
                error: String::new(),
                iterations,
                time,
                primal_residual: 0.0,
                dual_residual: 0.0,
                mu: 0.0,
                objective: 0.0,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn profiles_are_monotone_and_reach_the_solve_rate(recs in records(), by_time in any::<bool>()) {
        let metric = if by_time { Metric::Time } else { Metric::Iterations };
        let profiles = perf_profile(&recs, metric);
        let mut problems: Vec<&str> = recs.iter().map(|r| r.problem.as_str()).collect();
        problems.sort_unstable();
        problems.dedup();
        if !recs.iter().any(|r| r.solved()) {
            prop_assert!(profiles.is_empty());
        }
        for p in &profiles {
            prop_assert!(p.points[0].0 == 1.0);
            for w in p.points.windows(2) {
                prop_assert!(w[0].0 < w[1].0 && w[0].1 <= w[1].1);
            }
            prop_assert!(p.points.iter().all(|&(t, f)| t >= 1.0 && (0.0..=1.0).contains(&f)));
            let solved = problems
                .iter()
                .filter(|name| recs.iter().any(|r| r.problem == **name && r.config == p.config && r.solved()))
                .count();
            let rate = solved as f64 / problems.len() as f64;
            prop_assert!((p.points.last().unwrap().1 - rate).abs() < 1e-12);
        }
    }
}

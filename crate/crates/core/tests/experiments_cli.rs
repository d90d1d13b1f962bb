use scalewave::cli::{run_with, EXIT_CONFIG, EXIT_OK, EXIT_USAGE};
use scalewave::experiments::{monotonicity_violations, run_sweep, DataConfig, GridConfig, Model, ModelParams, SweepConfig};
use scalewave::fd::DEFAULT_THRESHOLD;
use scalewave::params::ScaleInvariantParams;
use scalewave::profile::BumpFamily;
use tempfile::tempdir;

fn small_config() -> SweepConfig {
    SweepConfig {
        model: Model::Single,
        params: ModelParams::Single(ScaleInvariantParams::new(2.0, 0.0).unwrap()),
        n: 1,
        p: 2.0,
        q: None,
        data: DataConfig {
            family: BumpFamily::Polynomial { k: 4 },
            radius: 1.0,
        },
        eps_grid: vec![2.0, 1.0, 0.5],
        grid: GridConfig {
            dx: 1.0 / 20.0,
            cfl: 0.5,
            t_max: 40.0,
        },
        threshold: DEFAULT_THRESHOLD,
        refine: true,
        output_path: None,
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("scalewave").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn config_round_trips_through_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let cfg = small_config();
    cfg.save(&path).unwrap();
    assert_eq!(SweepConfig::load(&path).unwrap(), cfg);
}

#[test]
fn invalid_configs_rejected() {
    let mut cfg = small_config();
    cfg.eps_grid = vec![0.5, 1.0];
    assert!(cfg.validate().is_err());
    let mut cfg = small_config();
    cfg.n = 2;
    assert!(cfg.validate().is_err());
    let text = small_config().to_json().unwrap().replacen("\"refine\"", "\"bogus\": 1, \"refine\"", 1);
    assert!(SweepConfig::from_json(&text).is_err());
}

#[test]
fn reruns_are_bit_identical() {
    let dir = tempdir().unwrap();
    let mut csv = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let mut cfg = small_config();
        let path = dir.path().join(name);
        cfg.output_path = Some(path.to_str().unwrap().to_string());
        let report = run_sweep(&cfg).unwrap();
        assert!(report.all_blow_up());
        assert!(monotonicity_violations(&report.records).is_empty());
        csv.push(std::fs::read(&path).unwrap());
    }
    assert!(!csv[0].is_empty());
    assert_eq!(csv[0], csv[1]);
}

#[test]
fn lifespan_nonincreasing_in_eps() {
    let report = run_sweep(&small_config()).unwrap();
    let ts: Vec<f64> = report.records.iter().map(|r| r.t_est).collect();
    // eps_grid is decreasing, so lifespans must grow along the records.
    assert!(ts.windows(2).all(|w| w[0] <= w[1]), "{ts:?}");
    assert!(report.monotonicity_violations.is_empty());
}

#[test]
fn sweep_subcommand_writes_csv() {
    let dir = tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    small_config().save(&cfg_path).unwrap();
    let csv = dir.path().join("out.csv");
    let (code, out, _) = cli(&["sweep", "--config", cfg_path.to_str().unwrap(), "--output", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("eps,T_est,blow_up,threshold,dx,cfl,converged"));
    let written = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(written.lines().count(), 4);
}

#[test]
fn subcommands_and_exit_codes() {
    let (code, out, _) = cli(&["exponents", "--n", "1", "--mu", "2", "--nu2", "0", "--p", "1.5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, _, _) = cli(&["verify", "--suite", "all"]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = cli(&["no-such-command"]);
    assert_eq!(code, EXIT_USAGE);
    // δ < 0 is a configuration error.
    let (code, _, err) = cli(&["kernels", "--mu", "1", "--nu2", "1"]);
    assert_eq!(code, EXIT_CONFIG, "{err}");
    let dir = tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let (code, _, _) = cli(&["sweep", "--config", missing.to_str().unwrap()]);
    assert_ne!(code, EXIT_OK);
}

#[test]
fn sequences_subcommand_prints_table() {
    let (code, out, _) = cli(&["sequences", "--mode", "critical", "--p", "2", "--q", "2", "--sigma1", "2", "--sigma2", "2", "--jmax", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("j,ell,theta,logD"));
    assert!(out.contains("# divergence threshold"));
}

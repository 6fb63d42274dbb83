use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fsc_capacity_cli::commands::{execute, GE_PUBLISHED};
use fsc_capacity_cli::config::{ChannelKind, RunConfig};
use fsc_capacity_cli::report::Report;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fsc-capacity"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(config: &Path, overrides: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.arg("run").arg("--config").arg(config);
    for o in overrides {
        cmd.arg("--override").arg(o);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn identical_configs_give_identical_traces() {
    let dir = TempDir::new().unwrap();
    for (name, channel) in [("bec", "bec"), ("ge", "gilbert-elliott")] {
        let mut traces = Vec::new();
        for i in 0..2 {
            let trace = dir.path().join(format!("{name}{i}.csv"));
            let cfg = write_config(
                dir.path(),
                &format!("{name}{i}.toml"),
                &format!(
                    "channel = \"{channel}\"\ntrace_csv = {:?}\nreport_json = {:?}\n",
                    trace,
                    dir.path().join(format!("{name}{i}.json"))
                ),
            );
            let out = run(&cfg, &[]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            traces.push(std::fs::read(&trace).unwrap());
        }
        assert_eq!(traces[0], traces[1], "{name}");
        let text = String::from_utf8(traces[0].clone()).unwrap();
        assert!(text.starts_with("outer_k,theta,f_value,grad_norm,step_t,backtracks,perturbed,floor_active\n"));
    }
}

#[test]
fn report_round_trips() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let cfg = write_config(dir.path(), "c.toml", &format!("channel = \"bec\"\nreport_json = {report:?}\n"));
    assert_eq!(run(&cfg, &[]).status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    let parsed = Report::from_json(&text).unwrap();
    assert_eq!(Report::from_json(&parsed.to_json()).unwrap(), parsed);
    assert_eq!(parsed.to_json() + "\n", text);

    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["channel", "algorithm", "constants", "final", "bound", "verification"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["N_poly", "rho", "M", "m", "k0"] {
        assert!(v["constants"].get(key).is_some(), "{key}");
    }
    for key in ["theta", "f", "grad_norm"] {
        assert!(v["final"].get(key).is_some(), "{key}");
    }
    for key in ["eta", "recursion", "tail", "interval"] {
        assert!(v["bound"].get(key).is_some(), "{key}");
    }
    for key in ["passed", "delta", "y0", "dist"] {
        assert!(v["verification"].get(key).is_some(), "{key}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bec = write_config(dir.path(), "bec.toml", "channel = \"bec\"\n");
    assert_eq!(run(&bec, &[]).status.code(), Some(0));

    let out = run(&bec, &["alpha=0.6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("alpha must lie in (0,0.5)"), "{}", stderr(&out));

    let out = run(&bec, &["betta=0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("betta"));
    assert_eq!(run(&dir.path().join("absent.toml"), &[]).status.code(), Some(1));

    // The stated noiseless constants fail the start-up audit.
    let nl = write_config(dir.path(), "nl.toml", "channel = \"noiseless\"\n");
    assert_eq!(run(&nl, &[]).status.code(), Some(2));
    assert_eq!(run(&nl, &["force=true"]).status.code(), Some(0));

    // One backtrack is not enough for the first BEC step.
    let out = run(&bec, &["max_backtracks=1"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    assert_eq!(bin().arg("nonsense").output().unwrap().status.code(), Some(1));
}

#[test]
fn overrides_beat_the_file() {
    let mut cfg = RunConfig::parse("channel = \"bec\"\nouter_iters = 50\n", &["outer_iters=20".into()]).unwrap();
    cfg.report_json = None;
    let out = execute(&cfg).unwrap();
    assert_eq!(out.trace.len(), 20);
}

#[test]
fn bec_report_interval_contains_published() {
    let out = execute(&RunConfig::for_channel(ChannelKind::Bec)).unwrap();
    let [lo, hi] = out.report.bound.unwrap().interval;
    assert!(lo <= 0.4422382 && hi >= 0.4422398, "[{lo}, {hi}]");
}

#[test]
fn ge_trace_matches_published_rows() {
    let out = execute(&RunConfig::for_channel(ChannelKind::GilbertElliott)).unwrap();
    let k0 = out.report.constants.k0;
    for &(k, theta, f) in &GE_PUBLISHED {
        let r = out.trace.iter().find(|r| r.outer_k + k0 == k).unwrap();
        assert!((r.theta[0] - theta).abs() <= 5e-4, "k={k}: θ={}", r.theta[0]);
        assert!((r.f_value - f).abs() <= 1e-5, "k={k}: f={}", r.f_value);
    }
}

#[test]
fn generic_channel_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "g.toml",
        "channel = \"generic\"\ninput = \"rll\"\nstate_matrix = [[0.7, 0.3], [0.3, 0.7]]\ncrossovers = [0.01, 0.1]\n\
         domain = [0.05, 0.95]\nn_poly = [1.0, 0, 0]\nrho = 0.1\nbig_m = 4.0\nk0 = 4\ntheta0 = 0.2\nalgorithm = 3\nb = 0.5\ngrid_points = 21\nforce = true\n",
    );
    let out = run(&cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = Report::from_json(&stdout(&out)).unwrap();
    assert_eq!(r.channel, "generic");
    assert!(r.bound.is_none());
    assert!(r.final_iterate.f > 0.3 && r.final_iterate.f < 0.4, "{r:?}");

    // The concave runner needs a curvature modulus; the floored one does not.
    let out = run(&cfg, &["algorithm=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("strong-concavity"), "{}", stderr(&out));
    let out = run(&cfg, &["algorithm=1", "m=0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(Report::from_json(&stdout(&out)).unwrap().bound.is_some());
    let bad = write_config(dir.path(), "h.toml", "channel = \"generic\"\ninput = \"rll\"\n");
    let out = run(&bad, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("state_matrix"), "{}", stderr(&out));
}

#[test]
fn algorithm3_requires_b() {
    let e = execute(&RunConfig::parse("channel = \"bec\"\nalgorithm = 3\n", &[]).unwrap()).unwrap_err();
    assert_eq!(e.exit_code(), 1);
    assert!(e.to_string().contains("requires b"));
}

#[test]
fn bounds_flags_order_gain() {
    let out = bin().args(["bounds", "--channel", "bec"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("order gain demonstrated"), "{s}");

    let out = bin().args(["bounds", "--channel", "noiseless"]).output().unwrap();
    let s = stdout(&out);
    assert!(s.contains("order gain demonstrated"), "{s}");
    assert!(s.contains("Shannon capacity: 0.56239"), "{s}");
}

#[test]
fn bounds_sweep_has_points_without_gain() {
    let mut flags = Vec::new();
    for p in [0.1, 0.3, 0.6] {
        let out = bin()
            .args(["bounds", "--channel", "noiseless", "--p", &p.to_string(), "--q", &p.to_string()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        flags.push(stdout(&out).contains("order gain demonstrated"));
    }
    assert!(flags.contains(&false), "{flags:?}");
}

#[test]
fn oracle_examples() {
    let check = |src: &str, n: &str| {
        let out = bin().args(["oracle", "--source", src, "--n", n]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let s = stdout(&out);
        let get = |label: &str| -> f64 {
            s.lines()
                .find_map(|l| l.strip_prefix(label))
                .unwrap()
                .trim()
                .parse()
                .unwrap()
        };
        (get("forward:"), get("brute force:"), get("difference:"))
    };
    let (_, _, d) = check("ge-error", "6");
    assert!(d < 1e-12);
    let (a, b, _) = check("coin", "4");
    assert!((a - std::f64::consts::LN_2).abs() < 1e-14 && (b - std::f64::consts::LN_2).abs() < 1e-14);
    let (a, b, _) = check("deterministic", "5");
    assert_eq!((a, b), (0.0, 0.0));

    let out = bin().args(["oracle", "--source", "coin", "--n", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table_fixture_ge() {
    let out = bin().args(["table", "--fixture", "ge"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert_eq!(s.lines().count(), 11);
    assert!(s.starts_with("k,theta,f_value,published_theta,published_f\n"));
    assert_eq!(bin().args(["table", "--fixture", "nope"]).output().unwrap().status.code(), Some(1));
}

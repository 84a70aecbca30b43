use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmertens"))
        .args(args)
        .env_remove("FFMERTENS_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ffmertens-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn primes_count_and_list() {
    let o = run(&["primes", "--q", "2", "--degree", "4", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["count"], "3");
    let o = run(&["primes", "--q", "2", "--degree", "2", "--list", "--format", "text"]);
    assert_eq!(stdout(&o), "t^2+t+1\n");
    let o = run(&["primes", "--q", "3", "--degree", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree >= 1 required"));
}

#[test]
fn chars_tables() {
    let o = run(&["chars", "--q", "2", "--Q", "t^2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["characters"].as_array().unwrap().len(), 2);
    assert_eq!(v["orthogonality"]["pass"], true);
    let v = json(&run(&["chars", "--q", "3", "--Q", "t"]));
    assert_eq!(v["phi"], 2);
    assert_eq!(v["characters"][1]["values"][1][0], -1.0);
    assert_eq!(run(&["chars", "--q", "3", "--Q", "2*t+1"]).status.code(), Some(2));
}

#[test]
fn lpoly_zeros_rhcheck() {
    let v = json(&run(&["lpoly", "--q", "2", "--Q", "t^2", "--char", "chi[1]"]));
    assert_eq!(v[0]["coeffs"], serde_json::json!([[1.0, 0.0], [-1.0, 0.0]]));
    let o = run(&["zeros", "--q", "2", "--Q", "t^2", "--char", "chi[0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
    let v = json(&run(&["zeros", "--q", "2", "--Q", "t^2"]));
    assert_eq!(v[0]["zeros"][0]["class"], "trivial");
    let o = run(&["rhcheck", "--q", "2", "--maxdegQ", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["anomalies"].as_array().unwrap().len(), 0);
    assert_eq!(v["moduli"], 126);
}

#[test]
fn anomalies_exit_with_one() {
    // an absurdly tight classification tolerance turns rounding into anomalies
    let o = run(&["rhcheck", "--q", "3", "--Q", "t^4+t+2", "--zero-tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json(&o)["anomalies"].as_array().unwrap().is_empty());
}

#[test]
fn mertens_constant_verify() {
    let v = json(&run(&["mertens", "--q", "2", "--Q", "t^2", "--A0", "t+1", "--n", "12"]));
    let p = &v[0];
    assert_eq!(p["n"], 12);
    let (prod, log) = (p["product"].as_f64().unwrap(), p["log_product"].as_f64().unwrap());
    assert!((prod - log.exp()).abs() < 1e-15);

    let o = run(&["constant", "--q", "2", "--Q", "t^2", "--A0", "1", "--methods", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let c = &json(&o)[0]["C"];
    let l = c["via_L"].as_f64().unwrap();
    for other in [&c["via_euler"]["value"], &c["via_limit"]["extrapolated"]] {
        assert!((other.as_f64().unwrap() / l - 1.0).abs() < 1e-3);
    }

    let o = run(&["verify", "--q", "2", "--Q", "t^2", "--A0", "all", "--n", "4..20"]);
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["points"].as_array().unwrap().len(), 17);
    // the raw residual decays like 1/n, so the q^{-n/2} fit fails
    assert_eq!(v[0]["fit"]["pass"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors() {
    for args in [
        &["mertens", "--q", "2", "--A0", "1", "--n", "3"][..],
        &["mertens", "--q", "2", "--Q", "t^2", "--A0", "t", "--n", "3"],
        &["verify", "--q", "2", "--Q", "t^2", "--A0", "1", "--n", "5"],
        &["constant", "--q", "6", "--Q", "t", "--A0", "1"],
        &["rhcheck", "--q", "2"],
        &["kappa"],
        &["primes", "--q", "2", "--degree", "40", "--list"],
        &["zeros", "--q", "2", "--Q", "t^2", "--roots", "newton"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_columns_are_fixed() {
    let o = run(&["verify", "--q", "2", "--Q", "t^2+t+1", "--A0", "t", "--n", "6..9", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Q,A0,n,product,residual,harmonic_residual"));
    assert_eq!(lines.count(), 4);
    let o = run(&["mertens", "--q", "3", "--Q", "t", "--A0", "all", "--n", "1..2", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("Q,A0,n,product,log_product,prime_count\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn output_is_byte_identical_and_mode_independent() {
    let args = ["verify", "--q", "3", "--Q", "t^2+1", "--A0", "all", "--n", "3..9"];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn config_roundtrip_and_replay() {
    let dir = scratch("config");
    let args = ["constant", "--q", "3", "--Q", "t^2+1", "--A0", "t", "--methods", "L,euler", "--cutoff", "9"];
    let mut printing = args.to_vec();
    printing.push("--print-config");
    let cfg = run(&printing);
    assert_eq!(cfg.status.code(), Some(0));
    let path = dir.join("run.json");
    std::fs::write(&path, &cfg.stdout).unwrap();
    let replay = run(&["constant", "--config", path.to_str().unwrap(), "--print-config"]);
    assert_eq!(replay.stdout, cfg.stdout);
    let direct = run(&args);
    let replayed = run(&["constant", "--config", path.to_str().unwrap()]);
    assert_eq!(direct.stdout, replayed.stdout);
    assert!(json(&direct)[0]["C"]["via_limit"].is_null());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cache_directory_from_environment() {
    let dir = scratch("cache");
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_ffmertens"))
            .args(["primes", "--q", "3", "--degree", "5", "--list"])
            .env("FFMERTENS_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = go();
    let file = dir.join("irreducibles-3-1.txt");
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("ffmertens-irreducibles v1\n"));
    assert_eq!(go().stdout, first.stdout);
    std::fs::write(&file, "ffmertens-irreducibles v1\nfield 3 1 -\ndegree 5 2\n1 2\n").unwrap();
    assert_eq!(go().status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn output_file_and_text_kappa() {
    let dir = scratch("out");
    let path = dir.join("kappa.json");
    let o = run(&["kappa", "--q", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!((v["kappa_q"].as_f64().unwrap() - 0.3891740580330294).abs() < 1e-13);
    assert!(v["rel_gap"].as_f64().unwrap().abs() < 1e-4);
    std::fs::remove_dir_all(dir).unwrap();
}

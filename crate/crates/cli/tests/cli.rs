use std::path::Path;
use std::process::{Command, Output};

fn n4char(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_n4char"))
        .args(args)
        .env("N4CHAR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_trivial_character_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["expand", "--M", "1", "--j", "1/2", "--sector", "NS", "--sign", "+"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0]["q"].as_i64(), terms[0]["x"].as_i64()), (Some(0), Some(0)));
    assert_eq!((terms[0]["re"].as_str(), terms[0]["im"].as_str()), (Some("1/1"), Some("0/1")));
}

#[test]
fn expand_leading_terms() {
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["expand", "--M", "2", "--j", "1/2", "--sector", "NS", "--sign", "+", "--q-order", "5/8", "--format", "text"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("q^-1/8 : 1 x^-1/2 + 1 x^-5/2"), "{text}");

    let o = n4char(&["expand", "--M", "2", "--j", "0", "--sector", "R", "--sign", "+", "--q-order", "1/2", "--format", "text"], dir.path());
    assert!(stdout(&o).starts_with("q^0 : 1\n"), "{}", stdout(&o));
}

#[test]
fn expand_is_byte_deterministic_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["expand", "--M", "3", "--j", "-1/2", "--sector", "NS", "--sign", "-", "--q-order", "3"];
    let cold = n4char(&args, dir.path());
    let warm = n4char(&args, dir.path());
    let mut uncached_args = args.to_vec();
    uncached_args.push("--no-cache");
    let uncached = n4char(&uncached_args, dir.path());
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "one cache entry, no leftover temporaries");
}

#[test]
fn invalid_index_is_a_usage_error_listing_admissible_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["expand", "--M", "2", "--j", "3/2", "--sector", "NS", "--sign", "+"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("-1/2") && err.contains("1/2"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["expand", "--M", "2", "--j", "x", "--sector", "NS", "--sign", "+"],
        vec!["expand", "--M", "2", "--j", "1/2", "--sector", "Q", "--sign", "+"],
        vec!["table", "--M", "0..2"],
        vec!["verify", "--suite", "nope"],
        vec!["transform", "--M", "2", "--which", "U"],
        vec!["frobnicate"],
    ] {
        assert_eq!(n4char(&args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_m2_rows() {
    let dir = tempfile::tempdir().unwrap();
    let ns = stdout(&n4char(&["table", "--M", "2"], dir.path()));
    assert_eq!(
        ns,
        "M,sector,j,heart,k1,k2,c,h,s\n2,NS,1/2,I,0,1,-3/1,-1/4,-1/2\n2,NS,-1/2,III,0,1,-3/1,-1/4,-3/2\n"
    );
    let r = stdout(&n4char(&["table", "--M", "2", "--twisted"], dir.path()));
    let rows: Vec<&str> = r.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.contains(&"2,R,0/1,I,0,1,-3/1,-1/8,0/1"), "{r}");
    assert!(rows.contains(&"2,R,1/1,III,0,1,-3/1,3/8,1/1"), "{r}");
}

#[test]
fn table_m1_rows_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["table", "--M", "1", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0]["j"].as_str(), rows[0]["h"].as_str(), rows[0]["s"].as_str()), (Some("1/2"), Some("0/1"), Some("0/1")));
    let a = n4char(&["table", "--M", "1..5", "--twisted"], dir.path());
    let b = n4char(&["table", "--M", "1..5", "--twisted"], dir.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["verify", "--suite", "reduction"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")), "{text}");
    assert!(text.contains("0 failed"));

    let o = n4char(&["verify", "--suite", "theta", "--q-order", "6", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["suite"], "theta");
    assert_eq!(v[0]["config"]["q_order"], "6/1");
}

#[test]
fn verify_failure_exits_1() {
    // A tolerance of zero cannot be met by any numeric residual.
    let dir = tempfile::tempdir().unwrap();
    let o = n4char(&["verify", "--suite", "psi", "--tol", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn transform_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = n4char(&["transform", "--M", "1", "--which", "S", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["passes"], true);

    let a = n4char(&["transform", "--M", "2", "--which", "T", "--statement", "2"], dir.path());
    let b = n4char(&["transform", "--M", "2", "--which", "T", "--statement", "2"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let o = n4char(&["transform", "--M", "2", "--which", "S", "--tol", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn transform_rejects_too_few_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    std::fs::write(&pts, "[[0.1, 0.9, 0.13, 0.0]]").unwrap();
    let o = n4char(&["transform", "--M", "2", "--which", "S", "--points", pts.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

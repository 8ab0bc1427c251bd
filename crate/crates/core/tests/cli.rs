use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simplex-geom"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv(o: &Output, key: &str) -> Option<String> {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_owned))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("simplex-geom-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_after_construct_returns_the_requested_tag() {
    let dir = scratch("construct");
    let cases = [
        ("c1", "C1"),
        ("c2", "C2"),
        ("c3", "C3"),
        ("c4", "C4"),
        ("non-centered", "NON_CENTERED"),
        ("hyperplane-complement", "C1"),
    ];
    for (kind, tag) in cases {
        let out = run(&[
            "construct",
            kind,
            "--format",
            "kv",
            "--out-dir",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{kind}");
        assert_eq!(kv(&out, "tag").as_deref(), Some(tag));
        let file = dir.join(format!("{}.incidence", kind.replace('-', "_")));
        let out = run(&["classify", file.to_str().unwrap(), "--format", "kv"]);
        assert!(
            out.status.success(),
            "{kind}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(kv(&out, "tag").as_deref(), Some(tag), "{kind}");
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn construct_c1_matches_fixture_bit_for_bit() {
    let dir = scratch("c1");
    let out = run(&[
        "construct",
        "c1",
        "--hadamard-style",
        "binary",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for ext in ["hadamard", "incidence"] {
        let made = std::fs::read_to_string(dir.join(format!("c1.{ext}"))).unwrap();
        let fixed = std::fs::read_to_string(fixtures().join(format!("c1.{ext}"))).unwrap();
        assert_eq!(made, fixed, "{ext}");
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn classify_fixtures() {
    let dir = fixtures();
    for (name, tag, centers) in [("c2", "C2", "3"), ("non_centered", "NON_CENTERED", "0")] {
        let out = run(&[
            "classify",
            name,
            "--fixture-dir",
            dir.to_str().unwrap(),
            "--format",
            "kv",
        ]);
        assert!(out.status.success());
        assert_eq!(kv(&out, "tag").as_deref(), Some(tag));
        assert_eq!(kv(&out, "centers").as_deref(), Some(centers));
    }
    let out = run(&[
        "classify",
        "c1",
        "--fixture-dir",
        dir.to_str().unwrap(),
        "--format",
        "kv",
    ]);
    assert_eq!(kv(&out, "group_order").as_deref(), Some("20160"));
    assert_eq!(kv(&out, "block_orbits").as_deref(), Some("1"));
    assert_eq!(kv(&out, "flag_orbits").as_deref(), Some("1"));
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let zeros = dir.join("zeros.incidence");
    std::fs::write(&zeros, "000000000000000\n".repeat(15)).unwrap();
    let out = run(&["classify", zeros.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("block"));

    let garbage = dir.join("garbage.incidence");
    std::fs::write(&garbage, "01x\n").unwrap();
    assert_eq!(
        run(&["classify", garbage.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["classify", dir.join("missing").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert!(!run(&["construct", "c7"]).status.success());
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn isomorphic_reports() {
    let dir = scratch("iso");
    let fx = fixtures();
    let relabeled = run(&[
        "relabel",
        fx.join("c1.incidence").to_str().unwrap(),
        "--seed",
        "9",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(relabeled.status.success());
    let moved = dir.join("relabel.incidence");
    let out = run(&[
        "isomorphic",
        fx.join("c1.incidence").to_str().unwrap(),
        moved.to_str().unwrap(),
        "--format",
        "kv",
    ]);
    assert_eq!(kv(&out, "isomorphic").as_deref(), Some("true"));

    let out = run(&[
        "isomorphic",
        "c3",
        "c4",
        "--fixture-dir",
        fx.to_str().unwrap(),
        "--format",
        "kv",
    ]);
    assert!(out.status.success());
    assert_eq!(kv(&out, "isomorphic").as_deref(), Some("false"));

    run(&[
        "construct",
        "hyperplane-complement",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let hc = dir.join("hyperplane_complement.incidence");
    let out = run(&[
        "isomorphic",
        "c1",
        hc.to_str().unwrap(),
        "--fixture-dir",
        fx.to_str().unwrap(),
        "--format",
        "kv",
    ]);
    assert_eq!(kv(&out, "isomorphic").as_deref(), Some("true"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn sorted_output_is_reproducible() {
    for args in [
        vec!["construct", "c4", "--sorted"],
        vec!["census", "--limit", "3", "--sorted", "--format", "kv"],
        vec!["enumerate", "--k", "3", "--sorted"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(stdout(&a), stdout(&b));
        assert!(!stdout(&a).contains("elapsed"));
    }
}

#[test]
fn census_slice_tallies_follow_the_spectrum() {
    let out = run(&["census", "--limit", "4", "--format", "kv"]);
    assert!(out.status.success());
    // 4 plane pairs times the per-pair spectrum 1344/2352/1176/168
    for (key, per_pair) in [
        ("index_0", 1344),
        ("index_1", 2352),
        ("index_3", 1176),
        ("index_7", 168),
    ] {
        assert_eq!(kv(&out, key), Some((4 * per_pair).to_string()), "{key}");
    }
    assert_eq!(kv(&out, "distinct_cliques").as_deref(), Some("20160"));
    assert_eq!(kv(&out, "index_7_all_singular").as_deref(), Some("true"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TRIANGLE: &str = "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n";
const C6: &str = "p edge 6 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 1 6\n";
// double-satisfiable: x1 = x4 = true, x2 = x5 = false
const DSAT: &str = "p cnf 5 3\n1 2 3 -4 -5 0\n-1 -2 -3 4 5 0\n1 -2 3 -4 5 0\n";
// x5 must be false for the first clause and true for the second
const DSAT_NO: &str = "p cnf 5 2\n1 2 3 4 -5 0\n-1 -2 -3 -4 5 0\n";

fn clubcover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clubcover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tri.graph"), TRIANGLE).unwrap();
    fs::write(dir.path().join("c6.graph"), C6).unwrap();
    fs::write(dir.path().join("dsat.cnf"), DSAT).unwrap();
    fs::write(dir.path().join("dsat_no.cnf"), DSAT_NO).unwrap();
    dir
}

#[test]
fn help_mentions_one_indexing() {
    let dir = setup();
    let o = clubcover(dir.path(), &["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1-indexed"));
    let o = clubcover(dir.path(), &["solve", "--help"]);
    assert!(stdout(&o).contains("1-indexed"));
}

#[test]
fn greedy_on_c6_and_verify() {
    let dir = setup();
    let o = clubcover(
        dir.path(),
        &[
            "solve",
            "--graph",
            "c6.graph",
            "--algo",
            "greedy",
            "--s",
            "2",
            "--out",
            "c6.cover.json",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let cover = fs::read_to_string(dir.path().join("c6.cover.json")).unwrap();
    assert_eq!(
        cover,
        "{\"s\":2,\"sets\":[[1,2,6],[3,4,5]],\"centers\":[1,4]}\n"
    );
    let report = String::from_utf8_lossy(&o.stderr);
    assert!(report.contains("\"cover_size\":2"));

    let o = clubcover(
        dir.path(),
        &["verify", "--graph", "c6.graph", "--cover", "c6.cover.json"],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ok\n");

    fs::write(dir.path().join("bad.json"), "{\"s\":2,\"sets\":[[1,4]]}").unwrap();
    let o = clubcover(
        dir.path(),
        &["verify", "--graph", "c6.graph", "--cover", "bad.json"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no\n");
}

#[test]
fn exact_solve_and_report_file() {
    let dir = setup();
    let o = clubcover(
        dir.path(),
        &[
            "solve", "--graph", "c6.graph", "--algo", "exact", "--s", "3", "--report", "r.jsonl",
        ],
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"s\":3"));
    let o = clubcover(
        dir.path(),
        &[
            "solve", "--graph", "c6.graph", "--algo", "exact", "--s", "3", "--report", "r.jsonl",
        ],
    );
    assert!(o.status.success());
    let lines = fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 2);
    assert!(lines.contains("\"solver\":\"exact\""));
}

#[test]
fn greedy_rejects_s3() {
    let dir = setup();
    let o = clubcover(dir.path(), &["solve", "--graph", "c6.graph", "--s", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_triangle_and_round_trip() {
    let dir = setup();
    let o = clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "cp-cover2",
            "--input",
            "tri.graph",
            "--out",
            "img",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let graph = fs::read_to_string(dir.path().join("img.graph")).unwrap();
    assert!(graph.starts_with("p edge 6 9\n"));
    let labels = fs::read_to_string(dir.path().join("img.labels")).unwrap();
    assert!(labels.contains("# construction: cp-cover2"));
    assert!(labels.contains("4\twp:1,2"));

    let o = clubcover(
        dir.path(),
        &[
            "check-lemmas",
            "--graph",
            "img.graph",
            "--labels",
            "img.labels",
        ],
    );
    assert!(o.status.success());

    fs::write(dir.path().join("part.json"), "{\"parts\":[[1,2],[3]]}").unwrap();
    let common = [
        "--construction",
        "cp-cover2",
        "--source",
        "tri.graph",
        "--image",
        "img.graph",
        "--labels",
        "img.labels",
    ];
    let mut args = vec![
        "map-solution",
        "--direction",
        "forward",
        "--solution",
        "part.json",
        "--out",
        "img.cover.json",
    ];
    args.extend(common);
    assert!(clubcover(dir.path(), &args).status.success());
    let o = clubcover(
        dir.path(),
        &[
            "verify",
            "--graph",
            "img.graph",
            "--cover",
            "img.cover.json",
        ],
    );
    assert_eq!(stdout(&o), "ok\n");

    let mut args = vec![
        "map-solution",
        "--direction",
        "back",
        "--solution",
        "img.cover.json",
    ];
    args.extend(common);
    let o = clubcover(dir.path(), &args);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"parts\":[[1,2],[3]]}\n");
}

#[test]
fn provenance_and_usage_errors_exit_2() {
    let dir = setup();
    clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "cp-cover2",
            "--input",
            "tri.graph",
            "--out",
            "img",
        ],
    );
    fs::write(
        dir.path().join("cov.json"),
        "{\"s\":2,\"sets\":[[1,2,3,4,5,6]]}",
    )
    .unwrap();
    let base = [
        "map-solution",
        "--direction",
        "back",
        "--image",
        "img.graph",
        "--labels",
        "img.labels",
        "--solution",
        "cov.json",
    ];

    let mut args = base.to_vec();
    args.extend(["--construction", "cp-cover2", "--source", "c6.graph"]);
    assert_eq!(clubcover(dir.path(), &args).status.code(), Some(2));

    let mut args = base.to_vec();
    args.extend([
        "--construction",
        "cp-cover3-pendant",
        "--source",
        "tri.graph",
    ]);
    assert_eq!(clubcover(dir.path(), &args).status.code(), Some(2));

    let o = clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "nope",
            "--input",
            "tri.graph",
            "--out",
            "x",
        ],
    );
    assert_eq!(o.status.code(), Some(2));

    fs::write(dir.path().join("loop.graph"), "p edge 2 1\ne 1 1\n").unwrap();
    let o = clubcover(dir.path(), &["solve", "--graph", "loop.graph"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn invalid_solution_answers_no() {
    let dir = setup();
    clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "cp-cover2",
            "--input",
            "c6.graph",
            "--out",
            "img",
        ],
    );
    // 1 and 3 are not adjacent in C6
    fs::write(
        dir.path().join("part.json"),
        "{\"parts\":[[1,3],[2],[4],[5],[6]]}",
    )
    .unwrap();
    let o = clubcover(
        dir.path(),
        &[
            "map-solution",
            "--construction",
            "cp-cover2",
            "--direction",
            "forward",
            "--source",
            "c6.graph",
            "--image",
            "img.graph",
            "--labels",
            "img.labels",
            "--solution",
            "part.json",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no\n");
}

#[test]
fn dsat_image_oracle_and_mappings() {
    let dir = setup();
    let o = clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "dsat5-cover32",
            "--input",
            "dsat.cnf",
            "--out",
            "d",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let o = clubcover(
        dir.path(),
        &[
            "oracle",
            "--problem",
            "cover",
            "--s",
            "3",
            "--h",
            "2",
            "--graph",
            "d.graph",
        ],
    );
    assert!(o.status.success());
    fs::write(dir.path().join("w.json"), stdout(&o)).unwrap();

    let o = clubcover(
        dir.path(),
        &[
            "map-solution",
            "--construction",
            "dsat5-cover32",
            "--direction",
            "back",
            "--source",
            "dsat.cnf",
            "--image",
            "d.graph",
            "--labels",
            "d.labels",
            "--solution",
            "w.json",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    fs::write(dir.path().join("a.txt"), stdout(&o)).unwrap();

    let o = clubcover(
        dir.path(),
        &[
            "map-solution",
            "--construction",
            "dsat5-cover32",
            "--direction",
            "forward",
            "--source",
            "dsat.cnf",
            "--image",
            "d.graph",
            "--labels",
            "d.labels",
            "--solution",
            "a.txt",
            "--out",
            "fwd.json",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let o = clubcover(
        dir.path(),
        &["verify", "--graph", "d.graph", "--cover", "fwd.json"],
    );
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn dsat_image_of_unsatisfiable_instance_answers_no() {
    let dir = setup();
    let o = clubcover(
        dir.path(),
        &["oracle", "--problem", "double-sat", "--cnf", "dsat_no.cnf"],
    );
    assert_eq!(o.status.code(), Some(1));
    clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "dsat5-cover32",
            "--input",
            "dsat_no.cnf",
            "--out",
            "d",
        ],
    );
    let o = clubcover(
        dir.path(),
        &[
            "oracle",
            "--problem",
            "cover",
            "--s",
            "3",
            "--h",
            "2",
            "--graph",
            "d.graph",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no\n");
}

#[test]
fn sat3_reduction_mappings() {
    let dir = setup();
    fs::write(
        dir.path().join("f3.cnf"),
        "p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n",
    )
    .unwrap();
    let o = clubcover(
        dir.path(),
        &[
            "reduce",
            "--construction",
            "sat3-dsat5",
            "--input",
            "f3.cnf",
            "--out",
            "f5",
        ],
    );
    assert!(o.status.success());
    let f5 = fs::read_to_string(dir.path().join("f5.cnf")).unwrap();
    assert!(f5.starts_with("p cnf 7 4\n"));
    fs::write(dir.path().join("a3.txt"), "v 1 2 3 0\n").unwrap();
    let o = clubcover(
        dir.path(),
        &[
            "map-solution",
            "--construction",
            "sat3-dsat5",
            "--direction",
            "forward",
            "--source",
            "f3.cnf",
            "--image",
            "f5.cnf",
            "--solution",
            "a3.txt",
            "--out",
            "a5.txt",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let o = clubcover(
        dir.path(),
        &[
            "map-solution",
            "--construction",
            "sat3-dsat5",
            "--direction",
            "back",
            "--source",
            "f3.cnf",
            "--image",
            "f5.cnf",
            "--solution",
            "a5.txt",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o), "v 1 2 3 0\n");
}

#[test]
fn gen_is_deterministic_and_planted_cover_verifies() {
    let dir = setup();
    let a = stdout(&clubcover(
        dir.path(),
        &[
            "gen", "--kind", "gnp", "--n", "12", "--p", "0.3", "--seed", "5",
        ],
    ));
    let b = stdout(&clubcover(
        dir.path(),
        &[
            "gen", "--kind", "gnp", "--n", "12", "--p", "0.3", "--seed", "5",
        ],
    ));
    assert_eq!(a, b);
    assert!(a.starts_with("p edge 12 "));
    let o = clubcover(
        dir.path(),
        &[
            "gen", "--kind", "planted", "--n", "15", "--k", "3", "--seed", "2", "--out", "pl.graph",
        ],
    );
    assert!(o.status.success());
    let o = clubcover(
        dir.path(),
        &[
            "verify",
            "--graph",
            "pl.graph",
            "--cover",
            "pl.graph.cover.json",
        ],
    );
    assert_eq!(stdout(&o), "ok\n");
    let o = clubcover(dir.path(), &["gen", "--kind", "gnp", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_appends_json_lines() {
    let dir = setup();
    for _ in 0..2 {
        let o = clubcover(
            dir.path(),
            &[
                "bench",
                "--sizes",
                "6,8",
                "--seeds",
                "2",
                "--threads",
                "2",
                "--out",
                "b.jsonl",
            ],
        );
        assert!(o.status.success());
    }
    let text = fs::read_to_string(dir.path().join("b.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 2 * 2 * 2 * 2);
    assert!(text.lines().all(|l| l.starts_with("{\"digest\":")));
}

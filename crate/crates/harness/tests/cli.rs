use std::process::{Command, Output};

use nsplit_harness::csv_io;

fn nsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsplit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_methods_prints_the_catalog() {
    let o = nsplit(&["list-methods", "--n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = |id: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(id))
            .unwrap()
            .to_string()
    };
    let clt3: Vec<String> = line("clt3").split_whitespace().map(String::from).collect();
    assert_eq!(&clt3[2..], ["3", "4", "true"]);
    assert!(line("cstrang3").split_whitespace().nth(3) == Some("7"));
}

#[test]
fn verify_order_exit_statuses() {
    let o = nsplit(&["verify-order", "--method", "clt2", "--n", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    let o = nsplit(&["verify-order", "--method", "lt-4", "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("5.000e-1"));

    let o = nsplit(&["verify-order", "--method", "cstrang3", "--n", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("empirical order"));

    let o = nsplit(&["verify-order", "--method", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown method"));
}

#[test]
fn verify_order_reads_table_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, nsplit_harness::catalog::build("clt3", 3).unwrap().to_json()).unwrap();
    let o = nsplit(&["verify-order", "--table", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));

    // a document that claims more than it delivers
    let mut doc = nsplit_harness::catalog::build("strang", 3).unwrap().to_document();
    doc.design_order = 3;
    std::fs::write(&path, doc.to_json()).unwrap();
    let o = nsplit(&["verify-order", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bch_check_reports_ratios() {
    let o = nsplit(&["bch-check", "--n", "3", "--dim", "3", "--seed", "11"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: PASS"));
    let o = nsplit(&["bch-check", "--n", "2", "--dim", "3"]);
    assert!(o.status.success());
}

#[test]
fn convergence_writes_deterministic_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "convergence",
        "--problem",
        "complex-ode",
        "--methods",
        "strang,clt2",
        "--dt0",
        "0.0625",
        "--rungs",
        "3",
        "--ode.t_final",
        "5",
        "--set",
        "ode.samples=5",
        "--out",
        out,
    ];
    let o = nsplit(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv_path = dir.path().join("convergence-complex-ode.csv");
    let first = csv_io::read(&csv_path).unwrap();
    assert_eq!(first.rows.len(), 6);
    assert_eq!(first.methods(), vec!["clt2", "strang"]);
    let svg = std::fs::read_to_string(dir.path().join("convergence-complex-ode.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);

    assert!(nsplit(&args).status.success());
    let strip = |mut r: nsplit_harness::StudyResult| {
        r.rows.iter_mut().for_each(|row| row.wall_seconds = 0.0);
        csv_io::to_csv(&r).unwrap()
    };
    assert_eq!(strip(first), strip(csv_io::read(&csv_path).unwrap()));

    let svg_out = dir.path().join("again.svg");
    let o = nsplit(&["render", csv_path.to_str().unwrap(), "--out", svg_out.to_str().unwrap()]);
    assert!(o.status.success());
    let again = std::fs::read_to_string(&svg_out).unwrap();
    let o = nsplit(&["render", csv_path.to_str().unwrap(), "--out", svg_out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(again, std::fs::read_to_string(&svg_out).unwrap());
}

#[test]
fn config_file_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.toml");
    std::fs::write(
        &cfg,
        "problem = \"complex-ode-real\"\nmethods = [\"clt2\"]\ndt0 = 0.125\nrungs = 2\n[ode]\nt_final = 2.0\nsamples = 2\n",
    )
    .unwrap();
    let o = nsplit(&[
        "work-precision",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = csv_io::read(&dir.path().join("work-precision-complex-ode-real.csv")).unwrap();
    assert_eq!(r.n_operators, 3);
    assert_eq!(r.rows[1].rhs_evals_total, 2 * r.rows[0].rhs_evals_total);

    let o = nsplit(&["convergence", "--methods", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nsplit(&["convergence", "--sub", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "method,dt,error,rhs_evals_total,rhs_evals_op1,wall_seconds\n").unwrap();
    let o = nsplit(&["render", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

use std::path::Path;
use std::process::{Command, Output};

fn qarith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qarith")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const HEADER: &str = "op_class,algorithm,n,logical_qubits,t_count,toffoli_count,cnot_count,rotation_count,depth,t_depth,code_distance,physical_qubits,runtime_seconds,num_factories";

#[test]
fn list_is_stable_and_complete() {
    let a = qarith(&["list"]);
    assert!(a.status.success());
    let text = stdout(&a);
    assert!(text.lines().any(|l| l.starts_with("inplace_adder\tTTK\t")));
    assert!(text.lines().any(|l| l.starts_with("divider\tNonRestoring+Gidney\t")));
    assert_eq!(text, stdout(&qarith(&["list"])));
}

#[test]
fn verify_examples_pass() {
    let o = qarith(&["verify", "--op-class", "inplace_adder", "--algo", "TTK", "--n-max", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().last().unwrap().starts_with("PASS inplace_adder/TTK n=5 (1024 cases)"), "{}", stdout(&o));
    let o = qarith(&["verify", "--op-class", "divider", "--algo", "Restoring+TTK", "--n-max", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n=4 (240 cases)"));
    let o = qarith(&["verify", "--op-class", "modexp", "--algo", "LYYWindowed(2)", "--n-max", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qarith(&["verify", "--op-class", "inplace_adder", "--algo", "Nope", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(qarith(&["verify", "--op-class", "modexp", "--algo", "LYY", "--n-max", "30"]).status.code(), Some(2));
    assert_eq!(qarith(&["sweep", "--op-class", "inplace_adder"]).status.code(), Some(2));
    assert_eq!(qarith(&["bogus"]).status.code(), Some(2));
    let o = qarith(&["sweep", "--op-class", "inplace_adder", "--algo", "TTK", "--n-min", "3", "--n-max", "8", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adder.csv");
    let p = path.to_str().unwrap();
    let args = ["sweep", "--op-class", "inplace_adder", "--algo", "CDKM", "--n-min", "3", "--n-max", "64", "--out", p];
    assert!(qarith(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(qarith(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let grid = qarith::analysis::log_grid(3, 64).unwrap();
    assert_eq!(rows.len(), grid.len());
    let t: Vec<u64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[0] <= w[1]));

    let fit = qarith(&["fit", "--input", p, "--mode", "slope"]);
    assert!(fit.status.success());
    assert!(stdout(&fit).starts_with("inplace_adder/CDKM\tslope "));
}

#[test]
fn json_sweep_mirrors_csv() {
    let o = qarith(&["sweep", "--op-class", "subtractor", "--algo", "Gidney", "--n-min", "3", "--n-max", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for key in HEADER.split(',') {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}

fn write_csv(path: &Path, rows: &[(u64, u64)]) {
    let mut s = format!("{HEADER}\n");
    for (n, t) in rows {
        s.push_str(&format!("x,y,{n},1,{t},0,0,0,1,1,3,1,1.0,1\n"));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn fit_exact_power_law_to_six_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pl.csv");
    write_csv(&path, &[(2, 4), (4, 16), (8, 64)]);
    let o = qarith(&["fit", "--input", path.to_str().unwrap(), "--mode", "slope"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("slope 2.000000"), "{}", stdout(&o));
    std::fs::write(&path, "not,a,sweep\n1,2,3\n").unwrap();
    assert_eq!(qarith(&["fit", "--input", path.to_str().unwrap(), "--mode", "slope"]).status.code(), Some(2));
    write_csv(&path, &[(2, 4), (4, 16)]);
    assert_eq!(qarith(&["fit", "--input", path.to_str().unwrap(), "--mode", "slope"]).status.code(), Some(2));
}

#[test]
fn tipping_from_multiplier_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mul.csv");
    let p = path.to_str().unwrap();
    let o = qarith(&["sweep", "--op-class", "multiplier", "--algo", "Schoolbook,Karatsuba(8)", "--n-min", "8", "--n-max", "1024", "--grid", "pow2", "--out", p]);
    assert!(o.status.success());
    let fit = qarith(&["fit", "--input", p, "--mode", "tipping"]);
    assert!(fit.status.success());
    let text = stdout(&fit);
    assert!(text.contains("multiplier/Karatsuba(8) below multiplier/Schoolbook: 256"), "{text}");
    assert!(text.contains("multiplier/Schoolbook below multiplier/Karatsuba(8): none"), "{text}");
}

#[test]
fn window_fit_near_rule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("win.csv");
    let p = path.to_str().unwrap();
    let o = qarith(&["sweep", "--op-class", "modexp", "--algo", "LYYWindowed(2..14)", "--n-min", "32", "--n-max", "32", "--out", p]);
    assert!(o.status.success());
    let fit = qarith(&["fit", "--input", p, "--mode", "window"]);
    assert!(fit.status.success());
    let text = stdout(&fit);
    let line = text.lines().find(|l| l.starts_with("n 32")).unwrap();
    let w: i64 = line.split("predicted w ").nth(1).unwrap().split('\t').next().unwrap().parse().unwrap();
    assert!((w - 10).abs() <= 3, "{text}");
}

#[test]
fn pareto_outputs() {
    let o = qarith(&["pareto", "--op-class", "multiplier", "--algo", "Schoolbook", "--n", "32"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert!(!rows.is_empty());
    let q: Vec<u64> = rows.iter().map(|r| r[11].parse().unwrap()).collect();
    let rt: Vec<f64> = rows.iter().map(|r| r[12].parse().unwrap()).collect();
    assert!(q.windows(2).all(|w| w[0] > w[1]));
    assert!(rt.windows(2).all(|w| w[0] < w[1]));

    let ratio = |algo: &str| {
        let o = qarith(&["pareto", "--op-class", "const_adder", "--algo", algo, "--n", "32"]);
        let rt: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(12).unwrap().parse().unwrap()).collect();
        rt.last().unwrap() / rt[0]
    };
    assert!(ratio("QFT") > ratio("ViaInPlace(Gidney)"));
}

#[test]
fn params_file_and_claims_subset() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.cfg");
    std::fs::write(&params, "p_phys = 2e-3\n").unwrap();
    let pp = params.to_str().unwrap();
    let hi = qarith(&["pareto", "--op-class", "inplace_adder", "--algo", "TTK", "--n", "16", "--params", pp]);
    let lo = qarith(&["pareto", "--op-class", "inplace_adder", "--algo", "TTK", "--n", "16"]);
    let d = |o: &Output| -> u32 { stdout(o).lines().nth(1).unwrap().split(',').nth(10).unwrap().parse().unwrap() };
    assert!(d(&hi) > d(&lo));

    let o = qarith(&["claims", "--only", "C03,C09", "--params", pp, "--format", "json"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(qarith(&["claims", "--only", "C99"]).status.code(), Some(2));

    std::fs::write(&params, "p_phys = 0.5\n").unwrap();
    assert_eq!(qarith(&["pareto", "--op-class", "inplace_adder", "--algo", "TTK", "--n", "4", "--params", pp]).status.code(), Some(2));
}

#[test]
fn zero_t_pareto_single_row() {
    // A 1-bit subtractor is CNOT and X only.
    let o = qarith(&["pareto", "--op-class", "subtractor", "--algo", "TTK", "--n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert!(text.lines().nth(1).unwrap().contains(",0,"));
}

//! Checked-in outputs; regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use knotcone::complex::is_isomorphic;
use knotcone::complex::split::split_acyclic;
use knotcone::complex::ChainComplex;
use knotcone::staircase::{cn_dual_model, cn_model, torus_alexander};
use knotcone::surgery::surgery_dual_complex;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden copy");
}

fn cli(args: &[&str]) -> String {
    let mut out = Vec::new();
    let code = knotcone::cli::run(std::iter::once("knotcone").chain(args.iter().copied()), &mut out, &mut Vec::new());
    assert_eq!(code, 0, "{args:?}");
    String::from_utf8(out).unwrap()
}

#[test]
fn t35_table() {
    golden("t35_dual_table.txt", &cli(&["surgery-dual", "--torus", "3", "5", "--reduced", "--table"]));
}

#[test]
fn cn_models() {
    for n in 1..=4 {
        let c = cn_model(n).unwrap();
        let d = cn_dual_model(n).unwrap();
        golden(&format!("c{n}.json"), &(c.to_json().unwrap() + "\n"));
        golden(&format!("c{n}_dual.json"), &(d.to_json().unwrap() + "\n"));
        let back = ChainComplex::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }
}

#[test]
fn conn_of_surgery_duals_matches_golden_models() {
    for n in 1..=3 {
        let sd = surgery_dual_complex(&torus_alexander(2, 4 * n - 1).unwrap());
        let conn = split_acyclic(&sd.complex).unwrap().conn;
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/c{n}_dual.json"));
        let model = ChainComplex::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert!(is_isomorphic(&conn, &model.shifted(-2 * n, -2 * n).unwrap()).unwrap(), "n = {n}");
    }
}

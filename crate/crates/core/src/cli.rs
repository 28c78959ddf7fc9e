//! Command-line driver. `run` returns the process exit code: 0 on success,
//! 1 when a computed check fails, 2 on usage errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::acceptance;
use crate::complex::split::{brute_force_connected, split_acyclic};
use crate::complex::ChainComplex;
use crate::concordance::{independence_certificate, inverse_saw_edge, model_product, saw_edge, verify_kcn_lemma};
use crate::invariants::invariants;
use crate::staircase::{staircase, torus_alexander, LSpaceKnotData};
use crate::surgery::{surgery_dual_complex, SurgeryDual};

#[derive(Parser, Debug)]
#[command(name = "knotcone", version, about = "Knot Floer complexes of L-space knots and their +1-surgery duals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct KnotSource {
    /// Torus knot T(p, q)
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
    torus: Option<Vec<i64>>,
    /// Alexander exponents 0 < n_1 < … < n_m (comma separated)
    #[arg(long, value_delimiter = ',')]
    exps: Option<Vec<i64>>,
}

impl KnotSource {
    fn data(&self) -> Result<LSpaceKnotData, String> {
        match (&self.torus, &self.exps) {
            (Some(t), _) => torus_alexander(t[0], t[1]).map_err(|e| e.to_string()),
            (_, Some(e)) => LSpaceKnotData::new(e.clone()).map_err(|e| e.to_string()),
            _ => Err("one of --torus or --exps is required".into()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Staircase complex of an L-space knot
    Staircase {
        #[command(flatten)]
        knot: KnotSource,
        /// Print filtration points and Maslov labels instead of the complex file
        #[arg(long)]
        picture: bool,
    },
    /// Complex of the +1-surgery dual knot
    SurgeryDual {
        #[command(flatten)]
        knot: KnotSource,
        /// The full mapping cone
        #[arg(long, conflicts_with_all = ["reduced", "conn"])]
        raw: bool,
        /// The reduced complex (default)
        #[arg(long, conflicts_with = "conn")]
        reduced: bool,
        /// The connected complex
        #[arg(long)]
        conn: bool,
        /// Human-readable table of the reduced complex
        #[arg(long)]
        table: bool,
    },
    /// τ, ν, ν′, ε
    Invariants {
        #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with_all = ["exps", "input"])]
        torus: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', conflicts_with = "input")]
        exps: Option<Vec<i64>>,
        /// Complex file
        #[arg(long)]
        input: Option<String>,
        /// Use the +1-surgery dual of the given knot
        #[arg(long, conflicts_with = "input")]
        dual: bool,
        /// Comma-separated subset of tau,nu,nu_prime,epsilon
        #[arg(long, value_delimiter = ',', default_value = "tau,nu,nu_prime,epsilon")]
        compute: Vec<String>,
    },
    /// Connected complex of a complex file
    Conn {
        #[arg(long)]
        input: String,
        /// Use the exhaustive self-local-equivalence search (≤ 9 generators)
        #[arg(long)]
        oracle: bool,
    },
    /// Tensor product of complex files and/or C_n models
    Tensor {
        /// Complex files
        inputs: Vec<String>,
        /// C_n factors
        #[arg(long, value_delimiter = ',')]
        ns: Vec<i64>,
        /// C_m* factors
        #[arg(long, value_delimiter = ',')]
        ms: Vec<i64>,
    },
    /// Saw-edge 𝔠(k, n) or its dual
    SawEdge {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        inverse: bool,
    },
    /// dim H_vert(conn(⊗C_n ⊗ ⊗C_m*))
    Independence {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ms: Vec<i64>,
    },
    /// Check the 𝔠(k, n) ⊗ C_ℓ decomposition
    VerifyLemma {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        l: i64,
    },
    /// Run the acceptance checks
    Verify {
        #[arg(long, required = true)]
        all: bool,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Check(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Check(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn read_complex(path: &str) -> Result<ChainComplex, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    ChainComplex::from_json(&text).map_err(|e| usage(format!("{path}: {e}")))
}

fn write_complex(out: &mut dyn Write, c: &ChainComplex) -> Result<(), Failure> {
    writeln!(out, "{}", c.to_json()?)?;
    Ok(())
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<bool, Failure> {
    match cmd {
        Cmd::Staircase { knot, picture } => {
            let st = staircase(&knot.data().map_err(usage)?);
            if picture {
                for (k, ((i, j), m)) in st.picture_points().into_iter().enumerate() {
                    writeln!(out, "{}  ({i}, {j})  ({m})", st.labels[k].name())?;
                }
            } else {
                write_complex(out, &st.complex)?;
            }
            Ok(true)
        }
        Cmd::SurgeryDual { knot, raw, reduced: _, conn, table } => {
            let sd = surgery_dual_complex(&knot.data().map_err(usage)?);
            if table {
                if raw || conn {
                    return Err(usage("--table applies to the reduced complex only"));
                }
                write!(out, "{}", emit_table(&sd))?;
            } else if raw {
                write_complex(out, &sd.cone.complex)?;
            } else if conn {
                write_complex(out, &split_acyclic(&sd.complex)?.conn)?;
            } else {
                write_complex(out, &sd.complex)?;
            }
            Ok(true)
        }
        Cmd::Invariants { torus, exps, input, dual, compute } => {
            let c = if let Some(path) = input {
                read_complex(&path)?
            } else {
                let knot = KnotSource { torus, exps };
                let data = knot.data().map_err(usage)?;
                if dual {
                    surgery_dual_complex(&data).complex
                } else {
                    staircase(&data).complex
                }
            };
            let inv = invariants(&c)?;
            let mut parts = Vec::new();
            for what in &compute {
                let v = match what.trim() {
                    "tau" => inv.tau,
                    "nu" => inv.nu,
                    "nu_prime" | "nu'" => inv.nu_prime,
                    "epsilon" => inv.epsilon,
                    other => return Err(usage(format!("unknown invariant {other:?}"))),
                };
                parts.push(format!("{}={v}", what.trim()));
            }
            writeln!(out, "{}", parts.join(" "))?;
            Ok(true)
        }
        Cmd::Conn { input, oracle } => {
            let c = read_complex(&input)?;
            let conn = if oracle { brute_force_connected(&c)? } else { split_acyclic(&c)?.conn };
            write_complex(out, &conn)?;
            Ok(true)
        }
        Cmd::Tensor { inputs, ns, ms } => {
            if inputs.is_empty() && ns.is_empty() && ms.is_empty() {
                return Err(usage("nothing to tensor"));
            }
            let mut c = model_product(&ns, &ms)?;
            for path in &inputs {
                c = c.tensor(&read_complex(path)?)?;
            }
            write_complex(out, &c)?;
            Ok(true)
        }
        Cmd::SawEdge { k, n, inverse } => {
            let c = if inverse { inverse_saw_edge(k, n) } else { saw_edge(k, n) };
            write_complex(out, &c.map_err(|e| usage(e.to_string()))?)?;
            Ok(true)
        }
        Cmd::Independence { ns, ms } => {
            let cert = independence_certificate(&ns, &ms)?;
            write!(out, "{cert}")?;
            Ok(true)
        }
        Cmd::VerifyLemma { k, n, l } => {
            let r = verify_kcn_lemma(k, n, l)?;
            write!(out, "{r}")?;
            Ok(r.all())
        }
        Cmd::Verify { all: _ } => {
            let results = acceptance::run_all();
            for r in &results {
                writeln!(out, "{r}")?;
            }
            Ok(results.iter().all(|r| r.passed))
        }
    }
}

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

/// `U^4g3 + Ug-3` ↦ `U⁴g₃ + Ug₋₃`.
pub fn pretty(s: &str) -> String {
    let mut out = String::new();
    let mut sup = false;
    let mut sub = false;
    for ch in s.chars() {
        match ch {
            '^' => sup = true,
            '0'..='9' | '-' if sup || sub => {
                let table = if sup { &SUP } else { &SUB };
                out.push(match ch {
                    '-' if sup => '⁻',
                    '-' => '₋',
                    d => table[d.to_digit(10).expect("digit") as usize],
                });
            }
            _ => {
                sup = false;
                sub = matches!(ch, 'g' | 'α' | 'β');
                out.push(ch);
            }
        }
    }
    out
}

/// Table of the reduced surgery dual: Alexander grading, generator, Maslov
/// grading, `∂`; rows by descending Alexander grading, then `g < β < α`.
pub fn emit_table(sd: &SurgeryDual) -> String {
    let mut s = String::from("Alexander  generator  Maslov  ∂\n");
    for (a, name, m, d) in sd.table_rows() {
        s.push_str(&format!("{a}  {}  {m}  {}\n", pretty(&name), pretty(&d)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("knotcone").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn pretty_names() {
        assert_eq!(pretty("U^4g3 + Ug-3"), "U⁴g₃ + Ug₋₃");
        assert_eq!(pretty("α-1"), "α₋₁");
        assert_eq!(pretty("0"), "0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["staircase"]).0, 2);
        assert_eq!(run_str(&["staircase", "--torus", "4", "6"]).0, 2);
        assert_eq!(run_str(&["invariants", "--torus", "2", "3", "--compute", "bogus"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
        let (code, out, _) = run_str(&["invariants", "--torus", "2", "7", "--dual", "--compute", "tau,epsilon"]);
        assert_eq!((code, out.trim()), (0, "tau=-1 epsilon=0"));
    }

    #[test]
    fn staircase_file_round_trip() {
        let (code, out, _) = run_str(&["staircase", "--exps", "1"]);
        assert_eq!(code, 0);
        let c = ChainComplex::from_json(&out).unwrap();
        assert_eq!(c, staircase(&torus_alexander(2, 3).unwrap()).complex);
    }

    #[test]
    fn table_for_t35() {
        let (code, out, _) = run_str(&["surgery-dual", "--torus", "3", "5", "--reduced", "--table"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("4  β₄  12  g₃"));
        assert_eq!(out.lines().count(), 16);
        assert_eq!(run_str(&["surgery-dual", "--torus", "3", "5", "--raw", "--table"]).0, 2);
    }

    #[test]
    fn lemma_and_independence() {
        let (code, out, _) = run_str(&["verify-lemma", "--k", "1", "--n", "2", "--l", "3"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = run_str(&["independence", "--ns", "3", "--ms", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("dim H_vert(conn) = 9"), "{out}");
    }
}

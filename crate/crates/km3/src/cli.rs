//! The `km3` command-line interface.
//!
//! Every subcommand emits a deterministic report; run the same command twice
//! and the bytes match. Exit codes: 0 success, 1 selftest failure, 2 usage
//! or domain error, 3 unsupported computation.

use crate::arith::rad2;
use crate::eisenstein::{self, EisensteinInt};
use crate::genus;
use crate::nslat;
use crate::quat::{self, CountStatus, KummerCount};
use crate::report::{json_int, json_mat, json_opt_int, json_rat, json_rat_mat, Report};
use crate::selftest;
use crate::vinberg;
use crate::{Km3Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

const KMAX_CAP: i64 = 30;

#[derive(Parser)]
#[command(
    name = "km3",
    version,
    about = "Exact invariants of generalized Kummer surfaces from the polarization square"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the rendered output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Every invariant attached to the polarization square ell.
    #[command(allow_negative_numbers = true)]
    Invariants { ell: i64 },
    /// Irreducible components of the moduli space for ell <= 0.
    #[command(allow_negative_numbers = true)]
    Moduli {
        ell: i64,
        /// Include the component representatives and their complements.
        #[arg(long)]
        reps: bool,
    },
    /// Component and genus counts for k = 1..kmax.
    Tables {
        /// 0 for the squares -6k, 2 for the squares -6k+2.
        #[arg(long)]
        parity: u8,
        #[arg(long, default_value_t = 18)]
        kmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The order attached to an admissible d and an Eisenstein integer mu.
    Order {
        #[arg(long)]
        dh: i64,
        /// Coordinates "x,y" of mu = x + y j.
        #[arg(long)]
        mu: String,
    },
    /// The structure count attached to ell.
    #[command(allow_negative_numbers = true)]
    Count { ell: i64 },
    /// Run the built-in verification suite.
    Selftest {
        /// Corrupt a named identity to exercise the failure path.
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

/// Parse `"x,y"` into an Eisenstein integer. Exposed for fuzzing.
pub fn parse_mu_arg(s: &str) -> Result<EisensteinInt> {
    let mut parts = s.split(',');
    let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Km3Error::ConstraintViolation(format!(
            "mu must be given as \"x,y\", got {s:?}"
        )));
    };
    let x: i64 = xs
        .trim()
        .parse()
        .map_err(|_| Km3Error::ConstraintViolation(format!("bad mu coordinate {xs:?}")))?;
    let y: i64 = ys
        .trim()
        .parse()
        .map_err(|_| Km3Error::ConstraintViolation(format!("bad mu coordinate {ys:?}")))?;
    Ok(EisensteinInt::new(x, y))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Invariants { ell } => cmd_invariants(*ell),
        Command::Moduli { ell, reps } => cmd_moduli(*ell, *reps),
        Command::Tables { parity, kmax, format } => cmd_tables(*parity, *kmax, *format),
        Command::Order { dh, mu } => cmd_order(*dh, mu),
        Command::Count { ell } => cmd_count(*ell),
        Command::Selftest { inject_fault } => {
            return run_selftest(inject_fault.clone(), cli.out.as_deref());
        }
    };
    match outcome {
        Ok((rendered, code)) => {
            print!("{rendered}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

type Rendered = (String, i32);

fn count_results(c: &KummerCount) -> Value {
    json!({
        "d_h": json_int(c.d_h),
        "algebra_discriminant": json_int(c.d_big),
        "mu_norm": json_int(c.mu_norm),
        "e3": json_opt_int(c.e3),
        "kummer_structures": json_opt_int(c.n_ks),
        "status": match &c.status {
            CountStatus::Exact => json!("exact"),
            CountStatus::Unsupported(reason) => json!({ "unsupported": reason }),
        },
    })
}

fn cmd_invariants(ell: i64) -> Result<Rendered> {
    if !crate::valid_ell(ell) {
        return Err(Km3Error::BadCongruence(ell));
    }
    let mut report = Report::new("invariants");
    report.input("ell", ell);

    let lattice = nslat::ns_lattice(ell)?;
    report.result("ns_gram", json_mat(&lattice.gram));
    report.cite("ns_gram", "rank-3 intersection matrix determined by the polarization square");
    let (pos, neg, zero) = lattice.signature();
    report.result("ns_signature", json!([pos, neg, zero]));
    report.cite("ns_signature", "derived");

    let form = nslat::discriminant_form(&lattice)?;
    report.result(
        "discriminant_group",
        json!({
            "invariant_factors": form.invariant_factors.iter().map(|&d| json_int(d)).collect::<Vec<_>>(),
            "order": json_int(form.group_order()),
            "q_values": json_rat_mat(&form.gram_q),
        }),
    );
    report.cite(
        "discriminant_group",
        "discriminant group of the rank-3 lattice has order |ell|; cyclic off 9 | ell, 3 x (ell/3) otherwise",
    );

    let half = ell / 2;
    let d_h = half.signum() * rad2(half)?;
    let (finite, ram_infty) = quat::algebra_discriminant(d_h)?;
    report.result("rad2_ell", json_int(rad2(ell)?));
    report.cite("rad2_ell", "isogeny-class invariant of the polarization square");
    report.result("d_h", json_int(d_h));
    report.cite("d_h", "square-free kernel of ell/2 through the primes 2 mod 3");
    report.result(
        "algebra",
        json!({
            "symbol": [-3, json_int(d_h)],
            "discriminant_finite": json_int(finite),
            "ramified_at_infinity": ram_infty,
        }),
    );
    report.cite(
        "algebra",
        "the endomorphism algebra is (-3, d_H) with discriminant d_H or 3 d_H by the factor-count parity",
    );

    if ell > 0 {
        let closed = nslat::has_principal_polarization(ell)?;
        let oracle = nslat::pp_local_oracle(ell)?;
        report.result(
            "principal_polarization",
            json!({
                "closed_form": closed,
                "local_oracle": oracle,
                "agreement": closed == oracle,
            }),
        );
        report.cite(
            "principal_polarization",
            "principal polarization exists iff ell = 2 mod 6 or 3 || ell; cross-checked by local solvability",
        );
        let count = quat::kummer_structure_count(ell)?;
        report.result("count", count_results(&count));
        report.cite(
            "count",
            "structure count is e3/2, or 2 e3 when 9 | ell; e3 from the Eichler elliptic-point formula",
        );
        report.result(
            "fourier_mukai",
            json!({
                "partners": "the surface and its dual",
                "distinct": ell % 9 == 0,
            }),
        );
        report.cite(
            "fourier_mukai",
            "partner set is the surface with its dual, distinct exactly when 9 | ell",
        );
        if count.mu_norm > 0 {
            if let Some(mu) = eisenstein::solve_norm_equation(count.mu_norm)?.first() {
                let order = quat::order_mu(d_h, *mu)?;
                report.result("order", order_results(&order, *mu));
                report.cite(
                    "order",
                    "basis 1, j, mu theta, j mu theta; reduced discriminant norm(mu) * D_H",
                );
            }
        }
    } else {
        report.result("principal_polarization", Value::Null);
        report.result(
            "count",
            json!({
                "kummer_structures": 1,
                "status": "exact",
            }),
        );
        report.cite(
            "count",
            "a non-algebraic surface carries exactly one structure",
        );
        let mu_norm = half.abs() / finite;
        if half.rem_euclid(finite) == 0 {
            if let Some(mu) = eisenstein::solve_norm_equation(mu_norm)?.first() {
                let order = quat::order_mu(d_h, *mu)?;
                report.result("order", order_results(&order, *mu));
                report.cite(
                    "order",
                    "basis 1, j, mu theta, j mu theta; reduced discriminant norm(mu) * D_H",
                );
            }
        }
    }
    Ok((report.render(), EXIT_OK))
}

fn order_results(order: &quat::QuatOrder, mu: EisensteinInt) -> Value {
    json!({
        "mu": [json_int(mu.x), json_int(mu.y)],
        "basis": order
            .basis
            .iter()
            .map(|v| Value::Array(v.coords.iter().map(|&c| json_rat(c)).collect()))
            .collect::<Vec<_>>(),
        "trace_gram": json_mat(&order.trace_gram),
        "reduced_discriminant": json_int(order.reduced_discriminant),
        "eichler_certified": quat::is_eichler_certified(order),
    })
}

fn cmd_moduli(ell: i64, reps: bool) -> Result<Rendered> {
    let components = vinberg::enumerate_components(ell)?;
    let mut report = Report::new("moduli");
    report.input("ell", ell);
    report.input("reps", reps);
    report.result("num_components", json_int(components.len() as i64));
    report.cite(
        "num_components",
        "inequivalent invariant polarizations in the fundamental cone classify the components",
    );
    if reps {
        let mut list = Vec::new();
        for rep in &components {
            let mut entry = serde_json::Map::new();
            entry.insert(
                "gamma_coords".into(),
                Value::Array(rep.0.iter().map(|&c| json_int(c)).collect()),
            );
            entry.insert("square".into(), json_int(rep.square()));
            if ell < 0 {
                let complement = vinberg::orthogonal_complement(rep)?;
                entry.insert("complement_gram".into(), json_mat(&complement.gram));
                entry.insert(
                    "complement_minimum".into(),
                    json_int(genus::lattice_minimum(&complement.gram)),
                );
            }
            list.push(Value::Object(entry));
        }
        report.result("representatives", Value::Array(list));
        report.cite(
            "representatives",
            "derived: cone enumeration with the facet and congruence filters",
        );
    }
    Ok((report.render(), EXIT_OK))
}

struct TableRow {
    k: i64,
    ell: i64,
    num_components: usize,
    genus_size: usize,
}

fn table_rows(parity: u8, kmax: i64) -> Result<Vec<TableRow>> {
    if parity != 0 && parity != 2 {
        return Err(Km3Error::ConstraintViolation(format!(
            "parity must be 0 or 2, got {parity}"
        )));
    }
    if kmax < 1 || kmax > KMAX_CAP {
        return Err(Km3Error::BoundExceeded {
            what: "kmax",
            bound: KMAX_CAP,
        });
    }
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let ell = if parity == 0 { -6 * k } else { -6 * k + 2 };
        rows.push(TableRow {
            k,
            ell,
            num_components: vinberg::enumerate_components(ell)?.len(),
            genus_size: genus::genus_count(ell)?,
        });
    }
    Ok(rows)
}

fn cmd_tables(parity: u8, kmax: i64, format: Format) -> Result<Rendered> {
    let rows = table_rows(parity, kmax)?;
    let rendered = match format {
        Format::Csv => {
            let mut s = String::from("k,lx_sq,num_components,genus_size\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.k, r.ell, r.num_components, r.genus_size
                ));
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{:>4} {:>8} {:>12} {:>8}\n", "k", "lx_sq", "components", "genus");
            for r in &rows {
                s.push_str(&format!(
                    "{:>4} {:>8} {:>12} {:>8}\n",
                    r.k, r.ell, r.num_components, r.genus_size
                ));
            }
            s
        }
        Format::Json => {
            let mut report = Report::new("tables");
            report.input("parity", parity);
            report.input("kmax", kmax);
            report.result(
                "rows",
                Value::Array(
                    rows.iter()
                        .map(|r| {
                            json!({
                                "k": json_int(r.k),
                                "lx_sq": json_int(r.ell),
                                "num_components": json_int(r.num_components as i64),
                                "genus_size": json_int(r.genus_size as i64),
                            })
                        })
                        .collect(),
                ),
            );
            report.cite(
                "rows",
                "component counts from cone enumeration; genus sizes from ternary class enumeration",
            );
            report.render()
        }
    };
    Ok((rendered, EXIT_OK))
}

fn cmd_order(dh: i64, mu_arg: &str) -> Result<Rendered> {
    let mu = parse_mu_arg(mu_arg)?;
    if mu.is_zero() {
        return Err(Km3Error::ConstraintViolation("mu must be nonzero".into()));
    }
    let d_h = quat::normalize_minus3(dh)?;
    let order = quat::order_mu(d_h, mu)?;
    let mut report = Report::new("order");
    report.input("dh", dh);
    report.input("mu", mu_arg);
    report.result("d_h", json_int(d_h));
    if d_h != dh {
        report.cite("d_h", "normalized so the algebra symbol has square-free second entry with prime factors 2 mod 3");
    } else {
        report.cite("d_h", "derived");
    }
    report.result("order", order_results(&order, mu));
    report.cite(
        "order",
        "basis 1, j, mu theta, j mu theta; reduced discriminant norm(mu) * D_H",
    );
    report.result("mu_norm", json_int(mu.norm()));
    report.cite("mu_norm", "derived");
    Ok((report.render(), EXIT_OK))
}

fn cmd_count(ell: i64) -> Result<Rendered> {
    let mut report = Report::new("count");
    report.input("ell", ell);
    if !crate::valid_ell(ell) {
        return Err(Km3Error::BadCongruence(ell));
    }
    if ell < 0 {
        report.result(
            "count",
            json!({ "kummer_structures": 1, "status": "exact" }),
        );
        report.cite("count", "a non-algebraic surface carries exactly one structure");
        return Ok((report.render(), EXIT_OK));
    }
    let count = quat::kummer_structure_count(ell)?;
    report.result("count", count_results(&count));
    report.cite(
        "count",
        "structure count is e3/2, or 2 e3 when 9 | ell; e3 from the Eichler elliptic-point formula",
    );
    let code = match count.status {
        CountStatus::Exact => EXIT_OK,
        CountStatus::Unsupported(_) => EXIT_UNSUPPORTED,
    };
    Ok((report.render(), code))
}

fn run_selftest(inject: Option<String>, out: Option<&std::path::Path>) -> i32 {
    let fault = selftest::Fault { target: inject };
    let mut all_ok = true;
    let mut lines = String::new();
    let mut results = serde_json::Map::new();
    for group in selftest::groups() {
        match (group.run)(&fault) {
            Ok(()) => {
                lines.push_str(&format!("PASS {}\n", group.name));
                results.insert(group.name.into(), json!("pass"));
            }
            Err(detail) => {
                all_ok = false;
                lines.push_str(&format!("FAIL {}: {}\n", group.name, detail));
                results.insert(group.name.into(), json!({ "fail": detail }));
            }
        }
    }
    lines.push_str(if all_ok { "selftest: ok\n" } else { "selftest: FAILED\n" });
    print!("{lines}");
    let _ = std::io::stdout().flush();
    if let Some(path) = out {
        let mut report = Report::new("selftest");
        report.result("groups", Value::Object(results));
        report.result("ok", json!(all_ok));
        report.cite("groups", "derived");
        if let Err(e) = std::fs::write(path, report.render()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_SELFTEST_FAILURE
    }
}

use std::fmt::Write as _;
use std::path::Path;

use bergman_core::commutator::{self, ScanField, WitnessFamily};
use bergman_core::fields::{RealLinearVectorField, VectorField};
use bergman_core::filtration::{self, Operator};
use bergman_core::kernels::{self, KernelSpace, SuiteConfig};
use bergman_core::matcalc::{self, Contour, ScalarFunction, SquareMatrix};
use bergman_core::poly::{format_rational, PolynomialJson};
use bergman_core::projection::ProjectionConfig;
use bergman_core::{selftest, Exec};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{pick, Format, RunConfig};
use crate::input;
use crate::{BaseOperator, Cli, CliError, Command, KernelMode, Kind, Outcome};

const EXACT: &str = "exact";

fn float(tol: f64) -> String {
    format!("float({tol:e})")
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn done(report: &Value, passed: bool) -> Result<Outcome, CliError> {
    Ok(Outcome { stdout: to_json(report), stderr: None, passed })
}

fn no_csv(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("{command} has no CSV output"))),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &nalgebra::DMatrix<Complex64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// `dz:i` / `dzbar:i` with a 1-based index.
fn coordinate_field(token: &str, n: usize) -> Result<Option<VectorField>, CliError> {
    let Some((kind, idx)) = token.split_once(':') else {
        return Ok(None);
    };
    let i: usize = match kind {
        "dz" | "dzbar" => idx
            .parse()
            .map_err(|_| CliError::Usage(format!("bad coordinate in {token:?}")))?,
        _ => return Ok(None),
    };
    if i == 0 {
        return Err(CliError::Usage("coordinates are 1-based".into()));
    }
    let field = if kind == "dz" { VectorField::dz(n, i - 1)? } else { VectorField::dzbar(n, i - 1)? };
    Ok(Some(field))
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let seed = cfg.resolve_seed(cli.seed)?;
    let sequential = cli.sequential || cfg.sequential.unwrap_or(false);
    let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
    let format_or = |default: Format| pick(cli.format, cfg.format, default);

    match cli.command {
        Command::Project { input, raw } => {
            no_csv(format_or(Format::Json), "project")?;
            let f = input::read_polynomial(&input)?;
            let pf = ProjectionConfig::new(f.dim())?.project(&f)?;
            if raw {
                return Ok(Outcome { stdout: pf.to_json() + "\n", stderr: None, passed: true });
            }
            done(&json!({ "provenance": EXACT, "polynomial": PolynomialJson::from(&pf) }), true)
        }

        Command::Commutator { field, input } => {
            no_csv(format_or(Format::Json), "commutator")?;
            let f = input::read_polynomial(&input)?;
            let x = match coordinate_field(&field, f.dim())? {
                Some(x) => x,
                None => match field.strip_prefix("matrix:") {
                    Some(path) => VectorField::from_real(&input::read_field(Path::new(path))?),
                    None => return Err(CliError::Usage(format!("unknown field {field:?}"))),
                },
            };
            let image = commutator::commutator_apply(&x, &f)?;
            done(
                &json!({
                    "provenance": EXACT,
                    "convention": "[X,P] = X∘P − P∘X",
                    "field": field,
                    "polynomial": PolynomialJson::from(&image),
                }),
                true,
            )
        }

        Command::RatioScan { kind, n, m_max, coordinate, thresholds } => {
            let n = pick(n, cfg.n, 1);
            let m_max = pick(m_max, cfg.m_max, 100);
            let thresholds = if thresholds.is_empty() { cfg.thresholds.clone().unwrap_or_default() } else { thresholds };
            if coordinate == 0 {
                return Err(CliError::Usage("coordinates are 1-based".into()));
            }
            let scan_kind = match kind {
                Kind::Dz => ScanField::Dz,
                Kind::Dzbar => ScanField::Dzbar,
            };
            let family = WitnessFamily::standard(coordinate - 1);
            let report = commutator::divergence_scan(n, &family, &scan_kind, m_max, &thresholds, exec)?;
            let passed = report.closed_form_agrees != Some(false) && report.exceeds_all();
            let summary = format!(
                "{} n={} m_max={} slope={} strictly_increasing={} closed_form_agrees={} crossings={}\n",
                if kind == Kind::Dz { "[dz_i, P]" } else { "[P, dzbar_i]" },
                n,
                m_max,
                report.slope.map_or("n/a".into(), |s| format!("{s:.6}")),
                report.strictly_increasing,
                report.closed_form_agrees.map_or("n/a".into(), |b| b.to_string()),
                serde_json::to_string(&report.crossings).expect("serializable"),
            );
            match format_or(Format::Csv) {
                Format::Csv => {
                    let mut out = String::from("m,ratio_sq_num,ratio_sq_den,ratio_sq_float\n");
                    for p in &report.points {
                        let _ = writeln!(out, "{},{},{},{:e}", p.m, p.ratio_sq.numer(), p.ratio_sq.denom(), p.to_f64());
                    }
                    Ok(Outcome { stdout: out, stderr: Some(summary), passed })
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&report).expect("serializable");
                    v["provenance"] = json!(EXACT);
                    v["slope_provenance"] = json!("float(least-squares)");
                    Ok(Outcome { stdout: to_json(&v), stderr: Some(summary), passed })
                }
            }
        }

        Command::VerifyTangent { matrix, degree } => {
            no_csv(format_or(Format::Json), "verify-tangent")?;
            let a = input::read_field(&matrix)?;
            let degree = pick(degree, cfg.degree, 6);
            let report = commutator::verify_tangent_commutes(&a, degree, exec)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["provenance"] = json!(EXACT);
            done(&v, report.passed)
        }

        Command::Tangency { matrix } => {
            no_csv(format_or(Format::Json), "tangency")?;
            let a = input::read_field(&matrix)?;
            done(
                &json!({
                    "provenance": EXACT,
                    "tangent": a.is_tangent(),
                    "antisymmetry_defect": format_rational(&a.antisymmetry_defect()),
                    "complex_linear": a.is_complex_linear(),
                }),
                true,
            )
        }

        Command::PsiFiltration { n, k_max, degrees, fields, operator } => {
            let k_max = pick(k_max, cfg.k_max, 3);
            let degrees = pick(degrees, cfg.degrees.clone(), vec![4, 6, 8, 10]);
            let (n, ops) = filtration_fields(&fields, pick(n, cfg.n, 1))?;
            let base = match operator {
                BaseOperator::Projection => Operator::Projection(n),
                BaseOperator::Identity => Operator::Identity(n),
            };
            let report = filtration::filtration_report(&base, &ops, k_max, &degrees, exec)?;
            match format_or(Format::Json) {
                Format::Json => done(&serde_json::to_value(&report).expect("serializable"), true),
                Format::Csv => {
                    let mut out = String::from("k,d,value,flag,verdict\n");
                    for level in &report.levels {
                        for e in &level.estimates {
                            let verdict = serde_json::to_value(level.verdict).expect("serializable");
                            let _ = writeln!(out, "{},{},{:e},{},{}", level.k, e.d, e.value, e.flag, verdict.as_str().unwrap_or(""));
                        }
                    }
                    Ok(Outcome { stdout: out, stderr: Some(format!("provenance {}\n", report.provenance)), passed: true })
                }
            }
        }

        Command::Calculus { matrix, function, nodes, radius_factor } => {
            no_csv(format_or(Format::Json), "calculus")?;
            let a = SquareMatrix::new(input::complex_matrix(&input::inline_or_file(&matrix)?)?)?;
            let f = match function.as_str() {
                "one" => ScalarFunction::One,
                "exp" => ScalarFunction::Exp,
                "id" => ScalarFunction::Identity,
                other => match other.strip_prefix("poly:") {
                    Some(cs) => ScalarFunction::Poly(input::poly_coefficients(cs)?),
                    None => return Err(CliError::Usage(format!("unknown function {other:?}"))),
                },
            };
            let nodes = pick(nodes, cfg.nodes, matcalc::DEFAULT_NODES);
            let factor = pick(radius_factor, cfg.radius_factor, matcalc::DEFAULT_RADIUS_FACTOR);
            let contour = Contour::around(&a, factor, nodes)?;
            let res = matcalc::holomorphic_calculus(&a, |z| f.eval(z), &contour, exec)?;
            let direct = f.apply_direct(&a);
            let err = matcalc::max_abs(&(res.matrix.as_matrix() - direct.as_matrix()));
            let spectrum: Vec<Value> = matcalc::spectrum(&a)?.into_iter().map(complex_json).collect();
            done(
                &json!({
                    "provenance": float(err.max(f64::EPSILON)),
                    "function": function,
                    "matrix": matrix_json(res.matrix.as_matrix()),
                    "spectrum": spectrum,
                    "contour": { "center": complex_json(contour.center), "radius": contour.radius, "nodes": contour.nodes },
                    "min_distance_to_spectrum": res.min_distance,
                    "conditioning_warning": res.conditioning_warning,
                    "max_error_vs_direct": err,
                }),
                true,
            )
        }

        Command::KernelCheck { space, mode, n, z, w, k_max, input: poly_path, pairs, samples, mu, l } => {
            let space = KernelSpace::parse(&space, pick(n, cfg.n, 1))?;
            let format = format_or(Format::Json);
            let need = |v: &Option<String>, name: &str| {
                v.clone().ok_or_else(|| CliError::Usage(format!("--{name} is required for this mode")))
            };
            match mode {
                KernelMode::Eval => {
                    no_csv(format, "kernel-check --mode eval")?;
                    let zp = input::complex_point(&need(&z, "z")?)?;
                    let wp = input::complex_point(&need(&w, "w")?)?;
                    let k = kernels::kernel_eval(&space, &zp, &wp)?;
                    let kc = kernels::kernel_eval(&space, &wp, &zp)?;
                    done(
                        &json!({
                            "provenance": float(f64::EPSILON),
                            "space": space.to_string(),
                            "value": complex_json(k),
                            "conjugate_symmetry_gap": (k - kc.conj()).norm(),
                        }),
                        true,
                    )
                }
                KernelMode::Series => {
                    let zp = input::complex_point(&need(&z, "z")?)?;
                    let wp = input::complex_point(&need(&w, "w")?)?;
                    let k_max = pick(k_max, cfg.degree, 60);
                    let exact = kernels::kernel_eval(&space, &zp, &wp)?;
                    let mut rows = Vec::new();
                    for k in 0..=k_max {
                        let s = kernels::basis_partial_sum(&space, &zp, &wp, k)?;
                        rows.push((k, s, (s - exact).norm(), kernels::series_tail_bound(&space, &zp, &wp, k)?));
                    }
                    match format {
                        Format::Csv => {
                            let mut out = String::from("K,partial_re,partial_im,error,tail_bound\n");
                            for (k, s, e, t) in &rows {
                                let _ = writeln!(out, "{k},{:e},{:e},{e:e},{t:e}", s.re, s.im);
                            }
                            Ok(Outcome { stdout: out, stderr: None, passed: true })
                        }
                        Format::Json => done(
                            &json!({
                                "provenance": float(f64::EPSILON),
                                "space": space.to_string(),
                                "closed_form": complex_json(exact),
                                "partial_sums": rows.iter().map(|(k, s, e, t)| json!({ "K": k, "value": complex_json(*s), "error": e, "tail_bound": t })).collect::<Vec<_>>(),
                            }),
                            true,
                        ),
                    }
                }
                KernelMode::Reproduce => {
                    no_csv(format, "kernel-check --mode reproduce")?;
                    let path = poly_path.ok_or_else(|| CliError::Usage("--input is required for reproduce".into()))?;
                    let f = input::read_polynomial(&path)?;
                    let zp = input::exact_point(&need(&z, "z")?)?;
                    let r = kernels::reproduce_polynomial(&space, &f, &zp)?;
                    let mut v = serde_json::to_value(&r).expect("serializable");
                    v["provenance"] = json!(EXACT);
                    v["space"] = json!(space.to_string());
                    done(&v, r.equal)
                }
                KernelMode::Suite => {
                    no_csv(format, "kernel-check --mode suite")?;
                    let config = SuiteConfig {
                        pairs: pick(pairs, cfg.pairs, 1000),
                        seed,
                        ..SuiteConfig::default()
                    };
                    let r = kernels::rkhs_inequality_suite(&space, &config, exec)?;
                    done(&serde_json::to_value(&r).expect("serializable"), r.passed)
                }
                KernelMode::Peetre => {
                    no_csv(format, "kernel-check --mode peetre")?;
                    match (&w, &mu, l) {
                        (Some(w), Some(mu), Some(l)) => {
                            let r = kernels::verify_peetre(&input::real_vector(w)?, &input::real_vector(mu)?, l)?;
                            let mut v = serde_json::to_value(r).expect("serializable");
                            v["provenance"] = json!(float(1e-12));
                            done(&v, r.passed)
                        }
                        (None, None, None) => {
                            let r = kernels::peetre_sweep(pick(samples, cfg.samples, 10_000), space.dim(), seed, exec)?;
                            let mut v = serde_json::to_value(&r).expect("serializable");
                            v["provenance"] = json!(float(1e-12));
                            done(&v, r.passed)
                        }
                        _ => Err(CliError::Usage("peetre takes all of --w, --mu, --l or none of them".into())),
                    }
                }
            }
        }

        Command::Selftest { criterion } => {
            no_csv(format_or(Format::Json), "selftest")?;
            match criterion {
                Some(id) => {
                    let r = selftest::run_criterion(id, seed, exec)?;
                    let passed = r.passed;
                    done(&json!({ "seed": seed, "passed": passed, "criteria": [r] }), passed)
                }
                None => {
                    let report = selftest::run_selftest(seed, exec)?;
                    let mut summary = String::new();
                    for c in &report.criteria {
                        let _ = writeln!(summary, "{} criterion {:>2}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title);
                    }
                    Ok(Outcome { stdout: to_json(&report), stderr: Some(summary), passed: report.passed })
                }
            }
        }
    }
}

/// Either coordinate fields (`dz:1,dzbar:2`, dimension `n`) or a JSON file
/// of matrices, whose size fixes the dimension.
fn filtration_fields(arg: &str, n: usize) -> Result<(usize, Vec<Operator>), CliError> {
    let tokens: Vec<&str> = arg.split(',').map(str::trim).collect();
    if tokens.iter().all(|t| t.starts_with("dz:") || t.starts_with("dzbar:")) {
        let ops = tokens
            .iter()
            .map(|t| Ok(Operator::Field(coordinate_field(t, n)?.expect("checked prefix"))))
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok((n, ops));
    }
    let mats: Vec<RealLinearVectorField> = input::read_fields(Path::new(arg))?;
    let dim = mats.first().map(RealLinearVectorField::dim).unwrap_or(n);
    let ops = mats.iter().map(|m| Operator::Field(VectorField::from_real(m))).collect();
    Ok((dim, ops))
}

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use entrywise_core::matrix::io::{read_matrix, to_rational};
use entrywise_core::matrix::CVector;
use entrywise_core::oracle::{run_suite, Suite};
use entrywise_core::pencil::{critical_value, critical_value_exact, decade_grid, witness_value};
use entrywise_core::rational::{parse_rational, to_f64};
use entrywise_core::schur::{schur_eval, schur_ones};
use entrywise_core::strata::{simultaneous_kernel_report, stratify};
use entrywise_core::threshold::{cube_bounds, cube_ratio_bound, negative_threshold, threshold_constant};
use entrywise_core::{CoeffVector, Error, GroupTag, HermMatrix, Partition, Rational, Result, ThresholdQuery};

use crate::Command;

pub struct Output {
    pub text: String,
    pub failed: bool,
}

fn ok(text: String) -> Result<Output> {
    Ok(Output { text, failed: false })
}

fn doc(v: Value) -> Result<Output> {
    ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("values serialize")
    ))
}

/// Always `p/q`, so integers print as `5/1`.
fn frac(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn rationals(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rational(s.trim())).collect()
}

fn coeff_vector(items: &[String]) -> Result<CoeffVector> {
    CoeffVector::new(rationals(items)?)
}

fn vector_json(v: &CVector) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn vector_text(v: &CVector) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn matrix(path: &Path) -> Result<HermMatrix> {
    read_matrix(path)
}

pub fn run(cmd: Command, as_json: bool) -> Result<Output> {
    match cmd {
        Command::Threshold { c, degree, dim, rho } => {
            let c = coeff_vector(&c.coeffs)?;
            let n = dim.unwrap_or(c.len());
            let rho = parse_rational(&rho)?;
            let q = ThresholdQuery::new(c.clone(), degree, n, rho.clone())?;
            let value = threshold_constant(&q);
            let bound = negative_threshold(&q);
            if as_json {
                return doc(json!({
                    "coeffs": c.as_slice().iter().map(frac).collect::<Vec<_>>(),
                    "degree": degree,
                    "dim": n,
                    "rho": frac(&rho),
                    "constant": frac(&value.exact),
                    "constant_f64": value.float_view,
                    "lower_coefficient_bound": frac(&bound),
                    "lower_coefficient_bound_f64": to_f64(&bound),
                }));
            }
            ok(format!(
                "C = {} (exact {}), lower coefficient bound = {}\n",
                value.float_view,
                frac(&value.exact),
                frac(&bound)
            ))
        }

        Command::Check {
            matrix: path,
            c,
            extra_degree,
            extra_coeff,
            eps,
        } => {
            let a = matrix(&path)?;
            let c = coeff_vector(&c.coeffs)?;
            if c.len() != a.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    got: c.len(),
                });
            }
            let extra = parse_rational(&extra_coeff)?;
            let mut coeffs = c.to_f64();
            coeffs.push(to_f64(&extra));
            let mut exps: Vec<u64> = (0..c.len() as u64).collect();
            exps.push(extra_degree);
            let verdict = a.entrywise_poly(&coeffs, &exps)?.psd_check(eps);
            if as_json {
                return doc(serde_json::to_value(verdict).expect("verdict serializes"));
            }
            ok(format!(
                "f[A] PSD: {} (min eigenvalue {:e}, tolerance {:e})\n",
                if verdict.is_psd { "yes" } else { "no" },
                verdict.min_eigenvalue,
                verdict.tolerance_used
            ))
        }

        Command::CriticalValue {
            matrix: path,
            c,
            degree,
            exact,
        } => {
            let a = matrix(&path)?;
            let c = coeff_vector(&c.coeffs)?;
            if exact {
                let v = critical_value_exact(&to_rational(&a)?, &c, degree)?;
                if as_json {
                    return doc(json!({ "value": frac(&v), "value_f64": to_f64(&v) }));
                }
                return ok(format!("critical value = {} (exact {})\n", to_f64(&v), frac(&v)));
            }
            let r = critical_value(&a, &c, degree)?;
            if as_json {
                return doc(json!({
                    "value": r.value,
                    "optimizer": r.optimizer.as_ref().map(vector_json),
                }));
            }
            let mut out = format!("critical value = {}\n", r.value);
            if let Some(v) = &r.optimizer {
                writeln!(out, "optimizer = {}", vector_text(v)).unwrap();
            }
            ok(out)
        }

        Command::WitnessSweep {
            c,
            degree,
            rho,
            tmin,
            exact,
        } => {
            if !(tmin > 0.0 && tmin <= 0.1) {
                return Err(Error::InvalidArgument(format!("tmin = {tmin} must lie in (0, 0.1]")));
            }
            let c = coeff_vector(&c.coeffs)?;
            let rho = parse_rational(&rho)?;
            let decades = (-tmin.log10() + 1e-9).floor() as u32;
            let sharp = threshold_constant(&ThresholdQuery::for_coeffs(c.clone(), degree, rho.clone())?).exact;
            let rows = decade_grid(decades)
                .into_iter()
                .map(|t| Ok((witness_value(&c, degree, &rho, &t)?, t)))
                .collect::<Result<Vec<_>>>()?;
            if as_json {
                let pts: Vec<Value> = rows
                    .iter()
                    .map(|(v, t)| json!({ "t": frac(t), "value": frac(v), "value_f64": to_f64(v), "fraction_of_c": to_f64(&(v / &sharp)) }))
                    .collect();
                return doc(json!({ "constant": frac(&sharp), "points": pts }));
            }
            let mut out = format!("C = {} (exact {})\n", to_f64(&sharp), frac(&sharp));
            writeln!(out, "{:>10}  {:>22}  {:>10}", "t", "value", "value / C").unwrap();
            for (v, t) in &rows {
                let shown = if exact { frac(v) } else { format!("{:.12}", to_f64(v)) };
                writeln!(
                    out,
                    "{:>10.0e}  {:>22}  {:>10.6}",
                    to_f64(t),
                    shown,
                    to_f64(&(v / &sharp))
                )
                .unwrap();
            }
            ok(out)
        }

        Command::Stratify { matrix: path, group } => {
            let a = matrix(&path)?;
            let dec = stratify(&a, GroupTag::parse(&group)?)?;
            if as_json {
                return doc(dec.to_json_value());
            }
            let mut out = format!("group: {}\nblocks: {}\n", dec.group, dec.partition.len());
            for (b, u) in dec.partition.blocks().iter().zip(&dec.factors) {
                writeln!(out, "  {:?}  u = {}", b, vector_text(u)).unwrap();
            }
            writeln!(out, "compressed:").unwrap();
            let k = dec.partition.len();
            for i in 0..k {
                let row = CVector::from_fn(k, |j, _| dec.compressed.get(i, j));
                writeln!(out, "  {}", vector_text(&row)).unwrap();
            }
            ok(out)
        }

        Command::Simkernel {
            matrix: path,
            weight,
            c,
        } => {
            let a = matrix(&path)?;
            let b = match weight {
                Some(p) => matrix(&p)?,
                None => HermMatrix::ones(a.dim()),
            };
            let c = coeff_vector(&c.coeffs)?;
            let report = simultaneous_kernel_report(&a, &b, &c)?;
            if !report.agree() {
                return Err(Error::StructureMismatch(format!(
                    "largest principal-angle sine {:e}",
                    report.max_sin_angle
                )));
            }
            let kernel = &report.direct;
            if as_json {
                return doc(json!({
                    "dim": kernel.dim(),
                    "basis": kernel.vectors.iter().map(vector_json).collect::<Vec<_>>(),
                    "partition": report.partition.blocks(),
                    "max_sin_angle": report.max_sin_angle,
                }));
            }
            let mut out = format!(
                "kernel dimension: {}\ntrivial-group partition: {:?}\nlargest principal-angle sine: {:e}\n",
                kernel.dim(),
                report.partition.blocks(),
                report.max_sin_angle
            );
            for v in &kernel.vectors {
                writeln!(out, "  {}", vector_text(v)).unwrap();
            }
            ok(out)
        }

        Command::Cube {
            dim,
            extra,
            coeffs,
            rho,
        } => {
            let c = if coeffs.is_empty() {
                CoeffVector::ones(dim)
            } else {
                coeff_vector(&coeffs)?
            };
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
            let rho = parse_rational(&rho)?;
            let b = cube_bounds(&c, extra, &rho)?;
            // The closed-form ratio bound is stated for unit coefficients.
            let all_ones = c.as_slice().iter().all(|x| *x == Rational::from_integer(1.into()));
            let ratio_bound = if all_ones && extra > 0 {
                let mut s = Rational::from_integer(1.into());
                for m in 0..extra {
                    s += cube_ratio_bound(m, extra, &rho, dim)?;
                }
                Some(s)
            } else {
                None
            };
            if as_json {
                let mut v = serde_json::to_value(&b).expect("bounds serialize");
                v["ratio_bound"] = ratio_bound.as_ref().map_or(Value::Null, |s| json!(frac(s)));
                return doc(v);
            }
            let mut out = format!(
                "eta lower = {} (exact {})\neta upper = {} (exact {})\nratio = {}\n",
                to_f64(&b.eta_lower),
                frac(&b.eta_lower),
                to_f64(&b.eta_upper),
                frac(&b.eta_upper),
                b.ratio_f64
            );
            if let Some(s) = ratio_bound {
                writeln!(out, "ratio bound = {} (exact {})", to_f64(&s), frac(&s)).unwrap();
            }
            ok(out)
        }

        Command::Schur {
            partition,
            points,
            ones,
        } => {
            let lam = Partition::new(partition)?;
            let (value, exact) = match ones {
                Some(n) => {
                    let v = schur_ones(&lam, n);
                    (v.to_string(), v.to_string())
                }
                None if !points.is_empty() => {
                    let v = schur_eval(&lam, &rationals(&points)?);
                    (v.to_string(), frac(&v))
                }
                None => return Err(Error::InvalidArgument("give --points or --ones".into())),
            };
            if as_json {
                return doc(json!({ "partition": lam, "value": exact }));
            }
            ok(format!("{value}\n"))
        }

        Command::Verify { suite, seed, trials } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, seed, trials)?;
            let failed = !report.pass;
            let text = if as_json {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                )
            } else {
                let mut out = String::new();
                for r in &report.reports {
                    writeln!(
                        out,
                        "{:<32} {:>6} instances  {}",
                        r.name,
                        r.instance_count,
                        if r.pass() {
                            "ok".to_string()
                        } else {
                            format!("{} FAILED", r.failures.len())
                        }
                    )
                    .unwrap();
                }
                writeln!(
                    out,
                    "suite {suite}, seed {seed}: {}",
                    if failed { "FAIL" } else { "PASS" }
                )
                .unwrap();
                out.push_str(&serde_json::to_string(&report).expect("report serializes"));
                out.push('\n');
                out
            };
            Ok(Output { text, failed })
        }
    }
}

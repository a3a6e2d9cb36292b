use serde_json::{json, Value};

use kappa_weyl::algebra::{annihilator, number_op, x_op};
use kappa_weyl::spectrum::{
    self, positivity_check_integer, positivity_threshold_paper, EnergyQuadratic,
};
use kappa_weyl::verify::{check_catalogue, unitarity_check, UnitarityReport};
use kappa_weyl::{AlgebraParams, FockBasis, QuantaShift, SparseOperator, UnitarityPolicy};

use crate::config::{Command, Format};
use crate::render::{csv, invalid_marker, json_document, num, text_table};
use crate::{Failure, Output, RunConfig};

pub(crate) fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Output, Failure> {
    match cmd {
        Command::Basis(_) => basis(cfg),
        Command::Ops(o) => ops(cfg, o.op.as_deref()),
        Command::Verify(_) => verify(cfg),
        Command::Spectrum(_) => spectrum(cfg),
        Command::Threshold(_) => threshold(cfg),
    }
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, passed: true })
}

fn make_basis(cfg: &RunConfig) -> Result<FockBasis, Failure> {
    Ok(FockBasis::enumerate_capped(cfg.d, cfg.n_max, cfg.dim_cap)?)
}

/// Parameters plus the unitarity audit; refuses non-unitary κ without `--force`.
fn make_params(cfg: &RunConfig, basis: &FockBasis) -> Result<(AlgebraParams, UnitarityReport), Failure> {
    let params = AlgebraParams::new(cfg.require_kappa()?, cfg.d)?;
    let audit = unitarity_check(&params, basis);
    if !audit.is_unitary() && !cfg.force {
        let first = &audit.offending[0];
        return Err(Failure::Usage(format!(
            "kappa = {} gives a non-unitary representation for d = {} ({} negative radicands, first at mode {} state {}; \
             unitary for kappa >= {}); pass --force to build it anyway",
            num(params.kappa()),
            cfg.d,
            audit.offending.len(),
            first.mode + 1,
            first.state,
            num(audit.min_valid_kappa),
        )));
    }
    Ok((params, audit))
}

fn policy(cfg: &RunConfig) -> UnitarityPolicy {
    if cfg.force {
        UnitarityPolicy::Force
    } else {
        UnitarityPolicy::Strict
    }
}

fn params_json(params: &AlgebraParams, n_max: usize) -> Value {
    json!({
        "kappa": params.kappa(),
        "d": params.modes(),
        "nu": params.nu(),
        "n_max": n_max,
    })
}

fn basis(cfg: &RunConfig) -> Result<Output, Failure> {
    let basis = make_basis(cfg)?;
    let occ_header: Vec<String> = (1..=cfg.d).map(|i| format!("n{i}")).collect();
    let text = match cfg.format {
        Format::Json => {
            let states: Vec<Value> = basis
                .states()
                .iter()
                .enumerate()
                .map(|(k, m)| json!({"ordinal": k, "grade": m.total(), "occupations": m.occupations()}))
                .collect();
            json_document(
                false,
                json!({"d": cfg.d, "n_max": cfg.n_max, "size": basis.len(), "states": states}),
            )
        }
        Format::Csv => {
            let mut header = vec!["ordinal", "grade"];
            header.extend(occ_header.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = basis
                .states()
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let mut row = vec![k.to_string(), m.total().to_string()];
                    row.extend(m.occupations().iter().map(|n| n.to_string()));
                    row
                })
                .collect();
            csv(&header, &rows)
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = basis
                .states()
                .iter()
                .enumerate()
                .map(|(k, m)| vec![k.to_string(), m.total().to_string(), m.to_string()])
                .collect();
            format!(
                "# d = {}, n_max = {}, size = {}\n{}",
                cfg.d,
                cfg.n_max,
                basis.len(),
                text_table(&["ordinal", "grade", "state"], &rows)
            )
        }
    };
    ok(text)
}

fn shift_label(s: QuantaShift) -> Value {
    match s {
        QuantaShift::Fixed(k) => Value::from(k),
        QuantaShift::Mixed => Value::from("mixed"),
    }
}

fn ops(cfg: &RunConfig, only: Option<&str>) -> Result<Output, Failure> {
    let basis = make_basis(cfg)?;
    let (params, audit) = make_params(cfg, &basis)?;
    let pol = policy(cfg);
    let d = cfg.d;

    let mut names: Vec<String> = Vec::new();
    names.extend((1..=d).map(|i| format!("a{i}")));
    names.extend((1..=d).map(|i| format!("adag{i}")));
    names.extend((1..=d).map(|i| format!("N{i}")));
    for i in 1..=d {
        for j in (1..=d).filter(|&j| j != i) {
            names.push(format!("X{i}_{j}"));
        }
    }
    names.push("H".into());
    if let Some(name) = only {
        if !names.iter().any(|n| n == name) {
            return Err(Failure::Usage(format!(
                "unknown operator `{name}`; expected one of {}",
                names.join(", ")
            )));
        }
        names.retain(|n| n == name);
    }

    let build = |name: &str| -> Result<SparseOperator, Failure> {
        let index = |s: &str| -> usize { s.parse::<usize>().expect("generated name") - 1 };
        let op = if let Some(i) = name.strip_prefix("adag") {
            annihilator(&params, &basis, index(i), pol)?.transpose()
        } else if let Some(i) = name.strip_prefix('a') {
            annihilator(&params, &basis, index(i), pol)?
        } else if let Some(i) = name.strip_prefix('N') {
            number_op(&params, &basis, index(i))?
        } else if let Some(ij) = name.strip_prefix('X') {
            let (i, j) = ij.split_once('_').expect("generated name");
            // X_ij lowers mode i and raises mode j
            x_op(&params, &basis, index(i), index(j))?
        } else {
            spectrum::hamiltonian(&params, &basis, pol)?
        };
        Ok(op)
    };
    let built = names
        .iter()
        .map(|n| build(n).map(|op| (n.clone(), op)))
        .collect::<Result<Vec<_>, _>>()?;
    let invalid = !audit.is_unitary();

    let text = match cfg.format {
        Format::Json => {
            let operators: Vec<Value> = built
                .iter()
                .map(|(name, op)| {
                    let entries: Vec<Value> = op
                        .entries()
                        .iter()
                        .map(|&(r, c, v)| json!([r, c, v.re, v.im]))
                        .collect();
                    json!({
                        "name": name,
                        "quanta_shift": shift_label(op.quanta_shift()),
                        "nnz": op.nnz(),
                        "entries": entries,
                    })
                })
                .collect();
            let mut body = params_json(&params, cfg.n_max);
            body["dim"] = Value::from(basis.len());
            body["operators"] = Value::from(operators);
            json_document(invalid, body)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = built
                .iter()
                .flat_map(|(name, op)| {
                    op.entries().iter().map(move |&(r, c, v)| {
                        vec![name.clone(), r.to_string(), c.to_string(), num(v.re), num(v.im)]
                    })
                })
                .collect();
            format!(
                "{}{}",
                invalid_marker(invalid),
                csv(&["operator", "row", "col", "re", "im"], &rows)
            )
        }
        Format::Text => {
            let mut s = invalid_marker(invalid).to_string();
            for (name, op) in &built {
                s.push_str(&format!(
                    "# {name}: dim {}, shift {}, nnz {}\n",
                    op.dim(),
                    op.quanta_shift(),
                    op.nnz()
                ));
                let rows: Vec<Vec<String>> = op
                    .entries()
                    .iter()
                    .map(|&(r, c, v)| vec![r.to_string(), c.to_string(), num(v.re), num(v.im)])
                    .collect();
                s.push_str(&text_table(&["row", "col", "re", "im"], &rows));
            }
            s
        }
    };
    ok(text)
}

fn verify(cfg: &RunConfig) -> Result<Output, Failure> {
    let basis = make_basis(cfg)?;
    let (params, audit) = make_params(cfg, &basis)?;
    let reports = check_catalogue(&params, &basis, cfg.tol, &cfg.margins)?;
    let passed = reports.iter().all(|r| r.pass);
    let invalid = !audit.is_unitary();

    let text = match cfg.format {
        Format::Json => {
            let mut body = params_json(&params, cfg.n_max);
            body["unitarity"] = json!({
                "unitary": audit.is_unitary(),
                "negative_radicands": audit.offending.len(),
                "min_valid_kappa_derived": audit.min_valid_kappa,
            });
            body["relations"] = serde_json::to_value(&reports).expect("reports serialize");
            json_document(invalid, body)
        }
        Format::Csv | Format::Text => {
            let header = ["relation", "margin", "cases", "max_abs_residual", "max_rel_residual", "pass"];
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.relation.to_string(),
                        r.margin.to_string(),
                        r.cases.to_string(),
                        num(r.max_abs_residual),
                        num(r.max_rel_residual),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            let table = if cfg.format == Format::Csv {
                csv(&header, &rows)
            } else {
                text_table(&header, &rows)
            };
            format!("{}{}", invalid_marker(invalid), table)
        }
    };
    Ok(Output { text, passed })
}

fn spectrum(cfg: &RunConfig) -> Result<Output, Failure> {
    let basis = make_basis(cfg)?;
    let (params, _) = make_params(cfg, &basis)?;
    let report = spectrum::spectrum_report_with(&params, &basis, cfg.tol, policy(cfg))?;
    let invalid = report.invalid_representation;

    let text = match cfg.format {
        Format::Json => {
            let levels: Vec<Value> = report
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "n": l.grade,
                        "degeneracy": l.degeneracy as u64,
                        "E_matrix": l.energy_matrix,
                        "E_paper": l.energy_paper,
                        "E_shifted": l.energy_shifted,
                        "paper_match": l.paper_match,
                        "shifted_match": l.shifted_match,
                    })
                })
                .collect();
            let mut body = params_json(&params, cfg.n_max);
            body["max_offdiag"] = Value::from(report.max_offdiag);
            body["max_spread"] = Value::from(report.max_spread);
            body["levels"] = Value::from(levels);
            json_document(invalid, body)
        }
        Format::Csv | Format::Text => {
            let header = ["n", "degeneracy", "E_matrix", "E_paper", "E_shifted", "paper_match", "shifted_match"];
            let rows: Vec<Vec<String>> = report
                .levels
                .iter()
                .map(|l| {
                    vec![
                        l.grade.to_string(),
                        l.degeneracy.to_string(),
                        num(l.energy_matrix),
                        num(l.energy_paper),
                        num(l.energy_shifted),
                        l.paper_match.to_string(),
                        l.shifted_match.to_string(),
                    ]
                })
                .collect();
            let table = if cfg.format == Format::Csv {
                csv(&header, &rows)
            } else {
                text_table(&header, &rows)
            };
            format!("{}{}", invalid_marker(invalid), table)
        }
    };
    ok(text)
}

/// κ values probed by `threshold`: -1 to 2 in quarter steps, plus extras.
fn kappa_grid(extra: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (-4..=8).map(|k| k as f64 / 4.0).collect();
    grid.extend_from_slice(extra);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn threshold(cfg: &RunConfig) -> Result<Output, Failure> {
    let d = cfg.d;
    let kc = positivity_threshold_paper(d)?;
    let disc_at = EnergyQuadratic::paper_literal(kc, d).discriminant();
    let bound = AlgebraParams::min_unitary_kappa(d);
    let mut extra = vec![kc];
    extra.extend(cfg.kappa);
    let grid: Vec<(f64, f64, bool, bool, Option<u64>)> = kappa_grid(&extra)
        .into_iter()
        .map(|k| {
            let q = EnergyQuadratic::paper_literal(k, d);
            let v = positivity_check_integer(&q);
            (k, q.discriminant(), q.positive_for_real_n(), v.all_positive, v.first_violation)
        })
        .collect();

    let text = match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .map(|&(k, disc, real, int, first)| {
                    json!({
                        "kappa": k,
                        "discriminant": disc,
                        "real_n_positive": real,
                        "integer_positive": int,
                        "first_violation": first,
                    })
                })
                .collect();
            json_document(
                false,
                json!({
                    "d": d,
                    "positivity_threshold": kc,
                    "discriminant_at_threshold": disc_at,
                    "unitarity_bound_derived": bound,
                    "grid": rows,
                }),
            )
        }
        Format::Csv | Format::Text => {
            let header = ["kappa", "discriminant", "real_n_positive", "integer_positive", "first_violation"];
            let rows: Vec<Vec<String>> = grid
                .iter()
                .map(|&(k, disc, real, int, first)| {
                    vec![
                        num(k),
                        num(disc),
                        real.to_string(),
                        int.to_string(),
                        first.map_or_else(|| "-".to_string(), |n| n.to_string()),
                    ]
                })
                .collect();
            if cfg.format == Format::Csv {
                csv(&header, &rows)
            } else {
                format!(
                    "positivity_threshold {}\ndiscriminant_at_threshold {}\nunitarity_bound_derived {}\n\n{}",
                    num(kc),
                    num(disc_at),
                    num(bound),
                    text_table(&header, &rows)
                )
            }
        }
    };
    ok(text)
}

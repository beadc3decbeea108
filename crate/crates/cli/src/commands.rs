use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use discount_osc::game::Discount;
use discount_osc::hamiltonian::{u_interp, u_pair, Hamiltonian};
use discount_osc::pdesolver::{compare_exact, PDE_TRUNCATION};
use discount_osc::shapley::{self, SeqKind, SequenceRecord, TruncationRule};
use discount_osc::{Error, ExactQuad};
use serde_json::{json, Value};

use crate::output::{self, fmt_f64, Cell, Table};
use crate::plot::{line_plot, Series};
use crate::{Format, HamiltonianArgs, OutputArgs, PdeArgs, SequencesArgs, SweepArgs};

pub const N_MAX_LIMIT: u32 = 10;

/// Bad command-line input detected after parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 1 for a failed invariant or numerical breakdown, 2 for bad input.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::Invariant(_)
            | Error::SingularSystem
            | Error::NonFinite(_)
            | Error::MaxIterations { .. }
            | Error::StrategyNotTotal(_),
        ) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn num(x: &ExactQuad, out: &OutputArgs) -> Cell {
    Cell::Num(x.approx(out.digits as usize))
}

fn record_cells(r: &SequenceRecord, out: &OutputArgs) -> Vec<Cell> {
    let mut row = vec![
        Cell::Text(r.lambda.to_string()),
        num(&r.lambda, out),
        num(&r.w_plus, out),
        num(&r.w_minus, out),
        Cell::Int(r.truncation as i64),
        r.stability_gap
            .as_ref()
            .map_or(Cell::Empty, |g| num(g, out)),
    ];
    if out.exact {
        row.push(Cell::Text(r.w_plus.to_string()));
        row.push(Cell::Text(r.w_minus.to_string()));
        row.push(
            r.stability_gap
                .as_ref()
                .map_or(Cell::Empty, |g| Cell::Text(g.to_string())),
        );
    }
    row
}

fn record_columns(out: &OutputArgs) -> Vec<&'static str> {
    let mut cols = vec![
        "lambda_exact",
        "lambda_float",
        "w_plus",
        "w_minus",
        "N",
        "stability_gap",
    ];
    if out.exact {
        cols.extend(["w_plus_exact", "w_minus_exact", "stability_gap_exact"]);
    }
    cols
}

fn emit(table: &Table, out: &OutputArgs) -> Result<()> {
    let mut w = output::open(out.out.as_deref())?;
    table.write(out.format, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn sequences(args: &SequencesArgs) -> Result<bool> {
    if args.n_max > N_MAX_LIMIT {
        return Err(Usage(format!("--n-max must be at most {N_MAX_LIMIT}")).into());
    }
    let records = shapley::sequence_records(args.n_min, args.n_max, true, args.jobs)?;
    let mut columns = vec!["n", "seq"];
    columns.extend(record_columns(&args.output));
    let mut table = Table::new(columns);
    for r in &records {
        let mut row = vec![
            Cell::Int(r.n.map_or(0, i64::from)),
            Cell::Text(r.seq.label().to_string()),
        ];
        row.extend(record_cells(r, &args.output));
        table.push(row);
    }
    emit(&table, &args.output)?;
    if args.plot {
        let out = args.output.out.as_ref().expect("clap enforces --out");
        std::fs::write(plot_path(out), sequences_svg(&records))?;
    }
    Ok(true)
}

fn plot_path(out: &std::path::Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "svg") {
        out.with_extension("plot.svg")
    } else {
        out.with_extension("svg")
    }
}

fn sequences_svg(records: &[SequenceRecord]) -> String {
    let series = |kind: SeqKind, label, color| Series {
        label,
        color,
        points: records
            .iter()
            .filter(|r| r.seq == kind)
            .map(|r| (-r.lambda.to_f64().log2(), r.w_plus.to_f64()))
            .collect(),
    };
    line_plot(
        &[
            series(SeqKind::Lambda, "λ_n", "#1f77b4"),
            series(SeqKind::Mu, "μ_n = λ_n/2", "#d62728"),
        ],
        Some((std::f64::consts::FRAC_1_SQRT_2, "0.70711")),
        "log2(1/λ)",
        "w_λ(ω₁)",
    )
}

pub fn sweep(args: &SweepArgs) -> Result<bool> {
    let records = shapley::sweep(&args.lambda, args.truncation, None, true, args.jobs)
        .into_iter()
        .collect::<discount_osc::Result<Vec<_>>>()?;
    let mut table = Table::new(record_columns(&args.output));
    for r in &records {
        table.push(record_cells(r, &args.output));
    }
    emit(&table, &args.output)?;
    Ok(true)
}

pub fn pde(args: &PdeArgs) -> Result<bool> {
    let out = &args.output;
    let cmp = compare_exact(&args.lambda, args.grid)?;
    let exact_u = if out.exact {
        Some(u_pair(
            &Discount::new(args.lambda.clone())?,
            PDE_TRUNCATION,
        )?)
    } else {
        None
    };
    let mut columns = vec!["x", "v_numeric", "u_exact", "gap"];
    if out.exact {
        columns.extend(["x_exact", "u_exact_exact"]);
    }
    let mut table = Table::new(columns);
    for (k, row) in cmp.rows.iter().enumerate() {
        let mut cells = vec![
            Cell::Num(fmt_f64(row.x, out.digits)),
            Cell::Num(fmt_f64(row.numeric, out.digits)),
            Cell::Num(fmt_f64(row.exact, out.digits)),
            Cell::Num(fmt_f64(row.gap, out.digits)),
        ];
        if let Some(u) = &exact_u {
            let x = ExactQuad::from_ratio(2 * k as i64 - args.grid as i64, args.grid as i64);
            cells.push(Cell::Text(x.to_string()));
            cells.push(Cell::Text(u_interp(&x, u).to_string()));
        }
        table.push(cells);
    }
    let sup = fmt_f64(cmp.sup_error, out.digits);
    let mut w = output::open(out.out.as_deref())?;
    match out.format {
        Format::Csv => table.write(Format::Csv, &mut w)?,
        Format::Json => {
            let rows: Vec<Value> = table.rows.iter().map(|r| table.json_row(r)).collect();
            let doc = json!({
                "lambda": args.lambda.to_string(),
                "grid": args.grid,
                "iterations": cmp.iterations,
                "sup_error": cmp.sup_error,
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    eprintln!("sup_error={sup} iterations={}", cmp.iterations);
    Ok(true)
}

pub fn hamiltonian(args: &HamiltonianArgs) -> Result<bool> {
    let n = match args.truncation {
        TruncationRule::Fixed(n) => n,
        TruncationRule::Auto => {
            return Err(Usage("hamiltonian needs an explicit --truncation".into()).into())
        }
    };
    let out = &args.output;
    let ham = Hamiltonian::new(n)?;
    let g = i64::from(args.grid);
    let p_range = i64::from(args.p_max) * g;
    let mut columns = vec!["x", "p", "h"];
    if out.exact {
        columns.push("h_exact");
    }
    let mut table = Table::new(columns);
    for kx in -g..=g {
        let x = ExactQuad::from_ratio(kx, g);
        for kp in -p_range..=p_range {
            let p = ExactQuad::from_ratio(kp, g);
            let h = ham.h(&x, &p);
            let mut row = vec![num(&x, out), num(&p, out), num(&h, out)];
            if out.exact {
                row.push(Cell::Text(h.to_string()));
            }
            table.push(row);
        }
    }
    emit(&table, out)?;
    Ok(true)
}

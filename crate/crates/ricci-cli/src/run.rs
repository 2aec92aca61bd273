//! Command implementations.

use crate::output::{csv_float, matrix_json, print_matrix};
use crate::source::{resolve, Source};
use crate::{CatalogAction, Cli, CliError, Command, MetricArgs, SolveArgs, SweepArgs, VerifyArgs};
use ricci_core::catalog::{self, ParamKind};
use ricci_core::curvature::ricci;
use ricci_core::invariant::MetricPoint;
use ricci_core::invertibility::{classify, signature_of, Certificate};
use ricci_core::linalg;
use ricci_core::solver::{solve_prp, SolveOptions};
use ricci_core::space::{pervasive_check, validate_jacobi};
use ricci_core::variation::variation_operator;
use serde_json::json;

pub fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Show(args) => show(&args),
        Command::Ricci(args) => ricci_cmd(&args),
        Command::Dric(args) => dric(&args),
        Command::Classify(args) => classify_cmd(&args),
        Command::Solve(args) => solve(&args),
        Command::Verify(args) => verify(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Catalog { action } => catalog_cmd(&action),
    }
}

fn show(args: &crate::SpaceArgs) -> Result<i32, CliError> {
    let source = resolve(args)?;
    let geom = source.geometry();
    let report = validate_jacobi(&geom.spec, &geom.tol);
    let pervasive = pervasive_check(&geom.spec, &geom.tol);
    if args.format == "json" {
        let basis: Vec<_> = geom.basis.mats().iter().map(matrix_json).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "name": geom.spec.name,
                "dim_g": geom.spec.n_g,
                "dim_k": geom.spec.n_k,
                "dim_p": geom.n_p(),
                "invariant_sym_dim": geom.m(),
                "unimodular": geom.unimodular,
                "pervasive": pervasive,
                "validation": report,
                "invariant_basis": basis,
            }))
            .expect("serializes")
        );
    } else {
        println!("space          {}", geom.spec.name);
        println!(
            "dim g / k / p  {} / {} / {}",
            geom.spec.n_g,
            geom.spec.n_k,
            geom.n_p()
        );
        println!("dim sym(p)^K   {}", geom.m());
        println!("unimodular     {}", geom.unimodular);
        println!("pervasive      {pervasive}");
        println!(
            "validation     jacobi {:.3e} (tol {:.3e}), reductivity {:.3e}",
            report.max_residual, report.jacobi_tol, report.reductivity_residual
        );
    }
    Ok(0)
}

fn ricci_cmd(args: &MetricArgs) -> Result<i32, CliError> {
    let source = resolve(&args.space)?;
    let mp = source.metric(&args.coords)?;
    let rec = ricci(source.geometry(), &mp);
    let coords = source.coords_of(&rec.ric_bar);
    if args.space.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "ric": matrix_json(&rec.ric_bar),
                "ric_coords": coords,
                "ricci_operator_moved": matrix_json(&rec.ricci_moved),
                "moment_map": matrix_json(&rec.moment),
                "scal": rec.scal,
                "moved_bracket_norm2": rec.moved_norm2,
                "det_rel": mp.det_rel,
            }))
            .expect("serializes")
        );
    } else {
        print_matrix("ric (background tensor operator)", &rec.ric_bar);
        println!("ric coords: {coords:?}");
        println!("scal = {}", rec.scal);
        println!("|moved bracket|^2 = {}", rec.moved_norm2);
    }
    Ok(0)
}

fn dric(args: &MetricArgs) -> Result<i32, CliError> {
    let source = resolve(&args.space)?;
    let geom = source.geometry();
    let mp = source.metric(&args.coords)?;
    let op = variation_operator(geom, &mp);
    let sv = linalg::singular_values(&op.matrix);
    if args.space.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "matrix": matrix_json(&op.matrix),
                "singular_values": sv,
                "basis_dim": geom.m(),
            }))
            .expect("serializes")
        );
    } else {
        print_matrix("variation of ric on the invariant basis", &op.matrix);
        println!("singular values: {sv:?}");
    }
    Ok(0)
}

fn classify_cmd(args: &MetricArgs) -> Result<i32, CliError> {
    let source = resolve(&args.space)?;
    let mp = source.metric(&args.coords)?;
    let report = classify(source.geometry(), &mp);
    if args.space.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializes")
        );
    } else {
        println!("kernel_dim        {}", report.kernel_dim);
        println!("scal              {}", report.scal);
        println!("certificate       {:?}", report.certificate);
        println!("max rank          {}", report.in_m_ric);
        println!("scal nonzero      {}", report.in_m_scal);
        println!("det-weighted diffeo {}", report.in_m_ric_tilde);
        println!("naturally reductive {}", report.naturally_reductive);
        println!("p irreducible     {}", report.p_irreducible);
        if let Some(w) = &report.warning {
            println!("warning: {w}");
        }
    }
    Ok(0)
}

fn solve(args: &SolveArgs) -> Result<i32, CliError> {
    let source = resolve(&args.space)?;
    let geom = source.geometry();
    let target = source.tensor(&args.target)?;
    let start = source.metric(&args.start)?;
    let normalization = args.normalize.unwrap_or(start.det_rel);
    if normalization <= 0.0 {
        return Err(CliError::Usage("--normalize must be positive".into()));
    }
    let opts = SolveOptions {
        max_iterations: args.max_iter,
        tol_factor: 1.0,
        record_path: args.log_path,
    };
    let sol = solve_prp(geom, &target, &start, normalization, &opts)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let h = geom
        .basis
        .from_coords(&nalgebra::DVector::from_vec(sol.coords.clone()));
    let point = MetricPoint::from_operator(geom, h)
        .map_err(|e| CliError::Solver(format!("solution rejected: {e}")))?;
    let solution_coords = match source.param_kind() {
        ParamKind::Tensor => source.coords_of(&point.g),
        ParamKind::Operator => source.coords_of(&point.h),
    };
    let body = json!({
        "target_coords": args.target,
        "start_coords": args.start,
        "solution_coords": solution_coords,
        "solution_basis_coords": sol.coords,
        "c": sol.c,
        "residual": sol.residual,
        "iterations": sol.iterations,
        "det_rel": sol.det_rel,
        "certified_start": sol.certified_start,
        "warning": sol.warning,
        "path": sol.path,
    });
    if args.space.format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&body).expect("serializes")
        );
    } else {
        println!("solution coords: {solution_coords:?}");
        println!("c = {}", sol.c);
        println!(
            "residual = {:.3e} after {} iterations",
            sol.residual, sol.iterations
        );
        if let Some(w) = &sol.warning {
            println!("warning: {w}");
        }
    }
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let names: Vec<&str> = match &args.space {
        Some(name) => {
            if !catalog::names().contains(&name.as_str()) {
                return Err(CliError::Usage(format!("unknown catalog space {name:?}")));
            }
            vec![catalog::names().into_iter().find(|n| n == name).unwrap()]
        }
        None => catalog::names(),
    };
    let mut failed = 0usize;
    for name in names {
        let entry = catalog::load(name).map_err(|e| CliError::Validation(e.to_string()))?;
        for check in ricci_core::verify::run_suite(&entry, args.seed) {
            let verdict = if check.pass { "PASS" } else { "FAIL" };
            println!(
                "{verdict} {name}/{}: residual {:.3e} (tol {:.3e})",
                check.name, check.residual, check.tol
            );
            if !check.pass {
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Validation(format!(
            "{failed} verification checks failed"
        )));
    }
    Ok(0)
}

struct Range {
    index: usize,
    values: Vec<f64>,
}

fn parse_range(text: &str) -> Result<Range, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad --range {text:?}, expected index=start:end:count"
        ))
    };
    let (idx, rest) = text.split_once('=').ok_or_else(bad)?;
    let index: usize = idx.trim().parse().map_err(|_| bad())?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let end: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    let values = if count == 1 {
        vec![start]
    } else {
        (0..count)
            .map(|k| start + (end - start) * k as f64 / (count - 1) as f64)
            .collect()
    };
    Ok(Range { index, values })
}

fn sweep(args: &SweepArgs) -> Result<i32, CliError> {
    let source = resolve(&args.space)?;
    if args.ranges.is_empty() {
        return Err(CliError::Usage("sweep needs at least one --range".into()));
    }
    let mut base = args.coords.clone();
    if base.is_empty() {
        return Err(CliError::Usage("sweep needs baseline --coords".into()));
    }
    if base.len() != source.coord_len() {
        return Err(CliError::Usage(format!(
            "--coords takes {} values for this space, got {}",
            source.coord_len(),
            base.len()
        )));
    }
    let ranges: Vec<Range> = args
        .ranges
        .iter()
        .map(|r| parse_range(r))
        .collect::<Result<_, _>>()?;
    for r in &ranges {
        if r.index >= base.len() {
            return Err(CliError::Usage(format!(
                "range index {} out of bounds",
                r.index
            )));
        }
    }
    // header
    let mut header: Vec<String> = (0..base.len()).map(|i| format!("param_{i}")).collect();
    header.extend(
        [
            "scal",
            "kernel_dim",
            "certificate",
            "sig_neg",
            "sig_zero",
            "sig_pos",
            "sv_min",
            "sv_min2",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    println!("{}", header.join(","));
    // enumerate the grid row-major in flag order
    let mut points = Vec::new();
    let mut counters = vec![0usize; ranges.len()];
    'grid: loop {
        for (r, &c) in ranges.iter().zip(counters.iter()) {
            base[r.index] = r.values[c];
        }
        points.push(base.clone());
        let mut k = ranges.len();
        loop {
            if k == 0 {
                break 'grid;
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < ranges[k].values.len() {
                break;
            }
            counters[k] = 0;
        }
    }
    // classify grid points on worker threads, emit in index order
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let chunk = points.len().div_ceil(workers);
    let rows: Vec<Vec<String>> = std::thread::scope(|scope| {
        let source = &source;
        let handles: Vec<_> = points
            .chunks(chunk.max(1))
            .map(|part| scope.spawn(move || part.iter().map(|p| sweep_row(source, p)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker"))
            .collect()
    });
    for row in rows.into_iter().flatten() {
        println!("{row}");
    }
    Ok(0)
}

fn sweep_row(source: &Source, params: &[f64]) -> String {
    let mut row: Vec<String> = params.iter().map(|v| csv_float(*v)).collect();
    match source.metric(params) {
        Ok(mp) => {
            let geom = source.geometry();
            let report = classify(geom, &mp);
            let rec = ricci(geom, &mp);
            let sig = signature_of(&rec.ric_bar, geom.tol.rank_coeff);
            let cert = match report.certificate {
                Certificate::Certified => "certified",
                Certificate::Excluded => "excluded",
                Certificate::Undecided => "undecided",
            };
            let m = report.singular_values.len();
            let sv_min = report.singular_values[m - 1];
            let sv_min2 = if m > 1 {
                report.singular_values[m - 2]
            } else {
                sv_min
            };
            row.push(csv_float(report.scal));
            row.push(report.kernel_dim.to_string());
            row.push(cert.to_string());
            row.push(sig.0.to_string());
            row.push(sig.1.to_string());
            row.push(sig.2.to_string());
            row.push(csv_float(sv_min));
            row.push(csv_float(sv_min2));
        }
        Err(_) => {
            row.push("nan".into());
            row.push("0".into());
            row.push("invalid".into());
            for _ in 0..5 {
                row.push("nan".into());
            }
        }
    }
    row.join(",")
}

fn catalog_cmd(action: &CatalogAction) -> Result<i32, CliError> {
    match action {
        CatalogAction::List => {
            for name in catalog::names() {
                let entry = catalog::load(name).map_err(|e| CliError::Validation(e.to_string()))?;
                println!(
                    "{name:<26} dim {:>2}/{:<2} m {:>2}   {}",
                    entry.geometry.spec.n_g,
                    entry.geometry.n_p(),
                    entry.geometry.m(),
                    entry.provenance
                );
            }
            Ok(0)
        }
        CatalogAction::Export { name } => {
            let entry = catalog::load(name).map_err(|e| match e {
                catalog::CatalogError::Unknown(n) => {
                    CliError::Usage(format!("unknown catalog space {n:?}"))
                }
                other => CliError::Validation(other.to_string()),
            })?;
            println!("{}", entry.geometry.spec.to_json());
            Ok(0)
        }
    }
}

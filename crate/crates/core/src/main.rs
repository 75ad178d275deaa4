//! Command-line front end: stability bounds, simulation, threshold search,
//! matrix spectra, built-in verification, and stability-region sampling.
//!
//! Exit codes: 0 ok/stable, 1 verification failure, 2 config error,
//! 3 diverged, 4 I/O failure, 5 search failure.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use nlse_stab::boundary::{compute_bb, compute_db, BoundaryKind};
use nlse_stab::config::{ResolvedRun, RunConfig};
use nlse_stab::error::Error;
use nlse_stab::grid::{classify_points, write_snapshot};
use nlse_stab::integrator::{find_threshold, integrate, nlse_rhs, StepConfig};
use nlse_stab::laplacian::{cd_laplacian, SchemeOrder};
use nlse_stab::specmat::{
    build_a, circulant_column, circulant_eigs, extract_interior, gershgorin_bound,
    gershgorin_disks, max_abs_eig, unique_forms,
};
use nlse_stab::stability::{self, amplification, compute_l};

#[derive(Parser)]
#[command(name = "nlse-stab", version, about = "Stability tooling for explicit RK4 NLSE schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the linear and linearized time-step bounds for a configuration.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bc: Option<String>,
        /// Also write the report as JSON to this path ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Integrate to t_end, writing a monitor CSV and a final snapshot.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bc: Option<String>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        tend: Option<f64>,
        /// Monitor CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Final field snapshot path.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Search for the empirical stability threshold k_num.
    Threshold {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bc: Option<String>,
        #[arg(long)]
        tend: Option<f64>,
        /// Significant figures to resolve.
        #[arg(long, default_value_t = 3)]
        digits: u32,
    },
    /// Emit Gershgorin disks and the spectral radius of the scheme matrix.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        bc: Option<String>,
        /// Disk CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional coordinate-format matrix dump (row col value).
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Re-derive the built-in disk tables and circulant maxima.
    Verify {
        /// Corrupt a named check to exercise the failure path (testing).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Sample |R(p)| over a complex-plane window for external plotting.
    Region {
        #[arg(long, default_value_t = 4)]
        order: u8,
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        #[arg(long, default_value_t = -4.0)]
        re_min: f64,
        #[arg(long, default_value_t = 1.0)]
        re_max: f64,
        #[arg(long, default_value_t = -4.0)]
        im_min: f64,
        #[arg(long, default_value_t = 4.0)]
        im_max: f64,
        /// CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 4,
        Error::SearchFailure(_) => 5,
        _ => 2,
    }
}

fn load_run(
    config: &Path,
    scheme: &Option<String>,
    bc: &Option<String>,
    k: Option<f64>,
    tend: Option<f64>,
) -> Result<ResolvedRun, Error> {
    let text = fs::read_to_string(config)?;
    let mut cfg = RunConfig::from_json(&text)?;
    if scheme.is_some() {
        cfg.scheme = scheme.clone();
    }
    if bc.is_some() {
        cfg.boundary = bc.clone();
    }
    if let Some(k) = k {
        cfg.k = Some(k);
        cfg.k_fraction = None;
    }
    if tend.is_some() {
        cfg.t_end = tend;
    }
    cfg.resolve()
}

fn write_or_stdout(path: &Option<PathBuf>, body: &str) -> Result<(), Error> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, body).map_err(Error::from),
        _ => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_bound(
    config: &Path,
    scheme: &Option<String>,
    bc: &Option<String>,
    json: &Option<PathBuf>,
) -> Result<u8, Error> {
    let run = load_run(config, scheme, bc, None, None)?;
    let report = run.stability_report()?;
    println!(
        "scheme {} boundary {} d={} h={} a={}",
        report.scheme,
        run.boundary,
        report.d,
        report.h,
        report.a
    );
    println!("k_lin  = {:.4e}  ({:.16e})", report.k_lin, report.k_lin);
    println!("k_linz = {:.4e}  ({:.16e})", report.k_linz, report.k_linz);
    println!(
        "binding term: {}",
        serde_json::to_string(&report.binding).map_err(|e| Error::Config(e.to_string()))?
    );
    println!(
        "suggested k (15% safety margin below observed 10-20% overshoot): {:.4e}",
        0.85 * report.k_linz
    );
    if let Some(path) = json {
        let body = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::Config(e.to_string()))?;
        write_or_stdout(&Some(path.clone()), &(body + "\n"))?;
    }
    Ok(0)
}

fn cmd_simulate(
    config: &Path,
    scheme: &Option<String>,
    bc: &Option<String>,
    k: Option<f64>,
    tend: Option<f64>,
    out: &Option<PathBuf>,
    snapshot: &Option<PathBuf>,
) -> Result<u8, Error> {
    let run = load_run(config, scheme, bc, k, tend)?;
    let k = run.effective_k()?;
    let cfg = StepConfig {
        k,
        t_end: run.t_end,
        scheme: run.scheme,
        boundary: run.boundary,
        monitor_every: run.monitor_every,
    };
    let (record, final_field) = integrate(&run.field, &cfg, &run.params);
    let mut csv = Vec::new();
    record.write_csv(&mut csv)?;
    write_or_stdout(out, &String::from_utf8(csv).expect("csv is ascii"))?;
    if let Some(path) = snapshot {
        let file = fs::File::create(path)?;
        write_snapshot(&final_field, std::io::BufWriter::new(file))?;
    }
    eprintln!(
        "k = {k:.6e}, {} steps to t = {}, diverged = {}",
        record.steps, run.t_end, record.diverged
    );
    Ok(if record.diverged { 3 } else { 0 })
}

fn cmd_threshold(
    config: &Path,
    scheme: &Option<String>,
    bc: &Option<String>,
    tend: Option<f64>,
    digits: u32,
) -> Result<u8, Error> {
    let run = load_run(config, scheme, bc, None, tend)?;
    if run.t_end <= 0.0 {
        return Err(Error::SearchFailure(
            "t_end must be positive to classify stability".into(),
        ));
    }
    let report = run.stability_report()?;
    let result = find_threshold(
        &run.field,
        &run.params,
        run.scheme,
        run.boundary,
        0.5 * report.k_linz,
        1.5 * report.k_linz,
        run.t_end,
        digits,
    )?;
    let pct = |bound: f64| 100.0 * (result.k_num - bound) / bound;
    println!("bound    value         %-diff of k_num");
    println!("k_lin    {:.4e}    {:+.2}%", report.k_lin, pct(report.k_lin));
    println!("k_linz   {:.4e}    {:+.2}%", report.k_linz, pct(report.k_linz));
    println!(
        "k_num    {:.4e}    ({} probes, first unstable {:.4e})",
        result.k_num, result.probes, result.k_unstable
    );
    Ok(0)
}

fn cmd_spectrum(
    config: &Path,
    scheme: &Option<String>,
    bc: &Option<String>,
    out: &Option<PathBuf>,
    matrix: &Option<PathBuf>,
) -> Result<u8, Error> {
    let run = load_run(config, scheme, bc, None, None)?;
    let class = classify_points(&run.grid);
    let psi = &run.field.values;
    let l = compute_l(psi, &run.params, run.grid.h());
    let (b, d) = if run.boundary == BoundaryKind::Periodic {
        (Vec::new(), Vec::new())
    } else {
        let rhs = nlse_rhs(&run.field, &run.params, run.scheme, run.boundary);
        let lap = cd_laplacian(psi, &run.grid, &class, false, None);
        (
            compute_bb(run.boundary, psi, &rhs.values, &run.params, &run.grid, &class)?,
            compute_db(run.boundary, psi, &lap, &run.params, &run.grid, &class)?,
        )
    };
    let a = build_a(run.scheme, run.boundary, &run.grid, &l, &b, &d)?;
    let dense = a.to_dense();
    let mut csv = String::from("row,center,radius\n");
    for (i, disk) in gershgorin_disks(&dense).iter().enumerate() {
        csv.push_str(&format!("{i},{},{}\n", disk.center, disk.radius));
    }
    let radius = if run.boundary == BoundaryKind::Periodic {
        // periodic A is symmetric as a whole
        max_abs_eig(&dense)?
    } else {
        let (interior, _) = extract_interior(&a)?;
        let boundary_max = b.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        max_abs_eig(&interior)?.max(boundary_max)
    };
    write_or_stdout(out, &csv)?;
    println!("spectral radius = {radius:.12e}");
    if let Some(path) = matrix {
        let mut body = String::new();
        for &(i, j, v) in &a.entries {
            body.push_str(&format!("{i} {j} {v}\n"));
        }
        fs::write(path, body)?;
    }
    Ok(0)
}

fn cmd_verify(inject_fault: &Option<String>) -> Result<u8, Error> {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        let faulted = inject_fault.as_deref() == Some(name);
        let ok = ok && !faulted;
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        if !ok {
            failures.push(name.to_string());
        }
    };

    // Disk tables: rebuild each interior matrix from scratch and compare
    // the unique Gershgorin forms against the closed-form tables.
    for (d, shape) in [(1usize, vec![10usize]), (2, vec![7, 7]), (3, vec![7, 7, 7])] {
        for scheme in [SchemeOrder::Cd2, SchemeOrder::Shoc4] {
            let name = format!("disk-table-{d}d-{scheme}");
            let grid = nlse_stab::GridSpec::new(&shape, &vec![0.0; d], 0.2)
                .expect("verification grid");
            let class = classify_points(&grid);
            let nb = class.boundary.len();
            let l = vec![0.0; grid.len()];
            let a = build_a(
                scheme,
                BoundaryKind::Dirichlet,
                &grid,
                &l,
                &vec![0.0; nb],
                &vec![0.37; nb],
            )?;
            let (interior, rows) = extract_interior(&a)?;
            let l_rows: Vec<f64> = rows.iter().map(|&r| l[r]).collect();
            let forms = unique_forms(&interior, &l_rows)?;
            let expect: BTreeSet<(i64, i64)> = stability::disk_forms_twelfths(d, scheme)
                .iter()
                .copied()
                .collect();
            check(&name, forms == expect);
        }
    }

    // Circulant maxima for the periodic linear problem.
    for (scheme, want) in [(SchemeOrder::Cd2, 4.0), (SchemeOrder::Shoc4, 16.0 / 3.0)] {
        let name = format!("circulant-{scheme}");
        let ok = [8usize, 64].iter().all(|&n| {
            let eigs = circulant_eigs(&circulant_column(scheme, n));
            let max = eigs.iter().map(|e| e.norm()).fold(0.0, f64::max);
            (max - want).abs() < 1e-10
        });
        check(&name, ok);
    }

    // Consistency: dense eigenvalues within the Gershgorin bound, and the
    // RK4 amplification factor exactly 1 at the imaginary-axis extent.
    {
        let grid = nlse_stab::GridSpec::new(&[9], &[0.0], 0.2).expect("verification grid");
        let class = classify_points(&grid);
        let nb = class.boundary.len();
        let l: Vec<f64> = (0..9).map(|i| 0.05 * i as f64).collect();
        let a = build_a(
            SchemeOrder::Shoc4,
            BoundaryKind::Dirichlet,
            &grid,
            &l,
            &vec![0.0; nb],
            &vec![0.21; nb],
        )?;
        let (interior, _) = extract_interior(&a)?;
        check(
            "eig-within-gershgorin",
            max_abs_eig(&interior)? <= gershgorin_bound(&interior) + 1e-9,
        );
    }
    check(
        "rk4-imaginary-extent",
        (amplification(Complex64::new(0.0, 8.0f64.sqrt()), 4).norm() - 1.0).abs() < 1e-12,
    );

    if failures.is_empty() {
        println!("all checks passed");
        Ok(0)
    } else {
        println!("failed: {}", failures.join(", "));
        Ok(1)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_region(
    order: u8,
    resolution: usize,
    re_range: (f64, f64),
    im_range: (f64, f64),
    out: &Option<PathBuf>,
) -> Result<u8, Error> {
    if !(1..=4).contains(&order) {
        return Err(Error::Config(format!("order must be 1-4, got {order}")));
    }
    if resolution < 2 {
        return Err(Error::Config("resolution must be at least 2".into()));
    }
    let mut csv = String::from("re,im,abs_r\n");
    for iy in 0..resolution {
        let im = im_range.0 + (im_range.1 - im_range.0) * iy as f64 / (resolution - 1) as f64;
        for ix in 0..resolution {
            let re =
                re_range.0 + (re_range.1 - re_range.0) * ix as f64 / (resolution - 1) as f64;
            let r = amplification(Complex64::new(re, im), order).norm();
            csv.push_str(&format!("{re},{im},{r}\n"));
        }
    }
    write_or_stdout(out, &csv)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Bound {
            config,
            scheme,
            bc,
            json,
        } => cmd_bound(config, scheme, bc, json),
        Cmd::Simulate {
            config,
            scheme,
            bc,
            k,
            tend,
            out,
            snapshot,
        } => cmd_simulate(config, scheme, bc, *k, *tend, out, snapshot),
        Cmd::Threshold {
            config,
            scheme,
            bc,
            tend,
            digits,
        } => cmd_threshold(config, scheme, bc, *tend, *digits),
        Cmd::Spectrum {
            config,
            scheme,
            bc,
            out,
            matrix,
        } => cmd_spectrum(config, scheme, bc, out, matrix),
        Cmd::Verify { inject_fault } => cmd_verify(inject_fault),
        Cmd::Region {
            order,
            resolution,
            re_min,
            re_max,
            im_min,
            im_max,
            out,
        } => cmd_region(*order, *resolution, (*re_min, *re_max), (*im_min, *im_max), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

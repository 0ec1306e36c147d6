//! The five subcommands: `graph`, `unitary`, `sweep`, `lindblad`, `verify`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use ctqw::export::{format_g17, graph_to_dot, graph_to_text, spectrum_to_csv, trace_to_csv};
use ctqw::{
    basis_state, build_cayley, build_lindblad_set, build_spider, cumulative_center_probability,
    eigh_default, evolve_density, leaf_superposition, max_vertex_probability, plan,
    spider2_center_prob, spider2_center_prob_large_j, spider3_center_prob, spider3_frequencies,
    star_center_prob, C64, DensityMatrix, DissipatorForm, Family, Generator, InitialState,
    TimeGrid,
};

use crate::config::Options;
use crate::svg::{Plot, Series};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| usage(format!("cannot write '{}': {e}", path.display())))
}

/// `<stem>_<suffix>.<ext>` next to the given output path.
fn derived_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// Format a float for file-name suffixes (dots are kept; they are unambiguous
/// because the extension is appended separately).
fn value_tag(x: f64) -> String {
    format!("{x}")
}

/// Build the graph and emit the structured text export (stdout), plus DOT
/// and a spectrum CSV when output paths are given.
pub fn cmd_graph(opts: &Options) -> Result<(), CliError> {
    let spec = opts.family_spec()?;
    let g = spec.build().map_err(|e| usage(format!("{e}")))?;
    print!("{}", graph_to_text(&g));
    if let Some(path) = opts.out_path("out-dot") {
        write_file(&path, &graph_to_dot(&g))?;
    }
    if let Some(path) = opts.out_path("out-csv") {
        let generator = opts.generator()?;
        let d = eigh_default(&generator.matrix(&g)).map_err(|e| usage(format!("{e}")))?;
        let csv = spectrum_to_csv(d.eigenvalues(), &opts.comment_lines("graph"));
        write_file(&path, &csv)?;
    }
    Ok(())
}

/// Unitary trace of the requested vertices over the configured grid.
pub fn cmd_unitary(opts: &Options) -> Result<(), CliError> {
    let spec = opts.family_spec()?;
    let g = spec.build().map_err(|e| usage(format!("{e}")))?;
    let generator = opts.generator()?;
    let psi0 = opts
        .initial_state()?
        .build(&g)
        .map_err(|e| usage(format!("{e}")))?;
    let grid = opts.time_grid()?;
    let vertices: Vec<usize> = match opts.get("vertices") {
        Some(_) => opts.usize_list("vertices")?,
        None => (1..=g.num_vertices()).collect(),
    };
    let p = plan(&g, generator, &psi0).map_err(|e| usage(format!("{e}")))?;
    let mut trace = p
        .probability_trace(&vertices, &grid)
        .map_err(|e| usage(format!("{e}")))?;
    if opts.bool_value("cumulative")? {
        trace = trace.with_cumulative();
    }
    let csv = trace_to_csv(&trace, &opts.comment_lines("unitary"));
    match opts.out_path("out-csv") {
        Some(path) => write_file(&path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = opts.out_path("out-svg") {
        let j = spec.central_hopping;
        let mut plot = Plot::new(
            format!("{} probabilities", spec.label()),
            "t",
            "P_v(t)",
        );
        for &v in &vertices {
            let row = trace.probability_row(v).expect("vertex recorded");
            plot.series.push(Series {
                label: format!("v{v} (J={j})"),
                points: grid.times().iter().copied().zip(row.iter().copied()).collect(),
            });
        }
        write_file(&path, &plot.render())?;
    }
    Ok(())
}

/// Sweep one parameter (J, omega, or branches); per-value traces plus a
/// summary CSV with the fitted log-log slope. Sweep points run in parallel;
/// output order follows the input order.
pub fn cmd_sweep(opts: &Options) -> Result<(), CliError> {
    let parameter = opts
        .get("sweep")
        .ok_or_else(|| usage("sweep needs --sweep {J|omega|branches}"))?
        .to_string();
    let values = opts.f64_list("values")?;
    if values.is_empty() {
        return Err(usage("sweep needs a nonempty --values list"));
    }
    match parameter.as_str() {
        "J" | "omega" | "branches" => {}
        other => return Err(usage(format!("cannot sweep '{other}' (J, omega, or branches)"))),
    }

    let spec = opts.family_spec()?;
    let generator = opts.generator()?;
    let state = opts.initial_state()?;
    let grid = opts.time_grid()?;

    struct Point {
        value: f64,
        max_center: f64,
        trace_csv: String,
    }

    let comments = opts.comment_lines("sweep");
    let points: Vec<Result<Point, CliError>> = values
        .par_iter()
        .map(|&value| -> Result<Point, CliError> {
            let run_spec = match parameter.as_str() {
                "J" => spec.with_central_hopping(value),
                "branches" => {
                    if value.fract() != 0.0 || value < 1.0 {
                        return Err(usage(format!("branch count must be a positive integer, got {value}")));
                    }
                    let mut s = spec;
                    s.branches = value as usize;
                    s
                }
                _ => spec,
            };
            let g = run_spec.build().map_err(|e| usage(format!("{e}")))?;
            let center = g
                .center()
                .ok_or_else(|| usage("sweep needs a family with a center vertex"))?;
            let psi0 = state.build(&g).map_err(|e| usage(format!("{e}")))?;
            if parameter == "omega" {
                let set = build_lindblad_set(&g, value).map_err(|e| usage(format!("{e}")))?;
                let dt = grid.times()[1] - grid.times()[0];
                let run = evolve_density(
                    &g,
                    &set,
                    &DensityMatrix::pure(&psi0),
                    dt,
                    grid.t_max(),
                    DissipatorForm::Paper,
                )
                .map_err(|e| usage(format!("{e}")))?;
                let row = run.series.probability_row(center).expect("center recorded");
                let max_center = row.iter().fold(0.0f64, |a, &b| a.max(b));
                let csv = ctqw::export::density_trace_to_csv(
                    &run.series,
                    &run.trace_errors,
                    &comments,
                    opts.usize_value("stride")?.max(1),
                );
                Ok(Point {
                    value,
                    max_center,
                    trace_csv: csv,
                })
            } else {
                let p = plan(&g, generator, &psi0).map_err(|e| usage(format!("{e}")))?;
                let (_, max_center) =
                    max_vertex_probability(&p, center, &grid).map_err(|e| usage(format!("{e}")))?;
                let trace = p
                    .probability_trace(&[center], &grid)
                    .map_err(|e| usage(format!("{e}")))?;
                Ok(Point {
                    value,
                    max_center,
                    trace_csv: trace_to_csv(&trace, &comments),
                })
            }
        })
        .collect();
    let points: Vec<Point> = points.into_iter().collect::<Result<_, _>>()?;

    // slope over strictly positive (value, max) pairs
    let positive: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.value > 0.0 && p.max_center > 0.0)
        .map(|p| (p.value, p.max_center))
        .collect();
    let slope = if positive.len() >= 2 {
        ctqw::log_log_slope(
            &positive.iter().map(|p| p.0).collect::<Vec<_>>(),
            &positive.iter().map(|p| p.1).collect::<Vec<_>>(),
        )
    } else {
        f64::NAN
    };

    let mut summary = String::new();
    for line in &comments {
        summary.push_str(&format!("# {line}\n"));
    }
    summary.push_str(&format!("# loglog_slope = {}\n", format_g17(slope)));
    summary.push_str(&format!("{parameter},max_P_center\n"));
    for p in &points {
        summary.push_str(&format!("{},{}\n", format_g17(p.value), format_g17(p.max_center)));
    }

    match opts.out_path("out-csv") {
        Some(path) => {
            write_file(&path, &summary)?;
            for p in &points {
                let tagged = derived_path(&path, &format!("{parameter}{}", value_tag(p.value)));
                write_file(&tagged, &p.trace_csv)?;
            }
        }
        None => print!("{summary}"),
    }
    if let Some(path) = opts.out_path("out-svg") {
        let mut plot = Plot::new(
            format!("{} center maximum vs {parameter}", spec.label()),
            &parameter,
            "max P_center",
        );
        let log_ok = positive.len() == points.len();
        plot.log_x = log_ok;
        plot.log_y = log_ok;
        plot.series.push(Series {
            label: format!("slope {slope:.3}"),
            points: points.iter().map(|p| (p.value, p.max_center)).collect(),
        });
        write_file(&path, &plot.render())?;
    }
    println!("sweep {parameter}: {} points, loglog slope {slope:.6}", points.len());
    Ok(())
}

/// Density-matrix runs across the omega list; per-omega diagonal trace CSVs
/// plus a cumulative-probability summary.
pub fn cmd_lindblad(opts: &Options) -> Result<(), CliError> {
    let spec = opts.family_spec()?;
    if matches!(opts.get("generator"), Some(raw) if raw != "adjacency") {
        return Err(usage(
            "lindblad evolves by the adjacency commutator; --generator laplacian is not supported",
        ));
    }
    let omegas = opts.f64_list("omega")?;
    if omegas.is_empty() {
        return Err(usage("lindblad needs a nonempty --omega list"));
    }
    let form: DissipatorForm = opts
        .get("dissipator")
        .unwrap_or("paper")
        .parse()
        .map_err(|e| usage(format!("{e}")))?;
    let g = spec.build().map_err(|e| usage(format!("{e}")))?;
    let center = g
        .center()
        .ok_or_else(|| usage("lindblad needs a family with a center vertex"))?;
    let psi0 = opts
        .initial_state()?
        .build(&g)
        .map_err(|e| usage(format!("{e}")))?;
    let rho0 = DensityMatrix::pure(&psi0);
    let grid = opts.time_grid()?;
    let dt = grid.times()[1] - grid.times()[0];
    let tau = grid.t_max();
    let stride = opts.usize_value("stride")?.max(1);

    // reject bad omegas before spawning runs
    for &omega in &omegas {
        build_lindblad_set(&g, omega).map_err(|e| usage(format!("{e}")))?;
    }

    struct OmegaRun {
        omega: f64,
        cumulative: f64,
        final_center: f64,
        max_trace_err: f64,
        csv: String,
        times: Vec<f64>,
        center_row: Vec<f64>,
    }

    let runs: Vec<Result<OmegaRun, CliError>> = omegas
        .par_iter()
        .map(|&omega| -> Result<OmegaRun, CliError> {
            let set = build_lindblad_set(&g, omega).map_err(|e| usage(format!("{e}")))?;
            let run = evolve_density(&g, &set, &rho0, dt, tau, form)
                .map_err(|e| usage(format!("{e}")))?;
            let mut comments = opts.comment_lines("lindblad");
            comments.push(format!("run_omega = {omega}"));
            let csv = ctqw::export::density_trace_to_csv(
                &run.series,
                &run.trace_errors,
                &comments,
                stride,
            );
            let row = run.series.probability_row(center).expect("center recorded");
            Ok(OmegaRun {
                omega,
                cumulative: cumulative_center_probability(&run.series, tau)
                    .map_err(|e| usage(format!("{e}")))?,
                final_center: *row.last().expect("nonempty run"),
                max_trace_err: run.trace_errors.iter().fold(0.0f64, |a, &b| a.max(b)),
                csv,
                times: run.series.times().to_vec(),
                center_row: row.to_vec(),
            })
        })
        .collect();
    let runs: Vec<OmegaRun> = runs.into_iter().collect::<Result<_, _>>()?;

    let mut summary = String::new();
    for line in &opts.comment_lines("lindblad") {
        summary.push_str(&format!("# {line}\n"));
    }
    summary.push_str("omega,Omega_tau,final_P_center,max_trace_err\n");
    for r in &runs {
        summary.push_str(&format!(
            "{},{},{},{}\n",
            format_g17(r.omega),
            format_g17(r.cumulative),
            format_g17(r.final_center),
            format_g17(r.max_trace_err)
        ));
    }
    match opts.out_path("out-csv") {
        Some(path) => {
            write_file(&path, &summary)?;
            for r in &runs {
                let tagged = derived_path(&path, &format!("omega{}", value_tag(r.omega)));
                write_file(&tagged, &r.csv)?;
            }
        }
        None => print!("{summary}"),
    }
    if let Some(path) = opts.out_path("out-svg") {
        let mut plot = Plot::new(
            format!("{} center probability, dissipator={}", spec.label(), form.name()),
            "t",
            "P_center(t)",
        );
        for r in &runs {
            plot.series.push(Series {
                label: format!("omega={}", r.omega),
                points: r.times.iter().copied().zip(r.center_row.iter().copied()).collect(),
            });
        }
        write_file(&path, &plot.render())?;
    }
    for r in &runs {
        println!(
            "omega={:<5} Omega(tau)={:<12.6} final P_center={:<12.6} max trace err={:.2e}",
            r.omega, r.cumulative, r.final_center, r.max_trace_err
        );
    }
    Ok(())
}

struct VerifyRow {
    name: String,
    deviation: f64,
    tolerance: f64,
}

impl VerifyRow {
    fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Closed-form versus numeric cross-checks plus the Cayley-mapping
/// equivalence; prints a pass/fail table and exits nonzero on any breach.
pub fn cmd_verify(opts: &Options) -> Result<(), CliError> {
    let spec = opts.family_spec()?;
    let family = spec.family;
    if family != Family::Star && family != Family::Spider {
        return Err(usage("verify supports --family star or spider"));
    }
    let grid = opts.time_grid()?;
    let n = spec.branches;
    let j = spec.central_hopping;
    let mut rows: Vec<VerifyRow> = Vec::new();

    match family {
        Family::Star => {
            let mut worst: f64 = 0.0;
            for nn in 1..=6usize {
                for jj in [1.0, 2.0, 3.0] {
                    worst = worst.max(star_law_deviation(nn, jj, &grid)?);
                }
            }
            rows.push(VerifyRow {
                name: "star exact law, n=1..6, J=1..3".into(),
                deviation: worst,
                tolerance: 1e-10,
            });
            let mut worst: f64 = 0.0;
            for jj in [1.0, 2.0, 3.0] {
                let g = ctqw::build_star::<f64>(n, jj).map_err(|e| usage(format!("{e}")))?;
                let p = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
                    .map_err(|e| usage(format!("{e}")))?;
                let (_, maxp) =
                    max_vertex_probability(&p, n + 1, &grid).map_err(|e| usage(format!("{e}")))?;
                worst = worst.max((maxp - 1.0 / n as f64).abs());
            }
            rows.push(VerifyRow {
                name: format!("star n={n} center max = 1/n for all J"),
                deviation: worst,
                tolerance: 1e-10,
            });
            if n >= 2 {
                rows.push(VerifyRow {
                    name: "star antisymmetric pair zero transfer".into(),
                    deviation: star_zero_transfer(n, j, &grid)?,
                    tolerance: 1e-12,
                });
            }
        }
        Family::Spider => {
            rows.push(VerifyRow {
                name: format!("spider2 exact law, n={n}, J={j}"),
                deviation: spider2_law_deviation(n, j, &grid)?,
                tolerance: 1e-10,
            });
            rows.push(VerifyRow {
                name: format!("spider3 amplitude law, n={n}, J={j}"),
                deviation: spider3_law_deviation(n, j, &grid)?,
                tolerance: 1e-10,
            });
            let mut worst: f64 = 0.0;
            for nn in 1..=6usize {
                for jj in [1.0, 2.0, 3.0, 10.0] {
                    worst = worst.max(spider3_frequency_deviation(nn, jj)?);
                }
            }
            rows.push(VerifyRow {
                name: "Lambda_+- vs eigensolver extremes, n=1..6, J in {1,2,3,10}".into(),
                deviation: worst,
                tolerance: 1e-10,
            });
            if n == 3 {
                for (levels, length) in [(2usize, 2usize), (3, 3)] {
                    rows.push(VerifyRow {
                        name: format!("cayley C_3,{levels} maps onto S_3,{length}, J={j}"),
                        deviation: cayley_mapping_deviation(levels, length, j, &grid)?,
                        tolerance: 1e-10,
                    });
                }
            }
            for length in [2usize, 3] {
                rows.push(VerifyRow {
                    name: format!("phased-state zero transfer, S_{n},{length}"),
                    deviation: phased_zero_transfer(n, length, j, &grid)?,
                    tolerance: 1e-12,
                });
                rows.push(VerifyRow {
                    name: format!("balanced state scales single-leaf trace by n, S_{n},{length}"),
                    deviation: balanced_scale_deviation(n, length, j, &grid)?,
                    tolerance: 1e-10,
                });
            }
        }
        _ => unreachable!(),
    }

    println!("{:<62} {:>12} {:>10} {:>6}", "check", "max |dev|", "tol", "");
    let mut all_ok = true;
    for row in &rows {
        let mark = if row.passed() { "ok" } else { "FAIL" };
        all_ok &= row.passed();
        println!(
            "{:<62} {:>12.3e} {:>10.0e} {:>6}",
            row.name, row.deviation, row.tolerance, mark
        );
    }

    if let Some(path) = opts.out_path("out-csv") {
        write_file(&path, &verify_csv(opts, family, n, j, &grid)?)?;
    }

    if all_ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} checks breached tolerance",
            rows.iter().filter(|r| !r.passed()).count(),
            rows.len()
        )))
    }
}

/// `(t, exact, numeric, approx, |exact - numeric|)` over the grid for the
/// configured family.
fn verify_csv(
    opts: &Options,
    family: Family,
    n: usize,
    j: f64,
    grid: &TimeGrid<f64>,
) -> Result<String, CliError> {
    type Law = Box<dyn Fn(f64) -> f64>;
    let (g, exact, approx): (_, Law, Law) = match family {
        Family::Star => {
            let g = ctqw::build_star::<f64>(n, j).map_err(|e| usage(format!("{e}")))?;
            // no separate large-J envelope exists for the star law
            (
                g,
                Box::new(move |t| star_center_prob(n, j, t)) as Law,
                Box::new(move |t| star_center_prob(n, j, t)) as Law,
            )
        }
        Family::Spider => {
            let g = build_spider::<f64>(n, 2, j, 1.0).map_err(|e| usage(format!("{e}")))?;
            (
                g,
                Box::new(move |t| spider2_center_prob(n, j, t)) as Law,
                Box::new(move |t| spider2_center_prob_large_j(n, j, t)) as Law,
            )
        }
        _ => return Err(usage("verify CSV needs star or spider")),
    };
    let center = g.num_vertices();
    let p = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let trace = p
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let row = trace.probability_row(center).unwrap();
    let mut out = String::new();
    for line in &opts.comment_lines("verify") {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str("t,exact,numeric,approx,abs_err\n");
    for (idx, &t) in grid.times().iter().enumerate() {
        let e = exact(t);
        let a = approx(t);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_g17(t),
            format_g17(e),
            format_g17(row[idx]),
            format_g17(a),
            format_g17((e - row[idx]).abs())
        ));
    }
    Ok(out)
}

fn star_law_deviation(n: usize, j: f64, grid: &TimeGrid<f64>) -> Result<f64, CliError> {
    let g = ctqw::build_star::<f64>(n, j).map_err(|e| usage(format!("{e}")))?;
    let p = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let trace = p
        .probability_trace(&[n + 1], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let row = trace.probability_row(n + 1).unwrap();
    let mut worst: f64 = 0.0;
    for (idx, &t) in grid.times().iter().enumerate() {
        worst = worst.max((row[idx] - star_center_prob(n, j, t)).abs());
    }
    Ok(worst)
}

fn star_zero_transfer(n: usize, j: f64, grid: &TimeGrid<f64>) -> Result<f64, CliError> {
    let g = ctqw::build_star::<f64>(n, j).map_err(|e| usage(format!("{e}")))?;
    let r = 1.0 / 2.0f64.sqrt();
    let psi0 = leaf_superposition(&g, &[(1, C64::new(r, 0.0)), (2, C64::new(-r, 0.0))])
        .map_err(|e| usage(format!("{e}")))?;
    let p = plan(&g, Generator::Adjacency, &psi0).map_err(|e| usage(format!("{e}")))?;
    let trace = p
        .probability_trace(&[n + 1], grid)
        .map_err(|e| usage(format!("{e}")))?;
    Ok(trace
        .probability_row(n + 1)
        .unwrap()
        .iter()
        .fold(0.0f64, |a, &b| a.max(b)))
}

fn spider2_law_deviation(n: usize, j: f64, grid: &TimeGrid<f64>) -> Result<f64, CliError> {
    let g = build_spider::<f64>(n, 2, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let center = 2 * n + 1;
    let p = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let trace = p
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let row = trace.probability_row(center).unwrap();
    let mut worst: f64 = 0.0;
    for (idx, &t) in grid.times().iter().enumerate() {
        worst = worst.max((row[idx] - spider2_center_prob(n, j, t)).abs());
    }
    Ok(worst)
}

fn spider3_law_deviation(n: usize, j: f64, grid: &TimeGrid<f64>) -> Result<f64, CliError> {
    let g = build_spider::<f64>(n, 3, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let center = 3 * n + 1;
    let p = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let trace = p
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let row = trace.probability_row(center).unwrap();
    let mut worst: f64 = 0.0;
    for (idx, &t) in grid.times().iter().enumerate() {
        let exact = spider3_center_prob(n, j, t).map_err(|e| usage(format!("{e}")))?;
        worst = worst.max((row[idx] - exact).abs());
    }
    Ok(worst)
}

fn spider3_frequency_deviation(n: usize, j: f64) -> Result<f64, CliError> {
    let g = build_spider::<f64>(n, 3, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let d = eigh_default(&g.adjacency()).map_err(|e| usage(format!("{e}")))?;
    let (lp, lm) = spider3_frequencies::<f64>(n, j);
    let eig = d.eigenvalues();
    let top = eig[eig.len() - 1];
    let bottom = eig[0];
    // Lambda_- is the smallest positive frequency with center weight; compare
    // against the eigenvalue closest to it
    let nearest = eig
        .iter()
        .map(|&l| (l - lm).abs())
        .fold(f64::INFINITY, f64::min);
    Ok((top - lp).abs().max((bottom + lp).abs()).max(nearest))
}

fn cayley_mapping_deviation(
    levels: usize,
    length: usize,
    j: f64,
    grid: &TimeGrid<f64>,
) -> Result<f64, CliError> {
    let off = 1.0 / 2.0f64.sqrt();
    let cayley = build_cayley::<f64>(3, levels, j, off).map_err(|e| usage(format!("{e}")))?;
    let spider = build_spider::<f64>(3, length, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let cayley_state = InitialState::CayleyBranch
        .build(&cayley)
        .map_err(|e| usage(format!("{e}")))?;
    let cp = plan(&cayley, Generator::Adjacency, &cayley_state).map_err(|e| usage(format!("{e}")))?;
    let sp = plan(&spider, Generator::Adjacency, &basis_state(&spider, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let cc = cayley.num_vertices();
    let sc = spider.num_vertices();
    let ct = cp.probability_trace(&[cc], grid).map_err(|e| usage(format!("{e}")))?;
    let st = sp.probability_trace(&[sc], grid).map_err(|e| usage(format!("{e}")))?;
    let mut worst: f64 = 0.0;
    for (a, b) in ct
        .probability_row(cc)
        .unwrap()
        .iter()
        .zip(st.probability_row(sc).unwrap())
    {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

fn phased_zero_transfer(
    n: usize,
    length: usize,
    j: f64,
    grid: &TimeGrid<f64>,
) -> Result<f64, CliError> {
    let g = build_spider::<f64>(n, length, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let psi0 = ctqw::phased_leaf_state(&g, n, length).map_err(|e| usage(format!("{e}")))?;
    let p = plan(&g, Generator::Adjacency, &psi0).map_err(|e| usage(format!("{e}")))?;
    let center = g.num_vertices();
    let trace = p
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    Ok(trace
        .probability_row(center)
        .unwrap()
        .iter()
        .fold(0.0f64, |a, &b| a.max(b)))
}

fn balanced_scale_deviation(
    n: usize,
    length: usize,
    j: f64,
    grid: &TimeGrid<f64>,
) -> Result<f64, CliError> {
    let g = build_spider::<f64>(n, length, j, 1.0).map_err(|e| usage(format!("{e}")))?;
    let center = g.num_vertices();
    let single = plan(&g, Generator::Adjacency, &basis_state(&g, 1).unwrap())
        .map_err(|e| usage(format!("{e}")))?;
    let balanced_state = InitialState::BalancedLeaves
        .build(&g)
        .map_err(|e| usage(format!("{e}")))?;
    let balanced = plan(&g, Generator::Adjacency, &balanced_state)
        .map_err(|e| usage(format!("{e}")))?;
    let ts = single
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let tb = balanced
        .probability_trace(&[center], grid)
        .map_err(|e| usage(format!("{e}")))?;
    let mut worst: f64 = 0.0;
    for (a, b) in ts
        .probability_row(center)
        .unwrap()
        .iter()
        .zip(tb.probability_row(center).unwrap())
    {
        worst = worst.max((b - n as f64 * a).abs());
    }
    Ok(worst)
}

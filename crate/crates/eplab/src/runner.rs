//! Action execution: parallel sweep evaluation, exceptional-point search,
//! cross sections, and figure reproduction.
//!
//! Grid points are independent, so spectra are computed on worker threads
//! (`EPLAB_THREADS`, 0 or unset = auto) in contiguous index chunks and
//! reassembled in order; output bytes do not depend on the thread count.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use epcore::epfinder::{self, EPCandidate, EpMethod};
use epcore::scattering::{self, CrossSectionGrid, CrossSectionSurface, ResonancePair};
use epcore::spectral::{self, Spectrum};
use epcore::sweep::{self, SweepError, SweepParam, SweepPlan, TrajectorySet};

use crate::config::{
    OutputFormat, RunConfig, ScatteringSpec, DEFAULT_A_RANGE, DEFAULT_ENERGY_POINTS,
};
use crate::emit;
use crate::presets::{self, Panel, PanelJob};

pub fn thread_count() -> usize {
    match env::var("EPLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(0) | None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        Some(n) => n,
    }
}

/// One spectrum per grid point, computed in parallel, returned in grid order.
pub fn parallel_spectra(plan: &SweepPlan) -> Result<Vec<Spectrum>, SweepError> {
    plan.validate()?;
    let grid = plan.grid();
    let threads = thread_count().clamp(1, grid.len());
    if threads == 1 {
        return grid.iter().enumerate().map(|(i, &t)| plan.spectrum_at(i, t)).collect();
    }
    let chunk = grid.len().div_ceil(threads);
    let mut slots: Vec<Option<Result<Spectrum, SweepError>>> =
        (0..grid.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (c, slice) in slots.chunks_mut(chunk).enumerate() {
            let grid = &grid;
            scope.spawn(move || {
                for (j, slot) in slice.iter_mut().enumerate() {
                    let i = c * chunk + j;
                    *slot = Some(plan.spectrum_at(i, grid[i]));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every grid slot is computed")).collect()
}

/// [`sweep::run_sweep`] with the diagonalizations parallelized.
pub fn run_tracked_sweep(plan: &SweepPlan) -> Result<TrajectorySet, SweepError> {
    let spectra = parallel_spectra(plan)?;
    sweep::assemble_tracks(&plan.config, plan.param, plan.grid(), spectra)
}

#[derive(Debug, Clone)]
pub struct EmitOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub quiet: bool,
}

enum Payload<'a> {
    Trajectories(&'a TrajectorySet),
    Xsec(&'a CrossSectionGrid),
    Surface(&'a CrossSectionSurface),
}

fn write_output(dir: &Path, stem: &str, format: OutputFormat, data: Payload<'_>) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => match data {
            Payload::Trajectories(ts) => emit::write_trajectories_csv(&mut buf, ts)?,
            Payload::Xsec(grid) => emit::write_xsec_csv(&mut buf, grid)?,
            Payload::Surface(surf) => emit::write_surface_csv(&mut buf, surf)?,
        },
        OutputFormat::Json => {
            let value = match data {
                Payload::Trajectories(ts) => emit::trajectories_json(ts),
                Payload::Xsec(grid) => emit::xsec_json(grid),
                Payload::Surface(surf) => emit::surface_json(surf),
            };
            serde_json::to_writer_pretty(&mut buf, &value)?;
            buf.push(b'\n');
        }
    }
    fs::write(&path, &buf).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn minmax(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let denom = (n - 1) as f64;
    (0..n).map(|i| lo + (hi - lo) * (i as f64 / denom)).collect()
}

fn energy_grid(spec: Option<&ScatteringSpec>, pairs: &[ResonancePair]) -> Vec<f64> {
    let points = spec.map_or(DEFAULT_ENERGY_POINTS, |s| s.energy_points);
    match spec.and_then(|s| s.energy_min.zip(s.energy_max)) {
        Some((lo, hi)) => linspace(lo, hi, points),
        None => scattering::default_energy_grid(pairs, points),
    }
}

fn resonance_pair(spectrum: &Spectrum) -> Result<ResonancePair> {
    if spectrum.n() != 2 {
        bail!("cross sections need a 2-level system, got {} states", spectrum.n());
    }
    ResonancePair::from_eigenvalues(spectrum.states[0].value, spectrum.states[1].value)
        .map_err(|e| anyhow!("{e}"))
}

/// Cross-section rows at fixed `a` for each value of `y`.
fn xsec_rows(
    config: &epcore::model::SystemConfig,
    a: f64,
    ys: &[f64],
    spec: Option<&ScatteringSpec>,
) -> Result<CrossSectionSurface> {
    let pairs = ys
        .iter()
        .map(|&y| {
            let h = config.with_y(y).map_err(|e| anyhow!("{e}"))?.hamiltonian(a)?;
            let spectrum = spectral::eig_general(&h).map_err(|e| anyhow!("{e}"))?;
            resonance_pair(&spectrum)
        })
        .collect::<Result<Vec<_>>>()?;
    let energies = energy_grid(spec, &pairs);
    let sigma = pairs
        .iter()
        .map(|pair| scattering::cross_section(&energies, pair).sigma)
        .collect();
    Ok(CrossSectionSurface { y: ys.to_vec(), energies, sigma })
}

/// Surface rows straight from a finished `y` sweep.
fn surface_from_tracks(
    ts: &TrajectorySet,
    spec: Option<&ScatteringSpec>,
) -> Result<CrossSectionSurface> {
    if ts.n_states() != 2 {
        bail!("cross sections need a 2-level system, got {} states", ts.n_states());
    }
    let pairs = (0..ts.grid.len())
        .map(|i| {
            ResonancePair::from_eigenvalues(ts.tracks[0][i].value, ts.tracks[1][i].value)
                .map_err(|e| anyhow!("{e}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let energies = energy_grid(spec, &pairs);
    let sigma = pairs
        .iter()
        .map(|pair| scattering::cross_section(&energies, pair).sigma)
        .collect();
    Ok(CrossSectionSurface { y: ts.grid.clone(), energies, sigma })
}

fn surface_sigma_range(surf: &CrossSectionSurface) -> (f64, f64) {
    minmax(surf.sigma.iter().flatten().copied())
}

fn observer_list(flags: &[bool]) -> String {
    let hits: Vec<String> =
        flags.iter().enumerate().filter(|(_, &f)| f).map(|(k, _)| (k + 1).to_string()).collect();
    if hits.is_empty() {
        "none".into()
    } else {
        format!("state {}", hits.join(", state "))
    }
}

fn override_steps(plan: &mut SweepPlan, steps: Option<usize>) -> Result<()> {
    if let Some(k) = steps {
        plan.steps = k;
        plan.validate().map_err(|e| anyhow!("{e}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

pub fn sweep_action(
    cfg: &RunConfig,
    steps: Option<usize>,
    opts: &EmitOptions,
) -> Result<Vec<PathBuf>> {
    let mut plan =
        cfg.sweep.clone().context("the sweep action needs a [sweep] section in the config")?;
    override_steps(&mut plan, steps)?;
    let ts = run_tracked_sweep(&plan).map_err(|e| anyhow!("{e}"))?;
    let report = sweep::bifurcation_report(&ts, sweep::OBSERVER_TOL);

    let stem = cfg.prefix.clone().unwrap_or_else(|| "sweep".into());
    let path = write_output(&opts.out_dir, &stem, opts.format, Payload::Trajectories(&ts))?;
    if !opts.quiet {
        let (dg_lo, dg_hi) = minmax(report.delta_gamma_half.iter().copied());
        let gap_min = report.energy_gap.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "sweep {} in [{}, {}] x {}: dGamma/2 spread in [{:.6}, {:.6}]; min energy gap {:.3e}; observers: {}; wrote {}",
            plan.param.as_str(),
            plan.start,
            plan.stop,
            plan.steps,
            dg_lo,
            dg_hi,
            gap_min,
            observer_list(&report.observer_flags),
            path.display()
        );
    }
    Ok(vec![path])
}

pub fn ep_find_action(cfg: &RunConfig, quiet: bool) -> Result<Vec<EPCandidate>> {
    let range = match &cfg.sweep {
        Some(plan) if plan.param == SweepParam::A => (plan.start, plan.stop),
        _ => DEFAULT_A_RANGE,
    };
    let candidates = epfinder::locate_eps(&cfg.system, range, None);
    if !quiet {
        let detail: Vec<String> = candidates
            .iter()
            .map(|c| {
                let method = match c.method {
                    EpMethod::Analytic => "analytic",
                    EpMethod::ScanRefined => "scan",
                };
                format!(
                    "a = {:.12} ({method}, gap {:.2e}, rigidity {:.2e})",
                    c.a_star, c.gap, c.min_rigidity
                )
            })
            .collect();
        println!(
            "ep-find a in [{}, {}]: {} candidate(s){}{}",
            range.0,
            range.1,
            candidates.len(),
            if detail.is_empty() { "" } else { ": " },
            detail.join("; ")
        );
    }
    Ok(candidates)
}

pub fn xsec_action(cfg: &RunConfig, opts: &EmitOptions) -> Result<Vec<PathBuf>> {
    let spec =
        cfg.scattering.clone().context("the xsec action needs a [scattering] section in the config")?;
    match &cfg.sweep {
        Some(plan) if plan.param == SweepParam::Y => {
            let ts = run_tracked_sweep(plan).map_err(|e| anyhow!("{e}"))?;
            let surf = surface_from_tracks(&ts, Some(&spec))?;
            let stem = cfg.prefix.clone().unwrap_or_else(|| "xsec_surface".into());
            let path = write_output(&opts.out_dir, &stem, opts.format, Payload::Surface(&surf))?;
            if !opts.quiet {
                let (lo, hi) = surface_sigma_range(&surf);
                println!(
                    "xsec surface: {} y-rows x {} energies; sigma in [{:.6}, {:.6}]; wrote {}",
                    surf.y.len(),
                    surf.energies.len(),
                    lo,
                    hi,
                    path.display()
                );
            }
            Ok(vec![path])
        }
        _ => {
            let a = spec
                .a
                .context("scattering.a is required when no y sweep is configured")?;
            let h = cfg.system.hamiltonian(a).map_err(|e| anyhow!("{e}"))?;
            let spectrum = spectral::eig_general(&h).map_err(|e| anyhow!("{e}"))?;
            let pair = resonance_pair(&spectrum)?;
            let energies = energy_grid(Some(&spec), &[pair]);
            let grid = scattering::cross_section(&energies, &pair);
            let stem = cfg.prefix.clone().unwrap_or_else(|| "xsec".into());
            let path = write_output(&opts.out_dir, &stem, opts.format, Payload::Xsec(&grid))?;
            if !opts.quiet {
                let (lo, hi) = minmax(grid.sigma.iter().copied());
                println!(
                    "xsec at a = {a}: {} energies in [{}, {}]; sigma in [{:.6}, {:.6}]; wrote {}",
                    energies.len(),
                    energies[0],
                    energies[energies.len() - 1],
                    lo,
                    hi,
                    path.display()
                );
            }
            Ok(vec![path])
        }
    }
}

pub fn figure_action(
    figure_id: u8,
    panel: Option<Panel>,
    steps: Option<usize>,
    plot_script: bool,
    opts: &EmitOptions,
) -> Result<Vec<PathBuf>> {
    let preset = presets::figure(figure_id)
        .with_context(|| format!("figure id must be in 1..=9, got {figure_id}"))?;
    let selected = preset.select(panel);
    if selected.is_empty() {
        bail!(
            "figure {figure_id} has no panel \"{}\"",
            panel.map_or("?", Panel::as_str)
        );
    }

    let mut written = Vec::new();
    let mut dg_hi: Option<f64> = None;
    let mut sigma_range: Option<(f64, f64)> = None;
    for p in selected {
        let mut job = p.job.clone();
        override_steps(job.plan_mut(), steps)?;
        let panel_stem = |mid: &str| match p.panel {
            Panel::Single => format!("fig{figure_id}{mid}"),
            other => format!("fig{figure_id}{mid}_{}", other.as_str()),
        };
        match &job {
            PanelJob::Trajectory { plan } => {
                let ts = run_tracked_sweep(plan).map_err(|e| anyhow!("{e}"))?;
                let report = sweep::bifurcation_report(&ts, sweep::OBSERVER_TOL);
                let (_, hi) = minmax(report.delta_gamma_half.iter().copied());
                dg_hi = Some(dg_hi.map_or(hi, |d| d.max(hi)));
                written.push(write_output(
                    &opts.out_dir,
                    &panel_stem(""),
                    opts.format,
                    Payload::Trajectories(&ts),
                )?);
            }
            PanelJob::TrajectoryWithCrossSections { plan, xsec_y } => {
                let ts = run_tracked_sweep(plan).map_err(|e| anyhow!("{e}"))?;
                let report = sweep::bifurcation_report(&ts, sweep::OBSERVER_TOL);
                let (_, hi) = minmax(report.delta_gamma_half.iter().copied());
                dg_hi = Some(dg_hi.map_or(hi, |d| d.max(hi)));
                written.push(write_output(
                    &opts.out_dir,
                    &panel_stem(""),
                    opts.format,
                    Payload::Trajectories(&ts),
                )?);

                let a = plan.fixed_other.expect("y sweeps carry the fixed a");
                let surf = xsec_rows(&plan.config, a, xsec_y, None)?;
                let (lo, hi) = surface_sigma_range(&surf);
                sigma_range =
                    Some(sigma_range.map_or((lo, hi), |(l, h)| (l.min(lo), h.max(hi))));
                written.push(write_output(
                    &opts.out_dir,
                    &panel_stem("_xsec"),
                    opts.format,
                    Payload::Surface(&surf),
                )?);
            }
            PanelJob::Surface { plan } => {
                let ts = run_tracked_sweep(plan).map_err(|e| anyhow!("{e}"))?;
                let surf = surface_from_tracks(&ts, None)?;
                let (lo, hi) = surface_sigma_range(&surf);
                sigma_range =
                    Some(sigma_range.map_or((lo, hi), |(l, h)| (l.min(lo), h.max(hi))));
                written.push(write_output(
                    &opts.out_dir,
                    &panel_stem(""),
                    opts.format,
                    Payload::Surface(&surf),
                )?);
            }
        }
    }

    if plot_script {
        written.push(write_plot_script(figure_id, &written, &opts.out_dir)?);
    }

    if !opts.quiet {
        let mut line = format!("figure {figure_id}: wrote {} file(s)", written.len());
        if let Some(d) = dg_hi {
            line.push_str(&format!("; max dGamma/2 spread {d:.6}"));
        }
        if let Some((lo, hi)) = sigma_range {
            line.push_str(&format!("; sigma in [{lo:.6}, {hi:.6}]"));
        }
        if let Some(notes) = preset.ep_notes {
            let base = preset.panels[0].job.plan().config.with_y(1.0).map_err(|e| anyhow!("{e}"))?;
            let scanned = epfinder::find_eps_scan(&base, DEFAULT_A_RANGE, None);
            line.push_str(&format!(
                "; EP caption a = {}, attenuated-law minima a = {:.12}, {:.12}, scan accepted {}",
                notes.caption_a, notes.derived_a[0], notes.derived_a[1], scanned.len()
            ));
        }
        println!("{line}");
    }
    Ok(written)
}

/// A small gnuplot helper plotting every file the figure run produced.
fn write_plot_script(figure_id: u8, files: &[PathBuf], dir: &Path) -> Result<PathBuf> {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for the figure {figure_id} outputs");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key outside");
    for file in files {
        let name = file.file_name().unwrap().to_string_lossy();
        if !name.ends_with(".csv") {
            continue;
        }
        let stem = name.trim_end_matches(".csv");
        let _ = writeln!(s, "\nset terminal pngcairo size 900,600");
        let _ = writeln!(s, "set output '{stem}.png'");
        if stem.contains("xsec") || !stem.contains('_') {
            // y,E,sigma or E,sigma,...: plot sigma against energy
            if stem.contains("xsec") || figure_id == 9 {
                let _ = writeln!(s, "set view map");
                let _ = writeln!(s, "splot '{name}' every ::1 using 2:1:3 with points palette title 'sigma'");
            } else {
                let _ = writeln!(s, "plot '{name}' every ::1 using 1:2 with lines title 'sigma'");
            }
        } else {
            // trajectory file: energies and half widths per state
            let _ = writeln!(
                s,
                "plot for [k=1:9] '{name}' every ::1 using 1:($2==k?$3:1/0) with lines title sprintf('E %d', k), \\"
            );
            let _ = writeln!(
                s,
                "     for [k=1:9] '{name}' every ::1 using 1:($2==k?$4:1/0) with lines dashtype 2 title sprintf('G/2 %d', k)"
            );
        }
    }
    let path = dir.join(format!("fig{figure_id}.gp"));
    fs::write(&path, s).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

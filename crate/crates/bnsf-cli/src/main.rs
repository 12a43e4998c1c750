//! Command-line entry point: configuration loading, subcommand
//! orchestration, and report emission. Exit codes: 0 = success,
//! 1 = a check failed, 2 = configuration error.

mod config;

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bnsf_core::bnsf_solver::write_snapshot_csv;
use bnsf_core::contraction_monitor::{
    run_monitored, write_trajectory_csv, MonitorConfig, Weight,
};
use bnsf_core::experiments::{
    run_sweep, scaled_grid, shift_error_estimate, well_prepared_data, write_sweep_csv,
    PerturbationSpec, SweepConfig,
};
use bnsf_core::gas_model::{solve_end_state, GasParams, ShockFamily, State};
use bnsf_core::inequality_verifiers::{
    bisect_poly_delta_star, phi_bound_suite, quartic_scan, scan_poly_region,
    search_poincare_violations, write_phi_bounds_csv, write_poincare_csv, write_poly_csv,
    write_quartic_csv, SearchBudget,
};
use bnsf_core::numerics::fmt_f64;
use bnsf_core::shock_profile::{compute_profile, verify_tails, ShockProfile};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "bnsf", about = "Viscous shock laboratory: profiles, evolution, \
contraction monitoring, inviscid-limit sweeps, and inequality verification.")]
struct Cli {
    /// Sectioned key=value configuration file (defaults apply if omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output.dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed (overrides verify.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Size of the global thread pool for parallel scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the viscous shock profile, verify its tails, emit profile.csv.
    Profile,
    /// Plain viscous run from well-prepared data, emitting field snapshots.
    Simulate,
    /// Monitored run with the shift ODE; trajectory CSV plus a verdict.
    Contract,
    /// Vanishing-viscosity sweep with shift-error estimates.
    Sweep,
    /// All inequality verifiers (five report files).
    Verify,
    /// Everything above in sequence.
    All,
}

/// Outcome of one subcommand: the summary lines and whether every check
/// passed.
struct Outcome {
    lines: Vec<String>,
    passed: bool,
}

impl Outcome {
    fn new() -> Self {
        Self { lines: Vec::new(), passed: true }
    }
    fn note(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
    fn check(&mut self, label: &str, ok: bool) {
        self.lines.push(format!("[{}] {}", if ok { "PASS" } else { "FAIL" }, label));
        self.passed &= ok;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not set thread pool size: {e}");
            return ExitCode::from(2);
        }
    }
    let text = match &cli.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read config {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => String::new(),
    };
    let mut cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = apply_env_overrides(&mut cfg) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(seed) = cli.seed {
        cfg.verify.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.display().to_string();
    }
    let out_dir = PathBuf::from(&cfg.output.dir);
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create output dir {}: {e}", out_dir.display());
        return ExitCode::from(2);
    }

    let mut outcome = Outcome::new();
    let result = match cli.cmd {
        Cmd::Profile => cmd_profile(&cfg, &out_dir, &mut outcome),
        Cmd::Simulate => cmd_simulate(&cfg, &out_dir, &mut outcome),
        Cmd::Contract => cmd_contract(&cfg, &out_dir, &mut outcome),
        Cmd::Sweep => cmd_sweep(&cfg, &out_dir, &mut outcome),
        Cmd::Verify => cmd_verify(&cfg, &out_dir, &mut outcome),
        Cmd::All => cmd_profile(&cfg, &out_dir, &mut outcome)
            .and_then(|()| cmd_simulate(&cfg, &out_dir, &mut outcome))
            .and_then(|()| cmd_contract(&cfg, &out_dir, &mut outcome))
            .and_then(|()| cmd_sweep(&cfg, &out_dir, &mut outcome))
            .and_then(|()| cmd_verify(&cfg, &out_dir, &mut outcome)),
    };

    // Every run writes a plain-text summary with the exact config echoed.
    let summary = format!(
        "{}\n# --- configuration (re-parseable) ---\n{}",
        outcome.lines.join("\n"),
        cfg.to_text()
    );
    if let Err(e) = std::fs::write(out_dir.join("summary.txt"), &summary) {
        eprintln!("error: cannot write summary: {e}");
        return ExitCode::from(2);
    }
    for line in &outcome.lines {
        println!("{line}");
    }

    match result {
        Ok(()) if outcome.passed => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                bnsf_core::Error::Config(_) | bnsf_core::Error::InvalidParam(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Environment overrides with prefix `BNSF_`, e.g. `BNSF_GAS_GAMMA=1.67`
/// sets key `gamma` in section `[gas]`. Applied after the file, before
/// validation.
fn apply_env_overrides(cfg: &mut RunConfig) -> Result<(), config::ConfigError> {
    let mut extra = String::new();
    for (k, v) in std::env::vars() {
        if let Some(rest) = k.strip_prefix("BNSF_") {
            if let Some((section, key)) = rest.split_once('_') {
                extra.push_str(&format!(
                    "[{}]\n{} = {}\n",
                    section.to_lowercase(),
                    key.to_lowercase(),
                    v
                ));
            }
        }
    }
    if extra.is_empty() {
        return Ok(());
    }
    // Re-parse the merged text so overrides get the same diagnostics.
    let merged = format!("{}{}", cfg.to_text(), extra);
    *cfg = RunConfig::parse(&merged)?;
    Ok(())
}

/// Build gas parameters, end states, and the viscous profile from the
/// configuration.
fn setup(cfg: &RunConfig) -> bnsf_core::Result<(GasParams, ShockProfile)> {
    let g = GasParams::new(cfg.gas.r, cfg.gas.gamma, cfg.gas.tau0)?;
    let left = State::new(cfg.shock.v_minus, cfg.shock.u_minus, cfg.shock.theta_minus)?;
    let family = if cfg.shock.family == "one" {
        ShockFamily::One
    } else {
        ShockFamily::Three
    };
    let shock = solve_end_state(&left, cfg.shock.eps, family, &g)?;
    let profile = compute_profile(&shock, &g, None, None)?;
    Ok((g, profile))
}

fn pert_spec(cfg: &RunConfig) -> PerturbationSpec {
    PerturbationSpec {
        center: cfg.shift.pert_center,
        half_width: cfg.shift.pert_half_width,
        amp_v: cfg.shift.pert_amp_v,
        amp_u: cfg.shift.pert_amp_u,
        amp_th: cfg.shift.pert_amp_th,
    }
}

fn cmd_profile(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> bnsf_core::Result<()> {
    let (_g, profile) = setup(cfg)?;
    profile.write_csv(File::create(out.join("profile.csv"))?)?;
    let tails = verify_tails(&profile);
    o.note(format!(
        "profile: sigma = {}, span = [{}, {}]",
        fmt_f64(profile.shock.sigma),
        fmt_f64(profile.span().0),
        fmt_f64(profile.span().1)
    ));
    o.note(format!(
        "profile: decay rates (left, right) = ({}, {})",
        fmt_f64(tails.decay_rate_fit[0]),
        fmt_f64(tails.decay_rate_fit[1])
    ));
    o.note(format!(
        "profile: slope ratios sup |u'+s*v'|/|v'| = {}, sup |th'+c v'|/|v'| = {}",
        fmt_f64(tails.ratio_vu_sup),
        fmt_f64(tails.ratio_vtheta_sup)
    ));
    o.check("profile: v monotone increasing", tails.monotone_v_increasing);
    o.check("profile: u monotone decreasing", tails.monotone_u_decreasing);
    o.check("profile: theta monotone decreasing", tails.monotone_theta_decreasing);
    o.check("profile: interior slope nonvanishing", tails.inf_dv_core > 0.0);
    Ok(())
}

fn cmd_simulate(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> bnsf_core::Result<()> {
    let (g, profile) = setup(cfg)?;
    let w = Weight::new(cfg.weight.lambda, &profile)?;
    let solver_cfg = scaled_grid(&profile, cfg.grid.l, cfg.grid.n, cfg.grid.cfl)?;
    let prepared = well_prepared_data(
        &profile,
        &g,
        &w,
        &solver_cfg,
        &pert_spec(cfg),
        cfg.shift.e0,
    )?;
    o.note(format!(
        "simulate: initial entropy = {}, perturbation amplitude = {}",
        fmt_f64(prepared.achieved_e0),
        fmt_f64(prepared.amplitude)
    ));
    let mut s = prepared.state;
    write_snapshot_csv(&s, &g, File::create(out.join("snapshot_0000.csv"))?)?;
    let n_samples = (cfg.shift.t_end / cfg.shift.sample_dt).round().max(1.0) as usize;
    for k in 1..=n_samples {
        let t_k = (k as f64 * cfg.shift.sample_dt).min(cfg.shift.t_end);
        s = bnsf_core::bnsf_solver::advance(s, &g, t_k, |_| {})?;
        write_snapshot_csv(&s, &g, File::create(out.join(format!("snapshot_{k:04}.csv")))?)?;
    }
    o.note(format!("simulate: final time = {}", fmt_f64(s.t)));
    o.check("simulate: run completed with positive fields", true);
    Ok(())
}

fn cmd_contract(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> bnsf_core::Result<()> {
    let (g, profile) = setup(cfg)?;
    let w = Weight::new(cfg.weight.lambda, &profile)?;
    let solver_cfg = scaled_grid(&profile, cfg.grid.l, cfg.grid.n, cfg.grid.cfl)?;
    let prepared = well_prepared_data(
        &profile,
        &g,
        &w,
        &solver_cfg,
        &pert_spec(cfg),
        cfg.shift.e0,
    )?;
    let mc = MonitorConfig {
        delta3: cfg.weight.delta3,
        t_end: cfg.shift.t_end,
        sample_interval: cfg.shift.sample_dt,
        eps_shift: Some(cfg.shift.eps_shift),
    };
    let samples = run_monitored(prepared.state, &g, &w, &mc)?;
    write_trajectory_csv(&samples, File::create(out.join("trajectory.csv"))?)?;
    let initial = samples[0].entropy;
    let max_e = samples.iter().map(|s| s.entropy).fold(f64::NEG_INFINITY, f64::max);
    let final_x = samples.last().unwrap().x;
    // Saturation bound of the shift ODE, checked exactly at every sample.
    let eps2 = cfg.shift.eps_shift * cfg.shift.eps_shift;
    let shift_ok = samples.iter().all(|s| {
        s.xdot.abs() <= (2.0 * s.report.j_bad.abs() + 2.0 * s.report.j_para.abs() + 1.0) / eps2
    });
    o.note(format!(
        "contract: initial entropy = {}, max entropy = {}, final shift = {}",
        fmt_f64(initial),
        fmt_f64(max_e),
        fmt_f64(final_x)
    ));
    // Allowance 1e−3 of the initial entropy, with a small absolute floor so
    // the unperturbed (zero-entropy) run tolerates spatial truncation noise.
    let contractive = max_e - initial <= 1e-3 * initial + 1e-6;
    o.note(format!(
        "contract: verdict = {}",
        if contractive { "contractive" } else { "not contractive" }
    ));
    o.check("contract: entropy non-increasing within allowance", contractive);
    o.check("contract: shift speed saturation bound", shift_ok);
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> bnsf_core::Result<()> {
    let (g, profile) = setup(cfg)?;
    let sweep_cfg = SweepConfig {
        nu_list: cfg.sweep.nu_list.clone(),
        base_n: cfg.sweep.base_n,
        n_cap: cfg.sweep.n_cap,
        l_x: cfg.sweep.l_x,
        t_end: cfg.sweep.t_end,
        sample_dt: cfg.sweep.sample_dt,
        e0: cfg.sweep.e0,
        lambda: cfg.weight.lambda,
        pert: pert_spec(cfg),
        cfl: cfg.grid.cfl,
    };
    let report = run_sweep(&sweep_cfg, &profile, &g)?;
    write_sweep_csv(&report, File::create(out.join("sweep.csv"))?)?;
    let mut all_ok = true;
    for run in &report.runs {
        match run {
            Ok(r) => {
                write_trajectory_csv(
                    &r.samples,
                    File::create(out.join(format!("trajectory_nu_{}.csv", r.nu)))?,
                )?;
                o.note(format!(
                    "sweep: nu = {}: n = {}, max entropy ratio = {}, final shift err = {}",
                    fmt_f64(r.nu),
                    r.n,
                    fmt_f64(r.max_entropy_ratio),
                    fmt_f64(*r.shift_err.last().unwrap())
                ));
                match shift_error_estimate(r, &profile, &g, cfg.sweep.t_end, cfg.sweep.r_support)
                {
                    Ok(se) => o.note(format!(
                        "sweep: nu = {}: weak-form closure = {}, shift-control C = {}",
                        fmt_f64(r.nu),
                        fmt_f64(se.closure),
                        fmt_f64(se.c_estimate)
                    )),
                    Err(e) => o.note(format!("sweep: nu = {}: shift estimate skipped: {e}", r.nu)),
                }
                all_ok &= r.max_entropy_ratio <= 1.0 + 1e-3;
            }
            Err(e) => {
                o.note(format!("sweep: run failed: {e}"));
                all_ok = false;
            }
        }
    }
    for (k, d) in report.pairwise_l1.iter().enumerate() {
        o.note(format!("sweep: pairwise shift L1 distance #{k} = {}", fmt_f64(*d)));
    }
    o.check("sweep: all runs completed with bounded entropy", all_ok);
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, out: &Path, o: &mut Outcome) -> bnsf_core::Result<()> {
    let v = &cfg.verify;
    // 1. Degenerate-weight Poincare functional: violation search at the
    //    configured grid and at its refinement.
    let mut poincare = Vec::new();
    for n in [v.n_grid, 2 * v.n_grid] {
        let budget = SearchBudget {
            n_grid: n,
            random_starts: v.random_starts,
            ascent_steps: v.ascent_steps,
        };
        poincare.push(search_poincare_violations(v.delta, v.c1, budget, v.seed)?);
    }
    write_poincare_csv(&out.join("poincare.csv"), &poincare)?;
    for r in &poincare {
        o.note(format!(
            "verify: poincare n = {}: worst value = {}",
            r.budget.n_grid,
            fmt_f64(r.worst)
        ));
    }
    o.check(
        "verify: poincare functional nonpositive on the ball",
        poincare.iter().all(|r| r.worst <= 1e-6),
    );

    // 2. Two-variable polynomial bound near the unit circle. The bound is
    //    existential in delta: bisect the largest passing delta and scan at
    //    min(bisected, configured), at the configured resolution and its
    //    refinement.
    let delta_star = bisect_poly_delta_star(v.delta1, v.resolution, 1e-4)?;
    let delta_run = delta_star.min(v.delta);
    o.note(format!(
        "verify: poly largest passing delta = {} (scan runs at {})",
        fmt_f64(delta_star),
        fmt_f64(delta_run)
    ));
    let scans = [
        scan_poly_region(delta_run, v.delta1, v.resolution)?,
        scan_poly_region(delta_run, v.delta1, 2 * v.resolution)?,
    ];
    write_poly_csv(&out.join("poly.csv"), &scans)?;
    for s in &scans {
        o.note(format!(
            "verify: poly scan res = {}: max gap = {} at ({}, {})",
            s.resolution,
            fmt_f64(s.max_gap),
            fmt_f64(s.argmax.0),
            fmt_f64(s.argmax.1)
        ));
    }
    o.check(
        "verify: polynomial bound holds on the scanned region",
        scans.iter().all(|s| s.max_gap <= 1e-9),
    );

    // 3. Quartic helper: dense scan plus exact spot values.
    let q = quartic_scan(1_000_000.max(v.resolution))?;
    write_quartic_csv(&out.join("quartic.csv"), &q)?;
    o.note(format!(
        "verify: quartic max = {} at x = {}",
        fmt_f64(q.max_h),
        fmt_f64(q.argmax)
    ));
    o.check(
        "verify: quartic helper negative with exact anchors",
        q.max_h < 0.0
            && q.h_at_minus2 == -4.0 / 3.0
            && q.h_at_0 == 0.0
            && q.p_at_minus1 == 4.0,
    );

    // 4. Convexity bounds for z - 1 - log z around the reference state.
    let phi = phi_bound_suite(
        cfg.shock.v_minus,
        cfg.shock.theta_minus,
        v.samples,
        v.seed,
    )?;
    write_phi_bounds_csv(&out.join("phi_bounds.csv"), &phi)?;
    o.note(format!(
        "verify: phi constants c1..c5 = {}, {}, {}, {}, {}",
        fmt_f64(phi.c1),
        fmt_f64(phi.c2),
        fmt_f64(phi.c3),
        fmt_f64(phi.c4),
        fmt_f64(phi.c5)
    ));
    let margins = [
        phi.margin_quad_lower,
        phi.margin_quad_upper,
        phi.margin_linear,
        phi.margin_sandwich_lower,
        phi.margin_sandwich_upper_right,
        phi.margin_sandwich_upper_quartic,
        phi.margin_monotone,
        phi.margin_separation,
    ];
    o.check(
        "verify: phi bounds hold on every sample",
        phi.c1 > 0.0
            && phi.c2 > 0.0
            && phi.c3 > 0.0
            && phi.c4 > 0.0
            && phi.c5 > 0.0
            && margins.iter().all(|&m| m >= -1e-15),
    );

    // Fifth report file: a plain-text digest of the four CSVs.
    let digest: Vec<String> = o
        .lines
        .iter()
        .filter(|l| l.contains("verify:"))
        .cloned()
        .collect();
    std::fs::write(out.join("verify_summary.txt"), digest.join("\n") + "\n")?;
    Ok(())
}

//! `srdp` — secure rate-distortion-perception tooling.
//!
//! Subcommands: `binary-surface`, `gaussian-family`, `region-search`,
//! `bc-tools`, `osrb`. Each emits a CSV (default) or JSON table whose
//! header embeds the full parameter set and library version. Identical
//! configurations and seeds produce byte-identical output files.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{
    load, BcToolsConfig, BinarySurfaceConfig, GaussianFamilyConfig, OsrbCmdConfig,
    RegionSearchConfig,
};
use output::{Cell, Format, Table};

use srdp_core::bc::{
    bc_inner_point, capacity_unsecure, more_capable_check, separation_feasible, BcWitness,
    BroadcastChannel, CheckConfig, MismatchFactor, MoreCapableStatus,
};
use srdp_core::closed_form::{
    binary_min_r, gaussian_min_r_limit, gaussian_rates, gaussian_zero_rate_threshold,
    GaussianParams,
};
use srdp_core::info::Bits;
use srdp_core::noiseless::{
    certify_achievable, evaluate_witness, CertifyOutcome, DistortionMeasure, NoiselessWitness,
    RateTuple, SearchConfig,
};
use srdp_core::osrb::{rate_sweep_experiment, OsrbConfig};
use srdp_core::prob::{Channel, JointPmf, Pmf, DEFAULT_ENUM_CAP};
use srdp_core::sideinfo::{certify_achievable_dec, SiCertifyOutcome};
use srdp_core::SrdpError;

#[derive(Parser)]
#[command(
    name = "srdp",
    version,
    about = "secure rate-distortion-perception tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Csv)]
    format: CliFormat,

    /// Base seed; overrides any seed given in a config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Config file with the command parameters (flat key = value TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form minimum rate over a (common randomness, distortion) grid
    /// for the uniform binary source under Hamming distortion.
    BinarySurface(BinarySurfaceArgs),
    /// One-parameter Gaussian side-information family rates over a nu grid.
    GaussianFamily(GaussianFamilyArgs),
    /// Membership search: certify target tuples with explicit witnesses.
    RegionSearch,
    /// Broadcast-channel tools: more-capable status, unsecured capacity,
    /// region point, and separation feasibility.
    BcTools,
    /// Exact small-blocklength random-binning experiment sweep.
    Osrb,
}

#[derive(Args)]
struct BinarySurfaceArgs {
    #[arg(long)]
    r0_min: Option<f64>,
    #[arg(long)]
    r0_max: Option<f64>,
    #[arg(long)]
    r0_steps: Option<usize>,
    #[arg(long)]
    d_min: Option<f64>,
    #[arg(long)]
    d_max: Option<f64>,
    #[arg(long)]
    d_steps: Option<usize>,
}

#[derive(Args)]
struct GaussianFamilyArgs {
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    nu_steps: Option<usize>,
    #[arg(long)]
    nu_min: Option<f64>,
    #[arg(long)]
    nu_max: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // ignore failure when a pool already exists (e.g. repeated init)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<(), String> {
    let format = match cli.format {
        CliFormat::Csv => Format::Csv,
        CliFormat::Json => Format::Json,
    };
    let mut table = match &cli.command {
        Command::BinarySurface(args) => cmd_binary_surface(cli, args)?,
        Command::GaussianFamily(args) => cmd_gaussian_family(cli, args)?,
        Command::RegionSearch => cmd_region_search(cli)?,
        Command::BcTools => cmd_bc_tools(cli)?,
        Command::Osrb => cmd_osrb(cli)?,
    };
    table.set_meta("format", if format == Format::Csv { "csv" } else { "json" });
    table.set_meta("jobs_requested", cli.jobs);
    table
        .write(format, cli.out.as_deref())
        .map_err(|e| format!("cannot write output: {e}"))
}

fn core_err(e: SrdpError) -> String {
    match e {
        SrdpError::CapExceeded { needed, cap } => {
            let bytes = needed.saturating_mul(8);
            format!(
                "enumeration cap exceeded: {needed} cells needed (~{bytes} bytes as f64) \
                 but cap is {cap}; raise SRDP_ENUM_CAP to allow larger runs"
            )
        }
        other => other.to_string(),
    }
}

fn enum_cap() -> Result<usize, String> {
    match std::env::var("SRDP_ENUM_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("SRDP_ENUM_CAP must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn parse_channel(rows: &[Vec<f64>], what: &str) -> Result<Channel, String> {
    Channel::from_rows(rows.to_vec()).map_err(|e| format!("{what}: {}", core_err(e)))
}

fn channel_text(ch: &Channel) -> String {
    (0..ch.input_size())
        .map(|x| {
            ch.row(x)
                .probs()
                .iter()
                .map(|p| output::fmt_sig(*p))
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect::<Vec<_>>()
        .join("|")
}

// ---------------------------------------------------------------------------
// binary-surface
// ---------------------------------------------------------------------------

fn cmd_binary_surface(cli: &Cli, args: &BinarySurfaceArgs) -> Result<Table, String> {
    let cfg: BinarySurfaceConfig = match &cli.config {
        Some(path) => {
            if args.r0_min.is_some() || args.d_min.is_some() || args.r0_steps.is_some() {
                return Err("give either inline grid flags or --config, not both".into());
            }
            load(path)?
        }
        None => BinarySurfaceConfig {
            r0_min: args.r0_min.ok_or("missing --r0-min (or --config)")?,
            r0_max: args.r0_max.ok_or("missing --r0-max")?,
            r0_steps: args.r0_steps.ok_or("missing --r0-steps")?,
            d_min: args.d_min.ok_or("missing --d-min")?,
            d_max: args.d_max.ok_or("missing --d-max")?,
            d_steps: args.d_steps.ok_or("missing --d-steps")?,
        },
    };
    for (what, v) in [
        ("r0_min", cfg.r0_min),
        ("r0_max", cfg.r0_max),
        ("d_min", cfg.d_min),
        ("d_max", cfg.d_max),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(format!(
                "invalid grid: {what} = {v} must be finite and >= 0"
            ));
        }
    }
    if cfg.r0_min > cfg.r0_max || cfg.d_min > cfg.d_max {
        return Err("invalid grid: min exceeds max".into());
    }
    if cfg.r0_steps == 0 || cfg.d_steps == 0 {
        return Err("invalid grid: step counts must be positive".into());
    }

    let mut table = Table::new("binary-surface", vec!["r0", "d", "r_min"]);
    table.set_meta("r0_min", cfg.r0_min);
    table.set_meta("r0_max", cfg.r0_max);
    table.set_meta("r0_steps", cfg.r0_steps);
    table.set_meta("d_min", cfg.d_min);
    table.set_meta("d_max", cfg.d_max);
    table.set_meta("d_steps", cfg.d_steps);
    table.set_meta("infeasible_marker", "nan");

    for r0 in linspace(cfg.r0_min, cfg.r0_max, cfg.r0_steps) {
        for d in linspace(cfg.d_min, cfg.d_max, cfg.d_steps) {
            let r = binary_min_r(r0, d).map(Bits::value).unwrap_or(f64::NAN);
            table.push(vec![Cell::Float(r0), Cell::Float(d), Cell::Float(r)]);
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// gaussian-family
// ---------------------------------------------------------------------------

fn cmd_gaussian_family(cli: &Cli, args: &GaussianFamilyArgs) -> Result<Table, String> {
    let cfg: GaussianFamilyConfig = match &cli.config {
        Some(path) => {
            if args.eta.is_some() || args.delta.is_some() || args.nu_steps.is_some() {
                return Err("give either inline flags or --config, not both".into());
            }
            load(path)?
        }
        None => GaussianFamilyConfig {
            eta: args.eta.ok_or("missing --eta (or --config)")?,
            delta: args.delta.ok_or("missing --delta")?,
            nu_steps: args.nu_steps.ok_or("missing --nu-steps")?,
            nu_min: args.nu_min,
            nu_max: args.nu_max,
        },
    };
    if !(cfg.eta > -1.0 && cfg.eta < 1.0) {
        return Err(format!("eta = {} outside (-1, 1)", cfg.eta));
    }
    if cfg.delta <= 0.0 || cfg.delta > 2.0 - 2.0 * cfg.eta.abs() {
        return Err(format!(
            "delta = {} outside the family domain (0, 2 - 2|eta|] = (0, {}]",
            cfg.delta,
            2.0 - 2.0 * cfg.eta.abs()
        ));
    }
    if cfg.nu_steps == 0 {
        return Err("nu_steps must be positive".into());
    }
    let rho = 1.0 - cfg.delta / 2.0;
    let rho2 = rho * rho;
    let nu_lo = cfg.nu_min.unwrap_or(rho2 + 1e-6);
    let nu_hi = cfg.nu_max.unwrap_or(1.0 - 1e-6);
    if nu_lo > nu_hi {
        return Err(format!("nu grid empty: [{nu_lo}, {nu_hi}]"));
    }

    let mut table = Table::new("gaussian-family", vec!["nu", "r1", "r2", "r3", "note"]);
    table.set_meta("eta", cfg.eta);
    table.set_meta("delta", cfg.delta);
    table.set_meta("rho", rho);
    table.set_meta("nu_min", nu_lo);
    table.set_meta("nu_max", nu_hi);
    table.set_meta("nu_steps", cfg.nu_steps);
    table.set_meta(
        "min_r_limit",
        match gaussian_min_r_limit(cfg.eta, cfg.delta) {
            Ok(b) => output::fmt_sig(b.0),
            Err(_) => "undefined".into(),
        },
    );
    table.set_meta(
        "zero_rate_threshold",
        output::fmt_sig(gaussian_zero_rate_threshold(cfg.eta).map_err(core_err)?),
    );

    for nu in linspace(nu_lo, nu_hi, cfg.nu_steps) {
        match GaussianParams::new(cfg.eta, cfg.delta, nu) {
            Ok(g) => {
                let r = gaussian_rates(&g);
                table.push(vec![
                    Cell::Float(nu),
                    Cell::Float(r.r1.0),
                    Cell::Float(r.r2.0),
                    Cell::Float(r.r3.0),
                    Cell::Text("ok".into()),
                ]);
            }
            Err(_) => {
                let note = if nu <= rho2 + 1e-12 {
                    "divergent_near_rho2"
                } else {
                    "outside_domain"
                };
                table.push(vec![
                    Cell::Float(nu),
                    Cell::Float(f64::NAN),
                    Cell::Float(f64::NAN),
                    Cell::Float(f64::NAN),
                    Cell::Text(note.into()),
                ]);
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// region-search
// ---------------------------------------------------------------------------

fn cmd_region_search(cli: &Cli) -> Result<Table, String> {
    let path = cli
        .config
        .as_ref()
        .ok_or("region-search requires --config")?;
    let cfg: RegionSearchConfig = load(path)?;
    let d = DistortionMeasure::new(cfg.distortion.clone()).map_err(core_err)?;
    let search = SearchConfig {
        starts: cfg.starts.unwrap_or(32),
        u_size: cfg.u_size,
        seed: cli.seed.or(cfg.seed).unwrap_or(0x5eed_5eed),
        ..SearchConfig::default()
    };

    let mut table = Table::new(
        "region-search",
        vec![
            "target_rate",
            "target_common_rate",
            "target_distortion",
            "verdict",
            "corner_rate",
            "corner_common_rate",
            "corner_distortion",
            "witness_u",
            "witness_y",
        ],
    );
    table.set_meta("mode", &cfg.mode);
    table.set_meta("starts", search.starts);
    table.set_meta("seed", search.seed);
    table.set_meta("targets", cfg.targets.len());

    let parse_target = |t: &Vec<f64>| -> Result<RateTuple, String> {
        if t.len() != 3 {
            return Err(format!("target must be a triple, got {t:?}"));
        }
        RateTuple::new(t[0], t[1], t[2]).map_err(core_err)
    };

    match cfg.mode.as_str() {
        "noiseless" => {
            let source = cfg
                .source
                .clone()
                .ok_or("noiseless mode requires `source`")?;
            let q = Pmf::new(source).map_err(core_err)?;
            for t in &cfg.targets {
                let target = parse_target(t)?;
                let outcome = certify_achievable(&q, &d, &target, &search).map_err(core_err)?;
                let row = match outcome {
                    CertifyOutcome::Certified { witness, corner } => vec![
                        Cell::Float(target.rate.0),
                        Cell::Float(target.common_rate.0),
                        Cell::Float(target.distortion),
                        Cell::Text("certified".into()),
                        Cell::Float(corner.rate.0),
                        Cell::Float(corner.common_rate.0),
                        Cell::Float(corner.distortion),
                        Cell::Text(channel_text(witness.u_channel())),
                        Cell::Text(channel_text(witness.y_channel())),
                    ],
                    CertifyOutcome::NotFound => not_found_row(&target, "not_found"),
                    CertifyOutcome::InfeasibleExact => not_found_row(&target, "infeasible_exact"),
                };
                table.push(row);
            }
        }
        "si-dec" => {
            let rows = cfg
                .joint_source
                .clone()
                .ok_or("si-dec mode requires `joint_source`")?;
            let nx = rows.len();
            let nz = rows.first().map(|r| r.len()).unwrap_or(0);
            let cells: Vec<f64> = rows.into_iter().flatten().collect();
            let qxz = JointPmf::new(vec![nx, nz], cells).map_err(core_err)?;
            for t in &cfg.targets {
                let target = parse_target(t)?;
                let outcome =
                    certify_achievable_dec(&qxz, &d, &target, &search).map_err(core_err)?;
                let row = match outcome {
                    SiCertifyOutcome::Certified { witness, point } => vec![
                        Cell::Float(target.rate.0),
                        Cell::Float(target.common_rate.0),
                        Cell::Float(target.distortion),
                        Cell::Text("certified".into()),
                        Cell::Float(point.r_min.0),
                        Cell::Float(point.r0_min.0),
                        Cell::Float(point.distortion),
                        Cell::Text(channel_text(witness.u_channel())),
                        Cell::Text(channel_text(witness.y_channel())),
                    ],
                    SiCertifyOutcome::NotFound => not_found_row(&target, "not_found"),
                };
                table.push(row);
            }
        }
        other => return Err(format!("unknown mode {other:?} (use noiseless or si-dec)")),
    }
    Ok(table)
}

fn not_found_row(target: &RateTuple, verdict: &str) -> Vec<Cell> {
    vec![
        Cell::Float(target.rate.0),
        Cell::Float(target.common_rate.0),
        Cell::Float(target.distortion),
        Cell::Text(verdict.into()),
        Cell::Float(f64::NAN),
        Cell::Float(f64::NAN),
        Cell::Float(f64::NAN),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
    ]
}

// ---------------------------------------------------------------------------
// bc-tools
// ---------------------------------------------------------------------------

fn cmd_bc_tools(cli: &Cli) -> Result<Table, String> {
    let path = cli.config.as_ref().ok_or("bc-tools requires --config")?;
    let cfg: BcToolsConfig = load(path)?;

    let bc = match (&cfg.y_marginal, &cfg.z_marginal, &cfg.degrading, &cfg.joint) {
        (Some(y), Some(z), None, None) => BroadcastChannel::from_independent_marginals(
            &parse_channel(y, "y_marginal")?,
            &parse_channel(z, "z_marginal")?,
        )
        .map_err(core_err)?,
        (Some(y), None, Some(q), None) => BroadcastChannel::from_degraded(
            &parse_channel(y, "y_marginal")?,
            &parse_channel(q, "degrading")?,
        )
        .map_err(core_err)?,
        (None, None, None, Some(j)) => {
            let (ys, zs) = (
                cfg.y_size.ok_or("joint channel needs y_size")?,
                cfg.z_size.ok_or("joint channel needs z_size")?,
            );
            BroadcastChannel::new(parse_channel(j, "joint")?, ys, zs).map_err(core_err)?
        }
        _ => return Err(
            "give exactly one channel description: y_marginal+z_marginal, y_marginal+degrading, \
                 or joint+y_size+z_size"
                .into(),
        ),
    };

    let witness = NoiselessWitness::new(
        Pmf::new(cfg.witness_source.clone()).map_err(core_err)?,
        parse_channel(&cfg.witness_u, "witness_u")?,
        parse_channel(&cfg.witness_y, "witness_y")?,
    )
    .map_err(core_err)?;
    let d = DistortionMeasure::new(cfg.distortion.clone()).map_err(core_err)?;
    let x_dist = match &cfg.x_dist {
        Some(v) => Pmf::new(v.clone()).map_err(core_err)?,
        None => Pmf::uniform(bc.input_size()),
    };
    let check = CheckConfig {
        samples: cfg.samples.unwrap_or(1000),
        seed: cli.seed.or(cfg.seed).unwrap_or(0x5eed_c0de),
    };

    let mut table = Table::new("bc-tools", vec!["quantity", "value", "detail"]);
    table.set_meta("kappa", cfg.kappa);
    table.set_meta("rate", cfg.rate);
    table.set_meta("samples", check.samples);
    table.set_meta("seed", check.seed);

    let status = more_capable_check(&bc, &check);
    let violated = matches!(status, MoreCapableStatus::Violated { .. });
    match &status {
        MoreCapableStatus::CertifiedDegraded { degrading } => table.push(vec![
            Cell::Text("more_capable".into()),
            Cell::Text("certified_degraded".into()),
            Cell::Text(channel_text(degrading)),
        ]),
        MoreCapableStatus::HoldsOnSamples { checked } => table.push(vec![
            Cell::Text("more_capable".into()),
            Cell::Text("holds_on_samples".into()),
            Cell::Text(format!("checked={checked}")),
        ]),
        MoreCapableStatus::Violated { input, gap } => table.push(vec![
            Cell::Text("more_capable".into()),
            Cell::Text("violated".into()),
            Cell::Text(format!(
                "input={} gap_bits={}",
                input
                    .probs()
                    .iter()
                    .map(|p| output::fmt_sig(*p))
                    .collect::<Vec<_>>()
                    .join(";"),
                output::fmt_sig(*gap)
            )),
        ]),
    }

    let cap = capacity_unsecure(&bc.marginal_y()).map_err(core_err)?;
    table.push(vec![
        Cell::Text("c_unsecure".into()),
        Cell::Float(cap.0),
        Cell::Text("bits_per_channel_use".into()),
    ]);

    if violated {
        table.push(vec![
            Cell::Text("region_point".into()),
            Cell::Text("refused".into()),
            Cell::Text("channel is not more-capable".into()),
        ]);
    } else {
        let w2 = BcWitness::new(
            witness.clone(),
            x_dist.clone(),
            Channel::identity(bc.input_size()),
        )
        .map_err(core_err)?;
        let pt = bc_inner_point(&w2, &bc, &d).map_err(core_err)?;
        for (name, v) in [
            ("r_lo", pt.r_lo.0),
            ("r_hi", pt.r_hi.0),
            ("r0_min", pt.r0_min.0),
            ("r0_min_raw", pt.r0_min_raw),
            ("d_val", pt.distortion),
        ] {
            table.push(vec![
                Cell::Text(name.into()),
                Cell::Float(v),
                Cell::Text(String::new()),
            ]);
        }
        table.push(vec![
            Cell::Text("interval_empty".into()),
            Cell::Text(pt.empty.to_string()),
            Cell::Text(String::new()),
        ]);
    }

    let kappa = MismatchFactor::new(cfg.kappa).map_err(core_err)?;
    let feasible =
        separation_feasible(kappa, Bits(cfg.rate), &bc.marginal_y()).map_err(core_err)?;
    table.push(vec![
        Cell::Text("separation_feasible".into()),
        Cell::Text(feasible.to_string()),
        Cell::Text(format!(
            "rate<=kappa*c_unsecure: {}<={}",
            output::fmt_sig(cfg.rate),
            output::fmt_sig(cfg.kappa * cap.0)
        )),
    ]);
    Ok(table)
}

// ---------------------------------------------------------------------------
// osrb
// ---------------------------------------------------------------------------

fn cmd_osrb(cli: &Cli) -> Result<Table, String> {
    let path = cli.config.as_ref().ok_or("osrb requires --config")?;
    let cfg: OsrbCmdConfig = load(path)?;
    if cfg.n_list.is_empty() || cfg.seeds == 0 {
        return Err("osrb needs a nonempty n_list and at least one seed".into());
    }
    let cap = enum_cap()?;
    let source = Pmf::new(cfg.source.clone()).map_err(core_err)?;
    let u_channel = parse_channel(&cfg.u_channel, "u_channel")?;
    let y_channel = parse_channel(&cfg.y_channel, "y_channel")?;
    let d = DistortionMeasure::new(cfg.distortion.clone()).map_err(core_err)?;

    let (rate, common_rate) = match (cfg.rate, cfg.common_rate, cfg.delta_above_corner) {
        (Some(r), Some(r0), None) => (r, r0),
        (None, None, Some(delta)) => {
            let w = NoiselessWitness::new(source.clone(), u_channel.clone(), y_channel.clone())
                .map_err(core_err)?;
            let corner = evaluate_witness(&w, &d).map_err(core_err)?;
            (corner.rate.0 + delta, corner.common_rate.0 + delta)
        }
        _ => return Err("give either rate+common_rate or delta_above_corner, not both".into()),
    };

    let base_seed = cli.seed.or(cfg.seed).unwrap_or(0x05eb);
    let smallest_n = *cfg.n_list.iter().min().expect("nonempty");
    let base = OsrbConfig::from_forward(
        smallest_n,
        rate,
        common_rate,
        source,
        &u_channel,
        y_channel,
        d,
        base_seed,
        cap,
    )
    .map_err(core_err)?;

    let rows = rate_sweep_experiment(&base, &cfg.n_list, cfg.seeds).map_err(core_err)?;

    let mut table = Table::new(
        "osrb",
        vec![
            "n",
            "eff_R",
            "eff_R0",
            "seed",
            "realism_tv",
            "distortion",
            "leakage_bits",
            "cr_independence_tv",
            "fallback_count",
        ],
    );
    table.set_meta("rate", rate);
    table.set_meta("common_rate", common_rate);
    table.set_meta("seeds", cfg.seeds);
    table.set_meta("base_seed", base_seed);
    table.set_meta("enum_cap", cap);
    table.set_meta(
        "n_list",
        cfg.n_list
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    table.set_meta("leakage_units", "bits_per_source_symbol");

    for row in rows {
        let m = row.metrics;
        table.push(vec![
            Cell::UInt(row.n as u64),
            Cell::Float(m.eff_rate),
            Cell::Float(m.eff_common_rate),
            Cell::UInt(row.seed),
            Cell::Float(m.realism_tv),
            Cell::Float(m.avg_distortion),
            Cell::Float(m.leakage_bits.0),
            Cell::Float(m.cr_independence_tv),
            Cell::UInt(m.fallback_count),
        ]);
    }
    Ok(table)
}

//! Command-line frontend: config parsing, subcommand dispatch, JSON/CSV
//! output.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::ConfigKind;
use crate::error::{Error, Result};
use crate::{comb, model, oracle, scattering, spectra, witten};

#[derive(Debug, Parser)]
#[command(
    name = "susydelta",
    about = "Supersymmetric quantum mechanics of Dirac-delta arrays: \
             scattering, bound states, bands, Witten index",
    version
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; defaults to csv for scatter and json elsewhere.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (accepted for compatibility; evaluation is
    /// deterministic and single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for the randomized verify sweeps.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Path to a JSON configuration, e.g.
    /// {"kind": "double_equal", "alpha": 2.0, "a": 7.0}.
    #[arg(long)]
    config: PathBuf,
}

impl ConfigArg {
    fn load(&self) -> Result<ConfigKind> {
        let text = fs::read_to_string(&self.config)?;
        let kind: ConfigKind = serde_json::from_str(&text)?;
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scattering amplitudes on an energy grid (CSV).
    Scatter {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        sector: u8,
        #[arg(long)]
        e_min: f64,
        #[arg(long)]
        e_max: f64,
        /// Number of grid energies.
        #[arg(long, default_value_t = 101)]
        n: usize,
    },
    /// Bound states, SUSY pairs and singlets (JSON).
    Bound {
        #[command(flatten)]
        config: ConfigArg,
        /// 0, 1 or both.
        #[arg(long, default_value = "both")]
        sector: String,
        /// Also list E = 0 anti-bound descendants.
        #[arg(long)]
        anti_bound: bool,
    },
    /// Band structure of the alternating comb (JSON).
    Bands {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        k_max: f64,
        /// Also dump the dispersion curve g(k) as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Regularized Witten index (JSON).
    Witten {
        #[command(flatten)]
        config: ConfigArg,
        /// Comma-separated regulators, e.g. 0.1,0.01,0.001.
        #[arg(long, default_value = "0.1,0.01,0.001,0.0001")]
        t_list: String,
    },
    /// Candidate zero modes e^{±W} (JSON).
    ZeroMode {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        sector: u8,
    },
    /// Cross-check closed forms against the transfer-matrix oracle (JSON).
    Verify {
        /// Random cases per configuration family.
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

/// Run the CLI; returns the process exit code (0 success, 1 internal
/// inconsistency, 2 configuration/usage error).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; usage problems exit 2, while
            // --help/--version exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            let done = match &cli.out {
                Some(path) => fs::write(path, output).map_err(Error::Io),
                None => std::io::stdout()
                    .write_all(output.as_bytes())
                    .map_err(Error::Io),
            };
            if let Err(e) = done {
                eprintln!("error: {e}");
                return 2;
            }
            0
        }
        Err(Error::Inconsistency(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String> {
    let is_scatter = matches!(cli.command, Command::Scatter { .. });
    let format = cli.format.unwrap_or(if is_scatter {
        OutputFormat::Csv
    } else {
        OutputFormat::Json
    });
    if format == OutputFormat::Csv && !is_scatter {
        return Err(Error::InvalidConfiguration(
            "csv output is only available for the scatter grid; use --format json".into(),
        ));
    }
    match &cli.command {
        Command::Scatter {
            config,
            sector,
            e_min,
            e_max,
            n,
        } => scatter_grid(config.load()?, *sector, *e_min, *e_max, *n, format),
        Command::Bound {
            config,
            sector,
            anti_bound,
        } => bound_json(config.load()?, sector, *anti_bound),
        Command::Bands { alpha, a, k_max, csv } => bands_json(*alpha, *a, *k_max, csv.as_deref()),
        Command::Witten { config, t_list } => {
            let ts: std::result::Result<Vec<f64>, _> =
                t_list.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let ts = ts.map_err(|e| Error::InvalidConfiguration(format!("bad --t-list: {e}")))?;
            let report = witten::witten_index(config.load()?, &ts)?;
            Ok(serde_json::to_string_pretty(&report)? + "\n")
        }
        Command::ZeroMode { config, sector } => zero_mode_json(config.load()?, *sector),
        Command::Verify { cases } => verify_json(cli.seed, *cases),
    }
}

fn scatter_grid(
    kind: ConfigKind,
    sector: u8,
    e_min: f64,
    e_max: f64,
    n: usize,
    format: OutputFormat,
) -> Result<String> {
    if n < 2 || e_max <= e_min {
        return Err(Error::InvalidConfiguration(
            "scatter grid needs n >= 2 and e_max > e_min".into(),
        ));
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let e = e_min + (e_max - e_min) * i as f64 / (n - 1) as f64;
        let amps = match scattering::amplitudes_for(kind, e, sector) {
            Ok(a) => a,
            Err(Error::Pole { .. }) => continue, // grid point sits on a pole
            Err(e) => return Err(e),
        };
        let flux = if amps.both_open() {
            amps.flux_residual()
        } else {
            f64::NAN
        };
        rows.push((e, amps, flux));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(
                "E,k_minus_re,k_minus_im,k_plus_re,k_plus_im,sigma_r_re,sigma_r_im,rho_r_re,rho_r_im,\
                 sigma_l_re,sigma_l_im,rho_l_re,rho_l_im,flux_residual\n",
            );
            for (e, amps, flux) in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    e,
                    amps.k_minus.re,
                    amps.k_minus.im,
                    amps.k_plus.re,
                    amps.k_plus.im,
                    amps.sigma_r.re,
                    amps.sigma_r.im,
                    amps.rho_r.re,
                    amps.rho_r.im,
                    amps.sigma_l.re,
                    amps.sigma_l.im,
                    amps.rho_l.re,
                    amps.rho_l.im,
                    flux
                ));
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let docs: Vec<serde_json::Value> = rows
                .iter()
                .map(|(e, amps, flux)| {
                    json!({
                        "E": e,
                        "k_minus": [amps.k_minus.re, amps.k_minus.im],
                        "k_plus": [amps.k_plus.re, amps.k_plus.im],
                        "sigma_r": [amps.sigma_r.re, amps.sigma_r.im],
                        "rho_r": [amps.rho_r.re, amps.rho_r.im],
                        "sigma_l": [amps.sigma_l.re, amps.sigma_l.im],
                        "rho_l": [amps.rho_l.re, amps.rho_l.im],
                        "flux_residual": if flux.is_nan() { None } else { Some(*flux) },
                    })
                })
                .collect();
            Ok(serde_json::to_string_pretty(&docs)? + "\n")
        }
    }
}

#[derive(Serialize)]
struct StateSummary {
    energy: f64,
    kind: spectra::StateKind,
    parity: spectra::Parity,
    sector: u8,
    kappa: std::collections::BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
}

impl From<&spectra::BoundState> for StateSummary {
    fn from(s: &spectra::BoundState) -> Self {
        StateSummary {
            energy: s.energy,
            kind: s.kind,
            parity: s.parity,
            sector: s.sector,
            kappa: s.kappa.clone(),
            q: s.q,
        }
    }
}

fn bound_json(kind: ConfigKind, sector: &str, anti_bound: bool) -> Result<String> {
    let (states, pairs, singlets) = match sector {
        "0" | "1" => {
            let s: u8 = sector.parse().unwrap();
            let states = spectra::find_states(kind, s, anti_bound)?;
            let singlets: Vec<usize> = states
                .iter()
                .enumerate()
                .filter(|(_, st)| st.energy.abs() <= 1e-9)
                .map(|(i, _)| i)
                .collect();
            (states, Vec::new(), singlets)
        }
        "both" => {
            let report = spectra::susy_pairing_report(kind)?;
            let n0 = report.states0.len();
            let pairs: Vec<(usize, usize)> =
                report.pairs.iter().map(|&(i, j)| (i, n0 + j)).collect();
            let singlets: Vec<usize> = report
                .singlets
                .iter()
                .map(|&(sec, i)| if sec == 0 { i } else { n0 + i })
                .collect();
            let mut states = report.states0;
            states.extend(report.states1);
            (states, pairs, singlets)
        }
        other => {
            return Err(Error::InvalidConfiguration(format!(
                "--sector must be 0, 1 or both (got {other})"
            )))
        }
    };
    let summaries: Vec<StateSummary> = states.iter().map(StateSummary::from).collect();
    let doc = json!({
        "states": summaries,
        "pairs": pairs,
        "singlets": singlets,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn bands_json(alpha: f64, a: f64, k_max: f64, csv: Option<&std::path::Path>) -> Result<String> {
    if alpha <= 0.0 || a <= 0.0 || k_max <= 0.0 {
        return Err(Error::InvalidConfiguration(
            "bands needs alpha > 0, a > 0, k_max > 0".into(),
        ));
    }
    let bands = comb::propagating_bands(alpha, a, k_max);
    let non_prop = comb::nonpropagating_band(alpha, a);
    if let Some(path) = csv {
        let mut text = String::from("k,g\n");
        let n = 2000;
        for i in 1..=n {
            let k = k_max * i as f64 / n as f64;
            text.push_str(&format!("{},{}\n", k, comb::dispersion_g(k, alpha, a)));
        }
        fs::write(path, text)?;
    }
    let doc = json!({
        "propagating": bands.iter().map(|b| json!({
            "k_lo": b.k_lo, "k_hi": b.k_hi, "E_lo": b.e_lo, "E_hi": b.e_hi,
        })).collect::<Vec<_>>(),
        "non_propagating": {
            "kappa_max": non_prop.kappa_max,
            "E_lo": non_prop.e_lo,
            "E_hi": non_prop.e_hi,
            "exists_upper_edge": non_prop.exists_upper_edge,
            "a_critical": non_prop.a_critical,
        },
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn zero_mode_json(kind: ConfigKind, sector: u8) -> Result<String> {
    let w = model::build_superpotential(kind)?;
    let zm = model::zero_mode(&w, sector);
    let doc = json!({
        "sector": sector,
        "normalizable": zm.normalizable,
        "norm_constant": zm.norm_constant,
        "v_minus": w.v_minus(),
        "v_plus": w.v_plus(),
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    cases: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(name: &'static str, cases: usize, max_residual: f64, tolerance: f64) -> Self {
        Check {
            name,
            cases,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
        }
    }
}

fn random_kind(rng: &mut ChaCha8Rng, family: usize) -> ConfigKind {
    let s = |rng: &mut ChaCha8Rng| rng.gen_range(0.5..3.0);
    let d = |rng: &mut ChaCha8Rng| rng.gen_range(0.4..2.5);
    match family {
        0 => ConfigKind::DeltaStep {
            mu: s(rng),
            g: rng.gen_range(-0.4..0.4),
        },
        1 => ConfigKind::DoubleEqual {
            alpha: s(rng),
            a: d(rng),
        },
        2 => ConfigKind::DoubleUnequal {
            alpha: s(rng),
            beta: s(rng),
            a: d(rng),
        },
        3 => ConfigKind::TripleUnequal {
            alpha: s(rng),
            mu: s(rng),
            beta: s(rng),
            a: d(rng),
        },
        _ => ConfigKind::TripleAlternating {
            alpha: s(rng),
            a: d(rng),
        },
    }
}

fn max_floor(kind: ConfigKind) -> f64 {
    let w = model::build_superpotential(kind).unwrap();
    w.slopes.iter().map(|s| s * s).fold(0.0, f64::max)
}

fn verify_json(seed: u64, cases: usize) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Closed-form amplitudes vs the transfer-matrix oracle, plus flux and
    // SUSY identities, over random configurations and open-channel energies.
    let mut worst_oracle: f64 = 0.0;
    let mut worst_flux: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    let mut worst_map: f64 = 0.0;
    let mut n_amp = 0;
    for family in 0..5 {
        for _ in 0..cases {
            let kind = random_kind(&mut rng, family);
            let e = max_floor(kind) + rng.gen_range(0.05..25.0);
            let w = model::build_superpotential(kind).unwrap();
            let (v0, v1) = model::partner_potentials(&w);
            for sector in [0u8, 1] {
                let amps = scattering::amplitudes_for(kind, e, sector)?;
                let pot = if sector == 0 { &v0 } else { &v1 };
                let orc = oracle::oracle_amplitudes(pot, e)?;
                for (a, b) in [
                    (amps.sigma_r, orc.sigma_r),
                    (amps.rho_r, orc.rho_r),
                    (amps.sigma_l, orc.sigma_l),
                    (amps.rho_l, orc.rho_l),
                ] {
                    worst_oracle = worst_oracle.max((a - b).norm());
                }
                worst_flux = worst_flux.max(amps.flux_residual());
                n_amp += 1;
            }
            let a0 = scattering::amplitudes_for(kind, e, 0)?;
            let a1 = scattering::amplitudes_for(kind, e, 1)?;
            worst_modulus = worst_modulus
                .max((a0.sigma_r.norm() - a1.sigma_r.norm()).abs())
                .max((a0.rho_r.norm() - a1.rho_r.norm()).abs())
                .max((a0.sigma_l.norm() - a1.sigma_l.norm()).abs())
                .max((a0.rho_l.norm() - a1.rho_l.norm()).abs());
            let mapped = scattering::susy_map_amplitudes(&a0, w.v_minus(), w.v_plus())?;
            worst_map = worst_map
                .max((mapped.sigma_r - a1.sigma_r).norm())
                .max((mapped.rho_r - a1.rho_r).norm())
                .max((mapped.sigma_l - a1.sigma_l).norm())
                .max((mapped.rho_l - a1.rho_l).norm());
        }
    }
    checks.push(Check::new("amplitudes_vs_oracle", n_amp, worst_oracle, 1e-8));
    checks.push(Check::new("flux_conservation", n_amp, worst_flux, 1e-12));
    checks.push(Check::new("susy_modulus_equality", n_amp / 2, worst_modulus, 1e-12));
    checks.push(Check::new("susy_map_vs_direct", n_amp / 2, worst_map, 1e-10));

    // Bound-state sets vs the oracle's independent search.
    let mut worst_bound: f64 = 0.0;
    let mut n_bound = 0;
    for family in [1usize, 2, 3] {
        for _ in 0..(cases / 5).max(4) {
            let kind = random_kind(&mut rng, family);
            let w = model::build_superpotential(kind).unwrap();
            let (v0, _) = model::partner_potentials(&w);
            let states = spectra::find_bound_states(kind, 0)?;
            let top = v0.min_outer_floor();
            let oracle_set = oracle::oracle_bound_states(&v0, top * 1e-9, top * (1.0 - 1e-9));
            let mine: Vec<f64> = states
                .iter()
                .filter(|s| s.energy > top * 1e-9)
                .map(|s| s.energy)
                .collect();
            if mine.len() != oracle_set.len() {
                return Err(Error::Inconsistency(format!(
                    "bound-state count mismatch for {kind:?}: {} vs oracle {}",
                    mine.len(),
                    oracle_set.len()
                )));
            }
            for (a, b) in mine.iter().zip(&oracle_set) {
                worst_bound = worst_bound.max((a - b).abs());
            }
            n_bound += 1;
        }
    }
    checks.push(Check::new("bound_states_vs_oracle", n_bound, worst_bound, 1e-7));

    // Comb dispersion vs the monodromy half-trace.
    let mut worst_disp: f64 = 0.0;
    for _ in 0..10 {
        let alpha = rng.gen_range(0.5..4.0);
        let a = rng.gen_range(0.4..2.0);
        for i in 1..=50 {
            let k = i as f64 * 0.2;
            worst_disp = worst_disp
                .max((oracle::oracle_dispersion(alpha, a, k) - comb::dispersion_g(k, alpha, a)).abs());
        }
    }
    checks.push(Check::new("dispersion_vs_monodromy", 500, worst_disp, 1e-9));

    let pass = checks.iter().all(|c| c.pass);
    let doc = json!({ "checks": checks, "pass": pass, "seed": seed });
    if !pass {
        eprintln!("{}", serde_json::to_string_pretty(&doc)?);
        return Err(Error::Inconsistency("verification sweep failed".into()));
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qisim_core::bell::{
    chsh_expectations, entanglement_entropy, optimal_settings, sampled_chsh, violation_csv, violation_curve,
};
use qisim_core::density::DensityMatrix;
use qisim_core::dynamics::{
    decoherence_initial_state, kraus_extract, rabi_model, reduced_evolution, reduced_series_csv, three_qubit_model,
    two_qubit_model, uniform_grid, DECOHERENCE_COUPLINGS, DEFAULT_GRID_POINTS,
};
use qisim_core::info::{coinflip_csv, coinflip_curve, COINFLIP_POINTS};
use qisim_core::lattice::{
    digitize, eigenfunction_table_csv, nyquist_l, sampling_fidelity, schwinger_csv, schwinger_evolve,
    schwinger_ground_state, schwinger_h4, SchwingerParams,
};
use qisim_core::linalg::CMatrix;
use qisim_core::oscillators::{area_law_scan, tfd_csv, tfd_curve, tfd_pair, AreaLawConfig};
use qisim_core::qstate::experiments::{run_experiment, DEFAULT_MESSAGE};
use qisim_core::qstate::StateVector;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_SHOTS: usize = 10;
const CHSH_POINTS: usize = 91;
const TFD_POINTS: usize = 99;
const HERMITE_LEVELS: usize = 16;
const HERMITE_TABLE_LEVELS: usize = 4;
const HERMITE_TABLE_POINTS: usize = 401;

/// Reruns the quantum-information experiments and writes their data as CSV/JSON.
#[derive(Parser, Debug)]
#[command(name = "qisim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Data format of tabular outputs.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    /// RNG seed (default 1).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of shots (default 10).
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// NOT gate on one qubit.
    Experiment1(ExperimentArgs),
    /// Bell pair.
    Experiment2(ExperimentArgs),
    /// SWAP built from three CNOTs, for X^t with t = 0, 1, 0.5.
    Experiment3(ExperimentArgs),
    /// Teleportation with measurement and classical control.
    Experiment4(ExperimentArgs),
    /// Teleportation with deferred measurement.
    Experiment5(ExperimentArgs),
    /// Shannon entropy of a biased coin.
    Coinflip(Plain),
    /// Two-qubit atom-photon model: reduced state of qubit 0 from |01>.
    Rabi(TimeArgs),
    /// Three-qubit decoherence model: reduced state of qubit 0 from |+01>.
    Decohere(TimeArgs),
    /// Kraus operators and P matrices of the two-qubit model at t = 1.
    Kraus(Plain),
    /// CHSH violation against entanglement entropy.
    Chsh(ChshArgs),
    /// Entanglement entropy of two coupled oscillators against theta.
    Tfd(TfdArgs),
    /// Entropy of a ball in a radial lattice field and the area-law fit.
    Arealaw(AreaArgs),
    /// Oscillator eigenfunctions, field digitization and sampling fidelity.
    Hermite(HermiteArgs),
    /// Two-site Schwinger model: ground state and real-time evolution.
    Schwinger(SchwingerArgs),
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args, Debug)]
struct Plain {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TimeArgs {
    #[command(flatten)]
    common: Common,
    /// End of the time grid (400 points from 0).
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
}

#[derive(Args, Debug)]
struct ChshArgs {
    #[command(flatten)]
    common: Common,
    /// Single state angle; without it the full curve over [0, π/2] is written.
    #[arg(long)]
    alpha: Option<f64>,
    /// Monte Carlo shots at --alpha (requires --alpha).
    #[arg(long)]
    shots: Option<usize>,
    /// Monte Carlo seed (default 1).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct TfdArgs {
    #[command(flatten)]
    common: Common,
    /// Single coupling angle in (0, π/2); without it the full curve is written.
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args, Debug)]
struct AreaArgs {
    #[command(flatten)]
    common: Common,
    /// Number of radial sites.
    #[arg(long, default_value_t = 60)]
    n: usize,
    /// Fixed partial-wave cutoff; without it the sum stops adaptively.
    #[arg(long)]
    lmax: Option<u32>,
}

#[derive(Args, Debug)]
struct HermiteArgs {
    #[command(flatten)]
    common: Common,
    /// Qubits per field site.
    #[arg(long, default_value_t = 3)]
    nq: usize,
}

#[derive(Args, Debug)]
struct SchwingerArgs {
    #[command(flatten)]
    common: Common,
    /// Hopping x = 1/(ag)^2.
    #[arg(long, default_value_t = 0.6)]
    x: f64,
    /// Mass μ = 2m/(ag^2).
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    /// End of the time grid (400 points from 0).
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
}

struct Writer {
    dir: PathBuf,
    written: Vec<String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, content: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path.display().to_string());
        Ok(())
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }

    /// Writes `stem.csv` or `stem.json` depending on `format`.
    fn table<T: Serialize + ?Sized>(&mut self, stem: &str, format: Format, csv: &str, rows: &T) -> Result<()> {
        match format {
            Format::Csv => self.text(&format!("{stem}.csv"), csv),
            Format::Json => self.json(&format!("{stem}.json"), rows),
        }
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn json_only(common: &Common, command: &str) -> Result<()> {
    if common.format == Some(Format::Csv) {
        return Err(Usage(format!("`{command}` writes JSON only; --format csv does not apply")).into());
    }
    Ok(())
}

fn complex_entries(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn experiment(number: u8, args: &ExperimentArgs) -> Result<(Writer, String)> {
    json_only(&args.common, &format!("experiment{number}"))?;
    let run = run_experiment(number, args.sampling.shots, args.sampling.seed, DEFAULT_MESSAGE)?;
    let mut w = Writer::new(&args.common.out)?;
    let records: serde_json::Map<String, serde_json::Value> = run
        .records
        .iter()
        .map(|(k, r)| Ok((k.clone(), serde_json::to_value(r)?)))
        .collect::<Result<_>>()?;
    w.json(&format!("experiment{number}.json"), &records)?;
    w.text(&format!("experiment{number}.txt"), &run.transcript)?;
    Ok((w, run.transcript))
}

fn run(cli: Cli) -> Result<(Writer, String)> {
    let mut summary = String::new();
    let w = match &cli.command {
        Command::Experiment1(a) => return experiment(1, a),
        Command::Experiment2(a) => return experiment(2, a),
        Command::Experiment3(a) => return experiment(3, a),
        Command::Experiment4(a) => return experiment(4, a),
        Command::Experiment5(a) => return experiment(5, a),
        Command::Coinflip(a) => {
            let curve = coinflip_curve(COINFLIP_POINTS);
            let rows: Vec<_> = curve.iter().map(|(p, s)| json!({"p": p, "entropy": s})).collect();
            let mut w = Writer::new(&a.common.out)?;
            w.table("coinflip", a.common.format.unwrap_or(Format::Csv), &coinflip_csv(&curve), &rows)?;
            w
        }
        Command::Rabi(a) | Command::Decohere(a) => {
            let rabi = matches!(cli.command, Command::Rabi(_));
            let grid = uniform_grid(a.t_max, DEFAULT_GRID_POINTS);
            let (h, psi0, stem) = if rabi {
                (rabi_model(1.0, 1.0), StateVector::basis(2, 0b01), "rabi")
            } else {
                (three_qubit_model(DECOHERENCE_COUPLINGS), decoherence_initial_state(), "decohere")
            };
            let samples = reduced_evolution(&h, &grid, &DensityMatrix::from_statevector(&psi0), &[0])?;
            let mut w = Writer::new(&a.common.out)?;
            w.table(stem, a.common.format.unwrap_or(Format::Csv), &reduced_series_csv(&samples), &samples)?;
            let peak = samples.iter().map(|s| s.entropy_bits).fold(0.0, f64::max);
            summary = format!("max entropy {peak} bits over t in [0, {}]\n", a.t_max);
            w
        }
        Command::Kraus(a) => {
            json_only(&a.common, "kraus")?;
            let t = 1.0;
            let h = two_qubit_model(1.0, 1.0, 1.0);
            let k = kraus_extract(&h, t)?;
            let mut ops = serde_json::Map::new();
            let mut projectors = serde_json::Map::new();
            for i in 1..=2 {
                for j in 1..=2 {
                    ops.insert(format!("E{i}{j}"), json!(complex_entries(k.op(i, j))));
                    projectors.insert(format!("P{i}{j}"), json!(complex_entries(&k.p(i, j))));
                }
            }
            let plus = StateVector::normalized(vec![qisim_core::linalg::ONE; 2])?;
            let mut entropies = serde_json::Map::new();
            for env in 0..2 {
                let rho0 = DensityMatrix::from_statevector(&plus.tensor(&StateVector::basis(1, env)));
                let s = reduced_evolution(&h, &[t], &rho0, &[0])?[0].entropy_bits;
                entropies.insert(format!("env{env}"), json!(s));
            }
            let report = json!({
                "t": t,
                "kraus": ops,
                "p": projectors,
                "p11_plus_p12": complex_entries(&(k.p(1, 1) + k.p(1, 2))),
                "p21_plus_p22": complex_entries(&(k.p(2, 1) + k.p(2, 2))),
                "entropy_bits_from_plus": entropies,
            });
            let mut w = Writer::new(&a.common.out)?;
            w.json("kraus.json", &report)?;
            summary = format!("S(rho_S(1)) = {} bits\n", report["entropy_bits_from_plus"]["env0"]);
            w
        }
        Command::Chsh(a) => {
            let mut w = Writer::new(&a.common.out)?;
            match a.alpha {
                None => {
                    if a.shots.is_some() {
                        return Err(Usage("--shots requires --alpha".into()).into());
                    }
                    let curve = violation_curve(CHSH_POINTS)?;
                    let rows: Vec<_> = curve
                        .iter()
                        .map(|(al, s, v)| json!({"alpha": al, "entropy": s, "violation": v}))
                        .collect();
                    w.table("chsh", a.common.format.unwrap_or(Format::Csv), &violation_csv(&curve), &rows)?;
                }
                Some(alpha) => {
                    json_only(&a.common, "chsh --alpha")?;
                    let (settings, e_max) = optimal_settings(alpha);
                    let sampled = match a.shots {
                        Some(shots) => Some(sampled_chsh(&settings, shots, a.seed)?),
                        None => None,
                    };
                    let report = json!({
                        "alpha": alpha,
                        "entropy": entanglement_entropy(alpha)?,
                        "settings": settings,
                        "analytic": chsh_expectations(&settings),
                        "e_bell_max": e_max,
                        "violation": e_max - 2.0,
                        "sampled": sampled,
                        "seed": a.shots.map(|_| a.seed),
                    });
                    w.json("chsh.json", &report)?;
                    summary = format!("violation {}\n", e_max - 2.0);
                }
            }
            w
        }
        Command::Tfd(a) => {
            let mut w = Writer::new(&a.common.out)?;
            match a.theta {
                None => {
                    let curve = tfd_curve(TFD_POINTS)?;
                    w.table("tfd", a.common.format.unwrap_or(Format::Csv), &tfd_csv(&curve), &curve)?;
                }
                Some(theta) => {
                    json_only(&a.common, "tfd --theta")?;
                    let p = tfd_pair(theta, 1.0)?;
                    w.json("tfd.json", &p)?;
                    summary = format!("S(rho_L) = {} nats\n", p.s_exact);
                }
            }
            w
        }
        Command::Arealaw(a) => {
            let config = match a.lmax {
                Some(l) => AreaLawConfig::fixed(a.n, l),
                None => AreaLawConfig::adaptive(a.n),
            };
            let curve = area_law_scan(&config)?;
            let mut w = Writer::new(&a.common.out)?;
            w.table("arealaw", a.common.format.unwrap_or(Format::Csv), &curve.csv(), &curve)?;
            w.json("arealaw_fit.json", &curve.sidecar())?;
            summary = format!("lambda = {} nats at l_max = {}\n", curve.fit_lambda, curve.l_max);
            w
        }
        Command::Hermite(a) => {
            let field = digitize(a.nq)?;
            let fidelity = sampling_fidelity(a.nq, HERMITE_LEVELS)?;
            let l = nyquist_l(1 << a.nq)?;
            let mut w = Writer::new(&a.common.out)?;
            let table = eigenfunction_table_csv(HERMITE_TABLE_LEVELS, l, HERMITE_TABLE_POINTS)?;
            match a.common.format.unwrap_or(Format::Csv) {
                Format::Csv => w.text("hermite.csv", &table)?,
                Format::Json => {
                    let rows: Vec<Vec<f64>> = table
                        .lines()
                        .skip(1)
                        .map(|line| line.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect())
                        .collect();
                    w.json("hermite.json", &json!({"columns": ["x", "psi0", "psi1", "psi2", "psi3"], "rows": rows}))?;
                }
            }
            w.json("digitization.json", &field.table_json())?;
            w.json("sampling_fidelity.json", &json!({"n_q": a.nq, "L": l, "levels": fidelity}))?;
            summary = format!("L = {l}\n");
            w
        }
        Command::Schwinger(a) => {
            let p = SchwingerParams::new(a.x, a.mu)?;
            let series = schwinger_evolve(p, &uniform_grid(a.t_max, DEFAULT_GRID_POINTS));
            let (energy, amplitudes) = schwinger_ground_state(p);
            let h4 = schwinger_h4(p);
            let rows: Vec<Vec<f64>> = (0..4).map(|r| (0..4).map(|c| h4[(r, c)]).collect()).collect();
            let mut w = Writer::new(&a.common.out)?;
            w.table("schwinger", a.common.format.unwrap_or(Format::Csv), &schwinger_csv(&series), &series)?;
            w.json(
                "schwinger_ground.json",
                &json!({"x": a.x, "mu": a.mu, "h4": rows, "ground_energy": energy, "ground_amplitudes": amplitudes}),
            )?;
            summary = format!("ground energy {energy}\n");
            w
        }
    };
    Ok((w, summary))
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let message = e.render().to_string();
            eprintln!("{}", error_json("usage", message.trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((w, summary)) => {
            print!("{summary}");
            for f in &w.written {
                println!("wrote {f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(u) = e.downcast_ref::<Usage>() {
                eprintln!("{}", error_json("usage", &u.0));
                return ExitCode::from(2);
            }
            let kind = if e.downcast_ref::<qisim_core::Error>().is_some() {
                "module"
            } else {
                "runtime"
            };
            eprintln!("{}", error_json(kind, &format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}

//! Command-line front end: band structures and gap scans as RFC-4180 CSV,
//! verification subcommands emitting JSON certificates.
//!
//! Exit codes: 0 all checks passed / output written, 1 a verification
//! failed, 2 usage or configuration error. Output is byte-identical for a
//! given configuration and seed.

use crate::bdg::{
    block_energies, gap_scan, interp_block, single_layer_block, single_layer_chern, PipParams,
};
use crate::boson::{
    bilinear_along, bosonize_hamiltonian, gauge_fixed_sector, pip_ham_terms, DualPath, Species,
};
use crate::lattice::{Dir, EdgeLattice};
use crate::meraqle::{
    face_parity_ground_check, run_plain_meraqle, spectral_duality_check,
    spin_disentanglement_certificate,
};
use crate::qa::{time_decay_exponent, FilterFunction};
use crate::renorm::{verify_generator_transformations, verify_hop_images};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirArg {
    X,
    Y,
}

impl From<DirArg> for Dir {
    fn from(d: DirArg) -> Dir {
        match d {
            DirArg::X => Dir::X,
            DirArg::Y => Dir::Y,
        }
    }
}

/// Run configuration: model parameters plus a seed echoed into every
/// certificate (all computations are deterministic).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub params: PipParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            params: PipParams::default(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "meraql", disable_version_flag = true)]
pub struct Cli {
    /// TOML configuration file (model parameters, seed).
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Seed echoed into certificates (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasiparticle bands of the (interpolated) Bloch block as CSV.
    Bands(BandsArgs),
    /// Minimum excitation gap over the interpolation, as CSV.
    GapScan(GapScanArgs),
    /// Chern number of the single-layer model.
    Chern(ChernArgs),
    /// Filter function samples and its time-domain decay exponent, as CSV.
    Filter(FilterArgs),
    /// Verification subcommands; each emits a JSON certificate.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    /// Coarse-graining direction of the two-site cell.
    #[arg(long, value_enum, default_value = "x")]
    pub dir: DirArg,
    /// Interpolation parameter in [0, 1]; omit for the single-layer model.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Momentum grid points per axis.
    #[arg(long, default_value_t = 32)]
    pub nk: usize,
}

#[derive(Debug, Args)]
pub struct GapScanArgs {
    #[arg(long, value_enum, default_value = "x")]
    pub dir: DirArg,
    #[arg(long, default_value_t = 33)]
    pub n_lambda: usize,
    #[arg(long, default_value_t = 32)]
    pub nk: usize,
}

#[derive(Debug, Args)]
pub struct ChernArgs {
    #[arg(long, default_value_t = 24)]
    pub nk: usize,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Number of box factors in the filter construction.
    #[arg(long, default_value_t = 256)]
    pub n_max: usize,
    /// Frequency grid points (odd).
    #[arg(long, default_value_t = 4097)]
    pub grid: usize,
    /// Frequency samples emitted to the CSV.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub what: VerifyCommand,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Stabilizer-group certificate of one disentangling layer.
    Stab {
        #[arg(long, default_value_t = 4)]
        lx: usize,
        #[arg(long, default_value_t = 4)]
        ly: usize,
        #[arg(long, value_enum, default_value = "x")]
        dir: DirArg,
    },
    /// Exhaustive generator-transformation and hop-image audit of the
    /// CNOT coarse-graining circuit.
    Renorm {
        #[arg(long, default_value_t = 4)]
        lx: usize,
        #[arg(long, default_value_t = 4)]
        ly: usize,
        #[arg(long, value_enum, default_value = "x")]
        dir: DirArg,
    },
    /// Path independence and gauge-sector round trip of the fermion-to-spin
    /// mapping.
    Bosonization {
        #[arg(long, default_value_t = 4)]
        lx: usize,
        #[arg(long, default_value_t = 4)]
        ly: usize,
    },
    /// Exact spin/fermion spectral matching on the 2×2 torus.
    Duality,
    /// Full plain-lattice renormalization run with per-level certificates.
    Meraqle {
        #[arg(long, default_value_t = 8)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        nu: usize,
        #[arg(long, default_value_t = 768)]
        qa_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        e_gap: f64,
    },
}

/// RFC-4180 CSV writer: CRLF records, quoting when a field contains a
/// comma, quote, or line break.
pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W) -> Self {
        CsvWriter { out }
    }

    pub fn record<S: AsRef<str>>(&mut self, fields: &[S]) -> std::io::Result<()> {
        let mut first = true;
        for f in fields {
            if !first {
                write!(self.out, ",")?;
            }
            first = false;
            let f = f.as_ref();
            if f.contains([',', '"', '\n', '\r']) {
                write!(self.out, "\"{}\"", f.replace('"', "\"\""))?;
            } else {
                write!(self.out, "{f}")?;
            }
        }
        write!(self.out, "\r\n")
    }
}

fn fmt(x: f64) -> String {
    // Shortest round-trip representation: deterministic for a given input.
    format!("{x}")
}

#[derive(Debug, Serialize)]
struct Certificate<T: Serialize> {
    seed: u64,
    params: PipParams,
    pass: bool,
    report: T,
}

fn emit_certificate<T: Serialize>(
    out: &mut dyn Write,
    cfg: &RunConfig,
    pass: bool,
    report: T,
) -> std::io::Result<i32> {
    let cert = Certificate {
        seed: cfg.seed,
        params: cfg.params,
        pass,
        report,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&cert)?)?;
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn load_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("bad config: {e}"))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Runs a parsed command, writing to `out`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(out, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    match run_inner(cli, &cfg, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn run_inner(cli: &Cli, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, String> {
    let p = &cfg.params;
    let err = |e: crate::Error| e.to_string();
    let io = |e: std::io::Error| e.to_string();
    match &cli.command {
        Command::Bands(a) => {
            if a.nk < 2 {
                return Err("nk must be at least 2".into());
            }
            if a.lambda.is_some_and(|l| !(0.0..=1.0).contains(&l)) {
                return Err("lambda must lie in [0, 1]".into());
            }
            let mut w = CsvWriter::new(out);
            let n_bands = if a.lambda.is_some() { 4 } else { 2 };
            let mut header = vec!["kx".to_string(), "ky".to_string()];
            header.extend((0..n_bands).map(|b| format!("e{b}")));
            w.record(&header).map_err(io)?;
            let step = 2.0 * std::f64::consts::PI / a.nk as f64;
            for i in 0..a.nk {
                for j in 0..a.nk {
                    let (kx, ky) = (i as f64 * step, j as f64 * step);
                    let m = match a.lambda {
                        Some(l) => interp_block(p, a.dir.into(), l, kx, ky),
                        None => single_layer_block(p, kx, ky),
                    };
                    let mut row = vec![fmt(kx), fmt(ky)];
                    row.extend(block_energies(&m).iter().map(|&e| fmt(e)));
                    w.record(&row).map_err(io)?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::GapScan(a) => {
            if a.n_lambda < 2 || a.nk < 2 {
                return Err("n-lambda and nk must be at least 2".into());
            }
            let scan = gap_scan(p, a.dir.into(), a.n_lambda, a.nk);
            let mut w = CsvWriter::new(&mut *out);
            w.record(&["lambda", "min_gap"]).map_err(io)?;
            for (l, g) in &scan.per_lambda {
                w.record(&[fmt(*l), fmt(*g)]).map_err(io)?;
            }
            writeln!(
                out,
                "# min_gap={} at lambda={} kx={} ky={}",
                fmt(scan.min_gap),
                fmt(scan.argmin.0),
                fmt(scan.argmin.1),
                fmt(scan.argmin.2)
            )
            .map_err(io)?;
            Ok(if scan.min_gap > 0.0 { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Chern(a) => {
            if a.nk < 4 {
                return Err("nk must be at least 4".into());
            }
            let c = single_layer_chern(p, a.nk).map_err(err)?;
            emit_certificate(out, cfg, true, serde_json::json!({ "chern": c })).map_err(io)
        }
        Command::Filter(a) => {
            let filter = FilterFunction::build(a.n_max, a.grid).map_err(err)?;
            let mut w = CsvWriter::new(&mut *out);
            w.record(&["omega", "g_tilde", "f_tilde"]).map_err(io)?;
            for s in 0..a.samples {
                let omega = -1.5 + 3.0 * s as f64 / (a.samples - 1) as f64;
                w.record(&[fmt(omega), fmt(filter.g_tilde(omega)), fmt(filter.f_tilde(omega))])
                    .map_err(io)?;
            }
            let slope = time_decay_exponent(&filter, 10.0, 200.0, 16);
            writeln!(out, "# decay_exponent={}", fmt(slope)).map_err(io)?;
            Ok(if slope >= 0.5 { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Verify(v) => run_verify(&v.what, cfg, out),
    }
}

fn run_verify(cmd: &VerifyCommand, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, String> {
    let p = &cfg.params;
    let err = |e: crate::Error| e.to_string();
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        VerifyCommand::Stab { lx, ly, dir } => {
            let lat = EdgeLattice::build_torus(*lx, *ly).map_err(err)?;
            let cert = spin_disentanglement_certificate(&lat, (*dir).into()).map_err(err)?;
            let pass = cert.ok();
            emit_certificate(out, cfg, pass, cert).map_err(io)
        }
        VerifyCommand::Renorm { lx, ly, dir } => {
            let lat = EdgeLattice::build_torus(*lx, *ly).map_err(err)?;
            let gens = verify_generator_transformations(&lat, (*dir).into()).map_err(err)?;
            let hops = verify_hop_images(&lat, (*dir).into()).map_err(err)?;
            let pass = gens.ok() && hops.ok();
            emit_certificate(
                out,
                cfg,
                pass,
                serde_json::json!({ "generators": gens, "hop_images": hops }),
            )
            .map_err(io)
        }
        VerifyCommand::Bosonization { lx, ly } => {
            let lat = EdgeLattice::build_torus(*lx, *ly).map_err(err)?;
            // Path independence for a representative pair of homotopic
            // paths around a face.
            let a = (lat.face(0, 0), Species::Gamma);
            let b = (lat.face(1, 1), Species::GammaPrime);
            let p1 = DualPath::new(&lat, vec![lat.face(0, 0), lat.face(1, 0), lat.face(1, 1)])
                .map_err(err)?;
            let p2 = DualPath::new(&lat, vec![lat.face(0, 0), lat.face(0, 1), lat.face(1, 1)])
                .map_err(err)?;
            let enclosed = crate::boson::path_independence(&lat, a, b, &p1, &p2).map_err(err)?;
            // Round trip: bosonize the chiral Hamiltonian and pull it back.
            let terms = pip_ham_terms(&lat, p.t, p.delta, p.mu);
            let spin = bosonize_hamiltonian(&lat, &terms).map_err(err)?;
            let back = gauge_fixed_sector(&lat, &spin).map_err(err)?;
            let mut direct = crate::boson::MajoranaPolynomial::zero();
            for t in &terms {
                let poly = match t {
                    crate::boson::HamTerm::Edge { poly, .. } => poly,
                    crate::boson::HamTerm::Face { poly, .. } => poly,
                    crate::boson::HamTerm::General { poly } => poly,
                };
                direct = direct.add(poly);
            }
            let round_trip_error = back.max_coeff_diff(&direct);
            // A straight and an L-shaped realization of one more bilinear.
            let straight = bilinear_along(
                &lat,
                a,
                b,
                &DualPath::l_shaped(&lat, lat.face(0, 0), lat.face(1, 1)),
            )
            .map_err(err)?;
            let pass = round_trip_error < 1e-12 && !straight.op.support().is_empty();
            emit_certificate(
                out,
                cfg,
                pass,
                serde_json::json!({
                    "enclosed_vertices": enclosed,
                    "round_trip_error": round_trip_error,
                }),
            )
            .map_err(io)
        }
        VerifyCommand::Duality => {
            let report = spectral_duality_check(p).map_err(err)?;
            let (e0, deg) = face_parity_ground_check().map_err(err)?;
            let pass = report.ok() && (e0 + 4.0).abs() < 1e-9 && deg == 4;
            emit_certificate(
                out,
                cfg,
                pass,
                serde_json::json!({
                    "spectral": report,
                    "face_parity_ground_energy": e0,
                    "face_parity_degeneracy": deg,
                }),
            )
            .map_err(io)
        }
        VerifyCommand::Meraqle { l, nu, qa_steps, e_gap } => {
            let report = run_plain_meraqle(p, *l, *nu, *e_gap, *qa_steps).map_err(err)?;
            let pass = report.ok();
            emit_certificate(out, cfg, pass, report).map_err(io)
        }
    }
}

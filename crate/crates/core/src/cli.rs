//! Command-line front end. `run` returns the process exit code: 0 on success
//! or a valid certificate, 2 when a computed result is invalid, 1 on error.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::certificate::{certify_with, CertifyOptions, GammaMode, GapCertificate, ReportFormat};
use crate::dense;
use crate::ed::{self, EigenOptions};
use crate::error::{invalid, Error, Result};
use crate::mps::{self, transfer};

pub const SEED_ENV: &str = "GAPCERT_SEED";
/// Longest `a..b` range a single invocation accepts.
pub const MAX_RANGE: usize = 64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gapcert", version, about = "Spectral-gap certificates for edge-decorated hexagonal AKLT models")]
pub struct Cli {
    /// Seed for every randomized step; overrides $GAPCERT_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the gap certificate for one n or an inclusive range a..b.
    Certify {
        #[arg(long, value_parser = parse_range)]
        n: NRange,
        /// Use this gamma_Y instead of diagonalizing the Y-graph.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here (atomically) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also compute epsilon_n exactly (n <= 2 unless --allow-large-n).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        allow_large_n: bool,
    },
    /// Print the angle bound and optionally the exact epsilon_n.
    Epsilon {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        allow_large_n: bool,
    },
    /// Gap of the Y-graph Hamiltonian above its kernel.
    GammaY {
        #[arg(long)]
        n: usize,
    },
    /// Spectra of the transfer operator and the boundary Gram matrices.
    TransferReport {
        #[arg(long)]
        n: u32,
    },
    /// Projector inequality over seeded random pairs.
    FnwCheck {
        /// Dimension or inclusive range a..b.
        #[arg(long, value_parser = parse_range, default_value = "4..12")]
        dim: NRange,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run the property suite.
    Selftest,
}

/// Inclusive range of positive integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u32,
    pub end: u32,
}

impl NRange {
    pub fn values(self) -> Vec<u32> {
        (self.start..=self.end).collect()
    }
}

pub fn parse_range(s: &str) -> std::result::Result<NRange, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("'{t}': {e}"));
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if start == 0 || end < start {
        return Err(format!("range '{s}' must be nonempty and start at 1 or more"));
    }
    if (end - start) as usize >= MAX_RANGE {
        return Err(format!("range '{s}' has more than {MAX_RANGE} values"));
    }
    Ok(NRange { start, end })
}

/// `--seed`, else `$GAPCERT_SEED`, else the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(crate::DEFAULT_SEED),
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12}")
    } else {
        "undefined".to_string()
    }
}

/// Parses `argv` (program name first) and runs the command, printing to
/// stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn std::io::Write) -> Result<i32> {
    let seed = resolve_seed(cli.seed)?;
    match &cli.command {
        Command::Certify { n, gamma, format, out: path, exact, allow_large_n } => {
            let opts = CertifyOptions { seed, exact_epsilon: *exact, allow_large_n: *allow_large_n };
            let mode = gamma.map_or(GammaMode::Compute, GammaMode::Supplied);
            let ns = n.values();
            // Each n is independent; results come back in input order.
            let certs: Vec<GapCertificate> =
                ns.par_iter().map(|&k| certify_with(k, mode, &opts)).collect::<Result<_>>()?;
            let format = match format {
                Format::Json => ReportFormat::Json,
                Format::Text => ReportFormat::Text,
            };
            let doc = render_many(&certs, format);
            match path {
                Some(p) => write_atomic(p, &doc)?,
                None => out.write_all(doc.as_bytes())?,
            }
            Ok(if certs.iter().all(|c| c.valid) { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Epsilon { n, exact, allow_large_n } => {
            let b = mps::epsilon_bound(*n)?;
            writeln!(out, "n = {n}")?;
            writeln!(out, "A_n = {}", fmt(b.a_big))?;
            writeln!(out, "epsilon_bound = {}", fmt(b.eps))?;
            if let Some(r) = &b.reason {
                writeln!(out, "bound_invalid: {r}")?;
            }
            if *exact {
                let opts = EigenOptions { seed, ..EigenOptions::default() };
                let e = ed::angles::epsilon_exact_with(*n as usize, *allow_large_n, &opts)?;
                writeln!(out, "epsilon_exact = {}", fmt(e.eps))?;
                writeln!(out, "intersection_dim = {}", e.intersection_dim)?;
                writeln!(out, "method = {}", e.method.tag())?;
            }
            Ok(EXIT_OK)
        }
        Command::GammaY { n } => {
            let opts = EigenOptions { seed, ..EigenOptions::default() };
            let g = ed::hub::gamma_y_with(*n, &opts)?;
            writeln!(out, "n = {n}")?;
            writeln!(out, "hilbert_dim = {}", g.hilbert_dim)?;
            writeln!(out, "kernel_dim = {}", g.kernel_dim)?;
            writeln!(out, "gamma_Y = {}", fmt(g.gamma))?;
            Ok(EXIT_OK)
        }
        Command::TransferReport { n } => {
            transfer_report(*n, out)?;
            Ok(EXIT_OK)
        }
        Command::FnwCheck { dim, trials } => {
            let s = ed::fnw_sweep(*trials, dim.start as usize, dim.end as usize, seed)?;
            writeln!(out, "trials = {}", s.trials)?;
            writeln!(out, "dimensions = {}..{}", s.min_dim, s.max_dim)?;
            writeln!(out, "seed = {}", s.seed)?;
            writeln!(out, "nontrivial_meets = {}", s.nontrivial_meets)?;
            writeln!(out, "worst_residual = {:.3e}", s.worst_residual)?;
            let ok = s.worst_residual >= -1e-9;
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
            Ok(if ok { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Selftest => {
            let ok = selftest(seed, out)?;
            Ok(if ok { EXIT_OK } else { EXIT_INVALID })
        }
    }
}

fn render_many(certs: &[GapCertificate], format: ReportFormat) -> String {
    match (format, certs) {
        (ReportFormat::Json, [one]) => one.to_json() + "\n",
        (ReportFormat::Json, many) => {
            let values: Vec<_> = many.iter().map(|c| c.to_json_value()).collect();
            serde_json::to_string_pretty(&values).expect("json values serialize") + "\n"
        }
        (ReportFormat::Text, many) => many.iter().map(|c| c.to_text()).collect::<Vec<_>>().join("\n"),
    }
}

fn spectrum_line(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.12}")).collect::<Vec<_>>().join(", ")
}

pub fn transfer_report(n: u32, out: &mut dyn std::io::Write) -> Result<()> {
    if n == 0 {
        return invalid("decoration number n must be at least 1");
    }
    let t = transfer::AkltTransfer::new(n)?;
    let fp = transfer::fixed_point(&t.bulk)?;
    let q = mps::q_matrices(n)?;
    let mut e_spec: Vec<_> = t.bulk.spectrum()?;
    e_spec.sort_by(|a, b| b.re.total_cmp(&a.re));
    writeln!(out, "n = {n}")?;
    writeln!(out, "spec(E) = {}", e_spec.iter().map(|z| format!("{:.12}", z.re)).collect::<Vec<_>>().join(", "))?;
    writeln!(out, "spec(rho) = {}", spectrum_line(&dense::hermitian_eigenvalues(&fp.rho)?))?;
    writeln!(out, "primitive = {}", fp.primitive)?;
    writeln!(out, "a(n) = {:.12e}", transfer::a_of_n(&t.bulk, &fp.rho, n)?)?;
    writeln!(out, "spec(Q_L) = {}", spectrum_line(&dense::hermitian_eigenvalues(&q.q_left)?))?;
    writeln!(out, "spec(Q_R) = {}", spectrum_line(&dense::hermitian_eigenvalues(&q.q_right)?))?;
    writeln!(out, "q_L = {:.12}  q_R = {:.12}  |E_L| = |E_R| = {:.12}", q.q_l, q.q_r, q.norm_el)?;
    Ok(())
}

/// The quick property suite: closed forms, bounds, kernels, the ε₁ oracle,
/// the projector inequality and the norm sandwiches.
pub fn selftest(seed: u64, out: &mut dyn std::io::Write) -> Result<bool> {
    let mut all = true;
    let mut report = |name: &str, ok: bool, detail: String, out: &mut dyn std::io::Write| -> Result<()> {
        all &= ok;
        writeln!(out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })?;
        Ok(())
    };

    let a_defect = (1..=12u32)
        .map(|n| {
            let t = transfer::AkltTransfer::new(n)?;
            let rho = transfer::fixed_point(&t.bulk)?.rho;
            Ok((transfer::a_of_n(&t.bulk, &rho, n)? - transfer::aklt_a_of_n(n)).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report("a(n) = 3^-n, n = 1..12", a_defect < 1e-12, format!("max defect {a_defect:.2e}"), out)?;

    let q_defect = (1..=6u32)
        .map(|n| Ok(mps::q_matrices(n)?.closed_form_defect))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report("Q_L closed form, n = 1..6", q_defect < 1e-12, format!("max defect {q_defect:.2e}"), out)?;

    let eps3 = mps::epsilon_bound(3)?;
    let monotone = (3..50u32)
        .map(|n| Ok(mps::epsilon_bound(n + 1)?.eps < mps::epsilon_bound(n)?.eps))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let ok = eps3.valid && eps3.eps < 0.2683 && monotone;
    report("epsilon bound", ok, format!("eps(3) = {:.6}, decreasing on 3..50: {monotone}", eps3.eps), out)?;

    let opts = EigenOptions { seed, ..EigenOptions::default() };
    for n in 1..=2 {
        let (dim, next) = ed::hub::hub_kernel_dim(n, &opts)?;
        report(&format!("dim ker h_v, n = {n}"), dim == 8, format!("{dim} (next eigenvalue {next:?})"), out)?;
    }
    let rank = mps::gamma::aklt_gamma_g_rank(2)?;
    report("Gram rank of Gamma_G, n = 2", rank == 16, format!("{rank}"), out)?;

    let e1 = ed::angles::epsilon_exact_with(1, false, &opts)?;
    report("exact epsilon_1", (e1.eps - 0.478).abs() <= 2e-3, format!("{:.6}", e1.eps), out)?;

    let fnw = ed::fnw_sweep(1000, 4, 12, seed)?;
    report("projector inequality, 1000 pairs", fnw.worst_residual >= -1e-9, format!("worst {:.2e}", fnw.worst_residual), out)?;

    for n in 2..=4 {
        for case in mps::SandwichCase::ALL {
            let r = mps::norm_sandwich_check(case, n, 100, seed)?;
            report(&format!("norm sandwich {case:?}, n = {n}"), r.worst_violation == 0.0, format!("ratios in [{:.6}, {:.6}], b = {:.6}", r.min_ratio, r.max_ratio, r.b), out)?;
        }
    }

    let torus = ed::torus_checks(1, 1, 1)?;
    let ok = torus.ground_energy.abs() < 1e-9
        && torus.comparable_lower_margin >= -1e-9
        && torus.comparable_upper_margin >= -1e-9
        && torus.square_identity_defect < 1e-9;
    report("torus (1,1), n = 1", ok, format!("E0 = {:.2e}, comparability margins {:.2e} / {:.2e}", torus.ground_energy, torus.comparable_lower_margin, torus.comparable_upper_margin), out)?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse_inclusively() {
        assert_eq!(parse_range("3").unwrap().values(), vec![3]);
        assert_eq!(parse_range("3..5").unwrap().values(), vec![3, 4, 5]);
        assert_eq!(parse_range("3..=5").unwrap().values(), vec![3, 4, 5]);
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("1..65").is_err());
        assert!(parse_range("1..64").is_ok());
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert_eq!(run(["gapcert", "certify", "--bogus"]), EXIT_ERROR);
    }
}

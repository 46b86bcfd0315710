use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dpplab::error::{Error, Result};
use dpplab::finite::{
    build_finite, empirical_count_stats, l1_deviation, l1_middle_identity, sample_many, tail_box_rule, truncation_gap,
    write_points_csv, write_stats_csv,
};
use dpplab::lab::{
    classify_hyperuniformity, functionals_on, load_report, parse_config, run_sweep, scaled_order, solve_domain,
    write_report, SweepConfig,
};

#[derive(Parser)]
#[command(name = "dpplab", version, about = "Spectral laboratory for planar determinantal point processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the concentration operator on the domain.
    Spectrum(Common),
    /// Expected count, variance, entropy and Schatten traces on the domain.
    Functionals(Common),
    /// Dilation sweep over L_grid, written as a report CSV.
    Sweep(Common),
    /// Finite ensemble diagnostics: rank, gap, L1 deviation.
    Finite(Common),
    /// Exact samples of the finite ensemble and their count statistics.
    Sample(Common),
    /// Class I / Class II classification of a report or a fresh sweep.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Report CSV to classify instead of running a sweep.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ginibre | landau:<n> | wh-hermite:<n> | wh-file:<path>
    #[arg(long)]
    kernel: Option<String>,
    /// disk:<R> | rect:<W>x<H> | poly:<path>
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated dilation factors.
    #[arg(long)]
    l_grid: Option<String>,
    /// auto | nystrom | radial
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<SweepConfig> {
        let mut text = match &self.config {
            Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?,
            None => String::new(),
        };
        text.push('\n');
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                text.push_str(&format!("{key} = {v}\n"));
            }
        };
        set("kernel", self.kernel.clone());
        set("domain", self.domain.clone());
        set("quad_order", self.quad_order.map(|v| v.to_string()));
        set("seed", self.seed.map(|v| v.to_string()));
        set("out", self.out.as_ref().map(|p| p.display().to_string()));
        set("L_grid", self.l_grid.clone());
        set("method", self.method.clone());
        set("samples", self.samples.map(|v| v.to_string()));
        parse_config(&text)
    }
}

fn output(cfg: &SweepConfig, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut buf = Vec::new();
            f(&mut buf)?;
            std::fs::write(path, buf).map_err(|e| Error::Io { path: path.clone(), source: e })
        }
        None => f(&mut std::io::stdout().lock()),
    }
}

fn write_err(e: std::io::Error) -> Error {
    Error::Report(format!("write failed: {e}"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(c) => {
            let cfg = c.load()?;
            let spectrum = solve_domain(&cfg, &cfg.domain)?;
            output(&cfg, |out| spectrum.write_csv(out).map_err(write_err))
        }
        Command::Functionals(c) => {
            let cfg = c.load()?;
            let f = functionals_on(&cfg, &cfg.domain)?;
            output(&cfg, |out| {
                let mut header = vec!["expected_count".to_string(), "variance".into(), "entropy".into()];
                let mut row = vec![f.expected_count, f.variance, f.entropy];
                for (p, v) in &f.schatten {
                    header.push(format!("schatten_{p}"));
                    row.push(*v);
                }
                header.push("S_over_V".into());
                row.push(f.ratio_entropy_variance);
                let row: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                writeln!(out, "{}\n{}", header.join(","), row.join(",")).map_err(write_err)
            })
        }
        Command::Sweep(c) => {
            let cfg = c.load()?;
            let report = run_sweep(&cfg)?;
            output(&cfg, |out| write_report(&report, out))?;
            if let Some(fits) = &report.fits {
                eprintln!(
                    "classification: {} (residual linear {:.3e}, L log L {:.3e})",
                    fits.classification.class, fits.classification.residual_linear, fits.classification.residual_log
                );
                eprintln!(
                    "area law: S/perimeter spread {:.3e} ({}), variance exponent {:.4}, entropy exponent {:.4}",
                    fits.area_law_spread,
                    if fits.area_law_holds { "holds" } else { "violated" },
                    fits.variance_exponent,
                    fits.entropy_exponent
                );
            }
            Ok(())
        }
        Command::Finite(c) => {
            let cfg = c.load()?;
            let d = &cfg.domain;
            let rule = d.quadrature(scaled_order(&cfg, d))?;
            let fe = build_finite(&cfg.kernel, d, &rule)?;
            let box_rule = tail_box_rule(&fe, cfg.box_factor)?;
            let l1 = l1_deviation(&fe, &box_rule, cfg.tail_tol)?;
            let gap = truncation_gap(&fe);
            output(&cfg, |out| {
                let rows = [
                    ("rank", fe.rank() as f64),
                    ("expected_inside", fe.expected_inside()),
                    ("gap", gap.gap),
                    ("variance", gap.variance),
                    ("entropy", gap.entropy),
                    ("variance_le_twice_gap", if gap.chain_holds { 1.0 } else { 0.0 }),
                    ("l1_deviation", l1.deviation),
                    ("l1_identity", l1_middle_identity(&fe)),
                    ("intensity_tail", l1.tail),
                ];
                writeln!(out, "quantity,value").map_err(write_err)?;
                for (k, v) in rows {
                    writeln!(out, "{k},{v:e}").map_err(write_err)?;
                }
                Ok(())
            })
        }
        Command::Sample(c) => {
            let cfg = c.load()?;
            let d = &cfg.domain;
            let rule = d.quadrature(scaled_order(&cfg, d))?;
            let fe = build_finite(&cfg.kernel, d, &rule)?;
            let samples = sample_many(&fe, cfg.seed, cfg.samples, cfg.box_factor)?;
            output(&cfg, |out| write_points_csv(&samples, out).map_err(write_err))?;
            if cfg.samples >= 2 {
                let stats = empirical_count_stats(&samples, d)?;
                match &cfg.stats_out {
                    Some(path) => {
                        let mut buf = Vec::new();
                        write_stats_csv(&stats, &mut buf).map_err(write_err)?;
                        std::fs::write(path, buf).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                    }
                    None => write_stats_csv(&stats, std::io::stderr().lock()).map_err(write_err)?,
                }
            }
            Ok(())
        }
        Command::Classify { common, report } => {
            let report = match report {
                Some(path) => load_report(path, dpplab::lab::DEFAULT_AREA_LAW_SPREAD)?,
                None => run_sweep(&common.load()?)?,
            };
            let c = classify_hyperuniformity(&report);
            let mut out = std::io::stdout().lock();
            writeln!(out, "class,residual_linear,residual_log,coef_linear,coef_log,points_used").map_err(write_err)?;
            writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{}",
                c.class, c.residual_linear, c.residual_log, c.coef_linear, c.coef_log, c.points_used
            )
            .map_err(write_err)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zeno_core::channels::catalog;
use zeno_core::harness::{
    classify, exit_code, parse_descriptor, run_experiment, run_suite, runs_root, write_classify, write_suite,
    ExperimentConfig, SuiteOptions,
};
use zeno_core::ZenoError;

#[derive(Parser)]
#[command(name = "zeno", version, about = "Quantum Zeno limits of channel/semigroup products on truncated Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run { config: PathBuf },
    /// Peripheral spectrum and admissibility of a channel.
    ///
    /// SPEC is a TOML file or `name:key=value,...`, e.g. `attenuator:t=0.3,dim=16`.
    Classify { spec: String },
    /// List the channel and generator catalog.
    Channels,
    /// Run the acceptance suite.
    Suite {
        /// Replace every Fock cutoff; cutoff-sensitive criteria are skipped.
        #[arg(long)]
        dim_override: Option<usize>,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(err: &ZenoError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(err) as u8)
}

fn run(config: PathBuf) -> Result<(), ZenoError> {
    let cfg = ExperimentConfig::load(&config)?;
    let root = runs_root(cfg.output_dir.as_deref());
    let out = run_experiment(&cfg, Some(&config), &root)?;
    let h = &out.manifest.headline;
    println!("wrote {}", out.dir.display());
    println!("samples {}  max error {:.3e}  final error {:.3e}", h.samples, h.max_error, h.final_error);
    match (h.fitted_slope, h.slope_half_width) {
        (Some(s), Some(w)) => println!("fitted slope {s:.4} ± {w:.4}"),
        _ => println!("no fit ({:?})", h.decay),
    }
    Ok(())
}

fn classify_cmd(spec: &str) -> Result<(), ZenoError> {
    let desc = parse_descriptor(spec)?;
    let doc = classify(&desc)?;
    println!("{} ({:?}, size {})", desc.channel.name(), doc.kind, doc.size);
    if let Some(r) = &doc.report {
        for p in &r.peripheral {
            println!(
                "  λ = {:+.6}{:+.6}i  mult {}  ‖N‖ = {:.3e}",
                p.value.re, p.value.im, p.multiplicity, p.nilpotent_norm
            );
        }
        println!("  gap δ = {:.6}", r.gap_delta);
    }
    if let Some(msg) = &doc.no_gap {
        println!("  no spectral gap: {msg}");
    }
    println!("  admissible: {}", doc.admissible);
    if doc.truncation_caveat {
        println!("  caveat: decided on a finite Fock truncation");
    }
    for w in &doc.warnings {
        println!("  warning: {w}");
    }
    let path = write_classify(&doc, &runs_root(None))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn channels() {
    let mut out = std::io::stdout().lock();
    for e in catalog() {
        if writeln!(out, "{:<10} {:<24} {:<22} {}", e.kind, e.name, e.parameters, e.description).is_err() {
            return;
        }
    }
}

fn suite(dim_override: Option<usize>, only: Option<Vec<u8>>, seed: u64) -> ExitCode {
    let opts = SuiteOptions { dim_override, only, seed };
    let report = run_suite(&opts);
    print!("{}", report.table());
    if let Err(e) = write_suite(&report, &runs_root(None), seed) {
        return fail(&e);
    }
    let failed: Vec<String> = report.failed().iter().map(|o| format!("{} ({})", o.id, o.title)).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {}", failed.join(", "));
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run(config),
        Command::Classify { spec } => classify_cmd(&spec),
        Command::Channels => {
            channels();
            Ok(())
        }
        Command::Suite { dim_override, only, seed } => return suite(dim_override, only, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

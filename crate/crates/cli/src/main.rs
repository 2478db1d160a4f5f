use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geneig::bench::bench_suite;
use geneig::genmat::{build_block_matrix, default_steps, scramble, BlockSpec, DEFAULT_COEFF_BOUND};
use geneig::io::{format_matrix, read_matrix_file};
use geneig::{build_annihilator_table_std, run_full, Error, Factorization, Options, PolyQ};

/// Exact generalized eigenspaces and Jordan chains of rational matrices.
#[derive(Parser)]
#[command(name = "geneig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan chains for every irreducible factor of the characteristic polynomial.
    Chains {
        matrix: PathBuf,
        /// Only this monic irreducible factor (ascending coefficients, e.g. "5,1,1").
        #[arg(long)]
        factor: Option<String>,
        /// Skip generating-set reduction during elimination.
        #[arg(long)]
        no_reduce: bool,
        /// Check every chain and the independence certificate.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the chains as JSON ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Characteristic polynomial and its factorization.
    Factors { matrix: PathBuf },
    /// Minimal annihilating polynomial of each standard basis vector.
    Minpolys { matrix: PathBuf },
    /// Scrambled block-companion matrix with a prescribed Jordan structure.
    Genmat {
        /// "<coeffs>:<l1,l2,...>[;<coeffs>:<...>]"
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Elementary similarity steps (default 4n).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_COEFF_BOUND)]
        bound: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Timing and operation counts on a generated suite.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write one JSON row per run.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Verification(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))
        }
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn chains(
    matrix: &Path,
    factor: Option<&str>,
    no_reduce: bool,
    verify: bool,
    jobs: usize,
    json: Option<&Path>,
) -> Result<(), Failure> {
    let a = read_matrix_file(matrix)?;
    let opts = Options {
        factor: factor.map(PolyQ::parse).transpose()?,
        use_proc4: !no_reduce,
        verify,
        jobs: jobs.max(1),
    };
    let report = run_full(&a, &opts)?;
    let to_stdout = json == Some(Path::new("-"));
    if !to_stdout {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "n = {}", report.n);
        let _ = writeln!(out, "χ(λ) = {}", report.factorization);
        for run in &report.factors {
            let counts: Vec<String> = run.basis.counts().iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "\nfactor {}: m = {}, ℓ̄ = {}, #B^(1..ℓ̄) = [{}]",
                run.factor,
                run.m,
                run.lbar,
                counts.join(", ")
            );
            for (i, c) in run.chains.iter().enumerate() {
                let _ = writeln!(out, "  chain {} (length {})", i + 1, c.length);
                for k in (1..=c.length).rev() {
                    let p = c.p(k);
                    let entries: Vec<String> = (0..p.dim()).map(|r| p.entry(r).to_string()).collect();
                    let _ = writeln!(out, "    p^({k}) = [{}]", entries.join(", "));
                }
            }
            if verify {
                let ok = run.verified();
                let _ = writeln!(out, "  verification: {}", if ok { "passed" } else { "FAILED" });
            }
        }
    }
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
        write_output(Some(path), &text)?;
    }
    if verify && !report.verified() {
        return Err(Failure::Verification("chain verification failed".into()));
    }
    Ok(())
}

fn factors(matrix: &Path) -> Result<(), Failure> {
    let a = read_matrix_file(matrix)?;
    let chi = geneig::char_poly(&a)?;
    let fz = geneig::factor_rationals(&chi)?;
    println!("χ(λ) = {chi}");
    for (f, m) in &fz.factors {
        println!("{}  deg {}  multiplicity {m}", f.to_coeff_string(), f.deg());
    }
    Ok(())
}

fn minpolys(matrix: &Path) -> Result<(), Failure> {
    let a = read_matrix_file(matrix)?;
    let table = build_annihilator_table_std(&a)?;
    for e in 0..a.rows() {
        let factors = table
            .factors
            .iter()
            .filter(|fe| fe.ell[e] > 0)
            .map(|fe| (fe.factor.clone(), fe.ell[e]))
            .collect();
        let fz = Factorization { unit: geneig::rat(1), factors };
        println!("e{}: {fz}", e + 1);
    }
    Ok(())
}

fn genmat(spec: &str, seed: u64, steps: Option<usize>, bound: u32, output: Option<&Path>) -> Result<(), Failure> {
    let spec: BlockSpec = spec.parse()?;
    let a = build_block_matrix(&spec)?;
    let steps = steps.unwrap_or_else(|| default_steps(a.rows()));
    write_output(output, &format_matrix(&scramble(&a, seed, steps, bound)))
}

fn bench(suite: &str, degrees: &[usize], seed: u64, json: Option<&Path>) -> Result<(), Failure> {
    let table = bench_suite(suite, degrees, seed)?;
    print!("{}", table.to_text());
    if let Some(p) = json {
        write_output(Some(p), &table.to_json_lines())?;
    }
    if table.rows.iter().any(|r| !r.verified) {
        return Err(Failure::Verification("benchmark verification failed".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Chains { matrix, factor, no_reduce, verify, jobs, json } => {
            chains(matrix, factor.as_deref(), *no_reduce, *verify, *jobs, json.as_deref())
        }
        Command::Factors { matrix } => factors(matrix),
        Command::Minpolys { matrix } => minpolys(matrix),
        Command::Genmat { spec, seed, steps, bound, output } => genmat(spec, *seed, *steps, *bound, output.as_deref()),
        Command::Bench { suite, degrees, seed, json } => bench(suite, degrees, *seed, json.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("geneig: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("geneig: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("geneig: {msg}");
            ExitCode::from(1)
        }
    }
}

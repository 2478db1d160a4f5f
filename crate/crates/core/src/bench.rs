//! Benchmark suites over generated block-companion matrices.
//!
//! `paper71`: one factor with chains `3,2,2,1,1,1`. `paper72`: four factors,
//! only the first (chain of length 5) is computed. Each degree is run with
//! and without generating-set reduction on the same matrix and table.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::annihilator::{build_annihilator_table, AnnihilatorTable};
use crate::error::{Error, Result};
use crate::genmat::{generate, paper71_spec, paper72_spec, BlockSpec};
use crate::matrix::{MatQ, VecQ};
use crate::ops::{self, OpCounts};
use crate::pipeline::{generalized_eigenspace_run, Options, StageTimes};
use crate::poly::PolyQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Paper71,
    Paper72,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper71" => Ok(Suite::Paper71),
            "paper72" => Ok(Suite::Paper72),
            _ => Err(Error::UnknownSuite(s.into())),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Paper71 => "paper71",
            Suite::Paper72 => "paper72",
        }
    }

    pub fn spec(self, d: usize, seed: u64) -> Result<BlockSpec> {
        match self {
            Suite::Paper71 => paper71_spec(d, seed),
            Suite::Paper72 => paper72_spec(d, seed),
        }
    }
}

/// A generated matrix and the factor under study.
#[derive(Clone, Debug)]
pub struct BenchCase {
    pub suite: Suite,
    pub d: usize,
    pub spec: BlockSpec,
    pub matrix: MatQ,
    pub factor: PolyQ,
    pub m: usize,
}

pub fn bench_case(suite: Suite, d: usize, seed: u64) -> Result<BenchCase> {
    if d == 0 {
        return Err(Error::Spec("degree must be positive".into()));
    }
    let spec = suite.spec(d, seed)?;
    let matrix = generate(&spec, seed)?;
    let (factor, m, _) = spec.multiplicities().swap_remove(0);
    Ok(BenchCase { suite, d, spec, matrix, factor, m })
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub suite: &'static str,
    pub d: usize,
    pub n: usize,
    pub proc4: bool,
    /// Characteristic polynomial, factorization and annihilator table,
    /// shared by both reduction settings.
    #[serde(serialize_with = "secs")]
    pub setup: Duration,
    pub times: StageTimes,
    /// Eigenspace computation without setup or verification.
    #[serde(serialize_with = "secs")]
    pub total: Duration,
    pub ops: OpCounts,
    pub max_entry_bits: u64,
    /// Basis vectors whose annihilator `f` divides.
    pub r: usize,
    /// Those among them with a nontrivial cofactor.
    pub t: usize,
    pub basis_counts: Vec<usize>,
    pub chain_lengths: Vec<usize>,
    /// Matches the generating spec and all chain checks pass.
    pub verified: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:>3} {:>4} {:>5} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>7} {:>6} {:>6} {:>3} {:>3}  {:<12} ok",
            "suite", "d", "n", "proc4", "setup", "f(A)", "gen", "elim", "reduce", "chains", "total", "matvec", "matmat", "bits", "r", "t", "counts"
        );
        for r in &self.rows {
            let t = &r.times;
            let counts: Vec<String> = r.basis_counts.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "{:<8} {:>3} {:>4} {:>5} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>7} {:>6} {:>6} {:>3} {:>3}  {:<12} {}",
                r.suite,
                r.d,
                r.n,
                if r.proc4 { "on" } else { "off" },
                r.setup.as_secs_f64(),
                t.f_of_a.as_secs_f64(),
                t.generating_set.as_secs_f64(),
                t.elimination.as_secs_f64(),
                t.reduction.as_secs_f64(),
                t.chains.as_secs_f64(),
                r.total.as_secs_f64(),
                r.ops.mat_vec,
                r.ops.mat_mat,
                r.ops.max_bits,
                r.r,
                r.t,
                counts.join(","),
                if r.verified { "yes" } else { "NO" },
            );
        }
        s
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
            .collect()
    }
}

fn r_and_t(table: &AnnihilatorTable, f: &PolyQ) -> (usize, usize) {
    let entry = table.entry(f).expect("factor present in the table");
    let r = entry.ell.iter().filter(|&&l| l > 0).count();
    let t = entry
        .ell
        .iter()
        .zip(&entry.cofactors)
        .filter(|(&l, g)| l > 0 && g.deg() > 0)
        .count();
    (r, t)
}

/// Runs one case with the given reduction settings, sharing the table.
pub fn run_case(case: &BenchCase, proc4: &[bool], verify: bool) -> Result<Vec<BenchRow>> {
    let a = &case.matrix;
    let n = a.rows();
    let t0 = Instant::now();
    let basis: Vec<VecQ> = (0..n).map(|i| VecQ::unit(n, i)).collect();
    let table = build_annihilator_table(a, &basis)?;
    let setup = t0.elapsed();
    let m = table
        .factorization
        .multiplicity(&case.factor)
        .ok_or(Error::FactorNotDividing)?;
    let (r, t) = r_and_t(&table, &case.factor);
    let expected = case.spec.chain_lengths(&case.factor).unwrap_or_default();
    proc4
        .iter()
        .map(|&use_proc4| {
            ops::reset_max_bits();
            let opts = Options { factor: Some(case.factor.clone()), use_proc4, verify, jobs: 1 };
            let run = generalized_eigenspace_run(a, &case.factor, &table, m, &opts)?;
            let chain_lengths = run.chain_lengths();
            Ok(BenchRow {
                suite: case.suite.name(),
                d: case.d,
                n,
                proc4: use_proc4,
                setup,
                times: run.times,
                total: run.times.compute_total(),
                ops: run.ops,
                max_entry_bits: a.max_bits(),
                r,
                t,
                basis_counts: run.basis.counts(),
                verified: m == case.m && chain_lengths == expected && run.verified(),
                chain_lengths,
            })
        })
        .collect()
}

/// Every degree of `name`, reduction off then on, with verification.
pub fn bench_suite(name: &str, degrees: &[usize], seed: u64) -> Result<BenchTable> {
    let suite: Suite = name.parse()?;
    let mut rows = Vec::new();
    for &d in degrees {
        let case = bench_case(suite, d, seed)?;
        rows.extend(run_case(&case, &[false, true], true)?);
    }
    Ok(BenchTable { rows })
}

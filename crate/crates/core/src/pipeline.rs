//! End-to-end driver: characteristic polynomial, factorization, annihilator
//! table, then per factor `f(A)` → generating set → elimination → chains.

use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::annihilator::{build_annihilator_table_with, AnnihilatorTable};
use crate::chains::{jordan_chains, verify_chain, ChainReport, JordanChain, PolyVec};
use crate::charpoly::char_poly;
use crate::error::{Error, Result};
use crate::factor::{factor_rationals, Factorization};
use crate::jk::{jk_eliminate_traced, JKBasis, JkTrace};
use crate::krylov::krylov_generating_set;
use crate::matrix::{mat_poly_eval, rank, MatQ, VecQ};
use crate::ops::{self, OpCounts};
use crate::poly::PolyQ;

#[derive(Clone, Debug)]
pub struct Options {
    /// Restrict the run to this monic irreducible factor.
    pub factor: Option<PolyQ>,
    /// Reduce the generating set during elimination.
    pub use_proc4: bool,
    /// Check every chain identity and the independence certificate.
    pub verify: bool,
    /// Worker threads for independent factors.
    pub jobs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { factor: None, use_proc4: true, verify: false, jobs: 1 }
    }
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Wall time per stage of one factor run.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StageTimes {
    #[serde(serialize_with = "secs")]
    pub f_of_a: Duration,
    #[serde(serialize_with = "secs")]
    pub generating_set: Duration,
    /// Elimination including generating-set reduction.
    #[serde(serialize_with = "secs")]
    pub elimination: Duration,
    #[serde(serialize_with = "secs")]
    pub reduction: Duration,
    #[serde(serialize_with = "secs")]
    pub chains: Duration,
    #[serde(serialize_with = "secs")]
    pub verification: Duration,
}

impl StageTimes {
    /// Everything except verification.
    pub fn compute_total(&self) -> Duration {
        self.f_of_a + self.generating_set + self.elimination + self.chains
    }
}

#[derive(Clone, Debug)]
pub struct FactorRun {
    pub factor: PolyQ,
    pub m: usize,
    pub lbar: usize,
    pub generating_counts: Vec<usize>,
    pub basis: JKBasis,
    pub chains: Vec<JordanChain>,
    pub trace: JkTrace,
    /// Per-chain reports, present when verification was requested.
    pub verification: Vec<ChainReport>,
    /// Full column rank of the stacked Krylov columns, when verified.
    pub independent: Option<bool>,
    pub times: StageTimes,
    pub ops: OpCounts,
}

impl FactorRun {
    pub fn chain_lengths(&self) -> Vec<usize> {
        self.chains.iter().map(|c| c.length).collect()
    }

    pub fn verified(&self) -> bool {
        self.verification.iter().all(ChainReport::passed) && self.independent != Some(false)
    }
}

/// Checks that `{A^j f(A)^i b : b ∈ B^(ℓ), i < ℓ, j < d}` has full column
/// rank `m·d`, i.e. the Krylov spaces form a direct sum spanning `ker f(A)^ℓ̄`.
pub fn certify_independence(a: &MatQ, fa: &MatQ, basis: &JKBasis, d: usize, m: usize) -> Result<bool> {
    let mut cols: Vec<VecQ> = Vec::new();
    for (l, b) in basis.iter() {
        let mut u = b.primitive().numerators().to_vec();
        for _ in 0..l {
            let mut x = u.clone();
            for j in 0..d {
                if j > 0 {
                    x = a.int_mat_vec(&x);
                }
                cols.push(VecQ::from_int_vec(x.clone()));
            }
            u = fa.int_mat_vec(&u);
        }
    }
    if cols.len() != m * d {
        return Ok(false);
    }
    if cols.is_empty() {
        return Ok(true);
    }
    Ok(rank(&MatQ::from_columns(&cols)?) == m * d)
}

/// Jordan chains for the roots of `f`: `f(A)`, generating set,
/// elimination, chains.
pub fn generalized_eigenspace(
    a: &MatQ,
    f: &PolyQ,
    table: &AnnihilatorTable,
    m: usize,
    opts: &Options,
) -> Result<Vec<JordanChain>> {
    generalized_eigenspace_run(a, f, table, m, opts).map(|r| r.chains)
}

pub fn generalized_eigenspace_run(
    a: &MatQ,
    f: &PolyQ,
    table: &AnnihilatorTable,
    m: usize,
    opts: &Options,
) -> Result<FactorRun> {
    let entry = table.entry(f).ok_or(Error::FactorNotDividing)?;
    let d = f.deg();
    let ops0 = ops::snapshot();
    let mut times = StageTimes::default();

    let t = Instant::now();
    let fa = mat_poly_eval(f, a)?;
    times.f_of_a = t.elapsed();

    let t = Instant::now();
    let genset = krylov_generating_set(a, f, table)?;
    times.generating_set = t.elapsed();

    let t = Instant::now();
    let (basis, trace) = jk_eliminate_traced(&fa, a, &genset, m, d, opts.use_proc4)?;
    times.elimination = t.elapsed();
    times.reduction = trace.proc4_time;

    let t = Instant::now();
    let chains = jordan_chains(a, &fa, f, &basis)?;
    times.chains = t.elapsed();

    let mut verification = Vec::new();
    let mut independent = None;
    if opts.verify {
        let t = Instant::now();
        verification = chains.iter().map(|c| verify_chain(a, f, c)).collect();
        independent = Some(certify_independence(a, &fa, &basis, d, m)?);
        times.verification = t.elapsed();
    }
    Ok(FactorRun {
        factor: f.clone(),
        m,
        lbar: entry.lbar,
        generating_counts: genset.counts(),
        basis,
        chains,
        trace,
        verification,
        independent,
        times,
        ops: ops::snapshot().since(ops0),
    })
}

#[derive(Clone, Debug)]
pub struct EigenstructureReport {
    pub n: usize,
    pub char_poly: PolyQ,
    pub factorization: Factorization,
    pub table: AnnihilatorTable,
    pub factors: Vec<FactorRun>,
    pub setup_time: Duration,
    pub verify_requested: bool,
}

impl EigenstructureReport {
    /// All requested checks passed (vacuously true without verification).
    pub fn verified(&self) -> bool {
        self.factors.iter().all(FactorRun::verified)
    }

    /// `Σ_f deg f · m_f`.
    pub fn total_dimension(&self) -> usize {
        self.factorization.factors.iter().map(|(f, m)| f.deg() * m).sum()
    }

    pub fn factor(&self, f: &PolyQ) -> Option<&FactorRun> {
        self.factors.iter().find(|r| &r.factor == f)
    }

    /// Chains in the exchange schema.
    pub fn to_json(&self) -> Value {
        Value::Array(self.factors.iter().map(factor_json).collect())
    }
}

fn polyvec_json(p: &PolyVec) -> Value {
    let coeffs: Vec<Vec<String>> = p
        .coeffs()
        .iter()
        .map(|c| c.entries().iter().map(ToString::to_string).collect())
        .collect();
    json!({ "lambda_coeffs": coeffs })
}

pub fn factor_json(run: &FactorRun) -> Value {
    json!({
        "factor": run.factor.coeff_strings(),
        "multiplicity": run.m,
        "lbar": run.lbar,
        "chains": run.chains.iter().map(|c| json!({
            "length": c.length,
            "vectors": c.vectors.iter().map(polyvec_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Validates a user-supplied factor against the factorization of `χ_A`.
fn select_factors(fz: &Factorization, only: Option<&PolyQ>) -> Result<Vec<(PolyQ, usize)>> {
    match only {
        None => Ok(fz.factors.clone()),
        Some(f) => {
            if !f.is_monic() {
                return Err(Error::NotMonic(f.to_string()));
            }
            match fz.multiplicity(f) {
                Some(m) => Ok(vec![(f.clone(), m)]),
                None if f.deg() >= 1 && factor_rationals(f)?.factors.len() != 1 => Err(Error::Reducible),
                None => Err(Error::FactorNotDividing),
            }
        }
    }
}

pub fn run_full(a: &MatQ, opts: &Options) -> Result<EigenstructureReport> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let t = Instant::now();
    let chi = char_poly(a)?;
    let fz = factor_rationals(&chi)?;
    let selected = select_factors(&fz, opts.factor.as_ref())?;
    let basis: Vec<VecQ> = (0..n).map(|i| VecQ::unit(n, i)).collect();
    let table = build_annihilator_table_with(a, &basis, chi.clone(), fz.clone())?;
    let setup_time = t.elapsed();

    let run_one = |(f, m): &(PolyQ, usize)| generalized_eigenspace_run(a, f, &table, *m, opts);
    let factors: Vec<FactorRun> = if opts.jobs > 1 && selected.len() > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Inconsistent(e.to_string()))?;
        pool.install(|| selected.par_iter().map(run_one).collect::<Result<_>>())?
    } else {
        selected.iter().map(run_one).collect::<Result<_>>()?
    };
    Ok(EigenstructureReport {
        n,
        char_poly: chi,
        factorization: fz,
        table,
        factors,
        setup_time,
        verify_requested: opts.verify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn similar_matrices_share_the_chain_structure(seed in 0u64..10_000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let spec = crate::genmat::random_spec(&mut rng, 3, 3, 3, 3, 20);
            let plain = crate::genmat::build_block_matrix(&spec).unwrap();
            let scrambled = crate::genmat::generate(&spec, seed).unwrap();
            let opts = Options { verify: true, ..Options::default() };
            let (r1, r2) = (run_full(&plain, &opts).unwrap(), run_full(&scrambled, &opts).unwrap());
            proptest::prop_assert!(r1.verified() && r2.verified());
            proptest::prop_assert_eq!(r1.total_dimension(), spec.order());
            for (f, m, lbar) in spec.multiplicities() {
                for r in [&r1, &r2] {
                    let run = r.factor(&f).unwrap();
                    proptest::prop_assert_eq!((run.m, run.lbar), (m, lbar));
                    proptest::prop_assert_eq!(run.chain_lengths(), spec.chain_lengths(&f).unwrap());
                }
            }
        }
    }

    #[test]
    fn identity_has_eigenvector_chains() {
        let rep = run_full(&MatQ::identity(3), &Options { verify: true, ..Options::default() }).unwrap();
        assert_eq!(rep.factors.len(), 1);
        let run = &rep.factors[0];
        assert_eq!(run.factor, PolyQ::from_ints(&[-1, 1]));
        assert_eq!((run.m, run.lbar), (3, 1));
        assert_eq!(run.chain_lengths(), vec![1, 1, 1]);
        assert!(rep.verified());
    }

    #[test]
    fn one_by_one_matrix() {
        let a = MatQ::from_ints(1, 1, &[7]);
        let f = PolyQ::from_ints(&[-7, 1]);
        let rep = run_full(&a, &Options::default()).unwrap();
        let chains = &rep.factor(&f).unwrap().chains;
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].p(1), &PolyVec::new(vec![VecQ::from_ints(&[1])]));
    }

    #[test]
    fn factor_restriction_is_validated() {
        let a = MatQ::from_ints(2, 2, &[1, 0, 0, 2]);
        let only = |f: &[i64]| Options { factor: Some(PolyQ::from_ints(f)), ..Options::default() };
        assert_eq!(run_full(&a, &only(&[-2, 1])).unwrap().factors.len(), 1);
        assert_eq!(run_full(&a, &only(&[-3, 1])).unwrap_err(), Error::FactorNotDividing);
        assert_eq!(run_full(&a, &only(&[2, -3, 1])).unwrap_err(), Error::Reducible);
        assert!(matches!(run_full(&a, &only(&[-2, 2])).unwrap_err(), Error::NotMonic(_)));
    }

    #[test]
    fn json_schema_shape() {
        let rep = run_full(&MatQ::from_ints(2, 2, &[2, 1, 0, 2]), &Options::default()).unwrap();
        let v = rep.to_json();
        let f = &v[0];
        assert_eq!(f["factor"], json!(["-2", "1"]));
        assert_eq!(f["multiplicity"], json!(2));
        assert_eq!(f["lbar"], json!(2));
        assert_eq!(f["chains"][0]["length"], json!(2));
        assert_eq!(f["chains"][0]["vectors"].as_array().unwrap().len(), 2);
        assert_eq!(f["chains"][0]["vectors"][1]["lambda_coeffs"], json!([["1", "0"]]));
    }
}

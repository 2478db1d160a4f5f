//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use geneig::bench::{bench_case, run_case, Suite};
use geneig::genmat::{generate, paper71_spec, random_rational_spec, random_spec, BlockSpec};
use geneig::{
    build_annihilator_table_std, chain_from_basis_vector, jk_eliminate, jordan_chains, krylov_generating_set,
    mat_poly_apply_vec, mat_poly_eval, psi_tower, run_full, EigenstructureReport, MatQ, Options, PolyQ, Rat, VecQ,
};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Every test matrix, with the runs made on it, for the cross-cutting checks.
#[derive(Default)]
struct Ledger {
    /// (label, Proc.4 on, Proc.4 off)
    runs: Vec<(String, EigenstructureReport, EigenstructureReport)>,
}

impl Ledger {
    fn run(&mut self, label: impl Into<String>, a: &MatQ) -> Result<&EigenstructureReport, String> {
        let label = label.into();
        let on = run_full(a, &Options { verify: true, ..Options::default() }).map_err(|e| format!("{label}: {e}"))?;
        let off = run_full(a, &Options { verify: true, use_proc4: false, ..Options::default() })
            .map_err(|e| format!("{label}: {e}"))?;
        self.runs.push((label, on, off));
        Ok(&self.runs.last().unwrap().1)
    }
}

fn criterion1(ledger: &mut Ledger) -> Check {
    let t = Instant::now();
    let f = f1();
    let p = PolyQ::from_ints;
    let tower = psi_tower(&f, 3).map_err(|e| e.to_string())?;
    ensure!(tower.level(1) == [p(&[1, 1]), p(&[1])], "ψ^(1) = {:?}", tower.level(1));
    ensure!(tower.level(2) == [p(&[-4, 1]), p(&[2, 2]), p(&[1])], "ψ^(2) = {:?}", tower.level(2));
    // Constant term −4λ−9; the variant −4λ+9 printed in the worked example is a typo.
    ensure!(tower.level(3) == [p(&[-9, -4]), p(&[-12, 3]), p(&[3, 3]), p(&[1])], "ψ^(3) = {:?}", tower.level(3));
    ensure!(tower.level(3)[0] != p(&[9, -4]), "ψ^(3) took the typo variant");

    let a = example31();
    let expect = [
        linear(1, &[-4, 3, 3, 0, 0, 0], &[-9, -12, 3, 1, 0, 0]),
        linear(1, &[5, 11, 3, 2, 0, 0], &[-20, 6, 3, 3, 1, 0]),
        linear(1, &[25, 10, 11, 2, 1, 0], &[25, 35, 21, 13, 3, 1]),
    ];
    let fa = mat_poly_eval(&f, &a).map_err(|e| e.to_string())?;
    let direct = chain_from_basis_vector(&a, &fa, &tower, &VecQ::unit(6, 0), 3).map_err(|e| e.to_string())?;
    let rep = ledger.run("Example A", &a)?;
    let chains = &rep.factor(&f).ok_or("factor missing")?.chains;
    ensure!(chains.len() == 1 && chains[0].length == 3, "chain lengths {:?}", rep.factors[0].chain_lengths());
    for (k, e) in (1..=3).rev().zip(&expect) {
        ensure!(direct.p(k) == e, "p^({k}) from e1 = {:?}", direct.p(k));
        ensure!(chains[0].p(k) == e, "pipeline p^({k}) = {:?}", chains[0].p(k));
    }
    let el = t.elapsed();
    ensure!(el < Duration::from_secs(1), "took {el:?}");
    Ok(format!("ψ^(1..3) and p^(3..1) exact, {el:.2?}"))
}

fn criterion2(ledger: &mut Ledger) -> Check {
    let t = Instant::now();
    let a = section6();
    let (f1, f2) = (f1(), f2());
    let unit = |j: usize| VecQ::unit(10, j - 1);
    let table = build_annihilator_table_std(&a).map_err(|e| e.to_string())?;
    for j in 1..=10 {
        let want = match j {
            2 | 9 => f1.clone(),
            1 | 10 => &f1 * &f2,
            3 => &f1.pow(2) * &f2,
            4 | 5 | 7 => f1.pow(3),
            _ => &f1.pow(3) * &f2,
        };
        ensure!(table.pis[j - 1] == want, "π for e{j} = {}", table.pis[j - 1]);
    }

    let g1 = krylov_generating_set(&a, &f1, &table).map_err(|e| e.to_string())?;
    let level = |l: usize| g1.level(l).iter().cloned().collect::<Vec<_>>();
    let f1_of = |k: usize, v: VecQ| {
        let mut v = v;
        for _ in 0..k {
            v = mat_poly_apply_vec(&f1, &a, &v).unwrap();
        }
        v
    };
    let v1 = |j: usize| {
        let cof = table.pis[j - 1].div_exact(&f1.pow(table.entry(&f1).unwrap().ell[j - 1])).unwrap();
        mat_poly_apply_vec(&cof, &a, &unit(j)).unwrap()
    };
    ensure!(level(3) == [4, 5, 6, 7, 8].map(v1).to_vec(), "V1^(3) = {:?}", level(3));
    ensure!(level(3)[..2] == [unit(4), unit(5)], "V1^(3) = {:?}", level(3));
    ensure!(
        level(2) == vec![VecQ::from_ints(&[11, -21, -11, -1, 12, -1, -12, 12, -12, 11])],
        "V1^(2) = {:?}",
        level(2)
    );
    ensure!(level(1) == [1, 2, 9, 10].map(v1).to_vec(), "V1^(1) = {:?}", level(1));
    ensure!(level(1)[0] == VecQ::from_ints(&[0, 0, 0, 0, 0, 0, 0, 0, -1, 0]), "v_(1,1) = {:?}", level(1)[0]);
    let g2 = krylov_generating_set(&a, &f2, &table).map_err(|e| e.to_string())?;
    let want2: Vec<VecQ> = [(1, 1), (3, 2), (6, 3), (8, 3), (10, 1)].map(|(j, k)| f1_of(k, unit(j))).to_vec();
    ensure!(g2.level(1).iter().cloned().collect::<Vec<_>>() == want2, "V2^(1) = {:?}", g2.level(1));

    let fa1 = mat_poly_eval(&f1, &a).map_err(|e| e.to_string())?;
    let b1 = jk_eliminate(&fa1, &a, &g1, 4, 2, false).map_err(|e| e.to_string())?;
    let r = VecQ::from_ints(&[0, 0, 0, 0, 0, 0, 0, 0, -1, 0]);
    ensure!(b1.level(3) == [unit(4)] && b1.level(2).is_empty(), "B1 upper levels {:?}", b1);
    ensure!(b1.level(1) == [r.clone()], "B1^(1) = {:?} (printed r = ±e9)", b1.level(1));
    let fa2 = mat_poly_eval(&f2, &a).map_err(|e| e.to_string())?;
    let b2 = jk_eliminate(&fa2, &a, &g2, 1, 2, false).map_err(|e| e.to_string())?;
    ensure!(b2.level(1) == [want2[0].clone()], "B2 = {:?}", b2.level(1));

    let c1 = jordan_chains(&a, &fa1, &f1, &b1).map_err(|e| e.to_string())?;
    let c2 = jordan_chains(&a, &fa2, &f2, &b2).map_err(|e| e.to_string())?;
    let printed = [
        (&c1[0], 3, linear(1, &[57, -60, -57, 8, 36, -3, -66, 6, -30, 3], &[205, -755, -205, -121, 150, 54, 6, 401, -307, 455])),
        (&c1[0], 2, linear(1, &[11, 32, -11, 35, -78, 35, 78, -78, 24, -43], &[-175, 225, 175, -49, -191, 46, 286, -96, 126, -50])),
        (&c1[0], 1, linear(19, &[0, 1, 0, 1, -2, 1, 2, -2, 1, -1], &[-5, 11, 5, 1, -7, 1, 7, -7, 6, -6])),
        (&c1[1], 1, linear(1, &[0, 0, 0, 0, 0, 0, 0, 0, -1, 0], &[-5, 10, 5, -5, 5, -5, -5, 5, -1, 0])),
        (&c2[0], 1, linear(1, &[1, 0, 0, 0, 0, 0, 0, 0, -1, 0], &[1, -4, 0, 0, 0, 0, 0, 0, -1, 4])),
    ];
    for (i, (c, k, want)) in printed.iter().enumerate() {
        ensure!(c.p(*k) == want, "printed chain vector {} differs: {:?}", i + 1, c.p(*k));
    }
    let el = t.elapsed();
    let rep = ledger.run("Example B", &a)?;
    let ks: Vec<(PolyQ, Vec<usize>)> = rep.factors.iter().map(|r| (r.factor.clone(), r.chain_lengths())).collect();
    ensure!(ks == vec![(f2.clone(), vec![1]), (f1.clone(), vec![3, 1])], "pipeline chains {ks:?}");
    ensure!(el < Duration::from_secs(1), "took {el:?}");
    Ok(format!("table, V^(ℓ), bases and 5 printed chain vectors exact, {el:.2?}"))
}

fn spec_matches(rep: &EigenstructureReport, spec: &BlockSpec) -> Result<(), String> {
    ensure!(rep.total_dimension() == spec.order(), "dimension {} ≠ {}", rep.total_dimension(), spec.order());
    ensure!(rep.factors.len() == spec.blocks.len(), "{} factors, spec has {}", rep.factors.len(), spec.blocks.len());
    for (f, m, _) in spec.multiplicities() {
        let run = rep.factor(&f).ok_or_else(|| format!("factor {f} missing"))?;
        ensure!(run.m == m, "{f}: m = {} ≠ {m}", run.m);
        ensure!(run.basis.weighted_size() == m, "{f}: Σℓ·#B = {} ≠ {m}", run.basis.weighted_size());
        let want = spec.chain_lengths(&f).unwrap();
        ensure!(run.chain_lengths() == want, "{f}: chains {:?} ≠ {want:?}", run.chain_lengths());
    }
    Ok(())
}

fn criterion3(ledger: &mut Ledger) -> Check {
    let mut total = Duration::ZERO;
    let mut max_n = 0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let spec = random_spec(&mut rng, 3, 4, 5, 4, 40);
        let a = generate(&spec, seed).map_err(|e| e.to_string())?;
        max_n = max_n.max(a.rows());
        let t = Instant::now();
        let rep = ledger.run(format!("oracle spec {seed} ({spec})"), &a)?;
        total += t.elapsed();
        spec_matches(rep, &spec).map_err(|e| format!("seed {seed} ({spec}): {e}"))?;
    }
    ensure!(total < Duration::from_secs(60), "50 specs took {total:?}");
    Ok(format!("50 specs up to n = {max_n}, multisets and Σℓ·#B = m exact, {total:.2?}"))
}

fn criterion4(ledger: &Ledger) -> Check {
    let mut chains = 0;
    for (label, on, off) in &ledger.runs {
        for rep in [on, off] {
            for run in &rep.factors {
                ensure!(run.verification.len() == run.chains.len(), "{label}: chains left unverified");
                for (i, r) in run.verification.iter().enumerate() {
                    ensure!(r.passed(), "{label}: {} chain {} failed {:?}", run.factor, i + 1, r);
                }
                chains += run.chains.len();
            }
        }
    }
    Ok(format!("{chains} chains on {} matrices pass every identity", ledger.runs.len()))
}

fn criterion5(ledger: &Ledger) -> Check {
    let mut runs = 0;
    for (label, on, off) in &ledger.runs {
        for rep in [on, off] {
            for run in &rep.factors {
                ensure!(run.independent == Some(true), "{label}: {} not certified", run.factor);
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} factor runs with full rank m·d"))
}

/// Rank by Gauss–Jordan over ℚ, independent of the library's elimination.
fn oracle_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        let prow: Vec<Rat> = m[rank].iter().map(|x| x / &piv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    rank
}

fn oracle_chains(a: &MatQ, alpha: &Rat) -> Vec<usize> {
    let n = a.rows();
    let shifted: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { a.get(i, j) - alpha } else { a.get(i, j) }).collect())
        .collect();
    let mul = |x: &[Vec<Rat>], y: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum()).collect()).collect()
    };
    // dims[k] = dim ker (A − αI)^k
    let mut dims = vec![0];
    let mut pw = shifted.clone();
    loop {
        let d = n - oracle_rank(pw.clone());
        if d == *dims.last().unwrap() {
            break;
        }
        dims.push(d);
        pw = mul(&pw, &shifted);
    }
    // at least k long: dims[k] − dims[k−1]
    let at_least: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        out.extend(std::iter::repeat(k).take(exactly));
    }
    out
}

fn criterion6(ledger: &mut Ledger) -> Check {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let spec = random_rational_spec(&mut rng, 3, 10);
        let a = generate(&spec, seed).map_err(|e| e.to_string())?;
        let rep = ledger.run(format!("rational spec {seed} ({spec})"), &a)?;
        let mut covered = 0;
        for (f, _) in &spec.blocks {
            let alpha = -f.coeff(0);
            let oracle = oracle_chains(&a, &alpha);
            covered += oracle.iter().sum::<usize>();
            let run = rep.factor(f).ok_or_else(|| format!("seed {seed}: factor {f} missing"))?;
            ensure!(run.chain_lengths() == oracle, "seed {seed}, α = {alpha}: {:?} vs kernel dims {oracle:?}", run.chain_lengths());
        }
        ensure!(covered == a.rows(), "seed {seed}: eigenvalues cover {covered} of {}", a.rows());
    }
    Ok("20 matrices agree with kernel dimensions of (A − αI)^k".into())
}

fn criterion7(ledger: &Ledger, extra: &[(String, Vec<usize>, Vec<usize>)]) -> Check {
    let mut n = 0;
    for (label, on, off) in &ledger.runs {
        ensure!(on.factors.len() == off.factors.len(), "{label}: factor lists differ");
        for (x, y) in on.factors.iter().zip(&off.factors) {
            ensure!(x.basis.counts() == y.basis.counts(), "{label}: {} on {:?} off {:?}", x.factor, x.basis.counts(), y.basis.counts());
            n += 1;
        }
    }
    for (label, on, off) in extra {
        ensure!(on == off, "{label}: on {on:?} off {off:?}");
        n += 1;
    }
    Ok(format!("#B^(ℓ) identical in {n} factor runs"))
}

const TIMING_DEGREES: [usize; 5] = [12, 14, 16, 18, 20];
const TIMING_ROUNDS: usize = 3;

fn criterion8(extra: &mut Vec<(String, Vec<usize>, Vec<usize>)>) -> Check {
    let spec = paper71_spec(20, 0).map_err(|e| e.to_string())?;
    let a = generate(&spec, 0).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let rep = run_full(&a, &Options { verify: true, ..Options::default() }).map_err(|e| e.to_string())?;
    let full = t.elapsed();
    ensure!(rep.verified(), "d = 20 verification failed");
    spec_matches(&rep, &spec)?;
    ensure!(full <= Duration::from_secs(900), "d = 20 took {full:?}");

    // Interleaved rounds, best time per setting, on the same matrix and table.
    let mut lines = Vec::new();
    let mut slower = Vec::new();
    for d in TIMING_DEGREES {
        let case = bench_case(Suite::Paper71, d, 0).map_err(|e| e.to_string())?;
        let (mut on, mut off) = (Duration::MAX, Duration::MAX);
        for _ in 0..TIMING_ROUNDS {
            let rows = run_case(&case, &[false, true], false).map_err(|e| e.to_string())?;
            off = off.min(rows[0].total);
            on = on.min(rows[1].total);
            extra.push((format!("paper71 d = {d}"), rows[1].basis_counts.clone(), rows[0].basis_counts.clone()));
        }
        lines.push(format!("d={d} on {:.2}s off {:.2}s", on.as_secs_f64(), off.as_secs_f64()));
        if on >= off {
            slower.push(d);
        }
    }
    let detail = format!("d = 20 end-to-end {full:.1?}; {}", lines.join(", "));
    ensure!(slower.is_empty(), "{detail}; Proc.4 not faster at d = {slower:?}");
    Ok(detail)
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut extra = Vec::new();
    let mut results: Vec<Check> = vec![criterion1(&mut ledger), criterion2(&mut ledger), criterion3(&mut ledger)];
    let r6 = criterion6(&mut ledger);
    let r8 = criterion8(&mut extra);
    results.push(criterion4(&ledger));
    results.push(criterion5(&ledger));
    results.push(r6);
    results.push(criterion7(&ledger, &extra));
    results.push(r8);
    let mut ok = true;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {}: PASS  {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {}: FAIL  {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

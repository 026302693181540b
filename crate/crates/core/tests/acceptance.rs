//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, with timings.
//! Reference values are the published worked examples, restated here
//! independently of the library's catalog.
//!
//! A criterion listed in `DOCUMENTED_DEVIATIONS` prints its honest verdict
//! but does not fail the run; any other failure exits non-zero.

mod common;

use std::time::{Duration, Instant};

use cluster_nz::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use cluster_nz::generate::{exhaustive_grid, random_fully_mutated, random_loop, random_loop_seed, random_skew_matrix};
use cluster_nz::geometry::{
    b_from_triangulation, dilog_identity_check, gluing_system, phi_inverse, positive_solution,
    solve_gluing_complex, volume, DynkinSpec, DynkinType, Triangulation,
};
use cluster_nz::io::read_triangulation;
use cluster_nz::jacobian::{k_matrix, tau, tropical_limit_exact, verify_det_formula, FDetContext, Mode};
use cluster_nz::matrix::{IntMatrix, Matrix};
use cluster_nz::network::{build_network, check_symplectic, nz_matrices};
use cluster_nz::ratfun::RatFun;
use cluster_nz::tropical::{all_sign_sequences, search_reddening, SearchOutcome, Sign};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The literal Dynkin identity evaluates `L` at the small root of the
/// gluing equations and cannot reach the central charge; see the ledger.
const DOCUMENTED_DEVIATIONS: &[u32] = &[8];

const A2_TAU: &str = "(4 + 4*y2 + 3*y1*y2)/(1 + y2 + y1*y2)";

const PERIOD_ONE_TAU: &str = "-2 * (3*y1^4*y2^2*y3 + 3*y1^4*y2*y3 + 6*y1^3*y2^2*y3 + 3*y1^4*y2 \
    + 4*y1^3*y2*y3 + 3*y1^2*y2^2*y3 + 7*y1^3*y2 + 3*y1^3*y3 + y1^2*y2*y3 - 2*y1^3 + 3*y1^2*y2 \
    - 2*y1^2*y3 - 3*y1^2 - 3*y1*y2 - 2*y2 + 1) \
    / ((y1 + 1) * (y1*y2 + y2 + 1) * (y1^3*y2*y3 + y1^2*y2*y3 + y1^2*y3 + y1^2 + 2*y1 + 1))";

const FIGURE_EIGHT_VOLUME: f64 = 2.029_883_212_81;

type Verdict = Result<String, String>;

struct Outcome {
    id: u32,
    title: &'static str,
    verdict: Verdict,
    elapsed: Duration,
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> Verdict) -> Outcome {
    let start = Instant::now();
    let verdict = f();
    Outcome { id, title, verdict, elapsed: start.elapsed() }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < budget, || format!("{what} took {elapsed:?}, budget {budget:?}"))
}

fn a2() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).unwrap()
}

fn a2_loop() -> MutationSequence {
    MutationSequence::new(a2(), &[1, 2], vec![Permutation::identity(2); 2]).unwrap()
}

fn a2_loop_prime() -> MutationSequence {
    let swap = Permutation::parse("(1 2)", 2).unwrap();
    MutationSequence::new(a2(), &[2, 1, 2], vec![Permutation::identity(2), Permutation::identity(2), swap]).unwrap()
}

fn period_one_loop() -> MutationSequence {
    let b = ExchangeMatrix::from_rows(vec![
        vec![0, -1, 2, 2, -1],
        vec![1, 0, -3, 0, 2],
        vec![-2, 3, 0, -3, 2],
        vec![-2, 0, 3, 0, -1],
        vec![1, -2, -2, 1, 0],
    ])
    .unwrap();
    let p = Permutation::parse("(5 4 3 2 1)", 5).unwrap();
    MutationSequence::new(b, &[1, 1, 1], vec![p; 3]).unwrap()
}

fn figure_eight() -> MutationSequence {
    let b = ExchangeMatrix::from_rows(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
    let sigma = vec![Permutation::identity(3), Permutation::parse("(3 2 1)", 3).unwrap()];
    MutationSequence::new(b, &[2, 1], sigma).unwrap()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let net = build_network(&a2_loop()).map_err(|e| e.to_string())?;
    let nz = net.nz_matrices().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let m = |rows: Vec<Vec<i64>>| IntMatrix::from_rows(rows).unwrap();
    ensure(net.n0 == m(vec![vec![2, 0], vec![0, 2]]), || format!("N0 = {:?}", net.n0))?;
    ensure(net.nplus.is_zero(), || format!("N+ = {:?}", net.nplus))?;
    ensure(net.nminus == m(vec![vec![0, 1], vec![1, 0]]), || format!("N- = {:?}", net.nminus))?;
    ensure(nz.aplus == m(vec![vec![2, 0], vec![0, 2]]), || format!("A+ = {:?}", nz.aplus))?;
    ensure(nz.aminus == m(vec![vec![2, -1], vec![-1, 2]]), || format!("A- = {:?}", nz.aminus))?;
    within(elapsed, Duration::from_millis(10), "network")?;
    Ok(format!("N0, N+, N-, A+, A- exact in {elapsed:?}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let expected = RatFun::parse(A2_TAU, 2).unwrap();
    let t1 = tau(&a2_loop()).map_err(|e| e.to_string())?;
    let t2 = tau(&a2_loop_prime()).map_err(|e| e.to_string())?;
    let k = k_matrix(&a2_loop()).map_err(|e| e.to_string())?;
    let det = Matrix::identity_like(2, &RatFun::one(2)).sub(&k).det();
    let elapsed = start.elapsed();
    for (name, v) in [("tau", &t1), ("tau'", &t2), ("det(I-K)", &det)] {
        ensure(v.eq_exact(&expected).unwrap(), || format!("{name} = {v}"))?;
    }
    within(elapsed, Duration::from_secs(1), "exact computation")?;
    Ok(format!("tau = tau' = det(I-K) = {A2_TAU}"))
}

fn criterion_3() -> Verdict {
    let gamma = period_one_loop();
    let start = Instant::now();
    let modular = verify_det_formula(&gamma, Mode::Modular, 8, 1).map_err(|e| e.to_string())?;
    let t_mod = start.elapsed();
    ensure(modular.equal, || "modular check disagrees".into())?;
    let bound = modular.failure_probability_bound.unwrap_or(1.0);
    ensure(modular.points_used == Some(8), || format!("points used {:?}", modular.points_used))?;
    ensure(bound < 1e-12, || format!("failure bound {bound:e}"))?;
    within(t_mod, Duration::from_secs(1), "modular check")?;

    let start = Instant::now();
    let exact = verify_det_formula(&gamma, Mode::Exact, 0, 0).map_err(|e| e.to_string())?;
    let printed = RatFun::parse(PERIOD_ONE_TAU, 5).unwrap();
    let tau_matches = tau(&gamma).map_err(|e| e.to_string())?.eq_exact(&printed).unwrap();
    let t_exact = start.elapsed();
    ensure(exact.equal, || "exact check disagrees".into())?;
    ensure(tau_matches, || "tau differs from the printed expression".into())?;
    within(t_exact, Duration::from_secs(60), "exact check")?;
    Ok(format!(
        "modular {t_mod:?} (8 points, bound {bound:.1e}); exact {t_exact:?}, tau matches printed form"
    ))
}

fn f_det_over_grid(grid: &[MutationSequence]) -> Result<usize, String> {
    let mut checks = 0;
    for gamma in grid {
        let ctx = FDetContext::new(gamma).map_err(|e| format!("{gamma:?}: {e}"))?;
        for eps in all_sign_sequences(gamma.len()) {
            let rep = ctx.check(&eps).map_err(|e| format!("{gamma:?}: {e}"))?;
            ensure(rep.equal, || format!("{gamma:?} eps {}: {rep:?}", rep.eps))?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn criterion_4(grid: &[MutationSequence]) -> Verdict {
    let start = Instant::now();
    let checks = f_det_over_grid(grid)?;
    within(start.elapsed(), Duration::from_secs(300), "grid sweep")?;
    Ok(format!("{} sequences, {checks} sign sequences, det(I-F) = det X = det A", grid.len()))
}

fn criterion_5(grid: &[MutationSequence]) -> Verdict {
    let start = Instant::now();
    for gamma in grid {
        let (equal, rep) = tropical_limit_exact(gamma).map_err(|e| e.to_string())?;
        ensure(equal, || format!("{gamma:?}: {rep:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random = 0;
    while random < 200 {
        let n = rng.gen_range(1..=6);
        let b = random_skew_matrix(&mut rng, n, 2);
        let Some(gamma) = random_fully_mutated(&mut rng, &b, 10, true, 500) else {
            continue;
        };
        let (equal, rep) = tropical_limit_exact(&gamma).map_err(|e| e.to_string())?;
        ensure(equal, || format!("{gamma:?}: {rep:?}"))?;
        random += 1;
    }
    within(start.elapsed(), Duration::from_secs(120), "tropical sweep")?;
    Ok(format!("{} grid + {random} random sequences", grid.len()))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut loops = 0;
    let mut attempts = 0;
    while loops < 500 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {loops} loops generated"))?;
        let b = random_loop_seed(&mut rng, 6);
        let Some(gamma) = random_loop(&mut rng, &b, 12) else {
            continue;
        };
        ensure(gamma.is_loop().unwrap(), || format!("{gamma:?} is not a loop"))?;
        let nz = nz_matrices(&gamma).map_err(|e| e.to_string())?;
        let prod = nz.aplus.checked_mul(&nz.aminus.transpose()).map_err(|e| e.to_string())?;
        ensure(prod.is_symmetric(), || format!("A+ A-^T not symmetric for {gamma:?}"))?;
        ensure(check_symplectic(&gamma).unwrap(), || format!("library check disagrees on {gamma:?}"))?;
        loops += 1;
    }
    Ok(format!("{loops} random loops, zero failures"))
}

fn criterion_7() -> Verdict {
    let gamma = figure_eight();
    let sys = gluing_system(&gamma).map_err(|e| e.to_string())?;
    let sol = solve_gluing_complex(&sys, &[Complex64::new(0.5, 0.8); 2], 1e-13, 200).map_err(|e| e.to_string())?;
    let omega = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    ensure(sol.residual < 1e-12, || format!("residual {:e}", sol.residual))?;
    for z in &sol.zminus {
        ensure((z - omega).norm() < 1e-12, || format!("shape {z}"))?;
    }
    let vol = volume(&sol);
    ensure((vol - FIGURE_EIGHT_VOLUME).abs() < 1e-9, || format!("volume {vol}"))?;
    let eta = phi_inverse(&sol, &gamma, 1e-10).map_err(|e| e.to_string())?;
    let expected = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-0.5, -3f64.sqrt() / 2.0),
        Complex64::new(-0.5, 3f64.sqrt() / 2.0),
    ];
    for (got, want) in eta.eta.iter().zip(&expected) {
        ensure((got - want).norm() < 1e-9, || format!("eta {got} vs {want}"))?;
    }
    Ok(format!("z = w = (1+sqrt(-3))/2, residual {:.1e}, volume {vol:.12}", sol.residual))
}

fn criterion_8() -> Verdict {
    let golden_small = (3.0 - 5f64.sqrt()) / 2.0;
    let a2 = DynkinSpec::new(DynkinType::A, 2).unwrap();
    let (_, sol) = positive_solution(&a2).map_err(|e| e.to_string())?;
    for z in &sol.zminus {
        ensure((z.re - golden_small).abs() < 1e-12 && z.im == 0.0, || format!("zeta {z}"))?;
    }
    let a1 = DynkinSpec::new(DynkinType::A, 1).unwrap();
    let r1 = dilog_identity_check(&a1, 1e-12).map_err(|e| e.to_string())?;
    ensure((r1.zeta[0] - 0.5).abs() < 1e-12, || format!("A1 zeta {}", r1.zeta[0]))?;
    ensure(r1.rhs == "1/2" && r1.holds, || format!("A1 {r1:?}"))?;
    let r2 = dilog_identity_check(&a2, 1e-10).map_err(|e| e.to_string())?;
    ensure(r2.rhs == "6/5", || format!("A2 rhs {}", r2.rhs))?;
    let summary = format!(
        "zeta = (3-sqrt5)/2 ok; A1 ok; A2 (6/pi^2) sum L(zeta) = {:.10} vs 6/5; \
         complement form sum L(1-zeta) = {:.10} (error {:.1e})",
        r2.lhs, r2.lhs_complement, r2.error_complement
    );
    if r2.holds {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_9() -> Verdict {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/torus_triangulation.json");
    let file = read_triangulation(path.as_ref()).map_err(|e| e.to_string())?;
    let b = b_from_triangulation(&Triangulation::from_file(&file).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let expected = ExchangeMatrix::from_rows(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
    ensure(b == expected, || format!("B = {b:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sequences = 0;
    while sequences < 50 {
        let Some(gamma) = random_fully_mutated(&mut rng, &b, 10, true, 1000) else {
            return Err("no fully mutated sequence generated".into());
        };
        let net = build_network(&gamma).map_err(|e| e.to_string())?;
        let nz = net.nz_matrices().map_err(|e| e.to_string())?;
        for a in [&nz.aplus, &nz.aminus] {
            for col in 0..a.cols() {
                let sum: i64 = a.column(col).iter().sum();
                ensure(sum == 0, || format!("column {col} sums to {sum} for {gamma:?}"))?;
            }
        }
        for _ in 0..20 {
            let eps: Vec<Sign> =
                (0..gamma.len()).map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect();
            let det = net.signed_nz(&eps).map_err(|e| e.to_string())?.det();
            ensure(det == 0.into(), || format!("det A_eps = {det} for {gamma:?}"))?;
        }
        sequences += 1;
    }
    match search_reddening(&b, 8, false).map_err(|e| e.to_string())? {
        SearchOutcome::Exhausted { visited, .. } => Ok(format!(
            "B reproduced; {sequences} sequences x 20 signs degenerate; no reddening to depth 8 ({visited} states)"
        )),
        SearchOutcome::Found { sequence, .. } => Err(format!("reddening sequence found: {sequence:?}")),
    }
}

fn run_cases(count: usize, seed: u64, case: impl Fn(&mut ChaCha8Rng) -> common::CaseResult) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        case(&mut rng).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok(())
}

fn criterion_10() -> Verdict {
    run_cases(500, 101, common::involution_case).map_err(|e| format!("involution {e}"))?;
    run_cases(500, 102, common::tropical_case).map_err(|e| format!("tropical {e}"))?;
    run_cases(100, 103, common::jacobian_case).map_err(|e| format!("jacobian {e}"))?;
    run_cases(100, 104, |rng| {
        let (r, theta) = common::random_reflection_point(rng);
        common::reflection_case(r, theta)
    })
    .map_err(|e| format!("reflection {e}"))?;
    Ok("involution 500, tropical 500, jacobian 100, reflection 100".into())
}

fn main() {
    println!("acceptance criteria");
    let grid_start = Instant::now();
    let grid = exhaustive_grid(3, 4, 2);
    println!("  grid: {} fully mutated sequences built in {:?}", grid.len(), grid_start.elapsed());

    let outcomes = [
        timed(1, "A2 matrices", criterion_1),
        timed(2, "tau = tau' for A2", criterion_2),
        timed(3, "determinant formula, period-one loop", criterion_3),
        timed(4, "determinant of F over the grid", || criterion_4(&grid)),
        timed(5, "tropical limit", || criterion_5(&grid)),
        timed(6, "symplectic loops", criterion_6),
        timed(7, "figure-eight knot", criterion_7),
        timed(8, "Dynkin A2 and A1 dilogarithm identity", criterion_8),
        timed(9, "once-punctured torus", criterion_9),
        timed(10, "property suites", criterion_10),
    ];

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let (tag, detail) = match &o.verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        let note = if o.verdict.is_err() && DOCUMENTED_DEVIATIONS.contains(&o.id) {
            " [documented deviation]"
        } else {
            ""
        };
        println!("[{tag}] {:>2} {} ({:.2?}): {detail}{note}", o.id, o.title, o.elapsed);
        if o.verdict.is_err() && note.is_empty() {
            unexpected.push(o.id);
        }
    }
    let passed = outcomes.iter().filter(|o| o.verdict.is_ok()).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

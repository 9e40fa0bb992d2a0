//! Exit criteria. Each criterion prints one PASS/FAIL line; the process exits
//! nonzero when any criterion fails.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kneading::affine::OrbitOptions;
use kneading::beta::{orbit_codings, phi_ab_closed, star_strings, AlphaBetaParams, StarStatus};
use kneading::entropy::{compute_bar, SolverOptions};
use kneading::graph::{build_graph, graph_entropy, two_cycle_entropy, word_count, FollowerGraph, GraphMode};
use kneading::inverse::{decide, DecisionCase, InverseOptions, Verdict};
use kneading::strings::{compare, lex, EpString, SignVector};
use kneading::{Algebraic, DoubleDouble, EntropyReportDD, Scalar};

use common::{corpus, ep, plastic, random_string, random_system};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn solve(u: &EpString, v: &EpString) -> EntropyReportDD {
    compute_bar(u, v, &SolverOptions::default()).unwrap_or_else(|e| panic!("{u} {v}: {e}"))
}

fn collapsed(u: &EpString, v: &EpString) -> FollowerGraph {
    build_graph(u, v, GraphMode::Collapse).unwrap_or_else(|e| panic!("{u} {v}: {e}"))
}

const GRAPH_TOL: f64 = 1e-9;

fn plastic_example() -> Outcome {
    let start = Instant::now();
    let r = solve(&ep("(01)"), &ep("(110)"));
    let secs = start.elapsed().as_secs_f64();
    let b = plastic();
    let db = (r.beta_bar.to_f64_lossy() - b).abs();
    let da = (r.alpha_bar.to_f64_lossy() - 1.0 / (1.0 + b)).abs();
    let detail = format!("|Δβ| = {db:.1e}, |Δα| = {da:.1e}, {secs:.3} s");
    check(db <= 1e-9 && da <= 1e-9 && secs < 5.0, detail.clone())?;
    Ok(detail)
}

/// Corpus plus the star-modified versions of its periodic pairs.
fn extended_corpus() -> Vec<(EpString, EpString)> {
    let mut out = corpus();
    for (u, v) in [("(001)", "(110)"), ("(01)", "(21)"), ("(0011)", "(1110)")] {
        let s = star_strings(&ep(u), &ep(v));
        out.push((s.u_star, s.v_star));
    }
    out
}

fn entropy_two_ways() -> Outcome {
    let start = Instant::now();
    let pairs = extended_corpus();
    let mut worst: f64 = 0.0;
    for (u, v) in &pairs {
        let r = solve(u, v);
        let g = graph_entropy(&collapsed(u, v), GRAPH_TOL);
        let d = (g - r.entropy_log2).abs();
        check(d <= 1e-6, format!("{u} {v}: graph {g:.9} vs solver {:.9}", r.entropy_log2))?;
        worst = worst.max(d);
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 30.0, format!("{secs:.1} s"))?;
    check(pairs.len() >= 10, "corpus too small")?;
    Ok(format!("{} pairs, max diff {worst:.1e}, {secs:.2} s", pairs.len()))
}

fn star_invariance() -> Outcome {
    let mut pairs = 0;
    let mut subgraphs = 0;
    for (u, v) in corpus() {
        if !(u.is_purely_periodic() && v.is_purely_periodic()) {
            continue;
        }
        let g = collapsed(&u, &v);
        let h = graph_entropy(&g, GRAPH_TOL);
        if h <= 0.0 {
            continue;
        }
        let s = star_strings(&u, &v);
        let g_star = collapsed(&s.u_star, &s.v_star);
        let h_star = graph_entropy(&g_star, GRAPH_TOL);
        check((h - h_star).abs() <= 1e-6, format!("{u} {v}: {h:.9} vs star {h_star:.9}"))?;
        pairs += 1;

        if s.u_status == StarStatus::Modified && s.v_status == StarStatus::Modified {
            // The vertex reached by the modified period of u starts the part
            // of the star graph that the original graph lacks.
            let (p, q) = (u.period_len(), v.period_len());
            let entry = g_star.walk(&s.u_star.prefix(p)).ok_or(format!("{u} {v}: walk failed"))?;
            let extra = g_star.subgraph_from(entry);
            let h_extra = graph_entropy(&extra, GRAPH_TOL);
            let h_two = two_cycle_entropy(p as u32, q as u32, GRAPH_TOL);
            check(
                (h_extra - h_two).abs() <= 1e-6,
                format!("{u} {v}: added part {h_extra:.9} vs two cycles ({p},{q}) {h_two:.9}"),
            )?;
            subgraphs += 1;
        }
    }
    check(subgraphs > 0, "no pair with both star strings modified")?;
    Ok(format!("{pairs} pairs invariant, {subgraphs} added subgraphs match two-cycle entropy"))
}

fn truncation_convergence() -> Outcome {
    let (u, v) = (ep("(01)"), ep("(110)"));
    let full = graph_entropy(&collapsed(&u, &v), GRAPH_TOL);
    let mut prev = f64::NEG_INFINITY;
    let mut values = Vec::new();
    for k in [2, 4, 8, 16, 32] {
        let h = graph_entropy(&build_graph(&u, &v, GraphMode::Truncate(k)).unwrap(), GRAPH_TOL);
        check(h >= prev - GRAPH_TOL, format!("decrease at K = {k}: {prev:.9} to {h:.9}"))?;
        prev = h;
        values.push(format!("{h:.6}"));
    }
    check((full - prev).abs() <= 1e-3, format!("K = 32 gives {prev:.9}, collapsed {full:.9}"))?;
    Ok(format!("K = 2..32: {} (collapsed {full:.6})", values.join(", ")))
}

fn round_trip() -> Outcome {
    let opts = InverseOptions::default();
    let params = [
        ("(0, 2)", Algebraic::from_int(0), Algebraic::from_int(2)),
        ("(0, golden)", Algebraic::from_int(0), Algebraic::golden()),
        ("plastic pair", Algebraic::one() / (Algebraic::one() + Algebraic::plastic()), Algebraic::plastic()),
    ];
    let mut worst: f64 = 0.0;
    for (name, a, b) in params {
        let (af, bf) = (a.to_f64_lossy(), b.to_f64_lossy());
        let p = AlphaBetaParams::new(a, b).map_err(|e| format!("{name}: {e}"))?;
        let kp = orbit_codings(&p, &OrbitOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let (u, v) = match (kp.u.string, kp.v.string) {
            (Some(u), Some(v)) => (u, v),
            _ => return Err(format!("{name}: codings not periodic")),
        };
        let d = decide::<DoubleDouble>(&u, &v, &opts).map_err(|e| format!("{name}: {e}"))?;
        check(d.verdict == Verdict::Matched, format!("{name}: {u} {v} gave {:?}", d.verdict))?;
        let err = (d.alpha_bar - af).abs().max((d.beta_bar - bf).abs());
        check(err <= 1e-9, format!("{name}: recovery error {err:.1e}"))?;
        worst = worst.max(err);
    }
    let d = decide::<DoubleDouble>(&ep("(00110111)"), &ep("(11100110)"), &opts).map_err(|e| e.to_string())?;
    check(
        d.verdict == Verdict::NotRepresentable && d.case == DecisionCase::T41Case3,
        format!("(00110111) (11100110) gave {:?} {:?}", d.verdict, d.case),
    )?;
    Ok(format!("3 parameter pairs matched (max error {worst:.1e}); (00110111),(11100110) not representable"))
}

fn total_order(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let k = rng.gen_range(2..=4);
        let delta = SignVector::new((0..k).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()).unwrap();
        let [x, y, z] = [(); 3].map(|_| random_string(rng, k));
        let (xy, yz, xz) = (compare(&x, &y, &delta), compare(&y, &z, &delta), compare(&x, &z, &delta));
        check(compare(&y, &x, &delta) == xy.reverse(), format!("antisymmetry fails for {x} {y}"))?;
        check((xy == Ordering::Equal) == (x == y), format!("equality mismatch for {x} {y}"))?;
        if xy != Ordering::Greater && yz != Ordering::Greater {
            check(xz != Ordering::Greater, format!("transitivity fails for {x} {y} {z}"))?;
        }
    }
    Ok(())
}

fn seed_monotonicity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..300 {
        let sys = random_system(rng);
        let k = sys.k() as u32;
        let w: Vec<u32> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..k)).collect();
        let (t0, t1) = {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            (a.min(b), a.max(b))
        };
        let (y0, y1) = (sys.phi_bar_n(&w, &t0), sys.phi_bar_n(&w, &t1));
        let ok = if sys.signs().of_word(&w) > 0 { y0 <= y1 + 1e-12 } else { y0 + 1e-12 >= y1 };
        check(ok, format!("phi_bar_n not monotone in the seed for word {w:?}"))?;
    }
    Ok(())
}

fn branch_order(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let sys = random_system(rng);
        let k = sys.k() as u32;
        let i = rng.gen_range(0..k - 1);
        let j = rng.gen_range(i + 1..k);
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        check(sys.phi_bar_branch(i, &a) <= sys.phi_bar_branch(j, &b), format!("branch order fails for {i} < {j}"))?;
    }
    Ok(())
}

fn lipschitz(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..500 {
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let b1: f64 = rng.gen_range(1.05..3.5);
        let b2: f64 = rng.gen_range(1.05..3.5);
        let (beta, beta2) = (b1.min(b2), b1.max(b2));
        let k = (alpha + beta).ceil() as u32;
        let x = random_string(rng, k.max(2));
        let y1 = phi_ab_closed(&alpha, &beta, &x).unwrap();
        let y2 = phi_ab_closed(&alpha, &beta2, &x).unwrap();
        let bound = (beta2 - beta) / (beta2 - 1.0);
        check((y1 - y2).abs() <= bound + 1e-12, format!("{x} α={alpha} β={beta} β′={beta2}"))?;
    }
    Ok(())
}

fn trace_monotonicity() -> Result<(), String> {
    for (u, v) in corpus() {
        let r = solve(&u, &v);
        for w in r.iterations.windows(2) {
            check(
                w[1].alpha >= w[0].alpha && w[1].beta <= w[0].beta,
                format!("{u} {v}: trace not monotone at step {}", w[1].n),
            )?;
        }
    }
    Ok(())
}

fn data_monotonicity() -> Result<usize, String> {
    let tol = SolverOptions::default().tol;
    let pairs = corpus();
    let reports: Vec<_> = pairs.iter().map(|(u, v)| solve(u, v)).collect();
    let mut tested = 0;
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            let ((u, v), (u2, v2)) = (&pairs[i], &pairs[j]);
            if i == j || reports[i].k != reports[j].k || lex(u, u2).is_gt() || lex(v2, v).is_gt() {
                continue;
            }
            let (r, r2) = (&reports[i], &reports[j]);
            check(
                r2.beta_bar.to_f64_lossy() <= r.beta_bar.to_f64_lossy() + tol
                    && r2.alpha_bar.to_f64_lossy() >= r.alpha_bar.to_f64_lossy() - tol,
                format!("({u},{v}) ⊇ ({u2},{v2}) but parameters are out of order"),
            )?;
            tested += 1;
        }
    }
    check(tested >= 20, format!("only {tested} ordered pairs"))?;
    Ok(tested)
}

fn graph_properties() -> Result<(), String> {
    for (u, v) in extended_corpus() {
        for mode in [GraphMode::Collapse, GraphMode::Truncate(6)] {
            let g = build_graph(&u, &v, mode).unwrap();
            check(g.is_right_resolving(), format!("{u} {v} {mode:?} not right-resolving"))?;
        }
    }
    let g = collapsed(&ep("(0)"), &ep("(10)"));
    let counts: Vec<BigUint> = (1..=6).map(|n| word_count(&g, n)).collect();
    let fib: Vec<BigUint> = [2u32, 3, 5, 8, 13, 21].iter().map(|&n| BigUint::from(n)).collect();
    check(counts == fib, format!("golden word counts {counts:?}"))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6e_6561);
    total_order(&mut rng)?;
    seed_monotonicity(&mut rng)?;
    branch_order(&mut rng)?;
    lipschitz(&mut rng)?;
    trace_monotonicity()?;
    let ordered = data_monotonicity()?;
    graph_properties()?;
    Ok(format!(
        "order axioms (1000), seed monotonicity (300), branch order (1000), Lipschitz (500), traces, {ordered} ordered pairs, right-resolving, golden counts"
    ))
}

fn degenerate_cases() -> Outcome {
    let r = solve(&ep("(01)"), &ep("(10)"));
    check(r.entropy_log2 == 0.0 && r.flags.k2_reversed, "(01),(10): expected h = 0 with k2_reversed")?;

    for (u, v, k) in [("(0)", "1(0)", 2), ("(0)", "2(0)", 3), ("(0)", "3(0)", 4)] {
        let r = solve(&ep(u), &ep(v));
        let want = (DoubleDouble::from_int(0), DoubleDouble::from_int(k - 1));
        check((r.alpha_bar, r.beta_bar) == want, format!("{u},{v}: got ({}, {})", r.alpha_bar, r.beta_bar))?;
    }

    let mut wrong = Vec::new();
    for (u, v, k) in [("0(1)", "(1)", 2), ("0(2)", "(2)", 3)] {
        let r = solve(&ep(u), &ep(v));
        let want = (DoubleDouble::from_int(1), DoubleDouble::from_int(k));
        if (r.alpha_bar, r.beta_bar) != want {
            wrong.push(format!("{u},{v}: got ({}, {}), expected (1, {k})", r.alpha_bar.hi(), r.beta_bar.hi()));
        }
    }
    check(wrong.is_empty(), wrong.join("; "))?;
    Ok("k2_reversed, σv = 0^∞ and σu = (k−1)^∞ cases exact".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("plastic example", plastic_example),
        ("entropy two ways", entropy_two_ways),
        ("star invariance", star_invariance),
        ("truncation convergence", truncation_convergence),
        ("inverse round trip", round_trip),
        ("property suites", property_suites),
        ("degenerate handling", degenerate_cases),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance criteria 1–8, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swqpd_core::axioms::{verify_all, verify_traciality, SuiteConfig, TestSystem};
use swqpd_core::hw::{FockRep, HwKernel};
use swqpd_core::kernel::{compute_tau, inverse_weyl, sw_kernel_at, transform_qpd, weyl_map, KernelData};
use swqpd_core::linalg::{max_abs_diff, projector, random_hermitian, trace_product};
use swqpd_core::su2::coherent_projector;
use swqpd_core::{Complex64, PhasePoint, SValue, SpinRep};

const SEED: u64 = 20_240_917;
const S_LIST: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(max_dev: f64, tol: f64, extra: &str) -> Outcome {
    Outcome {
        passed: max_dev <= tol,
        detail: format!("max_dev={max_dev:.3e} tol={tol:.0e}{extra}"),
    }
}

fn s(v: f64) -> SValue {
    SValue::new(v).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> PhasePoint {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    PhasePoint::new(z.acos(), 2.0 * PI * rng.random::<f64>())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (tj, want) in [(1u32, vec![1.0, 1.0 / 3.0]), (2, vec![1.0, 0.5, 0.1])] {
        let tau = compute_tau(&SpinRep::new(tj).unwrap()).unwrap();
        for (a, b) in tau.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    let tol_small = 1e-12;
    let small_ok = worst <= tol_small;
    let mut worst_closed: f64 = 0.0;
    for tj in 1..=12 {
        let tau = compute_tau(&SpinRep::new(tj).unwrap()).unwrap();
        for (l, t) in tau.iter().enumerate() {
            worst_closed = worst_closed.max((t - common::tau_closed_form(tj, l as u32)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut o = outcome(worst_closed, 1e-11, &format!(" (j=1/2,1 tables: {worst:.1e} vs {tol_small:.0e}; {secs:.2}s)"));
    o.passed &= small_ok && secs < 1.0;
    o
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for tj in 1..=12 {
        let kd = KernelData::new(SpinRep::new(tj).unwrap()).unwrap();
        let ops = kd.tensor_ops();
        for (i, a) in ops.iter().enumerate() {
            for (k, b) in ops.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((trace_product(a, &b.adjoint()) - want).norm());
            }
        }
    }
    outcome(worst, 1e-10, " (full Gram, j ≤ 6)")
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for tj in 1..=12 {
        let rep = SpinRep::new(tj).unwrap();
        let kd = KernelData::new(rep).unwrap();
        for _ in 0..100 {
            let p = random_point(&mut rng);
            worst = worst.max(max_abs_diff(&sw_kernel_at(&kd, SValue::Q, &p), &coherent_projector(&rep, &p)));
        }
    }
    outcome(worst, 1e-10, " (100 points per j ≤ 6)")
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_trac: f64 = 0.0;
    let mut failures = Vec::new();
    let cfg = SuiteConfig::new(S_LIST.iter().map(|v| s(*v)).collect(), 100, SEED).unwrap();
    for tj in 1..=8 {
        let sys = TestSystem::su2(SpinRep::new(tj).unwrap()).unwrap();
        for r in verify_all(&sys, &cfg).unwrap() {
            worst_ratio = worst_ratio.max(r.max_deviation / r.tolerance);
            if r.axiom == swqpd_core::axioms::Axiom::Traciality {
                worst_trac = worst_trac.max(r.max_deviation);
            }
            // every suite must also meet the blanket 1e-9
            if !r.passed || r.max_deviation > 1e-9 {
                failures.push(r.to_string());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: failures.is_empty() && worst_trac <= 1e-10 && secs < 60.0,
        detail: format!(
            "5 axioms × j ∈ {{1/2..4}} × 5 s × 100 trials; worst dev/tol={worst_ratio:.3}, traciality max_dev={worst_trac:.3e} tol=1e-10; {secs:.1}s{}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(" | ")) }
        ),
    }
}

fn criterion_5() -> Outcome {
    let rep = SpinRep::new(1).unwrap();
    let kd = KernelData::new(rep).unwrap();
    let up = projector(&rep.dicke(0.5).unwrap());
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut points: Vec<PhasePoint> = (0..200).map(|_| random_point(&mut rng)).collect();
    points.push(PhasePoint::north());
    points.push(PhasePoint::south());
    for p in &points {
        let f = trace_product(&up, &sw_kernel_at(&kd, SValue::W, p)).re;
        let closed = (1.0 + 3f64.sqrt() * p.theta.cos()) / 2.0;
        let oracle = common::dicke_qpd(1, 1, 0.0, p.theta);
        worst = worst.max((f - closed).abs()).max((f - oracle).abs());
    }
    let north = trace_product(&up, &sw_kernel_at(&kd, SValue::W, &PhasePoint::north())).re;
    let south = trace_product(&up, &sw_kernel_at(&kd, SValue::W, &PhasePoint::south())).re;
    outcome(worst, 1e-12, &format!(" (north {north:.7}, south {south:.7})"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for tj in 1..=8 {
        let rep = SpinRep::new(tj).unwrap();
        let kd = KernelData::new(rep).unwrap();
        for _ in 0..50 {
            let a = random_hermitian(&mut rng, rep.dim());
            for sv in S_LIST {
                let f = weyl_map(&kd, &a, s(sv), kd.grid()).unwrap();
                worst = worst.max(max_abs_diff(&inverse_weyl(&kd, &f).unwrap(), &a));
            }
        }
    }
    outcome(worst, 1e-10, " (50 Hermitian matrices × 5 s × j ≤ 4)")
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let mut worst_change: f64 = 0.0;
    let kernels = [40usize, 80].map(|n| HwKernel::new(FockRep::new(n).unwrap()));
    for r in [0.0, 0.3, 0.8, 1.2, 1.7, 2.0] {
        for k in 0..8 {
            let alpha = Complex64::from_polar(r, 0.4 + k as f64 * PI / 4.0);
            let u = alpha.norm_sqr();
            for (sv, closed) in [(1.0, (-u).exp()), (0.0, 2.0 * (-2.0 * u).exp())] {
                // dense truncated kernel and closed-form block, at both cutoffs
                let mut vals = Vec::new();
                for kern in &kernels {
                    let vac = projector(&kern.rep().fock(0).unwrap());
                    let dense = trace_product(&vac, &kern.cg_kernel(s(sv), alpha).unwrap()).re;
                    let block = kern.qpd_value(&vac, s(sv), alpha).unwrap().re;
                    vals.push((dense, block));
                }
                let (d40, b40) = vals[0];
                let (d80, b80) = vals[1];
                worst = worst.max((d40 - closed).abs()).max((b40 - closed).abs());
                worst_change = worst_change.max((d80 - d40).abs()).max((b80 - b40).abs());
            }
        }
    }
    let sys = TestSystem::hw(40).unwrap();
    let cfg = SuiteConfig::new([-0.5, 0.0, 0.5].map(s).to_vec(), 100, SEED).unwrap();
    let trac = verify_traciality(&sys, &cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: worst <= tol && worst_change < tol / 2.0 && trac.passed && trac.tolerance <= 1e-6,
        detail: format!(
            "vacuum Q/W max_dev={worst:.3e} tol={tol:.0e}; n_max 40→80 change={worst_change:.3e} (< {:.0e}); traciality max_dev={:.3e} tol={:.0e}; {secs:.1}s",
            tol / 2.0,
            trac.max_deviation,
            trac.tolerance
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for tj in [1u32, 2, 5] {
        let rep = SpinRep::new(tj).unwrap();
        let kd = KernelData::new(rep).unwrap();
        let up = projector(&rep.dicke(rep.j()).unwrap());
        let w = weyl_map(&kd, &up, SValue::W, kd.grid()).unwrap();
        let q_via = transform_qpd(&kd, &w, SValue::Q).unwrap();
        let q_direct = weyl_map(&kd, &up, SValue::Q, kd.grid()).unwrap();
        for ((node, a), b) in q_via.nodes.iter().zip(&q_via.values).zip(&q_direct.values) {
            let closed = (node[0] / 2.0).cos().powi(2 * tj as i32);
            worst = worst.max((a - b).norm()).max((a.re - closed).abs());
        }
    }
    outcome(worst, 1e-10, " (W→Q of |j,j⟩ vs cos^{4j}(θ/2) and direct Q, j ∈ {1/2, 1, 5/2})")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("tau tables", criterion_1),
        ("tensor-operator orthonormality", criterion_2),
        ("kernel boundary condition", criterion_3),
        ("SW axiom suite", criterion_4),
        ("spin-1/2 Wigner closed form", criterion_5),
        ("round-trip reconstruction", criterion_6),
        ("Heisenberg-Weyl cross-check", criterion_7),
        ("convention coherence", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.passed;
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}

//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) so the report is always printed.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qbrach::cli::main_with_args;
use qbrach_core::fast::{
    commutation_closure_check, project_subspace, random_in_subspace, three_qubit_evolution, QubitSubspaceBasis,
};
use qbrach_core::gates::{
    enumerate_candidates, integer_search, solve_entangler, solve_qft_prime, solve_swap, target_entangler,
    target_qft_prime, target_swap, GateTarget, HamiltonianDesc, SynthesisResult,
};
use qbrach_core::heisenberg::{closed_form_unitary, hamiltonian_at, ModelParameters};
use qbrach_core::ops::{gate_fidelity, matrix_exp};
use qbrach_core::{Complex64, ComplexMatrix, HermitianOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn real_rows(rows: [[f64; 4]; 4], scale: f64) -> ComplexMatrix {
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    ComplexMatrix::from_real_rows(&refs).unwrap().scale_real(scale)
}

/// Plain RK4 for `i dU/dt = H(t) U` from `U(0) = 1`, reporting `U` after every step.
fn rk4(
    dim: usize,
    h_at: impl Fn(f64) -> ComplexMatrix,
    t_end: f64,
    steps: usize,
    mut seen: impl FnMut(f64, &ComplexMatrix),
) {
    let mi = Complex64::new(0.0, -1.0);
    let dt = t_end / steps as f64;
    let mut u = ComplexMatrix::identity(dim);
    let f = |t: f64, u: &ComplexMatrix| h_at(t).matmul(u).scale(mi);
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = f(t, &u);
        let k2 = f(t + dt / 2.0, &u.add_scaled(&k1, Complex64::new(dt / 2.0, 0.0)));
        let k3 = f(t + dt / 2.0, &u.add_scaled(&k2, Complex64::new(dt / 2.0, 0.0)));
        let k4 = f(t + dt, &u.add_scaled(&k3, Complex64::new(dt, 0.0)));
        let incr = k1
            .add_scaled(&k2, Complex64::new(2.0, 0.0))
            .add_scaled(&k3, Complex64::new(2.0, 0.0))
            .add_scaled(&k4, Complex64::new(1.0, 0.0));
        u = u.add_scaled(&incr, Complex64::new(dt / 6.0, 0.0));
        seen(t + dt, &u);
    }
}

fn constant_h(r: &SynthesisResult) -> Option<&HermitianOperator> {
    match &r.hamiltonian {
        HamiltonianDesc::Constant(h) => Some(h),
        _ => None,
    }
}

fn constant_gate(
    r: &SynthesisResult,
    want_t: f64,
    printed: &ComplexMatrix,
    target: &GateTarget,
    want_chi: f64,
) -> (bool, String) {
    let dt = (r.duration - want_t).abs();
    let Some(h) = constant_h(r) else { return (false, "H not constant".into()) };
    let dh = h.matrix().max_abs_diff(printed);
    let u = h.evolution(r.duration).unwrap();
    let fid = gate_fidelity(&target.matrix, &u).unwrap();
    let dchi = (r.chi - want_chi).abs();
    let pass = dt <= 1e-12 && dh <= 1e-12 && fid >= 1.0 - 1e-10 && dchi <= 1e-10;
    (
        pass,
        format!(
            "|ΔT|={dt:.1e} (≤1e-12) |ΔH|={dh:.1e} (≤1e-12) 1-F={:.1e} (≤1e-10) |Δχ|={dchi:.1e} (≤1e-10)",
            1.0 - fid
        ),
    )
}

fn c1() -> Outcome {
    let r = solve_swap(1.0).unwrap();
    let printed = real_rows(
        [[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 2.0, 0.0], [0.0, 2.0, -1.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
        1.0 / 3f64.sqrt(),
    );
    let (pass, detail) = constant_gate(&r, 3f64.sqrt() * PI / 4.0, &printed, &target_swap(), -PI / 4.0);
    outcome(pass, format!("T={:.12} {detail}", r.duration))
}

fn c2() -> Outcome {
    let r = solve_qft_prime(1.0).unwrap();
    let printed = real_rows(
        [[3.0, 0.0, 0.0, 0.0], [0.0, -1.0, 4.0, 0.0], [0.0, 4.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0]],
        1.0 / 11f64.sqrt(),
    );
    let (pass, detail) = constant_gate(&r, 11f64.sqrt() * PI / 8.0, &printed, &target_qft_prime(), -3.0 * PI / 8.0);
    outcome(pass, format!("T={:.12} (√11π/8) {detail}", r.duration))
}

const C3_PHIS: [f64; 5] = [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0, PI];

fn c3() -> Outcome {
    let mut pass = true;
    let (mut worst_t, mut worst_inf) = (0.0f64, 0.0f64);
    for phi in C3_PHIS {
        let r = solve_entangler(1.0, phi).unwrap();
        let x = phi / PI;
        let dt = (r.duration - PI * (x * (1.0 - x / 2.0)).sqrt()).abs();
        worst_t = worst_t.max(dt);
        worst_inf = worst_inf.max(r.verification.infidelity);
        pass &= dt <= 1e-12 && r.verification.infidelity <= 1e-6;
    }
    outcome(
        pass,
        format!("φ∈{{π/8,π/4,3π/8,π/2,π}} max|ΔT|={worst_t:.1e} (≤1e-12) max 1-F={worst_inf:.1e} (≤1e-6, dt=T/1e4)"),
    )
}

fn verification_runs() -> Vec<(String, SynthesisResult)> {
    let mut runs =
        vec![("swap".to_string(), solve_swap(1.0).unwrap()), ("qft-prime".to_string(), solve_qft_prime(1.0).unwrap())];
    for phi in C3_PHIS {
        runs.push((format!("entangler φ={phi:.4}"), solve_entangler(1.0, phi).unwrap()));
    }
    runs
}

fn c4() -> Outcome {
    let (mut drift, mut unit, mut norm, mut lin) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (_, r) in verification_runs() {
        let v = &r.verification;
        drift = drift.max(v.trf2_drift);
        unit = unit.max(v.unitarity_error);
        norm = norm.max(v.norm_residual);
        lin = lin.max(v.linear_residual);
    }
    let pass = drift < 1e-8 && unit < 1e-8 && norm < 1e-6 && lin < 1e-8;
    outcome(
        pass,
        format!("7 trajectories: TrF² drift={drift:.1e} (<1e-8) unitarity={unit:.1e} (<1e-8) |TrH²-4ω²|={norm:.1e} (<1e-6) linear={lin:.1e} (<1e-8)"),
    )
}

fn c5() -> Outcome {
    let swap = solve_swap(1.0).unwrap().verification.geodesic_residual;
    let qft = solve_qft_prime(1.0).unwrap().verification.geodesic_residual;
    let ent = solve_entangler(1.0, PI / 2.0).unwrap().verification.geodesic_residual;
    let pass = swap < 1e-6 && qft < 1e-6 && ent > 1e-2;
    outcome(pass, format!("swap={swap:.1e} qft'={qft:.1e} (<1e-6) entangler(π/2)={ent:.2e} (>1e-2)"))
}

/// Selected tuple, its ωT, and the smallest feasible ωT among all candidates.
fn search_summary(target: &GateTarget) -> (SynthesisResult, f64, Duration) {
    let t0 = Instant::now();
    let r = integer_search(target, 1.0, 4).unwrap();
    let min_feasible = enumerate_candidates(target, 1.0, 4)
        .unwrap()
        .iter()
        .filter(|c| c.feasible())
        .map(|c| c.duration)
        .fold(f64::INFINITY, f64::min);
    (r, min_feasible, t0.elapsed())
}

fn c6() -> (Outcome, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut check = |label: &str, target: GateTarget, family: &dyn Fn(&SynthesisResult) -> bool| {
        let (r, min_feasible, took) = search_summary(&target);
        let ok =
            family(&r) && r.duration <= min_feasible + 1e-12 && took < Duration::from_secs(30) && r.verification.passed;
        pass &= ok;
        parts.push(format!("{label}:{} ωT={:.6}{}", r.tuple, r.omega_t(), if ok { "" } else { " ✗" }));
    };
    check("swap", target_swap(), &|r| r.tuple.p == 0);
    check("qft'", target_qft_prime(), &|r| r.tuple.p == 0 && r.tuple.r == 0);
    for k in 1..=4 {
        let phi = k as f64 * PI / 8.0;
        check(&format!("ent({k}π/8)"), target_entangler(phi).unwrap(), &|r| r.tuple.m == r.tuple.n);
    }
    // Informational: above 3π/4 the search prefers an |m − n| = 1 branch.
    let (r, _, _) = search_summary(&target_entangler(PI).unwrap());
    let m_eq_n = solve_entangler(1.0, PI).unwrap();
    let info = format!(
        "criterion 6 note: entangler φ=π selects {} with ωT={:.9} (π/2) vs m=n branch ωT={:.9} (π/√2); reported, not asserted",
        r.tuple,
        r.omega_t(),
        m_eq_n.omega_t()
    );
    (outcome(pass, parts.join("; ")), info)
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let omega = rng.gen_range(0.5..2.0);
        // Uniform direction on B₀₊² + B₀₋² + 2J_z² = 2ω².
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let s = (2.0f64).sqrt() * omega / (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let p = ModelParameters {
            b0_plus: v[0] * s,
            b0_minus: v[1] * s,
            jz: v[2] * s / 2f64.sqrt(),
            psi_plus: rng.gen_range(0.0..2.0 * PI),
            psi_minus: rng.gen_range(0.0..2.0 * PI),
            gamma_plus: rng.gen_range(-2.0..2.0) * omega,
            gamma_minus: rng.gen_range(-2.0..2.0) * omega,
            omega,
        };
        assert!(p.energy_residual() < 1e-12);
        let t_end = 3.0 / omega;
        let steps = 6000;
        let mut k = 0;
        rk4(
            4,
            |t| hamiltonian_at(&p, t).into_matrix(),
            t_end,
            steps,
            |t, u| {
                k += 1;
                if k % 100 == 0 {
                    worst = worst.max(closed_form_unitary(&p, t).matrix().max_abs_diff(u));
                }
            },
        );
    }
    outcome(worst < 1e-6, format!("20 random parameter sets, t∈[0,3/ω]: max|ΔU|={worst:.1e} (<1e-6)"))
}

fn c8() -> Outcome {
    // Closure for every (j, k) on n = 2, 3, 4.
    let mut closure_ok = true;
    let mut worst_outside = 0.0f64;
    for n in 2..=4 {
        for j in 1..=n {
            for k in j..=n {
                let r = commutation_closure_check(n, j, k).unwrap();
                closure_ok &= r.passed();
                worst_outside = worst_outside.max(r.max_outside);
            }
        }
    }

    // Three-qubit product formula vs brute-force RK4 of i dU/dt = H̃(t) U.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g2 = QubitSubspaceBasis::new(3, 2).unwrap();
    let g3 = QubitSubspaceBasis::new(3, 3).unwrap();
    let mut worst_ode = 0.0f64;
    for _ in 0..20 {
        let h0 = random_in_subspace(&g2, || rng.gen_range(-0.2..0.2));
        let fp = random_in_subspace(&g3, || rng.gen_range(-0.3..0.3));
        let t_end = rng.gen_range(1.0..5.0);
        let rot = |t: f64| {
            let r = matrix_exp(&fp.matrix().scale(Complex64::new(0.0, t)));
            h0.matrix().conjugate_by(&r)
        };
        let mut last = ComplexMatrix::identity(8);
        rk4(8, rot, t_end, 4000, |_, u| last = u.clone());
        let closed = three_qubit_evolution(&h0, &fp, t_end).unwrap();
        worst_ode = worst_ode.max(closed.matrix().max_abs_diff(&last));
    }

    // Σ_j P^(j) A = A on random 8×8 Hermitian matrices.
    let mut worst_sum = 0.0f64;
    for _ in 0..20 {
        let mut data = vec![Complex64::new(0.0, 0.0); 64];
        for r in 0..8 {
            for c in r..8 {
                let im = if r == c { 0.0 } else { rng.gen_range(-1.0..1.0) };
                let z = Complex64::new(rng.gen_range(-1.0..1.0), im);
                data[r * 8 + c] = z;
                data[c * 8 + r] = z.conj();
            }
        }
        let a = HermitianOperator::new(ComplexMatrix::new(8, data).unwrap()).unwrap();
        let mut sum = ComplexMatrix::zeros(8);
        for j in 0..=3 {
            sum = sum.add_scaled(
                project_subspace(&a, &QubitSubspaceBasis::new(3, j).unwrap()).unwrap().matrix(),
                Complex64::new(1.0, 0.0),
            );
        }
        worst_sum = worst_sum.max(sum.max_abs_diff(a.matrix()));
    }

    let pass = closure_ok && worst_ode < 1e-8 && worst_sum < 1e-12;
    outcome(
        pass,
        format!("closure n=2..4 {} (max outside {worst_outside:.1e}); 3-qubit vs ODE max|ΔU|={worst_ode:.1e} (<1e-8); |ΣP^(j)A−A|={worst_sum:.1e} (<1e-12)", if closure_ok { "ok" } else { "violated" }),
    )
}

fn c9() -> Outcome {
    let mut pass = true;
    let (mut worst_norm, mut worst_inf, mut min_geo) = (0.0f64, 0.0f64, f64::INFINITY);
    for k in 1..=4 {
        let phi = k as f64 * PI / 8.0;
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code =
            main_with_args(["qbrach", "trace", "--gate", "entangler", "--phi", &format!("{phi}")], &mut out, &mut err);
        if code != 0 {
            return outcome(false, format!("trace exited {code}: {}", String::from_utf8_lossy(&err)));
        }
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<Vec<f64>> =
            text.lines().skip(1).map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
        for r in &rows {
            let plus: f64 = r[1..5].iter().map(|v| v * v).sum();
            let minus: f64 = r[5..9].iter().map(|v| v * v).sum();
            worst_norm = worst_norm.max((plus - 1.0).abs()).max((minus - 1.0).abs());
        }
        let r = integer_search(&target_entangler(phi).unwrap(), 1.0, 4).unwrap();
        let t_end = rows.last().unwrap()[0];
        pass &= (t_end - r.duration).abs() < 1e-12;
        let u = closed_form_unitary(&r.params, t_end);
        worst_inf = worst_inf.max(1.0 - gate_fidelity(&r.target.matrix, &u).unwrap());
        min_geo = min_geo.min(r.verification.geodesic_residual);
    }
    pass &= worst_norm <= 1e-12 && worst_inf <= 1e-6 && min_geo > 1e-2;
    outcome(pass, format!("φ=kπ/8, k=1..4: max|‖α±‖²−1|={worst_norm:.1e} (≤1e-12) endpoint 1-F={worst_inf:.1e} (≤1e-6) min geodesic residual={min_geo:.2e} (>1e-2)"))
}

fn main() {
    let mut failed = 0;
    let mut notes = Vec::new();
    let mut report = |n: usize, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let t0 = Instant::now();
        let o = f();
        let took = t0.elapsed();
        let in_budget = budget.is_none_or(|b| took < b);
        let pass = o.pass && in_budget;
        if !pass {
            failed += 1;
        }
        let budget = budget.map_or(String::new(), |b| format!(", budget {:.0?}", b));
        println!("criterion {n}: {} — {} [{:.2?}{budget}]", if pass { "PASS" } else { "FAIL" }, o.detail, took);
    };
    report(1, Some(Duration::from_secs(1)), &mut c1);
    report(2, Some(Duration::from_secs(1)), &mut c2);
    report(3, Some(Duration::from_secs(10)), &mut c3);
    report(4, None, &mut c4);
    report(5, None, &mut c5);
    report(6, None, &mut || {
        let (o, info) = c6();
        notes.push(info);
        o
    });
    report(7, None, &mut c7);
    report(8, None, &mut c8);
    report(9, None, &mut c9);
    for n in notes {
        println!("{n}");
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}

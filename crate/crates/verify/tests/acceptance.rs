//! Acceptance criteria 1-10. Each test prints one line
//! `criterion N [name]: PASS|FAIL - detail` and then asserts the verdict.
//! Run with `cargo test -p slr-verify --test acceptance -- --test-threads=1`
//! for the lines in order.

use std::io::Write;
use std::time::{Duration, Instant};

use slr_core::norms::l1;
use slr_core::svd::spectral_norm;
use slr_core::*;

fn verdict(n: usize, name: &str, pass: bool, detail: String) {
    let line = format!("criterion {n:>2} [{name}]: {} - {detail}\n", if pass { "PASS" } else { "FAIL" });
    // Written to the process stdout directly so the test harness does not capture it.
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "{}", line.trim_end());
}

fn le(lhs: f64, rhs: f64, slack: f64) -> bool {
    lhs <= rhs + slack * (1.0 + rhs.abs())
}

fn uniform_instance(
    m: usize,
    n: usize,
    rank: usize,
    ktilde: usize,
    sigma: f64,
    seed: u64,
) -> GeneratedInstance<f64> {
    gen_instance(&InstanceSpec {
        m,
        n,
        rank,
        ktilde,
        magnitude: MagnitudeLaw::Fixed { amplitude: 10.0 },
        sigma,
        seed: Seed(seed),
    })
    .unwrap()
}

fn constrained_lambda(p: &IncoherenceProfile<f64>) -> f64 {
    (5.0 / 3.0 * p.gamma / p.alpha).sqrt()
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

const SEEDS: u64 = 50;

fn exact_recovery_instances() -> Vec<(GeneratedInstance<f64>, f64, bool)> {
    (0..SEEDS)
        .map(|seed| {
            let inst = uniform_instance(60, 60, 2, 180, 0.0, seed);
            let lambda = constrained_lambda(&inst.profile);
            let ok = check_conditions(&inst.profile, Formulation::Constrained, 2.0, lambda, None, 0.0, 0.0)
                .unwrap()
                .all_passed();
            (inst, lambda, ok)
        })
        .collect()
}

fn recovers(inst: &GeneratedInstance<f64>, lambda: f64) -> (bool, Duration) {
    let start = Instant::now();
    let mut r = solve_constrained(&inst.y, &ConstrainedConfig::new(lambda, 0.0, 0.0)).unwrap();
    let elapsed = start.elapsed();
    r.attach_target(&inst.target).unwrap();
    let e = r.recovery.unwrap();
    let ok = r.converged && e.sparse_relative <= 1e-6 && e.low_rank_relative <= 1e-6;
    (ok && elapsed <= Duration::from_secs(60), elapsed)
}

#[test]
fn criterion_01_exact_recovery() {
    let cases = exact_recovery_instances();
    let products: Vec<f64> = cases.iter().map(|c| c.0.profile.product).collect();
    let (lo, hi) = min_max(&products);
    let mut eligible_ok = 0;
    let mut excluded = Vec::new();
    let mut excluded_ok = 0;
    let mut slowest = Duration::ZERO;
    for (seed, (inst, lambda, ok)) in cases.iter().enumerate() {
        let (recovered, t) = recovers(inst, *lambda);
        slowest = slowest.max(t);
        if *ok {
            eligible_ok += usize::from(recovered);
        } else {
            excluded.push(seed);
            excluded_ok += usize::from(recovered);
        }
    }
    let eligible = cases.len() - excluded.len();
    verdict(
        1,
        "exact recovery",
        eligible_ok >= 45,
        format!(
            "{eligible_ok} of {SEEDS} seeds recovered under the condition precheck (45 needed); \
             {} seeds excluded by the precheck, alpha*beta in [{lo:.3}, {hi:.3}]; \
             {eligible} eligible; excluded seeds recovered anyway: {excluded_ok}/{}; slowest solve {:.2}s",
            excluded.len(),
            excluded.len(),
            slowest.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_constrained_robustness_bound() {
    let mut checked = 0;
    let mut violations = 0;
    let mut undefined = 0;
    for (seed, (inst, lambda, ok)) in exact_recovery_instances().into_iter().enumerate() {
        let e = gaussian_matrix::<f64>(60, 60, Seed(1000 + seed as u64)).scale(1e-3);
        let (eps_v1, eps_star) = (l1(&e), trace_norm(&e).unwrap());
        let bound = match constrained_error_bound(&inst.profile, 2.0, lambda, eps_v1, eps_star) {
            Ok(b) if ok => b,
            _ => {
                undefined += 1;
                continue;
            }
        };
        let y = &inst.y + &e;
        let mut cfg = ConstrainedConfig::new(lambda, eps_v1, eps_star);
        cfg.adaptive_penalty = true;
        let mut r = solve_constrained(&y, &cfg).unwrap();
        if !r.converged {
            continue;
        }
        r.attach_target(&inst.target).unwrap();
        checked += 1;
        if r.recovery.unwrap().max_v1() > bound * (1.0 + 1e-6) {
            violations += 1;
        }
    }
    verdict(
        2,
        "constrained robustness bound",
        checked > 0 && violations == 0,
        format!(
            "{checked} converged runs compared, {violations} above the bound; bound undefined on {undefined} of {SEEDS} \
             instances (recovery conditions fail, alpha*beta >= 1)"
        ),
    );
}

#[test]
fn criterion_03_regularized_bounds_with_box() {
    let (m, n, rank) = (80, 80, 2);
    let ktilde = (0.02 * (m * n) as f64) as usize;
    let mut betas = Vec::new();
    let mut products = Vec::new();
    let mut no_parameters = 0;
    let mut checked = 0;
    let mut violations = 0;
    for seed in 0..20u64 {
        let inst = uniform_instance(m, n, rank, ktilde, 1e-3, seed);
        let p = &inst.profile;
        betas.push(p.beta);
        products.push(p.product);
        let lv = inst.levels;
        let Ok(params) = simplified_parameters(p, Formulation::Regularized, lv.eps_2to2, lv.eps_vinf) else {
            no_parameters += 1;
            continue;
        };
        let mu = params.mu.unwrap();
        let mut cfg = RegularizedConfig::new(params.lambda, mu);
        cfg.b = inst.target.low_rank.max_abs();
        let mut r = solve_regularized(&inst.y, &cfg).unwrap();
        if !r.converged {
            continue;
        }
        r.attach_target(&inst.target).unwrap();
        let err = r.recovery.unwrap();
        let b = regularized_error_bounds(p, 2.0, params.lambda, mu, cfg.b, &lv).unwrap();
        checked += 1;
        let slack = 1.0 + 1e-6;
        if err.sparse_v1 > b.sparse_v1 * slack
            || err.sparse_v2 > b.sparse_v2 * slack
            || err.low_rank_star > b.low_rank_star * slack
        {
            violations += 1;
        }
    }
    let floor = 3.0 * rank as f64 / ((m * n) as f64).sqrt();
    verdict(
        3,
        "regularized bounds with box",
        checked > 0 && violations == 0,
        format!(
            "{checked} converged runs compared, {violations} above a bound; parameter rule inapplicable on \
             {no_parameters} of 20 seeds: it needs alpha*beta <= 3/41 = {:.4}, but beta >= 3r/sqrt(mn) = {floor:.4} \
             for any rank-{rank} {m}x{n} target (min beta {:.4}, min alpha*beta {:.3})",
            3.0 / 41.0,
            min_max(&betas).0,
            min_max(&products).0
        ),
    );
}

#[test]
fn criterion_04_dual_certificate() {
    let mut valid = 0;
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut seed = 0u64;
    while valid < 50 && seed < 200 {
        let k = 1 + (seed as usize * 7) % 30;
        let law = if seed.is_multiple_of(3) {
            MagnitudeLaw::Uniform { amplitude: 1.0 + seed as f64 }
        } else {
            MagnitudeLaw::Fixed { amplitude: 0.5 + (seed % 7) as f64 }
        };
        let target = gen_incoherent_target::<f64>(30, 30, 1, k, law, Seed(seed)).unwrap();
        let e = if seed.is_multiple_of(2) {
            Matrix64::zeros(30, 30)
        } else {
            gaussian_matrix::<f64>(30, 30, Seed(500 + seed)).scale(1e-4)
        };
        seed += 1;
        let p = profile(&target, None).unwrap();
        let lv = perturbation_levels(&target, &e).unwrap();
        let window =
            check_conditions(&p, Formulation::Regularized, 2.0, 1.0, Some(1.0), lv.eps_2to2, lv.eps_vinf)
                .unwrap()
                .lambda_window;
        if !(window.0 > 0.0 && window.0 < window.1 && window.1.is_finite()) {
            continue;
        }
        valid += 1;
        let lambda = (window.0 * window.1).sqrt();
        let start = Instant::now();
        let cert = build_certificate(&target, &e, lambda, 1.0, 2.0, 1e-12).unwrap();
        let t = start.elapsed();
        slowest = slowest.max(t);
        let feasible = cert.feasibility_residuals.0 <= 1e-8 && cert.feasibility_residuals.1 <= 1e-8;
        if !(feasible
            && cert.complement_caps_hold(1e-8)
            && cert.all_bounds_satisfied()
            && t < Duration::from_secs(1))
        {
            failures.push(seed - 1);
        }
    }
    verdict(
        4,
        "dual certificate",
        valid == 50 && failures.is_empty(),
        format!(
            "{valid} valid 30x30 instances, failing seeds {failures:?}; slowest certificate {:.3}s",
            slowest.as_secs_f64()
        ),
    );
}

struct Probe<'a> {
    target: &'a TargetPair<f64>,
    profile: IncoherenceProfile<f64>,
}

impl Probe<'_> {
    fn p_omega(&self, m: &Matrix64) -> Matrix64 {
        project_support(&self.target.support, m).unwrap()
    }

    fn p_t(&self, m: &Matrix64) -> Matrix64 {
        project_tangent(&self.target.space, m).unwrap()
    }

    /// Sampled norm inequalities as (lhs, rhs, label).
    fn inequalities(&self, m: &Matrix64, with_flat: bool) -> Vec<(f64, f64, &'static str)> {
        let p = &self.profile;
        let rho = p.rho;
        let sign = sign_matrix(&self.target.sparse);
        let minf = m.max_abs();
        let pom = self.p_omega(m);
        let ptm = self.p_t(m);
        let one = |x: &Matrix64| induced_norm(x, InducedMode::OneToOne).unwrap();
        let inf = |x: &Matrix64| induced_norm(x, InducedMode::InfToInf).unwrap();
        let sharp = |x: &Matrix64| sharp_norm(x, rho).unwrap();
        let mut out = vec![
            (one(&pom), one(&sign) * minf, "support 1->1"),
            (inf(&pom), inf(&sign) * minf, "support inf->inf"),
            (sharp(&pom), p.alpha * minf, "support sharp"),
            (
                ptm.max_abs(),
                p.u * one(m) + p.v * inf(m) + p.w * spectral_norm(m).unwrap(),
                "tangent max entry",
            ),
            (ptm.max_abs(), p.beta * sharp(m), "tangent sharp"),
            (sharp(&self.p_omega(&ptm)), p.product * sharp(m), "composite sharp"),
            (self.p_t(&pom).max_abs(), p.product * minf, "composite max entry"),
            (l1(&self.p_omega(&ptm)), p.product * l1(m), "composite v1"),
        ];
        if with_flat {
            let flat = |x: &Matrix64| flat_norm(x, rho).unwrap();
            out.push((flat(&self.p_t(&pom)), p.product * flat(m), "composite flat"));
        }
        out
    }
}

fn probe_matrices(m: usize, n: usize, count: usize, seed: u64) -> Vec<Matrix64> {
    let mut rng = SeededRng::new(Seed(seed));
    (0..count)
        .map(|k| {
            let g = gaussian_matrix::<f64>(m, n, Seed(seed.wrapping_add(k as u64)));
            match k % 3 {
                0 => g,
                1 => g.map(f64::signum),
                _ => {
                    let (i, j) = (rng.index(m), rng.index(n));
                    Matrix::from_fn(m, n, |a, b| if a == i || b == j { 1.0 } else { 0.0 })
                }
            }
        })
        .collect()
}

#[test]
fn criterion_05_contraction_inequalities() {
    let shapes = [(12, 12, 1, 20), (16, 14, 2, 30), (30, 30, 2, 60), (40, 40, 3, 80)];
    let mut probes = 0;
    let mut checks = 0;
    let mut failed = Vec::new();
    for (k, &(m, n, rank, ktilde)) in shapes.iter().enumerate() {
        let inst = uniform_instance(m, n, rank, ktilde, 0.0, 900 + k as u64);
        let mats = probe_matrices(m, n, 25, 40 + k as u64);
        probes += mats.len();
        for scale in [0.5, 1.0, 2.0] {
            let probe = Probe {
                target: &inst.target,
                profile: inst.profile.at_rho(inst.profile.rho * scale).unwrap(),
            };
            for x in &mats {
                for (lhs, rhs, label) in probe.inequalities(x, m * n <= 256) {
                    checks += 1;
                    if !le(lhs, rhs, 1e-9) {
                        failed.push(format!("{label} at {m}x{n}: {lhs} > {rhs}"));
                    }
                }
            }
        }
    }

    let mut ratios = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for seed in 0..4u64 {
        for (m, n, k) in [(20, 20, 20), (24, 18, 10), (40, 40, 40)] {
            let target =
                gen_incoherent_target::<f64>(m, n, 1, k, MagnitudeLaw::default(), Seed(seed)).unwrap();
            let p = profile(&target, None).unwrap();
            for side in [NeumannSide::Support, NeumannSide::Tangent] {
                let g = gaussian_matrix::<f64>(m, n, Seed(70 + seed));
                let rhs = match side {
                    NeumannSide::Support => project_support(&target.support, &g).unwrap(),
                    NeumannSide::Tangent => project_tangent(&target.space, &g).unwrap(),
                };
                let sol = neumann_inverse(&target.support, &target.space, side, &rhs, 1e-12).unwrap();
                ratios += 1;
                worst_gap = worst_gap.max(sol.contraction - p.product);
                if sol.contraction > p.product + 1e-9 {
                    failed.push(format!("Neumann ratio {} > {}", sol.contraction, p.product));
                }
            }
        }
    }
    verdict(
        5,
        "contraction inequalities",
        probes >= 100 && failed.is_empty(),
        format!(
            "{probes} probes x 3 rho values, {checks} inequalities up to 40x40 (slack 1e-9); \
             {ratios} Neumann ratios, max(ratio - alpha*beta) = {worst_gap:.3e}; failures: {failed:?}"
        ),
    );
}

#[test]
fn criterion_06_norm_dualities() {
    let mut rng = SeededRng::new(Seed(6));
    let mut failed = Vec::new();
    for k in 0..100u64 {
        let m = gaussian_matrix::<f64>(6, 6, Seed(6000 + k)).scale(rng.uniform_in(0.1, 5.0));
        let rho = rng.uniform_in(-1.5, 1.5).exp();
        let spec = induced_norm(&m, InducedMode::TwoToTwo).unwrap();
        let sharp = sharp_norm(&m, rho).unwrap();
        let flat = flat_norm(&m, rho).unwrap();
        let trace = trace_norm(&m).unwrap();
        if !le(spec, sharp, 1e-8) || !le(flat, trace, 1e-8) {
            failed.push(k);
        }
    }
    verdict(
        6,
        "norm dualities",
        failed.is_empty(),
        format!("100 random 6x6 matrices, spectral <= sharp and flat (LP) <= trace, slack 1e-8; failures {failed:?}"),
    );
}

#[test]
fn criterion_07_uncertainty_principle() {
    let mut cases: Vec<Matrix64> = Vec::new();
    for s in 0..8u64 {
        cases.push(gaussian_matrix(5 + s as usize, 4 + (s as usize * 3) % 7, Seed(700 + s)));
    }
    for s in 0..6u64 {
        let a = gaussian_matrix::<f64>(12, 1 + s as usize % 3, Seed(710 + s));
        let b = gaussian_matrix::<f64>(10, 1 + s as usize % 3, Seed(720 + s));
        let x = a.matmul_t(&b).unwrap();
        let keep = 2 + s as usize;
        cases.push(Matrix::from_fn(12, 10, |i, j| if i < keep && j < keep { x[(i, j)] } else { 0.0 }));
    }
    for s in 0..4u64 {
        let support = gen_support(9, 9, 6 + s as usize, Seed(730 + s));
        let g = gaussian_matrix::<f64>(9, 9, Seed(740 + s));
        cases.push(Matrix::from_fn(9, 9, |i, j| if support.contains(i, j) { g[(i, j)] } else { 0.0 }));
    }
    cases.push(Matrix::from_fn(5, 5, |i, j| if (i, j) == (2, 3) { 7.0 } else { 0.0 }));
    cases.push(Matrix::identity(4));
    let products: Vec<f64> = cases
        .iter()
        .map(|x| profile(&TargetPair::new(x.clone(), x.clone()).unwrap(), None).unwrap().product)
        .collect();
    let (lo, _) = min_max(&products);
    verdict(
        7,
        "uncertainty principle",
        cases.len() >= 20 && lo >= 1.0 - 1e-9,
        format!("{} nonzero X with X_S = X_L = X, min alpha*beta = {lo:.6}", cases.len()),
    );
}

fn random_matrix(rng: &mut SeededRng, m: usize, n: usize, scale: f64) -> Matrix64 {
    Matrix::from_fn(m, n, |_, _| rng.uniform_in(-scale, scale))
}

fn dist(a: &Matrix64, b: &Matrix64) -> f64 {
    (a - b).frobenius_norm()
}

#[test]
fn criterion_08_prox_correctness() {
    const TOL: f64 = 1e-9;
    let mut rng = SeededRng::new(Seed(8));
    let mut probes = 0;
    let mut failed: Vec<String> = Vec::new();
    let mut check = |ok: bool, label: &str, probes: &mut usize| {
        *probes += 1;
        if !ok {
            failed.push(label.to_owned());
        }
    };
    for _ in 0..75 {
        let (m, n) = (1 + rng.index(6), 1 + rng.index(6));
        let v = random_matrix(&mut rng, m, n, 5.0);
        let w = random_matrix(&mut rng, m, n, 5.0);
        let t = rng.uniform_in(0.0, 3.0);

        let x = soft_threshold(&v, t).unwrap();
        let first_order = v.as_slice().iter().zip(x.as_slice()).all(|(&vi, &xi)| {
            let g = vi - xi;
            if xi != 0.0 {
                (g - t * xi.signum()).abs() <= TOL
            } else {
                g.abs() <= t + TOL
            }
        });
        check(first_order, "soft threshold first order", &mut probes);
        let d = dist(&x, &soft_threshold(&w, t).unwrap());
        check(d <= dist(&v, &w) + TOL, "soft threshold nonexpansive", &mut probes);

        let tau = rng.uniform_in(0.01, 4.0);
        let x = svt(&v, tau).unwrap();
        let g = (&v - &x).scale(1.0 / tau);
        let inner = frobenius_inner(&g, &x).unwrap();
        let prox_point = spectral_norm(&g).unwrap() <= 1.0 + 1e-8
            && (inner - trace_norm(&x).unwrap()).abs() <= 1e-8 * (1.0 + inner.abs());
        check(prox_point, "svt subgradient", &mut probes);
        check(dist(&x, &svt(&w, tau).unwrap()) <= dist(&v, &w) + 1e-8, "svt nonexpansive", &mut probes);

        let c = random_matrix(&mut rng, m, n, 5.0);
        let b = if rng.uniform() < 0.3 { f64::INFINITY } else { rng.uniform_in(0.1, 4.0) };
        let x = prox_l1_box(&v, &c, t, b).unwrap();
        let boxed = v.as_slice().iter().zip(c.as_slice()).zip(x.as_slice()).all(|((&vi, &ci), &xi)| {
            let g = vi - xi;
            let (mut lo, mut hi) = if xi > 0.0 {
                (t, t)
            } else if xi < 0.0 {
                (-t, -t)
            } else {
                (-t, t)
            };
            if b.is_finite() && xi >= ci + b {
                hi = f64::INFINITY;
            }
            if b.is_finite() && xi <= ci - b {
                lo = f64::NEG_INFINITY;
            }
            xi >= ci - b - TOL && xi <= ci + b + TOL && g >= lo - TOL && g <= hi + TOL
        });
        check(boxed, "boxed l1 prox first order", &mut probes);

        let r = rng.uniform_in(0.1, 4.0);
        let cv = clip_entries(&v, r).unwrap();
        let clip_ok = cv.max_abs() <= r
            && clip_entries(&cv, r).unwrap() == cv
            && dist(&cv, &clip_entries(&w, r).unwrap()) <= dist(&v, &w) + TOL;
        check(clip_ok, "clip idempotent and nonexpansive", &mut probes);

        let eps = rng.uniform_in(0.0, 20.0);
        let p = project_l1_ball(&v, eps).unwrap();
        let pw = project_l1_ball(&w, eps).unwrap();
        let ball_ok = l1(&p) <= eps * (1.0 + 1e-12) + 1e-12
            && dist(&project_l1_ball(&p, eps).unwrap(), &p) <= TOL
            && dist(&p, &pw) <= dist(&v, &w) + TOL
            && frobenius_inner(&(&v - &p), &(&pw - &p)).unwrap() <= 1e-8;
        check(ball_ok, "l1 ball projection", &mut probes);

        let p = project_nuclear_ball(&v, eps).unwrap();
        let pw = project_nuclear_ball(&w, eps).unwrap();
        let nuclear_ok = trace_norm(&p).unwrap() <= eps * (1.0 + 1e-10) + 1e-10
            && dist(&project_nuclear_ball(&p, eps).unwrap(), &p) <= 1e-8
            && dist(&p, &pw) <= dist(&v, &w) + 1e-8
            && frobenius_inner(&(&v - &p), &(&pw - &p)).unwrap() <= 1e-8;
        check(nuclear_ok, "nuclear ball projection", &mut probes);
    }
    verdict(
        8,
        "prox correctness",
        probes >= 500 && failed.is_empty(),
        format!("{probes} probes over 6 operators; failures {failed:?}"),
    );
}

#[test]
fn criterion_09_incoherence_upper_bounds() {
    let mut instances = Vec::new();
    for seed in 0..10u64 {
        instances.push(uniform_instance(60, 60, 2, 180, 0.0, seed));
    }
    for seed in 0..30u64 {
        let (m, n) = (10 + (seed as usize * 11) % 50, 10 + (seed as usize * 17) % 50);
        let rank = (seed as usize % 5).min(m.min(n));
        instances.push(uniform_instance(
            m,
            n,
            rank,
            (seed as usize * 13) % 150,
            0.01 * (seed % 2) as f64,
            100 + seed,
        ));
    }
    let mut failed = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        let p = &inst.profile;
        let (m, n) = p.shape;
        let bounds = incoherence_upper_bounds(m, n, p.rank, p.m0, p.n0, p.u_max_entry, p.v_max_entry);
        let at = p.at_rho(bounds.rho).unwrap();
        if !(le(at.alpha, bounds.alpha, 1e-12)
            && le(at.beta, bounds.beta, 1e-12)
            && le(at.gamma, bounds.gamma, 1e-12))
        {
            failed.push(k);
        }
    }
    verdict(
        9,
        "incoherence upper bounds",
        failed.is_empty(),
        format!(
            "{} synth instances, alpha, beta, gamma at rho = sqrt(n/m) within bounds; failures {failed:?}",
            instances.len()
        ),
    );
}

#[test]
fn criterion_10_sweep_determinism() {
    let dir = tempfile::TempDir::new().unwrap();
    let run = |name: &str, threads: &str| -> (Vec<u8>, Vec<u8>) {
        let out = dir.path().join(name);
        let code = slr_tool::main_with_args([
            "slr",
            "sweep",
            "--m",
            "16",
            "--n",
            "16",
            "--ranks",
            "1:2",
            "--densities",
            "0:0.1:0.05",
            "--trials",
            "3",
            "--seed",
            "2024",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let summary = slr_tool::sweep::summary_path(&out);
        (std::fs::read(&out).unwrap(), std::fs::read(summary).unwrap())
    };
    let first = run("a.csv", "1");
    let second = run("b.csv", "1");
    let threaded = run("c.csv", "4");
    let same = first == second && first == threaded;
    verdict(
        10,
        "sweep determinism",
        same && !first.0.is_empty(),
        format!(
            "two runs with 1 thread and one with 4 threads: trial CSVs ({} bytes) and summaries {}",
            first.0.len(),
            if same { "byte-identical" } else { "differ" }
        ),
    );
}

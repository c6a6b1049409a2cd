//! Acceptance run: one line per criterion, nonzero exit if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use exact_uncertainty::decomp::{
    classical_momentum_field, estimator_error, max_discrete_curl, momentum_decomposition_stats, vector_classical_momentum,
    ClassicalField,
};
use exact_uncertainty::finite_dim::{generalized_ur, ivanovic_check, mub_bases, FiniteObservable, FiniteState};
use exact_uncertainty::fisher_stats::{diffusion_entropy_rate_check, fisher_length, DiffusionConfig};
use exact_uncertainty::grid_state::{
    build_state, build_state_2d, condition_on_momentum, Grid1D, Grid2D, GridDistribution, NumberState, Particle,
    StateSpec, StateSpec2D,
};
use exact_uncertainty::numerics::Numerics;
use exact_uncertainty::random::{entangled_from, StateSampler};
use exact_uncertainty::relations::{
    correlation_relation_check, cramer_rao_check, entropic_bound_estimates, exact_ur_phase_number, exact_ur_position,
    matrix_ur_check, mixed_ur_check, Status,
};
use exact_uncertainty::wigner::wigner_equivalence;
use num_complex::Complex64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn worst_position_gap(n: usize, seed: u64, draws: usize) -> f64 {
    let grid = Grid1D::covering(-20.0, 20.0, n).unwrap();
    let mut sampler = StateSampler::new(seed);
    let num = Numerics::default();
    (0..draws)
        .map(|_| {
            let s = build_state(&sampler.gaussian_spec(), &grid, 1.0).unwrap();
            (exact_ur_position(&s, &num).exact.ratio - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

fn exact_position_relation() -> Outcome {
    let start = Instant::now();
    let coarse = worst_position_gap(4096, 7, 20);
    let elapsed = start.elapsed();
    let fine = worst_position_gap(8192, 7, 20);
    let reduction = coarse / fine;
    outcome(
        coarse <= 1e-4 && reduction >= 3.0 && elapsed < Duration::from_secs(10),
        format!("worst |ratio-1| = {coarse:.3e} at n=4096, {fine:.3e} at n=8192 (reduction {reduction:.1}x), {:.2} s", secs(elapsed)),
    )
}

fn real_wavefunctions() -> Outcome {
    let grid = Grid1D::covering(-20.0, 20.0, 4096).unwrap();
    let num = Numerics::default();
    let mut worst: f64 = 0.0;
    for n in 0..=5 {
        let s = build_state(&StateSpec::harmonic(n), &grid, 1.0).unwrap();
        let r = exact_ur_position(&s, &num);
        let product = r.fisher.delta * r.momentum.var_obs.sqrt();
        worst = worst.max((product / 0.5 - 1.0).abs());
    }
    let s = build_state(&StateSpec::harmonic(1), &grid, 1.0).unwrap();
    let r = exact_ur_position(&s, &num);
    let dx_err = (r.fisher.delta - 1.0 / 6f64.sqrt()).abs();
    let dp_err = (r.momentum.var_obs.sqrt() - 1.5f64.sqrt()).abs();
    outcome(
        worst <= 1e-4 && dx_err <= 1e-4 && dp_err <= 1e-4,
        format!("n=0..5 worst |dX*dP/(hbar/2)-1| = {worst:.3e}; n=1 dX err {dx_err:.3e}, dP err {dp_err:.3e}"),
    )
}

fn mixed_states() -> Outcome {
    let grid = Grid1D::covering(-12.0, 12.0, 512).unwrap();
    let num = Numerics::spectral();
    let mut sampler = StateSampler::new(11);
    let (mut identity, mut violations, mut saturation): (f64, usize, f64) = (0.0, 0, 0.0);
    for _ in 0..10 {
        let r = sampler.rank_two_mixture(&grid, 1.0).unwrap();
        let m = mixed_ur_check(&r, &num);
        identity = identity.max((m.identity.ratio - 1.0).abs());
        if m.inequality.lhs < 0.5 * (1.0 - 1e-12) {
            violations += 1;
        }
    }
    for _ in 0..5 {
        let s = build_state(&sampler.gaussian_superposition(2), &grid, 1.0).unwrap();
        let m = mixed_ur_check(&s.to_density(), &num);
        saturation = saturation.max((m.inequality.ratio - 1.0).abs()).max((m.bound.ratio - 1.0).abs());
    }
    outcome(
        identity <= 1e-6 && violations == 0 && saturation <= 1e-4,
        format!("identity worst rel gap {identity:.3e}; {violations} inequality violations; pure saturation {saturation:.3e}"),
    )
}

fn matrix_relation() -> Outcome {
    let start = Instant::now();
    let grid = Grid2D::square(Grid1D::covering(-26.75, 26.75, 512).unwrap());
    let num = Numerics::default();
    let s = build_state_2d(&StateSpec2D::epr(0.1, 10.0, 1.0, 2.0), &grid, 1.0).unwrap();
    let m = matrix_ur_check(&s, &num, 1e-3).unwrap();
    let heis = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (m.heisenberg_product[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let corr = correlation_relation_check(&s, &num, 1e-3).unwrap();
    let corr_sum = corr.check.lhs.abs();
    let grid = Grid2D::square(Grid1D::covering(-9.0, 9.0, 256).unwrap());
    let other = entangled_from(&grid, 1.0, [0.9, 1.1, 0.5, 0.02, 0.3, 0.4, -0.6, 0.3]).unwrap();
    let e = matrix_ur_check(&other, &num, 1e-3).unwrap();
    let exact = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (e.exact_product[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(
        heis <= 1e-3 && corr_sum < 1e-3 && exact <= 1e-3 && elapsed < Duration::from_secs(60),
        format!(
            "EPR Cov(X)Cov(P) worst entry err {heis:.3e}; |r_P(P_nc)+r_F(X)| = {corr_sum:.3e}; non-Gaussian FCov*Cov(P_nc) worst err {exact:.3e}; {:.2} s",
            secs(elapsed)
        ),
    )
}

fn epr_collapse() -> Outcome {
    let grid = Grid2D::square(Grid1D::covering(-26.75, 26.75, 512).unwrap());
    let s = build_state_2d(&StateSpec2D::epr(0.1, 10.0, 1.0, 2.0), &grid, 1.0).unwrap();
    let num = Numerics::default();
    let (sigma2, tau2, p0) = (0.01, 100.0, 2.0);
    let mut worst: f64 = 0.0;
    for p in [0.0, 1.0, 2.0] {
        let one = condition_on_momentum(&s, Particle::Second, p).unwrap();
        let expected = (sigma2 * p + tau2 * (p0 - p)) / (sigma2 + tau2);
        let field = classical_momentum_field(&one, &num.with_support_floor(1e-4));
        let dev = field.on_support().map(|(_, v)| (v - expected).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    outcome(worst <= 1e-3, format!("worst |P_cl - p~| over p in {{0,1,2}} = {worst:.3e}"))
}

fn phase_number() -> Outcome {
    let one = Complex64::new(1.0, 0.0);
    let num = Numerics::default();
    let a = exact_ur_phase_number(&NumberState::photon(&[(0, one), (1, one)]).unwrap(), 256, &num).unwrap();
    let b = exact_ur_phase_number(&NumberState::photon(&[(0, one), (2, one)]).unwrap(), 256, &num).unwrap();
    let c = exact_ur_phase_number(&NumberState::fock(4).unwrap(), 256, &num).unwrap();
    let (ga, gb) = ((a.lhs - 0.5).abs(), (b.lhs - 0.5).abs());
    outcome(
        ga <= 1e-8 && gb <= 1e-8 && c.status == Status::Indeterminate,
        format!("|0>+|1>: gap {ga:.3e}; |0>+|2>: gap {gb:.3e}; |4>: {}", c.status),
    )
}

fn energy_bounds() -> Outcome {
    let e = entropic_bound_estimates(1.0, 1.0, 1.0, 1.0);
    let harmonic = (e.harmonic.lhs - 0.5).abs() / 0.5;
    let bound = (e.bouncing_bound.lhs - 1.249).abs();
    let exact = (e.bouncing_exact.lhs - 1.856).abs();
    outcome(
        harmonic <= 1e-6 && bound <= 5e-4 && exact <= 5e-4,
        format!(
            "harmonic rel err {harmonic:.3e}; bound coefficient {:.6} (err {bound:.1e}); exact coefficient {:.6} (err {exact:.1e})",
            e.bouncing_bound.lhs, e.bouncing_exact.lhs
        ),
    )
}

fn wigner() -> Outcome {
    let grid = Grid1D::covering(-12.0, 12.0, 512).unwrap();
    let mut sampler = StateSampler::new(21);
    let (mut field, mut marg, mut purity): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..50 {
        let s = sampler.smooth_state(&grid, 1.0).unwrap();
        let e = wigner_equivalence(&s).unwrap();
        field = field.max(e.field_deviation);
        marg = marg.max(e.marginals.position).max(e.marginals.momentum);
        purity = purity.max((e.purity - 1.0).abs());
    }
    outcome(
        field < 1e-6 && marg <= 1e-6 && purity <= 1e-6,
        format!("50 states: field dev {field:.3e}; marginal dev {marg:.3e}; purity err {purity:.3e}"),
    )
}

fn de_bruijn() -> Outcome {
    let grid = Grid1D::covering(-14.0, 14.0, 560).unwrap();
    let num = Numerics::default();
    let cfg = DiffusionConfig { gamma: 0.1, drift: 0.0, dt: 0.005, steps: 1000, checkpoints: 10 };
    let gauss = grid.points().iter().map(|x| (-x * x / 2.0).exp()).collect();
    let g = diffusion_entropy_rate_check(&GridDistribution::normalized(grid, gauss, false).unwrap(), &cfg, &num).unwrap();
    let bimodal = grid
        .points()
        .iter()
        .map(|x| (-(x - 2.0).powi(2) / 0.5).exp() + 0.6 * (-(x + 2.5).powi(2) / 0.8).exp())
        .collect();
    let b = diffusion_entropy_rate_check(&GridDistribution::normalized(grid, bimodal, false).unwrap(), &cfg, &num).unwrap();
    outcome(
        g.max_relative_mismatch <= 0.01 && b.max_relative_mismatch <= 0.02,
        format!("gaussian max mismatch {:.3e}; bimodal {:.3e}", g.max_relative_mismatch, b.max_relative_mismatch),
    )
}

fn finite_dimensions() -> Outcome {
    let mut sampler = StateSampler::new(5);
    let mut ivanovic: f64 = 0.0;
    for d in [2, 3, 5] {
        let m = mub_bases(d).unwrap();
        for k in 0..100 {
            let rho = sampler.finite_state(d, 1 + k % d).unwrap();
            ivanovic = ivanovic.max(ivanovic_check(&rho, &m).unwrap().equality.gap.abs());
        }
    }
    let (mut generalized, mut counted): (f64, usize) = (0.0, 0);
    for d in [2, 3] {
        while counted < if d == 2 { 100 } else { 200 } {
            let a = sampler.hermitian(d).unwrap();
            let b = sampler.hermitian(d).unwrap();
            let rho = FiniteState::pure(&sampler.finite_pure(d)).unwrap();
            let r = generalized_ur(&a, &b, &rho, 1.0).unwrap();
            if r.check.status != Status::Indeterminate {
                generalized = generalized.max((r.check.ratio - 1.0).abs());
                counted += 1;
            }
        }
    }
    let s = 0.5f64.sqrt();
    let rho = FiniteState::pure(&[Complex64::new(s, 0.0), Complex64::new(0.0, s)]).unwrap();
    let q = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, 1.0).unwrap();
    let qubit = q.delta == 0.5 && q.component.nonclassical_spread() == 1.0;
    outcome(
        ivanovic <= 1e-12 && generalized <= 1e-8 && qubit,
        format!(
            "collision-length gap {ivanovic:.3e} (300 states); generalized worst |ratio-1| {generalized:.3e} ({counted} states); qubit delta = {}, spread = {}",
            q.delta,
            q.component.nonclassical_spread()
        ),
    )
}

fn divergence() -> Outcome {
    let num = Numerics::default();
    let mut spreads = Vec::new();
    let mut flagged = true;
    for n in [512, 1024, 2048, 4096] {
        let grid = Grid1D::covering(-1.0, 2.0, n).unwrap();
        let s = build_state(&StateSpec::Box { lower: 0.0, upper: 1.0 }, &grid, 1.0).unwrap();
        flagged &= fisher_length(&s.density(), &num).divergent;
        spreads.push(momentum_decomposition_stats(&s, &num).var_obs.sqrt());
    }
    let monotone = spreads.windows(2).all(|w| w[1] > w[0]);
    outcome(
        flagged && monotone,
        format!("fisher divergence flagged: {flagged}; dP under refinement: {:?}", spreads.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()),
    )
}

fn property_suites() -> Outcome {
    let grid = Grid1D::covering(-16.0, 16.0, 1024).unwrap();
    let num = Numerics::default();
    let mut sampler = StateSampler::new(3);
    let (mut cramer, mut additivity, mut optimality, mut curl) = (0usize, 0usize, 0usize, 0usize);
    let mut cases = 0;
    for k in 0..40 {
        let spec = if k % 2 == 0 { sampler.gaussian_spec() } else { sampler.gaussian_superposition(2) };
        let s = build_state(&spec, &grid, 1.0).unwrap();
        cases += 1;
        if cramer_rao_check(&s.density(), &num).status == Status::Fail {
            cramer += 1;
        }
        let st = momentum_decomposition_stats(&s, &num);
        if (st.var_obs - st.var_cl - st.var_nc).abs() > 1e-10 * st.var_obs.abs().max(1.0) || st.var_nc <= 0.0 {
            additivity += 1;
        }
        let field = classical_momentum_field(&s, &num);
        let best = estimator_error(&s, &field, &num).unwrap();
        let shifted = ClassicalField::with_values(&field, field.values().iter().map(|v| v + 0.3).collect()).unwrap();
        let off = estimator_error(&s, &shifted, &num).unwrap();
        if (best - st.min_error).abs() > 1e-8 * st.second_obs || (off - best - 0.09).abs() > 1e-8 || off < best {
            optimality += 1;
        }
    }
    let g2 = Grid2D::square(Grid1D::covering(-9.0, 9.0, 128).unwrap());
    for _ in 0..10 {
        let s = sampler.entangled_state(&g2, 1.0).unwrap();
        if max_discrete_curl(&vector_classical_momentum(&s, &num)) > 1e-8 {
            curl += 1;
        }
    }
    let violations = cramer + additivity + optimality + curl;
    outcome(
        violations == 0,
        format!(
            "{cases} 1D states + 10 2D states: cramer-rao {cramer}, additivity {additivity}, optimality {optimality}, curl {curl} violations"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("exact position-momentum relation", exact_position_relation),
        ("real-wavefunction identity", real_wavefunctions),
        ("mixed-state relation", mixed_states),
        ("matrix relation", matrix_relation),
        ("EPR collapse", epr_collapse),
        ("phase-number relation", phase_number),
        ("energy bounds", energy_bounds),
        ("Wigner equivalence", wigner),
        ("de Bruijn identity", de_bruijn),
        ("finite-dimensional relations", finite_dimensions),
        ("divergence detection", divergence),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failures += 1;
        }
        println!("criterion {:>2} [{}] {name}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

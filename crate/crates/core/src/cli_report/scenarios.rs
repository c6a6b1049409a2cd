//! The scenario registry.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{FieldData, ScenarioSpec};
use crate::decomp::{classical_momentum_field, classical_momentum_field_mixed, number_classical_field, ClassicalField};
use crate::error::{Error, Result};
use crate::finite_dim::{generalized_ur, ivanovic_check, mub_bases, FiniteObservable, FiniteState};
use crate::fisher_stats::{diffusion_entropy_rate_check, fisher_length, DiffusionConfig};
use crate::grid_state::{
    build_state, build_state_2d, condition_on_momentum, phase_distribution, Grid1D, Grid2D, GridDistribution,
    NumberState, Particle, StateSpec, StateSpec2D,
};
use crate::numerics::Numerics;
use crate::random::StateSampler;
use crate::relations::{
    correlation_relation_check, cramer_rao_check, energy_decomposition, entropic_bound_estimates, exact_ur_conjugate,
    exact_ur_phase_number, exact_ur_position, matrix_ur_check, mixed_ur_check, phase_number_mixed_check, airy_ai,
    first_airy_zero, Potential, RelationCheck, Tolerance, GRID_EQUALITY_TOL,
};
use crate::wigner::{wigner_classical_momentum, wigner_equivalence, wigner_function, EQUIVALENCE_SUPPORT_FLOOR};

/// A named, parameterized run of related checks.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    /// Accepted parameters and their defaults.
    pub params: &'static [(&'static str, f64)],
    /// Grid size used when none is given; `None` for scenarios without a grid.
    pub default_grid_n: Option<usize>,
    /// Seed used when none is given; `None` for scenarios without random draws.
    pub default_seed: Option<u64>,
    pub(crate) run: fn(&Context) -> Result<Outcome>,
}

pub(crate) struct Outcome {
    pub checks: Vec<RelationCheck>,
    pub fields: Vec<FieldData>,
}

/// Resolved inputs handed to a scenario body.
pub(crate) struct Context {
    params: BTreeMap<String, f64>,
    grid_n: Option<usize>,
    seed: Option<u64>,
    hbar: f64,
}

impl Context {
    fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    /// A parameter that must be a whole number in `[lo, hi]`.
    fn whole(&self, key: &str, lo: usize, hi: usize) -> Result<usize> {
        let v = self.get(key);
        if v.fract() != 0.0 || v < lo as f64 || v > hi as f64 {
            return Err(Error::InvalidParameter(format!("{key} must be a whole number in [{lo}, {hi}], got {v}")));
        }
        Ok(v as usize)
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v = self.get(key);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidParameter(format!("{key} must be positive, got {v}")))
        }
    }

    fn grid_n(&self) -> usize {
        self.grid_n.expect("grid scenarios always resolve a grid size")
    }

    fn seed(&self) -> u64 {
        self.seed.expect("random scenarios always resolve a seed")
    }

    fn grid(&self) -> Result<Grid1D> {
        Grid1D::covering(self.get("lower"), self.get("upper"), self.grid_n())
    }

    /// Parameters as recorded in the report.
    pub(crate) fn recorded(&self) -> BTreeMap<String, f64> {
        let mut out = self.params.clone();
        out.insert("hbar".into(), self.hbar);
        if let Some(n) = self.grid_n {
            out.insert("grid_n".into(), n as f64);
        }
        if let Some(s) = self.seed {
            out.insert("seed".into(), s as f64);
        }
        out
    }
}

impl Scenario {
    pub(crate) fn resolve(&self, spec: &ScenarioSpec) -> Result<Context> {
        let mut params: BTreeMap<String, f64> = self.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in &spec.params {
            if !params.contains_key(k) {
                let known: Vec<&str> = self.params.iter().map(|(k, _)| *k).collect();
                return Err(Error::InvalidParameter(format!(
                    "scenario {} has no parameter `{k}` (accepted: {})",
                    self.name,
                    known.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{k} must be finite, got {v}")));
            }
            params.insert(k.clone(), *v);
        }
        let grid_n = self.default_grid_n.map(|d| spec.grid_n.unwrap_or(d));
        if let Some(n) = grid_n {
            if n < 16 {
                return Err(Error::InvalidParameter(format!("grid size must be at least 16, got {n}")));
            }
        }
        Ok(Context { params, grid_n, seed: self.default_seed.map(|d| spec.seed.unwrap_or(d)), hbar: spec.hbar })
    }
}

/// Every registered scenario, in listing order.
pub static SCENARIOS: &[Scenario] = &[
    Scenario {
        name: "gaussian-family",
        summary: "random chirped, boosted Gaussians: exact position and conjugate relations, Heisenberg, Cramer-Rao",
        params: &[("draws", 20.0), ("lower", -20.0), ("upper", 20.0)],
        default_grid_n: Some(4096),
        default_seed: Some(7),
        run: gaussian_family,
    },
    Scenario {
        name: "harmonic",
        summary: "oscillator eigenstates: real-wavefunction identity, energy decomposition, entropic estimate",
        params: &[("n_max", 5.0), ("mass", 1.0), ("omega", 1.0), ("lower", -20.0), ("upper", 20.0)],
        default_grid_n: Some(4096),
        default_seed: None,
        run: harmonic,
    },
    Scenario {
        name: "bouncing-ball",
        summary: "entropic ground-state bound in a uniform field against the Airy ground state",
        params: &[("mass", 1.0), ("gravity", 1.0)],
        default_grid_n: None,
        default_seed: None,
        run: bouncing_ball,
    },
    Scenario {
        name: "epr",
        summary: "approximate EPR state: matrix relations, correlation relation, conditional collapse",
        params: &[("sigma", 0.1), ("tau", 10.0), ("separation", 1.0), ("momentum", 2.0), ("half_width", 26.75)],
        default_grid_n: Some(512),
        default_seed: None,
        run: epr,
    },
    Scenario {
        name: "fock",
        summary: "phase-number relation for number superpositions, a number eigenstate and a mixture",
        params: &[("n", 4.0), ("n_phi", 256.0)],
        default_grid_n: None,
        default_seed: None,
        run: fock,
    },
    Scenario {
        name: "mub",
        summary: "collision lengths in a complete set of mutually unbiased bases",
        params: &[("d", 2.0), ("state", 0.0), ("random_states", 10.0)],
        default_grid_n: None,
        default_seed: Some(5),
        run: mub,
    },
    Scenario {
        name: "generalized-ur",
        summary: "relation between two finite-dimensional observables, pure and mixed",
        params: &[("d", 3.0), ("draws", 20.0)],
        default_grid_n: None,
        default_seed: Some(5),
        run: generalized,
    },
    Scenario {
        name: "diffusion",
        summary: "entropy production under heat flow against the Fisher length (shape 0: Gaussian, 1: bimodal)",
        params: &[
            ("gamma", 0.1),
            ("drift", 0.0),
            ("dt", 0.005),
            ("steps", 1000.0),
            ("checkpoints", 10.0),
            ("shape", 0.0),
            ("lower", -14.0),
            ("upper", 14.0),
        ],
        default_grid_n: Some(560),
        default_seed: None,
        run: diffusion,
    },
    Scenario {
        name: "wigner-equivalence",
        summary: "classical momentum from Wigner slices against the phase gradient, marginals, purity",
        params: &[("states", 5.0), ("lower", -12.0), ("upper", 12.0)],
        default_grid_n: Some(512),
        default_seed: Some(21),
        run: wigner,
    },
    Scenario {
        name: "mixed-state",
        summary: "mixed-state inequality, the identity behind it, and saturation by pure states",
        params: &[("mixtures", 10.0), ("pure", 3.0), ("lower", -12.0), ("upper", 12.0)],
        default_grid_n: Some(512),
        default_seed: Some(11),
        run: mixed_state,
    },
    Scenario {
        name: "divergence",
        summary: "box state: Fisher divergence flag and growing momentum spread under refinement",
        params: &[("lower", 0.0), ("upper", 1.0), ("margin", 1.0), ("refinements", 3.0)],
        default_grid_n: Some(512),
        default_seed: None,
        run: divergence,
    },
];

/// Looks a scenario up by name.
pub fn scenario(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

fn tagged(prefix: &str, mut c: RelationCheck) -> RelationCheck {
    c.name = format!("{prefix}: {}", c.name);
    c
}

fn field_line(name: &str, f: &ClassicalField) -> FieldData {
    let (x, values) = f.on_support().unzip();
    FieldData::Line { name: name.into(), x, values }
}

fn density_line(name: &str, d: &GridDistribution) -> FieldData {
    FieldData::Line { name: name.into(), x: d.grid().points(), values: d.values().to_vec() }
}

fn gaussian_family(ctx: &Context) -> Result<Outcome> {
    let grid = ctx.grid()?;
    let draws = ctx.whole("draws", 1, 10_000)?;
    let num = Numerics::default();
    let mut sampler = StateSampler::new(ctx.seed());
    let mut checks = Vec::new();
    let mut fields = Vec::new();
    for k in 0..draws {
        let s = build_state(&sampler.gaussian_spec(), &grid, ctx.hbar)?;
        let label = format!("draw {k}");
        let r = exact_ur_position(&s, &num);
        checks.push(tagged(&label, r.exact));
        checks.push(tagged(&label, r.heisenberg));
        checks.push(tagged(&label, exact_ur_conjugate(&s, &num).exact));
        checks.push(tagged(&label, cramer_rao_check(&s.density(), &num)));
        if k == 0 {
            fields.push(field_line("classical-momentum", &classical_momentum_field(&s, &num)));
            fields.push(density_line("position-density", &s.density()));
        }
    }
    Ok(Outcome { checks, fields })
}

fn harmonic(ctx: &Context) -> Result<Outcome> {
    let grid = ctx.grid()?;
    let n_max = ctx.whole("n_max", 0, 40)?;
    let (mass, omega) = (ctx.positive("mass")?, ctx.positive("omega")?);
    let hbar = ctx.hbar;
    let num = Numerics::default();
    let mut checks = Vec::new();
    let mut fields = Vec::new();
    let length = (hbar / (mass * omega)).sqrt();
    for n in 0..=n_max {
        let s = build_state(&StateSpec::HarmonicEigen { n, mass, omega }, &grid, hbar)?;
        let label = format!("n={n}");
        let r = exact_ur_position(&s, &num);
        checks.push(tagged(
            &label,
            RelationCheck::equal(
                "fisher length x momentum spread (real wavefunction)",
                "real-wavefunction",
                r.fisher.delta * r.momentum.var_obs.max(0.0).sqrt(),
                hbar / 2.0,
                Tolerance::Relative(GRID_EQUALITY_TOL),
            )
            .mark_divergent(r.fisher.divergent),
        ));
        checks.push(tagged(&label, r.exact.clone()));
        if n == 1 {
            checks.push(tagged(
                &label,
                RelationCheck::equal(
                    "fisher length vs l/sqrt(6)",
                    "real-wavefunction",
                    r.fisher.delta,
                    length / 6f64.sqrt(),
                    Tolerance::Relative(GRID_EQUALITY_TOL),
                ),
            ));
            checks.push(tagged(
                &label,
                RelationCheck::equal(
                    "momentum spread vs sqrt(3/2) hbar/l",
                    "real-wavefunction",
                    r.momentum.var_obs.sqrt(),
                    1.5f64.sqrt() * hbar / length,
                    Tolerance::Relative(GRID_EQUALITY_TOL),
                ),
            ));
            fields.push(density_line("position-density-n1", &s.density()));
        }
        let energy = energy_decomposition(&s, &Potential::Harmonic { omega }, mass, &num)?;
        checks.extend(energy.checks(true).into_iter().map(|c| tagged(&label, c)));
        checks.push(tagged(
            &label,
            RelationCheck::equal(
                "direct energy vs (n + 1/2) hbar omega",
                "energy-decomposition",
                energy.direct_total,
                (n as f64 + 0.5) * hbar * omega,
                Tolerance::Relative(GRID_EQUALITY_TOL),
            ),
        ));
    }
    checks.push(entropic_bound_estimates(hbar, mass, omega, 1.0).harmonic);
    Ok(Outcome { checks, fields })
}

fn bouncing_ball(ctx: &Context) -> Result<Outcome> {
    let (mass, gravity) = (ctx.positive("mass")?, ctx.positive("gravity")?);
    let e = entropic_bound_estimates(ctx.hbar, mass, 1.0, gravity);
    let checks = vec![e.bouncing_bound, e.bouncing_closed_form, e.bouncing_exact, e.airy_zero, e.ordering];
    // Ground state Ai(z/l - a0) above the floor, l = (ħ²/2m²g)^{1/3}.
    let l = (ctx.hbar * ctx.hbar / (2.0 * mass * mass * gravity)).cbrt();
    let a0 = first_airy_zero();
    let x: Vec<f64> = (0..200).map(|k| k as f64 * 6.0 * l / 199.0).collect();
    let values = x.iter().map(|z| airy_ai(z / l - a0)).collect();
    Ok(Outcome { checks, fields: vec![FieldData::Line { name: "ground-state-amplitude".into(), x, values }] })
}

fn epr(ctx: &Context) -> Result<Outcome> {
    let (sigma, tau) = (ctx.positive("sigma")?, ctx.positive("tau")?);
    let (separation, p0) = (ctx.get("separation"), ctx.get("momentum"));
    let half = ctx.positive("half_width")?;
    let grid = Grid2D::square(Grid1D::covering(-half, half, ctx.grid_n())?);
    let hbar = ctx.hbar;
    let num = Numerics::default();
    let s = build_state_2d(&StateSpec2D::epr(sigma, tau, separation, p0), &grid, hbar)?;
    let matrix = matrix_ur_check(&s, &num, 1e-3)?;
    let mut checks = matrix.checks.clone();
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        checks.push(RelationCheck::equal(
            format!("Cov(X)Cov(P) entry {}{} in units of (hbar/2)^2", i + 1, j + 1),
            "epr-minimum-uncertainty",
            matrix.heisenberg_product[i][j],
            if i == j { 1.0 } else { 0.0 },
            Tolerance::Absolute(1e-3),
        ));
    }
    let corr = correlation_relation_check(&s, &num, 1e-3)?;
    checks.push(corr.check);
    checks.push(corr.gaussian_form);
    let (s2, t2) = (sigma * sigma, tau * tau);
    let collapse_num = num.with_support_floor(1e-4);
    let mut fields = Vec::new();
    for p in [0.0, p0 / 2.0, p0] {
        let one = condition_on_momentum(&s, Particle::Second, p)?;
        let expected = (s2 * p + t2 * (p0 - p)) / (s2 + t2);
        let field = classical_momentum_field(&one, &collapse_num);
        let worst = field
            .on_support()
            .map(|(_, v)| v)
            .max_by(|a, b| (a - expected).abs().total_cmp(&(b - expected).abs()))
            .unwrap_or(f64::NAN);
        checks.push(RelationCheck::equal(
            format!("P2={p}: worst particle-1 classical momentum vs conditional momentum"),
            "epr-collapse",
            worst,
            expected,
            Tolerance::Absolute(1e-3),
        ));
        if p == p0 {
            fields.push(field_line("collapsed-classical-momentum", &field));
        }
    }
    Ok(Outcome { checks, fields })
}

fn fock(ctx: &Context) -> Result<Outcome> {
    let n = ctx.whole("n", 0, 1000)? as i64;
    let n_phi = ctx.whole("n_phi", 8, 1 << 16)?;
    let num = Numerics::default();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let pair01 = NumberState::photon(&[(0, one), (1, one)])?;
    let pair02 = NumberState::photon(&[(0, one), (2, one)])?;
    let mut checks = vec![
        tagged("(|0>+|1>)/sqrt2", exact_ur_phase_number(&pair01, n_phi, &num)?),
        tagged("(|0>+|2>)/sqrt2", exact_ur_phase_number(&pair02, n_phi, &num)?),
        tagged(&format!("|{n}>"), exact_ur_phase_number(&NumberState::fock(n)?, n_phi, &num)?),
    ];
    let mix = [(0.5, pair01.clone()), (0.5, NumberState::photon(&[(0, one), (2, i)])?)];
    checks.push(tagged("equal mixture", phase_number_mixed_check(&mix, n_phi, &num)?));
    let fields = vec![
        density_line("phase-density", &phase_distribution(&pair01, n_phi)?),
        field_line("classical-number", &number_classical_field(&pair01, n_phi, &num)?),
    ];
    Ok(Outcome { checks, fields })
}

fn basis_state(d: usize, k: usize) -> Vec<Complex64> {
    (0..d).map(|j| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0)).collect()
}

fn mub(ctx: &Context) -> Result<Outcome> {
    let d = ctx.whole("d", 2, 64)?;
    let state = ctx.whole("state", 0, d - 1)?;
    let draws = ctx.whole("random_states", 0, 10_000)?;
    let set = mub_bases(d)?;
    let mut checks = vec![RelationCheck::at_most(
        "largest deviation of |<a|b>|^2 from 1/d",
        "mutually-unbiased",
        set.max_defect(),
        0.0,
        Tolerance::Absolute(1e-12),
    )];
    let rho = FiniteState::pure(&basis_state(d, state))?;
    let r = ivanovic_check(&rho, &set)?;
    let label = format!("|{state}>");
    checks.push(tagged(&label, r.equality));
    checks.push(tagged(
        &label,
        RelationCheck::equal("sum of reciprocal collision lengths", "collision-lengths", r.lengths.iter().map(|l| l.recip()).sum(), 2.0, Tolerance::Absolute(1e-12)),
    ));
    let mut sampler = StateSampler::new(ctx.seed());
    for k in 0..draws {
        let rho = sampler.finite_state(d, 1 + k % d)?;
        let r = ivanovic_check(&rho, &set)?;
        let label = format!("random state {k}");
        checks.push(tagged(&label, r.equality));
        checks.push(tagged(&label, r.bound));
    }
    Ok(Outcome { checks, fields: Vec::new() })
}

fn generalized(ctx: &Context) -> Result<Outcome> {
    let d = ctx.whole("d", 2, 32)?;
    let draws = ctx.whole("draws", 0, 10_000)?;
    let hbar = ctx.hbar;
    let s = 0.5f64.sqrt();
    let rho = FiniteState::pure(&[Complex64::new(s, 0.0), Complex64::new(0.0, s)])?;
    let q = generalized_ur(&FiniteObservable::pauli_z(), &FiniteObservable::pauli_x(), &rho, hbar)?;
    let mut checks = vec![
        tagged("qubit", q.check.clone()),
        tagged(
            "qubit",
            RelationCheck::equal("length of sigma_z relative to sigma_x", "generalized-relation", q.delta, hbar / 2.0, Tolerance::Absolute(1e-12)),
        ),
        tagged(
            "qubit",
            RelationCheck::equal("nonclassical spread of sigma_x", "generalized-relation", q.component.nonclassical_spread(), 1.0, Tolerance::Absolute(1e-12)),
        ),
    ];
    let mut sampler = StateSampler::new(ctx.seed());
    for k in 0..draws {
        let a = sampler.hermitian(d)?;
        let b = sampler.hermitian(d)?;
        let pure = FiniteState::pure(&sampler.finite_pure(d))?;
        checks.push(tagged(&format!("pure draw {k}"), generalized_ur(&a, &b, &pure, hbar)?.check));
        let mixed = sampler.finite_state(d, 2)?;
        checks.push(tagged(&format!("mixed draw {k}"), generalized_ur(&a, &b, &mixed, hbar)?.check));
    }
    Ok(Outcome { checks, fields: Vec::new() })
}

fn diffusion(ctx: &Context) -> Result<Outcome> {
    let grid = ctx.grid()?;
    let shape = ctx.whole("shape", 0, 1)?;
    let cfg = DiffusionConfig {
        gamma: ctx.positive("gamma")?,
        drift: ctx.get("drift"),
        dt: ctx.positive("dt")?,
        steps: ctx.whole("steps", 2, 10_000_000)?,
        checkpoints: ctx.whole("checkpoints", 1, 10_000)?,
    };
    let start: Vec<f64> = grid
        .points()
        .iter()
        .map(|x| match shape {
            0 => (-x * x / 2.0).exp(),
            _ => (-(x - 2.0).powi(2) / 0.5).exp() + 0.6 * (-(x + 2.5).powi(2) / 0.8).exp(),
        })
        .collect();
    let initial = GridDistribution::normalized(grid, start, false)?;
    let report = diffusion_entropy_rate_check(&initial, &cfg, &Numerics::default())?;
    let tol = if shape == 0 { 0.01 } else { 0.02 };
    let checks = report
        .checkpoints
        .iter()
        .map(|c| {
            RelationCheck::equal(
                format!("t={:.4}: entropy rate vs gamma / fisher length^2", c.time),
                "de-bruijn",
                c.measured_rate,
                c.predicted_rate,
                Tolerance::Relative(tol),
            )
        })
        .collect();
    let fields = vec![
        FieldData::Line {
            name: "entropy".into(),
            x: report.checkpoints.iter().map(|c| c.time).collect(),
            values: report.checkpoints.iter().map(|c| c.entropy).collect(),
        },
        density_line("final-density", &report.final_distribution),
    ];
    Ok(Outcome { checks, fields })
}

const WIGNER_EXPORT_SIDE: usize = 128;

fn wigner(ctx: &Context) -> Result<Outcome> {
    let grid = ctx.grid()?;
    let states = ctx.whole("states", 1, 10_000)?;
    let mut sampler = StateSampler::new(ctx.seed());
    let mut checks = Vec::new();
    let mut fields = Vec::new();
    for k in 0..states {
        let s = sampler.smooth_state(&grid, ctx.hbar)?;
        let e = wigner_equivalence(&s)?;
        let label = format!("state {k}");
        let tol = Tolerance::Absolute(1e-6);
        checks.push(tagged(&label, RelationCheck::at_most("slice-averaged vs phase-gradient momentum", "wigner-equivalence", e.field_deviation, 0.0, tol)));
        checks.push(tagged(&label, RelationCheck::at_most("position marginal deviation", "wigner-marginals", e.marginals.position, 0.0, tol)));
        checks.push(tagged(&label, RelationCheck::at_most("momentum marginal deviation", "wigner-marginals", e.marginals.momentum, 0.0, tol)));
        checks.push(tagged(&label, RelationCheck::equal("2 pi hbar times integral of W^2", "wigner-purity", e.purity, 1.0, tol)));
        if k == 0 {
            let w = wigner_function(&s);
            let num = Numerics::spectral().with_support_floor(EQUIVALENCE_SUPPORT_FLOOR);
            fields.push(field_line("classical-momentum", &classical_momentum_field(&s, &num)));
            fields.push(field_line("wigner-classical-momentum", &wigner_classical_momentum(&w, &num)));
            let stride = grid.len().div_ceil(WIGNER_EXPORT_SIDE);
            let (xs, ps) = (w.x_grid(), w.p_grid());
            let rows: Vec<usize> = (0..xs.len()).step_by(stride).collect();
            let cols: Vec<usize> = (0..ps.len()).step_by(stride).collect();
            let values = rows.iter().flat_map(|&a| cols.iter().map(move |&b| (a, b))).map(|(a, b)| w.at(a, b)).collect();
            fields.push(FieldData::Plane {
                name: "wigner".into(),
                x: rows.iter().map(|&a| xs.x(a)).collect(),
                p: cols.iter().map(|&b| ps.x(b)).collect(),
                values,
            });
        }
    }
    Ok(Outcome { checks, fields })
}

fn mixed_state(ctx: &Context) -> Result<Outcome> {
    let grid = ctx.grid()?;
    let mixtures = ctx.whole("mixtures", 0, 1000)?;
    let pure = ctx.whole("pure", 0, 1000)?;
    let num = Numerics::spectral();
    let mut sampler = StateSampler::new(ctx.seed());
    let mut checks = Vec::new();
    let mut fields = Vec::new();
    for k in 0..mixtures {
        let r = sampler.rank_two_mixture(&grid, ctx.hbar)?;
        let m = mixed_ur_check(&r, &num);
        let label = format!("mixture {k}");
        checks.push(tagged(&label, m.inequality));
        checks.push(tagged(&label, m.identity));
        checks.push(tagged(&label, m.bound));
        if k == 0 {
            fields.push(field_line("classical-momentum", &classical_momentum_field_mixed(&r, &num)));
        }
    }
    for k in 0..pure {
        let s = build_state(&sampler.gaussian_superposition(2), &grid, ctx.hbar)?;
        let m = mixed_ur_check(&s.to_density(), &num);
        let label = format!("pure {k}");
        let saturation = RelationCheck::equal(
            "fisher-length x nonclassical momentum spread",
            "mixed-state-saturation",
            m.inequality.lhs,
            m.inequality.rhs,
            Tolerance::Relative(GRID_EQUALITY_TOL),
        )
        .mark_divergent(m.inequality.status == crate::relations::Status::Divergent);
        checks.push(tagged(&label, saturation));
        checks.push(tagged(&label, m.identity));
    }
    Ok(Outcome { checks, fields })
}

fn divergence(ctx: &Context) -> Result<Outcome> {
    let (lower, upper) = (ctx.get("lower"), ctx.get("upper"));
    if !(upper > lower) {
        return Err(Error::InvalidParameter(format!("box needs lower < upper, got [{lower}, {upper}]")));
    }
    let margin = ctx.positive("margin")?;
    let refinements = ctx.whole("refinements", 1, 6)?;
    let num = Numerics::default();
    let mut checks = Vec::new();
    let mut sizes = Vec::new();
    let mut spreads = Vec::new();
    for r in 0..=refinements {
        let n = ctx.grid_n() << r;
        let grid = Grid1D::covering(lower - margin, upper + margin, n)?;
        let s = build_state(&StateSpec::Box { lower, upper }, &grid, ctx.hbar)?;
        let label = format!("n={n}");
        let rel = exact_ur_position(&s, &num);
        checks.push(tagged(
            &label,
            RelationCheck::equal(
                "box fisher divergence flagged",
                "divergence-detection",
                if rel.fisher.divergent { 1.0 } else { 0.0 },
                1.0,
                Tolerance::Absolute(0.5),
            ),
        ));
        checks.push(tagged(&label, rel.exact));
        let control = build_state(&StateSpec::gaussian(0.5 * (lower + upper), (upper - lower) / 6.0), &grid, ctx.hbar)?;
        checks.push(tagged(
            &label,
            RelationCheck::equal(
                "smooth control not flagged",
                "divergence-detection",
                if fisher_length(&control.density(), &num).divergent { 1.0 } else { 0.0 },
                0.0,
                Tolerance::Absolute(0.5),
            ),
        ));
        sizes.push(n as f64);
        spreads.push(rel.momentum.var_obs.sqrt());
    }
    for w in 0..refinements {
        checks.push(RelationCheck::at_least(
            format!("momentum spread growth from n={} to n={}", sizes[w], sizes[w + 1]),
            "divergence-detection",
            spreads[w + 1] / spreads[w],
            1.0,
            Tolerance::Absolute(0.0),
        ));
    }
    Ok(Outcome { checks, fields: vec![FieldData::Line { name: "momentum-spread".into(), x: sizes, values: spreads }] })
}

//! Adaptive multi-objective particle swarm over the unit box.
//!
//! gbest-model swarm with a bounded Pareto repository: leaders come from
//! the sparsest archive region (maximum crowding distance), boundary hits
//! reflect velocity, and a shrinking-range mutation keeps late-run moves
//! local. `PlainPso` mode strips mutation and the archive and scalarizes
//! the objectives equally, serving as the classic baseline.
//!
//! # Determinism
//!
//! Every random draw comes from one seeded [`UnitRng`] stream consumed on
//! the coordinating thread in a fixed order: first `np * dim` position
//! initializers; then per generation, in `Apso` mode, one leader tie-break
//! draw followed per particle (in index order) by `dim` velocity draws for
//! the pbest term, `dim` for the gbest term, one mutation trigger, one
//! mutation dimension, one mutation value and one pbest coin — drawn
//! whether or not they end up used. `PlainPso` consumes only the two
//! velocity vectors per particle. Batch fitness evaluation may run on any
//! number of workers without affecting results.

pub mod archive;

pub use archive::{crowding_distances, dominates, ArchiveMember, ParetoArchive};

use crate::rng::UnitRng;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmMode {
    Apso,
    PlainPso,
}

/// Inertia handling: the experiments fix W; the decaying schedule
/// `W(g) = 0.9 - 0.5 * g / gmax` is available as an option.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InertiaSchedule {
    Fixed,
    LinearDecay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    /// particle count
    pub np: usize,
    /// objective count
    pub nf: usize,
    /// decision-vector dimension
    pub dim: usize,
    /// inertia weight
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    /// generations after the initial evaluation
    pub gmax: usize,
    /// archive capacity
    pub mem: usize,
    /// mutation probability
    pub pm: f64,
    pub seed: u64,
    pub mode: SwarmMode,
    pub inertia: InertiaSchedule,
}

impl SwarmConfig {
    /// The reference experiment settings: NP=100, NF=6, W=0.5, C1=C2=1,
    /// Gmax=100, MEM=100, Pm=0.05.
    pub fn paper_defaults(dim: usize) -> Self {
        SwarmConfig {
            np: 100,
            nf: 6,
            dim,
            w: 0.5,
            c1: 1.0,
            c2: 1.0,
            gmax: 100,
            mem: 100,
            pm: 0.05,
            seed: 0,
            mode: SwarmMode::Apso,
            inertia: InertiaSchedule::Fixed,
        }
    }

    pub fn validate(&self) -> Result<(), MopsoError> {
        if self.np < 2 {
            return Err(MopsoError::InvalidConfig("np must be >= 2"));
        }
        if self.nf < 1 {
            return Err(MopsoError::InvalidConfig("nf must be >= 1"));
        }
        if self.dim < 1 {
            return Err(MopsoError::InvalidConfig("dim must be >= 1"));
        }
        if self.gmax < 1 {
            return Err(MopsoError::InvalidConfig("gmax must be >= 1"));
        }
        if self.mem < 1 {
            return Err(MopsoError::InvalidConfig("mem must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.pm) {
            return Err(MopsoError::InvalidConfig("pm must lie in [0, 1]"));
        }
        if !(self.w > 0.0) || !self.w.is_finite() {
            return Err(MopsoError::InvalidConfig("w must be positive"));
        }
        Ok(())
    }

    fn inertia_at(&self, generation: usize) -> f64 {
        match self.inertia {
            InertiaSchedule::Fixed => self.w,
            InertiaSchedule::LinearDecay => 0.9 - 0.5 * generation as f64 / self.gmax as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MopsoError {
    InvalidConfig(&'static str),
    /// objective returned a fitness vector of the wrong length
    ObjectiveArity { expected: usize, got: usize },
    EmptyArchive,
}

impl fmt::Display for MopsoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MopsoError::InvalidConfig(what) => write!(f, "invalid swarm config: {what}"),
            MopsoError::ObjectiveArity { expected, got } => {
                write!(f, "objective returned {got} values, expected {expected}")
            }
            MopsoError::EmptyArchive => write!(f, "archive is empty"),
        }
    }
}

impl core::error::Error for MopsoError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: Vec<f64>,
    pub fitness: Vec<f64>,
}

/// Vector objective over the unit box. `evaluate_batch` must return one
/// fitness per position, in order; implementations may parallelize it.
pub trait Objective: Sync {
    fn evaluate(&self, position: &[f64]) -> Vec<f64>;

    fn evaluate_batch(&self, positions: &[Vec<f64>]) -> Vec<Vec<f64>> {
        positions.iter().map(|p| self.evaluate(p)).collect()
    }
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> Objective for F {
    fn evaluate(&self, position: &[f64]) -> Vec<f64> {
        self(position)
    }
}

/// `W*vel + C1*rand1*(pbest - pop) + C2*rand2*(gbest - pop)`, rand vectors
/// drawn per dimension (pbest term first, then gbest term).
pub fn velocity_update(
    p: &Particle,
    gbest: &[f64],
    cfg: &SwarmConfig,
    rng: &mut UnitRng,
) -> Vec<f64> {
    let r1: Vec<f64> = (0..cfg.dim).map(|_| rng.next_unit()).collect();
    let r2: Vec<f64> = (0..cfg.dim).map(|_| rng.next_unit()).collect();
    velocity_update_with(p, gbest, cfg.w, cfg.c1, cfg.c2, &r1, &r2)
}

fn velocity_update_with(
    p: &Particle,
    gbest: &[f64],
    w: f64,
    c1: f64,
    c2: f64,
    r1: &[f64],
    r2: &[f64],
) -> Vec<f64> {
    (0..p.position.len())
        .map(|j| {
            w * p.velocity[j]
                + c1 * r1[j] * (p.pbest_position[j] - p.position[j])
                + c2 * r2[j] * (gbest[j] - p.position[j])
        })
        .collect()
}

/// `pop + vel`, element-wise; bounds handled separately.
pub fn position_update(position: &[f64], velocity: &[f64]) -> Vec<f64> {
    position
        .iter()
        .zip(velocity.iter())
        .map(|(x, v)| x + v)
        .collect()
}

/// Clamp each out-of-box coordinate to the violated bound of `[0, 1]` and
/// flip the sign of that velocity component.
pub fn enforce_bounds(position: &mut [f64], velocity: &mut [f64]) {
    for (x, v) in position.iter_mut().zip(velocity.iter_mut()) {
        if *x > 1.0 {
            *x = 1.0;
            *v = -*v;
        } else if *x < 0.0 {
            *x = 0.0;
            *v = -*v;
        }
    }
}

/// With probability `pm`, resample one uniformly chosen coordinate inside
/// `[x - r, x + r] ∩ [0, 1]` where `r = (1 - g/gmax)^1.5`; the shrinking
/// range is what makes the mutation adaptive. Consumes three draws
/// regardless of the trigger outcome.
pub fn mutate(
    position: &[f64],
    generation: usize,
    cfg: &SwarmConfig,
    rng: &mut UnitRng,
) -> Vec<f64> {
    let trigger = rng.next_unit();
    let dim_draw = rng.next_unit();
    let value_draw = rng.next_unit();
    mutate_with(
        position,
        generation,
        cfg.gmax,
        cfg.pm,
        trigger,
        dim_draw,
        value_draw,
    )
}

fn mutate_with(
    position: &[f64],
    generation: usize,
    gmax: usize,
    pm: f64,
    trigger: f64,
    dim_draw: f64,
    value_draw: f64,
) -> Vec<f64> {
    let mut out = position.to_vec();
    if trigger >= pm {
        return out;
    }
    let d = position.len();
    let j = ((dim_draw * d as f64) as usize).min(d - 1);
    let r = crate::math::powf(1.0 - generation as f64 / gmax as f64, 1.5);
    let lo = (position[j] - r).max(0.0);
    let hi = (position[j] + r).min(1.0);
    out[j] = lo + value_draw * (hi - lo);
    out
}

/// Position of a maximum-crowding-distance member; ties (including several
/// infinite distances) break uniformly at random from one draw.
pub fn select_leader(archive: &ParetoArchive, rng: &mut UnitRng) -> Result<Vec<f64>, MopsoError> {
    let draw = rng.next_unit();
    select_leader_with(archive, draw)
}

fn select_leader_with(archive: &ParetoArchive, draw: f64) -> Result<Vec<f64>, MopsoError> {
    if archive.is_empty() {
        return Err(MopsoError::EmptyArchive);
    }
    let dist = archive.crowding();
    let best = dist.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = dist
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == best)
        .map(|(i, _)| i)
        .collect();
    let pick = ties[((draw * ties.len() as f64) as usize).min(ties.len() - 1)];
    Ok(archive.members()[pick].position.clone())
}

/// Dominance-based personal-best update; mutually non-dominated outcomes
/// replace with probability one half. Consumes the coin draw always.
pub fn update_pbest(p: &mut Particle, rng: &mut UnitRng) {
    let coin = rng.next_unit();
    update_pbest_with(p, coin);
}

fn update_pbest_with(p: &mut Particle, coin: f64) {
    let cur_ok = is_valid(&p.fitness);
    let pb_ok = is_valid(&p.pbest_fitness);
    let replace = match (cur_ok, pb_ok) {
        (false, _) => false,
        (true, false) => true,
        (true, true) => {
            if dominates(&p.fitness, &p.pbest_fitness) {
                true
            } else if dominates(&p.pbest_fitness, &p.fitness) {
                false
            } else {
                coin < 0.5
            }
        }
    };
    if replace {
        p.pbest_position = p.position.clone();
        p.pbest_fitness = p.fitness.clone();
    }
}

fn is_valid(fitness: &[f64]) -> bool {
    !fitness.is_empty() && fitness.iter().all(|v| v.is_finite())
}

fn scalarize(fitness: &[f64]) -> f64 {
    if is_valid(fitness) {
        fitness.iter().sum()
    } else {
        f64::INFINITY
    }
}

/// Everything a finished run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub archive: ParetoArchive,
    /// total objective evaluations (`np * (gmax + 1)`)
    pub evaluations: u64,
    /// evaluations that produced a non-finite fitness and were quarantined
    pub invalid_evaluations: u64,
}

struct DrawBundle {
    r1: Vec<f64>,
    r2: Vec<f64>,
    trigger: f64,
    dim_draw: f64,
    value_draw: f64,
    coin: f64,
}

/// Run the swarm to completion. See the module docs for the exact draw
/// order underpinning seed determinism.
pub fn run<O: Objective + ?Sized>(
    objective: &O,
    cfg: &SwarmConfig,
) -> Result<RunOutcome, MopsoError> {
    cfg.validate()?;
    let mut rng = UnitRng::from_seed(cfg.seed);
    let mut invalid = 0u64;
    let mut evaluations = 0u64;

    let mut particles: Vec<Particle> = (0..cfg.np)
        .map(|_| {
            let position: Vec<f64> = (0..cfg.dim).map(|_| rng.next_unit()).collect();
            Particle {
                velocity: vec![0.0; cfg.dim],
                pbest_position: position.clone(),
                pbest_fitness: Vec::new(),
                fitness: Vec::new(),
                position,
            }
        })
        .collect();

    let eval_all = |particles: &mut [Particle],
                    evaluations: &mut u64,
                    invalid: &mut u64|
     -> Result<(), MopsoError> {
        let positions: Vec<Vec<f64>> = particles.iter().map(|p| p.position.clone()).collect();
        let all = objective.evaluate_batch(&positions);
        if all.len() != particles.len() {
            return Err(MopsoError::ObjectiveArity {
                expected: particles.len(),
                got: all.len(),
            });
        }
        for (p, f) in particles.iter_mut().zip(all.into_iter()) {
            if f.len() != cfg.nf {
                return Err(MopsoError::ObjectiveArity {
                    expected: cfg.nf,
                    got: f.len(),
                });
            }
            *evaluations += 1;
            if !is_valid(&f) {
                *invalid += 1;
            }
            p.fitness = f;
        }
        Ok(())
    };

    eval_all(&mut particles, &mut evaluations, &mut invalid)?;
    for p in &mut particles {
        p.pbest_fitness = p.fitness.clone();
    }

    let mut archive = ParetoArchive::new(cfg.mem);
    let mut gbest: Option<(f64, Vec<f64>, Vec<f64>)> = None; // scalar, position, fitness
    match cfg.mode {
        SwarmMode::Apso => {
            for p in &particles {
                if is_valid(&p.fitness) {
                    archive.insert(p.position.clone(), p.fitness.clone());
                }
            }
        }
        SwarmMode::PlainPso => {
            update_gbest(&mut gbest, &particles);
        }
    }

    for g in 1..=cfg.gmax {
        let w_g = cfg.inertia_at(g);
        let leader = match cfg.mode {
            SwarmMode::Apso => {
                let draw = rng.next_unit();
                select_leader_with(&archive, draw).ok()
            }
            SwarmMode::PlainPso => gbest.as_ref().map(|(_, pos, _)| pos.clone()),
        };

        let bundles: Vec<DrawBundle> = (0..cfg.np)
            .map(|_| {
                let r1: Vec<f64> = (0..cfg.dim).map(|_| rng.next_unit()).collect();
                let r2: Vec<f64> = (0..cfg.dim).map(|_| rng.next_unit()).collect();
                match cfg.mode {
                    SwarmMode::Apso => DrawBundle {
                        r1,
                        r2,
                        trigger: rng.next_unit(),
                        dim_draw: rng.next_unit(),
                        value_draw: rng.next_unit(),
                        coin: rng.next_unit(),
                    },
                    SwarmMode::PlainPso => DrawBundle {
                        r1,
                        r2,
                        trigger: 1.0,
                        dim_draw: 0.0,
                        value_draw: 0.0,
                        coin: 1.0,
                    },
                }
            })
            .collect();

        for (p, b) in particles.iter_mut().zip(bundles.iter()) {
            // a particle leads itself while the archive has nothing to offer
            let gb: &[f64] = leader.as_deref().unwrap_or(&p.pbest_position);
            p.velocity = velocity_update_with(p, gb, w_g, cfg.c1, cfg.c2, &b.r1, &b.r2);
            p.position = position_update(&p.position, &p.velocity);
            enforce_bounds(&mut p.position, &mut p.velocity);
            if cfg.mode == SwarmMode::Apso {
                p.position = mutate_with(
                    &p.position,
                    g,
                    cfg.gmax,
                    cfg.pm,
                    b.trigger,
                    b.dim_draw,
                    b.value_draw,
                );
            }
        }

        eval_all(&mut particles, &mut evaluations, &mut invalid)?;

        match cfg.mode {
            SwarmMode::Apso => {
                for (p, b) in particles.iter_mut().zip(bundles.iter()) {
                    if is_valid(&p.fitness) {
                        archive.insert(p.position.clone(), p.fitness.clone());
                    }
                    update_pbest_with(p, b.coin);
                }
            }
            SwarmMode::PlainPso => {
                for p in &mut particles {
                    if scalarize(&p.fitness) < scalarize(&p.pbest_fitness) {
                        p.pbest_position = p.position.clone();
                        p.pbest_fitness = p.fitness.clone();
                    }
                }
                update_gbest(&mut gbest, &particles);
            }
        }
    }

    if cfg.mode == SwarmMode::PlainPso {
        archive = ParetoArchive::new(cfg.mem);
        if let Some((_, pos, fit)) = gbest {
            archive.insert(pos, fit);
        }
    }

    Ok(RunOutcome {
        archive,
        evaluations,
        invalid_evaluations: invalid,
    })
}

fn update_gbest(gbest: &mut Option<(f64, Vec<f64>, Vec<f64>)>, particles: &[Particle]) {
    for p in particles {
        let s = scalarize(&p.pbest_fitness);
        if s.is_finite() && gbest.as_ref().map_or(true, |(best, _, _)| s < *best) {
            *gbest = Some((s, p.pbest_position.clone(), p.pbest_fitness.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn particle(position: Vec<f64>, velocity: Vec<f64>, pbest: Vec<f64>) -> Particle {
        Particle {
            position,
            velocity,
            pbest_position: pbest,
            pbest_fitness: vec![0.0],
            fitness: vec![0.0],
        }
    }

    #[test]
    fn velocity_update_pinned_arithmetic() {
        // W=0.5, vel=0.2, pbest-pop=0.1, gbest-pop=0.3, rand=0.5 -> 0.3
        let p = particle(vec![0.4], vec![0.2], vec![0.5]);
        let v = velocity_update_with(&p, &[0.7], 0.5, 1.0, 1.0, &[0.5], &[0.5]);
        assert!((v[0] - 0.3).abs() < 1e-15);

        // fixed point: everything coincides, vel zero
        let p = particle(vec![0.4], vec![0.0], vec![0.4]);
        let v = velocity_update_with(&p, &[0.4], 0.5, 1.0, 1.0, &[0.3], &[0.9]);
        assert_eq!(v[0], 0.0);

        // zero rands leave only inertia
        let p = particle(vec![0.1], vec![0.6], vec![0.9]);
        let v = velocity_update_with(&p, &[0.8], 0.5, 1.0, 1.0, &[0.0], &[0.0]);
        assert!((v[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn position_update_cases() {
        assert_eq!(position_update(&[0.4], &[0.2]), vec![0.6000000000000001]);
        assert_eq!(position_update(&[0.7, 0.2], &[0.0, 0.0]), vec![0.7, 0.2]);
        let p = position_update(&[0.9], &[0.3]);
        assert!((p[0] - 1.2).abs() < 1e-15); // before boundary handling
    }

    #[test]
    fn bounds_reflect_velocity() {
        let mut pos = vec![1.2, -0.1, 0.5];
        let mut vel = vec![0.3, -0.2, 7.0];
        enforce_bounds(&mut pos, &mut vel);
        assert_eq!(pos, vec![1.0, 0.0, 0.5]);
        assert_eq!(vel, vec![-0.3, 0.2, 7.0]);
    }

    #[test]
    fn mutate_respects_probability_and_schedule() {
        // pm = 0: never mutates
        let out = mutate_with(&[0.5, 0.5], 0, 10, 0.0, 0.0, 0.7, 0.2);
        assert_eq!(out, vec![0.5, 0.5]);

        // generation == gmax collapses the range to zero
        let out = mutate_with(&[0.3, 0.8], 10, 10, 1.0, 0.0, 0.9, 0.1);
        assert_eq!(out, vec![0.3, 0.8]);

        // full trigger at generation 0 resamples exactly one dimension
        let out = mutate_with(&[0.5, 0.5, 0.5], 0, 10, 1.0, 0.0, 0.5, 0.25);
        let changed: Vec<usize> = (0..3).filter(|&j| out[j] != 0.5).collect();
        assert_eq!(changed, vec![1]); // dim_draw 0.5 * 3 -> index 1
        assert!((0.0..=1.0).contains(&out[1]));
    }

    #[test]
    fn mutate_changed_dimension_is_uniform() {
        let mut rng = UnitRng::from_seed(123);
        let cfg = SwarmConfig {
            pm: 1.0,
            dim: 5,
            ..SwarmConfig::paper_defaults(5)
        };
        let pos = vec![0.5; 5];
        let mut counts = [0usize; 5];
        for _ in 0..10_000 {
            let out = mutate(&pos, 0, &cfg, &mut rng);
            for j in 0..5 {
                if out[j] != 0.5 {
                    counts[j] += 1;
                }
            }
        }
        // ~2000 per dimension; 5 sigma is about 200
        for &c in &counts {
            assert!((1780..=2220).contains(&c), "counts={counts:?}");
        }
    }

    #[test]
    fn leader_prefers_sparse_members() {
        let mut arch = ParetoArchive::new(10);
        arch.insert(vec![0.0], vec![0.0, 2.0]);
        arch.insert(vec![0.5], vec![1.0, 1.0]);
        arch.insert(vec![1.0], vec![2.0, 0.0]);
        let mut rng = UnitRng::from_seed(5);
        for _ in 0..200 {
            let leader = select_leader(&arch, &mut rng).unwrap();
            assert!(leader == vec![0.0] || leader == vec![1.0]); // never the middle
        }
    }

    #[test]
    fn leader_single_member_and_empty() {
        let mut arch = ParetoArchive::new(4);
        arch.insert(vec![0.3], vec![1.0]);
        let mut rng = UnitRng::from_seed(6);
        assert_eq!(select_leader(&arch, &mut rng).unwrap(), vec![0.3]);
        let empty = ParetoArchive::new(4);
        assert!(matches!(
            select_leader(&empty, &mut rng),
            Err(MopsoError::EmptyArchive)
        ));
    }

    #[test]
    fn leader_tie_break_is_uniform() {
        let mut arch = ParetoArchive::new(10);
        arch.insert(vec![0.0], vec![0.0, 1.0]);
        arch.insert(vec![1.0], vec![1.0, 0.0]);
        let mut rng = UnitRng::from_seed(7);
        let mut first = 0usize;
        for _ in 0..10_000 {
            if select_leader(&arch, &mut rng).unwrap() == vec![0.0] {
                first += 1;
            }
        }
        // 50% +- 2%
        assert!((4800..=5200).contains(&first), "first={first}");
    }

    #[test]
    fn pbest_dominance_rules() {
        let mut p = particle(vec![0.1], vec![0.0], vec![0.9]);
        p.pbest_fitness = vec![2.0, 2.0];
        p.fitness = vec![1.0, 1.0];
        update_pbest_with(&mut p, 0.99);
        assert_eq!(p.pbest_position, vec![0.1]); // current dominated old

        let mut p = particle(vec![0.1], vec![0.0], vec![0.9]);
        p.pbest_fitness = vec![1.0, 1.0];
        p.fitness = vec![2.0, 2.0];
        update_pbest_with(&mut p, 0.0);
        assert_eq!(p.pbest_position, vec![0.9]); // old dominates, coin ignored
    }

    #[test]
    fn pbest_incomparable_flips_fair_coin() {
        let mut rng = UnitRng::from_seed(8);
        let mut replaced = 0usize;
        for _ in 0..10_000 {
            let mut p = particle(vec![0.1], vec![0.0], vec![0.9]);
            p.pbest_fitness = vec![0.0, 1.0];
            p.fitness = vec![1.0, 0.0];
            update_pbest(&mut p, &mut rng);
            if p.pbest_position == vec![0.1] {
                replaced += 1;
            }
        }
        assert!((4800..=5200).contains(&replaced), "replaced={replaced}");
    }

    #[test]
    fn pbest_never_accepts_non_finite() {
        let mut p = particle(vec![0.1], vec![0.0], vec![0.9]);
        p.pbest_fitness = vec![1.0, 1.0];
        p.fitness = vec![f64::NAN, 0.0];
        update_pbest_with(&mut p, 0.0);
        assert_eq!(p.pbest_position, vec![0.9]);

        // but a finite fitness replaces a non-finite pbest
        p.fitness = vec![5.0, 5.0];
        p.pbest_fitness = vec![f64::INFINITY, 0.0];
        update_pbest_with(&mut p, 0.99);
        assert_eq!(p.pbest_position, vec![0.1]);
    }

    #[test]
    fn run_converges_on_1d_square() {
        let objective = |x: &[f64]| vec![x[0] * x[0]];
        let cfg = SwarmConfig {
            np: 20,
            nf: 1,
            gmax: 50,
            ..SwarmConfig::paper_defaults(1)
        };
        let out = run(&objective, &cfg).unwrap();
        let best = out
            .archive
            .members()
            .iter()
            .map(|m| m.position[0].abs())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 0.05, "best |x| = {best}");
        assert_eq!(out.evaluations, 20 * 51);
    }

    #[test]
    fn run_constant_objective_fills_archive_with_equals() {
        let objective = |_: &[f64]| vec![1.0, 1.0];
        let cfg = SwarmConfig {
            np: 10,
            nf: 2,
            gmax: 5,
            mem: 100,
            ..SwarmConfig::paper_defaults(3)
        };
        let out = run(&objective, &cfg).unwrap();
        assert!(out.archive.len() > 1); // equal fitness is not dominance
        for m in out.archive.members() {
            assert_eq!(m.fitness, vec![1.0, 1.0]);
        }
    }

    #[test]
    fn run_is_seed_deterministic() {
        let objective = |x: &[f64]| vec![x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)];
        let cfg = SwarmConfig {
            np: 12,
            nf: 2,
            gmax: 20,
            seed: 99,
            ..SwarmConfig::paper_defaults(1)
        };
        let a = run(&objective, &cfg).unwrap();
        let b = run(&objective, &cfg).unwrap();
        assert_eq!(a, b);
        let c = run(
            &objective,
            &SwarmConfig {
                seed: 100,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn run_quarantines_non_finite_fitness() {
        // NaN on a stripe of the box; those positions must never be archived
        let objective = |x: &[f64]| {
            if x[0] > 0.5 {
                vec![f64::NAN, 1.0]
            } else {
                vec![x[0], 1.0 - x[0]]
            }
        };
        let cfg = SwarmConfig {
            np: 16,
            nf: 2,
            gmax: 15,
            seed: 3,
            ..SwarmConfig::paper_defaults(1)
        };
        let out = run(&objective, &cfg).unwrap();
        assert!(out.invalid_evaluations > 0);
        for m in out.archive.members() {
            assert!(m.fitness.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn plain_pso_returns_single_scalarized_best() {
        let objective = |x: &[f64]| vec![x[0] * x[0], x[1] * x[1]];
        let cfg = SwarmConfig {
            np: 20,
            nf: 2,
            gmax: 40,
            mode: SwarmMode::PlainPso,
            seed: 11,
            ..SwarmConfig::paper_defaults(2)
        };
        let out = run(&objective, &cfg).unwrap();
        assert_eq!(out.archive.len(), 1);
        let m = &out.archive.members()[0];
        assert!(m.fitness[0] + m.fitness[1] < 0.05);
    }

    #[test]
    fn positions_stay_in_bounds_and_archive_stays_clean() {
        // tracked via the archive and a wrapped objective that checks inputs
        let objective = |x: &[f64]| {
            for v in x {
                assert!((0.0..=1.0).contains(v), "position escaped bounds: {v}");
            }
            vec![x[0], 1.0 - x[0]]
        };
        let cfg = SwarmConfig {
            np: 25,
            nf: 2,
            gmax: 60,
            seed: 17,
            mem: 10,
            ..SwarmConfig::paper_defaults(4)
        };
        let out = run(&objective, &cfg).unwrap();
        assert!(out.archive.len() <= 10);
        let members = out.archive.members();
        for (i, a) in members.iter().enumerate() {
            for (j, b) in members.iter().enumerate() {
                if i != j {
                    assert!(!dominates(&a.fitness, &b.fitness));
                }
            }
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad = SwarmConfig {
            np: 1,
            ..SwarmConfig::paper_defaults(2)
        };
        assert!(matches!(
            run(&|_: &[f64]| vec![0.0; 6], &bad),
            Err(MopsoError::InvalidConfig(_))
        ));
        let bad = SwarmConfig {
            pm: 1.5,
            ..SwarmConfig::paper_defaults(2)
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn objective_arity_enforced() {
        let objective = |_: &[f64]| vec![1.0, 2.0, 3.0];
        let cfg = SwarmConfig {
            np: 4,
            nf: 2,
            gmax: 2,
            ..SwarmConfig::paper_defaults(2)
        };
        assert!(matches!(
            run(&objective, &cfg),
            Err(MopsoError::ObjectiveArity { expected: 2, got: 3 })
        ));
    }
}

//! End-to-end fusion: decompose both sources once, search the fusion
//! weights with the swarm against the six-objective fitness, pick one
//! archive member, reconstruct and report.

use crate::dtcwt::{self, DtcwtError, Pyramid};
use crate::fusion::{self, FusionError, FusionWeights};
use crate::image::{Extent, Image};
use crate::metrics::{self, MetricsError, MetricsReport};
use crate::mopso::{self, MopsoError, Objective, ParetoArchive, SwarmConfig};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// How one solution is extracted from the final Pareto archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// minimize the sum of min-max normalized objectives (default)
    Compromise,
    /// maximize fused-image entropy
    MaxEntropy,
    /// a fixed archive index
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionJob {
    pub source_a: Image,
    pub source_b: Image,
    pub levels: usize,
    pub swarm: SwarmConfig,
    pub selection: Selection,
    /// include every archive member (weights + fitness) in the result
    pub dump_archive: bool,
}

impl FusionJob {
    /// Reference-parameter job over two sources at three levels.
    pub fn new(source_a: Image, source_b: Image) -> Self {
        let levels = 3;
        FusionJob {
            source_a,
            source_b,
            levels,
            swarm: SwarmConfig::paper_defaults(1 + 6 * levels),
            selection: Selection::Compromise,
            dump_archive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub fused: Image,
    pub weights: FusionWeights,
    pub report: MetricsReport,
    pub archive_size: usize,
    pub archive_dump: Option<Vec<(Vec<f64>, Vec<f64>)>>,
    pub warnings: Vec<String>,
    pub evaluations: u64,
    pub invalid_evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PipelineError {
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    SelectionOutOfRange {
        index: usize,
        archive: usize,
    },
    EmptyArchive,
    Transform(DtcwtError),
    Fusion(FusionError),
    Metrics(MetricsError),
    Swarm(MopsoError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::DimensionMismatch { a, b } => write!(
                f,
                "sources differ in size: {}x{} vs {}x{}",
                a.0, a.1, b.0, b.1
            ),
            PipelineError::SelectionOutOfRange { index, archive } => {
                write!(f, "selection index {index} outside archive of {archive}")
            }
            PipelineError::EmptyArchive => write!(f, "optimizer produced an empty archive"),
            PipelineError::Transform(e) => write!(f, "{e}"),
            PipelineError::Fusion(e) => write!(f, "{e}"),
            PipelineError::Metrics(e) => write!(f, "{e}"),
            PipelineError::Swarm(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<DtcwtError> for PipelineError {
    fn from(e: DtcwtError) -> Self {
        PipelineError::Transform(e)
    }
}

impl From<FusionError> for PipelineError {
    fn from(e: FusionError) -> Self {
        PipelineError::Fusion(e)
    }
}

impl From<MetricsError> for PipelineError {
    fn from(e: MetricsError) -> Self {
        PipelineError::Metrics(e)
    }
}

impl From<MopsoError> for PipelineError {
    fn from(e: MopsoError) -> Self {
        PipelineError::Swarm(e)
    }
}

/// Sources decomposed once; every fitness evaluation reuses these.
struct Prepared {
    pyramid_a: Pyramid,
    pyramid_b: Pyramid,
    extent: Extent,
}

fn prepare(job: &FusionJob) -> Result<Prepared, PipelineError> {
    let a = &job.source_a;
    let b = &job.source_b;
    if a.width() != b.width() || a.height() != b.height() {
        return Err(PipelineError::DimensionMismatch {
            a: (a.width(), a.height()),
            b: (b.width(), b.height()),
        });
    }
    let factor = 1usize << job.levels;
    let (pa, extent) = a.pad_to_multiple(factor);
    let (pb, _) = b.pad_to_multiple(factor);
    Ok(Prepared {
        pyramid_a: dtcwt::forward(&pa, job.levels)?,
        pyramid_b: dtcwt::forward(&pb, job.levels)?,
        extent,
    })
}

/// The swarm's view of the job: decision vector in, fitness vector out.
/// Reconstruction failures surface as non-finite fitness, which the swarm
/// quarantines.
pub struct FusionObjective<'a> {
    prepared: &'a Prepared,
    source_a: &'a Image,
    source_b: &'a Image,
    levels: usize,
}

impl FusionObjective<'_> {
    fn fuse_at(&self, x: &[f64]) -> Result<Image, PipelineError> {
        let w = fusion::weights_from_vector(x, self.levels)?;
        self.fuse_with(&w)
    }

    fn fuse_with(&self, w: &FusionWeights) -> Result<Image, PipelineError> {
        let fused = fusion::fuse_pyramids(&self.prepared.pyramid_a, &self.prepared.pyramid_b, w)?;
        let rec = dtcwt::inverse(&fused)?;
        Ok(rec.crop(self.prepared.extent))
    }
}

impl Objective for FusionObjective<'_> {
    fn evaluate(&self, position: &[f64]) -> Vec<f64> {
        match self.fuse_at(position) {
            Ok(img) => metrics::fitness_vector(&img, self.source_a, self.source_b)
                .unwrap_or_else(|_| alloc::vec![f64::NAN; metrics::NUM_OBJECTIVES]),
            Err(_) => alloc::vec![f64::NAN; metrics::NUM_OBJECTIVES],
        }
    }
}

/// Batch mapping hook: the serial strategy lives here, a thread-pool one
/// in the companion crate. Implementations must preserve order.
pub trait EvalStrategy: Sync {
    fn map_batch(
        &self,
        f: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
        positions: &[Vec<f64>],
    ) -> Vec<Vec<f64>>;
}

/// In-place, single-threaded evaluation.
pub struct Serial;

impl EvalStrategy for Serial {
    fn map_batch(
        &self,
        f: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
        positions: &[Vec<f64>],
    ) -> Vec<Vec<f64>> {
        positions.iter().map(|p| f(p)).collect()
    }
}

struct StrategicObjective<'a> {
    inner: &'a FusionObjective<'a>,
    strategy: &'a dyn EvalStrategy,
}

impl Objective for StrategicObjective<'_> {
    fn evaluate(&self, position: &[f64]) -> Vec<f64> {
        self.inner.evaluate(position)
    }

    fn evaluate_batch(&self, positions: &[Vec<f64>]) -> Vec<Vec<f64>> {
        self.strategy
            .map_batch(&|p: &[f64]| self.inner.evaluate(p), positions)
    }
}

/// Index of the archive member minimizing the sum of min-max normalized
/// objectives; degenerate objectives contribute zero; ties pick the lowest
/// index.
pub fn select_compromise(archive: &ParetoArchive) -> Result<usize, PipelineError> {
    if archive.is_empty() {
        return Err(PipelineError::EmptyArchive);
    }
    let members = archive.members();
    let nf = members[0].fitness.len();
    let mut lo = alloc::vec![f64::INFINITY; nf];
    let mut hi = alloc::vec![f64::NEG_INFINITY; nf];
    for m in members {
        for j in 0..nf {
            lo[j] = lo[j].min(m.fitness[j]);
            hi[j] = hi[j].max(m.fitness[j]);
        }
    }
    let mut best = 0usize;
    let mut best_score = f64::INFINITY;
    for (i, m) in members.iter().enumerate() {
        let mut score = 0.0;
        for j in 0..nf {
            let span = hi[j] - lo[j];
            if span > 0.0 {
                score += (m.fitness[j] - lo[j]) / span;
            }
        }
        if score < best_score {
            best_score = score;
            best = i;
        }
    }
    Ok(best)
}

/// Index of the member with the best (most negative) entropy objective;
/// the fitness vector stores `-entropy` first.
pub fn select_max_entropy(archive: &ParetoArchive) -> Result<usize, PipelineError> {
    if archive.is_empty() {
        return Err(PipelineError::EmptyArchive);
    }
    let mut best = 0usize;
    for (i, m) in archive.members().iter().enumerate() {
        if m.fitness[0] < archive.members()[best].fitness[0] {
            best = i;
        }
    }
    Ok(best)
}

/// Run the full optimize-and-fuse pipeline single-threaded.
pub fn run_fusion(job: &FusionJob) -> Result<FusionResult, PipelineError> {
    run_fusion_with(job, &Serial)
}

/// Same, with fitness batches mapped through `strategy`.
pub fn run_fusion_with(
    job: &FusionJob,
    strategy: &dyn EvalStrategy,
) -> Result<FusionResult, PipelineError> {
    let mut warnings = Vec::new();
    for (name, img) in [("a", &job.source_a), ("b", &job.source_b)] {
        let first = img.pixels()[0];
        if img.pixels().iter().all(|&v| v == first) {
            warnings.push(format!(
                "source {name} is constant; the entropy objective is flat"
            ));
        }
    }
    let mut cfg = job.swarm.clone();
    cfg.dim = 1 + 6 * job.levels;
    cfg.nf = metrics::NUM_OBJECTIVES;

    let prepared = prepare(job)?;
    let objective = FusionObjective {
        prepared: &prepared,
        source_a: &job.source_a,
        source_b: &job.source_b,
        levels: job.levels,
    };
    let strategic = StrategicObjective {
        inner: &objective,
        strategy,
    };
    let outcome = mopso::run(&strategic, &cfg)?;
    let archive = &outcome.archive;
    if archive.is_empty() {
        return Err(PipelineError::EmptyArchive);
    }
    let index = match job.selection {
        Selection::Compromise => select_compromise(archive)?,
        Selection::MaxEntropy => select_max_entropy(archive)?,
        Selection::Index(i) => {
            if i >= archive.len() {
                return Err(PipelineError::SelectionOutOfRange {
                    index: i,
                    archive: archive.len(),
                });
            }
            i
        }
    };
    let weights = fusion::weights_from_vector(&archive.members()[index].position, job.levels)?;
    let fused = objective.fuse_with(&weights)?;
    let report = metrics::report(&fused, &job.source_a, &job.source_b)?;
    let archive_dump = job.dump_archive.then(|| {
        archive
            .members()
            .iter()
            .map(|m| (m.position.clone(), m.fitness.clone()))
            .collect()
    });
    Ok(FusionResult {
        fused,
        weights,
        report,
        archive_size: archive.len(),
        archive_dump,
        warnings,
        evaluations: outcome.evaluations,
        invalid_evaluations: outcome.invalid_evaluations,
    })
}

/// Bypass the optimizer: fuse with caller-supplied weights and report.
pub fn fuse_with_weights(
    source_a: &Image,
    source_b: &Image,
    levels: usize,
    weights: &FusionWeights,
) -> Result<(Image, MetricsReport), PipelineError> {
    let job = FusionJob {
        source_a: source_a.clone(),
        source_b: source_b.clone(),
        levels,
        swarm: SwarmConfig::paper_defaults(1 + 6 * levels),
        selection: Selection::Compromise,
        dump_archive: false,
    };
    let prepared = prepare(&job)?;
    let objective = FusionObjective {
        prepared: &prepared,
        source_a,
        source_b,
        levels,
    };
    let fused = objective.fuse_with(weights)?;
    let report = metrics::report(&fused, source_a, source_b)?;
    Ok((fused, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::weights_from_vector;
    use crate::rng::UnitRng;

    fn noise_image(seed: u64, w: usize, h: usize) -> Image {
        let mut rng = UnitRng::from_seed(seed);
        Image::from_fn(w, h, 8, |_, _| (rng.next_unit() * 255.0) as usize as f64).unwrap()
    }

    fn small_job(a: Image, b: Image, seed: u64) -> FusionJob {
        let mut job = FusionJob::new(a, b);
        job.levels = 2;
        job.swarm = SwarmConfig {
            np: 8,
            gmax: 6,
            seed,
            ..SwarmConfig::paper_defaults(13)
        };
        job
    }

    #[test]
    fn identical_sources_reconstruct_to_source() {
        let img = noise_image(1, 32, 32);
        let job = small_job(img.clone(), img.clone(), 7);
        let result = run_fusion(&job).unwrap();
        assert!(result.fused.rel_l2_distance(&img) < 1e-8);
        assert_eq!(result.evaluations, 8 * 7);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = noise_image(2, 32, 32);
        let b = noise_image(3, 32, 32);
        let r1 = run_fusion(&small_job(a.clone(), b.clone(), 9)).unwrap();
        let r2 = run_fusion(&small_job(a, b, 9)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn report_matches_recomputed_metrics() {
        let a = noise_image(4, 32, 32);
        let b = noise_image(5, 32, 32);
        let job = small_job(a.clone(), b.clone(), 11);
        let result = run_fusion(&job).unwrap();
        let again = crate::metrics::report(&result.fused, &a, &b).unwrap();
        assert_eq!(result.report, again);
    }

    #[test]
    fn odd_sizes_pad_and_crop_back() {
        let a = noise_image(6, 30, 22);
        let b = noise_image(7, 30, 22);
        let job = small_job(a.clone(), b.clone(), 13);
        let result = run_fusion(&job).unwrap();
        assert_eq!(result.fused.width(), 30);
        assert_eq!(result.fused.height(), 22);
        // weights 1.0 everywhere reproduce source a exactly through padding
        let w = weights_from_vector(&alloc::vec![1.0; 13], 2).unwrap();
        let (fused, _) = fuse_with_weights(&a, &b, 2, &w).unwrap();
        assert!(fused.rel_l2_distance(&a) < 1e-8);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = noise_image(8, 32, 32);
        let b = noise_image(9, 64, 32);
        let job = small_job(a, b, 15);
        assert!(matches!(
            run_fusion(&job),
            Err(PipelineError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constant_source_warns_but_runs() {
        let a = Image::from_fn(32, 32, 8, |_, _| 100.0).unwrap();
        let b = noise_image(10, 32, 32);
        let job = small_job(a, b, 17);
        let result = run_fusion(&job).unwrap();
        assert_eq!(result.warnings.len(), 1);
        assert!(result.warnings[0].contains("constant"));
    }

    #[test]
    fn compromise_selection_hand_case() {
        let mut arch = ParetoArchive::new(10);
        arch.insert(alloc::vec![0.1], alloc::vec![0.0, 1.0]);
        arch.insert(alloc::vec![0.2], alloc::vec![1.0, 0.0]);
        arch.insert(alloc::vec![0.3], alloc::vec![0.4, 0.4]);
        assert_eq!(select_compromise(&arch).unwrap(), 2);

        let mut single = ParetoArchive::new(10);
        single.insert(alloc::vec![0.5], alloc::vec![3.0, 3.0]);
        assert_eq!(select_compromise(&single).unwrap(), 0);

        // all equal -> lowest index
        let mut equal = ParetoArchive::new(10);
        equal.insert(alloc::vec![0.1], alloc::vec![1.0, 1.0]);
        equal.insert(alloc::vec![0.2], alloc::vec![1.0, 1.0]);
        assert_eq!(select_compromise(&equal).unwrap(), 0);
    }

    #[test]
    fn index_selection_bounds_checked() {
        let a = noise_image(11, 32, 32);
        let b = noise_image(12, 32, 32);
        let mut job = small_job(a, b, 19);
        job.selection = Selection::Index(10_000);
        assert!(matches!(
            run_fusion(&job),
            Err(PipelineError::SelectionOutOfRange { .. })
        ));
    }

    #[test]
    fn archive_dump_toggles() {
        let a = noise_image(13, 32, 32);
        let b = noise_image(14, 32, 32);
        let mut job = small_job(a, b, 21);
        job.dump_archive = true;
        let result = run_fusion(&job).unwrap();
        let dump = result.archive_dump.unwrap();
        assert_eq!(dump.len(), result.archive_size);
        assert!(dump.iter().all(|(w, f)| w.len() == 13 && f.len() == 6));
    }
}

//! Data-level resampling strategies for imbalanced binary training sets:
//! random over/under-sampling, SMOTE, Borderline-SMOTE, ADASYN, Tomek-link
//! removal, edited nearest neighbors (ENN), and the SMOTE+Tomek / SMOTE+ENN
//! combinations.
//!
//! Every sampler is a pure function from `(X, y, config)` to a
//! [`ResampleResult`]; all randomness flows from the configured seed through
//! one ChaCha stream per call. Stream consumption order is fixed:
//!
//! * random over-sampling: one index draw per duplicate;
//! * random under-sampling: one without-replacement index sample;
//! * SMOTE / Borderline-SMOTE: one shuffle of the base ordering, then per
//!   synthetic a neighbor draw followed by a gap draw;
//! * ADASYN: per minority point in row order, per synthetic a neighbor draw
//!   followed by a gap draw;
//! * Tomek links and ENN consume no randomness.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{class_counts, LabelVector, Matrix};
use crate::error::{Error, Result};
use crate::neighbors::NeighborIndex;
use crate::seeding::rng_from_seed;

/// Resampling strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    None,
    RandomOver,
    RandomUnder,
    Smote,
    BorderlineSmote,
    Adasyn,
    Tomek,
    Enn,
    SmoteTomek,
    SmoteEnn,
}

impl SamplerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplerKind::None => "none",
            SamplerKind::RandomOver => "random_over",
            SamplerKind::RandomUnder => "random_under",
            SamplerKind::Smote => "smote",
            SamplerKind::BorderlineSmote => "borderline_smote",
            SamplerKind::Adasyn => "adasyn",
            SamplerKind::Tomek => "tomek",
            SamplerKind::Enn => "enn",
            SamplerKind::SmoteTomek => "smote_tomek",
            SamplerKind::SmoteEnn => "smote_enn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => SamplerKind::None,
            "random_over" => SamplerKind::RandomOver,
            "random_under" => SamplerKind::RandomUnder,
            "smote" => SamplerKind::Smote,
            "borderline_smote" => SamplerKind::BorderlineSmote,
            "adasyn" => SamplerKind::Adasyn,
            "tomek" => SamplerKind::Tomek,
            "enn" => SamplerKind::Enn,
            "smote_tomek" => SamplerKind::SmoteTomek,
            "smote_enn" => SamplerKind::SmoteEnn,
            other => return Err(Error::Config(format!("unknown sampler kind {other:?}"))),
        })
    }
}

/// Tomek-link treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TomekMode {
    /// Remove only the majority member of each link.
    UndersampleMajority,
    /// Remove both link members (cleaning).
    CleanBoth,
}

/// Full sampler configuration; unused knobs are ignored by simpler kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Interpolation neighborhood for the SMOTE family.
    pub k_neighbors: usize,
    /// Danger-test neighborhood for Borderline-SMOTE.
    pub m_neighbors: usize,
    /// Editing neighborhood for ENN; must be odd.
    pub enn_k: usize,
    /// ADASYN balance level in (0, 1].
    pub beta: f64,
    pub tomek_mode: TomekMode,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            kind: SamplerKind::None,
            k_neighbors: 5,
            m_neighbors: 5,
            enn_k: 3,
            beta: 1.0,
            tomek_mode: TomekMode::UndersampleMajority,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn of_kind(kind: SamplerKind, seed: u64) -> Self {
        SamplerConfig { kind, seed, ..SamplerConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors < 1 {
            return Err(Error::InvalidArgument("k_neighbors must be >= 1".into()));
        }
        if self.m_neighbors < 1 {
            return Err(Error::InvalidArgument("m_neighbors must be >= 1".into()));
        }
        if self.enn_k % 2 == 0 {
            return Err(Error::InvalidArgument("enn_k must be odd".into()));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidArgument("beta must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// Run the configured sampler with its own seed.
    pub fn resample(&self, x: &Matrix, y: &LabelVector) -> Result<ResampleResult> {
        self.resample_seeded(x, y, self.seed)
    }
}

/// Anything that can resample a labeled training set. Cross-validation takes
/// this trait so instrumented implementations can observe exactly which rows
/// reach the sampler.
pub trait Resampler: Sync {
    fn name(&self) -> String;
    fn resample_seeded(&self, x: &Matrix, y: &LabelVector, seed: u64) -> Result<ResampleResult>;
}

impl Resampler for SamplerConfig {
    fn name(&self) -> String {
        self.kind.as_str().to_string()
    }

    fn resample_seeded(&self, x: &Matrix, y: &LabelVector, seed: u64) -> Result<ResampleResult> {
        self.validate()?;
        let cfg = SamplerConfig { seed, ..self.clone() };
        match self.kind {
            SamplerKind::None => Ok(ResampleResult::identity(x, y)),
            SamplerKind::RandomOver => random_oversample(x, y, seed),
            SamplerKind::RandomUnder => random_undersample(x, y, seed),
            SamplerKind::Smote => smote(x, y, &cfg),
            SamplerKind::BorderlineSmote => borderline_smote(x, y, &cfg),
            SamplerKind::Adasyn => adasyn(x, y, &cfg),
            SamplerKind::Tomek => tomek_links(x, y, self.tomek_mode),
            SamplerKind::Enn => enn(x, y, self.enn_k),
            SamplerKind::SmoteTomek => smote_tomek(x, y, &cfg),
            SamplerKind::SmoteEnn => smote_enn(x, y, &cfg),
        }
    }
}

/// How an output row came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum RowProvenance {
    /// Carried over unchanged from input row `source`.
    Original { source: usize },
    /// Exact copy of input row `source`.
    Duplicated { source: usize },
    /// Interpolated between input rows `base` and `neighbor`.
    Synthetic { base: usize, neighbor: usize },
}

/// A resampled training set with full provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampleResult {
    pub x: Matrix,
    pub y: LabelVector,
    /// One tag per output row.
    pub provenance: Vec<RowProvenance>,
    /// Input-row indices removed by cleaning samplers. For the SMOTE
    /// combinations these index the combined (original + synthetic) set.
    pub removed: Vec<usize>,
    pub warnings: Vec<String>,
}

impl ResampleResult {
    fn identity(x: &Matrix, y: &LabelVector) -> Self {
        ResampleResult {
            x: x.clone(),
            y: y.clone(),
            provenance: (0..x.n_rows()).map(|i| RowProvenance::Original { source: i }).collect(),
            removed: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn class_counts(&self) -> (usize, usize) {
        class_counts(&self.y)
    }
}

/// Minority/majority bookkeeping for one labeled set.
struct ClassSplit {
    minority_label: u8,
    minority: Vec<usize>,
    majority: Vec<usize>,
}

fn split_classes(y: &LabelVector) -> Result<ClassSplit> {
    let (pos, neg) = class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }
    let minority_label = if pos <= neg { 1 } else { 0 };
    Ok(ClassSplit {
        minority_label,
        minority: y.indices_of(minority_label),
        majority: y.indices_of(1 - minority_label),
    })
}

fn check_dims(x: &Matrix, y: &LabelVector) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.n_rows(), got: y.len() });
    }
    if x.has_missing() {
        return Err(Error::MissingValue("samplers require complete rows".into()));
    }
    Ok(())
}

/// Duplicate random minority rows (with replacement) until both classes hold
/// the same number of rows. All originals are retained.
pub fn random_oversample(x: &Matrix, y: &LabelVector, seed: u64) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    let deficit = split.majority.len() - split.minority.len();
    let mut rng = rng_from_seed(seed);

    let mut out = ResampleResult::identity(x, y);
    let mut labels: Vec<u8> = y.as_slice().to_vec();
    for _ in 0..deficit {
        let source = split.minority[rng.random_range(0..split.minority.len())];
        out.x.push_row(x.row(source));
        labels.push(split.minority_label);
        out.provenance.push(RowProvenance::Duplicated { source });
    }
    out.y = LabelVector::new(labels)?;
    Ok(out)
}

/// Keep a uniform random majority subset of minority size; minority rows are
/// untouched. Surviving rows keep their original order.
pub fn random_undersample(x: &Matrix, y: &LabelVector, seed: u64) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    let mut rng = rng_from_seed(seed);

    let mut kept = vec![false; x.n_rows()];
    for &i in &split.minority {
        kept[i] = true;
    }
    let picks = rand::seq::index::sample(&mut rng, split.majority.len(), split.minority.len());
    for p in picks.iter() {
        kept[split.majority[p]] = true;
    }

    let kept_rows: Vec<usize> = (0..x.n_rows()).filter(|&i| kept[i]).collect();
    let removed: Vec<usize> = (0..x.n_rows()).filter(|&i| !kept[i]).collect();
    Ok(ResampleResult {
        x: x.select_rows(&kept_rows),
        y: y.select(&kept_rows),
        provenance: kept_rows.iter().map(|&i| RowProvenance::Original { source: i }).collect(),
        removed,
        warnings: Vec::new(),
    })
}

/// Linear interpolation `base + g * (neighbor - base)`.
pub fn interpolate(base: &[f64], neighbor: &[f64], g: f64) -> Vec<f64> {
    base.iter().zip(neighbor).map(|(b, n)| b + g * (n - b)).collect()
}

/// Shared synthesis loop for the SMOTE family.
///
/// `bases` are global row indices of the points allowed to spawn synthetics
/// (shuffled once, then cycled); interpolation targets are each base's k
/// nearest neighbors within the whole minority class.
fn synthesize(
    x: &Matrix,
    minority: &[usize],
    bases: &[usize],
    k_neighbors: usize,
    quota: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<(Vec<Vec<f64>>, Vec<RowProvenance>)> {
    if quota == 0 || bases.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let k_eff = k_neighbors.min(minority.len() - 1);
    if k_eff == 0 {
        return Err(Error::Degenerate("interpolation needs at least two minority rows".into()));
    }

    let minority_points = x.select_rows(minority);
    let index = NeighborIndex::build(&minority_points)?;
    let local_of: std::collections::HashMap<usize, usize> =
        minority.iter().enumerate().map(|(l, &g)| (g, l)).collect();

    let base_locals: Vec<usize> = bases.iter().map(|g| local_of[g]).collect();
    let neighbor_lists = index.kneighbors_of_rows(&base_locals, k_eff, true)?;

    let mut order: Vec<usize> = (0..bases.len()).collect();
    order.shuffle(rng);

    let mut rows = Vec::with_capacity(quota);
    let mut provenance = Vec::with_capacity(quota);
    for visit in 0..quota {
        let b = order[visit % order.len()];
        let base_global = bases[b];
        let picked = neighbor_lists[b][rng.random_range(0..k_eff)];
        let neighbor_global = minority[picked];
        let g: f64 = rng.random();
        rows.push(interpolate(x.row(base_global), x.row(neighbor_global), g));
        provenance.push(RowProvenance::Synthetic { base: base_global, neighbor: neighbor_global });
    }
    Ok((rows, provenance))
}

fn append_synthetics(
    x: &Matrix,
    y: &LabelVector,
    minority_label: u8,
    rows: Vec<Vec<f64>>,
    prov: Vec<RowProvenance>,
    warnings: Vec<String>,
) -> Result<ResampleResult> {
    let mut out = ResampleResult::identity(x, y);
    let mut labels: Vec<u8> = y.as_slice().to_vec();
    for row in &rows {
        out.x.push_row(row);
        labels.push(minority_label);
    }
    out.provenance.extend(prov);
    out.y = LabelVector::new(labels)?;
    out.warnings = warnings;
    Ok(out)
}

/// SMOTE: interpolated synthetic minority rows until exact class balance.
pub fn smote(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    if split.minority.len() < 2 {
        return Err(Error::Degenerate("SMOTE needs at least two minority rows".into()));
    }
    let quota = split.majority.len() - split.minority.len();
    let mut rng = rng_from_seed(cfg.seed);
    let (rows, prov) =
        synthesize(x, &split.minority, &split.minority, cfg.k_neighbors, quota, &mut rng)?;
    append_synthetics(x, y, split.minority_label, rows, prov, Vec::new())
}

/// Neighborhood status of a minority point in Borderline-SMOTE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderlineStatus {
    /// All m full-set neighbors are majority.
    Noise,
    /// At least half but not all neighbors are majority.
    Danger,
    /// Fewer than half the neighbors are majority.
    Safe,
}

/// Classify minority points by the composition of their `m` nearest
/// neighbors in the full set.
pub fn borderline_classify(
    x: &Matrix,
    y: &LabelVector,
    minority: &[usize],
    m_neighbors: usize,
) -> Result<Vec<BorderlineStatus>> {
    let index = NeighborIndex::build(x)?;
    let m_eff = m_neighbors.min(x.n_rows() - 1);
    if m_eff == 0 {
        return Err(Error::Degenerate("danger test needs at least two rows".into()));
    }
    let lists = index.kneighbors_of_rows(minority, m_eff, true)?;
    Ok(minority
        .iter()
        .zip(&lists)
        .map(|(&i, neigh)| {
            let majority_count = neigh.iter().filter(|&&j| y.get(j) != y.get(i)).count();
            if majority_count == m_eff {
                BorderlineStatus::Noise
            } else if 2 * majority_count >= m_eff {
                BorderlineStatus::Danger
            } else {
                BorderlineStatus::Safe
            }
        })
        .collect())
}

/// Borderline-SMOTE (variant 1): only DANGER minority points spawn
/// synthetics, interpolating toward minority neighbors. When no DANGER point
/// exists the input is returned unchanged with a warning.
pub fn borderline_smote(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    if split.minority.len() < 2 {
        return Err(Error::Degenerate("Borderline-SMOTE needs at least two minority rows".into()));
    }
    let status = borderline_classify(x, y, &split.minority, cfg.m_neighbors)?;
    let danger: Vec<usize> = split
        .minority
        .iter()
        .zip(&status)
        .filter_map(|(&i, &s)| (s == BorderlineStatus::Danger).then_some(i))
        .collect();
    if danger.is_empty() {
        let mut out = ResampleResult::identity(x, y);
        out.warnings.push("no DANGER minority points; input returned unchanged".into());
        return Ok(out);
    }
    let quota = split.majority.len() - split.minority.len();
    let mut rng = rng_from_seed(cfg.seed);
    let (rows, prov) = synthesize(x, &split.minority, &danger, cfg.k_neighbors, quota, &mut rng)?;
    append_synthetics(x, y, split.minority_label, rows, prov, Vec::new())
}

/// Per-minority-point synthetic quotas assigned by ADASYN.
///
/// Returns `(g_i, fell_back)`: the rounded per-point counts, and whether the
/// uniform fallback engaged because every difficulty ratio was zero.
pub fn adasyn_allocation(
    x: &Matrix,
    y: &LabelVector,
    minority: &[usize],
    k_neighbors: usize,
    beta: f64,
) -> Result<(Vec<usize>, bool)> {
    let n = x.n_rows();
    let index = NeighborIndex::build(x)?;
    let k_eff = k_neighbors.min(n - 1);
    if k_eff == 0 {
        return Err(Error::Degenerate("difficulty test needs at least two rows".into()));
    }
    let lists = index.kneighbors_of_rows(minority, k_eff, true)?;
    let ratios: Vec<f64> = minority
        .iter()
        .zip(&lists)
        .map(|(&i, neigh)| {
            let majority_count = neigh.iter().filter(|&&j| y.get(j) != y.get(i)).count();
            majority_count as f64 / k_eff as f64
        })
        .collect();

    let (pos, neg) = class_counts(y);
    let g_total = (pos.max(neg) - pos.min(neg)) as f64 * beta;
    let sum: f64 = ratios.iter().sum();
    if sum == 0.0 {
        return Ok((vec![0; minority.len()], true));
    }
    let counts = ratios
        .iter()
        .map(|r| ((r / sum) * g_total).round() as usize)
        .collect();
    Ok((counts, false))
}

/// ADASYN: synthetic counts per minority point proportional to its fraction
/// of majority neighbors (its difficulty), with per-point round-half-up and
/// no post-correction. Falls back to plain SMOTE behavior when every ratio
/// is zero.
pub fn adasyn(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    if split.minority.len() < 2 {
        return Err(Error::Degenerate("ADASYN needs at least two minority rows".into()));
    }
    let (counts, fell_back) =
        adasyn_allocation(x, y, &split.minority, cfg.k_neighbors, cfg.beta)?;
    let mut rng = rng_from_seed(cfg.seed);

    if fell_back {
        let quota = ((split.majority.len() - split.minority.len()) as f64 * cfg.beta).round()
            as usize;
        let (rows, prov) =
            synthesize(x, &split.minority, &split.minority, cfg.k_neighbors, quota, &mut rng)?;
        return append_synthetics(
            x,
            y,
            split.minority_label,
            rows,
            prov,
            vec!["all difficulty ratios zero; uniform fallback engaged".into()],
        );
    }

    let k_eff = cfg.k_neighbors.min(split.minority.len() - 1);
    if k_eff == 0 {
        return Err(Error::Degenerate("interpolation needs at least two minority rows".into()));
    }
    let minority_points = x.select_rows(&split.minority);
    let index = NeighborIndex::build(&minority_points)?;
    let locals: Vec<usize> = (0..split.minority.len()).collect();
    let neighbor_lists = index.kneighbors_of_rows(&locals, k_eff, true)?;

    let mut rows = Vec::new();
    let mut prov = Vec::new();
    for (local, (&base_global, &g_i)) in split.minority.iter().zip(&counts).enumerate() {
        for _ in 0..g_i {
            let picked = neighbor_lists[local][rng.random_range(0..k_eff)];
            let neighbor_global = split.minority[picked];
            let g: f64 = rng.random();
            rows.push(interpolate(x.row(base_global), x.row(neighbor_global), g));
            prov.push(RowProvenance::Synthetic { base: base_global, neighbor: neighbor_global });
        }
    }
    append_synthetics(x, y, split.minority_label, rows, prov, Vec::new())
}

/// All Tomek links: opposite-label pairs that are mutual 1-nearest neighbors
/// over the full set (self excluded). Pairs are reported as (lower, higher).
pub fn find_tomek_links(x: &Matrix, y: &LabelVector) -> Result<Vec<(usize, usize)>> {
    let index = NeighborIndex::build(x)?;
    let all: Vec<usize> = (0..x.n_rows()).collect();
    let nn: Vec<usize> = index
        .kneighbors_of_rows(&all, 1, true)?
        .into_iter()
        .map(|v| v[0])
        .collect();
    let mut links = Vec::new();
    for a in 0..x.n_rows() {
        let b = nn[a];
        if a < b && nn[b] == a && y.get(a) != y.get(b) {
            links.push((a, b));
        }
    }
    Ok(links)
}

/// Remove Tomek-link members: only the majority side, or both sides.
pub fn tomek_links(x: &Matrix, y: &LabelVector, mode: TomekMode) -> Result<ResampleResult> {
    check_dims(x, y)?;
    let split = split_classes(y)?;
    if x.n_rows() < 2 {
        return Err(Error::Degenerate("need at least two rows".into()));
    }
    let links = find_tomek_links(x, y)?;
    let mut remove = vec![false; x.n_rows()];
    for (a, b) in links {
        match mode {
            TomekMode::CleanBoth => {
                remove[a] = true;
                remove[b] = true;
            }
            TomekMode::UndersampleMajority => {
                let majority_member = if y.get(a) == split.minority_label { b } else { a };
                remove[majority_member] = true;
            }
        }
    }
    Ok(filter_rows(x, y, &remove))
}

/// Wilson's one-pass editing rule: simultaneously mark every row whose label
/// differs from the majority label of its `enn_k` nearest neighbors (self
/// excluded), then remove all marked rows from both classes.
pub fn enn(x: &Matrix, y: &LabelVector, enn_k: usize) -> Result<ResampleResult> {
    check_dims(x, y)?;
    if x.n_rows() <= enn_k {
        return Err(Error::InvalidArgument(format!(
            "need more than enn_k = {enn_k} rows, got {}",
            x.n_rows()
        )));
    }
    let index = NeighborIndex::build(x)?;
    let all: Vec<usize> = (0..x.n_rows()).collect();
    let lists = index.kneighbors_of_rows(&all, enn_k, true)?;
    let mut remove = vec![false; x.n_rows()];
    for (i, neigh) in lists.iter().enumerate() {
        let ones = neigh.iter().filter(|&&j| y.get(j) == 1).count();
        let vote = if 2 * ones > neigh.len() { 1 } else { 0 };
        if vote != y.get(i) {
            remove[i] = true;
        }
    }
    Ok(filter_rows(x, y, &remove))
}

fn filter_rows(x: &Matrix, y: &LabelVector, remove: &[bool]) -> ResampleResult {
    let kept: Vec<usize> = (0..x.n_rows()).filter(|&i| !remove[i]).collect();
    let removed: Vec<usize> = (0..x.n_rows()).filter(|&i| remove[i]).collect();
    ResampleResult {
        x: x.select_rows(&kept),
        y: y.select(&kept),
        provenance: kept.iter().map(|&i| RowProvenance::Original { source: i }).collect(),
        removed,
        warnings: Vec::new(),
    }
}

/// Compose SMOTE with a cleaning pass over the combined set, translating the
/// cleaner's survivor tags back through the oversampler's provenance.
fn smote_then_clean<F>(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig, clean: F) -> Result<ResampleResult>
where
    F: FnOnce(&Matrix, &LabelVector) -> Result<ResampleResult>,
{
    let over = smote(x, y, cfg)?;
    let cleaned = clean(&over.x, &over.y)?;
    let provenance = cleaned
        .provenance
        .iter()
        .map(|p| match p {
            RowProvenance::Original { source } => over.provenance[*source],
            other => *other,
        })
        .collect();
    Ok(ResampleResult {
        x: cleaned.x,
        y: cleaned.y,
        provenance,
        removed: cleaned.removed,
        warnings: over.warnings.into_iter().chain(cleaned.warnings).collect(),
    })
}

/// SMOTE, then Tomek-link cleaning (both sides) over the combined set.
pub fn smote_tomek(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig) -> Result<ResampleResult> {
    smote_then_clean(x, y, cfg, |xs, ys| tomek_links(xs, ys, TomekMode::CleanBoth))
}

/// SMOTE, then ENN editing over the combined set (removes from both classes).
pub fn smote_enn(x: &Matrix, y: &LabelVector, cfg: &SamplerConfig) -> Result<ResampleResult> {
    let enn_k = cfg.enn_k;
    smote_then_clean(x, y, cfg, |xs, ys| enn(xs, ys, enn_k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(points: &[(f64, f64)], labels: &[u8]) -> (Matrix, LabelVector) {
        let x = Matrix::from_rows(&points.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>())
            .unwrap();
        (x, LabelVector::new(labels.to_vec()).unwrap())
    }

    fn line(points: &[f64], labels: &[u8]) -> (Matrix, LabelVector) {
        let x = Matrix::from_rows(&points.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap();
        (x, LabelVector::new(labels.to_vec()).unwrap())
    }

    #[test]
    fn random_oversample_balances_and_duplicates_exactly() {
        let (x, y) = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[1, 1, 0, 0, 0, 0, 0]);
        let rr = random_oversample(&x, &y, 3).unwrap();
        assert_eq!(rr.class_counts(), (5, 5));
        for (i, p) in rr.provenance.iter().enumerate() {
            if let RowProvenance::Duplicated { source } = p {
                assert_eq!(rr.x.row(i), x.row(*source));
                assert_eq!(y.get(*source), 1);
            }
        }
    }

    #[test]
    fn random_oversample_balanced_input_is_identity() {
        let (x, y) = line(&[0.0, 1.0], &[1, 0]);
        let rr = random_oversample(&x, &y, 1).unwrap();
        assert_eq!(rr.x, x);
        assert_eq!(rr.y, y);
    }

    #[test]
    fn random_oversample_single_class_errors() {
        let (x, y) = line(&[0.0, 1.0], &[1, 1]);
        assert!(random_oversample(&x, &y, 0).is_err());
    }

    #[test]
    fn random_undersample_keeps_subset_of_majority() {
        let (x, y) = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[1, 1, 0, 0, 0, 0, 0]);
        let rr = random_undersample(&x, &y, 9).unwrap();
        assert_eq!(rr.class_counts(), (2, 2));
        // kept rows are a subset of the input, in input order
        let mut last = None;
        for p in &rr.provenance {
            match p {
                RowProvenance::Original { source } => {
                    if let Some(prev) = last {
                        assert!(*source > prev);
                    }
                    last = Some(*source);
                }
                _ => panic!("undersampling only keeps originals"),
            }
        }
        assert_eq!(rr.removed.len(), 3);
    }

    #[test]
    fn smote_midpoint_interpolation() {
        let mid = interpolate(&[0.0, 0.0], &[2.0, 0.0], 0.5);
        assert_eq!(mid, vec![1.0, 0.0]);
    }

    #[test]
    fn smote_balances_and_synthetics_sit_on_segments() {
        let (x, y) = labeled(
            &[(0.0, 0.0), (1.0, 0.2), (0.5, 0.8), (3.0, 3.0), (3.1, 2.9), (2.9, 3.2), (3.3, 3.1), (3.0, 2.8)],
            &[1, 1, 1, 0, 0, 0, 0, 0],
        );
        let cfg = SamplerConfig { kind: SamplerKind::Smote, seed: 5, ..Default::default() };
        let rr = smote(&x, &y, &cfg).unwrap();
        assert_eq!(rr.class_counts(), (5, 5));
        let mut synthetic_count = 0;
        for (i, p) in rr.provenance.iter().enumerate() {
            if let RowProvenance::Synthetic { base, neighbor } = p {
                synthetic_count += 1;
                assert_eq!(y.get(*base), 1);
                assert_eq!(y.get(*neighbor), 1);
                let s = rr.x.row(i);
                let b = x.row(*base);
                let nb = x.row(*neighbor);
                // recover g from the widest coordinate, then check collinearity
                let (coord, span) = (0..2)
                    .map(|c| (c, (nb[c] - b[c]).abs()))
                    .max_by(|l, r| l.1.total_cmp(&r.1))
                    .unwrap();
                let g = if span == 0.0 { 0.0 } else { (s[coord] - b[coord]) / (nb[coord] - b[coord]) };
                assert!((-1e-12..=1.0 + 1e-12).contains(&g), "g = {g}");
                for c in 0..2 {
                    let expect = b[c] + g * (nb[c] - b[c]);
                    assert!((s[c] - expect).abs() < 1e-9);
                }
            }
        }
        assert_eq!(synthetic_count, 2);
    }

    #[test]
    fn smote_single_minority_point_errors() {
        let (x, y) = line(&[0.0, 1.0, 2.0], &[1, 0, 0]);
        assert!(smote(&x, &y, &SamplerConfig::default()).is_err());
    }

    #[test]
    fn borderline_statuses_follow_m_rule() {
        // minority at origin surrounded by 5 majority points: NOISE
        let (x, y) = labeled(
            &[(0.0, 0.0), (0.1, 0.0), (-0.1, 0.0), (0.0, 0.1), (0.0, -0.1), (0.1, 0.1), (9.0, 9.0)],
            &[1, 0, 0, 0, 0, 0, 1],
        );
        let status = borderline_classify(&x, &y, &[0, 6], 5).unwrap();
        assert_eq!(status[0], BorderlineStatus::Noise);

        // minority with 3 of 5 majority neighbors: DANGER
        let (x, y) = labeled(
            &[
                (0.0, 0.0),
                (0.1, 0.0),
                (-0.1, 0.0),
                (0.0, 0.1),
                (0.02, 0.02),
                (-0.02, 0.02),
                (9.0, 9.0),
            ],
            &[1, 0, 0, 0, 1, 1, 0],
        );
        let status = borderline_classify(&x, &y, &[0, 4, 5], 5).unwrap();
        assert_eq!(status[0], BorderlineStatus::Danger);
    }

    #[test]
    fn borderline_smote_without_danger_returns_input_with_warning() {
        // two well-separated pure clusters: every m' = 0
        let (x, y) = labeled(
            &[(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (50.0, 50.0), (50.1, 50.0), (50.0, 50.1), (50.1, 50.1)],
            &[1, 1, 1, 0, 0, 0, 0],
        );
        let cfg = SamplerConfig { kind: SamplerKind::BorderlineSmote, m_neighbors: 2, seed: 1, ..Default::default() };
        let rr = borderline_smote(&x, &y, &cfg).unwrap();
        assert_eq!(rr.x, x);
        assert_eq!(rr.y, y);
        assert!(!rr.warnings.is_empty());
    }

    #[test]
    fn adasyn_allocation_hand_case() {
        // minority points: one in majority territory (r = 3/5), one isolated
        // with all-minority neighbors is impossible with two points, so build
        // the documented arithmetic directly: r = (0.6, 0.0), G = 4.
        let ratios = [0.6, 0.0];
        let sum: f64 = ratios.iter().sum();
        let g_total = 4.0;
        let counts: Vec<usize> =
            ratios.iter().map(|r| ((r / sum) * g_total).round() as usize).collect();
        assert_eq!(counts, vec![4, 0]);
    }

    #[test]
    fn adasyn_difficulty_ratios_from_neighbors() {
        // 8 points, minority pair far from a 6-point majority cluster except
        // one minority sits inside the cluster.
        let (x, y) = labeled(
            &[
                (0.0, 0.0),   // minority, inside majority cluster
                (0.1, 0.0),
                (-0.1, 0.0),
                (0.0, 0.1),
                (0.0, -0.1),
                (0.1, 0.1),
                (50.0, 50.0), // minority, isolated near its twin
                (50.0, 50.1), // minority
            ],
            &[1, 0, 0, 0, 0, 0, 1, 1],
        );
        // k = 1: the embedded minority point sees one majority neighbor
        // (r = 1), the isolated twins see each other (r = 0).
        let (counts, fell_back) = adasyn_allocation(&x, &y, &[0, 6, 7], 1, 1.0).unwrap();
        assert!(!fell_back);
        // G = 5 - 3 = 2; normalized ratios (1, 0, 0); g = (2, 0, 0)
        assert_eq!(counts, vec![2, 0, 0]);

        // k = 5: the twins see 1 minority + 4 majority neighbors (r = 0.8),
        // the embedded point is all-majority (r = 1); sum = 2.6.
        let (counts, fell_back) = adasyn_allocation(&x, &y, &[0, 6, 7], 5, 1.0).unwrap();
        assert!(!fell_back);
        // g_i = round(2 * r_i / 2.6) = (round(0.769), round(0.615) x2)
        assert_eq!(counts, vec![1, 1, 1]);
    }

    #[test]
    fn adasyn_fallback_when_all_ratios_zero() {
        let (x, y) = labeled(
            &[(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (50.0, 50.0), (50.1, 50.0), (50.0, 50.1), (50.1, 50.1)],
            &[1, 1, 1, 0, 0, 0, 0],
        );
        let cfg = SamplerConfig { kind: SamplerKind::Adasyn, k_neighbors: 2, seed: 2, ..Default::default() };
        let rr = adasyn(&x, &y, &cfg).unwrap();
        assert!(!rr.warnings.is_empty());
        // uniform fallback generates exactly G = 1 synthetic
        assert_eq!(rr.x.n_rows(), 8);
        assert_eq!(rr.class_counts(), (4, 4));
    }

    #[test]
    fn adasyn_total_close_to_quota() {
        let (x, y) = labeled(
            &[
                (0.0, 0.0),
                (0.2, 0.1),
                (0.1, 0.3),
                (0.4, 0.0),
                (0.05, 0.15),
                (0.3, 0.25),
                (0.15, 0.05),
                (1.0, 1.0),
                (1.1, 0.9),
                (0.9, 1.1),
            ],
            &[0, 0, 0, 0, 0, 0, 0, 1, 1, 1],
        );
        let cfg = SamplerConfig { kind: SamplerKind::Adasyn, seed: 7, ..Default::default() };
        let rr = adasyn(&x, &y, &cfg).unwrap();
        let synthetics = rr.x.n_rows() - x.n_rows();
        let g = 7 - 3;
        let n_min = 3;
        assert!(synthetics + n_min >= g && synthetics <= g + n_min,
            "synthetics = {synthetics} outside [G - n_min, G + n_min]");
    }

    #[test]
    fn tomek_link_1d_example() {
        // majority {0.0, 1.0}, minority {0.9}: link is (1.0, 0.9)
        let (x, y) = line(&[0.0, 1.0, 0.9], &[0, 0, 1]);
        let links = find_tomek_links(&x, &y).unwrap();
        assert_eq!(links, vec![(1, 2)]);

        let rr = tomek_links(&x, &y, TomekMode::UndersampleMajority).unwrap();
        assert_eq!(rr.removed, vec![1]);
        assert_eq!(rr.x.n_rows(), 2);

        let rr = tomek_links(&x, &y, TomekMode::CleanBoth).unwrap();
        assert_eq!(rr.removed, vec![1, 2]);
    }

    #[test]
    fn tomek_no_links_in_separated_clusters() {
        let (x, y) = line(&[0.0, 0.1, 50.0, 50.1], &[1, 1, 0, 0]);
        let rr = tomek_links(&x, &y, TomekMode::UndersampleMajority).unwrap();
        assert!(rr.removed.is_empty());
        assert_eq!(rr.x, x);
    }

    #[test]
    fn enn_removes_isolated_opposite_point() {
        let (x, y) = line(&[0.0, 0.1, 0.2, 0.3], &[1, 0, 0, 0]);
        let rr = enn(&x, &y, 3).unwrap();
        assert_eq!(rr.removed, vec![0]);
        assert_eq!(rr.x.n_rows(), 3);
    }

    #[test]
    fn enn_single_class_removes_nothing() {
        let (x, y) = line(&[0.0, 0.1, 0.2, 0.3], &[1, 1, 1, 1]);
        let rr = enn(&x, &y, 3).unwrap();
        assert!(rr.removed.is_empty());
    }

    #[test]
    fn enn_requires_enough_rows() {
        let (x, y) = line(&[0.0, 1.0, 2.0], &[1, 0, 0]);
        assert!(enn(&x, &y, 3).is_err());
    }

    #[test]
    fn smote_tomek_equals_smote_when_no_links() {
        let (x, y) = labeled(
            &[(0.0, 0.0), (0.1, 0.0), (50.0, 50.0), (50.1, 50.0), (50.0, 50.1)],
            &[1, 1, 0, 0, 0],
        );
        let cfg = SamplerConfig { kind: SamplerKind::SmoteTomek, seed: 13, ..Default::default() };
        let combined = smote_tomek(&x, &y, &cfg).unwrap();
        let plain = smote(&x, &y, &cfg).unwrap();
        assert_eq!(combined.x, plain.x);
        assert_eq!(combined.y, plain.y);
        assert!(combined.removed.is_empty());
    }

    /// Independent all-pairs mutual-1-NN detector with the same tie rule.
    fn brute_force_links(x: &Matrix, y: &LabelVector) -> Vec<(usize, usize)> {
        let n = x.n_rows();
        let nn: Vec<usize> = (0..n)
            .map(|a| {
                let mut best = usize::MAX;
                let mut best_d = f64::INFINITY;
                for b in 0..n {
                    if b == a {
                        continue;
                    }
                    let d: f64 = x
                        .row(a)
                        .iter()
                        .zip(x.row(b))
                        .map(|(p, q)| (p - q) * (p - q))
                        .sum();
                    if d < best_d || (d == best_d && b < best) {
                        best_d = d;
                        best = b;
                    }
                }
                best
            })
            .collect();
        (0..n)
            .filter(|&a| {
                let b = nn[a];
                a < b && nn[b] == a && y.get(a) != y.get(b)
            })
            .map(|a| (a, nn[a]))
            .collect()
    }

    #[test]
    fn smote_tomek_removes_border_pairs_from_both_classes() {
        // Interleaved border: majority at 0.46 hugs minority 0.45, and
        // majority at 0.2 sits inside the interpolation segment so a
        // synthetic can pair with it.
        let (x, y) = line(&[0.0, 0.45, 0.46, 0.2, 3.0, 3.1, 3.2], &[1, 1, 0, 0, 0, 0, 0]);
        let cfg = SamplerConfig { kind: SamplerKind::SmoteTomek, seed: 3, ..Default::default() };
        let rr = smote_tomek(&x, &y, &cfg).unwrap();

        // reconstruct the combined set (same seed -> same synthetics)
        let over = smote(&x, &y, &cfg).unwrap();
        let links = brute_force_links(&over.x, &over.y);
        let mut expected: Vec<usize> = links.iter().flat_map(|&(a, b)| [a, b]).collect();
        expected.sort_unstable();
        assert_eq!(rr.removed, expected);

        // this layout and seed kill both an original and a synthetic
        let removed_kinds: Vec<&str> = rr
            .removed
            .iter()
            .map(|&i| match over.provenance[i] {
                RowProvenance::Original { .. } => "original",
                RowProvenance::Synthetic { .. } => "synthetic",
                RowProvenance::Duplicated { .. } => "duplicated",
            })
            .collect();
        assert!(removed_kinds.contains(&"original"), "removed: {removed_kinds:?}");
        assert!(removed_kinds.contains(&"synthetic"), "removed: {removed_kinds:?}");
    }

    #[test]
    fn smote_enn_equals_smote_on_separated_classes() {
        let (x, y) = labeled(
            &[(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (50.0, 50.0), (50.1, 50.0), (50.0, 50.1), (50.1, 50.1)],
            &[1, 1, 1, 0, 0, 0, 0],
        );
        let cfg = SamplerConfig { kind: SamplerKind::SmoteEnn, seed: 21, ..Default::default() };
        let combined = smote_enn(&x, &y, &cfg).unwrap();
        let plain = smote(&x, &y, &cfg).unwrap();
        assert_eq!(combined.x, plain.x);
        assert!(combined.removed.is_empty());
    }

    #[test]
    fn samplers_are_deterministic() {
        let (x, y) = labeled(
            &[
                (0.0, 0.0),
                (0.3, 0.1),
                (0.1, 0.4),
                (1.0, 1.0),
                (1.2, 0.9),
                (0.9, 1.1),
                (1.1, 1.2),
                (0.8, 0.9),
            ],
            &[1, 1, 1, 0, 0, 0, 0, 0],
        );
        for kind in [
            SamplerKind::None,
            SamplerKind::RandomOver,
            SamplerKind::RandomUnder,
            SamplerKind::Smote,
            SamplerKind::BorderlineSmote,
            SamplerKind::Adasyn,
            SamplerKind::Tomek,
            SamplerKind::Enn,
            SamplerKind::SmoteTomek,
            SamplerKind::SmoteEnn,
        ] {
            let cfg = SamplerConfig::of_kind(kind, 99);
            let a = cfg.resample(&x, &y).unwrap();
            let b = cfg.resample(&x, &y).unwrap();
            assert_eq!(a, b, "{kind:?} must be deterministic");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = SamplerConfig::default();
        cfg.enn_k = 4;
        assert!(cfg.validate().is_err());
        cfg.enn_k = 3;
        cfg.beta = 0.0;
        assert!(cfg.validate().is_err());
        cfg.beta = 1.0;
        cfg.k_neighbors = 0;
        assert!(cfg.validate().is_err());
    }
}

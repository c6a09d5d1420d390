//! Exhaustive and randomized optimization over selection parameters and
//! partner subspaces.
//!
//! A candidate is a triple `(A, B, M_V)` on fixed ebit slots `T`. Its code is
//! determined by the isotropic rows `g'_j, j ∉ T` (which depend only on
//! `M_V`) and the shifted logicals `Z̄_m + Σ_i A_im s_i`,
//! `X̄_m + Σ_i B_im s_i`, where the shift rows `s_i` are `g_{t_i}` taken
//! before or after the partner change depending on [`CandidateOrder`].

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code::{
    analyze, is_degenerate, singleton_bound, CodeReport, LogicalMatrix, SimplifiedCheckMatrix, WeightEnumerator,
};
use crate::enumerate::{self, PackedRows};
use crate::error::{Error, Result};
use crate::frame::{count_partner_subspaces, EbitPattern, PartnerSubspace, SelectionParams, SymplecticFrame};
use crate::gf2::{BitMatrix, BitVector};

/// Default ceiling on exhaustive candidate evaluations.
pub const DEFAULT_MAX_COST: u128 = 100_000_000;

/// How a candidate's two operators are composed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CandidateOrder {
    /// Selection on the base frame, then the partner change.
    SelectionFirst,
    /// Partner change first, then selection on the changed frame. Every
    /// candidate then gives a distinct code.
    #[default]
    PartnerFirst,
}

/// How random search draws a partner subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PartnerSampling {
    /// Uniform over all `N(r, c)` subspaces.
    Uniform,
    /// Shift amounts of the leading ones drawn from the outside in:
    /// `l_c` uniform in `0..=r-c`, then each `l_i` uniform in `0..=l_{i+1}`,
    /// then the free entries uniformly.
    #[default]
    NestedShift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EbitPolicy {
    Fixed(EbitPattern),
    Random,
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub frame: SymplecticFrame,
    pub c: usize,
    /// Exhaustive search uses `Fixed` (default `T = {0..c-1}`).
    pub ebits: EbitPolicy,
    pub order: CandidateOrder,
    pub sampling: PartnerSampling,
    /// Random-search trial budget.
    pub budget: u64,
    pub seed: u64,
    pub merit_window: Option<usize>,
    /// Random search stops once this distance is reached; defaults to the
    /// singleton bound.
    pub target_distance: Option<usize>,
    /// Random search: draw every candidate from the base frame instead of
    /// the incumbent.
    pub restart: bool,
    pub max_cost: u128,
    pub exemplar_limit: usize,
    /// Worker threads for exhaustive search; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SearchSpec {
    pub fn new(frame: SymplecticFrame, c: usize) -> Result<Self> {
        if c == 0 || c > frame.r() {
            return Err(Error::InvalidArgument(format!(
                "ebit count must lie in 1..={}, got {c}",
                frame.r()
            )));
        }
        let t = EbitPattern::first(frame.r(), c)?;
        Ok(Self {
            frame,
            c,
            ebits: EbitPolicy::Fixed(t),
            order: CandidateOrder::default(),
            sampling: PartnerSampling::default(),
            budget: 10_000,
            seed: 0,
            merit_window: None,
            target_distance: None,
            restart: false,
            max_cost: DEFAULT_MAX_COST,
            exemplar_limit: 4,
            threads: None,
        })
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn k(&self) -> usize {
        self.frame.k()
    }

    pub fn singleton(&self) -> usize {
        singleton_bound(self.n(), self.k(), self.c).expect("c ≤ r = n - k")
    }

    pub fn merit_config(&self) -> Result<MeritConfig> {
        let b = self
            .merit_window
            .unwrap_or_else(|| self.singleton().saturating_sub(1).max(1));
        MeritConfig::new(b, self.n())
    }

    /// `2^{2ck} N(r, c)`.
    pub fn total_candidates(&self) -> Result<u128> {
        crate::frame::search_space_size(self.frame.r(), self.k(), self.c)
    }
}

/// Upper index `b` of the merit sum `a_1 + .. + a_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeritConfig {
    b: usize,
}

impl MeritConfig {
    pub fn new(b: usize, n: usize) -> Result<Self> {
        if b == 0 || b > n {
            return Err(Error::InvalidArgument(format!(
                "merit window must lie in 1..={n}, got {b}"
            )));
        }
        Ok(Self { b })
    }

    pub fn window(&self) -> usize {
        self.b
    }
}

/// Number of low-weight logical operators; lower is better.
pub fn merit(enumerator: &WeightEnumerator, cfg: MeritConfig) -> Result<u64> {
    if cfg.b >= enumerator.coefficients().len() {
        return Err(Error::InvalidArgument(format!(
            "merit window {} exceeds the enumerator length {}",
            cfg.b,
            enumerator.coefficients().len()
        )));
    }
    Ok(enumerator.low_weight_sum(cfg.b))
}

/// One optimal code with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct Exemplar {
    /// Candidate index for exhaustive search, trial number for random search.
    pub index: u128,
    pub ebits: EbitPattern,
    pub selection: SelectionParams,
    pub partner: PartnerSubspace,
    pub check: SimplifiedCheckMatrix,
    pub logical: LogicalMatrix,
    pub report: CodeReport,
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub c: usize,
    pub d_opt: usize,
    pub n_opt: u128,
    /// Candidates evaluated.
    pub total: u128,
    pub degenerate_optima: u128,
    pub exemplars: Vec<Exemplar>,
    /// Random search: 1-based trial at which `d_opt` was first reached.
    pub trials_to_best: Option<u64>,
    pub elapsed: Duration,
}

/// The candidate frame built with explicit row operations.
pub fn build_candidate(
    base: &SymplecticFrame,
    t: &EbitPattern,
    order: CandidateOrder,
    sel: &SelectionParams,
    mv: &PartnerSubspace,
) -> Result<SymplecticFrame> {
    let mut f = base.clone();
    match order {
        CandidateOrder::SelectionFirst => {
            f.apply_selection(t, sel)?;
            f.apply_partner_choice(t, mv)?;
        }
        CandidateOrder::PartnerFirst => {
            f.apply_partner_choice(t, mv)?;
            f.apply_selection(t, sel)?;
        }
    }
    Ok(f)
}

/// Everything about a candidate that depends only on `M_V`.
struct PartnerContext {
    iso: PackedRows,
    iso_min: Option<usize>,
    /// Shift rows `s_i`, packed.
    shifts: Vec<Vec<u64>>,
}

struct Evaluator {
    n: usize,
    c: usize,
    k: usize,
    t: EbitPattern,
    order: CandidateOrder,
    g: BitMatrix,
    lz: Vec<Vec<u64>>,
    lx: Vec<Vec<u64>>,
    words: usize,
}

fn pack(n: usize, v: &BitVector) -> Vec<u64> {
    let p = PackedRows::from_rows(n, [v]);
    p.row(0).to_vec()
}

impl Evaluator {
    fn new(frame: &SymplecticFrame, t: EbitPattern, order: CandidateOrder) -> Self {
        let n = frame.n();
        Self {
            n,
            c: t.c(),
            k: frame.k(),
            order,
            g: BitMatrix::from_rows(2 * n, frame.g().to_vec()).expect("rows"),
            lz: frame.logical_z().iter().map(|v| pack(n, v)).collect(),
            lx: frame.logical_x().iter().map(|v| pack(n, v)).collect(),
            words: PackedRows::new(n).words_per_half(),
            t,
        }
    }

    fn context(&self, mv: &PartnerSubspace) -> Result<PartnerContext> {
        let p = mv.completion(&self.t);
        let g_new = p
            .inverse()
            .expect("completion is invertible")
            .transpose()
            .mul(&self.g)?;
        let r = self.g.nrows();
        let iso = PackedRows::from_rows(self.n, (0..r).filter(|j| !self.t.contains(*j)).map(|j| g_new.row(j)));
        let iso_min = enumerate::min_nonzero_weight(self.n, &iso)?;
        let src = match self.order {
            CandidateOrder::SelectionFirst => &self.g,
            CandidateOrder::PartnerFirst => &g_new,
        };
        let shifts = self.t.slots().iter().map(|&s| pack(self.n, src.row(s))).collect();
        Ok(PartnerContext { iso, iso_min, shifts })
    }

    fn logicals(&self, ctx: &PartnerContext, sel: u128, out: &mut PackedRows) {
        out.clear();
        let ck = self.c * self.k;
        let mut buf = vec![0u64; 2 * self.words];
        for (which, base) in [(0usize, &self.lz), (1, &self.lx)] {
            for (m, row) in base.iter().enumerate() {
                buf.copy_from_slice(row);
                for (i, s) in ctx.shifts.iter().enumerate() {
                    if (sel >> (which * ck + i * self.k + m)) & 1 == 1 {
                        for (a, b) in buf.iter_mut().zip(s) {
                            *a ^= *b;
                        }
                    }
                }
                out.push_words(&buf);
            }
        }
    }

    /// Distance and enumerator, or `None` once a weight below `stop` shows up.
    fn evaluate(
        &self,
        ctx: &PartnerContext,
        sel: u128,
        scratch: &mut PackedRows,
        stop: Option<usize>,
    ) -> Result<Option<(usize, Vec<u64>)>> {
        self.logicals(ctx, sel, scratch);
        Ok(enumerate::walk(self.n, &ctx.iso, scratch, stop)?.map(|s| (s.min_weight.unwrap_or(0), s.counts)))
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    best: Option<usize>,
    count: u128,
    degenerate: u128,
    exemplars: Vec<u128>,
}

impl Tally {
    fn record(&mut self, d: usize, degenerate: bool, index: u128, limit: usize) {
        match self.best {
            Some(b) if d < b => return,
            Some(b) if d == b => {}
            _ => {
                self.best = Some(d);
                self.count = 0;
                self.degenerate = 0;
                self.exemplars.clear();
            }
        }
        self.count += 1;
        self.degenerate += u128::from(degenerate);
        if self.exemplars.len() < limit {
            self.exemplars.push(index);
        }
    }

    fn merge(mut self, other: Tally, limit: usize) -> Tally {
        match (self.best, other.best) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) if a > b => self,
            (Some(a), Some(b)) if a < b => other,
            _ => {
                self.count += other.count;
                self.degenerate += other.degenerate;
                self.exemplars.extend(other.exemplars);
                self.exemplars.sort_unstable();
                self.exemplars.truncate(limit);
                self
            }
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Scores every `(A, B, M_V)` on the fixed ebit slots.
pub fn exhaustive_optimize(spec: &SearchSpec) -> Result<OptimizationResult> {
    let start = Instant::now();
    let EbitPolicy::Fixed(t) = &spec.ebits else {
        return Err(Error::InvalidArgument(
            "exhaustive search needs fixed ebit slots".into(),
        ));
    };
    if t.c() != spec.c || t.r() != spec.frame.r() {
        return Err(Error::DimensionMismatch {
            expected: spec.c,
            found: t.c(),
        });
    }
    let total = spec.total_candidates()?;
    if total > spec.max_cost {
        return Err(Error::CostExceeded {
            estimated: total,
            limit: spec.max_cost,
        });
    }
    let r = spec.frame.r();
    let c = spec.c;
    let sel_count = 1u128 << (2 * c * spec.k());
    let n_mv = count_partner_subspaces(r, c)?;
    let eval = Evaluator::new(&spec.frame, t.clone(), spec.order);
    let limit = spec.exemplar_limit;
    let singleton = spec.singleton();

    let mvs: Vec<PartnerSubspace> = PartnerSubspace::all(r, c).collect();
    debug_assert_eq!(mvs.len() as u128, n_mv);
    let tally = with_threads(spec.threads, || {
        mvs.par_iter()
            .enumerate()
            .try_fold(Tally::default, |mut acc, (mv_index, mv)| -> Result<Tally> {
                let ctx = eval.context(mv)?;
                let mut scratch = PackedRows::new(spec.n());
                for sel in 0..sel_count {
                    if let Some((d, _)) = eval.evaluate(&ctx, sel, &mut scratch, acc.best)? {
                        debug_assert!(d <= singleton);
                        let index = mv_index as u128 * sel_count + sel;
                        acc.record(d, is_degenerate(ctx.iso_min, d), index, limit);
                    }
                }
                Ok(acc)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b, limit)))
    })??;

    let exemplars = tally
        .exemplars
        .iter()
        .map(|&index| {
            let mv = &mvs[(index / sel_count) as usize];
            let sel = SelectionParams::from_index(c, spec.k(), index % sel_count)?;
            exemplar(spec, t, index, sel, mv.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OptimizationResult {
        c,
        d_opt: tally.best.unwrap_or(0),
        n_opt: tally.count,
        total,
        degenerate_optima: tally.degenerate,
        exemplars,
        trials_to_best: None,
        elapsed: start.elapsed(),
    })
}

fn exemplar(
    spec: &SearchSpec,
    t: &EbitPattern,
    index: u128,
    sel: SelectionParams,
    mv: PartnerSubspace,
) -> Result<Exemplar> {
    let frame = build_candidate(&spec.frame, t, spec.order, &sel, &mv)?;
    from_frame(&frame, t, index, sel, mv)
}

fn from_frame(
    frame: &SymplecticFrame,
    t: &EbitPattern,
    index: u128,
    sel: SelectionParams,
    mv: PartnerSubspace,
) -> Result<Exemplar> {
    let (check, logical) = frame.induced_code(t)?;
    let report = analyze(&check)?;
    Ok(Exemplar {
        index,
        ebits: t.clone(),
        selection: sel,
        partner: mv,
        check,
        logical,
        report,
    })
}

/// Randomized search: keeps a candidate when its merit strictly improves and
/// stops at the target distance or when the budget runs out.
pub fn random_search(spec: &SearchSpec) -> Result<OptimizationResult> {
    let start = Instant::now();
    if spec.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let cfg = spec.merit_config()?;
    let target = spec.target_distance.unwrap_or_else(|| spec.singleton());
    let r = spec.frame.r();
    let c = spec.c;
    let k = spec.k();
    let n_mv = count_partner_subspaces(r, c)?;
    let sel_bits = 2 * c * k;
    if sel_bits > 127 {
        return Err(Error::TooLarge(sel_bits));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut incumbent = spec.frame.clone();
    let mut incumbent_merit: Option<u64> = None;
    let mut best: Option<(usize, Exemplar)> = None;
    let mut trials_to_best = None;
    let mut trials = 0u64;
    for trial in 1..=spec.budget {
        trials = trial;
        let t = match &spec.ebits {
            EbitPolicy::Fixed(t) => t.clone(),
            EbitPolicy::Random => {
                let mut slots = rand::seq::index::sample(&mut rng, r, c).into_vec();
                slots.sort_unstable();
                EbitPattern::new(r, slots)?
            }
        };
        let sel_index = if sel_bits == 0 {
            0
        } else {
            rng.gen_range(0..1u128 << sel_bits)
        };
        let sel = SelectionParams::from_index(c, k, sel_index)?;
        let mv = sample_partner(r, c, spec.sampling, n_mv, &mut rng)?;
        let from = if spec.restart { &spec.frame } else { &incumbent };
        let cand = build_candidate(from, &t, spec.order, &sel, &mv)?;
        let stats = cand.induced_stats(&t, None)?.expect("no early exit requested");
        let d = stats.min_weight.unwrap_or(0);
        debug_assert!(d <= spec.singleton());
        if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
            best = Some((d, from_frame(&cand, &t, u128::from(trial), sel, mv)?));
            trials_to_best = Some(trial);
        }
        let m = merit(&WeightEnumerator(stats.counts), cfg)?;
        if incumbent_merit.is_none_or(|im| m < im) {
            incumbent_merit = Some(m);
            incumbent = cand;
        }
        if d >= target {
            break;
        }
    }
    let (d_opt, ex) = best.expect("budget is at least 1");
    Ok(OptimizationResult {
        c,
        d_opt,
        n_opt: 1,
        total: u128::from(trials),
        degenerate_optima: u128::from(ex.report.params.degenerate),
        exemplars: vec![ex],
        trials_to_best,
        elapsed: start.elapsed(),
    })
}

/// Draws a partner subspace for random search.
pub fn sample_partner<R: Rng>(
    r: usize,
    c: usize,
    sampling: PartnerSampling,
    count: u128,
    rng: &mut R,
) -> Result<PartnerSubspace> {
    match sampling {
        PartnerSampling::Uniform => PartnerSubspace::unrank(r, c, rng.gen_range(0..count)),
        PartnerSampling::NestedShift => {
            let mut shifts = vec![0usize; c];
            let mut upper = r - c;
            for i in (0..c).rev() {
                shifts[i] = rng.gen_range(0..=upper);
                upper = shifts[i];
            }
            let pivots: Vec<usize> = shifts.iter().enumerate().map(|(i, l)| i + l).collect();
            let free = PartnerSubspace::free_count(r, &pivots);
            if free > 127 {
                return Err(Error::TooLarge(free));
            }
            let bits = if free == 0 { 0 } else { rng.gen_range(0..1u128 << free) };
            PartnerSubspace::from_pivots(r, &pivots, bits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::code::min_distance;

    fn frame(name: &str) -> SymplecticFrame {
        SymplecticFrame::from_code(&lookup(name).unwrap().check).unwrap()
    }

    #[test]
    fn merit_examples() {
        let cfg = MeritConfig::new(4, 5).unwrap();
        let ex1 = lookup("example1_5_1_5_4").unwrap().check;
        assert_eq!(merit(&min_distance(&ex1).unwrap().1, cfg).unwrap(), 0);
        let flip = lookup("bit_flip_5").unwrap().check;
        assert!(merit(&min_distance(&flip).unwrap().1, cfg).unwrap() > 0);
        assert!(MeritConfig::new(0, 5).is_err());
        assert!(MeritConfig::new(6, 5).is_err());
    }

    #[test]
    fn fast_path_matches_explicit_row_operations() {
        let f = frame("bit_flip_5");
        for order in [CandidateOrder::SelectionFirst, CandidateOrder::PartnerFirst] {
            for t in EbitPattern::all(4, 2) {
                let eval = Evaluator::new(&f, t.clone(), order);
                let mut scratch = PackedRows::new(5);
                for mv in PartnerSubspace::all(4, 2) {
                    let ctx = eval.context(&mv).unwrap();
                    for sel in 0..16u128 {
                        let (d, counts) = eval.evaluate(&ctx, sel, &mut scratch, None).unwrap().unwrap();
                        let s = SelectionParams::from_index(2, 1, sel).unwrap();
                        let cand = build_candidate(&f, &t, order, &s, &mv).unwrap();
                        let (code, _) = cand.induced_code(&t).unwrap();
                        let (d2, en) = min_distance(&code).unwrap();
                        assert_eq!((d, &counts), (d2, &en.0));
                        assert_eq!(ctx.iso_min, crate::code::isotropic_min_weight(&code).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_counts_and_thread_independence() {
        let f = frame("bit_flip_5");
        let mut spec = SearchSpec::new(f, 2).unwrap();
        spec.threads = Some(1);
        let one = exhaustive_optimize(&spec).unwrap();
        spec.threads = Some(4);
        let four = exhaustive_optimize(&spec).unwrap();
        assert_eq!(one.total, 16 * 35);
        assert_eq!(
            (one.d_opt, one.n_opt, one.degenerate_optima),
            (four.d_opt, four.n_opt, four.degenerate_optima)
        );
        let idx = |r: &OptimizationResult| r.exemplars.iter().map(|e| e.index).collect::<Vec<_>>();
        assert_eq!(idx(&one), idx(&four));
        for e in &one.exemplars {
            assert_eq!(e.report.params.d, one.d_opt);
        }
        assert!(one.d_opt <= spec.singleton());
    }

    #[test]
    fn cost_refusal() {
        let mut spec = SearchSpec::new(frame("shor_9_1_3"), 5).unwrap();
        spec.max_cost = 1000;
        match exhaustive_optimize(&spec) {
            Err(Error::CostExceeded { estimated, limit }) => {
                assert_eq!(limit, 1000);
                assert_eq!(estimated, spec.total_candidates().unwrap());
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        spec.ebits = EbitPolicy::Random;
        assert!(exhaustive_optimize(&spec).is_err());
    }

    #[test]
    fn random_search_is_reproducible() {
        let mut spec = SearchSpec::new(frame("bit_flip_5"), 4).unwrap();
        spec.budget = 1;
        spec.seed = 7;
        let a = random_search(&spec).unwrap();
        assert_eq!(a.total, 1);
        spec.budget = 500;
        spec.ebits = EbitPolicy::Random;
        let b = random_search(&spec).unwrap();
        let c = random_search(&spec).unwrap();
        assert_eq!(b.d_opt, 5);
        assert_eq!(b.trials_to_best, c.trials_to_best);
        assert_eq!(b.exemplars[0].check, c.exemplars[0].check);
        spec.budget = 0;
        assert!(random_search(&spec).is_err());
    }

    #[test]
    fn nested_sampling_covers_every_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2000 {
            let p = sample_partner(5, 2, PartnerSampling::NestedShift, 155, &mut rng).unwrap();
            assert!(PartnerSubspace::new(p.matrix().clone()).is_ok());
            seen.insert(p.pivots().to_vec());
        }
        assert_eq!(seen.len(), 10);
    }
}

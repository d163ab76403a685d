//! Cutting schedules and the quantities derived directly from them.
//!
//! A rank-one construction is driven by a *schedule*: at stage `k` the current
//! tower is cut into `m_k >= 2` columns and `a_k^i >= 1` spacer levels are
//! inserted above column `i` for `i = 0..m_k-2` (no spacers above the last
//! column). The schedule determines everything else in the crate:
//!
//! * the tower heights `h_k` (equivalently, the number of level-`k` balls of
//!   the digit model), via `h_k = m_k * h_{k-1} + sum_i a_k^i` with `h_0 = 0`;
//! * the total measure of the space, `1 + sum_k (sum_i a_k^i) / (m_1 ... m_k)`
//!   counted relative to the base of measure one (the crate reports the sum
//!   without the leading 1, i.e. the measure added by spacers, plus the base
//!   measure of 1 folded in by callers that want it — see [`total_measure`]).
//!
//! Heights and partial products use arbitrary-precision integers: `h_k` grows
//! geometrically in `k`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result, ScheduleViolation};

/// How the stage sequence continues past the stored rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Continuation {
    /// Exactly the stored stages; depth is finite.
    Explicit,
    /// `preamble` initial rows, then the remaining `period` rows repeat forever.
    EventuallyPeriodic { preamble: usize, period: usize },
}

/// A validated cut-and-spacer schedule `(m_k, a_k^0..a_k^{m_k-2})_{k >= 1}`.
///
/// Stages are 1-indexed throughout, matching the digit positions of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSpacerSchedule {
    m: Vec<u32>,
    a: Vec<Vec<u64>>,
    continuation: Continuation,
}

fn validate_rows(
    m: &[u32],
    a: &[Vec<u64>],
    k_offset: usize,
    violations: &mut Vec<ScheduleViolation>,
) {
    if m.len() != a.len() {
        violations.push(ScheduleViolation::StageCountMismatch {
            m_len: m.len(),
            a_len: a.len(),
        });
    }
    for (idx, &mk) in m.iter().enumerate() {
        let k = k_offset + idx + 1;
        if mk < 2 {
            violations.push(ScheduleViolation::CutTooSmall { k, m: mk });
            continue;
        }
        let Some(row) = a.get(idx) else { continue };
        let expected = (mk - 1) as usize;
        if row.len() != expected {
            violations.push(ScheduleViolation::SpacerArity {
                k,
                expected,
                got: row.len(),
            });
        }
        for (i, &value) in row.iter().enumerate() {
            if value == 0 {
                violations.push(ScheduleViolation::SpacerTooSmall { k, i, value });
            }
        }
    }
}

impl CutSpacerSchedule {
    /// A schedule with exactly the given stages (finite depth `m.len()`).
    pub fn explicit(m: Vec<u32>, a: Vec<Vec<u64>>) -> std::result::Result<Self, Vec<ScheduleViolation>> {
        let mut violations = Vec::new();
        validate_rows(&m, &a, 0, &mut violations);
        if violations.is_empty() {
            Ok(Self {
                m,
                a,
                continuation: Continuation::Explicit,
            })
        } else {
            Err(violations)
        }
    }

    /// A schedule that runs through the preamble rows once and then repeats the
    /// period rows forever (unbounded depth).
    pub fn eventually_periodic(
        preamble_m: Vec<u32>,
        preamble_a: Vec<Vec<u64>>,
        period_m: Vec<u32>,
        period_a: Vec<Vec<u64>>,
    ) -> std::result::Result<Self, Vec<ScheduleViolation>> {
        let mut violations = Vec::new();
        validate_rows(&preamble_m, &preamble_a, 0, &mut violations);
        validate_rows(&period_m, &period_a, preamble_m.len(), &mut violations);
        if period_m.is_empty() {
            violations.push(ScheduleViolation::EmptyPeriod);
        }
        if violations.is_empty() {
            let preamble = preamble_m.len();
            let period = period_m.len();
            let mut m = preamble_m;
            m.extend(period_m);
            let mut a = preamble_a;
            a.extend(period_a);
            Ok(Self {
                m,
                a,
                continuation: Continuation::EventuallyPeriodic { preamble, period },
            })
        } else {
            Err(violations)
        }
    }

    /// A purely periodic schedule (empty preamble).
    pub fn periodic(m: Vec<u32>, a: Vec<Vec<u64>>) -> std::result::Result<Self, Vec<ScheduleViolation>> {
        Self::eventually_periodic(Vec::new(), Vec::new(), m, a)
    }

    /// Maximum usable stage index, or `None` when the schedule is unbounded.
    pub fn depth(&self) -> Option<usize> {
        match self.continuation {
            Continuation::Explicit => Some(self.m.len()),
            Continuation::EventuallyPeriodic { .. } => None,
        }
    }

    /// Whether the schedule repeats forever.
    pub fn is_periodic(&self) -> bool {
        matches!(self.continuation, Continuation::EventuallyPeriodic { .. })
    }

    /// Length of the non-repeating prefix (periodic schedules only).
    pub fn preamble_len(&self) -> Option<usize> {
        match self.continuation {
            Continuation::Explicit => None,
            Continuation::EventuallyPeriodic { preamble, .. } => Some(preamble),
        }
    }

    /// Length of the repeating block (periodic schedules only).
    pub fn period_len(&self) -> Option<usize> {
        match self.continuation {
            Continuation::Explicit => None,
            Continuation::EventuallyPeriodic { period, .. } => Some(period),
        }
    }

    /// Number of stage rows physically stored (preamble + one period, or all).
    pub fn stored_stages(&self) -> usize {
        self.m.len()
    }

    /// Fail unless stages `1..=k` are all available.
    pub fn ensure_depth(&self, k: usize) -> Result<()> {
        match self.depth() {
            Some(max) if k > max => Err(Error::DepthExceeded { requested: k, max }),
            _ => Ok(()),
        }
    }

    fn stage_index(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::InvalidLevel {
                level: 0,
                need: "a stage index k >= 1",
            });
        }
        match self.continuation {
            Continuation::Explicit => {
                if k <= self.m.len() {
                    Ok(k - 1)
                } else {
                    Err(Error::DepthExceeded {
                        requested: k,
                        max: self.m.len(),
                    })
                }
            }
            Continuation::EventuallyPeriodic { preamble, period } => {
                if k <= self.m.len() {
                    Ok(k - 1)
                } else {
                    Ok(preamble + (k - preamble - 1) % period)
                }
            }
        }
    }

    /// Cut count `m_k` (stages are 1-indexed).
    pub fn cuts(&self, k: usize) -> Result<u32> {
        Ok(self.m[self.stage_index(k)?])
    }

    /// Spacer counts `a_k^0 .. a_k^{m_k-2}`.
    pub fn spacers(&self, k: usize) -> Result<&[u64]> {
        Ok(&self.a[self.stage_index(k)?])
    }

    /// Single spacer count `a_k^i`.
    pub fn spacer(&self, k: usize, i: usize) -> Result<u64> {
        let row = self.spacers(k)?;
        row.get(i).copied().ok_or(Error::PositionOutOfRange {
            position: i,
            level: row.len(),
        })
    }

    /// `sum_i a_k^i` over the whole stage.
    pub fn spacer_sum(&self, k: usize) -> Result<u128> {
        Ok(self.spacers(k)?.iter().map(|&v| v as u128).sum())
    }

    /// Partial sum `sum_{i < p} a_k^i`.
    pub fn spacer_prefix(&self, k: usize, p: usize) -> Result<u128> {
        let row = self.spacers(k)?;
        if p > row.len() {
            return Err(Error::PositionOutOfRange {
                position: p,
                level: row.len(),
            });
        }
        Ok(row[..p].iter().map(|&v| v as u128).sum())
    }

    /// `m_1 * m_2 * ... * m_k` (empty product 1 for `k = 0`).
    pub fn radix_product(&self, k: usize) -> Result<BigUint> {
        let mut product = BigUint::one();
        for j in 1..=k {
            product *= BigUint::from(self.cuts(j)?);
        }
        Ok(product)
    }
}

/// Tower heights `h_0 .. h_K` of a schedule.
///
/// `h_k` equals the number of level-`k` balls of the digit model, which is
/// what pins the base case to `h_0 = 0` (there are no floors before the first
/// cut; the level-0 object is the measure-one copy of the digit space itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightTable {
    h: Vec<BigUint>,
}

impl HeightTable {
    /// `h_k`; panics if `k` is beyond the table.
    pub fn h(&self, k: usize) -> &BigUint {
        &self.h[k]
    }

    /// Largest `k` the table covers.
    pub fn max_level(&self) -> usize {
        self.h.len() - 1
    }

    /// All heights `h_0 ..= h_K` in order.
    pub fn as_slice(&self) -> &[BigUint] {
        &self.h
    }
}

/// Heights `h_0 ..= h_K` via `h_k = m_k * h_{k-1} + sum_i a_k^i`, `h_0 = 0`.
pub fn heights(schedule: &CutSpacerSchedule, k_max: usize) -> Result<HeightTable> {
    schedule.ensure_depth(k_max)?;
    let mut h = Vec::with_capacity(k_max + 1);
    h.push(BigUint::zero());
    for k in 1..=k_max {
        let prev = h.last().expect("nonempty");
        let next = BigUint::from(schedule.cuts(k)?) * prev + BigUint::from(schedule.spacer_sum(k)?);
        h.push(next);
    }
    Ok(HeightTable { h })
}

/// Convergence verdict for the spacer-measure series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureClass {
    /// The series has the given exact limit (always the case for periodic
    /// schedules: one period contributes a fixed amount scaled by the
    /// geometric factor `1 / (m_{k+1} ... m_{k+P}) < 1`).
    Finite(BigRational),
    /// Only finitely many stages are known, so the tail is undetermined.
    Undetermined,
}

/// Partial sum of the spacer-measure series together with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalMeasure {
    /// Stages summed for the partial value.
    pub depth: usize,
    /// `sum_{k <= depth} (sum_i a_k^i) / (m_1 ... m_k)`, exact.
    pub partial: BigRational,
    /// Exact limit when the schedule determines one.
    pub class: MeasureClass,
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Total measure of the space: the partial sum to `depth` is the measure
/// covered by the level-`depth` balls, `h_depth / (m_1 ... m_depth)`, and for
/// eventually periodic schedules the exact limit of the series is the measure
/// of the whole space (1 for the doubling system, 3/2 for the triple-cut
/// reference system).
pub fn total_measure(schedule: &CutSpacerSchedule, depth: usize) -> Result<TotalMeasure> {
    schedule.ensure_depth(depth)?;
    let mut partial = BigRational::zero();
    let mut denom = BigUint::one();
    for k in 1..=depth {
        denom *= BigUint::from(schedule.cuts(k)?);
        partial += ratio(BigUint::from(schedule.spacer_sum(k)?), denom.clone());
    }

    let class = match (schedule.preamble_len(), schedule.period_len()) {
        (Some(preamble), Some(period)) => {
            // Sum the preamble outright, then one period scaled by the closed
            // form of the geometric tail: each later repetition is damped by
            // the full-period radix product M, so the block sum gains a factor
            // M / (M - 1).
            let mut limit = BigRational::zero();
            let mut d = BigUint::one();
            for k in 1..=preamble {
                d *= BigUint::from(schedule.cuts(k)?);
                limit += ratio(BigUint::from(schedule.spacer_sum(k)?), d.clone());
            }
            let mut block = BigRational::zero();
            for r in 1..=period {
                let k = preamble + r;
                d *= BigUint::from(schedule.cuts(k)?);
                block += ratio(BigUint::from(schedule.spacer_sum(k)?), d.clone());
            }
            let period_product = {
                let mut p = BigUint::one();
                for r in 1..=period {
                    p *= BigUint::from(schedule.cuts(preamble + r)?);
                }
                p
            };
            let m = BigRational::from(num_bigint::BigInt::from(period_product));
            limit += block.clone() * m.clone() / (m - BigRational::one());
            MeasureClass::Finite(limit)
        }
        _ => MeasureClass::Undetermined,
    };

    Ok(TotalMeasure {
        depth,
        partial,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ScheduleViolation as V;

    pub(crate) fn s1() -> CutSpacerSchedule {
        CutSpacerSchedule::periodic(vec![2], vec![vec![1]]).expect("valid")
    }

    pub(crate) fn s2() -> CutSpacerSchedule {
        CutSpacerSchedule::periodic(vec![3], vec![vec![1, 2]]).expect("valid")
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn validation_collects_violations() {
        let err = CutSpacerSchedule::explicit(vec![1, 3], vec![vec![], vec![1]]).unwrap_err();
        assert!(err.contains(&V::CutTooSmall { k: 1, m: 1 }));
        assert!(err.contains(&V::SpacerArity {
            k: 2,
            expected: 2,
            got: 1
        }));

        let err = CutSpacerSchedule::explicit(vec![3], vec![vec![1, 0]]).unwrap_err();
        assert_eq!(
            err,
            vec![V::SpacerTooSmall {
                k: 1,
                i: 1,
                value: 0
            }]
        );

        let err = CutSpacerSchedule::periodic(vec![], vec![]).unwrap_err();
        assert_eq!(err, vec![V::EmptyPeriod]);

        let err = CutSpacerSchedule::explicit(vec![2, 2], vec![vec![1]]).unwrap_err();
        assert_eq!(
            err,
            vec![V::StageCountMismatch { m_len: 2, a_len: 1 }]
        );
    }

    #[test]
    fn empty_explicit_schedule_has_depth_zero() {
        let s = CutSpacerSchedule::explicit(vec![], vec![]).expect("valid");
        assert_eq!(s.depth(), Some(0));
        assert_eq!(heights(&s, 0).unwrap().as_slice(), &[BigUint::zero()]);
        assert!(matches!(
            heights(&s, 1),
            Err(Error::DepthExceeded { requested: 1, max: 0 })
        ));
    }

    #[test]
    fn periodic_lookup_repeats_the_period() {
        let s = CutSpacerSchedule::eventually_periodic(
            vec![2],
            vec![vec![3]],
            vec![3, 4],
            vec![vec![1, 2], vec![2, 2, 1]],
        )
        .expect("valid");
        assert_eq!(s.cuts(1).unwrap(), 2);
        assert_eq!(s.cuts(2).unwrap(), 3);
        assert_eq!(s.cuts(3).unwrap(), 4);
        // Stage 4 wraps to the first period row, stage 5 to the second, ...
        assert_eq!(s.cuts(4).unwrap(), 3);
        assert_eq!(s.spacers(5).unwrap(), &[2, 2, 1]);
        assert_eq!(s.cuts(100).unwrap(), 3);
        assert_eq!(s.cuts(101).unwrap(), 4);
        assert_eq!(s.depth(), None);
    }

    // Expected heights were frozen from the independent ball-count oracle in
    // the odometer tests (enumerate level-k addresses and count them).
    #[test]
    fn heights_match_frozen_tables() {
        let h1 = heights(&s1(), 4).unwrap();
        assert_eq!(
            h1.as_slice(),
            &[big(0), big(1), big(3), big(7), big(15)]
        );
        let h2 = heights(&s2(), 4).unwrap();
        assert_eq!(
            h2.as_slice(),
            &[big(0), big(3), big(12), big(39), big(120)]
        );
    }

    #[test]
    fn heights_strictly_increase() {
        let s = CutSpacerSchedule::periodic(vec![5, 2], vec![vec![4, 1, 1, 3], vec![2]]).unwrap();
        let table = heights(&s, 12).unwrap();
        for k in 1..=12 {
            assert!(table.h(k) > table.h(k - 1), "h_{k} must exceed h_{}", k - 1);
        }
    }

    #[test]
    fn total_measure_limits() {
        // One period of S1 adds 1/2 of the base, with geometric factor 2.
        let t = total_measure(&s1(), 2).unwrap();
        assert_eq!(t.partial, rat(3, 4));
        assert_eq!(t.class, MeasureClass::Finite(rat(1, 1)));

        let t = total_measure(&s2(), 1).unwrap();
        assert_eq!(t.partial, rat(1, 1));
        assert_eq!(t.class, MeasureClass::Finite(rat(3, 2)));

        let s = CutSpacerSchedule::explicit(vec![2, 2], vec![vec![1], vec![1]]).unwrap();
        let t = total_measure(&s, 2).unwrap();
        assert_eq!(t.partial, rat(3, 4));
        assert_eq!(t.class, MeasureClass::Undetermined);
    }

    #[test]
    fn telescoping_identity_links_heights_and_measure() {
        // h_k / (m_1...m_k) equals the partial measure sum; this is exactly the
        // h_0 = 0 base case seen through the recurrence.
        for s in [s1(), s2()] {
            let table = heights(&s, 8).unwrap();
            for k in 0..=8 {
                let lhs = ratio(table.h(k).clone(), s.radix_product(k).unwrap());
                let rhs = total_measure(&s, k).unwrap().partial;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn partial_sums_increase_to_the_limit() {
        let s = CutSpacerSchedule::eventually_periodic(
            vec![2],
            vec![vec![3]],
            vec![3, 2],
            vec![vec![1, 4], vec![2]],
        )
        .unwrap();
        let MeasureClass::Finite(limit) = total_measure(&s, 1).unwrap().class else {
            panic!("periodic schedules always classify as finite");
        };
        let mut previous = BigRational::zero();
        for depth in 1..=9 {
            let t = total_measure(&s, depth).unwrap();
            assert!(t.partial > previous, "a_k >= 1 forces strict growth");
            assert!(t.partial < limit);
            previous = t.partial;
        }
        // Exact tail identity: limit = partial(d) + (next full period) * M/(M-1).
        let period = s.period_len().unwrap();
        for depth in [1usize, 3, 5] {
            let t = total_measure(&s, depth).unwrap();
            let mut block = BigRational::zero();
            let mut d = s.radix_product(depth).unwrap();
            for r in 1..=period {
                let k = depth + r;
                d *= BigUint::from(s.cuts(k).unwrap());
                block += ratio(BigUint::from(s.spacer_sum(k).unwrap()), d.clone());
            }
            let mut period_product = BigUint::one();
            for r in 1..=period {
                period_product *= BigUint::from(s.cuts(depth + r).unwrap());
            }
            let m = BigRational::from(num_bigint::BigInt::from(period_product));
            // depth >= preamble here, so the tail is exactly periodic.
            let tail = block * m.clone() / (m - BigRational::one());
            assert_eq!(limit, t.partial.clone() + tail);
        }
    }
}

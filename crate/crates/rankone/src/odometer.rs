//! Ball addresses of the digit model and the adding-machine action on them.
//!
//! A level-`k` ball is addressed by digits `sigma_k ... sigma_1` (position 1
//! is the lowest) together with a floor index `sigma_0`. The digit string must
//! not be all-maximal ("all nines"); writing `zeta` for the lowest position
//! whose digit is not maximal and `iota` for that digit, the floor ranges over
//! `0 .. a_zeta^iota`. There are exactly `h_k` such addresses, and the ordinal
//!
//! ```text
//! Upsilon_k(sigma) = sum_{alpha=1}^{k} ( val(sigma_k..sigma_{alpha+1}) * sum_i a_alpha^i
//!                                        + sum_{i < sigma_alpha} a_alpha^i ) + sigma_0
//! ```
//!
//! (with `val` the mixed-radix value of the digits above position `alpha`)
//! enumerates them in lexicographic order: the transformation acts on
//! addresses as `Upsilon -> Upsilon + 1`, overflowing off the top of the tower
//! only at the single exceptional address `E_k = [9_k ... 9_2 8_1; a_1^{m_1-2}-1]`.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::system::{heights, CutSpacerSchedule};

/// Digits `sigma_k ... sigma_1` of a level-`k` cylinder, stored low-to-high.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u32>,
}

impl DigitString {
    /// Build from digits listed low-to-high (`digits[j-1]` is position `j`),
    /// checking each against its radix.
    pub fn new(schedule: &CutSpacerSchedule, digits: Vec<u32>) -> Result<Self> {
        schedule.ensure_depth(digits.len())?;
        for (idx, &d) in digits.iter().enumerate() {
            let radix = schedule.cuts(idx + 1)?;
            if d >= radix {
                return Err(Error::InvalidDigit {
                    position: idx + 1,
                    digit: d,
                    radix,
                });
            }
        }
        Ok(Self { digits })
    }

    /// The all-zero string of the given level.
    pub fn zeros(schedule: &CutSpacerSchedule, level: usize) -> Result<Self> {
        Self::new(schedule, vec![0; level])
    }

    /// Number of digit positions.
    pub fn level(&self) -> usize {
        self.digits.len()
    }

    /// Digit at 1-indexed position `j <= level`.
    pub fn digit(&self, position: usize) -> u32 {
        self.digits[position - 1]
    }

    /// Digits low-to-high (position 1 first).
    pub fn digits_low_to_high(&self) -> &[u32] {
        &self.digits
    }

    /// Whether every digit is maximal for its position.
    pub fn is_all_nines(&self, schedule: &CutSpacerSchedule) -> bool {
        self.digits
            .iter()
            .enumerate()
            .all(|(idx, &d)| match schedule.cuts(idx + 1) {
                Ok(radix) => d == radix - 1,
                Err(_) => false,
            })
    }
}

impl fmt::Display for DigitString {
    /// Digits printed high-to-low, space separated: level 2 string with
    /// `sigma_2 = 1, sigma_1 = 0` prints as `1 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (count, d) in self.digits.iter().rev().enumerate() {
            if count > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Lowest non-maximal position and its digit: `(zeta, iota)`.
///
/// Errors with [`Error::AllNines`] on the excluded all-maximal string.
pub fn zeta_iota(schedule: &CutSpacerSchedule, digits: &DigitString) -> Result<(usize, u32)> {
    for j in 1..=digits.level() {
        let d = digits.digit(j);
        if d != schedule.cuts(j)? - 1 {
            return Ok((j, d));
        }
    }
    Err(Error::AllNines)
}

/// Mixed-radix value of the digits at positions `beta ..= level`.
///
/// The digit at position `t` carries weight `m_beta * m_{beta+1} * ... * m_{t-1}`
/// (so position `beta` has weight 1). `beta = level + 1` denotes the empty
/// string and yields 0.
pub fn mixed_radix_value(
    schedule: &CutSpacerSchedule,
    digits: &DigitString,
    beta: usize,
) -> Result<BigUint> {
    if beta == 0 || beta > digits.level() + 1 {
        return Err(Error::PositionOutOfRange {
            position: beta,
            level: digits.level(),
        });
    }
    let mut value = BigUint::zero();
    let mut weight = BigUint::one();
    for t in beta..=digits.level() {
        value += BigUint::from(digits.digit(t)) * &weight;
        weight *= BigUint::from(schedule.cuts(t)?);
    }
    Ok(value)
}

/// A valid level-`k` ball address: digits plus floor, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallAddress {
    digits: DigitString,
    floor: u64,
}

impl BallAddress {
    /// Validate that the digits are not all-maximal and the floor is within
    /// the spacer bound `a_zeta^iota` determined by them.
    pub fn new(schedule: &CutSpacerSchedule, digits: DigitString, floor: u64) -> Result<Self> {
        if digits.level() == 0 {
            return Err(Error::InvalidLevel {
                level: 0,
                need: "a ball level k >= 1",
            });
        }
        let (zeta, iota) = zeta_iota(schedule, &digits)?;
        let bound = schedule.spacer(zeta, iota as usize)?;
        if floor >= bound {
            return Err(Error::InvalidFloor { floor, bound });
        }
        Ok(Self { digits, floor })
    }

    /// The base ball of the level: all-zero digits, floor 0.
    pub fn base(schedule: &CutSpacerSchedule, level: usize) -> Result<Self> {
        Self::new(schedule, DigitString::zeros(schedule, level)?, 0)
    }

    /// Re-run the validity checks (used by operations that take addresses).
    pub fn validate(&self, schedule: &CutSpacerSchedule) -> Result<()> {
        Self::new(schedule, self.digits.clone(), self.floor).map(|_| ())
    }

    pub fn level(&self) -> usize {
        self.digits.level()
    }

    pub fn digits(&self) -> &DigitString {
        &self.digits
    }

    pub fn floor(&self) -> u64 {
        self.floor
    }

    /// Exclusive floor bound `a_zeta^iota` of this address's digit string.
    pub fn floor_bound(&self, schedule: &CutSpacerSchedule) -> Result<u64> {
        let (zeta, iota) = zeta_iota(schedule, &self.digits)?;
        schedule.spacer(zeta, iota as usize)
    }
}

impl fmt::Display for BallAddress {
    /// `B2[1 0; 0]` — level, digits high-to-low, floor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}[{}; {}]", self.level(), self.digits, self.floor)
    }
}

/// Outcome of one step of the adding machine at ball level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuccessorResult {
    /// The next ball of the same level.
    Next(BallAddress),
    /// The step went off the top of the level-`k` tower (only from `E_k`).
    Top,
}

/// Measure `(m_1 ... m_k)^{-1}` of any level-`k` ball; `k = 0` gives 1, the
/// measure of the base copy of the digit space.
pub fn level_measure(schedule: &CutSpacerSchedule, k: usize) -> Result<BigRational> {
    Ok(BigRational::new(
        BigUint::one().into(),
        schedule.radix_product(k)?.into(),
    ))
}

/// Measure of the given ball: `(m_1 ... m_k)^{-1}` for its level `k`.
pub fn ball_measure(schedule: &CutSpacerSchedule, ball: &BallAddress) -> Result<BigRational> {
    ball.validate(schedule)?;
    level_measure(schedule, ball.level())
}

/// Ordinal of a ball among all balls of its level, in lexicographic order of
/// `(sigma_k, ..., sigma_1, sigma_0)` with the top digit most significant.
///
/// Implements the counting formula from the module docs; the successor and
/// enumeration tests pin it to the order oracle.
pub fn upsilon(schedule: &CutSpacerSchedule, ball: &BallAddress) -> Result<BigUint> {
    ball.validate(schedule)?;
    let k = ball.level();
    let mut total = BigUint::from(ball.floor());
    for alpha in 1..=k {
        let above = mixed_radix_value(schedule, ball.digits(), alpha + 1)?;
        let stage_total = BigUint::from(schedule.spacer_sum(alpha)?);
        let below_digit = BigUint::from(schedule.spacer_prefix(alpha, ball.digits().digit(alpha) as usize)?);
        total += above * stage_total + below_digit;
    }
    Ok(total)
}

/// Inverse of [`upsilon`]: the level-`k` ball with ordinal `t in [0, h_k)`.
///
/// Greedy mixed-radix peeling from the top digit down — no enumeration. At
/// each level the balls with top digit `j` occupy the ordinal range starting
/// at `j * h_{level-1} + sum_{i<j} a_level^i`; once the remainder reaches
/// `h_{level-1}` the remaining digits are forced maximal and the excess is the
/// floor.
pub fn ball_from_ordinal(schedule: &CutSpacerSchedule, k: usize, t: &BigUint) -> Result<BallAddress> {
    if k == 0 {
        return Err(Error::InvalidLevel {
            level: 0,
            need: "a ball level k >= 1",
        });
    }
    let table = heights(schedule, k)?;
    if t >= table.h(k) {
        return Err(Error::OrdinalOutOfRange {
            ordinal: t.to_string(),
            count: table.h(k).to_string(),
        });
    }
    let mut digits = vec![0u32; k];
    let mut rem = t.clone();
    for level in (1..=k).rev() {
        let h_below = table.h(level - 1);
        let m = schedule.cuts(level)?;
        let mut chosen = 0u32;
        let mut offset = BigUint::zero();
        for j in 0..m {
            let start =
                BigUint::from(j) * h_below + BigUint::from(schedule.spacer_prefix(level, j as usize)?);
            if start <= rem {
                chosen = j;
                offset = start;
            } else {
                break;
            }
        }
        digits[level - 1] = chosen;
        rem -= offset;
        if &rem >= h_below {
            // Everything below is maximal; the rest of the ordinal is the floor.
            let floor = (&rem - h_below)
                .to_u64()
                .expect("floor < a_level^chosen fits u64");
            for below in 1..level {
                digits[below - 1] = schedule.cuts(below)? - 1;
            }
            let ds = DigitString::new(schedule, digits)?;
            return BallAddress::new(schedule, ds, floor);
        }
    }
    unreachable!("h_0 = 0, so the loop always resolves at level 1")
}

/// One step of the adding machine on level-`k` addresses.
///
/// Increment the floor if it is below its bound; otherwise carry into the
/// digit string (positions below `zeta` reset to 0, `sigma_zeta` increments)
/// and restart at floor 0. The carry out of the top — all-maximal result — is
/// [`SuccessorResult::Top`] and happens exactly at `E_k`.
pub fn ball_successor(schedule: &CutSpacerSchedule, ball: &BallAddress) -> Result<SuccessorResult> {
    ball.validate(schedule)?;
    let bound = ball.floor_bound(schedule)?;
    if ball.floor() + 1 < bound {
        return Ok(SuccessorResult::Next(BallAddress {
            digits: ball.digits().clone(),
            floor: ball.floor() + 1,
        }));
    }
    let (zeta, _) = zeta_iota(schedule, ball.digits())?;
    let mut digits = ball.digits().digits_low_to_high().to_vec();
    for position in 1..zeta {
        digits[position - 1] = 0;
    }
    digits[zeta - 1] += 1;
    let ds = DigitString::new(schedule, digits)?;
    if ds.is_all_nines(schedule) {
        return Ok(SuccessorResult::Top);
    }
    Ok(SuccessorResult::Next(BallAddress::new(schedule, ds, 0)?))
}

/// The top ball `E_k = [9_k ... 9_2 8_1; a_1^{m_1-2} - 1]`, the unique address
/// whose successor leaves the level.
pub fn exceptional_ball(schedule: &CutSpacerSchedule, k: usize) -> Result<BallAddress> {
    if k == 0 {
        return Err(Error::InvalidLevel {
            level: 0,
            need: "a ball level k >= 1",
        });
    }
    schedule.ensure_depth(k)?;
    let mut digits = Vec::with_capacity(k);
    let m1 = schedule.cuts(1)?;
    digits.push(m1 - 2);
    for j in 2..=k {
        digits.push(schedule.cuts(j)? - 1);
    }
    let floor = schedule.spacer(1, (m1 - 2) as usize)? - 1;
    BallAddress::new(schedule, DigitString::new(schedule, digits)?, floor)
}

/// All `h_k` level-`k` balls in ordinal order.
///
/// Brute-force by construction — this is the enumeration oracle the rest of
/// the crate is tested against. Fails with [`Error::CapExceeded`] when `h_k`
/// exceeds `cap`.
pub fn enumerate_balls(
    schedule: &CutSpacerSchedule,
    k: usize,
    cap: usize,
) -> Result<Vec<BallAddress>> {
    let table = heights(schedule, k)?;
    if table.h(k) > &BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "ball enumeration",
            needed: table.h(k).to_string(),
            cap: cap.to_string(),
        });
    }
    let count = table.h(k).to_usize().expect("under cap");
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0u32; k];
    'strings: loop {
        let ds = DigitString::new(schedule, digits.clone())?;
        if let Ok((zeta, iota)) = zeta_iota(schedule, &ds) {
            let bound = schedule.spacer(zeta, iota as usize)?;
            for floor in 0..bound {
                out.push(BallAddress {
                    digits: ds.clone(),
                    floor,
                });
            }
        }
        // Mixed-radix increment, lowest position fastest; wrapping past the
        // top means the all-maximal string (skipped above) was the last one.
        let mut position = 0;
        loop {
            if position == k {
                break 'strings;
            }
            digits[position] += 1;
            if digits[position] == schedule.cuts(position + 1)? {
                digits[position] = 0;
                position += 1;
            } else {
                break;
            }
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// Children of a ball at the next level: prepend each top digit `i < m_{k+1}`.
///
/// The children partition the parent and inherit its floor (the lowest
/// non-maximal position is unchanged by prepending).
pub fn subdivide(schedule: &CutSpacerSchedule, ball: &BallAddress) -> Result<Vec<BallAddress>> {
    ball.validate(schedule)?;
    let next_level = ball.level() + 1;
    schedule.ensure_depth(next_level)?;
    let m = schedule.cuts(next_level)?;
    let mut children = Vec::with_capacity(m as usize);
    for i in 0..m {
        let mut digits = ball.digits().digits_low_to_high().to_vec();
        digits.push(i);
        children.push(BallAddress::new(
            schedule,
            DigitString::new(schedule, digits)?,
            ball.floor(),
        )?);
    }
    Ok(children)
}

/// Decomposition of the image of the top ball `E_k` under the transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopSplit {
    /// Deeper balls `[j 9_{l-1} ... 9_1; 0]`, `k < l <= max_level`, `j <= m_l - 2`.
    pub pieces: Vec<BallAddress>,
    /// Level the decomposition stopped at.
    pub max_level: usize,
    /// Measure `(m_1 ... m_{max_level})^{-1}` of the remaining all-maximal tail.
    pub residual_measure: BigRational,
}

/// Split the successor image of `E_k` into deeper balls down to `max_level`.
///
/// The image is the set of floor-0 points whose digits at positions
/// `1..=k` are all maximal; grouping by the lowest non-maximal position `l`
/// yields the pieces, plus a tail (positions `1..=max_level` all maximal) of
/// measure `(m_1 ... m_{max_level})^{-1}` that splits further at deeper levels.
pub fn top_split(schedule: &CutSpacerSchedule, k: usize, max_level: usize) -> Result<TopSplit> {
    if k == 0 {
        return Err(Error::InvalidLevel {
            level: 0,
            need: "a ball level k >= 1",
        });
    }
    if max_level <= k {
        return Err(Error::InvalidLevel {
            level: max_level,
            need: "max_level > k",
        });
    }
    schedule.ensure_depth(max_level)?;
    let mut pieces = Vec::new();
    for l in k + 1..=max_level {
        let m = schedule.cuts(l)?;
        for j in 0..=m - 2 {
            let mut digits = Vec::with_capacity(l);
            for position in 1..l {
                digits.push(schedule.cuts(position)? - 1);
            }
            digits.push(j);
            pieces.push(BallAddress::new(
                schedule,
                DigitString::new(schedule, digits)?,
                0,
            )?);
        }
    }
    Ok(TopSplit {
        pieces,
        max_level,
        residual_measure: level_measure(schedule, max_level)?,
    })
}

/// Ultrametric distance between equal-level digit strings: 1 over the radix
/// product of the agreeing low positions.
///
/// `d(x, y) = 0` if `x = y`; otherwise `1 / (m_1 ... m_j)` where positions
/// `1..=j` agree and position `j+1` differs.
pub fn ultrametric_distance(
    schedule: &CutSpacerSchedule,
    x: &DigitString,
    y: &DigitString,
) -> Result<BigRational> {
    if x.level() != y.level() {
        return Err(Error::LevelMismatch {
            left: x.level(),
            right: y.level(),
        });
    }
    schedule.ensure_depth(x.level())?;
    let mut agree = 0;
    while agree < x.level() && x.digit(agree + 1) == y.digit(agree + 1) {
        agree += 1;
    }
    if agree == x.level() {
        return Ok(BigRational::zero());
    }
    level_measure(schedule, agree)
}

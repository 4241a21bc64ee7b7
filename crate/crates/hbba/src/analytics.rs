//! Exact analytical error statistics: block and adder error-value PMFs, error
//! rates, and scalar metrics, with no simulation in the loop.
//!
//! The block model splits an approximate block into disjoint bit groups — the
//! OR section `[0, L)`, the mid full-adder bits `[L, H−S)`, and the chain bits
//! `[H−S, H)` — whose error contributions are independent under uniform inputs:
//!
//! * the OR section errs by exactly `x AND y` of its slice;
//! * the chain misses a carry (error `+2^H`) exactly when the mid bits generate
//!   and the chain bits all propagate.
//!
//! When the chain dips into the OR section (`H−S < L`) the groups overlap and no
//! product form exists; that case is computed by exact enumeration instead.

use thiserror::Error;

use crate::config::{AdderConfig, BlockSpec};
use crate::dyadic::Dyadic;
use crate::pmf::Pmf;
use crate::sim::{block_exhaustive_pmf, SimError, MAX_ORACLE_BLOCK_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("slice bits [{low}, {high}] invalid for a {bits}-bit distribution")]
    InvalidSlice { low: u32, high: u32, bits: u32 },
    #[error("slice distribution has values outside [0, 2^{bits})")]
    ValueOutOfRange { bits: u32 },
    #[error("chain width {chain} exceeds the {fa}-bit full-adder section")]
    ChainExceedsSection { chain: u32, fa: u32 },
    #[error("block with chain into the OR section needs enumeration, but width {width} > {MAX_ORACLE_BLOCK_BITS}")]
    EnumerationTooWide { width: u32 },
}

impl From<SimError> for AnalyticsError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::OracleBudget { width } => AnalyticsError::EnumerationTooWide { width },
            other => unreachable!("block oracle raised {other}"),
        }
    }
}

/// Marginal distribution of bits `[low, high]` (inclusive) of a value drawn
/// from `dist`, which must be supported on `[0, 2^bits)`.
pub fn slice_pmf(dist: &Pmf, low: u32, high: u32, bits: u32) -> Result<Pmf, AnalyticsError> {
    if low > high || high >= bits {
        return Err(AnalyticsError::InvalidSlice { low, high, bits });
    }
    if dist.min_value() < 0 || dist.max_value() >= 1i128 << bits {
        return Err(AnalyticsError::ValueOutOfRange { bits });
    }
    let width = high - low + 1;
    let mask = (1i128 << width) - 1;
    Ok(Pmf::from_entries(
        dist.iter().map(|(v, p)| ((v >> low) & mask, p.clone())),
    ))
}

/// PMF of `X + Y` for independent uniform `n`-bit `X`, `Y`: the triangular
/// `p(k) = (k+1)/2^(2n)` rising to `k = 2^n − 1` and falling symmetrically.
pub fn sum_pmf(n: u32) -> Pmf {
    let peak = (1i128 << n) - 1;
    let top = (1i128 << (n + 1)) - 2;
    Pmf::from_entries((0..=top).map(|k| {
        let count = if k <= peak { k + 1 } else { top - k + 1 };
        (k, Dyadic::new(count as u128, 2 * n))
    }))
}

/// PMF of `X + Y` for arbitrary independent distributions; the general form of
/// [`sum_pmf`] for non-uniform operands.
pub fn sum_pmf_general(px: &Pmf, py: &Pmf) -> Pmf {
    px.convolve(py)
}

/// Error PMF of an `L`-bit OR section: the error equals the bitwise AND of the
/// two operand slices, so `p(v) = (1/4)^popcount(v) · (3/4)^(L−popcount(v))`.
pub fn or_error_pmf(or_width: u32) -> Pmf {
    Pmf::from_entries((0..1u128 << or_width).map(|v| {
        let ones = v.count_ones();
        let num = 3u128.pow(or_width - ones);
        (v as i128, Dyadic::new(num, 2 * or_width))
    }))
}

/// Probability that the sum of two uniform `m`-bit slices generates a carry:
/// `Pr(X+Y ≥ 2^m) = (2^m − 1) / 2^(m+1)`.
pub fn generate_prob(m: u32) -> Dyadic {
    if m == 0 {
        Dyadic::zero()
    } else {
        Dyadic::new((1u128 << m) - 1, m + 1)
    }
}

/// Probability that `s` chain bits all propagate: `1/2^s`.
pub fn propagate_prob(s: u32) -> Dyadic {
    Dyadic::inv_pow2(s)
}

/// Probability that a block's full-adder section produces a carry the `s`-bit
/// chain fails to emit: the bits below the chain generate and the chain bits
/// all propagate.
pub fn trunc_miss_prob(fa_width: u32, s: u32) -> Result<Dyadic, AnalyticsError> {
    if s > fa_width {
        return Err(AnalyticsError::ChainExceedsSection {
            chain: s,
            fa: fa_width,
        });
    }
    Ok(generate_prob(fa_width - s).mul(&propagate_prob(s)))
}

/// Exact error-value PMF of one block under uniform inputs with carry-in 0.
pub fn block_error_pmf(spec: &BlockSpec) -> Result<Pmf, AnalyticsError> {
    if spec.is_accurate() {
        return Ok(Pmf::point(0));
    }
    let h = spec.width();
    let l = spec.or_width();
    let s = spec.chain_width();
    if h - s >= l {
        let or_pmf = or_error_pmf(l);
        let miss = trunc_miss_prob(h - l, s)?;
        if miss.is_zero() {
            // Chain covers the whole full-adder section: OR errors only.
            return Ok(or_pmf);
        }
        let hit = miss.complement();
        let weight = 1i128 << h;
        Ok(Pmf::from_entries(or_pmf.iter().flat_map(|(v, p)| {
            [(v, hit.mul(p)), (v + weight, miss.mul(p))]
        })))
    } else {
        // Chain reaches into the OR section; no closed form.
        Ok(block_exhaustive_pmf(spec)?)
    }
}

/// Probability that one block produces any error, via the union of the OR-section
/// event and the truncation event (independent over disjoint bit groups).
pub fn block_error_rate(spec: &BlockSpec) -> Result<Dyadic, AnalyticsError> {
    if spec.is_accurate() {
        return Ok(Dyadic::zero());
    }
    let h = spec.width();
    let l = spec.or_width();
    let s = spec.chain_width();
    if h - s >= l {
        let or_err = Dyadic::new(3u128.pow(l), 2 * l).complement();
        let miss = trunc_miss_prob(h - l, s)?;
        // Inclusion–exclusion with independent events.
        let both = or_err.mul(&miss);
        Ok(or_err
            .add(&miss)
            .checked_sub(&both)
            .expect("union stays in [0,1]"))
    } else {
        Ok(block_error_pmf(spec)?.prob(0).complement())
    }
}

/// Error-value PMF of the whole adder: the convolution of the block PMFs with
/// each block's values weighted by its position.
pub fn adder_error_pmf(cfg: &AdderConfig) -> Result<Pmf, AnalyticsError> {
    let h = cfg.block_bits();
    let mut acc = Pmf::point(0);
    for (i, spec) in cfg.blocks().iter().enumerate() {
        if spec.is_accurate() {
            continue;
        }
        let weight = 1i128 << (i as u32 * h);
        acc = acc.convolve(&block_error_pmf(spec)?.scale_values(weight));
    }
    Ok(acc)
}

/// Whether the analytic model is exact for this configuration: every
/// approximate block either is the lowest block or sits above a block with
/// S = 0, so its predicted carry-in is the constant zero the block PMFs
/// assume. (Accurate blocks absorb any incoming carry exactly, so they never
/// break the condition.)
pub fn exactness_condition(cfg: &AdderConfig) -> bool {
    cfg.blocks()
        .iter()
        .enumerate()
        .all(|(i, b)| b.is_accurate() || i == 0 || cfg.blocks()[i - 1].chain_width() == 0)
}

/// Adder error rate as the union of the independent per-block error events:
/// `1 − Π(1 − ER_i)`.
pub fn adder_error_rate(cfg: &AdderConfig) -> Result<Dyadic, AnalyticsError> {
    let mut ok = Dyadic::one();
    for spec in cfg.approx_blocks() {
        ok = ok.mul(&block_error_rate(spec)?.complement());
    }
    Ok(ok.complement())
}

/// The same union computed by the literal inclusion–exclusion expansion over
/// block subsets. Exponential in the block count; used to cross-check
/// [`adder_error_rate`].
pub fn adder_error_rate_inclusion_exclusion(cfg: &AdderConfig) -> Result<Dyadic, AnalyticsError> {
    let rates: Vec<Dyadic> = cfg
        .approx_blocks()
        .map(block_error_rate)
        .collect::<Result<_, _>>()?;
    assert!(rates.len() <= 24, "expansion over 2^k subsets");
    let mut plus = Dyadic::zero();
    let mut minus = Dyadic::zero();
    for subset in 1u32..1 << rates.len() {
        let mut term = Dyadic::one();
        for (i, r) in rates.iter().enumerate() {
            if subset >> i & 1 != 0 {
                term = term.mul(r);
            }
        }
        if subset.count_ones() % 2 == 1 {
            plus = plus.add(&term);
        } else {
            minus = minus.add(&term);
        }
    }
    Ok(plus.checked_sub(&minus).expect("union stays in [0,1]"))
}

/// Scalar metrics computed exactly from an error PMF.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMetrics {
    /// `1 − p(0)`.
    pub error_rate: Dyadic,
    /// `Σ |e| · p(e)`.
    pub med: Dyadic,
    /// `Σ e² · p(e)`.
    pub mse: Dyadic,
    /// Largest |e| with nonzero probability.
    pub max_ed: u128,
    /// MED normalized by the maximum output `2^(bits+1) − 2`.
    pub nmed: f64,
}

pub fn metrics_from_pmf(pmf: &Pmf, bits: u32) -> AnalyticMetrics {
    let mut med = Dyadic::zero();
    let mut mse = Dyadic::zero();
    let mut max_ed = 0u128;
    for (e, p) in pmf.iter() {
        let ed = e.unsigned_abs();
        med = med.add(&p.mul_int(ed));
        mse = mse.add(&p.mul_int(ed * ed));
        max_ed = max_ed.max(ed);
    }
    let max_output = ((1u128 << (bits + 1)) - 2) as f64;
    AnalyticMetrics {
        error_rate: pmf.prob(0).complement(),
        nmed: med.to_f64() / max_output,
        med,
        mse,
        max_ed,
    }
}

//! Gate-count hardware estimation: delay, area, power and energy for any adder
//! configuration.
//!
//! The model counts 2-input gates and gate-level depth. Delay and area follow
//! the per-block formulas directly. Power is a normalized figure of merit
//! `c_p · (gates · depth) / (gates_ref · depth_ref)` anchored so the exact
//! carry-lookahead adder of the same width scores exactly `c_p`; it preserves
//! the proportionalities (dynamic ∝ area·delay, static ∝ area) that ranking
//! needs, but the absolute microwatt values are not physical. Energy is
//! `power × delay`, which in µW·ps lands directly in attojoules.
//!
//! Note that a block with `S = 0` reports zero delay: the delay formula tracks
//! only the carry path, exactly as printed; the sum logic's depth is ignored.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::config::{AdderConfig, BlockSpec};

/// Per-gate technology constants (32 nm class defaults).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TechConstants {
    /// Delay per gate level, picoseconds.
    pub c_d_ps: f64,
    /// Area per gate, µm².
    pub c_a_um2: f64,
    /// Power anchor, µW (score of the same-width exact CLA).
    pub c_p_uw: f64,
}

impl Default for TechConstants {
    fn default() -> Self {
        TechConstants {
            c_d_ps: 12.14,
            c_a_um2: 0.70,
            c_p_uw: 9.24,
        }
    }
}

#[derive(Debug, Error)]
pub enum TechFileError {
    #[error("cannot read technology file: {0}")]
    Io(#[from] std::io::Error),
    #[error("technology file line {line}: expected `key = value`, got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("technology file line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("technology file line {line}: '{value}' is not a positive number")]
    BadValue { line: usize, value: String },
}

impl TechConstants {
    /// Loads a flat `key = value` file with keys `c_d_ps`, `c_a_um2`, `c_p_uw`;
    /// missing keys keep their defaults, `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<TechConstants, TechFileError> {
        let text = std::fs::read_to_string(path)?;
        let mut tc = TechConstants::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| TechFileError::Malformed {
                    line,
                    text: raw.to_string(),
                })?;
            let parsed: f64 = value.trim().parse().map_err(|_| TechFileError::BadValue {
                line,
                value: value.trim().to_string(),
            })?;
            if !(parsed > 0.0 && parsed.is_finite()) {
                return Err(TechFileError::BadValue {
                    line,
                    value: value.trim().to_string(),
                });
            }
            match key.trim() {
                "c_d_ps" => tc.c_d_ps = parsed,
                "c_a_um2" => tc.c_a_um2 = parsed,
                "c_p_uw" => tc.c_p_uw = parsed,
                other => {
                    return Err(TechFileError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }
        Ok(tc)
    }
}

impl fmt::Display for TechConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c_d_ps={} c_a_um2={} c_p_uw={}",
            self.c_d_ps, self.c_a_um2, self.c_p_uw
        )
    }
}

/// Gate-level depth of a block's critical path.
pub fn block_depth_levels(spec: &BlockSpec) -> u64 {
    let h = spec.width() as u64;
    if spec.is_accurate() {
        return 2 * (h + 1);
    }
    let l = spec.or_width() as u64;
    let s = spec.chain_width() as u64;
    if s == 0 {
        0
    } else if h - s <= l {
        2 * (s + 1)
    } else {
        2 * (h - s - l)
    }
}

/// Delay of one block in picoseconds.
pub fn block_delay_ps(spec: &BlockSpec, tc: &TechConstants) -> f64 {
    tc.c_d_ps * block_depth_levels(spec) as f64
}

/// 2-input gate count of one block: propagate/generate, sum, and carry parts.
pub fn block_area_gates(spec: &BlockSpec) -> u64 {
    let h = spec.width() as u64;
    if spec.is_accurate() {
        return 9 * h;
    }
    let l = spec.or_width() as u64;
    let s = spec.chain_width() as u64;
    let pg = if h - s > l { 4 * h - 3 * l } else { 4 * s + l };
    let sum = if s == 0 { 3 * (h - l) } else { 3 * (h - l) + 2 };
    let carry = if s == 0 {
        0
    } else if h - s <= l {
        2 * (s - 1)
    } else {
        2 * (h - l - 1)
    };
    pg + sum + carry
}

/// Hardware figures for a whole adder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardwareEstimate {
    pub delay_ps: f64,
    pub area_um2: f64,
    pub power_uw: f64,
    pub energy_aj: f64,
    /// Total 2-input gates; the exact surrogate behind `area_um2`.
    pub gate_count: u64,
    /// Total gate levels across blocks; the exact surrogate behind `delay_ps`.
    pub gate_depth: u64,
}

pub fn adder_estimate(cfg: &AdderConfig, tc: &TechConstants) -> HardwareEstimate {
    let gate_count: u64 = cfg.blocks().iter().map(block_area_gates).sum();
    let gate_depth: u64 = cfg.blocks().iter().map(block_depth_levels).sum();
    // Same-width exact CLA reference for the power normalization.
    let blocks = (cfg.bits() / cfg.block_bits()) as u64;
    let ref_gates = 9 * cfg.bits() as u64;
    let ref_depth = blocks * 2 * (cfg.block_bits() as u64 + 1);
    let delay_ps = tc.c_d_ps * gate_depth as f64;
    let power_uw = tc.c_p_uw * (gate_count * gate_depth) as f64 / (ref_gates * ref_depth) as f64;
    HardwareEstimate {
        delay_ps,
        area_um2: tc.c_a_um2 * gate_count as f64,
        power_uw,
        energy_aj: power_uw * delay_ps,
        gate_count,
        gate_depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AdderConfig;

    fn approx(h: u32, l: u32, s: u32) -> BlockSpec {
        BlockSpec::approximate(h, l, s).unwrap()
    }

    #[test]
    fn accurate_block_delay() {
        let tc = TechConstants::default();
        assert_eq!(
            block_delay_ps(&BlockSpec::accurate(4), &tc),
            2.0 * 12.14 * 5.0
        );
    }

    #[test]
    fn zero_chain_block_has_zero_delay() {
        let tc = TechConstants::default();
        assert_eq!(block_delay_ps(&approx(4, 2, 0), &tc), 0.0);
    }

    #[test]
    fn short_chain_delay() {
        let tc = TechConstants::default();
        assert_eq!(block_delay_ps(&approx(4, 2, 1), &tc), 2.0 * 12.14 * 1.0);
    }

    #[test]
    fn gate_counts() {
        assert_eq!(block_area_gates(&BlockSpec::accurate(4)), 36);
        // (4,2,2): PG = 4·2+2 = 10, Sum = 3·2+2 = 8, Carry = 2·1 = 2.
        assert_eq!(block_area_gates(&approx(4, 2, 2)), 20);
        // (4,4,0): pure OR block.
        assert_eq!(block_area_gates(&approx(4, 4, 0)), 4);
        // (4,2,0): PG = 16−6 = 10, Sum = 6, Carry = 0.
        assert_eq!(block_area_gates(&approx(4, 2, 0)), 16);
    }

    #[test]
    fn accurate_equals_approx_formulas_at_l0_s_h() {
        for h in 1..=12 {
            let acc = BlockSpec::accurate(h);
            let app = approx(h, 0, h);
            assert_eq!(block_area_gates(&acc), block_area_gates(&app), "H={h}");
            assert_eq!(block_area_gates(&acc), 9 * h as u64);
            assert_eq!(block_depth_levels(&acc), block_depth_levels(&app));
        }
    }

    #[test]
    fn all_or_block_minimizes_area() {
        for h in 1..=8u32 {
            let all_or = block_area_gates(&approx(h, h, 0));
            for l in 0..=h {
                for s in 0..=h {
                    assert!(
                        block_area_gates(&approx(h, l, s)) >= all_or,
                        "H={h} L={l} S={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn delay_monotone_within_long_truncation_branch() {
        // S=0 lives in its own (zero-delay) branch, so it is excluded here.
        for h in 2..=8u32 {
            for l in 0..h {
                let tc = TechConstants::default();
                let mut prev = f64::INFINITY;
                for s in 1..=h {
                    if h - s > l {
                        let d = block_delay_ps(&approx(h, l, s), &tc);
                        assert!(d <= prev, "H={h} L={l} S={s}");
                        prev = d;
                    }
                }
            }
        }
    }

    #[test]
    fn adder_estimates() {
        let tc = TechConstants::default();
        let exact = AdderConfig::parse("HBBA{[],[]}", 8, 4).unwrap();
        let e = adder_estimate(&exact, &tc);
        assert_eq!(e.delay_ps, 242.8);
        assert_eq!(e.gate_count, 72);
        assert!((e.area_um2 - 50.4).abs() < 1e-12);
        // Exact CLA anchors the power normalization.
        assert!((e.power_uw - tc.c_p_uw).abs() < 1e-12);

        let cfg = AdderConfig::parse("HBBA{[2],[0]}", 8, 4).unwrap();
        let e = adder_estimate(&cfg, &tc);
        assert_eq!(e.delay_ps, 121.4);
        assert_eq!(e.gate_count, 52);
        assert!((e.area_um2 - 36.4).abs() < 1e-12);
    }

    #[test]
    fn energy_is_power_times_delay() {
        let tc = TechConstants::default();
        for text in [
            "HBBA{[],[]}",
            "HBBA{[2],[0]}",
            "HBBA{[2,1],[0,3]}",
            "HBBA{[4,4],[0,0]}",
        ] {
            let cfg = AdderConfig::parse(text, 8, 4).unwrap();
            let e = adder_estimate(&cfg, &tc);
            assert_eq!(e.energy_aj, e.power_uw * e.delay_ps, "{text}");
        }
    }

    #[test]
    fn tech_file_overrides() {
        let dir = std::env::temp_dir().join("hbba-tech-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tech.txt");
        std::fs::write(&path, "# test constants\nc_d_ps = 10.0\nc_p_uw = 5.5\n").unwrap();
        let tc = TechConstants::from_file(&path).unwrap();
        assert_eq!(tc.c_d_ps, 10.0);
        assert_eq!(tc.c_a_um2, 0.70); // default kept
        assert_eq!(tc.c_p_uw, 5.5);

        std::fs::write(&path, "c_x = 1.0\n").unwrap();
        assert!(matches!(
            TechConstants::from_file(&path),
            Err(TechFileError::UnknownKey { .. })
        ));
        std::fs::write(&path, "c_d_ps = -3\n").unwrap();
        assert!(matches!(
            TechConstants::from_file(&path),
            Err(TechFileError::BadValue { .. })
        ));
    }
}

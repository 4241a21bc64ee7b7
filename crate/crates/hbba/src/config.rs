//! Adder configurations: fixed-width blocks, each either an exact carry-lookahead
//! sub-adder or an approximate sub-adder with `L` OR-replaced low bits and an
//! `S`-bit carry chain.
//!
//! The text form is `HBBA{[L_1,...,L_a],[S_1,...,S_a]}` with vectors ordered
//! least-significant block first; blocks not listed are accurate and sit above
//! the approximate ones. A JSON document `{"n":..,"h":..,"l_vec":[..],"s_vec":[..]}`
//! is accepted anywhere the text form is.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Widest supported adder. Keeps operands, results and error values inside
/// `u128`/`i128` throughout the simulator.
pub const MAX_BITS: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Accurate,
    Approximate,
}

/// One sub-adder of `width` bits.
///
/// For approximate blocks `or_width` (L) low bits are computed by OR gates and
/// the carry-out comes from a chain over the top `chain_width` (S) bits.
/// Accurate blocks carry the fixed parameters (L=0, S=width).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    kind: BlockKind,
    width: u32,
    or_width: u32,
    chain_width: u32,
}

impl BlockSpec {
    pub fn accurate(width: u32) -> BlockSpec {
        BlockSpec {
            kind: BlockKind::Accurate,
            width,
            or_width: 0,
            chain_width: width,
        }
    }

    pub fn approximate(
        width: u32,
        or_width: u32,
        chain_width: u32,
    ) -> Result<BlockSpec, ConfigError> {
        if or_width > width {
            return Err(ConfigError::OrWidthOutOfRange { or_width, width });
        }
        if chain_width > width {
            return Err(ConfigError::ChainWidthOutOfRange { chain_width, width });
        }
        Ok(BlockSpec {
            kind: BlockKind::Approximate,
            width,
            or_width,
            chain_width,
        })
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn is_accurate(&self) -> bool {
        self.kind == BlockKind::Accurate
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// L: number of low bits whose full adders are replaced by OR gates.
    pub fn or_width(&self) -> u32 {
        self.or_width
    }

    /// S: number of top bits feeding the carry-out chain.
    pub fn chain_width(&self) -> u32 {
        self.chain_width
    }

    /// Width of the full-adder section, `width - or_width`.
    pub fn fa_width(&self) -> u32 {
        self.width - self.or_width
    }
}

/// A validated adder configuration: `bits / block_bits` blocks of uniform width,
/// approximate blocks forming a contiguous run from the least-significant block,
/// accurate blocks above.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdderConfig {
    bits: u32,
    block_bits: u32,
    blocks: Vec<BlockSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("configuration syntax error: {0}")]
    Syntax(String),
    #[error("L and S vectors differ in length ({l_len} vs {s_len})")]
    LengthMismatch { l_len: usize, s_len: usize },
    #[error("L={or_width} out of range for a block of width {width}")]
    OrWidthOutOfRange { or_width: u32, width: u32 },
    #[error("S={chain_width} out of range for a block of width {width}")]
    ChainWidthOutOfRange { chain_width: u32, width: u32 },
    #[error("adder width {bits} is not divisible by block width {block_bits}")]
    NotDivisible { bits: u32, block_bits: u32 },
    #[error("{count} approximate blocks exceed the {max} available blocks")]
    TooManyBlocks { count: usize, max: u32 },
    #[error("adder width must be between 1 and {MAX_BITS} bits, got {bits}")]
    WidthOutOfRange { bits: u32 },
    #[error("block width must be positive")]
    ZeroBlockWidth,
    #[error("block {index} has width {found}, expected uniform width {expected}")]
    NonUniformWidth {
        index: usize,
        found: u32,
        expected: u32,
    },
    #[error("accurate block {index} appears below an approximate block")]
    AccurateBelowApproximate { index: usize },
    #[error("width given as {given} conflicts with the document's n={doc}")]
    BitsMismatch { given: u32, doc: u32 },
    #[error("block width given as {given} conflicts with the document's h={doc}")]
    BlockBitsMismatch { given: u32, doc: u32 },
}

/// Structured document form of a configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub n: u32,
    pub h: u32,
    pub l_vec: Vec<u32>,
    pub s_vec: Vec<u32>,
}

impl AdderConfig {
    /// Builds a configuration from per-block `(L, S)` pairs for the approximate
    /// run (least-significant first); remaining blocks are accurate.
    pub fn new(
        bits: u32,
        block_bits: u32,
        approx: &[(u32, u32)],
    ) -> Result<AdderConfig, ConfigError> {
        if bits == 0 || bits > MAX_BITS {
            return Err(ConfigError::WidthOutOfRange { bits });
        }
        if block_bits == 0 {
            return Err(ConfigError::ZeroBlockWidth);
        }
        if !bits.is_multiple_of(block_bits) {
            return Err(ConfigError::NotDivisible { bits, block_bits });
        }
        let total = bits / block_bits;
        if approx.len() as u32 > total {
            return Err(ConfigError::TooManyBlocks {
                count: approx.len(),
                max: total,
            });
        }
        let mut blocks = Vec::with_capacity(total as usize);
        for &(l, s) in approx {
            blocks.push(BlockSpec::approximate(block_bits, l, s)?);
        }
        for _ in approx.len() as u32..total {
            blocks.push(BlockSpec::accurate(block_bits));
        }
        Ok(AdderConfig {
            bits,
            block_bits,
            blocks,
        })
    }

    /// Builds from an explicit block list, enforcing uniform widths and the
    /// approximate-below-accurate layout.
    pub fn from_blocks(
        bits: u32,
        block_bits: u32,
        blocks: Vec<BlockSpec>,
    ) -> Result<AdderConfig, ConfigError> {
        let mut approx = Vec::new();
        let mut seen_accurate = false;
        for (index, b) in blocks.iter().enumerate() {
            if b.width() != block_bits {
                return Err(ConfigError::NonUniformWidth {
                    index,
                    found: b.width(),
                    expected: block_bits,
                });
            }
            match b.kind() {
                BlockKind::Approximate => {
                    if seen_accurate {
                        return Err(ConfigError::AccurateBelowApproximate { index: index - 1 });
                    }
                    approx.push((b.or_width(), b.chain_width()));
                }
                BlockKind::Accurate => seen_accurate = true,
            }
        }
        if blocks.len() as u64 * block_bits as u64 != bits as u64 {
            return Err(ConfigError::NotDivisible { bits, block_bits });
        }
        AdderConfig::new(bits, block_bits, &approx)
    }

    /// Parses either the `HBBA{[...],[...]}` text form or a JSON document.
    /// For the JSON form, `bits`/`block_bits` must agree with the document.
    pub fn parse(text: &str, bits: u32, block_bits: u32) -> Result<AdderConfig, ConfigError> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let doc: ConfigDocument =
                serde_json::from_str(trimmed).map_err(|e| ConfigError::Syntax(e.to_string()))?;
            if doc.n != bits {
                return Err(ConfigError::BitsMismatch {
                    given: bits,
                    doc: doc.n,
                });
            }
            if doc.h != block_bits {
                return Err(ConfigError::BlockBitsMismatch {
                    given: block_bits,
                    doc: doc.h,
                });
            }
            return AdderConfig::from_document(&doc);
        }
        let (l_vec, s_vec) = parse_vectors(trimmed)?;
        if l_vec.len() != s_vec.len() {
            return Err(ConfigError::LengthMismatch {
                l_len: l_vec.len(),
                s_len: s_vec.len(),
            });
        }
        let approx: Vec<(u32, u32)> = l_vec.into_iter().zip(s_vec).collect();
        AdderConfig::new(bits, block_bits, &approx)
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<AdderConfig, ConfigError> {
        if doc.l_vec.len() != doc.s_vec.len() {
            return Err(ConfigError::LengthMismatch {
                l_len: doc.l_vec.len(),
                s_len: doc.s_vec.len(),
            });
        }
        let approx: Vec<(u32, u32)> = doc
            .l_vec
            .iter()
            .copied()
            .zip(doc.s_vec.iter().copied())
            .collect();
        AdderConfig::new(doc.n, doc.h, &approx)
    }

    pub fn to_document(&self) -> ConfigDocument {
        ConfigDocument {
            n: self.bits,
            h: self.block_bits,
            l_vec: self.approx_blocks().map(|b| b.or_width()).collect(),
            s_vec: self.approx_blocks().map(|b| b.chain_width()).collect(),
        }
    }

    /// Deterministic text form; round-trips through [`AdderConfig::parse`].
    pub fn canonical_string(&self) -> String {
        let join = |f: fn(&BlockSpec) -> u32| {
            self.approx_blocks()
                .map(|b| f(b).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "HBBA{{[{}],[{}]}}",
            join(BlockSpec::or_width),
            join(BlockSpec::chain_width)
        )
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn block_bits(&self) -> u32 {
        self.block_bits
    }

    /// Blocks in evaluation order, least-significant first.
    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn approx_blocks(&self) -> impl Iterator<Item = &BlockSpec> {
        self.blocks.iter().filter(|b| !b.is_accurate())
    }

    pub fn approx_count(&self) -> usize {
        self.approx_blocks().count()
    }

    pub fn is_exact(&self) -> bool {
        self.approx_count() == 0
    }

    /// Largest representable output value, `2^(bits+1) - 2`.
    pub fn max_output(&self) -> u128 {
        (1u128 << (self.bits + 1)) - 2
    }
}

impl std::fmt::Display for AdderConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

fn parse_vectors(text: &str) -> Result<(Vec<u32>, Vec<u32>), ConfigError> {
    // Whitespace is insignificant everywhere in the text form.
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact
        .strip_prefix("HBBA{")
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| syntax("expected HBBA{[...],[...]}"))?;
    let body = body
        .strip_prefix('[')
        .ok_or_else(|| syntax("expected '[' after 'HBBA{'"))?;
    let (first, rest) = body
        .split_once(']')
        .ok_or_else(|| syntax("unterminated first vector"))?;
    let rest = rest
        .strip_prefix(",[")
        .ok_or_else(|| syntax("expected ',[' between vectors"))?;
    let second = rest
        .strip_suffix(']')
        .ok_or_else(|| syntax("unterminated second vector"))?;
    Ok((parse_ints(first)?, parse_ints(second)?))
}

fn parse_ints(list: &str) -> Result<Vec<u32>, ConfigError> {
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|tok| {
            tok.parse::<u32>()
                .map_err(|_| syntax(&format!("invalid integer '{tok}'")))
        })
        .collect()
}

fn syntax(msg: &str) -> ConfigError {
    ConfigError::Syntax(msg.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_approx_blocks() {
        let cfg = AdderConfig::parse("HBBA{[2,2],[0,0]}", 16, 4).unwrap();
        assert_eq!(cfg.blocks().len(), 4);
        assert_eq!(cfg.approx_count(), 2);
        let b0 = &cfg.blocks()[0];
        assert_eq!((b0.or_width(), b0.chain_width()), (2, 0));
        assert!(cfg.blocks()[2].is_accurate());
        assert!(cfg.blocks()[3].is_accurate());
    }

    #[test]
    fn parses_empty_vectors_as_exact_adder() {
        let cfg = AdderConfig::parse("HBBA{[],[]}", 8, 4).unwrap();
        assert!(cfg.is_exact());
        assert_eq!(cfg.blocks().len(), 2);
    }

    #[test]
    fn rejects_chain_wider_than_block() {
        let err = AdderConfig::parse("HBBA{[2],[5]}", 8, 4).unwrap_err();
        assert_eq!(
            err,
            ConfigError::ChainWidthOutOfRange {
                chain_width: 5,
                width: 4
            }
        );
    }

    #[test]
    fn rejects_indivisible_width() {
        let err = AdderConfig::parse("HBBA{[],[]}", 10, 4).unwrap_err();
        assert!(matches!(err, ConfigError::NotDivisible { .. }));
    }

    #[test]
    fn rejects_length_mismatch() {
        let err = AdderConfig::parse("HBBA{[2,2],[0]}", 16, 4).unwrap_err();
        assert!(matches!(err, ConfigError::LengthMismatch { .. }));
    }

    #[test]
    fn rejects_too_many_blocks() {
        let err = AdderConfig::parse("HBBA{[1,1,1],[0,0,0]}", 8, 4).unwrap_err();
        assert!(matches!(err, ConfigError::TooManyBlocks { .. }));
    }

    #[test]
    fn canonical_round_trip() {
        for text in ["HBBA{[2,1],[0,3]}", "HBBA{[],[]}", "HBBA{[4,0],[0,0]}"] {
            let cfg = AdderConfig::parse(text, 8, 4).unwrap();
            assert_eq!(cfg.canonical_string(), *text);
            assert_eq!(
                AdderConfig::parse(&cfg.canonical_string(), 8, 4).unwrap(),
                cfg
            );
        }
    }

    #[test]
    fn normalizes_whitespace() {
        let cfg = AdderConfig::parse("HBBA{[ 2 , 2 ],[0,2]}", 16, 4).unwrap();
        assert_eq!(cfg.canonical_string(), "HBBA{[2,2],[0,2]}");
    }

    #[test]
    fn json_document_form() {
        let cfg =
            AdderConfig::parse(r#"{"n":16,"h":4,"l_vec":[2,2],"s_vec":[0,1]}"#, 16, 4).unwrap();
        assert_eq!(cfg.canonical_string(), "HBBA{[2,2],[0,1]}");
        let err =
            AdderConfig::parse(r#"{"n":16,"h":4,"l_vec":[2],"s_vec":[0]}"#, 8, 4).unwrap_err();
        assert!(matches!(err, ConfigError::BitsMismatch { .. }));
    }

    #[test]
    fn from_blocks_rejects_accurate_below_approximate() {
        let blocks = vec![
            BlockSpec::accurate(4),
            BlockSpec::approximate(4, 2, 0).unwrap(),
        ];
        let err = AdderConfig::from_blocks(8, 4, blocks).unwrap_err();
        assert!(matches!(err, ConfigError::AccurateBelowApproximate { .. }));
    }

    #[test]
    fn document_round_trip() {
        let cfg = AdderConfig::parse("HBBA{[2,1],[0,3]}", 16, 4).unwrap();
        let doc = cfg.to_document();
        assert_eq!(AdderConfig::from_document(&doc).unwrap(), cfg);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arbitrary_config() -> impl Strategy<Value = AdderConfig> {
            (1u32..=6, 1u32..=6).prop_flat_map(|(h, blocks)| {
                proptest::collection::vec((0..=h, 0..=h), 0..=blocks as usize)
                    .prop_map(move |approx| AdderConfig::new(h * blocks, h, &approx).unwrap())
            })
        }

        proptest! {
            #[test]
            fn parse_inverts_canonical_string(cfg in arbitrary_config()) {
                let text = cfg.canonical_string();
                let reparsed = AdderConfig::parse(&text, cfg.bits(), cfg.block_bits()).unwrap();
                prop_assert_eq!(reparsed, cfg);
            }

            #[test]
            fn document_form_round_trips(cfg in arbitrary_config()) {
                let json = serde_json::to_string(&cfg.to_document()).unwrap();
                let reparsed = AdderConfig::parse(&json, cfg.bits(), cfg.block_bits()).unwrap();
                prop_assert_eq!(reparsed, cfg);
            }
        }
    }
}

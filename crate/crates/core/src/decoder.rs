//! The fuzzy n-to-2^n decoder.
//!
//! A binary n-to-2^n line decoder raises exactly one of its 2^n outputs for
//! each input word. Here the inputs are continuous cone responses in [0, 1]
//! and every output code gets an activation
//!
//! ```text
//! activation(w) = max(0, min{ c_i : w_i = 1 } - max{ c_i : w_i = 0 })
//! ```
//!
//! with the empty minimum taken as 1 and the empty maximum as 0. For three
//! channels in (B, G, R) order this yields blackness, the six unique-color
//! signals and whiteness. On binary inputs it reduces to the ordinary
//! decoder.

use std::fmt;

use crate::error::{Error, Result};

/// Largest channel count a [`ChannelVector`] may carry. Decoder output is
/// stored densely, so this bounds it at 256 activations.
pub const MAX_CHANNELS: usize = 8;

/// Channel indices of the trichromatic (B, G, R) convention.
pub const B: usize = 0;
pub const G: usize = 1;
pub const R: usize = 2;

/// A validated vector of `n` cone responses, each in [0, 1].
#[derive(Clone, Copy, PartialEq)]
pub struct ChannelVector {
    len: u8,
    values: [f64; MAX_CHANNELS],
}

impl ChannelVector {
    /// Validate raw responses. Values are never clamped.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if values.len() > MAX_CHANNELS {
            return Err(Error::TooManyChannels {
                n: values.len(),
                max: MAX_CHANNELS,
            });
        }
        let mut buf = [0.0; MAX_CHANNELS];
        for (index, (&value, slot)) in values.iter().zip(buf.iter_mut()).enumerate() {
            // also rejects NaN
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange { index, value });
            }
            *slot = value;
        }
        Ok(Self {
            len: values.len() as u8,
            values: buf,
        })
    }

    pub fn bgr(b: f64, g: f64, r: f64) -> Result<Self> {
        Self::new(&[b, g, r])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.len()]
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values().get(index).copied()
    }

    /// The (B, G, R) triple, or a dimension error for n != 3.
    pub fn as_bgr(&self) -> Result<[f64; 3]> {
        match *self.values() {
            [b, g, r] => Ok([b, g, r]),
            _ => Err(Error::Dimension {
                expected: 3,
                actual: self.len(),
            }),
        }
    }
}

impl fmt::Debug for ChannelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ChannelVector")
            .field(&self.values())
            .finish()
    }
}

/// Shorthand for [`ChannelVector::new`].
pub fn validate(values: &[f64]) -> Result<ChannelVector> {
    ChannelVector::new(values)
}

/// An n-bit output code. Bit `i` of the mask corresponds to channel `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeWord {
    n: u8,
    mask: u16,
}

impl CodeWord {
    pub const BLACK3: CodeWord = CodeWord::from_mask_unchecked(3, 0b000);
    pub const RED: CodeWord = CodeWord::from_mask_unchecked(3, 1 << R);
    pub const YELLOW: CodeWord = CodeWord::from_mask_unchecked(3, (1 << G) | (1 << R));
    pub const GREEN: CodeWord = CodeWord::from_mask_unchecked(3, 1 << G);
    pub const CYAN: CodeWord = CodeWord::from_mask_unchecked(3, (1 << B) | (1 << G));
    pub const BLUE: CodeWord = CodeWord::from_mask_unchecked(3, 1 << B);
    pub const MAGENTA: CodeWord = CodeWord::from_mask_unchecked(3, (1 << B) | (1 << R));
    pub const WHITE3: CodeWord = CodeWord::from_mask_unchecked(3, 0b111);

    const fn from_mask_unchecked(n: u8, mask: u16) -> Self {
        Self { n, mask }
    }

    pub fn from_mask(n: usize, mask: usize) -> Result<Self> {
        check_dimension(n)?;
        if mask >= 1 << n {
            return Err(Error::Domain(format!(
                "mask {mask:#b} does not fit in {n} bits"
            )));
        }
        Ok(Self {
            n: n as u8,
            mask: mask as u16,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, &b)| m | (usize::from(b) << i));
        Self::from_mask(bits.len(), mask)
    }

    pub fn black(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    pub fn white(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Self::from_mask(n, (1 << n) - 1)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mask(&self) -> usize {
        self.mask as usize
    }

    pub fn bit(&self, channel: usize) -> bool {
        self.mask >> channel & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    pub fn is_black(&self) -> bool {
        self.mask == 0
    }

    pub fn is_white(&self) -> bool {
        self.mask() == (1 << self.n) - 1
    }

    pub fn is_chromatic(&self) -> bool {
        !self.is_black() && !self.is_white()
    }

    /// Trichromatic signal name, if this is a 3-bit code.
    pub fn name(&self) -> Option<&'static str> {
        if self.n != 3 {
            return None;
        }
        Some(SIGNAL_NAMES[SIGNAL_ORDER.iter().position(|c| c == self)?])
    }
}

/// Channel 0 first, so the (B, G, R) code for red prints as `001`.
impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeWord({self})")
    }
}

/// The eight trichromatic codes in the conventional report order.
pub const SIGNAL_ORDER: [CodeWord; 8] = [
    CodeWord::BLACK3,
    CodeWord::RED,
    CodeWord::YELLOW,
    CodeWord::GREEN,
    CodeWord::CYAN,
    CodeWord::BLUE,
    CodeWord::MAGENTA,
    CodeWord::WHITE3,
];

pub const SIGNAL_NAMES: [&str; 8] = [
    "blackness",
    "redness",
    "yellowness",
    "greenness",
    "cyanness",
    "blueness",
    "magentaness",
    "whiteness",
];

fn check_dimension(n: usize) -> Result<()> {
    match n {
        0 => Err(Error::Empty),
        n if n > MAX_CHANNELS => Err(Error::TooManyChannels {
            n,
            max: MAX_CHANNELS,
        }),
        _ => Ok(()),
    }
}

/// Activations of all 2^n output codes, indexed by code mask.
#[derive(Clone, PartialEq)]
pub struct DecoderOutput {
    n: usize,
    activations: Vec<f64>,
}

impl DecoderOutput {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, code: CodeWord) -> f64 {
        assert_eq!(code.len(), self.n, "code word dimension mismatch");
        self.activations[code.mask()]
    }

    /// Activations indexed by mask.
    pub fn activations(&self) -> &[f64] {
        &self.activations
    }

    pub fn iter(&self) -> impl Iterator<Item = (CodeWord, f64)> + '_ {
        self.activations.iter().enumerate().map(|(mask, &a)| {
            (
                CodeWord {
                    n: self.n as u8,
                    mask: mask as u16,
                },
                a,
            )
        })
    }

    pub fn sum(&self) -> f64 {
        self.activations.iter().sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.activations.iter().filter(|&&a| a != 0.0).count()
    }

    pub fn blackness(&self) -> f64 {
        self.activations[0]
    }

    pub fn whiteness(&self) -> f64 {
        self.activations[(1 << self.n) - 1]
    }

    /// Named trichromatic view; `None` unless n = 3.
    pub fn signals(&self) -> Option<ColorSignals> {
        (self.n == 3).then(|| ColorSignals {
            blackness: self.get(CodeWord::BLACK3),
            redness: self.get(CodeWord::RED),
            yellowness: self.get(CodeWord::YELLOW),
            greenness: self.get(CodeWord::GREEN),
            cyanness: self.get(CodeWord::CYAN),
            blueness: self.get(CodeWord::BLUE),
            magentaness: self.get(CodeWord::MAGENTA),
            whiteness: self.get(CodeWord::WHITE3),
        })
    }
}

impl fmt::Debug for DecoderOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(c, a)| (c.to_string(), a)))
            .finish()
    }
}

/// The eight trichromatic color signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorSignals {
    pub blackness: f64,
    pub redness: f64,
    pub yellowness: f64,
    pub greenness: f64,
    pub cyanness: f64,
    pub blueness: f64,
    pub magentaness: f64,
    pub whiteness: f64,
}

/// The six chromatic signals only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChromaticSignals {
    pub redness: f64,
    pub yellowness: f64,
    pub greenness: f64,
    pub cyanness: f64,
    pub blueness: f64,
    pub magentaness: f64,
}

impl ColorSignals {
    /// Closed-form three-channel decoder on raw (B, G, R). Callers are
    /// expected to pass values in [0, 1].
    #[inline]
    pub fn from_bgr(b: f64, g: f64, r: f64) -> Self {
        Self {
            blackness: 1.0 - b.max(g).max(r),
            redness: (r - b.max(g)).max(0.0),
            yellowness: (g.min(r) - b).max(0.0),
            greenness: (g - b.max(r)).max(0.0),
            cyanness: (b.min(g) - r).max(0.0),
            blueness: (b - g.max(r)).max(0.0),
            magentaness: (b.min(r) - g).max(0.0),
            whiteness: b.min(g).min(r),
        }
    }

    pub fn chromatic(&self) -> ChromaticSignals {
        ChromaticSignals {
            redness: self.redness,
            yellowness: self.yellowness,
            greenness: self.greenness,
            cyanness: self.cyanness,
            blueness: self.blueness,
            magentaness: self.magentaness,
        }
    }

    /// Values in [`SIGNAL_ORDER`].
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.blackness,
            self.redness,
            self.yellowness,
            self.greenness,
            self.cyanness,
            self.blueness,
            self.magentaness,
            self.whiteness,
        ]
    }

    pub fn get(&self, code: CodeWord) -> Option<f64> {
        let i = SIGNAL_ORDER.iter().position(|c| *c == code)?;
        Some(self.to_array()[i])
    }
}

impl From<ColorSignals> for DecoderOutput {
    fn from(s: ColorSignals) -> Self {
        let mut activations = vec![0.0; 8];
        for (code, value) in SIGNAL_ORDER.iter().zip(s.to_array()) {
            activations[code.mask()] = value;
        }
        DecoderOutput { n: 3, activations }
    }
}

/// Median of three: `max(min(a,b), min(a,c), min(b,c))`.
#[inline]
pub fn med(a: f64, b: f64, c: f64) -> f64 {
    a.min(b).max(a.min(c)).max(b.min(c))
}

/// Decode a three-channel (B, G, R) vector.
pub fn decode3(c: &ChannelVector) -> Result<DecoderOutput> {
    let [b, g, r] = c.as_bgr()?;
    Ok(ColorSignals::from_bgr(b, g, r).into())
}

/// Decode a vector of any supported dimension.
pub fn decode_n(c: &ChannelVector) -> DecoderOutput {
    let values = c.values();
    let n = values.len();
    let activations = (0..1usize << n)
        .map(|mask| {
            let mut ones_min = 1.0f64;
            let mut zeros_max = 0.0f64;
            for (i, &v) in values.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ones_min = ones_min.min(v);
                } else {
                    zeros_max = zeros_max.max(v);
                }
            }
            (ones_min - zeros_max).max(0.0)
        })
        .collect();
    DecoderOutput { n, activations }
}

/// Every code that is neither all zeros nor all ones, in mask order.
pub fn enumerate_unique_colors(n: usize) -> Result<Vec<CodeWord>> {
    check_dimension(n)?;
    Ok((1..(1usize << n) - 1)
        .map(|mask| CodeWord {
            n: n as u8,
            mask: mask as u16,
        })
        .collect())
}

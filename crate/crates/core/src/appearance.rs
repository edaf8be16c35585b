//! Hue, chroma, value and saturation from the decoded color signals.
//!
//! A (B, G, R) color is white plus at most two unique colors that sit on
//! adjacent vertices of the hue hexagon. Hue is the coefficient-weighted
//! mean of those two vertex angles, chroma the sum of their coefficients
//! and value the sum of chroma and whiteness. The result coincides with
//! the hexcone RGB to HSV transform used in computer graphics.

use crate::decoder::{ChannelVector, CodeWord, ColorSignals};
use crate::error::{Error, Result};

/// The six chromatic primaries, in hue order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UniqueColor {
    Red,
    Yellow,
    Green,
    Cyan,
    Blue,
    Magenta,
}

impl UniqueColor {
    pub const ALL: [UniqueColor; 6] = [
        UniqueColor::Red,
        UniqueColor::Yellow,
        UniqueColor::Green,
        UniqueColor::Cyan,
        UniqueColor::Blue,
        UniqueColor::Magenta,
    ];

    pub fn code(self) -> CodeWord {
        match self {
            UniqueColor::Red => CodeWord::RED,
            UniqueColor::Yellow => CodeWord::YELLOW,
            UniqueColor::Green => CodeWord::GREEN,
            UniqueColor::Cyan => CodeWord::CYAN,
            UniqueColor::Blue => CodeWord::BLUE,
            UniqueColor::Magenta => CodeWord::MAGENTA,
        }
    }

    pub fn from_code(code: CodeWord) -> Option<Self> {
        Self::ALL.into_iter().find(|u| u.code() == code)
    }

    /// Hexagon angle in degrees: red 0, yellow 60, ... magenta 300.
    pub fn angle(self) -> f64 {
        60.0 * self as u8 as f64
    }

    /// Unit (B, G, R) vector.
    pub fn vector(self) -> [f64; 3] {
        let c = self.code();
        [0, 1, 2].map(|i| if c.bit(i) { 1.0 } else { 0.0 })
    }

    fn coefficient(self, s: &ColorSignals) -> f64 {
        match self {
            UniqueColor::Red => s.redness,
            UniqueColor::Yellow => s.yellowness,
            UniqueColor::Green => s.greenness,
            UniqueColor::Cyan => s.cyanness,
            UniqueColor::Blue => s.blueness,
            UniqueColor::Magenta => s.magentaness,
        }
    }
}

/// Angle of a chromatic three-channel code word.
pub fn hue_angle(code: CodeWord) -> Result<f64> {
    UniqueColor::from_code(code)
        .map(UniqueColor::angle)
        .ok_or_else(|| Error::Domain(format!("code {code} has no hue angle")))
}

/// A hexagon sector: the pair of adjacent primaries `(lower, upper)` with
/// `upper` one step further in hue order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub lower: UniqueColor,
    pub upper: UniqueColor,
}

impl Sector {
    pub fn index(self) -> usize {
        self.lower as usize
    }

    fn from_index(i: usize) -> Self {
        Sector {
            lower: UniqueColor::ALL[i % 6],
            upper: UniqueColor::ALL[(i + 1) % 6],
        }
    }

    /// Angles of (lower, upper), with upper unwrapped past 360 for the
    /// magenta-red sector.
    pub fn angles(self) -> (f64, f64) {
        let lo = self.lower.angle();
        (lo, lo + 60.0)
    }

    /// First sector in hue order holding every nonzero chromatic signal.
    fn containing(s: &ColorSignals) -> Self {
        let active = |u: UniqueColor| u.coefficient(s) != 0.0;
        (0..6)
            .map(Sector::from_index)
            .find(|sec| {
                UniqueColor::ALL
                    .into_iter()
                    .filter(|&u| active(u))
                    .all(|u| u == sec.lower || u == sec.upper)
            })
            .expect("nonzero chromatic signals are always adjacent")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Chromatic(UniqueColor),
    White,
}

impl Unit {
    pub fn vector(self) -> [f64; 3] {
        match self {
            Unit::Chromatic(u) => u.vector(),
            Unit::White => [1.0; 3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub unit: Unit,
}

/// White plus up to two adjacent primaries; blackness carries no vector
/// mass and is kept separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub terms: Vec<Term>,
    pub blackness: f64,
    pub sector: Sector,
}

impl Decomposition {
    /// Coefficient-weighted sum of the unit vectors.
    pub fn recombine(&self) -> [f64; 3] {
        self.terms.iter().fold([0.0; 3], |mut acc, t| {
            for (a, v) in acc.iter_mut().zip(t.unit.vector()) {
                *a += t.coefficient * v;
            }
            acc
        })
    }

    pub fn coefficient(&self, unit: Unit) -> f64 {
        self.terms
            .iter()
            .find(|t| t.unit == unit)
            .map_or(0.0, |t| t.coefficient)
    }
}

pub fn decompose(c: &ChannelVector) -> Result<Decomposition> {
    let [b, g, r] = c.as_bgr()?;
    let s = ColorSignals::from_bgr(b, g, r);
    let sector = Sector::containing(&s);
    let mut terms: Vec<Term> = [sector.lower, sector.upper]
        .into_iter()
        .map(|u| Term {
            coefficient: u.coefficient(&s),
            unit: Unit::Chromatic(u),
        })
        .collect();
    terms.push(Term {
        coefficient: s.whiteness,
        unit: Unit::White,
    });
    terms.retain(|t| t.coefficient != 0.0);
    Ok(Decomposition {
        terms,
        blackness: s.blackness,
        sector,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppearanceDescriptor {
    /// Degrees in [0, 360); `None` for achromatic colors.
    pub hue: Option<f64>,
    pub chroma: f64,
    pub value: f64,
    pub saturation: f64,
    pub whiteness: f64,
    pub blackness: f64,
}

pub fn to_appearance(c: &ChannelVector) -> Result<AppearanceDescriptor> {
    let [b, g, r] = c.as_bgr()?;
    Ok(appearance_bgr(b, g, r))
}

/// Unchecked kernel behind [`to_appearance`], for per-pixel use.
#[inline]
pub fn appearance_bgr(b: f64, g: f64, r: f64) -> AppearanceDescriptor {
    let s = ColorSignals::from_bgr(b, g, r);
    let sector = Sector::containing(&s);
    let m1 = sector.lower.coefficient(&s);
    let m2 = sector.upper.coefficient(&s);
    let chroma = m1 + m2;
    let value = b.max(g).max(r);
    let hue = (chroma > 0.0).then(|| {
        let (h1, h2) = sector.angles();
        let h = (m1 * h1 + m2 * h2) / chroma;
        if h >= 360.0 {
            h - 360.0
        } else {
            h
        }
    });
    AppearanceDescriptor {
        hue,
        chroma,
        value,
        saturation: if value > 0.0 { chroma / value } else { 0.0 },
        whiteness: s.whiteness,
        blackness: s.blackness,
    }
}

/// Brightness, colorfulness, whiteness, blackness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attributes {
    pub brightness: f64,
    pub colorfulness: f64,
    pub whiteness: f64,
    pub blackness: f64,
}

pub fn attributes(c: &ChannelVector) -> Result<Attributes> {
    let [b, g, r] = c.as_bgr()?;
    let max = b.max(g).max(r);
    let min = b.min(g).min(r);
    Ok(Attributes {
        brightness: max,
        colorfulness: max - min,
        whiteness: min,
        blackness: 1.0 - max,
    })
}

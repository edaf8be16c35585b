//! Color-blindness and afterimage simulation.
//!
//! A dichromat is a trichromat whose two cone channels receive identical
//! input: the merged pair is replaced by its mean. With the pair equal,
//! every decoder output that tells the two channels apart is exactly zero,
//! leaving one complementary pair of unique colors. Partial merges
//! (`t < 1`) model anomalous trichromacy.
//!
//! Afterimages are per-channel gain losses applied before decoding.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::decoder::{ChannelVector, CodeWord, B, G, R};
use crate::error::{Error, Result};
use crate::spectra::{blend, check_severity, CurveSet, SensitivityCurve};

/// The six named deficiencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Deficiency {
    Monochromatism,
    Protan,
    Deutan1,
    Deutan2,
    Tritan,
    Tetartan,
}

impl Deficiency {
    pub const ALL: [Deficiency; 6] = [
        Deficiency::Monochromatism,
        Deficiency::Protan,
        Deficiency::Deutan1,
        Deficiency::Deutan2,
        Deficiency::Tritan,
        Deficiency::Tetartan,
    ];

    /// CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Deficiency::Monochromatism => "mono",
            Deficiency::Protan => "protan",
            Deficiency::Deutan1 => "deutan1",
            Deficiency::Deutan2 => "deutan2",
            Deficiency::Tritan => "tritan",
            Deficiency::Tetartan => "tetartan",
        }
    }

    /// Merged channel pair; `None` merges all three.
    pub fn merged_pair(self) -> Option<(usize, usize)> {
        match self {
            Deficiency::Monochromatism => None,
            Deficiency::Protan | Deficiency::Deutan1 | Deficiency::Deutan2 => Some((G, R)),
            Deficiency::Tritan => Some((B, G)),
            Deficiency::Tetartan => Some((B, R)),
        }
    }

    /// Where the merged curve's peak sits relative to the pair mean, in nm.
    /// Only curve-level simulation looks at this.
    pub fn peak_shift_nm(self) -> f64 {
        match self {
            Deficiency::Protan => -15.0,
            Deficiency::Deutan1 => 15.0,
            Deficiency::Deutan2 => 5.0,
            _ => 0.0,
        }
    }

    fn full_kind(self) -> CvdKind {
        match self {
            Deficiency::Monochromatism => CvdKind::Monochromatism,
            Deficiency::Protan => CvdKind::Protanopia,
            Deficiency::Deutan1 => CvdKind::Deuteranopia1,
            Deficiency::Deutan2 => CvdKind::Deuteranopia2,
            Deficiency::Tritan => CvdKind::Tritanopia,
            Deficiency::Tetartan => CvdKind::Tetartanopia,
        }
    }
}

impl FromStr for Deficiency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown profile {s:?}")))
    }
}

impl fmt::Display for Deficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CvdKind {
    Monochromatism,
    Protanopia,
    Deuteranopia1,
    Deuteranopia2,
    Tritanopia,
    Tetartanopia,
    Anomalous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvdProfile {
    kind: CvdKind,
    merged_pair: Option<(usize, usize)>,
    severity: f64,
    peak_shift_nm: f64,
}

impl CvdProfile {
    /// A full dichromacy or monochromacy (`t = 1`).
    pub fn full(d: Deficiency) -> Self {
        Self {
            kind: d.full_kind(),
            merged_pair: d.merged_pair(),
            severity: 1.0,
            peak_shift_nm: d.peak_shift_nm(),
        }
    }

    /// `severity` 1 gives the named deficiency; anything lower is the
    /// anomalous form with the same merged channels.
    pub fn new(d: Deficiency, severity: f64) -> Result<Self> {
        check_severity(severity)?;
        let mut p = Self::full(d);
        if severity < 1.0 {
            p.kind = CvdKind::Anomalous;
            p.severity = severity;
        }
        Ok(p)
    }

    pub fn kind(&self) -> CvdKind {
        self.kind
    }

    pub fn merged_pair(&self) -> Option<(usize, usize)> {
        self.merged_pair
    }

    pub fn severity(&self) -> f64 {
        self.severity
    }

    pub fn peak_shift_nm(&self) -> f64 {
        self.peak_shift_nm
    }

    fn merged_channels(&self) -> Vec<usize> {
        match self.merged_pair {
            Some((i, j)) => vec![i, j],
            None => vec![B, G, R],
        }
    }
}

/// Mean that returns `a` exactly when all inputs are equal.
fn mean3(a: f64, b: f64, c: f64) -> f64 {
    let m = a + ((b - a) + (c - a)) / 3.0;
    m.clamp(a.min(b).min(c), a.max(b).max(c))
}

pub fn simulate_cvd(c: &ChannelVector, p: &CvdProfile) -> Result<ChannelVector> {
    let bgr = c.as_bgr()?;
    ChannelVector::new(&simulate_cvd_bgr(bgr, p))
}

/// Unchecked kernel behind [`simulate_cvd`].
#[inline]
pub fn simulate_cvd_bgr(mut bgr: [f64; 3], p: &CvdProfile) -> [f64; 3] {
    let t = p.severity;
    match p.merged_pair {
        Some((i, j)) => {
            let m = (bgr[i] + bgr[j]) / 2.0;
            bgr[i] = blend(bgr[i], m, t);
            bgr[j] = blend(bgr[j], m, t);
        }
        None => {
            let m = mean3(bgr[0], bgr[1], bgr[2]);
            for v in &mut bgr {
                *v = blend(*v, m, t);
            }
        }
    }
    bgr
}

/// Chromatic codes a full deficiency can still raise.
pub fn perceivable_chromatic_codes(p: &CvdProfile) -> Result<BTreeSet<CodeWord>> {
    if p.severity != 1.0 {
        return Err(Error::Domain(format!(
            "perceivable codes are defined for full merges, got severity {}",
            p.severity
        )));
    }
    let merged = p.merged_channels();
    Ok((1..7)
        .map(|mask| CodeWord::from_mask(3, mask).expect("3-bit mask"))
        .filter(|code| merged.iter().all(|&i| code.bit(i) == code.bit(merged[0])))
        .collect())
}

/// Apply a deficiency to a B, G, R curve set. The merged curves move toward
/// their mean shifted by the profile's peak offset.
pub fn simulate_cvd_curves(set: &CurveSet, p: &CvdProfile) -> Result<CurveSet> {
    if set.len() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            actual: set.len(),
        });
    }
    let channels = p.merged_channels();
    let curves = set.curves();
    let k = channels.len() as f64;
    let mean: Vec<f64> = (0..set.grid().len)
        .map(|s| {
            let sum: f64 = channels.iter().map(|&i| curves[i].responses()[s]).sum();
            (sum / k).clamp(0.0, 1.0)
        })
        .collect();
    let target = SensitivityCurve::new("merged", mean)?.shifted(set.grid(), p.peak_shift_nm);
    let mut out = curves.to_vec();
    for &i in &channels {
        let blended = curves[i]
            .responses()
            .iter()
            .zip(target.responses())
            .map(|(&own, &m)| blend(own, m, p.severity))
            .collect();
        out[i] = SensitivityCurve::new(curves[i].name(), blended)?;
    }
    CurveSet::new(*set.grid(), out)
}

/// Per-channel (B, G, R) gains in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainVector([f64; 3]);

impl GainVector {
    pub fn new(gains: [f64; 3]) -> Result<Self> {
        if let Some((i, &g)) = gains
            .iter()
            .enumerate()
            .find(|(_, g)| !(0.0..=1.0).contains(*g))
        {
            return Err(Error::OutOfRange { index: i, value: g });
        }
        Ok(Self(gains))
    }

    pub fn gains(&self) -> [f64; 3] {
        self.0
    }
}

pub fn adapt(c: &ChannelVector, g: &GainVector) -> Result<ChannelVector> {
    ChannelVector::new(&adapt_bgr(c.as_bgr()?, g))
}

#[inline]
pub fn adapt_bgr(bgr: [f64; 3], g: &GainVector) -> [f64; 3] {
    [bgr[0] * g.0[0], bgr[1] * g.0[1], bgr[2] * g.0[2]]
}

//! Median-referenced opponent channels.
//!
//! `M = med(B, G, R)` and each channel is its cone response minus `M`.
//! The sign picks one of two complementary unique colors and the magnitude
//! equals that color's decoder activation, so the six chromatic signals can
//! be read back from the triple without loss.

use crate::decoder::{med, ChannelVector, ChromaticSignals};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpponentTriple {
    pub m: f64,
    /// Blueness (+) / yellowness (-).
    pub m_by: f64,
    /// Greenness (+) / magentaness (-).
    pub m_gm: f64,
    /// Redness (+) / cyanness (-).
    pub m_rc: f64,
}

impl OpponentTriple {
    pub fn channels(&self) -> [f64; 3] {
        [self.m_by, self.m_gm, self.m_rc]
    }

    /// At most one channel strictly positive and at most one strictly
    /// negative.
    pub fn check(&self) -> Result<()> {
        let ch = self.channels();
        if ch.iter().any(|v| v.is_nan()) {
            return Err(Error::Inconsistent("NaN channel".into()));
        }
        let pos = ch.iter().filter(|&&v| v > 0.0).count();
        let neg = ch.iter().filter(|&&v| v < 0.0).count();
        if pos > 1 {
            return Err(Error::Inconsistent(format!("{pos} positive channels")));
        }
        if neg > 1 {
            return Err(Error::Inconsistent(format!("{neg} negative channels")));
        }
        Ok(())
    }
}

pub fn opponent(c: &ChannelVector) -> Result<OpponentTriple> {
    let [b, g, r] = c.as_bgr()?;
    Ok(opponent_bgr(b, g, r))
}

#[inline]
pub fn opponent_bgr(b: f64, g: f64, r: f64) -> OpponentTriple {
    let m = med(b, g, r);
    OpponentTriple {
        m,
        m_by: b - m,
        m_gm: g - m,
        m_rc: r - m,
    }
}

/// Recover the six chromatic activations from signs and magnitudes.
pub fn opponent_to_codes(t: &OpponentTriple) -> Result<ChromaticSignals> {
    t.check()?;
    Ok(ChromaticSignals {
        blueness: t.m_by.max(0.0),
        yellowness: (-t.m_by).max(0.0),
        greenness: t.m_gm.max(0.0),
        magentaness: (-t.m_gm).max(0.0),
        redness: t.m_rc.max(0.0),
        cyanness: (-t.m_rc).max(0.0),
    })
}

//! Cone sensitivity curves, curve merging and monochromatic sweeps.
//!
//! Color evolution and dichromacy are modeled by moving two curves toward
//! their pointwise mean. Once two curves coincide, every decoder output
//! whose code word distinguishes them is identically zero.

use std::io::{Read, Write};

use crate::decoder::{decode3, decode_n, ChannelVector, DecoderOutput, SIGNAL_NAMES};
use crate::error::{Error, Result};
use crate::opponent::{opponent, OpponentTriple};

pub const MAX_CURVES: usize = 4;

/// Default bump peaks (nm) for B, G, R and their common standard deviation.
pub const DEFAULT_PEAKS_NM: [f64; 3] = [440.0, 540.0, 570.0];
pub const DEFAULT_WIDTH_NM: f64 = 45.0;

/// A uniform wavelength grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start_nm: f64,
    pub step_nm: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start_nm: f64, step_nm: f64, len: usize) -> Result<Self> {
        if !(start_nm.is_finite() && step_nm.is_finite() && step_nm > 0.0) || len == 0 {
            return Err(Error::Curve(format!(
                "invalid grid start={start_nm} step={step_nm} len={len}"
            )));
        }
        Ok(Self {
            start_nm,
            step_nm,
            len,
        })
    }

    /// 400..=700 nm in 1 nm steps.
    pub fn visible() -> Self {
        Self {
            start_nm: 400.0,
            step_nm: 1.0,
            len: 301,
        }
    }

    pub fn wavelength(&self, i: usize) -> f64 {
        self.start_nm + i as f64 * self.step_nm
    }

    pub fn wavelengths(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.wavelength(i))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityCurve {
    name: String,
    responses: Vec<f64>,
}

impl SensitivityCurve {
    pub fn new(name: impl Into<String>, responses: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some((i, v)) = responses
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::Curve(format!(
                "curve {name}: response {v} at sample {i} outside [0, 1]"
            )));
        }
        Ok(Self { name, responses })
    }

    /// Unit-peak Gaussian bump sampled on `grid`.
    pub fn gaussian(name: impl Into<String>, grid: &Grid, peak_nm: f64, sigma_nm: f64) -> Self {
        let responses = grid
            .wavelengths()
            .map(|w| (-(w - peak_nm).powi(2) / (2.0 * sigma_nm * sigma_nm)).exp())
            .collect();
        Self {
            name: name.into(),
            responses,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    /// Index of the (first) maximum response.
    pub fn peak_index(&self) -> usize {
        self.responses
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
            .0
    }

    /// Resample shifted by `shift_nm` toward longer wavelengths; samples
    /// falling off the grid take the edge value.
    pub fn shifted(&self, grid: &Grid, shift_nm: f64) -> Self {
        let n = self.responses.len();
        let responses = (0..n)
            .map(|i| {
                let x = (i as f64 - shift_nm / grid.step_nm).clamp(0.0, (n - 1) as f64);
                let lo = x.floor() as usize;
                let hi = (lo + 1).min(n - 1);
                let f = x - lo as f64;
                let v = self.responses[lo] * (1.0 - f) + self.responses[hi] * f;
                v.clamp(0.0, 1.0)
            })
            .collect();
        Self {
            name: self.name.clone(),
            responses,
        }
    }
}

/// One to four curves on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    grid: Grid,
    curves: Vec<SensitivityCurve>,
}

impl CurveSet {
    pub fn new(grid: Grid, curves: Vec<SensitivityCurve>) -> Result<Self> {
        if curves.is_empty() || curves.len() > MAX_CURVES {
            return Err(Error::Curve(format!(
                "a curve set holds 1 to {MAX_CURVES} curves, got {}",
                curves.len()
            )));
        }
        if let Some(c) = curves.iter().find(|c| c.responses.len() != grid.len) {
            return Err(Error::Curve(format!(
                "curve {} has {} samples, grid has {}",
                c.name,
                c.responses.len(),
                grid.len
            )));
        }
        Ok(Self { grid, curves })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn curves(&self) -> &[SensitivityCurve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.curves.iter().map(|c| c.name()).collect()
    }

    /// Responses of every curve at grid sample `i`.
    pub fn channels_at(&self, i: usize) -> ChannelVector {
        let values: Vec<f64> = self.curves.iter().map(|c| c.responses[i]).collect();
        ChannelVector::new(&values).expect("curve responses are validated on construction")
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::CurveIndex {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::Curve(format!("cannot merge curve {i} with itself")));
        }
        Ok(())
    }

    fn with_curve(mut self, index: usize, responses: Vec<f64>) -> Self {
        self.curves[index].responses = responses;
        self
    }
}

/// B, G, R Gaussian bumps on the 400-700 nm grid.
pub fn default_curves() -> CurveSet {
    let grid = Grid::visible();
    let curves = ["B", "G", "R"]
        .into_iter()
        .zip(DEFAULT_PEAKS_NM)
        .map(|(name, peak)| SensitivityCurve::gaussian(name, &grid, peak, DEFAULT_WIDTH_NM))
        .collect();
    CurveSet { grid, curves }
}

pub(crate) fn check_severity(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("merge parameter {t} outside [0, 1]")));
    }
    Ok(())
}

/// Blend `own` toward `target` by `t`, staying between the two endpoints.
#[inline]
pub(crate) fn blend(own: f64, target: f64, t: f64) -> f64 {
    let v = (1.0 - t) * own + t * target;
    v.clamp(own.min(target), own.max(target))
}

fn blend_curve(own: &[f64], target: &[f64], t: f64) -> Vec<f64> {
    own.iter()
        .zip(target)
        .map(|(&a, &m)| blend(a, m, t))
        .collect()
}

fn pointwise_mean(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect()
}

/// Move curves `i` and `j` a fraction `t` of the way toward their pointwise
/// mean. At `t = 1` both equal the mean exactly.
pub fn merge(set: &CurveSet, i: usize, j: usize, t: f64) -> Result<CurveSet> {
    set.check_pair(i, j)?;
    check_severity(t)?;
    let mean = pointwise_mean(&set.curves[i].responses, &set.curves[j].responses);
    let ci = blend_curve(&set.curves[i].responses, &mean, t);
    let cj = blend_curve(&set.curves[j].responses, &mean, t);
    Ok(set.clone().with_curve(i, ci).with_curve(j, cj))
}

/// Replace curves `i` and `j` by a single curve, their pointwise mean,
/// placed at the lower of the two positions.
pub fn collapse(set: &CurveSet, i: usize, j: usize, name: &str) -> Result<CurveSet> {
    set.check_pair(i, j)?;
    let mean = pointwise_mean(&set.curves[i].responses, &set.curves[j].responses);
    let (lo, hi) = (i.min(j), i.max(j));
    let mut curves = set.curves.clone();
    curves.remove(hi);
    curves[lo] = SensitivityCurve {
        name: name.to_owned(),
        responses: mean,
    };
    CurveSet::new(set.grid, curves)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvolutionStage {
    /// One curve, W.
    Monochromat,
    /// B and Y.
    DichromatBY,
    /// B, G and R.
    Trichromat,
    /// C and R: W splits into R and C first.
    AltDichromatRC,
}

impl EvolutionStage {
    pub const ALL: [EvolutionStage; 4] = [
        EvolutionStage::Monochromat,
        EvolutionStage::DichromatBY,
        EvolutionStage::Trichromat,
        EvolutionStage::AltDichromatRC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvolutionStage::Monochromat => "monochromat",
            EvolutionStage::DichromatBY => "dichromat-by",
            EvolutionStage::Trichromat => "trichromat",
            EvolutionStage::AltDichromatRC => "dichromat-rc",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|st| st.name() == s)
    }
}

/// Curves of an evolution stage derived from a B, G, R set.
pub fn evolution_stage_from(base: &CurveSet, stage: EvolutionStage) -> Result<CurveSet> {
    if base.len() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            actual: base.len(),
        });
    }
    match stage {
        EvolutionStage::Trichromat => Ok(base.clone()),
        EvolutionStage::DichromatBY => collapse(base, 1, 2, "Y"),
        EvolutionStage::Monochromat => collapse(&collapse(base, 1, 2, "Y")?, 0, 1, "W"),
        EvolutionStage::AltDichromatRC => collapse(base, 0, 1, "C"),
    }
}

pub fn evolution_stage(stage: EvolutionStage) -> CurveSet {
    evolution_stage_from(&default_curves(), stage).expect("default curves are trichromatic")
}

/// A reduced stage re-expanded to three (B, G, R) slots, each merged curve
/// duplicated into the slots it came from: (B, Y, Y), (C, C, R), (W, W, W).
pub fn padded_stage_from(base: &CurveSet, stage: EvolutionStage) -> Result<CurveSet> {
    let collapsed = evolution_stage_from(base, stage)?;
    let c = collapsed.curves();
    let curves = match stage {
        EvolutionStage::Trichromat => return Ok(collapsed),
        EvolutionStage::DichromatBY => vec![c[0].clone(), c[1].clone(), c[1].clone()],
        EvolutionStage::AltDichromatRC => vec![c[0].clone(), c[0].clone(), c[1].clone()],
        EvolutionStage::Monochromat => vec![c[0].clone(), c[0].clone(), c[0].clone()],
    };
    CurveSet::new(*base.grid(), curves)
}

/// Decoder output at every grid wavelength, any curve count.
pub fn decode_spectrum(set: &CurveSet) -> Vec<DecoderOutput> {
    (0..set.grid.len)
        .map(|i| decode_n(&set.channels_at(i)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub wavelength_nm: f64,
    pub channels: ChannelVector,
    pub codes: DecoderOutput,
    pub opponent: OpponentTriple,
}

/// One row per grid wavelength of a three-curve set.
pub fn sweep(set: &CurveSet) -> Result<Vec<SweepRow>> {
    if set.len() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            actual: set.len(),
        });
    }
    (0..set.grid.len)
        .map(|i| {
            let channels = set.channels_at(i);
            Ok(SweepRow {
                wavelength_nm: set.grid.wavelength(i),
                channels,
                codes: decode3(&channels)?,
                opponent: opponent(&channels)?,
            })
        })
        .collect()
}

/// Maximal runs of exact zeros as `(start_index, length)`.
pub fn zero_runs(values: impl IntoIterator<Item = f64>) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match (v == 0.0, current.as_mut()) {
            (true, Some((_, len))) => *len += 1,
            (true, None) => current = Some((i, 1)),
            (false, _) => runs.extend(current.take()),
        }
    }
    runs.extend(current);
    runs
}

pub const SWEEP_HEADER: [&str; 16] = [
    "wavelength_nm",
    "B",
    "G",
    "R",
    "blackness",
    "redness",
    "yellowness",
    "greenness",
    "cyanness",
    "blueness",
    "magentaness",
    "whiteness",
    "M",
    "M_BY",
    "M_GM",
    "M_RC",
];

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    debug_assert_eq!(&SWEEP_HEADER[4..12], &SIGNAL_NAMES);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let s = row.codes.signals().expect("sweep rows are trichromatic");
        let mut rec = vec![row.wavelength_nm.to_string()];
        rec.extend(row.channels.values().iter().map(f64::to_string));
        rec.extend(s.to_array().iter().map(f64::to_string));
        let o = &row.opponent;
        rec.extend([o.m, o.m_by, o.m_gm, o.m_rc].iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Write curves as `wavelength_nm,<name>...` CSV.
pub fn write_curves<W: Write>(set: &CurveSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["wavelength_nm"];
    header.extend(set.names());
    w.write_record(&header)?;
    for i in 0..set.grid.len {
        let mut rec = vec![set.grid.wavelength(i).to_string()];
        rec.extend(set.curves.iter().map(|c| c.responses[i].to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Strict parse of a cone-fundamentals CSV: uniform strictly increasing
/// grid, 1 to 4 curves, every response in [0, 1].
pub fn read_curves<R: Read>(input: R) -> Result<CurveSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr.headers()?.clone();
    if header.get(0) != Some("wavelength_nm") {
        return Err(Error::Parse {
            line: 1,
            message: "first column must be `wavelength_nm`".into(),
        });
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    if names.is_empty() || names.len() > MAX_CURVES {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected 1 to {MAX_CURVES} curve columns, got {}",
                names.len()
            ),
        });
    }
    if let Some(n) = names.iter().find(|n| n.is_empty()) {
        return Err(Error::Parse {
            line: 1,
            message: format!("empty curve name {n:?}"),
        });
    }

    let mut wavelengths = Vec::new();
    let mut columns = vec![Vec::new(); names.len()];
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |field: &str| -> Result<f64> {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("not a number: {field:?}"),
                })
        };
        wavelengths.push(parse(&record[0])?);
        for (col, (field, name)) in columns.iter_mut().zip(record.iter().skip(1).zip(&names)) {
            let v = parse(field)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Parse {
                    line,
                    message: format!("response {v} for {name} outside [0, 1]"),
                });
            }
            col.push(v);
        }
    }

    if wavelengths.len() < 2 {
        return Err(Error::Parse {
            line: 0,
            message: "need at least two wavelength rows".into(),
        });
    }
    let start = wavelengths[0];
    let step = wavelengths[1] - wavelengths[0];
    if step <= 0.0 {
        return Err(Error::Parse {
            line: 3,
            message: "wavelengths must be strictly increasing".into(),
        });
    }
    let grid = Grid::new(start, step, wavelengths.len())?;
    for (i, &w) in wavelengths.iter().enumerate() {
        if (w - grid.wavelength(i)).abs() > 1e-6 * step {
            return Err(Error::Parse {
                line: i as u64 + 2,
                message: format!("non-uniform grid at {w} nm"),
            });
        }
    }
    let curves = names
        .into_iter()
        .zip(columns)
        .map(|(name, col)| SensitivityCurve::new(name, col))
        .collect::<Result<_>>()?;
    CurveSet::new(grid, curves)
}

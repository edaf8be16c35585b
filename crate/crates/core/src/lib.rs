//! The decoding model of color vision.
//!
//! Cone responses feed a fuzzy n-to-2^n decoder ([`decoder`]) whose outputs
//! are blackness, whiteness and the unique-color signals. From those come
//! the hexcone hue/saturation/value transform ([`appearance`]), signed
//! median-referenced opponent channels ([`opponent`]), cone-curve
//! evolution and monochromatic sweeps ([`spectra`]), and color-blindness and
//! afterimage simulation ([`cvd`]).
//!
//! Trichromatic vectors use (B, G, R) channel order throughout.

pub mod appearance;
pub mod cvd;
pub mod decoder;
pub mod error;
pub mod opponent;
pub mod spectra;

pub use appearance::{
    appearance_bgr, attributes, decompose, hue_angle, to_appearance, AppearanceDescriptor,
    Attributes, Decomposition, Sector, Term, UniqueColor, Unit,
};
pub use cvd::{
    adapt, adapt_bgr, perceivable_chromatic_codes, simulate_cvd, simulate_cvd_bgr,
    simulate_cvd_curves, CvdKind, CvdProfile, Deficiency, GainVector,
};
pub use decoder::{
    decode3, decode_n, enumerate_unique_colors, med, validate, ChannelVector, ChromaticSignals,
    CodeWord, ColorSignals, DecoderOutput, MAX_CHANNELS, SIGNAL_NAMES, SIGNAL_ORDER,
};
pub use error::{Error, Result};
pub use opponent::{opponent, opponent_bgr, opponent_to_codes, OpponentTriple};
pub use spectra::{
    collapse, decode_spectrum, default_curves, evolution_stage, evolution_stage_from, merge,
    padded_stage_from, read_curves, sweep, write_curves, write_sweep, zero_runs, CurveSet,
    EvolutionStage, Grid, SensitivityCurve, SweepRow,
};

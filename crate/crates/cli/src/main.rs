use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use colordecode::{
    adapt, decode3, decode_n, decompose, enumerate_unique_colors, evolution_stage_from, opponent,
    padded_stage_from, read_curves, simulate_cvd, sweep, to_appearance, write_curves, write_sweep,
    ChannelVector, CodeWord, CurveSet, CvdProfile, Deficiency, EvolutionStage, GainVector, Unit,
};
use colordecode_cli::{
    format_hue, ingest_image, run_pixel_pipeline, write_image, CliError, IngestConfig, Operation,
    PipelineOutput, Result, Transfer,
};

/// Decoding-model color vision: fuzzy decoder signals, HSV, opponent
/// channels, cone-curve sweeps and color-blindness simulation.
///
/// Single colors are given as --color b,g,r (blue first). Images are PNG or
/// binary PPM; data is written as CSV to --output or stdout.
#[derive(Parser, Debug)]
#[command(name = "colordecode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decoder activations for a color (any channel count) or an image report
    Decode(ColorOrImage),
    /// Hue, saturation and value
    ToHsv(ColorOrImage),
    /// White plus adjacent unique colors
    Decompose(ColorArg),
    /// Median and signed opponent channels
    Opponent(ColorArg),
    /// Merge cone channels to simulate a color-vision deficiency
    SimulateCvd {
        #[command(flatten)]
        input: ColorOrImage,
        /// mono, protan, deutan1, deutan2, tritan or tetartan
        #[arg(long)]
        profile: String,
        /// Merge severity in [0, 1]; below 1 gives the anomalous form
        #[arg(long, default_value_t = 1.0)]
        severity: f64,
    },
    /// Scale channels by per-cone gains (negative afterimage)
    Adapt {
        #[command(flatten)]
        input: ColorOrImage,
        /// Gains as b,g,r in [0, 1]
        #[arg(long)]
        gains: String,
    },
    /// Monochromatic sweep: channels, codes and opponent signals per wavelength
    Sweep {
        /// Cone-fundamentals CSV with three curves (default: built-in bumps)
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Curves of an evolution stage
    Evolve {
        /// monochromat, dichromat-by, trichromat or dichromat-rc
        #[arg(long)]
        stage: String,
        /// Expand merged curves back into three B, G, R slots
        #[arg(long)]
        padded: bool,
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List the 2^n - 2 chromatic code words
    UniqueColors {
        #[arg(long, short, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct ColorArg {
    /// Comma-separated channel values, e.g. 0.2,0.5,0.9 for (B, G, R)
    #[arg(long)]
    color: String,
}

#[derive(Args, Debug)]
struct ColorOrImage {
    /// Comma-separated channel values, e.g. 0.2,0.5,0.9 for (B, G, R)
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    color: Option<String>,
    /// PNG or PPM image
    #[arg(long)]
    input: Option<PathBuf>,
    /// Image or CSV destination (stdout for CSV when absent)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Decode sRGB-encoded input (and re-encode image output)
    #[arg(long)]
    srgb: bool,
    /// Nine row-major values applied to (B, G, R) after decoding
    #[arg(long)]
    matrix: Option<String>,
}

impl ColorOrImage {
    fn ingest_config(&self) -> Result<IngestConfig> {
        let matrix = match &self.matrix {
            None => None,
            Some(s) => {
                let v = parse_list(s, "--matrix")?;
                let m: [f64; 9] = v
                    .try_into()
                    .map_err(|_| CliError::Usage("--matrix takes 9 values".into()))?;
                Some([[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]])
            }
        };
        Ok(IngestConfig {
            transfer: if self.srgb {
                Transfer::Srgb
            } else {
                Transfer::Linear
            },
            matrix,
        })
    }
}

fn parse_list(s: &str, flag: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{flag}: not a number: {p:?}")))
        })
        .collect()
}

fn parse_color(s: &str) -> Result<ChannelVector> {
    Ok(ChannelVector::new(&parse_list(s, "--color")?)?)
}

fn parse_gains(s: &str) -> Result<GainVector> {
    let v: [f64; 3] = parse_list(s, "--gains")?
        .try_into()
        .map_err(|_| CliError::Usage("--gains takes b,g,r".into()))?;
    Ok(GainVector::new(v)?)
}

fn parse_profile(name: &str, severity: f64) -> Result<CvdProfile> {
    let d: Deficiency = name
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown --profile {name:?}")))?;
    Ok(CvdProfile::new(d, severity)?)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_curves(path: Option<&Path>) -> Result<CurveSet> {
    match path {
        Some(p) => Ok(read_curves(File::open(p)?)?),
        None => Ok(colordecode::default_curves()),
    }
}

fn write_rows(out: Box<dyn Write>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn bgr_row(c: &ChannelVector) -> Vec<String> {
    c.values().iter().map(f64::to_string).collect()
}

fn code_label(code: CodeWord) -> String {
    code.name().unwrap_or_default().to_owned()
}

/// Runs an image operation and writes whatever it produced.
fn run_image(io: &ColorOrImage, input: &Path, op: Operation) -> Result<()> {
    let config = io.ingest_config()?;
    let ingested = ingest_image(input, &config)?;
    if ingested.clamped > 0 {
        eprintln!(
            "warning: clamped {} of {} channel values to [0, 1]",
            ingested.clamped,
            ingested.image.pixels().len() * 3
        );
    }
    match run_pixel_pipeline(&ingested.image, &op) {
        PipelineOutput::Image(img) => {
            let out = io
                .output
                .as_deref()
                .ok_or_else(|| CliError::Usage("image output needs --output".into()))?;
            write_image(&img, config.transfer, out)
        }
        PipelineOutput::Hsv(hsv) => match io.output.as_deref() {
            Some(p) if is_csv(p) => hsv.write_csv(open_output(Some(p))?),
            Some(p) => write_image(&hsv.to_image(), Transfer::Linear, p),
            None => hsv.write_csv(open_output(None)?),
        },
        PipelineOutput::Report(report) => report.write_csv(open_output(io.output.as_deref())?),
    }
}

fn is_csv(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decode(io) => match (&io.color, &io.input) {
            (Some(color), _) => {
                let c = parse_color(color)?;
                let out = decode_n(&c);
                let rows: Vec<Vec<String>> = match out.signals() {
                    Some(s) => colordecode::SIGNAL_ORDER
                        .iter()
                        .map(|&code| {
                            vec![
                                code.to_string(),
                                code_label(code),
                                s.get(code).unwrap().to_string(),
                            ]
                        })
                        .collect(),
                    None => out
                        .iter()
                        .map(|(code, a)| vec![code.to_string(), code_label(code), a.to_string()])
                        .collect(),
                };
                write_rows(
                    open_output(io.output.as_deref())?,
                    &["code", "name", "activation"],
                    &rows,
                )
            }
            (None, Some(input)) => run_image(&io, input, Operation::DecodeReport),
            (None, None) => unreachable!("clap requires --color or --input"),
        },
        Command::ToHsv(io) => match (&io.color, &io.input) {
            (Some(color), _) => {
                let a = to_appearance(&parse_color(color)?)?;
                let row = vec![
                    format_hue(a.hue),
                    a.saturation.to_string(),
                    a.value.to_string(),
                    a.chroma.to_string(),
                    a.whiteness.to_string(),
                    a.blackness.to_string(),
                ];
                write_rows(
                    open_output(io.output.as_deref())?,
                    &[
                        "hue",
                        "saturation",
                        "value",
                        "chroma",
                        "whiteness",
                        "blackness",
                    ],
                    &[row],
                )
            }
            (None, Some(input)) => run_image(&io, input, Operation::ToHsv),
            (None, None) => unreachable!("clap requires --color or --input"),
        },
        Command::Decompose(arg) => {
            let d = decompose(&parse_color(&arg.color)?)?;
            let mut rows: Vec<Vec<String>> = d
                .terms
                .iter()
                .map(|t| {
                    let name = match t.unit {
                        Unit::Chromatic(u) => code_label(u.code()),
                        Unit::White => "whiteness".into(),
                    };
                    let [b, g, r] = t.unit.vector();
                    vec![
                        name,
                        t.coefficient.to_string(),
                        b.to_string(),
                        g.to_string(),
                        r.to_string(),
                    ]
                })
                .collect();
            rows.push(vec![
                "blackness".into(),
                d.blackness.to_string(),
                "0".into(),
                "0".into(),
                "0".into(),
            ]);
            write_rows(
                open_output(None)?,
                &["term", "coefficient", "B", "G", "R"],
                &rows,
            )
        }
        Command::Opponent(arg) => {
            let t = opponent(&parse_color(&arg.color)?)?;
            let row = [t.m, t.m_by, t.m_gm, t.m_rc]
                .map(|v| v.to_string())
                .to_vec();
            write_rows(open_output(None)?, &["M", "M_BY", "M_GM", "M_RC"], &[row])
        }
        Command::SimulateCvd {
            input,
            profile,
            severity,
        } => {
            let p = parse_profile(&profile, severity)?;
            match (&input.color, &input.input) {
                (Some(color), _) => {
                    let out = simulate_cvd(&parse_color(color)?, &p)?;
                    write_rows(
                        open_output(input.output.as_deref())?,
                        &["B", "G", "R"],
                        &[bgr_row(&out)],
                    )
                }
                (None, Some(path)) => run_image(&input, path, Operation::SimulateCvd(p)),
                (None, None) => unreachable!("clap requires --color or --input"),
            }
        }
        Command::Adapt { input, gains } => {
            let g = parse_gains(&gains)?;
            match (&input.color, &input.input) {
                (Some(color), _) => {
                    let out = adapt(&parse_color(color)?, &g)?;
                    let s = decode3(&out)?.signals().expect("trichromatic");
                    let mut row = bgr_row(&out);
                    row.push(s.cyanness.to_string());
                    row.extend(
                        [
                            s.redness,
                            s.yellowness,
                            s.greenness,
                            s.blueness,
                            s.magentaness,
                        ]
                        .map(|v| v.to_string()),
                    );
                    let header = [
                        "B",
                        "G",
                        "R",
                        "cyanness",
                        "redness",
                        "yellowness",
                        "greenness",
                        "blueness",
                        "magentaness",
                    ];
                    write_rows(open_output(input.output.as_deref())?, &header, &[row])
                }
                (None, Some(path)) => run_image(&input, path, Operation::Adapt(g)),
                (None, None) => unreachable!("clap requires --color or --input"),
            }
        }
        Command::Sweep { curves, output } => {
            let rows = sweep(&load_curves(curves.as_deref())?)?;
            write_sweep(&rows, open_output(output.as_deref())?)?;
            Ok(())
        }
        Command::Evolve {
            stage,
            padded,
            curves,
            output,
        } => {
            let st = EvolutionStage::from_name(&stage)
                .ok_or_else(|| CliError::Usage(format!("unknown --stage {stage:?}")))?;
            let base = load_curves(curves.as_deref())?;
            let set = if padded {
                padded_stage_from(&base, st)?
            } else {
                evolution_stage_from(&base, st)?
            };
            write_curves(&set, open_output(output.as_deref())?)?;
            Ok(())
        }
        Command::UniqueColors { n } => {
            let codes = enumerate_unique_colors(n).map_err(|e| CliError::Usage(e.to_string()))?;
            let rows: Vec<Vec<String>> = codes
                .into_iter()
                .map(|c| vec![c.to_string(), code_label(c)])
                .collect();
            write_rows(open_output(None)?, &["code", "name"], &rows)
        }
    }
}

/// A closed stdout (e.g. piped into `head`) is not a failure.
fn is_broken_pipe(e: &CliError) -> bool {
    let io = match e {
        CliError::Io(io) | CliError::Model(colordecode::Error::Io(io)) => Some(io),
        CliError::Csv(c) | CliError::Model(colordecode::Error::Csv(c)) => match c.kind() {
            csv::ErrorKind::Io(io) => Some(io),
            _ => None,
        },
        _ => None,
    };
    io.is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::Path;
use std::process::{Command, Output};

use colordecode::CvdProfile;
use colordecode::Deficiency;
use colordecode_cli::{
    ingest_image, run_pixel_pipeline, write_image, BitDepth, ImageBuffer, IngestConfig, Operation,
    PipelineOutput, Transfer,
};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colordecode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn save(dir: &Path, name: &str, pixels: Vec<[f64; 3]>, width: u32) -> String {
    let height = pixels.len() as u32 / width;
    let img = ImageBuffer::new(width, height, BitDepth::Eight, pixels).unwrap();
    let path = dir.join(name);
    write_image(&img, Transfer::Linear, &path).unwrap();
    path.to_str().unwrap().to_owned()
}

fn load(path: &str) -> Vec<[f64; 3]> {
    ingest_image(Path::new(path), &IngestConfig::default())
        .unwrap()
        .image
        .pixels()
        .to_vec()
}

#[test]
fn simulate_deutan_on_red_color() {
    let out = bin(&["simulate-cvd", "--profile", "deutan1", "--color", "0,0,1"]);
    assert_eq!(stdout(&out), "B,G,R\n0,0.5,0.5\n");
}

#[test]
fn simulate_deutan_on_red_image() {
    let dir = tempfile::tempdir().unwrap();
    let input = save(dir.path(), "red.ppm", vec![[0.0, 0.0, 1.0]; 6], 3);
    let output = dir.path().join("out.png");
    let out = bin(&[
        "simulate-cvd",
        "--profile",
        "deutan1",
        "--input",
        &input,
        "--output",
        output.to_str().unwrap(),
    ]);
    stdout(&out);
    // 127.5 rounds to 128 in 8 bits
    for p in load(output.to_str().unwrap()) {
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 0.5).abs() <= 0.5 / 255.0 + 1e-12);
        assert_eq!(p[1], p[2]);
    }
}

#[test]
fn adapted_white_image_reports_cyan() {
    let dir = tempfile::tempdir().unwrap();
    let input = save(dir.path(), "white.png", vec![[1.0; 3]; 4], 2);
    let adapted = dir.path().join("adapted.ppm");
    stdout(&bin(&[
        "adapt",
        "--gains",
        "1,1,0.6",
        "--input",
        &input,
        "--output",
        adapted.to_str().unwrap(),
    ]));
    let report = stdout(&bin(&["decode", "--input", adapted.to_str().unwrap()]));
    let mut rdr = csv::Reader::from_reader(report.as_bytes());
    let mut seen = 0;
    for row in rdr.records() {
        let row = row.unwrap();
        let mean: f64 = row[3].parse().unwrap();
        match &row[0] {
            // 0.6 is stored as 153/255
            "cyanness" => assert!((mean - 0.4).abs() <= 0.5 / 255.0),
            "whiteness" => assert!((mean - 0.6).abs() <= 0.5 / 255.0),
            "redness" | "yellowness" | "greenness" | "blueness" | "magentaness" | "blackness" => {
                assert_eq!(mean, 0.0, "{}", &row[0])
            }
            other => panic!("unexpected signal {other}"),
        }
        seen += 1;
    }
    assert_eq!(seen, 8);
}

#[test]
fn adapted_white_color_is_exactly_cyan() {
    let text = stdout(&bin(&["adapt", "--gains", "1,1,0.6", "--color", "1,1,1"]));
    let line = text.lines().nth(1).unwrap();
    assert_eq!(line, "1,1,0.6,0.4,0,0,0,0,0");
}

#[test]
fn identity_pipeline_round_trips_8_bit() {
    let dir = tempfile::tempdir().unwrap();
    let pixels: Vec<[f64; 3]> = (0..64)
        .map(|k| [k, k * 3 % 256, 255 - k].map(|v| v as f64 / 255.0))
        .collect();
    let input = save(dir.path(), "in.png", pixels.clone(), 8);
    let output = dir.path().join("out.ppm");
    stdout(&bin(&[
        "adapt",
        "--gains",
        "1,1,1",
        "--input",
        &input,
        "--output",
        output.to_str().unwrap(),
    ]));
    assert_eq!(load(output.to_str().unwrap()), pixels);
}

#[test]
fn sweep_output_shape() {
    let text = stdout(&bin(&["sweep"]));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header.len(), 16);
    assert_eq!(header[0], "wavelength_nm");
    assert_eq!(&header[12..], ["M", "M_BY", "M_GM", "M_RC"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 301);
    let (mut run, mut longest) = (0, 0);
    for row in &rows {
        let sum: f64 = row[4..12].iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        run = if row[15] == 0.0 { run + 1 } else { 0 };
        longest = longest.max(run);
    }
    assert!(longest > 1, "M_RC zero run {longest}");
}

#[test]
fn sweep_reads_curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let curves = dir.path().join("curves.csv");
    std::fs::write(
        &curves,
        "wavelength_nm,B,G,R\n500,0.9,0.2,0.1\n510,0.5,0.5,0.5\n520,0.1,0.3,0.8\n",
    )
    .unwrap();
    let text = stdout(&bin(&["sweep", "--curves", curves.to_str().unwrap()]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("510,0.5,0.5,0.5,0.5,0,0,0,0,0,0,0.5,0.5,0,0,0"));

    std::fs::write(&curves, "wavelength_nm,B,G,R\n500,0.9,x,0.1\n").unwrap();
    let out = bin(&["sweep", "--curves", curves.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_stages() {
    let text = stdout(&bin(&["evolve", "--stage", "dichromat-by"]));
    assert!(text.starts_with("wavelength_nm,B,Y\n"));
    let text = stdout(&bin(&["evolve", "--stage", "monochromat", "--padded"]));
    assert_eq!(text.lines().next().unwrap(), "wavelength_nm,W,W,W");
    assert_eq!(text.lines().count(), 302);
}

#[test]
fn unique_colors_lists_chromatic_codes() {
    let text = stdout(&bin(&["unique-colors", "--n", "4"]));
    assert_eq!(text.lines().count(), 15);
    let text = stdout(&bin(&["unique-colors"]));
    assert!(text.contains("001,redness\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&[]).status.code(), Some(1));
    assert_eq!(bin(&["decode"]).status.code(), Some(1));
    assert_eq!(bin(&["decode", "--color", "a,b"]).status.code(), Some(1));
    assert_eq!(
        bin(&["simulate-cvd", "--profile", "red", "--color", "1,1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bin(&["evolve", "--stage", "fish"]).status.code(), Some(1));
    assert_eq!(
        bin(&["decode", "--color", "0.2,1.5,0.9"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.png");
    std::fs::write(&bad, b"\x89PNG\r\n\x1a\n garbage").unwrap();
    let out = bin(&["decode", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.ppm");
    assert_eq!(
        bin(&["decode", "--input", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn out_of_gamut_matrix_is_clamped_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    let input = save(dir.path(), "in.ppm", vec![[1.0, 0.5, 0.0]; 2], 2);
    let out = bin(&["decode", "--input", &input, "--matrix", "2,0,0,0,1,0,0,0,1"]);
    stdout(&out);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("clamped 2 of 6"), "{err}");
}

#[test]
fn hsv_image_output_writes_csv_or_planes() {
    let dir = tempfile::tempdir().unwrap();
    let input = save(
        dir.path(),
        "in.png",
        vec![[0.0, 0.0, 1.0], [0.4, 0.4, 0.4]],
        2,
    );
    let text = stdout(&bin(&["to-hsv", "--input", &input]));
    assert_eq!(
        text,
        "x,y,hue,saturation,value\n0,0,0.000000000,1,1\n1,0,,0,0.4\n"
    );
    let planes = dir.path().join("hsv.png");
    stdout(&bin(&[
        "to-hsv",
        "--input",
        &input,
        "--output",
        planes.to_str().unwrap(),
    ]));
    assert_eq!(
        load(planes.to_str().unwrap()),
        vec![[1.0, 1.0, 0.0], [0.4, 0.0, 0.0]]
    );
}

#[test]
fn pipeline_is_deterministic_across_thread_counts() {
    let pixels: Vec<[f64; 3]> = (0..4096)
        .map(|k| {
            [k % 17, k % 31, k % 7]
                .map(|v| v as f64 / 31.0)
                .map(|v: f64| v.min(1.0))
        })
        .collect();
    let img = ImageBuffer::new(64, 64, BitDepth::Sixteen, pixels).unwrap();
    let ops = [
        Operation::DecodeReport,
        Operation::ToHsv,
        Operation::SimulateCvd(CvdProfile::new(Deficiency::Protan, 0.7).unwrap()),
    ];
    let run = |threads: usize| -> Vec<PipelineOutput> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| ops.iter().map(|op| run_pixel_pipeline(&img, op)).collect())
    };
    let one = run(1);
    for threads in [2, 4, 8] {
        assert_eq!(run(threads), one, "{threads} threads");
    }
}

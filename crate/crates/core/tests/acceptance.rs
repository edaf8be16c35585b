//! Exit criteria. Each check prints one PASS/FAIL line; the test fails if
//! any criterion fails or exceeds its runtime budget.

use std::time::{Duration, Instant};

use colordecode::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_VECTORS: usize = 100_000;

struct Outcome {
    id: u32,
    name: &'static str,
    failure: Option<String>,
    elapsed: Duration,
    budget: Duration,
}

fn run(
    id: u32,
    name: &'static str,
    budget: Duration,
    check: impl FnOnce() -> Result<(), String>,
) -> Outcome {
    let start = Instant::now();
    let mut failure = check().err();
    let elapsed = start.elapsed();
    if failure.is_none() && elapsed > budget {
        failure = Some(format!("took {elapsed:?}, budget {budget:?}"));
    }
    let status = if failure.is_none() { "PASS" } else { "FAIL" };
    println!(
        "[{status}] criterion {id:>2}: {name} ({:.1} ms){}",
        elapsed.as_secs_f64() * 1e3,
        failure
            .as_deref()
            .map(|f| format!(" -- {f}"))
            .unwrap_or_default()
    );
    Outcome {
        id,
        name,
        failure,
        elapsed,
        budget,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_vectors(n: usize, seed: u64) -> impl Iterator<Item = ChannelVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_VECTORS).map(move |_| {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        ChannelVector::new(&v).unwrap()
    })
}

fn grid3(steps: usize) -> impl Iterator<Item = [f64; 3]> {
    let d = (steps - 1) as f64;
    (0..steps.pow(3))
        .map(move |k| [k % steps, k / steps % steps, k / (steps * steps)].map(|i| i as f64 / d))
}

/// Independent textbook hexcone transform on (r, g, b).
fn hexcone(r: f64, g: f64, b: f64) -> (Option<f64>, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let s = if max == 0.0 { 0.0 } else { delta / max };
    if delta == 0.0 {
        return (None, s, max);
    }
    let sector = if max == r {
        ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    (Some(sector * 60.0), s, max)
}

fn binary_corners() -> Result<(), String> {
    // BGR bit strings in signal order; row k lights column k
    let rows = ["000", "001", "011", "010", "110", "100", "101", "111"];
    for (row, bits) in rows.iter().enumerate() {
        let v: Vec<f64> = bits
            .chars()
            .map(|ch| if ch == '1' { 1.0 } else { 0.0 })
            .collect();
        let s = decode3(&ChannelVector::new(&v).unwrap())
            .map_err(|e| e.to_string())?
            .signals()
            .unwrap()
            .to_array();
        for (col, a) in s.iter().enumerate() {
            let want = if col == row { 1.0 } else { 0.0 };
            ensure(*a == want, || format!("row {bits} column {col}: {a}"))?;
        }
    }
    Ok(())
}

fn hexcone_equivalence() -> Result<(), String> {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for [b, g, r] in grid3(17) {
        let a = to_appearance(&ChannelVector::bgr(b, g, r).unwrap()).unwrap();
        let (h, s, v) = hexcone(r, g, b);
        worst.0 = worst.0.max((a.value - v).abs());
        worst.1 = worst.1.max((a.saturation - s).abs());
        if a.chroma > 0.0 {
            let (ours, theirs) = (a.hue.ok_or("missing hue")?, h.ok_or("oracle missing hue")?);
            let d = (ours - theirs).rem_euclid(360.0);
            worst.2 = worst.2.max(d.min(360.0 - d));
        }
    }
    ensure(
        worst.0 <= 1e-12 && worst.1 <= 1e-12 && worst.2 <= 1e-9,
        || {
            format!(
                "max |dV|={:e} |dS|={:e} |dH|={:e}",
                worst.0, worst.1, worst.2
            )
        },
    )
}

fn partition_of_unity() -> Result<(), String> {
    for n in 1..=4usize {
        for c in random_vectors(n, 0xC0DE + n as u64) {
            let out = decode_n(&c);
            let sum = out.sum();
            ensure((sum - 1.0).abs() <= 1e-12, || {
                format!("n={n} {c:?} sums to {sum}")
            })?;
            ensure(out.nonzero_count() <= n + 1, || {
                format!("n={n} {c:?} has {} nonzeros", out.nonzero_count())
            })?;
        }
    }
    Ok(())
}

fn reconstruction() -> Result<(), String> {
    for c in random_vectors(3, 4) {
        let d = decompose(&c).map_err(|e| e.to_string())?;
        let back = d.recombine();
        for (x, y) in back.iter().zip(c.values()) {
            ensure((x - y).abs() <= 1e-12, || {
                format!("{c:?} rebuilt as {back:?}")
            })?;
        }
        let s = decode3(&c).unwrap().signals().unwrap();
        ensure(d.blackness == s.blackness, || format!("{c:?} blackness"))?;
        for t in &d.terms {
            let want = match t.unit {
                Unit::White => s.whiteness,
                Unit::Chromatic(u) => s.get(u.code()).unwrap(),
            };
            ensure(t.coefficient == want, || {
                format!("{c:?} coefficient of {:?}", t.unit)
            })?;
        }
    }
    Ok(())
}

fn opponent_round_trip() -> Result<(), String> {
    for c in random_vectors(3, 5) {
        let t = opponent(&c).unwrap();
        let ch = t.channels();
        ensure(ch.iter().filter(|&&v| v > 0.0).count() <= 1, || {
            format!("{t:?}")
        })?;
        ensure(ch.iter().filter(|&&v| v < 0.0).count() <= 1, || {
            format!("{t:?}")
        })?;
        ensure(ch.contains(&0.0), || format!("{t:?} has no zero channel"))?;
        let back = opponent_to_codes(&t).map_err(|e| e.to_string())?;
        let want = decode3(&c).unwrap().signals().unwrap().chromatic();
        ensure(back == want, || format!("{c:?}: {back:?} != {want:?}"))?;
    }
    Ok(())
}

fn med_values() -> Result<(), String> {
    for (args, want) in [
        ((1.0, 3.0, 5.0), 3.0),
        ((1.0, 2.0, 5.0), 2.0),
        ((1.0, 5.0, 5.0), 5.0),
        ((1.0, 1.0, 5.0), 1.0),
    ] {
        let got = med(args.0, args.1, args.2);
        ensure(got == want, || format!("med{args:?} = {got}"))?;
    }
    Ok(())
}

fn code_extinction() -> Result<(), String> {
    for d in Deficiency::ALL {
        let p = CvdProfile::full(d);
        let allowed = perceivable_chromatic_codes(&p).map_err(|e| e.to_string())?;
        if d == Deficiency::Monochromatism {
            ensure(allowed.is_empty(), || {
                "monochromat perceives chromatic codes".into()
            })?;
        }
        for bgr in grid3(33) {
            let out = simulate_cvd(&ChannelVector::new(&bgr).unwrap(), &p).unwrap();
            for (code, a) in decode3(&out).unwrap().iter() {
                if code.is_chromatic() && !allowed.contains(&code) {
                    ensure(a == 0.0, || format!("{d}: code {code} = {a} at {bgr:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn afterimage() -> Result<(), String> {
    let white = ChannelVector::bgr(1.0, 1.0, 1.0).unwrap();
    let adapted = adapt(&white, &GainVector::new([1.0, 1.0, 0.6]).unwrap()).unwrap();
    let s = decode3(&adapted).unwrap().signals().unwrap();
    ensure(s.cyanness == 0.4, || format!("cyanness {}", s.cyanness))?;
    let others = [
        s.redness,
        s.yellowness,
        s.greenness,
        s.blueness,
        s.magentaness,
    ];
    ensure(others == [0.0; 5], || {
        format!("other chromatic signals {others:?}")
    })
}

fn plateau() -> Result<(), String> {
    let rows = sweep(&default_curves()).map_err(|e| e.to_string())?;
    let longest = |f: fn(&OpponentTriple) -> f64| {
        zero_runs(rows.iter().map(|r| f(&r.opponent)))
            .into_iter()
            .map(|(_, len)| len)
            .max()
            .unwrap_or(0)
    };
    let rc = longest(|o| o.m_rc);
    ensure(rc >= 2, || format!("longest M_RC zero run {rc}"))?;
    // every channel that has a median band at all holds it over >= 2 samples
    for (name, f) in [
        (
            "M_BY",
            (|o: &OpponentTriple| o.m_by) as fn(&OpponentTriple) -> f64,
        ),
        ("M_GM", |o| o.m_gm),
        ("M_RC", |o| o.m_rc),
    ] {
        let run = longest(f);
        ensure(run == 0 || run >= 2, || {
            format!("{name} longest zero run {run}")
        })?;
    }
    Ok(())
}

fn unique_colors() -> Result<(), String> {
    let n3 = enumerate_unique_colors(3).map_err(|e| e.to_string())?.len();
    let n4 = enumerate_unique_colors(4).map_err(|e| e.to_string())?.len();
    ensure(n3 == 6 && n4 == 14, || {
        format!("counts n=3: {n3}, n=4: {n4}")
    })?;
    for c in random_vectors(4, 10) {
        let out = decode_n(&c);
        ensure((out.sum() - 1.0).abs() <= 1e-12, || format!("{c:?} sum"))?;
        ensure(out.nonzero_count() <= 5, || format!("{c:?} nonzeros"))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let ms = Duration::from_millis;
    let outcomes = [
        run(
            1,
            "binary corners decode to one code",
            ms(1),
            binary_corners,
        ),
        run(
            2,
            "hexcone HSV equivalence on 17^3 grid",
            ms(1000),
            hexcone_equivalence,
        ),
        run(
            3,
            "partition of unity, n = 1..4, 1e5 each",
            ms(5000),
            partition_of_unity,
        ),
        run(
            4,
            "decomposition reconstruction, 1e5",
            ms(2000),
            reconstruction,
        ),
        run(5, "opponent round trip, 1e5", ms(2000), opponent_round_trip),
        run(6, "med reference values", ms(1), med_values),
        run(
            7,
            "dichromat code extinction on 33^3 grid",
            ms(5000),
            code_extinction,
        ),
        run(8, "afterimage cyanness", ms(1), afterimage),
        run(9, "opponent plateau in sweep", ms(1000), plateau),
        run(
            10,
            "unique color counts and n=4 decoding",
            ms(1000),
            unique_colors,
        ),
    ];
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| o.failure.is_some())
        .map(|o| format!("{} ({}, {:?} of {:?})", o.id, o.name, o.elapsed, o.budget))
        .collect();
    println!(
        "{} of {} criteria passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Command-line interface: compute | member | staples | segments | domain.

use std::process::ExitCode;
use veech::cli;
use veech::driver::{compute, stopping_test, ComputeOptions, Pipeline, Status};
use veech::exactnum::Rat;
use veech::flat::{delaunay, enumerate_segments, voronoi_staples};
use veech::geom::Mat2;
use veech::hyperbolic::ball_data;
use veech::membership::nu_sq;

const USAGE: &str = "usage:
  veech compute <surface> [--max-norm F] [--emit-json PATH] [--emit-svg PATH]
                [--no-shift] [--shift-n N] [--precision-bits N] [--quiet]
  veech member <surface> --matrix \"a,b;c,d\" [--quiet]
  veech staples <surface>
  veech segments <surface> --radius R
  veech domain <surface> --matrices \"a,b;c,d a,b;c,d ...\" [--norm-bound F] [--emit-svg PATH]

surfaces: square-torus | hex-torus | L | L(a,b) | mcmullen-genus2 [--a LIT] | a JSON file
element literals: rationals like 3/4, radicals like 1+sqrt3
global flags: --precision-bits N (default 64), --seed S, --quiet

exit codes for compute: 0 terminated, 2 norm bound reached, 1 error";

struct Args {
    positional: Vec<String>,
    flags: std::collections::HashMap<String, String>,
    switches: std::collections::HashSet<String>,
}

fn parse_args(argv: &[String]) -> Args {
    let mut positional = Vec::new();
    let mut flags = std::collections::HashMap::new();
    let mut switches = std::collections::HashSet::new();
    let value_flags = [
        "--max-norm",
        "--emit-json",
        "--emit-svg",
        "--precision-bits",
        "--matrix",
        "--matrices",
        "--radius",
        "--norm-bound",
        "--seed",
        "--a",
        "--shift-n",
    ];
    let mut i = 0;
    while i < argv.len() {
        let arg = &argv[i];
        if value_flags.contains(&arg.as_str()) {
            if i + 1 < argv.len() {
                flags.insert(arg.clone(), argv[i + 1].clone());
                i += 2;
                continue;
            }
        }
        if arg.starts_with("--") {
            switches.insert(arg.clone());
        } else {
            positional.push(arg.clone());
        }
        i += 1;
    }
    Args { positional, flags, switches }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() {
        eprintln!("{USAGE}");
        return ExitCode::from(1);
    }
    let cmd = argv[0].clone();
    let args = parse_args(&argv[1..]);
    match run(&cmd, &args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: &str, args: &Args) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let quiet = args.switches.contains("--quiet");
    match cmd {
        "compute" => {
            let surface = resolve(args)?;
            let mut opts = ComputeOptions::default();
            if let Some(f) = args.flags.get("--max-norm") {
                let norm = cli::parse_rational(f)?;
                opts.max_norm_sq = norm.clone() * norm;
            }
            if let Some(p) = args.flags.get("--precision-bits") {
                opts.precision_bits = p.parse()?;
            }
            if args.switches.contains("--no-shift") {
                opts.auto_shift = false;
            }
            if let Some(n) = args.flags.get("--shift-n") {
                opts.shift_n = Some(n.parse()?);
            }
            let res = compute(&surface, &opts)?;
            let out = cli::result_to_json(&res);
            if let Some(path) = args.flags.get("--emit-json") {
                std::fs::write(path, serde_json::to_string_pretty(&out)?)?;
            }
            if let Some(path) = args.flags.get("--emit-svg") {
                let ball = ball_data(&res.final_norm_sq, surface.spec(), opts.precision_bits)
                    .ok()
                    .map(|b| (b.cosh.mid_f64(), b.sinh.mid_f64()));
                std::fs::write(path, cli::render_domain_svg(&res, ball))?;
            }
            if !quiet {
                println!("{}", serde_json::to_string_pretty(&out)?);
            }
            Ok(match res.status {
                Status::Terminated => ExitCode::from(0),
                Status::NormBoundReached => ExitCode::from(2),
            })
        }
        "member" => {
            let surface = resolve(args)?;
            let text = args
                .flags
                .get("--matrix")
                .ok_or("member requires --matrix \"a,b;c,d\"")?;
            let matrix = cli::parse_matrix(surface.spec(), text)?;
            let mut pipe = Pipeline::new(surface)?;
            let verdict = pipe.is_member(&matrix)?;
            let witness = if verdict {
                find_witness(&mut pipe, &matrix)
            } else {
                None
            };
            let staples_json: Vec<serde_json::Value> = pipe
                .staple_pairs
                .iter()
                .enumerate()
                .flat_map(|(i, (f, b))| {
                    [
                        cli::marked_segment_to_json(f, 2 * i + 1),
                        cli::marked_segment_to_json(b, 2 * i),
                    ]
                })
                .collect();
            let out = serde_json::json!({
                "matrix": cli::matrix_to_json(&matrix),
                "member": verdict,
                "witness_translation": witness,
                "marked_staples": staples_json,
            });
            if !quiet {
                println!("{}", serde_json::to_string_pretty(&out)?);
            }
            Ok(ExitCode::from(if verdict { 0 } else { 2 }))
        }
        "staples" => {
            let surface = resolve(args)?;
            let tri = delaunay(&surface);
            let staples = voronoi_staples(&tri);
            let items: Vec<serde_json::Value> = staples
                .staples
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "segment": cli::connection_to_json(&s.forward),
                        "reverse": cli::connection_to_json(&s.backward),
                    })
                })
                .collect();
            let out = serde_json::json!({
                "count": staples.len(),
                "max_length_sq": staples.max_len_sq.to_f64(),
                "staples": items,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::from(0))
        }
        "segments" => {
            let surface = resolve(args)?;
            let r_text = args.flags.get("--radius").ok_or("segments requires --radius R")?;
            let r = cli::parse_rational(r_text)?;
            let r_sq = veech::exactnum::FieldElement::from_rat(surface.spec(), r.clone() * r);
            let tri = delaunay(&surface);
            let segs = enumerate_segments(&tri, &r_sq);
            for c in &segs {
                println!("{}", serde_json::to_string(&cli::connection_to_json(c))?);
            }
            eprintln!("{} segments of length at most {}", segs.len(), r_text);
            Ok(ExitCode::from(0))
        }
        "domain" => {
            let surface = resolve(args)?;
            let text = args
                .flags
                .get("--matrices")
                .ok_or("domain requires --matrices \"a,b;c,d a,b;c,d ...\"")?;
            let mats: Vec<Mat2> = text
                .split_whitespace()
                .map(|m| cli::parse_matrix(surface.spec(), m))
                .collect::<Result<_, _>>()?;
            let a_sq: Rat = match args.flags.get("--norm-bound") {
                Some(f) => {
                    let n = cli::parse_rational(f)?;
                    n.clone() * n
                }
                None => {
                    // smallest bound covering the listed matrices
                    let mut best = veech::exactnum::rat_int(2);
                    for m in &mats {
                        let (_, hi) = m.frobenius_norm_sq().to_interval(64);
                        if hi > best {
                            best = hi;
                        }
                    }
                    best
                }
            };
            let opts = ComputeOptions::default();
            let (verdict, poly) = stopping_test(&mats, &a_sq, &opts)?;
            // optional sampling self-check: points of the agreement ball
            // classified against the polygon, reported as a statistic
            let sample_stats = args.flags.get("--seed").map(|seed_text| {
                let seed: u64 = seed_text.parse().unwrap_or(1);
                sample_ball_statistic(&poly, &a_sq, surface.spec(), seed)
            });
            let mut out = serde_json::json!({
                "domain": cli::domain_to_json(&poly),
                "stopping_test": format!("{verdict:?}"),
            });
            if let Some((inside, total)) = sample_stats {
                out["ball_sample"] = serde_json::json!({
                    "points": total,
                    "inside_domain": inside,
                });
            }
            if let Some(path) = args.flags.get("--emit-svg") {
                let ball = ball_data(&a_sq, surface.spec(), opts.precision_bits)
                    .ok()
                    .map(|b| (b.cosh.mid_f64(), b.sinh.mid_f64()));
                let fake = veech::driver::VeechResult {
                    status: Status::NormBoundReached,
                    elements: Vec::new(),
                    generators: Vec::new(),
                    domain: poly.clone(),
                    signature: None,
                    shift: None,
                    contains_minus_identity: false,
                    final_norm_sq: a_sq.clone(),
                    domain_area: None,
                    certificate: None,
                    precision_exhausted: false,
                };
                std::fs::write(path, cli::render_domain_svg(&fake, ball))?;
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::from(0))
        }
        "--help" | "help" | "-h" => {
            println!("{USAGE}");
            Ok(ExitCode::from(0))
        }
        other => {
            eprintln!("unknown command {other:?}\n{USAGE}");
            Ok(ExitCode::from(1))
        }
    }
}

fn resolve(args: &Args) -> Result<veech::surface::TranslationSurface, Box<dyn std::error::Error>> {
    let name = args
        .positional
        .first()
        .ok_or("missing surface argument")?;
    Ok(cli::resolve_surface(name, args.flags.get("--a").map(|s| s.as_str()))?)
}

/// Classify pseudo-random rational points of the agreement ball against
/// the domain; the counts give a quick sanity statistic for --seed runs.
fn sample_ball_statistic(
    poly: &veech::hyperbolic::HPolygon,
    a_sq: &Rat,
    spec: &std::sync::Arc<veech::exactnum::FieldSpec>,
    seed: u64,
) -> (usize, usize) {
    use veech::exactnum::{rat, FieldElement};
    use veech::hyperbolic::PointClass;
    let Ok(ball) = ball_data(a_sq, spec, 96) else {
        return (0, 0);
    };
    let (ch, sh) = (ball.cosh.mid_f64(), ball.sinh.mid_f64());
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut inside = 0usize;
    let mut total = 0usize;
    for _ in 0..4000 {
        let x = (2.0 * next() - 1.0) * sh;
        let y = ch + (2.0 * next() - 1.0) * sh;
        if x * x + (y - ch) * (y - ch) > sh * sh * 0.999 || y <= 0.0 {
            continue;
        }
        total += 1;
        let xf = FieldElement::from_rat(spec, rat((x * 1e7) as i64, 10_000_000));
        let yf = FieldElement::from_rat(spec, rat((y * 1e7) as i64, 10_000_000));
        if poly.classify_point(&xf, &yf.square()) != PointClass::Out {
            inside += 1;
        }
    }
    (inside, total)
}

/// Recover the translation element witnessing membership, for reporting.
fn find_witness(pipe: &mut Pipeline, matrix: &Mat2) -> Option<serde_json::Value> {
    use veech::model::{apply_fa, apply_trans, MarkedSegment};
    let needed = veech::membership::required_radius_sq(
        &matrix.frobenius_norm_sq(),
        &pipe.staples.max_len_sq,
        64,
    )
    .ok()?;
    pipe.ensure_radius(&needed).ok()?;
    let _ = nu_sq(&matrix.frobenius_norm_sq(), 64);
    let index = pipe.index();
    't: for t in &pipe.trans {
        for (f, b) in &pipe.staple_pairs {
            let imf: MarkedSegment = apply_trans(t, &pipe.turns, &apply_fa(matrix, &pipe.turns, f));
            let imb: MarkedSegment = apply_trans(t, &pipe.turns, &apply_fa(matrix, &pipe.turns, b));
            let (Some(i1), Some(i2)) = (index.find(&imf), index.find(&imb)) else {
                continue 't;
            };
            if index.pair_index(i1) != i2 {
                continue 't;
            }
        }
        return Some(serde_json::json!({
            "cone_permutation": t.perm,
            "sector_rotations": t.rot,
        }));
    }
    None
}

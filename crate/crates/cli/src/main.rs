//! `segre-rank`: classify, decompose and verify tensors of border rank ≤ 2.
//!
//! Exit codes: 0 success, 1 input error, 2 the input lies outside σ₂,
//! 3 symmetric and tensor rank disagree.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use segre_rank::batch::classify_all;
use segre_rank::classify::eta_of;
use segre_rank::io::{read_json, read_poly, read_tensor, tensor_to_json, write_json};
use segre_rank::{
    comon_check, decompose, generate, verify, BorderRankClass, Classification, Decomposition, Error, GenKind,
    GenSpec, Rational, Scalar, Shape, TangentParams,
};

const EXIT_INPUT: u8 = 1;
const EXIT_BEYOND: u8 = 2;
const EXIT_COMON: u8 = 3;

#[derive(Parser)]
#[command(name = "segre-rank", version, about = "Exact rank and decompositions on the second secant variety of a Segre variety")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Stratum, border rank, rank, type and multilinear ranks, one JSON line per file.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Rank of a tensor.
    Rank { file: PathBuf },
    /// A decomposition with exactly rank-many terms, verified before it is written.
    Decompose {
        file: PathBuf,
        /// Tangent points: `t₁,…,t_{q−1}`, nonzero rationals such as `1,-1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<Rational>>,
        /// Write the decomposition here and print only the verdict.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact check that a decomposition sums to a tensor.
    Verify { decomposition: PathBuf, tensor: PathBuf },
    /// Tensor rank versus symmetric rank of a homogeneous polynomial.
    Comon { file: PathBuf },
    /// Seeded instance of known stratum, with its ground truth.
    Gen {
        #[arg(long)]
        kind: GenKind,
        /// Dimensions such as `3x3x4x2`.
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        /// Modes carrying a tangent direction, such as `0,1,2`.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on numerators and denominators.
        #[arg(long, default_value_t = segre_rank::gen::DEFAULT_HEIGHT)]
        height: u32,
        /// Rank 2 only: a conjugate pair over ℚ(√delta).
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<i64>,
        /// Tensor file; the ground truth goes next to it as `<stem>.sidecar.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    let dims = s
        .split(['x', 'X', '×'])
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Shape::new(dims).map_err(|e| e.to_string())
}

/// Failure carrying its exit code; the message goes to standard error.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(EXIT_INPUT, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("segre-rank: {msg}");
            ExitCode::from(code)
        }
    }
}

fn print(v: &Value) {
    println!("{v}");
}

fn run(verb: Verb) -> Result<u8, Fail> {
    match verb {
        Verb::Classify { files } => run_classify(&files),
        Verb::Rank { file } => {
            let t = read_tensor(&file)?;
            let class = segre_rank::classify(&t)?;
            match class.rank() {
                Some(r) => {
                    print(&json!({ "rank": r, "stratum": class.tag() }));
                    Ok(0)
                }
                None => {
                    print(&json!({ "rank": null, "stratum": class.tag() }));
                    Ok(EXIT_BEYOND)
                }
            }
        }
        Verb::Decompose { file, params, out } => run_decompose(&file, params, out.as_deref()),
        Verb::Verify { decomposition, tensor } => {
            let dec = Decomposition::from_json(&read_json(&decomposition)?)?;
            let t = read_tensor(&tensor)?;
            let ok = verify(&dec, &t);
            print(&json!({ "verified": ok }));
            if ok {
                Ok(0)
            } else {
                Err(Fail(EXIT_INPUT, "decomposition does not reconstruct the tensor".into()))
            }
        }
        Verb::Comon { file } => {
            let f = read_poly(&file)?;
            let report = comon_check(&f)?;
            print(&serde_json::to_value(&report).map_err(Error::from)?);
            Ok(if report.equal { 0 } else { EXIT_COMON })
        }
        Verb::Gen { kind, shape, modes, seed, height, delta, out } => {
            let spec = GenSpec { kind, shape, tangent_modes: modes, seed, height, delta };
            let (t, sidecar) = generate(&spec)?;
            let sidecar = serde_json::to_value(&sidecar).map_err(Error::from)?;
            match out {
                Some(path) => {
                    let side = sidecar_path(&path);
                    write_json(&path, &tensor_to_json(&t))?;
                    write_json(&side, &sidecar)?;
                    print(&json!({ "tensor": path, "sidecar": side }));
                }
                None => print(&json!({ "tensor": tensor_to_json(&t), "sidecar": sidecar })),
            }
            Ok(0)
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.sidecar.json"))
}

fn report(c: &Classification) -> Value {
    let eta = eta_of(c.class).ok();
    json!({
        "stratum": c.class.tag(),
        "border_rank": c.class.border_rank(),
        "rank": c.class.rank(),
        "eta": eta.map(|e| e.value),
        "eta_defined": eta.is_some_and(|e| e.defined),
        "multilinear_ranks": c.multilinear_ranks,
    })
}

fn run_classify(files: &[PathBuf]) -> Result<u8, Fail> {
    let mut parsed = Vec::with_capacity(files.len());
    let mut code = 0;
    let mut slots = Vec::with_capacity(files.len());
    for f in files {
        match read_tensor(f) {
            Ok(t) => {
                slots.push(Ok(parsed.len()));
                parsed.push(t);
            }
            Err(e) => slots.push(Err(e)),
        }
    }
    let mut results: Vec<Option<_>> = classify_all(&parsed, Default::default()).into_iter().map(Some).collect();
    for (f, slot) in files.iter().zip(slots) {
        let result = slot.and_then(|i| results[i].take().expect("each result is read once"));
        match result {
            Ok(c) => {
                if c.class == BorderRankClass::BeyondSigmaTwo {
                    code = code.max(EXIT_BEYOND);
                }
                let mut r = report(&c);
                if files.len() > 1 {
                    r["file"] = json!(f);
                }
                print(&r);
            }
            Err(e) => {
                eprintln!("segre-rank: {}: {e}", f.display());
                code = EXIT_INPUT;
            }
        }
    }
    Ok(code)
}

fn run_decompose(file: &Path, params: Option<Vec<Rational>>, out: Option<&Path>) -> Result<u8, Fail> {
    let t = read_tensor(file)?;
    let params = params.map(|p| TangentParams::new(p.into_iter().map(Scalar::from).collect())).transpose()?;
    let dec = match decompose(&t, params.as_ref()) {
        Ok(d) => d,
        Err(Error::NotInSigma2) => {
            print(&json!({ "stratum": BorderRankClass::BeyondSigmaTwo.tag() }));
            return Ok(EXIT_BEYOND);
        }
        Err(e) => return Err(e.into()),
    };
    let verified = verify(&dec, &t);
    if !verified {
        return Err(Fail(EXIT_INPUT, "decomposition failed exact reconstruction".into()));
    }
    let body = dec.to_json()?;
    match out {
        Some(path) => {
            write_json(path, &body)?;
            print(&json!({ "verified": verified, "rank": dec.claimed_rank, "out": path }));
        }
        None => print(&json!({ "verified": verified, "rank": dec.claimed_rank, "decomposition": body })),
    }
    Ok(0)
}

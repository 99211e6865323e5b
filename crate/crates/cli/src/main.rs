//! `ttkit` command-line tool.
//!
//! Exit status: 0 on success, 2 on parse or validation errors, 3 when a dense
//! materialization would exceed the memory cap.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ttkit::linops::{self, TtMatrix};
use ttkit::{io, limits, random, DenseTensor, Error, Orth, OrthMode, Truncation, TtTensor};

#[derive(Parser)]
#[command(name = "ttkit", version, about = "Tensor-train algebra on .dnst/.ttv/.ttm files")]
struct Cli {
    /// Cap on dense allocations, in bytes.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MEMORY_CAP)]
    mem_cap: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Dense,
    Tt,
    Ttm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Canon {
    Left,
    Right,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum BenchOp {
    Dot,
    Add,
    Hadamard,
    Round,
    Matvec,
}

#[derive(clap::Args)]
struct TruncArgs {
    /// Relative Frobenius tolerance.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Per-bond rank caps, comma separated.
    #[arg(long, value_delimiter = ',')]
    max_ranks: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded random instance with entries uniform in [-1, 1].
    Random {
        kind: Kind,
        /// Mode sizes (output sizes for a matrix TT).
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Input sizes of a matrix TT (defaults to --dims).
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<usize>>,
        /// Bond ranks (default all 1).
        #[arg(long, value_delimiter = ',')]
        ranks: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// TT-SVD of a dense tensor.
    Decompose {
        input: PathBuf,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Recompress a TT tensor.
    Round {
        input: PathBuf,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Orthogonalize a TT tensor around a 0-based site.
    Orthogonalize {
        input: PathBuf,
        #[arg(long)]
        site: usize,
        #[arg(long, value_enum, default_value = "mixed")]
        mode: Canon,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print order, sizes, ranks, flags and storage.
    Info { input: PathBuf },
    /// Densify a TT tensor or matrix TT into a .dnst file.
    Densify {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sum of two TT tensors (no rounding).
    Add {
        x: PathBuf,
        y: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Elementwise product of two TT tensors (no rounding).
    Hadamard {
        x: PathBuf,
        y: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Inner product of two TT tensors.
    Dot { x: PathBuf, y: PathBuf },
    /// Apply a matrix TT to a TT tensor.
    Matvec {
        a: PathBuf,
        x: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Quadratic form x^T A x.
    Quadform { a: PathBuf, x: PathBuf },
    /// Time an operation on random trains; prints CSV.
    Bench {
        #[arg(long, value_enum, default_value = "dot")]
        op: BenchOp,
        /// Orders to time.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        i: usize,
        #[arg(long, default_value_t = 8)]
        r: usize,
        /// Calls per timed batch.
        #[arg(long, default_value_t = 20)]
        reps: usize,
        /// Timed batches; the median is reported.
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

type CmdResult<T = ()> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Maps a library error, naming `what` (usually a file) in the message.
fn lib_err(what: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure {
        code: if matches!(e, Error::MemoryCap { .. }) { 3 } else { 2 },
        msg: format!("{what}: {e}"),
    }
}

fn expect_ext(path: &Path, ext: &str) -> CmdResult {
    if path.extension().and_then(|e| e.to_str()) != Some(ext) {
        return Err(usage(format!("{}: expected a .{ext} file", path.display())));
    }
    Ok(())
}

fn read_tt(path: &Path) -> CmdResult<TtTensor> {
    expect_ext(path, "ttv")?;
    io::read_tt(path).map_err(lib_err(&path.display().to_string()))
}

fn read_ttm(path: &Path) -> CmdResult<TtMatrix> {
    expect_ext(path, "ttm")?;
    io::read_ttm(path).map_err(lib_err(&path.display().to_string()))
}

fn read_dense(path: &Path) -> CmdResult<DenseTensor> {
    expect_ext(path, "dnst")?;
    io::read_dense(path).map_err(lib_err(&path.display().to_string()))
}

fn write_tt(path: &Path, x: &TtTensor) -> CmdResult {
    expect_ext(path, "ttv")?;
    io::write_tt(path, x).map_err(lib_err(&path.display().to_string()))
}

fn truncation(t: &TruncArgs) -> CmdResult<Truncation> {
    let spec = Truncation::eps(t.eps).map_err(lib_err("--eps"))?;
    match &t.max_ranks {
        Some(r) => spec.with_max_ranks(r.clone()).map_err(lib_err("--max-ranks")),
        None => Ok(spec),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn flag_name(o: Orth) -> &'static str {
    match o {
        Orth::None => "none",
        Orth::Left => "left",
        Orth::Right => "right",
    }
}

fn ensure_same_dims(a: &TtTensor, b: &TtTensor, pa: &Path, pb: &Path) -> CmdResult {
    if a.dims() != b.dims() {
        return Err(usage(format!(
            "{}: mode sizes {:?} do not match {} ({:?})",
            pb.display(),
            b.dims(),
            pa.display(),
            a.dims()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    limits::set_memory_cap(cli.mem_cap);
    match cli.cmd {
        Cmd::Random { kind, dims, cols, ranks, seed, output } => {
            let ranks = ranks.unwrap_or_else(|| vec![1; dims.len().saturating_sub(1)]);
            let mut rng = random::seeded(seed);
            let out = output.display().to_string();
            match kind {
                Kind::Dense => {
                    expect_ext(&output, "dnst")?;
                    let x = random::dense(&mut rng, &dims).map_err(lib_err("--dims"))?;
                    io::write_dense(&output, &x).map_err(lib_err(&out))
                }
                Kind::Tt => {
                    let x = random::tt(&mut rng, &dims, &ranks).map_err(lib_err("--ranks"))?;
                    write_tt(&output, &x)
                }
                Kind::Ttm => {
                    expect_ext(&output, "ttm")?;
                    let cols = cols.unwrap_or_else(|| dims.clone());
                    let a = random::tt_matrix(&mut rng, &dims, &cols, &ranks).map_err(lib_err("--ranks"))?;
                    io::write_ttm(&output, &a).map_err(lib_err(&out))
                }
            }
        }
        Cmd::Decompose { input, trunc, output } => {
            let x = read_dense(&input)?;
            let spec = truncation(&trunc)?;
            let t = TtTensor::from_dense(&x, &spec).map_err(lib_err(&input.display().to_string()))?;
            write_tt(&output, &t)
        }
        Cmd::Round { input, trunc, output } => {
            let x = read_tt(&input)?;
            let spec = truncation(&trunc)?;
            let t = x.round(&spec).map_err(lib_err(&input.display().to_string()))?;
            write_tt(&output, &t)
        }
        Cmd::Orthogonalize { input, site, mode, output } => {
            let x = read_tt(&input)?;
            let mode = match mode {
                Canon::Left => OrthMode::LeftUpTo(site),
                Canon::Right => OrthMode::RightDownTo(site),
                Canon::Mixed => OrthMode::MixedAt(site),
            };
            let t = x.orthogonalize(mode).map_err(lib_err("--site"))?;
            write_tt(&output, &t)
        }
        Cmd::Info { input } => info(&input),
        Cmd::Densify { input, output } => {
            expect_ext(&output, "dnst")?;
            let name = input.display().to_string();
            let d = match input.extension().and_then(|e| e.to_str()) {
                Some("ttv") => read_tt(&input)?.to_dense().map_err(lib_err(&name))?,
                Some("ttm") => {
                    let m = read_ttm(&input)?.to_dense().map_err(lib_err(&name))?;
                    DenseTensor::from_matrix(&m).map_err(lib_err(&name))?
                }
                _ => return Err(usage(format!("{name}: expected a .ttv or .ttm file"))),
            };
            io::write_dense(&output, &d).map_err(lib_err(&output.display().to_string()))
        }
        Cmd::Add { x, y, output } => {
            let (a, b) = (read_tt(&x)?, read_tt(&y)?);
            ensure_same_dims(&a, &b, &x, &y)?;
            write_tt(&output, &linops::add(&a, &b).map_err(lib_err("add"))?)
        }
        Cmd::Hadamard { x, y, output } => {
            let (a, b) = (read_tt(&x)?, read_tt(&y)?);
            ensure_same_dims(&a, &b, &x, &y)?;
            write_tt(&output, &linops::hadamard(&a, &b).map_err(lib_err("hadamard"))?)
        }
        Cmd::Dot { x, y } => {
            let (a, b) = (read_tt(&x)?, read_tt(&y)?);
            ensure_same_dims(&a, &b, &x, &y)?;
            println!("{:.16e}", linops::dot(&a, &b).map_err(lib_err("dot"))?);
            Ok(())
        }
        Cmd::Matvec { a, x, output } => {
            let (op, v) = (read_ttm(&a)?, read_tt(&x)?);
            if op.col_dims() != v.dims() {
                return Err(usage(format!(
                    "{}: mode sizes {:?} do not match the input sizes {:?} of {}",
                    x.display(),
                    v.dims(),
                    op.col_dims(),
                    a.display()
                )));
            }
            write_tt(&output, &linops::apply(&op, &v).map_err(lib_err("matvec"))?)
        }
        Cmd::Quadform { a, x } => {
            let (op, v) = (read_ttm(&a)?, read_tt(&x)?);
            let q = linops::quadratic_form(&v, &op).map_err(lib_err(&format!("{} with {}", a.display(), x.display())))?;
            println!("{q:.16e}");
            Ok(())
        }
        Cmd::Bench { op, n, i, r, reps, runs, seed } => bench(op, &n, i, r, reps.max(1), runs.max(1), seed),
    }
}

fn info(input: &Path) -> CmdResult {
    let name = input.display().to_string();
    let mut lines = vec![format!("file: {name}")];
    match input.extension().and_then(|e| e.to_str()) {
        Some("dnst") => {
            let x = read_dense(input)?;
            lines.push("format: dnst".into());
            lines.push(format!("order: {}", x.order()));
            lines.push(format!("mode sizes: {}", join(x.dims())));
            lines.push(format!("storage bytes: {}", x.len() * 8));
        }
        Some("ttv") => {
            let x = read_tt(input)?;
            let flags: Vec<_> = x.orth_flags().into_iter().map(flag_name).collect();
            lines.push("format: ttv".into());
            lines.push(format!("order: {}", x.order()));
            lines.push(format!("mode sizes: {}", join(&x.dims())));
            lines.push(format!("bond ranks: {}", join(&x.ranks())));
            lines.push(format!("orth flags: {}", flags.join(",")));
            lines.push(format!("storage bytes: {}", x.storage_bytes()));
        }
        Some("ttm") => {
            let a = read_ttm(input)?;
            lines.push("format: ttm".into());
            lines.push(format!("order: {}", a.order()));
            lines.push(format!("row sizes: {}", join(&a.row_dims())));
            lines.push(format!("col sizes: {}", join(&a.col_dims())));
            lines.push(format!("bond ranks: {}", join(&a.ranks())));
            lines.push(format!("storage bytes: {}", a.storage_bytes()));
        }
        _ => return Err(usage(format!("{name}: expected a .dnst, .ttv or .ttm file"))),
    }
    println!("{}", lines.join("\n"));
    Ok(())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

fn bench(op: BenchOp, orders: &[usize], i: usize, r: usize, reps: usize, runs: usize, seed: u64) -> CmdResult {
    println!("n,i,r,op,seconds,bytes");
    let name = match op {
        BenchOp::Dot => "dot",
        BenchOp::Add => "add",
        BenchOp::Hadamard => "hadamard",
        BenchOp::Round => "round",
        BenchOp::Matvec => "matvec",
    };
    for &n in orders {
        if n == 0 {
            return Err(usage("--n: orders must be positive"));
        }
        let mut rng = random::seeded(seed);
        let dims = vec![i; n];
        let ranks = vec![r; n - 1];
        let x = random::tt(&mut rng, &dims, &ranks).map_err(lib_err("bench"))?;
        let y = random::tt(&mut rng, &dims, &ranks).map_err(lib_err("bench"))?;
        let a = if op == BenchOp::Matvec {
            Some(random::tt_matrix(&mut rng, &dims, &dims, &vec![2; n - 1]).map_err(lib_err("bench"))?)
        } else {
            None
        };
        let spec = Truncation::exact();
        let mut times = Vec::with_capacity(runs);
        for _ in 0..runs {
            let start = Instant::now();
            for _ in 0..reps {
                let ok = match op {
                    BenchOp::Dot => linops::dot(&x, &y).map(|v| v.is_finite()),
                    BenchOp::Add => linops::add(&x, &y).map(|z| z.order() == n),
                    BenchOp::Hadamard => linops::hadamard(&x, &y).map(|z| z.order() == n),
                    BenchOp::Round => x.round(&spec).map(|z| z.order() == n),
                    BenchOp::Matvec => linops::apply(a.as_ref().unwrap(), &x).map(|z| z.order() == n),
                }
                .map_err(lib_err("bench"))?;
                std::hint::black_box(ok);
            }
            times.push(start.elapsed().as_secs_f64() / reps as f64);
        }
        println!("{n},{i},{r},{name},{:.6e},{}", median(times), x.storage_bytes());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

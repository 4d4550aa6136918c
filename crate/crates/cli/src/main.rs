use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qherm_core::collineation::{
    bm_group, check_sharp_transitivity, generate_group, has_affine_shape, linear_generators, semilinear_generators,
    stabilizes, sylow_s_generators, InfinityFrame,
};
use qherm_core::equivalence::{beta_for, find_equivalence, parameter_class_count, reduce_to_canonical, verify_witness};
use qherm_core::geometry::write_points;
use qherm_core::oarray::{build_oa, check_simple, export_oa, import_oa, verify_strength2, VerifyMode};
use qherm_core::variety::{
    build_bab, build_cone_f, build_hermitian_surface, build_mab, is_quasi_hermitian, line_census, PointSet,
};
use qherm_core::{Error, FieldCtx, VarietyParams};

#[derive(Parser)]
#[command(name = "qherm", version, about = "Quasi-Hermitian varieties of PG(3,q^2) in even characteristic")]
struct Cli {
    /// Print the element encoding table for GF(q^2) and exit.
    #[arg(long)]
    list_field: bool,

    /// Order q of the subfield: 2, 4, 8 or 16.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,

    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Point sets and their incidence properties.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// The stabilizer group and its subgroups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Projective equivalence of parameter pairs.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Orthogonal arrays from the elation group.
    #[command(subcommand)]
    Oa(OaCmd),
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Parameter a (decimal encoding, nonzero).
    #[arg(long)]
    a: u32,
    /// Parameter b (decimal encoding, outside GF(q)).
    #[arg(long)]
    b: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Mab,
    Bab,
    Cone,
    Hermitian,
}

#[derive(Subcommand)]
enum VarietyCmd {
    /// Write a point set in the point-set file format.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "mab")]
        set: SetKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size and hyperplane spectrum of M_{a,b}.
    CheckQh {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Lines through each point, grouped by position relative to infinity.
    Census {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "mab")]
        set: SetKind,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order of the closure of the generators.
    Order {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        semilinear: bool,
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
    },
    /// Check every closure element against M_{a,b} and the frame at infinity.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        semilinear: bool,
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
    },
    /// Regularity of S and sharp transitivity of the elation group on affine points.
    Sharp {
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Subcommand)]
enum EquivCmd {
    /// Witness mapping (a,b) to its canonical representative.
    Reduce {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness mapping (a,b) onto (a2,b2).
    Find {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        a2: u32,
        #[arg(long)]
        b2: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of equivalence classes among all parameter pairs.
    Classes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Sampled,
}

#[derive(Subcommand)]
enum OaCmd {
    /// Build A_0 and write it to a file.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check strength 2 and simplicity of an array file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        /// Column pairs to sample.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        /// Sampling seed, required with --mode sampled.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-read an array file and write it in canonical form.
    Export {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoEquivalence(..) => Failure::Check(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    /// Prints `text` or `value` depending on the output mode.
    fn emit(&self, text: impl std::fmt::Display, value: Value) {
        if self.json {
            println!("{value}");
        } else {
            println!("{text}");
        }
    }
}

fn field(q: u32) -> Result<FieldCtx, Failure> {
    if !q.is_power_of_two() || !(2..=16).contains(&q) {
        return Err(Failure::Usage(format!("q={q} must be one of 2, 4, 8, 16")));
    }
    Ok(FieldCtx::new(q.trailing_zeros())?)
}

fn params(ctx: &FieldCtx, p: ParamArgs) -> Result<VarietyParams, Failure> {
    Ok(VarietyParams::new(ctx, ctx.element(p.a)?, ctx.element(p.b)?)?)
}

fn writer(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg()))
    }
}

fn list_field(q: u32, out: &Out) -> Outcome {
    let ctx = field(q)?;
    let rows: Vec<Value> = ctx
        .elements()
        .map(|x| {
            json!({
                "enc": x.bits(),
                "poly": poly_string(x.bits()),
                "trace": ctx.trace(x).bits(),
                "norm": ctx.norm(x).bits(),
                "log": ctx.log_omega(x),
            })
        })
        .collect();
    if out.json {
        println!("{}", json!({ "q": q, "modulus": ctx.modulus(), "elements": rows }));
        return Ok(());
    }
    println!("# GF({}) modulus={} ({})", q * q, ctx.modulus(), poly_string(ctx.modulus()));
    println!("# enc poly trace norm log_omega");
    for x in ctx.elements() {
        let log = ctx.log_omega(x).map_or("-".to_string(), |l| l.to_string());
        println!("{} {} {} {} {}", x, poly_string(x.bits()), ctx.trace(x), ctx.norm(x), log);
    }
    Ok(())
}

fn poly_string(bits: u32) -> String {
    if bits == 0 {
        return "0".into();
    }
    let terms: Vec<String> = (0..32)
        .rev()
        .filter(|i| bits >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            i => format!("t^{i}"),
        })
        .collect();
    terms.join("+")
}

fn build_set(ctx: &FieldCtx, p: &VarietyParams, kind: SetKind) -> PointSet {
    match kind {
        SetKind::Mab => build_mab(ctx, p),
        SetKind::Bab => build_bab(ctx, p),
        SetKind::Cone => build_cone_f(ctx),
        SetKind::Hermitian => build_hermitian_surface(ctx),
    }
}

fn variety(q: u32, cmd: VarietyCmd, out: &Out) -> Outcome {
    let ctx = field(q)?;
    match cmd {
        VarietyCmd::Build { params: pa, set, out: path } => {
            let p = params(&ctx, pa)?;
            let s = build_set(&ctx, &p, set);
            let mut w = writer(path.as_deref())?;
            write_points(&ctx, s.points(), &mut w)?;
            w.flush()?;
            if path.is_some() {
                out.emit(format!("points={}", s.len()), json!({ "points": s.len() }));
            }
            Ok(())
        }
        VarietyCmd::CheckQh { params: pa } => {
            let p = params(&ctx, pa)?;
            let r = is_quasi_hermitian(&ctx, &build_mab(&ctx, &p));
            out.emit(&r, serde_json::to_value(&r).expect("report serializes"));
            check(r.quasi_hermitian, || format!("M{p} is not quasi-Hermitian"))
        }
        VarietyCmd::Census { params: pa, set } => {
            let p = params(&ctx, pa)?;
            let r = line_census(&ctx, &build_set(&ctx, &p, set));
            if out.json {
                println!("{}", serde_json::to_value(&r).expect("report serializes"));
            } else {
                print!("{r}");
            }
            Ok(())
        }
    }
}

fn closure(ctx: &FieldCtx, p: &VarietyParams, semilinear: bool, cap: usize) -> Result<Vec<qherm_core::Collineation>, Failure> {
    let gens = if semilinear {
        semilinear_generators(ctx, p, &beta_for(ctx, p)?)
    } else {
        linear_generators(ctx, p)
    };
    Ok(generate_group(ctx, &gens, cap)?)
}

fn group(q: u32, cmd: GroupCmd, out: &Out) -> Outcome {
    let ctx = field(q)?;
    let qq = q as usize;
    match cmd {
        GroupCmd::Order { params: pa, semilinear, cap } => {
            let p = params(&ctx, pa)?;
            let g = closure(&ctx, &p, semilinear, cap)?;
            out.emit(g.len(), json!({ "order": g.len(), "semilinear": semilinear }));
            Ok(())
        }
        GroupCmd::Verify { params: pa, semilinear, cap } => {
            let p = params(&ctx, pa)?;
            let g = closure(&ctx, &p, semilinear, cap)?;
            let mut expected = qq.pow(6) * (qq - 1);
            if semilinear {
                expected *= ctx.k() as usize;
            }
            let m = build_mab(&ctx, &p);
            let frame = InfinityFrame::new(&ctx);
            let bad = g
                .iter()
                .filter(|c| !(stabilizes(&ctx, c, &m) && frame.preserved_by(&ctx, c) && has_affine_shape(&ctx, c)))
                .count();
            let ok = g.len() == expected && bad == 0;
            out.emit(
                format!("order={} expected={} bad_elements={} ok={}", g.len(), expected, bad, ok),
                json!({ "order": g.len(), "expected": expected, "bad_elements": bad, "ok": ok }),
            );
            check(ok, || "closure does not match the expected stabilizer".into())
        }
        GroupCmd::Sharp { params: pa } => {
            let p = params(&ctx, pa)?;
            let affine = PointSet::generic(build_mab(&ctx, &p).affine_points().copied().collect());
            let s = generate_group(&ctx, &sylow_s_generators(&ctx, &p), 1 << 22)?;
            let psi = bm_group(&ctx, &p);
            let s_ok = s.len() == qq.pow(5) && check_sharp_transitivity(&ctx, &s, &affine);
            let psi_ok = check_sharp_transitivity(&ctx, &psi, &affine);
            out.emit(
                format!("affine_points={} S={} S_regular={} Psi={} Psi_sharp={}", affine.len(), s.len(), s_ok, psi.len(), psi_ok),
                json!({ "affine_points": affine.len(), "s_order": s.len(), "s_regular": s_ok, "psi_order": psi.len(), "psi_sharp": psi_ok }),
            );
            check(s_ok && psi_ok, || "action is not sharply transitive".into())
        }
    }
}

fn equiv(q: u32, cmd: EquivCmd, out: &Out) -> Outcome {
    let ctx = field(q)?;
    let (w, path) = match cmd {
        EquivCmd::Reduce { params: pa, out: path } => (reduce_to_canonical(&ctx, &params(&ctx, pa)?)?, path),
        EquivCmd::Find { params: pa, a2, b2, out: path } => {
            let p2 = params(&ctx, ParamArgs { a: a2, b: b2 })?;
            (find_equivalence(&ctx, &params(&ctx, pa)?, &p2)?, path)
        }
        EquivCmd::Classes => {
            let n = parameter_class_count(&ctx)?;
            out.emit(n, json!({ "classes": n }));
            return Ok(());
        }
    };
    let ok = verify_witness(&ctx, &w);
    if out.json {
        let v = json!({ "witness": w, "text": w.to_text(), "verified": ok });
        if let Some(p) = path {
            std::fs::write(p, w.to_text())?;
        }
        println!("{v}");
    } else {
        let mut wr = writer(path.as_deref())?;
        wr.write_all(w.to_text().as_bytes())?;
        wr.flush()?;
    }
    check(ok, || format!("witness {} -> {} does not verify", w.source, w.target))
}

fn oa(q: u32, cmd: OaCmd, out: &Out) -> Outcome {
    match cmd {
        OaCmd::Build { params: pa, out: path } => {
            let ctx = field(q)?;
            let p = params(&ctx, pa)?;
            let a = build_oa(&ctx, &p);
            let mut w = writer(Some(&path))?;
            export_oa(&a, &mut w)?;
            w.flush()?;
            out.emit(a.header(), json!({ "n": a.n, "k": a.k, "v": a.v, "t": a.t, "lambda": a.lambda }));
            Ok(())
        }
        OaCmd::Verify { file, mode, pairs, seed } => {
            let a = import_oa(BufReader::new(File::open(&file)?))?;
            let vm = match mode {
                Mode::Full => VerifyMode::Full,
                Mode::Sampled => {
                    let seed = seed.ok_or_else(|| Failure::Usage("--mode sampled requires --seed".into()))?;
                    VerifyMode::Sampled { n_pairs: pairs, seed }
                }
            };
            let r = verify_strength2(&a, vm);
            let simple = check_simple(&a);
            let ok = r.ok() && simple;
            out.emit(
                format!(
                    "{} pairs_checked={} violations={} simple={} ok={}",
                    a.header(),
                    r.pairs_checked,
                    r.violation_count,
                    simple,
                    ok
                ),
                json!({ "header": a.header(), "strength": r, "simple": simple, "ok": ok }),
            );
            check(ok, || "array fails verification".into())
        }
        OaCmd::Export { file, out: path } => {
            let a = import_oa(BufReader::new(File::open(&file)?))?;
            let mut w = writer(path.as_deref())?;
            export_oa(&a, &mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let out = Out { json: cli.json };
    if cli.list_field {
        return list_field(cli.q, &out);
    }
    match cli.command {
        None => Err(Failure::Usage("no subcommand given (try --help)".into())),
        Some(Command::Variety(c)) => variety(cli.q, c, &out),
        Some(Command::Group(c)) => group(cli.q, c, &out),
        Some(Command::Equiv(c)) => equiv(cli.q, c, &out),
        Some(Command::Oa(c)) => oa(cli.q, c, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("qherm: check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("qherm: {msg}");
            ExitCode::from(2)
        }
    }
}

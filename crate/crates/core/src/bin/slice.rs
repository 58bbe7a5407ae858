use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use slicekit::calculus::{build_from_derivatives, derivative, DerivativeAssignment};
use slicekit::checks::{run_suite, SuiteConfig, SUITES};
use slicekit::cube::{embedding_report, fourier_transform, ks_via_embedding, pullback_from_slice, tightness_example};
use slicekit::error::{Result, SliceError};
use slicekit::funcspec::{cube_from_spec, slice_from_spec};
use slicekit::harmonic::{degree, level_weights};
use slicekit::io::{cube_to_json, fourier_to_json, level_weights_to_json, read_slice, slice_to_json};
use slicekit::noise::{hypergeometric_tail, level_exponent, noise, noisy_norm_sq, simulate_noise, NoiseParams};
use slicekit::rational::{format_q, to_f64, Q};
use slicekit::slice::{make_domain, SliceFunction};
use slicekit::structure::approximate;
use slicekit::tuples::{expansion_tree, KTuple};

/// Exact harmonic analysis on the slice.
#[derive(Parser)]
#[command(name = "slice", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SliceArgs {
    /// Number of coordinates.
    #[arg(long)]
    n: usize,
    /// Hamming weight of the slice.
    #[arg(long)]
    ell: usize,
    /// Function spec, e.g. `dictator:1`, `and:1,2`, `file:f.json`.
    #[arg(long = "f")]
    f: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Level weights of a slice function, or Fourier weights of a cube
    /// function when `--ell` is omitted.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long = "f")]
        f: String,
        /// Write the weight table (or Fourier table) as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the derivative `D_P`.
    Derive {
        #[command(flatten)]
        func: SliceArgs,
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand a derivative into shifted sorted derivatives.
    Shift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TreeFormat,
    },
    /// Build a degree-l function from prescribed derivatives.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        /// Lines of the form `(1,2)(3,4) := 1/4`.
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree-k approximation. With `--m`, `--f` names a cube function on
    /// `n` coordinates that is embedded into slice(m, m/2) first.
    Approximate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long = "f")]
        f: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the noise operator `H_t`.
    Noise {
        #[command(flatten)]
        func: SliceArgs,
        #[arg(long)]
        t: f64,
        /// Also estimate `H_t f` at the first point by simulation.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Run a named verification suite.
    Verify {
        /// One of the suite names, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Embed a cube function into slice(m, m/2) and compare weights.
    Embed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "f")]
        f: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a cube function on `n` coordinates back from a slice function.
    Pullback {
        #[arg(long)]
        n: usize,
        /// Path of a slice function file.
        #[arg(long = "f")]
        f: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The threshold example showing the sharp bound is attained.
    Example {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact hypergeometric lower tail.
    Tail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: f64,
    },
}

fn num(x: &Q) -> String {
    format!("{} ({})", format_q(x), to_f64(x))
}

fn emit(out: &Option<PathBuf>, text: String, fallback: impl FnOnce() -> String) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", fallback()),
    }
    Ok(())
}

fn value_lines(f: &SliceFunction) -> String {
    f.iter()
        .map(|(x, v)| format!("{x:#0width$b} {}\n", num(v), width = f.domain().n() + 2))
        .collect()
}

fn recognise(g: &SliceFunction) -> Option<String> {
    let dom = g.domain();
    let first = &g.values()[0];
    if g.values().iter().all(|v| v == first) {
        return Some(format!("const:{}", format_q(first)));
    }
    (1..=dom.n()).find_map(|i| {
        let x = SliceFunction::dictator(dom, i).ok()?;
        (x == *g).then(|| format!("dictator:{i}"))
    })
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Spectrum { n, ell: Some(ell), f, out } => {
            let dom = make_domain(n, ell)?;
            let func = slice_from_spec(&f, &dom)?;
            let w = level_weights(&func)?;
            emit(&out, level_weights_to_json(n, ell, &w)?, || {
                let mut s: String = w
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(d, v)| format!("level {d}: {}\n", num(v)))
                    .collect();
                s.push_str(&format!("total: {}\n", num(&w.total())));
                s
            })?;
        }
        Command::Spectrum { n, ell: None, f, out } => {
            let e = fourier_transform(&cube_from_spec(&f, n)?);
            emit(&out, fourier_to_json(&e)?, || {
                let mut s: String = (0..=n)
                    .map(|d| format!("level {d}: {}\n", num(&e.weight_at(d))))
                    .collect();
                s.push_str(&format!("total: {}\n", num(&e.total_weight())));
                s
            })?;
        }
        Command::Derive { func, tuple, out } => {
            let dom = make_domain(func.n, func.ell)?;
            let f = slice_from_spec(&func.f, &dom)?;
            let p = KTuple::parse(&tuple)?;
            let d = derivative(&f, &p)?;
            println!("tuple: {p}");
            println!("norm_sq: {}", num(&d.norm_sq()));
            emit(&out, slice_to_json(&d)?, || value_lines(&d))?;
        }
        Command::Shift { n, tuple, format } => {
            let tree = expansion_tree(&KTuple::parse(&tuple)?, n)?;
            match format {
                TreeFormat::Text => print!("{}", tree.render()),
                TreeFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&tree.to_json()).map_err(SliceError::from)?
                ),
            }
        }
        Command::Construct { n, ell, assignment, out } => {
            let dom = make_domain(n, ell)?;
            let z = DerivativeAssignment::parse(&fs::read_to_string(&assignment)?, n)?;
            let f = build_from_derivatives(&dom, &z)?;
            println!("level: {}", z.level());
            println!("degree: {}", degree(&f)?);
            emit(&out, slice_to_json(&f)?, || value_lines(&f))?;
        }
        Command::Approximate { n, ell, k, f, m: Some(m), out } => {
            if ell.is_some() {
                return Err(SliceError::Precondition("--ell and --m are exclusive".into()));
            }
            let cube = cube_from_spec(&f, n)?;
            let r = ks_via_embedding(&cube, k, m)?;
            println!("distance: {}", num(&r.distance));
            println!("slice distance: {}", num(&r.slice_result.distance));
            println!("g equals input: {}", r.g == cube);
            emit(&out, cube_to_json(&r.g)?, String::new)?;
        }
        Command::Approximate { n, ell, k, f, m: None, out } => {
            let ell = ell.ok_or_else(|| SliceError::Precondition("--ell or --m is required".into()))?;
            let dom = make_domain(n, ell)?;
            let func = slice_from_spec(&f, &dom)?;
            let r = approximate(&func, k)?;
            println!("distance: {}", num(&r.distance));
            println!("residual_norm_sq: {}", num(&r.residual_norm_sq));
            println!("boolean: {}", r.is_boolean);
            println!("g equals input: {}", r.g == func);
            if let Some(name) = recognise(&r.g) {
                println!("g: {name}");
            }
            for step in &r.steps {
                let nonzero: Vec<String> = step
                    .coefficients
                    .iter()
                    .filter(|c| !c.c.is_zero())
                    .map(|c| format!("{}={}", c.tuple, format_q(&c.c)))
                    .collect();
                println!("level {}: {}", step.level, nonzero.join(" "));
            }
            emit(&out, slice_to_json(&r.g)?, String::new)?;
        }
        Command::Noise { func, t, seed, samples } => {
            let dom = make_domain(func.n, func.ell)?;
            let f = slice_from_spec(&func.f, &dom)?;
            let params = NoiseParams::new(t, dom.n())?;
            let w = level_weights(&f)?;
            println!("alpha: {}", params.alpha);
            for (d, v) in w.weights.iter().enumerate() {
                let mult = params.alpha.powf(to_f64(&level_exponent(dom.n(), d)));
                println!("level {d}: weight {} multiplier {mult}", num(v));
            }
            println!("noisy_norm_sq: {}", noisy_norm_sq(&w, dom.n(), params.alpha));
            let h = noise(&f, &params)?;
            for (x, v) in dom.elements().iter().zip(&h) {
                println!("{x:#0width$b} {v}", width = dom.n() + 2);
            }
            if let Some(seed) = seed {
                let x = dom.element(0);
                let (mean, err) = simulate_noise(&f, x, t, samples, seed)?;
                println!("simulated at {x:#b}: {mean} +/- {err} (exact {})", h[0]);
            }
        }
        Command::Verify { suite, n, ell, seed, samples } => {
            let cfg = SuiteConfig { n, ell, seed, samples };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut ok = true;
            for name in names {
                let report = run_suite(name, &cfg)?;
                print!("{}", report.render());
                ok &= report.passed();
            }
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Embed { n, m, k, f, out } => {
            let cube = cube_from_spec(&f, n)?;
            let r = embedding_report(&cube, k, m)?;
            println!("slice weight above {k}: {}", num(&r.slice_weight));
            println!("cube weight above {k}: {}", num(&r.cube_weight));
            println!("gap: {}", r.gap);
            println!("marginal deviation: {}", r.marginal_deviation);
            if let Some(path) = &out {
                let g = slicekit::cube::embed_to_slice(&cube, m)?;
                emit(&Some(path.clone()), slice_to_json(&g)?, String::new)?;
            }
        }
        Command::Pullback { n, f, out } => {
            let g = read_slice(&f)?;
            let c = pullback_from_slice(&g, n)?;
            emit(&out, cube_to_json(&c)?, || {
                c.values()
                    .iter()
                    .enumerate()
                    .map(|(x, v)| format!("{x:#0width$b} {}\n", num(v), width = n + 2))
                    .collect()
            })?;
        }
        Command::Example { n, k, t, out } => {
            let (f, _g, r) = tightness_example(n, k, t)?;
            println!("delta: {}", num(&r.delta));
            println!("eps: {}", num(&r.eps));
            println!("low weight: {}", num(&r.low_weight));
            match r.sharp_bound {
                Some(b) => println!("sharp bound: {b}"),
                None => println!("sharp bound: undefined"),
            }
            emit(&out, cube_to_json(&f)?, String::new)?;
        }
        Command::Tail { n, ell, s, t } => {
            let r = hypergeometric_tail(n, ell, s, t)?;
            println!("tail: {}", num(&r.exact_tail));
            println!("bound: {}", r.bound);
            println!("holds: {}", r.holds());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

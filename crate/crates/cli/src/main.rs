//! `tg3`: command-line front end for the engine.
//!
//! Exit codes: 0 on success, 1 when a verification suite (or the audit's
//! expected verdict pattern) fails, 2 on usage, parse, or evaluation errors.

mod eval;
mod expr;

use std::io::{BufRead, IsTerminal, Write};

use clap::{Parser, Subcommand};

use tg_core::bargmann::{gram, orthonormalizing_weight, to_rep};
use tg_core::grassmann::{AlgebraSignature, RuleMode};
use tg_core::scalars::CycScalar;
use tg_core::states::{
    coherent_bra, coherent_bra_in, coherent_ket, coherent_ket_in, identity_resolution,
    is_unit_matrix, overlap, solve_weight, ConventionConfig, ResolutionForm,
};
use tg_core::susy::{susy_coherent, C64};
use tg_core::{audit, verify};

use eval::{as_scalar, eval, render_json, render_text, EvalContext};
use expr::{max_generator_index, Expr};

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "tg3",
    version,
    about = "Exact calculator for a cubic-nilpotent Grassmann algebra, its deformed oscillator, and their coherent states"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Phase convention: paper or uniform-eq5 (default: TG_DEFAULT_CONVENTION or paper)
    #[arg(long, global = true)]
    convention: Option<String>,

    /// Rewriting mode for expressions: constrained or relational
    #[arg(long, global = true, default_value = "relational")]
    mode: String,

    /// Number of generator pairs (default: one past the largest index used)
    #[arg(long, global = true, value_name = "N")]
    n_generators: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite an expression to canonical form
    Normalize {
        /// Expression, e.g. "xi(0)*xb(0)" or "a*ad - q*ad*a - qN(-1)"
        expr: String,
    },
    /// Integrate an expression over one generator
    Integrate {
        #[arg(long)]
        expr: String,
        /// Integration variable, e.g. "xi(0)" or "xb(1)"
        #[arg(long)]
        var: String,
    },
    /// Print the coherent ket and bra of the active convention
    Coherent,
    /// Overlap of a coherent bra (pair 0) with a coherent ket (pair 1)
    Overlap,
    /// Solve for the weight making the ket-bra integral the identity
    WeightSolve {
        /// Operand ordering: eq20 or eq22
        #[arg(long, default_value = "eq20")]
        form: String,
    },
    /// Function-space representation of Fock vectors
    Bargmann {
        #[command(subcommand)]
        cmd: BargmannCmd,
    },
    /// Coherent states of the combined boson/parafermion system
    Susy {
        #[command(subcommand)]
        cmd: SusyCmd,
    },
    /// Identity-by-identity comparison table across all conventions
    Audit,
    /// Run an invariant suite and report per-check status
    Verify {
        /// One of scalars, grassmann, oscillator, states, bargmann, susy, all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Interactive expression loop
    Repl,
}

#[derive(Subcommand)]
enum BargmannCmd {
    /// Representative polynomial of a Fock vector
    Rep {
        /// Components as scalar expressions, e.g. "(1, q, 0)"
        #[arg(long)]
        state: String,
    },
    /// Inner products of the basis kets under the orthonormalizing weight
    Gram,
}

#[derive(Subcommand)]
enum SusyCmd {
    /// Build the combined coherent state and report truncation bounds
    Coherent {
        /// Boson eigenvalue, e.g. "0.5" or "0.5+0.25i"
        #[arg(long, default_value = "0.5")]
        z: String,
        /// Boson truncation level
        #[arg(long, default_value_t = 16)]
        trunc: usize,
    },
}

fn main() {
    // Die quietly when the consumer of a pipe goes away, like other
    // line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}

fn resolve_convention(flag: Option<&str>) -> Result<ConventionConfig, String> {
    let name = match flag {
        Some(n) => n.to_string(),
        None => std::env::var("TG_DEFAULT_CONVENTION").unwrap_or_else(|_| "paper".to_string()),
    };
    ConventionConfig::by_name(&name)
        .ok_or_else(|| format!("unknown convention '{name}' (expected paper or uniform-eq5)"))
}

fn resolve_mode(name: &str) -> Result<RuleMode, String> {
    match name {
        "constrained" => Ok(RuleMode::Constrained),
        "relational" => Ok(RuleMode::Relational),
        other => Err(format!("unknown mode '{other}' (expected constrained or relational)")),
    }
}

fn signature_for(ast: &Expr, mode: RuleMode, n_flag: Option<usize>) -> AlgebraSignature {
    let n_pairs = n_flag.unwrap_or_else(|| max_generator_index(ast).map_or(1, |m| m + 1));
    AlgebraSignature { n_pairs, mode }
}

fn print_value(ctx: &EvalContext, ast: &Expr, json: bool) -> CmdResult {
    let value = eval(ctx, ast)?;
    if json {
        println!("{}", render_json(&value)?);
    } else {
        println!("{}", render_text(&value)?);
    }
    Ok(0)
}

fn scalar_matrix_json(m: &[[CycScalar; 3]; 3]) -> serde_json::Value {
    serde_json::Value::Array(
        m.iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|c| c.to_json()).collect()))
            .collect(),
    )
}

fn print_scalar_matrix(m: &[[CycScalar; 3]; 3]) {
    for row in m {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("[{}]", cells.join(", "));
    }
}

fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{text}' (expected forms: 1.5, 2i, 0.5+0.25i)");
    let parse_re = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let parse_im = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => other.parse::<f64>().map_err(|_| bad()),
    };
    let bytes = s.as_bytes();
    let split = (1..s.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    if let Some(k) = split {
        let (re, rest) = s.split_at(k);
        let im = rest.strip_suffix('i').ok_or_else(bad)?;
        Ok(C64::new(parse_re(re)?, parse_im(im)?))
    } else if let Some(im) = s.strip_suffix('i') {
        Ok(C64::new(0.0, parse_im(im)?))
    } else {
        Ok(C64::new(parse_re(&s)?, 0.0))
    }
}

fn run(cli: Cli) -> CmdResult {
    let conv = resolve_convention(cli.convention.as_deref())?;
    let mode = resolve_mode(&cli.mode)?;
    let json = cli.json;

    match cli.cmd {
        Cmd::Normalize { expr: text } => {
            let ast = expr::parse(&text)?;
            let sig = signature_for(&ast, mode, cli.n_generators);
            print_value(&EvalContext { sig, conv }, &ast, json)
        }
        Cmd::Integrate { expr: text, var } => {
            let ast = expr::parse(&text)?;
            let var_ast = expr::parse(&var)?;
            let Expr::Gen(kind, idx) = var_ast else {
                return Err("--var must be a generator like xi(0) or xb(1)".into());
            };
            let wrapped = Expr::Integrate(Box::new(ast), kind, idx);
            let sig = signature_for(&wrapped, mode, cli.n_generators);
            print_value(&EvalContext { sig, conv }, &wrapped, json)
        }
        Cmd::Coherent => {
            let ket = coherent_ket(&conv);
            let bra = coherent_bra(&conv);
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "convention": conv.name(),
                        "ket": ket.to_json(),
                        "bra": bra.to_json(),
                    })
                );
            } else {
                println!("convention: {}", conv.name());
                println!("ket: {ket}");
                println!("bra: {bra}");
            }
            Ok(0)
        }
        Cmd::Overlap => {
            let sig = AlgebraSignature::relational(2);
            let bra = coherent_bra_in(&conv, sig, 0)?;
            let ket = coherent_ket_in(&conv, sig, 1)?;
            let g = overlap(&bra, &ket, &conv);
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "convention": conv.name(), "value": g.to_json() })
                );
            } else {
                println!("convention: {}", conv.name());
                println!("overlap: {g}");
            }
            Ok(0)
        }
        Cmd::WeightSolve { form } => {
            let form = ResolutionForm::by_name(&form)
                .ok_or_else(|| format!("unknown form '{form}' (expected eq20 or eq22)"))?;
            let w = solve_weight(&conv, form)?;
            let m = identity_resolution(&conv, &w, form);
            let unit = is_unit_matrix(&m);
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "convention": conv.name(),
                        "form": form.name(),
                        "weight": w.to_json(),
                        "resolution_is_identity": unit,
                    })
                );
            } else {
                println!("convention: {}", conv.name());
                println!("form: {}", form.name());
                println!("weight: {w}");
                println!("resolution is identity: {unit}");
            }
            Ok(0)
        }
        Cmd::Bargmann { cmd: BargmannCmd::Rep { state } } => {
            let parts = expr::parse_tuple3(&state)?;
            let sig = AlgebraSignature::relational(1);
            let ctx = EvalContext { sig, conv: conv.clone() };
            let mut psi = [CycScalar::zero(), CycScalar::zero(), CycScalar::zero()];
            for (n, part) in parts.iter().enumerate() {
                let value = eval(&ctx, part)?;
                psi[n] = as_scalar(&value)
                    .ok_or_else(|| format!("state component {n} must be a scalar"))?;
            }
            let rep = to_rep(&psi, &conv);
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "convention": conv.name(), "rep": rep.to_json() })
                );
            } else {
                println!("{rep}");
            }
            Ok(0)
        }
        Cmd::Bargmann { cmd: BargmannCmd::Gram } => {
            let w = orthonormalizing_weight(&conv)?;
            let g = gram(&conv, &w);
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "convention": conv.name(),
                        "weight": w.to_json(),
                        "gram": scalar_matrix_json(&g),
                    })
                );
            } else {
                println!("convention: {}", conv.name());
                println!("weight: {w}");
                print_scalar_matrix(&g);
            }
            Ok(0)
        }
        Cmd::Susy { cmd: SusyCmd::Coherent { z, trunc } } => {
            let z = parse_complex(&z)?;
            let sc = susy_coherent(z, trunc, &conv);
            let exact = sc.annihilator_is_exact(&conv);
            let residual = sc.boson_residual();
            if json {
                let boson: Vec<[f64; 2]> = sc.boson.iter().map(|c| [c.re, c.im]).collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "convention": conv.name(),
                        "z": [z.re, z.im],
                        "trunc": trunc,
                        "tail_bound": sc.tail_bound,
                        "residual_bound": sc.residual_bound,
                        "boson_residual": residual,
                        "annihilator_exact": exact,
                        "para": sc.para.to_json(),
                        "boson": boson,
                    })
                );
            } else {
                println!("convention: {}", conv.name());
                println!("z: {z}");
                println!("truncation: {trunc}");
                println!("tail bound: {:e}", sc.tail_bound);
                println!("residual bound: {:e}", sc.residual_bound);
                println!("boson residual: {residual:e}");
                println!("annihilator exact: {exact}");
                println!("para factor: {}", sc.para);
            }
            Ok(0)
        }
        Cmd::Audit => {
            let entries = audit::audit_default();
            if json {
                println!("{}", audit::to_json(&entries));
            } else {
                for e in &entries {
                    println!(
                        "[{}] {} ({}): engine = {}, claimed = {}",
                        e.status.as_str(),
                        e.identity,
                        e.convention,
                        e.engine_value,
                        e.paper_value
                    );
                }
            }
            Ok(if audit::has_required_coverage(&entries) { 0 } else { 1 })
        }
        Cmd::Verify { suite } => {
            let report = verify::run_suite(&suite).ok_or_else(|| {
                format!(
                    "unknown suite '{suite}' (expected one of {}, all)",
                    verify::SUITE_NAMES.join(", ")
                )
            })?;
            if json {
                println!("{}", report.to_json());
            } else {
                for c in &report.checks {
                    println!(
                        "[{}] {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
                println!(
                    "suite {}: {}",
                    report.suite,
                    if report.passed() { "PASS" } else { "FAIL" }
                );
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::Repl => repl(conv, mode, cli.n_generators, json),
    }
}

fn repl(
    mut conv: ConventionConfig,
    mut mode: RuleMode,
    mut n_flag: Option<usize>,
    mut json: bool,
) -> CmdResult {
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("tg3> ");
            std::io::stdout().flush()?;
        }
        let Some(line) = lines.next() else {
            return Ok(0);
        };
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(':') {
            let mut words = rest.split_whitespace();
            match (words.next(), words.next()) {
                (Some("q") | Some("quit"), _) => return Ok(0),
                (Some("help"), _) => {
                    println!(":convention NAME   switch convention (paper, uniform-eq5)");
                    println!(":mode MODE         switch mode (constrained, relational)");
                    println!(":n K               fix the number of generator pairs");
                    println!(":json on|off       toggle JSON output");
                    println!(":quit              exit");
                }
                (Some("convention"), Some(name)) => match ConventionConfig::by_name(name) {
                    Some(c) => conv = c,
                    None => eprintln!("error: unknown convention '{name}'"),
                },
                (Some("mode"), Some(name)) => match resolve_mode(name) {
                    Ok(m) => mode = m,
                    Err(e) => eprintln!("error: {e}"),
                },
                (Some("n"), Some(k)) => match k.parse::<usize>() {
                    Ok(k) => n_flag = Some(k),
                    Err(_) => eprintln!("error: ':n' expects a nonnegative integer"),
                },
                (Some("json"), Some("on")) => json = true,
                (Some("json"), Some("off")) => json = false,
                _ => eprintln!("error: unknown command ':{rest}' (try :help)"),
            }
            continue;
        }
        let outcome = expr::parse(line).map_err(|e| e.to_string()).and_then(|ast| {
            let sig = signature_for(&ast, mode, n_flag);
            let ctx = EvalContext { sig, conv: conv.clone() };
            let value = eval(&ctx, &ast).map_err(|e| e.to_string())?;
            if json {
                render_json(&value).map(|v| v.to_string()).map_err(|e| e.to_string())
            } else {
                render_text(&value).map_err(|e| e.to_string())
            }
        });
        match outcome {
            Ok(text) => println!("{text}"),
            Err(e) => eprintln!("error: {e}"),
        }
    }
}

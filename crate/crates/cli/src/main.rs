//! Command-line front end: group analysis, reductions onto PSL(2, q),
//! congruence spectra, quotient identification, the local structure
//! reports and the char-polynomial rigidity comparison.
//!
//! Exit codes: 0 success; 1 mathematical negative (e.g. "not arithmetic",
//! an obstruction violation, a rigidity contradiction); 2 precondition or
//! usage error; 3 internal consistency failure.

use clap::{Parser, Subcommand};
use rigidity_cli::document::{GroupDocument, HomDocument};
use rigidity_core::congruence::{congruence_spectrum, identify_quotient, reduction_hom, SpectrumEntry};
use rigidity_core::corpus;
use rigidity_core::fuchsian::{
    self, trace_field, trace_field_condition, FuchsianRep, ObstructionOutcome, Word,
};
use rigidity_core::local;
use rigidity_core::numfield::factor_prime;
use rigidity_core::order::order_basis;
use rigidity_core::psl2::Psl2Ctx;
use rigidity_core::rigidity::rigidity_report;
use rigidity_core::Error as CoreError;
use serde_json::json;

const EXIT_OK: i32 = 0;
const EXIT_NEGATIVE: i32 = 1;
const EXIT_PRECONDITION: i32 = 2;
const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "rigidity",
    about = "Exact trace-field, arithmeticity and congruence-quotient analysis of Fuchsian groups",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field, generators, trace field and arithmeticity summary.
    Info { group: String },
    /// The trace field and the invariant trace field.
    TraceField { group: String },
    /// Integrality of traces and total realness of the invariant trace field.
    SemiArithmetic { group: String },
    /// Takeuchi's criterion over the trace field.
    Arithmetic { group: String },
    /// The necessary trace inequality for a modular embedding.
    ModEmbedCheck {
        group: String,
        /// Word length of the sample.
        #[arg(long, default_value_t = 3)]
        maxlen: usize,
    },
    /// Generator images in PSL(2, q) at a good prime.
    Reduce {
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// Residue degrees and surjectivity at every good prime up to the bound.
    Spectrum {
        group: String,
        #[arg(long)]
        pmax: u64,
    },
    /// Identify the prime ideal behind a congruence quotient.
    Identify {
        group: String,
        /// Path to a JSON file with p, f and generator images.
        #[arg(long)]
        hom: String,
    },
    /// Char-polynomial comparison of two groups under a generator map.
    Rigidity {
        group_a: String,
        group_b: String,
        /// Correspondence as comma-separated generator indices of B.
        #[arg(long, default_value = "")]
        map: String,
        #[arg(long, default_value_t = 3)]
        maxlen: usize,
        #[arg(long, default_value_t = 31)]
        pmax: u64,
    },
    /// Local quotient structure reports.
    Local {
        #[command(subcommand)]
        kind: LocalKind,
    },
    /// Chinese-remainder decomposition of SL(2, Z/n) (rational field only).
    Crt {
        #[arg(long, default_value = "Q")]
        field: String,
        /// Comma-separated prime powers, e.g. "3,5" or "3^2,5".
        #[arg(long)]
        ideals: String,
    },
}

#[derive(Subcommand)]
enum LocalKind {
    /// Split case: SL(2, o/p^r).
    Unram {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        r: u32,
    },
    /// Ramified case: the pair model at M-adic level m = 2r.
    Ram {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        r: u32,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = run(&cli);
    std::process::exit(code);
}

fn precondition(msg: &str) -> i32 {
    eprintln!("error: {}", msg);
    EXIT_PRECONDITION
}

fn core_error(e: &CoreError) -> i32 {
    eprintln!("error: {}", e);
    match e {
        CoreError::InternalConsistency(_) => EXIT_INTERNAL,
        _ => EXIT_PRECONDITION,
    }
}

fn load_rep(spec: &str) -> Result<FuchsianRep, i32> {
    if let Some(built) = corpus::by_name(spec) {
        return built.map_err(|e| core_error(&e));
    }
    let text = if spec == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| precondition(&format!("reading standard input: {}", e)))?;
        buf
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| precondition(&format!("reading {}: {}", spec, e)))?
    };
    let doc = GroupDocument::parse(&text).map_err(|e| precondition(&e))?;
    doc.build().map_err(|e| precondition(&e))
}

/// The representation on which trace-field-conditional analyses run: the
/// group itself when it satisfies the condition, otherwise its squares
/// subgroup.
fn analysis_rep(rep: &FuchsianRep) -> Result<(FuchsianRep, bool), i32> {
    let (tfc, _, _) = trace_field_condition(rep).map_err(|e| core_error(&e))?;
    if tfc {
        Ok((rep.clone(), false))
    } else {
        let squares = fuchsian::squares_subgroup(rep).map_err(|e| core_error(&e))?;
        Ok((squares.rep, true))
    }
}

fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Info { group } => cmd_info(cli, group),
        Command::TraceField { group } => cmd_trace_field(cli, group),
        Command::SemiArithmetic { group } => cmd_semi_arithmetic(cli, group),
        Command::Arithmetic { group } => cmd_arithmetic(cli, group),
        Command::ModEmbedCheck { group, maxlen } => cmd_mod_embed(cli, group, *maxlen),
        Command::Reduce { group, p } => cmd_reduce(cli, group, *p),
        Command::Spectrum { group, pmax } => cmd_spectrum(cli, group, *pmax),
        Command::Identify { group, hom } => cmd_identify(cli, group, hom),
        Command::Rigidity { group_a, group_b, map, maxlen, pmax } => {
            cmd_rigidity(cli, group_a, group_b, map, *maxlen, *pmax)
        }
        Command::Local { kind } => cmd_local(cli, kind),
        Command::Crt { field, ideals } => cmd_crt(cli, field, ideals),
    }
}

fn field_name(f: &rigidity_core::numfield::NumberField) -> String {
    if f.degree() == 1 {
        "Q".into()
    } else {
        let coeffs: Vec<String> = f.minpoly().iter().map(|c| c.to_string()).collect();
        format!("Q[x]/({}) of degree {}", poly_string(&coeffs), f.degree())
    }
}

fn poly_string(coeffs: &[String]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (sign, mag) = match c.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", c.clone()),
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {} ", sign));
        }
        let term = match i {
            0 => mag,
            1 if mag == "1" => "x".into(),
            1 => format!("{} x", mag),
            _ if mag == "1" => format!("x^{}", i),
            _ => format!("{} x^{}", mag, i),
        };
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn cmd_info(cli: &Cli, group: &str) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (tfc, tf, inv) = match trace_field_condition(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let classes: Vec<String> = (0..rep.rank())
        .map(|i| format!("{}", rep.classify(&Word::gen(i))))
        .collect();
    let arith = fuchsian::is_arithmetic_auto(&rep);
    if cli.json {
        let arith_json = match &arith {
            Ok(a) => json!({
                "arithmetic": a.arithmetic,
                "semi_arithmetic": a.semi_arithmetic.semi_arithmetic,
                "on_squares_subgroup": a.on_squares_subgroup,
                "r_split": a.symbol.r_split,
            }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        let out = json!({
            "generators": rep.rank(),
            "labels": rep.labels,
            "entry_field": field_name(&rep.field),
            "entry_field_degree": rep.field.degree(),
            "generator_classes": classes,
            "trace_field_degree": tf.degree(),
            "invariant_trace_field_degree": inv.degree(),
            "trace_field_condition": tfc,
            "arithmeticity": arith_json,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("entry field: {}", field_name(&rep.field));
        println!("generators: {} ({})", rep.rank(), rep.labels.join(", "));
        for (i, c) in classes.iter().enumerate() {
            println!("  {}: {}", rep.labels[i], c);
        }
        println!("trace field degree: {}", tf.degree());
        println!("invariant trace field degree: {}", inv.degree());
        println!("trace field condition: {}", tfc);
        match &arith {
            Ok(a) => println!(
                "arithmetic: {}{}",
                a.arithmetic,
                if a.on_squares_subgroup { " (computed on the squares subgroup)" } else { "" }
            ),
            Err(e) => println!("arithmeticity: not decided ({})", e),
        }
    }
    EXIT_OK
}

fn cmd_trace_field(cli: &Cli, group: &str) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (tfc, tf, inv) = match trace_field_condition(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        let out = json!({
            "trace_field": field_name(tf.field()),
            "trace_field_degree": tf.degree(),
            "trace_field_minpoly": tf.field().minpoly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "invariant_trace_field": field_name(inv.field()),
            "invariant_trace_field_degree": inv.degree(),
            "trace_field_condition": tfc,
            "stabilization_words_checked": tf.stabilization_checked,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("trace field: {}", field_name(tf.field()));
        println!("invariant trace field: {}", field_name(inv.field()));
        println!("trace field condition: {}", tfc);
    }
    EXIT_OK
}

fn cmd_semi_arithmetic(cli: &Cli, group: &str) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let report = match fuchsian::is_semi_arithmetic(&rep) {
        Ok(r) => r,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        let out = json!({
            "semi_arithmetic": report.semi_arithmetic,
            "traces_integral": report.traces_integral,
            "nonintegral_witness": report.nonintegral_witness.as_ref().map(|w| w.display(&rep.labels)),
            "invariant_trace_field_degree": report.invariant_trace_field.degree(),
            "invariant_totally_real": report.invariant_totally_real,
            "words_checked": report.words_checked,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("semi-arithmetic: {}", report.semi_arithmetic);
        if let Some(w) = &report.nonintegral_witness {
            println!("non-integral trace witness: {}", w.display(&rep.labels));
        }
        println!(
            "invariant trace field totally real: {}",
            report.invariant_totally_real
        );
    }
    if report.semi_arithmetic {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_arithmetic(cli: &Cli, group: &str) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let report = match fuchsian::is_arithmetic_auto(&rep) {
        Ok(r) => r,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        let out = json!({
            "arithmetic": report.arithmetic,
            "semi_arithmetic": report.semi_arithmetic.semi_arithmetic,
            "trace_field": field_name(report.trace_field.field()),
            "trace_field_degree": report.trace_field.degree(),
            "symbol_a": report.symbol.a.to_string(),
            "symbol_b": report.symbol.b.to_string(),
            "ramified_at": report.symbol.ramified_at,
            "r_split": report.symbol.r_split,
            "on_squares_subgroup": report.on_squares_subgroup,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "arithmetic: {}{}",
            report.arithmetic,
            if report.on_squares_subgroup { " (computed on the squares subgroup)" } else { "" }
        );
        println!("trace field: {}", field_name(report.trace_field.field()));
        println!("quaternion symbol: ({}, {})", report.symbol.a, report.symbol.b);
        println!("split real places: {}", report.symbol.r_split);
    }
    if report.arithmetic {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_mod_embed(cli: &Cli, group: &str, maxlen: usize) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (rep, on_squares) = match analysis_rep(&rep) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let tf = match trace_field(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let mut sample: Vec<Word> = vec![];
    rep.for_each_word(maxlen, |w, _| sample.push(w.clone()));
    let outcome = match fuchsian::modular_embedding_obstruction(&rep, &tf, &sample) {
        Ok(o) => o,
        Err(e) => return core_error(&e),
    };
    match outcome {
        ObstructionOutcome::Pass { hyperbolic_words_checked } => {
            if cli.json {
                let out = json!({
                    "verdict": "pass",
                    "note": "necessary condition satisfied on the sample; existence of a modular embedding is not certified",
                    "hyperbolic_words_checked": hyperbolic_words_checked,
                    "on_squares_subgroup": on_squares,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "pass: |sigma(tr w)| < |tr w| for all {} hyperbolic sample words at every non-identity embedding",
                    hyperbolic_words_checked
                );
                println!("(necessary condition only; existence of a modular embedding is not certified)");
            }
            EXIT_OK
        }
        ObstructionOutcome::Violation { word, embedding, strict_reverse } => {
            if cli.json {
                let out = json!({
                    "verdict": "violation",
                    "word": word.display(&rep.labels),
                    "embedding_index": embedding,
                    "strict_reverse": strict_reverse,
                    "note": "no modular embedding exists",
                    "on_squares_subgroup": on_squares,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "violation: word {} has |sigma_{}(tr)| {} |tr|; no modular embedding exists",
                    word.display(&rep.labels),
                    embedding,
                    if strict_reverse { ">" } else { "=" }
                );
            }
            EXIT_NEGATIVE
        }
    }
}

fn cmd_reduce(cli: &Cli, group: &str, p: u64) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (rep, on_squares) = match analysis_rep(&rep) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let tf = match trace_field(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let ord = match order_basis(&rep, &tf) {
        Ok(o) => o,
        Err(e) => return core_error(&e),
    };
    if ord.is_bad_prime(p) {
        return precondition(&format!(
            "{} lies in the bad set S = {:?} of the order",
            p, ord.bad_primes
        ));
    }
    let primes = match factor_prime(tf.field(), p) {
        Ok(ps) => ps,
        Err(e) => return core_error(&e),
    };
    let mut rows = vec![];
    for prime in &primes {
        let hom = match reduction_hom(&rep, &ord, prime) {
            Ok(h) => h,
            Err(e) => return core_error(&e),
        };
        rows.push((prime.label(), hom));
    }
    if cli.json {
        let out = json!({
            "p": p,
            "on_squares_subgroup": on_squares,
            "ideals": rows.iter().map(|(label, hom)| json!({
                "ideal": label,
                "q": hom.ctx.q().to_string(),
                "surjective": hom.surjective,
                "image_order": hom.image_order.map(|o| o.to_string()),
                "full_order": hom.ctx.order().to_string(),
                "images": hom.images.iter().map(|x| json!([x.m[0], x.m[1], x.m[2], x.m[3]])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for (label, hom) in &rows {
            println!("prime {} with residue field of order {}:", label, hom.ctx.q());
            for (i, x) in hom.images.iter().enumerate() {
                println!("  {} -> {:?}", rep.labels[i], x.m);
            }
            match (hom.surjective, hom.image_order) {
                (Some(s), Some(o)) => {
                    println!("  image order {} of {}; surjective: {}", o, hom.ctx.order(), s)
                }
                _ => println!("  surjectivity not decided (closure cap)"),
            }
        }
        if on_squares {
            println!("(computed on the squares subgroup)");
        }
    }
    EXIT_OK
}

fn cmd_spectrum(cli: &Cli, group: &str, pmax: u64) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (rep, on_squares) = match analysis_rep(&rep) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let tf = match trace_field(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let ord = match order_basis(&rep, &tf) {
        Ok(o) => o,
        Err(e) => return core_error(&e),
    };
    let spec = match congruence_spectrum(&rep, &ord, pmax) {
        Ok(s) => s,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        let out = json!({
            "field_degree": spec.field_degree,
            "on_squares_subgroup": on_squares,
            "bad_primes": ord.bad_primes,
            "closure_cap": spec.closure_cap.to_string(),
            "entries": spec.entries,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("field degree: {}", spec.field_degree);
        for e in &spec.entries {
            match e {
                SpectrumEntry::Bad { p, reason } => println!("p = {:3}: skipped ({})", p, reason),
                SpectrumEntry::Good { p, ideals, degree_sum } => {
                    let parts: Vec<String> = ideals
                        .iter()
                        .map(|i| {
                            format!(
                                "f={} |PSL|={}{}",
                                i.residue_degree,
                                i.full_order,
                                match i.surjective {
                                    Some(true) => " onto",
                                    Some(false) => " NOT onto",
                                    None => " (undecided)",
                                }
                            )
                        })
                        .collect();
                    println!("p = {:3}: {} (sum f = {})", p, parts.join(", "), degree_sum);
                }
            }
        }
    }
    EXIT_OK
}

fn cmd_identify(cli: &Cli, group: &str, hom_path: &str) -> i32 {
    let rep = match load_rep(group) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let (rep, on_squares) = match analysis_rep(&rep) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let text = match std::fs::read_to_string(hom_path) {
        Ok(t) => t,
        Err(e) => return precondition(&format!("reading {}: {}", hom_path, e)),
    };
    let hom_doc = match HomDocument::parse(&text) {
        Ok(h) => h,
        Err(e) => return precondition(&e),
    };
    if hom_doc.p % 2 == 0 {
        return precondition("even q is outside scope");
    }
    let target = match Psl2Ctx::new(hom_doc.p, hom_doc.f) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let mut images = vec![];
    for m in &hom_doc.images {
        let entries = [m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()];
        match target.canonical(entries) {
            Ok(x) => images.push(x),
            Err(e) => return core_error(&e),
        }
    }
    let tf = match trace_field(&rep) {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let ord = match order_basis(&rep, &tf) {
        Ok(o) => o,
        Err(e) => return core_error(&e),
    };
    match identify_quotient(&rep, &ord, &images, &target) {
        Ok((prime, auto)) => {
            if cli.json {
                let out = json!({
                    "prime": prime.label(),
                    "p": prime.p,
                    "residue_degree": prime.residue_degree,
                    "norm": prime.norm().to_string(),
                    "frobenius_power": auto.frobenius_power,
                    "on_squares_subgroup": on_squares,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "quotient identified: the principal congruence subgroup at {} (norm {})",
                    prime.label(),
                    prime.norm()
                );
                println!("matched up to Frobenius power {}", auto.frobenius_power);
            }
            EXIT_OK
        }
        Err(CoreError::NoQuotientCandidate) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "identified": false,
                        "note": "no prime of this norm matches; the kernel is not a principal congruence subgroup at a good prime",
                    }))
                    .unwrap()
                );
            } else {
                println!("no candidate prime matches the given homomorphism");
            }
            EXIT_NEGATIVE
        }
        Err(e) => core_error(&e),
    }
}

fn parse_correspondence(map: &str, m: usize) -> Result<Vec<usize>, i32> {
    if map.is_empty() {
        return Ok((0..m).collect());
    }
    let parts: Result<Vec<usize>, _> = map.split(',').map(|s| s.trim().parse()).collect();
    match parts {
        Ok(v) if v.len() == m => Ok(v),
        Ok(v) => Err(precondition(&format!(
            "correspondence has {} entries for {} generators",
            v.len(),
            m
        ))),
        Err(e) => Err(precondition(&format!("bad correspondence: {}", e))),
    }
}

fn cmd_rigidity(
    cli: &Cli,
    group_a: &str,
    group_b: &str,
    map: &str,
    maxlen: usize,
    pmax: u64,
) -> i32 {
    let a = match load_rep(group_a) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let b = match load_rep(group_b) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let corr = match parse_correspondence(map, a.rank()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = match rigidity_report(&a, &b, &corr, maxlen, pmax) {
        Ok(r) => r,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        let out = json!({
            "good_primes": report.good_primes,
            "all_char_polys_equal": report.all_equal_exactly,
            "contradiction": report.contradiction.as_ref().map(|(w, p)| json!({
                "word": w.display(&a.labels),
                "prime": p,
            })),
            "conjugator_found": report.conjugator.is_some(),
            "rows": report.rows.iter().map(|r| json!({
                "word": r.word.display(&a.labels),
                "chi_first": r.chi_first.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "chi_second": r.chi_second.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "equal": r.equal_exactly,
                "disagreeing_primes": r.disagreeing_primes,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for r in &report.rows {
            if r.equal_exactly {
                continue;
            }
            println!(
                "word {}: char polys {} vs {}; disagreement at {} good primes",
                r.word.display(&a.labels),
                poly_string(&r.chi_first.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                poly_string(&r.chi_second.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                r.disagreeing_primes.len(),
            );
        }
        match &report.contradiction {
            Some((w, p)) => println!(
                "congruence preservation contradicted: witness word {} at p = {}",
                w.display(&a.labels),
                p
            ),
            None => {
                println!(
                    "all char polynomials agree at all good primes up to {}",
                    pmax
                );
                if let Some(c) = &report.conjugator {
                    println!(
                        "conjugator (up to scalar): [[{}, {}], [{}, {}]]",
                        c.a, c.b, c.c, c.d
                    );
                }
            }
        }
    }
    if report.contradiction.is_some() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

fn parse_q(q: u64) -> Result<(u64, usize), i32> {
    if q < 3 || q % 2 == 0 {
        return Err(precondition("q must be an odd prime power at least 3"));
    }
    let mut p = q;
    for cand in 2..q {
        if q % cand == 0 {
            p = cand;
            break;
        }
    }
    let mut f = 0usize;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        f += 1;
    }
    if acc != q {
        return Err(precondition(&format!("{} is not a prime power", q)));
    }
    Ok((p, f))
}

fn cmd_local(cli: &Cli, kind: &LocalKind) -> i32 {
    match kind {
        LocalKind::Unram { q, r } => {
            let (p, f) = match parse_q(*q) {
                Ok(t) => t,
                Err(c) => return c,
            };
            let rep = match local::local_unramified(p, f, *r) {
                Ok(rep) => rep,
                Err(e) => return core_error(&e),
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!(rep)).unwrap());
            } else {
                println!(
                    "|SL(2, o/p^{})| = {} (formula){}",
                    r,
                    rep.order_formula,
                    match rep.order_enumerated {
                        Some(e) => format!("; enumeration confirms {}", e),
                        None => "; enumeration skipped (cap)".into(),
                    }
                );
                for s in &rep.steps {
                    println!(
                        "step {} -> {}: kernel order {} ({}), elementary abelian: {}, exponent p: {}",
                        s.from_level,
                        s.from_level + 1,
                        s.kernel_order,
                        if s.matches_trace_zero_count {
                            "= trace-zero count"
                        } else {
                            "MISMATCH"
                        },
                        s.elementary_abelian,
                        s.exponent_p,
                    );
                }
            }
            EXIT_OK
        }
        LocalKind::Ram { q, r } => {
            let (p, f) = match parse_q(*q) {
                Ok(t) => t,
                Err(c) => return c,
            };
            if f != 1 {
                return precondition("the ramified pair model supports residue degree 1 (q = p)");
            }
            let m = (2 * *r).max(1);
            let rep = match local::local_ramified(p, m) {
                Ok(rep) => rep,
                Err(e) => return core_error(&e),
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!(rep)).unwrap());
            } else {
                println!("head quotient: order {}, cyclic: {}", rep.head_order, rep.head_cyclic);
                println!("level orders (M-adic): {:?}", rep.level_orders);
                for s in &rep.steps {
                    println!(
                        "step M^{} -> M^{}: order {}, exponent p: {}, abelian: {}",
                        s.from_level,
                        s.from_level + 1,
                        s.order,
                        s.exponent_p,
                        s.abelian
                    );
                }
            }
            EXIT_OK
        }
    }
}

fn cmd_crt(cli: &Cli, field: &str, ideals: &str) -> i32 {
    if field != "Q" {
        return precondition(
            "the CRT check enumerates SL(2, Z/n); only the rational field is supported",
        );
    }
    let mut parts = vec![];
    for tok in ideals.split(',') {
        let tok = tok.trim();
        let (p_str, r) = match tok.split_once('^') {
            Some((p, r)) => (p, r.trim().parse::<u32>().unwrap_or(0)),
            None => (tok, 1),
        };
        let p: u64 = match p_str.trim().parse() {
            Ok(p) => p,
            Err(e) => return precondition(&format!("bad ideal token {:?}: {}", tok, e)),
        };
        if r == 0 {
            return precondition(&format!("bad exponent in {:?}", tok));
        }
        parts.push((p, r));
    }
    let rep = match local::crt_quotient_check(&parts) {
        Ok(r) => r,
        Err(e) => return core_error(&e),
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&json!(rep)).unwrap());
    } else {
        println!(
            "SL(2, Z/{}): order {}, componentwise map bijective: {}",
            rep.modulus, rep.sl2_order, rep.componentwise_bijective
        );
        println!(
            "PSL kernel: order {} = (Z/2)^{}, elementary 2-group: {}",
            rep.psl_kernel_order, rep.psl_kernel_rank, rep.psl_kernel_elementary_two_group
        );
    }
    EXIT_OK
}

//! `linnik` — one binary, subcommand per pipeline stage. Machine-readable
//! CSV/JSON artifacts are the primary interface; every artifact opens with a
//! header block (tool version, resolved config, wall time) and its data rows
//! are byte-identical across reruns with the same config and cache state.
//!
//! Exit codes: 0 success, 2 validation error (bad input, unknown flag),
//! 3 assertion failure (violated numeric invariant, failed count audit).

mod emit;
mod zcache;

use clap::{Parser, Subcommand};
use emit::{config_line, to_json_pretty, write_artifact, Meta};
use linnik_core::betasieve::{
    build_weights, buchstab_split, default_sieve_functions, sift_exact, sifted_sum, theta_values,
    SieveSign, SiftableSequence,
};
use linnik_core::classgroup::coeffs::CoefficientTable;
use linnik_core::classgroup::hecke::{verify_hecke, verify_orthogonality, verify_recovery};
use linnik_core::classgroup::{cached_class_group, enumerate_class_group, ClassGroup, Discriminant};
use linnik_core::error::assertion;
use linnik_core::lfunc::explicit::{audit_hypothesis, explicit_formula_check};
use linnik_core::lfunc::zeros::scan_zeros;
use linnik_core::lfunc::{theta_coeff_length, LFunction};
use linnik_core::linnik::leastprime::{exponent_survey, least_prime_search};
use linnik_core::linnik::{build_sequence, character_pairing, congruence_sums, s3_partition, SequenceClass};
use linnik_core::multiplicative::{delta_sum, euler_product};
use linnik_core::{par, primes, Error, Result};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "linnik", version, about = "Least split primes in ideal classes of Q(√−D): class groups, sieve reports, L-function zero scans, explicit-formula checks")]
struct Cli {
    /// Worker threads for parallel sections (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Write the artifact to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cache directory for class groups and zero lists
    /// (overrides the LINNIK_CACHE_DIR environment variable)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the class group of Q(√−D) and emit its JSON document
    Classgroup {
        /// Prime discriminant D ≡ 3 (mod 4), D > 3
        #[arg(long)]
        disc: u64,
        /// Output is always JSON (accepted for symmetry)
        #[arg(long)]
        json: bool,
    },
    /// Least split prime in every ideal class, with representation witnesses
    LeastPrime {
        #[arg(long)]
        disc: u64,
        /// Give up on a class when no split prime ≤ pmax lands in it
        #[arg(long, default_value_t = 10_000_000)]
        pmax: u64,
        /// Emit JSON instead of CSV
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit CSV (the default)
        #[arg(long)]
        csv: bool,
    },
    /// Worst-class least-prime exponents over a range of discriminants
    Survey {
        #[arg(long)]
        dmin: u64,
        #[arg(long)]
        dmax: u64,
        /// Prime cap per discriminant
        #[arg(long)]
        pcap: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Congruence sums A_d of the weighted sequence against g(d)·X
    Congruence {
        #[arg(long)]
        disc: u64,
        /// Sequence scale; support is [x^(1−nu), x]
        #[arg(long)]
        x: u64,
        /// Largest modulus d
        #[arg(long)]
        dmax: u64,
        /// Window parameter, 0 < nu < 1
        #[arg(long)]
        nu: f64,
        /// Single ideal class (index); the aggregate sequence when absent
        #[arg(long)]
        class: Option<usize>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Two-fold Buchstab expansion S(A,√x) = S₁ + S₂ + S₃ at z = x^(1/r)
    Buchstab {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        x: u64,
        /// Sifting exponent: z = x^(1/r)
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0.5)]
        nu: f64,
        #[arg(long)]
        json: bool,
    },
    /// Trisection S₃ = V + V′ + V″ with the smoothed brackets W^± ∋ V
    S3 {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        r: u32,
        /// Partition steps J for the smooth bracket (z_j = x^(α^j/r))
        #[arg(long = "J")]
        j: u32,
        #[arg(long, default_value_t = 0.5)]
        nu: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sandwich check of the sieve weights on a built-in test sequence
    SieveSelftest {
        #[arg(long, default_value_t = 2)]
        kappa: u32,
        /// Sieve level: weights are supported on d < y
        #[arg(long, default_value_t = 1e4)]
        y: f64,
        /// Sifting limit
        #[arg(long, default_value_t = 20)]
        z: u64,
        /// Check θ⁻ ≤ [gcd(n, P(z)) = 1] ≤ θ⁺ for all n ≤ this
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Tabulate the beta-sieve functions F and f up to smax
    SieveFunctions {
        #[arg(long)]
        smax: f64,
        /// Row spacing in s (the solver grid is much finer)
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Finite Euler product E = Π_{p<x}(1 − χ_D(p)/p)⁻¹ against L(1,χ_D)
    EulerProduct {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        json: bool,
    },
    /// Split-prime reciprocal sums δ(z,t) = Σ_{z≤p<t}(1+χ_D(p))/p up to w
    Delta {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        w: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Scan critical-line zeros up to a height; JSONL rows plus count audit
    Zeros {
        /// 1 selects ζ; a prime D ≡ 3 (mod 4) selects L(s,χ_{−D}),
        /// or a class-group L-function together with --chi
        #[arg(long)]
        disc: u64,
        /// Class-group character index (0 = principal)
        #[arg(long)]
        chi: Option<usize>,
        /// Scan height T
        #[arg(long)]
        height: f64,
    },
    /// Prime side of the explicit formula against the scanned zeros
    ExplicitCheck {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        chi: usize,
        #[arg(long)]
        x: f64,
        /// Window support (a1, a2) in log-scale u = log n / log x
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
        /// Zero-scan height T (0 pushes every zero into the tail budget)
        #[arg(long)]
        height: f64,
        #[arg(long)]
        json: bool,
    },
    /// Zero-free-region margin audit over every L-function attached to D
    AuditH {
        #[arg(long)]
        disc: u64,
        /// Region constant c in 1 − β − c/log D
        #[arg(long, default_value_t = 0.0875)]
        c: f64,
        #[arg(long, default_value_t = 10.0)]
        height: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run the exact-identity suites (orthogonality, Hecke, sandwich, Buchstab)
    Selftest {
        /// Seed for the randomized pairing spot-checks
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Coefficient-table length for the identity suites
        #[arg(long, default_value_t = 2000)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let t0 = Instant::now();
    let threads = cli.threads;
    match par::with_threads(threads, move || run(cli, t0)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Assertion(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

struct Ctx {
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
    threads: usize,
    t0: Instant,
}

impl Ctx {
    /// Resolved config echo: subcommand flags, then the global flags.
    fn config(&self, cmd: &str, args: &[(&str, String)]) -> String {
        let mut all: Vec<(&str, String)> = args.to_vec();
        all.push(("threads", self.threads.to_string()));
        if let Some(c) = &self.cache {
            all.push(("cache", c.display().to_string()));
        }
        config_line(cmd, &all)
    }

    fn group(&self, disc: Discriminant) -> Result<ClassGroup> {
        match &self.cache {
            Some(dir) => cached_class_group(disc, dir),
            None => enumerate_class_group(disc),
        }
    }
}

fn run(cli: Cli, t0: Instant) -> Result<()> {
    let cache = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os("LINNIK_CACHE_DIR").map(PathBuf::from));
    let ctx = Ctx {
        out: cli.out.clone(),
        cache,
        threads: cli.threads,
        t0,
    };
    match cli.cmd {
        Cmd::Classgroup { disc, json: _ } => cmd_classgroup(&ctx, disc),
        Cmd::LeastPrime {
            disc,
            pmax,
            json,
            csv: _,
        } => cmd_least_prime(&ctx, disc, pmax, json),
        Cmd::Survey {
            dmin,
            dmax,
            pcap,
            json,
            csv: _,
        } => cmd_survey(&ctx, dmin, dmax, pcap, json),
        Cmd::Congruence {
            disc,
            x,
            dmax,
            nu,
            class,
            json,
            csv: _,
        } => cmd_congruence(&ctx, disc, x, dmax, nu, class, json),
        Cmd::Buchstab {
            disc,
            x,
            r,
            nu,
            json: _,
        } => cmd_buchstab(&ctx, disc, x, r, nu),
        Cmd::S3 {
            disc,
            x,
            r,
            j,
            nu,
            json: _,
        } => cmd_s3(&ctx, disc, x, r, j, nu),
        Cmd::SieveSelftest { kappa, y, z, n } => cmd_sieve_selftest(&ctx, kappa, y, z, n),
        Cmd::SieveFunctions {
            smax,
            step,
            json,
            csv: _,
        } => cmd_sieve_functions(&ctx, smax, step, json),
        Cmd::EulerProduct { disc, x, json: _ } => cmd_euler_product(&ctx, disc, x),
        Cmd::Delta {
            disc,
            z,
            w,
            json,
            csv: _,
        } => cmd_delta(&ctx, disc, z, w, json),
        Cmd::Zeros { disc, chi, height } => cmd_zeros(&ctx, disc, chi, height),
        Cmd::ExplicitCheck {
            disc,
            chi,
            x,
            a1,
            a2,
            height,
            json: _,
        } => cmd_explicit_check(&ctx, disc, chi, x, a1, a2, height),
        Cmd::AuditH {
            disc,
            c,
            height,
            json: _,
        } => cmd_audit_h(&ctx, disc, c, height),
        Cmd::Selftest { seed, n } => cmd_selftest(&ctx, seed, n),
    }
}

// ---------------------------------------------------------------- classgroup

#[derive(Serialize)]
struct ClassgroupOut {
    meta: Meta,
    #[serde(rename = "D")]
    d: u64,
    h: usize,
    forms: Vec<[i64; 3]>,
    structure: Vec<u64>,
}

fn cmd_classgroup(ctx: &Ctx, disc: u64) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let cfg = ctx.config("classgroup", &[("disc", disc.to_string())]);
    let out = ClassgroupOut {
        meta: Meta::new(cfg, ctx.t0),
        d: disc,
        h: g.h,
        forms: g.elements.iter().map(|f| [f.a, f.b, f.c]).collect(),
        structure: g.structure.clone(),
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)
}

// ---------------------------------------------------------------- least-prime

#[derive(Serialize)]
struct LpRow {
    class: usize,
    p: u64,
    wx: i64,
    wy: i64,
    exponent: f64,
}

#[derive(Serialize)]
struct LeastPrimeOut {
    meta: Meta,
    #[serde(rename = "D")]
    d: u64,
    h: usize,
    pmax: u64,
    rows: Vec<LpRow>,
    unresolved: Vec<usize>,
}

fn cmd_least_prime(ctx: &Ctx, disc: u64, pmax: u64, json: bool) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let table = least_prime_search(&g, pmax)?;
    let cfg = ctx.config(
        "least-prime",
        &[
            ("disc", disc.to_string()),
            ("pmax", pmax.to_string()),
            ("format", fmt_name(json)),
        ],
    );
    let rows: Vec<LpRow> = table
        .rows
        .iter()
        .flatten()
        .map(|r| LpRow {
            class: r.class_index,
            p: r.p,
            wx: r.witness.0,
            wy: r.witness.1,
            exponent: r.exponent,
        })
        .collect();
    let meta = Meta::new(cfg, ctx.t0);
    let text = if json {
        to_json_pretty(&LeastPrimeOut {
            meta,
            d: disc,
            h: table.h,
            pmax,
            rows,
            unresolved: table.unresolved.clone(),
        })?
    } else {
        let mut s = meta.comment_block();
        s.push_str("d,class,p,wx,wy,exponent\n");
        for r in &rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                disc, r.class, r.p, r.wx, r.wy, r.exponent
            ));
        }
        if !table.unresolved.is_empty() {
            s.push_str(&format!(
                "# unresolved classes (no split prime <= {}): {:?}\n",
                pmax, table.unresolved
            ));
        }
        s
    };
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- survey

#[derive(Serialize)]
struct SurveyOut {
    meta: Meta,
    dmin: u64,
    dmax: u64,
    pcap: u64,
    rows: Vec<linnik_core::linnik::leastprime::SurveyRow>,
    max_exponent: f64,
    argmax_d: u64,
}

fn cmd_survey(ctx: &Ctx, dmin: u64, dmax: u64, pcap: u64, json: bool) -> Result<()> {
    let report = exponent_survey(dmin, dmax, pcap)?;
    let cfg = ctx.config(
        "survey",
        &[
            ("dmin", dmin.to_string()),
            ("dmax", dmax.to_string()),
            ("pcap", pcap.to_string()),
            ("format", fmt_name(json)),
        ],
    );
    let meta = Meta::new(cfg, ctx.t0);
    let text = if json {
        to_json_pretty(&SurveyOut {
            meta,
            dmin,
            dmax,
            pcap,
            rows: report.rows.clone(),
            max_exponent: report.max_exponent,
            argmax_d: report.argmax_d,
        })?
    } else {
        let mut s = meta.comment_block();
        s.push_str("d,h,max_p,max_class,exponent,resolved\n");
        for r in &report.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.d, r.h, r.max_p, r.max_class, r.exponent, r.resolved
            ));
        }
        s.push_str(&format!(
            "# max_exponent: {} at D={}\n",
            report.max_exponent, report.argmax_d
        ));
        s
    };
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- congruence

#[derive(Serialize)]
struct CongRowOut {
    d: u64,
    a_d: f64,
    main: f64,
    r_d: f64,
}

#[derive(Serialize)]
struct CongruenceOut {
    meta: Meta,
    #[serde(rename = "D")]
    disc: u64,
    x: u64,
    nu: f64,
    class: Option<usize>,
    x_value: f64,
    x_used: f64,
    rows: Vec<CongRowOut>,
}

fn cmd_congruence(
    ctx: &Ctx,
    disc: u64,
    x: u64,
    dmax: u64,
    nu: f64,
    class: Option<usize>,
    json: bool,
) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let table = CoefficientTable::build(&g, x as usize)?;
    let seq_class = match class {
        Some(c) => SequenceClass::Class(c),
        None => SequenceClass::Aggregate,
    };
    let a = build_sequence(&table, seq_class, x, nu)?;
    for w in &a.warnings {
        eprintln!("warning: {w}");
    }
    let report = congruence_sums(&a, dmax)?;
    let mut args = vec![
        ("disc", disc.to_string()),
        ("x", x.to_string()),
        ("dmax", dmax.to_string()),
        ("nu", nu.to_string()),
    ];
    if let Some(c) = class {
        args.push(("class", c.to_string()));
    }
    args.push(("format", fmt_name(json)));
    let meta = Meta::new(ctx.config("congruence", &args), ctx.t0);
    let rows: Vec<CongRowOut> = report
        .rows
        .iter()
        .map(|r| CongRowOut {
            d: r.d,
            a_d: r.a_d,
            main: r.main,
            r_d: r.r_d,
        })
        .collect();
    let text = if json {
        to_json_pretty(&CongruenceOut {
            meta,
            disc,
            x,
            nu,
            class,
            x_value: report.x_value,
            x_used: report.x_used,
            rows,
        })?
    } else {
        let mut s = meta.comment_block();
        s.push_str(&format!("# x_value: {}\n# x_used: {}\n", report.x_value, report.x_used));
        s.push_str("d,a_d,main,r_d\n");
        for r in &rows {
            s.push_str(&format!("{},{},{},{}\n", r.d, r.a_d, r.main, r.r_d));
        }
        s
    };
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- buchstab

#[derive(Serialize)]
struct BuchstabOut {
    meta: Meta,
    #[serde(rename = "D")]
    disc: u64,
    x: u64,
    r: u32,
    nu: f64,
    z: u64,
    s_full: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    residual: f64,
}

/// z = x^(1/r), snapped to the integer when the power is one up to float
/// fuzz (matching the trisection's convention), otherwise rounded up.
fn z_from_r(x: u64, r: u32) -> u64 {
    let zf = (x as f64).powf(1.0 / r as f64);
    if (zf - zf.round()).abs() < 1e-9 {
        zf.round() as u64
    } else {
        zf.ceil() as u64
    }
}

fn cmd_buchstab(ctx: &Ctx, disc: u64, x: u64, r: u32, nu: f64) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let table = CoefficientTable::build(&g, x as usize)?;
    let a = build_sequence(&table, SequenceClass::Aggregate, x, nu)?;
    for w in &a.warnings {
        eprintln!("warning: {w}");
    }
    let z = z_from_r(x, r);
    let split = buchstab_split(&a.seq, z, x)?;
    let cfg = ctx.config(
        "buchstab",
        &[
            ("disc", disc.to_string()),
            ("x", x.to_string()),
            ("r", r.to_string()),
            ("nu", nu.to_string()),
        ],
    );
    let out = BuchstabOut {
        meta: Meta::new(cfg, ctx.t0),
        disc,
        x,
        r,
        nu,
        z,
        s_full: split.s_full,
        s1: split.s1,
        s2: split.s2,
        s3: split.s3,
        residual: split.residual,
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)
}

// ---------------------------------------------------------------- s3

#[derive(Serialize)]
struct S3Out {
    meta: Meta,
    #[serde(rename = "D")]
    disc: u64,
    x: u64,
    r: u32,
    #[serde(rename = "J")]
    j: u32,
    nu: f64,
    z: f64,
    alpha: f64,
    v: f64,
    v_prime: f64,
    v_double_prime: f64,
    s3: f64,
    s3_cross_residual: f64,
    w_minus: f64,
    w_plus: f64,
}

fn cmd_s3(ctx: &Ctx, disc: u64, x: u64, r: u32, j: u32, nu: f64) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let table = CoefficientTable::build(&g, x as usize)?;
    let a = build_sequence(&table, SequenceClass::Aggregate, x, nu)?;
    for w in &a.warnings {
        eprintln!("warning: {w}");
    }
    let rep = s3_partition(&a, r, j)?;
    let cfg = ctx.config(
        "s3",
        &[
            ("disc", disc.to_string()),
            ("x", x.to_string()),
            ("r", r.to_string()),
            ("J", j.to_string()),
            ("nu", nu.to_string()),
        ],
    );
    let out = S3Out {
        meta: Meta::new(cfg, ctx.t0),
        disc,
        x,
        r,
        j,
        nu,
        z: rep.z,
        alpha: rep.alpha,
        v: rep.v,
        v_prime: rep.v_prime,
        v_double_prime: rep.v_double_prime,
        s3: rep.s3,
        s3_cross_residual: rep.s3_cross_residual,
        w_minus: rep.w_minus,
        w_plus: rep.w_plus,
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)
}

// ---------------------------------------------------------------- sieve-selftest

fn cmd_sieve_selftest(ctx: &Ctx, kappa: u32, y: f64, z: u64, n: usize) -> Result<()> {
    let lo = build_weights(kappa, y, z, SieveSign::Lower)?;
    let hi = build_weights(kappa, y, z, SieveSign::Upper)?;
    let tl = theta_values(n, &lo);
    let th = theta_values(n, &hi);
    let lpf = primes::lpf_table(n);
    let mut violations = 0usize;
    for nn in 1..=n {
        let ind = i32::from(nn == 1 || lpf[nn] as u64 >= z);
        if !(tl[nn] <= ind && ind <= th[nn]) {
            violations += 1;
        }
    }
    let ones = SiftableSequence::new(vec![1.0; n + 1], "ones")?;
    let s_minus = sifted_sum(&ones, &lo);
    let s_plus = sifted_sum(&ones, &hi);
    let s_exact = sift_exact(&ones, z);
    let eps = 1e-9 * s_exact.abs().max(1.0);
    let bracket_ok = s_minus <= s_exact + eps && s_exact <= s_plus + eps;
    let cfg = ctx.config(
        "sieve-selftest",
        &[
            ("kappa", kappa.to_string()),
            ("y", y.to_string()),
            ("z", z.to_string()),
            ("n", n.to_string()),
        ],
    );
    let meta = Meta::new(cfg, ctx.t0);
    let mut text = meta.comment_block();
    text.push_str(&format!("violations: {violations}\n"));
    text.push_str(&format!("S_minus: {s_minus}\n"));
    text.push_str(&format!("S_exact: {s_exact}\n"));
    text.push_str(&format!("S_plus: {s_plus}\n"));
    text.push_str(&format!("bracket_ok: {bracket_ok}\n"));
    write_artifact(&ctx.out, &text)?;
    if violations > 0 {
        return Err(assertion(format!(
            "sandwich violated at {violations} of {n} indices"
        )));
    }
    if !bracket_ok {
        return Err(assertion(format!(
            "sifted-sum bracket violated: {s_minus} ≤ {s_exact} ≤ {s_plus} fails"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- sieve-functions

#[derive(Serialize)]
struct SieveFnRow {
    s: f64,
    #[serde(rename = "F")]
    upper: f64,
    f: f64,
}

#[derive(Serialize)]
struct SieveFunctionsOut {
    meta: Meta,
    kappa: u32,
    beta: f64,
    a: f64,
    est_error: f64,
    rows: Vec<SieveFnRow>,
}

fn cmd_sieve_functions(ctx: &Ctx, smax: f64, step: f64, json: bool) -> Result<()> {
    let fns = default_sieve_functions(smax)?;
    let every = ((step / fns.step).round() as usize).max(1);
    let last = fns.upper.len() - 1;
    let mut idx: Vec<usize> = (0..=last).step_by(every).collect();
    if *idx.last().expect("nonempty grid") != last {
        idx.push(last);
    }
    let rows: Vec<SieveFnRow> = idx
        .iter()
        .map(|&i| SieveFnRow {
            s: fns.s_at(i),
            upper: fns.upper[i],
            f: fns.lower[i],
        })
        .collect();
    let cfg = ctx.config(
        "sieve-functions",
        &[
            ("smax", smax.to_string()),
            ("step", step.to_string()),
            ("format", fmt_name(json)),
        ],
    );
    let meta = Meta::new(cfg, ctx.t0);
    let text = if json {
        to_json_pretty(&SieveFunctionsOut {
            meta,
            kappa: fns.kappa,
            beta: fns.beta,
            a: fns.a,
            est_error: fns.est_error,
            rows,
        })?
    } else {
        let mut s = meta.comment_block();
        s.push_str(&format!(
            "# kappa: {}\n# beta: {}\n# A: {}\n# est_error: {}\n",
            fns.kappa, fns.beta, fns.a, fns.est_error
        ));
        s.push_str("s,F,f\n");
        for r in &rows {
            s.push_str(&format!("{},{},{}\n", r.s, r.upper, r.f));
        }
        s
    };
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- euler-product

#[derive(Serialize)]
struct EulerOut {
    meta: Meta,
    #[serde(rename = "D")]
    d: u64,
    x: u64,
    #[serde(rename = "E")]
    e: f64,
    #[serde(rename = "L1")]
    l1: f64,
    eta: f64,
}

fn cmd_euler_product(ctx: &Ctx, disc: u64, x: u64) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let state = euler_product(d, x)?;
    let cfg = ctx.config(
        "euler-product",
        &[("disc", disc.to_string()), ("x", x.to_string())],
    );
    let out = EulerOut {
        meta: Meta::new(cfg, ctx.t0),
        d: state.d,
        x: state.x,
        e: state.e,
        l1: state.l1,
        eta: state.eta,
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)
}

// ---------------------------------------------------------------- delta

#[derive(Serialize)]
struct DeltaRow {
    t: u64,
    delta: f64,
}

#[derive(Serialize)]
struct DeltaOut {
    meta: Meta,
    #[serde(rename = "D")]
    disc: u64,
    z: u64,
    w: u64,
    rows: Vec<DeltaRow>,
}

fn cmd_delta(ctx: &Ctx, disc: u64, z: u64, w: u64, json: bool) -> Result<()> {
    let d = Discriminant::new(disc)?;
    // doubling checkpoints so the growth of the window is plot-ready
    let mut ts = Vec::new();
    let mut t = z;
    loop {
        t = t.saturating_mul(2).min(w);
        ts.push(t);
        if t >= w {
            break;
        }
    }
    let rows: Vec<DeltaRow> = ts
        .iter()
        .map(|&t| {
            delta_sum(d, z, t).map(|v| DeltaRow { t, delta: v })
        })
        .collect::<Result<_>>()?;
    let cfg = ctx.config(
        "delta",
        &[
            ("disc", disc.to_string()),
            ("z", z.to_string()),
            ("w", w.to_string()),
            ("format", fmt_name(json)),
        ],
    );
    let meta = Meta::new(cfg, ctx.t0);
    let text = if json {
        to_json_pretty(&DeltaOut {
            meta,
            disc,
            z,
            w,
            rows,
        })?
    } else {
        let mut s = meta.comment_block();
        s.push_str("z,t,delta\n");
        for r in &rows {
            s.push_str(&format!("{},{},{}\n", z, r.t, r.delta));
        }
        s
    };
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- zeros

#[derive(Serialize)]
struct MetaLine {
    meta: Meta,
}

fn cmd_zeros(ctx: &Ctx, disc: u64, chi: Option<usize>, height: f64) -> Result<()> {
    let table: CoefficientTable;
    let lf = if disc == 1 {
        if chi.is_some() {
            return Err(linnik_core::error::validation(
                "--chi needs a class-group discriminant, not 1 (= ζ)",
            ));
        }
        LFunction::Zeta
    } else {
        let d = Discriminant::new(disc)?;
        match chi {
            None => LFunction::Kronecker(d),
            Some(k) => {
                let g = ctx.group(d)?;
                table = CoefficientTable::build(&g, theta_coeff_length(disc))?;
                LFunction::class_group(&table, k)?
            }
        }
    };
    let label = lf.label();
    let header = zcache::CacheHeader::for_target(&label);
    let to_row = |z: &linnik_core::lfunc::zeros::Zero| zcache::CacheRow {
        disc,
        chi,
        ordinate: z.ordinate,
        refined_to: z.refined_to,
    };

    let (mut rows, audit) = match &ctx.cache {
        None => {
            let zl = scan_zeros(&lf, height)?;
            let rows: Vec<zcache::CacheRow> = zl.zeros.iter().map(to_row).collect();
            (
                rows,
                zcache::CacheAudit {
                    t_max: height,
                    count_found: zl.count_found,
                    count_main: zl.count_main,
                    count_ok: zl.count_ok,
                },
            )
        }
        Some(dir) => {
            let path = zcache::cache_path(dir, &header);
            match zcache::read_cache(&path, &header) {
                Some(cached) if cached.audited + 1e-9 >= height => {
                    let rows: Vec<zcache::CacheRow> = cached
                        .rows
                        .iter()
                        .filter(|r| r.ordinate <= height)
                        .copied()
                        .collect();
                    let count_main = lf.count_main(height);
                    let count_found = rows.len();
                    (
                        rows,
                        zcache::CacheAudit {
                            t_max: height,
                            count_found,
                            count_main,
                            count_ok: (count_found as f64 - count_main).abs() <= 1.0 + 1e-9,
                        },
                    )
                }
                Some(cached) => {
                    let zl = scan_zeros(&lf, height)?;
                    let extra =
                        zcache::split_extension(&cached.rows, &zl.zeros, cached.audited, &label)?;
                    let extra_rows: Vec<zcache::CacheRow> = extra.iter().map(to_row).collect();
                    let audit = zcache::CacheAudit {
                        t_max: height,
                        count_found: zl.count_found,
                        count_main: zl.count_main,
                        count_ok: zl.count_ok,
                    };
                    zcache::append_rows(&path, &extra_rows, &audit)?;
                    let mut rows = cached.rows;
                    rows.extend(extra_rows);
                    (rows, audit)
                }
                None => {
                    let zl = scan_zeros(&lf, height)?;
                    let rows: Vec<zcache::CacheRow> = zl.zeros.iter().map(to_row).collect();
                    let audit = zcache::CacheAudit {
                        t_max: height,
                        count_found: zl.count_found,
                        count_main: zl.count_main,
                        count_ok: zl.count_ok,
                    };
                    zcache::write_fresh(&path, &header, &rows, &audit)?;
                    (rows, audit)
                }
            }
        }
    };
    rows.sort_by(|a, b| a.ordinate.total_cmp(&b.ordinate));

    let mut args = vec![("disc", disc.to_string())];
    if let Some(k) = chi {
        args.push(("chi", k.to_string()));
    }
    args.push(("height", height.to_string()));
    let meta = Meta::new(ctx.config("zeros", &args), ctx.t0);
    let mut text = serde_json::to_string(&MetaLine { meta })?;
    text.push('\n');
    for r in &rows {
        text.push_str(&zcache::row_line(r));
        text.push('\n');
    }
    text.push_str(&zcache::audit_line(&audit));
    text.push('\n');
    write_artifact(&ctx.out, &text)?;
    if !audit.count_ok {
        return Err(assertion(format!(
            "zero-count audit failed for {label}: found {} against main term {:.6}",
            audit.count_found, audit.count_main
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- explicit-check

#[derive(Serialize)]
struct ExplicitOut {
    meta: Meta,
    lhs: f64,
    rhs: f64,
    residual: f64,
    tail_estimate: f64,
    detail: linnik_core::lfunc::explicit::ExplicitReport,
}

fn cmd_explicit_check(
    ctx: &Ctx,
    disc: u64,
    chi: usize,
    x: f64,
    a1: f64,
    a2: f64,
    height: f64,
) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let mut nmax = theta_coeff_length(disc);
    if x.is_finite() && x >= 2.0 && (0.0..=1.0).contains(&a2) {
        nmax = nmax.max(x.powf(a2).floor() as usize + 1);
    }
    let table = CoefficientTable::build(&g, nmax)?;
    let rep = explicit_formula_check(&table, chi, x, a1, a2, height)?;
    let cfg = ctx.config(
        "explicit-check",
        &[
            ("disc", disc.to_string()),
            ("chi", chi.to_string()),
            ("x", x.to_string()),
            ("a1", a1.to_string()),
            ("a2", a2.to_string()),
            ("height", height.to_string()),
        ],
    );
    let out = ExplicitOut {
        meta: Meta::new(cfg, ctx.t0),
        lhs: rep.lhs,
        rhs: rep.rhs,
        residual: rep.residual,
        tail_estimate: rep.tail_estimate,
        detail: rep.clone(),
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)?;
    if !rep.count_ok {
        return Err(assertion(format!(
            "zero-count audit failed during the explicit check: {} zeros against main term {:.6}",
            rep.zero_count, rep.pieces.zero_sum
        )));
    }
    if rep.residual > rep.tail_estimate {
        return Err(assertion(format!(
            "explicit-formula residual {:.6e} exceeds its tail estimate {:.6e}",
            rep.residual, rep.tail_estimate
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- audit-h

#[derive(Serialize)]
struct AuditOut {
    meta: Meta,
    #[serde(flatten)]
    audit: linnik_core::lfunc::explicit::HypothesisAudit,
}

fn cmd_audit_h(ctx: &Ctx, disc: u64, c: f64, height: f64) -> Result<()> {
    let d = Discriminant::new(disc)?;
    let g = ctx.group(d)?;
    let table = CoefficientTable::build(&g, theta_coeff_length(disc))?;
    let audit = audit_hypothesis(&table, c, height)?;
    let cfg = ctx.config(
        "audit-h",
        &[
            ("disc", disc.to_string()),
            ("c", c.to_string()),
            ("height", height.to_string()),
        ],
    );
    let pass = audit.pass;
    let out = AuditOut {
        meta: Meta::new(cfg, ctx.t0),
        audit,
    };
    write_artifact(&ctx.out, &to_json_pretty(&out)?)?;
    if !pass {
        return Err(assertion(format!(
            "zero-free-region audit failed for D = {disc} at c = {c}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- selftest

fn cmd_selftest(ctx: &Ctx, seed: u64, n: usize) -> Result<()> {
    let mut lines: Vec<String> = Vec::new();
    for dn in [7u64, 23] {
        let d = Discriminant::new(dn)?;
        let g = enumerate_class_group(d)?;
        verify_orthogonality(&g)?;
        lines.push(format!("PASS orthogonality D={dn} (h={})", g.h));
        let t = CoefficientTable::build(&g, n.max(64))?;
        verify_recovery(&t, n.min(400))?;
        lines.push(format!("PASS coefficient-recovery D={dn}"));
        verify_hecke(&t, n)?;
        lines.push(format!("PASS hecke-relations D={dn} (dm <= {n})"));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(dn));
        let hi = (t.nmax / 2).max(2);
        for _ in 0..20 {
            let n1 = rng.gen_range(1..=hi);
            let n2 = rng.gen_range(1..=hi);
            character_pairing(&t, n1, n2)?;
        }
        lines.push(format!("PASS character-pairing D={dn} (20 random pairs)"));
    }

    let (y, z, nmax) = (1e4, 20u64, 100_000usize);
    let lo = build_weights(2, y, z, SieveSign::Lower)?;
    let hi = build_weights(2, y, z, SieveSign::Upper)?;
    let tl = theta_values(nmax, &lo);
    let th = theta_values(nmax, &hi);
    let lpf = primes::lpf_table(nmax);
    for nn in 1..=nmax {
        let ind = i32::from(nn == 1 || lpf[nn] as u64 >= z);
        if !(tl[nn] <= ind && ind <= th[nn]) {
            return Err(assertion(format!("sandwich violated at n = {nn}")));
        }
    }
    let ones = SiftableSequence::new(vec![1.0; nmax + 1], "ones")?;
    let s_minus = sifted_sum(&ones, &lo);
    let s_plus = sifted_sum(&ones, &hi);
    let s_exact = sift_exact(&ones, z);
    if !(s_minus <= s_exact && s_exact <= s_plus) {
        return Err(assertion("sifted-sum bracket violated on the ones sequence"));
    }
    lines.push(format!(
        "PASS sandwich kappa=2 y={y} z={z} (n <= {nmax}, bracket {s_minus:.3} <= {s_exact} <= {s_plus:.3})"
    ));

    let d7 = Discriminant::new(7)?;
    let g7 = enumerate_class_group(d7)?;
    let t7 = CoefficientTable::build(&g7, 10_000)?;
    let a = build_sequence(&t7, SequenceClass::Aggregate, 10_000, 0.5)?;
    let split = buchstab_split(&a.seq, 10, 10_000)?;
    lines.push(format!(
        "PASS buchstab D=7 x=10000 z=10 (residual {:.3e})",
        split.residual
    ));

    let cfg = ctx.config(
        "selftest",
        &[("seed", seed.to_string()), ("n", n.to_string())],
    );
    let meta = Meta::new(cfg, ctx.t0);
    let mut text = meta.comment_block();
    for l in &lines {
        text.push_str(l);
        text.push('\n');
    }
    text.push_str("selftest: all suites passed\n");
    write_artifact(&ctx.out, &text)
}

// ---------------------------------------------------------------- shared

fn fmt_name(json: bool) -> String {
    if json { "json" } else { "csv" }.to_string()
}

mod presets;

use std::process::ExitCode;

use carlitz_core::algebra::RatFunc;
use carlitz_core::identity::{verify_randomized, verify_remark5, verify_remark5_all, RandomizedConfig, Reading, Which};
use carlitz_core::linear::{check_ppower, comp_inverse, table, Family, LinearSeries};
use carlitz_core::powersum::{
    check_inverse_conjecture, closed_form, counterexamples, powersum_brute, powersum_fast, verify_thm1, verify_thm3,
    verify_thm4, verify_thm6, PowerSumQuery, Tables,
};
use carlitz_core::report::SCHEMA;
use carlitz_core::suite::{verify_all, Profile};
use carlitz_core::tower::CarlitzCtx;
use carlitz_core::zeta::{euler_carlitz_crosscheck, multizeta, verify_multizeta_identity, zeta, ZetaQuery};
use carlitz_core::{CoeffField, Error, FieldCtx, Result, VerifyReport};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "carlitz-lab", version, about = "Power sums, Carlitz constants and their identities over F_q(t)")]
struct Cli {
    /// Emit one JSON record per line.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Order of the constant field F_q.
    #[arg(long, default_value_t = 3)]
    q: u64,

    /// Defining polynomial of F_q over F_p, coefficients low to high (e.g. 2,2,1).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn ctx(&self) -> Result<CarlitzCtx> {
        let base = match &self.modulus {
            None => FieldCtx::of_order(self.q)?,
            Some(m) => {
                let (p, e) = carlitz_core::field::prime_power(self.q).ok_or(Error::NotPrime(self.q))?;
                FieldCtx::new(p as u32, e, Some(m.clone()))?
            }
        };
        Ok(CarlitzCtx::new(&base))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficient table h, a, H or alpha of a series.
    Coeffs {
        #[command(flatten)]
        field: FieldArgs,
        /// Series preset, e.g. carlitz-exp, carlitz-binomial:2, coeffs:t,1,t+1.
        #[arg(long, default_value = "carlitz-exp")]
        f: String,
        #[arg(long, default_value = "h")]
        family: String,
        /// Largest index.
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Compositional inverse of a series.
    Inverse {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "carlitz-exp")]
        f: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// S_d(k) (or S_{<d}(k) with --below); negative k means positive powers.
    Powersum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        below: bool,
        /// Enumerate monic polynomials instead of using the tables.
        #[arg(long)]
        brute: bool,
    },
    /// Closed form at index q^i - 1 for binom(z, q^d), next to the engine value.
    ClosedForm {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value = "h")]
        family: String,
    },
    /// Bernoulli-Carlitz number B_n with factorizations.
    Bernoulli {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
    },
    /// Carlitz factorial n!.
    Factorial {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
    },
    /// Carlitz-Goss zeta value as a Laurent series in 1/t.
    Zeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, default_value_t = 40)]
        prec: i64,
        /// Degree cutoff; required for negative s.
        #[arg(long)]
        d_max: Option<usize>,
    },
    /// Depth-two multizeta value.
    Multizeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s1: i64,
        #[arg(long)]
        s2: i64,
        #[arg(long, default_value_t = 40)]
        prec: i64,
    },
    /// Check an identity and report pass, fail or expected-fail.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value = "carlitz-exp")]
    f: String,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    s: usize,
    /// Extension degree m; instances live in F_{q^m}.
    #[arg(long, default_value_t = 8)]
    ext: u32,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Negate the right-hand side (harness self-test).
    #[arg(long)]
    corrupt: bool,
}

#[derive(Subcommand)]
enum Verify {
    /// Theorem 1 for h.
    Thm1 {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
    },
    /// Theorem 3 for H.
    Thm3 {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
    },
    /// Theorem 4 for a.
    Thm4 {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
    },
    /// Theorem 6 for alpha.
    Thm6 {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
    },
    /// Theorem 2 by random evaluation.
    Thm2 {
        #[command(flatten)]
        args: RandomArgs,
    },
    /// Theorem 5 by random evaluation.
    Thm5 {
        #[command(flatten)]
        args: RandomArgs,
        /// affine (default) or literal.
        #[arg(long, default_value = "affine")]
        reading: String,
    },
    /// Multinomial congruence of Remark 5; all admissible m when --m is omitted.
    Remark5 {
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<u64>>,
    },
    /// The multizeta identity for (n, k_1..k_s).
    Multizeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value_t = 40)]
        prec: i64,
    },
    /// (zeta(n) n!/B_n)^m = (zeta(m) m!/B_m)^n.
    EulerCarlitz {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 40)]
        prec: i64,
    },
    /// a_{q^k-1} - a_{q^{k-1}-1} = g_{k-1} for k up to --k-max (conjectural).
    Conjecture {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Factorization exponents of B_{q^k-1}.
    Bernoulli {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// p-th power relations inside one coefficient table.
    Ppower {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value = "h")]
        family: String,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// The documented counterexamples of the Remarks.
    Counterexamples,
    /// The full verification matrix.
    All {
        #[arg(long, default_value = "quick")]
        profile: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

struct Out {
    json: bool,
    failed: bool,
}

impl Out {
    fn record(&mut self, kind: &str, mut v: Value, text: String) {
        if self.json {
            if let Some(o) = v.as_object_mut() {
                o.insert("schema".into(), json!(SCHEMA));
                o.insert("kind".into(), json!(kind));
            }
            println!("{v}");
        } else {
            println!("{text}");
        }
    }

    fn report(&mut self, r: &VerifyReport) {
        if !r.is_ok() {
            self.failed = true;
        }
        if self.json {
            println!("{}", r.to_json());
            return;
        }
        let mut line = format!("{} {} {}", r.id, r.status.label(), r.params);
        if let Some(b) = r.extra.get("sz_bound_per_trial") {
            line.push_str(&format!(" sz_bound={b}"));
        }
        if let Some(c) = r.extra.get("agreeing_coefficients") {
            line.push_str(&format!(" agreeing={c}"));
        }
        if r.witness.is_some() || r.lhs.to_string().len() < 120 {
            line.push_str(&format!("\n  lhs = {}\n  rhs = {}", r.lhs, r.rhs));
        }
        println!("{line}");
    }
}

fn series(s: &SeriesArgs, max_index: usize) -> Result<presets::Series> {
    presets::parse(&s.field.ctx()?, &s.f, max_index)
}

fn qpow(q: u64, k: usize) -> usize {
    (q as usize).pow(k as u32)
}

fn tables<K: CoeffField>(f: &LinearSeries<K>, n: usize) -> Result<Tables<K>> {
    Tables::build(f, n)
}

fn coeffs_record<K: CoeffField>(f: &LinearSeries<K>, family: Family, n: usize) -> Result<(Value, String)> {
    let t = table(f, family, n)?;
    let k = f.field();
    let mut text = format!("{family} table of {} over {}, N = {}", f.kind_label(), k.descriptor(), t.bound());
    if t.is_degenerate() {
        text.push_str(" (degenerate: f_0 = 0)");
    }
    for (m, v) in t.values().iter().enumerate() {
        if !k.is_zero(v) {
            text.push_str(&format!("\n{family}_{m} = {}", k.format(v)));
        }
    }
    Ok((json!({ "series": f.to_json(), "table": t.to_json() }), text))
}

fn inverse_record<K: CoeffField>(f: &LinearSeries<K>, order: usize) -> Result<(Value, String)> {
    let g = comp_inverse(f, order)?;
    let k = f.field();
    let text = g.coeffs().iter().enumerate().map(|(i, c)| format!("g_{i} = {}", k.format(c))).collect::<Vec<_>>().join("\n");
    Ok((json!({ "series": f.to_json(), "inverse": g.to_json() }), text))
}

trait KindLabel {
    fn kind_label(&self) -> &'static str;
}

impl<K: CoeffField> KindLabel for LinearSeries<K> {
    fn kind_label(&self) -> &'static str {
        if self.is_polynomial() {
            "polynomial"
        } else {
            "truncated series"
        }
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<()> {
    match cli.cmd {
        Cmd::Coeffs { field, f, family, n } => {
            let family = Family::parse(&family)?;
            let s = presets::parse(&field.ctx()?, &f, n)?;
            let (v, text) = on_series!(s, f => coeffs_record(&f, family, n))?;
            out.record("coeffs", v, text);
        }
        Cmd::Inverse { field, f, order } => {
            // an index hint that makes the automatic truncation order reach `order`
            let hint = qpow(field.q, order + 1) - 2;
            let s = presets::parse(&field.ctx()?, &f, hint)?;
            let (v, text) = on_series!(s, f => inverse_record(&f, order))?;
            out.record("inverse", v, text);
        }
        Cmd::Powersum { field, d, k, below, brute } => {
            let ctx = field.ctx()?;
            let query = if below { PowerSumQuery::below(d, k) } else { PowerSumQuery::exact(d, k) };
            let (value, fallback): (RatFunc, Option<bool>) = if brute {
                (powersum_brute(&ctx, query)?, None)
            } else {
                let r = powersum_fast(&ctx, query)?;
                (r.value, Some(r.fallback))
            };
            let name = if below { "S_<" } else { "S_" };
            let text = format!("{name}{d}({k}) = {value}");
            let v = json!({ "q": ctx.q(), "d": d, "k": k, "scope": if below { "below" } else { "exact" },
                "method": if brute { "brute" } else { "fast" }, "fallback": fallback, "value": value.to_json() });
            out.record("powersum", v, text);
        }
        Cmd::ClosedForm { field, d, i, family } => {
            let ctx = field.ctx()?;
            let family = Family::parse(&family)?;
            let closed = closed_form(&ctx, d, i, family)?;
            let idx = qpow(ctx.q(), i) - 1;
            let engine = table(&ctx.carlitz_binomial(d)?, family, idx)?.get(idx)?.clone();
            let agree = closed == engine;
            let text = format!("{family}_{idx} = {closed} (engine {})", if agree { "agrees" } else { "DIFFERS" });
            let v = json!({ "q": ctx.q(), "d": d, "i": i, "family": family.label(), "index": idx,
                "closed": closed.to_json(), "engine": engine.to_json(), "agrees": agree });
            out.failed |= !agree;
            out.record("closed-form", v, text);
        }
        Cmd::Bernoulli { field, n } => {
            let ctx = field.ctx()?;
            let e = ctx.bernoulli(n, n)?;
            out.record("bernoulli", e.to_json(ctx.base()), format!("B_{n} = {}", e.value));
        }
        Cmd::Factorial { field, n } => {
            let ctx = field.ctx()?;
            let p = ctx.factorial(n);
            out.record("factorial", json!({ "q": ctx.q(), "n": n, "value": p.to_json() }), format!("{n}! = {p}"));
        }
        Cmd::Zeta { field, s, prec, d_max } => {
            let ctx = field.ctx()?;
            let z = zeta(&ctx, &ZetaQuery { s, prec, d_max })?;
            let text = format!("zeta({s}) = {}{}", z.series, if z.partial { "  [partial sum]" } else { "" });
            out.record("zeta", z.to_json(), text);
        }
        Cmd::Multizeta { field, s1, s2, prec } => {
            let ctx = field.ctx()?;
            let z = multizeta(&ctx, s1, s2, prec)?;
            out.record("multizeta", z.to_json(), format!("zeta({s1},{s2}) = {}", z.series));
        }
        Cmd::Verify { what } => verify(what, out)?,
    }
    Ok(())
}

fn verify(what: Verify, out: &mut Out) -> Result<()> {
    match what {
        Verify::Thm1 { series: sa, k, ks } => {
            let q = sa.field.q;
            let need = ks.iter().map(|&kj| qpow(q, k).saturating_sub(qpow(q, kj))).sum();
            let r = on_series!(series(&sa, need)?, f => verify_thm1(&tables(&f, need)?, k, &ks))?;
            out.report(&r);
        }
        Verify::Thm3 { series: sa, ks } => {
            let q = sa.field.q;
            let need = ks.iter().map(|&k| qpow(q, k)).sum::<usize>();
            let r = on_series!(series(&sa, need)?, f => verify_thm3(&tables(&f, need)?, &ks))?;
            out.report(&r);
        }
        Verify::Thm4 { series: sa, k, ks } => {
            let need = qpow(sa.field.q, k);
            let r = on_series!(series(&sa, need)?, f => verify_thm4(&tables(&f, need)?, k, &ks))?;
            out.report(&r);
        }
        Verify::Thm6 { series: sa, ks } => {
            let q = sa.field.q;
            let need = ks.iter().map(|&k| qpow(q, k)).sum::<usize>();
            let r = on_series!(series(&sa, need)?, f => verify_thm6(&tables(&f, need)?, &ks))?;
            out.report(&r);
        }
        Verify::Thm2 { args } => out.report(&verify_randomized(&randomized(Which::Thm2, &args))?),
        Verify::Thm5 { args, reading } => {
            let mut cfg = randomized(Which::Thm5, &args);
            cfg.reading = match reading.as_str() {
                "affine" => Reading::Affine,
                "literal" => Reading::Literal,
                other => return Err(Error::Parse(format!("reading must be affine or literal, got {other:?}"))),
            };
            out.report(&verify_randomized(&cfg)?);
        }
        Verify::Remark5 { q, d, k, m } => {
            let reports = match m {
                Some(m) => vec![verify_remark5(q, d, &k, &m)?],
                None => verify_remark5_all(q, d, &k)?,
            };
            reports.iter().for_each(|r| out.report(r));
        }
        Verify::Multizeta { field, n, k, prec } => out.report(&verify_multizeta_identity(&field.ctx()?, n, &k, prec)?),
        Verify::EulerCarlitz { field, n, m, prec } => out.report(&euler_carlitz_crosscheck(&field.ctx()?, n, m, prec)?),
        Verify::Conjecture { series: sa, k_max } => {
            let need = qpow(sa.field.q, k_max);
            let r = on_series!(series(&sa, need)?, f => check_inverse_conjecture(&tables(&f, need)?, k_max))?;
            out.report(&r);
        }
        Verify::Bernoulli { field, k } => out.report(&field.ctx()?.verify_bernoulli_factors(k)?),
        Verify::Ppower { series: sa, family, n } => {
            let family = Family::parse(&family)?;
            let r = on_series!(series(&sa, n)?, f => table(&f, family, n).map(|t| check_ppower(&t)))?;
            out.report(&r);
        }
        Verify::Counterexamples => counterexamples()?.iter().for_each(|r| out.report(r)),
        Verify::All { profile, seed } => {
            let p = Profile::parse(&profile)
                .ok_or_else(|| Error::Parse(format!("profile must be quick or full, got {profile:?}")))?;
            let summary = verify_all(p, seed)?;
            out.failed |= !summary.is_ok();
            if out.json {
                println!("{}", summary.to_json());
            } else {
                for (id, counts) in &summary.counts {
                    let c: Vec<String> = counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("{id}: {}", c.join(" "));
                }
                for r in &summary.failures {
                    out.report(r);
                }
                println!("{}", if summary.is_ok() { "ok" } else { "FAILED" });
            }
        }
    }
    Ok(())
}

fn randomized(which: Which, a: &RandomArgs) -> RandomizedConfig {
    let mut cfg = RandomizedConfig::new(which, a.q, a.d, a.s, a.ext, a.trials, a.seed);
    cfg.corrupt_sign = a.corrupt;
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { json: cli.json, failed: false };
    match run(cli, &mut out) {
        Ok(()) if out.failed => ExitCode::from(1),
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

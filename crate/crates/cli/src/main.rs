//! `cosetfusion`: Kac tables, fusion rings, characters and the verification
//! suites from the command line.
//!
//! Exit status: 0 when every requested check passes, 1 when a verification
//! fails, 2 for usage or input errors (one line on stderr).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coset_fusion::characters::{minimal_character, verify_e8_decomposition_with, SumRoute};
use coset_fusion::commutant::{
    check_product_structure, check_restrictions, derive_commutant_ring, derived_dimensions,
    dimension_homomorphism_error, validate, BranchingTable, DIMENSION_TOL,
};
use coset_fusion::fusion::{check_axioms, minimal_model_fusion, FusionRing, FusionRingJson};
use coset_fusion::kac::{MinimalModel, PrimaryField};
use coset_fusion::modular::s_matrix;
use coset_fusion::qseries::Exponent;
use coset_fusion::ratio;
use coset_fusion::threec::{check_m_product_rules, ThreeCDataset, U_INDEXING_NOTE};
use serde_json::json;

/// Largest `m` scanned when a model is given by its central charge.
const MAX_M_SEARCH: u32 = 500;

#[derive(Parser)]
#[command(
    name = "cosetfusion",
    version,
    about = "Minimal-model fusion, characters and commutant fusion rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the primaries of a minimal model with c, h and quantum dimension.
    Kac {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print a fusion table, or a single product with --a and --b.
    Fusion {
        #[command(flatten)]
        source: RingSource,
        /// First factor (`r.s` for a minimal model, a module label for an instance).
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the character of L(c, h) as "exponent<TAB>coefficient" lines.
    Chars {
        /// Central charge as num/den.
        #[arg(long)]
        c: String,
        /// Conformal weight as num/den.
        #[arg(long)]
        h: String,
        /// Integer steps past the leading exponent, inclusive.
        #[arg(long, env = "COSET_FUSION_ORDER", default_value_t = 10)]
        order: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print quantum dimensions.
    Dims {
        #[command(flatten)]
        source: RingSource,
        #[arg(long)]
        json: bool,
    },
    /// Check the E8 character identity through the given order.
    VerifyDecomp {
        /// Integer steps past the leading exponent -1/3, inclusive.
        #[arg(long, env = "COSET_FUSION_ORDER", default_value_t = 10)]
        order: u32,
        /// `tuples` sums every tuple separately; `chain` contracts slot by slot.
        #[arg(long, default_value = "tuples")]
        route: String,
    },
    /// Validate a branching table and derive the commutant fusion ring.
    VerifyFactorization(FactorizationArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RingSource {
    /// Minimal model index.
    #[arg(long)]
    m: Option<u32>,
    /// Bundled instance (only `3c`).
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args)]
struct FactorizationArgs {
    /// Bundled instance (only `3c`).
    #[arg(long, conflicts_with_all = ["table", "big", "sub_m"])]
    instance: Option<String>,
    /// Branching table JSON.
    #[arg(long, requires_all = ["big", "sub_m"])]
    table: Option<PathBuf>,
    /// Fusion ring JSON of the big algebra.
    #[arg(long)]
    big: Option<PathBuf>,
    /// Minimal model index of the subalgebra.
    #[arg(long)]
    sub_m: Option<u32>,
    #[arg(long)]
    json: bool,
}

/// A failed run: `Usage` exits 2, `Failed` exits 1.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<coset_fusion::Error> for Failure {
    fn from(e: coset_fusion::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<String, Failure>;

fn model(m: u32) -> Result<MinimalModel, Failure> {
    Ok(MinimalModel::new(m)?)
}

fn three_c(name: &str) -> Result<ThreeCDataset, Failure> {
    if name.eq_ignore_ascii_case("3c") {
        Ok(ThreeCDataset::bundled()?)
    } else {
        Err(Failure::Usage(format!("unknown instance '{name}' (available: 3c)")))
    }
}

fn rational(s: &str) -> Result<coset_fusion::BigRational, Failure> {
    ratio::parse(s).map_err(|_| Failure::Usage(format!("malformed rational '{s}' (expected num/den)")))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn kac(m: u32, json: bool) -> Run {
    let md = model(m)?;
    let data = s_matrix(md)?;
    let c = ratio::format(&md.central_charge());
    if json {
        let rows: Vec<_> = md
            .primaries()
            .iter()
            .map(|f| {
                json!({
                    "label": f.to_string(),
                    "r": f.r(),
                    "s": f.s(),
                    "h": ratio::format(&f.conformal_weight()),
                    "qdim": data.qdim_of(&f.to_string()).unwrap_or(f64::NAN),
                })
            })
            .collect();
        return Ok(pretty(&json!({ "m": m, "c": c, "primaries": rows })));
    }
    let mut out = format!("{md}  c = {c}  rank = {}\n", md.rank());
    out.push_str("label\tr\ts\th\tqdim\n");
    for f in md.primaries() {
        let d = data.qdim_of(&f.to_string())?;
        writeln!(
            out,
            "{f}\t{}\t{}\t{}\t{d:.12}",
            f.r(),
            f.s(),
            ratio::format(&f.conformal_weight())
        )
        .unwrap();
    }
    Ok(out)
}

/// A minimal-model ring accepts both `r.s` and `m:r.s`.
fn ring_label(md: Option<MinimalModel>, raw: &str) -> Result<String, Failure> {
    match md {
        Some(md) if !raw.contains(':') => Ok(PrimaryField::parse_short(md, raw)?.to_string()),
        Some(md) => {
            let f: PrimaryField = raw.parse()?;
            if f.model() != md {
                return Err(Failure::Usage(format!("label {raw} is not in model m={}", md.m())));
            }
            Ok(f.to_string())
        }
        None => Ok(raw.to_string()),
    }
}

fn ring_from(source: &RingSource) -> Result<(FusionRing, Option<MinimalModel>, bool), Failure> {
    match (&source.m, &source.instance) {
        (Some(m), _) => {
            let md = model(*m)?;
            Ok((minimal_model_fusion(md), Some(md), false))
        }
        (None, Some(name)) => Ok((three_c(name)?.m_ring()?, None, true)),
        (None, None) => Err(Failure::Usage("give --m or --instance".into())),
    }
}

fn fusion(source: &RingSource, a: Option<&str>, b: Option<&str>, json: bool) -> Run {
    let (ring, md, instance) = ring_from(source)?;
    let mut out = String::new();
    if let (Some(a), Some(b)) = (a, b) {
        let (a, b) = (ring_label(md, a)?, ring_label(md, b)?);
        let product = ring.fuse(&[&a], &[&b])?;
        if json {
            let terms: Vec<_> = product.iter().map(|(l, n)| json!({ "label": l, "n": n })).collect();
            return Ok(pretty(&json!({ "a": a, "b": b, "product": terms })));
        }
        for (l, n) in product {
            writeln!(out, "{l}\t{n}").unwrap();
        }
        return Ok(out);
    }
    if json {
        return Ok(pretty(&serde_json::to_value(ring.to_json()).expect("ring serializes")));
    }
    if instance {
        writeln!(out, "note: {U_INDEXING_NOTE}\n").unwrap();
    }
    out.push_str(&ring.markdown_table());
    Ok(out)
}

fn chars(c: &str, h: &str, order: u32, json: bool) -> Run {
    let c = rational(c)?;
    let h = rational(h)?;
    let md = MinimalModel::from_central_charge(&c, MAX_M_SEARCH).ok_or_else(|| {
        Failure::Usage(format!(
            "{} is not a unitary minimal-model central charge",
            ratio::format(&c)
        ))
    })?;
    let field = md
        .field_with_weight(&h)
        .ok_or_else(|| Failure::Usage(format!("no primary of weight {} in {md}", ratio::format(&h))))?;
    let depth = Exponent::from_integer(i64::from(order) + 1);
    let series = minimal_character(&field, depth)?;
    if json {
        let terms: Vec<_> = series
            .terms()
            .map(|(e, k)| json!([ratio::format_small(e), k.to_string()]))
            .collect();
        return Ok(pretty(&json!({
            "field": field.to_string(),
            "leading": ratio::format(&field.leading_exponent()),
            "order": ratio::format_small(series.order()),
            "terms": terms,
        })));
    }
    Ok(series.to_string())
}

fn dims(source: &RingSource, json: bool) -> Run {
    let rows: Vec<(String, String, f64)> = match (&source.m, &source.instance) {
        (Some(m), _) => {
            let data = s_matrix(model(*m)?)?;
            data.fields()
                .iter()
                .zip(data.qdims())
                .map(|(f, d)| (f.to_string(), ratio::format(&f.conformal_weight()), d))
                .collect()
        }
        (None, Some(name)) => {
            let ds = three_c(name)?;
            let u = ds.u_ring()?;
            let ising = ds.ising_data()?;
            let ring = ds.m_ring()?;
            let d = derived_dimensions(ds.table(), &ring, &u, &ds.u_qdims()?, ising.labels(), &ising.qdims())?;
            let weights: std::collections::BTreeMap<String, _> = ds.m_lowest_weights()?.into_iter().collect();
            ring.labels()
                .iter()
                .zip(d)
                .map(|(l, d)| (l.clone(), ratio::format(&weights[l]), d))
                .collect()
        }
        (None, None) => return Err(Failure::Usage("give --m or --instance".into())),
    };
    if json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(l, h, d)| json!({ "label": l, "h": h, "qdim": d }))
            .collect();
        return Ok(pretty(&json!(rows)));
    }
    let mut out = String::from("label\th\tqdim\n");
    for (l, h, d) in &rows {
        writeln!(out, "{l}\t{h}\t{d:.12}").unwrap();
    }
    Ok(out)
}

fn verify_decomp(order: u32, route: &str) -> Run {
    let route = match route {
        "tuples" => SumRoute::Tuples,
        "chain" => SumRoute::Chain,
        other => return Err(Failure::Usage(format!("unknown route '{other}' (tuples or chain)"))),
    };
    let data = ThreeCDataset::bundled()?;
    let report = verify_e8_decomposition_with(&data.u_character_specs()?, &data.u_central_charge(), order, route)?;
    let mut out = format!(
        "leading exponent {}; {} tuples; central charges balance: {}\n",
        ratio::format_small(report.leading_exponent),
        report.tuple_count,
        report.central_charge_balanced
    );
    match &report.first_mismatch {
        None if report.passed() => {
            writeln!(
                out,
                "agreement through q^{}",
                ratio::format_small(report.lhs.order() - 1)
            )
            .unwrap();
            out.push_str("PASS\n");
            Ok(out)
        }
        None => Err(Failure::Failed(out + "FAIL")),
        Some((e, l, r)) => {
            writeln!(
                out,
                "first divergence at q^{}: lhs {l}, rhs {r}",
                ratio::format_small(*e)
            )
            .unwrap();
            Err(Failure::Failed(out + "FAIL"))
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify_factorization(args: &FactorizationArgs) -> Run {
    let (table, big, sub_model, instance) = match (&args.instance, &args.table, &args.big, args.sub_m) {
        (Some(name), ..) => {
            let ds = three_c(name)?;
            (ds.table().clone(), ds.u_ring()?, model(1)?, true)
        }
        (None, Some(t), Some(b), Some(m)) => {
            let table = BranchingTable::from_json_str(&read(t)?)?;
            let json: FusionRingJson =
                serde_json::from_str(&read(b)?).map_err(|e| Failure::Usage(format!("{}: {e}", b.display())))?;
            (table, FusionRing::from_json(&json)?, model(m)?, false)
        }
        _ => {
            return Err(Failure::Usage(
                "give --instance, or --table with --big and --sub-m".into(),
            ))
        }
    };
    let sub_data = s_matrix(sub_model)?;
    let sub_ring = minimal_model_fusion(sub_model);

    let mut checks: Vec<(&str, bool, String)> = Vec::new();
    let report = validate(&table, &big, &sub_data);
    checks.push(("branching table", report.passes(), report.findings().join("; ")));
    let derived = if report.passes() {
        match derive_commutant_ring(&table, &big, &sub_ring) {
            Ok(r) => Some(r),
            Err(e) => {
                checks.push(("derivation", false, e.to_string()));
                None
            }
        }
    } else {
        None
    };
    if let Some(ring) = &derived {
        let ax = check_axioms(ring);
        checks.push((
            "ring axioms",
            ax.is_empty(),
            ax.violations
                .iter()
                .map(ToString::to_string)
                .take(3)
                .collect::<Vec<_>>()
                .join("; "),
        ));
        let ps = check_product_structure(&table, ring);
        checks.push((
            "product structure",
            ps.passes(),
            format!("{} failures", ps.failures.len()),
        ));
        let rs = check_restrictions(&table, ring, &big, &sub_ring);
        checks.push((
            "restrictions",
            rs.passes(),
            format!(
                "subalgebra embeds: {}, big algebra embeds: {}",
                rs.sub_ring_embeds, rs.big_ring_embeds
            ),
        ));
        let dims = derived_dimensions(
            &table,
            ring,
            &big,
            &big.frobenius_perron_dimensions(),
            sub_data.labels(),
            &sub_data.qdims(),
        )?;
        let defect = dimension_homomorphism_error(ring, &dims);
        checks.push((
            "dimension homomorphism",
            defect <= DIMENSION_TOL,
            format!("max defect {defect:.2e}"),
        ));
        if instance {
            let bad = check_m_product_rules(ring)?;
            checks.push((
                "rule families",
                bad.is_empty(),
                format!("{} mismatched products", bad.len()),
            ));
        }
    }
    let passed = checks.iter().all(|(_, ok, _)| *ok);

    let out = if args.json {
        let rows: Vec<_> = checks
            .iter()
            .map(|(name, ok, detail)| json!({ "check": name, "pass": ok, "detail": detail }))
            .collect();
        let ring = derived
            .as_ref()
            .map(|r| serde_json::to_value(r.to_json()).expect("ring serializes"));
        pretty(&json!({ "pass": passed, "checks": rows, "ring": ring }))
    } else {
        let mut out = String::new();
        if instance {
            writeln!(out, "note: {U_INDEXING_NOTE}").unwrap();
        }
        for (name, ok, detail) in &checks {
            let status = if *ok { "ok" } else { "FAIL" };
            if detail.is_empty() {
                writeln!(out, "{status}\t{name}").unwrap();
            } else {
                writeln!(out, "{status}\t{name}\t{detail}").unwrap();
            }
        }
        if let Some(ring) = &derived {
            writeln!(out, "derived ring: {} labels, unit {}", ring.rank(), ring.unit_label()).unwrap();
        }
        out.push_str(if passed { "PASS\n" } else { "FAIL\n" });
        out
    };
    if passed {
        Ok(out)
    } else {
        Err(Failure::Failed(out))
    }
}

fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Kac { m, json } => kac(*m, *json),
        Command::Fusion { source, a, b, json } => fusion(source, a.as_deref(), b.as_deref(), *json),
        Command::Chars { c, h, order, json } => chars(c, h, *order, *json),
        Command::Dims { source, json } => dims(source, *json),
        Command::VerifyDecomp { order, route } => verify_decomp(*order, route),
        Command::VerifyFactorization(args) => verify_factorization(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Failed(out)) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

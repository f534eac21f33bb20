//! quadchi: exact quadratic Euler characteristics of (weighted) projective
//! hypersurfaces, Scheja-Storch forms, GW invariants and conductor checks.
//!
//! Exit codes: 0 success, 1 user error (parse/validation), 2 mathematical
//! precondition violated (singular input, degenerate form, bad
//! characteristic), 3 internal invariant breach.

use std::collections::BTreeMap;
use std::process::ExitCode;

use quadchi_core::conductor::{conductor_check, ConeFamily, CorpusEntry, Dim0Family};
use quadchi_core::error::Error;
use quadchi_core::gw::{
    diagonalize, gw_equal, gw_to_json, invariants, parse_field_id, GWClass,
};
use quadchi_core::hyper::HypersurfaceData;
use quadchi_core::jacobian::SchejaStorchStrategy;
use quadchi_core::parse::{parse_poly, parse_scalar};
use quadchi_core::poly::WeightedRing;
use quadchi_core::scalars::{FieldId, Scalar};

const USAGE: &str = "usage: quadchi <command> [flags]

commands:
  jacobian     Hilbert function, socle degree and Scheja-Storch generator
  gram         Gram matrix of B_Jac on chosen degrees
  gwform       GW class of B_Jac (full or primitive)
  chi          quadratic Euler characteristic of a smooth hypersurface
  chi-c-cone   compactly-supported chi of the projective cone
  conductor    conductor formula check (single family or --corpus file)
  trace-dim0   dimension-0 trace form and conductor identity
  gw           GW utilities: diag | eq | sp | inv

common flags:
  --field {Q|Fp:<p>|Qt}   coefficient field (default Q)
  --vars a,b,c            variable names
  --weights 1,1,2         weights (default all 1)
  --poly \"...\"            defining polynomial
  --json                  machine-readable output
  --strategy {lowest|highest|hessian}
  --degree-set 0,3        degrees for gram
  --mode {full|primitive} and --dim <n> for gwform
  --e, --a                dimension-0 parameters
  --corpus <file>         one JSON object per line {field, vars, weights, poly}
  --entries \"a, b, c\"     diagonal entries for gw utilities
  --hyp <n>               hyperbolic count for gw utilities";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotSmooth(_)
        | Error::NotSmoothGenericFiber
        | Error::NotFiniteDimensional
        | Error::NotHomogeneous
        | Error::BadCharacteristic { .. }
        | Error::DegenerateForm
        | Error::ZeroSocleGenerator
        | Error::CharacteristicTwo
        | Error::FactorizationBoundExceeded(_) => 2,
        Error::OddRankPrimitive(_) => 3,
        _ => 1,
    }
}

struct Flags {
    values: BTreeMap<String, String>,
    json: bool,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, Error> {
        let mut values = BTreeMap::new();
        let mut json = false;
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if a == "--json" {
                json = true;
                i += 1;
                continue;
            }
            if let Some(key) = a.strip_prefix("--") {
                let value = args
                    .get(i + 1)
                    .ok_or_else(|| Error::InvalidInput(format!("flag --{key} needs a value")))?;
                values.insert(key.to_string(), value.clone());
                i += 2;
            } else {
                return Err(Error::InvalidInput(format!("unexpected argument `{a}`")));
            }
        }
        Ok(Flags { values, json })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, Error> {
        self.get(key).ok_or_else(|| Error::InvalidInput(format!("missing --{key}")))
    }

    fn field(&self) -> Result<FieldId, Error> {
        parse_field_id(self.get("field").unwrap_or("Q"))
    }

    fn ring(&self) -> Result<WeightedRing, Error> {
        let vars: Vec<String> =
            self.require("vars")?.split(',').map(|s| s.trim().to_string()).collect();
        let weights: Vec<u32> = match self.get("weights") {
            Some(w) => w
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad weight `{s}`")))
                })
                .collect::<Result<_, _>>()?,
            None => vec![1; vars.len()],
        };
        WeightedRing::new(self.field()?, vars, weights)
    }

    fn poly(&self) -> Result<quadchi_core::poly::Poly, Error> {
        parse_poly(self.require("poly")?, &self.ring()?)
    }

    fn strategy(&self) -> Result<SchejaStorchStrategy, Error> {
        match self.get("strategy").unwrap_or("lowest") {
            "lowest" => Ok(SchejaStorchStrategy::LowestVar),
            "highest" => Ok(SchejaStorchStrategy::HighestVar),
            "hessian" => Ok(SchejaStorchStrategy::Hessian),
            other => Err(Error::InvalidInput(format!("unknown strategy `{other}`"))),
        }
    }
}

fn run(args: &[String]) -> Result<String, Error> {
    let Some(command) = args.first() else {
        return Err(Error::InvalidInput(USAGE.to_string()));
    };
    match command.as_str() {
        "jacobian" => cmd_jacobian(&Flags::parse(&args[1..])?),
        "gram" => cmd_gram(&Flags::parse(&args[1..])?),
        "gwform" => cmd_gwform(&Flags::parse(&args[1..])?),
        "chi" => cmd_chi(&Flags::parse(&args[1..])?, false),
        "chi-c-cone" => cmd_chi(&Flags::parse(&args[1..])?, true),
        "conductor" => cmd_conductor(&Flags::parse(&args[1..])?),
        "trace-dim0" => cmd_trace_dim0(&Flags::parse(&args[1..])?),
        "gw" => {
            let Some(sub) = args.get(1) else {
                return Err(Error::InvalidInput(
                    "gw needs a subcommand: diag | eq | sp | inv".into(),
                ));
            };
            let flags = Flags::parse(&args[2..])?;
            match sub.as_str() {
                "diag" => cmd_gw_diag(&flags),
                "eq" => cmd_gw_eq(&flags),
                "sp" => cmd_gw_sp(&flags),
                "inv" => cmd_gw_inv(&flags),
                other => Err(Error::InvalidInput(format!("unknown gw subcommand `{other}`"))),
            }
        }
        "help" | "--help" | "-h" => Ok(USAGE.to_string()),
        other => Err(Error::InvalidInput(format!("unknown command `{other}`\n\n{USAGE}"))),
    }
}

fn cmd_jacobian(flags: &Flags) -> Result<String, Error> {
    let f = flags.poly()?;
    let j = quadchi_core::jacobian::JacobianRing::build(&f)?;
    if flags.json {
        return Ok(serde_json::to_string_pretty(&j.to_json()?).unwrap());
    }
    let mut out = String::new();
    out.push_str(&format!("polynomial       {f}\n"));
    out.push_str(&format!("degree           {}\n", j.degree()));
    out.push_str(&format!("socle degree     {}\n", j.socle_degree()));
    out.push_str(&format!("smooth quotient  {}\n", j.is_smooth_quotient()));
    out.push_str(&format!("hilbert function {:?}\n", j.hilbert_function(j.socle_degree())));
    out.push_str(&format!("total dimension  {}\n", j.total_dimension()));
    let e = j.scheja_storch_element(flags.strategy()?)?;
    out.push_str(&format!(
        "socle generator  {} * {}",
        e.coefficient,
        quadchi_core::poly::Poly::from_term(
            j.ring(),
            e.monomial.clone(),
            Scalar::one(j.ring().field())
        )
    ));
    Ok(out)
}

fn cmd_gram(flags: &Flags) -> Result<String, Error> {
    let f = flags.poly()?;
    let j = quadchi_core::jacobian::JacobianRing::build(&f)?;
    let degrees: Vec<i64> = flags
        .require("degree-set")?
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad degree `{s}`"))))
        .collect::<Result<_, _>>()?;
    let gram = j.gram_matrix(&degrees)?;
    if flags.json {
        let rows: Vec<Vec<String>> =
            gram.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        return Ok(serde_json::to_string_pretty(&serde_json::json!({
            "degrees": degrees,
            "gram": rows,
        }))
        .unwrap());
    }
    let mut out = String::new();
    for row in &gram {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out.pop();
    Ok(out)
}

fn cmd_gwform(flags: &Flags) -> Result<String, Error> {
    let f = flags.poly()?;
    let j = quadchi_core::jacobian::JacobianRing::build(&f)?;
    let class = match flags.get("mode").unwrap_or("full") {
        "full" => j.jacobian_form_full()?,
        "primitive" => {
            let n: i64 = flags
                .require("dim")?
                .parse()
                .map_err(|_| Error::InvalidInput("bad --dim".into()))?;
            j.jacobian_form_primitive(n)?
        }
        other => return Err(Error::InvalidInput(format!("unknown mode `{other}`"))),
    };
    render_class(&class, flags.json)
}

fn cmd_chi(flags: &Flags, cone: bool) -> Result<String, Error> {
    let f = flags.poly()?;
    let h = HypersurfaceData::new(&f)?;
    for w in h.warnings() {
        eprintln!("warning: {w}");
    }
    if flags.json && !cone {
        return Ok(serde_json::to_string_pretty(&h.report_json()?).unwrap());
    }
    let class = if cone { h.chi_c_cone()? } else { h.chi_smooth()? };
    render_class(&class, flags.json)
}

fn cmd_conductor(flags: &Flags) -> Result<String, Error> {
    if let Some(path) = flags.get("corpus") {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
        let entries: Vec<CorpusEntry> = raw
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(CorpusEntry::parse_line)
            .collect::<Result<_, _>>()?;
        // families are independent pure computations; run them in parallel
        // and join in input order so the output stays deterministic
        let reports: Vec<Result<quadchi_core::conductor::ConductorReport, Error>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = entries
                    .iter()
                    .map(|entry| scope.spawn(move || conductor_check(&entry.family()?)))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("family worker")).collect()
            });
        let mut lines = Vec::new();
        let mut all_equal = true;
        for (entry, report) in entries.iter().zip(reports) {
            let report = report?;
            all_equal &= report.equal && report.rank_identity;
            if flags.json {
                lines.push(serde_json::to_string(&report.to_json()?).unwrap());
            } else {
                lines.push(format!(
                    "{:55} equal={} rank={} rank_identity={} [{} ms]",
                    entry.poly,
                    report.equal,
                    report.lhs.rank(),
                    report.rank_identity,
                    report.elapsed_ms
                ));
            }
        }
        if !all_equal {
            lines.push("corpus: FAILURES PRESENT".into());
        }
        return Ok(lines.join("\n"));
    }
    let f = flags.poly()?;
    let fam = ConeFamily::new(&f)?;
    let report = conductor_check(&fam)?;
    if flags.json {
        return Ok(serde_json::to_string_pretty(&report.to_json()?).unwrap());
    }
    let mut out = String::new();
    out.push_str(&format!("family           F - t*w^{} for F = {f}\n", fam.degree()));
    out.push_str(&format!("fiber dimension  {}\n", fam.fiber_dim()));
    out.push_str(&format!("lhs (sp - cone)  {}\n", report.lhs));
    out.push_str(&format!("rhs (closed)     {}\n", report.rhs));
    out.push_str(&format!("equal            {}\n", report.equal));
    out.push_str(&format!(
        "rank identity    rnk = (-1)^{} * {} : {}",
        report.fiber_dim, report.milnor_dimension, report.rank_identity
    ));
    if report.partial_evidence {
        out.push_str(
            "\nnote: GW equality over F_p compares rank and discriminant only (partial evidence)",
        );
    }
    Ok(out)
}

fn cmd_trace_dim0(flags: &Flags) -> Result<String, Error> {
    let e: i64 = flags
        .require("e")?
        .parse()
        .map_err(|_| Error::InvalidInput("bad --e".into()))?;
    let a_scalar = parse_scalar(flags.get("a").unwrap_or("1"), FieldId::Rationals)?;
    let a = a_scalar
        .as_rational()
        .ok_or_else(|| Error::InvalidInput("bad --a".into()))?
        .clone();
    let fam = Dim0Family::new(e, a)?;
    let trace = fam.trace_form()?;
    let (lhs, rhs, equal) = fam.delta_check()?;
    if flags.json {
        return Ok(serde_json::to_string_pretty(&serde_json::json!({
            "e": fam.e,
            "a": fam.a.to_string(),
            "trace_form": gw_to_json(&trace)?,
            "delta_lhs": gw_to_json(&lhs)?,
            "delta_rhs": gw_to_json(&rhs)?,
            "equal": equal,
        }))
        .unwrap());
    }
    Ok(format!(
        "trace form  {trace}\nlhs         {lhs}\nrhs         {rhs}\nequal       {equal}"
    ))
}

fn parse_entries(flags: &Flags, key: &str, field: FieldId) -> Result<Vec<Scalar>, Error> {
    let raw = flags.require(key)?;
    if raw.trim().is_empty() {
        return Ok(vec![]);
    }
    raw.split(',').map(|s| parse_scalar(s.trim(), field)).collect()
}

fn class_from_flags(flags: &Flags, entries_key: &str, hyp_key: &str) -> Result<GWClass, Error> {
    let field = flags.field()?;
    let entries = parse_entries(flags, entries_key, field)?;
    let mut class = GWClass::from_diagonal(field, &entries)?;
    if let Some(h) = flags.get(hyp_key) {
        let h: i64 = h.parse().map_err(|_| Error::InvalidInput(format!("bad --{hyp_key}")))?;
        class = class.add(&GWClass::hyperbolic(field, h))?;
    }
    Ok(class)
}

fn cmd_gw_diag(flags: &Flags) -> Result<String, Error> {
    let field = flags.field()?;
    let raw = flags.require("gram")?;
    let gram: Vec<Vec<Scalar>> = raw
        .split(';')
        .map(|row| row.split(',').map(|s| parse_scalar(s.trim(), field)).collect())
        .collect::<Result<_, _>>()?;
    let (class, _, _) = diagonalize(field, &gram)?;
    render_class(&class, flags.json)
}

fn cmd_gw_eq(flags: &Flags) -> Result<String, Error> {
    let lhs = class_from_flags(flags, "lhs", "lhs-hyp")?;
    let rhs = class_from_flags(flags, "rhs", "rhs-hyp")?;
    let cert = gw_equal(&lhs, &rhs)?;
    if flags.json {
        let compared: Vec<serde_json::Value> = cert
            .compared
            .iter()
            .map(|c| {
                serde_json::json!({
                    "invariant": c.name, "lhs": c.lhs, "rhs": c.rhs, "equal": c.equal
                })
            })
            .collect();
        return Ok(serde_json::to_string_pretty(&serde_json::json!({
            "equal": cert.equal,
            "compared": compared,
        }))
        .unwrap());
    }
    let mut out = format!("equal: {}\n", cert.equal);
    for c in &cert.compared {
        out.push_str(&format!(
            "  {:20} lhs={} rhs={} {}\n",
            c.name,
            c.lhs,
            c.rhs,
            if c.equal { "ok" } else { "DIFFER" }
        ));
    }
    out.pop();
    Ok(out)
}

fn cmd_gw_sp(flags: &Flags) -> Result<String, Error> {
    let field = flags.field()?;
    if !field.is_function_field() {
        return Err(Error::UnsupportedField(field));
    }
    let entries = parse_entries(flags, "entries", field)?;
    let specialized: Vec<String> = entries
        .iter()
        .map(|c| {
            let (_, unit) = c.t_order_and_unit()?;
            Ok(unit.to_string())
        })
        .collect::<Result<_, Error>>()?;
    if flags.json {
        return Ok(serde_json::to_string(&specialized).unwrap());
    }
    Ok(specialized.join(", "))
}

fn cmd_gw_inv(flags: &Flags) -> Result<String, Error> {
    let class = class_from_flags(flags, "entries", "hyp")?;
    if flags.json {
        return Ok(serde_json::to_string_pretty(&gw_to_json(&class)?).unwrap());
    }
    let inv = invariants(&class)?;
    let mut out = format!("class      {class}\nrank       {}\n", inv.rank);
    if let Some(s) = inv.signature {
        out.push_str(&format!("signature  {s}\n"));
    }
    out.push_str(&format!("disc       {}\n", inv.signed_discriminant));
    if let Some(h) = &inv.hasse_positive {
        let cells: Vec<String> = h.iter().map(|(p, s)| format!("({p}: {s})")).collect();
        out.push_str(&format!("hasse      {}", cells.join(" ")));
    }
    Ok(out)
}

fn render_class(class: &GWClass, json: bool) -> Result<String, Error> {
    if json {
        Ok(serde_json::to_string_pretty(&gw_to_json(class)?).unwrap())
    } else {
        Ok(format!("{class}  (rank {})", class.rank()))
    }
}

//! Command-line surface. Exit codes: 0 success, 2 validation error,
//! 3 infeasible or absent result. Errors are reported as JSON on stderr.

use crate::constructions::{
    gen_five_segments, gen_four_one_intersection, gen_three_disjoint, gen_unbounded, lift_to_3d, random::is_pairwise_disjoint,
    search_shattered, ConstructionResult, SearchClass, SearchConstraints,
};
use crate::geom::{check_distinct_locations, format_rational, parse_rational, perturb, BodyKind, GeneralPosition};
use crate::hypergraph::{
    count_intersecting_pairs, enumerate_realized, hull_lemma_check, realize_witness, shattering_in, tangent_bound,
    turan_pairs, vc_dimension_in, HullCheck,
};
use crate::io::{parse_document, parse_hitting_instance, render_svg, serialize_family, DocumentError, RenderSpec};
use crate::nets::{epsilon_approximation, epsilon_net, WeightVector};
use crate::solver::{bg_hitting_set, exact_min_hitting_set};
use crate::{BodySet, Error, Family, Rational, VERSION};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ABSENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "convex-vc", version, about = "Halfplane containment hypergraphs over convex bodies")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Input file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Rational in (0, 1), as `p/q`.
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Perturb the input deterministically when it is not in general position.
    #[arg(long, global = true)]
    perturb: bool,
    /// Also compute an exact optimum of at most this size.
    #[arg(long = "exact-cap", global = true)]
    exact_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the realized subfamilies, one binary mask per line.
    Enumerate {
        #[arg(long)]
        json: bool,
    },
    /// VC-dimension with the smallest maximum shattered subset.
    Vc {
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Whether a subset (comma separated ids; default all) is shattered.
    Shatter {
        #[arg(long)]
        subset: Option<String>,
    },
    /// Emit a verified construction.
    Gen(GenArgs),
    /// Epsilon-net of the input family under uniform weights.
    Net {
        /// Dimension bound; inferred from the family class when absent.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Epsilon-approximation with its exact discrepancy.
    Approx,
    /// Hitting set for a segments/halfplanes instance.
    Hitset,
    /// SVG figure of the input family.
    Render {
        /// Draw a witness halfplane for every realized subfamily.
        #[arg(long)]
        witnesses: bool,
    },
    /// Tangent bound, Turan bound and hull lemma on the input family.
    CheckBounds,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// unbounded, three-disjoint, five-segments, four-one-intersection or search.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    /// Lift the family to space, body i at height i.
    #[arg(long)]
    lift: bool,
    /// Search class: segments, disjoint-convex or convex.
    #[arg(long)]
    class: Option<String>,
    #[arg(long = "max-intersections")]
    max_intersections: Option<usize>,
    #[arg(long)]
    symmetry: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
}

/// A failure with its exit code and machine-readable details.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    detail: Value,
}

impl Failure {
    fn validation(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            kind,
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn absent(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ABSENT,
            kind,
            message: message.into(),
            detail: Value::Null,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match &e {
            Error::Collinear(points) => Failure {
                code: EXIT_VALIDATION,
                kind: "general-position",
                message,
                detail: json!({ "collinear": points.iter().map(point_json).collect::<Vec<_>>() }),
            },
            Error::DuplicateVertex(p) => Failure {
                code: EXIT_VALIDATION,
                kind: "general-position",
                message,
                detail: json!({ "duplicate": point_json(p) }),
            },
            Error::InfeasibleInstance(i) => Failure {
                code: EXIT_ABSENT,
                kind: "infeasible",
                message,
                detail: json!({ "halfplane": i }),
            },
            Error::AttemptsExhausted(_) => Failure::absent("attempts-exhausted", message),
            _ => Failure::validation("validation", message),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Invalid(inner) => inner.into(),
            DocumentError::Syntax { line, column, .. } => Failure {
                code: EXIT_VALIDATION,
                kind: "syntax",
                message: e.to_string(),
                detail: json!({ "line": line, "column": column }),
            },
            DocumentError::Schema(_) => Failure::validation("schema", e.to_string()),
        }
    }
}

fn point_json(p: &crate::Rational2) -> Value {
    json!([format_rational(&p.x), format_rational(&p.y)])
}

fn mask_json(set: &BodySet) -> Value {
    json!({ "binary": set.to_binary(), "ids": set.to_vec() })
}

struct Context<'a> {
    global: &'a Global,
    input: Vec<u8>,
    digest: String,
}

impl Context<'_> {
    fn text(&self) -> Result<&str, Failure> {
        std::str::from_utf8(&self.input).map_err(|_| Failure::validation("syntax", "input is not UTF-8"))
    }

    fn family(&self) -> Result<(Family, bool), Failure> {
        let (family, _) = parse_document(self.text()?)?;
        let planar = family.projection();
        match check_distinct_locations(&planar) {
            GeneralPosition::Ok => Ok((planar, false)),
            _ if self.global.perturb => {
                let moved = perturb(&planar)?;
                check_distinct_locations(&moved).into_result()?;
                Ok((moved, true))
            }
            violation => Err(violation.into_result().expect_err("violation").into()),
        }
    }

    fn eps(&self) -> Result<Rational, Failure> {
        let text = self
            .global
            .eps
            .as_deref()
            .ok_or_else(|| Failure::validation("missing-eps", "--eps is required"))?;
        parse_rational(text).map_err(|e| Failure::validation("invalid-eps", format!("bad --eps {text:?}: {e}")))
    }

    /// Common fields of every JSON output.
    fn envelope(&self, command: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!("convex-vc"));
        m.insert("version".into(), json!(VERSION));
        m.insert("command".into(), json!(command));
        m.insert("input_sha256".into(), json!(self.digest));
        m
    }
}

fn json_text(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn certificate_json(r: &ConstructionResult, ctx: &Context) -> Value {
    let mut m = ctx.envelope("gen");
    m.insert("provenance".into(), json!(r.provenance));
    m.insert("shattered".into(), mask_json(&r.certificate.shattered));
    m.insert("fully_shattered".into(), json!(r.certificate.is_fully_shattered()));
    m.insert("edge_count".into(), json!(r.certificate.edge_count));
    m.insert("intersections".into(), json!(r.certificate.intersections));
    Value::Object(m)
}

fn run_gen(args: &GenArgs, ctx: &Context) -> Result<String, Failure> {
    let result = match args.name.as_str() {
        "unbounded" => gen_unbounded(args.n.unwrap_or(3))?,
        "three-disjoint" => gen_three_disjoint(),
        "five-segments" => gen_five_segments(),
        "four-one-intersection" => gen_four_one_intersection(),
        "search" => {
            let n = args.n.ok_or_else(|| Failure::validation("validation", "search needs --n"))?;
            let class_name = args.class.as_deref().unwrap_or("segments");
            let class = SearchClass::parse(class_name)
                .ok_or_else(|| Failure::validation("validation", format!("unknown class {class_name:?}")))?;
            let constraints = SearchConstraints {
                max_intersections: args.max_intersections,
                symmetry: args.symmetry,
            };
            search_shattered(n, class, constraints, ctx.global.seed, args.budget)
                .ok_or_else(|| Failure::absent("not-found", format!("no shattered family within budget {}", args.budget)))?
        }
        other => return Err(Failure::validation("validation", format!("unknown construction {other:?}"))),
    };
    let mut certificate = certificate_json(&result, ctx);
    let family = if args.lift {
        let (lifted, report) = lift_to_3d(&result)?;
        certificate["lift"] = json!({
            "pairwise_disjoint": report.pairwise_disjoint,
            "containment_agrees": report.containment_agrees,
            "realized_traces": report.realized_traces,
            "shattered_by_vertical": report.shattered_by_vertical,
        });
        lifted
    } else {
        result.family.clone()
    };
    Ok(serialize_family(&family, Some(certificate)))
}

/// 5 for segments, 3 for pairwise disjoint bodies, otherwise `n`.
fn default_dimension(family: &Family) -> usize {
    if family.bodies().iter().all(|b| b.kind() == BodyKind::Segment) {
        5
    } else if is_pairwise_disjoint(family) {
        3
    } else {
        family.len().max(1)
    }
}

fn execute(cli: &Cli, ctx: &Context) -> Result<String, Failure> {
    let family_fields = |m: &mut Map<String, Value>, f: &Family, perturbed: bool| {
        m.insert("n".into(), json!(f.len()));
        m.insert("perturbed".into(), json!(perturbed));
    };
    match &cli.command {
        Command::Enumerate { json } => {
            let (f, perturbed) = ctx.family()?;
            let edges = enumerate_realized(&f)?;
            if !json {
                return Ok(edges.to_text());
            }
            let mut m = ctx.envelope("enumerate");
            family_fields(&mut m, &f, perturbed);
            m.insert("count".into(), json!(edges.len()));
            m.insert("edges".into(), json!(edges.edges().iter().map(|e| e.to_binary()).collect::<Vec<_>>()));
            Ok(json_text(Value::Object(m)))
        }
        Command::Vc { cap } => {
            let (f, perturbed) = ctx.family()?;
            let edges = enumerate_realized(&f)?;
            let vc = vc_dimension_in(&edges, cap.unwrap_or(f.len()));
            let mut m = ctx.envelope("vc");
            family_fields(&mut m, &f, perturbed);
            m.insert("dim".into(), json!(vc.dim));
            m.insert("witness".into(), mask_json(&vc.witness));
            m.insert("edge_count".into(), json!(edges.len()));
            Ok(json_text(Value::Object(m)))
        }
        Command::Shatter { subset } => {
            let (f, perturbed) = ctx.family()?;
            let n = f.len();
            let set = match subset {
                None => BodySet::full(n),
                Some(text) => {
                    let ids = text
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<usize>().ok().filter(|&i| i < n))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Failure::validation("validation", format!("bad --subset {text:?}")))?;
                    BodySet::from_ids(n, ids)
                }
            };
            let edges = enumerate_realized(&f)?;
            let mut m = ctx.envelope("shatter");
            family_fields(&mut m, &f, perturbed);
            m.insert("subset".into(), mask_json(&set));
            match shattering_in(&edges, &set) {
                crate::Shattering::Shattered => {
                    m.insert("shattered".into(), json!(true));
                    m.insert("missing".into(), Value::Null);
                }
                crate::Shattering::Missing(missing) => {
                    m.insert("shattered".into(), json!(false));
                    m.insert("missing".into(), mask_json(&missing));
                }
            }
            Ok(json_text(Value::Object(m)))
        }
        Command::Gen(args) => run_gen(args, ctx),
        Command::Net { d } => {
            let eps = ctx.eps()?;
            let (f, perturbed) = ctx.family()?;
            let d = d.unwrap_or_else(|| default_dimension(&f));
            let r = epsilon_net(&f, &eps, &WeightVector::uniform(f.len()), d, ctx.global.seed)?;
            let mut m = ctx.envelope("net");
            family_fields(&mut m, &f, perturbed);
            m.insert("eps".into(), json!(format_rational(&r.eps)));
            m.insert("d".into(), json!(r.d));
            m.insert("m".into(), json!(r.m));
            m.insert("attempts".into(), json!(r.attempts));
            m.insert("net".into(), mask_json(&r.net));
            Ok(json_text(Value::Object(m)))
        }
        Command::Approx => {
            let eps = ctx.eps()?;
            let (f, perturbed) = ctx.family()?;
            let r = epsilon_approximation(&f, &eps, ctx.global.seed)?;
            let mut m = ctx.envelope("approx");
            family_fields(&mut m, &f, perturbed);
            m.insert("eps".into(), json!(format_rational(&eps)));
            m.insert("m".into(), json!(r.m));
            m.insert("attempts".into(), json!(r.attempts));
            m.insert("discrepancy".into(), json!(format_rational(&r.discrepancy)));
            m.insert("sample".into(), mask_json(&r.sample));
            Ok(json_text(Value::Object(m)))
        }
        Command::Hitset => {
            let inst = parse_hitting_instance(ctx.text()?)?;
            let mut trace = bg_hitting_set(&inst, ctx.global.seed)?;
            let mut m = ctx.envelope("hitset");
            m.insert("segments".into(), json!(inst.segments().len()));
            m.insert("halfplanes".into(), json!(inst.halfplanes().len()));
            if let Some(cap) = ctx.global.exact_cap {
                trace.optimum = exact_min_hitting_set(&inst, cap).map(|t| t.count());
            }
            m.insert("k".into(), json!(trace.k));
            m.insert("rounds_per_k".into(), json!(trace.rounds_per_k));
            m.insert("doublings".into(), json!(trace.doublings));
            m.insert("solution".into(), mask_json(&trace.solution));
            m.insert("size".into(), json!(trace.solution.count()));
            m.insert("optimum".into(), json!(trace.optimum));
            if let Some(opt) = trace.optimum.filter(|&o| o > 0) {
                m.insert(
                    "ratio".into(),
                    json!(format_rational(&crate::geom::rat(trace.solution.count() as i64, opt as i64))),
                );
            }
            Ok(json_text(Value::Object(m)))
        }
        Command::Render { witnesses } => {
            let (f, _) = ctx.family()?;
            let mut spec = RenderSpec::new(f.clone());
            if *witnesses {
                let edges = enumerate_realized(&f)?;
                for e in edges.edges() {
                    spec.witnesses.push(realize_witness(&f, e)?.expect("enumerated edges are realized"));
                }
            }
            let svg = render_svg(&spec);
            let comment = format!("<!-- convex-vc {VERSION} input sha256:{} -->\n", ctx.digest);
            let split = svg.find('\n').map_or(0, |i| i + 1);
            Ok(format!("{}{}{}", &svg[..split], comment, &svg[split..]))
        }
        Command::CheckBounds => {
            let (f, perturbed) = ctx.family()?;
            let n = f.len();
            let edges = enumerate_realized(&f)?;
            let shattered = shattering_in(&edges, &BodySet::full(n)).is_shattered();
            let pairs = count_intersecting_pairs(&f);
            let segments = f.bodies().iter().all(|b| b.kind() == BodyKind::Segment);
            let tangent_ok = !segments || edges.len() <= tangent_bound(n);
            let turan_ok = !shattered || pairs >= turan_pairs(n);
            let hull = hull_lemma_check(&f);
            let hull_ok = !shattered || hull == HullCheck::Ok;
            let mut m = ctx.envelope("check-bounds");
            family_fields(&mut m, &f, perturbed);
            m.insert("edge_count".into(), json!(edges.len()));
            m.insert(
                "tangent".into(),
                json!({ "applies": segments, "bound": tangent_bound(n), "ok": tangent_ok }),
            );
            m.insert("shattered".into(), json!(shattered));
            m.insert(
                "turan".into(),
                json!({ "intersecting_pairs": pairs, "bound": turan_pairs(n), "ok": turan_ok }),
            );
            let offender = match hull {
                HullCheck::Ok => Value::Null,
                HullCheck::Offender(i) => json!(i),
            };
            m.insert("hull_lemma".into(), json!({ "interior_body": offender, "ok": hull_ok }));
            m.insert("all_ok".into(), json!(tangent_ok && turan_ok && hull_ok));
            Ok(json_text(Value::Object(m)))
        }
    }
}

fn read_input(global: &Global, command: &Command, stdin: &mut dyn Read) -> Result<Vec<u8>, Failure> {
    if matches!(command, Command::Gen(_)) {
        return Ok(Vec::new());
    }
    let mut buf = Vec::new();
    match &global.input {
        Some(path) => {
            buf = std::fs::read(path).map_err(|e| Failure::validation("io", format!("cannot read {path}: {e}")))?;
        }
        None => {
            stdin
                .read_to_end(&mut buf)
                .map_err(|e| Failure::validation("io", format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(buf)
}

fn report(stderr: &mut dyn Write, failure: &Failure) -> i32 {
    let mut value = json!({
        "error": failure.kind,
        "message": failure.message,
        "exit_code": failure.code,
    });
    if !failure.detail.is_null() {
        value["detail"] = failure.detail.clone();
    }
    let _ = stderr.write_all(json_text(value).as_bytes());
    failure.code
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_cli(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(e.to_string().as_bytes());
                return EXIT_OK;
            }
            return report(stderr, &Failure::validation("usage", e.to_string()));
        }
    };
    let input = match read_input(&cli.global, &cli.command, stdin) {
        Ok(input) => input,
        Err(f) => return report(stderr, &f),
    };
    let digest = hex::encode(Sha256::digest(&input));
    let ctx = Context {
        global: &cli.global,
        input,
        digest,
    };
    match execute(&cli, &ctx) {
        Ok(text) => {
            let written = match &cli.global.output {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => report(stderr, &Failure::validation("io", format!("cannot write output: {e}"))),
            }
        }
        Err(f) => report(stderr, &f),
    }
}

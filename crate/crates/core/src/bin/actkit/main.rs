mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use actkit::algebra::{Act, ActHom, Monoid, Subact, DEFAULT_PRODUCT_CAP};
use actkit::catalog::{parse_catalog, serialize_catalog, CatalogDocument};
use actkit::classes::{class_contains, cyclic_acts, right_ideal_acts, ActClass, BuiltinKind, ClassTester};
use actkit::enumeration::{enumerate_acts, enumerate_extensions, enumerate_monoids};
use actkit::equations::solve_system;
use actkit::preenvelope::{
    find_min_preenvelope, product_preenvelope, reduce_via_pure_closure, verify_envelope, verify_preenvelope,
};
use actkit::purity::{
    is_pure, is_pure_bounded, is_pure_via_diagram, pure_closure_traced, purity_witness, BoundedSearch, PurityMethod,
};
use actkit::{Error, Result};

use render::*;

/// Finite monoids, their right acts, purity, and preenvelopes.
#[derive(Debug, Parser)]
#[command(name = "actkit", version)]
struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest product act that may be materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_PRODUCT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate catalog files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Solve an equation system in its act.
    Solve {
        file: PathBuf,
        #[arg(long)]
        system: String,
    },
    /// Decide whether a subact is pure.
    CheckPure {
        file: PathBuf,
        #[arg(long)]
        act: String,
        #[arg(long, value_delimiter = ',', required = true)]
        subact: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Retraction)]
        method: Method,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        eqs: usize,
    },
    /// Grow a seed set to a pure subact.
    PureClosure {
        file: PathBuf,
        #[arg(long)]
        act: String,
        #[arg(long, value_delimiter = ',', required = true)]
        seed: Vec<String>,
    },
    /// Report membership of an act in every builtin class.
    Classify {
        file: PathBuf,
        #[arg(long)]
        act: String,
        /// Size bound for the absolutely pure test.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// List the right ideals of a monoid.
    Ideals {
        file: PathBuf,
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        principal: bool,
    },
    /// List right congruences and the cyclic acts they define.
    Cyclic {
        file: PathBuf,
        #[arg(long)]
        monoid: String,
    },
    /// Construct a preenvelope of an act.
    Preenvelope(PreenvelopeArgs),
    /// Check the factoring property of a hom.
    VerifyPreenvelope {
        file: PathBuf,
        #[arg(long)]
        hom: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        bound: usize,
        /// Also require every endomorphism fixing the hom to be bijective.
        #[arg(long)]
        envelope: bool,
    },
    /// Emit catalogs of small structures.
    #[command(subcommand)]
    Enumerate(EnumerateCommand),
}

#[derive(Debug, Args)]
struct PreenvelopeArgs {
    file: PathBuf,
    #[arg(long)]
    act: String,
    /// all, weakly-p-injective, weakly-f-injective, almost-pure, abs-pure:N,
    /// or extensional:ACT[,ACT...] naming acts in the file.
    #[arg(long)]
    class: String,
    #[arg(long)]
    target_bound: usize,
    #[arg(long)]
    verify_bound: usize,
    /// Product of all maps into small class members, cut down to a pure subact.
    #[arg(long)]
    product: bool,
    /// Smallest verified target found by search (the default).
    #[arg(long)]
    minimize: bool,
}

#[derive(Debug, Subcommand)]
enum EnumerateCommand {
    /// Monoids of the given order up to isomorphism.
    Monoids {
        #[arg(long)]
        order: usize,
    },
    /// Acts of the given size over a monoid up to isomorphism.
    Acts {
        file: PathBuf,
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        size: usize,
    },
    /// Extensions of an act (or of one of its subacts) by new elements.
    Extensions {
        file: PathBuf,
        #[arg(long)]
        act: String,
        #[arg(long, value_delimiter = ',')]
        subact: Option<Vec<String>>,
        #[arg(long)]
        extra: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Retraction,
    Diagram,
    Bounded,
}

struct Output {
    text: String,
    json: Value,
}

fn load(path: &Path) -> Result<CatalogDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_catalog(&text)
}

fn missing(kind: &str, name: &str) -> Error {
    Error::InvalidArgument(format!("no {kind} named `{name}`"))
}

fn get_act(doc: &CatalogDocument, name: &str) -> Result<Arc<Act>> {
    doc.act(name).cloned().ok_or_else(|| missing("act", name))
}

fn get_monoid(doc: &CatalogDocument, name: &str) -> Result<Arc<Monoid>> {
    doc.monoid(name).cloned().ok_or_else(|| missing("monoid", name))
}

fn elements(act: &Act, labels: &[String]) -> Result<Vec<usize>> {
    labels.iter().map(|l| act.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))).collect()
}

fn parse_class(doc: &CatalogDocument, kind: &str) -> Result<ActClass> {
    match kind.strip_prefix("extensional:") {
        Some(names) => {
            let acts = names.split(',').map(|n| get_act(doc, n.trim())).collect::<Result<Vec<_>>>()?;
            ActClass::extensional(acts)
        }
        None => Ok(ActClass::Builtin(kind.parse()?)),
    }
}

fn with_monoid(monoid: &Arc<Monoid>) -> CatalogDocument {
    let mut doc = CatalogDocument::new();
    doc.push_monoid(monoid.clone());
    doc
}

fn renamed(act: &Act, name: String) -> Arc<Act> {
    Arc::new(act.clone().with_name(name))
}

fn validate(files: &[PathBuf]) -> Result<Output> {
    let mut text = String::new();
    let mut entries = Vec::new();
    for f in files {
        let doc = load(f).map_err(|e| Error::InvalidArgument(format!("{}: {e}", f.display())))?;
        let counts = [doc.monoids().count(), doc.acts().count(), doc.systems().count(), doc.homs().count()];
        text.push_str(&format!(
            "{}: ok ({} monoids, {} acts, {} systems, {} homs)\n",
            f.display(),
            counts[0],
            counts[1],
            counts[2],
            counts[3]
        ));
        entries.push(json!({
            "file": f.display().to_string(),
            "monoids": counts[0], "acts": counts[1], "systems": counts[2], "homs": counts[3],
        }));
    }
    Ok(Output { text, json: json!({ "valid": true, "files": entries }) })
}

fn solve(file: &Path, name: &str) -> Result<Output> {
    let doc = load(file)?;
    let named = doc.system(name).ok_or_else(|| missing("system", name))?;
    let sys = &named.system;
    let act = sys.ambient();
    let solution = solve_system(sys, act, &sys.ambient_embedding())?;
    let pairs: Option<Vec<[String; 2]>> = solution
        .as_ref()
        .map(|s| sys.var_names().iter().zip(&s.values).map(|(v, &x)| [v.clone(), act.label(x).to_string()]).collect());
    let text = match &pairs {
        Some(p) => format!(
            "system {name} in {}: solvable\n{}\n",
            act.name(),
            p.iter().map(|[v, x]| format!("{v} = {x}")).collect::<Vec<_>>().join("\n")
        ),
        None => format!("system {name} in {}: no solution\n", act.name()),
    };
    Ok(Output {
        text,
        json: json!({ "system": name, "act": act.name(), "solvable": pairs.is_some(), "solution": pairs }),
    })
}

fn check_pure(file: &Path, act: &str, labels: &[String], method: Method, vars: usize, eqs: usize) -> Result<Output> {
    let doc = load(file)?;
    let act = get_act(&doc, act)?;
    let sub = Subact::new(act.clone(), elements(&act, labels)?)?;
    let (pure, method_name, retraction) = match method {
        Method::Retraction => {
            let v = is_pure(&sub);
            (v.pure, v.method, v.retraction)
        }
        Method::Diagram => {
            let v = is_pure_via_diagram(&sub);
            (v.pure, v.method, v.retraction)
        }
        Method::Bounded => (is_pure_bounded(&sub, BoundedSearch::new(vars, eqs))?, PurityMethod::Bounded, None),
    };
    let witness = if pure { None } else { purity_witness(&sub) };
    let mut text = format!("subact {} of {}\n", subact(&sub), act.name());
    match method {
        Method::Bounded if pure => text
            .push_str(&format!("no witness with at most {vars} variables and {eqs} equations (bounded check only)\n")),
        _ => text.push_str(&format!("pure: {} (method {})\n", if pure { "yes" } else { "no" }, method_name.as_str())),
    }
    if let Some(r) = &retraction {
        text.push_str(&format!("retraction: {}\n", map_line(r)));
    }
    if let Some(w) = &witness {
        text.push_str("witness, solvable in the act but not in the subact:\n");
        text.push_str(&system_text("witness", w));
    }
    let json = json!({
        "act": act.name(),
        "subact": labels_of(&act, sub.members()),
        "pure": pure,
        "method": method_name.as_str(),
        "bounds": matches!(method, Method::Bounded).then(|| json!({ "vars": vars, "eqs": eqs })),
        "witness": witness.as_ref().map(|w| system_text("witness", w)),
        "retraction": retraction.as_ref().map(map_pairs),
    });
    Ok(Output { text, json })
}

fn pure_closure_cmd(file: &Path, act: &str, seed: &[String]) -> Result<Output> {
    let doc = load(file)?;
    let act = get_act(&doc, act)?;
    let report = pure_closure_traced(&act, &elements(&act, seed)?)?;
    let mut text = format!("seed {} in {}\n", set(&act, &report.seed), act.name());
    let mut steps = Vec::new();
    for (i, step) in report.steps.iter().enumerate() {
        let values: Vec<[String; 2]> = step
            .witness
            .var_names()
            .iter()
            .zip(&step.solution)
            .map(|(v, &x)| [v.clone(), act.label(x).to_string()])
            .collect();
        text.push_str(&format!("step {}: added {}\n", i + 1, set(&act, &step.added)));
        text.push_str(&system_text("witness", &step.witness));
        text.push_str(&format!(
            "solved by {}\n",
            values.iter().map(|[v, x]| format!("{v} = {x}")).collect::<Vec<_>>().join(", ")
        ));
        steps.push(json!({
            "witness": system_text("witness", &step.witness),
            "solution": values,
            "added": labels_of(&act, &step.added),
        }));
    }
    text.push_str(&format!("pure closure: {} after {} steps\n", subact(&report.result), report.iterations()));
    let json = json!({
        "act": act.name(),
        "seed": labels_of(&act, &report.seed),
        "result": labels_of(&act, report.result.members()),
        "iterations": report.iterations(),
        "steps": steps,
    });
    Ok(Output { text, json })
}

fn classify(file: &Path, act: &str, bound: usize) -> Result<Output> {
    let doc = load(file)?;
    let act = get_act(&doc, act)?;
    let mut text = format!("act {} over {}\n", act.name(), act.monoid().name());
    let mut entries = Vec::new();
    for kind in std::iter::once(BuiltinKind::AllActs).chain(BuiltinKind::injectivity_kinds(bound)) {
        let tester = ClassTester::new(&kind.into(), act.monoid())?;
        let failure = tester.failure(&act)?;
        match &failure {
            None => text.push_str(&format!("{kind}: yes\n")),
            Some(f) => text.push_str(&format!("{kind}: no, {}\n", failure_text(f))),
        }
        entries.push(json!({
            "kind": kind.to_string(),
            "member": failure.is_none(),
            "failure": failure.as_ref().map(failure_json),
        }));
    }
    Ok(Output { text, json: json!({ "act": act.name(), "classes": entries }) })
}

fn ideals(file: &Path, monoid: &str, principal: bool) -> Result<Output> {
    let doc = load(file)?;
    let monoid = get_monoid(&doc, monoid)?;
    let ideals = right_ideal_acts(&monoid, principal);
    let lists: Vec<Vec<String>> = ideals.iter().map(|i| labels_of(i.ambient(), i.members())).collect();
    let mut text =
        format!("{} {}right ideals of {}\n", lists.len(), if principal { "principal " } else { "" }, monoid.name());
    for l in &lists {
        text.push_str(&format!("{{{}}}\n", l.join(", ")));
    }
    Ok(Output { text, json: json!({ "monoid": monoid.name(), "principal": principal, "ideals": lists }) })
}

fn cyclic(file: &Path, monoid: &str) -> Result<Output> {
    let doc = load(file)?;
    let monoid = get_monoid(&doc, monoid)?;
    let mut out = with_monoid(&monoid);
    let mut entries = Vec::new();
    for (rho, act) in cyclic_acts(&monoid) {
        let blocks: Vec<Vec<&str>> =
            rho.blocks().iter().map(|b| b.iter().map(|&x| monoid.label(x)).collect()).collect();
        out.push_comment(format!(" congruence {}", blocks.iter().map(|b| b.join(" ")).collect::<Vec<_>>().join(" | ")));
        entries.push(json!({ "classes": blocks, "act": act_json(&act) }));
        out.push_act(Arc::new(act));
    }
    let text = serialize_catalog(&out);
    Ok(Output { json: json!({ "monoid": monoid.name(), "congruences": entries, "catalog": text }), text })
}

fn preenvelope(args: &PreenvelopeArgs, cap: usize) -> Result<Output> {
    let doc = load(&args.file)?;
    let act = get_act(&doc, &args.act)?;
    let class = parse_class(&doc, &args.class)?;
    if args.target_bound == 0 || args.verify_bound == 0 {
        return Err(Error::InvalidArgument("bounds must be at least 1".into()));
    }
    let minimize = args.minimize || !args.product;
    let mut text = String::new();
    let mut json = json!({ "act": act.name(), "class": class.label() });
    let target_name = format!("{}_pre", act.name());

    let emit = |phi: &ActHom, name: &str| -> Result<(String, ActHom)> {
        let target = renamed(phi.target(), name.to_string());
        let phi = ActHom::new(act.clone(), target.clone(), phi.map().to_vec())?;
        let mut out = with_monoid(act.monoid());
        out.push_act(act.clone());
        out.push_act(target);
        out.push_hom("phi", phi.clone());
        Ok((serialize_catalog(&out), phi))
    };

    if args.product {
        let pre = product_preenvelope(&act, &class, args.target_bound)?;
        let size = pre.product.size();
        let certified = pre.certificates.iter().all(|c| c.holds);
        let red = reduce_via_pure_closure(&pre, cap)?;
        let (catalog, phi) = emit(&red.phi, &target_name)?;
        let in_class = class_contains(&class, phi.target())?;
        let report = if in_class { Some(verify_preenvelope(&phi, &class, args.verify_bound)?) } else { None };
        text.push_str(&format!(
            "product of {} maps into {} class members, {} elements; projections {}\n",
            pre.product.coordinates().len(),
            pre.representatives.len(),
            size,
            if certified { "agree with every map" } else { "DISAGREE" }
        ));
        text.push_str(&format!("image {} elements, pure closure {} elements\n", red.image.len(), red.closure.len()));
        match &report {
            Some(report) => text.push_str(&factoring_text(report)),
            None => text.push_str("reduced target is not in the class; factoring not checked\n"),
        }
        text.push_str(&catalog);
        json["product"] = json!({
            "coordinates": pre.product.coordinates().len(),
            "representatives": pre.representatives.iter().map(|r| r.name()).collect::<Vec<_>>(),
            "size": size.to_string(),
            "projections_agree": certified,
            "image_size": red.image.len(),
            "closure_size": red.closure.len(),
            "in_class": in_class,
            "report": report.as_ref().map(factoring_json),
            "catalog": catalog,
        });
    }
    if minimize {
        match find_min_preenvelope(&act, &class, args.target_bound, args.verify_bound)? {
            Some((phi, _)) => {
                let (catalog, phi) = emit(&phi, &target_name)?;
                let report = verify_preenvelope(&phi, &class, args.verify_bound)?;
                text.push_str(&format!("smallest verified target: {} elements\n", phi.target().size()));
                text.push_str(&factoring_text(&report));
                text.push_str(&catalog);
                json["minimal"] = json!({ "report": factoring_json(&report), "catalog": catalog });
            }
            None => {
                text.push_str(&format!("no verified target of size at most {}\n", args.target_bound));
                json["minimal"] = Value::Null;
            }
        }
    }
    Ok(Output { text, json })
}

fn verify_cmd(file: &Path, hom: &str, class: &str, bound: usize, envelope: bool) -> Result<Output> {
    let doc = load(file)?;
    let phi = doc.hom(hom).ok_or_else(|| missing("hom", hom))?.hom.clone();
    let class = parse_class(&doc, class)?;
    if envelope {
        let report = verify_envelope(&phi, &class, bound)?;
        let mut text = factoring_text(&report.preenvelope);
        match &report.non_bijective_endo {
            Some(g) => text.push_str(&format!("envelope: no, endomorphism {} fixes the hom\n", map_line(g))),
            None if report.preenvelope.verified => text.push_str("envelope: verified\n"),
            None => text.push_str("envelope: no\n"),
        }
        let json = json!({
            "preenvelope": factoring_json(&report.preenvelope),
            "envelope": report.verified,
            "non_bijective_endo": report.non_bijective_endo.as_ref().map(map_pairs),
        });
        Ok(Output { text, json })
    } else {
        let report = verify_preenvelope(&phi, &class, bound)?;
        Ok(Output { text: factoring_text(&report), json: factoring_json(&report) })
    }
}

fn enumerate(cmd: &EnumerateCommand) -> Result<Output> {
    let doc = match cmd {
        EnumerateCommand::Monoids { order } => {
            let mut doc = CatalogDocument::new();
            for m in enumerate_monoids(*order)? {
                doc.push_monoid(Arc::new(m));
            }
            doc
        }
        EnumerateCommand::Acts { file, monoid, size } => {
            let monoid = get_monoid(&load(file)?, monoid)?;
            let mut doc = with_monoid(&monoid);
            for a in enumerate_acts(&monoid, *size)? {
                doc.push_act(Arc::new(a));
            }
            doc
        }
        EnumerateCommand::Extensions { file, act, subact, extra } => {
            let act = get_act(&load(file)?, act)?;
            let base = match subact {
                Some(labels) => {
                    let sub = Subact::new(act.clone(), elements(&act, labels)?)?;
                    Arc::new(sub.as_act())
                }
                None => act.clone(),
            };
            let mut doc = with_monoid(base.monoid());
            doc.push_act(base.clone());
            for (i, ext) in enumerate_extensions(&base, *extra)?.into_iter().enumerate() {
                let ambient = ext.ambient().clone();
                doc.push_act(ambient.clone());
                let map = ext.members().to_vec();
                doc.push_hom(format!("incl_{i}"), ActHom::new(base.clone(), ambient, map)?);
            }
            doc
        }
    };
    let text = serialize_catalog(&doc);
    let json = json!({
        "monoids": doc.monoids().count(),
        "acts": doc.acts().count(),
        "catalog": text,
    });
    Ok(Output { text, json })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { files } => validate(files),
        Command::Solve { file, system } => solve(file, system),
        Command::CheckPure { file, act, subact, method, vars, eqs } => {
            check_pure(file, act, subact, *method, *vars, *eqs)
        }
        Command::PureClosure { file, act, seed } => pure_closure_cmd(file, act, seed),
        Command::Classify { file, act, bound } => classify(file, act, *bound),
        Command::Ideals { file, monoid, principal } => ideals(file, monoid, *principal),
        Command::Cyclic { file, monoid } => cyclic(file, monoid),
        Command::Preenvelope(args) => preenvelope(args, cli.cap),
        Command::VerifyPreenvelope { file, hom, class, bound, envelope } => {
            verify_cmd(file, hom, class, *bound, *envelope)
        }
        Command::Enumerate(cmd) => enumerate(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = if e.is_resource_limit() { 3 } else { 2 };
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": code }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

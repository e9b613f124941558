//! `committee-reconfig` command-line front end.
//!
//! Exit codes: 0 success or positive answer, 1 negative answer, 2 usage or
//! input error, 3 resource budget exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use committee_reconfig::axioms::Axiom;
use committee_reconfig::domains::{connect_jr_ci, connect_jr_vi, pareto_optimal, recognize, DomainKind};
use committee_reconfig::generators::{gen_fixture, gen_grid, gen_isolated, gen_random, gen_tightness, Generated};
use committee_reconfig::reconfig::{
    bfs_connect, committee_graph, connect_ejr_4approx, connect_rule_outputs, connect_to_affordable_jr, connect_two_jr,
    isolation_radius, non_isolation_witness, BfsOutcome, NonIsolation, Path, Predicate, ISOLATION_LIMIT,
};
use committee_reconfig::reductions::{sat_reconfig_connected, sat_to_jr_reconfig, SatReconfigInstance, SAT_BFS_MAX_VARS};
use committee_reconfig::rules::Rule;
use committee_reconfig::{Alpha, CandidateSet, Error, Instance};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "committee-reconfig", version, about = "Proportional committees and the paths between them")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a committee against JR, EJR or EJR+.
    Check {
        #[arg(long)]
        axiom: AxiomName,
        #[arg(long, default_value = "1")]
        alpha: Alpha,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        committee: String,
    },
    /// Run a voting rule.
    Rule {
        #[arg(long)]
        rule: Rule,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Build a path between two committees.
    Path {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        instance: PathBuf,
        /// Start committee. For `rules` and `affordable` it defaults to the output of `--rule`.
        #[arg(long)]
        from: Option<String>,
        /// Target committee. For `rules` it defaults to the output of `--rule2`.
        #[arg(long)]
        to: Option<String>,
        /// Predicate for `bfs`.
        #[arg(long, default_value = "jr")]
        pred: AxiomName,
        #[arg(long, default_value = "1")]
        alpha: Alpha,
        #[arg(long)]
        rule: Option<Rule>,
        #[arg(long)]
        rule2: Option<Rule>,
        #[arg(long, default_value_t = 1_000_000)]
        node_budget: usize,
    },
    /// Distance to the nearest other committee satisfying a predicate, or a
    /// one-swap neighbour of a rule output with `--rule`.
    Isolation {
        #[arg(long)]
        instance: PathBuf,
        /// Defaults to the output of `--rule` when that is given.
        #[arg(long)]
        committee: Option<String>,
        #[arg(long, default_value = "jr")]
        pred: AxiomName,
        #[arg(long, default_value = "1")]
        alpha: Alpha,
        /// Defaults to k-1.
        #[arg(long)]
        max_radius: Option<usize>,
        #[arg(long, default_value_t = ISOLATION_LIMIT)]
        limit: u128,
        /// Construct a neighbour of this rule's output keeping `--pred` (ejr or ejr+).
        #[arg(long)]
        rule: Option<Rule>,
    },
    /// Recognize candidate-interval or voter-interval profiles.
    Domain {
        #[arg(long)]
        recognize: DomainKind,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Generate an instance family.
    Gen {
        #[arg(long)]
        family: FamilyName,
        /// Comma-separated `key=value` pairs: `k` (isolated), `r` (tightness, grid),
        /// `name` (fixture), `n,m,k,density,seed` (random).
        #[arg(long, default_value = "")]
        params: String,
        /// Instance file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Committee sidecar JSON; defaults to `<out>.json` when `--out` is given.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Reduce SAT reconfiguration to JR reconfiguration.
    Reduce {
        #[arg(long)]
        sat: PathBuf,
        /// Instance file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON with both committees and the index layout.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Committee graph restricted to a predicate.
    Graph {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "jr")]
        pred: AxiomName,
        #[arg(long, default_value = "1")]
        alpha: Alpha,
        #[arg(long, default_value = "dot")]
        emit: Emit,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u128,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomName {
    Jr,
    Ejr,
    #[value(name = "ejr+")]
    EjrPlus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bfs,
    TwoJr,
    FourEjr,
    Affordable,
    Rules,
    Ci,
    Vi,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Isolated,
    Tightness,
    Grid,
    Fixture,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if matches!(e, Error::TooLarge { .. }) { 3 } else { 2 };
        Fail { code, msg: e.to_string() }
    }
}

fn input(msg: impl Into<String>) -> Fail {
    Fail { code: 2, msg: msg.into() }
}

/// What a subcommand produced: the text to print and the exit code.
struct Output {
    body: Body,
    code: u8,
}

enum Body {
    Json(Value),
    Text(String),
}

fn json_out(v: impl Serialize, positive: bool) -> Result<Output, Fail> {
    let v = serde_json::to_value(v).map_err(|e| input(e.to_string()))?;
    Ok(Output { body: Body::Json(v), code: if positive { 0 } else { 1 } })
}

fn axiom(name: AxiomName, alpha: &Alpha) -> Axiom {
    match name {
        AxiomName::Jr => Axiom::Jr(alpha.clone()),
        AxiomName::Ejr => Axiom::Ejr(alpha.clone()),
        AxiomName::EjrPlus => Axiom::EjrPlus,
    }
}

fn read_text(path: &FsPath) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load(path: &FsPath) -> Result<Instance, Fail> {
    Instance::parse(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn committee(inst: &Instance, text: &str) -> Result<CandidateSet, Fail> {
    let members = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| input(format!("invalid candidate index {t:?}"))))
        .collect::<Result<Vec<usize>, Fail>>()?;
    let w = inst.committee(&members)?;
    if w.count() != members.len() {
        return Err(input(format!("duplicate candidate in committee {text:?}")));
    }
    Ok(w)
}

fn write_file(path: &FsPath, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn check(inst: &Instance, ax: Axiom, w: &CandidateSet) -> Result<Output, Fail> {
    match ax.check(inst, w) {
        None => json_out(json!({ "satisfied": true }), true),
        Some(wit) => json_out(json!({ "satisfied": false, "witness": wit }), false),
    }
}

fn path_json(method: &str, path: &Path) -> Result<Output, Fail> {
    json_out(json!({ "method": method, "length": path.len(), "path": path }), true)
}

fn rule_output(inst: &Instance, rule: Option<Rule>, flag: &str) -> Result<(Rule, CandidateSet), Fail> {
    let rule = rule.ok_or_else(|| input(format!("--{flag} is required")))?;
    Ok((rule, rule.run(inst)?.committee))
}

#[allow(clippy::too_many_arguments)]
fn path_cmd(
    inst: &Instance,
    method: Method,
    from: Option<&str>,
    to: Option<&str>,
    pred: Predicate,
    rule: Option<Rule>,
    rule2: Option<Rule>,
    budget: usize,
) -> Result<Output, Fail> {
    let need = |c: Option<&str>, flag: &str| -> Result<CandidateSet, Fail> {
        committee(inst, c.ok_or_else(|| input(format!("--{flag} is required for this method")))?)
    };
    match method {
        Method::Bfs => {
            let (w, w2) = (need(from, "from")?, need(to, "to")?);
            let out = bfs_connect(inst, &w, &w2, &pred, budget)?;
            let code = match out {
                BfsOutcome::Found { .. } => 0,
                BfsOutcome::Disconnected { .. } => 1,
                BfsOutcome::BudgetExceeded { .. } => 3,
            };
            let mut v = serde_json::to_value(&out).map_err(|e| input(e.to_string()))?;
            v["method"] = json!("bfs");
            if let Some(p) = out.path() {
                v["length"] = json!(p.len());
            }
            Ok(Output { body: Body::Json(v), code })
        }
        Method::TwoJr => path_json("two-jr", &connect_two_jr(inst, &need(from, "from")?, &need(to, "to")?)?),
        Method::FourEjr => path_json("four-ejr", &connect_ejr_4approx(inst, &need(from, "from")?, &need(to, "to")?)?),
        Method::Affordable => {
            let rule = rule.ok_or_else(|| input("--rule is required for the affordable method"))?;
            let w = match from {
                Some(c) => committee(inst, c)?,
                None => rule.run(inst)?.committee,
            };
            let (path, end) = connect_to_affordable_jr(inst, &w, rule)?;
            json_out(json!({ "method": "affordable", "length": path.len(), "path": path, "end": end }), true)
        }
        Method::Rules => {
            let (f, w) = match from {
                Some(c) => (rule.ok_or_else(|| input("--rule is required for the rules method"))?, committee(inst, c)?),
                None => rule_output(inst, rule, "rule")?,
            };
            let (f2, w2) = match to {
                Some(c) => (rule2.ok_or_else(|| input("--rule2 is required for the rules method"))?, committee(inst, c)?),
                None => rule_output(inst, rule2, "rule2")?,
            };
            path_json("rules", &connect_rule_outputs(inst, &w, f, &w2, f2)?)
        }
        Method::Ci | Method::Vi => {
            let (kind, name) = if matches!(method, Method::Ci) { (DomainKind::Ci, "ci") } else { (DomainKind::Vi, "vi") };
            let (w, w2) = (need(from, "from")?, need(to, "to")?);
            let cert = recognize(inst, kind).ok_or_else(|| input(format!("instance is not {}", name.to_uppercase())))?;
            let path = match kind {
                DomainKind::Ci => connect_jr_ci(inst, &cert, &w, &w2)?,
                DomainKind::Vi => connect_jr_vi(inst, &cert, &w, &w2)?,
            };
            path_json(name, &path)
        }
    }
}

fn params(text: &str) -> Result<Vec<(String, String)>, Fail> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (k, v) = t.split_once('=').ok_or_else(|| input(format!("parameter {t:?} is not key=value")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn param<T: std::str::FromStr>(ps: &[(String, String)], key: &str, default: Option<T>) -> Result<T, Fail> {
    match ps.iter().find(|(k, _)| k == key) {
        Some((_, v)) => v.parse().map_err(|_| input(format!("invalid value {v:?} for {key}"))),
        None => default.ok_or_else(|| input(format!("missing parameter {key}"))),
    }
}

fn generate(family: FamilyName, text: &str) -> Result<Generated, Fail> {
    let ps = params(text)?;
    let allowed: &[&str] = match family {
        FamilyName::Isolated => &["k"],
        FamilyName::Tightness | FamilyName::Grid => &["r"],
        FamilyName::Fixture => &["name"],
        FamilyName::Random => &["n", "m", "k", "density", "seed"],
    };
    if let Some((k, _)) = ps.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(input(format!("unknown parameter {k:?}; expected {}", allowed.join(", "))));
    }
    Ok(match family {
        FamilyName::Isolated => gen_isolated(param(&ps, "k", Some(3))?)?,
        FamilyName::Tightness => gen_tightness(param(&ps, "r", Some(3))?)?,
        FamilyName::Grid => gen_grid(param(&ps, "r", Some(3))?)?,
        FamilyName::Fixture => gen_fixture(&param::<String>(&ps, "name", None)?)?,
        FamilyName::Random => gen_random(
            param(&ps, "n", None)?,
            param(&ps, "m", None)?,
            param(&ps, "k", None)?,
            param(&ps, "density", Some(0.5))?,
            param(&ps, "seed", Some(0))?,
        )?,
    })
}

fn emit_instance(text: String, out: Option<&FsPath>, sidecar: Option<(PathBuf, Value)>) -> Result<Output, Fail> {
    if let Some((path, v)) = &sidecar {
        let s = serde_json::to_string_pretty(v).map_err(|e| input(e.to_string()))?;
        write_file(path, &(s + "\n"))?;
    }
    match out {
        Some(path) => {
            write_file(path, &text)?;
            let mut v = json!({ "instance": path });
            if let Some((p, _)) = sidecar {
                v["sidecar"] = json!(p);
            }
            json_out(v, true)
        }
        None => Ok(Output { body: Body::Text(text), code: 0 }),
    }
}

fn run(cli: Cli) -> Result<Output, Fail> {
    match cli.command {
        Command::Check { axiom: name, alpha, instance, committee: c } => {
            let inst = load(&instance)?;
            let w = committee(&inst, &c)?;
            check(&inst, axiom(name, &alpha), &w)
        }
        Command::Rule { rule, instance } => {
            let inst = load(&instance)?;
            json_out(rule.run(&inst)?, true)
        }
        Command::Path { method, instance, from, to, pred, alpha, rule, rule2, node_budget } => {
            let inst = load(&instance)?;
            let pred = Predicate::from_axiom(axiom(pred, &alpha));
            path_cmd(&inst, method, from.as_deref(), to.as_deref(), pred, rule, rule2, node_budget)
        }
        Command::Isolation { instance, committee: c, pred, alpha, max_radius, limit, rule } => {
            let inst = load(&instance)?;
            let w = match (&c, rule) {
                (Some(c), _) => committee(&inst, c)?,
                (None, Some(r)) => r.run(&inst)?.committee,
                (None, None) => return Err(input("--committee or --rule is required")),
            };
            if let Some(rule) = rule {
                let out = non_isolation_witness(&inst, &w, rule, &axiom(pred, &alpha))?;
                let found = matches!(out, NonIsolation::Neighbor { .. });
                return json_out(json!({ "committee": w, "rule": rule, "result": out }), found);
            }
            let max_r = max_radius.unwrap_or(inst.k().saturating_sub(1));
            let rep = isolation_radius(&inst, &w, &Predicate::from_axiom(axiom(pred, &alpha)), max_r, limit)?;
            let found = rep.nearest.is_some();
            json_out(json!({ "committee": w, "max_radius": max_r, "report": rep }), found)
        }
        Command::Domain { recognize: kind, instance } => {
            let inst = load(&instance)?;
            let optimal = pareto_optimal(&inst);
            match recognize(&inst, kind) {
                Some(cert) => json_out(json!({ "kind": kind, "ordering": cert.ordering, "pareto_optimal": optimal }), true),
                None => json_out(json!({ "kind": kind, "ordering": "absent", "pareto_optimal": optimal }), false),
            }
        }
        Command::Gen { family, params: p, out, sidecar } => {
            let g = generate(family, &p)?;
            let sidecar = sidecar.or_else(|| out.as_ref().map(|o| o.with_extension("json")));
            if let (Some(o), Some(s)) = (&out, &sidecar) {
                if o == s {
                    return Err(input("--out and --sidecar name the same file"));
                }
            }
            let side = sidecar.map(|p| (p, g.sidecar()));
            emit_instance(g.instance.to_text(), out.as_deref(), side)
        }
        Command::Reduce { sat, out, sidecar } => {
            let sri = SatReconfigInstance::parse_dimacs(&read_text(&sat)?).map_err(|e| input(format!("{}: {e}", sat.display())))?;
            let red = sat_to_jr_reconfig(&sri)?;
            let fmt = |w: &CandidateSet| w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            let text = format!("# W1 {}\n# W2 {}\n{}", fmt(&red.w1), fmt(&red.w2), red.instance.to_text());
            let side = match sidecar {
                Some(p) => {
                    let connected = (sri.vars <= SAT_BFS_MAX_VARS).then(|| sat_reconfig_connected(&sri)).transpose()?;
                    let v = json!({ "w1": red.w1, "w2": red.w2, "layout": red.layout, "assignments_connected": connected });
                    Some((p, v))
                }
                None => None,
            };
            emit_instance(text, out.as_deref(), side)
        }
        Command::Graph { instance, pred, alpha, emit, limit } => {
            let inst = load(&instance)?;
            let g = committee_graph(&inst, &Predicate::from_axiom(axiom(pred, &alpha)), limit)?;
            match emit {
                Emit::Dot => Ok(Output { body: Body::Text(g.to_dot()), code: 0 }),
                Emit::Json => json_out(json!({ "graph": g, "components": g.components() }), true),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok(out) => {
            let text = match out.body {
                Body::Json(v) if pretty => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Body::Json(v) => v.to_string() + "\n",
                Body::Text(t) => t,
            };
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

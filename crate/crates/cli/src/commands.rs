//! Subcommand handlers. Each returns the text to print on success.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ggism::brute::brute_solve;
use ggism::gale_shapley;
use ggism::lp::{approx_solve, build_relaxation, SolveMode};
use ggism::matching::{blocking_pairs, disutility_vector, ggi};
use ggism::random::{random_disutility, random_instance, random_weights, seeded};
use ggism::rational::{format_rational, to_f64};
use ggism::reduction::{preprocess_2sat, reduce, TwoSatInstance};
use ggism::xp::{enumerate_topk, xp_solve, XpContext, XpOptions};
use ggism::{ClosedSet, Criterion, DisutilityFunction, Instance, Matching, Rational, RotationPoset};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::options::{self, load_instance, read, write};
use crate::{Format, Method, ScoreArgs};

pub struct SolveRequest {
    pub instance: PathBuf,
    pub method: Method,
    pub score: ScoreArgs,
    pub exact: bool,
    pub lp_dump: Option<PathBuf>,
    pub dump_topk: Option<PathBuf>,
    pub threads: Option<usize>,
    pub format: Format,
}

fn value_json(v: &Rational) -> Value {
    json!({ "exact": format_rational(v), "approx": to_f64(v) })
}

fn ids_one_based(c: &ClosedSet) -> Vec<usize> {
    c.ids().into_iter().map(|id| id + 1).collect()
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Per-man table of a matching with the disutilities of both partners.
fn matching_table(inst: &Instance, dfun: &DisutilityFunction, m: &Matching) -> Result<String, CliError> {
    let dv = disutility_vector(inst, dfun, m)?;
    let mut out = format!("{:>5} {:>6} {:>10} {:>10}\n", "man", "woman", "d(man)", "d(woman)");
    for man in 0..inst.n() {
        let w = m.wife(man);
        let _ = writeln!(
            out,
            "{:>5} {:>6} {:>10} {:>10}",
            man + 1,
            w + 1,
            format_rational(&dv.men()[man]),
            format_rational(&dv.women()[w])
        );
    }
    Ok(out)
}

pub fn solve(req: SolveRequest) -> Result<String, CliError> {
    let inst = load_instance(&req.instance)?;
    let n = inst.n();
    let (dfun, criterion) = req.score.resolve(n)?;
    let needs_ggi = matches!(req.method, Method::Approx | Method::Xp);
    let weights = match &criterion {
        Criterion::Ggi(w) => Some(w.clone()),
        _ if needs_ggi => {
            return Err(CliError::Usage(format!(
                "method {} optimizes the GGI only; use --criterion ggi",
                req.method.name()
            )))
        }
        _ => None,
    };
    if (req.exact || req.lp_dump.is_some()) && req.method != Method::Approx {
        return Err(CliError::Usage("--exact and --lp-dump apply to --method approx".into()));
    }
    if req.dump_topk.is_some() && req.method != Method::Xp {
        return Err(CliError::Usage("--dump-topk applies to --method xp".into()));
    }
    let opts = XpOptions { threads: req.threads };

    let poset = RotationPoset::build(&inst);
    let mut extra = serde_json::Map::new();
    let matching = match req.method {
        Method::GsMan => gale_shapley::man_optimal(&inst).0,
        Method::GsWoman => gale_shapley::woman_optimal(&inst),
        Method::Brute => {
            let res = brute_solve(&inst, &dfun, &criterion)?;
            extra.insert("examined".into(), json!(res.examined));
            res.matching
        }
        Method::Approx => {
            let w = weights.as_ref().expect("checked above");
            if let Some(path) = &req.lp_dump {
                let relax = build_relaxation(&poset, &inst, &dfun, w)?;
                write(path, &relax.lp.to_lp_format())?;
            }
            let mode = if req.exact { SolveMode::Exact } else { SolveMode::Float };
            let res = approx_solve(&inst, &dfun, w, mode)?;
            extra.insert("lp_bound".into(), json!(res.lp_bound));
            if let Some(exact) = &res.fractional.exact {
                extra.insert("lp_bound_exact".into(), json!(format_rational(&exact.objective)));
            }
            extra.insert("y_hat".into(), json!(res.fractional.y_hat));
            res.matching
        }
        Method::Xp => {
            let w = weights.as_ref().expect("checked above");
            let res = xp_solve(&inst, &dfun, w, opts)?;
            if let Some(path) = &req.dump_topk {
                let vectors = if res.k == 0 {
                    Vec::new()
                } else {
                    let ctx = XpContext::with_poset(&inst, &dfun, poset.clone())?;
                    enumerate_topk(&ctx, res.k, opts)?
                };
                let dump = json!({
                    "k": res.k,
                    "count": vectors.len(),
                    "vectors": vectors.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                });
                write(path, &pretty(&dump))?;
            }
            extra.insert("k".into(), json!(res.k));
            extra.insert("prefix".into(), res.best.to_json());
            extra.insert("candidates".into(), json!(res.candidates));
            res.matching
        }
    };

    let rotations = poset.closed_set_of(&matching)?;
    let dv = disutility_vector(&inst, &dfun, &matching)?;
    let value = criterion.apply(&dv)?;
    match req.format {
        Format::Json => {
            let mut out = json!({
                "method": req.method.name(),
                "criterion": criterion.name(),
                "disutility": dfun.name(),
                "n": n,
                "pairs": matching.pairs_one_based(),
                "rotations": ids_one_based(&rotations),
                "value": value_json(&value),
                "disutilities": { "men": strings(dv.men()), "women": strings(dv.women()) },
            });
            if let Some(w) = &weights {
                out["weights"] = json!(strings(w.as_slice()));
            }
            out.as_object_mut().expect("object").extend(extra);
            Ok(pretty(&out))
        }
        Format::Table => {
            let mut out = format!(
                "{} = {} via {}\nrotations: {:?}\n",
                criterion.name(),
                format_rational(&value),
                req.method.name(),
                ids_one_based(&rotations)
            );
            if let Some(b) = extra.get("lp_bound") {
                let _ = writeln!(out, "LP bound: {b}");
            }
            out.push_str(&matching_table(&inst, &dfun, &matching)?);
            Ok(out)
        }
    }
}

pub fn enumerate(path: &Path, dspec: &str, wspec: Option<&str>, format: Format) -> Result<String, CliError> {
    let inst = load_instance(path)?;
    let dfun = options::disutility(dspec, inst.n())?;
    let weights = wspec.map(|s| options::weights(s, inst.agents())).transpose()?;
    let poset = RotationPoset::build(&inst);
    let mut rows = Vec::new();
    for (index, (closed, m)) in poset.enumerate_stable().enumerate() {
        let dv = disutility_vector(&inst, &dfun, &m)?;
        let g = weights.as_ref().map(|w| ggi(w, dv.values())).transpose()?;
        rows.push((index + 1, closed, m, dv, g));
    }
    match format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(i, c, m, dv, g)| {
                    let mut row = json!({
                        "index": i,
                        "rotations": ids_one_based(c),
                        "pairs": m.pairs_one_based(),
                        "sum": format_rational(&dv.sum()),
                        "max": format_rational(&dv.max()),
                    });
                    if let Some(g) = g {
                        row["ggi"] = value_json(g);
                    }
                    row
                })
                .collect();
            Ok(pretty(&json!({ "count": rows.len(), "matchings": list })))
        }
        Format::Table => {
            let mut out = format!("{:>4} {:<14} {:>8} {:>8}", "#", "rotations", "sum", "max");
            if weights.is_some() {
                let _ = write!(out, " {:>10}", "ggi");
            }
            out.push_str("  wives of m1..mn\n");
            for (i, c, m, dv, g) in &rows {
                let _ = write!(
                    out,
                    "{:>4} {:<14} {:>8} {:>8}",
                    i,
                    format!("{:?}", ids_one_based(c)),
                    format_rational(&dv.sum()),
                    format_rational(&dv.max())
                );
                if let Some(g) = g {
                    let _ = write!(out, " {:>10}", format_rational(g));
                }
                let wives: Vec<String> = m.partner_of_man().iter().map(|w| (w + 1).to_string()).collect();
                let _ = writeln!(out, "  {}", wives.join(" "));
            }
            Ok(out)
        }
    }
}

pub fn rotations(path: &Path, dot: bool, format: Format) -> Result<String, CliError> {
    let poset = RotationPoset::build(&load_instance(path)?);
    if dot {
        return Ok(poset.to_dot());
    }
    match format {
        Format::Json => Ok(pretty(&poset.to_json())),
        Format::Table => {
            let mut out = String::new();
            for (id, rho) in poset.rotations().iter().enumerate() {
                let preds: Vec<usize> = poset
                    .immediate_edges()
                    .iter()
                    .filter(|e| e.1 == id)
                    .map(|e| e.0 + 1)
                    .collect();
                let _ = writeln!(out, "ρ{}: {}  after {:?}", id + 1, rho.label(), preds);
            }
            if poset.is_empty() {
                out.push_str("no rotations: the stable matching is unique\n");
            }
            Ok(out)
        }
    }
}

pub fn reduce_2sat(formula: &Path, output: &Path) -> Result<String, CliError> {
    let raw = TwoSatInstance::parse_dimacs(&read(formula)?)
        .map_err(|e| CliError::input(formula.display().to_string(), e))?;
    let pre = preprocess_2sat(&raw)?;
    let out = reduce(&pre.instance)?;
    let companion = |ext: &str| {
        let mut s = output.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    let (sidecar_path, dfun_path, weights_path) = (companion(".json"), companion(".dfun"), companion(".weights"));

    let n = out.instance.n();
    let table: Vec<String> = (1..=n)
        .map(|r| out.dfun.value(r).map(|v| format_rational(&v)))
        .collect::<Result<_, _>>()?;
    let mut sidecar = out.sidecar();
    sidecar["preprocessing"] = json!({
        "original_variables": pre.original_var.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "fixed": pre.fixed.iter().map(|&(v, b)| json!([v + 1, b])).collect::<Vec<_>>(),
        "dropped_unsatisfied": pre.dropped_unsatisfied,
        "dropped_satisfied": pre.dropped_satisfied,
    });
    write(output, &out.instance.to_text())?;
    write(&sidecar_path, &pretty(&sidecar))?;
    write(&dfun_path, &(table.join("\n") + "\n"))?;
    write(&weights_path, &(strings(out.weights.as_slice()).join("\n") + "\n"))?;
    Ok(pretty(&json!({
        "instance": output,
        "sidecar": sidecar_path,
        "disutility": dfun_path,
        "weights": weights_path,
        "n": n,
        "n_vars": out.n_vars,
        "n_clauses": out.n_clauses,
        "delta_u": format_rational(&out.delta_u),
        "delta_l": format_rational(&out.delta_l),
        "dropped_unsatisfied": pre.dropped_unsatisfied,
    })))
}

pub fn check(inst_path: &Path, m_path: &Path, score: &ScoreArgs, format: Format) -> Result<String, CliError> {
    let inst = load_instance(inst_path)?;
    let matching = Matching::from_json(inst.n(), &read(m_path)?)
        .map_err(|e| CliError::input(m_path.display().to_string(), e))?;
    let (dfun, criterion) = score.resolve(inst.n())?;
    let blocking = blocking_pairs(&inst, &matching)?;
    let value = criterion.apply(&disutility_vector(&inst, &dfun, &matching)?)?;
    let stable = blocking.is_empty();
    match format {
        Format::Json => Ok(pretty(&json!({
            "stable": stable,
            "blocking_pairs": blocking.iter().map(|&(m, w)| [m + 1, w + 1]).collect::<Vec<_>>(),
            "criterion": criterion.name(),
            "value": value_json(&value),
        }))),
        Format::Table => {
            let mut out = format!("stable: {stable}\n{} = {}\n", criterion.name(), format_rational(&value));
            for (m, w) in blocking {
                let _ = writeln!(out, "blocking pair: m{} w{}", m + 1, w + 1);
            }
            Ok(out)
        }
    }
}

pub fn gen(
    n: usize,
    seed: u64,
    output: Option<&Path>,
    disutility_out: Option<&Path>,
    weights_out: Option<&Path>,
    json: bool,
) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mut rng = seeded(seed);
    let inst = random_instance(n, &mut rng);
    if let Some(path) = disutility_out {
        let d = random_disutility(n, &mut rng);
        let values: Vec<Rational> = (1..=n).map(|r| d.value(r)).collect::<Result<_, _>>()?;
        write(path, &(strings(&values).join("\n") + "\n"))?;
    }
    if let Some(path) = weights_out {
        let w = random_weights(2 * n, &mut rng);
        write(path, &(strings(w.as_slice()).join("\n") + "\n"))?;
    }
    let text = if json { pretty(&inst.to_json()) } else { inst.to_text() };
    match output {
        Some(path) => {
            write(path, &text)?;
            Ok(pretty(&json!({ "instance": path, "n": n, "seed": seed })))
        }
        None => Ok(text),
    }
}

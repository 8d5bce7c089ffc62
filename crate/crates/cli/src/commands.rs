use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use wturan::analysis::{analyze, extremal_completion_with, CompletionPolicy};
use wturan::constructions::*;
use wturan::embedding::check_free;
use wturan::enumerate::Mode;
use wturan::graph::parse_cwg_many;
use wturan::homomorphism::{
    find_hom_general_with, find_hom_rk_minus_with, find_hom_rk_with, HomOptions, HomOutcome,
};
use wturan::search::{
    compute_ex, density_report, empirical_threshold, verify_theorem, Outcome, SearchReport,
    TheoremKind,
};
use wturan::ColoredGraph;

use crate::args::*;

/// Bumped whenever a JSON output changes shape; see `schema/output.schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FOUND: i32 = 2;

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Check(a) => check(cli, a),
        Command::Hom(a) => hom(cli, a),
        Command::Analyze(a) => analyze_cmd(cli, a),
        Command::Complete(a) => complete(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Ex(a) => ex(cli, a),
        Command::Threshold(a) => threshold(cli, a),
        Command::Density(a) => density(cli, a),
    }
}

fn emit<T: Serialize>(
    cli: &Cli,
    command: &str,
    body: &T,
    text: impl FnOnce() -> String,
) -> Result<()> {
    if cli.json {
        let mut value = serde_json::to_value(body)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| anyhow!("report for {command} is not a JSON object"))?;
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(command));
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> Result<ColoredGraph> {
    let text = read_text(path)?;
    ColoredGraph::parse_cwg(&text).with_context(|| format!("malformed graph in {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `F:<t>` or `file:<path>`.
fn parse_family(selector: &str) -> Result<Vec<ColoredGraph>> {
    if let Some(t) = selector.strip_prefix("F:") {
        let t: usize = t
            .parse()
            .with_context(|| format!("bad family index in {selector:?}"))?;
        return Ok(gen_family(t)?);
    }
    if let Some(path) = selector.strip_prefix("file:") {
        let text = read_text(Path::new(path))?;
        return parse_cwg_many(&text).with_context(|| format!("malformed family file {path}"));
    }
    bail!("family must be F:<t> or file:<path>, got {selector:?}")
}

fn family_order(selector: &str) -> Result<usize> {
    selector.strip_prefix("F:")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| anyhow!("density needs a family of the form F:<t>, got {selector:?}"))
}

fn required(v: Option<usize>, flag: &str, what: &str) -> Result<usize> {
    v.ok_or_else(|| anyhow!("{what} requires --{flag}"))
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<i32> {
    use Construction::*;
    let name = clap::ValueEnum::to_possible_value(&a.construction)
        .map_or_else(String::new, |v| v.get_name().to_string());
    let built: Vec<PartitionedConstruction> = match a.construction {
        Rk | Bk | RkMinus => {
            let n = required(a.n, "n", &name)?;
            let g = match a.construction {
                Rk => gen_rk(n)?,
                Bk => gen_bk(n)?,
                _ => gen_rk_minus(n)?,
            };
            vec![whole(g)]
        }
        Gab => vec![whole(gen_gab(
            required(a.n, "n", &name)?,
            required(a.b, "b", &name)?,
        )?)],
        Family => gen_family(required(a.t, "t", &name)?)?
            .into_iter()
            .map(whole)
            .collect(),
        Hk => vec![gen_hk(
            required(a.q, "q", &name)?,
            required(a.b, "b", &name)?,
            required(a.k, "k", &name)?,
        )?],
        J => vec![gen_j(required(a.r, "r", &name)?)?],
        OddExtremal => vec![gen_odd_extremal(required(a.r, "r", &name)?, a.scale)?],
        EvenExtremal => vec![gen_even_extremal(required(a.r, "r", &name)?, a.scale)?],
        EhssBlowup => vec![gen_ehss_blowup(required(a.r, "r", &name)?)?],
        BlowUp => {
            let pattern = a
                .pattern
                .as_deref()
                .ok_or_else(|| anyhow!("blow-up requires --pattern"))?;
            vec![blow_up(&read_graph(pattern)?, &a.sizes)?]
        }
    };
    let text: Vec<String> = built.iter().map(|c| c.graph.to_cwg()).collect();
    let text = text.join("\n");
    if let Some(p) = &a.parts {
        let parts: Vec<&Vec<Part>> = built.iter().map(|c| &c.parts).collect();
        let body = if parts.len() == 1 {
            json!(parts[0])
        } else {
            json!(parts)
        };
        fs::write(p, serde_json::to_string_pretty(&body)? + "\n")
            .with_context(|| format!("cannot write {}", p.display()))?;
    }
    if cli.json {
        if let Some(p) = &a.output {
            write_out(Some(p), &text)?;
        }
        let graphs: Vec<Value> = built
            .iter()
            .map(|c| json!({"order": c.graph.order(), "graph": c.graph, "parts": c.parts}))
            .collect();
        let body = json!({
            "construction": name,
            "output": a.output.as_ref().map(|p| p.display().to_string()),
            "graphs": graphs,
        });
        emit(cli, "gen", &body, String::new)?;
    } else {
        write_out(a.output.as_deref(), &text)?;
    }
    Ok(EXIT_OK)
}

fn whole(graph: ColoredGraph) -> PartitionedConstruction {
    let n = graph.order();
    PartitionedConstruction {
        graph,
        parts: vec![Part {
            name: "V".into(),
            start: 0,
            end: n,
        }],
    }
}

fn check(cli: &Cli, a: &CheckArgs) -> Result<i32> {
    let family = parse_family(&a.family)?;
    let g = read_graph(&a.graph)?;
    let violation = check_free(&g, &family);
    let body = json!({"free": violation.is_none(), "family": a.family, "violation": violation});
    emit(cli, "check", &body, || match &violation {
        None => format!("free of {}\n", a.family),
        Some(v) => format!(
            "contains member {} of {} at vertices {:?}\n",
            v.member, a.family, v.embedding.map
        ),
    })?;
    Ok(if violation.is_none() {
        EXIT_OK
    } else {
        EXIT_FOUND
    })
}

fn hom(cli: &Cli, a: &HomArgs) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let mut opts = HomOptions::default();
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    let parse_r = |s: &str| -> Result<usize> {
        s.parse()
            .with_context(|| format!("bad target {:?}", a.target))
    };
    let search = if let Some(r) = a.target.strip_prefix("rkminus:") {
        find_hom_rk_minus_with(&g, parse_r(r)?, opts)?
    } else if let Some(r) = a.target.strip_prefix("rk:") {
        find_hom_rk_with(&g, parse_r(r)?, opts)?
    } else if let Some(path) = a.target.strip_prefix("file:") {
        find_hom_general_with(&g, &read_graph(Path::new(path))?, opts)?
    } else {
        bail!(
            "target must be rk:<r>, rkminus:<r> or file:<path>, got {:?}",
            a.target
        );
    };
    let body = json!({
        "target": a.target,
        "exists": search.exists(),
        "certificate": search.certificate(),
        "nodes": search.nodes,
    });
    emit(cli, "hom", &body, || match &search.outcome {
        HomOutcome::Found { certificate } => {
            format!(
                "homomorphism to {} with classes {:?}\n",
                a.target, certificate.classes
            )
        }
        HomOutcome::NotFound => format!("no homomorphism to {}\n", a.target),
        HomOutcome::BudgetExceeded => format!(
            "undecided: node budget exhausted after {} nodes\n",
            search.nodes
        ),
    })?;
    Ok(EXIT_OK)
}

fn analyze_cmd(cli: &Cli, a: &AnalyzeArgs) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let report = analyze(&g, a.r)?;
    let violations = report.violations();
    let body = json!({"report": report, "violations": violations});
    emit(cli, "analyze", &body, || {
        let p = &report.preconditions;
        let mut out = format!(
            "n = {}, r = {}, min degree {}, cutoff {} ({}·n), F_{}-free {}, extremal {}\n",
            report.n,
            a.r,
            p.min_degree.map_or("-".into(), |d| d.to_string()),
            p.degree_cutoff,
            p.threshold,
            2 * a.r,
            p.family_free,
            p.extremal
        );
        out += &format!(
            "wicked triangles {}, blue wicked {}, insecure blue {}, insecure green {}, J embeds {}\n",
            report.wicked_triangles.len(),
            report.blue_wicked.len(),
            report.insecure_blue_edges.len(),
            report.insecure_green_edges.len(),
            report.j_embedding.is_some()
        );
        out += &format!("classes m = {}, blue classes s = {}\n", report.m, report.s);
        out += &format!("decomposition: {:?}\n", report.decomposition);
        for v in &violations {
            out += &format!("violation: {v}\n");
        }
        out
    })?;
    Ok(if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_FOUND
    })
}

fn complete(cli: &Cli, a: &CompleteArgs) -> Result<i32> {
    let family = parse_family(&a.family)?;
    let g = read_graph(&a.graph)?;
    let policy = match a.policy {
        Policy::Lex => CompletionPolicy::Lexicographic,
        Policy::Shuffled => CompletionPolicy::Shuffled { seed: a.seed },
    };
    let c = extremal_completion_with(&g, &family, policy)?;
    let raised = g
        .pair_weights()
        .zip(c.pair_weights())
        .filter(|(x, y)| x != y)
        .count();
    if cli.json {
        if let Some(p) = &a.output {
            write_out(Some(p), &c.to_cwg())?;
        }
        let body = json!({"graph": c, "policy": policy, "pairs_raised": raised, "edge_weight": c.edge_weight_sum()});
        emit(cli, "complete", &body, String::new)?;
    } else {
        write_out(a.output.as_deref(), &c.to_cwg())?;
    }
    Ok(EXIT_OK)
}

fn search_threads(cli: &Cli) -> usize {
    cli.threads.unwrap_or(0)
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Raw => Mode::Raw,
        ModeArg::Iso => Mode::IsomorphFree,
    }
}

fn kind(k: Kind) -> TheoremKind {
    match k {
        Kind::Odd => TheoremKind::Odd,
        Kind::Even => TheoremKind::Even,
    }
}

fn emit_report(cli: &Cli, command: &str, mut report: SearchReport) -> Result<i32> {
    if !cli.timing {
        report.stats.wall_time_ms = None;
    }
    let status = match report.outcome {
        Outcome::Counterexample { .. } => EXIT_FOUND,
        Outcome::Inconclusive { .. } => EXIT_ERROR,
        Outcome::Verified | Outcome::Value { .. } => EXIT_OK,
    };
    emit(cli, command, &report, || report_text(&report))?;
    Ok(status)
}

fn report_text(r: &SearchReport) -> String {
    let p = &r.parameters;
    let mut out = String::new();
    match &r.outcome {
        Outcome::Verified => out += "verified\n",
        Outcome::Counterexample {
            graph, diagnosis, ..
        } => {
            out += &format!("counterexample: {diagnosis}\n{}", graph.to_cwg());
        }
        Outcome::Inconclusive { graph } => {
            out += &format!(
                "inconclusive: homomorphism search budget exhausted on\n{}",
                graph.to_cwg()
            );
        }
        Outcome::Value { value, witness } => {
            match value {
                Some(v) => out += &format!("value {v}\n"),
                None => out += "no qualifying graph\n",
            }
            if let Some(w) = witness {
                out += &w.to_cwg();
            }
        }
    }
    out += &format!("n = {}", p.n);
    if let Some(r) = p.r {
        out += &format!(", r = {r}");
    }
    if let Some(f) = &p.family {
        out += &format!(", family {f}");
    }
    if let Some(t) = &r.threshold {
        out += &format!(", threshold {} (degree cutoff {})", t.threshold, t.cutoff);
    }
    out += &format!(
        "\nenumerated {}, passing hypothesis {}\n",
        r.stats.enumerated, r.stats.passing_hypothesis
    );
    if let Some(ms) = r.stats.wall_time_ms {
        out += &format!("wall time {ms} ms\n");
    }
    if let Some(note) = &r.note {
        out += &format!("note: {note}\n");
    }
    out
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<i32> {
    let report = verify_theorem(kind(a.theorem), a.r, a.n, mode(a.mode), search_threads(cli))?;
    emit_report(cli, "verify", report)
}

fn ex(cli: &Cli, a: &ExArgs) -> Result<i32> {
    let family = parse_family(&a.family)?;
    let mut report = compute_ex(a.n, &family, a.cap)?;
    report.parameters.family = Some(a.family.clone());
    emit_report(cli, "ex", report)
}

fn threshold(cli: &Cli, a: &ThresholdArgs) -> Result<i32> {
    let report = empirical_threshold(a.n, a.r, kind(a.kind), mode(a.mode), search_threads(cli))?;
    emit_report(cli, "threshold", report)
}

fn density(cli: &Cli, a: &DensityArgs) -> Result<i32> {
    let t = a.family.as_deref().map(family_order).transpose()?;
    let constructions = a
        .graphs
        .iter()
        .map(|p| Ok((p.display().to_string(), read_graph(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let rows = density_report(t, &constructions);
    let body = json!({"family": a.family, "rows": rows});
    emit(cli, "density", &body, || {
        rows.iter()
            .map(|r| {
                let reference = r
                    .reference
                    .map_or("-".to_string(), |f| format!("{f} ({:.4})", f.to_f64()));
                format!(
                    "{}: n = {}, e = {}, 2e/n^2 = {} ({:.4}), reference {reference}\n",
                    r.name,
                    r.n,
                    r.edge_weight,
                    r.density,
                    r.density.to_f64()
                )
            })
            .collect()
    })?;
    Ok(EXIT_OK)
}

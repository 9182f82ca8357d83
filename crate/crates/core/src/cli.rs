//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 usage or input error, 2 size or budget limit, 3 failed
//! verification.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{placement_for_bound, time_lower_bound, y_set_diameter, TimeBound};
use crate::error::{Error, Result};
use crate::game::{initial_placements, play, GameState};
use crate::graph::{generate, parse_edge_list, FamilySpec, Graph, Vertex};
use crate::solver::{
    agents_attractor, classify, classify_config, OptimalAdversary, OptimalAgents, PlacementRule,
};
use crate::strategies::{
    cut_vertex_lift, cycle_adversary, greedy_to_source_agents, grid_alternating_adversary,
    rendezvous_tree_agents, restrict_to_subgraph, sts_adversary, AdversaryStrategy, AgentsStrategy,
    RandomAgents, Tiebreak,
};
use crate::symmetry::has_k_sts;
use crate::verify::{run_criterion, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "broadcast",
    version,
    about = "Agents-versus-adversary broadcast games on graphs"
)]
struct Cli {
    /// Worker threads for the solver (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Placement {
    Adversary,
    Agents,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the winner with one knowledgeable and k-1 ignorant agents.
    Classify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        agents: usize,
        #[arg(long, value_enum, default_value = "adversary")]
        placement: Placement,
    },
    /// Worst-case times for x ignorant and y knowledgeable agents.
    Config {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        ignorant: usize,
        #[arg(long)]
        knowledgeable: usize,
    },
    /// Play two strategies against each other.
    Play {
        #[arg(long)]
        graph: String,
        /// cycle, cycle:SEED, grid-alt, sts, restrict:FILE, cutlift:V, optimal
        #[arg(long)]
        adversary: String,
        /// greedy-source, rendezvous:V, random:SEED, optimal
        #[arg(long = "agents-strategy")]
        agents_strategy: String,
        /// Starting state such as "K:0;I:3,4".
        #[arg(long)]
        start: Option<String>,
        /// Agent count when no start state is given.
        #[arg(long)]
        agents: Option<usize>,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Search for a k-spanning-tree-symmetry witness.
    CheckSts {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Set-diameter and separation bounds.
    Bounds {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// Write a graph as an edge list.
    Generate {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::TooLarge { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn load_graph(spec: &str) -> Result<Graph> {
    generate(&spec.parse::<FamilySpec>()?)
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string(value).expect("output serializes");
    writeln!(out, "{text}").map_err(|e| io_error("stdout", e))
}

fn io_error(path: impl Into<String>, e: std::io::Error) -> Error {
    Error::Io {
        path: path.into(),
        message: e.to_string(),
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(path.display().to_string(), e))
}

fn parse_vertex(s: &str) -> Result<Vertex> {
    s.parse()
        .map_err(|_| Error::Precondition(format!("bad vertex '{s}'")))
}

fn build_adversary(name: &str, g: &Graph, k: usize) -> Result<Box<dyn AdversaryStrategy>> {
    let (head, arg) = name
        .split_once(':')
        .map_or((name, None), |(h, a)| (h, Some(a)));
    Ok(match (head, arg) {
        ("cycle", None) => Box::new(cycle_adversary(Tiebreak::LowestNeighbor)),
        ("cycle", Some(seed)) => Box::new(cycle_adversary(Tiebreak::Seeded(
            seed.parse()
                .map_err(|_| Error::Precondition(format!("bad seed '{seed}'")))?,
        ))),
        ("grid-alt", None) => {
            let (rows, cols) = grid_dimensions(g)?;
            Box::new(grid_alternating_adversary(rows, cols)?.1)
        }
        ("sts", None) => match has_k_sts(g, k)? {
            Some(w) => Box::new(sts_adversary(w)),
            None => return Err(Error::Precondition(format!("graph has no {k}-STS witness"))),
        },
        ("restrict", Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let sub = parse_edge_list(&text)?;
            Box::new(restrict_to_subgraph(
                Box::new(cycle_adversary(Tiebreak::LowestNeighbor)),
                &sub,
                g,
            )?)
        }
        ("cutlift", Some(v)) => {
            let v = parse_vertex(v)?;
            let block = first_side(g, v)?;
            let (block_graph, _) = g.induced(&block);
            let table = agents_attractor(&block_graph, k)?;
            let inner = Box::new(OptimalAdversary::new(Arc::new(table)));
            Box::new(cut_vertex_lift(inner, g, &block, v)?)
        }
        ("optimal", None) => Box::new(OptimalAdversary::new(Arc::new(agents_attractor(g, k)?))),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown adversary strategy '{name}'"
            )))
        }
    })
}

fn build_agents(name: &str, g: &Graph, k: usize) -> Result<Box<dyn AgentsStrategy>> {
    let (head, arg) = name
        .split_once(':')
        .map_or((name, None), |(h, a)| (h, Some(a)));
    Ok(match (head, arg) {
        ("greedy-source", None) => Box::new(greedy_to_source_agents()),
        ("rendezvous", Some(v)) => {
            let v = parse_vertex(v)?;
            g.check_vertex(v)?;
            Box::new(rendezvous_tree_agents(v))
        }
        ("random", Some(seed)) => {
            Box::new(RandomAgents::new(seed.parse().map_err(|_| {
                Error::Precondition(format!("bad seed '{seed}'"))
            })?))
        }
        ("optimal", None) => Box::new(OptimalAgents::new(Arc::new(agents_attractor(g, k)?))),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown agents strategy '{name}'"
            )))
        }
    })
}

/// Rows and columns of a graph isomorphic-by-labels to a grid family member.
fn grid_dimensions(g: &Graph) -> Result<(usize, usize)> {
    let n = g.vertex_count();
    for rows in 2..=n {
        if n.is_multiple_of(rows) {
            let cols = n / rows;
            if generate(&FamilySpec::Grid { rows, cols })?.edges() == g.edges() {
                return Ok((rows, cols));
            }
        }
    }
    Err(Error::Precondition(
        "grid-alt needs a grid:RxC graph".into(),
    ))
}

/// `v` plus the component of `g - v` holding the smallest vertex.
fn first_side(g: &Graph, v: Vertex) -> Result<Vec<Vertex>> {
    g.check_vertex(v)?;
    let rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&w| w != v).collect();
    let (sub, local) = g.induced(&rest);
    let comps = sub.components();
    if comps.len() < 2 {
        return Err(Error::Precondition(format!(
            "vertex {v} is not a cut vertex"
        )));
    }
    let mut side: Vec<Vertex> = comps[0].iter().map(|&w| local[w]).collect();
    side.push(v);
    side.sort_unstable();
    Ok(side)
}

#[derive(Serialize)]
struct StsReport {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sets: Option<usize>,
}

#[derive(Serialize)]
struct BoundsReport {
    y_set_diameter: usize,
    placement: GameState,
    time_lower_bound: TimeBound,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Classify {
            graph,
            agents,
            placement,
        } => {
            let g = load_graph(&graph)?;
            let rule = match placement {
                Placement::Adversary => PlacementRule::AdversaryPlaces,
                Placement::Agents => PlacementRule::AgentsPlace,
            };
            emit(out, &classify(&g, agents, rule)?)?;
        }
        Command::Config {
            graph,
            ignorant,
            knowledgeable,
        } => {
            let g = load_graph(&graph)?;
            emit(out, &classify_config(&g, ignorant, knowledgeable)?)?;
        }
        Command::Play {
            graph,
            adversary,
            agents_strategy,
            start,
            agents,
            rounds,
            trace,
        } => {
            let g = load_graph(&graph)?;
            let start: Option<GameState> = start.map(|s| s.parse()).transpose()?;
            let k = match (&start, agents) {
                (Some(s), _) => s.agent_count(),
                (None, Some(k)) => k,
                (None, None) if adversary == "grid-alt" => {
                    let (rows, cols) = grid_dimensions(&g)?;
                    grid_alternating_adversary(rows, cols)?.0.agent_count()
                }
                (None, None) => {
                    return Err(Error::Precondition("give --start or --agents".into()));
                }
            };
            let mut adv = build_adversary(&adversary, &g, k)?;
            let mut ag = build_agents(&agents_strategy, &g, k)?;
            let s0 = match start {
                Some(s) => s,
                None => match adv.designated_placement(&g, k) {
                    Some(s) => s,
                    None => initial_placements(&g, k)?.remove(0),
                },
            };
            let res = play(&g, &s0, adv.as_mut(), ag.as_mut(), rounds)?;
            if let Some(path) = trace {
                write_file(&path, &res.trace_jsonl())?;
            }
            emit(out, &res.outcome)?;
        }
        Command::CheckSts { graph, k, witness } => {
            let g = load_graph(&graph)?;
            let found = has_k_sts(&g, k)?;
            if let (Some(w), Some(path)) = (&found, &witness) {
                write_file(path, &w.to_json())?;
            }
            emit(
                out,
                &StsReport {
                    found: found.is_some(),
                    sets: found.map(|w| w.entries.len()),
                },
            )?;
        }
        Command::Bounds { graph, x, y } => {
            let g = load_graph(&graph)?;
            let placement = placement_for_bound(&g, x, y)?;
            emit(
                out,
                &BoundsReport {
                    y_set_diameter: y_set_diameter(&g, y)?,
                    time_lower_bound: time_lower_bound(&g, &placement)?,
                    placement,
                },
            )?;
        }
        Command::Generate { graph, out: path } => {
            let g = load_graph(&graph)?;
            match path {
                Some(p) => write_file(&p, &g.to_edge_list())?,
                None => write!(out, "{}", g.to_edge_list()).map_err(|e| io_error("stdout", e))?,
            }
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let (mut passed, mut failed) = (0, 0);
            for id in suite.criteria() {
                for r in run_criterion(id) {
                    writeln!(out, "{r}").map_err(|e| io_error("stdout", e))?;
                    if r.passed {
                        passed += 1;
                    } else {
                        failed += 1;
                    }
                }
            }
            writeln!(out, "{passed} passed, {failed} failed").map_err(|e| io_error("stdout", e))?;
            return Ok(if failed == 0 { 0 } else { 3 });
        }
    }
    Ok(0)
}

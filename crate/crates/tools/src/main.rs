use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nambu_core::graph::cocycle::{bracket, differential, grading, is_cocycle};
use nambu_core::graph::{GraphSum, KGraph, MicroGraph, UGraph};
use nambu_core::identity::{check_fundamental_identity, Sample};
use nambu_core::micro_expand::{enumerate_micrographs, leibniz_expand};
use nambu_core::multivector::nambu_bivector;
use nambu_core::orient::orient;
use nambu_core::relations::{find_vanishing, nullspace, synonym_classes, Evaluate};
use nambu_core::trivialize::{
    casimir_velocity, combine, rho_velocity, solve_coboundary, symmetry_check,
    verify_field_transport, verify_leibniz_match, RhoVelocity, Transform,
};
use nambu_core::{Multivector, Q};
use nambu_tools::format::{
    num_q::write_q, poly_to_json, rats_to_json, GraphFile, GraphList, MultivectorJson,
};
use nambu_tools::manifest::{sha256_hex, sibling, Manifest};
use nambu_tools::{data, parallel, suite};
use rand_chacha::rand_core::SeedableRng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "nambu",
    version,
    about = "Kontsevich graph flows on Nambu-determinant Poisson brackets"
)]
struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "NAMBU_THREADS")]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run manifest path; defaults to `<out>.manifest.json`, or the cache
    /// directory when writing to stdout.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Directory for manifests of stdout runs and for checkpoints.
    #[arg(long, global = true, env = "NAMBU_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cocycle checks and the graph bracket.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Orient a cocycle into Kontsevich graphs.
    Orient {
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value_t = 2)]
        sinks: usize,
    },
    /// The Nambu bi-vector, its Jacobiator, or the fundamental identity.
    Nambu {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = NambuShow::Bivector)]
        show: NambuShow,
        /// Bracket arity for `--show identity`.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Leibniz expansion of Kontsevich graphs into micro-graphs.
    Microexpand {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        dim: usize,
    },
    /// All micro-graphs with `arity` sinks and `blocks` Nambu blocks.
    Enumerate {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Vanishing graphs, synonym classes or linear relations.
    Relations {
        #[arg(long)]
        graphs: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Report::Vanishing)]
        report: Report,
    },
    /// Solve `Q = [[P, X]]` over an ansatz of vector-field graphs.
    Trivialize {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        ansatz: String,
        /// Allow d >= 4, checkpointing every evaluation to the cache directory.
        #[arg(long)]
        large: bool,
        /// Random prime-point checks of the residual.
        #[arg(long, default_value_t = 4)]
        spot_checks: u64,
    },
    /// Casimir and density velocities of a flow.
    Velocities {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        dim: usize,
    },
    /// Behaviour of P and of a flow under a Casimir transformation.
    Symmetry {
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        dim: usize,
        /// `flip:i` (a_i -> -a_i) or `swap:i,j` (a_i <-> a_j), 1-based.
        #[arg(long, value_parser = parse_transform)]
        transform: Transform,
    },
    /// Embed micro-graphs one dimension up.
    Embed {
        #[arg(long)]
        graph: String,
        /// Also report vanishing before and after.
        #[arg(long)]
        check: bool,
    },
    /// Run the golden acceptance suite.
    Fixtures {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Grading and the differential of a graph sum.
    Check {
        #[arg(long)]
        cocycle: String,
    },
    /// The graded bracket of two graph sums.
    Bracket {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NambuShow {
    Bivector,
    Jacobiator,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Vanishing,
    Synonyms,
    Nullspace,
}

fn parse_transform(s: &str) -> Result<Transform, String> {
    let bad = || format!("expected flip:i or swap:i,j, got {s:?}");
    let (kind, args) = s.split_once(':').ok_or_else(bad)?;
    let nums: Vec<usize> = args
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match (kind, nums.as_slice()) {
        ("flip", &[i]) => Ok(Transform::Flip(i)),
        ("swap", &[i, j]) => Ok(Transform::Swap(i, j)),
        _ => Err(bad()),
    }
}

/// Inputs read during a run, for the manifest.
#[derive(Default)]
struct Inputs(Vec<(String, Vec<u8>)>);

impl Inputs {
    fn graphs(&mut self, name: &str) -> Result<GraphFile> {
        let f = data::resolve(name)?;
        self.0.push((name.into(), serde_json::to_vec(&f)?));
        Ok(f)
    }

    fn cocycle(&mut self, name: &str) -> Result<GraphSum<UGraph>> {
        self.graphs(name)?.to_list()?.cocycle()
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir.clone().unwrap_or_else(|| {
        std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
            .unwrap_or_else(std::env::temp_dir)
            .join("nambu")
    })
}

fn with_summary(file: &GraphFile, summary: Value) -> Result<Value> {
    let mut v = serde_json::to_value(file)?;
    v["summary"] = summary;
    Ok(v)
}

/// Graphs the relation and trivialisation commands accept.
trait Graph: Evaluate + std::fmt::Display + Sync + Send {}
impl<G: Evaluate + std::fmt::Display + Sync + Send> Graph for G {}

fn ident<G: Graph>(g: &G) -> String {
    g.to_string()
}

fn list_with<T>(
    list: &GraphList,
    k: impl FnOnce(&[(Q, KGraph)]) -> Result<T>,
    m: impl FnOnce(&[(Q, MicroGraph)]) -> Result<T>,
) -> Result<T> {
    match list {
        GraphList::Kontsevich(v) => k(v),
        GraphList::Nambu(v) => m(v),
        GraphList::Cocycle(_) => {
            bail!("expected Kontsevich graphs or micro-graphs, found a cocycle")
        }
    }
}

fn relations_report<G: Graph>(terms: &[(Q, G)], dim: usize, report: Report) -> Result<Value> {
    let gs: Vec<G> = terms.iter().map(|(_, g)| g.clone()).collect();
    let entry = |i: usize| json!({ "index": i, "graph": ident(&gs[i]) });
    Ok(match report {
        Report::Vanishing => {
            let v = find_vanishing(&gs, dim)?;
            json!({
                "report": "vanishing",
                "d": dim,
                "graphs": gs.len(),
                "zero_by_sign": v.zero_by_sign.iter().map(|&i| entry(i)).collect::<Vec<_>>(),
                "nonzero_vanishing": v.nonzero_vanishing.iter().map(|&i| entry(i)).collect::<Vec<_>>(),
                "nonvanishing": v.nonvanishing.len(),
            })
        }
        Report::Synonyms => {
            let classes = synonym_classes(&gs, dim)?;
            let classes: Vec<Value> = classes
                .iter()
                .map(|c| {
                    let members: Vec<Value> = c
                        .members
                        .iter()
                        .map(|&(i, q)| json!({ "index": i, "graph": ident(&gs[i]), "coefficient": write_q(&q) }))
                        .collect();
                    json!({ "members": members })
                })
                .collect();
            json!({ "report": "synonyms", "d": dim, "graphs": gs.len(), "classes": classes })
        }
        Report::Nullspace => {
            let ns = nullspace(&gs, dim)?;
            json!({
                "report": "nullspace",
                "d": dim,
                "graphs": gs.iter().map(ident).collect::<Vec<_>>(),
                "rank": gs.len() - ns.len(),
                "relations": ns.iter().map(|v| rats_to_json(v)).collect::<Vec<_>>(),
            })
        }
    })
}

/// `c · φ(g)` for every term, evaluated at `dim`.
fn fields(list: &GraphList, dim: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
    fn eval<G: Graph>(v: &[(Q, G)], dim: usize) -> Result<(Vec<String>, Vec<Multivector>)> {
        let names = v.iter().map(|(_, g)| ident(g)).collect();
        let fs = parallel::map_ordered(v, |(c, g)| Ok(g.evaluate_at(dim)?.scale(*c)))?;
        Ok((names, fs))
    }
    list_with(list, |v| eval(v, dim), |v| eval(v, dim))
}

/// Loads the JSON checkpoint at `path`, or computes and stores it.
fn checkpointed(path: &Path, compute: impl FnOnce() -> Result<Multivector>) -> Result<Multivector> {
    if let Ok(text) = std::fs::read_to_string(path) {
        let j: MultivectorJson = serde_json::from_str(&text)
            .with_context(|| format!("checkpoint {}", path.display()))?;
        return j.to_multivector();
    }
    let m = compute()?;
    let tmp = path.with_extension("tmp");
    std::fs::write(
        &tmp,
        serde_json::to_vec(&MultivectorJson::from_multivector(&m))?,
    )?;
    std::fs::rename(&tmp, path)?;
    Ok(m)
}

fn large_fields(
    list: &GraphList,
    dim: usize,
    dir: &Path,
) -> Result<(Vec<String>, Vec<Multivector>)> {
    fn eval<G: Graph>(
        v: &[(Q, G)],
        dim: usize,
        dir: &Path,
    ) -> Result<(Vec<String>, Vec<Multivector>)> {
        let names: Vec<String> = v.iter().map(|(_, g)| ident(g)).collect();
        let fs = parallel::map_ordered(v, |(c, g)| {
            let key = sha256_hex(format!("{g}@{dim}").as_bytes());
            let m = checkpointed(&dir.join(format!("field-{key}.json")), || {
                Ok(g.evaluate_at(dim)?)
            })?;
            Ok(m.scale(*c))
        })?;
        Ok((names, fs))
    }
    list_with(list, |v| eval(v, dim, dir), |v| eval(v, dim, dir))
}

fn run(cli: &Cli, inputs: &mut Inputs, seed: &mut Option<u64>) -> Result<(Value, bool)> {
    let mut ok = true;
    let doc = match &cli.command {
        Command::Cocycle(CocycleCmd::Check { cocycle }) => {
            let s = inputs.cocycle(cocycle)?;
            let d = differential(&s);
            json!({
                "terms": s.len(),
                "grading": grading(&s).map(|(v, e)| json!({ "vertices": v, "edges": e })),
                "is_cocycle": is_cocycle(&s).is_ok(),
                "differential": GraphFile::from_cocycle(None, &d),
            })
        }
        Command::Cocycle(CocycleCmd::Bracket { left, right }) => {
            let (a, b) = (inputs.cocycle(left)?, inputs.cocycle(right)?);
            let br = bracket(&a, &b);
            with_summary(
                &GraphFile::from_cocycle(Some("bracket"), &br),
                json!({ "terms": br.len(), "grading": grading(&br) }),
            )?
        }
        Command::Orient { cocycle, sinks } => {
            let o = orient(&inputs.cocycle(cocycle)?, *sinks)?;
            let file =
                GraphFile::from_kontsevich(Some("orientation"), o.sum.iter().map(|(g, c)| (g, *c)));
            with_summary(
                &file,
                json!({
                    "directed_graphs": o.directed_graph_count(),
                    "bivector_classes": o.bivector_classes().len(),
                    "multiplicities": o.multiplicities(),
                }),
            )?
        }
        Command::Nambu {
            dim,
            show,
            arity,
            samples,
            seed: s,
        } => match show {
            NambuShow::Bivector => {
                serde_json::to_value(MultivectorJson::from_multivector(&nambu_bivector(*dim)?))?
            }
            NambuShow::Jacobiator => {
                let j = nambu_bivector(*dim)?.jacobiator()?;
                ok = j.is_zero();
                json!({ "d": dim, "jacobiator_zero": ok, "jacobiator": MultivectorJson::from_multivector(&j) })
            }
            NambuShow::Identity => {
                *seed = Some(*s);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*s);
                let mut held = 0;
                for _ in 0..*samples {
                    let sample = Sample::random(*dim, *arity, &mut rng);
                    held += usize::from(check_fundamental_identity(*dim, *arity, &sample)?);
                }
                ok = held == *samples;
                json!({ "d": dim, "arity": arity, "seed": s, "samples": samples, "held": held })
            }
        },
        Command::Microexpand { graph, dim } => {
            let s = inputs.graphs(graph)?.to_list()?.kontsevich()?;
            let e = leibniz_expand(&s, *dim)?;
            let file = GraphFile::from_nambu(Some("expansion"), e.sum.iter().map(|(g, c)| (g, *c)));
            with_summary(
                &file,
                json!({
                    "leibniz_terms": e.terms.len(),
                    "repeated_target_terms": e.repeated,
                    "distinct_graphs": e.support.len(),
                    "zero_by_sign": e.zero.len(),
                    "nonzero_terms": e.sum.len(),
                }),
            )?
        }
        Command::Enumerate { arity, blocks, dim } => {
            let gs = enumerate_micrographs(*arity, *blocks, *dim)?;
            let file = GraphFile::from_nambu(Some("enumeration"), gs.iter().map(|g| (g, Q::ONE)));
            with_summary(&file, json!({ "count": gs.len() }))?
        }
        Command::Relations {
            graphs,
            dim,
            report,
        } => {
            let list = inputs.graphs(graphs)?.to_list()?;
            list_with(
                &list,
                |v| relations_report(v, *dim, *report),
                |v| relations_report(v, *dim, *report),
            )?
        }
        Command::Trivialize {
            cocycle,
            dim,
            ansatz,
            large,
            spot_checks,
        } => {
            ensure!(*dim <= 3 || *large, "d = {dim} needs --large");
            let start = Instant::now();
            let g = inputs.cocycle(cocycle)?;
            let list = inputs.graphs(ansatz)?.to_list()?;
            let p = nambu_bivector(*dim)?;
            let (names, fs, q) = if *large {
                let key = sha256_hex(&serde_json::to_vec(&GraphFile::from_cocycle(None, &g))?);
                let dir = cache_dir(cli).join("trivialize");
                std::fs::create_dir_all(&dir)?;
                let q = checkpointed(&dir.join(format!("flow-{key}-d{dim}.json")), || {
                    parallel::gamma_flow(&g, *dim)
                })?;
                let (names, fs) = large_fields(&list, *dim, &dir)?;
                (names, fs, q)
            } else {
                let (names, fs) = fields(&list, *dim)?;
                (names, fs, parallel::gamma_flow(&g, *dim)?)
            };
            let t = solve_coboundary(&q, &p, &fs)?;
            let mut doc = json!({
                "d": dim,
                "status": if t.is_solved() { "solved" } else { "unsolvable" },
                "rows": t.rows,
                "columns": t.columns,
                "rank": t.rank,
                "gauge_dimension": t.gauge.len(),
            });
            if let Some(sol) = &t.solution {
                let x = combine(sol, &fs)?;
                let residual = q.sub(&p.schouten(&x)?);
                let coefficients: Vec<Value> = sol
                    .iter()
                    .zip(&names)
                    .enumerate()
                    .filter(|(_, (c, _))| *c.numer() != 0.into())
                    .map(|(i, (c, n))| json!({ "index": i, "graph": n, "coefficient": rats_to_json(std::slice::from_ref(c))[0] }))
                    .collect();
                doc["coefficients"] = json!(coefficients);
                doc["residual_zero"] = json!(residual.is_zero());
                if *large {
                    *seed = Some(0);
                    let spots = (0..*spot_checks)
                        .all(|s| residual.eval_mod_p(s, nambu_core::modp::PRIME).is_empty());
                    doc["spot_checks"] = json!({ "count": spot_checks, "all_zero": spots });
                }
                if *dim >= 3 {
                    let adot = (1..=dim - 2)
                        .map(|i| casimir_velocity(&g, *dim, i))
                        .collect::<nambu_core::Result<Vec<_>>>()?;
                    doc["field_transport"] = match rho_velocity(&q, &adot)? {
                        RhoVelocity::Exact(rhodot) => {
                            json!(verify_field_transport(&x, &rhodot, &adot)?)
                        }
                        RhoVelocity::NotDivisible { .. } => Value::Null,
                    };
                }
                ok = residual.is_zero();
            } else if let Some((key, c)) = &t.witness {
                doc["witness"] = json!({ "entry": format!("{key:?}"), "value": rats_to_json(std::slice::from_ref(c))[0] });
            }
            doc["wall_time_ms"] = json!(start.elapsed().as_millis());
            doc
        }
        Command::Velocities { cocycle, dim } => {
            ensure!(*dim >= 3, "velocities need d >= 3");
            let g = inputs.cocycle(cocycle)?;
            let adot = (1..=dim - 2)
                .map(|i| casimir_velocity(&g, *dim, i))
                .collect::<nambu_core::Result<Vec<_>>>()?;
            let q = parallel::gamma_flow(&g, *dim)?;
            let casimirs: Vec<Value> = adot.iter().map(|a| json!(poly_to_json(a, *dim))).collect();
            match rho_velocity(&q, &adot)? {
                RhoVelocity::Exact(rhodot) => {
                    ok = verify_leibniz_match(&q, &rhodot, &adot)?;
                    json!({
                        "d": dim,
                        "casimir_velocities": casimirs,
                        "rho_velocity": poly_to_json(&rhodot, *dim),
                        "exact_division": true,
                        "leibniz_match": ok,
                    })
                }
                RhoVelocity::NotDivisible { component, witness } => {
                    ok = false;
                    json!({
                        "d": dim,
                        "casimir_velocities": casimirs,
                        "exact_division": false,
                        "component": format!("{component:?}"),
                        "witness": format!("{witness:?}"),
                    })
                }
            }
        }
        Command::Symmetry {
            cocycle,
            dim,
            transform,
        } => {
            let q = parallel::gamma_flow(&inputs.cocycle(cocycle)?, *dim)?;
            let s = symmetry_check(&q, *transform)?;
            json!({
                "d": dim,
                "transform": format!("{transform:?}"),
                "bivector_flips": s.bivector_flips,
                "flow_invariant": s.flow_invariant,
            })
        }
        Command::Embed { graph, check } => {
            let s = inputs.graphs(graph)?.to_list()?.nambu()?;
            let terms: Vec<(MicroGraph, Q)> = s.iter().map(|(g, c)| (g.embed(), *c)).collect();
            let file = GraphFile::from_nambu(Some("embedding"), terms.iter().map(|(g, c)| (g, *c)));
            let mut summary = json!({ "terms": terms.len() });
            if *check {
                let before: Vec<(&MicroGraph, &Q)> = s.iter().collect();
                let vanish = parallel::map_ordered(&before, |(g, _)| {
                    Ok((
                        g.evaluate_at(g.dim())?.is_zero(),
                        g.embed().evaluate_at(g.dim() + 1)?.is_zero(),
                    ))
                })?;
                ok = vanish.iter().all(|(a, b)| !a || *b);
                summary["vanishing"] = json!(vanish
                    .iter()
                    .map(|(a, b)| json!({ "before": a, "after": b }))
                    .collect::<Vec<_>>());
                summary["vanishing_preserved"] = json!(ok);
            }
            with_summary(&file, summary)?
        }
        Command::Fixtures { suite: name } => {
            let ids = suite::suite(name).with_context(|| {
                format!(
                    "unknown suite {name:?}; known: {}",
                    suite::SUITES.join(", ")
                )
            })?;
            let mut checks = Vec::new();
            for id in ids {
                let c = suite::run_check(id);
                eprintln!("{c}");
                ok &= c.status != suite::Status::Fail;
                checks.push(json!({
                    "id": c.id,
                    "title": c.title,
                    "status": c.status.to_string(),
                    "detail": c.detail,
                    "elapsed_ms": c.elapsed.as_millis(),
                }));
            }
            json!({ "suite": name, "checks": checks, "passed": ok })
        }
    };
    Ok((doc, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    parallel::init_threads(threads);
    let start = Instant::now();
    let mut manifest = Manifest::start(std::env::args().collect(), threads);
    let mut inputs = Inputs::default();
    let mut seed = None;
    let outcome = run(&cli, &mut inputs, &mut seed).and_then(|(doc, ok)| {
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        let manifest_path = match (&cli.manifest, &cli.out) {
            (Some(m), _) => m.clone(),
            (None, Some(out)) => sibling(out),
            (None, None) => cache_dir(&cli).join("manifests").join(format!(
                "{}-{}.json",
                manifest.started_unix,
                std::process::id()
            )),
        };
        match &cli.out {
            Some(out) => {
                if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
                manifest.output(&out.display().to_string(), text.as_bytes());
            }
            None => {
                print!("{text}");
                manifest.output("stdout", text.as_bytes());
            }
        }
        for (name, bytes) in &inputs.0 {
            manifest.input(name, bytes);
        }
        manifest.seed = seed;
        manifest.finish(start.elapsed());
        manifest.write(&manifest_path)?;
        Ok(ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", json!({ "error": "validation failed" }));
            ExitCode::from(2)
        }
        Err(e) => {
            let chain: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            eprintln!("{}", json!({ "error": e.to_string(), "causes": chain }));
            ExitCode::FAILURE
        }
    }
}

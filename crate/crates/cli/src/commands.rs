use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use hdv_core::behavior::{self, QueryMode, SequenceModel};
use hdv_core::context::{self, ContextCodebooks, ContextProfile};
use hdv_core::events::{self, ActionEvent};
use hdv_core::harness::{self, MarkovGenerator, SweepConfig};
use hdv_core::rolefiller::ProfileFile;
use hdv_core::style::{self, StyleCodebooks, StyleMapping, StyleProfile};
use hdv_core::{default_tau, Codebook, CodebookKind, HdvError};
use serde::Serialize;

use crate::args::*;
use crate::report::*;
use crate::Usage;

/// What a command produced: the JSON report, the human-readable text and
/// whether every result cleared the confidence threshold.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub confident: bool,
}

impl Outcome {
    fn new(report: &impl Serialize, text: String) -> Result<Self> {
        Ok(Self {
            json: serde_json::to_value(report)?,
            text,
            confident: true,
        })
    }

    fn confident(mut self, confident: bool) -> Self {
        self.confident = confident;
        self
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Train(a) => train(g, a),
        Command::Predict(a) => predict(g, a),
        Command::Eval(a) => eval(g, a),
        Command::Merge(a) => merge(a),
        Command::Codebook(c) => codebook(g, c),
        Command::Generate(a) => generate(g, a),
        Command::Style(c) => style_command(g, c),
        Command::Context(c) => context_command(g, c),
        Command::Sweep(a) => sweep(g, a),
    }
}

fn tau(g: &GlobalArgs, dimension: usize) -> f64 {
    g.tau.unwrap_or_else(|| default_tau(dimension))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn score_line(name: &str, score: f64, confident: bool, tau: f64) -> String {
    if confident {
        format!("{name} {score:.6}\n")
    } else {
        format!("{name} {score:.6} (below tau {tau:.6})\n")
    }
}

fn pair_list(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn read_log(path: &Path) -> Result<Vec<ActionEvent>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    events::read_events(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path) -> Result<SequenceModel> {
    SequenceModel::load(path).with_context(|| format!("loading model {}", path.display()))
}

fn train(g: &GlobalArgs, a: &TrainArgs) -> Result<Outcome> {
    if a.n < 2 {
        return Err(Usage(format!("--n must be at least 2, got {}", a.n)).into());
    }
    let events = read_log(&a.log)?;
    let codebook = match &a.codebook {
        Some(path) => {
            let cb = Codebook::load(path).with_context(|| format!("loading codebook {}", path.display()))?;
            if cb.kind() != CodebookKind::Action {
                return Err(anyhow!(
                    "{} is a {} codebook, expected action",
                    path.display(),
                    cb.kind()
                ));
            }
            cb
        }
        None => Codebook::new(CodebookKind::Action, g.seed, g.dimension)?,
    };
    let all = events::sessions(&events);
    let used = all.iter().filter(|s| s.actions.len() >= a.n).count();
    let model = behavior::train(&events, a.n, codebook)?;
    model
        .save(&a.model)
        .with_context(|| format!("writing {}", a.model.display()))?;
    let report = TrainReport {
        model: display(&a.model),
        n: model.order(),
        dimension: model.dim(),
        seed: model.seed(),
        sessions: all.len(),
        sessions_used: used,
        windows_trained: model.windows_trained(),
        actions: model.codebook().len(),
    };
    let text = format!(
        "trained {} windows from {}/{} sessions over {} actions into {}\n",
        report.windows_trained, report.sessions_used, report.sessions, report.actions, report.model
    );
    Outcome::new(&report, text)
}

fn predict(g: &GlobalArgs, a: &PredictArgs) -> Result<Outcome> {
    let model = load_model(&a.model)?;
    let tau = tau(g, model.dim());
    let mode = if a.raw { QueryMode::Raw } else { QueryMode::Normalized };
    let result = model.predict_with(&a.prefix, tau, mode)?;
    let text = score_line(&result.name, result.score, result.confident, tau);
    let confident = result.confident;
    let report = PredictReport {
        prefix: a.prefix.clone(),
        mode: if a.raw { "raw" } else { "normalized" }.into(),
        tau,
        result,
    };
    Ok(Outcome::new(&report, text)?.confident(confident))
}

fn eval(g: &GlobalArgs, a: &EvalArgs) -> Result<Outcome> {
    let model = load_model(&a.model)?;
    let events = read_log(&a.log)?;
    let n = model.order();
    let mut windows = Vec::new();
    let mut skipped = 0;
    for session in events::sessions(&events) {
        for w in session.actions.windows(n) {
            if w.iter().all(|name| model.codebook().contains(name)) {
                windows.push(w.to_vec());
            } else {
                skipped += 1;
            }
        }
    }
    if windows.is_empty() {
        return Err(anyhow!(
            "no evaluable window of {n} known actions in {}",
            a.log.display()
        ));
    }
    let tau = tau(g, model.dim());
    let row = harness::evaluate(&model, &windows, tau)?;
    let report = EvalReport {
        windows: windows.len(),
        skipped,
        tau,
        accuracy: row.accuracy,
        mean_match_score: row.mean_match_score,
        mean_top_distractor_score: row.mean_top_distractor_score,
    };
    let text = format!(
        "windows {}\nskipped {}\naccuracy {:.6}\nmean_match_score {:.6}\nmean_top_distractor_score {:.6}\n",
        report.windows, report.skipped, report.accuracy, report.mean_match_score, report.mean_top_distractor_score
    );
    Outcome::new(&report, text)
}

fn merge(a: &MergeArgs) -> Result<Outcome> {
    let mut merged = load_model(&a.models[0])?;
    for path in &a.models[1..] {
        let other = load_model(path)?;
        merged = merged
            .merge(&other)
            .with_context(|| format!("merging {}", path.display()))?;
    }
    merged
        .save(&a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    let report = MergeReport {
        out: display(&a.out),
        models: a.models.len(),
        windows_trained: merged.windows_trained(),
        actions: merged.codebook().len(),
    };
    let text = format!(
        "merged {} models: {} windows over {} actions into {}\n",
        report.models, report.windows_trained, report.actions, report.out
    );
    Outcome::new(&report, text)
}

fn codebook(g: &GlobalArgs, c: &CodebookCommand) -> Result<Outcome> {
    let (path, cb) = match c {
        CodebookCommand::New { kind, names, out } => {
            let cb = Codebook::with_names(*kind, g.seed, g.dimension, names)?;
            cb.save(out).with_context(|| format!("writing {}", out.display()))?;
            (out, cb)
        }
        CodebookCommand::Show { codebook } => {
            let cb = Codebook::load(codebook).with_context(|| format!("loading codebook {}", codebook.display()))?;
            (codebook, cb)
        }
    };
    let report = CodebookReport {
        path: display(path),
        kind: cb.kind(),
        dimension: cb.dim(),
        seed: cb.seed(),
        names: cb.names().to_vec(),
    };
    let mut text = format!(
        "{}: {} codebook, dimension {}, seed {}, {} names\n",
        report.path,
        report.kind,
        report.dimension,
        report.seed,
        report.names.len()
    );
    for name in &report.names {
        text.push_str(&format!("  {name}\n"));
    }
    Outcome::new(&report, text)
}

fn generate(g: &GlobalArgs, a: &GenerateArgs) -> Result<Outcome> {
    let names = harness::alphabet(&a.prefix, a.alphabet);
    let generator = match a.fan_out {
        Some(k) => MarkovGenerator::random(names, k, g.seed.0)?,
        None => MarkovGenerator::uniform(names, g.seed.0)?,
    };
    let events = generator.generate_sessions(a.sessions, a.length)?;
    let Some(out) = &a.out else {
        let mut buf = Vec::new();
        events::write_events(&mut buf, &events)?;
        // The log itself is the output; it is JSON in either mode.
        return Ok(Outcome {
            json: serde_json::Value::Null,
            text: String::from_utf8(buf)?,
            confident: true,
        });
    };
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut writer = std::io::BufWriter::new(file);
    events::write_events(&mut writer, &events)?;
    writer.flush()?;
    let report = GenerateReport {
        out: display(out),
        events: events.len(),
        sessions: a.sessions,
        alphabet: a.alphabet,
    };
    let text = format!(
        "wrote {} events in {} sessions to {}\n",
        report.events, report.sessions, report.out
    );
    Outcome::new(&report, text)
}

fn profile_outcome(path: Option<&Path>, file: ProfileFile) -> Result<Outcome> {
    let pairs = file.pair_tuples();
    let report = ProfileReport {
        path: path.map(display),
        profile: file,
    };
    let mut text = if pairs.is_empty() {
        "no evidence\n".to_string()
    } else {
        format!("{}\n", pair_list(&pairs))
    };
    if let Some(p) = path {
        text.push_str(&format!("wrote {}\n", p.display()));
    }
    Outcome::new(&report, text)
}

fn load_profile_file(path: &Path) -> Result<ProfileFile> {
    ProfileFile::load(path).with_context(|| format!("loading {}", path.display()))
}

fn load_mapping(path: &Path) -> Result<(MappingFile, StyleMapping, StyleCodebooks)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MappingFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.version != 1 {
        return Err(HdvError::Version(file.version).into());
    }
    let (mapping, cbs) = build_style_mapping(&file.source, &file.target)?;
    Ok((file, mapping, cbs))
}

fn build_style_mapping(source: &ProfileFile, target: &ProfileFile) -> Result<(StyleMapping, StyleCodebooks)> {
    let mut cbs = StyleCodebooks::standard(source.seed, source.dimension)?;
    let source = StyleProfile::from_file(source, &mut cbs).context("source profile")?;
    let target = StyleProfile::from_file(target, &mut cbs).context("target profile")?;
    Ok((style::build_mapping(&source, &target)?, cbs))
}

fn style_command(g: &GlobalArgs, c: &StyleCommand) -> Result<Outcome> {
    match c {
        StyleCommand::Profile { pairs, out } => {
            let mut cbs = StyleCodebooks::standard(g.seed, g.dimension)?;
            let file = style::build_profile(pairs, &mut cbs)?.to_file();
            file.save(out).with_context(|| format!("writing {}", out.display()))?;
            profile_outcome(Some(out), file)
        }
        StyleCommand::Infer { input, out } => {
            let source = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let mut cbs = StyleCodebooks::standard(g.seed, g.dimension)?;
            let file = style::infer_style(&source, &mut cbs)?.to_file();
            if let Some(out) = out {
                if file.pairs.is_empty() {
                    return Err(anyhow!("no style evidence in {}", input.display()));
                }
                file.save(out).with_context(|| format!("writing {}", out.display()))?;
            }
            profile_outcome(out.as_deref(), file)
        }
        StyleCommand::Map { source, target, out } => {
            let file = MappingFile {
                version: 1,
                source: load_profile_file(source)?,
                target: load_profile_file(target)?,
            };
            let (mapping, _) = build_style_mapping(&file.source, &file.target)?;
            std::fs::write(out, serde_json::to_string_pretty(&file)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
            let text = format!(
                "{} -> {}\nwrote {}\n",
                pair_list(&file.source.pair_tuples()),
                pair_list(&file.target.pair_tuples()),
                out.display()
            );
            let report = MappingReport {
                out: display(out),
                identity: mapping.is_identity(),
                mapping: file,
            };
            Outcome::new(&report, text)
        }
        StyleCommand::Translate { mapping, value } => {
            let (_, mapping, cbs) = load_mapping(mapping)?;
            let tau = tau(g, cbs.dim());
            let result = style::translate_value(value, &mapping, &cbs.values, tau)?;
            let text = score_line(&result.name, result.score, result.confident, tau);
            let confident = result.confident;
            let report = TranslateReport {
                value: value.clone(),
                tau,
                result,
            };
            Ok(Outcome::new(&report, text)?.confident(confident))
        }
        StyleCommand::Restyle { mapping, input, output } => {
            let (_, mapping, cbs) = load_mapping(mapping)?;
            let source = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let tau = tau(g, cbs.dim());
            let outcome = style::restyle(&source, &mapping, &cbs, tau)?;
            let confident = outcome.unresolved().next().is_none();
            let changes: Vec<ChangeReport> = outcome
                .changes
                .iter()
                .map(|c| ChangeReport {
                    attribute: c.attribute.clone(),
                    from: c.from.clone(),
                    to: c.to.clone(),
                    score: c.score,
                    confident: c.confident,
                    applied: c.applied,
                })
                .collect();
            let mut summary = String::new();
            for c in &changes {
                let to = c.to.as_deref().unwrap_or("?");
                let status = if c.applied {
                    "applied"
                } else if c.confident && c.to.is_some() {
                    "unchanged"
                } else {
                    "unresolved"
                };
                summary.push_str(&format!(
                    "{}: {} -> {} {:.6} {status}\n",
                    c.attribute, c.from, to, c.score
                ));
            }
            let text = match output {
                Some(path) => {
                    std::fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display()))?;
                    summary + &format!("wrote {}\n", path.display())
                }
                None => {
                    eprint!("{summary}");
                    outcome.text.clone()
                }
            };
            let report = RestyleReport {
                output: output.as_deref().map(display),
                tau,
                changes,
                text: output.is_none().then_some(outcome.text),
            };
            Ok(Outcome::new(&report, text)?.confident(confident))
        }
    }
}

/// Loads contexts into one shared codebook space, taken from the first file.
fn load_contexts(paths: &[&Path]) -> Result<(Vec<ContextProfile>, ContextCodebooks)> {
    let files = paths.iter().map(|p| load_profile_file(p)).collect::<Result<Vec<_>>>()?;
    let mut cbs = ContextCodebooks::new(files[0].seed, files[0].dimension)?;
    let mut contexts = Vec::with_capacity(files.len());
    for (file, path) in files.iter().zip(paths) {
        contexts
            .push(ContextProfile::from_file(file, &mut cbs).with_context(|| format!("context {}", path.display()))?);
    }
    Ok((contexts, cbs))
}

fn pair_arrays(pairs: impl IntoIterator<Item = (String, String)>) -> Vec<[String; 2]> {
    pairs.into_iter().map(|(k, v)| [k, v]).collect()
}

fn context_command(g: &GlobalArgs, c: &ContextCommand) -> Result<Outcome> {
    match c {
        ContextCommand::Encode { pairs, out } => {
            let mut cbs = ContextCodebooks::new(g.seed, g.dimension)?;
            let file = context::encode_context(pairs, &mut cbs)?.to_file();
            file.save(out).with_context(|| format!("writing {}", out.display()))?;
            profile_outcome(Some(out), file)
        }
        ContextCommand::Query {
            context: path,
            role,
            filler,
            candidates,
        } => {
            let (mut contexts, mut cbs) = load_contexts(&[path])?;
            let ctx = contexts.remove(0);
            let tau = tau(g, cbs.dim());
            // Names outside the context are still valid questions; registering
            // them lets the answer come back as non-confident.
            let (by, key, result) = match (role, filler) {
                (Some(role), _) => {
                    cbs.roles.register(role)?;
                    for name in candidates {
                        cbs.fillers.register(name)?;
                    }
                    ("role", role, context::query_role(&ctx, role, &cbs, tau)?)
                }
                (None, Some(filler)) => {
                    cbs.fillers.register(filler)?;
                    for name in candidates {
                        cbs.roles.register(name)?;
                    }
                    ("filler", filler, context::query_filler(&ctx, filler, &cbs, tau)?)
                }
                (None, None) => return Err(Usage("one of --role or --filler is required".into()).into()),
            };
            let text = score_line(&result.name, result.score, result.confident, tau);
            let confident = result.confident;
            let report = QueryReport {
                by: by.into(),
                key: key.clone(),
                tau,
                result,
            };
            Ok(Outcome::new(&report, text)?.confident(confident))
        }
        ContextCommand::Diff { a, b } => {
            let (contexts, _) = load_contexts(&[a, b])?;
            let similarity = context::context_similarity(&contexts[0], &contexts[1])?;
            let set = |c: &ContextProfile| c.pairs().iter().cloned().collect::<BTreeSet<_>>();
            let (sa, sb) = (set(&contexts[0]), set(&contexts[1]));
            let report = DiffReport {
                similarity,
                shared: pair_arrays(sa.intersection(&sb).cloned()),
                only_a: pair_arrays(sa.difference(&sb).cloned()),
                only_b: pair_arrays(sb.difference(&sa).cloned()),
            };
            let list = |v: &[[String; 2]]| v.iter().map(|[k, f]| format!("{k}={f}")).collect::<Vec<_>>().join(", ");
            let text = format!(
                "similarity {similarity:.6}\nshared: {}\nonly a: {}\nonly b: {}\n",
                list(&report.shared),
                list(&report.only_a),
                list(&report.only_b)
            );
            Outcome::new(&report, text)
        }
        ContextCommand::Transition { from, to, apply } => {
            let mut paths: Vec<&Path> = vec![from, to];
            if let Some(p) = apply {
                paths.push(p);
            }
            let (contexts, cbs) = load_contexts(&paths)?;
            let (source, target) = (&contexts[0], &contexts[1]);
            let moving = if apply.is_some() { &contexts[2] } else { source };
            let moved = context::apply_transition(&context::transition_map(source, target)?, moving)?;
            let tau = tau(g, cbs.dim());
            let mut decoded = Vec::new();
            for (role, expected) in target.pairs() {
                let unbound = cbs.roles.lookup(role)?.bind(&moved)?;
                decoded.push(DecodedRole {
                    role: role.clone(),
                    expected: expected.clone(),
                    result: cbs.fillers.cleanup(&unbound, tau)?,
                });
            }
            let report = TransitionReport {
                tau,
                similarity_to_target: moved.similarity(&target.normalized()?)?,
                decoded,
            };
            let mut text = format!("similarity to target {:.6}\n", report.similarity_to_target);
            for d in &report.decoded {
                text.push_str(&format!(
                    "{}: {}",
                    d.role,
                    score_line(&d.result.name, d.result.score, d.result.confident, tau)
                ));
            }
            let confident = report.decoded.iter().all(|d| d.result.confident);
            Ok(Outcome::new(&report, text)?.confident(confident))
        }
    }
}

fn sweep(g: &GlobalArgs, a: &SweepArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut config: SweepConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    if g.tau.is_some() {
        config.tau = g.tau;
    }
    let report = harness::sweep(&config)?;
    let csv = report.to_csv();
    let json = SweepJson {
        config: report.config.clone(),
        rows: report.rows.clone(),
    };
    let text = match &a.out {
        Some(path) => {
            std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            format!("wrote {} rows to {}\n", report.rows.len(), path.display())
        }
        None => csv,
    };
    Outcome::new(&json, text)
}

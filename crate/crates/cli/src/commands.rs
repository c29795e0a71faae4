use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use kpsum::clustering::{gold_groups, rand_index, ClusterAssignment, RandScores};
use kpsum::corpus::Corpus;
use kpsum::coverage_datasets::{generate_suite, suite_from_jsonl, suite_to_jsonl};
use kpsum::evaluation::{evaluate as evaluate_summary, EvaluationReport};
use kpsum::matching::Matcher;
use kpsum::pipeline::{summarize_topic, TopicSummary};
use kpsum::selection::GeneratedSummary;
use kpsum::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{file_stem, OutputDir};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs `f` for every item in parallel and returns the results in input
/// order, or the error of the first failing item.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

pub fn summarize(config: &RunConfig) -> Result<()> {
    let corpus = config.data.load()?;
    let mut topics: Vec<&str> = corpus.topics().iter().map(|t| t.id.as_str()).collect();
    topics.sort_unstable();
    if !config.topics.is_empty() {
        let unknown: Vec<&str> = config
            .topics
            .iter()
            .map(String::as_str)
            .filter(|t| corpus.topic(t).is_none())
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Usage(format!("unknown topic ids: {}", unknown.join(", "))));
        }
        topics.retain(|t| config.topics.iter().any(|s| s == t));
    }

    let matcher = Matcher::new(&config.matcher, Some(&corpus))?;
    let pipeline = config.pipeline();
    let results: Vec<TopicSummary> = par_map(&topics, |t| summarize_topic(&corpus, t, &pipeline, &matcher))?;

    let mut out = OutputDir::create(config.output_dir())?;
    for (topic, result) in topics.iter().zip(&results) {
        let stem = file_stem(topic);
        out.write(&format!("summary_{stem}.json"), result.summary.to_json_string().as_bytes())?;
        out.write(&format!("clusters_{stem}.json"), result.clusters.to_json_string().as_bytes())?;
        println!(
            "{topic}: {} key points from {} clusters",
            result.summary.entries.len(),
            result.clusters.len()
        );
    }
    out.finish("summarize", config, &config.data.input_paths())
}

/// One summary to evaluate, with where it came from.
struct Item {
    label: String,
    level: Option<f64>,
    summary: GeneratedSummary,
}

fn load_items(paths: &[PathBuf], corpus: &Corpus) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for path in paths {
        let text = read(path)?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        if path.extension().is_some_and(|e| e == "jsonl") {
            let suite = suite_from_jsonl(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            for p in suite {
                if corpus.topic(&p.spec.topic_id).is_none() {
                    items.push(Item {
                        label: name.clone(),
                        level: Some(p.spec.level),
                        summary: GeneratedSummary {
                            topic_id: p.spec.topic_id.clone(),
                            method: None,
                            entries: Vec::new(),
                        },
                    });
                    continue;
                }
                items.push(Item {
                    label: format!("{name}#{}", p.sample_index),
                    level: Some(p.spec.level),
                    summary: p.to_summary(corpus)?,
                });
            }
        } else {
            let summary = GeneratedSummary::from_json_str(&text)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            items.push(Item {
                label: name,
                level: None,
                summary,
            });
        }
    }
    let unknown: BTreeSet<&str> = items
        .iter()
        .map(|i| i.summary.topic_id.as_str())
        .filter(|t| corpus.topic(t).is_none())
        .collect();
    if !unknown.is_empty() {
        return Err(Error::Usage(format!(
            "summaries refer to unknown topic ids: {}",
            unknown.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    let missing: BTreeSet<&str> = items
        .iter()
        .flat_map(|i| i.summary.entries.iter())
        .map(|e| e.argument_id.as_str())
        .filter(|id| corpus.argument(id).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Usage(format!(
            "summaries refer to unknown argument ids: {}",
            missing.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(items)
}

#[derive(Serialize)]
struct LabeledReport {
    summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
    #[serde(flatten)]
    report: EvaluationReport,
}

/// Means over a group of reports; a metric is absent when no report has it.
#[derive(Serialize)]
struct MeanRow {
    group: String,
    summaries: usize,
    predicted_coverage: Option<f64>,
    actual_coverage: Option<f64>,
    redundancy: Option<f64>,
    avg_words: Option<f64>,
    rouge1: Option<f64>,
    rouge2: Option<f64>,
    rouge_l: Option<f64>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let present: Vec<f64> = values.flatten().collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

fn mean_row(group: String, reports: &[&LabeledReport]) -> MeanRow {
    let m = |f: &dyn Fn(&EvaluationReport) -> Option<f64>| mean(reports.iter().map(|r| f(&r.report)));
    MeanRow {
        group,
        summaries: reports.len(),
        predicted_coverage: m(&|r| r.predicted_coverage.as_ref().map(|p| p.coverage)),
        actual_coverage: m(&|r| r.actual_coverage),
        redundancy: m(&|r| r.redundancy),
        avg_words: m(&|r| Some(r.avg_words)),
        rouge1: m(&|r| r.rouge1),
        rouge2: m(&|r| r.rouge2),
        rouge_l: m(&|r| r.rouge_l),
    }
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{:.2}", 100.0 * x))
}

fn print_table(reports: &[LabeledReport], means: &[MeanRow]) {
    println!(
        "{:<28} {:<10} {:>7} {:>9} {:>9} {:>9} {:>8} {:>7} {:>7} {:>7}",
        "summary", "topic", "entries", "pred cov", "act cov", "redund", "words", "R1", "R2", "RL"
    );
    for r in reports {
        let e = &r.report;
        println!(
            "{:<28} {:<10} {:>7} {:>9} {:>9} {:>9} {:>8.2} {:>7} {:>7} {:>7}",
            r.summary,
            e.topic_id,
            e.entries,
            pct(e.predicted_coverage.as_ref().map(|p| p.coverage)),
            pct(e.actual_coverage),
            pct(e.redundancy),
            e.avg_words,
            pct(e.rouge1),
            pct(e.rouge2),
            pct(e.rouge_l)
        );
    }
    for m in means {
        println!(
            "{:<28} {:<10} {:>7} {:>9} {:>9} {:>9} {:>8} {:>7} {:>7} {:>7}",
            format!("mean {}", m.group),
            "",
            m.summaries,
            pct(m.predicted_coverage),
            pct(m.actual_coverage),
            pct(m.redundancy),
            m.avg_words.map_or_else(|| "-".into(), |w| format!("{w:.2}")),
            pct(m.rouge1),
            pct(m.rouge2),
            pct(m.rouge_l)
        );
    }
}

#[derive(Serialize)]
struct EvaluationOutput<'a> {
    reports: &'a [LabeledReport],
    means: &'a [MeanRow],
}

pub fn evaluate(config: &RunConfig, summaries: &[PathBuf]) -> Result<()> {
    let corpus = config.data.load()?;
    let items = load_items(summaries, &corpus)?;
    let modes = config.evaluation.modes();
    let matcher = if modes.predicted {
        Some(Matcher::new(&config.matcher, Some(&corpus))?)
    } else {
        None
    };
    let reports = par_map(&items, |item| {
        let report = evaluate_summary(&item.summary, &corpus, matcher.as_ref(), modes, &config.evaluation.rouge)?;
        Ok(LabeledReport {
            summary: item.label.clone(),
            level: item.level,
            report,
        })
    })?;

    let mut means = vec![mean_row("all".into(), &reports.iter().collect::<Vec<_>>())];
    let mut levels: Vec<f64> = reports.iter().filter_map(|r| r.level).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    for level in levels {
        let group: Vec<&LabeledReport> = reports.iter().filter(|r| r.level == Some(level)).collect();
        means.push(mean_row(format!("level {level}"), &group));
    }

    print_table(&reports, &means);
    let mut out = OutputDir::create(config.output_dir())?;
    let json = serde_json::to_string_pretty(&EvaluationOutput {
        reports: &reports,
        means: &means,
    })
    .expect("evaluation output serializes");
    out.write("evaluation.json", json.as_bytes())?;
    let mut inputs = config.data.input_paths();
    inputs.extend(summaries.iter().map(PathBuf::as_path));
    out.finish("evaluate", config, &inputs)
}

/// `0.75` → `75`, `0.125` → `12_5`.
fn level_name(level: f64) -> String {
    let s = format!("{:.6}", level * 100.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.replace('.', "_")
}

pub fn sample_coverage(config: &RunConfig) -> Result<()> {
    let mut names = BTreeSet::new();
    for &level in &config.sampling.levels {
        if !names.insert(level_name(level)) {
            return Err(Error::Config(format!("coverage level {level} is listed twice")));
        }
    }
    let corpus = config.data.load()?;
    let suite = generate_suite(
        &corpus,
        &config.sampling.levels,
        config.sample_size(),
        config.sampling.samples,
        config.seed,
    )?;
    let mut out = OutputDir::create(config.output_dir())?;
    for &level in &config.sampling.levels {
        let part: Vec<_> = suite.iter().filter(|p| p.spec.level == level).cloned().collect();
        let name = format!("coverage_{}.jsonl", level_name(level));
        out.write(&name, suite_to_jsonl(&part).as_bytes())?;
        println!("{name}: {} pseudo-summaries", part.len());
    }
    out.finish("sample-coverage", config, &config.data.input_paths())
}

#[derive(Serialize)]
struct ClusterEvalRow {
    assignment: String,
    clusters: usize,
    #[serde(flatten)]
    scores: RandScores,
}

pub fn cluster_eval(config: &RunConfig, assignments: &[PathBuf]) -> Result<()> {
    let corpus = config.data.load()?;
    let (gold, catch_all) = gold_groups(&corpus);
    let mut rows = Vec::new();
    for path in assignments {
        let assignment = ClusterAssignment::from_json_str(&read(path)?)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let scores = rand_index(&assignment, &gold, &catch_all)?;
        rows.push(ClusterEvalRow {
            assignment: path.display().to_string(),
            clusters: assignment.len(),
            scores,
        });
    }

    let width = rows.iter().map(|r| r.assignment.len()).max().unwrap_or(0).max(12);
    print!("{:<14}", "");
    for r in &rows {
        print!(" {:>width$}", r.assignment);
    }
    println!();
    type Cell = fn(&ClusterEvalRow) -> String;
    let metric_rows: [(&str, Cell); 4] = [
        ("rand", |r| format!("{:.2}", r.scores.rand)),
        ("adjusted rand", |r| format!("{:.2}", r.scores.adjusted_rand)),
        ("clusters", |r| r.clusters.to_string()),
        ("retained", |r| r.scores.retained.to_string()),
    ];
    for (name, cell) in metric_rows {
        print!("{name:<14}");
        for r in &rows {
            print!(" {:>width$}", cell(r));
        }
        println!();
    }

    let mut out = OutputDir::create(config.output_dir())?;
    let json = serde_json::to_string_pretty(&rows).expect("cluster evaluation serializes");
    out.write("cluster_eval.json", json.as_bytes())?;
    let mut inputs = config.data.input_paths();
    inputs.extend(assignments.iter().map(PathBuf::as_path));
    out.finish("cluster-eval", config, &inputs)
}

//! Command-line front end: load datasets, hierarchies, and queries; print
//! trees, rules, scores, and comparison reports.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use entrotree::dataset::{load_dataset, parse_schema, Aggregate, Dataset};
use entrotree::dmql::{self, Catalog, CatalogEntry, ExecDefaults, QueryOutput};
use entrotree::hierarchy::{aoi, load_hierarchy, AoiConfig, ConceptHierarchy};
use entrotree::induction::{build_tree, DecisionNode, InductionConfig, Mode, PrioritySpec};
use entrotree::restructure::{
    height_balance, height_balance_priority, node_merge, PriorityAssignment,
};
use entrotree::rules::{compare_trees, extract_rules, ComparisonReport};
use entrotree::{expected_info, score_attributes, DecisionTree};

#[derive(Parser)]
#[command(name = "entrotree", version, about = "Rule induction and priority decision trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InduceMode {
    Baseline,
    Priority,
}

#[derive(Subcommand)]
enum Command {
    /// Run a query against named datasets.
    Query {
        /// Query text; omit when using --file.
        query: Option<String>,
        /// Read the query from a file instead.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Register a dataset: NAME=CSV_PATH (repeatable).
        #[arg(long = "data")]
        data: Vec<String>,
        /// Schema for a dataset: NAME=SCHEMA_PATH (repeatable).
        #[arg(long = "schema")]
        schema: Vec<String>,
        /// Attach a hierarchy file: NAME=PATH (repeatable).
        #[arg(long = "hierarchy")]
        hierarchy: Vec<String>,
        /// Numeric column to sum through generalization (repeatable).
        #[arg(long = "sum")]
        sum: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
    /// Build a decision tree from a dataset.
    Induce {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        /// Override the schema's class attribute.
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value_t = InduceMode::Baseline)]
        mode: InduceMode,
        /// Priority attributes, most important first.
        #[arg(long, value_delimiter = ',')]
        priority: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Merge equivalent unprotected sibling subtrees.
        #[arg(long)]
        merge: bool,
        /// Reorder children by subtree height.
        #[arg(long)]
        balance: bool,
        /// Ranks at or below this are protected during merging
        /// (default: every priority attribute).
        #[arg(long)]
        checkpoint: Option<u32>,
    },
    /// Print entropy, gain, and uncertainty for every attribute.
    Score {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        class: Option<String>,
    },
    /// Generalize a dataset through its concept hierarchies.
    Generalize {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long = "hierarchy")]
        hierarchy: Vec<PathBuf>,
        /// Maximum distinct values an attribute may keep.
        #[arg(long, default_value_t = 4)]
        threshold: usize,
        #[arg(long = "sum")]
        sum: Vec<String>,
    },
    /// Compare the baseline tree against a priority tree.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        class: Option<String>,
        /// Priority attributes, most important first.
        #[arg(long, value_delimiter = ',', required = true)]
        priority: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Query {
            query,
            file,
            data,
            schema,
            hierarchy,
            sum,
            epsilon,
            kappa,
        } => cmd_query(query, file, &data, &schema, &hierarchy, &sum, epsilon, kappa),
        Command::Induce {
            data,
            schema,
            class,
            mode,
            priority,
            epsilon,
            kappa,
            merge,
            balance,
            checkpoint,
        } => cmd_induce(
            &data, &schema, class, mode, &priority, epsilon, kappa, merge, balance, checkpoint,
        ),
        Command::Score { data, schema, class } => cmd_score(&data, &schema, class),
        Command::Generalize {
            data,
            schema,
            hierarchy,
            threshold,
            sum,
        } => cmd_generalize(&data, &schema, &hierarchy, threshold, &sum),
        Command::Compare {
            data,
            schema,
            class,
            priority,
            epsilon,
            kappa,
        } => cmd_compare(&data, &schema, class, &priority, epsilon, kappa),
    }
}

fn read_dataset(data: &Path, schema: &Path, class: Option<&str>) -> Result<Dataset> {
    let schema_text = fs::read_to_string(schema)
        .with_context(|| format!("cannot read schema {}", schema.display()))?;
    let csv_text =
        fs::read_to_string(data).with_context(|| format!("cannot read data {}", data.display()))?;
    let mut d = load_dataset(&csv_text, parse_schema(&schema_text)?)?;
    if let Some(c) = class {
        d.set_class(c)?;
    }
    Ok(d)
}

fn split_pair(spec: &str) -> Result<(&str, &str)> {
    spec.split_once('=')
        .ok_or_else(|| anyhow!("expected NAME=PATH, got '{spec}'"))
}

/// Catalog from NAME=PATH flags plus the optional ENTROTREE_CATALOG
/// directory (every `X.csv`/`X.schema` pair registers dataset X; every
/// `*.hier` file attaches to all datasets found there).
fn build_catalog(data: &[String], schema: &[String], hierarchy: &[String]) -> Result<Catalog> {
    let mut csvs: HashMap<String, PathBuf> = HashMap::new();
    let mut schemas: HashMap<String, PathBuf> = HashMap::new();
    let mut hiers: Vec<(Option<String>, PathBuf)> = Vec::new();

    if let Ok(dir) = std::env::var("ENTROTREE_CATALOG") {
        let dir = PathBuf::from(dir);
        for entry in fs::read_dir(&dir)
            .with_context(|| format!("cannot read catalog directory {}", dir.display()))?
        {
            let path = entry?.path();
            let (Some(stem), Some(ext)) = (
                path.file_stem().and_then(|s| s.to_str()).map(String::from),
                path.extension().and_then(|s| s.to_str()).map(String::from),
            ) else {
                continue;
            };
            match ext.as_str() {
                "csv" => {
                    csvs.insert(stem, path);
                }
                "schema" => {
                    schemas.insert(stem, path);
                }
                "hier" => hiers.push((None, path)),
                _ => {}
            }
        }
    }
    for spec in data {
        let (name, path) = split_pair(spec)?;
        csvs.insert(name.to_string(), PathBuf::from(path));
    }
    for spec in schema {
        let (name, path) = split_pair(spec)?;
        schemas.insert(name.to_string(), PathBuf::from(path));
    }
    for spec in hierarchy {
        let (name, path) = split_pair(spec)?;
        hiers.push((Some(name.to_string()), PathBuf::from(path)));
    }

    let mut catalog = Catalog::new();
    for (name, csv) in &csvs {
        let schema_path = schemas
            .get(name)
            .ok_or_else(|| anyhow!("dataset {name} has no schema"))?;
        let dataset = read_dataset(csv, schema_path, None)?;
        let mut hierarchies: Vec<ConceptHierarchy> = Vec::new();
        for (target, path) in &hiers {
            if target.as_deref().map_or(true, |t| t == name) {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read hierarchy {}", path.display()))?;
                hierarchies.push(load_hierarchy(&text)?);
            }
        }
        catalog.insert(name, CatalogEntry { dataset, hierarchies });
    }
    Ok(catalog)
}

#[allow(clippy::too_many_arguments)]
fn cmd_query(
    query: Option<String>,
    file: Option<PathBuf>,
    data: &[String],
    schema: &[String],
    hierarchy: &[String],
    sum: &[String],
    epsilon: f64,
    kappa: f64,
) -> Result<()> {
    let text = match (query, file) {
        (Some(q), None) => q,
        (None, Some(path)) => fs::read_to_string(&path)
            .with_context(|| format!("cannot read query {}", path.display()))?,
        _ => bail!("supply the query text or --file, not both"),
    };
    let catalog = build_catalog(data, schema, hierarchy)?;
    let mut defaults = ExecDefaults {
        epsilon,
        kappa,
        ..ExecDefaults::default()
    };
    for s in sum {
        defaults = defaults.with_sum(s);
    }
    let parsed = dmql::parse(&text)?;
    let result = dmql::execute(&parsed, &catalog, &defaults)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    match result.output {
        QueryOutput::Generalized(d) => print!("{}", render_table(&d)),
        QueryOutput::Classified {
            tree,
            rules,
            report,
            merge_log,
            ..
        } => {
            print!("{}", render_tree(&tree.root));
            println!();
            println!("rules:");
            for r in &rules {
                println!("  {}", r.render());
            }
            println!();
            print!("{}", render_report(&report));
            for line in &merge_log {
                println!("merge: {line}");
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_induce(
    data: &Path,
    schema: &Path,
    class: Option<String>,
    mode: InduceMode,
    priority: &[String],
    epsilon: f64,
    kappa: f64,
    merge: bool,
    balance: bool,
    checkpoint: Option<u32>,
) -> Result<()> {
    if mode == InduceMode::Priority && priority.is_empty() {
        bail!("--mode priority requires --priority");
    }
    let d = read_dataset(data, schema, class.as_deref())?;
    let cfg = InductionConfig {
        mode: match mode {
            InduceMode::Baseline => Mode::BaselineGain,
            InduceMode::Priority => Mode::Priority,
        },
        priorities: priority.iter().map(|p| PrioritySpec::new(p)).collect(),
        epsilon,
        kappa,
        ..InductionConfig::default()
    };
    let mut tree = build_tree(&d, &cfg)?;
    let pa = assignment(priority, checkpoint);
    if merge {
        let outcome = node_merge(&tree, &pa);
        tree = outcome.tree;
        for line in &outcome.log {
            eprintln!("merge: {line}");
        }
    }
    if balance {
        tree = height_balance(&tree);
    }
    if mode == InduceMode::Priority {
        tree = height_balance_priority(&tree, &d, &pa)?;
    }
    print!("{}", render_tree(&tree.root));
    println!();
    println!("rules:");
    for r in extract_rules(&tree) {
        println!("  {}", r.render());
    }
    Ok(())
}

fn assignment(priority: &[String], checkpoint: Option<u32>) -> PriorityAssignment {
    let mut pa = PriorityAssignment::new(checkpoint.unwrap_or(priority.len() as u32));
    for (i, p) in priority.iter().enumerate() {
        pa = pa.with_rank(p, i as u32 + 1);
    }
    pa
}

fn cmd_score(data: &Path, schema: &Path, class: Option<String>) -> Result<()> {
    let d = read_dataset(data, schema, class.as_deref())?;
    let class_info = expected_info(&d.class_distribution().counts())?;
    println!("I({}) = {:.12}", d.class_attribute().name, class_info);
    for s in score_attributes(&d)? {
        println!(
            "{}: E={:.12} Gain={:.12} U={:.12}",
            s.attribute, s.expected, s.gain, s.uncertainty
        );
    }
    Ok(())
}

fn cmd_generalize(
    data: &Path,
    schema: &Path,
    hierarchy: &[PathBuf],
    threshold: usize,
    sum: &[String],
) -> Result<()> {
    let d = read_dataset(data, schema, None)?;
    let mut hierarchies = Vec::new();
    for path in hierarchy {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read hierarchy {}", path.display()))?;
        hierarchies.push(load_hierarchy(&text)?);
    }
    let mut cfg = AoiConfig::default();
    cfg.default_threshold = threshold;
    for s in sum {
        cfg = cfg.with_aggregate(s, Aggregate::Sum);
    }
    let out = aoi(&d, &hierarchies, &cfg)?;
    print!("{}", render_table(&out));
    Ok(())
}

fn cmd_compare(
    data: &Path,
    schema: &Path,
    class: Option<String>,
    priority: &[String],
    epsilon: f64,
    kappa: f64,
) -> Result<()> {
    let d = read_dataset(data, schema, class.as_deref())?;
    let base_cfg = InductionConfig {
        epsilon,
        kappa,
        ..InductionConfig::baseline()
    };
    let baseline = build_tree(&d, &base_cfg)?;
    let cfg = InductionConfig {
        mode: Mode::Priority,
        priorities: priority.iter().map(|p| PrioritySpec::new(p)).collect(),
        ..base_cfg
    };
    let tree: DecisionTree = build_tree(&d, &cfg)?;
    let report = compare_trees(&baseline, &tree, priority);
    print!("{}", render_report(&report));
    Ok(())
}

fn render_tree(node: &DecisionNode) -> String {
    let mut out = String::new();
    render_node(node, 0, &mut out);
    out
}

fn render_node(node: &DecisionNode, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match node {
        DecisionNode::Leaf { distribution } => {
            out.push_str(&format!("{pad}{}\n", distribution.render()));
        }
        DecisionNode::Internal {
            test_attribute,
            branches,
        } => {
            out.push_str(&format!("{pad}[{test_attribute}]\n"));
            for b in branches {
                out.push_str(&format!(
                    "{pad}  {}={} ->\n",
                    test_attribute,
                    b.label.render()
                ));
                render_node(&b.child, indent + 4, out);
            }
        }
    }
}

fn render_table(d: &Dataset) -> String {
    let mut out = String::new();
    let header: Vec<&str> = d.schema().iter().map(|a| a.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push_str(",count\n");
    for (row, count) in d.tuples().iter().zip(d.counts()) {
        let cells: Vec<String> = row.iter().map(|v| v.render()).collect();
        out.push_str(&cells.join(","));
        out.push_str(&format!(",{count}\n"));
    }
    out
}

fn render_report(r: &ComparisonReport) -> String {
    let mut out = String::new();
    let line = |m: &entrotree::rules::TreeMetrics, label: &str| {
        format!(
            "{label}: height={} internal={} leaves={} rules={} attributes={}\n",
            m.height,
            m.internal_nodes,
            m.leaves,
            m.rule_count,
            if m.attributes_used.is_empty() {
                "-".to_string()
            } else {
                m.attributes_used.join(",")
            }
        )
    };
    out.push_str("comparison:\n");
    out.push_str(&format!("  {}", line(&r.a, "baseline")));
    out.push_str(&format!("  {}", line(&r.b, "priority")));
    for c in &r.requested {
        out.push_str(&format!(
            "  requested {}: baseline={} priority={}\n",
            c.attribute,
            if c.covered_in_a { "present" } else { "pruned" },
            if c.covered_in_b { "present" } else { "pruned" },
        ));
    }
    out.push_str(&format!(
        "  rules only in baseline: {}\n  rules only in priority: {}\n",
        r.only_in_a.len(),
        r.only_in_b.len()
    ));
    out
}

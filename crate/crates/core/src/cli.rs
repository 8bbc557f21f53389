//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::{parse_tolerant, DiagramError, HeegaardDiagram, RegionList};
use crate::domains::{DomainError, Domains};
use crate::floer::{plot_candidates, FloerError, NiceFloer, OrderReport, OrderResult};
use crate::nicefy::{is_nice, make_nice, NiceError, DEFAULT_MOVE_CAP};

/// Environment variable holding the log filter (e.g. `info`, `debug`).
pub const LOG_ENV: &str = "OBD_FLOER_LOG";

#[derive(Debug, Parser)]
#[command(name = "obd-floer", version, about = "Heegaard Floer hat homology, contact class and spectral order of open book diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Region-list file (JSON object, or a bare bracketed list).
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Directory for report files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Restrict to one SpinC class.
    #[arg(long, global = true)]
    pub spinc: Option<usize>,
    /// Maximum number of finger pushes.
    #[arg(long, global = true, default_value_t = DEFAULT_MOVE_CAP)]
    pub move_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write DOT graphs.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Number of pointed regions for bare-list inputs.
    #[arg(long, global = true, default_value_t = 1)]
    pub num_pointed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Generators, SpinC classes and candidate differentials of any diagram.
    Analyze,
    /// Make the diagram nice by finger moves.
    Makenice,
    /// Hat homology of a nice diagram.
    Homology,
    /// Contact class of a nice diagram.
    Contact,
    /// Contact class and spectral order of a nice diagram.
    Order,
    /// DOT graphs of the complex.
    Plot,
    /// analyze, makenice if needed, then homology and order.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Refused(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Refused(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::NotAdmissible => CliError::Refused(e.to_string()),
            DomainError::Corrupted(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<NiceError> for CliError {
    fn from(e: NiceError) -> Self {
        match e {
            NiceError::Diagram(d) => d.into(),
            NiceError::Unsupported(_) | NiceError::Stuck { .. } => CliError::Refused(e.to_string()),
            NiceError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<FloerError> for CliError {
    fn from(e: FloerError) -> Self {
        match e {
            FloerError::Diagram(d) => d.into(),
            FloerError::Domain(d) => d.into(),
            FloerError::NotNice | FloerError::NoSuchClass(..) => CliError::Refused(e.to_string()),
            FloerError::Order(_) | FloerError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Internal(format!("{}: {e}", path.display()))
}

/// Runs one command, printing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let path = cli.input.as_ref().ok_or_else(|| CliError::Input("--input is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("diagram");
    let rl = parse_tolerant(&text, stem, cli.num_pointed)?;
    let diagram = HeegaardDiagram::build(&rl)?;
    info!("read {}: {} points, {} regions", rl.name, diagram.num_points, diagram.num_regions());
    let ctx = Context { cli, name: rl.name.clone() };
    let report = match cli.command {
        Command::Analyze => ctx.analyze(diagram)?,
        Command::Makenice => ctx.makenice(&rl)?.0,
        Command::Homology => ctx.homology(&ctx.nice_engine(diagram)?)?,
        Command::Contact => ctx.contact(&ctx.nice_engine(diagram)?)?,
        Command::Order => ctx.order(&ctx.nice_engine(diagram)?)?,
        Command::Plot => ctx.plot(diagram)?,
        Command::All => ctx.all(&rl, diagram)?,
    };
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => render_text(&report),
    };
    out.write_all(rendered.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
}

struct Context<'a> {
    cli: &'a Cli,
    name: String,
}

impl Context<'_> {
    fn write(&self, file: &str, contents: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.cli.out_dir).map_err(|e| io_err(&self.cli.out_dir, e))?;
        let p = self.cli.out_dir.join(file);
        fs::write(&p, contents).map_err(|e| io_err(&p, e))?;
        info!("wrote {}", p.display());
        Ok(p)
    }

    fn classes(&self, n: usize) -> Result<Vec<usize>, CliError> {
        match self.cli.spinc {
            Some(k) if k >= n => Err(FloerError::NoSuchClass(k, n).into()),
            Some(k) => Ok(vec![k]),
            None => Ok((0..n).collect()),
        }
    }

    fn nice_engine(&self, diagram: HeegaardDiagram) -> Result<NiceFloer, CliError> {
        NiceFloer::new(diagram).map_err(|e| match e {
            FloerError::NotNice => CliError::Refused(format!("{} is not nice; run `obd-floer makenice` first", self.name)),
            e => e.into(),
        })
    }

    fn analyze(&self, diagram: HeegaardDiagram) -> Result<Value, CliError> {
        let nice = is_nice(&diagram.region_list());
        let e2_sum: i64 = diagram.euler_measures_2.iter().sum();
        let mut summary = json!({
            "name": self.name,
            "points": diagram.num_points,
            "regions": diagram.num_regions(),
            "pointed": diagram.num_pointed,
            "curves": diagram.n(),
            "b1": diagram.b1_diagram,
            "euler_characteristic": diagram.euler_characteristic(),
            "euler_measure_sum_2": e2_sum,
            "contact_points": diagram.contact_points,
            "nice": nice,
        });
        let domains = Domains::new(diagram);
        let admissible = domains.is_weakly_admissible();
        summary["generators"] = json!(domains.generators.len());
        summary["periodic_rank"] = json!(domains.periodic_rank());
        summary["weakly_admissible"] = json!(admissible);
        summary["contact_generator"] = json!(domains.contact_index());
        if !admissible {
            return Err(CliError::Refused(format!("{} is not weakly admissible", self.name)));
        }
        let table = domains.spinc_partition()?;
        let diffs = domains.index1_differentials(&table)?;
        summary["classes"] = json!(table.classes.len());
        summary["class_sizes"] = json!(table.classes.iter().map(Vec::len).collect::<Vec<_>>());
        summary["div"] = json!(table.div);
        summary["index_one_domains"] = json!(diffs.total());
        let report = domains.possible_differentials_report(&table, &diffs)?;
        self.write(&format!("{}_possible_differentials.txt", self.name), &report)?;
        if self.cli.dot {
            for c in self.classes(table.classes.len())? {
                let dot = plot_candidates(&domains, &table, &diffs, c)?;
                self.write(&format!("{}_candidates_spinc_{c}.dot", self.name), &dot)?;
            }
        }
        self.write(&format!("{}_summary.json", self.name), &(serde_json::to_string_pretty(&summary).expect("json") + "\n"))?;
        Ok(json!({ "analyze": summary }))
    }

    fn makenice(&self, rl: &RegionList) -> Result<(Value, RegionList), CliError> {
        let before = HeegaardDiagram::build(rl)?.region_size_histogram();
        let res = make_nice(rl, self.cli.move_cap)?;
        let after = HeegaardDiagram::build(&res.region_list)?.region_size_histogram();
        let file = self.write(&format!("{}_nice.json", self.name), &(res.region_list.to_json() + "\n"))?;
        self.write(&format!("{}_nice.log", self.name), &res.log())?;
        let v = json!({ "makenice": {
            "moves": res.moves.len(),
            "points": res.region_list.num_points(),
            "regions": res.region_list.regions.len(),
            "histogram_before": before,
            "histogram_after": after,
            "output": file.file_name().and_then(|s| s.to_str()),
        }});
        Ok((v, res.region_list))
    }

    fn homology(&self, f: &NiceFloer) -> Result<Value, CliError> {
        let mut classes = Vec::new();
        let mut total = 0;
        for c in self.classes(f.num_classes())? {
            let cc = f.class_complex(c)?;
            self.write(&format!("{}_differentials_in_spinc_{c}.txt", self.name), &cc.differentials_text())?;
            if self.cli.dot {
                self.write(&format!("{}_spinc_{c}.dot", self.name), &cc.to_dot(&self.name))?;
            }
            let h = cc.homology();
            total += h.total;
            classes.push(json!({ "spinc": c, "generators": cc.len(), "div": h.div, "ranks": h.ranks, "total": h.total }));
        }
        Ok(json!({ "homology": { "classes": classes, "total": total } }))
    }

    fn contact(&self, f: &NiceFloer) -> Result<Value, CliError> {
        let cc = f.class_complex(f.canonical_class()?)?;
        let split = f.sort_canonical_spinc(&cc)?;
        let cls = NiceFloer::check_contact_class(&split);
        Ok(json!({ "contact": {
            "contact_class": cls.as_str(),
            "spinc": split.class,
            "contact_generator": f.contact_generator()?,
            "graded_mod_div": split.graded_mod_div,
        }}))
    }

    fn order(&self, f: &NiceFloer) -> Result<Value, CliError> {
        let report: OrderReport = f.order_report()?;
        let v = report.to_json();
        self.write(&format!("{}_order.json", self.name), &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
        if let OrderResult::Finite { order, .. } = report.order {
            info!("order {order}");
        }
        Ok(json!({ "order": v }))
    }

    fn plot(&self, diagram: HeegaardDiagram) -> Result<Value, CliError> {
        let mut files = Vec::new();
        if is_nice(&diagram.region_list()) {
            let f = self.nice_engine(diagram)?;
            for c in self.classes(f.num_classes())? {
                let cc = f.class_complex(c)?;
                files.push(self.write(&format!("{}_spinc_{c}.dot", self.name), &cc.to_dot(&self.name))?);
            }
        } else {
            let domains = Domains::new(diagram);
            let table = domains.spinc_partition()?;
            let diffs = domains.index1_differentials(&table)?;
            for c in self.classes(table.classes.len())? {
                let dot = plot_candidates(&domains, &table, &diffs, c)?;
                files.push(self.write(&format!("{}_candidates_spinc_{c}.dot", self.name), &dot)?);
            }
        }
        let names: Vec<_> = files.iter().filter_map(|p| p.file_name().and_then(|s| s.to_str()).map(str::to_owned)).collect();
        Ok(json!({ "plot": names }))
    }

    fn all(&self, rl: &RegionList, diagram: HeegaardDiagram) -> Result<Value, CliError> {
        let mut v = self.analyze(diagram.clone())?;
        let nice = if is_nice(rl) {
            diagram
        } else {
            let (mv, nrl) = self.makenice(rl)?;
            v["makenice"] = mv["makenice"].clone();
            HeegaardDiagram::build(&nrl)?
        };
        let f = self.nice_engine(nice)?;
        v["homology"] = self.homology(&f)?["homology"].clone();
        v["order"] = self.order(&f)?["order"].clone();
        Ok(v)
    }
}

fn render_text(v: &Value) -> String {
    let mut s = String::new();
    render_into(&mut s, v, 0);
    s
}

fn render_into(s: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                match val {
                    Value::Object(_) => {
                        s.push_str(&format!("{pad}{k}:\n"));
                        render_into(s, val, depth + 1);
                    }
                    Value::Array(a) if a.iter().any(Value::is_object) => {
                        s.push_str(&format!("{pad}{k}:\n"));
                        for item in a {
                            s.push_str(&format!("{pad}  -\n"));
                            render_into(s, item, depth + 2);
                        }
                    }
                    other => s.push_str(&format!("{pad}{k}: {}\n", scalar(other))),
                }
            }
        }
        other => s.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

use std::io::Write;

use clap::ValueEnum;
use cosetcap::{OptimizationResult, RateRow, RowOutcome, StabilizerCode, ThresholdResult};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

pub struct Sink {
    out: Box<dyn Write>,
    format: Format,
    header_written: bool,
    json: Vec<Value>,
}

#[derive(Serialize)]
struct ThresholdRow<'a> {
    stack: &'a str,
    channel: String,
    threshold: f64,
    method: String,
    tolerance: f64,
    lo: f64,
    hi: f64,
    std_error: Option<f64>,
    evaluations: usize,
}

#[derive(Serialize)]
struct OutcomeRow<'a> {
    table: &'a str,
    label: &'a str,
    stack: &'a str,
    expected: f64,
    computed: Option<f64>,
    diff: Option<f64>,
    tol: f64,
    pass: bool,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct CodeRow {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<String>,
    logical_x: Vec<String>,
    logical_z: Vec<String>,
    permutation_symmetric: bool,
}

impl CodeRow {
    fn of(c: &StabilizerCode) -> Self {
        let strs = |v: &[cosetcap::PauliString]| v.iter().map(|p| p.to_string()).collect();
        CodeRow {
            name: c.name.clone(),
            n: c.n,
            k: c.k,
            generators: strs(&c.generators),
            logical_x: strs(&c.logical_x),
            logical_z: strs(&c.logical_z),
            permutation_symmetric: c.permutation_symmetric,
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:?}"))
}

impl Sink {
    pub fn new(out: Box<dyn Write>, format: Format) -> Self {
        Sink {
            out,
            format,
            header_written: false,
            json: Vec::new(),
        }
    }

    fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<(), Failure> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(!self.header_written)
            .from_writer(&mut self.out);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        self.header_written = true;
        Ok(())
    }

    /// Writes rate rows and flushes; JSON output is held until [`Sink::end_stream`].
    pub fn stream(&mut self, rows: &[RateRow]) -> Result<(), Failure> {
        match self.format {
            Format::Csv => self.csv(rows)?,
            Format::Table => {
                if !self.header_written {
                    writeln!(self.out, "{:<22} {:<22} {:<24} {:<8} std_error", "p", "s_rb", "rate", "method")?;
                    self.header_written = true;
                }
                for r in rows {
                    writeln!(
                        self.out,
                        "{:<22} {:<22} {:<24} {:<8} {}",
                        format!("{:?}", r.p),
                        format!("{:?}", r.s_rb),
                        format!("{:?}", r.rate),
                        r.method.to_string(),
                        opt(r.std_error)
                    )?;
                }
            }
            Format::Json => {}
        }
        self.out.flush()?;
        Ok(())
    }

    pub fn end_stream(&mut self, all: &[RateRow]) -> Result<(), Failure> {
        if self.format == Format::Json {
            self.json.push(serde_json::to_value(all)?);
        }
        Ok(())
    }

    pub fn rows(&mut self, rows: &[RateRow]) -> Result<(), Failure> {
        self.stream(rows)?;
        self.end_stream(rows)
    }

    pub fn threshold(mut self, r: &ThresholdResult) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json.push(serde_json::to_value(r)?),
            Format::Csv => self.csv(&[ThresholdRow {
                stack: &r.stack,
                channel: r.family.to_string(),
                threshold: r.threshold,
                method: r.method.to_string(),
                tolerance: r.tolerance,
                lo: r.bracket.0,
                hi: r.bracket.1,
                std_error: r.std_error,
                evaluations: r.evaluations,
            }])?,
            Format::Table => {
                let o = &mut self.out;
                writeln!(o, "stack        {}", r.stack)?;
                writeln!(o, "channel      {}", r.family)?;
                writeln!(o, "threshold    {:?}", r.threshold)?;
                writeln!(o, "method       {}", r.method)?;
                writeln!(o, "tolerance    {:e}", r.tolerance)?;
                writeln!(o, "bracket      [{:?}, {:?}]", r.bracket.0, r.bracket.1)?;
                writeln!(o, "std_error    {}", opt(r.std_error))?;
                writeln!(o, "evaluations  {}", r.evaluations)?;
            }
        }
        self.finish()
    }

    pub fn optimization(mut self, r: &OptimizationResult) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json.push(serde_json::to_value(r)?),
            Format::Csv => {
                #[derive(Serialize)]
                struct Row {
                    start_cx: f64,
                    start_cy: f64,
                    start_cz: f64,
                    cx: f64,
                    cy: f64,
                    cz: f64,
                    p_hash: f64,
                    non_additivity: f64,
                    evaluations: usize,
                }
                let rows: Vec<Row> = r
                    .trace
                    .iter()
                    .map(|t| Row {
                        start_cx: t.start[0],
                        start_cy: t.start[1],
                        start_cz: t.start[2],
                        cx: t.best[0],
                        cy: t.best[1],
                        cz: t.best[2],
                        p_hash: t.p_hash,
                        non_additivity: t.non_additivity,
                        evaluations: t.evaluations,
                    })
                    .collect();
                self.csv(&rows)?;
            }
            Format::Table => {
                let o = &mut self.out;
                let [cx, cy, cz] = r.coefficients;
                writeln!(o, "stack           {}", r.stack)?;
                writeln!(o, "coefficients    {cx:.9} {cy:.9} {cz:.9}")?;
                writeln!(o, "hashing point   {:?}", r.p_hash)?;
                writeln!(o, "non-additivity  {:?}", r.non_additivity)?;
                writeln!(o, "restarts        {}", r.trace.len())?;
            }
        }
        self.finish()
    }

    pub fn outcomes(&mut self, table: &str, outcomes: &[RowOutcome]) -> Result<(), Failure> {
        let rows: Vec<OutcomeRow> = outcomes
            .iter()
            .map(|o| OutcomeRow {
                table,
                label: &o.label,
                stack: &o.stack,
                expected: o.expected,
                computed: o.computed,
                diff: o.diff(),
                tol: o.tol,
                pass: o.pass,
                error: o.error.as_deref(),
            })
            .collect();
        match self.format {
            Format::Json => self.json.push(json!({ "table": table, "rows": rows })),
            Format::Csv => self.csv(&rows)?,
            Format::Table => {
                for r in &rows {
                    let tail = match (r.computed, r.error) {
                        (Some(c), _) => format!("got {c:.12} want {:.12} diff {:+.2e} tol {:.0e}", r.expected, c - r.expected, r.tol),
                        (None, e) => format!("error: {}", e.unwrap_or("?")),
                    };
                    writeln!(
                        self.out,
                        "{} {:<34} {}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.label,
                        tail
                    )?;
                    self.out.flush()?;
                }
                let passed = rows.iter().filter(|r| r.pass).count();
                writeln!(self.out, "{table}: {passed}/{} PASS", rows.len())?;
            }
        }
        Ok(())
    }

    pub fn code_list(&mut self, codes: &[StabilizerCode]) -> Result<(), Failure> {
        let rows: Vec<CodeRow> = codes.iter().map(CodeRow::of).collect();
        match self.format {
            Format::Json => self.json.push(serde_json::to_value(&rows)?),
            Format::Csv => {
                #[derive(Serialize)]
                struct Brief<'a> {
                    name: &'a str,
                    n: usize,
                    k: usize,
                }
                let brief: Vec<Brief> = rows.iter().map(|r| Brief { name: &r.name, n: r.n, k: r.k }).collect();
                self.csv(&brief)?;
            }
            Format::Table => {
                writeln!(self.out, "{:<14} {:>3} {:>3}", "name", "n", "k")?;
                for r in &rows {
                    writeln!(self.out, "{:<14} {:>3} {:>3}", r.name, r.n, r.k)?;
                }
                writeln!(self.out, "plus repZ(n) and repX(n) for any n")?;
            }
        }
        Ok(())
    }

    pub fn code(&mut self, c: &StabilizerCode) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json.push(serde_json::to_value(CodeRow::of(c))?),
            Format::Csv => {
                #[derive(Serialize)]
                struct Line<'a> {
                    kind: &'a str,
                    pauli: String,
                }
                let mut lines = Vec::new();
                let tagged = [("G", &c.generators), ("LX", &c.logical_x), ("LZ", &c.logical_z)];
                for (kind, ops) in tagged {
                    lines.extend(ops.iter().map(|p| Line { kind, pauli: p.to_string() }));
                }
                self.csv(&lines)?;
            }
            Format::Table => {
                write!(self.out, "{}", c.serialize())?;
                writeln!(self.out, "# permutation symmetric: {}", c.permutation_symmetric)?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        if self.format == Format::Json {
            let v = match self.json.len() {
                1 => self.json.pop().unwrap_or(Value::Null),
                _ => Value::Array(std::mem::take(&mut self.json)),
            };
            serde_json::to_writer_pretty(&mut self.out, &v)?;
            writeln!(self.out)?;
        }
        self.out.flush()?;
        Ok(())
    }
}

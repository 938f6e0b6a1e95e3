use std::io::{self, Write};

use algres::golden::render_order;
use algres::invariants::TangencyOutcome;
use algres::qpoly::Order;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

/// A cell whose rendering depends on the output format.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Order(Order),
    Outcome(TangencyOutcome),
}

impl Cell {
    fn render(&self, fmt: Format) -> String {
        match (self, fmt) {
            (Cell::Text(s), _) => s.clone(),
            (Cell::Order(o), Format::Text) => o.to_string(),
            (Cell::Order(o), _) => render_order(*o),
            (Cell::Outcome(o), Format::Text) => o.to_string(),
            (Cell::Outcome(o), _) => {
                let v = render_order(o.order);
                if o.maxed {
                    format!(">={v}")
                } else {
                    v
                }
            }
        }
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Order> for Cell {
    fn from(o: Order) -> Self {
        Cell::Order(o)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Text(n.to_string())
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Text(n.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra lines printed after the table in text mode only.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn write(&self, fmt: Format, out: &mut impl Write) -> io::Result<()> {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.render(fmt)).collect()).collect();
        match fmt {
            Format::Text => {
                let mut width: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for r in &cells {
                    for (w, c) in width.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |r: &[String]| {
                    let parts: Vec<String> = r
                        .iter()
                        .zip(&width)
                        .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                        .collect();
                    parts.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(&self.headers))?;
                for r in &cells {
                    writeln!(out, "{}", line(r))?;
                }
                for n in &self.notes {
                    writeln!(out, "{n}")?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for r in &cells {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Jsonl => {
                for r in &cells {
                    let obj: serde_json::Map<String, serde_json::Value> = self
                        .headers
                        .iter()
                        .zip(r)
                        .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                        .collect();
                    writeln!(out, "{}", serde_json::Value::Object(obj))?;
                }
            }
        }
        Ok(())
    }
}

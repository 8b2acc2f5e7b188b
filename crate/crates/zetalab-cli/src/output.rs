//! Table model and CSV/JSON emitters.
//!
//! Both formats carry identical numeric content: every multiprecision value
//! is rendered once through `format_float` at the context's honest digit
//! count and the resulting string is embedded verbatim (CSV field / JSON
//! number). Non-finite values print as `NaN`/`inf` in CSV and become JSON
//! `null`.

use rug::Float;
use std::io::{self, Write};
use zetalab::numerics::format_float;

pub enum Cell {
    Big(Float),
    Num(f64),
    UInt(u128),
    Bool(bool),
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn csv_field(cell: &Cell, digits: usize) -> String {
    match cell {
        Cell::Big(f) => format_float(f, digits),
        Cell::Num(x) => format!("{x}"),
        Cell::UInt(u) => format!("{u}"),
        Cell::Bool(b) => format!("{b}"),
    }
}

fn json_field(cell: &Cell, digits: usize) -> String {
    match cell {
        Cell::Big(f) if f.is_finite() => format_float(f, digits),
        Cell::Big(_) => "null".into(),
        Cell::Num(x) if x.is_finite() => format!("{x}"),
        Cell::Num(_) => "null".into(),
        Cell::UInt(u) => format!("{u}"),
        Cell::Bool(b) => format!("{b}"),
    }
}

pub fn write_csv(table: &Table, digits: usize, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{}", table.header.join(","))?;
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|c| csv_field(c, digits)).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// JSON array of row objects keyed exactly as the CSV header.
pub fn write_json(table: &Table, digits: usize, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "[")?;
    for (i, row) in table.rows.iter().enumerate() {
        let fields: Vec<String> = table
            .header
            .iter()
            .zip(row.iter())
            .map(|(k, c)| format!("\"{k}\": {}", json_field(c, digits)))
            .collect();
        let comma = if i + 1 < table.rows.len() { "," } else { "" };
        writeln!(out, "  {{{}}}{comma}", fields.join(", "))?;
    }
    writeln!(out, "]")?;
    Ok(())
}

//! Artifact rendering. Floats in CSV use 17 significant digits; JSON uses
//! the shortest representation that round-trips. Complex values are
//! `[re, im]` in JSON and two columns in CSV.

use pdboundary::C64;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv(Csv),
    Json(Value),
}

impl Artifact {
    pub fn render(&self) -> String {
        match self {
            Artifact::Csv(c) => c.render(),
            Artifact::Json(v) => serde_json::to_string_pretty(v).expect("json values serialize") + "\n",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(
            cells.iter().map(Cell::width).sum::<usize>(),
            self.header.len()
        );
        let mut out = Vec::with_capacity(self.header.len());
        for c in cells {
            match c {
                Cell::Int(i) => out.push(i.to_string()),
                Cell::Real(x) => out.push(real(x)),
                Cell::Complex(z) => {
                    out.push(real(z.re));
                    out.push(real(z.im));
                }
            }
        }
        self.rows.push(out);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub enum Cell {
    Int(i64),
    Real(f64),
    Complex(C64),
}

impl Cell {
    fn width(&self) -> usize {
        match self {
            Cell::Complex(_) => 2,
            _ => 1,
        }
    }
}

pub fn int(i: usize) -> Cell {
    Cell::Int(i as i64)
}

fn real(x: f64) -> String {
    // Print -0 as 0 so sign-of-zero noise does not reach the artifacts.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn cjson(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn cjson_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|z| cjson(*z)).collect())
}

/// Finite floats as numbers; infinities and NaN as strings, which JSON
/// cannot represent.
pub fn fjson(x: f64) -> Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        Value::String(x.to_string())
    }
}

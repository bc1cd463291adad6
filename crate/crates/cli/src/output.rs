use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// Writes a CSV with a header row; numeric cells carry 17 significant
/// digits so values round-trip exactly.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<Cell>>,
) -> std::io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

pub fn write_json(path: &Path, value: &impl Serialize) -> std::io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

pub enum Cell {
    Int(usize),
    Num(f64),
    Text(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Int(i) => i.to_string(),
            Self::Num(x) if x.is_nan() => "nan".into(),
            Self::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Self::Num(x) => format!("{x:.16e}"),
            Self::Text(s) => (*s).into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1.0187929716474709, f64::MAX] {
            let s = Cell::Num(x).render();
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(Cell::Num(f64::INFINITY).render(), "inf");
    }
}

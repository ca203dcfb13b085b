//! Plain CSV output with full double precision.
//!
//! Floats are written with 17 significant digits so a value read back
//! parses to the same bits. Lines end in `\n` and fields are never quoted,
//! so callers must not pass text containing commas or newlines.

use std::io::{self, Write};

/// Format a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i128),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u8> for Cell {
    fn from(x: u8) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Streaming CSV writer with a fixed column count.
pub struct CsvWriter<W: Write> {
    out: W,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "{}", header.join(","))?;
        Ok(Self {
            out,
            columns: header.len(),
        })
    }

    pub fn row<I>(&mut self, cells: I) -> io::Result<()>
    where
        I: IntoIterator,
        I::Item: Into<Cell>,
    {
        let rendered: Vec<String> = cells.into_iter().map(|c| c.into().render()).collect();
        if rendered.len() != self.columns {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("row has {} fields, header has {}", rendered.len(), self.columns),
            ));
        }
        writeln!(self.out, "{}", rendered.join(","))
    }

    pub fn into_inner(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_bit_exactly() {
        for x in [
            0.1,
            1.0 / 3.0,
            2.2250738585072014e-308,
            5e-324,
            -1.7976931348623157e308,
            0.31886,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn writes_header_and_rows() {
        let mut w = CsvWriter::new(Vec::new(), &["a", "b", "c"]).unwrap();
        w.row([Cell::from(1usize), Cell::from(0.5), Cell::from("x")]).unwrap();
        w.row([Cell::from(None::<f64>), Cell::from(2u8), Cell::from(Some(-1.0))])
            .unwrap();
        assert!(w.row([Cell::Empty]).is_err());
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text, "a,b,c\n1,5.0000000000000000e-1,x\n,2,-1.0000000000000000e0\n");
    }
}

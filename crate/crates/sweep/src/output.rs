use std::fmt::Write as _;

/// Integers stay integers in the CSV; reals get 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(i) => i as f64,
            Cell::Real(x) => x,
        }
    }
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|row| row[j].as_f64()).collect())
    }

    /// `# `-prefixed header lines, then the column names, then the rows.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            for part in line.lines() {
                let _ = writeln!(out, "# {part}");
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match *c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Real(x) => format_real(x),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_exactly() {
        for x in [0.1, std::f64::consts::PI, 1e-300, -2.5e17, 1.0 / 3.0] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_real(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            columns: vec!["m", "p"],
            rows: vec![vec![Cell::Int(3), Cell::Real(0.25)]],
        };
        let csv = t.to_csv(&["a".into(), "b\nc".into()]);
        assert_eq!(csv, "# a\n# b\n# c\nm,p\n3,2.5000000000000000e-1\n");
    }
}

//! The four standard tables of single-peakedness probabilities, recomputed
//! from the closed forms.
//!
//! Exact cells are rounded to nearest, lower bounds down and upper bounds up,
//! each to the number of significant digits the table layout shows.

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::counting::{
    factorial, iac_bounds, iac_exact, ic_probability_bounds, ic_probability_exact, mallows_lower,
    polya_lower, Quantity,
};
use crate::decimal::{Decimal, Rounding};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Ic,
    Iac,
    Polya,
    Mallows,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [
        TableKind::Ic,
        TableKind::Iac,
        TableKind::Polya,
        TableKind::Mallows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Ic => "ic",
            TableKind::Iac => "iac",
            TableKind::Polya => "polya",
            TableKind::Mallows => "mallows",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Exact,
    Lower,
    Upper,
}

impl Role {
    pub fn rounding(self) -> Rounding {
        match self {
            Role::Exact => Rounding::Nearest,
            Role::Lower => Rounding::Floor,
            Role::Upper => Rounding::Ceil,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub n: u64,
    pub m: u64,
    pub column: String,
    pub role: Role,
    /// Significant digits shown.
    pub sig: usize,
    pub value: Quantity,
}

impl Cell {
    pub fn rendered(&self) -> Decimal {
        self.value.to_decimal(self.sig, self.role.rounding())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: TableKind,
    pub title: &'static str,
    pub columns: Vec<String>,
    pub cells: Vec<Cell>,
}

impl Table {
    pub fn cell(&self, n: u64, m: u64, column: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.m == m && c.column == column)
    }

    fn rows(&self) -> Vec<(u64, u64)> {
        let mut rows: Vec<(u64, u64)> = Vec::new();
        for c in &self.cells {
            if !rows.contains(&(c.n, c.m)) {
                rows.push((c.n, c.m));
            }
        }
        rows
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = 14;
        write!(f, "{:<10}", "(n,m)")?;
        for c in &self.columns {
            write!(f, "{c:>width$}")?;
        }
        writeln!(f)?;
        for (n, m) in self.rows() {
            write!(f, "{:<10}", format!("({n},{m})"))?;
            for col in &self.columns {
                match self.cell(n, m, col) {
                    Some(c) => write!(f, "{:>width$}", c.rendered().to_string())?,
                    None => write!(f, "{:>width$}", "")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn cell(n: u64, m: u64, column: &str, role: Role, sig: usize, value: impl Into<Quantity>) -> Cell {
    Cell {
        n,
        m,
        column: column.to_string(),
        role,
        sig,
        value: value.into(),
    }
}

const NS: [u64; 5] = [2, 5, 10, 25, 50];

fn ic_table() -> Result<Table> {
    let mut cells = Vec::new();
    let sigs = [(3, [1, 2, 1, 3, 3]), (4, [2, 1, 3, 3, 3])];
    for (m, sig) in sigs {
        for (n, s) in NS.into_iter().zip(sig) {
            cells.push(cell(
                n,
                m,
                "exact",
                Role::Exact,
                s,
                ic_probability_exact(n, m)?,
            ));
        }
    }
    for m in [5, 10] {
        cells.push(cell(
            2,
            m,
            "exact",
            Role::Exact,
            2,
            ic_probability_exact(2, m)?,
        ));
        for n in &NS[1..] {
            let b = ic_probability_bounds(*n, m)?;
            cells.push(cell(
                *n,
                m,
                "lower",
                Role::Lower,
                2,
                b.lower.expect("lower bound"),
            ));
            cells.push(cell(
                *n,
                m,
                "upper",
                Role::Upper,
                2,
                b.upper.expect("upper bound"),
            ));
        }
    }
    Ok(Table {
        kind: TableKind::Ic,
        title: "Impartial Culture: probability that an (n,m)-election is single-peaked",
        columns: vec!["exact".into(), "lower".into(), "upper".into()],
        cells,
    })
}

fn iac_table() -> Result<Table> {
    let mut cells = Vec::new();
    for (n, s) in NS.into_iter().zip([1, 2, 2, 2, 1]) {
        cells.push(cell(n, 3, "exact", Role::Exact, s, iac_exact(n, 3)?));
    }
    for m in [4, 5, 10] {
        cells.push(cell(2, m, "exact", Role::Exact, 2, iac_exact(2, m)?));
        for n in &NS[1..] {
            let b = iac_bounds(*n, m)?;
            cells.push(cell(
                *n,
                m,
                "lower",
                Role::Lower,
                3,
                b.lower.expect("lower bound"),
            ));
            cells.push(cell(
                *n,
                m,
                "upper",
                Role::Upper,
                3,
                b.upper.expect("upper bound"),
            ));
        }
    }
    Ok(Table {
        kind: TableKind::Iac,
        title: "Impartial Anonymous Culture: probability that an (n,m)-election is single-peaked",
        columns: vec!["exact".into(), "lower".into(), "upper".into()],
        cells,
    })
}

/// Homogeneity columns of the Pólya table.
pub fn polya_columns(m: u64) -> [(&'static str, u64); 3] {
    let f = factorial(m).to_u64().expect("m! fits in u64");
    [("a=10", 10), ("a=m!/2", f / 2), ("a=m!", f)]
}

fn polya_table() -> Result<Table> {
    let mut cells = Vec::new();
    for m in [5, 10] {
        for n in [10, 25, 50] {
            for (col, a) in polya_columns(m) {
                cells.push(cell(n, m, col, Role::Lower, 2, polya_lower(n, m, a)?));
            }
        }
    }
    Ok(Table {
        kind: TableKind::Polya,
        title: "Pólya urn with homogeneity a: lower bound on the single-peaked probability",
        columns: polya_columns(5)
            .iter()
            .map(|(c, _)| c.to_string())
            .collect(),
        cells,
    })
}

/// Dispersion columns of the Mallows table, as exact fractions.
pub fn mallows_columns() -> [(&'static str, BigRational); 5] {
    let r = |d: i64| BigRational::new(1.into(), d.into());
    [
        ("phi=0.3", BigRational::new(3.into(), 10.into())),
        ("phi=0.2", r(5)),
        ("phi=0.1", r(10)),
        ("phi=0.05", r(20)),
        ("phi=0.01", r(100)),
    ]
}

fn mallows_table() -> Result<Table> {
    let mut cells = Vec::new();
    for m in [5, 10] {
        for n in [10, 25, 50] {
            for (col, phi) in mallows_columns() {
                let sig = if (n, m, col) == (10, 5, "phi=0.3") {
                    1
                } else {
                    2
                };
                cells.push(cell(
                    n,
                    m,
                    col,
                    Role::Lower,
                    sig,
                    mallows_lower(n, m, &phi)?,
                ));
            }
        }
    }
    Ok(Table {
        kind: TableKind::Mallows,
        title: "Mallows model with dispersion phi: lower bound on the single-peaked probability",
        columns: mallows_columns()
            .iter()
            .map(|(c, _)| c.to_string())
            .collect(),
        cells,
    })
}

pub fn table(kind: TableKind) -> Result<Table> {
    match kind {
        TableKind::Ic => ic_table(),
        TableKind::Iac => iac_table(),
        TableKind::Polya => polya_table(),
        TableKind::Mallows => mallows_table(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(table(TableKind::Ic).unwrap().cells.len(), 10 + 2 + 16);
        assert_eq!(table(TableKind::Iac).unwrap().cells.len(), 5 + 3 + 24);
        assert_eq!(table(TableKind::Polya).unwrap().cells.len(), 18);
        assert_eq!(table(TableKind::Mallows).unwrap().cells.len(), 30);
    }

    #[test]
    fn spot_cells() {
        let ic = table(TableKind::Ic).unwrap();
        assert_eq!(
            ic.cell(25, 4, "exact").unwrap().rendered().to_string(),
            "1.42e-11"
        );
        assert_eq!(
            ic.cell(5, 3, "exact").unwrap().rendered().to_string(),
            "0.38"
        );
        let iac = table(TableKind::Iac).unwrap();
        assert_eq!(
            iac.cell(50, 3, "exact").unwrap().rendered().to_string(),
            "0.02"
        );
        let mal = table(TableKind::Mallows).unwrap();
        assert_eq!(
            mal.cell(50, 5, "phi=0.05").unwrap().rendered().to_string(),
            "0.49"
        );
        let text = mal.to_string();
        assert!(text.contains("(10,5)") && text.contains("0.59"));
    }
}

//! Per-order comparison of lower and upper bounds with achieved lengths.

use super::bounds::{bound_2c1, bound_gilkerson, bound_l, TABLE4};
use crate::error::{Error, Result};
use crate::Rational;

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub lower: usize,
    pub covering: usize,
    pub gilkerson: Rational,
    /// Achieved length of the built sequence, when the pipeline was run.
    pub achieved: Option<usize>,
    /// Published number-theoretic construction length, where tabulated.
    pub reference: Option<usize>,
}

/// Builds rows for `from..=to`. `achieve` is called per order when given
/// and should return the length of a verified sequence.
pub fn table(
    from: usize,
    to: usize,
    mut achieve: Option<&mut dyn FnMut(usize) -> Result<usize>>,
) -> Result<Vec<TableRow>> {
    if from < 3 || from > to {
        return Err(Error::Domain(format!(
            "need 3 <= from <= to, got {from}..{to}"
        )));
    }
    (from..=to)
        .map(|n| {
            let achieved = match achieve.as_mut() {
                Some(f) => Some(f(n)?),
                None => None,
            };
            Ok(TableRow {
                n,
                lower: bound_l(n)?,
                covering: bound_2c1(n)?,
                gilkerson: bound_gilkerson(n)?,
                achieved,
                reference: TABLE4.iter().find(|r| r.0 == n).map(|r| r.2),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_match_reference() {
        let rows = table(9, 44, None).unwrap();
        assert_eq!(rows.len(), 36);
        for (row, r) in rows.iter().zip(TABLE4) {
            assert_eq!(row.covering, r.3);
        }
        assert_eq!(rows[1].covering, 35);
        assert!(table(2, 5, None).is_err());
    }
}

//! Logical semantics of gadget networks: NAE clauses, the NAND built from
//! three of them, and clocked circuits made of NANDs.

mod circuit;
mod graph;

pub use circuit::*;
pub use graph::*;

/// True unless all three bits are equal.
pub fn nae_relation(a: u8, b: u8, c: u8) -> bool {
    !(a == b && b == c)
}

/// Signal slots of the NAND truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    A,
    B,
    P,
    O,
}

/// The three clauses whose solutions with `P = 0` give `O = A NAND B`.
pub const NAND_CLAUSES: [[Slot; 3]; 3] = [[Slot::A, Slot::B, Slot::O], [Slot::A, Slot::P, Slot::O], [Slot::B, Slot::P, Slot::O]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthColumn {
    pub a: u8,
    pub b: u8,
    pub p: u8,
    pub o: u8,
}

impl TruthColumn {
    pub fn get(&self, s: Slot) -> u8 {
        match s {
            Slot::A => self.a,
            Slot::B => self.b,
            Slot::P => self.p,
            Slot::O => self.o,
        }
    }

    pub fn tuple(&self) -> (u8, u8, u8, u8) {
        (self.a, self.b, self.p, self.o)
    }
}

/// Columns of the 16-column table satisfying every NAE clause, listed from
/// `1111` down to `0000`.
pub fn filter_truth_table(constraints: &[[Slot; 3]], require_p0: bool) -> Vec<TruthColumn> {
    (0..16u8)
        .rev()
        .map(|bits| TruthColumn { a: bits >> 3 & 1, b: bits >> 2 & 1, p: bits >> 1 & 1, o: bits & 1 })
        .filter(|c| !require_p0 || c.p == 0)
        .filter(|c| constraints.iter().all(|k| nae_relation(c.get(k[0]), c.get(k[1]), c.get(k[2]))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum NandError {
    #[error("no output satisfies the clauses for inputs ({0}, {1})")]
    NoSolution(u8, u8),
    #[error("both outputs satisfy the clauses for inputs ({0}, {1})")]
    AmbiguousSolution(u8, u8),
}

/// Output forced by the NAND clauses with `P = 0`.
pub fn nand_output(a: u8, b: u8) -> Result<u8, NandError> {
    let sols: Vec<u8> = filter_truth_table(&NAND_CLAUSES, true)
        .into_iter()
        .filter(|c| c.a == a && c.b == b)
        .map(|c| c.o)
        .collect();
    match sols.as_slice() {
        [o] => Ok(*o),
        [] => Err(NandError::NoSolution(a, b)),
        _ => Err(NandError::AmbiguousSolution(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nae_examples() {
        assert!(nae_relation(0, 1, 0));
        assert!(!nae_relation(0, 0, 0));
        assert!(nae_relation(1, 1, 0));
    }

    #[test]
    fn truth_table_has_four_columns() {
        let cols: Vec<_> = filter_truth_table(&NAND_CLAUSES, true).iter().map(|c| c.tuple()).collect();
        assert_eq!(cols, vec![(1, 1, 0, 0), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 0, 1)]);
        assert_eq!(filter_truth_table(&[], false).len(), 16);
        let loose = filter_truth_table(&NAND_CLAUSES, false);
        assert!(cols.iter().all(|c| loose.iter().any(|l| l.tuple() == *c)));
    }

    #[test]
    fn nand_is_unique() {
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(nand_output(a, b).unwrap(), 1 - (a & b));
            }
        }
    }
}

//! Reference structures shipped with the crate, with their known verdicts.

use crate::io::{parse_structure, LoadError};
use crate::jacobi::JacobiStructure;

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub file: &'static str,
    pub source: &'static str,
    pub jacobi: bool,
}

macro_rules! entry {
    ($file:literal, $jacobi:expr) => {
        CorpusEntry {
            file: $file,
            source: include_str!(concat!("../corpus/", $file)),
            jacobi: $jacobi,
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("zero.jacobi", true),
    entry!("constant_r2.jacobi", true),
    entry!("so3.jacobi", true),
    entry!("contact_r3.jacobi", true),
    entry!("pure_r.jacobi", true),
    entry!("nonjacobi_r2.jacobi", false),
    entry!("shear_r2.jacobi", false),
    entry!("constant_r3.jacobi", false),
    entry!("twisted_contact_r3.jacobi", false),
];

impl CorpusEntry {
    pub fn load(&self) -> Result<JacobiStructure, LoadError> {
        parse_structure(self.source)
    }
}

pub fn entry(file: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.file == file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::is_jacobi;

    #[test]
    fn verdicts_match() {
        for e in CORPUS {
            let j = e.load().unwrap();
            assert_eq!(is_jacobi(&j).unwrap().is_jacobi, e.jacobi, "{}", e.file);
        }
    }
}

//! The `sc-v1` structure-constants format.
//!
//! ```text
//! # p=3
//! # N=1
//! # algebra=bj
//! b <index> <parity> <degree> <field>
//! c <i> <j> <k> <value>
//! ```
//!
//! Basis lines come in index order, constant lines sorted by `(i, j, k)`
//! with `i ≤ j`; values are residues in `0..p`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::dpsuper::Signature;
use crate::error::{Error, Result};
use crate::liestruct::GradedSubalgebra;
use crate::vecfields::VectorField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLine {
    pub parity: u8,
    pub degree: i32,
    pub field: String,
}

/// A structure-constants table as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScTable {
    pub p: u64,
    pub height: u32,
    pub algebra: String,
    pub basis: Vec<BasisLine>,
    /// `(i, j, k, c)` with `i ≤ j`, `[e_i, e_j] = Σ c e_k`.
    pub constants: Vec<(usize, usize, usize, u32)>,
}

impl ScTable {
    pub fn from_algebra(alg: &GradedSubalgebra, height: u32, name: &str) -> Result<Self> {
        let table = alg.structure_table()?;
        let basis = (0..table.dim())
            .map(|i| BasisLine {
                parity: table.parity(i),
                degree: table.degree(i),
                field: table.basis()[i].render(),
            })
            .collect();
        let mut constants = table.constants();
        constants.sort_unstable();
        Ok(Self {
            p: alg.field().p() as u64,
            height,
            algebra: name.to_string(),
            basis,
            constants,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# p={}", self.p);
        let _ = writeln!(s, "# N={}", self.height);
        let _ = writeln!(s, "# algebra={}", self.algebra);
        for (i, b) in self.basis.iter().enumerate() {
            let _ = writeln!(s, "b {i} {} {} {}", b.parity, b.degree, b.field);
        }
        for (i, j, k, c) in &self.constants {
            let _ = writeln!(s, "c {i} {j} {k} {c}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = None;
        let mut height = None;
        let mut algebra = None;
        let mut basis = Vec::new();
        let mut constants = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {line:?}", n + 1));
            if let Some(h) = line.strip_prefix("# ") {
                let (key, value) = h.split_once('=').ok_or_else(|| bad("bad header"))?;
                match key {
                    "p" => p = Some(value.parse().map_err(|_| bad("bad p"))?),
                    "N" => height = Some(value.parse().map_err(|_| bad("bad N"))?),
                    "algebra" => algebra = Some(value.to_string()),
                    _ => return Err(bad("unknown header")),
                }
            } else if let Some(rest) = line.strip_prefix("b ") {
                let mut it = rest.splitn(4, ' ');
                let index: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad index"))?;
                if index != basis.len() {
                    return Err(bad("basis index out of order"));
                }
                let parity = it.next().and_then(|s| s.parse().ok()).filter(|&v| v <= 1).ok_or_else(|| bad("bad parity"))?;
                let degree = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad degree"))?;
                let field = it.next().ok_or_else(|| bad("missing field"))?.to_string();
                basis.push(BasisLine { parity, degree, field });
            } else if let Some(rest) = line.strip_prefix("c ") {
                let v: Vec<u64> = rest
                    .split(' ')
                    .map(|s| s.parse().map_err(|_| bad("bad constant")))
                    .collect::<Result<_>>()?;
                if v.len() != 4 {
                    return Err(bad("constant needs four fields"));
                }
                constants.push((v[0] as usize, v[1] as usize, v[2] as usize, v[3] as u32));
            } else if !line.is_empty() {
                return Err(bad("unrecognized line"));
            }
        }
        let t = Self {
            p: p.ok_or_else(|| Error::Parse("missing p header".into()))?,
            height: height.ok_or_else(|| Error::Parse("missing N header".into()))?,
            algebra: algebra.ok_or_else(|| Error::Parse("missing algebra header".into()))?,
            basis,
            constants,
        };
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.basis.len();
        let mut prev = None;
        for &(i, j, k, c) in &self.constants {
            if i > j || j >= n || k >= n {
                return Err(Error::Parse(format!("constant ({i}, {j}, {k}) out of range")));
            }
            if c == 0 || c as u64 >= self.p {
                return Err(Error::Parse(format!("constant value {c} is not a nonzero residue")));
            }
            if prev >= Some((i, j, k)) {
                return Err(Error::Parse("constants are not sorted".into()));
            }
            prev = Some((i, j, k));
        }
        Ok(())
    }

    /// The constant of `e_k` in `[e_i, e_j]` for any order of `i, j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> u32 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let c = self
            .constants
            .binary_search_by(|&(x, y, z, _)| (x, y, z).cmp(&(a, b, k)))
            .map(|pos| self.constants[pos].3)
            .unwrap_or(0);
        if i <= j || c == 0 {
            return c;
        }
        // [e_j, e_i] = -(-1)^{p_i p_j} [e_i, e_j]
        let p = self.p as u32;
        if self.basis[i].parity & self.basis[j].parity == 1 {
            c
        } else {
            p - c
        }
    }

    /// Checks that the table is consistent with its own basis: each stored
    /// line is the bracket of the parsed fields, degrees and parities add,
    /// and even self-brackets vanish.
    pub fn verify(&self) -> Result<()> {
        let sig = Arc::new(Signature::contact_1_7(self.p, self.height)?);
        let fields: Vec<VectorField> = self
            .basis
            .iter()
            .map(|b| VectorField::parse(&sig, &b.field))
            .collect::<Result<_>>()?;
        for &(i, j, k, _) in &self.constants {
            let (bi, bj, bk) = (&self.basis[i], &self.basis[j], &self.basis[k]);
            if bi.degree + bj.degree != bk.degree || (bi.parity ^ bj.parity) != bk.parity {
                return Err(Error::Parse(format!("constant ({i}, {j}, {k}) breaks the grading")));
            }
            if i == j && bi.parity == 0 {
                return Err(Error::Parse(format!("even self-bracket of e_{i} is nonzero")));
            }
        }
        let mut start = 0;
        for i in 0..fields.len() {
            for j in i..fields.len() {
                let mut expected = VectorField::zero(&sig);
                let end = start
                    + self.constants[start..]
                        .iter()
                        .take_while(|&&(a, b, _, _)| (a, b) == (i, j))
                        .count();
                for &(_, _, k, c) in &self.constants[start..end] {
                    expected = expected.axpy(c, &fields[k])?;
                }
                start = end;
                if fields[i].bracket(&fields[j])? != expected {
                    return Err(Error::NotClosed {
                        left: self.basis[i].field.clone(),
                        right: self.basis[j].field.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::ContactStructure;
    use crate::dpsuper::DPElement;
    use crate::vecfields::FieldSpace;

    fn heisenberg() -> GradedSubalgebra {
        let sig = Arc::new(Signature::contact_1_7(3, 1).unwrap());
        let c = ContactStructure::ag2_form(FieldSpace::new(sig.clone())).unwrap();
        let fs: Vec<VectorField> = ["1", "v1", "v3", "v4", "w1", "w3", "w4", "u"]
            .iter()
            .map(|g| c.field_of(&DPElement::parse(&sig, g).unwrap()).unwrap())
            .collect();
        GradedSubalgebra::from_fields(c.space().clone(), &fs).unwrap()
    }

    #[test]
    fn heisenberg_round_trip() {
        let t = ScTable::from_algebra(&heisenberg(), 1, "negative").unwrap();
        assert_eq!(t.basis.len(), 8);
        // every constant lands on the single degree -2 vector
        assert!(t.constants.iter().all(|&(_, _, k, _)| t.basis[k].degree == -2));
        let text = t.to_text();
        let back = ScTable::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
        back.verify().unwrap();
    }

    #[test]
    fn antisymmetry_of_lookup() {
        let t = ScTable::from_algebra(&heisenberg(), 1, "negative").unwrap();
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    assert_eq!(t.constant(i, j, k), t.constant(j, i, k));
                }
            }
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(ScTable::parse("# p=3\n# N=1\n").is_err());
        assert!(ScTable::parse("# p=3\n# N=1\n# algebra=x\nb 1 0 0 d/dt\n").is_err());
        assert!(ScTable::parse("# p=3\n# N=1\n# algebra=x\nb 0 0 -2 d/dt\nc 0 0 0 1\n").is_ok());
        let bad = ScTable::parse("# p=3\n# N=1\n# algebra=x\nb 0 0 -2 d/dt\nc 0 0 0 1\n").unwrap();
        assert!(bad.verify().is_err());
        assert!(ScTable::parse("# p=3\n# N=1\n# algebra=x\nb 0 0 -2 d/dt\nc 0 0 0 3\n").is_err());
    }
}

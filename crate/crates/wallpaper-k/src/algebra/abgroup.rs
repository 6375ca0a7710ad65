//! Finitely generated abelian groups in invariant-factor normal form.

use std::fmt;

use std::str::FromStr;

use num::bigint::BigInt;
use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::mat::IntMat;
use super::snf::smith_normal_form;

/// A finitely generated abelian group Z^r + Z/d1 + ... + Z/dk with the
/// divisibility chain d1 | d2 | ... and every di >= 2. The representation is
/// unique per isomorphism class, so `==` decides isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(d: u64) -> Self {
        assert!(d >= 2, "cyclic torsion factor must be >= 2");
        FinAbGroup {
            free_rank: 0,
            torsion: vec![d],
        }
    }

    /// Build from a free rank and arbitrary torsion factors; the factors are
    /// renormalised into a divisibility chain.
    pub fn new(free_rank: usize, factors: &[u64]) -> Self {
        let g = FinAbGroup {
            free_rank,
            torsion: Vec::new(),
        };
        factors.iter().fold(g, |acc, &d| {
            acc.direct_sum(&FinAbGroup {
                free_rank: 0,
                torsion: if d >= 2 { vec![d] } else { vec![] },
            })
        })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, renormalising the invariant factors. The chain of the sum
    /// is the Smith normal form of the stacked diagonal relation matrix.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut factors: Vec<u64> = self
            .torsion
            .iter()
            .chain(other.torsion.iter())
            .copied()
            .collect();
        let free_rank = self.free_rank + other.free_rank;
        if factors.len() <= 1 {
            return FinAbGroup {
                free_rank,
                torsion: factors,
            };
        }
        let n = factors.len();
        let mut diag = IntMat::zero(n, n);
        for (i, &f) in factors.iter().enumerate() {
            diag[(i, i)] = BigInt::from(f);
        }
        let s = smith_normal_form(&diag);
        factors = s
            .d
            .diagonal()
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .map(|x| u64::try_from(x).expect("torsion factor exceeds u64"))
            .collect();
        FinAbGroup { free_rank, torsion: factors }
    }

    pub fn direct_sum_all<'a>(groups: impl IntoIterator<Item = &'a FinAbGroup>) -> FinAbGroup {
        groups
            .into_iter()
            .fold(FinAbGroup::trivial(), |acc, g| acc.direct_sum(g))
    }
}

impl fmt::Display for FinAbGroup {
    /// Renders as `0`, `Z`, `Z^2`, `Z+Z/2`, `Z/2+Z/4`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FinAbGroup {
    type Err = String;

    /// Inverse of Display: `0`, `Z`, `Z^3`, `Z/2`, sums joined with `+`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(FinAbGroup::trivial());
        }
        let mut free = 0usize;
        let mut torsion: Vec<u64> = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if let Some(d) = part.strip_prefix("Z/") {
                let d: u64 = d.parse().map_err(|e| format!("bad torsion {part:?}: {e}"))?;
                if d < 2 {
                    return Err(format!("torsion factor {d} must be >= 2"));
                }
                torsion.push(d);
            } else if let Some(k) = part.strip_prefix("Z^") {
                let k: usize = k.parse().map_err(|e| format!("bad rank {part:?}: {e}"))?;
                free += k;
            } else if part == "Z" {
                free += 1;
            } else {
                return Err(format!("cannot parse group term {part:?}"));
            }
        }
        Ok(FinAbGroup::new(free, &torsion))
    }
}

// Serialized as the canonical display string; the normal form is unique, so
// this round-trips exactly.
impl Serialize for FinAbGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FinAbGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        FinAbGroup::from_str(&s).map_err(D::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("boundary maps do not compose to zero (not a chain complex)")]
    NotAComplex,
    #[error("boundary map dimensions are inconsistent: {0}")]
    DimensionMismatch(String),
}

/// Homology at the middle term of  C_in --boundary_in--> C --boundary_out--> C_out,
/// i.e. ker(boundary_out) / im(boundary_in).
///
/// The free rank is nullity(out) - rank(in); the torsion factors are the
/// invariant factors of `boundary_in` (the kernel is a saturated submodule, so
/// the torsion of the middle quotient agrees with the torsion of the full
/// cokernel).
pub fn abgroup_from_matrices(
    boundary_out: &IntMat,
    boundary_in: &IntMat,
) -> Result<FinAbGroup, ComplexError> {
    if boundary_out.cols() != boundary_in.rows() {
        return Err(ComplexError::DimensionMismatch(format!(
            "out is {}x{}, in is {}x{}",
            boundary_out.rows(),
            boundary_out.cols(),
            boundary_in.rows(),
            boundary_in.cols()
        )));
    }
    if !boundary_out.mul(boundary_in).is_zero() {
        return Err(ComplexError::NotAComplex);
    }
    let n = boundary_out.cols();
    let s_out = smith_normal_form(boundary_out);
    let s_in = smith_normal_form(boundary_in);
    let free_rank = n - s_out.rank() - s_in.rank();
    let torsion: Vec<u64> = s_in
        .torsion_factors()
        .iter()
        .map(|x| u64::try_from(x).expect("torsion factor exceeds u64"))
        .collect();
    Ok(FinAbGroup::new(free_rank, &torsion))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
        assert_eq!(FinAbGroup::free(1).to_string(), "Z");
        assert_eq!(FinAbGroup::free(2).to_string(), "Z^2");
        assert_eq!(FinAbGroup::new(1, &[2]).to_string(), "Z+Z/2");
    }

    #[test]
    fn direct_sum_renormalises() {
        // Z/2 + Z/3 = Z/6, and Z/2 + Z/4 keeps the chain 2 | 4.
        let a = FinAbGroup::cyclic(2).direct_sum(&FinAbGroup::cyclic(3));
        assert_eq!(a, FinAbGroup::cyclic(6));
        let b = FinAbGroup::cyclic(4).direct_sum(&FinAbGroup::cyclic(2));
        assert_eq!(b.torsion(), &[2, 4]);
        let c = FinAbGroup::cyclic(6).direct_sum(&FinAbGroup::cyclic(4));
        assert_eq!(c.torsion(), &[2, 12]);
    }

    #[test]
    fn homology_no_relations() {
        let z = IntMat::zero(1, 2);
        let zin = IntMat::zero(2, 1);
        let h = abgroup_from_matrices(&z, &zin).unwrap();
        assert_eq!(h, FinAbGroup::free(2));
    }

    #[test]
    fn homology_forced_torsion() {
        // One relation 2*e into a rank-1 kernel.
        let out = IntMat::zero(1, 1);
        let mut inn = IntMat::zero(1, 1);
        inn[(0, 0)] = BigInt::from(2);
        let h = abgroup_from_matrices(&out, &inn).unwrap();
        assert_eq!(h, FinAbGroup::cyclic(2));
    }

    #[test]
    fn klein_bottle_middle_homology() {
        // One vertex, two edges, one face with relation (0, 2):
        // H_1 = Z + Z/2.
        let out = IntMat::zero(1, 2);
        let inn = IntMat::from_rows(&[vec![0], vec![2]]);
        let h = abgroup_from_matrices(&out, &inn).unwrap();
        assert_eq!(h, FinAbGroup::new(1, &[2]));
    }

    #[test]
    fn rejects_non_complex() {
        let out = IntMat::from_rows(&[vec![1, 0]]);
        let inn = IntMat::from_rows(&[vec![1], vec![0]]);
        assert!(abgroup_from_matrices(&out, &inn).is_err());
    }
}

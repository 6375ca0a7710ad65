//! Assembly of K0 and K1 from per-class quotient homology.
//!
//! For each conjugacy class of finite-order elements: take the fixed set,
//! quotient it by the centralizer, compute integral homology, and sum the
//! even degrees into K0 and the odd degrees into K1. The two models (plane
//! with the full group, torus with the point group) must give isomorphic
//! results; the tests and the verification report exercise both.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CongruenceSolutionSet, FinAbGroup};
use crate::catalog::GroupSpec;
use crate::complex::{
    equivariant_triangulation, quotient_complex, ComplexBuildError, QuotientError,
};
use crate::conjugacy::{enumerate_fc, pretty_symbol, ClassKind, ConjClass, Mode};
use crate::fixed::{centralizer, fixed_set_plane, fixed_set_torus, Centralizer, PlaneFixedSet};
use crate::isometry::{format_rat, format_vec2};
use crate::quotient::{
    quotient_circles, quotient_line_plane, quotient_points, QuotientKind, QuotientSpace,
    QuotientSpaceError,
};

/// Default grid resolution for the 2-dimensional orbit spaces. A multiple of
/// every coordinate denominator in the catalog (translations are halves,
/// fixed points have denominators up to 4, rotation centers up to 3).
pub const DEFAULT_RESOLUTION: u32 = 12;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("triangulation failed: {0}")]
    Complex(#[from] ComplexBuildError),
    #[error("quotient complex failed: {0}")]
    Quotient(#[from] QuotientError),
    #[error("fixed-set quotient failed: {0}")]
    QuotientSpace(#[from] QuotientSpaceError),
    #[error("plane fixed set failed: {0}")]
    FixedSet(#[from] crate::fixed::FixedSetError),
}

/// One row of the per-class table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: ConjClass,
    /// Printable fixed set, e.g. "R^2", "(1/4,1/2)", "{(0,0)+t(2,1)}".
    pub fixed_desc: String,
    /// Printable centralizer: translation generators, then sector labels.
    pub centralizer_desc: String,
    pub quotient: QuotientSpace,
    pub even: FinAbGroup,
    pub odd: FinAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KResult {
    pub group: String,
    pub mode: Mode,
    pub resolution: u32,
    pub per_class: Vec<ClassRow>,
    pub k0: FinAbGroup,
    pub k1: FinAbGroup,
}

impl KResult {
    /// Total Betti number over all class rows; equals
    /// rank K0 + rank K1 by construction, asserted as an integrity check.
    pub fn total_betti(&self) -> usize {
        self.per_class
            .iter()
            .map(|r| {
                r.quotient
                    .homology
                    .iter()
                    .map(FinAbGroup::free_rank)
                    .sum::<usize>()
            })
            .sum()
    }
}

/// Rational view of a result: the free ranks of (K0, K1), which is what the
/// rational decomposition theorem actually certifies.
pub fn rationalize(r: &KResult) -> (usize, usize) {
    (r.k0.free_rank(), r.k1.free_rank())
}

/// Run the whole pipeline for one group in one mode at the default grid
/// resolution.
pub fn k_homology(spec: &GroupSpec, mode: Mode) -> Result<KResult, PipelineError> {
    k_homology_at(spec, mode, DEFAULT_RESOLUTION)
}

/// As [`k_homology`] with an explicit grid resolution for the 2-dimensional
/// orbit spaces (used by the resolution-independence checks).
pub fn k_homology_at(spec: &GroupSpec, mode: Mode, n: u32) -> Result<KResult, PipelineError> {
    let classes = enumerate_fc(spec, mode);
    let mut per_class = Vec::with_capacity(classes.len());

    // The identity row is the full 2-dimensional orbit space in either mode:
    // R^2 / G and T^2 / D are the same space.
    let mut surface: Option<QuotientSpace> = None;

    for class in classes {
        let c = centralizer(&class.rep, spec, mode);
        let row = match mode {
            Mode::Plane => plane_row(spec, &class, &c, &mut surface, n)?,
            Mode::Torus => torus_row(spec, &class, &c, &mut surface, n)?,
        };
        per_class.push(row);
    }

    let k0 = FinAbGroup::direct_sum_all(per_class.iter().map(|r| &r.even));
    let k1 = FinAbGroup::direct_sum_all(per_class.iter().map(|r| &r.odd));
    let result = KResult {
        group: spec.name.clone(),
        mode,
        resolution: n,
        per_class,
        k0,
        k1,
    };
    debug_assert_eq!(
        result.k0.free_rank() + result.k1.free_rank(),
        result.total_betti(),
        "per-class Betti numbers must add up to the K-group ranks"
    );
    Ok(result)
}

fn surface_quotient(
    spec: &GroupSpec,
    n: u32,
    cache: &mut Option<QuotientSpace>,
) -> Result<QuotientSpace, PipelineError> {
    if let Some(q) = cache {
        return Ok(q.clone());
    }
    let ec = equivariant_triangulation(spec, n)?;
    let qc = quotient_complex(&ec, &ec.actions)?;
    let h = qc.homology();
    let q = QuotientSpace {
        kind: QuotientKind::Surface {
            cells: qc.cell_counts(),
        },
        homology: h.to_vec(),
    };
    *cache = Some(q.clone());
    Ok(q)
}

fn row_from_quotient(
    class: &ConjClass,
    fixed_desc: String,
    centralizer_desc: String,
    q: QuotientSpace,
) -> ClassRow {
    let even = q.even_sum();
    let odd = q.odd_sum();
    ClassRow {
        class: class.clone(),
        fixed_desc,
        centralizer_desc,
        quotient: q,
        even,
        odd,
    }
}

fn plane_row(
    spec: &GroupSpec,
    class: &ConjClass,
    c: &Centralizer,
    surface: &mut Option<QuotientSpace>,
    n: u32,
) -> Result<ClassRow, PipelineError> {
    let fs = fixed_set_plane(&class.rep)?;
    let cdesc = centralizer_desc(c);
    match fs {
        PlaneFixedSet::Whole => {
            let q = surface_quotient(spec, n, surface)?;
            Ok(row_from_quotient(class, "R^2".to_string(), cdesc, q))
        }
        PlaneFixedSet::Point(p) => {
            let q = QuotientSpace {
                kind: QuotientKind::Points(1),
                homology: vec![
                    FinAbGroup::free(1),
                    FinAbGroup::trivial(),
                    FinAbGroup::trivial(),
                ],
            };
            Ok(row_from_quotient(class, format_vec2(p), cdesc, q))
        }
        PlaneFixedSet::Line { base, dir } => {
            let q = quotient_line_plane(base, dir, c)?;
            let desc = format!("{{{} + t({},{})}}", format_vec2(base), dir[0], dir[1]);
            Ok(row_from_quotient(class, desc, cdesc, q))
        }
    }
}

fn torus_row(
    spec: &GroupSpec,
    class: &ConjClass,
    c: &Centralizer,
    surface: &mut Option<QuotientSpace>,
    n: u32,
) -> Result<ClassRow, PipelineError> {
    let fs = fixed_set_torus(&class.rep);
    let cdesc = centralizer_desc(c);
    match fs {
        CongruenceSolutionSet::All => {
            let q = surface_quotient(spec, n, surface)?;
            Ok(row_from_quotient(class, "T^2".to_string(), cdesc, q))
        }
        CongruenceSolutionSet::Empty => {
            let q = QuotientSpace::empty();
            Ok(row_from_quotient(class, "empty".to_string(), cdesc, q))
        }
        CongruenceSolutionSet::Points(ps) => {
            let desc = ps
                .iter()
                .map(|p| format_vec2(*p))
                .collect::<Vec<_>>()
                .join(", ");
            let q = quotient_points(&ps, &c.finite_parts)?;
            Ok(row_from_quotient(class, desc, cdesc, q))
        }
        CongruenceSolutionSet::Lines(ls) => {
            let desc = ls
                .iter()
                .map(|l| {
                    format!(
                        "{{{} + t({},{})}}",
                        format_vec2(l.base),
                        l.dir[0],
                        l.dir[1]
                    )
                })
                .collect::<Vec<_>>()
                .join(", ");
            let q = quotient_circles(&ls, &c.finite_parts)?;
            Ok(row_from_quotient(class, desc, cdesc, q))
        }
    }
}

fn centralizer_desc(c: &Centralizer) -> String {
    let mut parts: Vec<String> = Vec::new();
    for b in &c.trans_basis {
        parts.push(format!("t({},{})", b[0], b[1]));
    }
    for (iso, sector) in c.finite_parts.iter().zip(&c.sectors) {
        if iso.lin.is_identity() && crate::algebra::lin2::vec2_is_zero(iso.trans) {
            parts.push("id".to_string());
            continue;
        }
        let sym = pretty_symbol(sector);
        if crate::algebra::lin2::vec2_is_zero(iso.trans) {
            parts.push(sym);
        } else {
            parts.push(format!(
                "({},{})·{}",
                format_rat(iso.trans[0]),
                format_rat(iso.trans[1]),
                sym
            ));
        }
    }
    parts.join(", ")
}

/// Pretty per-class kind string used by the CLI.
pub fn kind_desc(kind: &ClassKind) -> String {
    match kind {
        ClassKind::Identity => "identity".to_string(),
        ClassKind::Rotation { center, order } => {
            format!("rotation of order {order} about {}", format_vec2(*center))
        }
        ClassKind::Reflection { base, dir } => format!(
            "reflection with axis {} + t({},{})",
            format_vec2(*base),
            dir[0],
            dir[1]
        ),
        ClassKind::Glide { dir } => format!("glide along ({},{})", dir[0], dir[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn k(name: &str, mode: Mode) -> KResult {
        k_homology(&catalog(name).unwrap(), mode).unwrap()
    }

    #[test]
    fn p1_both_modes() {
        for mode in [Mode::Plane, Mode::Torus] {
            let r = k("p1", mode);
            assert_eq!(r.k0, FinAbGroup::free(2), "{mode}");
            assert_eq!(r.k1, FinAbGroup::free(2), "{mode}");
        }
    }

    #[test]
    fn p4_torus() {
        let r = k("p4", Mode::Torus);
        assert_eq!(r.k0, FinAbGroup::free(9));
        assert!(r.k1.is_trivial());
    }

    #[test]
    fn pgg2_plane() {
        let r = k("pgg2", Mode::Plane);
        assert_eq!(r.k0, FinAbGroup::free(3));
        assert_eq!(r.k1, FinAbGroup::cyclic(2));
    }

    #[test]
    fn pg_both_modes_with_torsion() {
        for mode in [Mode::Plane, Mode::Torus] {
            let r = k("pg", mode);
            assert_eq!(r.k0, FinAbGroup::free(1), "{mode}");
            assert_eq!(r.k1, FinAbGroup::new(1, &[2]), "{mode}");
        }
    }

    #[test]
    fn rationalize_drops_torsion() {
        let r = k("pg", Mode::Plane);
        assert_eq!(rationalize(&r), (1, 1));
        let r = k("pgg2", Mode::Plane);
        assert_eq!(rationalize(&r), (3, 0));
    }

    #[test]
    fn additivity_audit() {
        for name in crate::catalog::GROUP_NAMES {
            for mode in [Mode::Plane, Mode::Torus] {
                let r = k(name, mode);
                assert_eq!(
                    r.k0.free_rank() + r.k1.free_rank(),
                    r.total_betti(),
                    "{name} {mode}"
                );
            }
        }
    }
}

//! The validated catalog of all 17 wallpaper groups.
//!
//! Group data lives in `data/catalog.txt` (compiled in) and is parsed and
//! validated on first use. Each group is stored as its point group together
//! with the pullback translation of every element, reduced into [0,1)^2; all
//! group algebra happens in integer lattice coordinates and the geometric
//! lattice description is a rendering hint only.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::lin2::{rat, solve_int, vec2_mod1, vec2_neg, IntSolutions};
use crate::algebra::{Mat2, Rat};
use crate::isometry::{format_rat, AffineIso};

pub const GROUP_NAMES: [&str; 17] = [
    "p1", "p2", "p3", "p4", "p6", "pm", "cm", "pg", "cmm2", "pmm2", "pmg", "pgg2", "p31m", "p3m1",
    "p4mm", "p4mg", "p6mm",
];

pub fn group_names() -> &'static [&'static str] {
    &GROUP_NAMES
}

/// How an element sector meets the finite-order condition: a det = -1 sector
/// is a Reflection sector when some lattice translate of the pullback is an
/// involution, and a Glide sector when none is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementKind {
    Identity,
    Rotation(u32),
    Reflection,
    Glide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointGroupElement {
    pub label: String,
    pub pullback: AffineIso,
    pub kind: ElementKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub elements: Vec<PointGroupElement>,
    pub lattice_hint: String,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown group {0:?} (expected one of the 17 wallpaper groups)")]
    UnknownGroup(String),
    #[error("catalog parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("catalog entry for {group} fails validation:\n{report}")]
    Invalid { group: String, report: String },
}

/// A validation report: empty `violations` means the spec is a genuine
/// cocycle-consistent wallpaper group description.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub group: String,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "{}: ok", self.group)
        } else {
            writeln!(f, "{}: {} violation(s)", self.group, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_by_label(&self, label: &str) -> Option<&PointGroupElement> {
        self.elements.iter().find(|e| e.label == label)
    }

    pub fn element_by_lin(&self, lin: &Mat2) -> Option<&PointGroupElement> {
        self.elements.iter().find(|e| e.pullback.lin == *lin)
    }

    pub fn identity(&self) -> &PointGroupElement {
        self.element_by_lin(&Mat2::IDENT)
            .expect("catalog group without identity")
    }

    /// Nonsymmorphic groups carry a fractional pullback somewhere.
    pub fn is_symmorphic(&self) -> bool {
        self.elements
            .iter()
            .all(|e| crate::algebra::lin2::vec2_is_integral(e.pullback.trans))
    }

    /// Conjugate the whole catalog entry by p in GL(2,Z): matrices become
    /// p M p^-1, translations p u (reduced mod 1). K-homology is invariant
    /// under this.
    pub fn change_basis(&self, p: &Mat2) -> GroupSpec {
        let pinv = p.inv_unimodular();
        let elements = self
            .elements
            .iter()
            .map(|e| {
                let lin = p.mul(&e.pullback.lin).mul(&pinv);
                let trans = vec2_mod1(p.apply(e.pullback.trans));
                let iso = AffineIso::new(trans, lin);
                PointGroupElement {
                    label: e.label.clone(),
                    pullback: iso,
                    kind: classify_sector(&iso),
                }
            })
            .collect();
        GroupSpec {
            name: self.name.clone(),
            elements,
            lattice_hint: self.lattice_hint.clone(),
        }
    }
}

/// Sector classification. The identity sector is Identity; det = +1 with a
/// nontrivial matrix is a rotation of the matrix order; det = -1 splits into
/// Reflection/Glide by the solvability of (I + M)(a + u) = 0 over a in Z^2.
pub fn classify_sector(pullback: &AffineIso) -> ElementKind {
    let m = &pullback.lin;
    if m.is_identity() {
        return ElementKind::Identity;
    }
    if m.det() == 1 {
        return ElementKind::Rotation(m.order(12).expect("non-crystallographic rotation"));
    }
    let ipm = Mat2::new(
        1 + m.0[0][0],
        m.0[0][1],
        m.0[1][0],
        1 + m.0[1][1],
    );
    let rhs = vec2_neg(ipm.apply(pullback.trans));
    match solve_int(&ipm, rhs) {
        IntSolutions::Empty => ElementKind::Glide,
        _ => ElementKind::Reflection,
    }
}

/// Check the 1-cocycle identity and group structure of a candidate spec.
///
/// For every pair (d1, d2) the composed pullback must agree mod Z^2 with the
/// stored pullback of the product element; this is exactly
/// s(d1 d2) = s(d1) + d1 s(d2) on the torus. Closure, identity, inverses,
/// distinct linear parts and the crystallographic restriction are also
/// checked. Failures are reported, not panicked, so corrupted data can be
/// inspected.
pub fn validate_cocycle(spec: &GroupSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let n = spec.elements.len();

    let by_lin: HashMap<Mat2, &PointGroupElement> = spec
        .elements
        .iter()
        .map(|e| (e.pullback.lin, e))
        .collect();
    if by_lin.len() != n {
        violations.push("duplicate linear parts in element list".to_string());
    }
    if spec.element_by_lin(&Mat2::IDENT).is_none() {
        violations.push("identity element missing".to_string());
    }

    for e in &spec.elements {
        if e.pullback.lin.det().abs() != 1 {
            violations.push(format!("{}: linear part not in GL(2,Z)", e.label));
            continue;
        }
        match e.pullback.lin.order(12) {
            Some(k) if matches!(k, 1 | 2 | 3 | 4 | 6) => {}
            _ => violations.push(format!(
                "{}: linear part violates the crystallographic restriction",
                e.label
            )),
        }
        let expected = classify_sector(&e.pullback);
        if expected != e.kind {
            violations.push(format!(
                "{}: kind {:?} inconsistent with matrix/translation data (expected {:?})",
                e.label, e.kind, expected
            ));
        }
    }

    for d1 in &spec.elements {
        for d2 in &spec.elements {
            let prod = d1.pullback.compose(&d2.pullback);
            match by_lin.get(&prod.lin) {
                None => violations.push(format!(
                    "closure fails: {} * {} has linear part outside the group",
                    d1.label, d2.label
                )),
                Some(e) => {
                    if !prod.eq_mod1(&e.pullback) {
                        violations.push(format!(
                            "cocycle fails on ({}, {}): product translation {} != stored {} (mod Z^2)",
                            d1.label,
                            d2.label,
                            crate::isometry::format_vec2(vec2_mod1(prod.trans)),
                            crate::isometry::format_vec2(e.pullback.trans),
                        ));
                    }
                }
            }
        }
    }

    ValidationReport {
        group: spec.name.clone(),
        violations,
    }
}

const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

fn parse_rat(s: &str, line: usize) -> Result<Rat, CatalogError> {
    let mk = |msg: String| CatalogError::Parse { line, msg };
    if let Some((n, d)) = s.split_once('/') {
        let n = i64::from_str(n).map_err(|e| mk(format!("bad numerator {s:?}: {e}")))?;
        let d = i64::from_str(d).map_err(|e| mk(format!("bad denominator {s:?}: {e}")))?;
        if d <= 0 {
            return Err(mk(format!("non-positive denominator in {s:?}")));
        }
        Ok(rat(n, d))
    } else {
        let n = i64::from_str(s).map_err(|e| mk(format!("bad integer {s:?}: {e}")))?;
        Ok(Rat::from_integer(n))
    }
}

/// Parse catalog records from the plain-text format.
pub fn parse_records(text: &str) -> Result<Vec<GroupSpec>, CatalogError> {
    let mut groups: Vec<GroupSpec> = Vec::new();
    let mut current: Option<(GroupSpec, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields[0] {
            "group" => {
                if let Some((g, want)) = current.take() {
                    finish_group(g, want, line, &mut groups)?;
                }
                if fields.len() != 3 {
                    return Err(CatalogError::Parse {
                        line,
                        msg: "expected: group <name> <order>".to_string(),
                    });
                }
                let want = usize::from_str(fields[2]).map_err(|e| CatalogError::Parse {
                    line,
                    msg: format!("bad order: {e}"),
                })?;
                current = Some((
                    GroupSpec {
                        name: fields[1].to_string(),
                        elements: Vec::new(),
                        lattice_hint: String::new(),
                    },
                    want,
                ));
            }
            "lattice" => {
                let Some((g, _)) = current.as_mut() else {
                    return Err(CatalogError::Parse {
                        line,
                        msg: "lattice line outside a group record".to_string(),
                    });
                };
                g.lattice_hint = fields[1..].join(" ");
            }
            label => {
                let Some((g, _)) = current.as_mut() else {
                    return Err(CatalogError::Parse {
                        line,
                        msg: "element line outside a group record".to_string(),
                    });
                };
                if fields.len() != 7 {
                    return Err(CatalogError::Parse {
                        line,
                        msg: format!("expected 7 fields on element line, got {}", fields.len()),
                    });
                }
                let m: Vec<i64> = fields[1..5]
                    .iter()
                    .map(|s| i64::from_str(s))
                    .collect::<Result<_, _>>()
                    .map_err(|e| CatalogError::Parse {
                        line,
                        msg: format!("bad matrix entry: {e}"),
                    })?;
                let t0 = parse_rat(fields[5], line)?;
                let t1 = parse_rat(fields[6], line)?;
                let iso = AffineIso::new(
                    vec2_mod1([t0, t1]),
                    Mat2::new(m[0], m[1], m[2], m[3]),
                );
                g.elements.push(PointGroupElement {
                    label: label.to_string(),
                    pullback: iso,
                    kind: classify_sector(&iso),
                });
            }
        }
    }
    if let Some((g, want)) = current.take() {
        finish_group(g, want, text.lines().count(), &mut groups)?;
    }
    Ok(groups)
}

fn finish_group(
    g: GroupSpec,
    want: usize,
    line: usize,
    out: &mut Vec<GroupSpec>,
) -> Result<(), CatalogError> {
    if g.elements.len() != want {
        return Err(CatalogError::Parse {
            line,
            msg: format!(
                "group {} declares order {} but lists {} elements",
                g.name,
                want,
                g.elements.len()
            ),
        });
    }
    out.push(g);
    Ok(())
}

/// Render records back into the catalog file format; `parse_records` of the
/// output reproduces the input specs exactly.
pub fn render_record(spec: &GroupSpec) -> String {
    let mut s = format!("group {} {}\n", spec.name, spec.order());
    if !spec.lattice_hint.is_empty() {
        s.push_str(&format!("lattice {}\n", spec.lattice_hint));
    }
    for e in &spec.elements {
        let m = &e.pullback.lin.0;
        s.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            e.label,
            m[0][0],
            m[0][1],
            m[1][0],
            m[1][1],
            format_rat(e.pullback.trans[0]),
            format_rat(e.pullback.trans[1]),
        ));
    }
    s
}

fn catalog_map() -> &'static HashMap<String, GroupSpec> {
    static CATALOG: OnceLock<HashMap<String, GroupSpec>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let groups = parse_records(CATALOG_TEXT).expect("embedded catalog parses");
        let mut map = HashMap::new();
        for g in groups {
            let report = validate_cocycle(&g);
            assert!(
                report.is_valid(),
                "embedded catalog entry invalid: {report}"
            );
            map.insert(g.name.clone(), g);
        }
        assert_eq!(map.len(), GROUP_NAMES.len(), "catalog must list 17 groups");
        map
    })
}

/// Look up one of the 17 groups by name.
pub fn catalog(name: &str) -> Result<GroupSpec, CatalogError> {
    catalog_map()
        .get(name)
        .cloned()
        .ok_or_else(|| CatalogError::UnknownGroup(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lin2::vec2_zero;

    #[test]
    fn all_seventeen_load_and_validate() {
        for name in GROUP_NAMES {
            let g = catalog(name).unwrap();
            assert_eq!(g.name, name);
            let report = validate_cocycle(&g);
            assert!(report.is_valid(), "{report}");
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(
            catalog("p17"),
            Err(CatalogError::UnknownGroup(_))
        ));
    }

    #[test]
    fn p1_is_trivial() {
        let g = catalog("p1").unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.identity().pullback.is_identity());
    }

    #[test]
    fn p4mg_rho1_pullback() {
        let g = catalog("p4mg").unwrap();
        let r = g.element_by_label("rho1").unwrap();
        assert_eq!(r.pullback.trans, [rat(1, 2), rat(1, 2)]);
        assert_eq!(r.kind, ElementKind::Glide);
        // The diagonal reflections do fix points.
        assert_eq!(
            g.element_by_label("rho2").unwrap().kind,
            ElementKind::Reflection
        );
    }

    #[test]
    fn symmorphic_flags() {
        for name in ["p1", "p2", "p3", "p4", "p6", "pm", "cm", "cmm2", "pmm2", "p31m", "p3m1", "p4mm", "p6mm"] {
            assert!(catalog(name).unwrap().is_symmorphic(), "{name}");
        }
        for name in ["pg", "pmg", "pgg2", "p4mg"] {
            assert!(!catalog(name).unwrap().is_symmorphic(), "{name}");
        }
    }

    #[test]
    fn record_round_trip() {
        for name in GROUP_NAMES {
            let g = catalog(name).unwrap();
            let text = render_record(&g);
            let parsed = parse_records(&text).unwrap();
            assert_eq!(parsed, vec![g]);
        }
    }

    #[test]
    fn corrupted_pm_reports_cocycle_violation() {
        // rho with translation (1/3, 0) while rho^2 is listed as the
        // identity: rho * rho then has translation (2/3, 0) mod Z^2.
        let mut g = catalog("pm").unwrap();
        g.elements[1].pullback =
            AffineIso::new([rat(1, 3), rat(0, 1)], g.elements[1].pullback.lin);
        let report = validate_cocycle(&g);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("cocycle fails")));
    }

    #[test]
    fn basis_change_stays_valid() {
        let p = Mat2::new(1, 1, 0, 1);
        for name in GROUP_NAMES {
            let g = catalog(name).unwrap().change_basis(&p);
            assert!(validate_cocycle(&g).is_valid(), "{name} after basis change");
            let _ = vec2_zero();
        }
    }
}

//! Conjugacy classes of finite-order elements.
//!
//! Two notions are kept strictly apart and never identified:
//!
//! - **Plane mode**: classes of finite-order isometries of the plane under
//!   conjugation by the whole group. Rotation sectors contribute one class
//!   per orbit of translation cosets, reflection sectors one class per orbit
//!   of parallel axes, glide sectors nothing.
//! - **Torus mode**: classes of the finite point group acting affinely on
//!   the torus, under point-group conjugation. Every point-group element has
//!   finite order as a torus map, so every abstract class appears (glide
//!   sectors included, with empty fixed sets downstream).
//!
//! The enumeration here is exact lattice arithmetic: cosets of (I - M)Z^2
//! per sector, orbits merged by union-find over all point-group conjugators.
//! The brute-force window search over translates, used as an independent
//! oracle in the tests, is `finite_order_translates` + `class_equal`.

use serde::{Deserialize, Serialize};

use crate::algebra::lin2::{rat, smith2, solve_int, vec2_mod1, vec2_sub, IntSolutions};
use crate::algebra::{Mat2, Rat, Vec2};
use crate::catalog::{GroupSpec, PointGroupElement};
use crate::isometry::AffineIso;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Plane,
    Torus,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Plane => write!(f, "plane"),
            Mode::Torus => write!(f, "torus"),
        }
    }
}

/// Geometric kind of a class representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    Identity,
    Rotation {
        #[serde(with = "crate::algebra::lin2::vec2_serde")]
        center: Vec2,
        order: u32,
    },
    Reflection {
        #[serde(with = "crate::algebra::lin2::vec2_serde")]
        base: Vec2,
        dir: [i64; 2],
    },
    /// Torus mode only: a sector acting freely (no finite-order plane
    /// representative). The direction is the invariant axis direction.
    Glide { dir: [i64; 2] },
}

impl ClassKind {
    pub fn code(&self) -> u8 {
        match self {
            ClassKind::Identity => 0,
            ClassKind::Rotation { .. } => 1,
            ClassKind::Reflection { .. } => 2,
            ClassKind::Glide { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    /// Canonical representative: lexicographic minimum of
    /// (trans mod 1, matrix, trans) over the orbit restricted to the
    /// translation window [-2,2]^2 and all point-group conjugators.
    pub rep: AffineIso,
    /// Label of the point-group element carrying the representative.
    pub sector: String,
    /// Element order: plane order in Plane mode, torus order in Torus mode.
    pub order: u32,
    pub kind: ClassKind,
    /// Display name, e.g. "σ", "t∘σ³", "s∘ρ".
    pub label: String,
}

/// Canonicalisation window for representatives.
const REP_WINDOW: i64 = 2;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Sector-level solution data for the finite-order condition.
enum SectorSolutions {
    /// Identity sector: only the identity itself.
    IdentityOnly,
    /// Rotation sector: every lattice translate has finite order; classes
    /// are indexed by cosets of (I - M)Z^2, enumerated via the Smith form
    /// U (I - M) V = diag(d1, d2).
    Rotation {
        u: Mat2,
        d1: i64,
        d2: i64,
        uinv: Mat2,
    },
    /// Reflection sector: the finite-order translates are a = base + t*dir;
    /// translation conjugation shifts t by multiples of `period`.
    Reflection {
        base: [i64; 2],
        dir: [i64; 2],
        period: i64,
    },
    /// Glide sector: no finite-order translates.
    Glide,
}

fn sector_solutions(e: &PointGroupElement) -> SectorSolutions {
    let m = &e.pullback.lin;
    if m.is_identity() {
        return SectorSolutions::IdentityOnly;
    }
    let imm = m.sub_from_identity();
    if imm.det() != 0 {
        let (u, d, _) = smith2(&imm);
        return SectorSolutions::Rotation {
            u,
            d1: d.0[0][0],
            d2: d.0[1][1],
            uinv: u.inv_unimodular(),
        };
    }
    // det(M) = -1: solve (I + M)(a + u) = 0 for a in Z^2.
    let ipm = Mat2::new(1 + m.0[0][0], m.0[0][1], m.0[1][0], 1 + m.0[1][1]);
    let rhs = [
        -(rat(ipm.0[0][0], 1) * e.pullback.trans[0] + rat(ipm.0[0][1], 1) * e.pullback.trans[1]),
        -(rat(ipm.0[1][0], 1) * e.pullback.trans[0] + rat(ipm.0[1][1], 1) * e.pullback.trans[1]),
    ];
    match solve_int(&ipm, rhs) {
        IntSolutions::Empty => SectorSolutions::Glide,
        IntSolutions::Line { base, dir } => {
            // Translation conjugation moves a by (I - M)b. The image lattice
            // is a sublattice of Z*dir; its index is the number of parallel
            // axis families in this sector.
            let c1 = [imm.0[0][0], imm.0[1][0]];
            let c2 = [imm.0[0][1], imm.0[1][1]];
            let lambda = |c: [i64; 2]| -> i64 {
                if dir[0] != 0 {
                    c[0] / dir[0]
                } else {
                    c[1] / dir[1]
                }
            };
            let period = num::integer::gcd(lambda(c1).abs(), lambda(c2).abs());
            assert!(period > 0, "degenerate reflection sector");
            SectorSolutions::Reflection { base, dir, period }
        }
        IntSolutions::Point(p) => {
            unreachable!("isolated solution {p:?} in a det=-1 sector")
        }
        IntSolutions::All => unreachable!("I + M = 0 impossible for det(M) = -1"),
    }
}

/// Node key inside a sector: rotation coset id or reflection axis residue.
fn node_key(sol: &SectorSolutions, a: [i64; 2]) -> Option<u64> {
    match sol {
        SectorSolutions::IdentityOnly => (a == [0, 0]).then_some(0),
        SectorSolutions::Rotation { u, d1, d2, .. } => {
            let w = u.apply_int(a);
            let i = w[0].rem_euclid(*d1);
            let j = w[1].rem_euclid(*d2);
            Some((i * *d2 + j) as u64)
        }
        SectorSolutions::Reflection { base, dir, period } => {
            let diff = [a[0] - base[0], a[1] - base[1]];
            // Reject points off the solution line.
            if diff[0] * dir[1] != diff[1] * dir[0] {
                return None;
            }
            let t = if dir[0] != 0 {
                if diff[0] % dir[0] != 0 {
                    return None;
                }
                diff[0] / dir[0]
            } else {
                if diff[0] != 0 || diff[1] % dir[1] != 0 {
                    return None;
                }
                diff[1] / dir[1]
            };
            Some(t.rem_euclid(*period) as u64)
        }
        SectorSolutions::Glide => None,
    }
}

/// A concrete integer translate realising a node key.
fn node_example(sol: &SectorSolutions, key: u64) -> [i64; 2] {
    match sol {
        SectorSolutions::IdentityOnly => [0, 0],
        SectorSolutions::Rotation { d2, uinv, .. } => {
            let i = (key as i64) / d2;
            let j = (key as i64) % d2;
            uinv.apply_int([i, j])
        }
        SectorSolutions::Reflection { base, dir, .. } => {
            let t = key as i64;
            [base[0] + t * dir[0], base[1] + t * dir[1]]
        }
        SectorSolutions::Glide => unreachable!(),
    }
}

fn node_count(sol: &SectorSolutions) -> u64 {
    match sol {
        SectorSolutions::IdentityOnly => 1,
        SectorSolutions::Rotation { d1, d2, .. } => (d1 * d2) as u64,
        SectorSolutions::Reflection { period, .. } => *period as u64,
        SectorSolutions::Glide => 0,
    }
}

/// All finite-order plane isometries (a + u_d, M_d) with a in the square
/// window [-window, window]^2. Empty for glide sectors.
pub fn finite_order_translates(d: &PointGroupElement, window: i64) -> Vec<AffineIso> {
    let mut out = Vec::new();
    for a0 in -window..=window {
        for a1 in -window..=window {
            let g = translate_of(d, [a0, a1]);
            if g.has_finite_plane_order() {
                out.push(g);
            }
        }
    }
    out
}

/// Decision procedure: does some conjugator (b + u_e, M_e) with
/// b in [-window, window]^2 carry g to h exactly?
pub fn class_equal(g: &AffineIso, h: &AffineIso, spec: &GroupSpec, window: i64) -> bool {
    for e in &spec.elements {
        for b0 in -window..=window {
            for b1 in -window..=window {
                let conj = translate_of(e, [b0, b1]);
                if conj.conjugate(g) == *h {
                    return true;
                }
            }
        }
    }
    false
}

/// Conjugation by a pure lattice translation (change of origin).
pub fn conjugate_by_translation(g: &AffineIso, m: [i64; 2]) -> AffineIso {
    g.conjugate_by_translation(m)
}

/// Enumerate FC in the requested mode, deterministically sorted by
/// (order, kind, representative).
pub fn enumerate_fc(spec: &GroupSpec, mode: Mode) -> Vec<ConjClass> {
    let mut classes = match mode {
        Mode::Plane => plane_classes(spec),
        Mode::Torus => torus_classes(spec),
    };
    classes.sort_by(|a, b| {
        (
            a.order,
            a.kind.code(),
            vec2_mod1(a.rep.trans),
            a.rep.lin,
            a.rep.trans,
        )
            .cmp(&(
                b.order,
                b.kind.code(),
                vec2_mod1(b.rep.trans),
                b.rep.lin,
                b.rep.trans,
            ))
    });
    classes
}

fn plane_classes(spec: &GroupSpec) -> Vec<ConjClass> {
    let sols: Vec<SectorSolutions> = spec.elements.iter().map(sector_solutions).collect();
    let mut node_index: Vec<(usize, u64)> = Vec::new();
    let mut offsets: Vec<usize> = Vec::new();
    for (si, sol) in sols.iter().enumerate() {
        offsets.push(node_index.len());
        for key in 0..node_count(sol) {
            node_index.push((si, key));
        }
    }

    let mut uf = UnionFind::new(node_index.len());
    for (idx, &(si, key)) in node_index.iter().enumerate() {
        let a = node_example(&sols[si], key);
        let g = translate_of(&spec.elements[si], a);
        for e in &spec.elements {
            let g2 = e.pullback.conjugate(&g);
            let (sj, a2) = sector_and_offset(spec, &g2);
            let key2 = node_key(&sols[sj], a2)
                .expect("conjugate of a finite-order element must have finite order");
            uf.union(idx, offsets[sj] + key2 as usize);
        }
    }

    let mut comp_members: std::collections::BTreeMap<usize, Vec<(usize, u64)>> =
        std::collections::BTreeMap::new();
    for (idx, &(si, key)) in node_index.iter().enumerate() {
        let root = uf.find(idx);
        comp_members.entry(root).or_default().push((si, key));
    }

    comp_members
        .into_values()
        .map(|members| build_class(spec, &sols, &members, Mode::Plane))
        .collect()
}

fn torus_classes(spec: &GroupSpec) -> Vec<ConjClass> {
    let n = spec.elements.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for e in &spec.elements {
            let conj = e.pullback.conjugate(&spec.elements[i].pullback);
            let j = spec
                .elements
                .iter()
                .position(|x| x.pullback.lin == conj.lin)
                .expect("validated group is closed");
            uf.union(i, j);
        }
    }
    let mut comp: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..n {
        let r = uf.find(i);
        comp.entry(r).or_default().push(i);
    }
    comp.into_values()
        .map(|members| {
            let rep_idx = *members
                .iter()
                .min_by_key(|&&i| {
                    let p = &spec.elements[i].pullback;
                    (vec2_mod1(p.trans), p.lin, p.trans)
                })
                .unwrap();
            let e = &spec.elements[rep_idx];
            let rep = e.pullback;
            let order = rep.order().torus.expect("point-group torus order");
            ConjClass {
                rep,
                sector: e.label.clone(),
                order,
                kind: classify_rep(&rep),
                label: display_label(spec, &rep),
            }
        })
        .collect()
}

fn translate_of(e: &PointGroupElement, a: [i64; 2]) -> AffineIso {
    AffineIso::new(
        [
            e.pullback.trans[0] + Rat::from_integer(a[0]),
            e.pullback.trans[1] + Rat::from_integer(a[1]),
        ],
        e.pullback.lin,
    )
}

/// Which sector does g belong to, and with which integer offset from the
/// stored pullback?
fn sector_and_offset(spec: &GroupSpec, g: &AffineIso) -> (usize, [i64; 2]) {
    let si = spec
        .elements
        .iter()
        .position(|x| x.pullback.lin == g.lin)
        .expect("element outside the group sectors");
    let diff = vec2_sub(g.trans, spec.elements[si].pullback.trans);
    assert!(
        diff[0].is_integer() && diff[1].is_integer(),
        "translation offset must be integral"
    );
    (si, [diff[0].to_integer(), diff[1].to_integer()])
}

fn build_class(
    spec: &GroupSpec,
    sols: &[SectorSolutions],
    members: &[(usize, u64)],
    mode: Mode,
) -> ConjClass {
    // Gather all window translates belonging to the class, then take the
    // lexicographic minimum. Window stability is asserted by the tests.
    let mut best: Option<(AffineIso, usize)> = None;
    for &(si, key) in members {
        for a0 in -REP_WINDOW..=REP_WINDOW {
            for a1 in -REP_WINDOW..=REP_WINDOW {
                if node_key(&sols[si], [a0, a1]) != Some(key) {
                    continue;
                }
                let g = translate_of(&spec.elements[si], [a0, a1]);
                let better = match &best {
                    None => true,
                    Some((b, _)) => {
                        (vec2_mod1(g.trans), g.lin, g.trans) < (vec2_mod1(b.trans), b.lin, b.trans)
                    }
                };
                if better {
                    best = Some((g, si));
                }
            }
        }
    }
    let (rep, sector_idx) = best.expect("class without a window representative");
    let order = match mode {
        Mode::Plane => rep.order().plane.expect("plane class has finite order"),
        Mode::Torus => rep.order().torus.expect("torus order"),
    };
    ConjClass {
        rep,
        sector: spec.elements[sector_idx].label.clone(),
        order,
        kind: classify_rep(&rep),
        label: display_label(spec, &rep),
    }
}

fn classify_rep(rep: &AffineIso) -> ClassKind {
    if rep.is_identity() {
        return ClassKind::Identity;
    }
    if rep.lin.det() == 1 && !rep.lin.is_identity() {
        let order = rep.lin.order(12).unwrap();
        let center = rep.rotation_center().expect("rotation has a center");
        return ClassKind::Rotation { center, order };
    }
    if rep.lin.det() == -1 {
        let imm = rep.lin.sub_from_identity();
        let dir = imm
            .kernel_primitive()
            .expect("det=-1 sector has an axis direction");
        if rep.has_finite_plane_order() {
            let base = reflection_axis_base(rep, dir);
            return ClassKind::Reflection { base, dir };
        }
        return ClassKind::Glide { dir };
    }
    unreachable!("unexpected class representative {rep:?}")
}

/// A point on the fixed axis of a finite-order reflection: a particular
/// solution of the rank-1 system (I - M) x = trans, with its component along
/// the axis direction removed. Deterministic and exact.
fn reflection_axis_base(rep: &AffineIso, dir: [i64; 2]) -> Vec2 {
    let imm = rep.lin.sub_from_identity();
    let m = imm.0;
    let t = rep.trans;
    let (row, rhs) = if m[0][0] != 0 || m[0][1] != 0 {
        ([m[0][0], m[0][1]], t[0])
    } else {
        ([m[1][0], m[1][1]], t[1])
    };
    let particular = if row[0] != 0 {
        [rhs / rat(row[0], 1), Rat::from_integer(0)]
    } else {
        [Rat::from_integer(0), rhs / rat(row[1], 1)]
    };
    let num = particular[0] * rat(dir[0], 1) + particular[1] * rat(dir[1], 1);
    let den = rat(dir[0] * dir[0] + dir[1] * dir[1], 1);
    let lambda = num / den;
    [
        particular[0] - lambda * rat(dir[0], 1),
        particular[1] - lambda * rat(dir[1], 1),
    ]
}

/// Display label in the style of the reference tables: lattice offset parts
/// (s, t with multiplicities) composed onto the sector symbol.
fn display_label(spec: &GroupSpec, rep: &AffineIso) -> String {
    let (si, a) = sector_and_offset(spec, rep);
    let sector = pretty_symbol(&spec.elements[si].label);
    if a == [0, 0] {
        return sector;
    }
    let mut parts: Vec<String> = Vec::new();
    let coef = |k: i64, sym: &str| -> String {
        match k {
            1 => sym.to_string(),
            -1 => format!("-{sym}"),
            k => format!("{k}{sym}"),
        }
    };
    if a[1] != 0 {
        parts.push(coef(a[1], "s"));
    }
    if a[0] != 0 {
        parts.push(coef(a[0], "t"));
    }
    parts.push(sector);
    parts.join("\u{2218}") // ∘
}

/// Map catalog labels to display symbols: sigma3 -> σ³, rho1 -> ρ₁.
pub fn pretty_symbol(label: &str) -> String {
    const SUP: [&str; 10] = ["⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"];
    const SUB: [&str; 10] = ["₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"];
    if label == "id" {
        return "id".to_string();
    }
    if let Some(rest) = label.strip_prefix("sigma") {
        let mut s = "σ".to_string();
        for ch in rest.chars() {
            s.push_str(SUP[ch.to_digit(10).unwrap() as usize]);
        }
        return s;
    }
    if let Some(rest) = label.strip_prefix("rho") {
        let mut s = "ρ".to_string();
        for ch in rest.chars() {
            s.push_str(SUB[ch.to_digit(10).unwrap() as usize]);
        }
        return s;
    }
    label.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn class_count(name: &str, mode: Mode) -> usize {
        enumerate_fc(&catalog(name).unwrap(), mode).len()
    }

    #[test]
    fn plane_counts_match_geometry() {
        // Counts forced by the lattice geometry of each group (one class per
        // orbit of rotation centers / mirror axis families, plus identity).
        assert_eq!(class_count("p1", Mode::Plane), 1);
        assert_eq!(class_count("p2", Mode::Plane), 5);
        assert_eq!(class_count("p3", Mode::Plane), 7);
        assert_eq!(class_count("p4", Mode::Plane), 8);
        assert_eq!(class_count("p6", Mode::Plane), 9);
        assert_eq!(class_count("pm", Mode::Plane), 3);
        assert_eq!(class_count("cm", Mode::Plane), 2);
        assert_eq!(class_count("pg", Mode::Plane), 1);
        assert_eq!(class_count("pmm2", Mode::Plane), 9);
        assert_eq!(class_count("pmg", Mode::Plane), 4);
        assert_eq!(class_count("pgg2", Mode::Plane), 3);
        assert_eq!(class_count("cmm2", Mode::Plane), 6);
        assert_eq!(class_count("p31m", Mode::Plane), 5);
        assert_eq!(class_count("p3m1", Mode::Plane), 5);
        assert_eq!(class_count("p4mm", Mode::Plane), 9);
        assert_eq!(class_count("p4mg", Mode::Plane), 6);
        assert_eq!(class_count("p6mm", Mode::Plane), 8);
    }

    #[test]
    fn torus_counts_are_point_group_classes() {
        assert_eq!(class_count("p1", Mode::Torus), 1);
        assert_eq!(class_count("p2", Mode::Torus), 2);
        assert_eq!(class_count("p3", Mode::Torus), 3);
        assert_eq!(class_count("p4", Mode::Torus), 4);
        assert_eq!(class_count("p6", Mode::Torus), 6);
        assert_eq!(class_count("pm", Mode::Torus), 2);
        assert_eq!(class_count("cmm2", Mode::Torus), 4);
        assert_eq!(class_count("p4mm", Mode::Torus), 5);
        assert_eq!(class_count("p4mg", Mode::Torus), 5);
        assert_eq!(class_count("p6mm", Mode::Torus), 6);
    }

    #[test]
    fn pg_has_only_the_identity() {
        let g = catalog("pg").unwrap();
        let fc = enumerate_fc(&g, Mode::Plane);
        assert_eq!(fc.len(), 1);
        assert_eq!(fc[0].kind, ClassKind::Identity);
        let rho = g.element_by_label("rho").unwrap();
        assert!(finite_order_translates(rho, 4).is_empty());
    }

    #[test]
    fn pm_reflection_translates() {
        let g = catalog("pm").unwrap();
        let rho = g.element_by_label("rho").unwrap();
        // a = (0, k) for k in -1..=1: reflections about y = -k/2.
        let ts = finite_order_translates(rho, 1);
        assert_eq!(ts.len(), 3);
    }

    #[test]
    fn rotation_center_invariant() {
        for name in crate::catalog::GROUP_NAMES {
            let g = catalog(name).unwrap();
            for c in enumerate_fc(&g, Mode::Plane) {
                if let ClassKind::Rotation { center, .. } = &c.kind {
                    let img = c.rep.apply(*center);
                    assert_eq!(img, *center, "{name}: {} center not fixed", c.label);
                }
            }
        }
    }

    #[test]
    fn p6_plane_class_inventory() {
        let g = catalog("p6").unwrap();
        let fc = enumerate_fc(&g, Mode::Plane);
        assert_eq!(fc.len(), 9);
        let count = |k: u32| {
            fc.iter()
                .filter(|c| matches!(c.kind, ClassKind::Rotation { order, .. } if order == k))
                .count()
        };
        assert_eq!(count(6), 2);
        assert_eq!(count(3), 4);
        assert_eq!(count(2), 2);
    }

    #[test]
    fn p2_centers_are_mutually_inequivalent() {
        let g = catalog("p2").unwrap();
        let sigma = g.element_by_label("sigma").unwrap().pullback;
        let at_half = AffineIso::new([Rat::from_integer(1), Rat::from_integer(0)], sigma.lin);
        assert!(!class_equal(&sigma, &at_half, &g, 4));
        assert!(class_equal(
            &sigma,
            &sigma.conjugate_by_translation([2, -1]),
            &g,
            4
        ));
    }

    #[test]
    fn window_stability() {
        // The enumerated class lists do not depend on the internal window;
        // cross-check via the count of pairwise class_equal distinctions at
        // windows 2 and 4 for a couple of groups with fractional pullbacks.
        for name in ["pmg", "pgg2", "p4mg", "cmm2"] {
            let g = catalog(name).unwrap();
            let fc = enumerate_fc(&g, Mode::Plane);
            for (i, a) in fc.iter().enumerate() {
                for (j, b) in fc.iter().enumerate() {
                    let eq2 = class_equal(&a.rep, &b.rep, &g, 2);
                    let eq4 = class_equal(&a.rep, &b.rep, &g, 4);
                    assert_eq!(eq2, eq4, "{name} {i} {j}");
                    assert_eq!(eq2, i == j, "{name} classes {i},{j} distinctness");
                }
            }
        }
    }
}

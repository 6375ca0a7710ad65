//! Triangulations of the torus carrying a simplicial point-group action,
//! quotient complexes, and their integral homology.
//!
//! The 2-dimensional orbit spaces (plane mod full group = torus mod finite
//! affine action) are computed here from scratch: build a triangulation of
//! [0,1)^2 on which the action is simplicial, subdivide barycentrically once
//! so the action is regular, take cell orbits as quotient cells, assemble
//! boundary matrices, and reduce them by Smith elimination. No surface is
//! ever looked up from a table; the known classification is used only as a
//! test oracle.
//!
//! Vertex coordinates are scaled integers x/scale in [0,1): the grid step,
//! square centers, edge midpoints and barycenters all live on a common
//! refinement, so equality is integer equality and the group action is exact.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::sparse::SparseIntMat;
use crate::algebra::{FinAbGroup, Mat2, Vec2};
use crate::catalog::GroupSpec;

#[derive(Debug, Error)]
pub enum ComplexBuildError {
    #[error("resolution {n} is incompatible with the group data: {reason}; use a finer grid")]
    Resolution { n: u32, reason: String },
    #[error("no lattice basis makes the point action simplicial on a uniform grid")]
    NoCompatibleBasis,
    #[error("action is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("action stays irregular after the bounded subdivisions")]
    Irregular,
}

#[derive(Debug, Error)]
pub enum QuotientError {
    #[error("inconsistent orientation transport on cell orbits: {0}")]
    Orientation(String),
    #[error("boundary of boundary is nonzero after quotient")]
    BoundaryBroken,
}

/// Which uniform triangulation pattern underlies the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    /// Each grid square split into 4 triangles at its center.
    Center,
    /// Each grid square split along the (1,1) diagonal.
    DiagNe,
    /// Each grid square split along the (1,-1) diagonal.
    DiagNw,
}

/// A triangulated torus with exact scaled-integer vertex coordinates.
#[derive(Clone, Debug)]
pub struct TorusComplex {
    pub scale: u32,
    pub verts: Vec<(u32, u32)>,
    vert_index: HashMap<(u32, u32), usize>,
    /// Sorted vertex pairs.
    pub edges: Vec<[usize; 2]>,
    edge_index: HashMap<[usize; 2], usize>,
    /// Sorted vertex triples.
    pub tris: Vec<[usize; 3]>,
    tri_index: HashMap<[usize; 3], usize>,
}

impl TorusComplex {
    fn from_triangles(scale: u32, coord_tris: &[[(u32, u32); 3]]) -> Self {
        let mut verts = Vec::new();
        let mut vert_index: HashMap<(u32, u32), usize> = HashMap::new();
        let mut tris = Vec::new();
        for t in coord_tris {
            let mut idx = [0usize; 3];
            for (k, p) in t.iter().enumerate() {
                idx[k] = *vert_index.entry(*p).or_insert_with(|| {
                    verts.push(*p);
                    verts.len() - 1
                });
            }
            idx.sort_unstable();
            assert!(idx[0] < idx[1] && idx[1] < idx[2], "degenerate triangle");
            tris.push(idx);
        }
        tris.sort_unstable();
        let before = tris.len();
        tris.dedup();
        assert_eq!(
            before,
            tris.len(),
            "duplicate triangles: the grid is too coarse for the torus"
        );
        let mut edges = Vec::new();
        for t in &tris {
            edges.push([t[0], t[1]]);
            edges.push([t[0], t[2]]);
            edges.push([t[1], t[2]]);
        }
        edges.sort_unstable();
        edges.dedup();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let tri_index = tris.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        TorusComplex {
            scale,
            verts,
            vert_index,
            edges,
            edge_index,
            tris,
            tri_index,
        }
    }

    pub fn cell_counts(&self) -> [usize; 3] {
        [self.verts.len(), self.edges.len(), self.tris.len()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.verts.len() as i64 - self.edges.len() as i64 + self.tris.len() as i64
    }

    /// One barycentric subdivision; the scale grows by 6 so edge midpoints
    /// and barycenters stay on the integer grid.
    pub fn barycentric(&self) -> TorusComplex {
        let ns = self.scale * 6;
        let wrap = |x: i64| -> u32 { x.rem_euclid(ns as i64) as u32 };
        let mut coord_tris = Vec::with_capacity(self.tris.len() * 6);
        for t in &self.tris {
            // Lift to plane representatives near the first vertex: a torus
            // triangle can straddle the wrap seam.
            let p0 = (
                self.verts[t[0]].0 as i64 * 6,
                self.verts[t[0]].1 as i64 * 6,
            );
            let reps: Vec<(i64, i64)> = t
                .iter()
                .map(|&vi| {
                    let p = (self.verts[vi].0 as i64 * 6, self.verts[vi].1 as i64 * 6);
                    (
                        near_rep(p.0, p0.0, ns as i64),
                        near_rep(p.1, p0.1, ns as i64),
                    )
                })
                .collect();
            let bary = (
                (reps[0].0 + reps[1].0 + reps[2].0) / 3,
                (reps[0].1 + reps[1].1 + reps[2].1) / 3,
            );
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let mid = ((reps[i].0 + reps[j].0) / 2, (reps[i].1 + reps[j].1) / 2);
                    coord_tris.push([
                        (wrap(reps[i].0), wrap(reps[i].1)),
                        (wrap(mid.0), wrap(mid.1)),
                        (wrap(bary.0), wrap(bary.1)),
                    ]);
                }
            }
        }
        TorusComplex::from_triangles(ns, &coord_tris)
    }
}

/// Representative of x (mod m) nearest to the anchor value.
fn near_rep(x: i64, anchor: i64, m: i64) -> i64 {
    let mut best = x;
    for cand in [x - m, x + m] {
        if (cand - anchor).abs() < (best - anchor).abs() {
            best = cand;
        }
    }
    best
}

/// The action of one group element as a vertex permutation.
#[derive(Clone, Debug)]
pub struct VertexPerm(pub Vec<usize>);

/// A torus triangulation together with the simplicial action of every
/// point-group element (indexed like `spec.elements`).
pub struct EquivariantComplex {
    pub complex: TorusComplex,
    pub actions: Vec<VertexPerm>,
    /// Basis change applied to the group before triangulating (identity when
    /// the catalog matrices already preserve a uniform grid pattern).
    pub basis: Mat2,
    pub split: SplitKind,
    pub subdivisions: u32,
}

fn is_signed_permutation(m: &Mat2) -> bool {
    let a = m.0;
    let row_ok = |r: [i64; 2]| (r[0].abs() == 1 && r[1] == 0) || (r[0] == 0 && r[1].abs() == 1);
    row_ok(a[0]) && row_ok(a[1]) && a[0][0].abs() != a[1][0].abs()
}

fn preserves_directions(m: &Mat2, dirs: &[[i64; 2]; 3]) -> bool {
    dirs.iter().all(|d| {
        let img = m.apply_int(*d);
        dirs.iter().any(|e| img == *e || img == [-e[0], -e[1]])
    })
}

fn split_compatible(split: SplitKind, m: &Mat2) -> bool {
    match split {
        SplitKind::Center => is_signed_permutation(m),
        SplitKind::DiagNe => preserves_directions(m, &[[1, 0], [0, 1], [1, 1]]),
        SplitKind::DiagNw => preserves_directions(m, &[[1, 0], [0, 1], [1, -1]]),
    }
}

/// Lagrange-Gauss reduction of a positive definite integer form
/// [[a,b],[b,c]]: returns r unimodular with r^T q r reduced (|2b| <= a <= c).
fn gauss_reduce(q: [[i64; 2]; 2]) -> Mat2 {
    let (mut a, mut b, mut c) = (q[0][0], q[0][1], q[1][1]);
    let mut r = Mat2::IDENT;
    loop {
        if a > c {
            std::mem::swap(&mut a, &mut c);
            r = r.mul(&Mat2::new(0, 1, 1, 0));
            continue;
        }
        let t = (2 * b + a).div_euclid(2 * a); // round(b/a)
        if t == 0 {
            break;
        }
        c = c - 2 * t * b + t * t * a;
        b -= t * a;
        r = r.mul(&Mat2::new(1, -t, 0, 1));
    }
    r
}

fn small_unimodulars() -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            for c in -1..=1i64 {
                for d in -1..=1i64 {
                    let m = Mat2::new(a, b, c, d);
                    if m.det().abs() == 1 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Choose a basis change p and split pattern so that every conjugated matrix
/// p M p^-1 maps the pattern's triangles to triangles.
fn choose_basis(spec: &GroupSpec) -> Result<(Mat2, SplitKind), ComplexBuildError> {
    let splits = [SplitKind::Center, SplitKind::DiagNe, SplitKind::DiagNw];
    let fits = |p: &Mat2| -> Option<SplitKind> {
        let pinv = p.inv_unimodular();
        splits.into_iter().find(|&split| {
            spec.elements.iter().all(|e| {
                let m = p.mul(&e.pullback.lin).mul(&pinv);
                split_compatible(split, &m)
            })
        })
    };

    if let Some(split) = fits(&Mat2::IDENT) {
        return Ok((Mat2::IDENT, split));
    }

    // Reduce the invariant quadratic form Q = sum over D of M^T M;
    // isometries of a reduced binary form have entries in {-1,0,1}, which
    // the split patterns absorb.
    let mut q = [[0i64; 2]; 2];
    for e in &spec.elements {
        let m = e.pullback.lin;
        let mtm = m.transpose().mul(&m);
        for i in 0..2 {
            for j in 0..2 {
                q[i][j] += mtm.0[i][j];
            }
        }
    }
    let r = gauss_reduce(q);
    let base = r.inv_unimodular();
    if let Some(split) = fits(&base) {
        return Ok((base, split));
    }
    for u in small_unimodulars() {
        let p = u.mul(&base);
        if let Some(split) = fits(&p) {
            return Ok((p, split));
        }
    }
    Err(ComplexBuildError::NoCompatibleBasis)
}

fn base_complex(split: SplitKind, n: u32) -> TorusComplex {
    let mut coord_tris = Vec::new();
    match split {
        SplitKind::Center => {
            let scale = 2 * n;
            for i in 0..n {
                for j in 0..n {
                    let g00 = (2 * i, 2 * j);
                    let g10 = ((2 * i + 2) % scale, 2 * j);
                    let g01 = (2 * i, (2 * j + 2) % scale);
                    let g11 = ((2 * i + 2) % scale, (2 * j + 2) % scale);
                    let c = (2 * i + 1, 2 * j + 1);
                    coord_tris.push([g00, g10, c]);
                    coord_tris.push([g10, g11, c]);
                    coord_tris.push([g11, g01, c]);
                    coord_tris.push([g01, g00, c]);
                }
            }
            TorusComplex::from_triangles(scale, &coord_tris)
        }
        SplitKind::DiagNe | SplitKind::DiagNw => {
            for i in 0..n {
                for j in 0..n {
                    let v00 = (i, j);
                    let v10 = ((i + 1) % n, j);
                    let v01 = (i, (j + 1) % n);
                    let v11 = ((i + 1) % n, (j + 1) % n);
                    if split == SplitKind::DiagNe {
                        coord_tris.push([v00, v10, v11]);
                        coord_tris.push([v00, v11, v01]);
                    } else {
                        coord_tris.push([v00, v10, v01]);
                        coord_tris.push([v10, v11, v01]);
                    }
                }
            }
            TorusComplex::from_triangles(n, &coord_tris)
        }
    }
}

fn vertex_permutation(
    complex: &TorusComplex,
    m: &Mat2,
    u: Vec2,
) -> Result<VertexPerm, ComplexBuildError> {
    let s = complex.scale as i64;
    let u0 = u[0] * crate::algebra::rat(s, 1);
    let u1 = u[1] * crate::algebra::rat(s, 1);
    if !u0.is_integer() || !u1.is_integer() {
        return Err(ComplexBuildError::Resolution {
            n: complex.scale,
            reason: "translation part is off the vertex grid".to_string(),
        });
    }
    let (u0, u1) = (u0.to_integer(), u1.to_integer());
    let mut perm = Vec::with_capacity(complex.verts.len());
    for &(x, y) in &complex.verts {
        let nx = (m.0[0][0] * x as i64 + m.0[0][1] * y as i64 + u0).rem_euclid(s) as u32;
        let ny = (m.0[1][0] * x as i64 + m.0[1][1] * y as i64 + u1).rem_euclid(s) as u32;
        match complex.vert_index.get(&(nx, ny)) {
            Some(&vi) => perm.push(vi),
            None => {
                return Err(ComplexBuildError::NotSimplicial(format!(
                    "vertex image ({nx},{ny})/{s} is not a vertex"
                )))
            }
        }
    }
    Ok(VertexPerm(perm))
}

fn action_is_simplicial(
    complex: &TorusComplex,
    perm: &VertexPerm,
) -> Result<(), ComplexBuildError> {
    for e in &complex.edges {
        let mut img = [perm.0[e[0]], perm.0[e[1]]];
        img.sort_unstable();
        if !complex.edge_index.contains_key(&img) {
            return Err(ComplexBuildError::NotSimplicial(
                "edge image is not an edge".to_string(),
            ));
        }
    }
    for t in &complex.tris {
        let mut img = [perm.0[t[0]], perm.0[t[1]], perm.0[t[2]]];
        img.sort_unstable();
        if img[0] == img[1] || img[1] == img[2] {
            return Err(ComplexBuildError::NotSimplicial(
                "triangle image is degenerate".to_string(),
            ));
        }
        if !complex.tri_index.contains_key(&img) {
            return Err(ComplexBuildError::NotSimplicial(
                "triangle image is not a triangle".to_string(),
            ));
        }
    }
    Ok(())
}

/// No simplex may map to itself without being fixed pointwise, and no
/// simplex may join two vertices of one orbit. Both hold after one
/// barycentric subdivision; verified rather than assumed.
fn action_is_regular(complex: &TorusComplex, actions: &[VertexPerm]) -> bool {
    for perm in actions {
        if perm.0.iter().enumerate().all(|(i, &p)| i == p) {
            continue;
        }
        for e in &complex.edges {
            let img = [perm.0[e[0]], perm.0[e[1]]];
            let mut sorted = img;
            sorted.sort_unstable();
            if sorted == *e && img != *e {
                return false;
            }
        }
        for t in &complex.tris {
            let img = [perm.0[t[0]], perm.0[t[1]], perm.0[t[2]]];
            let mut sorted = img;
            sorted.sort_unstable();
            if sorted == *t && img != *t {
                return false;
            }
        }
    }
    let orbits = vertex_orbits(complex, actions);
    complex.edges.iter().all(|e| orbits[e[0]] != orbits[e[1]])
        && complex.tris.iter().all(|t| {
            orbits[t[0]] != orbits[t[1]]
                && orbits[t[1]] != orbits[t[2]]
                && orbits[t[0]] != orbits[t[2]]
        })
}

fn uf_find(parent: &mut Vec<usize>, i: usize) -> usize {
    if parent[i] != i {
        let r = uf_find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

fn vertex_orbits(complex: &TorusComplex, actions: &[VertexPerm]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..complex.verts.len()).collect();
    for perm in actions {
        for (i, &j) in perm.0.iter().enumerate() {
            let (ri, rj) = (uf_find(&mut parent, i), uf_find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..complex.verts.len())
        .map(|i| uf_find(&mut parent, i))
        .collect()
}

/// Build the torus triangulation carrying the whole point-group action.
///
/// The grid is n x n with n even and divisible by every catalog denominator
/// (12 suffices for all shipped groups). The pattern is center-split when
/// the matrices are signed permutations and a diagonal split otherwise,
/// possibly after an internal basis change. One barycentric subdivision
/// enforces regularity; a second is attempted automatically if the check
/// still fails, and failure after that is an error.
pub fn equivariant_triangulation(
    spec: &GroupSpec,
    n: u32,
) -> Result<EquivariantComplex, ComplexBuildError> {
    if n == 0 || n % 2 != 0 {
        return Err(ComplexBuildError::Resolution {
            n,
            reason: "grid resolution must be a positive even integer".to_string(),
        });
    }
    let (basis, split) = choose_basis(spec)?;
    let conj = spec.change_basis(&basis);
    for e in &conj.elements {
        for c in e.pullback.trans {
            if !(c * crate::algebra::rat(n as i64, 1)).is_integer() {
                return Err(ComplexBuildError::Resolution {
                    n,
                    reason: format!(
                        "pullback translation of {} has denominator not dividing {n}",
                        e.label
                    ),
                });
            }
        }
    }

    let mut complex = base_complex(split, n).barycentric();
    let mut subdivisions = 1;
    loop {
        let mut actions = Vec::with_capacity(conj.elements.len());
        for e in &conj.elements {
            let perm = vertex_permutation(&complex, &e.pullback.lin, e.pullback.trans)?;
            action_is_simplicial(&complex, &perm)?;
            actions.push(perm);
        }
        if action_is_regular(&complex, &actions) {
            return Ok(EquivariantComplex {
                complex,
                actions,
                basis,
                split,
                subdivisions,
            });
        }
        if subdivisions >= 2 {
            return Err(ComplexBuildError::Irregular);
        }
        complex = complex.barycentric();
        subdivisions += 1;
    }
}

/// A quotient chain complex in dimensions 0..=2. Cells are orbits of the
/// cells upstairs; each inherits the orientation of its lexicographically
/// least member.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub n_verts: usize,
    pub n_edges: usize,
    pub n_tris: usize,
    /// Edge endpoints as vertex-orbit ids (representative order).
    pub edge_ends: Vec<[usize; 2]>,
    /// d1[edge] = list of (vertex, coefficient).
    pub d1: Vec<Vec<(usize, i64)>>,
    /// d2[triangle] = list of (edge, coefficient).
    pub d2: Vec<Vec<(usize, i64)>>,
}

/// Quotient of the complex by the given simplicial actions (which must form
/// a group, as the catalog actions do).
pub fn quotient_complex(
    ec: &EquivariantComplex,
    actions: &[VertexPerm],
) -> Result<QuotientComplex, QuotientError> {
    let complex = &ec.complex;
    let nv = complex.verts.len();

    let vorb_root = vertex_orbits(complex, actions);
    let mut vorb_id: HashMap<usize, usize> = HashMap::new();
    let mut n_verts = 0;
    let mut vmap = vec![0usize; nv];
    for i in 0..nv {
        let root = vorb_root[i];
        let id = *vorb_id.entry(root).or_insert_with(|| {
            let id = n_verts;
            n_verts += 1;
            id
        });
        vmap[i] = id;
    }

    // Edge orbits with orientation transport: the sign records whether the
    // member's sorted vertex order agrees with the image order.
    let (emap, esign, n_edges, edge_reps) =
        orbit_with_signs(complex.edges.len(), actions, |perm, idx| {
            let e = complex.edges[idx];
            let img = [perm.0[e[0]], perm.0[e[1]]];
            let mut sorted = img;
            sorted.sort_unstable();
            let target = complex.edge_index[&sorted];
            let sign = if img[0] < img[1] { 1 } else { -1 };
            (target, sign)
        })?;

    // Triangle orbits: sign = parity of the sorting permutation of the image.
    let (_tmap, _tsign, n_tris, tri_reps) =
        orbit_with_signs(complex.tris.len(), actions, |perm, idx| {
            let t = complex.tris[idx];
            let img = [perm.0[t[0]], perm.0[t[1]], perm.0[t[2]]];
            let mut sorted = img;
            sorted.sort_unstable();
            let target = complex.tri_index[&sorted];
            (target, permutation_parity(&img))
        })?;

    let mut d1: Vec<Vec<(usize, i64)>> = Vec::with_capacity(n_edges);
    let mut edge_ends = Vec::with_capacity(n_edges);
    for &rep in &edge_reps {
        let e = complex.edges[rep];
        edge_ends.push([vmap[e[0]], vmap[e[1]]]);
        let mut entries = Vec::new();
        push_entry(&mut entries, vmap[e[1]], 1);
        push_entry(&mut entries, vmap[e[0]], -1);
        entries.retain(|&(_, c)| c != 0);
        d1.push(entries);
    }
    let mut d2: Vec<Vec<(usize, i64)>> = Vec::with_capacity(n_tris);
    for &rep in &tri_reps {
        let t = complex.tris[rep];
        let faces = [([t[1], t[2]], 1i64), ([t[0], t[2]], -1), ([t[0], t[1]], 1)];
        let mut entries = Vec::new();
        for (pair, sgn) in faces {
            let ei = complex.edge_index[&pair];
            push_entry(&mut entries, emap[ei], sgn * esign[ei]);
        }
        entries.retain(|&(_, c)| c != 0);
        d2.push(entries);
    }

    let qc = QuotientComplex {
        n_verts,
        n_edges,
        n_tris,
        edge_ends,
        d1,
        d2,
    };
    if !qc.boundary_of_boundary_is_zero() {
        return Err(QuotientError::BoundaryBroken);
    }
    Ok(qc)
}

fn push_entry(entries: &mut Vec<(usize, i64)>, idx: usize, coeff: i64) {
    for e in entries.iter_mut() {
        if e.0 == idx {
            e.1 += coeff;
            return;
        }
    }
    entries.push((idx, coeff));
}

fn permutation_parity(v: &[usize; 3]) -> i64 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Orbits of cell indices with a sign transported along the action;
/// inconsistent transport (a cell carried onto itself with reversed
/// orientation) is reported, though the regularity check rules it out.
#[allow(clippy::type_complexity)]
fn orbit_with_signs(
    count: usize,
    actions: &[VertexPerm],
    image: impl Fn(&VertexPerm, usize) -> (usize, i64),
) -> Result<(Vec<usize>, Vec<i64>, usize, Vec<usize>), QuotientError> {
    let mut parent: Vec<usize> = (0..count).collect();
    for perm in actions {
        for idx in 0..count {
            let (img, _) = image(perm, idx);
            let (a, b) = (uf_find(&mut parent, idx), uf_find(&mut parent, img));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut orbit_id: HashMap<usize, usize> = HashMap::new();
    let mut map = vec![usize::MAX; count];
    for idx in 0..count {
        let root = uf_find(&mut parent, idx);
        let id = *orbit_id.entry(root).or_insert_with(|| {
            reps.push(root);
            reps.len() - 1
        });
        map[idx] = id;
    }

    let mut sign = vec![0i64; count];
    for &rep in &reps {
        sign[rep] = 1;
    }
    let mut queue: Vec<usize> = reps.clone();
    while let Some(idx) = queue.pop() {
        let s = sign[idx];
        for perm in actions {
            let (img, ds) = image(perm, idx);
            let new_sign = s * ds;
            if sign[img] == 0 {
                sign[img] = new_sign;
                queue.push(img);
            } else if sign[img] != new_sign {
                return Err(QuotientError::Orientation(format!(
                    "cell {idx} transports opposite signs onto {img}"
                )));
            }
        }
    }
    Ok((map, sign, reps.len(), reps))
}

impl QuotientComplex {
    pub fn cell_counts(&self) -> [usize; 3] {
        [self.n_verts, self.n_edges, self.n_tris]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_verts as i64 - self.n_edges as i64 + self.n_tris as i64
    }

    pub fn boundary_of_boundary_is_zero(&self) -> bool {
        for tri in &self.d2 {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(e, ce) in tri {
                for &(v, cv) in &self.d1[e] {
                    *acc.entry(v).or_insert(0) += ce * cv;
                }
            }
            if acc.values().any(|&c| c != 0) {
                return false;
            }
        }
        true
    }

    /// Connected components of the 1-skeleton; the free rank of H0 must
    /// equal this.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n_verts).collect();
        for e in &self.edge_ends {
            let (a, b) = (uf_find(&mut parent, e[0]), uf_find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.n_verts)
            .map(|i| uf_find(&mut parent, i))
            .collect::<std::collections::HashSet<_>>()
            .len()
    }

    /// Integral homology H0, H1, H2 by sparse Smith reduction of the
    /// boundary maps.
    pub fn homology(&self) -> [FinAbGroup; 3] {
        let mut m1 = SparseIntMat::new(self.n_verts, self.n_edges);
        for (j, col) in self.d1.iter().enumerate() {
            for &(i, c) in col {
                m1.add(i, j, c);
            }
        }
        let (r1, _) = m1.rank_and_factors();

        let mut m2 = SparseIntMat::new(self.n_edges, self.n_tris);
        for (j, col) in self.d2.iter().enumerate() {
            for &(i, c) in col {
                m2.add(i, j, c);
            }
        }
        let (r2, f2) = m2.rank_and_factors();

        let torsion1: Vec<u64> = f2
            .iter()
            .filter(|x| !num::One::is_one(*x))
            .map(|x| u64::try_from(x).expect("torsion fits in u64"))
            .collect();

        let h0 = FinAbGroup::free(self.n_verts - r1);
        let h1 = FinAbGroup::new(self.n_edges - r1 - r2, &torsion1);
        let h2 = FinAbGroup::free(self.n_tris - r2);
        [h0, h1, h2]
    }

    /// Plain-text cell dump: dimension, vertex ids, boundary signs.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "cells {} {} {}\n",
            self.n_verts, self.n_edges, self.n_tris
        ));
        for (i, e) in self.edge_ends.iter().enumerate() {
            s.push_str(&format!("1-cell {i}: v{} v{}\n", e[0], e[1]));
        }
        for (i, t) in self.d2.iter().enumerate() {
            let b: Vec<String> = t
                .iter()
                .map(|(e, c)| format!("{}{}e{}", if *c >= 0 { "+" } else { "-" }, c.abs(), e))
                .collect();
            s.push_str(&format!("2-cell {i}: {}\n", b.join(" ")));
        }
        s
    }
}

/// Homology of the full (unquotiented) torus complex; the trivial action
/// gives the identity quotient.
pub fn torus_homology(complex: &TorusComplex) -> [FinAbGroup; 3] {
    let ec = EquivariantComplex {
        complex: complex.clone(),
        actions: vec![],
        basis: Mat2::IDENT,
        split: SplitKind::Center,
        subdivisions: 0,
    };
    let identity = VertexPerm((0..ec.complex.verts.len()).collect());
    let qc = quotient_complex(&ec, &[identity]).expect("trivial quotient");
    qc.homology()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn base_complexes_are_tori() {
        for split in [SplitKind::Center, SplitKind::DiagNe, SplitKind::DiagNw] {
            let c = base_complex(split, 4);
            assert_eq!(c.euler_characteristic(), 0, "{split:?}");
            let h = torus_homology(&c);
            assert_eq!(h[0], FinAbGroup::free(1), "{split:?}");
            assert_eq!(h[1], FinAbGroup::free(2), "{split:?}");
            assert_eq!(h[2], FinAbGroup::free(1), "{split:?}");
        }
    }

    #[test]
    fn barycentric_preserves_homology() {
        let c = base_complex(SplitKind::DiagNe, 4).barycentric();
        assert_eq!(c.euler_characteristic(), 0);
        let h = torus_homology(&c);
        assert_eq!(h[1], FinAbGroup::free(2));
    }

    #[test]
    fn p1_identity_quotient_is_torus() {
        let spec = catalog("p1").unwrap();
        let ec = equivariant_triangulation(&spec, 12).unwrap();
        let qc = quotient_complex(&ec, &ec.actions).unwrap();
        assert_eq!(
            qc.homology(),
            [
                FinAbGroup::free(1),
                FinAbGroup::free(2),
                FinAbGroup::free(1)
            ]
        );
    }

    #[test]
    fn p2_quotient_is_a_sphere() {
        let spec = catalog("p2").unwrap();
        let ec = equivariant_triangulation(&spec, 12).unwrap();
        let qc = quotient_complex(&ec, &ec.actions).unwrap();
        assert_eq!(qc.euler_characteristic(), 2);
        assert_eq!(
            qc.homology(),
            [
                FinAbGroup::free(1),
                FinAbGroup::trivial(),
                FinAbGroup::free(1)
            ]
        );
    }

    #[test]
    fn pg_quotient_is_a_klein_bottle() {
        let spec = catalog("pg").unwrap();
        let ec = equivariant_triangulation(&spec, 12).unwrap();
        // The glide acts freely.
        let glide = &ec.actions[1];
        assert!(glide.0.iter().enumerate().all(|(i, &p)| i != p));
        let qc = quotient_complex(&ec, &ec.actions).unwrap();
        assert_eq!(qc.euler_characteristic(), 0);
        assert_eq!(
            qc.homology(),
            [
                FinAbGroup::free(1),
                FinAbGroup::new(1, &[2]),
                FinAbGroup::trivial()
            ]
        );
    }

    #[test]
    fn hexagonal_groups_get_diagonal_splits() {
        for name in ["p3", "p6", "cm", "cmm2", "p3m1", "p6mm"] {
            let spec = catalog(name).unwrap();
            let ec = equivariant_triangulation(&spec, 12).unwrap();
            assert_ne!(ec.split, SplitKind::Center, "{name}");
        }
    }

    #[test]
    fn p31m_needs_a_basis_change() {
        let spec = catalog("p31m").unwrap();
        let ec = equivariant_triangulation(&spec, 12).unwrap();
        assert_ne!(ec.basis, Mat2::IDENT);
        let qc = quotient_complex(&ec, &ec.actions).unwrap();
        // Underlying space of the 3*3 orbifold is a disk.
        assert_eq!(
            qc.homology(),
            [
                FinAbGroup::free(1),
                FinAbGroup::trivial(),
                FinAbGroup::trivial()
            ]
        );
    }

    #[test]
    fn odd_resolution_rejected() {
        let spec = catalog("p1").unwrap();
        assert!(matches!(
            equivariant_triangulation(&spec, 7),
            Err(ComplexBuildError::Resolution { .. })
        ));
    }
}

//! Fixed sets X^g and centralizers C(g), the two ingredients the per-class
//! homology computation needs beyond the class list itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::lin2::{solve_int, vec2_is_integral, vec2_mod1, vec2_sub, IntSolutions};
use crate::algebra::{solve_congruence, CongruenceSolutionSet, Mat2, Rat, Vec2};
use crate::catalog::GroupSpec;
use crate::conjugacy::Mode;
use crate::isometry::AffineIso;

/// Fixed set of a finite-order isometry acting on the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaneFixedSet {
    /// The identity fixes everything.
    Whole,
    /// Rotations fix their center.
    Point(#[serde(with = "crate::algebra::lin2::vec2_serde")] Vec2),
    /// Reflections fix their axis.
    Line {
        #[serde(with = "crate::algebra::lin2::vec2_serde")]
        base: Vec2,
        dir: [i64; 2],
    },
}

#[derive(Debug, Error)]
pub enum FixedSetError {
    #[error("fixed sets on the plane are only defined for finite-order isometries")]
    InfiniteOrder,
}

/// Exact solution set of lin*x + trans = x in the plane.
pub fn fixed_set_plane(g: &AffineIso) -> Result<PlaneFixedSet, FixedSetError> {
    if g.is_identity() {
        return Ok(PlaneFixedSet::Whole);
    }
    if !g.has_finite_plane_order() {
        return Err(FixedSetError::InfiniteOrder);
    }
    let imm = g.lin.sub_from_identity();
    if imm.det() != 0 {
        let center = imm.solve_unique(g.trans).expect("det != 0");
        return Ok(PlaneFixedSet::Point(center));
    }
    let dir = imm
        .kernel_primitive()
        .expect("finite-order non-identity with singular I - M is a reflection");
    Ok(PlaneFixedSet::Line {
        base: reflection_base(g, dir),
        dir,
    })
}

fn reflection_base(g: &AffineIso, dir: [i64; 2]) -> Vec2 {
    // Particular solution of the rank-1 system (I - M)x = trans with the
    // axis-direction component removed.
    let imm = g.lin.sub_from_identity();
    let m = imm.0;
    let (row, rhs) = if m[0][0] != 0 || m[0][1] != 0 {
        ([m[0][0], m[0][1]], g.trans[0])
    } else {
        ([m[1][0], m[1][1]], g.trans[1])
    };
    let particular = if row[0] != 0 {
        [rhs / Rat::from_integer(row[0]), Rat::from_integer(0)]
    } else {
        [Rat::from_integer(0), rhs / Rat::from_integer(row[1])]
    };
    let num = particular[0] * Rat::from_integer(dir[0]) + particular[1] * Rat::from_integer(dir[1]);
    let den = Rat::from_integer(dir[0] * dir[0] + dir[1] * dir[1]);
    let lambda = num / den;
    [
        particular[0] - lambda * Rat::from_integer(dir[0]),
        particular[1] - lambda * Rat::from_integer(dir[1]),
    ]
}

/// Fixed set of the affine torus map x -> lin*x + trans (mod Z^2): the
/// congruence (I - lin) x = trans (mod Z^2).
pub fn fixed_set_torus(g: &AffineIso) -> CongruenceSolutionSet {
    solve_congruence(&g.lin.sub_from_identity(), g.trans)
}

/// Centralizer data: the invariant translation lattice plus one affine
/// representative per translation-coset of the non-translation part.
/// Centralizers are infinite in plane mode, so they are returned as
/// generators-plus-structure, never as element lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Centralizer {
    pub trans_rank: usize,
    pub trans_basis: Vec<[i64; 2]>,
    pub finite_parts: Vec<AffineIso>,
    /// Labels of the sectors contributing finite parts, aligned with
    /// `finite_parts`.
    pub sectors: Vec<String>,
}

/// Compute C(g) within the given group.
///
/// Plane mode: elements (w, N) with N M = M N and (I - M) w = (I - N) v,
/// solved exactly over w in u_N + Z^2; the translation part is the kernel
/// lattice of I - M. Torus mode: the point-group elements whose affine torus
/// maps commute with g mod Z^2; lattice translations act trivially on the
/// torus, so the translation rank is reported as 0.
pub fn centralizer(g: &AffineIso, spec: &GroupSpec, mode: Mode) -> Centralizer {
    let m = &g.lin;
    let imm = m.sub_from_identity();

    let (trans_rank, trans_basis): (usize, Vec<[i64; 2]>) = if let Mode::Torus = mode {
        (0, Vec::new())
    } else if m.is_identity() {
        (2, vec![[1, 0], [0, 1]])
    } else if imm.det() != 0 {
        (0, Vec::new())
    } else {
        (1, vec![imm.kernel_primitive().expect("rank-1 kernel")])
    };

    let mut finite_parts = Vec::new();
    let mut sectors = Vec::new();
    for e in &spec.elements {
        let n = &e.pullback.lin;
        if n.mul(m) != m.mul(n) {
            continue;
        }
        match mode {
            Mode::Torus => {
                let lhs = imm.apply(e.pullback.trans);
                let rhs = n.sub_from_identity().apply(g.trans);
                if vec2_is_integral(vec2_sub(lhs, rhs)) {
                    finite_parts.push(e.pullback);
                    sectors.push(e.label.clone());
                }
            }
            Mode::Plane => {
                let rhs = vec2_sub(
                    n.sub_from_identity().apply(g.trans),
                    imm.apply(e.pullback.trans),
                );
                match solve_int(&imm, rhs) {
                    IntSolutions::Empty => {}
                    IntSolutions::Point(b) => {
                        finite_parts.push(shift(e.pullback, b));
                        sectors.push(e.label.clone());
                    }
                    IntSolutions::Line { base, dir } => {
                        let b = reduce_along(base, dir);
                        finite_parts.push(shift(e.pullback, b));
                        sectors.push(e.label.clone());
                    }
                    IntSolutions::All => {
                        finite_parts.push(e.pullback);
                        sectors.push(e.label.clone());
                    }
                }
            }
        }
    }

    Centralizer {
        trans_rank,
        trans_basis,
        finite_parts,
        sectors,
    }
}

fn shift(iso: AffineIso, b: [i64; 2]) -> AffineIso {
    AffineIso::new(
        [
            iso.trans[0] + Rat::from_integer(b[0]),
            iso.trans[1] + Rat::from_integer(b[1]),
        ],
        iso.lin,
    )
}

/// Canonical coset representative: reduce v modulo multiples of dir by
/// minimising the squared length of v - t*dir.
fn reduce_along(v: [i64; 2], dir: [i64; 2]) -> [i64; 2] {
    let vd = v[0] * dir[0] + v[1] * dir[1];
    let dd = dir[0] * dir[0] + dir[1] * dir[1];
    let t = (2 * vd + dd).div_euclid(2 * dd);
    [v[0] - t * dir[0], v[1] - t * dir[1]]
}

/// Is the point x fixed by g on the torus?
pub fn fixes_on_torus(g: &AffineIso, x: Vec2) -> bool {
    vec2_mod1(g.apply(x)) == vec2_mod1(x)
}

/// The matrix sends the direction to +-itself; return the sign, or None if
/// the direction is not preserved.
pub fn direction_sign(m: &Mat2, dir: [i64; 2]) -> Option<i64> {
    let img = m.apply_int(dir);
    if img == dir {
        Some(1)
    } else if img == [-dir[0], -dir[1]] {
        Some(-1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lin2::{rat, vec2_int, vec2_zero};
    use crate::catalog::catalog;
    use crate::conjugacy::{enumerate_fc, Mode};

    #[test]
    fn plane_fixed_sets() {
        let p6 = catalog("p6").unwrap();
        let sigma = p6.element_by_label("sigma").unwrap().pullback;
        assert_eq!(
            fixed_set_plane(&sigma).unwrap(),
            PlaneFixedSet::Point(vec2_zero())
        );

        // ((1/2,1), -I) is a half turn about (1/4, 1/2).
        let s_sigma = AffineIso::new([rat(1, 2), rat(1, 1)], Mat2::new(-1, 0, 0, -1));
        assert_eq!(
            fixed_set_plane(&s_sigma).unwrap(),
            PlaneFixedSet::Point([rat(1, 4), rat(1, 2)])
        );

        let id = AffineIso::identity();
        assert_eq!(fixed_set_plane(&id).unwrap(), PlaneFixedSet::Whole);

        let glide = AffineIso::new([rat(1, 2), rat(0, 1)], Mat2::new(1, 0, 0, -1));
        assert!(fixed_set_plane(&glide).is_err());
    }

    #[test]
    fn torus_fixed_sets() {
        // p2 sigma: the four 2-torsion points.
        let p2 = catalog("p2").unwrap();
        let sigma = p2.element_by_label("sigma").unwrap().pullback;
        match fixed_set_torus(&sigma) {
            CongruenceSolutionSet::Points(ps) => assert_eq!(ps.len(), 4),
            other => panic!("expected points, got {other:?}"),
        }

        // pg glide lift: empty (0 = 1/2 unsolvable in the first coordinate).
        let pg = catalog("pg").unwrap();
        let rho = pg.element_by_label("rho").unwrap().pullback;
        assert_eq!(fixed_set_torus(&rho), CongruenceSolutionSet::Empty);

        // p4mm diagonal mirror: one circle.
        let p4mm = catalog("p4mm").unwrap();
        let rho2 = p4mm.element_by_label("rho2").unwrap().pullback;
        match fixed_set_torus(&rho2) {
            CongruenceSolutionSet::Lines(ls) => assert_eq!(ls.len(), 1),
            other => panic!("expected lines, got {other:?}"),
        }
    }

    #[test]
    fn fixed_point_count_is_det() {
        for name in crate::catalog::GROUP_NAMES {
            let spec = catalog(name).unwrap();
            for e in &spec.elements {
                let imm = e.pullback.lin.sub_from_identity();
                if imm.det() != 0 {
                    match fixed_set_torus(&e.pullback) {
                        CongruenceSolutionSet::Points(ps) => {
                            assert_eq!(ps.len() as i64, imm.det().abs(), "{name}/{}", e.label)
                        }
                        other => panic!("{name}/{}: expected points, got {other:?}", e.label),
                    }
                }
            }
        }
    }

    #[test]
    fn centralizer_pm_rho() {
        let pm = catalog("pm").unwrap();
        let rho = pm.element_by_label("rho").unwrap().pullback;
        let c = centralizer(&rho, &pm, Mode::Plane);
        assert_eq!(c.trans_rank, 1);
        assert_eq!(c.trans_basis, vec![[1, 0]]);
        assert_eq!(c.sectors, vec!["id".to_string(), "rho".to_string()]);
        for h in &c.finite_parts {
            assert_eq!(h.compose(&rho), rho.compose(h), "must commute");
        }
    }

    #[test]
    fn centralizer_p6_sigma() {
        let p6 = catalog("p6").unwrap();
        let sigma = p6.element_by_label("sigma").unwrap().pullback;
        let c = centralizer(&sigma, &p6, Mode::Plane);
        assert_eq!(c.trans_rank, 0);
        assert_eq!(c.finite_parts.len(), 6, "all rotations about the origin");
    }

    #[test]
    fn centralizer_identity_is_whole_group() {
        for name in ["p1", "pmg", "p6mm"] {
            let spec = catalog(name).unwrap();
            let c = centralizer(&AffineIso::identity(), &spec, Mode::Plane);
            assert_eq!(c.trans_rank, 2);
            assert_eq!(c.finite_parts.len(), spec.order());
        }
    }

    #[test]
    fn centralizer_commutes_always() {
        for name in crate::catalog::GROUP_NAMES {
            let spec = catalog(name).unwrap();
            for class in enumerate_fc(&spec, Mode::Plane) {
                let c = centralizer(&class.rep, &spec, Mode::Plane);
                for h in &c.finite_parts {
                    assert_eq!(
                        h.compose(&class.rep),
                        class.rep.compose(h),
                        "{name}/{}: finite part fails to commute",
                        class.label
                    );
                }
                for w in &c.trans_basis {
                    let t = AffineIso::translation(vec2_int(w[0], w[1]));
                    assert_eq!(t.compose(&class.rep), class.rep.compose(&t));
                }
            }
        }
    }

    #[test]
    fn torus_centralizers_commute_mod_1() {
        for name in crate::catalog::GROUP_NAMES {
            let spec = catalog(name).unwrap();
            for class in enumerate_fc(&spec, Mode::Torus) {
                let c = centralizer(&class.rep, &spec, Mode::Torus);
                for h in &c.finite_parts {
                    assert!(
                        h.compose(&class.rep).eq_mod1(&class.rep.compose(h)),
                        "{name}/{}",
                        class.label
                    );
                }
            }
        }
    }
}

//! Quotients of 0- and 1-dimensional fixed sets by their centralizer
//! actions. The 2-dimensional case (whole torus / whole plane) goes through
//! the triangulation machinery in [`crate::complex`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::congruence::TorusLine;
use crate::algebra::lin2::{primitive, vec2_mod1};
use crate::algebra::{FinAbGroup, Rat, Vec2};
use crate::fixed::{direction_sign, Centralizer};
use crate::isometry::AffineIso;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientKind {
    /// Finitely many orbit points.
    Points(usize),
    /// Disjoint circles and intervals (quotients of fixed circles / axes).
    Curves { circles: usize, intervals: usize },
    /// A 2-dimensional orbit space with its cell counts.
    Surface { cells: [usize; 3] },
    /// Quotient of an empty fixed set.
    Empty,
}

/// A quotient space together with its integral homology in degrees 0..=2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpace {
    pub kind: QuotientKind,
    pub homology: Vec<FinAbGroup>,
}

impl QuotientSpace {
    pub fn empty() -> Self {
        QuotientSpace {
            kind: QuotientKind::Empty,
            homology: vec![
                FinAbGroup::trivial(),
                FinAbGroup::trivial(),
                FinAbGroup::trivial(),
            ],
        }
    }

    pub fn even_sum(&self) -> FinAbGroup {
        let mut acc = FinAbGroup::trivial();
        for (k, h) in self.homology.iter().enumerate() {
            if k % 2 == 0 {
                acc = acc.direct_sum(h);
            }
        }
        acc
    }

    pub fn odd_sum(&self) -> FinAbGroup {
        let mut acc = FinAbGroup::trivial();
        for (k, h) in self.homology.iter().enumerate() {
            if k % 2 == 1 {
                acc = acc.direct_sum(h);
            }
        }
        acc
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            QuotientKind::Points(1) => "point".to_string(),
            QuotientKind::Points(n) => format!("{n} points"),
            QuotientKind::Curves { circles, intervals } => {
                let mut parts = Vec::new();
                match circles {
                    0 => {}
                    1 => parts.push("circle".to_string()),
                    n => parts.push(format!("{n} circles")),
                }
                match intervals {
                    0 => {}
                    1 => parts.push("interval".to_string()),
                    n => parts.push(format!("{n} intervals")),
                }
                if parts.is_empty() {
                    "empty".to_string()
                } else {
                    parts.join(" + ")
                }
            }
            QuotientKind::Surface { cells } => {
                let chi = cells[0] as i64 - cells[1] as i64 + cells[2] as i64;
                format!("surface (chi = {chi})")
            }
            QuotientKind::Empty => "empty".to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum QuotientSpaceError {
    #[error("the acting maps do not preserve the fixed set (equivariance violated): {0}")]
    NotPreserved(String),
}

/// Orbit space of a finite set of torus points under affine torus maps.
pub fn quotient_points(
    points: &[Vec2],
    actions: &[AffineIso],
) -> Result<QuotientSpace, QuotientSpaceError> {
    let pts: Vec<Vec2> = points.iter().map(|p| vec2_mod1(*p)).collect();
    let locate = |x: Vec2| -> Result<usize, QuotientSpaceError> {
        pts.iter().position(|p| *p == x).ok_or_else(|| {
            QuotientSpaceError::NotPreserved(format!(
                "image {} leaves the point set",
                crate::isometry::format_vec2(x)
            ))
        })
    };
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for h in actions {
        for (i, p) in pts.iter().enumerate() {
            let j = locate(h.apply_mod1(*p))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let orbits = (0..pts.len())
        .map(|i| find(&mut parent, i))
        .collect::<std::collections::HashSet<_>>()
        .len();
    Ok(QuotientSpace {
        kind: QuotientKind::Points(orbits),
        homology: vec![
            FinAbGroup::free(orbits),
            FinAbGroup::trivial(),
            FinAbGroup::trivial(),
        ],
    })
}

/// Orbit space of a finite union of fixed circles on the torus under affine
/// torus maps. Each circle orbit contributes a circle when its stabilizer
/// only shifts it, and an interval when some stabilizer element reverses it.
pub fn quotient_circles(
    lines: &[TorusLine],
    actions: &[AffineIso],
) -> Result<QuotientSpace, QuotientSpaceError> {
    let canon: Vec<TorusLine> = lines.iter().map(TorusLine::canonical).collect();
    let image_of = |h: &AffineIso, l: &TorusLine| -> TorusLine {
        TorusLine {
            base: h.apply_mod1(l.base),
            dir: primitive(h.lin.apply_int(l.dir)),
        }
        .canonical()
    };
    let locate = |l: &TorusLine| -> Result<usize, QuotientSpaceError> {
        canon.iter().position(|c| c.same_circle(l)).ok_or_else(|| {
            QuotientSpaceError::NotPreserved("circle image leaves the fixed set".to_string())
        })
    };

    let mut parent: Vec<usize> = (0..canon.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for h in actions {
        for (i, l) in canon.iter().enumerate() {
            let j = locate(&image_of(h, l))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut circles = 0;
    let mut intervals = 0;
    let roots: std::collections::HashSet<usize> =
        (0..canon.len()).map(|i| find(&mut parent, i)).collect();
    for &root in &roots {
        let l = &canon[root];
        // Stabilizer flip: an element keeping the circle and reversing its
        // direction. An orientation-reversing self-map of a circle always
        // has two fixed points, so the orbit is an interval.
        let mut flip = false;
        for h in actions {
            let img = image_of(h, l);
            if img.same_circle(l) {
                match direction_sign(&h.lin, l.dir) {
                    Some(-1) => {
                        flip = true;
                        break;
                    }
                    Some(1) => {}
                    _ => {
                        return Err(QuotientSpaceError::NotPreserved(
                            "stabilizer does not preserve the circle direction".to_string(),
                        ))
                    }
                }
            }
        }
        if flip {
            intervals += 1;
        } else {
            circles += 1;
        }
    }

    Ok(QuotientSpace {
        kind: QuotientKind::Curves { circles, intervals },
        homology: vec![
            FinAbGroup::free(circles + intervals),
            FinAbGroup::free(circles),
            FinAbGroup::trivial(),
        ],
    })
}

/// Orbit space of a fixed axis in the plane under its centralizer. The
/// translations along the axis give a circle; any centralizer element
/// reversing the axis direction folds it to an interval.
pub fn quotient_line_plane(
    base: Vec2,
    dir: [i64; 2],
    c: &Centralizer,
) -> Result<QuotientSpace, QuotientSpaceError> {
    if c.trans_rank < 1 {
        return Err(QuotientSpaceError::NotPreserved(
            "axis has no translation period in its centralizer".to_string(),
        ));
    }
    let mut flip = false;
    for h in &c.finite_parts {
        // Every centralizer element must carry the axis to itself.
        let img = h.apply(base);
        let diff = crate::algebra::lin2::vec2_sub(img, base);
        if diff[0] * Rat::from_integer(dir[1]) != diff[1] * Rat::from_integer(dir[0]) {
            return Err(QuotientSpaceError::NotPreserved(
                "centralizer element moves the axis".to_string(),
            ));
        }
        match direction_sign(&h.lin, dir) {
            Some(-1) => {
                flip = true;
                break;
            }
            Some(1) => {}
            _ => {
                return Err(QuotientSpaceError::NotPreserved(
                    "centralizer element does not preserve the axis direction".to_string(),
                ))
            }
        }
    }
    let (kind, homology) = if flip {
        (
            QuotientKind::Curves {
                circles: 0,
                intervals: 1,
            },
            vec![
                FinAbGroup::free(1),
                FinAbGroup::trivial(),
                FinAbGroup::trivial(),
            ],
        )
    } else {
        (
            QuotientKind::Curves {
                circles: 1,
                intervals: 0,
            },
            vec![FinAbGroup::free(1), FinAbGroup::free(1), FinAbGroup::trivial()],
        )
    };
    Ok(QuotientSpace { kind, homology })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lin2::{rat, vec2_zero};
    use crate::algebra::Mat2;
    use crate::catalog::catalog;
    use crate::conjugacy::Mode;
    use crate::fixed::{centralizer, fixed_set_torus};

    #[test]
    fn p2_four_points_stay_four() {
        let p2 = catalog("p2").unwrap();
        let sigma = p2.element_by_label("sigma").unwrap().pullback;
        let pts = match fixed_set_torus(&sigma) {
            crate::algebra::CongruenceSolutionSet::Points(ps) => ps,
            _ => unreachable!(),
        };
        let c = centralizer(&sigma, &p2, Mode::Torus);
        let q = quotient_points(&pts, &c.finite_parts).unwrap();
        assert_eq!(q.kind, QuotientKind::Points(4));
        assert_eq!(q.even_sum(), FinAbGroup::free(4));
    }

    #[test]
    fn p4_sigma2_points_fold_to_three() {
        let p4 = catalog("p4").unwrap();
        let sigma2 = p4.element_by_label("sigma2").unwrap().pullback;
        let pts = match fixed_set_torus(&sigma2) {
            crate::algebra::CongruenceSolutionSet::Points(ps) => ps,
            _ => unreachable!(),
        };
        let c = centralizer(&sigma2, &p4, Mode::Torus);
        let q = quotient_points(&pts, &c.finite_parts).unwrap();
        // The quarter turn swaps (1/2,0) and (0,1/2).
        assert_eq!(q.kind, QuotientKind::Points(3));
    }

    #[test]
    fn empty_point_set() {
        let q = quotient_points(&[], &[]).unwrap();
        assert_eq!(q.kind, QuotientKind::Points(0));
        assert!(q.even_sum().is_trivial());
    }

    #[test]
    fn pm_axis_quotient_is_a_circle() {
        let pm = catalog("pm").unwrap();
        let rho = pm.element_by_label("rho").unwrap().pullback;
        let c = centralizer(&rho, &pm, Mode::Plane);
        let q = quotient_line_plane(vec2_zero(), [1, 0], &c).unwrap();
        assert_eq!(
            q.kind,
            QuotientKind::Curves {
                circles: 1,
                intervals: 0
            }
        );
        assert_eq!(q.odd_sum(), FinAbGroup::free(1));
    }

    #[test]
    fn pmm2_axis_quotient_is_an_interval() {
        let pmm2 = catalog("pmm2").unwrap();
        let rho1 = pmm2.element_by_label("rho1").unwrap().pullback;
        let c = centralizer(&rho1, &pmm2, Mode::Plane);
        let q = quotient_line_plane(vec2_zero(), [1, 0], &c).unwrap();
        assert_eq!(
            q.kind,
            QuotientKind::Curves {
                circles: 0,
                intervals: 1
            }
        );
        assert!(q.odd_sum().is_trivial());
    }

    #[test]
    fn p4mm_axial_circles_fold_to_two_intervals() {
        let p4mm = catalog("p4mm").unwrap();
        let rho1 = p4mm.element_by_label("rho1").unwrap().pullback;
        let lines = match fixed_set_torus(&rho1) {
            crate::algebra::CongruenceSolutionSet::Lines(ls) => ls,
            _ => unreachable!(),
        };
        assert_eq!(lines.len(), 2);
        let c = centralizer(&rho1, &p4mm, Mode::Torus);
        let q = quotient_circles(&lines, &c.finite_parts).unwrap();
        assert_eq!(
            q.kind,
            QuotientKind::Curves {
                circles: 0,
                intervals: 2
            }
        );
        assert_eq!(q.even_sum(), FinAbGroup::free(2));
    }

    #[test]
    fn pmg_vertical_circles_glue_to_one_circle() {
        let pmg = catalog("pmg").unwrap();
        let rho2 = pmg.element_by_label("rho2").unwrap().pullback;
        let lines = match fixed_set_torus(&rho2) {
            crate::algebra::CongruenceSolutionSet::Lines(ls) => ls,
            _ => unreachable!(),
        };
        assert_eq!(lines.len(), 2);
        let c = centralizer(&rho2, &pmg, Mode::Torus);
        let q = quotient_circles(&lines, &c.finite_parts).unwrap();
        // The half turn x -> -x + (1/2,0) swaps the circles x=0 and x=1/2
        // without fixing either, so the orbit stays a circle.
        assert_eq!(
            q.kind,
            QuotientKind::Curves {
                circles: 1,
                intervals: 0
            }
        );
        assert_eq!(q.odd_sum(), FinAbGroup::free(1));
    }

    #[test]
    fn equivariance_violation_reported() {
        let pts = vec![vec2_zero()];
        let shift = AffineIso::new([rat(1, 3), rat(0, 1)], Mat2::IDENT);
        assert!(quotient_points(&pts, &[shift]).is_err());
    }
}

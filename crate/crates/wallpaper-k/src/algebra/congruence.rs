//! Integer linear congruences on the torus: exact solution sets of
//! A x = b (mod Z^2) with x taken in [0,1)^2.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::lin2::{mod1, primitive, rat, smith2, Mat2, Rat, Vec2};

/// A closed geodesic { base + t*dir } on the torus, with `base` reduced mod 1
/// and `dir` a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusLine {
    #[serde(with = "super::lin2::vec2_serde")]
    pub base: Vec2,
    pub dir: [i64; 2],
}

impl TorusLine {
    /// Invariant of the circle: the value of the primitive normal functional
    /// on any of its points, reduced mod 1. Two parallel circles are equal
    /// iff this value agrees.
    pub fn normal_value(&self) -> Rat {
        let [p, q] = self.dir;
        mod1(rat(-q, 1) * self.base[0] + rat(p, 1) * self.base[1])
    }

    pub fn same_circle(&self, other: &TorusLine) -> bool {
        self.dir == other.dir && self.normal_value() == other.normal_value()
    }

    /// Canonical representative: lexicographically least rational point of the
    /// circle on the grid of its own denominators.
    pub fn canonical(&self) -> TorusLine {
        let dir = primitive(self.dir);
        let c = TorusLine {
            base: self.base,
            dir,
        }
        .normal_value();
        // Solve -q*x + p*y = c with x or y zero where possible.
        let [p, q] = dir;
        let base = if p != 0 {
            [Rat::zero(), c / rat(p, 1)]
        } else {
            [c / rat(-q, 1), Rat::zero()]
        };
        TorusLine {
            base: [mod1(base[0]), mod1(base[1])],
            dir,
        }
    }

    /// Does the point lie on the circle?
    pub fn contains(&self, x: Vec2) -> bool {
        let [p, q] = self.dir;
        let v = rat(-q, 1) * x[0] + rat(p, 1) * x[1];
        (v - (rat(-q, 1) * self.base[0] + rat(p, 1) * self.base[1])).is_integer()
    }
}

/// Solution set of a torus congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceSolutionSet {
    Empty,
    /// Finitely many points, pairwise distinct, coordinates in [0,1),
    /// sorted lexicographically. When the defining matrix has det != 0 the
    /// count equals |det|.
    Points(#[serde(with = "super::lin2::vec2s_serde")] Vec<Vec2>),
    /// Finitely many parallel circles.
    Lines(Vec<TorusLine>),
    All,
}

impl CongruenceSolutionSet {
    pub fn contains(&self, x: Vec2) -> bool {
        match self {
            CongruenceSolutionSet::Empty => false,
            CongruenceSolutionSet::All => true,
            CongruenceSolutionSet::Points(ps) => {
                let xm = [mod1(x[0]), mod1(x[1])];
                ps.contains(&xm)
            }
            CongruenceSolutionSet::Lines(ls) => ls.iter().any(|l| l.contains(x)),
        }
    }
}

/// Exact solution set of `a * x = b (mod Z^2)`.
///
/// Diagonalise a = U^-1 D V^-1; with y = V^-1 x and c = U b the system
/// splits into d_i y_i = c_i (mod 1), each contributing d_i residues or a
/// free circle direction.
pub fn solve_congruence(a: &Mat2, b: Vec2) -> CongruenceSolutionSet {
    let (u, d, v) = smith2(a);
    let c = [
        rat(u.0[0][0], 1) * b[0] + rat(u.0[0][1], 1) * b[1],
        rat(u.0[1][0], 1) * b[0] + rat(u.0[1][1], 1) * b[1],
    ];

    let mut coords: Vec<Vec<Rat>> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    for i in 0..2 {
        let di = d.0[i][i];
        if di == 0 {
            if !c[i].is_integer() {
                return CongruenceSolutionSet::Empty;
            }
            free.push(i);
            coords.push(vec![Rat::zero()]);
        } else {
            // d_i * y = c_i (mod 1) has exactly d_i solutions in [0,1).
            let mut sols = Vec::with_capacity(di.unsigned_abs() as usize);
            let da = di.abs();
            let y0 = mod1(c[i] / rat(di, 1));
            for k in 0..da {
                sols.push(mod1(y0 + rat(k, da)));
            }
            coords.push(sols);
        }
    }

    match free.len() {
        2 => CongruenceSolutionSet::All,
        0 => {
            let mut pts: Vec<Vec2> = Vec::new();
            for y0 in &coords[0] {
                for y1 in &coords[1] {
                    let x = v.apply([*y0, *y1]);
                    pts.push([mod1(x[0]), mod1(x[1])]);
                }
            }
            pts.sort();
            pts.dedup();
            CongruenceSolutionSet::Points(pts)
        }
        1 => {
            let f = free[0];
            let fixed = 1 - f;
            let dir_y = if f == 0 { [1, 0] } else { [0, 1] };
            let dir = primitive(v.apply_int(dir_y));
            let mut lines: Vec<TorusLine> = Vec::new();
            for yv in &coords[fixed] {
                let mut y = [Rat::zero(); 2];
                y[fixed] = *yv;
                let x = v.apply(y);
                let line = TorusLine {
                    base: [mod1(x[0]), mod1(x[1])],
                    dir,
                }
                .canonical();
                if !lines.iter().any(|l| l.same_circle(&line)) {
                    lines.push(line);
                }
            }
            lines.sort_by(|a, b| (a.base, a.dir).cmp(&(b.base, b.dir)));
            CongruenceSolutionSet::Lines(lines)
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lin2::{vec2_int, vec2_zero};

    #[test]
    fn two_torsion_points() {
        let set = solve_congruence(&Mat2::new(2, 0, 0, 2), vec2_zero());
        match set {
            CongruenceSolutionSet::Points(ps) => {
                let h = rat(1, 2);
                let z = Rat::zero();
                assert_eq!(ps, vec![[z, z], [z, h], [h, z], [h, h]]);
            }
            other => panic!("expected points, got {other:?}"),
        }
    }

    #[test]
    fn unsolvable_zero_system() {
        let set = solve_congruence(&Mat2::new(0, 0, 0, 0), [rat(1, 2), Rat::zero()]);
        assert_eq!(set, CongruenceSolutionSet::Empty);
        let all = solve_congruence(&Mat2::new(0, 0, 0, 0), vec2_int(3, -1));
        assert_eq!(all, CongruenceSolutionSet::All);
    }

    #[test]
    fn point_count_matches_det() {
        // I - M for the quarter turn: two fixed points on the torus.
        let a = Mat2::new(1, -1, 1, 1);
        match solve_congruence(&a, vec2_zero()) {
            CongruenceSolutionSet::Points(ps) => {
                assert_eq!(ps.len(), 2);
                assert!(ps.contains(&[rat(1, 2), rat(1, 2)]));
            }
            other => panic!("expected points, got {other:?}"),
        }
    }

    #[test]
    fn rank_one_gives_circles() {
        // 2*y = 0 (mod 1): the circles y = 0 and y = 1/2.
        let a = Mat2::new(0, 0, 0, 2);
        match solve_congruence(&a, vec2_zero()) {
            CongruenceSolutionSet::Lines(ls) => {
                assert_eq!(ls.len(), 2);
                for l in &ls {
                    assert_eq!(l.dir, [1, 0]);
                }
            }
            other => panic!("expected lines, got {other:?}"),
        }
    }
}

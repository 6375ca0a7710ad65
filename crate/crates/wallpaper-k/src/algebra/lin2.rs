//! Small exact 2x2 integer / rational linear algebra used by the geometric
//! layer. Everything here is specialised to the plane; the general machinery
//! lives in [`super::snf`].

use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};

/// Exact rational scalar for lattice coordinates.
pub type Rat = Ratio<i64>;

/// Serde helpers rendering rational 2-vectors as "p/q" strings.
pub mod vec2_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{Rat, Vec2};

    pub fn rat_to_string(x: Rat) -> String {
        if x.is_integer() {
            format!("{}", x.numer())
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }

    pub fn rat_from_str(s: &str) -> Result<Rat, String> {
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.parse().map_err(|e| format!("bad numerator: {e}"))?;
            let d: i64 = d.parse().map_err(|e| format!("bad denominator: {e}"))?;
            if d <= 0 {
                return Err("denominator must be positive".to_string());
            }
            Ok(Rat::new(n, d))
        } else {
            let n: i64 = s.parse().map_err(|e| format!("bad integer: {e}"))?;
            Ok(Rat::from_integer(n))
        }
    }

    pub fn serialize<S: Serializer>(v: &Vec2, serializer: S) -> Result<S::Ok, S::Error> {
        let strings = [rat_to_string(v[0]), rat_to_string(v[1])];
        serde::Serialize::serialize(&strings, serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec2, D::Error> {
        let strings: [String; 2] = Deserialize::deserialize(deserializer)?;
        Ok([
            rat_from_str(&strings[0]).map_err(D::Error::custom)?,
            rat_from_str(&strings[1]).map_err(D::Error::custom)?,
        ])
    }
}

/// As [`vec2_serde`] for lists of 2-vectors.
pub mod vec2s_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::vec2_serde::{rat_from_str, rat_to_string};
    use super::Vec2;

    pub fn serialize<S: Serializer>(v: &[Vec2], serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<[String; 2]> = v
            .iter()
            .map(|p| [rat_to_string(p[0]), rat_to_string(p[1])])
            .collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Vec2>, D::Error> {
        let strings: Vec<[String; 2]> = Vec::deserialize(deserializer)?;
        strings
            .into_iter()
            .map(|p| {
                Ok([
                    rat_from_str(&p[0]).map_err(D::Error::custom)?,
                    rat_from_str(&p[1]).map_err(D::Error::custom)?,
                ])
            })
            .collect()
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Reduce a rational into [0, 1).
pub fn mod1(x: Rat) -> Rat {
    let f = x.floor();
    x - f
}

/// 2x2 integer matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

/// Rational 2-vector in lattice coordinates.
pub type Vec2 = [Rat; 2];

pub fn vec2(a: Rat, b: Rat) -> Vec2 {
    [a, b]
}

pub fn vec2_int(a: i64, b: i64) -> Vec2 {
    [Rat::from_integer(a), Rat::from_integer(b)]
}

pub fn vec2_zero() -> Vec2 {
    [Rat::zero(), Rat::zero()]
}

pub fn vec2_add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn vec2_sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn vec2_neg(a: Vec2) -> Vec2 {
    [-a[0], -a[1]]
}

pub fn vec2_mod1(a: Vec2) -> Vec2 {
    [mod1(a[0]), mod1(a[1])]
}

pub fn vec2_is_integral(a: Vec2) -> bool {
    a[0].is_integer() && a[1].is_integer()
}

pub fn vec2_is_zero(a: Vec2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

impl Mat2 {
    pub const IDENT: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENT
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &other.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Inverse of a unimodular matrix; panics if det is not +-1.
    pub fn inv_unimodular(&self) -> Mat2 {
        let det = self.det();
        assert!(det == 1 || det == -1, "matrix not unimodular");
        let a = &self.0;
        Mat2([
            [det * a[1][1], -det * a[0][1]],
            [-det * a[1][0], det * a[0][0]],
        ])
    }

    pub fn transpose(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    pub fn neg(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]])
    }

    pub fn sub_from_identity(&self) -> Mat2 {
        // I - M, the recurring fixed-point operator.
        let a = &self.0;
        Mat2([[1 - a[0][0], -a[0][1]], [-a[1][0], 1 - a[1][1]]])
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let a = &self.0;
        [
            Rat::from_integer(a[0][0]) * v[0] + Rat::from_integer(a[0][1]) * v[1],
            Rat::from_integer(a[1][0]) * v[0] + Rat::from_integer(a[1][1]) * v[1],
        ]
    }

    pub fn apply_int(&self, v: [i64; 2]) -> [i64; 2] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    /// Multiplicative order, or None if no power up to `cap` hits the identity.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let mut p = *self;
        for k in 1..=cap {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Unique rational solution of (self) x = b when det != 0.
    pub fn solve_unique(&self, b: Vec2) -> Option<Vec2> {
        let det = self.det();
        if det == 0 {
            return None;
        }
        let a = &self.0;
        let dr = Rat::from_integer(det);
        Some([
            (Rat::from_integer(a[1][1]) * b[0] - Rat::from_integer(a[0][1]) * b[1]) / dr,
            (Rat::from_integer(a[0][0]) * b[1] - Rat::from_integer(a[1][0]) * b[0]) / dr,
        ])
    }

    /// Primitive integer vector spanning the rational kernel, if the matrix is
    /// singular and nonzero. The zero matrix has no single spanning vector.
    pub fn kernel_primitive(&self) -> Option<[i64; 2]> {
        if self.det() != 0 {
            return None;
        }
        let a = &self.0;
        for row in [[a[0][0], a[0][1]], [a[1][0], a[1][1]]] {
            if row != [0, 0] {
                return Some(primitive([row[1], -row[0]]));
            }
        }
        None
    }
}

impl std::fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    num::integer::gcd(a, b)
}

/// Scale an integer vector to primitive form (gcd 1), fixing the sign so the
/// first nonzero component is positive.
pub fn primitive(v: [i64; 2]) -> [i64; 2] {
    assert!(v != [0, 0], "zero vector has no primitive form");
    let g = gcd(v[0].abs(), v[1].abs());
    let mut w = [v[0] / g, v[1] / g];
    if w[0] < 0 || (w[0] == 0 && w[1] < 0) {
        w = [-w[0], -w[1]];
    }
    w
}

/// Smith form of a 2x2 integer matrix: (u, d, v) with u*a*v = d diagonal,
/// u, v unimodular. Small enough to do directly without BigInt.
pub fn smith2(a: &Mat2) -> (Mat2, Mat2, Mat2) {
    let mut d = *a;
    let mut u = Mat2::IDENT;
    let mut v = Mat2::IDENT;

    // Gauss-like reduction; entries stay tiny for the matrices we meet here.
    loop {
        // Move the minimal nonzero |entry| to (0,0).
        let mut best: Option<(i64, usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                let x = d.0[i][j].abs();
                if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else {
            break; // zero matrix
        };
        if bi == 1 {
            d.0.swap(0, 1);
            u.0.swap(0, 1);
        }
        if bj == 1 {
            for r in 0..2 {
                d.0[r].swap(0, 1);
                v.0[r].swap(0, 1);
            }
        }
        let p = d.0[0][0];
        let (q_r, q_c) = (d.0[1][0].div_euclid(p), d.0[0][1].div_euclid(p));
        if q_r != 0 {
            for j in 0..2 {
                d.0[1][j] -= q_r * d.0[0][j];
                u.0[1][j] -= q_r * u.0[0][j];
            }
        }
        if q_c != 0 {
            for i in 0..2 {
                d.0[i][1] -= q_c * d.0[i][0];
            }
            for i in 0..2 {
                v.0[i][1] -= q_c * v.0[i][0];
            }
        }
        if d.0[1][0] == 0 && d.0[0][1] == 0 {
            // Divisibility d00 | d11.
            if d.0[1][1] % d.0[0][0] != 0 {
                for j in 0..2 {
                    d.0[0][j] += d.0[1][j];
                    u.0[0][j] += u.0[1][j];
                }
                continue;
            }
            break;
        }
    }
    for i in 0..2 {
        if d.0[i][i] < 0 {
            for j in 0..2 {
                d.0[i][j] = -d.0[i][j];
                u.0[i][j] = -u.0[i][j];
            }
        }
    }
    (u, d, v)
}

/// Does the integer lattice generated by the columns of `m` contain `v`?
pub fn lattice_contains(m: &Mat2, v: [i64; 2]) -> bool {
    let (u, d, _) = smith2(m);
    let w = u.apply_int(v);
    for i in 0..2 {
        let di = d.0[i][i];
        if di == 0 {
            if w[i] != 0 {
                return false;
            }
        } else if w[i] % di != 0 {
            return false;
        }
    }
    true
}

/// All solutions x in Z^2 of m x = b (exact, not mod 1): either empty, a
/// single point, or a line x0 + t*w of integer points.
pub enum IntSolutions {
    Empty,
    Point([i64; 2]),
    Line { base: [i64; 2], dir: [i64; 2] },
    All,
}

pub fn solve_int(m: &Mat2, b: Vec2) -> IntSolutions {
    let (u, d, v) = smith2(m);
    let c = [
        Rat::from_integer(u.0[0][0]) * b[0] + Rat::from_integer(u.0[0][1]) * b[1],
        Rat::from_integer(u.0[1][0]) * b[0] + Rat::from_integer(u.0[1][1]) * b[1],
    ];
    let mut y = [0i64; 2];
    let mut free = None;
    for i in 0..2 {
        let di = d.0[i][i];
        if di == 0 {
            if !c[i].is_zero() {
                return IntSolutions::Empty;
            }
            free = Some(i);
        } else {
            let yi = c[i] / Rat::from_integer(di);
            if !yi.is_integer() {
                return IntSolutions::Empty;
            }
            y[i] = yi.to_integer();
        }
    }
    let x0 = v.apply_int(y);
    match free {
        None => IntSolutions::Point(x0),
        Some(i) => {
            if d.0[0][0] == 0 && d.0[1][1] == 0 {
                return IntSolutions::All;
            }
            let dir = v.apply_int(if i == 0 { [1, 0] } else { [0, 1] });
            IntSolutions::Line {
                base: x0,
                dir: primitive(dir),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith2_contract() {
        let cases = [
            Mat2::new(2, 4, -2, 6),
            Mat2::new(0, 0, 0, 0),
            Mat2::new(1, 0, 0, 1),
            Mat2::new(0, 0, 0, 2),
            Mat2::new(3, 1, 1, 1),
            Mat2::new(2, -1, 1, 1),
        ];
        for a in cases {
            let (u, d, v) = smith2(&a);
            assert!(u.det().abs() == 1 && v.det().abs() == 1);
            assert_eq!(u.mul(&a).mul(&v), d, "UAV != D for {a:?}");
            assert_eq!(d.0[0][1], 0);
            assert_eq!(d.0[1][0], 0);
            if d.0[0][0] != 0 && d.0[1][1] != 0 {
                assert_eq!(d.0[1][1] % d.0[0][0], 0);
            }
        }
    }

    #[test]
    fn solve_int_line() {
        // x + y = 3 over Z^2: a line of integer points.
        let m = Mat2::new(1, 1, 0, 0);
        match solve_int(&m, [Rat::from_integer(3), Rat::zero()]) {
            IntSolutions::Line { base, dir } => {
                assert_eq!(base[0] + base[1], 3);
                assert_eq!(dir[0] + dir[1], 0);
            }
            _ => panic!("expected a line"),
        }
    }

    #[test]
    fn kernel_primitive_reflection() {
        let m = Mat2::new(0, 0, 0, 2); // I - diag(1,-1)
        assert_eq!(m.kernel_primitive(), Some([1, 0]));
    }
}

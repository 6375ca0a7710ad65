//! Affine isometries in lattice coordinates.
//!
//! An element acts on column vectors as x -> lin*x + trans. The linear part
//! is an integer matrix in GL(2,Z); the translation part is an exact rational
//! vector. Composition follows (t, A)(t', A') = (t + A t', A A').

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::lin2::{
    vec2_add, vec2_is_integral, vec2_is_zero, vec2_mod1, vec2_neg, vec2_sub,
};
use crate::algebra::{Mat2, Rat, Vec2};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineIso {
    #[serde(with = "crate::algebra::lin2::vec2_serde")]
    pub trans: Vec2,
    pub lin: Mat2,
}

/// Order of an element: the plane notion (g^k equals the identity exactly)
/// and the torus notion (g^k is an integer translation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementOrder {
    pub plane: Option<u32>,
    pub torus: Option<u32>,
}

impl AffineIso {
    pub fn identity() -> Self {
        AffineIso {
            trans: [Rat::zero(), Rat::zero()],
            lin: Mat2::IDENT,
        }
    }

    pub fn new(trans: Vec2, lin: Mat2) -> Self {
        AffineIso { trans, lin }
    }

    pub fn translation(v: Vec2) -> Self {
        AffineIso {
            trans: v,
            lin: Mat2::IDENT,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.lin.is_identity() && vec2_is_zero(self.trans)
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        vec2_add(self.lin.apply(x), self.trans)
    }

    /// Action on the torus: apply and reduce mod 1.
    pub fn apply_mod1(&self, x: Vec2) -> Vec2 {
        vec2_mod1(self.apply(x))
    }

    pub fn compose(&self, other: &AffineIso) -> AffineIso {
        AffineIso {
            trans: vec2_add(self.trans, self.lin.apply(other.trans)),
            lin: self.lin.mul(&other.lin),
        }
    }

    pub fn inverse(&self) -> AffineIso {
        let inv = self.lin.inv_unimodular();
        AffineIso {
            trans: vec2_neg(inv.apply(self.trans)),
            lin: inv,
        }
    }

    /// self * other * self^-1
    pub fn conjugate(&self, other: &AffineIso) -> AffineIso {
        self.compose(other).compose(&self.inverse())
    }

    /// Equal as torus maps, i.e. up to an integer translation.
    pub fn eq_mod1(&self, other: &AffineIso) -> bool {
        self.lin == other.lin && vec2_is_integral(vec2_sub(self.trans, other.trans))
    }

    /// Copy with the translation reduced into [0,1)^2.
    pub fn reduced_mod1(&self) -> AffineIso {
        AffineIso {
            trans: vec2_mod1(self.trans),
            lin: self.lin,
        }
    }

    /// Plane and torus orders. A finite-order linear part in GL(2,Z) closes
    /// within 12 steps; say g^k0 = (z, I). The plane order is k0 when z = 0
    /// and infinite otherwise (powers of g^k0 only stretch z). The torus
    /// order is k0 times the order of z in the torus, i.e. the lcm of the
    /// denominators of z.
    pub fn order(&self) -> ElementOrder {
        let mut p = *self;
        for k in 1..=12u32 {
            if p.lin.is_identity() {
                let z = p.trans;
                let plane = vec2_is_zero(z).then_some(k);
                let m = num::integer::lcm(*z[0].denom(), *z[1].denom()) as u32;
                return ElementOrder {
                    plane,
                    torus: Some(k * m),
                };
            }
            p = self.compose(&p);
        }
        ElementOrder {
            plane: None,
            torus: None,
        }
    }

    /// Finite order as a plane isometry: the translation collected along one
    /// period of the linear part must vanish.
    pub fn has_finite_plane_order(&self) -> bool {
        self.order().plane.is_some()
    }

    /// Conjugation by the lattice translation m: t(m)^-1 * g * t(m)
    /// (a change of origin; rotations move their center by -m, reflections
    /// shift their axis by the normal component of -m).
    pub fn conjugate_by_translation(&self, m: [i64; 2]) -> AffineIso {
        let t = AffineIso::translation([Rat::from_integer(m[0]), Rat::from_integer(m[1])]);
        t.inverse().conjugate(self)
    }

    /// Geometric classification of the linear part together with the
    /// translation: identity, rotation (with its angle order), reflection, or
    /// glide (det -1, no fixed points).
    pub fn kind(&self) -> IsoKind {
        if self.lin.is_identity() {
            return if vec2_is_zero(self.trans) {
                IsoKind::Identity
            } else {
                IsoKind::Translation
            };
        }
        if self.lin.det() == 1 {
            let order = self.lin.order(12).expect("rotation of infinite order");
            return IsoKind::Rotation(order);
        }
        // det -1: reflection iff some point is fixed, i.e. the element has
        // finite plane order after recentering.
        if self.has_finite_plane_order() {
            IsoKind::Reflection
        } else {
            IsoKind::Glide
        }
    }

    /// Fixed point of a rotation: the unique solution of (I - lin) x = trans.
    pub fn rotation_center(&self) -> Option<Vec2> {
        self.lin.sub_from_identity().solve_unique(self.trans)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IsoKind {
    Identity,
    Translation,
    Rotation(u32),
    Reflection,
    Glide,
}

impl std::fmt::Debug for AffineIso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{} | {:?})", self.trans[0], self.trans[1], self.lin)
    }
}

/// Format a rational for display, e.g. "1/2", "-2/3", "0".
pub fn format_rat(x: Rat) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else if x.is_negative() {
        format!("-{}/{}", x.numer().abs(), x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vec2(v: Vec2) -> String {
    format!("({},{})", format_rat(v[0]), format_rat(v[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lin2::{rat, vec2_int, vec2_zero};

    #[test]
    fn compose_identity_neutral() {
        let g = AffineIso::new([rat(1, 2), rat(0, 1)], Mat2::new(1, 0, 0, -1));
        assert_eq!(AffineIso::identity().compose(&g), g);
        assert_eq!(g.compose(&AffineIso::identity()), g);
    }

    #[test]
    fn inverse_cancels() {
        let g = AffineIso::new([rat(1, 3), rat(-1, 2)], Mat2::new(0, 1, -1, -1));
        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.inverse().compose(&g).is_identity());
    }

    #[test]
    fn orders() {
        // Pure translation: infinite plane order, torus order 1.
        let t = AffineIso::translation(vec2_int(1, 0));
        assert_eq!(t.order(), ElementOrder { plane: None, torus: Some(1) });

        // Half turn.
        let s = AffineIso::new(vec2_zero(), Mat2::new(-1, 0, 0, -1));
        assert_eq!(s.order(), ElementOrder { plane: Some(2), torus: Some(2) });

        // Glide: plane order infinite (square is a unit translation), torus
        // order 2.
        let g = AffineIso::new([rat(1, 2), rat(0, 1)], Mat2::new(1, 0, 0, -1));
        assert_eq!(g.order(), ElementOrder { plane: None, torus: Some(2) });
        assert_eq!(g.kind(), IsoKind::Glide);
    }

    #[test]
    fn conjugation_moves_rotation_center() {
        let s = AffineIso::new(vec2_zero(), Mat2::new(-1, 0, 0, -1));
        let moved = s.conjugate_by_translation([1, 0]);
        assert_eq!(moved.rotation_center(), Some(vec2_int(-1, 0)));
    }

    #[test]
    fn sixfold_power_closes() {
        let sigma = AffineIso::new(vec2_zero(), Mat2::new(0, 1, -1, 1));
        let mut p = sigma;
        for _ in 0..5 {
            p = sigma.compose(&p);
        }
        assert!(p.is_identity());
        assert_eq!(sigma.kind(), IsoKind::Rotation(6));
    }
}

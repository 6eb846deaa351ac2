use num_traits::{One, ToPrimitive};

use super::{rat, BlockMap, CantorPoint, Rational};
use crate::error::DynamicsError;

/// Point of the closed unit disc with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscPoint {
    pub u: Rational,
    pub v: Rational,
}

impl DiscPoint {
    /// Returns `None` outside the closed unit disc.
    pub fn new(u: Rational, v: Rational) -> Option<Self> {
        (&u * &u + &v * &v <= Rational::one()).then_some(Self { u, v })
    }

    pub fn norm_sq(&self) -> Rational {
        &self.u * &self.u + &self.v * &self.v
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.u.to_f64().unwrap_or(f64::NAN), self.v.to_f64().unwrap_or(f64::NAN)]
    }

    /// Inside the closed centred square `[-1/2, 1/2]²`.
    pub fn in_embedded_square(&self) -> bool {
        let h = rat(1, 2);
        let nh = rat(-1, 2);
        self.u >= nh && self.u <= h && self.v >= nh && self.v <= h
    }
}

/// Centres the unit square on the origin: `(x, y) ↦ (x - 1/2, y - 1/2)`. The
/// image has norm at most √2/2 < 1, and the map is a translation.
pub fn embed_square_in_disc(p: &CantorPoint) -> DiscPoint {
    let h = rat(1, 2);
    DiscPoint { u: &p.x - &h, v: &p.y - &h }
}

/// Inverse of [`embed_square_in_disc`].
pub fn unembed(q: &DiscPoint, base: u32) -> CantorPoint {
    let h = rat(1, 2);
    CantorPoint { x: &q.u + &h, y: &q.v + &h, base }
}

/// The disc map: the block map conjugated by the embedding on the centred
/// square, and the identity elsewhere in the disc.
pub fn disc_map(map: &BlockMap, q: &DiscPoint) -> Result<DiscPoint, DynamicsError> {
    if !q.in_embedded_square() {
        return Ok(q.clone());
    }
    let image = map.apply(&unembed(q, map.base))?;
    Ok(embed_square_in_disc(&image))
}

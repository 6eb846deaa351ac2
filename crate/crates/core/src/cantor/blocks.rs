use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{base_for, digits, pow, CantorPoint, Rational};
use crate::error::DynamicsError;
use crate::shift::{CompiledShift, GeneralizedShift, Letter};

/// Cylinder of points whose window digits spell one window word:
/// `[x0, x0 + width) × [y0, y0 + height)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub word: Vec<Letter>,
    pub x0: Rational,
    pub y0: Rational,
    pub width: Rational,
    pub height: Rational,
}

impl Block {
    pub fn contains(&self, p: &CantorPoint) -> bool {
        p.x >= self.x0 && p.x < &self.x0 + &self.width && p.y >= self.y0 && p.y < &self.y0 + &self.height
    }
}

/// `(x, y) ↦ (sx·x + ax, sy·y + ay)` with `sx·sy = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub block: Block,
    pub sx: Rational,
    pub ax: Rational,
    pub sy: Rational,
    pub ay: Rational,
}

impl AffinePiece {
    pub fn apply(&self, p: &CantorPoint) -> CantorPoint {
        CantorPoint { x: &self.sx * &p.x + &self.ax, y: &self.sy * &p.y + &self.ay, base: p.base }
    }

    /// Jacobian determinant of the (diagonal) linear part.
    pub fn determinant(&self) -> Rational {
        &self.sx * &self.sy
    }

    pub fn is_identity(&self) -> bool {
        self.sx.is_one() && self.sy.is_one() && self.ax.is_zero() && self.ay.is_zero()
    }

    /// Image of the block rectangle, as `[x0, x1) × [y0, y1)`.
    pub fn image(&self) -> (Rational, Rational, Rational, Rational) {
        let b = &self.block;
        (
            &self.sx * &b.x0 + &self.ax,
            &self.sx * (&b.x0 + &b.width) + &self.ax,
            &self.sy * &b.y0 + &self.ay,
            &self.sy * (&b.y0 + &b.height) + &self.ay,
        )
    }
}

/// Piecewise-affine realization of a generalized shift on the Cantor square,
/// one piece per window word.
#[derive(Debug, Clone)]
pub struct BlockMap {
    pub base: u32,
    pub window: (i64, i64),
    pub pieces: Vec<AffinePiece>,
}

/// Builds one affine piece per window word. Rewriting changes a fixed set of
/// digits (a translation); moving the dot right multiplies `x` by `b` and
/// divides `y` by `b`, and moving it left does the reverse.
///
/// Panics if a left move is requested with a window that does not reach
/// index -1, since the incoming letter would not be determined by the block.
pub fn gs_to_block_map(gs: &GeneralizedShift) -> BlockMap {
    let base = base_for(gs.alphabet_size());
    let (lo, hi) = gs.window();
    let b = Rational::from_integer(BigInt::from(base));
    let unit = |k: u32| Rational::new(BigInt::one(), pow(base, k));
    let digit = |l: Letter| Rational::from_integer(BigInt::from(2 * l.0 as u32));
    // word position of index i
    let at = |i: i64| (i - lo) as usize;

    let pieces = (0..gs.word_count())
        .map(|rank| {
            let word = gs.word(rank);
            let out = gs.rewrite_of(rank);
            let mut x0 = Rational::zero();
            let mut dx = Rational::zero();
            for i in 0..=hi {
                let w = unit(i as u32 + 1);
                x0 += digit(word[at(i)]) * &w;
                dx += (digit(out[at(i)]) - digit(word[at(i)])) * &w;
            }
            let mut y0 = Rational::zero();
            let mut dy = Rational::zero();
            for i in 1..=-lo {
                let w = unit(i as u32);
                y0 += digit(word[at(-i)]) * &w;
                dy += (digit(out[at(-i)]) - digit(word[at(-i)])) * &w;
            }
            let block = Block { word: word.clone(), x0, y0, width: unit(hi as u32 + 1), height: unit((-lo) as u32) };
            let one = Rational::one();
            let (sx, ax, sy, ay) = match gs.shift_of(rank) {
                0 => (one.clone(), dx, one, dy),
                1 => {
                    let d0 = digit(out[at(0)]);
                    (b.clone(), &b * dx - &d0, one / &b, (dy + d0) / &b)
                }
                -1 => {
                    assert!(lo <= -1, "a left move needs the window to include index -1");
                    let e = digit(out[at(-1)]);
                    (one / &b, (dx + &e) / &b, b.clone(), &b * dy - e)
                }
                g => unreachable!("shift {g} outside -1..=1"),
            };
            AffinePiece { block, sx, ax, sy, ay }
        })
        .collect();
    BlockMap { base, window: (lo, hi), pieces }
}

impl BlockMap {
    pub fn alphabet_size(&self) -> usize {
        self.base as usize / 2
    }

    /// Index of the piece whose block contains `p`, read off the window digits.
    pub fn locate(&self, p: &CantorPoint) -> Result<usize, DynamicsError> {
        let (lo, hi) = self.window;
        let outside = || DynamicsError::NotInCantorSet { x: p.x.to_string(), y: p.y.to_string() };
        let unit = |v: &Rational| !v.is_negative() && v < &Rational::one();
        if p.base != self.base || !unit(&p.x) || !unit(&p.y) {
            return Err(outside());
        }
        let xd = digits(&p.x, self.base, hi as usize + 1);
        let yd = digits(&p.y, self.base, (-lo) as usize);
        let n = self.alphabet_size();
        let mut rank = 0usize;
        for d in yd.iter().rev().chain(xd.iter()) {
            if d.is_odd() {
                return Err(outside());
            }
            rank = rank * n + (*d / 2) as usize;
        }
        Ok(rank)
    }

    pub fn apply(&self, p: &CantorPoint) -> Result<CantorPoint, DynamicsError> {
        Ok(self.pieces[self.locate(p)?].apply(p))
    }

    pub fn all_unimodular(&self) -> bool {
        self.pieces.iter().all(|pc| pc.determinant().is_one())
    }

    pub fn all_identity(&self) -> bool {
        self.pieces.iter().all(AffinePiece::is_identity)
    }

    /// Pairs of distinct pieces whose block rectangles intersect.
    pub fn overlapping_blocks(&self) -> Vec<(usize, usize)> {
        let rects: Vec<_> = self
            .pieces
            .iter()
            .map(|pc| {
                let b = &pc.block;
                (b.x0.clone(), &b.x0 + &b.width, b.y0.clone(), &b.y0 + &b.height)
            })
            .collect();
        overlaps(&rects)
    }

    /// Pairs of distinct pieces whose images intersect. Images are digit
    /// cylinders, so intersecting rectangles share Cantor points. Empty
    /// exactly when the shift is injective on sequences.
    pub fn overlapping_images(&self) -> Vec<(usize, usize)> {
        let rects: Vec<_> = self.pieces.iter().map(AffinePiece::image).collect();
        overlaps(&rects)
    }

    /// One line per piece: word, block, and affine coefficients.
    pub fn dump(&self, names: impl Fn(Letter) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# base {}, window [{}, {}], {} pieces",
            self.base,
            self.window.0,
            self.window.1,
            self.pieces.len()
        );
        for pc in &self.pieces {
            let b = &pc.block;
            let word = b.word.iter().map(|&l| names(l)).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                out,
                "{word} : [{}, {}) x [{}, {}) -> ({}*x + {}, {}*y + {})",
                b.x0,
                &b.x0 + &b.width,
                b.y0,
                &b.y0 + &b.height,
                pc.sx,
                pc.ax,
                pc.sy,
                pc.ay
            );
        }
        out
    }
}

fn overlaps(rects: &[(Rational, Rational, Rational, Rational)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by(|&a, &b| rects[a].0.cmp(&rects[b].0));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if rects[j].0 >= rects[i].1 {
                break;
            }
            if rects[i].2 < rects[j].3 && rects[j].2 < rects[i].3 {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Open axis-aligned rectangle `(x0, x1) × (y0, y1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenRect {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl OpenRect {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        &self.x0 < x && x < &self.x1 && &self.y0 < y && y < &self.y1
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Self {
        Self { x0: &self.x0 + dx, x1: &self.x1 + dx, y0: &self.y0 + dy, y1: &self.y1 + dy }
    }
}

/// Union of open rectangles around every block whose window word contains a
/// halting head letter. Each block is enlarged by half the gap to its
/// neighbours on each axis, so the union is open and meets the Cantor square
/// only in halting points.
#[derive(Debug, Clone)]
pub struct HaltingRegion {
    pub rects: Vec<OpenRect>,
    pub margin_x: Rational,
    pub margin_y: Rational,
}

impl HaltingRegion {
    pub fn of(compiled: &CompiledShift, map: &BlockMap) -> Self {
        let unit = |k: u32| Rational::new(BigInt::one(), pow(map.base, k));
        let (lo, hi) = map.window;
        // gap between neighbouring blocks equals the block size on each axis
        let margin_x = unit(hi as u32 + 1) / Rational::from_integer(2.into());
        let margin_y = unit((-lo) as u32) / Rational::from_integer(2.into());
        let rects = map
            .pieces
            .iter()
            .filter(|pc| pc.block.word.iter().any(|&l| compiled.is_halting_letter(l)))
            .map(|pc| {
                let b = &pc.block;
                OpenRect {
                    x0: &b.x0 - &margin_x,
                    x1: &b.x0 + &b.width + &margin_x,
                    y0: &b.y0 - &margin_y,
                    y1: &b.y0 + &b.height + &margin_y,
                }
            })
            .collect();
        Self { rects, margin_x, margin_y }
    }

    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.contains_xy(&p.x, &p.y)
    }

    pub fn contains_xy(&self, x: &Rational, y: &Rational) -> bool {
        self.rects.iter().any(|r| r.contains(x, y))
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

/// Convenience for the full compile chain's halting region.
pub fn halting_region(compiled: &CompiledShift, map: &BlockMap) -> HaltingRegion {
    HaltingRegion::of(compiled, map)
}

#[cfg(test)]
mod tests {
    use super::super::{encode_config, rat};
    use super::*;
    use crate::corpus;
    use crate::shift::{gs_step, tm_to_gs, BiInfiniteSeq};
    use crate::tm::run_bounded;

    fn right_shift(n: usize) -> GeneralizedShift {
        GeneralizedShift::tabulate(n, -1, 1, |w| w.to_vec(), |_| 1)
    }

    fn left_shift(n: usize) -> GeneralizedShift {
        GeneralizedShift::tabulate(n, -1, 1, |w| w.to_vec(), |_| -1)
    }

    #[test]
    fn right_shift_piece_on_leading_digit_two() {
        let map = gs_to_block_map(&right_shift(2));
        // words (s_-1, s_0, s_1) with s_0 = 1, i.e. x-digit 2
        for pc in map.pieces.iter().filter(|pc| pc.block.word[1] == Letter(1)) {
            assert_eq!(pc.sx, rat(4, 1));
            assert_eq!(pc.ax, rat(-2, 1));
            assert_eq!(pc.sy, rat(1, 4));
            assert_eq!(pc.ay, rat(2, 4));
        }
        let p = CantorPoint::new(rat(1, 2), rat(0, 1), 4);
        assert_eq!(map.apply(&p).unwrap(), CantorPoint::new(rat(0, 1), rat(1, 2), 4));
    }

    #[test]
    fn identity_shift_gives_identity_pieces() {
        let gs = GeneralizedShift::tabulate(3, -1, 1, |w| w.to_vec(), |_| 0);
        let map = gs_to_block_map(&gs);
        assert!(map.all_identity());
        let p = CantorPoint::new(rat(4, 6), rat(2, 36), 6);
        assert_eq!(map.apply(&p).unwrap(), p);
    }

    #[test]
    fn every_piece_has_unit_determinant() {
        for (_, tm) in corpus::machines() {
            assert!(gs_to_block_map(&tm_to_gs(&tm).gs).all_unimodular());
        }
        assert!(gs_to_block_map(&right_shift(3)).all_unimodular());
        assert!(gs_to_block_map(&left_shift(3)).all_unimodular());
    }

    #[test]
    fn shift_then_unshift_is_identity() {
        let r = gs_to_block_map(&right_shift(3));
        let l = gs_to_block_map(&left_shift(3));
        let s = BiInfiniteSeq::new(vec![Letter(2), Letter(1)], vec![Letter(1), Letter(2), Letter(2)], Letter(0));
        let p = encode_config(&s, 3);
        let back = l.apply(&r.apply(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn blocks_are_disjoint_and_tile_the_digit_grid() {
        let map = gs_to_block_map(&tm_to_gs(&corpus::bb2()).gs);
        assert!(map.overlapping_blocks().is_empty());
        // total block area: n^3 blocks of area b^-3 = (1/2)^3
        let area: Rational = map.pieces.iter().map(|pc| &pc.block.width * &pc.block.height).sum();
        assert_eq!(area, rat(1, 8));
    }

    #[test]
    fn shift_images_are_disjoint_for_bijective_shifts() {
        assert!(gs_to_block_map(&right_shift(2)).overlapping_images().is_empty());
        assert!(gs_to_block_map(&left_shift(3)).overlapping_images().is_empty());
        let id = GeneralizedShift::tabulate(2, -1, 1, |w| w.to_vec(), |_| 0);
        assert!(gs_to_block_map(&id).overlapping_images().is_empty());
    }

    #[test]
    fn erasing_shift_has_overlapping_images() {
        // rewriting the centre to letter 0 merges pairs of blocks
        let gs = GeneralizedShift::tabulate(2, -1, 1, |w| vec![w[0], Letter(0), w[2]], |_| 0);
        assert!(!gs_to_block_map(&gs).overlapping_images().is_empty());
    }

    #[test]
    fn block_map_tracks_the_shift_on_bb2() {
        let tm = corpus::bb2();
        let compiled = tm_to_gs(&tm);
        let map = gs_to_block_map(&compiled.gs);
        let n = compiled.alphabet.len();
        let mut seq = compiled.encode(&tm.initial_config());
        let mut p = encode_config(&seq, n);
        for _ in 0..6 {
            seq = gs_step(&compiled.gs, &seq);
            p = map.apply(&p).unwrap();
            assert_eq!(p, encode_config(&seq, n));
        }
    }

    #[test]
    fn non_cantor_points_are_rejected() {
        let map = gs_to_block_map(&right_shift(2));
        assert!(map.apply(&CantorPoint::new(rat(1, 4), rat(0, 1), 4)).is_err());
        assert!(map.apply(&CantorPoint::new(rat(0, 1), rat(3, 4), 4)).is_err());
        assert!(map.apply(&CantorPoint::new(rat(1, 1), rat(0, 1), 4)).is_err());
        assert!(map.apply(&CantorPoint::new(rat(0, 1), rat(0, 1), 6)).is_err());
    }

    #[test]
    fn halting_region_for_halt_start_contains_the_start() {
        let tm = corpus::halt_start();
        let c = tm_to_gs(&tm);
        let map = gs_to_block_map(&c.gs);
        let nu = halting_region(&c, &map);
        assert!(nu.contains(&encode_config(&c.encode(&tm.initial_config()), c.alphabet.len())));
    }

    #[test]
    fn bb2_orbit_enters_halting_region_at_step_six() {
        let tm = corpus::bb2();
        let c = tm_to_gs(&tm);
        let map = gs_to_block_map(&c.gs);
        let nu = halting_region(&c, &map);
        let mut p = encode_config(&c.encode(&tm.initial_config()), c.alphabet.len());
        for k in 0..=6 {
            assert_eq!(nu.contains(&p), k == 6, "step {k}");
            p = map.apply(&p).unwrap();
        }
    }

    #[test]
    fn loop_orbit_avoids_halting_region() {
        let tm = corpus::loop_right();
        let c = tm_to_gs(&tm);
        let map = gs_to_block_map(&c.gs);
        let nu = halting_region(&c, &map);
        let mut p = encode_config(&c.encode(&tm.initial_config()), c.alphabet.len());
        for _ in 0..=1000 {
            assert!(!nu.contains(&p));
            p = map.apply(&p).unwrap();
        }
    }

    #[test]
    fn halting_region_matches_window_words_on_cantor_points() {
        // every trace point of every corpus machine: in ν iff its window word
        // has a halting head letter
        for (_, tm) in corpus::machines() {
            let c = tm_to_gs(&tm);
            let map = gs_to_block_map(&c.gs);
            let nu = halting_region(&c, &map);
            for cfg in run_bounded(&tm, &tm.initial_config(), 40).configs {
                let s = c.encode(&cfg);
                let halting = c.gs.read_window(&s).iter().any(|&l| c.is_halting_letter(l));
                assert_eq!(nu.contains(&encode_config(&s, c.alphabet.len())), halting);
            }
        }
    }

    #[test]
    fn halting_rects_are_pairwise_disjoint() {
        let c = tm_to_gs(&corpus::bb2());
        let map = gs_to_block_map(&c.gs);
        let nu = halting_region(&c, &map);
        let rects: Vec<_> = nu.rects.iter().map(|r| (r.x0.clone(), r.x1.clone(), r.y0.clone(), r.y1.clone())).collect();
        assert!(overlaps(&rects).is_empty());
    }
}

//! Vertical-slab decomposition of planar segment arrangements, used for the
//! filling of planar 1-cycles and for exact integration over cells.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeffgroup::GroupElement;
use crate::error::{Error, Result};
use crate::numeric::{Point, Rational};
use crate::polychain::{Chain, Simplex};

/// A planar segment, stored with `p.x ≤ q.x`.
#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub p: (Rational, Rational),
    pub q: (Rational, Rational),
    /// Whether the original orientation ran in the −x direction.
    pub reversed: bool,
}

impl Segment {
    pub fn new(a: (Rational, Rational), b: (Rational, Rational)) -> Segment {
        if (&b.0, &b.1) < (&a.0, &a.1) {
            Segment { p: b, q: a, reversed: true }
        } else {
            Segment { p: a, q: b, reversed: false }
        }
    }

    fn vertical(&self) -> bool {
        self.p.0 == self.q.0
    }

    fn slope(&self) -> Rational {
        (&self.q.1 - &self.p.1) / (&self.q.0 - &self.p.0)
    }

    pub fn y_at(&self, x: &Rational) -> Rational {
        &self.p.1 + (x - &self.p.0) * self.slope()
    }

    fn spans(&self, xl: &Rational, xr: &Rational) -> bool {
        !self.vertical() && &self.p.0 <= xl && xr <= &self.q.0
    }
}

/// Segments spanning one slab `[xl, xr]`, sorted bottom to top by their
/// height at the slab's middle.
pub(crate) struct Slab {
    pub xl: Rational,
    pub xr: Rational,
    pub mid: Rational,
    /// `(segment index, y(xl), y(mid), y(xr))`.
    pub layers: Vec<(usize, Rational, Rational, Rational)>,
}

fn crossing(a: &Segment, b: &Segment) -> Option<Rational> {
    if a.vertical() || b.vertical() {
        return None;
    }
    let (sa, sb) = (a.slope(), b.slope());
    if sa == sb {
        return None;
    }
    // a.p.y + (x − a.p.x) sa = b.p.y + (x − b.p.x) sb
    let x = (&b.p.1 - &a.p.1 + &a.p.0 * &sa - &b.p.0 * &sb) / (&sa - &sb);
    let inside = |s: &Segment| s.p.0 <= x && x <= s.q.0;
    (inside(a) && inside(b)).then_some(x)
}

pub(crate) fn slabs(segments: &[Segment]) -> Vec<Slab> {
    let mut cuts: BTreeSet<Rational> = BTreeSet::new();
    for s in segments {
        cuts.insert(s.p.0.clone());
        cuts.insert(s.q.0.clone());
    }
    for (i, a) in segments.iter().enumerate() {
        for b in &segments[i + 1..] {
            if let Some(x) = crossing(a, b) {
                cuts.insert(x);
            }
        }
    }
    let cuts: Vec<Rational> = cuts.into_iter().collect();
    let two = Rational::from_integer(2.into());
    cuts.windows(2)
        .map(|w| {
            let (xl, xr) = (w[0].clone(), w[1].clone());
            let mid = (&xl + &xr) / &two;
            let mut layers: Vec<_> = segments
                .iter()
                .enumerate()
                .filter(|(_, s)| s.spans(&xl, &xr))
                .map(|(i, s)| (i, s.y_at(&xl), s.y_at(&mid), s.y_at(&xr)))
                .collect();
            layers.sort_by(|a, b| a.2.cmp(&b.2).then(a.0.cmp(&b.0)));
            Slab { xl, xr, mid, layers }
        })
        .collect()
}

fn planar(x: &Rational, y: &Rational) -> Point {
    vec![x.clone(), y.clone()]
}

/// The compactly supported 2-chain `B` with `∂B = Z` for a 1-cycle `Z` in
/// the plane: each cell of the arrangement carries its winding coefficient.
pub(crate) fn planar_fill(z: &Chain) -> Result<Chain> {
    if z.dim() != 1 || z.ambient() != 2 {
        return Err(Error::Unsupported("planar filling needs a 1-chain in the plane".to_string()));
    }
    let group = z.group();
    if !z.boundary()?.is_zero() {
        return Err(Error::BoundaryMismatch("planar filling needs a cycle".to_string()));
    }
    let segments: Vec<Segment> = z
        .terms()
        .iter()
        .map(|(_, s)| {
            let v = s.vertices();
            Segment::new((v[0][0].clone(), v[0][1].clone()), (v[1][0].clone(), v[1][1].clone()))
        })
        .collect();
    let mut terms = Vec::new();
    for slab in slabs(&segments) {
        let mut winding: GroupElement = group.zero();
        for pair in slab.layers.windows(2) {
            let (i, ..) = pair[0];
            let g = &z.terms()[i].0;
            winding = if segments[i].reversed { winding.sub(g)? } else { winding.add(g)? };
            let (_, lo_l, lo_m, lo_r) = &pair[0];
            let (_, hi_l, hi_m, hi_r) = &pair[1];
            if winding.is_zero() || lo_m == hi_m {
                continue;
            }
            let bl = planar(&slab.xl, lo_l);
            let br = planar(&slab.xr, lo_r);
            let tr = planar(&slab.xr, hi_r);
            let tl = planar(&slab.xl, hi_l);
            for tri in [vec![bl.clone(), br, tr.clone()], vec![bl, tr, tl]] {
                let s = Simplex::new(tri)?;
                if !s.is_degenerate() {
                    terms.push((winding.clone(), s));
                }
            }
        }
    }
    Chain::from_terms(group, 2, 2, terms)
}

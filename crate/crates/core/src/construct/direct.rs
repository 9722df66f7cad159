//! Direct constructions: Steiner triple systems and small planes.

use crate::design::{Block, Point, SetSystem};
use crate::error::{Error, Result};

/// Bose's construction of an STS(6k+3) from the idempotent commutative
/// quasigroup `x∘y = (x+y)(v+1)/2 mod v` on `Z_v`, `v = 2k+1`.
pub fn bose_sts(n: usize) -> Result<SetSystem> {
    if n % 6 != 3 {
        return Err(Error::Domain(format!(
            "Bose construction needs n ≡ 3 (mod 6), got {n}"
        )));
    }
    let v = n / 3;
    let half = v.div_ceil(2);
    let pt = |x: usize, i: usize| (x * 3 + i % 3 + 1) as Point;
    let mut blocks = Vec::new();
    for x in 0..v {
        blocks.push(Block::new([pt(x, 0), pt(x, 1), pt(x, 2)])?);
    }
    for i in 0..3 {
        for x in 0..v {
            for y in x + 1..v {
                let z = (x + y) * half % v;
                blocks.push(Block::new([pt(x, i), pt(y, i), pt(z, i + 1)])?);
            }
        }
    }
    SetSystem::new(n, blocks)
}

/// Skolem's construction of an STS(6k+1) from the half-idempotent
/// commutative quasigroup of order `2k`.
pub fn skolem_sts(n: usize) -> Result<SetSystem> {
    if n % 6 != 1 || n < 7 {
        return Err(Error::Domain(format!(
            "Skolem construction needs n ≡ 1 (mod 6), n ≥ 7, got {n}"
        )));
    }
    let k = (n - 1) / 6;
    let m = 2 * k;
    let op = |x: usize, y: usize| {
        let s = (x + y) % m;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            s / 2 + k
        }
    };
    let pt = |x: usize, i: usize| (x * 3 + i % 3 + 1) as Point;
    let inf = n as Point;
    let mut blocks = Vec::new();
    for x in 0..k {
        blocks.push(Block::new([pt(x, 0), pt(x, 1), pt(x, 2)])?);
        for i in 0..3 {
            blocks.push(Block::new([inf, pt(x + k, i), pt(x, i + 1)])?);
        }
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                blocks.push(Block::new([pt(x, i), pt(y, i), pt(op(x, y), i + 1)])?);
            }
        }
    }
    SetSystem::new(n, blocks)
}

/// An STS of any admissible order: the single triple, Bose, or Skolem.
pub fn steiner_triple_system(n: usize) -> Result<SetSystem> {
    match n % 6 {
        3 if n == 3 => SetSystem::from_lists(3, [[1, 2, 3]]),
        3 => bose_sts(n),
        1 if n >= 7 => skolem_sts(n),
        _ => Err(Error::Infeasible {
            request: format!("STS({n})"),
            reason: "n must be 1 or 3 mod 6".into(),
        }),
    }
}

/// Addition and multiplication tables of GF(q) for q ∈ {2,3,4,5,7}.
struct Field {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Field {
    fn new(q: usize) -> Result<Field> {
        let (add, mul) = match q {
            2 | 3 | 5 | 7 => (
                (0..q)
                    .map(|a| (0..q).map(|b| (a + b) % q).collect())
                    .collect(),
                (0..q)
                    .map(|a| (0..q).map(|b| a * b % q).collect())
                    .collect(),
            ),
            4 => (
                // elements 0, 1, α, α+1 with α² = α + 1
                (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
                vec![
                    vec![0, 0, 0, 0],
                    vec![0, 1, 2, 3],
                    vec![0, 2, 3, 1],
                    vec![0, 3, 1, 2],
                ],
            ),
            _ => return Err(Error::NotAvailable(format!("GF({q})"))),
        };
        Ok(Field { q, add, mul })
    }
}

/// Lines of AG(2,q) grouped into parallel classes; points `(x,y)` are
/// numbered `x·q + y + 1`.
fn affine_classes(q: usize) -> Result<Vec<Vec<Vec<Point>>>> {
    let f = Field::new(q)?;
    let pt = |x: usize, y: usize| (x * q + y + 1) as Point;
    let mut classes = Vec::new();
    for m in 0..f.q {
        let lines = (0..q)
            .map(|b| (0..q).map(|x| pt(x, f.add[f.mul[m][x]][b])).collect())
            .collect();
        classes.push(lines);
    }
    classes.push((0..q).map(|x| (0..q).map(|y| pt(x, y)).collect()).collect());
    Ok(classes)
}

/// AG(2,q), a PBD(q², {q}).
pub fn affine_plane(q: usize) -> Result<SetSystem> {
    extend_affine(q, 0, false)
}

/// AG(2,q) with one new point on every line of each of the first
/// `classes` parallel classes, plus the block of new points when `close`.
pub fn extend_affine(q: usize, classes: usize, close: bool) -> Result<SetSystem> {
    if classes > q + 1 {
        return Err(Error::Domain(format!(
            "AG(2,{q}) has only {} parallel classes",
            q + 1
        )));
    }
    let n = q * q + classes;
    let mut blocks = Vec::new();
    for (c, lines) in affine_classes(q)?.into_iter().enumerate() {
        for mut line in lines {
            if c < classes {
                line.push((q * q + c + 1) as Point);
            }
            blocks.push(Block::new(line)?);
        }
    }
    if close && classes >= 2 {
        blocks.push(Block::new((q * q + 1..=n).map(|p| p as Point))?);
    }
    SetSystem::new(n, blocks)
}

/// PG(2,3) from the planar difference set {0,1,3,9} mod 13.
pub fn projective_plane_3() -> Result<SetSystem> {
    let blocks = (0..13)
        .map(|i| Block::new([0, 1, 3, 9].map(|d| ((i + d) % 13 + 1) as Point)))
        .collect::<Result<Vec<_>>>()?;
    SetSystem::new(13, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_pbd;
    use std::collections::BTreeSet;

    fn is_pbd(s: &SetSystem, k: &[usize]) -> bool {
        verify_pbd(s, &k.iter().copied().collect::<BTreeSet<_>>()).is_valid()
    }

    #[test]
    fn steiner_systems() {
        for n in [3, 7, 9, 13, 15, 19, 21, 25, 27, 31, 33] {
            let s = steiner_triple_system(n).unwrap();
            assert_eq!(s.len(), n * (n - 1) / 6);
            assert!(is_pbd(&s, &[3]), "STS({n})");
        }
        assert!(steiner_triple_system(11).is_err());
    }

    #[test]
    fn planes() {
        for q in [2, 3, 4, 5, 7] {
            assert!(is_pbd(&affine_plane(q).unwrap(), &[q]), "AG(2,{q})");
            assert!(
                is_pbd(&extend_affine(q, q + 1, true).unwrap(), &[q + 1]),
                "PG(2,{q})"
            );
        }
        assert!(is_pbd(&projective_plane_3().unwrap(), &[4]));
        assert!(is_pbd(&extend_affine(3, 1, false).unwrap(), &[3, 4]));
        assert!(is_pbd(&extend_affine(3, 3, true).unwrap(), &[3, 4]));
        assert!(is_pbd(&extend_affine(4, 1, false).unwrap(), &[4, 5]));
    }
}

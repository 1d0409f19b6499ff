use super::{inertia, RationalMatrix, SignatureTriple};
use crate::error::{Error, Result};

/// Blocks of a symmetric matrix with the pattern
///
/// ```text
/// | Z   V  0  0 |
/// | Vᵗ  X  0  W |
/// | 0   0  0  0 |
/// | 0   Wᵗ 0  Y |
/// ```
///
/// together with `R = X − VᵗZ⁻¹V − WY⁻¹Wᵗ` and the congruence `Q` that
/// brings the matrix to `diag(Z, R, 0, Y)`.
#[derive(Clone, Debug)]
pub struct SchurReduction {
    pub sizes: [usize; 4],
    pub z: RationalMatrix,
    pub v: RationalMatrix,
    pub x: RationalMatrix,
    pub w: RationalMatrix,
    pub y: RationalMatrix,
    pub r: RationalMatrix,
    pub q: RationalMatrix,
}

impl SchurReduction {
    /// inertia(Z) + inertia(R) + (0, n3, 0) + inertia(Y)
    pub fn block_inertia(&self) -> Result<SignatureTriple> {
        Ok(inertia(&self.z)?
            + inertia(&self.r)?
            + SignatureTriple::new(0, self.sizes[2], 0)
            + inertia(&self.y)?)
    }
}

pub fn schur_reduce(m: &RationalMatrix, sizes: [usize; 4]) -> Result<SchurReduction> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let total: usize = sizes.iter().sum();
    if total != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: total,
        });
    }
    let [n1, n2, n3, _] = sizes;
    let off = [0, n1, n1 + n2, n1 + n2 + n3, total];
    let blk = |a: usize, b: usize| m.block(off[a], off[a + 1], off[b], off[b + 1]);

    const ZERO_BLOCKS: [(usize, usize); 9] = [
        (0, 2),
        (0, 3),
        (1, 2),
        (2, 0),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 0),
        (3, 2),
    ];
    for (a, b) in ZERO_BLOCKS {
        if !blk(a, b).is_zero() {
            return Err(Error::BlockPattern(format!(
                "block ({}, {}) is not zero",
                a + 1,
                b + 1
            )));
        }
    }

    let z = blk(0, 0);
    let v = blk(0, 1);
    let x = blk(1, 1);
    let w = blk(1, 3);
    let y = blk(3, 3);

    let z_inv = z.inverse()?;
    let y_inv = y.inverse()?;
    let zv = &z_inv * &v;
    let yw = &y_inv * &w.transpose();
    let r = &(&x - &(&v.transpose() * &zv)) - &(&w * &yw);

    let mut q = RationalMatrix::identity(total);
    q.set_block(off[0], off[1], &(-&zv));
    q.set_block(off[3], off[1], &(-&yw));

    let mut expected = RationalMatrix::zeros(total, total);
    expected.set_block(off[0], off[0], &z);
    expected.set_block(off[1], off[1], &r);
    expected.set_block(off[3], off[3], &y);
    if m.congruence(&q) != expected {
        return Err(Error::Internal(
            "congruence witness does not block-diagonalize".into(),
        ));
    }

    Ok(SchurReduction {
        sizes,
        z,
        v,
        x,
        w,
        y,
        r,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn block_diagonal_input_gives_x() {
        let m = RationalMatrix::from_diagonal(&[q(2), q(-3), q(5), q(0), q(-1)]);
        let s = schur_reduce(&m, [1, 2, 1, 1]).unwrap();
        assert_eq!(s.r, RationalMatrix::from_diagonal(&[q(-3), q(5)]));
        assert_eq!(s.block_inertia().unwrap(), inertia(&m).unwrap());
    }

    #[test]
    fn empty_middle_block() {
        let m = RationalMatrix::from_diagonal(&[q(1), q(0), q(-1)]);
        let s = schur_reduce(&m, [1, 0, 1, 1]).unwrap();
        assert_eq!((s.r.rows(), s.r.cols()), (0, 0));
    }

    #[test]
    fn coupled_blocks() {
        // Z=2, V=1, X=1, W=1, Y=-1 -> R = 1 - 1/2 + 1 = 3/2
        let m = RationalMatrix::from_rows(vec![
            vec![q(2), q(1), q(0)],
            vec![q(1), q(1), q(1)],
            vec![q(0), q(1), q(-1)],
        ])
        .unwrap();
        let s = schur_reduce(&m, [1, 1, 0, 1]).unwrap();
        assert_eq!(s.r[(0, 0)], crate::rational::qr(3, 2));
        assert_eq!(s.block_inertia().unwrap(), inertia(&m).unwrap());
    }

    #[test]
    fn pattern_violation_and_singular_blocks() {
        let m = RationalMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)]]).unwrap();
        assert!(matches!(
            schur_reduce(&m, [1, 0, 0, 1]),
            Err(Error::BlockPattern(_))
        ));
        let s = RationalMatrix::from_diagonal(&[q(0), q(1)]);
        assert!(matches!(schur_reduce(&s, [1, 1, 0, 0]), Err(Error::Singular)));
    }
}

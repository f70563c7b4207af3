//! The ring M2(F_q): 2x2 matrices, determinant/rank classification, the
//! determinant-normalizing maps into SL2, and the rank-1 row profile used by
//! the digraph case analyses.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Row-major 2x2 matrix [[a, b], [c, d]] over some F_q.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mat2 {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl Mat2 {
    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn from_reps(e: [u8; 4]) -> Mat2 {
        Mat2::new(Fe(e[0]), Fe(e[1]), Fe(e[2]), Fe(e[3]))
    }

    pub fn zero() -> Mat2 {
        Mat2::default()
    }

    pub fn identity() -> Mat2 {
        Mat2::new(Fe(1), Fe(0), Fe(0), Fe(1))
    }

    pub fn entries(&self) -> [Fe; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Ring operations exposed through the checked entry point.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

/// Which line of the matrix gets divided by the determinant when mapping a
/// nonsingular matrix onto SL2.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ScaleSide {
    /// First row scaled: [[a/i, b/i], [c, d]].
    Row,
    /// First column scaled: [[a/i, b], [c/i, d]].
    Column,
}

/// Shape of a rank-1 matrix: either the second row is `alpha` times the
/// (nonzero) first row, or the first row is zero. The two orientations are
/// kept distinct instead of overloading the factor, so that "same profile"
/// is decidable when the case analyses compare two rank-1 matrices.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Rank1Profile {
    /// row2 = alpha * row1, row1 != 0.
    RowForm(Fe),
    /// row1 = 0, row2 != 0 (the factor would be infinite).
    SwappedRowForm,
}

impl Rank1Profile {
    pub fn factor(&self) -> Option<Fe> {
        match self {
            Rank1Profile::RowForm(alpha) => Some(*alpha),
            Rank1Profile::SwappedRowForm => None,
        }
    }
}

impl fmt::Display for Rank1Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank1Profile::RowForm(alpha) => write!(f, "row-form(alpha={alpha})"),
            Rank1Profile::SwappedRowForm => write!(f, "swapped-row-form(alpha=inf)"),
        }
    }
}

impl Field {
    fn check_mat(&self, x: Mat2) -> Result<()> {
        for e in x.entries() {
            if !self.contains(e) {
                return Err(Error::SpecMismatch(format!(
                    "matrix entry {} is not a canonical element of F_{}",
                    e.0,
                    self.q()
                )));
            }
        }
        Ok(())
    }

    pub fn mat_add(&self, x: Mat2, y: Mat2) -> Mat2 {
        Mat2::new(
            self.add(x.a, y.a),
            self.add(x.b, y.b),
            self.add(x.c, y.c),
            self.add(x.d, y.d),
        )
    }

    pub fn mat_sub(&self, x: Mat2, y: Mat2) -> Mat2 {
        Mat2::new(
            self.sub(x.a, y.a),
            self.sub(x.b, y.b),
            self.sub(x.c, y.c),
            self.sub(x.d, y.d),
        )
    }

    pub fn mat_neg(&self, x: Mat2) -> Mat2 {
        Mat2::new(self.neg(x.a), self.neg(x.b), self.neg(x.c), self.neg(x.d))
    }

    pub fn mat_mul(&self, x: Mat2, y: Mat2) -> Mat2 {
        Mat2::new(
            self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        )
    }

    /// Checked ring operation; rejects matrices with out-of-field entries.
    pub fn mat_op(&self, x: Mat2, y: Mat2, op: MatOp) -> Result<Mat2> {
        self.check_mat(x)?;
        self.check_mat(y)?;
        Ok(match op {
            MatOp::Add => self.mat_add(x, y),
            MatOp::Sub => self.mat_sub(x, y),
            MatOp::Mul => self.mat_mul(x, y),
        })
    }

    /// det = ad - bc.
    pub fn det(&self, x: Mat2) -> Fe {
        self.sub(self.mul(x.a, x.d), self.mul(x.b, x.c))
    }

    /// 0 for the zero matrix, 2 for nonsingular, 1 otherwise.
    pub fn rank(&self, x: Mat2) -> u8 {
        if x == Mat2::zero() {
            0
        } else if self.det(x).0 != 0 {
            2
        } else {
            1
        }
    }

    /// Inverse via the adjugate; singular input is an error.
    pub fn mat_inv(&self, x: Mat2) -> Result<Mat2> {
        let det = self.det(x);
        if det.0 == 0 {
            return Err(Error::SingularMatrix);
        }
        let di = self.inv(det)?;
        Ok(Mat2::new(
            self.mul(di, x.d),
            self.mul(di, self.neg(x.b)),
            self.mul(di, self.neg(x.c)),
            self.mul(di, x.a),
        ))
    }

    /// Map a nonsingular matrix of determinant i onto SL2 by dividing the
    /// first row (or first column) by i. Both maps are the bijections behind
    /// the determinant-slice product identity.
    pub fn scale_to_sl2(&self, x: Mat2, side: ScaleSide) -> Result<Mat2> {
        let det = self.det(x);
        if det.0 == 0 {
            return Err(Error::SingularMatrix);
        }
        let di = self.inv(det)?;
        let y = match side {
            ScaleSide::Row => Mat2::new(self.mul(di, x.a), self.mul(di, x.b), x.c, x.d),
            ScaleSide::Column => Mat2::new(self.mul(di, x.a), x.b, self.mul(di, x.c), x.d),
        };
        debug_assert_eq!(self.det(y), Fe(1));
        Ok(y)
    }

    /// Row profile of a rank-1 matrix; rank != 1 is a domain error.
    pub fn rank1_profile(&self, x: Mat2) -> Result<Rank1Profile> {
        if self.rank(x) != 1 {
            return Err(Error::Domain(format!(
                "rank1_profile requires rank 1, got rank {} for {x}",
                self.rank(x)
            )));
        }
        if x.a.0 != 0 {
            Ok(Rank1Profile::RowForm(self.mul(x.c, self.inv(x.a)?)))
        } else if x.b.0 != 0 {
            Ok(Rank1Profile::RowForm(self.mul(x.d, self.inv(x.b)?)))
        } else {
            Ok(Rank1Profile::SwappedRowForm)
        }
    }
}

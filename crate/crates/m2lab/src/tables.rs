//! Enumeration of M2(F_q) and its determinant strata, with a bijective
//! integer encoding used as the vertex id space for every graph downstream.
//!
//! Index encoding: idx([[a,b],[c,d]]) = ((a*q + b)*q + c)*q + d over the
//! canonical element reps, a bijection M2(F_q) <-> [0, q^4).

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Mat2;

/// Integer id of a matrix in [0, q^4).
pub type MatIdx = u32;

/// Largest q for which full enumeration is allowed (q^4 = 531441 indices).
pub const MAX_ENUM_Q: u32 = 27;

/// Magic bytes and version of the on-disk table format.
pub const CACHE_MAGIC: [u8; 4] = *b"MRXL";
pub const CACHE_VERSION: u32 = 1;

/// A subset of M2(F_q) that experiments draw operands from.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Domain {
    M2,
    Sl2,
    Gl2,
    D0,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::M2 => "M2",
            Domain::Sl2 => "SL2",
            Domain::Gl2 => "GL2",
            Domain::D0 => "D0",
        }
    }

    pub fn parse(s: &str) -> Result<Domain> {
        match s.to_ascii_uppercase().as_str() {
            "M2" => Ok(Domain::M2),
            "SL2" => Ok(Domain::Sl2),
            "GL2" => Ok(Domain::Gl2),
            "D0" => Ok(Domain::D0),
            _ => Err(Error::Usage(format!("unknown domain '{s}'"))),
        }
    }
}

/// Fully enumerated M2(F_q): membership tables, determinant slices, and
/// index-level ring operations. Immutable once built.
pub struct GroupTable {
    field: Field,
    n: u32,
    all: Vec<MatIdx>,
    sl2: Vec<MatIdx>,
    gl2: Vec<MatIdx>,
    det_slices: Vec<Vec<MatIdx>>,
    det_of: Vec<u8>,
    rank_of: Vec<u8>,
    sl2_pos: Vec<u32>,
    digits: Vec<[u8; 4]>,
}

impl GroupTable {
    /// Enumerate every matrix, classify by determinant and rank, and build
    /// the SL2 / GL2 / D_alpha lists. q is capped at `MAX_ENUM_Q`.
    pub fn enumerate(field: Field) -> Result<GroupTable> {
        let q = field.q();
        if q > MAX_ENUM_Q {
            return Err(Error::ResourceLimit(format!(
                "enumeration needs q^4 = {} indices; q is capped at {MAX_ENUM_Q}",
                (q as u64).pow(4)
            )));
        }
        let n = q.pow(4);

        let digits: Vec<[u8; 4]> = (0..n)
            .map(|i| {
                [
                    (i / (q * q * q)) as u8,
                    (i / (q * q) % q) as u8,
                    (i / q % q) as u8,
                    (i % q) as u8,
                ]
            })
            .collect();

        // determinant and rank per index, computed in parallel chunks
        let classified: Vec<(u8, u8)> = (0..n as usize)
            .into_par_iter()
            .map(|i| {
                let m = Mat2::from_reps(digits[i]);
                let det = field.det(m).0;
                (det, field.rank(m))
            })
            .collect();
        let det_of: Vec<u8> = classified.iter().map(|c| c.0).collect();
        let rank_of: Vec<u8> = classified.iter().map(|c| c.1).collect();

        let mut det_slices: Vec<Vec<MatIdx>> = vec![Vec::new(); q as usize];
        for i in 0..n {
            det_slices[det_of[i as usize] as usize].push(i);
        }
        let sl2 = det_slices[1].clone();
        let mut gl2: Vec<MatIdx> = (0..n).filter(|&i| det_of[i as usize] != 0).collect();
        gl2.sort_unstable();

        let mut sl2_pos = vec![u32::MAX; n as usize];
        for (pos, &i) in sl2.iter().enumerate() {
            sl2_pos[i as usize] = pos as u32;
        }

        let table = GroupTable {
            n,
            all: (0..n).collect(),
            sl2,
            gl2,
            det_slices,
            det_of,
            rank_of,
            sl2_pos,
            digits,
            field,
        };
        table.check_cardinalities()?;
        Ok(table)
    }

    fn check_cardinalities(&self) -> Result<()> {
        let q = self.q() as u64;
        let expect_sl2 = q * q * q - q;
        let expect_gl2 = (q * q - 1) * (q * q - q);
        let expect_d0 = q * q * q + q * q - q;
        let sum: u64 = self.det_slices.iter().map(|s| s.len() as u64).sum();
        if self.sl2.len() as u64 != expect_sl2
            || self.gl2.len() as u64 != expect_gl2
            || self.det_slices[0].len() as u64 != expect_d0
            || sum != q * q * q * q
        {
            return Err(Error::Domain(format!(
                "cardinality audit failed for q={}: |SL2|={} (want {expect_sl2}), \
                 |GL2|={} (want {expect_gl2}), |D0|={} (want {expect_d0})",
                self.q(),
                self.sl2.len(),
                self.gl2.len(),
                self.det_slices[0].len()
            )));
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// q^4, the number of matrices.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn all(&self) -> &[MatIdx] {
        &self.all
    }

    pub fn sl2(&self) -> &[MatIdx] {
        &self.sl2
    }

    pub fn gl2(&self) -> &[MatIdx] {
        &self.gl2
    }

    /// Sorted indices of matrices with determinant alpha.
    pub fn det_slice(&self, alpha: Fe) -> &[MatIdx] {
        &self.det_slices[alpha.0 as usize]
    }

    pub fn domain(&self, d: Domain) -> &[MatIdx] {
        match d {
            Domain::M2 => &self.all,
            Domain::Sl2 => &self.sl2,
            Domain::Gl2 => &self.gl2,
            Domain::D0 => &self.det_slices[0],
        }
    }

    #[inline]
    pub fn encode(&self, m: Mat2) -> MatIdx {
        let q = self.field.q();
        ((m.a.0 as u32 * q + m.b.0 as u32) * q + m.c.0 as u32) * q + m.d.0 as u32
    }

    #[inline]
    pub fn decode(&self, i: MatIdx) -> Mat2 {
        Mat2::from_reps(self.digits[i as usize])
    }

    #[inline]
    pub fn det_idx(&self, i: MatIdx) -> u8 {
        self.det_of[i as usize]
    }

    #[inline]
    pub fn rank_idx(&self, i: MatIdx) -> u8 {
        self.rank_of[i as usize]
    }

    #[inline]
    pub fn is_sl2(&self, i: MatIdx) -> bool {
        self.det_of[i as usize] == 1
    }

    #[inline]
    pub fn is_gl2(&self, i: MatIdx) -> bool {
        self.det_of[i as usize] != 0
    }

    /// Position of an SL2 member in the sorted SL2 list (u32::MAX otherwise).
    #[inline]
    pub fn sl2_pos(&self, i: MatIdx) -> u32 {
        self.sl2_pos[i as usize]
    }

    #[inline]
    pub fn add_idx(&self, x: MatIdx, y: MatIdx) -> MatIdx {
        let f = &self.field;
        let a = self.digits[x as usize];
        let b = self.digits[y as usize];
        self.encode(Mat2::new(
            f.add(Fe(a[0]), Fe(b[0])),
            f.add(Fe(a[1]), Fe(b[1])),
            f.add(Fe(a[2]), Fe(b[2])),
            f.add(Fe(a[3]), Fe(b[3])),
        ))
    }

    #[inline]
    pub fn sub_idx(&self, x: MatIdx, y: MatIdx) -> MatIdx {
        let f = &self.field;
        let a = self.digits[x as usize];
        let b = self.digits[y as usize];
        self.encode(Mat2::new(
            f.sub(Fe(a[0]), Fe(b[0])),
            f.sub(Fe(a[1]), Fe(b[1])),
            f.sub(Fe(a[2]), Fe(b[2])),
            f.sub(Fe(a[3]), Fe(b[3])),
        ))
    }

    #[inline]
    pub fn mul_idx(&self, x: MatIdx, y: MatIdx) -> MatIdx {
        self.encode(self.field.mat_mul(self.decode(x), self.decode(y)))
    }

    #[inline]
    pub fn neg_idx(&self, x: MatIdx) -> MatIdx {
        self.encode(self.field.mat_neg(self.decode(x)))
    }

    /// Serialize the enumerated lists in the binary cache format: magic,
    /// version, q, modulus coefficients, then length-prefixed u32 arrays for
    /// sl2, gl2 and each determinant slice D_0..D_{q-1}, all little-endian.
    pub fn write_cache<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.q().to_le_bytes())?;
        let modulus = self.field.modulus();
        w.write_all(&(modulus.len() as u32).to_le_bytes())?;
        for &c in modulus {
            w.write_all(&(c as u32).to_le_bytes())?;
        }
        let mut write_arr = |arr: &[MatIdx]| -> Result<()> {
            w.write_all(&(arr.len() as u32).to_le_bytes())?;
            for &v in arr {
                w.write_all(&v.to_le_bytes())?;
            }
            Ok(())
        };
        write_arr(&self.sl2)?;
        write_arr(&self.gl2)?;
        for slice in &self.det_slices {
            write_arr(slice)?;
        }
        Ok(())
    }

    /// Read a cache written by `write_cache` and rebuild the table for
    /// `field`. Any mismatch in magic, version, q, modulus, array bounds or
    /// cardinalities rejects the file.
    pub fn read_cache<R: Read>(field: Field, r: &mut R) -> Result<GroupTable> {
        let mut u32buf = [0u8; 4];
        let mut read_u32 = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut u32buf)
                .map_err(|_| Error::BadCache("truncated header".into()))?;
            Ok(u32::from_le_bytes(u32buf))
        };
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)
            .map_err(|_| Error::BadCache("truncated magic".into()))?;
        if magic != CACHE_MAGIC {
            return Err(Error::BadCache("bad magic".into()));
        }
        let version = read_u32(r)?;
        if version != CACHE_VERSION {
            return Err(Error::BadCache(format!(
                "version {version} != {CACHE_VERSION}"
            )));
        }
        let q = read_u32(r)?;
        if q != field.q() {
            return Err(Error::BadCache(format!("q {q} != {}", field.q())));
        }
        let mlen = read_u32(r)? as usize;
        let mut modulus = Vec::with_capacity(mlen);
        for _ in 0..mlen {
            modulus.push(read_u32(r)? as u8);
        }
        if modulus != field.modulus() {
            return Err(Error::BadCache("modulus mismatch".into()));
        }
        let n = q.pow(4);
        let mut read_arr = |r: &mut R| -> Result<Vec<MatIdx>> {
            let len = read_u32(r)? as usize;
            if len > n as usize {
                return Err(Error::BadCache("array longer than q^4".into()));
            }
            let mut v = Vec::with_capacity(len);
            for _ in 0..len {
                let e = read_u32(r)?;
                if e >= n {
                    return Err(Error::BadCache("index out of range".into()));
                }
                v.push(e);
            }
            Ok(v)
        };
        let sl2 = read_arr(r)?;
        let gl2 = read_arr(r)?;
        let mut det_slices = Vec::with_capacity(q as usize);
        for _ in 0..q {
            det_slices.push(read_arr(r)?);
        }

        // recompute the cheap per-index tables; trust only the lists
        let digits: Vec<[u8; 4]> = (0..n)
            .map(|i| {
                [
                    (i / (q * q * q)) as u8,
                    (i / (q * q) % q) as u8,
                    (i / q % q) as u8,
                    (i % q) as u8,
                ]
            })
            .collect();
        let det_of: Vec<u8> = (0..n as usize)
            .map(|i| field.det(Mat2::from_reps(digits[i])).0)
            .collect();
        let rank_of: Vec<u8> = (0..n as usize)
            .map(|i| field.rank(Mat2::from_reps(digits[i])))
            .collect();
        let mut sl2_pos = vec![u32::MAX; n as usize];
        for (pos, &i) in sl2.iter().enumerate() {
            sl2_pos[i as usize] = pos as u32;
        }
        let table = GroupTable {
            n,
            all: (0..n).collect(),
            sl2,
            gl2,
            det_slices,
            det_of,
            rank_of,
            sl2_pos,
            digits,
            field,
        };
        table
            .check_cardinalities()
            .map_err(|e| Error::BadCache(e.to_string()))?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities_small_q() {
        for (q, sl2, d0) in [(2u32, 6, 10), (3, 24, 33), (5, 120, 145)] {
            let t = GroupTable::enumerate(Field::new(q).unwrap()).unwrap();
            assert_eq!(t.sl2().len(), sl2, "q={q} sl2");
            let expect_gl2 = ((q * q - 1) * (q * q - q)) as usize;
            assert_eq!(t.gl2().len(), expect_gl2, "q={q} gl2");
            assert_eq!(t.det_slice(Fe(0)).len(), d0, "q={q} d0");
            // nonzero slices all have |SL2| elements
            for alpha in 1..q {
                assert_eq!(t.det_slice(Fe(alpha as u8)).len(), sl2, "q={q} D_{alpha}");
            }
        }
    }

    #[test]
    fn encode_decode_roundtrip_exhaustive() {
        for q in [2u32, 3] {
            let t = GroupTable::enumerate(Field::new(q).unwrap()).unwrap();
            for i in 0..t.n() {
                assert_eq!(t.encode(t.decode(i)), i);
            }
        }
    }

    #[test]
    fn q_cap_enforced() {
        assert!(matches!(
            Field::new(29).map(GroupTable::enumerate),
            Ok(Err(Error::ResourceLimit(_)))
        ));
    }

    #[test]
    fn index_ops_match_matrix_ops() {
        let t = GroupTable::enumerate(Field::new(3).unwrap()).unwrap();
        let f = t.field();
        for x in [5u32, 17, 80, 33] {
            for y in [0u32, 7, 44, 62] {
                assert_eq!(
                    t.decode(t.mul_idx(x, y)),
                    f.mat_mul(t.decode(x), t.decode(y))
                );
                assert_eq!(
                    t.decode(t.sub_idx(x, y)),
                    f.mat_sub(t.decode(x), t.decode(y))
                );
            }
        }
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let t = GroupTable::enumerate(Field::new(3).unwrap()).unwrap();
        let mut buf = Vec::new();
        t.write_cache(&mut buf).unwrap();

        let t2 = GroupTable::read_cache(Field::new(3).unwrap(), &mut buf.as_slice()).unwrap();
        assert_eq!(t2.sl2(), t.sl2());
        assert_eq!(t2.gl2(), t.gl2());
        for a in 0..3u8 {
            assert_eq!(t2.det_slice(Fe(a)), t.det_slice(Fe(a)));
        }

        // truncation is rejected
        let cut = &buf[..buf.len() / 2];
        assert!(matches!(
            GroupTable::read_cache(Field::new(3).unwrap(), &mut &cut[..]),
            Err(Error::BadCache(_))
        ));

        // wrong q is rejected
        assert!(matches!(
            GroupTable::read_cache(Field::new(5).unwrap(), &mut buf.as_slice()),
            Err(Error::BadCache(_))
        ));

        // bad magic is rejected
        let mut mangled = buf.clone();
        mangled[0] = b'X';
        assert!(matches!(
            GroupTable::read_cache(Field::new(3).unwrap(), &mut mangled.as_slice()),
            Err(Error::BadCache(_))
        ));
    }
}

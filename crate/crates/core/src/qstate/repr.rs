//! JSON representation of complex data: `[re, im]` pairs, matrices row-major.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type ComplexPair = [f64; 2];

pub fn pair(z: &Complex64) -> ComplexPair {
    [z.re, z.im]
}

pub fn from_pair(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_to_pairs(v: &DVector<Complex64>) -> Vec<ComplexPair> {
    v.iter().map(pair).collect()
}

pub fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<ComplexPair>]) -> Result<DMatrix<Complex64>, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| from_pair(&rows[i][j])))
}

pub mod vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        vector_to_pairs(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<Complex64>, D::Error> {
        let pairs = Vec::<ComplexPair>::deserialize(d)?;
        Ok(DVector::from_iterator(pairs.len(), pairs.iter().map(from_pair)))
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<ComplexPair>>::deserialize(d)?;
        rows_to_matrix(&rows).map_err(D::Error::custom)
    }
}

pub mod matrices {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[DMatrix<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(matrix_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<DMatrix<Complex64>>, D::Error> {
        let all = Vec::<Vec<Vec<ComplexPair>>>::deserialize(d)?;
        all.iter()
            .map(|rows| rows_to_matrix(rows).map_err(D::Error::custom))
            .collect()
    }
}

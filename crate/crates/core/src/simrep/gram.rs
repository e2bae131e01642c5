use crate::error::{Error, Result};
use crate::frames::{dot, norm, FrameSequence};

/// Frames with norm below this are treated as having no direction.
pub const ZERO_NORM: f64 = 1e-12;

/// Cosine similarity with the zero-norm convention: 0 if either vector has
/// (near) zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na < ZERO_NORM || nb < ZERO_NORM {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

/// Symmetric `T × T` matrix of pairwise frame cosine similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    values: Vec<f64>,
    n: usize,
}

impl GramMatrix {
    /// Build from explicit row-major values, checking symmetry and range.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("gram matrix needs at least one frame"));
        }
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&v) {
                    return Err(Error::Config(format!("gram entry ({i},{j}) = {v} outside [-1, 1]")));
                }
                if (v - values[j * n + i]).abs() > 1e-9 {
                    return Err(Error::Config(format!("gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { values, n })
    }

    /// Matrix with 1 on the diagonal and `off` elsewhere, then `pairs`
    /// overridden symmetrically.
    pub fn with_pairs(n: usize, off: f64, pairs: &[(usize, usize, f64)]) -> Result<Self> {
        let mut values = vec![off; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        for &(i, j, v) in pairs {
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
        Self::from_values(n, values)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

/// Cosine-similarity Gram matrix of the frames of `seq`.
///
/// Frames with norm below [`ZERO_NORM`] have similarity 0 to every other
/// frame and 1 to themselves.
pub fn gram(seq: &FrameSequence) -> Result<GramMatrix> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::EmptyInput("gram needs at least one frame"));
    }
    let norms: Vec<f64> = seq.rows().map(norm).collect();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
        for j in 0..i {
            let v = if norms[i] < ZERO_NORM || norms[j] < ZERO_NORM {
                0.0
            } else {
                (dot(seq.row(i), seq.row(j)) / (norms[i] * norms[j])).clamp(-1.0, 1.0)
            };
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(GramMatrix { values, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng as _;

    #[test]
    fn orthonormal_frames() {
        let s = FrameSequence::from_rows(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 2).unwrap();
        let g = gram(&s).unwrap();
        assert_eq!(g.get(0, 1), 1.0);
        assert_eq!(g.get(0, 2), 0.0);
        for i in 0..3 {
            assert_eq!(g.get(i, i), 1.0);
        }
    }

    #[test]
    fn antiparallel_frames() {
        let s = FrameSequence::from_rows(&[[1.0, 1.0], [-1.0, -1.0]], 2).unwrap();
        assert!((gram(&s).unwrap().get(0, 1) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_frame_convention() {
        let s = FrameSequence::from_rows(&[[0.0, 0.0], [1.0, 0.0]], 2).unwrap();
        let g = gram(&s).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert_eq!(g.get(0, 1), 0.0);
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(gram(&FrameSequence::zeros(0, 2)), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn random_matrix_against_double_loop() {
        let mut g = rng::seeded(3);
        let data: Vec<f64> = (0..50 * 8).map(|_| g.random_range(-1.0..1.0)).collect();
        let s = FrameSequence::from_flat(data, 8, 0.01).unwrap();
        let m = gram(&s).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                let (a, b) = (s.row(i), s.row(j));
                let mut ab = 0.0;
                let mut aa = 0.0;
                let mut bb = 0.0;
                for k in 0..8 {
                    ab += a[k] * b[k];
                    aa += a[k] * a[k];
                    bb += b[k] * b[k];
                }
                let oracle = ab / (aa.sqrt() * bb.sqrt());
                assert!((m.get(i, j) - oracle).abs() < 1e-9);
                assert!((m.get(i, j) - m.get(j, i)).abs() < 1e-9);
                assert!(m.get(i, j).abs() <= 1.0 + 1e-9);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn scale_invariant(rows in proptest::collection::vec(
                proptest::collection::vec(-5.0f64..5.0, 4), 1..12),
            scales in proptest::collection::vec(0.01f64..100.0, 12)) {
            let s = FrameSequence::from_rows(&rows, 4).unwrap();
            let mut scaled = s.clone();
            for t in 0..scaled.len() {
                let k = scales[t];
                scaled.row_mut(t).iter_mut().for_each(|v| *v *= k);
            }
            let (a, b) = (gram(&s).unwrap(), gram(&scaled).unwrap());
            for i in 0..s.len() {
                for j in 0..s.len() {
                    // A frame that crosses the zero-norm cutoff under scaling changes convention.
                    let tiny = |q: &FrameSequence, t: usize| crate::frames::norm(q.row(t)) < 1e-6;
                    if tiny(&s, i) || tiny(&s, j) || tiny(&scaled, i) || tiny(&scaled, j) { continue; }
                    proptest::prop_assert!((a.get(i, j) - b.get(i, j)).abs() < 1e-9);
                }
            }
        }
    }
}

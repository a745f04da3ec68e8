//! Determinants and parallelepiped volumes for small dense systems.
//!
//! Two routes cover every valuation term. Square systems (j = d) go through
//! LU with partial pivoting for |det|. Rectangular systems (j < d) go through
//! the j x j Gram matrix, eliminated with full diagonal pivoting; since a Gram
//! matrix is positive semidefinite in exact arithmetic, tiny negative pivots
//! produced by rounding are clamped to zero before the square root.

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Relative tolerance (against the Gram trace) below which a negative pivot
/// is attributed to rounding and clamped to zero.
const GRAM_PIVOT_CLAMP: f64 = 1e-12;

/// Reusable buffers for volume evaluations inside hot enumeration loops.
#[derive(Clone, Debug, Default)]
pub struct VolumeScratch {
    matrix: Vec<f64>,
}

/// |det A| for a d x d matrix given in row-major order, via LU with partial
/// pivoting. The matrix buffer is destroyed.
fn abs_det_in_place(a: &mut [f64], d: usize) -> f64 {
    debug_assert_eq!(a.len(), d * d);
    let mut det: f64 = 1.0;
    for col in 0..d {
        let mut pivot_row = col;
        let mut pivot_abs = a[col * d + col].abs();
        for row in col + 1..d {
            let cand = a[row * d + col].abs();
            if cand > pivot_abs {
                pivot_abs = cand;
                pivot_row = row;
            }
        }
        if pivot_abs == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for k in 0..d {
                a.swap(col * d + k, pivot_row * d + k);
            }
        }
        let pivot = a[col * d + col];
        det *= pivot;
        for row in col + 1..d {
            let factor = a[row * d + col] / pivot;
            if factor != 0.0 {
                for k in col + 1..d {
                    a[row * d + k] -= factor * a[col * d + k];
                }
            }
        }
    }
    det.abs()
}

/// det of a symmetric PSD m x m matrix (row-major, destroyed), by symmetric
/// Gaussian elimination with full diagonal pivoting. Returns 0 when a pivot
/// clamps to zero (rank deficiency).
fn gram_det_in_place(g: &mut [f64], m: usize) -> Result<f64> {
    debug_assert_eq!(g.len(), m * m);
    let trace: f64 = (0..m).map(|i| g[i * m + i]).sum();
    let clamp = GRAM_PIVOT_CLAMP * trace.max(0.0);
    let mut det: f64 = 1.0;
    for step in 0..m {
        let mut pivot_idx = step;
        let mut pivot = g[step * m + step];
        for i in step + 1..m {
            if g[i * m + i] > pivot {
                pivot = g[i * m + i];
                pivot_idx = i;
            }
        }
        if pivot_idx != step {
            for k in 0..m {
                g.swap(step * m + k, pivot_idx * m + k);
            }
            for k in 0..m {
                g.swap(k * m + step, k * m + pivot_idx);
            }
        }
        if pivot <= 0.0 {
            if pivot < -clamp {
                return Err(Error::domain(format!(
                    "gram matrix numerically indefinite: pivot {pivot} below clamp {clamp}"
                )));
            }
            return Ok(0.0);
        }
        det *= pivot;
        for i in step + 1..m {
            let factor = g[i * m + step] / pivot;
            if factor != 0.0 {
                for k in step + 1..m {
                    g[i * m + k] -= factor * g[step * m + k];
                }
            }
        }
    }
    Ok(det)
}

/// Volume of the parallelepiped spanned by `idx.len()` of the `vectors`,
/// using preallocated scratch. Dimensions must already be validated.
pub(crate) fn parallelepiped_volume_indexed(
    vectors: &[Vector],
    idx: &[usize],
    scratch: &mut VolumeScratch,
) -> f64 {
    let j = idx.len();
    if j == 0 {
        return 1.0;
    }
    let d = vectors[idx[0]].dim();
    if j == d {
        scratch.matrix.clear();
        for &i in idx {
            scratch.matrix.extend_from_slice(vectors[i].coords());
        }
        abs_det_in_place(&mut scratch.matrix, d)
    } else {
        scratch.matrix.resize(j * j, 0.0);
        for a in 0..j {
            for b in a..j {
                let g = vectors[idx[a]].dot(&vectors[idx[b]]);
                scratch.matrix[a * j + b] = g;
                scratch.matrix[b * j + a] = g;
            }
        }
        gram_det_in_place(&mut scratch.matrix, j)
            .map(|det| det.max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    }
}

/// |det| of the d x d matrix whose rows are `idx`-selected vectors followed
/// by the `fixed` block. Used by mixed valuations.
pub(crate) fn abs_det_rows_indexed(
    vectors: &[Vector],
    idx: &[usize],
    fixed: &[Vector],
    scratch: &mut VolumeScratch,
) -> f64 {
    let d = idx.len() + fixed.len();
    scratch.matrix.clear();
    for &i in idx {
        scratch.matrix.extend_from_slice(vectors[i].coords());
    }
    for f in fixed {
        scratch.matrix.extend_from_slice(f.coords());
    }
    abs_det_in_place(&mut scratch.matrix, d)
}

/// Volume of the parallelepiped spanned by the `idx`-selected vectors plus
/// one `extra` vector, without materializing the extended list. Powers the
/// difference form of marginal valuations, where only subsets containing the
/// appended segment contribute.
pub(crate) fn parallelepiped_volume_indexed_plus(
    vectors: &[Vector],
    idx: &[usize],
    extra: &Vector,
    scratch: &mut VolumeScratch,
) -> f64 {
    let j = idx.len() + 1;
    let d = extra.dim();
    if j == d {
        scratch.matrix.clear();
        for &i in idx {
            scratch.matrix.extend_from_slice(vectors[i].coords());
        }
        scratch.matrix.extend_from_slice(extra.coords());
        abs_det_in_place(&mut scratch.matrix, d)
    } else {
        scratch.matrix.resize(j * j, 0.0);
        let at = |a: usize| -> &Vector {
            if a < idx.len() {
                &vectors[idx[a]]
            } else {
                extra
            }
        };
        for a in 0..j {
            for b in a..j {
                let g = at(a).dot(at(b));
                scratch.matrix[a * j + b] = g;
                scratch.matrix[b * j + a] = g;
            }
        }
        gram_det_in_place(&mut scratch.matrix, j)
            .map(|det| det.max(0.0).sqrt())
            .unwrap_or(f64::NAN)
    }
}

/// Mixed-volume analogue of `parallelepiped_volume_indexed_plus`: |det| of
/// the selected vectors, the extra vector, and the fixed block.
pub(crate) fn abs_det_rows_indexed_plus(
    vectors: &[Vector],
    idx: &[usize],
    extra: &Vector,
    fixed: &[Vector],
    scratch: &mut VolumeScratch,
) -> f64 {
    let d = idx.len() + 1 + fixed.len();
    scratch.matrix.clear();
    for &i in idx {
        scratch.matrix.extend_from_slice(vectors[i].coords());
    }
    scratch.matrix.extend_from_slice(extra.coords());
    for f in fixed {
        scratch.matrix.extend_from_slice(f.coords());
    }
    abs_det_in_place(&mut scratch.matrix, d)
}

/// Volume of the parallelepiped { sum t_i v_i : t in [0,1]^j } spanned by the
/// given vectors: sqrt(det of the Gram matrix), which for j = d reduces to
/// |det|. Returns an error when dimensions are inconsistent or j > d.
pub fn parallelepiped_volume(vectors: &[Vector]) -> Result<f64> {
    if vectors.is_empty() {
        return Err(Error::domain(
            "parallelepiped volume needs at least one vector",
        ));
    }
    let d = vectors[0].dim();
    for v in vectors {
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.dim(),
            });
        }
    }
    if vectors.len() > d {
        return Err(Error::domain(format!(
            "{} vectors cannot span a parallelepiped in dimension {d}",
            vectors.len()
        )));
    }
    let idx: Vec<usize> = (0..vectors.len()).collect();
    let mut scratch = VolumeScratch::default();
    let vol = parallelepiped_volume_indexed(vectors, &idx, &mut scratch);
    if vol.is_nan() {
        return Err(Error::domain(
            "gram matrix numerically indefinite beyond the clamp tolerance",
        ));
    }
    Ok(vol)
}

/// Numerical rank of the span of `vectors`, via Gram elimination with full
/// diagonal pivoting: the count of pivots above `tol` times the largest pivot.
pub fn numerical_rank(vectors: &[Vector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = vectors.len();
    let mut g = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let v = vectors[a].dot(&vectors[b]);
            g[a * m + b] = v;
            g[b * m + a] = v;
        }
    }
    let mut rank = 0;
    let mut first_pivot = 0.0;
    for step in 0..m {
        let mut pivot_idx = step;
        let mut pivot = g[step * m + step];
        for i in step + 1..m {
            if g[i * m + i] > pivot {
                pivot = g[i * m + i];
                pivot_idx = i;
            }
        }
        if pivot_idx != step {
            for k in 0..m {
                g.swap(step * m + k, pivot_idx * m + k);
            }
            for k in 0..m {
                g.swap(k * m + step, k * m + pivot_idx);
            }
        }
        if step == 0 {
            first_pivot = pivot;
        }
        if pivot <= 0.0 || pivot <= tol * first_pivot {
            break;
        }
        rank += 1;
        for i in step + 1..m {
            let factor = g[i * m + step] / pivot;
            if factor != 0.0 {
                for k in step + 1..m {
                    g[i * m + k] -= factor * g[step * m + k];
                }
            }
        }
    }
    rank
}

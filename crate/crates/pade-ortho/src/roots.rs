//! Roots of monic complex polynomials via balanced companion-matrix
//! eigenvalues.
//!
//! The companion matrix is already upper Hessenberg, so the eigenvalues come
//! from a shifted QR iteration with Givens rotations, run after a
//! Parlett-Reinsch balancing pass (powers of two, so balancing is exact).
//! Degrees here are tiny (denominator degrees of row sequences), which keeps
//! the explicit-shift variant both simple and robust.

// Index loops mirror the matrix notation here and stay.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

const MAX_SWEEPS: usize = 200;

/// Roots of `z^m + coeffs[m-1] z^(m-1) + ... + coeffs[0]`, unordered.
pub(crate) fn monic_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len();
    match m {
        0 => Vec::new(),
        1 => vec![-coeffs[0]],
        _ => {
            let mut h = companion(coeffs);
            balance(&mut h);
            hessenberg_eigenvalues(h)
        }
    }
}

fn companion(coeffs: &[Complex64]) -> Vec<Vec<Complex64>> {
    let m = coeffs.len();
    let mut h = vec![vec![Complex64::ZERO; m]; m];
    for i in 0..m {
        h[i][m - 1] = -coeffs[i];
        if i + 1 < m {
            h[i + 1][i] = Complex64::new(1.0, 0.0);
        }
    }
    h
}

/// Diagonal similarity scaling with powers of two until row and column
/// norms are comparable. Exact in floating point.
fn balance(h: &mut [Vec<Complex64>]) {
    let m = h.len();
    for _ in 0..32 {
        let mut converged = true;
        for i in 0..m {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..m {
                if j != i {
                    col += h[j][i].norm();
                    row += h[i][j].norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let mut factor = 1.0;
            let mut c = col;
            while c < row / 2.0 {
                c *= 2.0;
                factor *= 2.0;
            }
            while c > row * 2.0 {
                c /= 2.0;
                factor /= 2.0;
            }
            if factor != 1.0 {
                converged = false;
                for j in 0..m {
                    h[j][i] *= factor;
                    h[i][j] /= factor;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Eigenvalues of a complex upper Hessenberg matrix by explicit-shift QR.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let m = h.len();
    let mut eigen = Vec::with_capacity(m);
    let mut hi = m; // active block is rows/cols 0..hi
    let mut stalls = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigen.push(h[0][0]);
            break;
        }
        // Deflate negligible subdiagonals.
        let mut deflated = false;
        for i in (1..hi).rev() {
            let scale = h[i - 1][i - 1].norm() + h[i][i].norm();
            if h[i][i - 1].norm() <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                h[i][i - 1] = Complex64::ZERO;
                if i == hi - 1 {
                    eigen.push(h[hi - 1][hi - 1]);
                    hi -= 1;
                    deflated = true;
                    stalls = 0;
                }
                break;
            }
        }
        if deflated {
            continue;
        }
        // Start of the trailing unreduced block.
        let mut lo = 0;
        for i in (1..hi).rev() {
            if h[i][i - 1] == Complex64::ZERO {
                lo = i;
                break;
            }
        }
        stalls += 1;
        let shift = if stalls.is_multiple_of(16) {
            // Exceptional shift to break rare cycling.
            h[hi - 1][hi - 2] * 1.5 + h[hi - 1][hi - 1]
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
        if stalls > MAX_SWEEPS {
            // Practically unreachable for the tiny degrees used here; fall
            // back to the diagonal of whatever the iteration reached.
            for row in h.iter().take(hi) {
                eigen.push(row[row.len() - (h.len() - eigen.len())]);
            }
            break;
        }
    }
    eigen
}

/// Eigenvalue of the trailing 2x2 closest to the bottom-right entry.
fn wilkinson_shift(h: &[Vec<Complex64>], hi: usize) -> Complex64 {
    let a = h[hi - 2][hi - 2];
    let b = h[hi - 2][hi - 1];
    let c = h[hi - 1][hi - 2];
    let d = h[hi - 1][hi - 1];
    let tr_half = (a + d) / 2.0;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let e1 = tr_half + disc;
    let e2 = tr_half - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit-shift QR sweep on the block `lo..hi`.
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, shift: Complex64) {
    let m = h.len();
    for i in lo..hi {
        h[i][i] -= shift;
    }
    // Factor with Givens rotations chasing the subdiagonal: R = G_k .. G_1 H.
    let mut rotations = Vec::with_capacity(hi - lo - 1);
    for i in lo..hi - 1 {
        let a = h[i][i];
        let b = h[i + 1][i];
        let (c, s, r) = givens(a, b);
        rotations.push((i, c, s));
        h[i][i] = r;
        h[i + 1][i] = Complex64::ZERO;
        for j in i + 1..m {
            let x = h[i][j];
            let y = h[i + 1][j];
            h[i][j] = c * x + s * y;
            h[i + 1][j] = -s.conj() * x + c * y;
        }
    }
    // Multiply by the adjoint rotations from the right: H = R G_1^H .. G_k^H.
    for &(i, c, s) in &rotations {
        for row in h.iter_mut().take((i + 2).min(m)) {
            let x = row[i];
            let y = row[i + 1];
            row[i] = c * x + s.conj() * y;
            row[i + 1] = -s * x + c * y;
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}

/// Complex Givens rotation: returns (c, s, r) with c real, such that
/// [c, s; -conj(s), c] [a; b] = [r; 0].
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::ZERO, a);
    }
    let r = (na * na + nb * nb).sqrt();
    if na == 0.0 {
        // Rotate b straight into the pivot.
        return (0.0, (b / nb).conj(), Complex64::new(nb, 0.0));
    }
    let c = na / r;
    let s = a * b.conj() / (r * na);
    (c, s, a * (r / na))
}

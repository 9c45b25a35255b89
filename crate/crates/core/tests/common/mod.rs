#![allow(dead_code)]

use hspec_core::{CouplingSpec, FiedlerInput, SymMatrix};
use nalgebra::DMatrix;
use rand::Rng;

pub fn random_symmetric<R: Rng>(m: usize, range: f64, rng: &mut R) -> SymMatrix {
    SymMatrix::from_lower_fn(m, |_, _| rng.random_range(-range..=range)).unwrap()
}

pub fn random_coupling<R: Rng>(n: usize, range: f64, rng: &mut R) -> CouplingSpec {
    let mut rho = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = rng.random_range(-range..=range);
            rho[(i, j)] = r;
            rho[(j, i)] = r;
        }
    }
    CouplingSpec::new(rho).unwrap()
}

/// n in [2,5] blocks of sizes in [2,6], k <= min size, entries and
/// couplings uniform in [-2,2].
pub fn random_fiedler_input<R: Rng>(rng: &mut R) -> FiedlerInput {
    let n = rng.random_range(2..=5);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=6)).collect();
    let k = rng.random_range(1..=*sizes.iter().min().unwrap());
    let blocks = sizes
        .iter()
        .map(|&m| random_symmetric(m, 2.0, rng))
        .collect();
    FiedlerInput::from_blocks(blocks, k, random_coupling(n, 2.0, rng)).unwrap()
}

pub fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    let (a, b) = (sorted_desc(a), sorted_desc(b));
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// det(M) by Gaussian elimination with partial pivoting.
pub fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for c in col..n {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// Roots of det(A - xI) by sign-change scanning over the Gershgorin
/// interval followed by bisection. Independent of any eigensolver; assumes
/// simple roots.
pub fn charpoly_roots(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let radius = (0..n)
        .map(|i| a[i].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let p = |x: f64| {
        let mut m = a.to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= x;
        }
        det(m)
    };
    let steps = 40_000;
    let h = 2.0 * radius / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -radius;
    let mut f0 = p(x0);
    for s in 1..=steps {
        let x1 = -radius + s as f64 * h;
        let f1 = p(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = p(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    sorted_desc(&roots)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e`, by Sturm-count bisection. Descending.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    assert_eq!(e.len() + 1, n);
    // Number of eigenvalues strictly below x.
    let count_below = |x: f64| {
        let mut count = 0;
        let mut q = 1.0f64;
        for i in 0..n {
            let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
            q = d[i] - x - off;
            if q == 0.0 {
                q = -1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = (0..n)
        .map(|i| {
            d[i].abs()
                + if i > 0 { e[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { e[i].abs() } else { 0.0 }
        })
        .fold(0.0, f64::max)
        + 1.0;
    let mut out: Vec<f64> = (0..n)
        .map(|k| {
            // k-th smallest eigenvalue: smallest x with count_below(x) > k.
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    out.reverse();
    out
}

/// Pattern graph plus a commuting, regular factor family: circulants or
/// Cayley graphs of `Z_2^k`, order in {4, 8, 16}, `l` in [2, 6].
pub fn random_family<R: Rng>(rng: &mut R) -> (hspec_core::Graph, Vec<hspec_core::Graph>) {
    use hspec_core::generate::{random_cayley_family, random_circulant_family, random_graph};
    let l = rng.random_range(2..=6);
    let bits: u32 = rng.random_range(2..=4);
    let h = random_graph(l, 0.5, rng);
    let factors = if rng.random_bool(0.5) {
        random_circulant_family(1 << bits, l, 3, rng)
    } else {
        random_cayley_family(bits, l, 3, rng)
    };
    (h, factors)
}

/// Adjacency of the H-product assembled as `blockdiag(A_j) + A(H) (x) I_n`,
/// independently of the graph constructor.
pub fn kron_adjacency(h: &hspec_core::Graph, factors: &[hspec_core::Graph]) -> DMatrix<f64> {
    let n = factors[0].order();
    let l = h.order();
    let mut m = DMatrix::zeros(l * n, l * n);
    for (j, f) in factors.iter().enumerate() {
        let a = f.adjacency_matrix();
        m.view_mut((j * n, j * n), (n, n)).copy_from(a.as_matrix());
    }
    let ah = h.adjacency_matrix();
    m += ah.as_matrix().kronecker(&DMatrix::<f64>::identity(n, n));
    m
}

/// `alpha A + beta D + gamma I + eta J` of the H-product, built from the
/// Kronecker form, and its eigenvalues from nalgebra directly.
pub fn independent_universal_spectrum(
    h: &hspec_core::Graph,
    factors: &[hspec_core::Graph],
    p: [f64; 4],
) -> Vec<f64> {
    let a = kron_adjacency(h, factors);
    let dim = a.nrows();
    let degrees: Vec<f64> = (0..dim).map(|i| a.row(i).sum()).collect();
    let mut u = &a * p[0];
    for i in 0..dim {
        u[(i, i)] += p[1] * degrees[i] + p[2];
    }
    u.add_scalar_mut(p[3]);
    sorted_desc(nalgebra::SymmetricEigen::new(u).eigenvalues.as_slice())
}

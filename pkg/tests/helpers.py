"""Shared generators and independent oracles for the test suite.

The oracles intentionally avoid the code paths they are used to check:
eigenvalues come from characteristic-polynomial roots, superoperators
from explicit basis probing, partial operations from plain Python
loops.
"""

import numpy as np

from choikit import BipartiteShape, Channel, KrausSet, channel_from_choi, channel_from_kraus


def crandn(rng, *shape):
    """Complex standard normal array."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, d):
    q, r = np.linalg.qr(crandn(rng, d, d))
    dg = np.diagonal(r)
    return q * (dg / np.abs(dg))[np.newaxis, :]


def random_isometry(rng, p, q):
    """p x q matrix with orthonormal columns, p >= q."""
    if p < q:
        raise ValueError("isometry needs p >= q")
    m = crandn(rng, p, q)
    qq, r = np.linalg.qr(m)
    dg = np.diagonal(r)
    return qq * (dg / np.abs(dg))[np.newaxis, :]


def random_kraus(rng, m, n, count):
    scale = np.sqrt(2.0 * m * n * count)
    return KrausSet(
        BipartiteShape(m, n), tuple(crandn(rng, m, n) / scale for _ in range(count))
    )


def random_tp_kraus(rng, m, n, count):
    """Kraus family with sum a_x† a_x = id_n exactly (up to rounding)."""
    iso = random_isometry(rng, count * m, n)
    ops = tuple(iso[x * m : (x + 1) * m] for x in range(count))
    return KrausSet(BipartiteShape(m, n), ops)


def random_channel(rng, m, n):
    """Channel with a generic (non-Hermitian) block matrix, unit norm."""
    mat = crandn(rng, m * n, m * n)
    return channel_from_choi(mat / np.linalg.norm(mat), BipartiteShape(m, n))


def random_cp_channel(rng, m, n, count):
    return channel_from_kraus(random_kraus(rng, m, n, count))


def random_tp_channel(rng, m, n, count):
    return channel_from_kraus(random_tp_kraus(rng, m, n, count))


def random_hermitian(rng, d):
    a = crandn(rng, d, d)
    return (a + a.conj().T) / 2.0


def random_density(rng, d):
    a = crandn(rng, d, d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def char_poly_eigvals(a):
    """Eigenvalues as roots of the characteristic polynomial.

    Coefficients come from the Faddeev-LeVerrier recursion, so this
    never touches an eigensolver.  Fine for the small matrices used in
    tests; unstable for large ones.
    """
    a = np.asarray(a, dtype=complex)
    d = a.shape[0]
    eye = np.eye(d)
    mk = np.zeros_like(a)
    coeffs = [1.0 + 0.0j]
    for k in range(1, d + 1):
        mk = a @ mk + coeffs[-1] * eye
        coeffs.append(-np.trace(a @ mk) / k)
    return np.roots(np.array(coeffs))


def multiset_distance(x, y):
    """Greedy matching distance between two complex multisets."""
    x = list(np.asarray(x, dtype=complex))
    y = list(np.asarray(y, dtype=complex))
    assert len(x) == len(y)
    worst = 0.0
    for xv in x:
        gaps = [abs(xv - yv) for yv in y]
        best = int(np.argmin(gaps))
        worst = max(worst, gaps[best])
        y.pop(best)
    return worst


def superop_by_probing(c: Channel):
    """Superoperator from the block matrix by explicit index loops.

    Uses the contraction F(rho)[i,k] = sum_jl s[(i,j),(k,l)] rho[j,l]
    on matrix units, with no reshape tricks, so it is an independent
    oracle for the reshuffling code.
    """
    m, n = c.shape.m, c.shape.n
    choi = c.choi_mat
    out = np.zeros((m * m, n * n), dtype=complex)
    for i in range(m):
        for k in range(m):
            for j in range(n):
                for l in range(n):
                    out[i * m + k, j * n + l] = choi[i * n + j, k * n + l]
    return out


def kraus_apply(ops, rho):
    return sum(a @ rho @ a.conj().T for a in ops)

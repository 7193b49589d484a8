"""Linear operations on matrix algebras and their three representations.

An operation mapping n x n inputs to m x m outputs is stored canonically
through its block matrix (Choi form): the operator ``s`` on
``C^m (x) C^n`` with blocks ``s[(i,j),(k,l)]``.  The other two forms are

* the superoperator ``reshuffle_hat(s)``, an ``m^2 x n^2`` matrix acting
  on row-major vectorized inputs, and
* Kraus decompositions ``rho -> sum_x  a_x rho a_x†`` with each
  ``a_x`` of size ``m x n``, existing exactly when ``s`` is positive
  semidefinite.

Conversions between the three are exact reindexings or eigensystem
computations; no optimization is involved.  The predicate suite
(Hermiticity preserving, complete positivity, trace preservation,
unitality, factorizability, extremality) reads everything off ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bipartite as bp
from . import matlin as ml
from .errors import (
    DimensionMismatch,
    NotCompletelyPositive,
    NotHermitian,
    NotTracePreserving,
    NumericalFailure,
)
from .matlin import DEFAULT_TOL, Tolerance

__all__ = [
    "Channel",
    "KrausSet",
    "TPConditions",
    "PositivityVerdict",
    "ChannelVerdict",
    "channel_from_choi",
    "channel_from_kraus",
    "kraus_from_channel",
    "superop_from_channel",
    "channel_from_superop",
    "apply",
    "sandwich_identity_check",
    "extend_with_identity",
    "is_hermitian_preserving",
    "is_completely_positive",
    "check_positive_preserving",
    "is_trace_preserving",
    "six_tp_conditions",
    "is_unital",
    "is_bistochastic",
    "is_factorizable",
    "higher_rank",
    "is_isometric_channel",
    "extremal_span_dimension",
    "is_extremal_tp",
    "adjoint_channel",
    "compose",
    "channel_equal",
    "channel_verdict",
]


@dataclass(frozen=True)
class Channel:
    """An operation from n x n to m x m matrices, held as its block matrix.

    ``shape.m`` is the output dimension, ``shape.n`` the input dimension.
    """

    shape: bp.BipartiteShape
    choi: bp.BipartiteOperator

    def __post_init__(self):
        if self.choi.shape != self.shape:
            raise DimensionMismatch(
                f"block matrix has shape {self.choi.shape}, channel declares {self.shape}"
            )

    @property
    def choi_mat(self) -> np.ndarray:
        return self.choi.mat


@dataclass(frozen=True)
class KrausSet:
    """A finite family of m x n operators, all of the same size."""

    shape: bp.BipartiteShape
    ops: tuple

    def __post_init__(self):
        if len(self.ops) == 0:
            raise ValueError("a Kraus family must contain at least one operator")
        fixed = []
        for op in self.ops:
            op = ml.as_matrix(op)
            if op.shape != (self.shape.m, self.shape.n):
                raise DimensionMismatch(
                    f"operator of shape {op.shape} in a {self.shape.m} x {self.shape.n} family"
                )
            fixed.append(op)
        object.__setattr__(self, "ops", tuple(fixed))

    def __len__(self) -> int:
        return len(self.ops)


def channel_from_choi(mat, shape: bp.BipartiteShape) -> Channel:
    """Wrap an (m*n) x (m*n) matrix as a channel in block-matrix form."""
    return Channel(shape, bp.BipartiteOperator(shape, mat))


def channel_from_kraus(k: KrausSet) -> Channel:
    """Block matrix of ``rho -> sum_x a_x rho a_x†``.

    Equals ``sum_x vec(a_x) vec(a_x)†`` with row-major ``vec``; it is
    Hermitian positive semidefinite by construction.
    """
    vecs = np.stack([op.reshape(-1) for op in k.ops])
    choi = vecs.T @ vecs.conj()
    return channel_from_choi(choi, k.shape)


def kraus_from_channel(c: Channel, tol: Tolerance = DEFAULT_TOL) -> KrausSet:
    """Minimal Kraus family from the eigensystem of the block matrix.

    Requires the block matrix to be Hermitian positive semidefinite
    within tolerance; a negative eigenvalue beyond the threshold raises
    :class:`NotCompletelyPositive` carrying the witness eigenvector.
    Eigenvalues inside the tolerance band are dropped, so the family has
    exactly ``higher_rank(c)`` members, ordered by decreasing weight.
    """
    ok, witness = is_completely_positive(c, tol)
    if not ok:
        raise NotCompletelyPositive(
            "block matrix is not positive semidefinite", witness=witness
        )
    w, v = ml.hermitian_eig(c.choi_mat, tol)
    cut = tol.threshold(float(np.abs(w).max(initial=0.0)))
    keep = np.flatnonzero(w > cut)
    if keep.size == 0:
        # the zero operation still needs a representative
        return KrausSet(c.shape, (np.zeros((c.shape.m, c.shape.n)),))
    ops = tuple(
        np.sqrt(w[i]) * v[:, i].reshape(c.shape.m, c.shape.n) for i in keep
    )
    return KrausSet(c.shape, ops)


def superop_from_channel(c: Channel) -> np.ndarray:
    """The m^2 x n^2 matrix acting on row-major vectorized inputs."""
    return bp.reshuffle_hat(c.choi)


def channel_from_superop(mat, shape: bp.BipartiteShape) -> Channel:
    """Inverse of :func:`superop_from_channel`."""
    return Channel(shape, bp.unreshuffle_hat(mat, shape))


def apply(c: Channel, rho) -> np.ndarray:
    """Evaluate the operation on an n x n input, returning m x m."""
    rho = ml.as_matrix(rho)
    n = c.shape.n
    if rho.shape != (n, n):
        raise DimensionMismatch(f"expected {n} x {n} input, got {rho.shape}")
    out = superop_from_channel(c) @ rho.reshape(n * n)
    return out.reshape(c.shape.m, c.shape.m)


def sandwich_identity_check(
    c: Channel, kappa, rho, sigma, tau, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Verify that outer multiplication commutes through the block form.

    Checks ``kappa @ F(rho @ sigma) @ tau`` against the partial trace of
    ``(kappa (x) rho^T) s (tau (x) sigma^T)`` over the second factor,
    where ``F`` is the operation and ``s`` its block matrix.  This holds
    for every channel; a False return signals corrupted data.
    """
    m, n = c.shape.m, c.shape.n
    kappa, tau = ml.as_matrix(kappa), ml.as_matrix(tau)
    rho, sigma = ml.as_matrix(rho), ml.as_matrix(sigma)
    if kappa.shape != (m, m) or tau.shape != (m, m):
        raise DimensionMismatch("outer factors must be m x m")
    if rho.shape != (n, n) or sigma.shape != (n, n):
        raise DimensionMismatch("inner factors must be n x n")
    lhs = kappa @ apply(c, rho @ sigma) @ tau
    sandwiched = bp.kron(kappa, rho.T) @ c.choi_mat @ bp.kron(tau, sigma.T)
    rhs = bp.partial_trace_2(bp.BipartiteOperator(c.shape, sandwiched))
    return ml.nearly_equal(lhs, rhs, tol)


def extend_with_identity(c: Channel, r: int) -> Channel:
    """Tensor the operation with the identity on an r-dimensional factor.

    The result maps (n*r) x (n*r) inputs to (m*r) x (m*r) outputs, the
    extra factor sitting second in the tensor order.
    """
    if r < 1:
        raise ValueError("extension dimension must be positive")
    m, n = c.shape.m, c.shape.n
    s4 = superop_from_channel(c).reshape(m, m, n, n)
    eye = np.eye(r)
    big = np.einsum("ikjl,su,tv->isktjulv", s4, eye, eye)
    big = big.reshape((m * r) ** 2, (n * r) ** 2)
    return channel_from_superop(big, bp.BipartiteShape(m * r, n * r))


def is_hermitian_preserving(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the block matrix is Hermitian within tolerance."""
    choi = c.choi_mat
    return ml.frobenius_norm(choi - choi.conj().T) <= tol.threshold(
        ml.frobenius_norm(choi)
    )


def is_completely_positive(c: Channel, tol: Tolerance = DEFAULT_TOL):
    """Positive semidefiniteness of the block matrix.

    Returns ``(True, None)`` when every eigenvalue clears the negative
    tolerance band, else ``(False, witness)`` where the witness is the
    unit eigenvector of the most negative eigenvalue (or None when the
    block matrix is not even Hermitian).
    """
    if not is_hermitian_preserving(c, tol):
        return False, None
    choi = c.choi_mat
    w, v = ml.hermitian_eig(choi, tol)
    floor = -tol.threshold(ml.frobenius_norm(choi))
    if w[-1] < floor:
        witness = bp.BipartiteVector(c.shape, v[:, -1])
        return False, witness
    return True, None


@dataclass(frozen=True)
class PositivityVerdict:
    """Result of randomized positivity-preservation testing.

    ``outcome`` is ``"NotPositive"`` when a pure input/output pair with a
    negative expectation was found (witnesses attached), otherwise
    ``"NoViolationFound"`` -- which is evidence, not proof.
    """

    outcome: str
    samples_used: int
    min_value: float
    witness_psi: Optional[np.ndarray]
    witness_phi: Optional[np.ndarray]


def check_positive_preserving(
    c: Channel,
    tol: Tolerance = DEFAULT_TOL,
    samples: int = 10000,
    seed: int = 0,
) -> PositivityVerdict:
    """Search for a violation of positivity on pure states.

    Draws ``samples`` Haar-like pairs (psi in C^n, phi in C^m) from
    ``numpy.random.default_rng(seed)`` in the fixed order: psi real
    block, psi imaginary block, phi real block, phi imaginary block
    (each of shape ``(samples, dim)``).  Reports the minimum of
    ``<phi| F(psi psi†) |phi>`` and the first violating pair, if any.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    m, n = c.shape.m, c.shape.n
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    phi = rng.standard_normal((samples, m)) + 1j * rng.standard_normal((samples, m))
    phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    proj = (psi[:, :, None] * psi.conj()[:, None, :]).reshape(samples, n * n)
    outs = (proj @ superop_from_channel(c).T).reshape(samples, m, m)
    vals = np.einsum("sp,spq,sq->s", phi.conj(), outs, phi).real
    thr = tol.threshold(ml.frobenius_norm(c.choi_mat))
    bad = np.flatnonzero(vals < -thr)
    if bad.size:
        first = int(bad[0])
        return PositivityVerdict(
            outcome="NotPositive",
            samples_used=samples,
            min_value=float(vals.min()),
            witness_psi=psi[first].copy(),
            witness_phi=phi[first].copy(),
        )
    return PositivityVerdict(
        outcome="NoViolationFound",
        samples_used=samples,
        min_value=float(vals.min()),
        witness_psi=None,
        witness_phi=None,
    )


def is_trace_preserving(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff tracing the first factor of the block matrix gives id_n."""
    return ml.nearly_equal(bp.partial_trace_1(c.choi), np.eye(c.shape.n), tol)


@dataclass(frozen=True)
class TPConditions:
    """Six equivalent trace-preservation readings of one operation.

    ``kraus_gram`` and ``check_gram`` need a Kraus family, so they are
    None (skipped) when the operation is not completely positive; the
    other four are always decided.
    """

    kraus_gram: Optional[bool]  # sum_x a_x† a_x = id_n
    superop_trace_row: bool  # sum_k S[(k,k),(j,l)] = delta_jl
    check_gram: Optional[bool]  # sum_x (a_x^T)(a_x^T)† = id_n
    check_on_identity: bool  # column-reshuffle sends vec(id_m) to vec(id_n)
    first_trace: bool  # partial trace over the first factor = id_n
    choi_delta_pattern: bool  # sum_k s[(k,j),(k,l)] = delta_jl

    def as_tuple(self):
        return (
            self.kraus_gram,
            self.superop_trace_row,
            self.check_gram,
            self.check_on_identity,
            self.first_trace,
            self.choi_delta_pattern,
        )

    def decided(self):
        return tuple(x for x in self.as_tuple() if x is not None)

    def unanimous(self) -> bool:
        decided = self.decided()
        return all(decided) or not any(decided)


def six_tp_conditions(c: Channel, tol: Tolerance = DEFAULT_TOL) -> TPConditions:
    """Evaluate all six readings of trace preservation independently.

    They agree for every operation (the Kraus pair only exists on the
    completely positive cone); disagreement indicates numerical trouble
    at the tolerance boundary.
    """
    m, n = c.shape.m, c.shape.n
    eye_n = np.eye(n)

    cp, _ = is_completely_positive(c, tol)
    kraus_gram = check_gram = None
    if cp:
        ops = kraus_from_channel(c, tol).ops
        gram = sum(op.conj().T @ op for op in ops)
        kraus_gram = ml.nearly_equal(gram, eye_n, tol)
        gram_t = sum(op.T @ op.conj() for op in ops)
        check_gram = ml.nearly_equal(gram_t, eye_n, tol)

    s4 = superop_from_channel(c).reshape(m, m, n, n)
    superop_trace_row = ml.nearly_equal(np.einsum("kkjl->jl", s4), eye_n, tol)

    checked = bp.reshuffle_check(c.choi)
    on_identity = (checked @ np.eye(m).reshape(m * m)).reshape(n, n)
    check_on_identity = ml.nearly_equal(on_identity, eye_n, tol)

    first_trace = ml.nearly_equal(bp.partial_trace_1(c.choi), eye_n, tol)

    c4 = c.choi_mat.reshape(m, n, m, n)
    choi_delta_pattern = ml.nearly_equal(np.einsum("kjkl->jl", c4), eye_n, tol)

    return TPConditions(
        kraus_gram=kraus_gram,
        superop_trace_row=superop_trace_row,
        check_gram=check_gram,
        check_on_identity=check_on_identity,
        first_trace=first_trace,
        choi_delta_pattern=choi_delta_pattern,
    )


def is_unital(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the operation sends id_n to id_m (second partial trace)."""
    return ml.nearly_equal(bp.partial_trace_2(c.choi), np.eye(c.shape.m), tol)


def is_bistochastic(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Trace preserving and unital at once."""
    return is_trace_preserving(c, tol) and is_unital(c, tol)


def is_factorizable(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a completely positive operation is a single conjugation.

    Evaluates the scalar ``(tr F(id_n))^2 - |S|_F^2`` (with S the
    superoperator), which vanishes exactly when the block matrix has
    rank one, i.e. the operation is ``rho -> a rho a†`` for a single a.
    The equivalent form ``(tr s)^2 - tr(s^2)`` is computed as a
    cross-check.  Requires complete positivity.
    """
    ok, witness = is_completely_positive(c, tol)
    if not ok:
        raise NotCompletelyPositive(
            "factorizability is defined on the completely positive cone",
            witness=witness,
        )
    s = superop_from_channel(c)
    t1 = np.trace(apply(c, np.eye(c.shape.n))).real
    value = t1 * t1 - float(np.vdot(s, s).real)
    choi = c.choi_mat
    alt = (np.trace(choi) ** 2 - np.trace(choi @ choi)).real
    scale = t1 * t1 + float(np.vdot(s, s).real)
    if abs(value - alt) > tol.threshold(scale):
        raise NumericalFailure("factorizability cross-check disagreed")
    return bool(abs(value) <= tol.threshold(t1 * t1))


def higher_rank(c: Channel, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of significant eigenvalues of the Hermitian block matrix.

    Equals the minimal number of conjugation terms when the operation is
    completely positive.  Raises :class:`NotHermitian` otherwise.
    """
    w, _ = ml.hermitian_eig(c.choi_mat, tol)
    return ml.numeric_rank(np.abs(w), tol)


def is_isometric_channel(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Single conjugation by an isometry: CP, trace preserving, rank one."""
    cp, _ = is_completely_positive(c, tol)
    if not cp:
        return False
    if not is_trace_preserving(c, tol):
        return False
    return is_factorizable(c, tol)


def extremal_span_dimension(k: KrausSet, tol: Tolerance = DEFAULT_TOL) -> int:
    """Dimension of span{ a_x† a_y } for a Kraus family.

    For a minimal family of r operators the family is extremal among
    trace-preserving operations exactly when this span has the full
    dimension r^2.
    """
    prods = np.stack(
        [(x.conj().T @ y).reshape(-1) for x in k.ops for y in k.ops]
    )
    _, sv, _ = ml.svd(prods, tol)
    return int(sv.size)


def is_extremal_tp(c: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Extremality in the convex set of trace-preserving CP operations.

    Forms the n^2 x n^2 Gram-type matrix
    ``E[(j,j'),(l,l')] = sum_ik conj(s[(i,j),(k,l)]) s[(i,j'),(k,l')]``
    whose rank equals the dimension of span{ a_x† a_y } for any minimal
    Kraus family; the operation is extremal iff that rank is r^2 with
    r = higher_rank(c).  Requires CP and trace preservation.
    """
    cp, witness = is_completely_positive(c, tol)
    if not cp:
        raise NotCompletelyPositive(
            "extremality is defined for completely positive operations",
            witness=witness,
        )
    if not is_trace_preserving(c, tol):
        raise NotTracePreserving(
            "extremality is defined among trace-preserving operations"
        )
    m, n = c.shape.m, c.shape.n
    c4 = c.choi_mat.reshape(m, n, m, n)
    gram = np.einsum("ijkl,iJkL->jJlL", c4.conj(), c4).reshape(n * n, n * n)
    w, _ = ml.hermitian_eig(gram, tol)
    rank_gram = ml.numeric_rank(np.abs(w), tol)
    r = higher_rank(c, tol)
    return rank_gram == r * r


def adjoint_channel(c: Channel) -> Channel:
    """The adjoint operation for the Frobenius pairing.

    Its superoperator is the conjugate transpose of the original one; in
    Kraus terms every a_x becomes a_x†, so input and output dimensions
    swap.
    """
    s = superop_from_channel(c)
    return channel_from_superop(s.conj().T, bp.BipartiteShape(c.shape.n, c.shape.m))


def compose(outer: Channel, inner: Channel) -> Channel:
    """The operation ``outer after inner`` (inner acts first)."""
    if inner.shape.m != outer.shape.n:
        raise DimensionMismatch(
            f"cannot compose: inner outputs {inner.shape.m}, outer expects {outer.shape.n}"
        )
    s = superop_from_channel(outer) @ superop_from_channel(inner)
    return channel_from_superop(s, bp.BipartiteShape(outer.shape.m, inner.shape.n))


def channel_equal(a: Channel, b: Channel, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Frobenius comparison of block matrices; shapes must match."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return ml.nearly_equal(a.choi_mat, b.choi_mat, tol)


@dataclass(frozen=True)
class ChannelVerdict:
    """All structural predicates of one operation, evaluated together.

    ``higher_rank`` is computed from singular values so it is defined
    even off the Hermitian cone (where it agrees with the eigenvalue
    count).  ``factorizable`` is reported False off the CP cone, and
    ``extremal_tp`` is None unless the operation is CP and trace
    preserving.
    """

    hermitian_preserving: bool
    completely_positive: bool
    cp_witness: Optional[bp.BipartiteVector]
    trace_preserving: bool
    unital: bool
    bistochastic: bool
    factorizable: bool
    higher_rank: int
    extremal_tp: Optional[bool]


def channel_verdict(c: Channel, tol: Tolerance = DEFAULT_TOL) -> ChannelVerdict:
    """Evaluate the whole predicate suite on one operation."""
    hp = is_hermitian_preserving(c, tol)
    cp, witness = is_completely_positive(c, tol)
    tp = is_trace_preserving(c, tol)
    unital = is_unital(c, tol)
    _, sv, _ = ml.svd(c.choi_mat, tol)
    rank = int(sv.size)
    fact = is_factorizable(c, tol) if cp else False
    ext = is_extremal_tp(c, tol) if (cp and tp) else None
    return ChannelVerdict(
        hermitian_preserving=hp,
        completely_positive=cp,
        cp_witness=witness,
        trace_preserving=tp,
        unital=unital,
        bistochastic=tp and unital,
        factorizable=fact,
        higher_rank=rank,
        extremal_tp=ext,
    )

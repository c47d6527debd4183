"""Laplacians, a Jacobi eigensolver, spectral moments and moment distances.

Matrices are plain ``numpy`` float arrays; moment vectors are 1-D arrays
holding ``m_1..m_K`` (``m_0 = 1`` is implicit).
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import Graph, NodeSet

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
NEG_CLAMP = 1e-9
ILL_CONDITIONED_POWER_SUM = 1e12


class EigenConvergenceError(RuntimeError):
    pass


class NegativeMomentError(ValueError):
    pass


class IllConditionedError(ValueError):
    pass


def laplacian(g: Graph) -> np.ndarray:
    L = np.zeros((g.n, g.n))
    for i in range(g.n):
        nb = list(g.neighbors(i))
        L[i, i] = len(nb)
        L[i, nb] = -1.0
    return L


def local_laplacian(g: Graph, s: NodeSet) -> np.ndarray:
    """``laplacian(g)`` restricted to ``s``, built from the adjacency of ``s`` only."""
    pos = s.position
    L = np.zeros((len(s), len(s)))
    for p, v in enumerate(s.nodes):
        nb = g.neighbors(v)
        L[p, p] = len(nb)
        for w in nb:
            q = pos.get(w)
            if q is not None:
                L[p, q] = -1.0
    return L


def principal_submatrix(M: np.ndarray, s: NodeSet | Sequence[int]) -> np.ndarray:
    idx = list(s.nodes if isinstance(s, NodeSet) else s)
    dim = M.shape[0]
    for v in idx:
        if not 0 <= v < dim:
            raise IndexError(f"index {v} out of range for dim {dim}")
    return M[np.ix_(idx, idx)].copy()


class Eigh(NamedTuple):
    values: np.ndarray   # ascending
    vectors: np.ndarray  # column k pairs with values[k]


def _round_robin(m: int) -> list[list[tuple[int, int]]]:
    """Rounds of disjoint index pairs covering every pair once (m even)."""
    ring = list(range(1, m))
    rounds = []
    for _ in range(m - 1):
        order = [0] + ring
        rounds.append([(order[k], order[m - 1 - k]) for k in range(m // 2)])
        ring = ring[-1:] + ring[:-1]
    return rounds


def sym_eig(M: np.ndarray, tol: float = JACOBI_TOL,
            max_sweeps: int = JACOBI_MAX_SWEEPS) -> Eigh:
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the rotations of one round act on disjoint index pairs and can be
    applied together. Iterates until every off-diagonal magnitude drops
    below ``tol * ||M||_F``.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError("expected a non-empty square matrix")
    n = A.shape[0]
    V = np.eye(n)
    fro = np.linalg.norm(A)
    thresh = tol * fro
    m = n + (n % 2)
    rounds = []
    for pairs in _round_robin(m) if n > 1 else []:
        pairs = [(p, q) if p < q else (q, p) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))

    def off_max() -> float:
        if n == 1:
            return 0.0
        return float(np.max(np.abs(A - np.diag(np.diag(A)))))

    sweeps = 0
    while off_max() >= thresh and fro > 0:
        if sweeps == max_sweeps:
            raise EigenConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diag {off_max():.3e})")
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 0
            if not active.any():
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            theta = (A[Q, Q] - A[P, P]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(n)
            J[P, P] = c
            J[Q, Q] = c
            J[P, Q] = s
            J[Q, P] = -s
            A = J.T @ A @ J
            A = 0.5 * (A + A.T)
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            V = V @ J
        sweeps += 1

    vals = np.diag(A).copy()
    order = np.argsort(vals, kind="stable")
    return Eigh(vals[order], V[:, order])


def spectrum(g: Graph) -> np.ndarray:
    """Sorted Laplacian eigenvalues of ``g``."""
    if g.n == 0:
        return np.zeros(0)
    return sym_eig(laplacian(g)).values


def moments_from_spectrum(eigenvalues: Iterable[float], K: int) -> np.ndarray:
    if K < 1:
        raise ValueError("K must be >= 1")
    lam = np.asarray(list(eigenvalues), dtype=float)
    if lam.size == 0:
        return np.zeros(K)
    return np.array([np.mean(lam ** k) for k in range(1, K + 1)])


def power_traces(M: np.ndarray, K: int) -> np.ndarray:
    """``Trace(M^k)`` for k = 1..K by repeated multiplication."""
    if K < 1:
        raise ValueError("K must be >= 1")
    out = np.empty(K)
    if M.shape[0] == 0:
        out[:] = 0.0
        return out
    P = M
    out[0] = P.trace()
    for k in range(1, K):
        P = P @ M
        out[k] = P.trace()
    return out


def moments_via_trace(M: np.ndarray, K: int) -> np.ndarray:
    dim = M.shape[0]
    if dim == 0:
        return np.zeros(K)
    return power_traces(M, K) / dim


def graph_moments(g: Graph, K: int) -> np.ndarray:
    return moments_via_trace(laplacian(g), K)


def _kth_roots(m: Sequence[float]) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if np.any(m < -NEG_CLAMP):
        raise NegativeMomentError(f"negative moment in {m.tolist()}")
    m = np.clip(m, 0.0, None)
    k = np.arange(1, m.size + 1)
    return m ** (1.0 / k)


def spectral_pseudodistance(a: Sequence[float], b: Sequence[float], K: int | None = None) -> float:
    """Sum over k <= K of (a_k^(1/k) - b_k^(1/k))^2."""
    if K is None:
        if len(a) != len(b):
            raise ValueError("moment vectors differ in length")
        K = len(a)
    if len(a) < K or len(b) < K:
        raise ValueError(f"need at least {K} moments")
    d = _kth_roots(a[:K]) - _kth_roots(b[:K])
    return float(np.dot(d, d))


def spectral_distance_full(a: Sequence[float], b: Sequence[float]) -> float:
    """Untruncated distance; callers pass n-1 moments of each spectrum."""
    if len(a) != len(b):
        raise ValueError("moment vectors differ in length")
    return spectral_pseudodistance(a, b, len(a))


def char_poly_from_moments(m: Sequence[float]) -> np.ndarray:
    """Coefficients ``alpha_0..alpha_{n-1}`` of the monic characteristic polynomial.

    ``m`` holds ``m_1..m_n`` of an n x n symmetric matrix. Power sums
    ``p_k = n m_k`` are converted to elementary symmetric polynomials with
    Newton's identities.
    """
    m = np.asarray(m, dtype=float)
    n = m.size
    p = n * m
    if np.any(np.abs(p) > ILL_CONDITIONED_POWER_SUM):
        raise IllConditionedError(
            f"power sums exceed {ILL_CONDITIONED_POWER_SUM:g}; recovery is ill-conditioned")
    e = np.zeros(n + 1)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e[k] = acc / k
    # lambda^n + alpha_{n-1} lambda^{n-1} + ... + alpha_0, alpha_{n-k} = (-1)^k e_k
    alpha = np.zeros(n)
    for k in range(1, n + 1):
        alpha[n - k] = (-1) ** k * e[k]
    return alpha


def extend_moments(m: Sequence[float], T: int) -> np.ndarray:
    """Extend ``m_1..m_n`` to ``m_1..m_T`` through the Cayley-Hamilton recursion."""
    m = np.asarray(m, dtype=float)
    n = m.size
    alpha = char_poly_from_moments(m)
    seq = [1.0, *m.tolist()]  # seq[k] = m_k
    for top in range(n + 1, T + 1):
        t = top - n
        seq.append(-sum(alpha[i] * seq[t + i] for i in range(n)))
    return np.array(seq[1:T + 1])


def empirical_cdf(eigenvalues: Sequence[float]) -> list[tuple[float, float]]:
    lam = np.sort(np.asarray(eigenvalues, dtype=float))
    n = lam.size
    return [(float(x), (k + 1) / n) for k, x in enumerate(lam)]


def fmt(x: float) -> str:
    """Plain positional decimal, at most 17 significant digits, round-trip exact."""
    return np.format_float_positional(float(x), precision=17, unique=True,
                                      fractional=False, trim="-")


def csv_row(values: Iterable[float]) -> str:
    return ",".join(fmt(v) for v in values)

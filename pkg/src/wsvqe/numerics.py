"""Dense complex linear algebra for small Hermitian problems.

Matrices and vectors are plain ``numpy`` complex arrays. The exact
eigensolver is a cyclic Jacobi method on the real symmetric embedding
``[[A, -B], [B, A]]`` of ``H = A + iB``; the classical eigenvector
approximation combines a Gershgorin lower bound with a few steps of
inverse iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMatrixError

HERMITIAN_TOL = 1e-12
MAX_DIM = 64


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    return A


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return bool(np.max(np.abs(A - A.conj().T), initial=0.0) <= tol)


def check_hermitian(A) -> np.ndarray:
    A = as_matrix(A)
    if not is_hermitian(A):
        raise DomainError("matrix is not Hermitian")
    return A


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament ordering: m - 1 rounds of m/2 disjoint index pairs."""
    players = list(range(m + (m % 2)))
    rounds = []
    for _ in range(len(players) - 1):
        half = len(players) // 2
        ps, qs = [], []
        for a, b in zip(players[:half], reversed(players[half:])):
            if a < m and b < m:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _jacobi_symmetric(S: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a real symmetric matrix with cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the rotations of one round act on disjoint index pairs and can be
    applied together. Returns ``(eigenvalues, eigenvectors)`` with
    eigenvalues ascending and eigenvectors as columns.
    """
    A = np.array(S, dtype=float)
    m = A.shape[0]
    V = np.eye(m)
    scale = np.linalg.norm(A)
    if scale == 0.0 or m == 1:
        return np.diag(A).copy(), V
    rounds = _round_robin(m)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(A, 1) ** 2))
        if off <= 1e-15 * scale:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            live = np.abs(apq) > 1e-300
            if not live.any():
                continue
            P, Q, apq = P[live], Q[live], apq[live]
            theta = (A[Q, Q] - A[P, P]) / (2.0 * apq)
            # tangent of the smaller rotation angle; 1/(2 theta) once theta^2 overflows
            big = np.abs(theta) > 1e150
            safe = np.where(big, 1.0, theta)
            t = np.where(
                big,
                0.5 / np.where(big, theta, 1.0),
                np.where(safe >= 0, 1.0, -1.0) / (np.abs(safe) + np.sqrt(safe * safe + 1.0)),
            )
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cp, cq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = c * cp - s * cq
            A[:, Q] = s * cp + c * cq
            rp, rq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rp - s[:, None] * rq
            A[Q, :] = s[:, None] * rp + c[:, None] * rq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = c * vp - s * vq
            V[:, Q] = s * vp + c * vq
    evals = np.diag(A).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest component made real positive so results are reproducible
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def hermitian_eigenvalues(H) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending."""
    H = check_hermitian(H)
    A, B = H.real, H.imag
    evals, _ = _jacobi_symmetric(np.block([[A, -B], [B, A]]))
    # each eigenvalue of H appears twice in the embedding
    return evals[::2].copy()


def eig_hermitian_min(H) -> EigenPair:
    """Smallest eigenvalue of a Hermitian ``H`` and a unit eigenvector."""
    H = check_hermitian(H)
    n = H.shape[0]
    if n > MAX_DIM:
        raise DomainError(f"dimension {n} exceeds {MAX_DIM}")
    A, B = H.real, H.imag
    evals, vecs = _jacobi_symmetric(np.block([[A, -B], [B, A]]))
    top = vecs[:, 0]
    v = top[:n] + 1j * top[n:]
    v = _fix_phase(v / np.linalg.norm(v))
    # Rayleigh quotient is at least as accurate as the rotated diagonal
    value = float(np.real(np.vdot(v, H @ v)))
    return EigenPair(value, v)


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting."""
    A = as_matrix(A)
    b = np.asarray(b, dtype=complex)
    n = A.shape[0]
    if b.shape != (n,):
        raise DomainError(f"right-hand side shape {b.shape} does not match {A.shape}")
    threshold = 1e-12 * np.linalg.norm(A)
    LU = A.copy()
    x = b.copy()
    for k in range(n):
        piv = k + int(np.argmax(np.abs(LU[k:, k])))
        if abs(LU[piv, k]) < threshold or LU[piv, k] == 0:
            raise SingularMatrixError(f"pivot {abs(LU[piv, k]):.3e} at column {k}")
        if piv != k:
            LU[[k, piv]] = LU[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        factors = LU[k + 1:, k] / LU[k, k]
        LU[k + 1:, k:] -= np.outer(factors, LU[k, k:])
        x[k + 1:] -= factors * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - LU[k, k + 1:] @ x[k + 1:]) / LU[k, k]
    return x


def gershgorin_lower_bound(H) -> float:
    """Lower bound ``min_i (H_ii - sum_{k != i} |H_ik|)`` on the spectrum."""
    H = check_hermitian(H)
    absH = np.abs(H)
    radii = absH.sum(axis=1) - np.diag(absH)
    return float(np.min(np.diag(H).real - radii))


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def inverse_power(
    H,
    mu: float,
    k: int = 3,
    rng: np.random.Generator | None = None,
    q0=None,
    max_shifts: int = 3,
) -> np.ndarray:
    """Approximate the eigenvector of ``H`` whose eigenvalue is closest to ``mu``.

    Runs ``k`` steps of inverse iteration from a random complex unit
    vector (or ``q0`` when given). When ``H - mu*I`` is numerically
    singular, ``mu`` is nudged downward by ``1e-6 * (1 + |mu|)`` and the
    solve retried, at most ``max_shifts`` times.
    """
    H = check_hermitian(H)
    n = H.shape[0]
    if k < 1:
        raise DomainError("k must be >= 1")
    if q0 is None:
        if rng is None:
            raise DomainError("either rng or q0 is required")
        q = random_unit_vector(n, rng)
    else:
        q = np.asarray(q0, dtype=complex)
        q = q / np.linalg.norm(q)
    start = q
    eye = np.eye(n)
    shifts = 0
    while True:
        try:
            q = start
            shifted = H - mu * eye
            for _ in range(k):
                z = lu_solve(shifted, q)
                q = z / np.linalg.norm(z)
            break
        except SingularMatrixError:
            if shifts >= max_shifts:
                raise
            shifts += 1
            mu = mu - 1e-6 * (1.0 + abs(mu))
    return q / np.linalg.norm(q)


def rayleigh_quotient(H, v) -> float:
    H = as_matrix(H)
    v = np.asarray(v, dtype=complex)
    if v.shape != (H.shape[0],):
        raise DomainError(f"vector shape {v.shape} does not match {H.shape}")
    val = np.vdot(v, H @ v)
    if is_hermitian(H) and abs(val.imag) > 1e-9:
        raise DomainError(f"imaginary Rayleigh quotient {val.imag:.3e} for Hermitian input")
    return float(val.real)


def approximate_ground_vector(H, rng: np.random.Generator, k: int = 3) -> np.ndarray:
    """Gershgorin bound followed by ``k`` inverse-iteration steps."""
    return inverse_power(H, gershgorin_lower_bound(H), k=k, rng=rng)

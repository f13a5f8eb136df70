"""Dense complex linear algebra and scalar root finding used by the optimizer.

The eigensolver is a cyclic Jacobi method for Hermitian matrices, using the
round-robin ordering so that each round rotates n/2 disjoint pairs with a
single unitary. It is slower than LAPACK but simple, accurate to a few ulps
and deterministic, which is all the small (M <= 64) arrays here need.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, InvalidInput, NoConvergence, NotPositiveDefinite, SingularSystem

_EPS = np.finfo(float).eps

# Jacobi stops once the off-diagonal Frobenius norm is below this fraction of ||A||_F.
_JACOBI_OFF_TOL = 1e-15
_JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenpairs of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Real eigenvalues in ascending order.
    eigenvectors : ndarray, shape (n, n)
        Unitary matrix whose column ``i`` pairs with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square(a, name="A"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return a.astype(complex)


def _check_hermitian(a, tol, name="A"):
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > tol * max(scale, np.finfo(float).tiny):
        raise InvalidInput(f"{name} is not Hermitian within tol={tol:g}")


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def _round_robin_pairs(n):
    """Tournament schedule: n-1 rounds (n even) of disjoint index pairs covering all pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(i, j), max(i, j)) for i, j in pairs if i >= 0 and j >= 0]
        rounds.append((np.array([i for i, _ in pairs]), np.array([j for _, j in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate_pairs(a, v, p, q, skip):
    """Annihilate ``a[p_i, q_i]`` for a set of disjoint pairs with one unitary ``J``."""
    b = a[p, q]
    absb = np.abs(b)
    active = absb > skip
    if not np.any(active):
        return a, v
    p, q, b, absb = p[active], q[active], b[active], absb[active]
    # Phase-rotate b onto the real axis, then apply a real Givens rotation.
    phase = np.conj(b) / absb
    tau = (a[q, q].real - a[p, p].real) / (2.0 * absb)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    j = np.eye(a.shape[0], dtype=complex)
    j[p, p] = c
    j[p, q] = s
    j[q, p] = -s * phase
    j[q, q] = c * phase
    a = j.conj().T @ a @ j
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[np.diag_indices_from(a)] = np.diag(a).real
    return a, v @ j


def hermitian_eigendecompose(a, tol=1e-10):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian matrix. Only its Hermitian part is used.
    tol : float
        Relative tolerance of the Hermitian check ``||A - A^H|| <= tol ||A||``.

    Returns
    -------
    HermitianEigen
        Eigenvalues ascending; ties keep their diagonal order.

    Raises
    ------
    InvalidInput
        Non-square, non-finite or non-Hermitian input.
    NoConvergence
        Off-diagonal mass did not vanish within the sweep cap.
    """
    a = _as_square(a)
    _check_hermitian(a, tol)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)

    if n > 1 and scale > 0.0:
        threshold = _JACOBI_OFF_TOL * scale
        skip = _EPS * 1e-3 * scale
        rounds = _round_robin_pairs(n)
        for _ in range(_JACOBI_MAX_SWEEPS):
            if _off_norm(a) <= threshold:
                break
            for p, q in rounds:
                a, v = _rotate_pairs(a, v, p, q, skip)
        else:
            if _off_norm(a) > threshold:
                raise NoConvergence(f"Jacobi did not converge in {_JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigen(eigenvalues=w[order], eigenvectors=v[:, order])


def psd_sqrt_and_inverse(d, floor=1e-18, tol=1e-10):
    """Hermitian square root ``L`` of a positive definite ``D`` and its inverse.

    ``L = V diag(sqrt(w)) V^H`` so that ``L @ L == D``.

    Raises
    ------
    NotPositiveDefinite
        If the smallest eigenvalue is below ``floor`` (absolute).
    """
    eig = hermitian_eigendecompose(d, tol=tol)
    w = eig.eigenvalues
    if w[0] < floor:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} below floor {floor:.1e}")
    v = eig.eigenvectors
    root = np.sqrt(w)
    l = (v * root) @ v.conj().T
    l_inv = (v / root) @ v.conj().T
    # Exact Hermitian symmetry keeps downstream quadratic forms real.
    return 0.5 * (l + l.conj().T), 0.5 * (l_inv + l_inv.conj().T)


def solve_shifted(xi, lam, b, floor=1e-18, refine_steps=2):
    """Solve ``(Xi + lam I) x = b`` for Hermitian PSD ``Xi`` and ``lam >= 0``.

    LU with partial pivoting (LAPACK) followed by up to ``refine_steps``
    rounds of iterative refinement.

    Raises
    ------
    SingularSystem
        ``lam == 0`` and the smallest eigenvalue of ``Xi`` is at or below
        ``max(floor, n * eps * lambda_max)``.
    """
    xi = _as_square(xi, "Xi")
    b = np.asarray(b, dtype=complex)
    n = xi.shape[0]
    if b.shape != (n,):
        raise InvalidInput(f"b must have shape ({n},), got {b.shape}")
    if not np.isfinite(lam) or lam < 0.0:
        raise InvalidInput(f"shift must be finite and >= 0, got {lam!r}")

    if lam == 0.0:
        w = hermitian_eigendecompose(xi).eigenvalues
        if w[0] <= max(floor, n * _EPS * abs(w[-1])):
            raise SingularSystem("zero shift on a rank-deficient matrix")

    m = xi + lam * np.eye(n)
    try:
        x = np.linalg.solve(m, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    bnorm = np.linalg.norm(b)
    for _ in range(refine_steps):
        resid = b - m @ x
        if np.linalg.norm(resid) <= 1e-14 * bnorm:
            break
        x = x + np.linalg.solve(m, resid)
    return x


def bisection(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    eps_x: float = 1e-10,
    eps_f: float = 1e-8,
    max_iter: int = 200,
) -> float:
    """Root of a non-increasing function on ``[lo, hi]``.

    Stops as soon as the bracket is narrower than ``eps_x`` or
    ``|f(mid)| < eps_f``. ``f`` may return ``+inf``/``-inf`` at the ends.
    """
    if not hi > lo:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    # An endpoint that already meets eps_f is accepted even if rounding
    # puts it on the wrong side of zero.
    if abs(f_lo) < eps_f:
        return lo
    if abs(f_hi) < eps_f:
        return hi
    if np.isnan(f_lo) or np.isnan(f_hi) or not (f_lo >= 0.0 >= f_hi):
        raise BracketError(f"f(lo)={f_lo:.3e}, f(hi)={f_hi:.3e} do not bracket a root")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if np.isnan(f_mid):
            raise InvalidInput(f"f({mid}) is NaN")
        if abs(f_mid) < eps_f or hi - lo < eps_x:
            return mid
        if f_mid > 0.0:
            lo = mid
        else:
            hi = mid
    raise NoConvergence(f"bisection exceeded {max_iter} iterations, bracket [{lo}, {hi}]")

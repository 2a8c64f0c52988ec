"""Relative entropy of entanglement for two-qubit states.

E(rho) = min over separable sigma of S(rho||sigma). The separable set is
the convex hull of product projectors |a><a| (x) |b><b|, so the minimum is
found by Frank-Wolfe: at each step the gradient of sigma -> -Tr rho ln sigma
is linearized and the best product vertex is picked by an alternating
eigenvector heuristic, then an exact line search moves toward it. The
returned minimizer is an explicit product-state mixture, i.e. itself a
separable decomposition.

The vertex search is nonconvex (bilinear in |a>, |b>), so the duality gap
reported here is a heuristic certificate, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .qstate import (
    DensityMatrix,
    Spectrum,
    _jacobi_sweeps,
    _random_pure,
    hermitian_eig,
    relative_entropy,
)

LN2 = math.log(2.0)
_RANK_CUTOFF = 1e-12
_PHI_CLOSE = 1e-8  # relative eigenvalue gap below which the midpoint rule is used
_LMO_TOL = 1e-12
_LMO_MAX_ALTERNATIONS = 200
_STEP_CAP = 1.0 - 1e-9  # keeps sigma full rank, so ln sigma always exists
_GOLDEN_ITERS = 60
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bell_diagonal_ree(fidelity: float) -> float:
    """Closed-form REE of a Bell-diagonal state with largest eigenvalue F.

    E = ln 2 + F ln F + (1-F) ln(1-F) nats, for F in [1/2, 1]; E(1/2) = 0
    and E(1) = ln 2. A Werner state p|Phi+><Phi+| + (1-p) I/4 has
    F = (1 + 3p)/4.
    """
    f = float(fidelity)
    if not 0.5 <= f <= 1.0:
        raise ValueError("fidelity must lie in [1/2, 1]")
    value = LN2 + f * math.log(f)
    if f < 1.0:
        value += (1.0 - f) * math.log(1.0 - f)
    return value


def _sigma_eig(sigma: np.ndarray) -> Spectrum:
    return hermitian_eig((sigma + sigma.conj().T) / 2.0)


def _gradient_from_spectrum(rho: np.ndarray, spec: Spectrum) -> np.ndarray:
    """Frechet derivative of sigma -> -Tr rho ln sigma at the given spectrum.

    Daleckii-Krein divided differences in sigma's eigenbasis:
    G_ij = -rho~_ij * phi(l_i, l_j), phi(a, b) = (ln a - ln b)/(a - b)
    with phi(a, a) = 1/a; rho~ is rho rotated into the eigenbasis.
    """
    lam = np.clip(spec.eigenvalues, 1e-300, None)
    v = spec.basis
    rho_rot = v.conj().T @ rho @ v
    la = lam[:, None]
    lb = lam[None, :]
    diff = la - lb
    close = np.abs(diff) <= _PHI_CLOSE * np.maximum(la, lb)
    log_diff = np.log(la) - np.log(lb)
    phi = np.where(close, 2.0 / (la + lb), log_diff / np.where(close, 1.0, diff))
    grad = v @ (-rho_rot * phi) @ v.conj().T
    return (grad + grad.conj().T) / 2.0


def ree_gradient(rho, sigma) -> np.ndarray:
    """Gradient of sigma -> -Tr rho ln sigma; sigma must be full rank."""
    rho_mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    sigma_mat = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    spec = _sigma_eig(sigma_mat)
    if float(spec.eigenvalues[0]) <= _RANK_CUTOFF:
        raise ValueError("sigma is rank deficient; the gradient needs ln(sigma)")
    return _gradient_from_spectrum(rho_mat, spec)


class ProductVertex(NamedTuple):
    """Product projector |a><a| (x) |b><b| and its value Tr[omega G]."""

    a: np.ndarray
    b: np.ndarray
    value: float

    @property
    def omega(self) -> np.ndarray:
        pa = np.outer(self.a, self.a.conj())
        pb = np.outer(self.b, self.b.conj())
        return np.kron(pa, pb)


def _min_eigvec_2x2_inline(m00, m01, m11):
    """Closed-form minimum eigenpair of [[m00, m01], [conj(m01), m11]]."""
    half_gap = 0.5 * (m00 - m11)
    mag2 = m01.real * m01.real + m01.imag * m01.imag
    disc = math.sqrt(half_gap * half_gap + mag2)
    lam = 0.5 * (m00 + m11) - disc
    v0 = m01
    v1 = complex(lam - m00, 0.0)
    norm = math.sqrt(v0.real * v0.real + v0.imag * v0.imag + v1.real * v1.real)
    if norm < 1e-300:
        if m00 <= m11:
            return 1.0 + 0.0j, 0.0j, lam
        return 0.0j, 1.0 + 0.0j, lam
    return v0 / norm, v1 / norm, lam


def _alternate(g: np.ndarray, b0: np.ndarray, max_alt: int, tol: float):
    """Alternating eigenvector descent from one initial |b>; returns a, b, value."""
    b = b0.copy()
    a = np.zeros(2, dtype=np.complex128)
    prev = math.inf
    value = prev
    for _ in range(max_alt):
        # 2x2 compression over the second qubit: (I (x) <b|) G (I (x) |b>)
        m00 = 0.0
        m11 = 0.0
        m01 = 0.0j
        for k in range(2):
            bk = b[k].conjugate()
            for l in range(2):
                bl = b[l]
                m00 += (bk * g[k, l] * bl).real
                m11 += (bk * g[2 + k, 2 + l] * bl).real
                m01 += bk * g[k, 2 + l] * bl
        a0, a1, _ = _min_eigvec_2x2_inline(m00, m01, m11)
        a[0] = a0
        a[1] = a1
        # compression over the first qubit: (<a| (x) I) G (|a> (x) I)
        m00 = 0.0
        m11 = 0.0
        m01 = 0.0j
        for i in range(2):
            ai = a[i].conjugate()
            for j in range(2):
                aj = a[j]
                m00 += (ai * g[2 * i, 2 * j] * aj).real
                m11 += (ai * g[2 * i + 1, 2 * j + 1] * aj).real
                m01 += ai * g[2 * i, 2 * j + 1] * aj
        b0_, b1_, value = _min_eigvec_2x2_inline(m00, m01, m11)
        b[0] = b0_
        b[1] = b1_
        if prev - value < tol:
            break
        prev = value
    return a, b, value


try:
    from numba import njit as _njit_ree

    _min_eigvec_2x2_inline = _njit_ree(cache=True)(_min_eigvec_2x2_inline)
    _alternate = _njit_ree(cache=True)(_alternate)
except ImportError:  # pragma: no cover
    pass


def _lmo(g: np.ndarray, restarts: int, rng: np.random.Generator) -> ProductVertex:
    best: Optional[ProductVertex] = None
    for _ in range(restarts):
        b0 = _random_pure(rng, 2)
        a, b, value = _alternate(g, b0, _LMO_MAX_ALTERNATIONS, _LMO_TOL)
        # ties keep the earlier restart, making the search order part of the seed
        if best is None or value < best.value:
            best = ProductVertex(a=a, b=b, value=float(value))
    return best


def product_lmo(g: np.ndarray, restarts: int = 16, seed: int = 0) -> ProductVertex:
    """Approximate minimizer of Tr[omega G] over product projectors omega.

    Alternates between the two qubits: with one side fixed the optimum is
    the minimum eigenvector of a 2x2 compression of G. Best of `restarts`
    random initializations; deterministic per seed.
    """
    g = np.ascontiguousarray(g, dtype=np.complex128)
    if g.shape != (4, 4):
        raise ValueError("G must be 4x4")
    if np.max(np.abs(g - g.conj().T)) > 1e-8:
        raise ValueError("G must be Hermitian")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    return _lmo(g, restarts, np.random.default_rng(seed))


@dataclass(frozen=True, eq=False)
class ReeResult:
    """Solver output: the value, an explicit separable minimizer, and the
    final linearization gap (heuristic certificate)."""

    value: float
    sigma_star: DensityMatrix
    gap: float
    iterations: int
    converged: bool
    mixture: Tuple[Tuple[float, np.ndarray, np.ndarray], ...]
    values: Tuple[float, ...]  # objective after each accepted step


def _objective(tr_rho_ln_rho: float, rho: np.ndarray, spec: Spectrum) -> float:
    lam = np.clip(spec.eigenvalues, 1e-300, None)
    weights = np.einsum("ji,jk,ki->i", spec.basis.conj(), rho, spec.basis).real
    return tr_rho_ln_rho - float(weights @ np.log(lam))


def _segment_objective(sigma, direction, eps, rho, tr_rho_ln_rho, max_sweeps):
    """-Tr rho ln(sigma + eps*direction) + Tr rho ln rho, by inline Jacobi."""
    d = sigma.shape[0]
    a = np.empty((d, d), dtype=np.complex128)
    v = np.zeros((d, d), dtype=np.complex128)
    norm2 = 0.0
    for i in range(d):
        v[i, i] = 1.0 + 0.0j
        for j in range(d):
            x = sigma[i, j] + eps * direction[i, j]
            y = sigma[j, i] + eps * direction[j, i]
            x = 0.5 * (x + y.conjugate())
            a[i, j] = x
            norm2 += x.real * x.real + x.imag * x.imag
    if norm2 == 0.0:
        return tr_rho_ln_rho - d * math.log(1e-300)
    conv = 1e-12 * math.sqrt(norm2)
    status = _jacobi_sweeps(a, v, conv, conv / (2.0 * d), max_sweeps)
    if status < 0:
        return math.inf
    total = tr_rho_ln_rho
    for i in range(d):
        w = 0.0
        for j in range(d):
            vji = v[j, i]
            acc = 0.0j
            for k in range(d):
                acc += rho[j, k] * v[k, i]
            w += (vji.conjugate() * acc).real
        lam = a[i, i].real
        if lam < 1e-300:
            lam = 1e-300
        total -= w * math.log(lam)
    return total


try:
    from numba import njit as _njit_obj

    _segment_objective = _njit_obj(cache=True)(_segment_objective)
except ImportError:  # pragma: no cover
    pass


def _golden_section(f, lo: float, hi: float, iters: int) -> Tuple[float, float]:
    """Golden-section minimum of a unimodal f on [lo, hi]; returns (x, f(x))."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        if f1 < best_f:
            best_x, best_f = x1, f1
        if f2 < best_f:
            best_x, best_f = x2, f2
    return best_x, best_f


def ree(
    rho: DensityMatrix,
    tol: float = 1e-6,
    max_iters: int = 500,
    restarts: int = 16,
    seed: int = 0,
) -> ReeResult:
    """Relative entropy of entanglement of a two-qubit state, in nats.

    Frank-Wolfe over the separable set starting from I/4. Each iteration
    linearizes the objective, asks the product-vertex search for the best
    direction, and takes an exact (golden-section) line-search step capped
    below 1 so sigma stays full rank. Stops when the linearization gap
    drops below tol or after max_iters steps.
    """
    if rho.dims != (2, 2):
        raise ValueError(f"expected dims (2, 2), got {rho.dims}")
    rho_mat = rho.matrix
    rho_eigs = hermitian_eig(rho_mat).eigenvalues
    tr_rho_ln_rho = sum(
        float(lam) * math.log(float(lam)) for lam in rho_eigs if lam > _RANK_CUTOFF
    )

    rng = np.random.default_rng(seed)
    basis = np.eye(4, dtype=np.complex128)
    qubit = np.eye(2, dtype=np.complex128)
    # I/4 written out as the four computational product projectors
    mixture = [
        (0.25, qubit[:, i].copy(), qubit[:, j].copy()) for i in (0, 1) for j in (0, 1)
    ]
    sigma = basis / 4.0

    spec = _sigma_eig(sigma)
    value = _objective(tr_rho_ln_rho, rho_mat, spec)
    values = [value]
    gap = math.inf
    converged = False
    iterations = 0

    for _ in range(max_iters):
        grad = _gradient_from_spectrum(rho_mat, spec)
        vertex = _lmo(grad, restarts, rng)
        omega = vertex.omega
        gap = float(np.trace((sigma - omega) @ grad).real)
        if gap < tol:
            converged = True
            break

        direction = np.ascontiguousarray(omega - sigma)

        def line_value(eps: float) -> float:
            return _segment_objective(
                sigma, direction, eps, rho_mat, tr_rho_ln_rho, 100
            )

        eps, new_value = _golden_section(line_value, 0.0, _STEP_CAP, _GOLDEN_ITERS)
        if new_value > value + 1e-12:
            # exact line search cannot go uphill; hitting this means the
            # step is below numerical resolution, so stop here
            break
        sigma = sigma + eps * direction
        mixture = [(w * (1.0 - eps), a, b) for w, a, b in mixture]
        mixture.append((eps, vertex.a, vertex.b))
        spec = _sigma_eig(sigma)
        value = min(value, new_value)
        values.append(value)
        iterations += 1

    sigma_star = DensityMatrix(sigma, (2, 2))
    final_value = relative_entropy(rho, sigma_star)
    return ReeResult(
        value=final_value,
        sigma_star=sigma_star,
        gap=gap,
        iterations=iterations,
        converged=converged,
        mixture=tuple(mixture),
        values=tuple(values),
    )

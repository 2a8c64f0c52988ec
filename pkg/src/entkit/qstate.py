"""Dense complex linear algebra for few-qubit density matrices.

Everything is desk scale (at most 8 qubits, d <= 256) and value semantics:
matrices are copied in and frozen, operations are pure functions. The
eigensolver is a cyclic complex Jacobi iteration, chosen because at these
sizes it is simple, accurate, and easy to reason about end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9
SUPPORT_CUTOFF = 1e-12  # eigenvalues below this are treated as zero weight
RHO_WEIGHT_TOL = 1e-10  # rho mass on a null sigma direction that forces +inf
MAX_DIM = 256


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; tensor-factor dimensions concatenate."""
    return np.kron(np.asarray(a), np.asarray(b))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues ascending; basis columns are the matching eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray


def _jacobi_sweeps(a, v, conv, skip, max_sweeps):
    """Cyclic complex Jacobi sweeps, in place on a (Hermitian) and v.

    Rotates each upper off-diagonal element above the skip threshold until
    the off-diagonal Frobenius norm drops below conv. Returns the sweep
    count on convergence, -1 on hitting max_sweeps. Written with plain
    loops so the JIT below can compile it; runs unjitted as a fallback.
    """
    d = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                x = a[p, q]
                off += 2.0 * (x.real * x.real + x.imag * x.imag)
        if off**0.5 < conv:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                u = apq / mag  # phase making the pivot real
                uc = u.conjugate()
                theta = 0.5 * math.atan2(2.0 * mag, a[p, p].real - a[q, q].real)
                c = math.cos(theta)
                s = math.sin(theta)
                su = s * u
                suc = s * uc
                cu = c * u
                cuc = c * uc
                for i in range(d):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip + suc * aiq
                    a[i, q] = -s * aip + cuc * aiq
                for j in range(d):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = c * apj + su * aqj
                    a[q, j] = -s * apj + cu * aqj
                a[p, p] = a[p, p].real + 0.0j
                a[q, q] = a[q, q].real + 0.0j
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(d):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip + suc * viq
                    v[i, q] = -s * vip + cuc * viq
    return -1


try:  # compiled kernel; the pure-Python sweep is the fallback
    from numba import njit as _njit

    _jacobi_sweeps = _njit(
        "int64(complex128[:, ::1], complex128[:, ::1], float64, float64, int64)",
        cache=True,
    )(_jacobi_sweeps)
except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
    pass


def hermitian_eig(h, max_sweeps: int = 100) -> Spectrum:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm drops below
    1e-12 * ||H||_F, up to max_sweeps. Raises ValueError for non-Hermitian
    input and RuntimeError if the sweep cap is hit.
    """
    if isinstance(h, DensityMatrix):
        h = h.matrix
    a = np.array(h, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    d = a.shape[0]
    if np.max(np.abs(a - a.conj().T)) > 1e-8:
        raise ValueError("matrix is not Hermitian within 1e-8")
    a = np.ascontiguousarray((a + a.conj().T) / 2.0)

    norm = float(np.linalg.norm(a))
    v = np.eye(d, dtype=np.complex128)
    if d == 1 or norm == 0.0:
        return Spectrum(eigenvalues=a.real.diagonal().copy(), basis=v)

    conv = 1e-12 * norm
    status = _jacobi_sweeps(a, v, conv, conv / (2.0 * d), max_sweeps)
    if status < 0:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")

    eigenvalues = a.real.diagonal().copy()
    order = np.argsort(eigenvalues, kind="stable")
    return Spectrum(eigenvalues=eigenvalues[order], basis=v[:, order])


class DensityMatrix:
    """Hermitian, PSD (to tolerance), trace-one matrix over tensor factors.

    dims lists the per-party dimensions; entries are validated on
    construction and the stored array is frozen.
    """

    __slots__ = ("dims", "matrix")

    def __init__(self, matrix, dims: Sequence[int]):
        mat = np.array(matrix, dtype=np.complex128)
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("dims must be positive")
        d = 1
        for dim in dims:
            d *= dim
        if d > MAX_DIM:
            raise ValueError(f"total dimension {d} exceeds supported {MAX_DIM}")
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-10")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {trace} is not 1 within 1e-10")
        min_eig = float(hermitian_eig(mat).eigenvalues[0])
        if min_eig < PSD_TOL:
            raise ValueError(f"matrix has eigenvalue {min_eig} < -1e-9")
        mat.flags.writeable = False
        self.dims = dims
        self.matrix = mat

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "DensityMatrix":
        try:
            dims = payload["dims"]
            re = np.array(payload["re"], dtype=float)
            im = np.array(payload["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed density-matrix payload: {exc}") from None
        if re.shape != im.shape:
            raise ValueError("re and im shapes differ")
        return cls(re + 1j * im, dims)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims}, d={self.d})"


def pure_state(vec, dims: Sequence[int]) -> DensityMatrix:
    """Projector onto a (normalized) state vector."""
    v = np.asarray(vec, dtype=np.complex128)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector")
    v = v / norm
    return DensityMatrix(np.outer(v, v.conj()), dims)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    dims = tuple(int(d) for d in dims)
    d = 1
    for dim in dims:
        d *= dim
    return DensityMatrix(np.eye(d) / d, dims)


def bell_vector() -> np.ndarray:
    """(|00> + |11>)/sqrt(2)."""
    return np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / math.sqrt(2.0)


def bell_pair() -> DensityMatrix:
    return pure_state(bell_vector(), (2, 2))


def werner(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1-p) I/4; separable exactly for p <= 1/3."""
    mat = p * np.outer(bell_vector(), bell_vector().conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(mat, (2, 2))


def ghz(n: int = 3) -> DensityMatrix:
    """(|0...0> + |1...1>)/sqrt(2) projector on n qubits."""
    if n < 2:
        raise ValueError("GHZ needs at least 2 qubits")
    vec = np.zeros(2**n, dtype=np.complex128)
    vec[0] = vec[-1] = 1.0 / math.sqrt(2.0)
    return pure_state(vec, (2,) * n)


def _check_parties(indices: Iterable[int], n: int) -> tuple:
    parties = tuple(sorted(set(int(i) for i in indices)))
    if any(i < 0 or i >= n for i in parties):
        raise ValueError(f"party indices must lie in 0..{n - 1}")
    return parties


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every party not in keep; preserves trace and positivity."""
    n = rho.n_parties
    kept = _check_parties(keep, n)
    if not kept:
        raise ValueError("keep must be nonempty")
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    row_ids = list(range(n))
    col_ids = [i if i not in kept else n + i for i in range(n)]
    out_ids = [i for i in kept] + [n + i for i in kept]
    reduced = np.einsum(tensor, row_ids + col_ids, out_ids)
    kept_dims = tuple(rho.dims[i] for i in kept)
    d = 1
    for dim in kept_dims:
        d *= dim
    return DensityMatrix(reduced.reshape(d, d), kept_dims)


def partial_transpose(rho: DensityMatrix, subset: Iterable[int]) -> np.ndarray:
    """Transpose the tensor indices of the chosen parties only."""
    n = rho.n_parties
    parties = _check_parties(subset, n)
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    axes = list(range(2 * n))
    for i in parties:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return np.ascontiguousarray(tensor.transpose(axes).reshape(rho.d, rho.d))


def permute_parties(mat: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a matrix whose current factor i is party order[i]."""
    n = len(dims)
    slot_of_party = [0] * n
    for slot, party in enumerate(order):
        slot_of_party[party] = slot
    current_dims = tuple(dims[p] for p in order)
    tensor = mat.reshape(current_dims + current_dims)
    axes = [slot_of_party[p] for p in range(n)]
    axes += [n + slot_of_party[p] for p in range(n)]
    d = mat.shape[0]
    return np.ascontiguousarray(tensor.transpose(axes).reshape(d, d))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lambda ln lambda in nats, with 0 ln 0 = 0."""
    eigs = hermitian_eig(rho.matrix).eigenvalues
    total = 0.0
    for lam in eigs:
        if lam > SUPPORT_CUTOFF:
            total -= lam * math.log(lam)
    return total


def _trace_log_weights(spectrum: Spectrum, rho_mat: np.ndarray) -> np.ndarray:
    """<v_j| rho |v_j> for each eigenvector of the spectrum, as reals."""
    v = spectrum.basis
    return np.einsum("ji,jk,ki->i", v.conj(), rho_mat, v).real


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho||sigma) = Tr rho ln rho - Tr rho ln sigma, in nats.

    Returns math.inf when rho carries weight outside sigma's support.
    """
    if rho.dims != sigma.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    rho_eigs = hermitian_eig(rho.matrix).eigenvalues
    tr_rho_ln_rho = sum(
        lam * math.log(lam) for lam in rho_eigs if lam > SUPPORT_CUTOFF
    )
    sigma_spec = hermitian_eig(sigma.matrix)
    weights = _trace_log_weights(sigma_spec, rho.matrix)
    tr_rho_ln_sigma = 0.0
    for lam, w in zip(sigma_spec.eigenvalues, weights):
        if lam < SUPPORT_CUTOFF:
            if w > RHO_WEIGHT_TOL:
                return math.inf
        elif w > 0.0:
            tr_rho_ln_sigma += w * math.log(lam)
    return tr_rho_ln_rho - tr_rho_ln_sigma


def _random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_pure(dim: int, seed: int) -> np.ndarray:
    """Haar-ish random unit vector, deterministic per seed."""
    if dim < 1:
        raise ValueError("dim must be positive")
    return _random_pure(np.random.default_rng(seed), dim)


def _block_cut_purities(vec: np.ndarray, k: int):
    """Reduced-state purity for every bipartition of a k-qubit pure state."""
    tensor = vec.reshape((2,) * k)
    # subsets containing qubit 0 (complements are redundant), full set excluded
    for mask in range(2 ** (k - 1) - 1):
        side = [0] + [i for i in range(1, k) if mask & (1 << (i - 1))]
        rest = [i for i in range(1, k) if not mask & (1 << (i - 1))]
        m = tensor.transpose(side + rest).reshape(2 ** len(side), 2 ** len(rest))
        reduced = m @ m.conj().T
        yield float(np.sum(np.abs(reduced) ** 2))


_ENTANGLED_PURITY_CAP = 1.0 - 1e-6
_RESAMPLE_CAP = 1000


def _random_entangled_block(rng: np.random.Generator, k: int) -> np.ndarray:
    for _ in range(_RESAMPLE_CAP):
        vec = _random_pure(rng, 2**k)
        if all(p < _ENTANGLED_PURITY_CAP for p in _block_cut_purities(vec, k)):
            return vec
    raise RuntimeError(f"no entangled {k}-qubit state in {_RESAMPLE_CAP} draws")


def random_entangled_block(k: int, seed: int) -> np.ndarray:
    """Random k-qubit pure state entangled across every internal cut.

    Rejection-samples until each bipartition's reduced purity is below
    1 - 1e-6; the cap of 1000 draws is never reached in practice.
    """
    if k < 2:
        raise ValueError("an entangled block needs at least 2 parties")
    return _random_entangled_block(np.random.default_rng(seed), k)

"""Separability witnesses and decomposition-term state sampling.

PPT across a cut is a necessary condition for separability across that
cut, so a negative partial transpose certifies entanglement. For two
qubits PPT is also sufficient (Peres/Horodecki), which makes the
two-qubit membership question exactly decidable; for three or more
parties only the per-cut necessary conditions are offered.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .partitions import PartitionTerm
from .qstate import (
    DensityMatrix,
    _random_entangled_block,
    _random_pure,
    hermitian_eig,
    kron,
    partial_transpose,
    permute_parties,
)

NPT_THRESHOLD = -1e-9  # matches the PSD tolerance of DensityMatrix
MAX_SAMPLED_PARTIES = 8


@dataclass(frozen=True)
class PptVerdict:
    """Minimum partial-transpose eigenvalue across one cut."""

    cut: Tuple[int, ...]
    min_pt_eigenvalue: float
    verdict: str  # "PPT" | "NPT"

    def to_json_dict(self) -> dict:
        return {
            "cut": list(self.cut),
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "verdict": self.verdict,
        }


def ppt(rho: DensityMatrix, cut: Iterable[int]) -> PptVerdict:
    """Partial-transpose test across the given cut.

    NPT (min eigenvalue < -1e-9) certifies entanglement across the cut.
    The cut must be a nonempty proper subset of the parties.
    """
    parties = tuple(sorted(set(int(i) for i in cut)))
    n = rho.n_parties
    if not parties or len(parties) >= n:
        raise ValueError("cut must be a nonempty proper subset of the parties")
    if any(i < 0 or i >= n for i in parties):
        raise ValueError(f"cut indices must lie in 0..{n - 1}")
    pt = partial_transpose(rho, parties)
    min_eig = float(hermitian_eig(pt).eigenvalues[0])
    verdict = "NPT" if min_eig < NPT_THRESHOLD else "PPT"
    return PptVerdict(cut=parties, min_pt_eigenvalue=min_eig, verdict=verdict)


def two_qubit_entangled(rho: DensityMatrix) -> bool:
    """Exact two-qubit entanglement decision (PPT is sufficient at 2x2)."""
    if rho.dims != (2, 2):
        raise ValueError(f"expected dims (2, 2), got {rho.dims}")
    return ppt(rho, (1,)).verdict == "NPT"


_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_Y, _Y)


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1].

    C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) with l the
    descending eigenvalues of rho (Y@Y) rho* (Y@Y). Those eigenvalues are
    computed Hermitianly as the spectrum of sqrt(rho) rho~ sqrt(rho).
    """
    if rho.dims != (2, 2):
        raise ValueError(f"expected dims (2, 2), got {rho.dims}")
    mat = rho.matrix
    rho_tilde = _YY @ mat.conj() @ _YY
    spec = hermitian_eig(mat)
    root = spec.basis @ np.diag(np.sqrt(np.clip(spec.eigenvalues, 0.0, None)))
    root = root @ spec.basis.conj().T
    lam = hermitian_eig(root @ rho_tilde @ root).eigenvalues
    lam = np.sqrt(np.clip(lam, 0.0, None))  # ascending
    return max(0.0, float(lam[3] - lam[2] - lam[1] - lam[0]))


@dataclass(frozen=True, eq=False)
class Component:
    """One mixture component: a weight and one pure state per block."""

    weight: float
    block_states: Tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class TermEnsemble:
    """Weighted mixture of block-product states realizing one term."""

    term: PartitionTerm
    components: Tuple[Component, ...]
    n: int

    def to_json_dict(self) -> dict:
        return {
            "term": self.term.to_json_dict(),
            "components": [
                {
                    "weight": c.weight,
                    "blocks": [
                        {
                            "parties": list(block),
                            "re": state.real.tolist(),
                            "im": state.imag.tolist(),
                        }
                        for block, state in zip(self.term.blocks, c.block_states)
                    ],
                }
                for c in self.components
            ],
        }


def cut_splits_term(cut: Iterable[int], term: PartitionTerm) -> bool:
    """True when the cut separates two parties of some entangled block."""
    cut_set = set(cut)
    for block in term.blocks:
        if len(block) < 2:
            continue
        inside = sum(1 for p in block if p in cut_set)
        if 0 < inside < len(block):
            return True
    return False


def sample_term_state(
    term: PartitionTerm, components: int, seed: int
) -> Tuple[DensityMatrix, TermEnsemble]:
    """Random mixture of block-product pure states for one term.

    Weights are normalized i.i.d. uniforms; singleton blocks get random
    pure qubits, larger blocks entangled pure states. Deterministic per
    seed. Any cut that does not split an entangled block leaves the
    result PPT; splitting cuts may or may not show NPT after mixing.
    """
    n = term.n
    if n > MAX_SAMPLED_PARTIES:
        raise ValueError(f"sampling supports at most {MAX_SAMPLED_PARTIES} parties")
    if components < 1:
        raise ValueError("components must be >= 1")
    rng = np.random.default_rng(seed)
    weights = rng.random(components)
    while not np.all(weights > 0.0):  # pragma: no cover - measure-zero event
        weights = rng.random(components)
    weights = weights / weights.sum()

    blocks = term.blocks
    party_order = [p for block in blocks for p in block]
    dims = (2,) * n
    total = np.zeros((2**n, 2**n), dtype=np.complex128)
    comps = []
    for w in weights:
        states = []
        mat = np.ones((1, 1), dtype=np.complex128)
        for block in blocks:
            if len(block) == 1:
                vec = _random_pure(rng, 2)
            else:
                vec = _random_entangled_block(rng, len(block))
            states.append(vec)
            mat = kron(mat, np.outer(vec, vec.conj()))
        total += w * permute_parties(mat, dims, party_order)
        comps.append(Component(weight=float(w), block_states=tuple(states)))
    rho = DensityMatrix(total, dims)
    return rho, TermEnsemble(term=term, components=tuple(comps), n=n)


def classify_tripartite(rho: DensityMatrix):
    """PPT verdicts across the three single-party cuts of a 3-qubit state.

    NPT on a cut rules out every decomposition term that keeps the cut
    party unentangled from the rest; it does not decide full membership.
    """
    if rho.dims != (2, 2, 2):
        raise ValueError(f"expected dims (2, 2, 2), got {rho.dims}")
    return tuple(ppt(rho, (i,)) for i in range(3))

"""Classical analogue of the continuous correction scheme: three-bit repetition
code under continuous single-bit-flip noise, corrected by a majority-vote
intensity term.  Column convention: probability vectors are columns, stochastic
matrices have columns summing to 1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .qec import f_closed_form


@dataclass(frozen=True)
class ClassicalChain:
    """Column-stochastic transition matrix or intensity (rate) matrix."""

    matrix: np.ndarray
    kind: str  # "stochastic" | "intensity"

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("chain matrix must be square")
        cols = m.sum(axis=0)
        if self.kind == "stochastic":
            if m.min() < 0 or np.max(np.abs(cols - 1)) > 1e-12:
                raise ValueError("columns of a stochastic matrix must be distributions")
        elif self.kind == "intensity":
            off = m - np.diag(np.diag(m))
            if off.min() < 0 or np.max(np.abs(cols)) > 1e-12:
                raise ValueError("intensity matrix needs zero column sums, nonneg off-diagonals")
        else:
            raise ValueError("kind must be 'stochastic' or 'intensity'")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _majority(bits: tuple[int, int, int]) -> int:
    return 1 if sum(bits) >= 2 else 0


def _index(bits: tuple[int, ...]) -> int:
    idx = 0
    for b in bits:
        idx = 2 * idx + b
    return idx


def classical_repetition() -> tuple[np.ndarray, np.ndarray, ClassicalChain]:
    """Encoder V (8x2, 0/1), majority-vote recovery R (8x8 stochastic) and the
    single-bit-flip intensity matrix L = T_sum - 3 I with T the bit flip."""
    v = np.zeros((8, 2), dtype=np.int64)
    v[_index((0, 0, 0)), 0] = 1
    v[_index((1, 1, 1)), 1] = 1

    r = np.zeros((8, 8), dtype=np.int64)
    for b0 in (0, 1):
        for b1 in (0, 1):
            for b2 in (0, 1):
                bits = (b0, b1, b2)
                maj = _majority(bits)
                r[_index((maj, maj, maj)), _index(bits)] = 1

    t_sum = np.zeros((8, 8), dtype=np.int64)
    for b0 in (0, 1):
        for b1 in (0, 1):
            for b2 in (0, 1):
                bits = (b0, b1, b2)
                for site in range(3):
                    flipped = list(bits)
                    flipped[site] ^= 1
                    t_sum[_index(tuple(flipped)), _index(bits)] += 1
    intensity = ClassicalChain((t_sum - 3 * np.eye(8, dtype=np.int64)).astype(float),
                               "intensity")
    return v, r, intensity


def bit_flip_local_sum() -> np.ndarray:
    """T_sum = sum_i flip at site i (integer matrix, columns sum to 3)."""
    _, _, chain = classical_repetition()
    return chain.matrix + 3 * np.eye(8)


def classical_alpha_check(t: float, r: float,
                          slack: float = 1e-9) -> tuple[float, float, bool]:
    """(tv_distance, f-bound, pass) for the repetition code under continuous
    majority-vote correction at rate r; pass iff tv <= 1 - f(3t, r/3) + slack."""
    if t < 0 or r < 0:
        raise ValueError("t and r must be nonnegative")
    v, rec, chain = classical_repetition()
    total = chain.matrix + r * (rec - np.eye(8))
    evolved = rec @ scipy.linalg.expm(t * total) @ v.astype(float)
    tv = 0.0
    for c in range(2):
        tv = max(tv, 0.5 * float(np.abs(evolved[:, c] - v[:, c]).sum()))
    f_bound = f_closed_form(3 * t, r / 3)
    return tv, f_bound, bool(tv <= 1 - f_bound + slack)

"""Liouvillian generators, semigroup channels e^{tL}, local sums acting on m
copies, piecewise-constant time-dependent evolution and structural predicates.

The vectorization convention is column-stacking, so

    superop(L) = -i (I ⊗ H - H^T ⊗ I)
                 + sum_k [ conj(A_k) ⊗ A_k - 1/2 I ⊗ (A_k^dag A_k)
                                           - 1/2 (A_k^dag A_k)^T ⊗ I ].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channels import QuantumChannel, _mat_from_json, _mat_to_json
from .linalg import dag, embed_op, is_hermitian, expm as _expm, vec, unvec

LOCAL_SUM_DIM_CAP = 32


class LindbladError(ValueError):
    pass


def _lindblad_superop(d: int, h: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    eye = np.eye(d, dtype=complex)
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for a in ops:
        adag_a = dag(a) @ a
        sup += np.kron(a.conj(), a)
        sup -= 0.5 * np.kron(eye, adag_a)
        sup -= 0.5 * np.kron(adag_a.T, eye)
    return sup


@dataclass(frozen=True)
class Liouvillian:
    """Generator (H, {A_k}) of a quantum dynamical semigroup."""

    d: int
    hamiltonian: np.ndarray
    lindblad_ops: tuple[np.ndarray, ...]
    superop: np.ndarray = field(repr=False)

    @staticmethod
    def build(h: np.ndarray | None, lindblad_ops: list[np.ndarray],
              d: int | None = None) -> "Liouvillian":
        if h is None:
            if d is None:
                if not lindblad_ops:
                    raise LindbladError("dimension undetermined")
                d = lindblad_ops[0].shape[0]
            h = np.zeros((d, d), dtype=complex)
        h = np.asarray(h, dtype=complex)
        d = h.shape[0]
        if not is_hermitian(h, 1e-9):
            raise LindbladError("Hamiltonian must be Hermitian within 1e-9")
        ops = tuple(np.asarray(a, dtype=complex) for a in lindblad_ops)
        for a in ops:
            if a.shape != (d, d):
                raise LindbladError("Lindblad operator dimension mismatch")
        return Liouvillian(d, h, ops, _lindblad_superop(d, h, list(ops)))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        if rho.shape != (self.d, self.d):
            raise LindbladError("state dimension mismatch")
        return unvec(self.superop @ vec(rho), self.d)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.apply(rho)


def build(h: np.ndarray | None, lindblad_ops: list[np.ndarray],
          d: int | None = None) -> Liouvillian:
    return Liouvillian.build(h, lindblad_ops, d)


def zero_liouvillian(d: int) -> Liouvillian:
    return Liouvillian.build(np.zeros((d, d), dtype=complex), [])


def from_channel(t: QuantumChannel, rate: float = 1.0) -> Liouvillian:
    """L = rate * (T - id); the scaled Kraus operators of T serve as jump operators."""
    if t.d_in != t.d_out:
        raise LindbladError("generator requires a square channel")
    if rate < 0:
        raise LindbladError("rate must be nonnegative")
    ops = [np.sqrt(rate) * k for k in t.kraus]
    return Liouvillian.build(None, ops, d=t.d_in)


def depolarizing_liouvillian(r: float, rho0: np.ndarray) -> Liouvillian:
    """L(rho) = r (tr(rho) rho0 - rho); e^{tL}(rho) = (1-e^{-rt}) tr(rho) rho0 + e^{-rt} rho."""
    if r < 0:
        raise LindbladError("rate must be nonnegative")
    d = rho0.shape[0]
    # jump operators sqrt(r) |v_i sqrt(p_i)><j|: A_{ij} = sqrt(r p_i) |v_i><j|
    w, u = np.linalg.eigh((rho0 + dag(rho0)) / 2)
    ops = []
    for i in range(d):
        p = max(w[i], 0.0)
        if p == 0.0:
            continue
        for j in range(d):
            a = np.sqrt(r * p) * np.outer(u[:, i], np.eye(d)[j].conj())
            ops.append(a)
    return Liouvillian.build(None, ops, d=d)


def generator_exponential(superop: np.ndarray, t: float,
                          norm_budget: float = 1e3) -> np.ndarray:
    """e^{t S} for a generator superoperator, split by the semigroup law.

    The time interval is halved until each piece respects the matrix
    exponential's norm cap, then the pieces are squared back together; exact
    for semigroups and keeps strong coding rates (norm ~ r) computable.
    """
    if t == 0:
        return np.eye(superop.shape[0], dtype=complex)
    norm = float(np.linalg.norm(t * superop))
    k = 0
    while norm > norm_budget and k < 60:
        norm /= 2
        k += 1
    out = _expm((t / 2**k) * superop)
    for _ in range(k):
        out = out @ out
    return out


def semigroup_channel(lv: Liouvillian, t: float, validate: bool = True) -> QuantumChannel:
    """e^{tL} as a quantum channel."""
    if t < 0:
        raise LindbladError("time must be nonnegative")
    sup = generator_exponential(lv.superop, t)
    return QuantumChannel.from_superop(sup, lv.d, lv.d, validate=validate)


def local_sum(lv: Liouvillian, m: int) -> Liouvillian:
    """L^{⊕m} = sum_i id ⊗ ... ⊗ L ⊗ ... ⊗ id on m copies.

    Realized by embedding H and every jump operator at each site, which keeps
    the Lindblad form exact; materializes a d^{2m} x d^{2m} superoperator and is
    therefore capped at d^m <= 32.
    """
    if m < 1:
        raise LindbladError("m must be >= 1")
    if lv.d**m > LOCAL_SUM_DIM_CAP:
        raise LindbladError(f"local_sum dimension d^m = {lv.d ** m} exceeds cap {LOCAL_SUM_DIM_CAP}")
    if m == 1:
        return lv
    h = sum(embed_op(lv.hamiltonian, i, m, lv.d) for i in range(m))
    ops = [embed_op(a, i, m, lv.d) for i in range(m) for a in lv.lindblad_ops]
    return Liouvillian.build(h, ops, d=lv.d**m)


@dataclass(frozen=True)
class PiecewiseLiouvillian:
    """Ordered piecewise-constant segments (duration, generator)."""

    segments: tuple[tuple[float, Liouvillian], ...]

    def __post_init__(self):
        if not self.segments:
            raise LindbladError("at least one segment required")
        d = self.segments[0][1].d
        for dur, lv in self.segments:
            if dur < 0:
                raise LindbladError("segment durations must be nonnegative")
            if lv.d != d:
                raise LindbladError("all segments must share one dimension")

    @staticmethod
    def from_list(segments: list[tuple[float, Liouvillian]]) -> "PiecewiseLiouvillian":
        return PiecewiseLiouvillian(tuple(segments))


def evolve_piecewise(p: PiecewiseLiouvillian, validate: bool = True) -> QuantumChannel:
    """Time-ordered product of segment exponentials (later segments act on the left)."""
    d = p.segments[0][1].d
    sup = np.eye(d * d, dtype=complex)
    for dur, lv in p.segments:
        sup = generator_exponential(lv.superop, dur) @ sup
    return QuantumChannel.from_superop(sup, d, d, validate=validate)


def is_purely_dissipative(lv: Liouvillian, tol: float = 1e-9) -> bool:
    """True iff the stored representation has H = 0 and traceless jump operators."""
    if np.max(np.abs(lv.hamiltonian)) > tol:
        return False
    return all(abs(np.trace(a)) <= tol for a in lv.lindblad_ops)


def normalize_traceless(lv: Liouvillian) -> Liouvillian:
    """Canonical form: A_k -> A_k - tr(A_k) I/d, Hamiltonian adjusted so the
    generator is unchanged (H += (i/2) sum_k (c_k^* A_k - c_k A_k^dag))."""
    d = lv.d
    eye = np.eye(d, dtype=complex)
    h = lv.hamiltonian.copy()
    ops = []
    for a in lv.lindblad_ops:
        c = np.trace(a) / d
        ops.append(a - c * eye)
        h = h + (1j / 2) * (np.conj(c) * a - c * dag(a))
    h = (h + dag(h)) / 2
    return Liouvillian.build(h, ops, d=d)


def fixed_points(lv: Liouvillian, tol: float = 1e-8) -> list[np.ndarray]:
    """Density matrices spanning the kernel of the superoperator.

    Hermitian kernel elements with nonzero trace that are PSD (within tol) are
    normalized and returned; at least one exists for every trace-preserving
    generator of the sizes used here.
    """
    u_, s, vh = np.linalg.svd(lv.superop)
    scale = max(s.max(), 1.0)
    null = [vh[i].conj() for i in range(len(s)) if s[i] <= 1e-10 * scale]
    null += [vh[i].conj() for i in range(len(s), vh.shape[0])]
    states: list[np.ndarray] = []
    if not null:
        return states
    # hermitian candidates from the kernel basis
    cands = []
    for v in null:
        x = unvec(np.asarray(v), lv.d)
        for h in ((x + dag(x)) / 2, (x - dag(x)) / 2j):
            if np.max(np.abs(h)) > 1e-12:
                cands.append(h)
    for h in cands:
        tr = np.real(np.trace(h))
        if abs(tr) < 1e-10:
            continue
        rho = h / tr
        w = np.linalg.eigvalsh(rho)
        if w.min() >= -1e-9:
            wc, uc = np.linalg.eigh(rho)
            rho = (uc * np.clip(wc, 0, None)) @ dag(uc)
            rho = rho / np.real(np.trace(rho))
            if np.linalg.norm(lv.apply(rho)) <= tol:
                if not any(np.max(np.abs(rho - s_)) < 1e-8 for s_ in states):
                    states.append(rho)
    return states


# ---------------------------------------------------------------------------
# JSON serialization (mirrors the channel wire format)

def liouvillian_to_json(lv: Liouvillian) -> dict:
    return {
        "d": lv.d,
        "H": _mat_to_json(lv.hamiltonian),
        "lindblad_ops": [_mat_to_json(a) for a in lv.lindblad_ops],
    }


def liouvillian_from_json(doc: dict) -> Liouvillian:
    h = _mat_from_json(doc["H"])
    ops = [_mat_from_json(a) for a in doc["lindblad_ops"]]
    lv = Liouvillian.build(h, ops, d=doc["d"])
    if lv.d != doc["d"]:
        raise LindbladError("JSON dimension mismatch")
    return lv


def liouvillian_dumps(lv: Liouvillian) -> str:
    return json.dumps(liouvillian_to_json(lv))


def liouvillian_loads(s: str) -> Liouvillian:
    return liouvillian_from_json(json.loads(s))

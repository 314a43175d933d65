"""Entropy-typical projectors, Schumacher compression and the truncated Choi
purification with a small environment.

Typicality convention: a length-nu eigenvalue sequence x is delta-typical for
rho0 when |-(1/nu) log2 p(x) - S(rho0)| <= delta.  With this construction
tr(Pi) <= 2^{nu (S + delta)} holds exactly, i.e. the dimension-exponent
constant equals 1; both constants are surfaced in TypicalConfig anyway because
only inequalities involving them are ever asserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel, stinespring
from .entropy import von_neumann
from .linalg import dag, kron_all, max_entangled_vec, partial_trace, permute_vector

DIM_CAP = 4096


@dataclass(frozen=True)
class TypicalConfig:
    """Window delta plus the (never hard-coded) typicality constants."""

    delta: float
    c: float = 1.0
    c_prime: float = 1.0

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")


def _typical_sequences(probs: np.ndarray, nu: int, delta: float) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All delta-typical index sequences plus the per-symbol surprisals."""
    d = len(probs)
    entropy = float(-np.sum([p * np.log2(p) for p in probs if p > 0]))
    surprisal = np.array([-np.log2(p) if p > 0 else np.inf for p in probs])
    seqs = []
    for x in itertools.product(range(d), repeat=nu):
        s = sum(surprisal[i] for i in x)
        if np.isfinite(s) and abs(s / nu - entropy) <= delta + 1e-12:
            seqs.append(x)
    return seqs, surprisal


def typical_projector(rho0: np.ndarray, nu: int, cfg: TypicalConfig) -> np.ndarray:
    """Projector onto the delta-typical subspace of rho0^{⊗nu}; commutes with it."""
    d = rho0.shape[0]
    if d**nu > DIM_CAP:
        raise ValueError(f"typical projector dimension {d ** nu} exceeds cap {DIM_CAP}")
    w, u = np.linalg.eigh((rho0 + dag(rho0)) / 2)
    probs = np.clip(np.real(w), 0.0, None)
    probs[probs < 1e-15] = 0.0
    seqs, _ = _typical_sequences(probs, nu, cfg.delta)
    dim = d**nu
    indicator = np.zeros(dim)
    for x in seqs:
        idx = 0
        for i in x:
            idx = idx * d + i
        indicator[idx] = 1.0
    w_big = kron_all([u] * nu)
    return (w_big * indicator) @ dag(w_big)


def typical_probability(rho0: np.ndarray, nu: int, cfg: TypicalConfig) -> float:
    """tr(Pi rho0^{⊗nu}) computed exactly from the eigenvalue sequences."""
    w = np.linalg.eigvalsh((rho0 + dag(rho0)) / 2)
    probs = np.clip(np.real(w), 0.0, None)
    probs[probs < 1e-15] = 0.0
    seqs, _ = _typical_sequences(probs, nu, cfg.delta)
    return float(sum(np.prod([probs[i] for i in x]) for x in seqs))


def schumacher_compress(rho0: np.ndarray, nu: int,
                        cfg: TypicalConfig) -> tuple[np.ndarray, int, float]:
    """Compression unitary, retained qubit count and typical weight.

    U maps the k-th typical eigenbasis vector to computational basis index
    k * d^(nu - m_c): the typical subspace ends up on the leading m_c factors
    with the trailing factors in |0...0>.  n_compressed = ceil(log2 tr(Pi)).
    """
    d = rho0.shape[0]
    dim = d**nu
    if dim > DIM_CAP:
        raise ValueError(f"dimension {dim} exceeds cap {DIM_CAP}")
    w, u = np.linalg.eigh((rho0 + dag(rho0)) / 2)
    probs = np.clip(np.real(w), 0.0, None)
    probs[probs < 1e-15] = 0.0
    seqs, _ = _typical_sequences(probs, nu, cfg.delta)
    n_typ = len(seqs)
    p_typical = float(sum(np.prod([probs[i] for i in x]) for x in seqs))
    n_compressed = int(np.ceil(np.log2(n_typ))) if n_typ > 1 else 0
    m_c = 0
    while d**m_c < n_typ:
        m_c += 1
    stride = d ** (nu - m_c)
    typ_idx = []
    for x in seqs:
        idx = 0
        for i in x:
            idx = idx * d + i
        typ_idx.append(idx)
    targets = [k * stride for k in range(n_typ)]
    rest_src = [i for i in range(dim) if i not in set(typ_idx)]
    rest_tgt = [i for i in range(dim) if i not in set(targets)]
    perm = np.zeros((dim, dim))
    for src, tgt in zip(typ_idx + rest_src, targets + rest_tgt):
        perm[tgt, src] = 1.0
    w_big = kron_all([u] * nu)
    u_compress = perm @ dag(w_big)
    return u_compress, n_compressed, p_typical


def truncated_choi_purification(t: QuantumChannel, m: int,
                                cfg: TypicalConfig) -> tuple[np.ndarray, int, float]:
    """Project the m-fold purified Choi state onto the typical env subspace.

    Returns the normalized state vector on A'^m ⊗ B^m ⊗ E^m, the bound tr(Pi)
    on the rank of its environment marginal, and the trace distance to the
    exact tensor power.
    """
    v = stinespring(t)
    d_a, d_b = t.d_in, t.d_out
    d_e = v.d_to // d_b
    total = (d_a * d_b * d_e) ** m
    if total > DIM_CAP:
        raise ValueError(f"dimension {total} exceeds cap {DIM_CAP}")
    omega = max_entangled_vec(d_a)
    single = np.kron(np.eye(d_a), v.matrix) @ omega  # on A' ⊗ (B ⊗ E)
    state = single
    for _ in range(m - 1):
        state = np.kron(state, single)
    # regroup (A' B E)^m -> A'^m B^m E^m
    dims = []
    for _ in range(m):
        dims.extend([d_a, d_b, d_e])
    perm = [3 * i for i in range(m)] + [3 * i + 1 for i in range(m)] + [3 * i + 2 for i in range(m)]
    state = permute_vector(state, dims, perm)
    sigma_e = partial_trace(
        np.outer(single, single.conj()), [d_a, d_b, d_e], keep=[2]
    )
    if d_e == 1:
        return state, 1, 0.0
    pi = typical_projector(sigma_e, m, cfg)
    rank_bound = int(round(np.real(np.trace(pi))))
    proj = np.kron(np.eye((d_a * d_b) ** m), pi)
    projected = proj @ state
    norm = np.linalg.norm(projected)
    if norm == 0:
        raise ValueError("typical projection annihilated the state; enlarge delta")
    truncated = projected / norm
    overlap = abs(np.vdot(state, truncated))
    trace_dist = 2 * np.sqrt(max(0.0, 1 - overlap**2))
    return truncated, rank_bound, trace_dist

"""Entropic quantities, base-2 throughout: von Neumann entropy, conditional and
coherent information, Holevo chi, binary entropy, the Fannes-Audenaert bound
and the capacity continuity bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel, apply_to_second
from .linalg import max_entangled, partial_trace


def von_neumann(rho: np.ndarray) -> float:
    """S(rho) = -tr(rho log2 rho) with 0 log 0 = 0."""
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    w = np.clip(np.real(w), 0.0, None)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def conditional_entropy(rho_ab: np.ndarray, dims: tuple[int, int]) -> float:
    """S(A|B) = S(AB) - S(B)."""
    d_a, d_b = dims
    rho_b = partial_trace(rho_ab, [d_a, d_b], keep=[1])
    return von_neumann(rho_ab) - von_neumann(rho_b)


def coherent_information_state(rho_ab: np.ndarray, dims: tuple[int, int]) -> float:
    """I_coh(A > B) = S(B) - S(AB) = -S(A|B)."""
    return -conditional_entropy(rho_ab, dims)


def coherent_information_channel(rho: np.ndarray, t: QuantumChannel,
                                 d_ref: int | None = None) -> float:
    """I_coh(rho, T) = I_coh(A' > B) evaluated on (id ⊗ T)(rho), rho on A'A."""
    d_ref = t.d_in if d_ref is None else d_ref
    out = apply_to_second(t, rho, d_ref)
    return coherent_information_state(out, (d_ref, t.d_out))


def coherent_information_max_entangled(t: QuantumChannel) -> float:
    """I_coh at the maximally entangled input; the quantity entering delta_k."""
    return coherent_information_channel(max_entangled(t.d_in), t)


@dataclass(frozen=True)
class Ensemble:
    """Weighted family {p_i, rho_i} of density matrices."""

    probabilities: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.probabilities) != len(self.states):
            raise ValueError("probabilities and states length mismatch")
        if min(self.probabilities) < 0 or abs(sum(self.probabilities) - 1) > 1e-10:
            raise ValueError("probabilities must form a distribution")

    @staticmethod
    def of(probabilities: list[float], states: list[np.ndarray]) -> "Ensemble":
        return Ensemble(tuple(float(p) for p in probabilities),
                        tuple(np.asarray(s, dtype=complex) for s in states))


def holevo_chi(ensemble: Ensemble) -> float:
    """chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i)."""
    avg = sum(p * s for p, s in zip(ensemble.probabilities, ensemble.states))
    return von_neumann(avg) - sum(
        p * von_neumann(s) for p, s in zip(ensemble.probabilities, ensemble.states)
    )


def apply_channel_to_ensemble(t: QuantumChannel, ensemble: Ensemble) -> Ensemble:
    return Ensemble.of(list(ensemble.probabilities),
                       [t.apply(s) for s in ensemble.states])


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("binary entropy argument outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def fannes_audenaert_bound(delta: float, d: int) -> float:
    """delta log2(d) + H(delta); bounds |S(rho) - S(sigma)| at trace distance delta."""
    return delta * np.log2(d) + binary_entropy(delta)


def continuity_capacity_bound(eps: float, d_b: int) -> float:
    """8 eps d_B + 4 H(eps); capacity continuity at diamond distance eps."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    return 8 * eps * d_b + 4 * binary_entropy(eps)

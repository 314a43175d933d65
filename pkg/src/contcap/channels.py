"""Quantum channels with interconvertible Kraus / Choi / superoperator /
Stinespring views, complementary channels and diamond-norm surrogates.

Conventions (fixed for the whole package):
  * column-stacking vectorization, so the superoperator of rho -> A rho B is
    B^T ⊗ A and a channel acts as vec(T(rho)) = S vec(rho);
  * the Choi matrix is normalized, J(T) = (id ⊗ T)(omega) with tr(omega) = 1,
    living on H_in ⊗ H_out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    dag,
    kron,
    max_entangled_vec,
    partial_trace,
    partial_transpose,
    trace_norm,
    vec,
    unvec,
    assert_density,
    haar_unitary,
)

CPTP_TOL = 1e-8


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class Isometry:
    """V with V^dag V = I, mapping C^{d_from} into C^{d_to}."""

    matrix: np.ndarray

    def __post_init__(self):
        v = self.matrix
        if v.ndim != 2 or v.shape[0] < v.shape[1]:
            raise ChannelError("isometry must be a tall matrix")
        if np.max(np.abs(dag(v) @ v - np.eye(v.shape[1]))) > 1e-9:
            raise ChannelError("matrix is not an isometry within 1e-9")

    @property
    def d_from(self) -> int:
        return self.matrix.shape[1]

    @property
    def d_to(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class QuantumChannel:
    """CPTP map stored as Kraus operators with eagerly cached Choi and superoperator."""

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int
    choi: np.ndarray = field(repr=False)
    superop: np.ndarray = field(repr=False)

    @staticmethod
    def from_kraus(kraus: list[np.ndarray], validate: bool = True) -> "QuantumChannel":
        if not kraus:
            raise ChannelError("at least one Kraus operator required")
        d_out, d_in = kraus[0].shape
        for k in kraus:
            if k.shape != (d_out, d_in):
                raise ChannelError("inconsistent Kraus shapes")
        ks = tuple(np.asarray(k, dtype=complex) for k in kraus)
        sup = kraus_to_superop(list(ks))
        choi = superop_to_choi(sup, d_in, d_out)
        ch = QuantumChannel(ks, d_in, d_out, choi, sup)
        if validate:
            ch.validate()
        return ch

    @staticmethod
    def from_choi(choi: np.ndarray, d_in: int, d_out: int,
                  validate: bool = True) -> "QuantumChannel":
        return QuantumChannel.from_kraus(choi_to_kraus(choi, d_in, d_out), validate)

    @staticmethod
    def from_superop(sup: np.ndarray, d_in: int, d_out: int,
                     validate: bool = True) -> "QuantumChannel":
        choi = superop_to_choi(sup, d_in, d_out)
        return QuantumChannel.from_kraus(choi_to_kraus(choi, d_in, d_out), validate)

    def validate(self, tol: float = CPTP_TOL) -> None:
        """CPTP checks: Kraus completeness, Choi PSD, correct Choi marginal."""
        acc = sum(dag(k) @ k for k in self.kraus)
        if np.max(np.abs(acc - np.eye(self.d_in))) > tol:
            raise ChannelError("Kraus operators do not satisfy sum K^dag K = I")
        w = np.linalg.eigvalsh((self.choi + dag(self.choi)) / 2)
        if w.min() < -tol:
            raise ChannelError(f"Choi matrix not PSD: min eigenvalue {w.min():.3e}")
        marg = partial_trace(self.choi, [self.d_in, self.d_out], keep=[0])
        if np.max(np.abs(marg - np.eye(self.d_in) / self.d_in)) > tol:
            raise ChannelError("Choi input marginal differs from I/d_in")

    def apply(self, rho: np.ndarray, check_input: bool = False) -> np.ndarray:
        if rho.shape != (self.d_in, self.d_in):
            raise ChannelError("input dimension mismatch")
        if check_input:
            assert_density(rho)
        out = np.zeros((self.d_out, self.d_out), dtype=complex)
        for k in self.kraus:
            out += k @ rho @ dag(k)
        return out

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.apply(rho)


# ---------------------------------------------------------------------------
# representation conversions

def kraus_to_superop(kraus: list[np.ndarray]) -> np.ndarray:
    return sum(np.kron(k.conj(), k) for k in kraus)


def kraus_to_choi(kraus: list[np.ndarray]) -> np.ndarray:
    d_out, d_in = kraus[0].shape
    return superop_to_choi(kraus_to_superop(kraus), d_in, d_out)


def superop_to_choi(sup: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    """Normalized Choi from the column-stacking superoperator (pure reshuffle)."""
    if sup.shape != (d_out * d_out, d_in * d_in):
        raise ChannelError("superoperator shape mismatch")
    # S[b*d_out+a, j*d_in+i] = T(|i><j|)[a,b] -> J[(i,a),(j,b)] = S[...]/d_in
    s4 = sup.reshape(d_out, d_out, d_in, d_in)  # [b, a, j, i]
    choi = s4.transpose(3, 1, 2, 0).reshape(d_in * d_out, d_in * d_out)
    return choi / d_in


def choi_to_superop(choi: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    j4 = choi.reshape(d_in, d_out, d_in, d_out)  # [i, a, j, b]
    sup = j4.transpose(3, 1, 2, 0).reshape(d_out * d_out, d_in * d_in)
    return sup * d_in


def choi_to_kraus(choi: np.ndarray, d_in: int, d_out: int,
                  cutoff: float = 1e-10) -> list[np.ndarray]:
    """Rank-revealing Kraus decomposition of a (normalized) Choi matrix."""
    h = (choi + dag(choi)) / 2
    w, u = np.linalg.eigh(h)
    if w.min() < -CPTP_TOL:
        raise ChannelError(f"Choi not PSD: min eigenvalue {w.min():.3e}")
    kraus = []
    for lam, v in zip(w[::-1], u[:, ::-1].T):
        if lam <= cutoff:
            break
        # vector index (i, a) -> K[a, i], weight sqrt(d_in * lam)
        kraus.append(np.sqrt(d_in * lam) * v.reshape(d_in, d_out).T)
    if not kraus:
        raise ChannelError("Choi matrix is numerically zero")
    return kraus


# ---------------------------------------------------------------------------
# constructors

def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel.from_kraus([np.eye(d, dtype=complex)])


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    return QuantumChannel.from_kraus([np.asarray(u, dtype=complex)])


def completely_depolarizing(d: int) -> QuantumChannel:
    """rho -> tr(rho) I/d."""
    kraus = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1.0 / np.sqrt(d)
            kraus.append(k)
    return QuantumChannel.from_kraus(kraus)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli_depolarizing_channel() -> QuantumChannel:
    """Uniform Pauli-conjugation channel rho -> (X rho X + Y rho Y + Z rho Z)/3."""
    s = 1 / np.sqrt(3)
    return QuantumChannel.from_kraus([s * PAULI_X, s * PAULI_Y, s * PAULI_Z])


def depolarizing_channel(d: int, lam: float) -> QuantumChannel:
    """rho -> lam rho + (1 - lam) tr(rho) I/d, for lam in [0, 1]."""
    if not 0 <= lam <= 1:
        raise ChannelError("mixing parameter must lie in [0, 1]")
    kraus = [np.sqrt(lam) * np.eye(d, dtype=complex)]
    for k in completely_depolarizing(d).kraus:
        kraus.append(np.sqrt(1 - lam) * k)
    return QuantumChannel.from_kraus(kraus)


def amplitude_damping_channel(gamma: float) -> QuantumChannel:
    if not 0 <= gamma <= 1:
        raise ChannelError("damping parameter must lie in [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return QuantumChannel.from_kraus([k0, k1])


def random_channel(d_in: int, d_out: int, n_kraus: int,
                   rng: np.random.Generator) -> QuantumChannel:
    """Channel from a Haar-random Stinespring isometry with n_kraus environment dims."""
    big = d_out * n_kraus
    if big < d_in:
        raise ChannelError("environment too small for an isometry")
    u = haar_unitary(big, rng)
    v = u[:, :d_in]
    kraus = [v[a * n_kraus:(a + 1) * n_kraus, :] for a in range(d_out)]
    # v[(a, l), i] with row index a*n_kraus + l; K_l[a, i] = v[a*n_kraus + l, i]
    ks = [np.array([kraus[a][l, :] for a in range(d_out)]) for l in range(n_kraus)]
    return QuantumChannel.from_kraus(ks)


# ---------------------------------------------------------------------------
# structural operations

def stinespring(t: QuantumChannel) -> Isometry:
    """V: rho -> tr_E(V rho V^dag), env dimension = number of Kraus operators."""
    n_env = len(t.kraus)
    v = np.zeros((t.d_out * n_env, t.d_in), dtype=complex)
    for l, k in enumerate(t.kraus):
        for a in range(t.d_out):
            v[a * n_env + l, :] = k[a, :]
    return Isometry(v)


def complementary(t: QuantumChannel) -> QuantumChannel:
    """T^c(rho) = tr_B(V rho V^dag), mapping into the Stinespring environment."""
    n_env = len(t.kraus)
    # B_a[l, i] = K_l[a, i]; one Kraus operator of T^c per output basis index a
    ks = [np.array([t.kraus[l][a, :] for l in range(n_env)]) for a in range(t.d_out)]
    return QuantumChannel.from_kraus(ks)


def compose(s: QuantumChannel, t: QuantumChannel) -> QuantumChannel:
    """s after t."""
    if s.d_in != t.d_out:
        raise ChannelError("composition dimension mismatch")
    return QuantumChannel.from_superop(s.superop @ t.superop, t.d_in, s.d_out)


def tensor(s: QuantumChannel, t: QuantumChannel) -> QuantumChannel:
    kraus = [kron(a, b) for a in s.kraus for b in t.kraus]
    return QuantumChannel.from_kraus(kraus)


def tensor_power(t: QuantumChannel, m: int) -> QuantumChannel:
    if m < 1:
        raise ChannelError("tensor power requires m >= 1")
    out = t
    for _ in range(m - 1):
        out = tensor(out, t)
    return out


def mix(channels: list[QuantumChannel], weights: list[float]) -> QuantumChannel:
    """Convex combination sum_i w_i T_i."""
    if abs(sum(weights) - 1) > 1e-12 or min(weights) < 0:
        raise ChannelError("weights must be a probability vector")
    kraus = []
    for w, ch in zip(weights, channels):
        kraus.extend(np.sqrt(w) * k for k in ch.kraus)
    return QuantumChannel.from_kraus(kraus)


def isometry_to_unitary(v: Isometry) -> tuple[np.ndarray, np.ndarray]:
    """Unitary U and ancilla phi with U(psi ⊗ phi) = V psi, phi = |0> of dim k.

    Requires d_to = d_from * k.  The orthonormal system {V|i>} is completed by
    Gram-Schmidt against the remaining computational basis vectors.
    """
    n, big = v.d_from, v.d_to
    if big % n != 0:
        raise ChannelError("target dimension must be a multiple of the source")
    k = big // n
    u = np.zeros((big, big), dtype=complex)
    cols = list(v.matrix.T)  # V|i>
    # deterministic completion of the orthonormal system
    basis = list(np.eye(big, dtype=complex))
    completion = []
    have = cols + completion
    for cand in basis:
        if len(have) == big:
            break
        w = cand.copy()
        for b in have:
            w = w - b * np.vdot(b, w)
        nrm = np.linalg.norm(w)
        if nrm > 1e-7:
            w = w / nrm
            completion.append(w)
            have = cols + completion
    if len(have) != big:
        raise ChannelError("failed to complete orthonormal basis")
    # column (i, j) of U: j = 0 -> V|i>, j > 0 -> completion vectors in order
    it = iter(completion)
    for i in range(n):
        u[:, i * k] = cols[i]
        for j in range(1, k):
            u[:, i * k + j] = next(it)
    phi = np.zeros(k, dtype=complex)
    phi[0] = 1.0
    return u, phi


def entanglement_fidelity(t: QuantumChannel) -> float:
    """F_e(T) = <omega|(id ⊗ T)(omega)|omega> = tr(S)/d^2; linear in T."""
    if t.d_in != t.d_out:
        raise ChannelError("entanglement fidelity needs d_in = d_out")
    return float(np.real(np.trace(t.superop))) / t.d_in**2


def entanglement_fidelity_superop(sup: np.ndarray, d: int) -> float:
    return float(np.real(np.trace(sup))) / d**2


def diamond_distance_bounds(s: QuantumChannel, t: QuantumChannel) -> tuple[float, float]:
    """Two-sided bounds on ||S - T||_diamond via Choi trace norms.

    lower = ||(id ⊗ (S-T))(omega)||_1, upper = d_in * lower (unnormalized Choi
    difference); lower <= ||S - T||_diamond <= upper.
    """
    if (s.d_in, s.d_out) != (t.d_in, t.d_out):
        raise ChannelError("dimension mismatch")
    diff = trace_norm(s.choi - t.choi)
    return diff, s.d_in * diff


def is_ppt_channel(t: QuantumChannel, tol: float = 1e-9) -> bool:
    """True iff the partial transpose of the Choi matrix is PSD within tol."""
    pt = partial_transpose(t.choi, [t.d_in, t.d_out], which=[1])
    w = np.linalg.eigvalsh((pt + dag(pt)) / 2)
    return bool(w.min() >= -tol)


def ppt_certificate_eigenvalue(t: QuantumChannel) -> float:
    """Minimal eigenvalue of the partially transposed Choi matrix."""
    pt = partial_transpose(t.choi, [t.d_in, t.d_out], which=[1])
    return float(np.linalg.eigvalsh((pt + dag(pt)) / 2).min())


def choi_state(t: QuantumChannel) -> np.ndarray:
    """(id ⊗ T)(omega) as a density matrix on H_in ⊗ H_out."""
    return t.choi


def apply_to_second(t: QuantumChannel, rho: np.ndarray, d_first: int) -> np.ndarray:
    """(id ⊗ T)(rho) for rho on C^{d_first} ⊗ C^{d_in}."""
    d_in, d_out = t.d_in, t.d_out
    if rho.shape != (d_first * d_in, d_first * d_in):
        raise ChannelError("state dimension mismatch")
    r4 = rho.reshape(d_first, d_in, d_first, d_in)
    out = np.zeros((d_first, d_out, d_first, d_out), dtype=complex)
    for k in t.kraus:
        tmp = np.einsum("ai,xiyj->xayj", k, r4)
        out += np.einsum("xayj,bj->xayb", tmp, k.conj())
    return out.reshape(d_first * d_out, d_first * d_out)


# ---------------------------------------------------------------------------
# JSON serialization (CLI wire format)

def _mat_to_json(m: np.ndarray) -> list:
    return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in m]


def _mat_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def channel_to_json(t: QuantumChannel) -> dict:
    return {
        "d_in": t.d_in,
        "d_out": t.d_out,
        "kraus": [_mat_to_json(k) for k in t.kraus],
    }


def channel_from_json(doc: dict) -> QuantumChannel:
    kraus = [_mat_from_json(k) for k in doc["kraus"]]
    ch = QuantumChannel.from_kraus(kraus)
    if ch.d_in != doc["d_in"] or ch.d_out != doc["d_out"]:
        raise ChannelError("JSON dimensions do not match the Kraus operators")
    return ch


def channel_dumps(t: QuantumChannel) -> str:
    return json.dumps(channel_to_json(t))


def channel_loads(s: str) -> QuantumChannel:
    return channel_from_json(json.loads(s))

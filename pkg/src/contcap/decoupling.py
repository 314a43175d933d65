"""Decoupling experiments: Haar-averaged trace-norm estimates, the min-entropy
decoupling bound in its non-smooth weakening, the Uhlmann decoder and the
probe-level information-disturbance check.

The weakening is valid because the smooth conditional min-entropy dominates the
plain one for every smoothing radius, so the bound

    E_U ||(id ⊗ [T^c ∘ U ∘ V])(rho) - rho^{R'} ⊗ sigma^E||_1
        <= 2^{-H_min(A'|E)/2 - H_min(A|R')/2}

follows from the smooth statement by letting the radius go to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channels import Isometry, QuantumChannel, complementary, stinespring
from .linalg import (
    dag,
    haar_unitary,
    kron,
    partial_trace,
    permute_systems,
    trace_norm,
)
from .minentropy import min_entropy


@dataclass(frozen=True)
class DecouplingRun:
    """Monte-Carlo record of the decoupling quantity for one channel/probe pair."""

    channel_label: str
    probe: np.ndarray = field(repr=False)
    embedding: np.ndarray = field(repr=False)
    d_ref: int
    d_code: int
    n_samples: int
    seed: int
    samples: tuple[float, ...] = field(repr=False)
    mean: float
    minimum: float
    maximum: float
    bound: float | None = None

    @property
    def std_error(self) -> float:
        if self.n_samples < 2:
            return 0.0
        return float(np.std(self.samples, ddof=1) / np.sqrt(self.n_samples))

    def to_json(self) -> dict:
        return {
            "channel": self.channel_label,
            "d_ref": self.d_ref,
            "d_code": self.d_code,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "mean": self.mean,
            "min": self.minimum,
            "max": self.maximum,
            "std_error": self.std_error,
            "bound": self.bound,
            "samples": list(self.samples),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _embedded_probe(rho: np.ndarray, v: Isometry, d_ref: int) -> np.ndarray:
    big = kron(np.eye(d_ref, dtype=complex), v.matrix)
    return big @ rho @ dag(big)


def decoupling_experiment(t: QuantumChannel, rho: np.ndarray, v: Isometry,
                          n_samples: int, seed: int,
                          label: str | None = None) -> DecouplingRun:
    """Sample ||(id ⊗ [T^c ∘ U ∘ V])(rho) - rho^{R'} ⊗ sigma^E||_1 over Haar U.

    rho lives on R' ⊗ R with d_R = d_from of the embedding; U acts on the code
    system A = image of V; sigma^E is the environment marginal of the
    complementary Choi matrix, i.e. T^c(I/d_A).  Per-sample generators are
    spawned from the seed, so results are independent of evaluation order.
    """
    d_a = t.d_in
    if v.d_to != d_a:
        raise ValueError("embedding must map into the channel input space")
    d_ref = rho.shape[0] // v.d_from
    if rho.shape != (d_ref * v.d_from, d_ref * v.d_from):
        raise ValueError("probe dimensions inconsistent with the embedding")
    tc = complementary(t)
    sigma_e = tc.apply(np.eye(d_a, dtype=complex) / d_a)
    rho_ref = partial_trace(rho, [d_ref, v.d_from], keep=[0])
    psi = _embedded_probe(rho, v, d_ref)
    target = kron(rho_ref, sigma_e)
    streams = np.random.SeedSequence(seed).spawn(n_samples)
    values = []
    for ss in streams:
        u = haar_unitary(d_a, np.random.Generator(np.random.PCG64(ss)))
        big_u = kron(np.eye(d_ref, dtype=complex), u)
        rotated = big_u @ psi @ dag(big_u)
        out = _apply_to_second(tc, rotated, d_ref)
        values.append(trace_norm(out - target))
    arr = np.array(values)
    return DecouplingRun(
        channel_label=label or f"channel[{t.d_in}->{t.d_out}]",
        probe=rho,
        embedding=v.matrix,
        d_ref=d_ref,
        d_code=d_a,
        n_samples=n_samples,
        seed=seed,
        samples=tuple(float(x) for x in values),
        mean=float(arr.mean()),
        minimum=float(arr.min()),
        maximum=float(arr.max()),
    )


def _apply_to_second(t: QuantumChannel, rho: np.ndarray, d_first: int) -> np.ndarray:
    from .channels import apply_to_second

    return apply_to_second(t, rho, d_first)


def decoupling_bound_check(run: DecouplingRun, t: QuantumChannel,
                           n_sigma: float = 3.0) -> tuple[float, float, bool]:
    """(lhs_mean, rhs, pass) for the non-smooth decoupling bound.

    rhs = 2^{-H_min(A'|E)_sigma/2 - H_min(A|R')_psi/2} with sigma the Choi
    matrix of the complementary channel and psi the embedded probe; pass allows
    n_sigma standard errors of Monte-Carlo slack.
    """
    tc = complementary(t)
    d_a, d_e = tc.d_in, tc.d_out
    choi_c = tc.choi  # on A' ⊗ E
    h_env = min_entropy(choi_c, (d_a, d_e))
    v = Isometry(run.embedding)
    psi = _embedded_probe(run.probe, v, run.d_ref)
    # reorder R' ⊗ A -> A ⊗ R' for H_min(A|R')
    swapped = permute_systems(psi, [run.d_ref, d_a], [1, 0])
    h_probe = min_entropy(swapped, (d_a, run.d_ref))
    rhs = float(2.0 ** (-0.5 * h_env - 0.5 * h_probe))
    lhs = run.mean
    ok = bool(lhs <= rhs + n_sigma * run.std_error)
    object.__setattr__(run, "bound", rhs)
    return lhs, rhs, ok


def uhlmann_decoder(t: QuantumChannel, sigma_target: np.ndarray,
                    probe: np.ndarray) -> tuple[QuantumChannel, float]:
    """Decoder D(rho) = tr_{E'}(W rho W^dag) aligning the channel output with
    the probe, built by Uhlmann's theorem from the overlap of purifications.

    Returns (D, eps) with eps = ||(id ⊗ T^c)(probe) - probe^R ⊗ sigma_target||_1
    measured on the (purified) probe; the decoding error on the same probe is
    then at most 2 sqrt(eps (1 - eps/4)).
    """
    d_a, d_b = t.d_in, t.d_out
    d_r = probe.shape[0] // d_a
    if probe.shape != (d_r * d_a, d_r * d_a):
        raise ValueError("probe dimensions inconsistent with the channel input")
    # purify the probe if needed: reference R gains a copy R~
    w_p, u_p = np.linalg.eigh((probe + dag(probe)) / 2)
    if np.sum(w_p > 1e-12) > 1:
        vecs = []
        for lam, col in zip(w_p, u_p.T):
            if lam > 1e-12:
                vecs.append(np.sqrt(max(lam, 0.0)) * col)
        psi = np.zeros(len(vecs) * probe.shape[0], dtype=complex)
        for i, vv in enumerate(vecs):
            psi += kron(_basis(len(vecs), i), vv)
        d_ref = len(vecs) * d_r
    else:
        idx = int(np.argmax(w_p))
        psi = u_p[:, idx] * np.sqrt(max(w_p[idx], 0.0))
        psi = psi / np.linalg.norm(psi)
        d_ref = d_r
    # psi lives on REF ⊗ A with REF of dimension d_ref
    v = stinespring(t)
    d_e = v.d_to // d_b
    theta = kron(np.eye(d_ref, dtype=complex), v.matrix) @ psi  # REF ⊗ B ⊗ E
    rho_ref = partial_trace(np.outer(psi, psi.conj()), [d_ref, d_a], keep=[0])
    theta_re = partial_trace(
        np.outer(theta, theta.conj()), [d_ref, d_b, d_e], keep=[0, 2]
    )
    eps = trace_norm(theta_re - kron(rho_ref, sigma_target))
    # purify sigma_target on E ⊗ E'
    w_s, u_s = np.linalg.eigh((sigma_target + dag(sigma_target)) / 2)
    d_ep = max(d_e, int(np.ceil(d_b / d_a)))
    sigma_vec = np.zeros(d_e * d_ep, dtype=complex)
    for i in range(d_e):
        lam = max(w_s[i], 0.0)
        if lam > 0 and i < d_ep:
            sigma_vec += np.sqrt(lam) * kron(u_s[:, i], _basis(d_ep, i))
    sigma_vec = sigma_vec / np.linalg.norm(sigma_vec)
    # target global state |psi>^{REF A"} ⊗ |sigma>^{E E'} with A" ≅ A, grouped
    # as (REF E) ⊗ (A" E'); theta grouped as (REF E) ⊗ B
    psi_mat = psi.reshape(d_ref, d_a)
    sig_mat = sigma_vec.reshape(d_e, d_ep)
    # coefficient matrices indexed by rows (REF, E), columns B resp. (A", E')
    theta_mat = theta.reshape(d_ref, d_b, d_e).transpose(0, 2, 1).reshape(d_ref * d_e, d_b)
    target_mat = np.einsum("ra,ef->reaf", psi_mat, sig_mat).reshape(
        d_ref * d_e, d_a * d_ep
    )
    m = dag(target_mat) @ theta_mat  # (A E') x B overlap
    uu, _, vvh = np.linalg.svd(m)
    pad = np.zeros((d_a * d_ep, d_b))
    np.fill_diagonal(pad, 1.0)
    w_t = vvh.conj().T @ pad.T @ uu.conj().T  # B x (A E'), orthonormal rows
    w_iso = w_t.T  # (A E') x B isometry
    kraus = [w_iso[a * d_ep:(a + 1) * d_ep, :] for a in range(d_a)]
    ks = [np.array([kraus[a][l, :] for a in range(d_a)]) for l in range(d_ep)]
    decoder = QuantumChannel.from_kraus(ks)
    return decoder, float(eps)


def _basis(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def decoding_error(t: QuantumChannel, decoder: QuantumChannel,
                   probe: np.ndarray) -> float:
    """||(id ⊗ D∘T)(probe) - probe||_1."""
    from .channels import apply_to_second, compose

    d_r = probe.shape[0] // t.d_in
    out = apply_to_second(compose(decoder, t), probe, d_r)
    return trace_norm(out - probe)


def information_disturbance_probe(t: QuantumChannel, decoder: QuantumChannel,
                                  probe: np.ndarray,
                                  slack: float = 1e-8) -> tuple[float, float, bool]:
    """(probe_forgetfulness, decode_error, pass).

    forgetfulness = ||(id ⊗ T^c)(probe) - probe^R ⊗ sigma||_1 with sigma the
    exact environment marginal of the output; pass checks the probe-level
    weakening forgetfulness <= 2 sqrt(decode_error) + slack, and is evaluated
    only when decode_error <= 1 (vacuously true otherwise).
    """
    from .channels import apply_to_second

    tc = complementary(t)
    d_r = probe.shape[0] // t.d_in
    out_env = apply_to_second(tc, probe, d_r)
    sigma = partial_trace(out_env, [d_r, tc.d_out], keep=[1])
    rho_ref = partial_trace(probe, [d_r, t.d_in], keep=[0])
    forget = trace_norm(out_env - kron(rho_ref, sigma))
    err = decoding_error(t, decoder, probe)
    if err > 1.0:
        return float(forget), float(err), True
    return float(forget), float(err), bool(forget <= 2 * np.sqrt(err) + slack)

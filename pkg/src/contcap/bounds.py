"""Closed-form capacity bounds for depolarizing-type generators and the
PPT-time zero-capacity certificate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channels import ppt_certificate_eigenvalue, is_ppt_channel
from .entropy import coherent_information_max_entangled, von_neumann
from .lindblad import Liouvillian, semigroup_channel


@dataclass(frozen=True)
class BoundReport:
    """A named bound value (in bits) together with its parameters."""

    name: str
    value: float
    parameters: dict[str, float] = field(default_factory=dict)
    certificate: str | None = None

    def to_json(self) -> dict:
        doc = {"name": self.name, "value": self.value, "parameters": self.parameters}
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def unitary_upper_bound_depolarizing(r: float, t: float, rho0: np.ndarray,
                                     d: int) -> BoundReport:
    """log2(d) - (1 - e^{-rt}) S(rho0): unitary-coding upper bound for the
    generator depolarizing onto rho0 at rate r."""
    if r < 0 or t < 0:
        raise ValueError("rate and time must be nonnegative")
    s0 = von_neumann(rho0)
    value = np.log2(d) - (1 - np.exp(-r * t)) * s0
    return BoundReport(
        "unitary_upper_bound_depolarizing", float(value),
        {"r": r, "t": t, "S(rho0)": s0, "d": float(d)},
    )


def cd_upper_bound(r: float, t: float, d: int) -> BoundReport:
    """e^{-rt} log2(d): the completely depolarizing special case rho0 = I/d."""
    if r < 0 or t < 0:
        raise ValueError("rate and time must be nonnegative")
    value = np.exp(-r * t) * np.log2(d)
    return BoundReport("cd_upper_bound", float(value), {"r": r, "t": t, "d": float(d)})


def delta_k(lv: Liouvillian, t: float, k: int) -> float:
    """log2(d) - I_coh(omega, e^{(t/k) L}); the per-step coherent-information deficit."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ch = semigroup_channel(lv, t / k, validate=False)
    return float(np.log2(lv.d) - coherent_information_max_entangled(ch))


def lower_bound_fixed_point(lv: Liouvillian, t: float, rho0: np.ndarray,
                            k_max: int = 256, c: float = 1.0) -> BoundReport:
    """Fixed-point coding lower bound: the best over k <= k_max of

        I_coh(omega, T_{t/k}) (log d - S(rho0)) / (log d - S(rho0) + k delta_k (1+c)).

    The pure-fixed-point case is recovered at S(rho0) = 0.  Degenerates to 0 and
    is flagged when rho0 is maximally mixed.
    """
    if np.linalg.norm(lv.apply(rho0)) > 1e-8:
        raise ValueError("rho0 is not a fixed point of the generator")
    d = lv.d
    logd = float(np.log2(d))
    s0 = von_neumann(rho0)
    if logd - s0 < 1e-12:
        return BoundReport(
            "lower_bound_fixed_point", 0.0,
            {"r": np.nan, "t": t, "S(rho0)": s0, "c": c, "k": 0.0},
            certificate="degenerate: maximally mixed fixed point, scheme yields no ancillas",
        )
    best = -np.inf
    best_k = 0
    values = {}
    for k in range(1, k_max + 1):
        dk = delta_k(lv, t, k)
        icoh = logd - dk
        val = icoh * (logd - s0) / (logd - s0 + k * dk * (1 + c))
        values[k] = val
        if val > best:
            best = val
            best_k = k
    trace_ks = sorted({1 << i for i in range(k_max.bit_length()) if 1 << i <= k_max} | {best_k})
    return BoundReport(
        "lower_bound_fixed_point", float(best),
        {"t": t, "S(rho0)": s0, "c": c, "k": float(best_k),
         "delta_k": delta_k(lv, t, best_k)},
        certificate=f"scan: {[(kk, round(values[kk], 6)) for kk in trace_ks]}",
    )


def ppt_time(lv: Liouvillian, t_max: float, tol: float = 1e-6,
             grid: int = 200) -> float:
    """Smallest t (bisection to tol) where e^{tL} becomes and stays PPT.

    Requires the channel to be PPT at t_max and on a sampled grid beyond the
    detected threshold; raises ValueError when the evolution never turns PPT.
    """
    def ppt_at(t: float) -> bool:
        return is_ppt_channel(semigroup_channel(lv, t, validate=False))

    if not ppt_at(t_max):
        raise ValueError("channel never PPT on [0, t_max]")
    if ppt_at(0.0):
        return 0.0
    ts = np.linspace(0.0, t_max, grid + 1)
    flags = [ppt_at(t) for t in ts]
    first = next(i for i, f in enumerate(flags) if f)
    if not all(flags[first:]):
        raise ValueError("PPT property not stable beyond the first flip on the grid")
    lo, hi = ts[first - 1], ts[first]
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if ppt_at(mid):
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2)


def ppt_time_certificate(lv: Liouvillian, t_star: float,
                         window: float = 1e-4) -> tuple[float, float]:
    """Minimal partial-transpose eigenvalues just below and above the threshold."""
    below = ppt_certificate_eigenvalue(semigroup_channel(lv, max(t_star - window, 0.0), validate=False))
    above = ppt_certificate_eigenvalue(semigroup_channel(lv, t_star + window, validate=False))
    return below, above

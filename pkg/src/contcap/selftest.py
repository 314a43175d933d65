"""Acceptance suite: one callable per criterion, shared by the CLI `selftest`
subcommand and the pytest acceptance module.  Artifacts contain no timing
information so identical seeds reproduce identical bytes."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import (
    cd_upper_bound,
    lower_bound_fixed_point,
    ppt_time,
    ppt_time_certificate,
    unitary_upper_bound_depolarizing,
)
from .channels import (
    Isometry,
    QuantumChannel,
    amplitude_damping_channel,
    depolarizing_channel,
    identity_channel,
    pauli_depolarizing_channel,
    random_channel,
)
from .classical import bit_flip_local_sum, classical_alpha_check, classical_repetition
from .decoupling import (
    decoupling_bound_check,
    decoupling_experiment,
    decoding_error,
    uhlmann_decoder,
)
from .entropy import (
    Ensemble,
    apply_channel_to_ensemble,
    fannes_audenaert_bound,
    holevo_chi,
    von_neumann,
)
from .lindblad import depolarizing_liouvillian, from_channel
from .linalg import (
    default_rng,
    expm,
    max_entangled,
    random_density,
    trace_norm,
    vec,
)
from .minentropy import min_entropy
from .qec import (
    alpha_lower_bound_check,
    f_closed_form,
    f_series,
    five_qubit_code,
    verify_code_conditions,
)

DEFAULT_SEED = 20240501


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# criterion 1

def check_depolarizing_closed_form() -> CheckResult:
    lv = from_channel(pauli_depolarizing_channel())
    eye2 = np.eye(2, dtype=complex)
    s_cd = np.outer(vec(eye2 / 2), vec(eye2).conj())
    eye_sup = np.eye(4, dtype=complex)
    worst = 0.0
    for t in np.arange(0.1, 3.0 + 1e-9, 0.1):
        lam = math.exp(-4 * t / 3)
        analytic = (1 - lam) * s_cd + lam * eye_sup
        worst = max(worst, float(np.linalg.norm(expm(t * lv.superop) - analytic)))
    return CheckResult(1, "depolarizing semigroup closed form",
                       worst <= 1e-10, f"max superop Frobenius deviation {worst:.3e}")


# ---------------------------------------------------------------------------
# criterion 2

def check_ppt_time() -> CheckResult:
    lv = from_channel(pauli_depolarizing_channel())
    t_star = ppt_time(lv, t_max=3.0)
    target = 0.75 * math.log(3)
    below, above = ppt_time_certificate(lv, t_star)
    ok = (
        abs(t_star - target) <= 1e-6
        and below < -1e-9
        and above > -1e-9
        and t_star <= 1.5
    )
    return CheckResult(
        2, "PPT time of the uniform-Pauli generator", ok,
        f"t*={t_star:.8f} vs (3/4)ln3={target:.8f}; certificate eigenvalues "
        f"{below:.3e} / {above:.3e}; consistent with the sufficient t>=3/2 claim",
    )


# ---------------------------------------------------------------------------
# criterion 3

def check_five_qubit_conditions() -> CheckResult:
    code = five_qubit_code()
    eq24, eq25 = verify_code_conditions(code, pauli_depolarizing_channel())
    ok = eq24 <= 1e-10 and eq25 <= 1e-9
    return CheckResult(3, "five-qubit code conditions", ok,
                       f"recovery-fixes-code residual {eq24:.3e}, "
                       f"local-sum correction residual {eq25:.3e}")


# ---------------------------------------------------------------------------
# criterion 4

def check_continuous_correction() -> tuple[CheckResult, list[dict]]:
    code = five_qubit_code()
    rows = []
    ok = True
    for t in (0.5, 1.0, 2.0):
        for r in (10.0, 50.0, 200.0):
            fe, fb, passed = alpha_lower_bound_check(code, t, r)
            rows.append({"t": t, "r": r, "F_e": fe, "f_bound": fb, "pass": passed})
            ok = ok and passed
    fe_big, fb_big, passed_big = alpha_lower_bound_check(code, 1.0, 1000.0)
    threshold_ok = fe_big >= 0.99
    rows.append({"t": 1.0, "r": 1000.0, "F_e": fe_big, "f_bound": fb_big,
                 "pass": passed_big and threshold_ok})
    ok = ok and passed_big and threshold_ok
    detail = (f"min F_e - f margin {min(r['F_e'] - r['f_bound'] for r in rows):.3e}; "
              f"F_e(t=1, r=1e3) = {fe_big:.6f}")
    return CheckResult(4, "continuous correction bound", ok, detail), rows


# ---------------------------------------------------------------------------
# criterion 5

def check_f_consistency() -> tuple[CheckResult, list[dict]]:
    worst = 0.0
    rows = []
    for t in np.arange(0.0, 5.0 + 1e-9, 0.1):
        for r in np.arange(0.0, 20.0 + 1e-9, 0.5):
            fc = f_closed_form(float(t), float(r))
            fs = f_series(float(t), float(r), k_terms=200)
            worst = max(worst, abs(fc - fs))
            rows.append({"t": float(t), "r": float(r), "f": fc})
    edge_r0 = max(
        abs(f_closed_form(float(t), 0.0) - math.exp(-float(t)) * (1 + float(t)))
        for t in np.arange(0.0, 5.0 + 1e-9, 0.1)
    )
    edge_t0 = max(abs(f_closed_form(0.0, float(r)) - 1.0)
                  for r in np.arange(0.0, 20.0 + 1e-9, 0.5))
    ok = worst <= 1e-8 and edge_r0 <= 1e-12 and edge_t0 == 0.0
    return CheckResult(
        5, "f closed form vs series", ok,
        f"max |closed - series| {worst:.3e}; r=0 edge {edge_r0:.3e}; t=0 edge {edge_t0:.3e}",
    ), rows


# ---------------------------------------------------------------------------
# criterion 6

def check_classical_repetition() -> tuple[CheckResult, list[dict]]:
    v, r_mat, _ = classical_repetition()
    exact_24 = bool(np.array_equal(r_mat @ v, v))
    exact_25 = bool(np.array_equal(r_mat @ bit_flip_local_sum().astype(np.int64) @ v, 3 * v))
    rows = []
    ok = exact_24 and exact_25
    for t in (0.5, 1.0, 2.0):
        for r in (10.0, 100.0, 1000.0):
            tv, fb, passed = classical_alpha_check(t, r)
            rows.append({"t": t, "r": r, "tv_distance": tv, "f_bound": fb, "pass": passed})
            ok = ok and passed
    tv_thresh, _, _ = classical_alpha_check(1.0, 500.0)
    ok = ok and tv_thresh <= 0.01
    return CheckResult(
        6, "classical repetition code", ok,
        f"integer identities {'hold' if exact_24 and exact_25 else 'FAIL'}; "
        f"tv(1, 500) = {tv_thresh:.5f}",
    ), rows


# ---------------------------------------------------------------------------
# criterion 7

def check_entropy_suite(seed: int) -> CheckResult:
    rng = default_rng(seed)
    # Lemma 5.2 growth under tensor powers of depolarizing channels
    growth_worst = np.inf
    for _ in range(100):
        m = int(rng.integers(1, 4))
        r = float(rng.uniform(0.2, 2.0))
        t = float(rng.uniform(0.05, 3.0))
        rho0 = random_density(2, rng)
        rho = random_density(2**m, rng)
        lam = math.exp(-r * t)
        ch = QuantumChannel.from_superop(
            lam * np.eye(4, dtype=complex)
            + (1 - lam) * np.outer(vec(rho0), vec(np.eye(2, dtype=complex)).conj()),
            2, 2,
        )
        out = rho
        # apply the single-site channel on every factor
        for site in range(m):
            out = _apply_site(ch, out, site, m)
        lhs = von_neumann(out)
        rhs = lam * von_neumann(rho) + (1 - lam) * m * von_neumann(rho0)
        growth_worst = min(growth_worst, lhs - rhs)
    growth_ok = growth_worst >= -1e-9

    fa_worst = np.inf
    for _ in range(1000):
        d = int(rng.integers(2, 4))
        a, b = random_density(d, rng), random_density(d, rng)
        delta = 0.5 * trace_norm(a - b)
        margin = fannes_audenaert_bound(min(delta, 1.0), d) - abs(von_neumann(a) - von_neumann(b))
        fa_worst = min(fa_worst, margin)
    fa_ok = fa_worst >= -1e-12

    chi_worst = np.inf
    for _ in range(100):
        d = int(rng.integers(2, 4))
        n = int(rng.integers(2, 5))
        p = rng.dirichlet(np.ones(n))
        ens = Ensemble.of(list(p), [random_density(d, rng) for _ in range(n)])
        ch = random_channel(d, d, int(rng.integers(1, 4)), rng)
        chi_worst = min(chi_worst, holevo_chi(ens) - holevo_chi(apply_channel_to_ensemble(ch, ens)))
    chi_ok = chi_worst >= -1e-9

    ok = growth_ok and fa_ok and chi_ok
    return CheckResult(
        7, "entropy suite", ok,
        f"growth margin {growth_worst:.3e}; Fannes-Audenaert margin {fa_worst:.3e}; "
        f"chi data-processing margin {chi_worst:.3e}",
    )


def _apply_site(ch: QuantumChannel, rho: np.ndarray, site: int, m: int) -> np.ndarray:
    from .linalg import permute_systems

    dims = [2] * m
    perm = [site] + [i for i in range(m) if i != site]
    moved = permute_systems(rho, dims, perm)
    d_rest = 2 ** (m - 1)
    r4 = moved.reshape(2, d_rest, 2, d_rest)
    out = np.zeros_like(r4)
    for k in ch.kraus:
        out += np.einsum("ai,ixjy,bj->axby", k, r4, k.conj())
    inv = [perm.index(i) for i in range(m)]
    return permute_systems(out.reshape(2 * d_rest, 2 * d_rest), dims, inv)


# ---------------------------------------------------------------------------
# criterion 8

def check_min_entropy() -> CheckResult:
    worst = 0.0
    rng = default_rng(71)
    for d_a in (2, 3, 4):
        for d_b in (2, 3, 4):
            rho_a = random_density(d_a, rng)
            rho_b = random_density(d_b, rng)
            prod = np.kron(rho_a, rho_b)
            analytic = -math.log2(float(np.linalg.eigvalsh(rho_a).max()))
            worst = max(worst, abs(min_entropy(prod, (d_a, d_b)) - analytic))
            mixed = np.eye(d_a * d_b, dtype=complex) / (d_a * d_b)
            worst = max(worst, abs(min_entropy(mixed, (d_a, d_b)) - math.log2(d_a)))
    for d in (2, 3, 4):
        worst = max(worst, abs(min_entropy(max_entangled(d), (d, d)) + math.log2(d)))
    return CheckResult(8, "min-entropy solver vs analytic values",
                       worst <= 1e-6, f"max |solver - analytic| {worst:.3e}")


# ---------------------------------------------------------------------------
# criterion 9

def _decoupling_suite(seed: int) -> list[tuple[str, QuantumChannel, np.ndarray]]:
    rng = default_rng(seed)
    omega2, omega4 = max_entangled(2), max_entangled(4)
    suite = [
        ("dep2_l0.3", depolarizing_channel(2, 0.3), omega2),
        ("dep2_l0.5", depolarizing_channel(2, 0.5), omega2),
        ("dep2_l0.7", depolarizing_channel(2, 0.7), omega2),
        ("amp2_g0.4", amplitude_damping_channel(0.4), omega2),
        ("rand2_k2", random_channel(2, 2, 2, rng), random_density(4, rng)),
        ("dep4_l0.5", depolarizing_channel(4, 0.5), omega4),
        ("rand4_k4", random_channel(4, 4, 4, rng), omega4),
        ("rand4_k2", random_channel(4, 4, 2, rng), omega4),
        ("rand4_k3", random_channel(4, 4, 3, rng), random_density(16, rng)),
        ("dep4_l0.8", depolarizing_channel(4, 0.8), omega4),
    ]
    return suite


def check_decoupling(seed: int, n_samples: int = 200) -> tuple[CheckResult, list[dict]]:
    runs = []
    ok = True
    for idx, (label, ch, probe) in enumerate(_decoupling_suite(seed)):
        emb = Isometry(np.eye(ch.d_in, dtype=complex))
        run = decoupling_experiment(ch, probe, emb, n_samples, seed + idx, label=label)
        lhs, rhs, passed = decoupling_bound_check(run, ch)
        runs.append({"label": label, "mean": lhs, "bound": rhs,
                     "std_error": run.std_error, "pass": passed})
        ok = ok and passed

    uhlmann_worst = np.inf
    rng = default_rng(seed + 101)
    decoder_cases = [
        ("dep2_l0.9", depolarizing_channel(2, 0.9)),
        ("dep2_l0.95", depolarizing_channel(2, 0.95)),
        ("dep2_l0.98", depolarizing_channel(2, 0.98)),
        ("amp2_g0.1", amplitude_damping_channel(0.1)),
        ("rand2_k2", random_channel(2, 2, 2, rng)),
        ("rand3_k2", random_channel(3, 3, 2, rng)),
    ]
    for label, ch in decoder_cases:
        probe = max_entangled(ch.d_in)
        from .channels import complementary

        tc = complementary(ch)
        sigma = tc.apply(np.eye(ch.d_in, dtype=complex) / ch.d_in)
        dec, eps = uhlmann_decoder(ch, sigma, probe)
        err = decoding_error(ch, dec, probe)
        bound = 2 * math.sqrt(max(eps, 0.0) * max(1 - eps / 4, 0.0))
        margin = bound - err
        uhlmann_worst = min(uhlmann_worst, margin)
        runs.append({"label": f"uhlmann_{label}", "eps": eps, "decode_error": err,
                     "bound": bound, "pass": bool(margin >= -1e-8)})
        ok = ok and margin >= -1e-8
    return CheckResult(
        9, "decoupling and Uhlmann decoding", ok,
        f"all decoupling bounds hold (3-sigma); worst Uhlmann margin {uhlmann_worst:.3e}",
    ), runs


# ---------------------------------------------------------------------------
# criterion 10

def check_bound_surfaces() -> CheckResult:
    rho_mixed = np.diag([0.75, 0.25]).astype(complex)
    mono_ok = True
    prev = np.inf
    for t in np.arange(0.0, 3.0 + 1e-9, 0.1):
        val = unitary_upper_bound_depolarizing(1.0, float(t), rho_mixed, 2).value
        if val > prev + 1e-12:
            mono_ok = False
        prev = val
    agree_worst = 0.0
    for r in (0.5, 1.0, 2.0):
        for t in np.arange(0.0, 3.0 + 1e-9, 0.25):
            for d in (2, 4):
                a = unitary_upper_bound_depolarizing(r, float(t), np.eye(d) / d, d).value
                b = cd_upper_bound(r, float(t), d).value
                agree_worst = max(agree_worst, abs(a - b))
    agree_ok = agree_worst <= 1e-12

    lv = depolarizing_liouvillian(1.0, rho_mixed)
    order_ok = True
    worst_gap = np.inf
    for t in np.arange(0.25, 3.0 + 1e-9, 0.25):
        lower = lower_bound_fixed_point(lv, float(t), rho_mixed, k_max=256, c=1.0).value
        upper = unitary_upper_bound_depolarizing(1.0, float(t), rho_mixed, 2).value
        worst_gap = min(worst_gap, upper - lower)
        if lower > upper + 1e-12:
            order_ok = False
    ok = mono_ok and agree_ok and order_ok
    return CheckResult(
        10, "bound surfaces", ok,
        f"monotone-in-t {'ok' if mono_ok else 'FAIL'}; max |Thm-Cor| {agree_worst:.3e}; "
        f"min upper-lower gap {worst_gap:.3e}",
    )


# ---------------------------------------------------------------------------
# orchestration

def run_acceptance(seed: int = DEFAULT_SEED,
                   decoupling_samples: int = 200) -> tuple[list[CheckResult], dict]:
    results: list[CheckResult] = []
    artifacts: dict[str, object] = {}
    results.append(check_depolarizing_closed_form())
    results.append(check_ppt_time())
    results.append(check_five_qubit_conditions())
    res4, rows4 = check_continuous_correction()
    results.append(res4)
    artifacts["five_qubit_continuous.csv"] = (
        ["t", "r", "F_e", "f_bound", "pass"], rows4)
    res5, rows5 = check_f_consistency()
    results.append(res5)
    artifacts["f_surface.csv"] = (["t", "r", "f"], rows5)
    res6, rows6 = check_classical_repetition()
    results.append(res6)
    artifacts["classical_repetition.csv"] = (
        ["t", "r", "tv_distance", "f_bound", "pass"], rows6)
    results.append(check_entropy_suite(seed))
    results.append(check_min_entropy())
    res9, rows9 = check_decoupling(seed, decoupling_samples)
    results.append(res9)
    artifacts["decoupling_runs.json"] = rows9
    results.append(check_bound_surfaces())
    artifacts["summary.json"] = [
        {"criterion": r.criterion, "name": r.name, "passed": r.passed, "detail": r.detail}
        for r in results
    ]
    return results, artifacts


def write_artifacts(artifacts: dict, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in sorted(artifacts.items()):
        path = outdir / name
        if name.endswith(".json"):
            path.write_text(json.dumps(content, indent=2, sort_keys=True) + "\n")
        else:
            header, rows = content
            lines = [",".join(header)]
            for row in rows:
                cells = []
                for h in header:
                    val = row[h]
                    if isinstance(val, bool):
                        cells.append("true" if val else "false")
                    elif isinstance(val, float):
                        cells.append(_fmt(val))
                    else:
                        cells.append(str(val))
                lines.append(",".join(cells))
            path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written

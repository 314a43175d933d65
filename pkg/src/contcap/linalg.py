"""Dense complex linear algebra substrate: eigensolvers, matrix exponential,
norms, partial traces/transposes, Haar sampling and state validation.

All matrices are plain ``numpy.ndarray`` with complex dtype.  Randomness is
always drawn from an explicitly passed ``numpy.random.Generator`` so that equal
seeds give bit-identical results.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERM_TOL = 1e-8
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
EXPM_NORM_CAP = 1e4


def default_rng(seed: int) -> np.random.Generator:
    """Deterministic generator; equal seeds yield identical streams."""
    return np.random.Generator(np.random.PCG64(seed))


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dag(m))) <= tol


def herm_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending, real) and unitary eigenvectors of a Hermitian matrix.

    Satisfies m = U diag(w) U^dag up to ~1e-9 relative Frobenius error.
    Raises ValueError for non-Hermitian input.
    """
    if not is_hermitian(m):
        raise ValueError("herm_eig: input is not Hermitian within tolerance")
    w, u = np.linalg.eigh((m + dag(m)) / 2)
    return w[::-1].copy(), u[:, ::-1].copy()


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring, Padé approximant).

    Rejects inputs with Frobenius norm above 1e4: the result would overflow
    double precision long before that and every caller works at unit scale.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expm: square matrix required")
    if np.linalg.norm(m) > EXPM_NORM_CAP:
        raise ValueError(f"expm: norm exceeds cap {EXPM_NORM_CAP:g}")
    return scipy.linalg.expm(m)


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(ops: list[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def embed_op(op: np.ndarray, site: int, m: int, d: int) -> np.ndarray:
    """I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at position `site` of m factors of dim d."""
    return kron_all(
        [op if i == site else np.eye(d, dtype=complex) for i in range(m)]
    )


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization (Fortran order)."""
    return m.reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return v.reshape(rows, cols, order="F")


def _check_dims(m: np.ndarray, dims: list[int]) -> None:
    if int(np.prod(dims)) != m.shape[0] or m.shape[0] != m.shape[1]:
        raise ValueError(f"dims {dims} incompatible with shape {m.shape}")


def partial_trace(m: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Trace out all subsystems not listed in `keep` (kept order preserved)."""
    _check_dims(m, dims)
    keep = sorted(keep)
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError("keep indices out of range")
    n = len(dims)
    t = m.reshape(dims + dims)
    # contract traced subsystems pairwise, highest index first
    traced = [i for i in range(n) if i not in keep]
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + n)
        n -= 1
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose(m: np.ndarray, dims: list[int], which: list[int]) -> np.ndarray:
    """Transpose the subsystems listed in `which`; involution."""
    _check_dims(m, dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in which:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def permute_systems(m: np.ndarray, dims: list[int], perm: list[int]) -> np.ndarray:
    """Reorder tensor factors of a matrix: output system i is input system perm[i]."""
    _check_dims(m, dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(perm) + [p + n for p in perm]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def permute_vector(v: np.ndarray, dims: list[int], perm: list[int]) -> np.ndarray:
    if int(np.prod(dims)) != v.shape[0]:
        raise ValueError("dims incompatible with vector length")
    return v.reshape(dims).transpose(perm).reshape(-1)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Root fidelity F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)) = ||sqrt(rho) sqrt(sigma)||_1."""
    w, u = herm_eig(rho)
    sq = (u * np.sqrt(np.clip(w, 0, None))) @ dag(u)
    return min(1.0, trace_norm(sq @ _sqrtm_psd(sigma)))


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    w, u = herm_eig(m)
    return (u * np.sqrt(np.clip(w, 0, None))) @ dag(u)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via Ginibre + QR with phase-fixed R diagonal."""
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(np.where(diag == 0, 1, diag)), 1.0)
    return q * phases


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt random density matrix from a Ginibre factor."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ dag(g)
    return rho / np.real(np.trace(rho))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + dag(g)) / 2


def assert_density(rho: np.ndarray, tol_herm: float = TRACE_TOL,
                   tol_eig: float = TRACE_TOL, tol_tr: float = TRACE_TOL) -> None:
    """Validate the density-matrix invariants; raises ValueError on violation."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - dag(rho))) > tol_herm:
        raise ValueError("density matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if w.min() < -tol_eig:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
    if abs(np.real(np.trace(rho)) - 1.0) > tol_tr:
        raise ValueError("density matrix trace differs from 1")


def is_density(rho: np.ndarray, tol: float = TRACE_TOL) -> bool:
    try:
        assert_density(rho, tol, tol, tol)
        return True
    except ValueError:
        return False


def project_to_density(m: np.ndarray) -> np.ndarray:
    """Hermitianize, clip negative eigenvalues, renormalize the trace."""
    h = (m + dag(m)) / 2
    w, u = np.linalg.eigh(h)
    w = np.clip(w, 0, None)
    rho = (u * w) @ dag(u)
    tr = np.real(np.trace(rho))
    if tr <= 0:
        raise ValueError("cannot project to a density matrix: non-positive trace")
    return rho / tr


def basis_state(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def max_entangled(d: int) -> np.ndarray:
    """Maximally entangled state omega on C^d ⊗ C^d (as a density matrix)."""
    v = max_entangled_vec(d)
    return np.outer(v, v.conj())


def max_entangled_vec(d: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    return v / np.sqrt(d)

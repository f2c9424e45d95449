"""Dense linear algebra, tensor-product bookkeeping and propagators.

States and operators are plain ``numpy`` complex arrays. A
:class:`HilbertStructure` travels alongside them wherever the factor layout
matters (embedding single-factor operators, partial traces).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import kernels


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-10
    unitarity: float = 1e-10
    normalization: float = 1e-12
    trace: float = 1e-10
    positivity: float = 1e-10


TOL = Tolerances()


class HoloDFSError(Exception):
    """Base class for library errors."""


class ValidationError(HoloDFSError, ValueError):
    """Inputs violate a documented precondition."""


class NumericalError(HoloDFSError, RuntimeError):
    """A numerical check failed (non-unitarity, non-finite values, ...)."""


@dataclass(frozen=True)
class HilbertStructure:
    factor_dims: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValidationError(f"factor dimensions must be positive, got {dims}")
        labels = tuple(self.labels) or tuple(f"f{i}" for i in range(len(dims)))
        if len(labels) != len(dims):
            raise ValidationError("one label per factor required")
        for d, lab in zip(dims, labels):
            if d < 2 and lab != "phonon":
                raise ValidationError(f"factor {lab!r} must have dimension >= 2")
        object.__setattr__(self, "factor_dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def concat(self, other: "HilbertStructure") -> "HilbertStructure":
        return HilbertStructure(self.factor_dims + other.factor_dims, self.labels + other.labels)

    def embed(self, op: np.ndarray, factor: int | str) -> np.ndarray:
        """Lift a single-factor operator to the full space (identity elsewhere)."""
        k = self.index(factor) if isinstance(factor, str) else factor
        op = np.asarray(op, dtype=complex)
        if op.shape != (self.factor_dims[k],) * 2:
            raise ValidationError(f"operator shape {op.shape} does not match factor {k}")
        mats = [np.eye(d) for d in self.factor_dims]
        mats[k] = op
        return tensor_product(mats)

    def basis_state(self, indices: Sequence[int]) -> np.ndarray:
        if len(indices) != len(self.factor_dims):
            raise ValidationError("one index per factor required")
        flat = int(np.ravel_multi_index(tuple(indices), self.factor_dims))
        v = np.zeros(self.dim, dtype=complex)
        v[flat] = 1.0
        return v


def tensor_product(items: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product in the given factor order.

    All items must be of the same kind: vectors (1-d) or square matrices.
    """
    if not items:
        raise ValidationError("tensor_product needs at least one factor")
    arrs = [np.asarray(x, dtype=complex) for x in items]
    ndims = {a.ndim for a in arrs}
    if len(ndims) != 1 or ndims.pop() not in (1, 2):
        raise ValidationError("tensor_product factors must all be vectors or all be matrices")
    if arrs[0].ndim == 2 and any(a.shape[0] != a.shape[1] for a in arrs):
        raise ValidationError("operator factors must be square")
    return reduce(np.kron, arrs)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - dagger(a)))) if np.size(a) else 0.0


def unitarity_error(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[-1]))))


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral-norm distance."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b), ord=2))


def matrix_exponential(a: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * a) for a square matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix_exponential needs a square matrix")
    with np.errstate(invalid="ignore", over="ignore"):
        m = scale * a
    if not np.all(np.isfinite(m)):
        raise NumericalError("non-finite entries in matrix exponential argument")
    return scipy.linalg.expm(m)


def expm_hermitian(h: np.ndarray, dt: float | np.ndarray) -> np.ndarray:
    """exp(-i h dt) for a Hermitian matrix or a stack of them.

    Uses a batched eigendecomposition so the result is unitary to rounding.
    ``dt`` may be a scalar or one value per stacked matrix.
    """
    h = np.asarray(h, dtype=complex)
    w, v = np.linalg.eigh(h)
    dt = np.asarray(dt, dtype=float)
    if dt.ndim:
        dt = dt[:, None]
    phase = np.exp(-1j * w * dt)
    return (v * phase[..., None, :]) @ dagger(v)


def step_propagators(
    h_of_t: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Midpoint-rule step propagators exp(-i H(t_mid) dt), earliest first."""
    if int(steps) < 1:
        raise ValidationError("steps must be >= 1")
    steps = int(steps)
    dt = (t1 - t0) / steps
    mids = t0 + (np.arange(steps) + 0.5) * dt
    hs = np.array([h_of_t(t) for t in mids], dtype=complex)
    return step_propagators_from_samples(hs, dt)


def step_propagators_from_samples(hs: np.ndarray, dt: float | np.ndarray) -> np.ndarray:
    err = hermiticity_error(hs)
    if err > TOL.hermiticity:
        raise ValidationError(f"Hamiltonian sample not Hermitian (max |H - H^dag| = {err:.3g})")
    if not np.all(np.isfinite(hs)):
        raise NumericalError("non-finite Hamiltonian sample")
    return expm_hermitian(hs, dt)


def time_ordered_propagator(
    h_of_t: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Time-ordered propagator from t0 to t1, latest step leftmost."""
    return kernels.ordered_product(step_propagators(h_of_t, t0, t1, steps))


def eigen_hermitian(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""
    a = np.asarray(a, dtype=complex)
    err = hermiticity_error(a)
    if err > TOL.hermiticity:
        raise ValidationError(f"matrix not Hermitian (max |A - A^dag| = {err:.3g})")
    try:
        return np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc


def fidelity_gate(u: np.ndarray, v: np.ndarray, projector: np.ndarray | None = None) -> float:
    """|Tr(P U^dag V P)| / rank(P); insensitive to a global phase."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    p = np.eye(u.shape[0]) if projector is None else np.asarray(projector, dtype=complex)
    rank = float(np.real(np.trace(p)))
    if rank < 0.5:
        raise ValidationError("projector has zero rank")
    return float(abs(np.trace(p @ dagger(u) @ v @ p)) / round(rank))


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if hermiticity_error(rho) > TOL.hermiticity:
        raise ValidationError("density matrix not Hermitian")
    if abs(np.trace(rho) - 1) > TOL.trace:
        raise ValidationError("density matrix trace differs from 1")
    if np.linalg.eigvalsh(rho)[0] < -TOL.positivity:
        raise ValidationError("density matrix has a negative eigenvalue")
    return rho


def partial_trace(rho: np.ndarray, structure: HilbertStructure, keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the factors listed in ``keep`` (order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(structure.factor_dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"invalid factor indices {keep} for {n} factors")
    dims = structure.factor_dims
    t = np.asarray(rho, dtype=complex).reshape(dims + dims)
    # einsum over traced factors: pair row/col index letters
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for k in range(n):
        if k not in keep:
            cols[k] = rows[k]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    red = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = int(np.prod([dims[k] for k in keep]))
    return red.reshape(d, d)


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValidationError("cannot normalize the zero vector")
    return psi / nrm


def projector(vectors: Sequence[np.ndarray]) -> np.ndarray:
    v = np.array(vectors, dtype=complex)
    return v.T @ v.conj()

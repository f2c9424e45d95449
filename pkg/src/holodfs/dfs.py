"""Pair-bit encoding, logical Pauli operators and the collective-dephasing generator.

Sign convention (used everywhere): sigma_z|0> = +|0>, sigma_z|1> = -|1>.
The Pauli matrices of a four-level ion act on the {|0>, |1>} block and vanish
on |a> and |e>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    TOL,
    HilbertStructure,
    ValidationError,
    tensor_product,
    unitarity_error,
)
from .ion_model import LEVEL_INDEX

_QUBIT_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def ion_pauli(which: str) -> np.ndarray:
    """Pauli matrix on the {|0>, |1>} block of a four-level ion."""
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = _QUBIT_PAULI[which]
    return m


def level_ket(label: str) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[LEVEL_INDEX[label]] = 1.0
    return v


def product_ket(labels: str) -> np.ndarray:
    """|l1 l2 ...> over four-level ions, e.g. ``product_ket("01")``."""
    return tensor_product([level_ket(c) for c in labels])


def collective_z(n_ions: int, ions=None) -> np.ndarray:
    """Sum of sigma_z over ``ions`` (all by default) in an ``n_ions`` register."""
    ions = range(n_ions) if ions is None else ions
    z = np.zeros((4**n_ions,) * 2, dtype=complex)
    for i in ions:
        mats = [np.eye(4)] * n_ions
        mats[i] = ion_pauli("z")
        z += tensor_product(mats)
    return z


@dataclass(frozen=True)
class LogicalEncoding:
    """|0>_L = |01>, |1>_L = |10>, |A>_L = |aa>, |E>_L = |ee> on one ion pair."""

    ion_pair: tuple[int, int] = (0, 1)
    n_ions: int = 2

    def __post_init__(self):
        j1, j2 = self.ion_pair
        if j1 == j2 or not (0 <= j1 < self.n_ions and 0 <= j2 < self.n_ions):
            raise ValidationError(f"invalid ion pair {self.ion_pair} for {self.n_ions} ions")

    @property
    def structure(self) -> HilbertStructure:
        return HilbertStructure((4,) * self.n_ions, tuple(f"ion{i}" for i in range(self.n_ions)))

    def physical(self, pair_labels: str) -> np.ndarray:
        """Product state with the pair in ``pair_labels`` and other ions in |0>."""
        labels = ["0"] * self.n_ions
        labels[self.ion_pair[0]], labels[self.ion_pair[1]] = pair_labels
        return product_ket("".join(labels))

    @property
    def code_basis(self) -> np.ndarray:
        return np.array([self.physical("01"), self.physical("10")])

    @property
    def ancilla_basis(self) -> dict:
        return {"A": self.physical("aa"), "E": self.physical("ee")}

    def pair_operator(self, op1: np.ndarray, op2: np.ndarray) -> np.ndarray:
        mats = [np.eye(4)] * self.n_ions
        mats[self.ion_pair[0]] = op1
        mats[self.ion_pair[1]] = op2
        return tensor_product(mats)

    def dephasing_generator(self) -> np.ndarray:
        return collective_z(self.n_ions, self.ion_pair)


@dataclass(frozen=True)
class CollectiveDephasingGenerator:
    """Z = sigma_z^{j1} + sigma_z^{j2}; the bath couples through Z (x) B."""

    encoding: LogicalEncoding = LogicalEncoding()

    @property
    def Z(self) -> np.ndarray:
        return self.encoding.dephasing_generator()


def encode(logical: np.ndarray, enc: LogicalEncoding = LogicalEncoding()) -> np.ndarray:
    logical = np.asarray(logical, dtype=complex)
    if logical.shape != (2,):
        raise ValidationError("logical state must have two amplitudes")
    if abs(np.linalg.norm(logical) - 1) > TOL.normalization * 10:
        raise ValidationError("logical state must be normalized")
    return logical @ enc.code_basis


@dataclass(frozen=True)
class Decoded:
    logical: np.ndarray | None
    leakage: float

    @property
    def flagged(self) -> bool:
        return self.logical is None


def decode(physical: np.ndarray, enc: LogicalEncoding = LogicalEncoding()) -> Decoded:
    """Project onto span{|01>, |10>} and renormalize; leakage = 1 - ||P psi||^2.

    A state with no code-space component returns ``logical=None`` and
    leakage 1 instead of raising.
    """
    physical = np.asarray(physical, dtype=complex)
    if physical.shape != (enc.structure.dim,):
        raise ValidationError("state does not live on the encoding's physical space")
    amps = enc.code_basis.conj() @ physical
    weight = float(np.vdot(amps, amps).real)
    total = float(np.vdot(physical, physical).real)
    leakage = max(0.0, 1.0 - weight / total)
    if weight < 1e-300:
        return Decoded(None, 1.0)
    return Decoded(amps / np.sqrt(weight), leakage)


def logical_pauli(which: str, enc: LogicalEncoding = LogicalEncoding()) -> np.ndarray:
    """R_x, R_y, R_z on the physical register."""
    sx, sy, sz = ion_pauli("x"), ion_pauli("y"), ion_pauli("z")
    one = np.eye(4)
    if which == "x":
        return 0.5 * (enc.pair_operator(sx, sx) + enc.pair_operator(sy, sy))
    if which == "y":
        return 0.5 * (enc.pair_operator(sy, sx) - enc.pair_operator(sx, sy))
    if which == "z":
        return 0.5 * (enc.pair_operator(sz, one) - enc.pair_operator(one, sz))
    raise ValidationError(f"unknown logical Pauli {which!r}")


def restrict_to_code(op: np.ndarray, enc: LogicalEncoding = LogicalEncoding()) -> np.ndarray:
    b = enc.code_basis
    return b.conj() @ op @ b.T


def dfs_membership(state: np.ndarray, gen: CollectiveDephasingGenerator = CollectiveDephasingGenerator()) -> float:
    """||Z psi||."""
    return float(np.linalg.norm(gen.Z @ np.asarray(state, dtype=complex)))


def lift_logical_gate(u2: np.ndarray, enc: LogicalEncoding = LogicalEncoding()) -> np.ndarray:
    """Act as ``u2`` on the code space and as the identity on its complement."""
    u2 = np.asarray(u2, dtype=complex)
    if u2.shape != (2, 2) or unitarity_error(u2) > TOL.unitarity:
        raise ValidationError("lift_logical_gate needs a 2x2 unitary")
    b = enc.code_basis
    p = b.T @ b.conj()
    return np.eye(enc.structure.dim) - p + b.T @ u2 @ b.conj()


# ------------------------------------------------ effective-space embeddings


def effective_embedding(family: str, encoded: bool = True) -> np.ndarray:
    """Physical product states (rows) for each effective basis state.

    Single-qubit families use (|0>_L, |1>_L, |E>_L, |A>_L); ``u3`` uses
    (|00>, |01>, |10>, |11>, |EE>, |AA>)_L. With ``encoded=False`` the same
    protocol is mapped onto bare ions (|0>_L -> |0>, |1>_L -> |1>, E -> e,
    A -> a), the unprotected reference.
    """
    if family in ("u1", "u2"):
        if encoded:
            return np.array([product_ket(s) for s in ("01", "10", "ee", "aa")])
        return np.array([product_ket(s) for s in ("0", "1", "e", "a")])
    if family == "u3":
        if encoded:
            # ion order j1 j2 k1 k2
            code = {"0": "01", "1": "10"}
            rows = [code[x] + code[y] for x, y in ("00", "01", "10", "11")]
            rows += ["e0e0", "a0a0"]
            return np.array([product_ket(s) for s in rows])
        return np.array([product_ket(s) for s in ("00", "01", "10", "11", "ee", "aa")])
    raise ValidationError(f"unknown family {family!r}")


def effective_z_weights(family: str, encoded: bool = True) -> np.ndarray:
    """Collective sigma_z eigenvalue of each effective basis state.

    Z sums over every ion of the register; all effective basis states are
    product states and hence Z eigenstates.
    """
    rows = effective_embedding(family, encoded)
    n_ions = int(round(np.log(rows.shape[1]) / np.log(4)))
    z = collective_z(n_ions)
    zz = rows.conj() @ z @ rows.T
    if np.max(np.abs(zz - np.diag(np.diag(zz)))) > 1e-12:
        raise ValidationError("effective basis is not diagonal in Z")
    return np.real(np.diag(zz))


__all__ = [
    "CollectiveDephasingGenerator",
    "Decoded",
    "LogicalEncoding",
    "collective_z",
    "decode",
    "dfs_membership",
    "effective_embedding",
    "effective_z_weights",
    "encode",
    "ion_pauli",
    "lift_logical_gate",
    "logical_pauli",
    "product_ket",
    "restrict_to_code",
]

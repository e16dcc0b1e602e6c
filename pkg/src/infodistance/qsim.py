"""Dense simulation of small qubit systems and +/-1 observables.

Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
computational basis index.  Everything is dense ``complex128``; a state of
``N`` qubits costs ``16 * 2**N`` bytes, and ``N`` is capped at 20.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from .distance import JointDistribution
from .exceptions import NumericalError, PreconditionError

__all__ = [
    "MAX_QUBITS",
    "PAULI",
    "PauliString",
    "XYMeasurement",
    "StateVector",
    "DensityMatrix",
    "ghz_state",
    "random_pure_state",
    "random_density_matrix",
    "pauli_mul",
    "xy_matrix",
    "observable_matrix",
    "local_product_matrix",
    "expectation",
    "ghz_xy_expectation_closed_form",
    "commutes",
    "product_operator",
    "outcome_distribution",
]

MAX_QUBITS = 20
COMMUTE_TOL = 1e-10
INVOLUTION_TOL = 1e-12
IMAG_TOL = 1e-10
STATE_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (power of i, result)
_PAULI_TABLE = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}
_PHASES = (1, 1j, -1, -1j)
_PHASE_NAMES = {"+1": 0, "1": 0, "+i": 1, "i": 1, "-1": 2, "-i": 3}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with a phase ``i**phase_power``.

    >>> PauliString("XX") * PauliString("YY")
    PauliString('ZZ', phase='-1')
    """

    factors: str
    phase_power: int = 0

    def __post_init__(self):
        factors = self.factors.upper().replace("1", "I")
        if not factors or any(f not in "IXYZ" for f in factors):
            raise ValueError(f"bad Pauli string {self.factors!r}")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "phase_power", self.phase_power % 4)

    @classmethod
    def parse(cls, factors: str, phase: str = "+1") -> "PauliString":
        try:
            power = _PHASE_NAMES[phase.replace(" ", "")]
        except KeyError:
            raise ValueError(f"unknown phase {phase!r}") from None
        return cls(factors, power)

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_power]

    @property
    def phase_name(self) -> str:
        return ("+1", "+i", "-1", "-i")[self.phase_power]

    @property
    def num_qubits(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        return self.phase * reduce(np.kron, (PAULI[f] for f in self.factors))

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __repr__(self):
        if self.phase_power == 0:
            return f"PauliString({self.factors!r})"
        return f"PauliString({self.factors!r}, phase={self.phase_name!r})"


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"length mismatch: {a.num_qubits} vs {b.num_qubits}")
    power = a.phase_power + b.phase_power
    out = []
    for fa, fb in zip(a.factors, b.factors):
        p, f = _PAULI_TABLE[fa, fb]
        power += p
        out.append(f)
    return PauliString("".join(out), power)


@dataclass(frozen=True)
class XYMeasurement:
    """Equatorial observable ``cos(angle) X + sin(angle) Y`` on one qubit."""

    angle: float
    qubit: int = 0

    def local_matrix(self) -> np.ndarray:
        return xy_matrix(self.angle)


def xy_matrix(angle: float) -> np.ndarray:
    # exact off-diagonal form keeps the involution error at the rounding level
    phase = np.exp(1j * angle)
    return np.array([[0, np.conj(phase)], [phase, 0]], dtype=complex)


def _check_qubits(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _embed(local: np.ndarray, qubit: int, n: int) -> np.ndarray:
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    left = np.eye(2**qubit, dtype=complex)
    right = np.eye(2 ** (n - qubit - 1), dtype=complex)
    return np.kron(np.kron(left, local), right)


def observable_matrix(spec, n: int) -> np.ndarray:
    """Dense ``2**n``-dimensional matrix for a Pauli string or XY measurement."""
    _check_qubits(n)
    if isinstance(spec, PauliString):
        if spec.num_qubits != n:
            raise ValueError(f"Pauli string acts on {spec.num_qubits} qubits, expected {n}")
        return spec.matrix()
    if isinstance(spec, XYMeasurement):
        return _embed(spec.local_matrix(), spec.qubit, n)
    raise TypeError(f"unsupported observable spec {spec!r}")


def local_product_matrix(specs: Sequence[XYMeasurement], n: int) -> np.ndarray:
    """Tensor product of XY measurements on distinct qubits, identity elsewhere."""
    _check_qubits(n)
    factors = [PAULI["I"]] * n
    for s in specs:
        if not 0 <= s.qubit < n:
            raise ValueError(f"qubit {s.qubit} out of range for {n} qubits")
        if factors[s.qubit] is not PAULI["I"]:
            raise ValueError(f"two measurements on qubit {s.qubit}")
        factors[s.qubit] = s.local_matrix()
    return reduce(np.kron, factors)


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if amps.size < 2 or 2**n != amps.size:
            raise ValueError(f"amplitude count {amps.size} is not a power of two >= 2")
        _check_qubits(n)
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValueError(f"state not normalized: squared norm {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        dim = rho.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or 2**n != dim:
            raise ValueError(f"dimension {dim} is not a power of two >= 2")
        _check_qubits(n)
        if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > STATE_TOL:
            raise ValueError(f"trace {np.trace(rho).real!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix is not positive semidefinite")
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    @property
    def num_qubits(self) -> int:
        return self.entries.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


State = Union[StateVector, DensityMatrix]


def ghz_state(n: int) -> StateVector:
    """``(|0...0> + |1...1>) / sqrt(2)`` on ``n`` qubits."""
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"GHZ state needs 2 <= n <= {MAX_QUBITS}, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return StateVector(amps)


def random_pure_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state from normalized complex Gaussian amplitudes."""
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(amps / np.linalg.norm(amps))


def random_density_matrix(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Mixed state ``G G^dagger / tr(G G^dagger)`` with Gaussian ``G``."""
    dim = 2**n
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def expectation(state: State, obs: np.ndarray) -> float:
    """``<psi|O|psi>`` or ``tr(rho O)``, checked to be real."""
    obs = np.asarray(obs)
    if obs.shape != (state.dim, state.dim):
        raise ValueError(f"observable shape {obs.shape} does not match state dimension {state.dim}")
    if isinstance(state, StateVector):
        val = np.vdot(state.amplitudes, obs @ state.amplitudes)
    else:
        val = np.einsum("ij,ji->", state.entries, obs)
    if abs(val.imag) >= IMAG_TOL:
        raise NumericalError(f"expectation has imaginary part {val.imag!r}; observable not Hermitian?")
    return float(val.real)


def ghz_xy_expectation_closed_form(angles: Sequence[float]) -> float:
    """GHZ expectation of a tensor product of XY measurements: ``cos(sum(angles))``."""
    if len(angles) < 2:
        raise ValueError("need at least two angles")
    return float(np.cos(np.sum(angles)))


def commutes(a: np.ndarray, b: np.ndarray, tol: float = COMMUTE_TOL) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.max(np.abs(a @ b - b @ a)) < tol)


def _require_commuting(observables: Sequence[np.ndarray]) -> None:
    for i, j in itertools.combinations(range(len(observables)), 2):
        if not commutes(observables[i], observables[j]):
            raise PreconditionError(f"observables {i} and {j} do not commute")


def product_operator(observables: Sequence[np.ndarray]) -> tuple[np.ndarray, int | None]:
    """Ordered product of mutually commuting observables.

    Returns ``(matrix, scalar)`` where ``scalar`` is +1 or -1 if the product
    equals that multiple of the identity within 1e-10, else ``None``.
    """
    if not observables:
        raise ValueError("need at least one observable")
    mats = [np.asarray(o, dtype=complex) for o in observables]
    _require_commuting(mats)
    prod = reduce(np.matmul, mats)
    eye = np.eye(prod.shape[0])
    scalar = None
    for c in (1, -1):
        if np.max(np.abs(prod - c * eye)) < COMMUTE_TOL:
            scalar = c
    return prod, scalar


def outcome_distribution(state: State, observables: Sequence[np.ndarray],
                         labels: Sequence[str]) -> JointDistribution:
    """Joint outcome distribution of mutually commuting +/-1 observables.

    ``P(s) = tr(rho * prod_k (I + s_k O_k) / 2)``.
    """
    if len(observables) != len(labels):
        raise ValueError("one label per observable required")
    mats = [np.asarray(o, dtype=complex) for o in observables]
    dim = state.dim
    eye = np.eye(dim)
    for i, m in enumerate(mats):
        if m.shape != (dim, dim):
            raise ValueError(f"observable {i} has shape {m.shape}, state dimension is {dim}")
        if np.max(np.abs(m @ m - eye)) > INVOLUTION_TOL:
            raise PreconditionError(f"observable {i} does not square to the identity")
    _require_commuting(mats)
    k = len(mats)
    table = np.empty((2,) * k)
    for idx in itertools.product((0, 1), repeat=k):
        proj = eye.astype(complex)
        for bit, m in zip(idx, mats):
            proj = proj @ ((eye + (1 - 2 * bit) * m) / 2)
        table[idx] = expectation(state, proj)
    if table.min() < -1e-12:
        raise NumericalError(f"negative outcome probability {table.min()!r}")
    table = np.clip(table, 0.0, None)
    return JointDistribution(labels, table)

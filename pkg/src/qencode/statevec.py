"""Dense state vectors and the gate/pulse operations acting on them.

Basis index ``b`` encodes qubit ``j`` in bit ``j``; qubit 0 is the data
qubit. Operations never modify their input and return a new
:class:`StateVector`. Pulse angles are ``theta = u * t`` with hbar = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateBranchError, InvalidArgumentError

MAX_QUBITS = 24
NORM_TOL = 1e-12
DEGENERATE_PROB = 1e-15

_SQRT_HALF = 1.0 / math.sqrt(2.0)
H_GATE = ((_SQRT_HALF, _SQRT_HALF), (_SQRT_HALF, -_SQRT_HALF))
X_GATE = ((0, 1), (1, 0))
Z_GATE = ((1, 0), (0, -1))


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidArgumentError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        if self.amps.shape != (1 << self.n_qubits,):
            raise InvalidArgumentError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {self.amps.shape}")

    @classmethod
    def from_amplitudes(cls, amps, normalize=False) -> "StateVector":
        """Build a state from any 1-D amplitude sequence of length 2**n."""
        arr = np.array(amps, dtype=np.complex128).ravel()
        dim = arr.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or dim != 1 << n:
            raise InvalidArgumentError(f"length {dim} is not a power of two >= 2")
        norm = np.linalg.norm(arr)
        if normalize:
            if norm == 0:
                raise InvalidArgumentError("cannot normalize the zero vector")
            arr /= norm
        elif abs(norm - 1.0) > 1e-10:
            raise InvalidArgumentError(f"amplitudes not normalized (norm {norm})")
        return cls(n, arr)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class LogicalAmplitudes:
    alpha: complex
    beta: complex

    def __post_init__(self):
        total = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(total - 1.0) > NORM_TOL:
            raise InvalidArgumentError(f"|alpha|^2 + |beta|^2 = {total!r}, expected 1")

    @classmethod
    def random(cls, rng: np.random.Generator) -> "LogicalAmplitudes":
        """Haar-random qubit amplitudes."""
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z /= np.linalg.norm(z)
        return cls(complex(z[0]), complex(z[1]))


class PulseKind(str, Enum):
    JX2 = "Jx2"
    JX = "Jx"
    CZ = "CZ"
    CNOT = "CNOT"
    H = "H"
    X = "X"
    Z = "Z"
    RZ = "Rz"
    MEASURE_Z = "MeasureZ"
    PAULI_PARITY = "PauliStringParity"


ENTANGLING_KINDS = frozenset({PulseKind.JX2, PulseKind.CZ, PulseKind.CNOT})


@dataclass(frozen=True)
class PulseSpec:
    kind: PulseKind
    targets: tuple
    theta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PulseKind(self.kind))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise InvalidArgumentError(f"duplicate targets {self.targets}")
        if self.theta is not None and not math.isfinite(self.theta):
            raise InvalidArgumentError("theta must be finite")

    def to_dict(self):
        d = {"kind": self.kind.value, "targets": list(self.targets)}
        if self.theta is not None:
            d["theta"] = self.theta
        return d


@dataclass(frozen=True)
class MeasurementRecord:
    qubit: int
    outcome: int
    probability: float

    def to_dict(self):
        return {"qubit": self.qubit, "outcome": self.outcome, "probability": self.probability}


def _check_qubit(s: StateVector, q: int):
    if not 0 <= q < s.n_qubits:
        raise InvalidArgumentError(f"qubit {q} out of range for {s.n_qubits} qubits")


def _check_targets(s: StateVector, targets: Iterable[int]) -> tuple:
    targets = tuple(int(t) for t in targets)
    if not targets:
        raise InvalidArgumentError("targets must be non-empty")
    if len(set(targets)) != len(targets):
        raise InvalidArgumentError(f"duplicate targets {targets}")
    for t in targets:
        _check_qubit(s, t)
    return targets


def new_basis_state(n: int, bits: str) -> StateVector:
    """Computational basis state; ``bits[j]`` is the value of qubit ``j``.

    >>> new_basis_state(3, "100").amps.nonzero()[0]
    array([1])
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise InvalidArgumentError(f"bits {bits!r} is not a length-{n} bitstring")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[sum(1 << j for j, c in enumerate(bits) if c == "1")] = 1.0
    return StateVector(n, amps)


def from_logical(l: LogicalAmplitudes, n_appended: int) -> StateVector:
    """``(alpha|0> + beta|1>)`` on qubit 0, tensored with ``n_appended`` zeros."""
    if not isinstance(l, LogicalAmplitudes):
        l = LogicalAmplitudes(*l)
    if n_appended < 1:
        raise InvalidArgumentError("n_appended must be >= 1")
    amps = np.zeros(1 << (n_appended + 1), dtype=np.complex128)
    amps[0], amps[1] = l.alpha, l.beta
    return StateVector(n_appended + 1, amps)


def _mask(targets) -> int:
    m = 0
    for t in targets:
        m |= 1 << t
    return m


def _collective(s: StateVector, theta: float, targets, power: int) -> StateVector:
    # H on every target maps sigma_x -> sigma_z, where J_x is diagonal with
    # eigenvalue m = (k - 2 * popcount) / 2.
    targets = _check_targets(s, targets)
    k = len(targets)
    m = (k - 2 * np.arange(k + 1)) / 2.0
    table = np.exp(-1j * theta * m ** power)
    amps = s.amps.copy()
    for t in targets:
        kernels.apply_1q(amps, t, H_GATE)
    kernels.collective_phase(amps, _mask(targets), table)
    for t in targets:
        kernels.apply_1q(amps, t, H_GATE)
    return StateVector(s.n_qubits, amps)


def apply_jx2(s: StateVector, theta: float, targets: Sequence[int]) -> StateVector:
    """Apply ``exp(-i theta Jx^2)`` with ``Jx = (1/2) sum_{j in targets} sigma_x^j``."""
    return _collective(s, theta, targets, 2)


def apply_jx(s: StateVector, theta: float, targets: Sequence[int]) -> StateVector:
    """Apply ``exp(-i theta Jx)``, i.e. ``exp(-i theta/2 sigma_x)`` on each target."""
    targets = _check_targets(s, targets)
    c, sn = math.cos(theta / 2), math.sin(theta / 2)
    rx = ((c, -1j * sn), (-1j * sn, c))
    amps = s.amps.copy()
    for t in targets:
        kernels.apply_1q(amps, t, rx)
    return StateVector(s.n_qubits, amps)


def apply_cz(s: StateVector, q1: int, q2: int) -> StateVector:
    _check_qubit(s, q1)
    _check_qubit(s, q2)
    if q1 == q2:
        raise InvalidArgumentError("CZ needs two distinct qubits")
    amps = s.amps.copy()
    kernels.apply_cz(amps, q1, q2)
    return StateVector(s.n_qubits, amps)


def apply_cnot(s: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(s, control)
    _check_qubit(s, target)
    if control == target:
        raise InvalidArgumentError("control and target must differ")
    amps = s.amps.copy()
    kernels.apply_cnot(amps, control, target)
    return StateVector(s.n_qubits, amps)


def rz_matrix(phi: float):
    return ((1, 0), (0, cmath.exp(1j * phi)))


def gate_matrix(gate: str, phi: Optional[float] = None):
    """2x2 matrix for ``"H"``, ``"X"``, ``"Z"`` or ``"Rz"`` (needs ``phi``)."""
    gate = PulseKind(gate)
    if gate is PulseKind.H:
        return H_GATE
    if gate is PulseKind.X:
        return X_GATE
    if gate is PulseKind.Z:
        return Z_GATE
    if gate is PulseKind.RZ:
        if phi is None:
            raise InvalidArgumentError("Rz needs an angle")
        return rz_matrix(phi)
    raise InvalidArgumentError(f"{gate.value} is not a single-qubit gate")


def apply_1q(s: StateVector, qubit: int, gate: str, phi: Optional[float] = None) -> StateVector:
    """Apply H, X, Z or Rz(phi); Rz multiplies the qubit's |1> component by e^{i phi}."""
    _check_qubit(s, qubit)
    amps = s.amps.copy()
    kernels.apply_1q(amps, qubit, gate_matrix(gate, phi))
    return StateVector(s.n_qubits, amps)


def apply_matrix_1q(s: StateVector, qubit: int, u) -> StateVector:
    """Apply an arbitrary 2x2 matrix ``u`` to one qubit."""
    _check_qubit(s, qubit)
    amps = s.amps.copy()
    kernels.apply_1q(amps, qubit, np.asarray(u, dtype=np.complex128))
    return StateVector(s.n_qubits, amps)


def apply_pulse(s: StateVector, pulse: PulseSpec) -> StateVector:
    """Replay a unitary :class:`PulseSpec` on ``s``."""
    kind, t = pulse.kind, pulse.targets
    if kind is PulseKind.JX2:
        return apply_jx2(s, pulse.theta, t)
    if kind is PulseKind.JX:
        return apply_jx(s, pulse.theta, t)
    if kind is PulseKind.CZ:
        return apply_cz(s, *t)
    if kind is PulseKind.CNOT:
        return apply_cnot(s, *t)
    if kind in (PulseKind.H, PulseKind.X, PulseKind.Z, PulseKind.RZ):
        for q in t:
            s = apply_1q(s, q, kind, pulse.theta)
        return s
    raise InvalidArgumentError(f"{kind.value} is not a unitary pulse")


def prob_one(s: StateVector, qubit: int) -> float:
    _check_qubit(s, qubit)
    return kernels.prob_one(s.amps, qubit)


def project_z(s: StateVector, qubit: int, outcome: int):
    """Renormalized projection of ``qubit`` onto ``outcome``; returns ``(prob, state)``."""
    _check_qubit(s, qubit)
    p1 = kernels.prob_one(s.amps, qubit)
    prob = p1 if outcome else 1.0 - p1
    if prob < DEGENERATE_PROB:
        raise DegenerateBranchError(
            f"outcome {outcome} on qubit {qubit} has probability {prob:.3g}")
    v = s.amps.copy().reshape(-1, 2, 1 << qubit)
    v[:, 1 - outcome, :] = 0
    amps = v.reshape(-1)
    amps /= math.sqrt(prob)
    return prob, StateVector(s.n_qubits, amps)


def measure_z(s: StateVector, qubit: int, sample: Optional[float] = None,
              forced: Optional[int] = None):
    """Projective Z measurement.

    Either ``sample`` (uniform in [0, 1)) selects the outcome by the Born rule,
    outcome 0 iff ``sample < P(0)``, or ``forced`` post-selects an outcome.
    Returns ``(MeasurementRecord, collapsed_state)``.
    """
    _check_qubit(s, qubit)
    if (sample is None) == (forced is None):
        raise InvalidArgumentError("give exactly one of sample or forced")
    if forced is None:
        if not 0.0 <= sample < 1.0:
            raise InvalidArgumentError(f"sample {sample} outside [0, 1)")
        p0 = 1.0 - kernels.prob_one(s.amps, qubit)
        outcome = 0 if sample < p0 else 1
    else:
        outcome = int(forced)
        if outcome not in (0, 1):
            raise InvalidArgumentError("forced outcome must be 0 or 1")
    prob, post = project_z(s, qubit, outcome)
    return MeasurementRecord(qubit, outcome, prob), post


def drop_qubit(s: StateVector, qubit: int) -> StateVector:
    """Remove a qubit known to be in a definite Z state; higher qubits shift down."""
    _check_qubit(s, qubit)
    if s.n_qubits < 2:
        raise InvalidArgumentError("cannot drop the only qubit")
    p1 = kernels.prob_one(s.amps, qubit)
    if min(p1, 1.0 - p1) > NORM_TOL:
        raise InvalidArgumentError(f"qubit {qubit} is not in a definite state (P1={p1})")
    v = s.amps.reshape(-1, 2, 1 << qubit)
    amps = np.ascontiguousarray(v[:, 1 if p1 > 0.5 else 0, :]).reshape(-1)
    return StateVector(s.n_qubits - 1, amps)


def inner(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise InvalidArgumentError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|^2``, insensitive to global phase."""
    return min(1.0, abs(inner(a, b)) ** 2)


def phase_aligned_distance(a: StateVector, b: StateVector) -> float:
    """Max amplitude deviation after rotating ``b`` onto ``a``'s global phase."""
    ov = inner(b, a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(a.amps - phase * b.amps)))


def wrap_phase(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.remainder(phi, 2 * math.pi)
    return math.pi if w == -math.pi else w

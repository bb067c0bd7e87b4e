"""Error injection, Pauli parity measurement and syndrome decoding.

Syndromes are extracted by Born-rule projection onto the eigenspaces of
Pauli strings; no ancilla qubits are simulated. Corrections are Pauli
operators on the flagged qubits only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateBranchError, InvalidArgumentError
from .statevec import (
    DEGENERATE_PROB, LogicalAmplitudes, StateVector, apply_matrix_1q, fidelity,
)

PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

TRIPLETS = ((0, 1, 2), (3, 4, 5), (6, 7, 8))


@dataclass(frozen=True)
class ErrorSpec:
    """Single-qubit error. ``kind`` is ``"X"``, ``"Y"``, ``"Z"`` or ``"U"``.

    ``"U"`` applies ``exp(-i theta/2 (axis . sigma))``.
    """

    qubit: int
    kind: str
    theta: float = 0.0
    axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.kind not in ("X", "Y", "Z", "U"):
            raise InvalidArgumentError(f"unknown error kind {self.kind!r}")
        if self.kind == "U":
            axis = tuple(float(a) for a in self.axis)
            if len(axis) != 3 or abs(math.sqrt(sum(a * a for a in axis)) - 1.0) > 1e-12:
                raise InvalidArgumentError(f"axis {self.axis} is not a unit 3-vector")
            object.__setattr__(self, "axis", axis)

    def matrix(self) -> np.ndarray:
        if self.kind != "U":
            return PAULI_MATRICES[self.kind]
        nx, ny, nz = self.axis
        n_sigma = nx * PAULI_MATRICES["X"] + ny * PAULI_MATRICES["Y"] + nz * PAULI_MATRICES["Z"]
        half = self.theta / 2
        return math.cos(half) * PAULI_MATRICES["I"] - 1j * math.sin(half) * n_sigma

    @classmethod
    def random_unitary(cls, qubit: int, rng: np.random.Generator) -> "ErrorSpec":
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        return cls(qubit, "U", float(rng.uniform(0, 2 * math.pi)), tuple(axis))

    def to_dict(self):
        d = {"qubit": self.qubit, "kind": self.kind}
        if self.kind == "U":
            d.update(theta=self.theta, axis=list(self.axis))
        return d


def apply_error(s: StateVector, e: ErrorSpec) -> StateVector:
    return apply_matrix_1q(s, e.qubit, e.matrix())


@dataclass(frozen=True)
class PauliString:
    """``letters[j]`` acts on qubit ``j``."""

    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise InvalidArgumentError(f"bad Pauli string {self.letters!r}")

    @classmethod
    def on(cls, n: int, letter: str, qubits: Sequence[int]) -> "PauliString":
        chars = ["I"] * n
        for q in qubits:
            chars[q] = letter
        return cls("".join(chars))

    @property
    def n_qubits(self):
        return len(self.letters)

    @property
    def support(self):
        return tuple(j for j, c in enumerate(self.letters) if c != "I")

    def masks(self):
        """``(xmask, zmask, factor)`` with ``P|b> = factor (-1)^{|b & z|} |b ^ x>``."""
        x = z = 0
        ny = 0
        for j, c in enumerate(self.letters):
            if c in "XY":
                x |= 1 << j
            if c in "ZY":
                z |= 1 << j
            ny += c == "Y"
        return x, z, 1j ** ny

    def __str__(self):
        return self.letters


def apply_pauli(s: StateVector, p: PauliString) -> StateVector:
    if p.n_qubits != s.n_qubits:
        raise InvalidArgumentError(f"{p} has {p.n_qubits} letters for {s.n_qubits} qubits")
    x, z, factor = p.masks()
    out = np.empty_like(s.amps)
    kernels.apply_pauli(s.amps, out, x, z, factor)
    return StateVector(s.n_qubits, out)


@dataclass(frozen=True)
class ParityOutcome:
    pauli: str
    outcome: int
    probability: float

    def to_dict(self):
        return {"pauli": self.pauli, "outcome": self.outcome, "probability": self.probability}


def measure_pauli_parity(s: StateVector, p: PauliString, sample: Optional[float] = None,
                         forced: Optional[int] = None):
    """Project onto the +1 or -1 eigenspace of ``p``.

    The outcome is +1 iff ``sample < P(+1)``; alternatively ``forced`` (+1/-1)
    post-selects. Returns ``(ParityOutcome, state)``.
    """
    if (sample is None) == (forced is None):
        raise InvalidArgumentError("give exactly one of sample or forced")
    ps = apply_pauli(s, p).amps
    expectation = float(np.vdot(s.amps, ps).real)
    p_plus = min(1.0, max(0.0, (1.0 + expectation) / 2))
    if forced is None:
        outcome = 1 if sample < p_plus else -1
    else:
        if forced not in (1, -1):
            raise InvalidArgumentError("forced parity must be +1 or -1")
        outcome = forced
    prob = p_plus if outcome == 1 else 1.0 - p_plus
    if prob < DEGENERATE_PROB:
        raise DegenerateBranchError(f"parity {outcome:+d} of {p} has probability {prob:.3g}")
    amps = (s.amps + outcome * ps) / (2 * math.sqrt(prob))
    return ParityOutcome(str(p), outcome, prob), StateVector(s.n_qubits, amps)


@dataclass
class SyndromeResult:
    parities: list = field(default_factory=list)
    corrections: list = field(default_factory=list)

    @property
    def trivial(self):
        return all(p.outcome == 1 for p in self.parities)

    def to_dict(self):
        return {
            "parities": [p.to_dict() for p in self.parities],
            "corrections": [[q, letter] for q, letter in self.corrections],
        }


def _measure_all(s, strings, rng, result):
    for p in strings:
        if rng is None:
            # no randomness supplied: take the more likely branch
            rec, s = measure_pauli_parity(s, p, forced=1 if _p_plus(s, p) >= 0.5 else -1)
        else:
            rec, s = measure_pauli_parity(s, p, sample=float(rng.random()))
        result.parities.append(rec)
    return s


def _p_plus(s, p):
    return (1.0 + float(np.vdot(s.amps, apply_pauli(s, p).amps).real)) / 2


def decode_chain(syndrome: Sequence[int]) -> list:
    """Minimum-weight flips for a linear chain given neighbour parities (+1/-1).

    Returns the flagged positions along the chain. On a weight tie the
    identity correction is chosen.
    """
    flips = [0]
    for sgn in syndrome:
        flips.append(flips[-1] ^ (sgn == -1))
    k = len(flips)
    w = sum(flips)
    if w == k - w:
        return []
    if w > k - w:
        flips = [1 - f for f in flips]
    return [i for i, f in enumerate(flips) if f]


def _repetition(s, block, rng, check, fix):
    block = tuple(block)
    if len(block) < 3:
        raise InvalidArgumentError("repetition block needs at least 3 qubits")
    if len(set(block)) != len(block) or any(not 0 <= q < s.n_qubits for q in block):
        raise InvalidArgumentError(f"bad block {block}")
    strings = [PauliString.on(s.n_qubits, check, (a, b)) for a, b in zip(block, block[1:])]
    result = SyndromeResult()
    s = _measure_all(s, strings, rng, result)
    for pos in decode_chain([r.outcome for r in result.parities]):
        q = block[pos]
        s = apply_pauli(s, PauliString.on(s.n_qubits, fix, (q,)))
        result.corrections.append((q, fix))
    return result, s


def repetition_correct(s: StateVector, block: Sequence[int], rng=None):
    """Measure neighbouring Z-parities on ``block`` and undo the minority flips.

    ``rng`` (a numpy Generator) draws the Born-rule samples; with ``None`` the
    more likely outcome is taken each time.
    """
    return _repetition(s, block, rng, "Z", "X")


def phase_repetition_correct(s: StateVector, block: Sequence[int], rng=None):
    """Hadamard-basis counterpart of :func:`repetition_correct` (X-parities, Z fixes)."""
    return _repetition(s, block, rng, "X", "Z")


def _shor_stabilizers():
    z = [PauliString.on(9, "Z", pair) for t in TRIPLETS for pair in (t[:2], t[1:])]
    x = [PauliString.on(9, "X", TRIPLETS[0] + TRIPLETS[1]),
         PauliString.on(9, "X", TRIPLETS[1] + TRIPLETS[2])]
    return tuple(z + x)


SHOR_STABILIZERS = _shor_stabilizers()


def shor_correct(s: StateVector, rng=None):
    """Measure the eight Shor stabilizers and apply the indicated Pauli fix."""
    if s.n_qubits != 9:
        raise InvalidArgumentError("Shor code needs 9 qubits")
    result = SyndromeResult()
    s = _measure_all(s, SHOR_STABILIZERS, rng, result)
    out = [r.outcome for r in result.parities]
    for i, triplet in enumerate(TRIPLETS):
        for pos in decode_chain(out[2 * i:2 * i + 2]):
            q = triplet[pos]
            s = apply_pauli(s, PauliString.on(9, "X", (q,)))
            result.corrections.append((q, "X"))
    for pos in decode_chain(out[6:8]):
        q = TRIPLETS[pos][0]
        s = apply_pauli(s, PauliString.on(9, "Z", (q,)))
        result.corrections.append((q, "Z"))
    return result, s


# -- code words ------------------------------------------------------------

def repetition_codeword(l: LogicalAmplitudes, n: int) -> StateVector:
    """``alpha|0..0> + beta|1..1>`` on ``n`` qubits."""
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] += l.alpha
    amps[-1] += l.beta
    return StateVector(n, amps)


def phase_codeword(l: LogicalAmplitudes, n: int) -> StateVector:
    """``alpha|+..+> + beta|-..->`` built amplitude by amplitude."""
    idx = np.arange(1 << n)
    parity = np.array([bin(b).count("1") & 1 for b in idx])
    amps = (l.alpha + l.beta * (1 - 2 * parity)) / math.sqrt(1 << n)
    return StateVector(n, amps.astype(np.complex128))


def shor_codeword(l: LogicalAmplitudes) -> StateVector:
    """``alpha [(|000>-|111>)/sqrt2]^3 + beta [(|000>+|111>)/sqrt2]^3``."""
    minus = np.zeros(8, dtype=np.complex128)
    plus = np.zeros(8, dtype=np.complex128)
    minus[0], minus[7] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    plus[0], plus[7] = 1 / math.sqrt(2), 1 / math.sqrt(2)
    zero_l = reduce(np.kron, [minus] * 3)
    one_l = reduce(np.kron, [plus] * 3)
    return StateVector(9, l.alpha * zero_l + l.beta * one_l)


def codeword(l: LogicalAmplitudes, code: str, n: Optional[int] = None) -> StateVector:
    if code == "shor":
        return shor_codeword(l)
    if n is None:
        raise InvalidArgumentError(f"{code} code needs a qubit count")
    if code == "repetition":
        return repetition_codeword(l, n)
    if code == "phase":
        return phase_codeword(l, n)
    raise InvalidArgumentError(f"unknown code {code!r}")


def logical_fidelity(s: StateVector, l: LogicalAmplitudes, code: str) -> float:
    """Overlap with the canonical code word for ``code`` in {repetition, phase, shor}."""
    if code == "shor" and s.n_qubits != 9:
        raise InvalidArgumentError("Shor code needs 9 qubits")
    return fidelity(codeword(l, code, s.n_qubits), s)

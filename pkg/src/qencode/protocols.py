"""Encoding pipelines built from collective Jx^2 pulses.

* protocol 1: Jx^2 on the appended qubits, a CZ with the data qubit, the
  rest of the Jx^2 period, then one Rz phase fix-up (N even);
* protocol 2: one Jx^2 pulse on all qubits, a Z measurement of the data
  qubit and a branch-dependent correction (N odd);
* the CNOT ladder baseline;
* the nine-qubit Shor code built from protocol 1 plus per-triplet GHZ pulses.

Every pipeline returns the final state with an :class:`EncodingReport`
listing the pulses that were applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import codes, constants
from .errors import InvalidArgumentError, ProtocolFailureError
from .statevec import (
    ENTANGLING_KINDS, LogicalAmplitudes, MeasurementRecord, PulseKind, PulseSpec,
    StateVector, apply_pulse, drop_qubit, fidelity, from_logical, measure_z,
    wrap_phase,
)

GHZ_LEAK_TOL = 1e-10
GHZ_SHAPE_TOL = 1e-12

ODD_N_LINEAR_ANGLE = constants.ODD_N_LINEAR_ANGLE

HALF_PERIOD = math.pi / 2  # tau_1
FULL_PERIOD = 2 * math.pi  # tau_2


@dataclass(frozen=True)
class GhzPhasePair:
    """Phases of the ``|0..0>`` and ``|1..1>`` coefficients (times sqrt 2)."""

    phase0: float
    phase1: float

    @property
    def relative(self) -> float:
        return wrap_phase(self.phase1 - self.phase0)

    def state(self, n: int) -> StateVector:
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = np.exp(1j * self.phase0) / math.sqrt(2)
        amps[-1] = np.exp(1j * self.phase1) / math.sqrt(2)
        return StateVector(n, amps)

    def to_dict(self):
        return {"phase0": self.phase0, "phase1": self.phase1}


@dataclass
class EncodingReport:
    protocol: str
    n_appended: int
    pulses: list = field(default_factory=list)
    measurement: Optional[MeasurementRecord] = None
    residual_phase: float = 0.0
    fidelity_to_target: float = float("nan")
    logical_block: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def entangling_pulse_count(self) -> int:
        return sum(p.kind in ENTANGLING_KINDS for p in self.pulses)

    def to_dict(self):
        return {
            "protocol": self.protocol,
            "n_appended": self.n_appended,
            "pulses": [p.to_dict() for p in self.pulses],
            "entangling_pulse_count": self.entangling_pulse_count,
            "measurement": None if self.measurement is None else self.measurement.to_dict(),
            "residual_phase": self.residual_phase,
            "fidelity_to_target": self.fidelity_to_target,
            "logical_block": list(self.logical_block),
            "details": self.details,
        }


def _as_logical(l):
    return l if isinstance(l, LogicalAmplitudes) else LogicalAmplitudes(*l)


def _step(s, pulses, kind, targets, theta=None):
    p = PulseSpec(kind, targets, theta)
    pulses.append(p)
    return apply_pulse(s, p)


def _target_mask(targets):
    m = 0
    for t in targets:
        m |= 1 << t
    return m


def _pattern(s, mask):
    return np.arange(s.dim) & mask


def ghz_pulse(s: StateVector, targets, extract: bool = True, pulses: Optional[list] = None):
    """Turn ``|0..0>`` or ``|1..1>`` on ``targets`` into a GHZ state.

    Even-sized sets get ``exp(-i pi/2 Jx^2)``; odd-sized sets additionally get
    ``exp(-i a Jx)`` with ``a = ODD_N_LINEAR_ANGLE``. With ``extract`` the
    targets must start as a ``|0..0>`` or ``|1..1>`` tensor factor and the
    coefficient phases (relative to the input) are returned as a
    :class:`GhzPhasePair`; in raw mode the second element is ``None``.
    Applied pulses are appended to ``pulses`` when given.
    """
    targets = tuple(targets)
    mask = _target_mask(targets)
    pattern = _pattern(s, mask)
    if extract:
        zero_w = float(np.sum(np.abs(s.amps[pattern == 0]) ** 2))
        ones_w = float(np.sum(np.abs(s.amps[pattern == mask]) ** 2))
        if max(zero_w, ones_w) < 1 - GHZ_SHAPE_TOL:
            raise InvalidArgumentError(
                "targets are not in |0..0> or |1..1>; use extract=False for raw mode")
        factor_in = s.amps[pattern == (0 if zero_w >= ones_w else mask)]
    record = [] if pulses is None else pulses
    out = _step(s, record, PulseKind.JX2, targets, HALF_PERIOD)
    if len(targets) % 2:
        out = _step(out, record, PulseKind.JX, targets, ODD_N_LINEAR_ANGLE)
    leak = float(np.sum(np.abs(out.amps[(pattern != 0) & (pattern != mask)]) ** 2))
    if leak > GHZ_LEAK_TOL:
        raise ProtocolFailureError(
            f"GHZ pulse on {targets} leaked probability {leak:.3g} outside the two components")
    if not extract:
        return out, None

    ref = int(np.argmax(np.abs(factor_in)))
    c_in = factor_in[ref]
    out0, out1 = out.amps[pattern == 0], out.amps[pattern == mask]
    phase0 = wrap_phase(float(np.angle(out0[ref] / c_in)))
    phase1 = wrap_phase(float(np.angle(out1[ref] / c_in)))
    dev = max(
        np.max(np.abs(out0 - np.exp(1j * phase0) * factor_in / math.sqrt(2))),
        np.max(np.abs(out1 - np.exp(1j * phase1) * factor_in / math.sqrt(2))),
    )
    if dev > GHZ_SHAPE_TOL:
        raise ProtocolFailureError(f"GHZ output is not an equal-weight pair (deviation {dev:.3g})")
    return out, GhzPhasePair(phase0, phase1)


# -- closed-form phases ----------------------------------------------------

def ghz_pair_expected(n: int, all_ones: bool = False) -> GhzPhasePair:
    """Coefficient phases of ``exp(-i pi/2 Jx^2)`` on ``|0..0>``/``|1..1>``, ``n`` even.

    ``|0..0> -> e^{-i pi/4} |0..0> + e^{i(pi/4 + n pi/2)} |1..1>`` (over sqrt 2);
    the ``|1..1>`` input gives the same pair swapped.
    """
    if n % 2:
        raise InvalidArgumentError("closed form holds for an even number of qubits")
    near, far = -math.pi / 4, wrap_phase(math.pi / 4 + (n % 4) * math.pi / 2)
    return GhzPhasePair(far, near) if all_ones else GhzPhasePair(near, far)


def protocol1_residual_phase(n: int) -> float:
    """``arg(-i (-1)^{n/2})``."""
    return wrap_phase(-math.pi / 2 + ((n // 2) % 2) * math.pi)


def protocol2_relative_phase(n: int) -> float:
    """Relative phase left by ``exp(-i pi/2 Jx^2)`` on ``n + 1`` qubits (``n`` odd).

    Any basis state ``|x>`` goes to ``e^{-i pi/4}(|x> + i(-1)^{(n+1)/2}|~x>)/sqrt 2``.
    """
    return wrap_phase(math.pi / 2 + ((n + 1) % 4) * math.pi / 2)


def protocol2_quoted_phase(n: int) -> float:
    """The phase ``(n + 1) pi / 2`` as commonly quoted for this step."""
    return wrap_phase(((n + 1) % 4) * math.pi / 2)


def protocol2_intermediate_phases(n: int) -> dict:
    """Measure the two-component phases after the protocol-2 pulse.

    Runs ``exp(-i pi/2 Jx^2)`` on all ``n + 1`` qubits for the inputs
    ``|0,0..0>`` and ``|1,0..0>`` and returns the relative phase of each
    output pair, next to the closed form and the quoted expression.
    """
    total = n + 1
    everyone = tuple(range(total))
    out = {}
    for label, index in (("from_0", 0), ("from_1", 1)):
        amps = np.zeros(1 << total, dtype=np.complex128)
        amps[index] = 1.0
        evolved = apply_pulse(StateVector(total, amps), PulseSpec(PulseKind.JX2, everyone, HALF_PERIOD))
        partner = index ^ ((1 << total) - 1)
        out[label] = wrap_phase(float(np.angle(evolved.amps[partner] / evolved.amps[index])))
        out[label + "_support"] = float(abs(evolved.amps[index]) ** 2 + abs(evolved.amps[partner]) ** 2)
    out["closed_form"] = protocol2_relative_phase(n)
    out["quoted"] = protocol2_quoted_phase(n)
    return out


def _measured_relative_phase(s, l, zero_index, ones_index):
    if min(abs(l.alpha), abs(l.beta)) < 1e-6:
        return None
    ratio = (s.amps[ones_index] / s.amps[zero_index]) / (l.beta / l.alpha)
    return wrap_phase(float(np.angle(ratio)))


def _check_two_component(s, zero_index, ones_index, what):
    leak = 1.0 - abs(s.amps[zero_index]) ** 2 - abs(s.amps[ones_index]) ** 2
    if leak > GHZ_LEAK_TOL:
        raise ProtocolFailureError(f"{what}: probability {leak:.3g} outside |0..0>, |1..1>")


# -- protocols -------------------------------------------------------------

def encode_protocol1(l, n: int, partner: int = 1):
    """Encode ``alpha|0> + beta|1>`` into ``n + 1`` qubits with three entangling pulses.

    ``partner`` is the appended qubit (1..n) that shares the CZ with the
    data qubit.
    """
    l = _as_logical(l)
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"protocol 1 needs an even N >= 2, got {n}")
    if not 1 <= partner <= n:
        raise InvalidArgumentError(f"CZ partner must be an appended qubit, got {partner}")
    block = tuple(range(1, n + 1))
    pulses = []
    s = from_logical(l, n)
    s = _step(s, pulses, PulseKind.JX2, block, HALF_PERIOD)
    s = _step(s, pulses, PulseKind.CZ, (0, partner))
    s = _step(s, pulses, PulseKind.JX2, block, FULL_PERIOD - HALF_PERIOD)

    ones = (1 << (n + 1)) - 1
    _check_two_component(s, 0, ones, "protocol 1")
    chi = protocol1_residual_phase(n)
    measured = _measured_relative_phase(s, l, 0, ones)
    s = _step(s, pulses, PulseKind.RZ, (0,), -chi)

    target = codes.repetition_codeword(l, n + 1)
    report = EncodingReport(
        "P1", n, pulses, residual_phase=chi, fidelity_to_target=fidelity(target, s),
        logical_block=tuple(range(n + 1)),
        details={"measured_residual_phase": measured, "cz_partner": partner},
    )
    return s, report


def encode_protocol2(l, n: int, branch="sampled", sample: Optional[float] = None,
                     rng: Optional[np.random.Generator] = None, correction: str = "x"):
    """Encode into the ``n`` appended qubits using one pulse and a measurement.

    ``branch`` is ``"sampled"`` (outcome drawn from ``sample`` or ``rng``),
    ``0`` or ``1`` (post-selected), or ``"both"``. For ``"both"`` a pair
    ``((state0, report0), (state1, report1))`` is returned, otherwise
    ``(state, report)``. Returned states have ``n`` qubits: the measured data
    qubit is removed and appended qubit ``j`` becomes qubit ``j - 1``.

    ``correction`` selects how the outcome-1 branch exchanges ``|0..0>`` and
    ``|1..1>``: ``"x"`` flips every appended qubit, ``"jx2"`` applies
    ``exp(-i pi Jx^2)`` to them instead.
    """
    l = _as_logical(l)
    if n < 3 or n % 2 == 0:
        raise InvalidArgumentError(f"protocol 2 needs an odd N >= 3, got {n}")
    if correction not in ("x", "jx2"):
        raise InvalidArgumentError(f"unknown correction {correction!r}")
    if branch == "both":
        return tuple(encode_protocol2(l, n, b, correction=correction) for b in (0, 1))

    pulses = []
    s = from_logical(l, n)
    s = _step(s, pulses, PulseKind.JX2, tuple(range(n + 1)), HALF_PERIOD)
    if branch == "sampled":
        if sample is None:
            if rng is None:
                raise InvalidArgumentError("sampled branch needs sample or rng")
            sample = float(rng.random())
        record, s = measure_z(s, 0, sample=sample)
    elif branch in (0, 1):
        record, s = measure_z(s, 0, forced=branch)
    else:
        raise InvalidArgumentError(f"unknown branch mode {branch!r}")
    pulses.append(PulseSpec(PulseKind.MEASURE_Z, (0,)))

    appended = tuple(range(1, n + 1))
    psi = protocol2_relative_phase(n)
    if record.outcome == 1:
        if correction == "x":
            s = _step(s, pulses, PulseKind.X, appended)
        else:
            s = _step(s, pulses, PulseKind.JX2, appended, math.pi)
        residual = -psi
    else:
        residual = psi
    s = _step(s, pulses, PulseKind.RZ, (1,), -residual)
    s = drop_qubit(s, 0)

    target = codes.repetition_codeword(l, n)
    report = EncodingReport(
        "P2", n, pulses, measurement=record, residual_phase=residual,
        fidelity_to_target=fidelity(target, s), logical_block=appended,
        details={"correction": correction},
    )
    return s, report


def encode_cnot_baseline(l, n: int):
    """``n`` CNOTs from the data qubit onto each appended qubit."""
    l = _as_logical(l)
    if n < 1:
        raise InvalidArgumentError("baseline needs N >= 1")
    pulses = []
    s = from_logical(l, n)
    for j in range(1, n + 1):
        s = _step(s, pulses, PulseKind.CNOT, (0, j))
    report = EncodingReport(
        "CnotBaseline", n, pulses, residual_phase=0.0,
        fidelity_to_target=fidelity(codes.repetition_codeword(l, n + 1), s),
        logical_block=tuple(range(n + 1)),
    )
    return s, report


def shor_phases():
    """Fix-up angles for the Shor construction, from the derived triplet phases.

    Returns ``(gamma0, gamma1, triplet_fix, logical_fix)``: the relative GHZ
    phases for triplets that start in ``|000>`` and ``|111>``, the Rz angle
    that turns them into (-, +), and the Rz angle applied to the data qubit
    beforehand so the two code words end up in phase.
    """
    z0, z1 = constants.SHOR_TRIPLET_FROM_ZERO
    o0, o1 = constants.SHOR_TRIPLET_FROM_ONE
    gamma0, gamma1 = wrap_phase(z1 - z0), wrap_phase(o1 - o0)
    triplet_fix = wrap_phase(math.pi - gamma0)
    if abs(wrap_phase(gamma1 + triplet_fix)) > 1e-12:
        raise ProtocolFailureError("one Rz cannot give both triplet signs (-, +)")
    logical_fix = wrap_phase(-3 * (o0 - z0))
    return gamma0, gamma1, triplet_fix, logical_fix


def shor_pre_fixup_target(l: LogicalAmplitudes, gamma0: float, gamma1: float) -> StateVector:
    def word(gamma):
        t = np.zeros(8, dtype=np.complex128)
        t[0], t[7] = 1 / math.sqrt(2), np.exp(1j * gamma) / math.sqrt(2)
        return np.kron(np.kron(t, t), t)
    return StateVector(9, l.alpha * word(gamma0) + l.beta * word(gamma1))


def shor_encode(l, via: str = "protocol1"):
    """Nine-qubit Shor code from the repetition code plus one GHZ pulse per triplet."""
    l = _as_logical(l)
    if via == "protocol1":
        s, rep = encode_protocol1(l, 8)
    elif via == "baseline":
        s, rep = encode_cnot_baseline(l, 8)
    else:
        raise InvalidArgumentError(f"unknown repetition route {via!r}")
    pulses = list(rep.pulses)
    gamma0, gamma1, triplet_fix, logical_fix = shor_phases()

    s = _step(s, pulses, PulseKind.RZ, (0,), logical_fix)
    for triplet in codes.TRIPLETS:
        s, _ = ghz_pulse(s, triplet, extract=False, pulses=pulses)
    pre = fidelity(shor_pre_fixup_target(l, gamma0, gamma1), s)
    for triplet in codes.TRIPLETS:
        s = _step(s, pulses, PulseKind.RZ, (triplet[0],), triplet_fix)

    report = EncodingReport(
        "Shor", 8, pulses, residual_phase=wrap_phase(-logical_fix),
        fidelity_to_target=fidelity(codes.shor_codeword(l), s),
        logical_block=tuple(range(9)),
        details={
            "repetition_route": via,
            "triplet_phases": [gamma0, gamma1],
            "triplet_fix": triplet_fix,
            "pre_fixup_fidelity": pre,
        },
    )
    return s, report


def to_phase_basis(s: StateVector) -> StateVector:
    """Hadamard on every qubit: ``alpha|0..0> + beta|1..1> -> alpha|+..+> + beta|-..->``."""
    return apply_pulse(s, PulseSpec(PulseKind.H, tuple(range(s.n_qubits))))

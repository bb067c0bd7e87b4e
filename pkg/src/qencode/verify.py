"""Self-checks behind ``qencode verify``: kernels, phases and constants."""

from __future__ import annotations

import math

import numpy as np

from . import constants, oracle
from .protocols import (
    encode_protocol1, ghz_pair_expected, ghz_pulse, protocol1_residual_phase,
    protocol2_intermediate_phases,
)
from .statevec import (
    LogicalAmplitudes, PulseSpec, StateVector, apply_jx2, apply_pulse,
    new_basis_state, wrap_phase,
)

KERNEL_TOL = 1e-12
PHASE_TOL = 1e-12
CONSTANT_TOL = 1e-12

PULSE_KINDS = ("Jx2", "Jx", "CZ", "CNOT", "H", "X", "Z", "Rz")


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, z / np.linalg.norm(z))


def random_pulse(n: int, rng: np.random.Generator, kind=None) -> PulseSpec:
    kinds = PULSE_KINDS if n >= 2 else ("Jx2", "Jx", "H", "X", "Z", "Rz")
    kind = kind or kinds[rng.integers(len(kinds))]
    if kind in ("CZ", "CNOT"):
        a, b = rng.choice(n, size=2, replace=False)
        return PulseSpec(kind, (int(a), int(b)))
    size = int(rng.integers(1, n + 1))
    targets = tuple(int(q) for q in rng.choice(n, size=size, replace=False))
    theta = float(rng.uniform(-4 * math.pi, 4 * math.pi)) if kind in ("Jx2", "Jx", "Rz") else None
    return PulseSpec(kind, targets, theta)


def kernel_equivalence(seed: int = 0, n_max: int = 8, per_n: int = 100) -> dict:
    """Fast pulses vs dense propagators on random (pulse, angle, state) triples."""
    rng = np.random.Generator(np.random.Philox(seed))
    rows = []
    for n in range(1, n_max + 1):
        worst = 0.0
        for _ in range(per_n):
            s = random_state(n, rng)
            pulse = random_pulse(n, rng)
            fast = apply_pulse(s, pulse).amps
            slow = oracle.dense_pulse(n, pulse).entries @ s.amps
            worst = max(worst, float(np.max(np.abs(fast - slow))))
        rows.append({"n": n, "cases": per_n, "max_deviation": worst, "passed": worst < KERNEL_TOL})
    return {"scope": "kernels", "rows": rows, "passed": all(r["passed"] for r in rows)}


def _phase_row(label, measured, expected, asserted=True):
    dev = abs(wrap_phase(measured - expected))
    return {
        "check": label, "measured": wrap_phase(measured), "expected": wrap_phase(expected),
        "deviation": dev, "asserted": asserted, "passed": dev < PHASE_TOL or not asserted,
    }


def ghz_phase_rows(ns=(2, 4, 6, 8)):
    rows = []
    for n in ns:
        for ones in (False, True):
            start = new_basis_state(n, ("1" if ones else "0") * n)
            _, pair = ghz_pulse(start, range(n))
            expected = ghz_pair_expected(n, ones)
            tag = "|1..1>" if ones else "|0..0>"
            rows.append(_phase_row(f"GHZ N={n} {tag} phase0", pair.phase0, expected.phase0))
            rows.append(_phase_row(f"GHZ N={n} {tag} phase1", pair.phase1, expected.phase1))
    return rows


def protocol1_phase_rows(ns=(2, 4, 6)):
    half = 1 / math.sqrt(2)
    rows = []
    for n in ns:
        _, report = encode_protocol1(LogicalAmplitudes(half, half), n)
        rows.append(_phase_row(f"P1 N={n} residual phase",
                               report.details["measured_residual_phase"],
                               protocol1_residual_phase(n)))
    return rows


def protocol2_phase_rows(ns=(3, 5, 7)):
    rows = []
    for n in ns:
        m = protocol2_intermediate_phases(n)
        rows.append(_phase_row(f"P2 N={n} relative phase (closed form)", m["from_0"], m["closed_form"]))
        rows.append(_phase_row(f"P2 N={n} relative phase from |1,0..0>", m["from_1"], m["closed_form"]))
        rows.append(_phase_row(f"P2 N={n} relative phase vs (N+1)pi/2", m["from_0"], m["quoted"],
                               asserted=False))
    return rows


def odd_exchange_rows(ns=(3, 5, 7)):
    """Does ``exp(-i pi Jx^2)`` exchange ``|0..0>`` and ``|1..1>`` on an odd set?"""
    rows = []
    for n in ns:
        out = apply_jx2(new_basis_state(n, "0" * n), math.pi, range(n))
        rows.append({
            "check": f"exp(-i pi Jx^2) on |0..0>, odd n={n}: P(|1..1>)", "n": n,
            "measured": float(abs(out.amps[-1]) ** 2), "expected": 1.0,
            "deviation": float(abs(abs(out.amps[-1]) ** 2 - 1.0)),
            "asserted": False, "passed": True,
            "stays_put_probability": float(abs(out.amps[0]) ** 2),
        })
    return rows


def triplet_phase_rows():
    rows = []
    for ones, stored in ((False, constants.SHOR_TRIPLET_FROM_ZERO),
                         (True, constants.SHOR_TRIPLET_FROM_ONE)):
        _, pair = ghz_pulse(new_basis_state(3, ("1" if ones else "0") * 3), range(3))
        tag = "|111>" if ones else "|000>"
        rows.append(_phase_row(f"triplet {tag} phase0 vs constants", pair.phase0, stored[0]))
        rows.append(_phase_row(f"triplet {tag} phase1 vs constants", pair.phase1, stored[1]))
    return rows


def phase_checks() -> dict:
    rows = (ghz_phase_rows() + protocol1_phase_rows() + protocol2_phase_rows()
            + triplet_phase_rows() + odd_exchange_rows())
    return {"scope": "phases", "rows": rows, "passed": all(r["passed"] for r in rows)}


def constants_check() -> dict:
    shipped = constants.all_values()
    derived = oracle.derive_all()
    rows = []
    for key in sorted(set(shipped) | set(derived)):
        a, b = shipped.get(key), derived.get(key)
        dev = math.inf if a is None or b is None else abs(wrap_phase(a - b))
        rows.append({"check": key, "shipped": a, "derived": b, "deviation": dev,
                     "identical": a == b, "passed": dev < CONSTANT_TOL})
    text_same = constants.read_text() == oracle.format_constants(derived)
    return {"scope": "constants", "rows": rows, "file_identical": text_same,
            "passed": all(r["passed"] for r in rows)}


SCOPES = {"kernels": kernel_equivalence, "phases": phase_checks, "constants": constants_check}

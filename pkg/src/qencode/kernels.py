"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the numpy
fallback is used. Setting ``QENCODE_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("QENCODE_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active backend for subsequent operations. Returns the previous name."""
    global _active, BACKEND
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    previous = BACKEND
    BACKEND, _active = name, BACKENDS[name]
    return previous


def apply_1q(amps, q, u):
    _active.apply_1q(amps, q, complex(u[0][0]), complex(u[0][1]),
                     complex(u[1][0]), complex(u[1][1]))


def apply_cnot(amps, control, target):
    _active.apply_cnot(amps, control, target)


def apply_cz(amps, q1, q2):
    _active.apply_cz(amps, q1, q2)


def collective_phase(amps, mask, table):
    _active.collective_phase(amps, mask, table)


def apply_pauli(amps, out, xmask, zmask, factor):
    _active.apply_pauli(amps, out, xmask, zmask, complex(factor))


def prob_one(amps, q):
    return _active.prob_one(amps, q)

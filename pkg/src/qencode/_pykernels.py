"""Pure numpy implementation of the amplitude kernels.

Same signatures and in-place semantics as the compiled ``_ckernels`` module.
"""

import numpy as np


def _split(amps, q):
    # view with axis 1 indexing bit q
    return amps.reshape(-1, 2, 1 << q)


def apply_1q(amps, q, u00, u01, u10, u11):
    v = _split(amps, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = u00 * a0 + u01 * a1
    v[:, 1, :] = u10 * a0 + u11 * a1


def _index(dim):
    return np.arange(dim, dtype=np.uint64)


def apply_cnot(amps, control, target):
    idx = _index(amps.shape[0])
    cbit, tbit = np.uint64(1 << control), np.uint64(1 << target)
    sel = idx[((idx & cbit) != 0) & ((idx & tbit) == 0)]
    partner = sel | tbit
    amps[sel], amps[partner] = amps[partner], amps[sel].copy()


def apply_cz(amps, q1, q2):
    idx = _index(amps.shape[0])
    both = np.uint64((1 << q1) | (1 << q2))
    amps[(idx & both) == both] *= -1


def collective_phase(amps, mask, table):
    counts = np.bitwise_count(_index(amps.shape[0]) & np.uint64(mask))
    amps *= np.asarray(table)[counts]


def apply_pauli(amps, out, xmask, zmask, factor):
    idx = _index(amps.shape[0])
    sign = 1 - 2 * (np.bitwise_count(idx & np.uint64(zmask)) & 1).astype(np.int8)
    out[idx ^ np.uint64(xmask)] = factor * sign * amps


def prob_one(amps, q):
    upper = _split(amps, q)[:, 1, :]
    return float(np.vdot(upper, upper).real)

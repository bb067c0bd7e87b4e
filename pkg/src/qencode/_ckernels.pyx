# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled in-place amplitude kernels.

Every function mutates a contiguous complex128 array. Qubit ``q`` is bit ``q``
of the basis index.
"""

cdef inline int _popcount(unsigned long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def apply_1q(double complex[::1] amps, int q,
             double complex u00, double complex u01,
             double complex u10, double complex u11):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t stride = <Py_ssize_t>1 << q
    cdef Py_ssize_t half = dim >> 1
    cdef Py_ssize_t g, i0, i1
    cdef double complex a0, a1
    with nogil:
        for g in range(half):
            i0 = ((g >> q) << (q + 1)) | (g & (stride - 1))
            i1 = i0 | stride
            a0 = amps[i0]
            a1 = amps[i1]
            amps[i0] = u00 * a0 + u01 * a1
            amps[i1] = u10 * a0 + u11 * a1


def apply_cnot(double complex[::1] amps, int control, int target):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t cbit = <Py_ssize_t>1 << control
    cdef Py_ssize_t tbit = <Py_ssize_t>1 << target
    cdef Py_ssize_t b
    cdef double complex tmp
    with nogil:
        for b in range(dim):
            if (b & cbit) and not (b & tbit):
                tmp = amps[b]
                amps[b] = amps[b | tbit]
                amps[b | tbit] = tmp


def apply_cz(double complex[::1] amps, int q1, int q2):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t both = (<Py_ssize_t>1 << q1) | (<Py_ssize_t>1 << q2)
    cdef Py_ssize_t b
    with nogil:
        for b in range(dim):
            if (b & both) == both:
                amps[b] = -amps[b]


def collective_phase(double complex[::1] amps, unsigned long long mask,
                     double complex[::1] table):
    """Multiply amplitude ``b`` by ``table[popcount(b & mask)]``."""
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t b
    with nogil:
        for b in range(dim):
            amps[b] = amps[b] * table[_popcount(<unsigned long long>b & mask)]


def apply_pauli(double complex[::1] amps, double complex[::1] out,
                unsigned long long xmask, unsigned long long zmask,
                double complex factor):
    """Write ``P|amps>`` into ``out`` for the Pauli string given by masks."""
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t b
    cdef double complex v
    with nogil:
        for b in range(dim):
            v = factor * amps[b]
            if _popcount(<unsigned long long>b & zmask) & 1:
                v = -v
            out[<Py_ssize_t>(<unsigned long long>b ^ xmask)] = v


def prob_one(double complex[::1] amps, int q):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t bit = <Py_ssize_t>1 << q
    cdef Py_ssize_t b
    cdef double total = 0.0
    with nogil:
        for b in range(dim):
            if b & bit:
                total += amps[b].real * amps[b].real + amps[b].imag * amps[b].imag
    return total

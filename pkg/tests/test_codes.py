import itertools
import math
from functools import reduce

import numpy as np
import pytest

from qencode import codes
from qencode.codes import (
    ErrorSpec, PauliString, apply_error, apply_pauli, logical_fidelity, measure_pauli_parity,
    phase_repetition_correct, repetition_codeword, repetition_correct, shor_codeword, shor_correct,
)
from qencode.errors import DegenerateBranchError, InvalidArgumentError
from qencode.protocols import shor_encode, to_phase_basis
from qencode.statevec import LogicalAmplitudes, StateVector, fidelity, new_basis_state

R2 = 1 / math.sqrt(2)


def dense_pauli(letters):
    return reduce(np.kron, [codes.PAULI_MATRICES[c] for c in reversed(letters)])


# -- errors ----------------------------------------------------------------

def test_x_error_sets_bit():
    out = apply_error(new_basis_state(3, "000"), ErrorSpec(2, "X"))
    assert out.amps[4] == 1


def test_unitary_pi_about_x_is_minus_i_x():
    e = ErrorSpec(0, "U", math.pi, (1, 0, 0))
    np.testing.assert_allclose(e.matrix(), -1j * codes.PAULI_MATRICES["X"], atol=1e-15)


def test_z_error_on_plus():
    out = apply_error(StateVector.from_amplitudes([R2, R2]), ErrorSpec(0, "Z"))
    np.testing.assert_allclose(out.amps, [R2, -R2])


def test_error_validation():
    with pytest.raises(InvalidArgumentError):
        ErrorSpec(0, "U", 1.0, (1, 1, 0))
    with pytest.raises(InvalidArgumentError):
        ErrorSpec(0, "W")


def test_random_unitary_error_is_unitary(rng):
    for _ in range(20):
        m = ErrorSpec.random_unitary(0, rng).matrix()
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)


# -- Pauli strings ---------------------------------------------------------

@pytest.mark.parametrize("letters", ["XYZ", "YIY", "ZZI", "IXI", "YYYY"])
def test_pauli_matches_dense(letters, backend, rng):
    n = len(letters)
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    s = StateVector(n, z / np.linalg.norm(z))
    np.testing.assert_allclose(apply_pauli(s, PauliString(letters)).amps,
                               dense_pauli(letters) @ s.amps, atol=1e-14)


def test_parity_on_eigenstates():
    l = LogicalAmplitudes(0.6, 0.8j)
    s = repetition_codeword(l, 2)
    rec, post = measure_pauli_parity(s, PauliString("ZZ"), sample=0.999)
    assert (rec.outcome, rec.probability) == (1, pytest.approx(1, abs=1e-12))
    assert fidelity(s, post) == pytest.approx(1, abs=1e-12)
    flipped = apply_error(s, ErrorSpec(0, "X"))
    rec, _ = measure_pauli_parity(flipped, PauliString("ZZ"), sample=0.0)
    assert rec.outcome == -1 and rec.probability == pytest.approx(1, abs=1e-12)


def test_x6_across_triplets_on_shor_word(rng):
    word = shor_codeword(LogicalAmplitudes.random(rng))
    letters = "XXXXXXIII"
    assert np.allclose(dense_pauli(letters) @ word.amps, word.amps, atol=1e-12)
    rec, post = measure_pauli_parity(word, PauliString(letters), sample=0.5)
    assert rec.outcome == 1
    assert fidelity(word, post) == pytest.approx(1, abs=1e-12)


def test_parity_born_rule_and_forced():
    plus = StateVector.from_amplitudes([R2, R2])
    rec, post = measure_pauli_parity(plus, PauliString("Z"), sample=0.7)
    assert rec.outcome == -1 and rec.probability == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(post.amps, [0, 1], atol=1e-15)
    with pytest.raises(DegenerateBranchError):
        measure_pauli_parity(new_basis_state(1, "0"), PauliString("Z"), forced=-1)


def test_pauli_string_validation():
    with pytest.raises(InvalidArgumentError):
        PauliString("XQ")
    with pytest.raises(InvalidArgumentError):
        apply_pauli(new_basis_state(2, "00"), PauliString("X"))


# -- decoding --------------------------------------------------------------

def brute_force_flips(syndrome, k):
    """Smallest error sets along a k-chain reproducing the syndrome."""
    best = None
    for w in range(k + 1):
        for c in itertools.combinations(range(k), w):
            e = [int(i in c) for i in range(k)]
            syn = [1 - 2 * (e[i] ^ e[i + 1]) for i in range(k - 1)]
            if syn == list(syndrome):
                if best is None:
                    best = (w, [list(c)])
                elif w == best[0]:
                    best[1].append(list(c))
    return best


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_decode_chain_is_minimum_weight(k):
    for syndrome in itertools.product((1, -1), repeat=k - 1):
        w, options = brute_force_flips(syndrome, k)
        got = codes.decode_chain(syndrome)
        if len(options) == 1:
            assert got == options[0]
        else:
            assert got == []  # tie: identity


def test_repetition_no_error(rng):
    l = LogicalAmplitudes.random(rng)
    result, out = repetition_correct(repetition_codeword(l, 5), range(5), rng)
    assert result.corrections == [] and result.trivial
    assert logical_fidelity(out, l, "repetition") == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("q", range(5))
def test_repetition_single_error(q, rng):
    l = LogicalAmplitudes.random(rng)
    s = apply_error(repetition_codeword(l, 5), ErrorSpec(q, "X"))
    result, out = repetition_correct(s, range(5), rng)
    assert result.corrections == [(q, "X")]
    assert logical_fidelity(out, l, "repetition") == pytest.approx(1, abs=1e-12)


def test_repetition_over_threshold_flips_logical(rng):
    l = LogicalAmplitudes(0.6, 0.8j)
    flipped = repetition_codeword(LogicalAmplitudes(0.8j, 0.6), 5)
    for subset in itertools.combinations(range(5), 3):
        s = repetition_codeword(l, 5)
        for q in subset:
            s = apply_error(s, ErrorSpec(q, "X"))
        _, out = repetition_correct(s, range(5), rng)
        assert fidelity(out, flipped) == pytest.approx(1, abs=1e-12)
        assert logical_fidelity(out, l, "repetition") < 1 - 1e-3


def test_repetition_block_validation():
    with pytest.raises(InvalidArgumentError):
        repetition_correct(new_basis_state(2, "00"), [0, 1])


@pytest.mark.parametrize("q", range(3))
def test_phase_code_single_z(q, rng):
    l = LogicalAmplitudes.random(rng)
    s = apply_error(to_phase_basis(repetition_codeword(l, 3)), ErrorSpec(q, "Z"))
    result, out = phase_repetition_correct(s, range(3), rng)
    assert result.corrections == [(q, "Z")]
    assert logical_fidelity(out, l, "phase") == pytest.approx(1, abs=1e-12)


def test_phase_code_no_error_and_x_error(rng):
    l = LogicalAmplitudes(0.6, 0.8)
    code = to_phase_basis(repetition_codeword(l, 3))
    result, out = phase_repetition_correct(code, range(3), rng)
    assert result.corrections == [] and fidelity(out, code) == pytest.approx(1, abs=1e-12)
    _, out = phase_repetition_correct(apply_error(code, ErrorSpec(1, "X")), range(3), rng)
    assert logical_fidelity(out, l, "phase") < 1 - 1e-3


def test_phase_codeword_matches_hadamard(rng):
    l = LogicalAmplitudes.random(rng)
    built = codes.phase_codeword(l, 4)
    assert fidelity(built, to_phase_basis(repetition_codeword(l, 4))) == pytest.approx(1, abs=1e-12)


# -- Shor ------------------------------------------------------------------

def test_shor_stabilizers_fix_code_words(rng):
    l = LogicalAmplitudes.random(rng)
    word = shor_codeword(l)
    assert len(codes.SHOR_STABILIZERS) == 8
    for p in codes.SHOR_STABILIZERS:
        np.testing.assert_allclose(dense_pauli(p.letters) @ word.amps, word.amps, atol=1e-12)


def test_shor_no_error(rng):
    l = LogicalAmplitudes.random(rng)
    result, out = shor_correct(shor_codeword(l), rng)
    assert result.trivial and result.corrections == []
    assert logical_fidelity(out, l, "shor") == pytest.approx(1, abs=1e-12)


def test_shor_x_on_qubit_4(rng):
    l = LogicalAmplitudes.random(rng)
    result, out = shor_correct(apply_error(shor_codeword(l), ErrorSpec(4, "X")), rng)
    outcomes = {p.pauli: p.outcome for p in result.parities}
    assert outcomes["IIIZZIIII"] == -1 and outcomes["IIIIZZIII"] == -1
    assert result.corrections == [(4, "X")]
    assert logical_fidelity(out, l, "shor") == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("q", range(9))
@pytest.mark.parametrize("kind", "XYZ")
def test_shor_corrects_every_pauli(q, kind, rng):
    l = LogicalAmplitudes.random(rng)
    s, _ = shor_encode(l)
    _, out = shor_correct(apply_error(s, ErrorSpec(q, kind)), rng)
    assert logical_fidelity(out, l, "shor") == pytest.approx(1, abs=1e-10)


def test_shor_continuous_error_example(rng):
    l = LogicalAmplitudes.random(rng)
    e = ErrorSpec(7, "U", 1.234, (0.6, 0, 0.8))
    _, out = shor_correct(apply_error(shor_codeword(l), e), rng)
    assert logical_fidelity(out, l, "shor") == pytest.approx(1, abs=1e-10)


def test_shor_deterministic_mode_without_rng(rng):
    l = LogicalAmplitudes.random(rng)
    e = ErrorSpec(2, "U", 0.4, (0, 1, 0))
    _, out = shor_correct(apply_error(shor_codeword(l), e))
    assert logical_fidelity(out, l, "shor") == pytest.approx(1, abs=1e-10)


def test_logical_fidelity_orthogonal():
    s = repetition_codeword(LogicalAmplitudes(1, 0), 3)
    assert logical_fidelity(s, LogicalAmplitudes(0, 1), "repetition") == 0
    with pytest.raises(InvalidArgumentError):
        logical_fidelity(s, LogicalAmplitudes(1, 0), "shor")

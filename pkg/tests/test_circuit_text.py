import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import circuits
from qadder.adders import basis_adder
from qadder.circuit_text import (
    CircuitSyntaxError,
    SerializationError,
    parse,
    parse_angle,
    serialize,
    structurally_equal,
)
from qadder.gates import Circuit, Gate, rotation

ADDER_TEXT = ("QUBITS 3\nCNOT 1 2\nCH 2 3\nCNOT 1 2\nCNOT !1 2\nCNOT !1 3\n"
              "CCNOT 2 !3 1\nCNOT !1 3\nCNOT !1 2")


def test_parse_basis_adder():
    c = parse(ADDER_TEXT)
    assert c.n_qubits == 3 and c.gates == basis_adder().circuit.gates


def test_parse_u3_is_rx_pi():
    c = parse("QUBITS 1\nU3(pi, -pi/2, pi/2) 1")
    assert len(c) == 1
    assert np.allclose(c.gates[0].to_matrix(), rotation("x", math.pi))


@pytest.mark.parametrize("text, line, col", [
    ("QUBITS 2\nCNOT 1 1", 2, 8),
    ("QUBITS 2\nX 3", 2, 3),
    ("QUBITS 2\nFROB 1", 2, 1),
    ("X 1\nQUBITS 1", 1, 1),
    ("QUBITS 2\nCNOT 1", 2, 1),
    ("QUBITS 2\nRX(pi/0) 1", 2, 4),
    ("QUBITS 2\nH !1", 2, 3),
    ("QUBITS 2\nQUBITS 2", 2, 1),
    ("QUBITS 2\nH 1\nINDEXING 0", 3, 1),
    ("QUBITS 0", 1, 1),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(CircuitSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_missing_header():
    with pytest.raises(CircuitSyntaxError):
        parse("# nothing here\n")


def test_zero_based_indexing_and_comments():
    c = parse("QUBITS 2 # two qubits\r\nINDEXING 0\r\n\r\nCNOT 0 1  # entangle\r\n")
    assert c.gates == (Gate("CNOT", (1,), (0,)),)


def test_parse_angle_forms():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("3*pi/8") == pytest.approx(3 * math.pi / 8)
    assert parse_angle("0.25") == 0.25
    assert parse_angle("1e-3") == 0.001
    for bad in ("", "pie", "/2", "pi/0", "1e999", "nan"):
        with pytest.raises(ValueError):
            parse_angle(bad)


def test_serialize_examples():
    assert serialize(Circuit(4)) == "QUBITS 4\n"
    text = serialize(basis_adder().circuit, ["basis adder"])
    assert text.startswith("# basis adder\nQUBITS 3\n")
    assert parse(text).gates == basis_adder().circuit.gates
    with pytest.raises(SerializationError):
        serialize(Circuit(1, [Gate("MATRIX", (0,), matrix=np.eye(2))]))


def test_bytes_input():
    assert parse(b"QUBITS 1\nH 1\n").gates == (Gate("H", (0,)),)
    with pytest.raises(CircuitSyntaxError):
        parse(b"QUBITS 1\n\xff\n")


@settings(max_examples=1000)
@given(circuits(max_gates=10, max_qubits=5))
def test_round_trip(c):
    text = serialize(c)
    back = parse(text)
    assert structurally_equal(c, back)
    assert serialize(back) == text


_EDIT_CHARS = st.sampled_from(list("QUBITSCNOTHXZ0123456789 !()#,.-+*/pi\n\t\r") + ["\x00", "é"])


@settings(max_examples=1000)
@given(circuits(max_gates=6, max_qubits=4), st.data())
def test_single_character_edits_never_crash(c, data):
    text = serialize(c)
    pos = data.draw(st.integers(0, len(text)))
    kind = data.draw(st.sampled_from(["insert", "delete", "replace"]))
    ch = data.draw(_EDIT_CHARS)
    if kind == "insert":
        edited = text[:pos] + ch + text[pos:]
    elif kind == "delete":
        edited = text[:pos] + text[pos + 1:]
    else:
        edited = text[:pos] + ch + text[pos + 1:]
    try:
        out = parse(edited)
    except CircuitSyntaxError:
        return
    assert isinstance(out, Circuit)

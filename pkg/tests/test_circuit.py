import json

import pytest
from hypothesis import given, strategies as st

from zonemove.circuit import (
    Circuit,
    CZGate,
    circuit_to_dict,
    gate_count,
    parse_circuit,
    serialize_circuit,
)
from zonemove.errors import DuplicateGateInBlock, MalformedInput, QubitOutOfRange, SelfPair


def test_parse_simple():
    c = parse_circuit('{"num_qubits":3,"blocks":[[[0,1],[1,2]]]}')
    assert c.num_qubits == 3
    assert len(c.blocks) == 1
    assert c.blocks[0] == (CZGate(0, 1), CZGate(1, 2))
    assert c.num_1q_gates is None


def test_parse_normalizes_pairs():
    c = parse_circuit('{"num_qubits":4,"blocks":[[[3,1]],[[2,0]]]}')
    assert [(g.a, g.b) for g in c.gates] == [(1, 3), (0, 2)]


@pytest.mark.parametrize(
    "text, err",
    [
        ('{"num_qubits":2,"blocks":[[[0,0]]]}', SelfPair),
        ('{"num_qubits":2,"blocks":[[[1,0],[0,1]]]}', DuplicateGateInBlock),
        ('{"num_qubits":2,"blocks":[[[0,2]]]}', QubitOutOfRange),
        ('{"num_qubits":2,"blocks":[[[-1,0]]]}', QubitOutOfRange),
        ('{"num_qubits":2}', MalformedInput),
        ('{"num_qubits":"2","blocks":[]}', MalformedInput),
        ('{"num_qubits":2,"blocks":[[[0,1,1]]]}', MalformedInput),
        ('{"num_qubits":2,"blocks":[[[0,true]]]}', MalformedInput),
        ('{"num_qubits":2,"blocks":[], "extra": 1}', MalformedInput),
        ('{"num_qubits":2,"blocks":[], "num_1q_gates": -3}', MalformedInput),
        ("[1, 2]", MalformedInput),
        ("{not json", MalformedInput),
    ],
)
def test_parse_rejects(text, err):
    with pytest.raises(err):
        parse_circuit(text)


def test_same_pair_in_two_blocks_is_legal():
    c = parse_circuit('{"num_qubits":2,"blocks":[[[0,1]],[[1,0]]]}')
    assert gate_count(c) == 2


def test_serialize_examples():
    assert serialize_circuit(Circuit.from_pairs(2, [[(0, 1)]])) == '{"num_qubits":2,"blocks":[[[0,1]]]}'
    assert serialize_circuit(Circuit(5)) == '{"num_qubits":5,"blocks":[]}'


def test_round_trip_example():
    text = '{"num_qubits":3,"blocks":[[[0,1],[1,2]]]}'
    c = parse_circuit(text)
    assert parse_circuit(serialize_circuit(c)) == c
    assert json.loads(serialize_circuit(c)) == json.loads(text)


def test_round_trip_keeps_1q_count():
    c = Circuit.from_pairs(3, [[(0, 1)]], num_1q_gates=7)
    assert parse_circuit(serialize_circuit(c)).num_1q_gates == 7


def test_gate_count():
    assert gate_count(Circuit.from_pairs(3, [[(0, 1), (1, 2)]])) == 2
    assert gate_count(Circuit(4)) == 0


@st.composite
def circuits(draw):
    n = draw(st.integers(2, 8))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    blocks = draw(
        st.lists(
            st.lists(pairs, max_size=10, unique_by=lambda p: (min(p), max(p))),
            max_size=4,
        )
    )
    g1 = draw(st.one_of(st.none(), st.integers(0, 50)))
    return Circuit.from_pairs(n, blocks, g1)


@given(circuits())
def test_round_trip_property(c):
    again = parse_circuit(serialize_circuit(c))
    assert again == c
    assert all(g.a < g.b for g in again.gates)
    assert circuit_to_dict(again) == circuit_to_dict(c)

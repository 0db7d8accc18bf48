import math

import pytest

from qadder.gates import Circuit, Gate
from qadder.noise import NoiseModel
from qadder.tables import BASES, INPUT_LABELS, PUBLISHED, compute_table

# a small hand-made three-qubit adder standing in for an evolved one
TOY = Circuit(3, [Gate("RY", (2,), params=(math.pi / 4,)), Gate("CNOT", (2,), (0,)),
                  Gate("CH", (2,), (1,))])


def test_table_one_ideal():
    rows = compute_table(1, "ideal")
    assert [r.label for r in rows] == INPUT_LABELS
    assert [r.computed for r in rows][:5] == pytest.approx([1.0] * 5, abs=1e-9)
    assert rows[5].computed == pytest.approx(0.9268, abs=5e-4)
    for r in rows:
        assert r.deviation == pytest.approx(abs(r.computed - r.reference))


def test_table_three_ideal():
    assert [r.computed for r in compute_table(3, "ideal")] == pytest.approx([1.0] * 6, abs=1e-9)


def test_table_two_ideal_layout():
    rows = compute_table(2, "ideal")
    assert [(r.label, r.arm) for r in rows] == [(b, m) for b in BASES for m in ("direct", "encoded")]
    assert all(r.computed == pytest.approx(1.0, abs=1e-9) for r in rows)


def test_table_two_advanced_uses_caption_counts():
    rows = compute_table(2, "advanced")
    assert {r.n_cnot for r in rows if r.arm == "direct"} == {26}
    assert {r.n_cnot for r in rows if r.arm == "encoded"} == {24}
    for r in rows:
        assert r.computed == pytest.approx(r.f_tilde * 0.99 ** r.n_cnot * 0.99 ** 2)


def test_advanced_with_ideal_noise_is_pure_product():
    rows = compute_table(1, "advanced", noise=NoiseModel(0.0, 0.0, 0.99, 0.99, False))
    assert rows[0].computed == pytest.approx(0.99 ** 13, abs=1e-12)
    assert rows[0].computed == pytest.approx(PUBLISHED[1]["advanced"][0], abs=1e-4)


def test_tables_four_and_five_need_adder():
    with pytest.raises(ValueError):
        compute_table(4, "ideal")
    rows = compute_table(5, "ideal", adder=TOY)
    assert all(r.computed == pytest.approx(1.0, abs=1e-9) for r in rows)
    assert len(compute_table(4, "ideal", adder=TOY)) == 18


def test_shots_are_seeded():
    a = compute_table(2, "ideal", shots=500, seed=3)
    b = compute_table(2, "ideal", shots=500, seed=3)
    assert a == b


def test_bad_arguments():
    with pytest.raises(ValueError):
        compute_table(6)
    with pytest.raises(ValueError):
        compute_table(1, "hardware")


def test_reference_rows_have_expected_lengths():
    for n, ref in PUBLISHED.items():
        size = 9 if n in (2, 4) else 6
        assert all(len(v) == size for v in ref.values())

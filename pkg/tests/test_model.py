import pytest

from mvnabs import (
    Attractor,
    GuardExceeded,
    Mvn,
    Trace,
    decode_state,
    encode_state,
    format_state,
    parse_state,
    state_space,
    state_space_size,
    structurally_equal,
    validate_model,
)
from mvnabs.model import check_state, check_state_limit


def tiny():
    return Mvn.from_tables(
        "tiny",
        ["a", "b"],
        {"a": 1, "b": 2},
        {"a": ("b",), "b": ("a", "b")},
        {
            "a": {(0,): 1, (1,): 1, (2,): 0},
            "b": {(g, h): (g + h) % 3 for g in range(2) for h in range(3)},
        },
    )


class TestConstruction:
    def test_from_tables_sorts_rows(self):
        m = tiny()
        assert m.tables[0] == (((0,), 1), ((1,), 1), ((2,), 0))

    def test_from_dense_matches_from_tables(self):
        m = tiny()
        dense = [list(m.dense_tables[i]) for i in range(2)]
        again = Mvn.from_dense("tiny", m.entities, m.state_maxes, m.neighbourhoods, dense)
        assert structurally_equal(m, again)

    def test_sequences_accepted_in_entity_order(self):
        m = Mvn.from_tables(
            "seq",
            ["a", "b"],
            [1, 2],
            [("b",), ("a", "b")],
            [
                {(0,): 1, (1,): 1, (2,): 0},
                {(g, h): 0 for g in range(2) for h in range(3)},
            ],
        )
        assert m.state_maxes == (1, 2)
        assert m.neighbourhoods == (("b",), ("a", "b"))

    def test_mismatched_sequence_length_rejected(self):
        with pytest.raises(ValueError):
            Mvn.from_tables("bad", ["a", "b"], [1], [("a",), ("a",)], [{}, {}])

    def test_mixed_radix_layout(self):
        m = tiny()
        assert m.radices == (2, 3)
        assert m.strides == (3, 1)
        assert m.entity_index == {"a": 0, "b": 1}
        assert m.input_indices == ((1,), (0, 1))

    def test_output_lookup(self):
        m = tiny()
        assert m.output("a", (2,)) == 0
        assert m.output("b", (1, 2)) == 0


class TestStates:
    def test_encode_decode_roundtrip(self):
        m = tiny()
        for idx, s in enumerate(state_space(m)):
            assert encode_state(m, s) == idx
            assert decode_state(m, idx) == s

    def test_state_space_size(self):
        assert state_space_size(tiny()) == 6

    def test_format_digit_string(self):
        m = tiny()
        assert format_state(m, (1, 2)) == "12"

    def test_format_comma_fallback(self):
        wide = Mvn.from_tables(
            "wide", ["a"], {"a": 10}, {"a": ("a",)},
            {"a": {(v,): 0 for v in range(11)}},
        )
        assert format_state(wide, (10,)) == "10"
        assert parse_state(wide, "10") == (10,)

    def test_parse_state_both_forms(self):
        m = tiny()
        assert parse_state(m, "12") == (1, 2)
        assert parse_state(m, "1,2") == (1, 2)
        assert parse_state(m, " 1 , 2 ") == (1, 2)

    def test_parse_state_errors(self):
        m = tiny()
        with pytest.raises(ValueError):
            parse_state(m, "1")
        with pytest.raises(ValueError):
            parse_state(m, "13")
        with pytest.raises(ValueError):
            parse_state(m, "x2")

    def test_check_state_range(self):
        m = tiny()
        with pytest.raises(ValueError):
            check_state(m, (0, 3))
        with pytest.raises(ValueError):
            check_state(m, (0,))

    def test_state_limit_guard(self):
        m = tiny()
        with pytest.raises(GuardExceeded):
            check_state_limit(m, 5)
        check_state_limit(m, 6)


class TestTrace:
    def test_accepts_canonical(self):
        t = Trace(((0, 0), (1, 1), (1, 0), (1, 0)))
        assert t.initial == (0, 0)
        assert t.cycle_entry == 2
        assert t.cycle == ((1, 0),)
        assert len(t) == 4

    def test_cycle_of_longer_period(self):
        t = Trace(((0, 1), (1, 2), (0, 1)))
        assert t.cycle == ((0, 1), (1, 2))

    def test_rejects_short(self):
        with pytest.raises(ValueError):
            Trace(((0, 0),))

    def test_rejects_duplicate_prefix(self):
        with pytest.raises(ValueError):
            Trace(((0, 0), (0, 0), (0, 0)))

    def test_rejects_open_end(self):
        with pytest.raises(ValueError):
            Trace(((0, 0), (0, 1), (1, 1)))

    def test_rejects_ragged_states(self):
        with pytest.raises(ValueError):
            Trace(((0, 0), (1,), (0, 0)))


class TestAttractor:
    def test_canonical_rotation_required(self):
        with pytest.raises(ValueError):
            Attractor(((1, 2), (0, 1)))

    def test_from_states_rotates(self):
        a = Attractor.from_states(((1, 2), (0, 1)))
        assert a.cycle == ((0, 1), (1, 2))
        assert a.period == 2

    def test_rejects_repeats(self):
        with pytest.raises(ValueError):
            Attractor.from_states(((0, 1), (0, 1)))


class TestValidation:
    def test_valid_model_is_clean(self):
        assert validate_model(tiny()) == []

    def kinds(self, m):
        return {v.kind for v in validate_model(m)}

    def test_missing_row(self):
        m = Mvn(
            "m", ("a",), (1,), (("a",),),
            ((((0,), 0),),),
        )
        assert self.kinds(m) == {"missing-row"}

    def test_conflicting_row(self):
        m = Mvn(
            "m", ("a",), (1,), (("a",),),
            ((((0,), 0), ((0,), 1), ((1,), 0)),),
        )
        assert self.kinds(m) == {"conflicting-row"}

    def test_output_out_of_range(self):
        m = Mvn(
            "m", ("a",), (1,), (("a",),),
            ((((0,), 2), ((1,), 0)),),
        )
        assert self.kinds(m) == {"output-out-of-range"}

    def test_input_out_of_range(self):
        m = Mvn(
            "m", ("a",), (1,), (("a",),),
            ((((0,), 0), ((1,), 0), ((2,), 0)),),
        )
        assert self.kinds(m) == {"input-out-of-range"}

    def test_row_arity(self):
        m = Mvn(
            "m", ("a",), (1,), (("a",),),
            ((((0, 0), 0), ((0,), 0), ((1,), 0)),),
        )
        assert "row-arity" in self.kinds(m)

    def test_unknown_input(self):
        m = Mvn("m", ("a",), (1,), (("zz",),), ((((0,), 0), ((1,), 0)),))
        assert self.kinds(m) == {"unknown-input"}

    def test_bad_state_range(self):
        m = Mvn("m", ("a",), (0,), (("a",),), ((((0,), 0),),))
        assert "bad-state-range" in self.kinds(m)

    def test_duplicate_entity(self):
        m = Mvn(
            "m", ("a", "a"), (1, 1), (("a",), ("a",)),
            ((((0,), 0), ((1,), 0)), (((0,), 0), ((1,), 0))),
        )
        assert "duplicate-entity" in self.kinds(m)

    def test_empty_model(self):
        m = Mvn("m", (), (), (), ())
        assert self.kinds(m) == {"empty-model"}

    def test_violation_str_names_entity(self):
        m = Mvn("m", ("a",), (1,), (("a",),), ((((0,), 0),),))
        text = str(validate_model(m)[0])
        assert "a" in text and "missing" in text

    def test_dense_tables_refuses_invalid(self):
        m = Mvn("m", ("a",), (1,), (("a",),), ((((0,), 0),),))
        with pytest.raises(ValueError):
            m.dense_tables


def test_structural_equality_ignores_name():
    m = tiny()
    renamed = Mvn("other", m.entities, m.state_maxes, m.neighbourhoods, m.tables)
    assert structurally_equal(m, renamed)


def test_structural_equality_sees_table_changes():
    m = tiny()
    flipped = dict({(0,): 0, (1,): 1, (2,): 0}.items())
    other = Mvn.from_tables(
        m.name, m.entities, m.state_maxes, m.neighbourhoods,
        {"a": flipped, "b": {inputs: out for inputs, out in m.tables[1]}},
    )
    assert not structurally_equal(m, other)

import re

import pytest
from refradius.errors import ArgumentError, ParseError
from refradius.field import BoolField, ChoiceField, ConfigField, FloatField, IntField, ListField, StrField


def make_dummy(config_field, store=None):
    class DummySettings:
        def __init__(self):
            self.store = dict(store or {})

        setting = config_field

    return DummySettings()


# fmt: off
read_cases = [
    (IntField("seeds", default=3), {}, 3),
    (IntField("seeds", default=3), {"setting": "12"}, 3),  # store is keyed by the field key
    (IntField("seeds", default=3), {"seeds": "12"}, 12),
    (FloatField("truth"), {}, None),
    (FloatField("truth"), {"truth": "1.22"}, 1.22),
    (StrField("output_dir", default="out"), {}, "out"),
    (BoolField("include_self_pairs", default=True), {}, True),
    (BoolField("include_self_pairs"), {"include_self_pairs": "Yes"}, True),
    (BoolField("include_self_pairs"), {"include_self_pairs": "off"}, False),
    (ListField("lengths", int), {"lengths": "200, 1000,,4000"}, [200, 1000, 4000]),
    (ListField("betas", float, default="0.1,0.5"), {}, [0.1, 0.5]),
    (ChoiceField("system", ("henon", "lorenz")), {"system": "Lorenz"}, "lorenz"),
]
# fmt: on


@pytest.mark.parametrize("config_field, store, expected", read_cases)
def test_read(config_field, store, expected):
    assert make_dummy(config_field, store).setting == expected


# fmt: off
write_cases = [
    (IntField("seeds"), 10, "10"),
    (IntField("seeds"), " 7 ", "7"),
    (FloatField("truth"), 0.1, "0.1"),
    (FloatField("truth"), 1e-8, "1e-08"),
    (BoolField("include_self_pairs"), False, "false"),
    (ListField("lengths", int), [200, 400], "200,400"),
    (ListField("betas", float), [0.01, 0.5], "0.01,0.5"),
    (ChoiceField("estimator", ("corrdim", "k2")), "K2", "K2"),
]
# fmt: on


@pytest.mark.parametrize("config_field, value, raw", write_cases)
def test_write_stores_raw_text(config_field, value, raw):
    dummy = make_dummy(config_field)
    dummy.setting = value
    assert dummy.store[config_field.key] == raw


def test_write_then_read_float_is_exact():
    dummy = make_dummy(FloatField("grid_min"))
    dummy.setting = 0.1 + 0.2
    assert dummy.setting == 0.1 + 0.2


# fmt: off
bad_value_cases = [
    (IntField("seeds", minimum=1), 0, ArgumentError, "seeds must be >= 1, got 0"),
    (IntField("seeds", maximum=5), 6, ArgumentError, "seeds must be <= 5, got 6"),
    (IntField("seeds"), "ten", ParseError, "Invalid value 'ten' for seeds"),
    (FloatField("truth"), "1,2", ParseError, "Invalid value '1,2' for truth"),
    (BoolField("include_self_pairs"), "maybe", ParseError, "expected one of true/false"),
    (ListField("lengths", int, minimum=2), "200,1", ArgumentError, "lengths must be >= 2, got 1"),
    (ListField("lengths", int), " , ", ArgumentError, "lengths must not be empty"),
    (ChoiceField("kind", ("corrdim", "k2")), "d2", ArgumentError, "kind must be one of corrdim, k2, got 'd2'"),
]
# fmt: on


@pytest.mark.parametrize("config_field, value, error, message", bad_value_cases)
def test_write_rejects(config_field, value, error, message):
    dummy = make_dummy(config_field)
    with pytest.raises(error, match=re.escape(message)):
        dummy.setting = value
    assert config_field.key not in dummy.store


def test_bad_stored_value_fails_on_read():
    dummy = make_dummy(IntField("seeds"), {"seeds": "x"})
    with pytest.raises(ParseError, match="Invalid value 'x' for seeds"):
        dummy.setting


def test_class_access_returns_descriptor():
    dummy = make_dummy(IntField("grid_points", default=20))
    descriptor = type(dummy).setting
    assert isinstance(descriptor, ConfigField)
    assert descriptor.flag == "--grid-points"


@pytest.mark.parametrize("key", ["GridPoints", "grid-points", "1st"])
def test_key_must_be_lowercase_identifier(key):
    with pytest.raises(ValueError, match="lowercase identifier"):
        IntField(key)

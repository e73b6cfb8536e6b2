import io

from pytest import raises
from tmspy.dephasing import FilterSpec
from tmspy.jpa import JpaParams
from tmspy.utils import *


def test_InputError():
    assert str(InputError("bad")) == "bad" and InputError("bad").line is None
    error = InputError("bad", line=3)
    assert str(error) == "line 3: bad" and isinstance(error, ValueError)


def test_factory_name():
    assert factory_name(FilterSpec) == "dephasing.FilterSpec"
    assert factory_name(int) == "builtins.int"


def test_assert_isinstance():
    assert_isinstance(1., (int, float))
    with raises(TypeError) as error:
        assert_isinstance("1", JpaParams)
    assert str(error.value)\
        == "Expected jpa.JpaParams, got builtins.str instead."


def test_dumps_loads():
    objects = [FilterSpec(1e6), JpaParams(.5, .1, 1.)]
    raw = "[{}]".format(", ".join(map(dumps, objects)))
    assert loads(raw) == objects
    assert from_tree(JpaParams(.2).to_tree()) == JpaParams(.2)


def test_format_float():
    assert format_float(1 / 3, 3) == "0.333"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(1e-7) == "9.9999999999999995e-08"


def test_csv(tmp_path):
    path = str(tmp_path / "curve.csv")
    write_csv(path, ["tau_s", "nk"], [(0, 1.), (1e-6, -.25)])
    with open(path, newline='') as file:
        assert file.read() == "tau_s,nk\n0,1\n9.9999999999999995e-07,-0.25\n"
    header, rows = read_csv(path, [("tau_s", "nk"), ("tau_s", "value")])
    assert header == ("tau_s", "nk") and rows == [[0., 1.], [1e-6, -.25]]
    buffer = io.StringIO("tau_s, value\n\n1,2\n")
    assert read_csv(buffer, [("tau_s", "value")])[1] == [[1., 2.]]
    with raises(InputError) as error:
        read_csv(io.StringIO("tau_s,value\n1,2,3\n"), [("tau_s", "value")])
    assert error.value.line == 2

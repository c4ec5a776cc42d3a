import numpy as np
import pytest
from hypothesis import given, strategies as st

from virtualnet.dsl import format_network, load_network, parse_network_dsl
from virtualnet.errors import NetworkParseError
from virtualnet.network import (
    BeamSplitter,
    PhaseFlip,
    Swap,
    VirtualNetwork,
    compile_cluster,
    compile_recipe,
    validate_orthogonal,
)


def test_epr_network():
    net = parse_network_dsl("modes 2\nbs 1 2 0.5")
    assert net.n_modes == 2
    assert net.ops == (BeamSplitter(1, 2, 0.5),)
    assert np.allclose(net.matrix, compile_recipe(2).matrix)


def test_three_mode_network_is_orthogonal():
    net = parse_network_dsl("modes 3\nbs 1 2 0.3333333333\nbs 2 3 0.5\nflip 1\nswap 1 2")
    assert net.ops == (BeamSplitter(1, 2, 0.3333333333), BeamSplitter(2, 3, 0.5), PhaseFlip(1), Swap(1, 2))
    assert validate_orthogonal(net.matrix).passed


def test_comments_blank_lines_and_whitespace():
    text = "# header\n\n  modes 3   # three\n\tflip 2\nswap 1 3 # trailing\n\n"
    net = parse_network_dsl(text)
    assert net.ops == (PhaseFlip(2), Swap(1, 3))


@pytest.mark.parametrize(
    "text, line, column, message",
    [
        ("modes 2\nbs 1 3 0.5", 2, 6, "index 3 exceeds modes 2"),
        ("modes 2\nrot 1 0.3", 2, 1, "unknown operation 'rot'"),
        ("bs 1 2 0.5", 1, 1, "'modes N' missing"),
        ("modes 2\nbs 1 2 1.5", 2, 8, "outside [0, 1]"),
        ("modes 2\nbs 1 2 abc", 2, 8, "must be a number"),
        ("modes 2\nbs 1 2 nan", 2, 8, "outside [0, 1]"),
        ("modes 2\nflip 0", 2, 6, "below 1"),
        ("modes 2\nswap 1 1", 2, 8, "distinct"),
        ("modes 2\nflip 1 2", 2, 8, "takes 1 argument"),
        ("modes 2\nswap 1", 2, 1, "takes 2 argument"),
        ("modes x", 1, 7, "must be an integer"),
        ("modes 0", 1, 7, "at least 1"),
        ("modes 2\nmodes 3", 2, 1, "declared twice"),
        ("modes 2\nflip 1.5", 2, 6, "must be an integer"),
    ],
)
def test_errors_carry_location(text, line, column, message):
    with pytest.raises(NetworkParseError) as info:
        parse_network_dsl(text)
    err = info.value
    assert (err.line, err.column) == (line, column)
    assert message in str(err)
    assert f"line {line}, column {column}" in str(err)


def test_missing_modes_in_empty_text():
    with pytest.raises(NetworkParseError, match="missing"):
        parse_network_dsl("# nothing here\n")


def test_modes_must_come_first():
    # an op before the declaration is reported at the op
    with pytest.raises(NetworkParseError) as info:
        parse_network_dsl("flip 1\nmodes 2")
    assert info.value.line == 1


@pytest.mark.parametrize("n", range(2, 13))
def test_recipes_round_trip(n):
    net = compile_recipe(n)
    again = parse_network_dsl(format_network(net))
    assert again.ops == net.ops and again.n_modes == net.n_modes
    assert np.array_equal(again.matrix, net.matrix)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cluster_round_trip(n):
    net = compile_cluster(n)
    assert parse_network_dsl(format_network(net)).ops == net.ops


op = st.one_of(
    st.builds(BeamSplitter, st.integers(1, 3), st.just(4), st.floats(0, 1)),
    st.builds(PhaseFlip, st.integers(1, 4)),
    st.builds(Swap, st.integers(1, 2), st.integers(3, 4)),
)


@given(st.lists(op, max_size=15))
def test_round_trip_property(ops):
    net = VirtualNetwork(4, ops)
    text = format_network(net)
    assert parse_network_dsl(text).ops == net.ops
    assert format_network(parse_network_dsl(text)) == text


def test_load_network_names_file(tmp_path):
    path = tmp_path / "bad.net"
    path.write_text("modes 2\nswap 1 5\n", encoding="utf-8")
    with pytest.raises(NetworkParseError) as info:
        load_network(path)
    assert str(info.value).startswith(f"{path}, line 2, column 8")

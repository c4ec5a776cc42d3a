import pytest

from virtualnet.config import RunConfig, format_config, load_config, parse_config
from virtualnet.errors import ConfigError


def test_defaults():
    c = RunConfig()
    assert c.gm_squeezing_db == -4.3 and c.fm_squeezing_db == -3.7
    assert c.gm_antisqueezing_db == "auto"
    assert c.ga_population == 64 and c.ga_generations == 200 and c.ga_objective_weight == 0.9
    assert c.sweep_levels_db == (-1.0, -3.0, -6.0, -10.0)
    assert c.losses is False


def test_parse_values_and_comments():
    text = """
    # inputs
    gm_squeezing_db = -6   # stronger
    fm_antisqueezing_db = 6.0
    losses = on
    sweep_levels_db = -2, -4.5
    seed = 42
    optimizer = closed_form
    network_file = nets/a.net
    """
    c = parse_config(text)
    assert c.gm_squeezing_db == -6.0
    assert c.fm_antisqueezing_db == 6.0
    assert c.losses is True
    assert c.sweep_levels_db == (-2.0, -4.5)
    assert c.seed == 42 and c.optimizer == "closed_form"
    assert c.network_file == "nets/a.net"
    assert c.ga_config().seed == 42


@pytest.mark.parametrize(
    "text, line, column, message",
    [
        ("seed = 1\nbogus = 2", 2, 1, "unknown key 'bogus'"),
        ("seed = 1\n  seed = 2", 2, 3, "already set on line 1"),
        ("seed 1", 1, 1, "expected 'key = value'"),
        ("seed = x", 1, 8, "bad value for 'seed'"),
        ("losses = maybe", 1, 10, "expected on/off"),
        ("gm_squeezing_db = inf", 1, 19, "finite"),
        ("seed =", 1, 7, "missing value"),
        ("sweep_levels_db = -1, abc", 1, 19, "bad value"),
    ],
)
def test_errors_carry_line_and_column(text, line, column, message):
    with pytest.raises(ConfigError) as info:
        parse_config(text, source="run.cfg")
    err = info.value
    assert (err.line, err.column) == (line, column)
    assert message in str(err)
    assert str(err).startswith(f"run.cfg, line {line}")


@pytest.mark.parametrize(
    "text, line",
    [
        ("# x\nn_min = 5\nn_max = 3", 2),
        ("\n\nga_mode = both", 3),
        ("optimizer = magic", 1),
        ("sweep_levels_db = 1, -3", 1),
        ("gm_squeezing_db = 2", 1),
        ("long_arm = 3", 1),
        ("seed = 18446744073709551616", 1),
    ],
)
def test_semantic_errors_point_at_line(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line


def test_round_trip():
    c = parse_config("seed = 9\nlosses = on\nsweep_levels_db = -1.5\ngm_antisqueezing_db = 7.5")
    assert parse_config(format_config(c)) == c
    assert parse_config(format_config(RunConfig())) == RunConfig()


def test_load_config(tmp_path):
    path = tmp_path / "a.cfg"
    path.write_text("seed = 5\n", encoding="utf-8")
    assert load_config(path).seed == 5
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")

import math

import pytest
from hypothesis import given, settings, strategies as st

from pwcycle import catalog
from pwcycle.errors import DegenerateError, ParseError
from pwcycle.integrate import IntegratorConfig
from pwcycle.model import AffineField, CenterSpec, FrozenRadial, RaySaddle, SaddleSpec, Variant
from pwcycle.sysfile import describe_system, emit, parse

_BASIC = """\
# threshold example
[switching]
variant = one_line

[center]
kind = F3   # left zone
a = -4

[saddle]
alpha = 1
beta = -1
delta = -2
gamma = -3
mu = -1
"""


def test_parse_and_build():
    desc = parse(_BASIC)
    assert desc.variant is Variant.ONE_LINE
    sys_ = desc.build()
    assert sys_.zones[0] == CenterSpec("F3", -4)
    assert sys_.zones[1] == SaddleSpec(1, -1, -2, -3, -1)
    assert desc.line_of("center.a") == 7
    assert desc.get("saddle.mu") == -1.0


def test_with_value_and_unknown_keys():
    desc = parse(_BASIC)
    assert desc.with_value("center.a", -3.5).build().zones[0].a == -3.5
    with pytest.raises(KeyError):
        desc.with_value("center.b", 1.0)
    with pytest.raises(KeyError):
        desc.get("nope")


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_round_trip_of_every_catalog_entry(name):
    entry = catalog.get(name)
    desc = entry.description()
    text = emit(desc)
    again = parse(text)
    assert again == desc
    assert emit(again) == text
    assert again.build().zones == entry.system.zones


_num = st.floats(-5, 5, allow_nan=False).filter(lambda v: v != 0)


@settings(max_examples=60, deadline=None)
@given(_num, _num, _num, _num, _num, st.sampled_from(["F1", "F2", "F3", "F4", "F5", "I1", "I2"]), _num, _num)
def test_round_trip_random_systems(al, be, de, ga, mu, kind, a, b):
    try:
        s = SaddleSpec(al, be, de, ga, mu)
    except DegenerateError:
        return
    from pwcycle.model import two_zone
    c = CenterSpec(kind, a if kind in ("F3", "F4", "F5") else 0.0, b if kind == "F5" else 0.0)
    desc = describe_system(two_zone(c, s))
    assert parse(emit(desc)).build().zones == (c, s)


def test_ray_and_affine_variants():
    ray = parse("[switching]\nvariant = ray_pair\nphi = 1.0\n[center]\nkind = frozen_radial\nn = 2\n"
                "[ray_saddle]\na = -0.5\nalpha = 1\nbeta = 0\n").build()
    assert ray.geometry.phi == 1.0 and ray.zones == (RaySaddle(-0.5, 1, 0), FrozenRadial(2))
    aff = parse("[switching]\nvariant = one_line\n[center]\nkind = F1\n"
                "[affine]\nm11 = 2\nm12 = 2\nm21 = -1\nm22 = -1\nc1 = -1\nc2 = -1\n").build()
    assert aff.zones[1] == AffineField(2, 2, -1, -1, -1, -1)


def test_options_and_env(monkeypatch):
    desc = parse(_BASIC + "[options]\nrel_tol = 1e-9\nmax_steps = 500\nscan_to = 2\n")
    cfg = desc.config(IntegratorConfig())
    assert cfg.rel_tol == 1e-9 and cfg.max_steps == 500
    monkeypatch.setenv("PWCYCLE_MAX_STEPS", "42")
    assert desc.config().max_steps == 42


@pytest.mark.parametrize("text,line,fragment", [
    ("[switching]\nvariant = one_line\n[centre]\n", 3, "unknown section"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F2\ncolour = red\n", 5, "unknown key"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F2\n[center]\n", 5, "duplicate section"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F2\nkind = F3\n", 5, "duplicate key"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F3\na = abc\n", 5, "must be a number"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F3\na = inf\n", 5, "finite"),
    ("[switching]\nvariant = zigzag\n", 2, "unknown variant"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F2\n", 2, "missing required section [saddle]"),
    ("[switching]\nvariant = two_lines\n[center]\nkind = F2\n[saddle]\nalpha=1\nbeta=0\ndelta=-1\ngamma=0\nmu=0\n",
     2, "missing required section [saddle2]"),
    ("[switching]\nvariant = one_line\nphi = 1\n[center]\nkind = F2\n[affine]\nm11=1\nm12=0\nm21=0\nm22=1\nc1=0\nc2=0\n",
     3, "phi only applies"),
    ("kind = F2\n", 1, "outside of any section"),
    ("[switching\n", 1, "malformed"),
    ("[center]\nkind = F2\n", 2, "missing required section [switching]"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F9\n[saddle]\nalpha=1\nbeta=0\ndelta=-1\ngamma=0\nmu=0\n",
     4, "unknown center kind"),
    ("[switching]\nvariant = one_line\n[center]\nkind = F2\n[saddle]\nalpha=1\nbeta=0\ndelta=-1\ngamma=0\nmu=0\n"
     "allow_degenerate = maybe\n", 11, "true or false"),
    ("[switching]\nvariant = ray_pair\n[center]\nkind = F2\n[ray_saddle]\na=-0.5\nalpha=1\nbeta=0\n", 4,
     "outer zone"),
    ("[switching]\nvariant = ray_pair\n[center]\nkind = I1\n[ray_saddle]\na=0.5\nalpha=1\nbeta=0\n", 5, "-1 < a < 0"),
])
def test_errors_cite_lines(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"line {line}:")


def test_degenerate_saddle_is_a_model_error():
    text = "[switching]\nvariant = one_line\n[center]\nkind = F2\n[saddle]\nalpha=1\nbeta=0\ndelta=1\ngamma=0\nmu=0\n"
    with pytest.raises(DegenerateError, match="line 5"):
        parse(text)


def test_default_phi():
    desc = parse("[switching]\nvariant = ray_pair\n[center]\nkind = I2\n[ray_saddle]\na=-0.5\nalpha=1\nbeta=0\n")
    assert desc.phi == math.pi / 2

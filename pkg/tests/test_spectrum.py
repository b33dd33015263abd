import math

import pytest

from qhe.errors import InvalidParameterError, InvalidScaleError, InvalidSpacingError
from qhe.spectrum import (
    Box,
    Explicit,
    Harmonic,
    LevelSpectrum,
    family_spectrum,
    from_spacings,
    spacings,
    uniform_scale,
)


def approx_tuple(values, rel=1e-14, abs=1e-15):
    return pytest.approx(tuple(values), rel=rel, abs=abs)


@pytest.mark.parametrize(
    "energies,expected",
    [((0, 1, 2), (1, 1)), ((0, 0.5, 2.5), (0.5, 2.0))],
)
def test_spacings(energies, expected):
    assert spacings(LevelSpectrum(energies)) == approx_tuple(expected)


def test_harmonic_spacings_equal():
    assert spacings(family_spectrum(Harmonic(2.0, 4))) == approx_tuple((2, 2, 2))


def test_from_spacings():
    assert from_spacings((1, 2)).energies == (0.0, 1.0, 3.0)
    assert from_spacings((0.5,), ground=-1).energies == (-1.0, -0.5)
    with pytest.raises(InvalidSpacingError):
        from_spacings((1, 0))
    with pytest.raises(InvalidSpacingError):
        from_spacings(())


@pytest.mark.parametrize("bad", [(1.0,), (0.0, 0.0), (1.0, 0.5), (0.0, math.nan), (0.0, math.inf)])
def test_level_spectrum_rejects(bad):
    with pytest.raises(InvalidSpacingError):
        LevelSpectrum(bad)


def test_relative_and_ground():
    s = LevelSpectrum((-1.0, 0.5, 2.0))
    assert s.ground == -1.0
    assert s.relative() == (0.0, 1.5, 3.0)
    assert len(s) == 3


def test_uniform_scale():
    assert uniform_scale(LevelSpectrum((0, 1, 2)), 0.5).energies == (0.0, 0.5, 1.0)
    s = LevelSpectrum((0, 1))
    assert uniform_scale(s, 1) == s
    for c in (0, -1, math.inf):
        with pytest.raises(InvalidScaleError):
            uniform_scale(s, c)


def test_box_width_change_is_uniform_scale():
    scaled = uniform_scale(family_spectrum(Box(1.0, 3)), 0.25)
    assert scaled.energies == approx_tuple(family_spectrum(Box(2.0, 3)).energies)


def test_families():
    assert family_spectrum(Harmonic(1.0, 3)).energies == (0.5, 1.5, 2.5)
    assert family_spectrum(Box(math.pi, 2)).energies == approx_tuple((0.5, 2.0))
    assert family_spectrum(Explicit((0, 1, 2))).energies == (0.0, 1.0, 2.0)


@pytest.mark.parametrize("fam", [Harmonic(0.0, 3), Harmonic(-1.0, 3), Box(0.0, 2), Harmonic(1.0, 1), Box(1.0, 2.5)])
def test_family_parameters_rejected(fam):
    with pytest.raises(InvalidParameterError):
        family_spectrum(fam)


@pytest.mark.parametrize("levels", [2, 3, 6])
def test_family_parameter_change_is_uniform_scale(levels):
    h1, h2 = family_spectrum(Harmonic(1.0, levels)), family_spectrum(Harmonic(3.5, levels))
    assert uniform_scale(h1, 3.5).energies == approx_tuple(h2.energies)
    b1, b2 = family_spectrum(Box(1.0, levels)), family_spectrum(Box(0.7, levels))
    assert uniform_scale(b1, 1 / 0.49).energies == approx_tuple(b2.energies)

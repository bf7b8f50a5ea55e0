import numpy as np
import pytest

from conevol import polyio, shapes
from conevol.errors import InvalidSpec


def test_round_trip_bit_exact(tmp_path):
    P = shapes.random_inscribed(3, 11, 4).vertices
    path = tmp_path / "q.txt"
    polyio.write_points(path, P)
    n, P2 = polyio.read_points(path)
    assert n == 3
    assert np.array_equal(P, P2)


def test_header_and_comments():
    n, P = polyio.loads_points("# comment\ndim 2\n0 0\n1 0\n\n0 1\n")
    assert n == 2 and P.shape == (3, 2)


@pytest.mark.parametrize("text", ["0 0 0\n", "dim 3\n1 2\n", "dim x\n", "dim 2\n1 a\n", ""])
def test_malformed(text):
    with pytest.raises(InvalidSpec):
        polyio.loads_points(text)

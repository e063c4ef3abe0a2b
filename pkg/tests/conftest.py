import json
from fractions import Fraction

import pytest

from parlearn.weighted import WeightedGraph, weighted_graph_to_dict


@pytest.fixture(scope="session")
def hstar() -> WeightedGraph:
    """Two vertices u, v with a loop at u: alpha = (1, 2), beta = [[1,1],[1,0]].

    Its partition function evaluates the independence polynomial at 2.
    """
    return WeightedGraph(
        (Fraction(1), Fraction(2)),
        ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(0))),
    )


@pytest.fixture()
def write_target(tmp_path):
    def _write(target: WeightedGraph, name: str = "target.json"):
        path = tmp_path / name
        path.write_text(json.dumps(weighted_graph_to_dict(target)) + "\n")
        return path

    return _write

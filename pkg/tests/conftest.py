import numpy as np
import pytest
from hypothesis import strategies as st

from thresholdlab.catalogue import enumerate_graphs
from thresholdlab.graphs import ThresholdGraph


def all_graphs(n_min: int, n_max: int):
    for n in range(n_min, n_max + 1):
        yield from enumerate_graphs(n)


@st.composite
def threshold_sequences(draw, min_n: int = 2, max_n: int = 16):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    if n == 2:
        return "01"
    middle = draw(st.lists(st.sampled_from("01"), min_size=n - 2, max_size=n - 2))
    return "0" + "".join(middle) + "1"


@st.composite
def threshold_graphs(draw, min_n: int = 2, max_n: int = 16):
    return ThresholdGraph.parse(draw(threshold_sequences(min_n, max_n)))


def float_eigenvalues(g: ThresholdGraph) -> np.ndarray:
    return np.linalg.eigvalsh(g.laplacian_array().astype(np.float64))


@pytest.fixture
def k4():
    return ThresholdGraph.parse("0111")


@pytest.fixture
def k4_minus_e():
    return ThresholdGraph.parse("0011")

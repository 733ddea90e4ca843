"""
Tests for the seeded random complex and graph models.
"""

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Import the module to test
from src.random_lab.random_models import LmModel, sample_gnp, sample_lm, subset_uniforms
from src.complex.simplicial_complex import complete_complex
from src.errors import PreconditionError


@pytest.mark.unit
class TestSubsetUniforms:
    """Test the counter-based uniform stream."""

    def test_range_and_determinism(self):
        """Test values lie in [0, 1) and repeat for the same seed."""
        first = subset_uniforms(42, 100)
        assert first.shape == (100,)
        assert np.all((first >= 0.0) & (first < 1.0))
        np.testing.assert_array_equal(first, subset_uniforms(42, 100))

    def test_prefix(self):
        """Test that a longer stream extends a shorter one."""
        np.testing.assert_array_equal(subset_uniforms(7, 10)[:5], subset_uniforms(7, 5))

    def test_negative_seed(self):
        """Test that negative seeds are rejected."""
        with pytest.raises(PreconditionError):
            subset_uniforms(-1, 3)


@pytest.mark.unit
class TestSampleLm:
    """Test the Linial-Meshulam model."""

    def test_determinism(self):
        """Test that the same parameters give the same faces."""
        assert sample_lm(8, 2, 0.5, 42).k_faces == sample_lm(8, 2, 0.5, 42).k_faces

    def test_seeds_differ(self):
        """Test that different seeds give different samples."""
        assert sample_lm(8, 2, 0.5, 1).k_faces != sample_lm(8, 2, 0.5, 2).k_faces

    def test_extreme_probabilities(self):
        """Test p = 0 gives no faces and p = 1 gives K_n^k."""
        assert sample_lm(6, 2, 0.0, 3).is_empty()
        assert sample_lm(6, 2, 1.0, 3).k_faces == complete_complex(6, 2).k_faces

    def test_sample_shape(self):
        """Test vertex count, dimension and face sizes."""
        complex_ = sample_lm(7, 3, 0.4, 9)
        assert complex_.n == 7
        assert complex_.k == 3
        assert all(len(face) == 4 for face in complex_.k_faces)

    @pytest.mark.parametrize("n, k, p", [(5, 2, -0.1), (5, 2, 1.5), (5, 0, 0.5), (2, 2, 0.5)])
    def test_invalid_parameters(self, n, k, p):
        """Test that out-of-range parameters are rejected."""
        with pytest.raises(PreconditionError):
            sample_lm(n, k, p, 0)

    def test_model_dataclass(self):
        """Test that LmModel samples the same complex."""
        assert LmModel(8, 2, 0.3, 5).sample().k_faces == sample_lm(8, 2, 0.3, 5).k_faces

    @pytest.mark.property
    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(min_value=3, max_value=9),
        st.integers(min_value=1, max_value=3),
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.integers(min_value=0, max_value=2 ** 31),
    )
    def test_monotone_coupling(self, n, k, p, q, seed):
        """Test that raising p with the same seed never removes a face."""
        if n < k + 1:
            return
        low, high = sorted((p, q))
        assert set(sample_lm(n, k, low, seed).k_faces) <= set(sample_lm(n, k, high, seed).k_faces)


@pytest.mark.unit
class TestSampleGnp:
    """Test the Erdos-Renyi model."""

    def test_vertices_kept(self):
        """Test that isolated vertices stay in the graph."""
        graph = sample_gnp(10, 0.0, 1)
        assert sorted(graph.nodes) == list(range(10))
        assert graph.number_of_edges() == 0

    def test_complete(self):
        """Test p = 1 gives K_n."""
        assert nx.is_isomorphic(sample_gnp(6, 1.0, 4), nx.complete_graph(6))

    def test_small_graphs(self):
        """Test graphs with fewer than two vertices."""
        assert sample_gnp(1, 0.5, 0).number_of_nodes() == 1
        assert sample_gnp(0, 0.5, 0).number_of_nodes() == 0

    def test_matches_graph_model(self):
        """Test that G(n, p) is the 1-dimensional Linial-Meshulam sample."""
        graph = sample_gnp(9, 0.4, 11)
        assert sorted(graph.edges) == list(sample_lm(9, 1, 0.4, 11).k_faces)

    def test_invalid_probability(self):
        """Test that p outside [0, 1] is rejected."""
        with pytest.raises(PreconditionError):
            sample_gnp(5, 2.0, 0)

    @pytest.mark.property
    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=2, max_value=15), st.floats(0.0, 1.0), st.integers(0, 2 ** 31))
    def test_monotone_coupling(self, n, p, seed):
        """Test that edges at p survive at (1 + p) / 2."""
        assert set(sample_gnp(n, p, seed).edges) <= set(sample_gnp(n, (1 + p) / 2, seed).edges)

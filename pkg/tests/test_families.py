"""
Tests for the named complex families.
"""

import networkx as nx
import pytest

# Import the module to test
from src.complex.families import (
    complete_bipartite,
    complete_tripartite,
    complex_graph,
    cycle_complex,
    cycle_graph,
    disjoint_union,
    family_complex,
    petersen_graph,
    tripartite_parts,
)
from src.complex.simplicial_complex import complete_complex
from src.errors import ComplexError


@pytest.mark.unit
class TestFamilies:
    """Test the deterministic fixtures."""

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_tripartite_counts(self, m):
        """Test face counts of K_{m,m,m}^2."""
        complex_ = complete_tripartite(m)
        assert complex_.n == 3 * m
        assert len(complex_.k_faces) == m ** 3
        assert len(complex_.faces(1)) == 3 * m * m

    def test_tripartite_faces_are_transversal(self):
        """Test that each triangle takes one vertex from each part."""
        parts = tripartite_parts(2)
        for face in complete_tripartite(2).k_faces:
            assert [sum(v in part for v in face) for part in parts] == [1, 1, 1]

    @pytest.mark.parametrize("m, count", [(2, 4), (3, 18)])
    def test_bipartite_counts(self, m, count):
        """Test face counts of K_{m,m}^2: C(2m,3) minus 2 C(m,3)."""
        complex_ = complete_bipartite(m)
        assert len(complex_.k_faces) == count
        assert complex_.has_complete_skeleton()

    def test_bipartite_small_case_is_complete(self):
        """Test that K_{2,2}^2 is K_4^2."""
        assert complete_bipartite(2) == complete_complex(4, 2)

    def test_invalid_part_size(self):
        """Test that part sizes must be positive."""
        with pytest.raises(ComplexError):
            complete_tripartite(0)
        with pytest.raises(ComplexError):
            complete_bipartite(0)

    def test_cycle(self):
        """Test C_5 as a 1-complex."""
        complex_ = cycle_complex(5)
        assert complex_.k == 1
        assert len(complex_.k_faces) == 5
        with pytest.raises(ComplexError):
            cycle_graph(2)

    def test_petersen(self):
        """Test the Petersen graph is 3-regular on 10 vertices."""
        graph = petersen_graph()
        assert graph.number_of_nodes() == 10
        assert {d for _, d in graph.degree()} == {3}

    def test_complex_graph(self):
        """Test the graph of a 1-complex keeps every vertex."""
        graph = complex_graph(complete_complex(2, 1).subcomplex([]))
        assert graph.number_of_nodes() == 2
        assert graph.number_of_edges() == 0
        assert nx.is_isomorphic(complex_graph(cycle_complex(5)), nx.cycle_graph(5))
        with pytest.raises(ComplexError):
            complex_graph(complete_complex(3, 2))

    def test_disjoint_union(self):
        """Test vertex shifting in a disjoint union."""
        union = disjoint_union([complete_complex(3, 2), complete_complex(3, 2)])
        assert union.n == 6
        assert union.k_faces == ((0, 1, 2), (3, 4, 5))

    def test_disjoint_union_dimension_mismatch(self):
        """Test that unions need a common dimension."""
        with pytest.raises(ComplexError):
            disjoint_union([complete_complex(3, 2), complete_complex(3, 1)])
        with pytest.raises(ComplexError):
            disjoint_union([])

    def test_family_complex(self):
        """Test lookup of families by name."""
        assert family_complex("complete", n=5, k=2) == complete_complex(5, 2)
        assert family_complex("tripartite", m=2) == complete_tripartite(2)
        assert family_complex("petersen").n == 10
        with pytest.raises(ComplexError):
            family_complex("tripartite")
        with pytest.raises(ComplexError):
            family_complex("moebius")

"""
Auxiliary graph construction and DOT export.
"""

from __future__ import annotations

import pytest
from hypothesis import given

from app.core.errors import AuxEdgeError
from app.models.auxiliary import Colour, ColouredEdge
from app.models.graph import EdgeIndex
from app.services.aux_graph import build_auxiliary, check_degree_identity, inner_edge_of, neighbouring
from app.services.dot_export import aux_to_dot, graph_to_dot
from app.services.graph_core import hamilton_factor, inner_edges
from tests.builders import complete_instance, hamiltonian_instances
from tests.settings import STANDARD_SETTINGS


class TestChordedHexagon:
    def test_colour_classes(self, c6_chorded):
        aux = build_auxiliary(c6_chorded)
        assert aux.red == {(1, 5), (0, 2)}
        assert aux.blue == {(0, 2), (1, 3)}
        assert aux.double_edges() == {(0, 2)}

    def test_inner_edge_of_each_colour(self, c6_chorded):
        aux = build_auxiliary(c6_chorded)
        assert inner_edge_of(aux, ColouredEdge.of(0, 2, Colour.RED)) == (1, 3)
        assert inner_edge_of(aux, ColouredEdge.of(1, 5, "red")) == (0, 2)
        assert inner_edge_of(aux, ColouredEdge.of(1, 3, Colour.BLUE)) == (1, 3)

    def test_missing_aux_edge(self, c6_chorded):
        aux = build_auxiliary(c6_chorded)
        with pytest.raises(AuxEdgeError, match=r"red edge \{e1,e4\}"):
            inner_edge_of(aux, ColouredEdge.of(0, 3, Colour.RED))


def test_complete_graph_aux_is_all_non_neighbouring_pairs():
    aux = build_auxiliary(complete_instance(4))
    assert aux.red == aux.blue == {(0, 2), (1, 3)}
    assert inner_edge_of(aux, ColouredEdge.of(0, 2, Colour.RED)) == (1, 3)
    assert inner_edge_of(aux, ColouredEdge.of(0, 2, Colour.BLUE)) == (0, 2)

    aux6 = build_auxiliary(complete_instance(6))
    expected = {(i, j) for i in range(6) for j in range(i + 2, 6) if (i, j) != (0, 5)}
    assert aux6.red == aux6.blue == expected
    assert aux6.min_degree(Colour.RED) == 3


def test_neighbouring_wraps_around():
    aux = build_auxiliary(complete_instance(5))
    assert neighbouring(aux, 0, 4)
    assert neighbouring(aux, EdgeIndex(2, 5), EdgeIndex(3, 5))
    assert not neighbouring(aux, 0, 2)
    assert EdgeIndex(-1, 5).index == 4
    assert EdgeIndex.from_external(1, 5).label == "e1"


@given(hamiltonian_instances())
@STANDARD_SETTINGS
def test_every_inner_edge_gives_one_edge_of_each_colour(instance):
    aux = build_auxiliary(instance)
    inner = inner_edges(instance)
    assert len(aux.red) == len(aux.blue) == len(inner)
    assert check_degree_identity(instance, aux)
    for edge in aux.coloured_edges():
        assert inner_edge_of(aux, edge) in inner


# ── DOT ───────────────────────────────────────────────────────────────────────

class TestDot:
    def test_aux_dot_draws_double_edges_twice(self, c6_chorded):
        dot = aux_to_dot(build_auxiliary(c6_chorded))
        assert dot.startswith("graph A {\n")
        assert dot.rstrip().endswith("}")
        assert '"e1" -- "e3" [color=red style=solid];' in dot
        assert '"e1" -- "e3" [color=blue style=dashed];' in dot
        assert '"e2" -- "e6" [color=red style=solid];' in dot
        assert dot.count(" -- ") == 4
        assert dot.count("[pos=") == 6

    def test_graph_dot_highlights_factor(self, c6_chorded):
        dot = graph_to_dot(c6_chorded, hamilton_factor(c6_chorded))
        assert dot.count("penwidth=3") == 6
        assert '"1" -- "3" [color="#DDDDDD" style=dotted];' in dot

    def test_graph_dot_without_factor(self, c6_chorded):
        dot = graph_to_dot(c6_chorded)
        assert "penwidth=3" not in dot
        assert '"1" -- "2" [color="#888888" style=solid];' in dot

from __future__ import annotations

from pathlib import Path
from typing import Callable

import pytest

from app.models.graph import HamiltonianInstance
from tests.builders import chorded_c6, complete_instance, graph_text


@pytest.fixture
def c6_chorded() -> HamiltonianInstance:
    return chorded_c6()


@pytest.fixture
def k4() -> HamiltonianInstance:
    return complete_instance(4)


@pytest.fixture
def k6() -> HamiltonianInstance:
    return complete_instance(6)


@pytest.fixture
def write_graph(tmp_path: Path) -> Callable[..., str]:
    """Write an instance as a graph file and return its path."""

    def _write(instance: HamiltonianInstance, name: str = "graph.txt", with_hamilton: bool = True) -> str:
        path = tmp_path / name
        path.write_text(graph_text(instance, with_hamilton), encoding="utf-8")
        return str(path)

    return _write

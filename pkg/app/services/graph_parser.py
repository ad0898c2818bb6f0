"""
Graph File Parser Service
─────────────────────────
Parses and serializes the plain-text graph and factor formats.

Graph file:
    n m                 – header (first non-comment line)
    u v                 – m edge lines, 1-based vertex ids
    H: v1 v2 ... vn     – optional declared Hamilton cycle
    # ...               – comment lines, ignored

Factor file:
    one cycle per line, space-separated 1-based vertex ids

Everything returned here is 0-based; the 1-based ids only exist in text.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import IO

from app.core.config import COMMENT_PREFIX, HAMILTON_BUDGET, HAMILTON_PREFIX
from app.core.errors import GraphFormatError
from app.models.graph import Graph, HamiltonianInstance, TwoFactor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphDocument:
    graph: Graph
    hamilton: tuple[int, ...] | None = None


# ══════════════════════════════════════════════════════════════════════════════
# Reading
# ══════════════════════════════════════════════════════════════════════════════

def read_upload(file: IO[bytes]) -> str:
    """Decode an uploaded file-like object to text."""
    try:
        content = file.read()
    except Exception as exc:
        raise GraphFormatError(f"cannot read uploaded file: {exc}") from exc
    if isinstance(content, bytes):
        try:
            content = content.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphFormatError("uploaded file is not UTF-8 text") from exc
    if not content or not content.strip():
        raise GraphFormatError("uploaded file is empty")
    return content


def _int_fields(fields: list[str], lineno: int | None) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(fields)!r}", lineno) from None


def parse_graph_document(text: str) -> GraphDocument:
    """Parse a graph file into its graph and optional declared Hamilton cycle."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    hamilton: tuple[int, ...] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue

        # ── Declared Hamilton cycle ──────────────────────────────────────────
        if line.startswith(HAMILTON_PREFIX):
            if header is None:
                raise GraphFormatError("H: line before header", lineno)
            if hamilton is not None:
                raise GraphFormatError("duplicate H: line", lineno)
            ids = _int_fields(line[len(HAMILTON_PREFIX):].split(), lineno)
            n = header[0]
            bad = [v for v in ids if not 1 <= v <= n]
            if bad:
                raise GraphFormatError(f"vertex id {bad[0]} out of range 1..{n}", lineno)
            hamilton = tuple(v - 1 for v in ids)
            continue

        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno)
        a, b = _int_fields(fields, lineno)

        # ── Header ───────────────────────────────────────────────────────────
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError("negative vertex or edge count", lineno)
            header = (a, b)
            continue

        # ── Edge ─────────────────────────────────────────────────────────────
        n = header[0]
        for v in (a, b):
            if not 1 <= v <= n:
                raise GraphFormatError(f"vertex id {v} out of range 1..{n}", lineno)
        if a == b:
            raise GraphFormatError(f"loop edge at vertex {a}", lineno)
        edges.append((a - 1, b - 1))

    if header is None:
        raise GraphFormatError("missing 'n m' header line")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")

    graph = Graph.from_edges(n, edges)
    if len(graph.edges) < len(edges):
        logger.debug("dropped %d duplicate edge line(s)", len(edges) - len(graph.edges))
    return GraphDocument(graph=graph, hamilton=hamilton)


def parse_graph(text: str) -> Graph:
    return parse_graph_document(text).graph


def parse_factor_file(text: str) -> list[list[int]]:
    """One cycle per line; returns 0-based vertex lists (range unchecked)."""
    cycles: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIX):
            continue
        # tolerate the "i: v v v" lines printed by `solve`
        if ":" in line:
            line = line.split(":", 1)[1]
        cycles.append([v - 1 for v in _int_fields(line.split(), lineno)])
    return cycles


def parse_hamilton_flag(value: str) -> tuple[int, ...]:
    """Parse a --hamilton value ("1,2,3" or "1 2 3") into 0-based ids."""
    fields = value.replace(",", " ").split()
    return tuple(v - 1 for v in _int_fields(fields, None))


# ══════════════════════════════════════════════════════════════════════════════
# Instance resolution
# ══════════════════════════════════════════════════════════════════════════════

def load_instance(
    document: GraphDocument,
    hamilton: tuple[int, ...] | None = None,
    budget: int = HAMILTON_BUDGET,
) -> HamiltonianInstance:
    """
    Resolve the Hamilton cycle: "H:" line > explicit ``hamilton`` > search.

    Raises HamiltonCycleNotFound when the search fails.
    """
    from app.services.graph_core import validate_hamiltonian
    from app.services.oracle import find_hamilton_cycle

    if document.hamilton is not None:
        return validate_hamiltonian(document.graph, document.hamilton)
    if hamilton is not None:
        return validate_hamiltonian(document.graph, hamilton)

    logger.info("no Hamilton cycle declared; searching (budget %d)", budget)
    order = find_hamilton_cycle(document.graph, budget=budget)
    return validate_hamiltonian(document.graph, order)


# ══════════════════════════════════════════════════════════════════════════════
# Writing
# ══════════════════════════════════════════════════════════════════════════════

def serialize_graph(graph: Graph, hamilton: tuple[int, ...] | None = None) -> str:
    lines = [f"{graph.n} {len(graph.edges)}"]
    lines += [f"{u + 1} {v + 1}" for u, v in graph.sorted_edges()]
    if hamilton is not None:
        lines.append(HAMILTON_PREFIX + " " + " ".join(str(v + 1) for v in hamilton))
    return "\n".join(lines) + "\n"


def serialize_instance(instance: HamiltonianInstance) -> str:
    return serialize_graph(instance.graph, instance.order)


def format_factor(tf: TwoFactor) -> str:
    """Numbered cycle listing as printed by `solve`: "1: 1 2 3 4 5 6"."""
    return "\n".join(
        f"{idx}: " + " ".join(str(v) for v in cyc)
        for idx, cyc in enumerate(tf.to_external(), start=1)
    )

#!/usr/bin/env python3
"""
Run Report Validator
Validates a RunReport JSON file written by `solve --report` and re-checks the
success invariant, optionally against the graph file it was produced from.
"""

import json
import sys
from typing import Any

from pydantic import ValidationError

from app.models.schemas import RunReport


def validate_factor(factor: list[list[int]], n: int) -> list[str]:
    """Cycles are disjoint, have length >= 3 and cover 1..n."""
    errors = []
    seen: dict[int, int] = {}
    for index, cycle in enumerate(factor):
        if len(cycle) < 3:
            errors.append(f"Cycle {index}: length {len(cycle)} is below 3")
        for v in cycle:
            if not 1 <= v <= n:
                errors.append(f"Cycle {index}: vertex {v} out of range 1..{n}")
            elif v in seen:
                errors.append(f"Cycle {index}: vertex {v} already in cycle {seen[v]}")
            else:
                seen[v] = index
    missing = sorted(set(range(1, n + 1)) - set(seen))
    if missing:
        errors.append(f"Vertices not covered: {missing[:10]}")
    return errors


def validate_against_graph(factor: list[list[int]], graph_text: str) -> list[str]:
    """Every consecutive pair of every cycle is an edge of the graph."""
    from app.core.errors import TwoFactorError
    from app.services.graph_core import verify_cycle_listing
    from app.services.graph_parser import parse_graph

    try:
        verify_cycle_listing(parse_graph(graph_text), [[v - 1 for v in c] for c in factor])
    except TwoFactorError as exc:
        return [f"Factor does not verify against the graph: {exc}"]
    return []


def validate_report(data: dict[str, Any], graph_text: str | None = None) -> tuple[bool, list[str]]:
    """
    Validate a complete report.
    Returns (is_valid, errors).
    """
    errors = []
    try:
        report = RunReport.model_validate(data)
    except ValidationError as exc:
        for err in exc.errors():
            where = ".".join(str(p) for p in err["loc"]) or "report"
            errors.append(f"{where}: {err['msg']}")
        return False, errors

    if report.status == "success":
        assert report.factor is not None
        errors.extend(validate_factor(report.factor, report.n))
        if graph_text is not None:
            errors.extend(validate_against_graph(report.factor, graph_text))
    elif not report.failure_reason:
        errors.append("A failed report must carry 'failure_reason'")

    if report.transforms:
        counts = [report.initial_components] + [t.components for t in report.transforms]
        for before, after in zip(counts, counts[1:]):
            if before is None or abs(after - before) != 1:
                errors.append(f"Transform changed the cycle count from {before} to {after}")

    return len(errors) == 0, errors


def main():
    """Main validation function."""
    if len(sys.argv) < 2:
        print("Usage: python validate_output.py <report.json> [graph.txt]")
        print("   or: python validate_output.py - (read from stdin)")
        sys.exit(1)

    if sys.argv[1] == "-":
        data = json.load(sys.stdin)
    else:
        with open(sys.argv[1], "r", encoding="utf-8") as f:
            data = json.load(f)
    graph_text = None
    if len(sys.argv) > 2:
        with open(sys.argv[2], "r", encoding="utf-8") as f:
            graph_text = f.read()

    is_valid, errors = validate_report(data, graph_text)

    if is_valid:
        print("✅ VALIDATION PASSED")
        print(f"   - status: {data['status']}")
        print(f"   - target k: {data['target_k']}, n: {data['n']}")
        print(f"   - transforms: {len(data.get('transforms', []))}")
        return 0
    else:
        print("❌ VALIDATION FAILED")
        print(f"\nFound {len(errors)} error(s):\n")
        for error in errors:
            print(f"  • {error}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

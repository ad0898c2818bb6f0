"""
Sweep Service
─────────────
Batch solve runs over generated random Hamiltonian instances, one row per
(n, delta, k, seed), tabulated in a pandas DataFrame.
"""

from __future__ import annotations

import logging
import time
from itertools import product
from typing import Iterable, IO

import pandas as pd

from app.models.schemas import PipelineConfig, SweepRow
from app.services.generators import gen_random_hamiltonian
from app.services.pipeline import solve

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = list(SweepRow.model_fields)


def run_sweep(
    ns: Iterable[int],
    deltas: Iterable[float],
    ks: Iterable[int],
    seeds: Iterable[int],
    base: PipelineConfig | None = None,
) -> pd.DataFrame:
    """
    Rows are ordered by (n, delta, k, seed); k > n//3 rows are skipped.
    ``base`` supplies every config field other than target_k and seed.
    """
    base = base or PipelineConfig(target_k=1)
    rows: list[dict] = []
    for n, delta, seed in product(sorted(ns), sorted(deltas), sorted(seeds)):
        instance = gen_random_hamiltonian(n, delta, seed)
        for k in sorted(ks):
            if 3 * k > n:
                continue
            config = base.model_copy(update={"target_k": k, "seed": seed})
            start = time.perf_counter()
            _, report = solve(instance, config)
            modes = "".join(step.embedding[0] for step in report.transforms)
            row = SweepRow(
                n=n,
                delta=delta,
                k=k,
                seed=seed,
                status=report.status,
                components=report.components,
                initial_components=report.initial_components,
                used_fallback=report.used_fallback,
                embedding_modes=modes,
                failure_reason=report.failure_reason,
                seconds=time.perf_counter() - start,
            )
            rows.append(row.model_dump())
            logger.info("sweep n=%d delta=%.2f k=%d seed=%d: %s", n, delta, k, seed, report.status)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def summarize(df: pd.DataFrame) -> pd.DataFrame:
    """Success rate and fallback rate per (n, k)."""
    if df.empty:
        return pd.DataFrame(columns=["n", "k", "runs", "success_rate", "fallback_rate"])
    grouped = df.assign(success=df["status"] == "success").groupby(["n", "k"], as_index=False)
    return grouped.agg(
        runs=("status", "size"),
        success_rate=("success", "mean"),
        fallback_rate=("used_fallback", "mean"),
    )


def export_csv(df: pd.DataFrame, out: IO[str]) -> None:
    df.to_csv(out, index=False)

"""
Core configuration and constants for the 2-factor engine.
"""

from __future__ import annotations

import os

from dotenv import load_dotenv

from app.core.errors import ParameterError

load_dotenv()

# ─── Graph file format ────────────────────────────────────────────────────────
COMMENT_PREFIX = "#"
HAMILTON_PREFIX = "H:"

# ─── Alternating-cycle / blow-up search ───────────────────────────────────────
DEFAULT_MAX_PATTERN_LEN = 8           # longest alternating cycle searched (even)
DEFAULT_SEARCH_BUDGET   = 50_000      # node expansions per search call
EXACT_SEARCH_MAX_N      = 200         # exact backtracking up to this n, greedy above
DEFAULT_MAX_CLUSTER     = 6           # largest blow-up cluster size requested
DEFAULT_WITNESS_THRESHOLD = 1         # path-digraph threshold used by the pipeline

# ─── Pipeline ─────────────────────────────────────────────────────────────────
DEFAULT_EPSILON         = 0.3
DEFAULT_SEED            = 0
DIRECT_EMBED_BUDGET     = 200_000     # node expansions for a direct pattern embedding

# ─── Fallback direct search ───────────────────────────────────────────────────
FALLBACK_BUDGET         = 200_000     # node expansions
FALLBACK_MAX_CYCLE_LEN  = 8           # longest single alternating cycle enumerated
FALLBACK_MAX_SYSTEM     = 16          # largest |V(S)| tried
FALLBACK_MAX_CYCLES     = 2_000       # cycles kept per length, canonical order

# ─── Oracle / Hamilton search ─────────────────────────────────────────────────
ORACLE_N_CAP            = 14
SECOND_ENUMERATOR_MAX_N = 10
HAMILTON_BUDGET         = 1_000_000

# ─── Generators ───────────────────────────────────────────────────────────────
PLANTED_PADDING         = 2           # extra vertices beyond the planted slots

# ─── Environment ──────────────────────────────────────────────────────────────
ORACLE_CAP_ENV = "TWOFACTOR_ORACLE_CAP"
LOG_LEVEL_ENV  = "TWOFACTOR_LOG_LEVEL"


def oracle_cap() -> int:
    """Oracle n cap, overridable through TWOFACTOR_ORACLE_CAP at call time."""
    raw = os.getenv(ORACLE_CAP_ENV)
    if raw is None or not raw.strip():
        return ORACLE_N_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{ORACLE_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ParameterError(f"{ORACLE_CAP_ENV} must be >= 1, got {cap}")
    return cap


def log_level() -> str:
    return os.getenv(LOG_LEVEL_ENV, "WARNING").upper()


def allowed_origins() -> list[str]:
    """CORS origins for the HTTP surface, comma separated in ALLOWED_ORIGINS."""
    raw = os.getenv("ALLOWED_ORIGINS", "*")
    return [origin.strip() for origin in raw.split(",") if origin.strip()]

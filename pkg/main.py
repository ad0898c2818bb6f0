"""
twofactor – FastAPI application entry point
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.api.routes import router
from app.core.config import allowed_origins, log_level
from app.core.logging_setup import configure_logging

configure_logging(log_level())

# ── Application factory ───────────────────────────────────────────────────────

app = FastAPI(
    title="twofactor – 2-factors with exactly k cycles",
    description=(
        "Finds a 2-factor with a prescribed number of cycles in a Hamiltonian "
        "graph via the auxiliary 2-coloured graph, alternating-cycle blow-ups "
        "and cycle-count transforms, with a brute-force oracle for small graphs."
    ),
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc",
)

# ── CORS ──────────────────────────────────────────────────────────────────────
# ALLOWED_ORIGINS=https://a.example,https://b.example
app.add_middleware(
    CORSMiddleware,
    allow_origins=allowed_origins(),
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
    max_age=3600,
)

# ── Register routes ───────────────────────────────────────────────────────────
app.include_router(router)

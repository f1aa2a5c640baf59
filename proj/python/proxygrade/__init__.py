"""Exact grading, ranking and axiom checking with phantom proxies."""

from ._proxygrade import (
    Election,
    ProxygradeError,
    axiom_names,
    check,
    grade,
    parse_election,
    rank,
    run_cli,
    select,
)

__all__ = [
    "Election",
    "ProxygradeError",
    "axiom_names",
    "check",
    "grade",
    "parse_election",
    "rank",
    "run_cli",
    "select",
]

"""Certified lower bounds for binary/box/complementarity polynomial optimization."""

from _bbcpop import (
    brute_force,
    generate_arrow,
    generate_chordal,
    solve_instance,
    solve_qap,
)

__all__ = [
    "brute_force",
    "generate_arrow",
    "generate_chordal",
    "solve_instance",
    "solve_qap",
]

"""Shared fixtures: the three worked metrics and their generator families."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import pytest

from spraylie import geom, linalg
from spraylie.fields import BaseField
from spraylie.symexpr import parse_expr


@lru_cache(maxsize=None)
def build_pipeline(diag_entries: tuple[str, ...]):
    metric = geom.diagonal_metric([parse_expr(e) for e in diag_entries])
    spray = geom.spray_from_metric(metric)
    connection = geom.connection_from_spray(spray)
    curv = geom.curvature(connection)
    return metric, spray, connection, curv


def base_field(*components: str) -> BaseField:
    return BaseField.make([parse_expr(c) for c in components])


HYPERBOLIC_SHELL = ("exp(x3)", "exp(x3)", "1")
PRODUCT_BLOCKS = ("exp(x2)", "1", "exp(x4)", "1")
FLAT_EXPONENTIAL = ("exp(x1)", "exp(x2)", "exp(x3)")

RANDOM_METRIC_SEEDS = [11, 12, 13, 14, 15]


def random_diag_entries(seed: int, n: int) -> tuple[str, ...]:
    """Deterministic diagonal metric with exponential-of-linear entries."""
    rng = random.Random(seed)
    entries = []
    for _ in range(n):
        coeffs = [rng.choice([-1, 0, 0, 1]) for _ in range(n)]
        if not any(coeffs):
            coeffs[rng.randrange(n)] = 1
        form = "+".join(f"({c})*x{i+1}" for i, c in enumerate(coeffs) if c)
        entries.append(f"exp({form})")
    return tuple(entries)


def constant_nullity_kernel(curv) -> int:
    """Dimension of constant vector fields annihilated by the curvature."""
    n = curv.dim
    rows = {}
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                per_key = {}
                for l in range(n):
                    for key, q in curv.R2[k][l][i][j].items():
                        per_key.setdefault(key, [Fraction(0)] * n)[l] += q
                for key, row in per_key.items():
                    rows[(k, i, j, key)] = row
    return len(linalg.kernel_basis(list(rows.values()), ncols=n))


@pytest.fixture(scope="session")
def shell_pipeline():
    return build_pipeline(HYPERBOLIC_SHELL)


@pytest.fixture(scope="session")
def blocks_pipeline():
    return build_pipeline(PRODUCT_BLOCKS)


@pytest.fixture(scope="session")
def flat_pipeline():
    return build_pipeline(FLAT_EXPONENTIAL)


@pytest.fixture(scope="session")
def shell_generators():
    """Symmetry generators of the 3-dim shell metric, base components."""
    return {
        "e1": base_field("-x2*x1/2", "exp(-x3) + x1^2/4 - x2^2/4", "x2"),
        "e2": base_field("-2*exp(-x3) + x1^2/2 - x2^2/2", "x1*x2", "-2*x1"),
        "e3": base_field("-x2", "x1", "0"),
        "e4": base_field("x1", "x2", "-2"),
        "e5": base_field("0", "1", "0"),
        "e6": base_field("1", "0", "0"),
    }


@pytest.fixture(scope="session")
def blocks_generators():
    return {
        "e1": base_field("exp(-x2) - x1^2/4", "x1", "0", "0"),
        "e2": base_field("x1", "-2", "0", "0"),
        "e3": base_field("1", "0", "0", "0"),
        "e4": base_field("0", "0", "exp(-x4) - x3^2/4", "x3"),
        "e5": base_field("0", "0", "x3", "-2"),
        "e6": base_field("0", "0", "1", "0"),
    }


@pytest.fixture(scope="session")
def flat_spray_generators():
    return {
        "e1": base_field("1", "0", "0"),
        "e2": base_field("exp((x2-x1)/2)", "0", "0"),
        "e3": base_field("exp(-x1/2)", "0", "0"),
        "e4": base_field("exp((x3-x1)/2)", "0", "0"),
        "e5": base_field("0", "exp((x1-x2)/2)", "0"),
        "e6": base_field("0", "1", "0"),
        "e7": base_field("0", "exp(-x2/2)", "0"),
        "e8": base_field("0", "exp((x3-x2)/2)", "0"),
        "e9": base_field("0", "0", "exp((x1-x3)/2)"),
        "e10": base_field("0", "0", "exp((x2-x3)/2)"),
        "e11": base_field("0", "0", "1"),
        "e12": base_field("0", "0", "exp(-x3/2)"),
    }


@pytest.fixture(scope="session")
def flat_isometry_generators():
    return {
        "g1": base_field("exp((x2-x1)/2)", "-exp((x1-x2)/2)", "0"),
        "g2": base_field("exp(-x1/2)", "0", "0"),
        "g3": base_field("exp((x3-x1)/2)", "0", "-exp((x1-x3)/2)"),
        "g4": base_field("0", "exp(-x2/2)", "0"),
        "g5": base_field("0", "exp((x3-x2)/2)", "-exp((x2-x3)/2)"),
        "g6": base_field("0", "0", "exp(-x3/2)"),
    }

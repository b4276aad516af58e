"""Shared fixtures: cached symbolic pipelines, rational strategies, frame twists."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from twistorharm.config import AnalysisConfig, builtin
from twistorharm.exterior import DIM, KVector
from twistorharm.hermitian import HermitianData
from twistorharm.scalars import as_scalar, substitute
from twistorharm.torsion import CurvatureData, TorsionConnection, curvature_data, make_connection, make_torsion

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")

EXAMPLES = ("inoue-s0", "kodaira", "flat-torus")


@dataclass(frozen=True)
class Pipeline:
    cfg: AnalysisConfig
    h: HermitianData
    conn: TorsionConnection
    curv: CurvatureData


def build_pipeline(cfg: AnalysisConfig, check: bool = False) -> Pipeline:
    h = cfg.hermitian()
    conn = make_connection(h.algebra, make_torsion(cfg.tau), h.levi_civita)
    curv, _ = curvature_data(conn, h, check=check)
    return Pipeline(cfg, h, conn, curv)


@lru_cache(maxsize=None)
def pipeline(name: str) -> Pipeline:
    return build_pipeline(builtin(name))


@lru_cache(maxsize=None)
def sign_case(name: str, e1: int, e2: int) -> Pipeline:
    """Kodaira-style config with its sign parameters fixed at the input."""
    cfg = builtin(name)
    sub = {"epsilon1": e1, "epsilon2": e2}
    J = tuple(v.map(lambda x: as_scalar(substitute(x, sub))) for v in cfg.J_images)
    return build_pipeline(AnalysisConfig(cfg.name, cfg.params, cfg.brackets, J, cfg.tau, cfg.frame))


def numeric(cfg: AnalysisConfig, values) -> AnalysisConfig:
    """Replace the symbolic torsion by the rational vector ``values``."""
    return cfg.with_tau(KVector(1, [Fraction(v) for v in values]))


@pytest.fixture(scope="session")
def inoue() -> Pipeline:
    return pipeline("inoue-s0")


@pytest.fixture(scope="session")
def kodaira() -> Pipeline:
    return pipeline("kodaira")


@pytest.fixture(scope="session")
def flat() -> Pipeline:
    return pipeline("flat-torus")


# -- strategies --------------------------------------------------------------

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
small_ints = st.integers(min_value=-3, max_value=3)
vec4 = st.lists(rationals, min_size=4, max_size=4)
vec6 = st.lists(rationals, min_size=6, max_size=6)


# -- frame twists ----------------------------------------------------------------

def twist(cfg: AnalysisConfig, perm, signs, name: str = None) -> AnalysisConfig:
    """Re-express ``cfg`` in the frame ``E'_i = signs[i] * E_{perm[i]}``."""
    c = {ij: coeffs for ij, coeffs in cfg.brackets}

    def bracket(a, b):
        if a == b:
            return (0,) * DIM
        if (a, b) in c:
            return c[(a, b)]
        if (b, a) in c:
            return tuple(-x for x in c[(b, a)])
        return (0,) * DIM

    brackets = {}
    for i in range(DIM):
        for j in range(i + 1, DIM):
            old = bracket(perm[i], perm[j])
            new = tuple(Fraction(signs[i] * signs[j] * signs[m]) * old[perm[m]] for m in range(DIM))
            if any(x != 0 for x in new):
                brackets[(i, j)] = new
    J_images = tuple(
        KVector(1, [signs[i] * signs[m] * cfg.J_images[perm[i]].coeffs[perm[m]] for m in range(DIM)])
        for i in range(DIM)
    )
    return AnalysisConfig(name or f"{cfg.name}-twisted", cfg.params, tuple(sorted(brackets.items())),
                          J_images, cfg.tau, cfg.frame)


twists = st.tuples(st.permutations(range(DIM)), st.lists(st.sampled_from((1, -1)), min_size=4, max_size=4))


def rotation(q) -> tuple[tuple[Fraction, ...], ...]:
    """Rational rotation matrix of the nonzero quaternion ``q``; columns are orthonormal."""
    w, x, y, z = (Fraction(c) for c in q)
    n = w * w + x * x + y * y + z * z
    rows = (
        (w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)),
        (2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)),
        (2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z),
    )
    return tuple(tuple(c / n for c in r) for r in rows)


quaternions = st.tuples(small_ints, small_ints, small_ints, small_ints).filter(lambda q: any(q))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

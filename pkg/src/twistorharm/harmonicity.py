"""The harmonicity criterion for an integrable Hermitian structure.

``𝔍`` is a harmonic map into the twistor space of ``D = ∇ + ½T`` exactly
when

* the 2-form ``ω = dθ - dτ - ι_B𝒯`` is of type (1,1), and
* ``ρ_D(Z,B) - ρ*_D(Z,B) - ρ_D(Z,τ) + ρ*_D(Z,τ) = 0`` for every ``Z``.

Here ``τ = ⋆𝒯`` is taken with the orientation induced by ``J``; a frame
``τ`` given in the frame star becomes ``o·τ`` with ``o`` the orientation
sign from :class:`HermitianData`.

Both conditions are checked against orientation-free oracles built from
second covariant derivatives and curvature of ``𝔍``.  The resulting
polynomial equations form a :class:`ConstraintSystem`, which is split over
the sign parameters and solved when every remaining equation is linear or
a semidefinite quadratic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Mapping, Sequence

from .errors import ConfigError, RouteMismatchError
from .exterior import (
    BASIS,
    DIM,
    KVector,
    cross,
    evaluate_form,
    frame_vectors,
    inner,
    pair,
    sd_basis,
    sd_project,
    vertical_project,
)
from .hermitian import HermitianData, _vdot
from .liealg import covariant_derivative, invariant_d
from .scalars import (
    ParameterSet,
    Polynomial,
    Scalar,
    as_scalar,
    evaluate,
    format_scalar,
    substitute,
)
from .torsion import (
    CurvatureData,
    TorsionConnection,
    TorsionSpec,
    make_connection,
    make_torsion,
    second_cov_deriv,
)

HALF = Fraction(1, 2)


def _e(i: int) -> str:
    return f"E{i + 1}"


# -- vertical condition ------------------------------------------------------

def tau_J(h: HermitianData, torsion: TorsionSpec) -> KVector:
    """``⋆𝒯`` for the orientation induced by ``J``."""
    return torsion.tau * h.orientation if h.orientation != 1 else torsion.tau


def vertical_form(h: HermitianData, torsion: TorsionSpec) -> KVector:
    """``ω = dθ - dτ - ι_B𝒯``."""
    h.require_integrable()
    alg = h.algebra
    d_theta = invariant_d(alg, h.theta)
    d_tau = invariant_d(alg, tau_J(h, torsion))
    return d_theta - d_tau - torsion.iota(h.B)


def type_11_defect(omega: KVector, J) -> dict[tuple[int, int], Scalar]:
    """``ω(JE_i,JE_j) - ω(E_i,E_j)`` for ``i<j``."""
    E = frame_vectors()
    return {
        (i, j): as_scalar(evaluate_form(omega, J(E[i]), J(E[j])) - evaluate_form(omega, E[i], E[j]))
        for i, j in BASIS[2]
    }


def type_11_constraints(omega: KVector, J) -> list[Scalar]:
    """Nonzero entries of :func:`type_11_defect`, normalized and deduplicated."""
    eqs = [Equation(p, f"vertical (1,1) at ({_e(i)},{_e(j)})") for (i, j), p in type_11_defect(omega, J).items()]
    return [eq.poly for eq in normalize_equations(eqs)]


def adapted_frame(h: HermitianData) -> tuple[KVector, KVector, KVector, KVector]:
    """``(F1, JF1, F3, JF3)`` from frame vectors; needs a signed-permutation ``J``."""
    E = frame_vectors()
    f1 = E[0]
    f2 = h.J(f1)
    for k in range(1, DIM):
        if _vdot(E[k], f2) == 0:
            f3 = E[k]
            break
    f4 = h.J(f3)
    frame = (f1, f2, f3, f4)
    for a in range(DIM):
        for b in range(DIM):
            if _vdot(frame[a], frame[b]) != (1 if a == b else 0):
                raise ConfigError("adapted frame needs J to permute the frame vectors up to sign")
    return frame


@dataclass(frozen=True)
class VerticalTension:
    direct: KVector
    closed_form: KVector
    s2: tuple[Scalar, Scalar] | None
    s3: tuple[Scalar, Scalar] | None

    def is_zero(self) -> bool:
        return self.direct.is_zero()


def trace_second_derivative(conn: TorsionConnection, h: HermitianData) -> KVector:
    """``Σ_x D²_{E_x E_x} 𝔍``."""
    out = KVector.zero(2)
    for x in range(DIM):
        out = out + second_cov_deriv(conn.D, h.frak_j, x, x)
    return out


def vertical_tension_oracle(h: HermitianData, conn: TorsionConnection, *, check: bool = True) -> VerticalTension:
    """Vertical part of ``Σ_x D²_{XX}𝔍`` by three routes.

    * direct: second covariant derivatives, projected off ``𝔍``;
    * closed form: ``𝔍 × P₊ω`` with ω the vertical form;
    * adapted frame ``(F1, JF1, F3, JF3)``: the ``s2``/``s3`` components
      ``½(-dθ(s3) + dτ(s3) + g(T(s3),B))`` and ``½(dθ(s2) - dτ(s2) - g(T(s2),B))``.

    ``s2`` and ``s3`` pairs are ``(direct, closed)``; both are ``None`` when
    ``J`` is not a signed permutation of the frame and no rational adapted
    frame is available.
    """
    o = h.orientation
    tor = conn.torsion
    V = vertical_project(trace_second_derivative(conn, h), h.frak_j, o)
    omega = vertical_form(h, tor)
    closed = cross(h.frak_j, sd_project(omega, o), o)
    if check and V != closed:
        raise RouteMismatchError("vertical tension direct vs closed form", "Trace D^2 J")
    try:
        frame = adapted_frame(h)
    except ConfigError:
        return VerticalTension(V, closed, None, None)
    s1, s2, s3 = sd_basis(frame)
    if s1 != h.frak_j:
        raise ConfigError("adapted frame does not reproduce the 2-vector of J")
    alg = h.algebra
    d_theta = invariant_d(alg, h.theta)
    d_tau = invariant_d(alg, tau_J(h, tor))
    c2 = HALF * (-pair(d_theta, s3) + pair(d_tau, s3) + _vdot(tor.T_of(s3), h.B))
    c3 = HALF * (pair(d_theta, s2) - pair(d_tau, s2) - _vdot(tor.T_of(s2), h.B))
    res = VerticalTension(V, closed, (inner(V, s2), as_scalar(c2)), (inner(V, s3), as_scalar(c3)))
    if check:
        for name, (a, b) in (("s2", res.s2), ("s3", res.s3)):
            if a != b:
                raise RouteMismatchError("vertical tension adapted frame", name, format_scalar(a), format_scalar(b))
    return res


# -- horizontal condition ----------------------------------------------------

def horizontal_polynomials(h: HermitianData, torsion: TorsionSpec, curv: CurvatureData) -> list[Scalar]:
    """``ρ_D(E_k,B) - ρ*_D(E_k,B) - ρ_D(E_k,τ) + ρ*_D(E_k,τ)`` for k = 1..4."""
    h.require_integrable()
    B = h.B
    t = tau_J(h, torsion)
    out = []
    for z in range(DIM):
        total = Fraction(0)
        for k in range(DIM):
            diff = curv.ricci[z][k] - curv.star_ricci[z][k]
            w = B.coeffs[k] - t.coeffs[k]
            if diff != 0 and w != 0:
                total = total + diff * w
        out.append(as_scalar(total))
    return out


def horizontal_constraints(h: HermitianData, torsion: TorsionSpec, curv: CurvatureData) -> list[Scalar]:
    eqs = [Equation(p, f"horizontal Z={_e(z)}") for z, p in enumerate(horizontal_polynomials(h, torsion, curv))]
    return [eq.poly for eq in normalize_equations(eqs)]


def horizontal_oracle(h: HermitianData, conn: TorsionConnection, curv: CurvatureData) -> list[Scalar]:
    """``-2 Σ_k g(R^D(E_k,Z)𝔍, D_{E_k}𝔍)`` for each frame ``Z``."""
    Dj = [covariant_derivative(h.frak_j, conn.D, k) for k in range(DIM)]
    out = []
    for z in range(DIM):
        total = Fraction(0)
        for k in range(DIM):
            total = total + inner(curv.R.act(k, z, h.frak_j), Dj[k])
        out.append(as_scalar(-2 * total))
    return out


def check_horizontal_routes(h, conn, curv):
    a = horizontal_polynomials(h, conn.torsion, curv)
    b = horizontal_oracle(h, conn, curv)
    for z in range(DIM):
        if a[z] != b[z]:
            raise RouteMismatchError("horizontal formula vs curvature oracle", f"Z={_e(z)}",
                                     format_scalar(a[z]), format_scalar(b[z]))


# -- constraint systems ------------------------------------------------------

@dataclass(frozen=True)
class Equation:
    poly: Scalar
    source: str

    def __str__(self):
        return f"{format_scalar(self.poly)} = 0"


def _radical_content(p: Polynomial) -> Polynomial:
    """Replace the common monomial factor of ``p`` by its radical.

    Shared sign parameters are units (``ε² = 1``) and are removed entirely.
    """
    if not p.terms:
        return p
    n = len(p.params)
    mask = p.params.sign_mask
    common = [min(e[i] for e in p.terms) for i in range(n)]
    shift = [c if mask[i] else (c - 1 if c > 1 else 0) for i, c in enumerate(common)]
    if not any(shift):
        return p
    return Polynomial(p.params, {tuple(a - s for a, s in zip(e, shift)): c for e, c in p.terms.items()})


def _leading(p: Polynomial):
    """Leading term for sign normalization: highest total degree, then canonical order."""
    terms = p.sorted_terms()
    top = max(sum(e) for e, _ in terms)
    for e, c in terms:
        if sum(e) == top:
            return e, c


def normalize_polynomial(p: Scalar) -> Scalar:
    """Scale to primitive integer coefficients with positive leading term.

    A monomial factor shared by all terms is reduced to its radical, which
    keeps the real zero set unchanged.
    """
    if not isinstance(p, Polynomial):
        p = as_scalar(p)
        return Fraction(0) if p == 0 else Fraction(1)
    if p.is_constant():
        v = p.constant_value()
        return Fraction(0) if v == 0 else Fraction(1)
    p = _radical_content(p)
    coeffs = list(p.terms.values())
    den = lcm(*(c.denominator for c in coeffs))
    num = 0
    for c in coeffs:
        num = gcd(num, (c * den).numerator)
    scale = Fraction(den, num)
    if _leading(p)[1] < 0:
        scale = -scale
    return p * scale


def normalize_equations(eqs: Sequence[Equation]) -> list[Equation]:
    """Drop zero equations, normalize, merge duplicates keeping every source."""
    merged: dict = {}
    order = []
    for eq in eqs:
        q = normalize_polynomial(eq.poly)
        if q == 0:
            continue
        key = format_scalar(q)
        if key in merged:
            merged[key] = Equation(merged[key].poly, merged[key].source + "; " + eq.source)
        else:
            merged[key] = Equation(q, eq.source)
            order.append(key)
    return [merged[k] for k in order]


@dataclass(frozen=True)
class ConstraintSystem:
    equations: tuple[Equation, ...]
    case: tuple[tuple[str, int], ...] = ()

    @classmethod
    def build(cls, eqs: Sequence[Equation], case=()) -> "ConstraintSystem":
        return cls(tuple(normalize_equations(eqs)), tuple(case))

    @property
    def polynomials(self) -> list[Scalar]:
        return [e.poly for e in self.equations]

    def is_trivial(self) -> bool:
        return not self.equations

    def is_inconsistent_constant(self) -> bool:
        return any(not isinstance(e.poly, Polynomial) or e.poly.is_constant() for e in self.equations)

    def substitute(self, assignment: Mapping[str, object]) -> "ConstraintSystem":
        eqs = [Equation(substitute(e.poly, assignment), e.source) for e in self.equations]
        return ConstraintSystem.build(eqs, self.case + tuple(sorted((k, v) for k, v in assignment.items())))

    def case_label(self) -> str:
        return ", ".join(f"{k}={'+' if v > 0 else '-'}{abs(v)}" for k, v in self.case)


# -- solving -----------------------------------------------------------------

@dataclass(frozen=True)
class SolutionSet:
    """Solved variables as expressions in the free ones, plus unsolved leftovers."""

    solved: tuple[tuple[str, Scalar], ...]
    free: tuple[str, ...]
    residual: tuple[Equation, ...]
    consistent: bool

    @property
    def complete(self) -> bool:
        return self.consistent and not self.residual

    def as_dict(self) -> dict[str, Scalar]:
        return dict(self.solved)

    def describe(self) -> str:
        if not self.consistent:
            return "no solution"
        parts = [f"{k} = {format_scalar(v)}" for k, v in self.solved]
        parts += [f"{k} free" for k in self.free]
        parts += [f"unsolved: {e}" for e in self.residual]
        return ", ".join(parts) if parts else "all parameters free"


def _linear_form(p: Polynomial):
    """``(coeffs by variable index, constant)`` if ``p`` is affine-linear, else None."""
    n = len(p.params)
    mask = p.params.sign_mask
    lin = [Fraction(0)] * n
    const = Fraction(0)
    for e, c in p.terms.items():
        if any(k and m for k, m in zip(e, mask)):
            return None
        s = sum(e)
        if s == 0:
            const = c
        elif s == 1:
            lin[e.index(1)] = c
        else:
            return None
    return lin, const


def _quadratic_matrix(p: Polynomial):
    if p.degree() > 2 or any(p.degree(q.name) > 0 for q in p.params if q.is_sign):
        return None
    n = len(p.params)
    M = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for e, c in p.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        if len(idx) == 0:
            M[n][n] += c
        elif len(idx) == 1:
            M[idx[0]][n] += c / 2
            M[n][idx[0]] += c / 2
        elif idx[0] == idx[1]:
            M[idx[0]][idx[0]] += c
        else:
            i, j = idx
            M[i][j] += c / 2
            M[j][i] += c / 2
    return M


def square_completion(p: Polynomial):
    """Linear equations equivalent to ``p = 0`` for a semidefinite quadratic.

    Completes squares (``p = Σ d_k l_k²`` with all ``d_k`` of one sign) over
    the rationals.  Returns None when ``p`` is not a semidefinite quadratic,
    or the list of affine polynomials ``l_k`` (a nonzero constant among them
    means no real solution).
    """
    M = _quadratic_matrix(p)
    if M is None:
        return None
    n = len(M)
    M = [row[:] for row in M]
    sign = 0
    rows = []
    for k in range(n):
        d = M[k][k]
        if d == 0:
            if any(M[k][j] != 0 for j in range(k + 1, n)):
                return None
            continue
        s = 1 if d > 0 else -1
        if sign and s != sign:
            return None
        sign = s
        rows.append([M[k][j] / d for j in range(n)])
        for i in range(k + 1, n):
            f = M[i][k] / d
            if f == 0:
                continue
            for j in range(k + 1, n):
                M[i][j] -= f * M[k][j]
    params = p.params
    out = []
    for r in rows:
        q = Polynomial.constant(params, r[-1])
        for i in range(n - 1):
            if r[i] != 0:
                q = q + params.var(params.names[i]) * r[i]
        out.append(q)
    return out


def solve(system: ConstraintSystem, params: ParameterSet) -> SolutionSet:
    """Eliminate affine-linear equations and split semidefinite quadratics.

    Anything else is returned verbatim in ``residual``.
    """
    real = [p.name for p in params if not p.is_sign]
    eqs = list(system.equations)
    solved: dict[str, Scalar] = {}
    while True:
        eqs = normalize_equations(eqs)
        if any(not isinstance(e.poly, Polynomial) or e.poly.is_constant() for e in eqs):
            return SolutionSet(tuple(sorted(solved.items())), (), tuple(eqs), False)
        pick = None
        for idx, e in enumerate(eqs):
            lf = _linear_form(e.poly)
            if lf is not None:
                pick = (idx, lf)
                break
        if pick is not None:
            idx, (lin, const) = pick
            e = eqs.pop(idx)
            names = e.poly.params.names
            # solve for the last variable in name order with a nonzero coefficient
            v = max((i for i, c in enumerate(lin) if c != 0), key=lambda i: names[i])
            expr = Polynomial.constant(e.poly.params, -const)
            for i, c in enumerate(lin):
                if c != 0 and i != v:
                    expr = expr - e.poly.params.var(names[i]) * c
            expr = expr / lin[v]
            name = names[v]
            solved = {k: substitute(val, {name: expr}) for k, val in solved.items()}
            solved[name] = as_scalar(expr.constant_value()) if expr.is_constant() else expr
            eqs = [Equation(substitute(x.poly, {name: expr}), x.source) for x in eqs]
            continue
        split = None
        for idx, e in enumerate(eqs):
            pieces = square_completion(e.poly)
            if pieces is not None:
                split = (idx, pieces)
                break
        if split is not None:
            idx, pieces = split
            e = eqs.pop(idx)
            eqs.extend(Equation(q, e.source + " (square completion)") for q in pieces)
            continue
        break
    free = tuple(n for n in real if n not in solved)
    return SolutionSet(tuple(sorted(solved.items())), free, tuple(eqs), True)


# -- verdicts ----------------------------------------------------------------

HARMONIC = "harmonic"
NOT_HARMONIC = "not-harmonic"
CONDITIONAL = "conditional"


@dataclass(frozen=True)
class CaseVerdict:
    case: tuple[tuple[str, int], ...]
    status: str
    system: ConstraintSystem
    solution: SolutionSet

    def label(self) -> str:
        if not self.case:
            return "all cases"
        return ", ".join(f"{k}={'+1' if v > 0 else '-1'}" for k, v in self.case)


@dataclass(frozen=True)
class Verdict:
    params: ParameterSet
    symbolic: ConstraintSystem
    cases: tuple[CaseVerdict, ...]

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.cases}
        if statuses == {HARMONIC}:
            return HARMONIC
        if statuses == {NOT_HARMONIC}:
            return NOT_HARMONIC
        return CONDITIONAL

    def case(self, **signs) -> CaseVerdict:
        for c in self.cases:
            if all(dict(c.case).get(k) == v for k, v in signs.items()):
                return c
        raise KeyError(signs)


def classify(system: ConstraintSystem) -> str:
    if system.is_trivial():
        return HARMONIC
    if system.is_inconsistent_constant():
        return NOT_HARMONIC
    return CONDITIONAL


def sign_cases(params: ParameterSet, restrict: Mapping[str, int] = None) -> list[dict[str, int]]:
    signs = [p.name for p in params if p.is_sign]
    restrict = dict(restrict or {})
    for k, v in restrict.items():
        if k not in signs:
            raise ConfigError(f"{k} is not a declared sign parameter")
        if v not in (1, -1):
            raise ConfigError(f"sign parameter {k} must be +1 or -1")
    cases = []
    for values in product((1, -1), repeat=len(signs)):
        case = dict(zip(signs, values))
        if all(case[k] == v for k, v in restrict.items()):
            cases.append(case)
    return cases


def criterion_equations(h: HermitianData, conn: TorsionConnection, curv: CurvatureData) -> list[Equation]:
    omega = vertical_form(h, conn.torsion)
    eqs = [Equation(p, f"vertical (1,1) at ({_e(i)},{_e(j)})") for (i, j), p in type_11_defect(omega, h.J).items()]
    eqs += [Equation(p, f"horizontal Z={_e(z)}") for z, p in enumerate(horizontal_polynomials(h, conn.torsion, curv))]
    return eqs


def verdict_from_equations(eqs: Sequence[Equation], params: ParameterSet, restrict=None) -> Verdict:
    symbolic = ConstraintSystem.build(eqs)
    cases = []
    for case in sign_cases(params, restrict):
        sysc = ConstraintSystem.build(
            [Equation(substitute(e.poly, case), e.source) for e in symbolic.equations],
            tuple(case.items()),
        )
        cases.append(CaseVerdict(tuple(case.items()), classify(sysc), sysc, solve(sysc, params)))
    return Verdict(params, symbolic, tuple(cases))


def verdict(h: HermitianData, tau: KVector, params: ParameterSet, *, restrict=None, check: bool = True) -> Verdict:
    """Full criterion for ``J`` and frame ``τ``; sign parameters are case-split."""
    from .torsion import curvature_data

    h.require_integrable()
    conn = make_connection(h.algebra, make_torsion(tau), h.levi_civita)
    curv, _ = curvature_data(conn, h, check=check)
    if check:
        vertical_tension_oracle(h, conn)
        check_horizontal_routes(h, conn, curv)
    return verdict_from_equations(criterion_equations(h, conn, curv), params, restrict)


@dataclass(frozen=True)
class CandidateCheck:
    status: str
    residuals: tuple[tuple[str, tuple[tuple[str, Fraction], ...]], ...]


def check_candidate(v: Verdict, assignment: Mapping[str, object]) -> CandidateCheck:
    """Evaluate every case's equations at ``assignment``.

    Sign parameters present in ``assignment`` select cases; all real
    parameters must be assigned.
    """
    real = [p.name for p in v.params if not p.is_sign]
    missing = [n for n in real if n not in assignment]
    if missing:
        raise ConfigError(f"candidate assignment is missing {', '.join(missing)}")
    unknown = [k for k in assignment if k not in v.params]
    if unknown:
        raise ConfigError(f"unknown parameter {unknown[0]}")
    residuals = []
    ok = True
    any_case = False
    for c in v.cases:
        if any(k in assignment and int(assignment[k]) != val for k, val in c.case):
            continue
        any_case = True
        full = dict(assignment)
        full.update(dict(c.case))
        rs = tuple((e.source, evaluate(e.poly, full)) for e in c.system.equations)
        if any(r != 0 for _, r in rs):
            ok = False
        residuals.append((c.label(), rs))
    if not any_case:
        raise ConfigError("assignment does not match any sign case")
    return CandidateCheck(HARMONIC if ok else NOT_HARMONIC, tuple(residuals))


def bismut_tau(h: HermitianData) -> KVector:
    """Frame ``τ`` whose connection preserves ``J``: ``⋆𝒯 = θ`` in the ``J`` orientation."""
    h.require_integrable()
    return h.theta * h.orientation if h.orientation != 1 else h.theta


def preserves_J(conn: TorsionConnection, h: HermitianData) -> bool:
    """``(D_X J)Y = 0`` on all frame pairs."""
    from .exterior import commutator

    return all(commutator(conn.D.matrices[x], h.J).is_zero() for x in range(DIM))

"""Four-dimensional metric Lie algebras with an orthonormal frame.

Everything here is left-invariant, so tensors have constant frame
coefficients and all calculus reduces to the structure constants.

The Levi-Civita connection comes from the Koszul formula for invariant
orthonormal frames.  A connection table stores one matrix per direction,
``Γ_x`` with column ``j`` equal to ``∇_{E_x}E_j``, so ``∇_X`` acts on any
invariant tensor as the derivation induced by ``Σ X_x Γ_x``.  Because the
connection is metric, forms and multivectors transform the same way and
share one implementation.

Curvature follows ``R(X,Y) = ∇_{[X,Y]} - [∇_X, ∇_Y]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence, Union

from .errors import ConfigError
from .exterior import (
    BASIS,
    DIM,
    Endomorphism,
    KVector,
    commutator,
    evaluate_form,
    frame_vectors,
    wedge,
)
from .scalars import Polynomial, Scalar, as_scalar, format_scalar

HALF = Fraction(1, 2)
Direction = Union[int, KVector]


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    residual: KVector

    def __str__(self):
        i, j, k = (n + 1 for n in self.triple)
        return f"Jacobi identity fails on (E{i},E{j},E{k}): cyclic sum = {format_vector(self.residual)}"


def _bracket_table(c) -> tuple[tuple[KVector, ...], ...]:
    return tuple(tuple(c[i][j] for j in range(DIM)) for i in range(DIM))


def jacobi_check(brackets) -> JacobiViolation | None:
    """First triple ``i<j<k`` whose cyclic Jacobi sum is nonzero, else None."""

    def br(x: KVector, y: KVector) -> KVector:
        return _bracket_vectors(brackets, x, y)

    E = frame_vectors()
    for i, j, k in combinations(range(DIM), 3):
        s = br(E[i], br(E[j], E[k])) + br(E[j], br(E[k], E[i])) + br(E[k], br(E[i], E[j]))
        if not s.is_zero():
            return JacobiViolation((i, j, k), s)
    return None


def _bracket_vectors(c, x: KVector, y: KVector) -> KVector:
    out = KVector.zero(1)
    for i in range(DIM):
        if x.coeffs[i] == 0:
            continue
        for j in range(DIM):
            if y.coeffs[j] == 0 or i == j:
                continue
            out = out + c[i][j] * (x.coeffs[i] * y.coeffs[j])
    return out


@dataclass(frozen=True)
class MetricLieAlgebra:
    """Structure constants ``[E_i, E_j] = Σ_k c[i][j][k] E_k`` in an orthonormal frame.

    Indices are 0-based internally.  Construction validates antisymmetry,
    rationality and the Jacobi identity; any failure raises ConfigError.
    """

    c: tuple[tuple[KVector, ...], ...]
    name: str = ""

    def __post_init__(self):
        for i in range(DIM):
            for j in range(DIM):
                v = self.c[i][j]
                if any(isinstance(x, Polynomial) for x in v.coeffs):
                    raise ConfigError("structure constants must be rational numbers")
                if v != -self.c[j][i]:
                    raise ConfigError(f"bracket table is not antisymmetric at (E{i + 1},E{j + 1})")
        bad = jacobi_check(self.c)
        if bad is not None:
            raise ConfigError(str(bad))

    @classmethod
    def from_brackets(cls, brackets: Mapping[tuple[int, int], Sequence], name: str = "") -> "MetricLieAlgebra":
        """Build from ``{(i, j): coeffs}`` with 0-based ``i < j``; missing pairs are zero."""
        table = [[KVector.zero(1) for _ in range(DIM)] for _ in range(DIM)]
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < DIM and 0 <= j < DIM) or i == j:
                raise ConfigError(f"bad bracket index pair ({i + 1},{j + 1})")
            v = KVector(1, coeffs)
            table[i][j] = v
            table[j][i] = -v
        return cls(_bracket_table(table), name)

    @classmethod
    def abelian(cls, name: str = "abelian") -> "MetricLieAlgebra":
        return cls.from_brackets({}, name)

    def bracket(self, x: Direction, y: Direction) -> KVector:
        return _bracket_vectors(self.c, _as_vector(x), _as_vector(y))

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self.c[i][j].coeffs[k]

    def nonzero_brackets(self) -> dict[tuple[int, int], KVector]:
        return {
            (i, j): self.c[i][j]
            for i, j in combinations(range(DIM), 2)
            if not self.c[i][j].is_zero()
        }


def _as_vector(x: Direction) -> KVector:
    return KVector.basis(x) if isinstance(x, int) else x


@dataclass(frozen=True)
class ConnectionTable:
    """Invariant connection; ``matrices[x]`` has column ``j`` equal to ``∇_{E_x}E_j``."""

    matrices: tuple[Endomorphism, ...]

    @classmethod
    def from_gamma(cls, gamma) -> "ConnectionTable":
        """From ``gamma[i][j][k] = g(∇_{E_i}E_j, E_k)``."""
        return cls(tuple(
            Endomorphism([[gamma[i][j][k] for j in range(DIM)] for k in range(DIM)])
            for i in range(DIM)
        ))

    def gamma(self, i: int, j: int, k: int) -> Scalar:
        return self.matrices[i].m[k][j]

    def nabla(self, i: int, j: int) -> KVector:
        """``∇_{E_i}E_j`` as a frame vector."""
        return self.matrices[i].image(j)

    def direction(self, x: Direction) -> Endomorphism:
        if isinstance(x, int):
            return self.matrices[x]
        out = Endomorphism.zero()
        for i in range(DIM):
            if x.coeffs[i] != 0:
                out = out + self.matrices[i] * x.coeffs[i]
        return out

    def is_metric(self) -> bool:
        return all(m.is_skew() for m in self.matrices)

    def __add__(self, other: "ConnectionTable") -> "ConnectionTable":
        return ConnectionTable(tuple(a + b for a, b in zip(self.matrices, other.matrices)))

    def __eq__(self, other):
        if not isinstance(other, ConnectionTable):
            return NotImplemented
        return all(a == b for a, b in zip(self.matrices, other.matrices))

    def __hash__(self):
        return hash(self.matrices)

    def map(self, fn) -> "ConnectionTable":
        return ConnectionTable(tuple(m.map(fn) for m in self.matrices))

    def rows(self) -> list[tuple[int, int, KVector]]:
        return [(i, j, self.nabla(i, j)) for i in range(DIM) for j in range(DIM)]


def levi_civita(alg: MetricLieAlgebra) -> ConnectionTable:
    """Koszul formula: ``2g(∇_i E_j, E_k) = c_ijk - c_jki + c_kij``."""
    c = alg.constant
    gamma = [[[HALF * (c(i, j, k) - c(j, k, i) + c(k, i, j)) for k in range(DIM)]
              for j in range(DIM)] for i in range(DIM)]
    return ConnectionTable.from_gamma(gamma)


def torsion_of(alg: MetricLieAlgebra, conn: ConnectionTable, i: int, j: int) -> KVector:
    """``T(E_i,E_j) = ∇_i E_j - ∇_j E_i - [E_i,E_j]``."""
    return conn.nabla(i, j) - conn.nabla(j, i) - alg.c[i][j]


def derivation(A: Endomorphism, x: KVector) -> KVector:
    """Extend an endomorphism of vectors to Λᵏ as a derivation."""
    k = x.degree
    if k == 0:
        return KVector.zero(0)
    out = KVector.zero(k)
    images = [A.image(i) for i in range(DIM)]
    for I, coeff in x.items():
        if coeff == 0:
            continue
        for s in range(k):
            piece = KVector(0, [coeff])
            for t, idx in enumerate(I):
                piece = wedge(piece, images[idx] if t == s else KVector.basis(idx))
            out = out + piece
    return out


def covariant_derivative(tensor, conn: ConnectionTable, x: Direction):
    """``∇_X`` of an invariant tensor.

    Vectors, forms and multivectors use the derivation of ``Γ_X``;
    endomorphisms use ``[Γ_X, A]``; connection-free scalars give 0.
    """
    G = conn.direction(x)
    if isinstance(tensor, Endomorphism):
        return commutator(G, tensor)
    if isinstance(tensor, KVector):
        return derivation(G, tensor)
    raise TypeError(f"cannot differentiate {type(tensor).__name__}")


def covariant_derivative_by_definition(form: KVector, conn: ConnectionTable, x: Direction) -> KVector:
    """``(∇_Xω)(Y1..Yk) = -Σ_s ω(..∇_X Y_s..)`` evaluated on frame tuples."""
    G = conn.direction(x)
    E = frame_vectors()
    k = form.degree
    coeffs = []
    for I in BASIS[k]:
        total = 0
        for s in range(k):
            args = [E[i] for i in I]
            args[s] = G(args[s])
            total = total - evaluate_form(form, *args)
        coeffs.append(total)
    return KVector(k, coeffs)


def invariant_d(alg: MetricLieAlgebra, form: KVector) -> KVector:
    """Exterior derivative of an invariant form.

    ``dω(X0..Xq) = Σ_{i<j} (-1)^{i+j} ω([Xi,Xj], X0..^Xi..^Xj..Xq)``.
    """
    q = form.degree
    if q >= DIM:
        raise ValueError("no invariant forms above degree 4")
    if q == 0:
        return KVector.zero(1)
    E = frame_vectors()
    coeffs = []
    for I in BASIS[q + 1]:
        total = 0
        X = [E[i] for i in I]
        for a, b in combinations(range(q + 1), 2):
            rest = [X[t] for t in range(q + 1) if t not in (a, b)]
            val = evaluate_form(form, alg.bracket(X[a], X[b]), *rest)
            if val != 0:
                total = total + (val if (a + b) % 2 == 0 else -val)
        coeffs.append(total)
    return KVector(q + 1, coeffs)


@dataclass(frozen=True)
class CurvatureTensor:
    """``ops[i][j]`` is the endomorphism ``R(E_i,E_j)``."""

    ops: tuple[tuple[Endomorphism, ...], ...]

    def op(self, x: Direction, y: Direction) -> Endomorphism:
        if isinstance(x, int) and isinstance(y, int):
            return self.ops[x][y]
        xv, yv = _as_vector(x), _as_vector(y)
        out = Endomorphism.zero()
        for i in range(DIM):
            for j in range(DIM):
                w = xv.coeffs[i] * yv.coeffs[j] if xv.coeffs[i] != 0 and yv.coeffs[j] != 0 else 0
                if w != 0:
                    out = out + self.ops[i][j] * w
        return out

    def value(self, i: int, j: int, k: int, l: int) -> Scalar:
        """``g(R(E_i,E_j)E_k, E_l)``."""
        return self.ops[i][j].m[l][k]

    def evaluate(self, x: Direction, y: Direction, z: Direction, u: Direction) -> Scalar:
        zv, uv = _as_vector(z), _as_vector(u)
        w = self.op(x, y)(zv)
        total = 0
        for l in range(DIM):
            if w.coeffs[l] != 0 and uv.coeffs[l] != 0:
                total = total + w.coeffs[l] * uv.coeffs[l]
        return as_scalar(total)

    def act(self, x: Direction, y: Direction, a: KVector) -> KVector:
        """Induced action of ``R(X,Y)`` on multivectors (derivation)."""
        return derivation(self.op(x, y), a)

    def table(self) -> dict[tuple[int, int, int, int], Scalar]:
        return {
            (i, j, k, l): self.value(i, j, k, l)
            for i in range(DIM) for j in range(DIM) for k in range(DIM) for l in range(DIM)
        }

    def map(self, fn) -> "CurvatureTensor":
        return CurvatureTensor(tuple(tuple(m.map(fn) for m in row) for row in self.ops))

    def __eq__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return all(a == b for r1, r2 in zip(self.ops, other.ops) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash(self.ops)


def curvature(alg: MetricLieAlgebra, conn: ConnectionTable) -> CurvatureTensor:
    """``R(E_i,E_j) = Σ_m c_ijm Γ_m - [Γ_i, Γ_j]`` for an invariant connection."""
    ops = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            R = -commutator(conn.matrices[i], conn.matrices[j])
            for m in range(DIM):
                c = alg.constant(i, j, m)
                if c != 0:
                    R = R + conn.matrices[m] * c
            row.append(R)
        ops.append(tuple(row))
    return CurvatureTensor(tuple(ops))


def curvature_vector(alg: MetricLieAlgebra, conn: ConnectionTable, i: int, j: int, k: int) -> KVector:
    """``R(E_i,E_j)E_k`` expanded step by step from the definition."""
    out = KVector.zero(1)
    br = alg.c[i][j]
    for m in range(DIM):
        if br.coeffs[m] != 0:
            out = out + conn.nabla(m, k) * br.coeffs[m]
    out = out - conn.matrices[i](conn.nabla(j, k))
    out = out + conn.matrices[j](conn.nabla(i, k))
    return out


def format_connection(conn: ConnectionTable, symbol: str = "nabla", frame: str = "E") -> list[str]:
    """Nonzero rows like ``nabla_E1 E1 = E2``."""
    lines = []
    for i, j, v in conn.rows():
        if v.is_zero():
            continue
        lines.append(f"{symbol}_{frame}{i + 1} {frame}{j + 1} = {format_vector(v, frame)}")
    return lines


def format_vector(v: KVector, frame: str = "E") -> str:
    parts = []
    for (i,), c in v.items():
        if c == 0:
            continue
        s = format_scalar(c)
        name = f"{frame}{i + 1}"
        if s == "1":
            term = name
        elif s == "-1":
            term = "-" + name
        elif isinstance(c, Polynomial) and len(c.terms) > 1:
            term = f"({s})*{name}"
        else:
            term = f"{s}*{name}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out

"""Exterior algebra of an oriented 4-dimensional inner-product space.

Vectors and forms are identified through the orthonormal frame
``E_0..E_3``, so a single dense type :class:`KVector` carries Λ⁰…Λ⁴.
Basis order is lexicographic on index tuples; for Λ² that is
``E01, E02, E03, E12, E13, E23``.

Metric conventions:

* Λ² carries the factor-½ metric, ``g(Ei∧Ej, Ei∧Ej) = 1/2``;
* all other degrees use the orthonormal basis ``E_I``.

A k-form ω acts on a k-vector ``b`` through the plain coefficient pairing
``pair(ω, b) = Σ ω_I b_I``, which gives ``ω(v1,…,vk) = pair(ω, v1∧…∧vk)``
with the determinant convention for wedge products.

The Hodge star is the one fixed by ``τ = -T234 E1 + T134 E2 - T124 E3 + T123 E4``
on Λ³→Λ¹, extended to Λ¹→Λ³ as its inverse, so it is an involution in
every degree.  An ``orientation`` argument (±1, possibly a sign polynomial)
multiplies the star; it is how callers work in the orientation induced by
a complex structure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import ConfigError
from .scalars import Scalar, as_scalar, format_scalar

DIM = 4
BASIS = {k: tuple(combinations(range(DIM), k)) for k in range(DIM + 1)}
_INDEX = {k: {I: n for n, I in enumerate(BASIS[k])} for k in BASIS}
HALF = Fraction(1, 2)


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


def _sort_indices(indices) -> tuple[int, tuple[int, ...]]:
    sign = _perm_sign(indices)
    return sign, tuple(sorted(indices))


class KVector:
    """Element of Λᵏ with constant (frame) coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Sequence):
        if not 0 <= degree <= DIM:
            raise ValueError(f"degree {degree} out of range")
        coeffs = tuple(as_scalar(c) for c in coeffs)
        if len(coeffs) != comb(DIM, degree):
            raise ValueError(f"Λ^{degree} needs {comb(DIM, degree)} coefficients, got {len(coeffs)}")
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, degree: int) -> "KVector":
        return cls(degree, [0] * comb(DIM, degree))

    @classmethod
    def basis(cls, *indices: int) -> "KVector":
        """``E_{i1}∧…∧E_{ik}`` for 0-based indices in any order."""
        k = len(indices)
        sign, I = _sort_indices(indices)
        v = [0] * comb(DIM, k)
        if sign:
            v[_INDEX[k][I]] = sign
        return cls(k, v)

    @classmethod
    def from_dict(cls, degree: int, entries: dict) -> "KVector":
        v = [0] * comb(DIM, degree)
        for I, c in entries.items():
            sign, J = _sort_indices(I)
            if sign:
                v[_INDEX[degree][J]] += sign * c
        return cls(degree, v)

    def __getitem__(self, I):
        if isinstance(I, int):
            I = (I,)
        sign, J = _sort_indices(I)
        if not sign:
            return Fraction(0)
        c = self.coeffs[_INDEX[self.degree][J]]
        return c if sign > 0 else -c

    def items(self):
        return zip(BASIS[self.degree], self.coeffs)

    def _check(self, other):
        if not isinstance(other, KVector) or other.degree != self.degree:
            raise TypeError("KVector degree mismatch")

    def __add__(self, other):
        self._check(other)
        return KVector(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return KVector(self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return KVector(self.degree, [-a for a in self.coeffs])

    def __mul__(self, s):
        if isinstance(s, KVector):
            return NotImplemented
        return KVector(self.degree, [a * s for a in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, s):
        return KVector(self.degree, [a / s for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, KVector):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def map(self, fn) -> "KVector":
        return KVector(self.degree, [fn(c) for c in self.coeffs])

    def __repr__(self):
        parts = [
            f"({format_scalar(c)})*E{''.join(str(i + 1) for i in I)}"
            for I, c in self.items()
            if c != 0
        ]
        return f"KVector[{self.degree}](" + (" + ".join(parts) or "0") + ")"


def vector(*coeffs) -> KVector:
    if len(coeffs) == 1 and isinstance(coeffs[0], (list, tuple)):
        coeffs = coeffs[0]
    return KVector(1, coeffs)


def frame_vectors() -> tuple[KVector, ...]:
    return tuple(KVector.basis(i) for i in range(DIM))


def scalar_kvector(c) -> KVector:
    return KVector(0, [c])


def wedge(a: KVector, b: KVector) -> KVector:
    k = a.degree + b.degree
    if k > DIM:
        raise ValueError("wedge degree exceeds 4")
    out = [0] * comb(DIM, k)
    for I, x in a.items():
        if x == 0:
            continue
        for J, y in b.items():
            if y == 0:
                continue
            sign, K = _sort_indices(I + J)
            if sign:
                n = _INDEX[k][K]
                out[n] = out[n] + (x * y if sign > 0 else -(x * y))
    return KVector(k, out)


def wedge3(x: KVector, b: KVector) -> KVector:
    if x.degree != 1 or b.degree != 2:
        raise TypeError("wedge3 expects a vector and a 2-vector")
    return wedge(x, b)


def wedge_all(*vs: KVector) -> KVector:
    out = scalar_kvector(1)
    for v in vs:
        out = wedge(out, v)
    return out


def _star_sign(I: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    comp = tuple(i for i in range(DIM) if i not in I)
    if len(I) == 1:
        # inverse of the Λ³→Λ¹ rule, keeps ⋆ an involution on odd degrees
        return _perm_sign(comp + I), comp
    return _perm_sign(I + comp), comp


def hodge_star(x: KVector, orientation: Scalar = 1) -> KVector:
    k = DIM - x.degree
    out = [0] * comb(DIM, k)
    for I, c in x.items():
        if c == 0:
            continue
        sign, comp = _star_sign(I)
        out[_INDEX[k][comp]] = c if sign > 0 else -c
    res = KVector(k, out)
    return res if orientation == 1 else res * orientation


def inner(a: KVector, b: KVector) -> Scalar:
    a._check(b)
    total = 0
    for x, y in zip(a.coeffs, b.coeffs):
        if x != 0 and y != 0:
            total = total + x * y
    return total * HALF if a.degree == 2 else as_scalar(total)


def pair(form: KVector, multivector: KVector) -> Scalar:
    """Natural pairing of a k-form with a k-vector."""
    form._check(multivector)
    total = Fraction(0)
    for x, y in zip(form.coeffs, multivector.coeffs):
        if x != 0 and y != 0:
            total = total + x * y
    return total


def evaluate_form(form: KVector, *vectors: KVector) -> Scalar:
    """``ω(v1,…,vk)`` with the determinant convention."""
    if len(vectors) != form.degree:
        raise ValueError("wrong number of arguments for form")
    return pair(form, wedge_all(*vectors))


def interior(x: KVector, form: KVector) -> KVector:
    """Contraction in the first slot: ``(ι_x ω)(v…) = ω(x, v…)``."""
    k = form.degree - 1
    out = [0] * comb(DIM, k)
    for n, J in enumerate(BASIS[k]):
        total = 0
        for i in range(DIM):
            if x.coeffs[i] == 0 or i in J:
                continue
            c = form[(i,) + J]
            if c != 0:
                total = total + x.coeffs[i] * c
        out[n] = total
    return KVector(k, out)


def is_self_dual(a: KVector, orientation: Scalar = 1) -> bool:
    return hodge_star(a, orientation) == a


def sd_project(a: KVector, orientation: Scalar = 1) -> KVector:
    return (a + hodge_star(a, orientation)) * HALF


def asd_project(a: KVector, orientation: Scalar = 1) -> KVector:
    return (a - hodge_star(a, orientation)) * HALF


def vertical_project(a: KVector, frak_j: KVector, orientation: Scalar = 1) -> KVector:
    """Component of ``a`` in the tangent space of the twistor fibre at ``frak_j``.

    ``frak_j`` must be a unit self-dual 2-vector (for ``orientation``).
    """
    p = sd_project(a, orientation)
    return p - frak_j * inner(a, frak_j)


def sd_basis(frame: Sequence[KVector] = None) -> tuple[KVector, KVector, KVector]:
    """``(s1, s2, s3)`` built from an oriented orthonormal frame."""
    f1, f2, f3, f4 = frame if frame is not None else frame_vectors()
    s1 = wedge(f1, f2) + wedge(f3, f4)
    s2 = wedge(f1, f3) + wedge(f4, f2)
    s3 = wedge(f1, f4) + wedge(f2, f3)
    return s1, s2, s3


class Endomorphism:
    """4×4 matrix acting on frame components; ``m[r][c]`` is the E_r part of the image of E_c."""

    __slots__ = ("m",)

    def __init__(self, rows):
        m = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        if len(m) != DIM or any(len(r) != DIM for r in m):
            raise ValueError("Endomorphism needs a 4x4 matrix")
        self.m = m

    @classmethod
    def identity(cls) -> "Endomorphism":
        return cls([[1 if r == c else 0 for c in range(DIM)] for r in range(DIM)])

    @classmethod
    def zero(cls) -> "Endomorphism":
        return cls([[0] * DIM for _ in range(DIM)])

    @classmethod
    def from_images(cls, images: Sequence[KVector]) -> "Endomorphism":
        """Build from the images of E_0..E_3."""
        return cls([[images[c].coeffs[r] for c in range(DIM)] for r in range(DIM)])

    def image(self, c: int) -> KVector:
        return KVector(1, [self.m[r][c] for r in range(DIM)])

    def __call__(self, v: KVector) -> KVector:
        out = []
        for r in range(DIM):
            total = 0
            for c in range(DIM):
                if self.m[r][c] != 0 and v.coeffs[c] != 0:
                    total = total + self.m[r][c] * v.coeffs[c]
            out.append(total)
        return KVector(1, out)

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        rows = []
        for r in range(DIM):
            row = []
            for c in range(DIM):
                total = 0
                for k in range(DIM):
                    x, y = self.m[r][k], other.m[k][c]
                    if x != 0 and y != 0:
                        total = total + x * y
                row.append(total)
            rows.append(row)
        return Endomorphism(rows)

    def __add__(self, other):
        return Endomorphism([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.m, other.m)])

    def __sub__(self, other):
        return Endomorphism([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.m, other.m)])

    def __neg__(self):
        return Endomorphism([[-a for a in r] for r in self.m])

    def __mul__(self, s):
        return Endomorphism([[a * s for a in r] for r in self.m])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return all(a == b for r1, r2 in zip(self.m, other.m) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash(self.m)

    @property
    def T(self) -> "Endomorphism":
        return Endomorphism([[self.m[c][r] for c in range(DIM)] for r in range(DIM)])

    def trace(self) -> Scalar:
        total = 0
        for i in range(DIM):
            total = total + self.m[i][i]
        return as_scalar(total)

    def is_skew(self) -> bool:
        return self.T == -self

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.m for a in r)

    def map(self, fn) -> "Endomorphism":
        return Endomorphism([[fn(a) for a in r] for r in self.m])

    def __repr__(self):
        return "Endomorphism(" + repr([[format_scalar(a) for a in r] for r in self.m]) + ")"


def commutator(a: Endomorphism, b: Endomorphism) -> Endomorphism:
    return a @ b - b @ a


def K_endomorphism(a: KVector) -> Endomorphism:
    """Skew endomorphism with ``g(K_a X, Y) = 2 g(a, X∧Y)``."""
    if a.degree != 2:
        raise TypeError("K_endomorphism expects a 2-vector")
    rows = [[0] * DIM for _ in range(DIM)]
    for (i, j), c in a.items():
        # K E_i = Σ_j a_ij E_j
        rows[j][i] = c
        rows[i][j] = -c
    return Endomorphism(rows)


def two_vector_of(K: Endomorphism) -> KVector:
    """Inverse of :func:`K_endomorphism` on skew matrices."""
    if not K.is_skew():
        raise ValueError("only skew endomorphisms correspond to 2-vectors")
    return KVector(2, [K.m[j][i] for (i, j) in BASIS[2]])


def cross(a: KVector, b: KVector, orientation: Scalar = 1) -> KVector:
    """Cross product on Λ²₊: ``K_{a×b} = ½[K_a, K_b]``."""
    if not (is_self_dual(a, orientation) and is_self_dual(b, orientation)):
        raise ConfigError("cross product is only defined for self-dual 2-vectors")
    return two_vector_of(commutator(K_endomorphism(a), K_endomorphism(b)) * HALF)

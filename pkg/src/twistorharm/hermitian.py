"""Orthogonal complex structures on an invariant orthonormal frame.

``J`` is stored as an :class:`Endomorphism` whose column ``c`` is ``J E_c``.
Its dual 2-vector ``𝔍`` has coefficients ``𝔍_ij = g(J E_i, E_j)``, so that
``g(𝔍, X∧Y) = ½ g(JX, Y)`` and ``K_𝔍 = J``.  The fundamental form
``Ω(X,Y) = g(JX,Y)`` has the same coefficients as ``𝔍``.

The twistor space is built over the orientation induced by ``J``.  When
the frame orientation disagrees (``𝔍`` anti-self-dual for the frame star)
the induced orientation is recorded as ``orientation = -1`` and every
orientation-dependent operation is taken with respect to it.  Sign
parameters in ``J`` make the orientation a sign polynomial such as
``epsilon1*epsilon2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, NotIntegrableError
from .exterior import (
    DIM,
    Endomorphism,
    KVector,
    evaluate_form,
    frame_vectors,
    hodge_star,
    inner,
    two_vector_of,
    wedge,
)
from .liealg import ConnectionTable, MetricLieAlgebra, covariant_derivative, invariant_d, levi_civita
from .scalars import Polynomial, Scalar, as_scalar

HALF = Fraction(1, 2)


def _vdot(x: KVector, y: KVector) -> Scalar:
    total = 0
    for a, b in zip(x.coeffs, y.coeffs):
        if a != 0 and b != 0:
            total = total + a * b
    return as_scalar(total)


def pfaffian(a: KVector) -> Scalar:
    """``a12 a34 - a13 a24 + a14 a23`` of a 2-vector."""
    return a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)]


@dataclass(frozen=True)
class HermitianData:
    algebra: MetricLieAlgebra
    J: Endomorphism
    frak_j: KVector
    omega: KVector
    orientation: Scalar
    levi_civita: ConnectionTable
    d_omega: KVector
    theta: KVector
    B: KVector
    integrable: bool

    def apply(self, v: KVector) -> KVector:
        return self.J(v)

    @property
    def B_norm2(self) -> Scalar:
        return _vdot(self.B, self.B)

    def require_integrable(self):
        if not self.integrable:
            raise NotIntegrableError("J is not integrable (Nijenhuis tensor is nonzero)")


def _check_entries(J: Endomorphism):
    for row in J.m:
        for x in row:
            if isinstance(x, Polynomial):
                for exps in x.terms:
                    for p, e in zip(x.params, exps):
                        if e and not p.is_sign:
                            raise ConfigError(
                                f"J entries may only involve sign parameters, found {p.name}"
                            )


def validate_J(J: Endomorphism, alg: MetricLieAlgebra, *, require_frame_orientation: bool = False) -> HermitianData:
    """Check ``J² = -Id`` and skewness, then build Ω, 𝔍, θ and B.

    With ``require_frame_orientation`` an ``𝔍`` that is anti-self-dual for the
    frame orientation is rejected instead of inducing the opposite one.
    """
    _check_entries(J)
    if not (J @ J == -Endomorphism.identity()):
        raise ConfigError("J does not square to -Id")
    if not J.is_skew():
        raise ConfigError("J is not orthogonal (its matrix is not skew-symmetric)")
    frak_j = two_vector_of(J)
    o = as_scalar(pfaffian(frak_j))
    if not (o * o == 1) or hodge_star(frak_j, o) != frak_j:
        raise ConfigError("J is not an orthogonal complex structure of either orientation")
    if require_frame_orientation and o != 1:
        raise ConfigError(
            "J induces the orientation opposite to the frame (its 2-vector is anti-self-dual); "
            "swap two frame vectors, e.g. E3 and E4"
        )
    omega = frak_j
    nabla = levi_civita(alg)
    d_omega = invariant_d(alg, omega)
    theta = lee_form_from(J, d_omega, o)
    data = HermitianData(
        algebra=alg,
        J=J,
        frak_j=frak_j,
        omega=omega,
        orientation=o,
        levi_civita=nabla,
        d_omega=d_omega,
        theta=theta,
        B=theta,
        integrable=integrable(J, alg),
    )
    return data


def lee_form_from(J: Endomorphism, d_omega: KVector, orientation: Scalar) -> KVector:
    """``θ = (⋆dΩ)∘J`` for the induced orientation.

    A 1-form ``α`` composed with ``J`` has dual vector ``-J α♯``.
    """
    return -J(hodge_star(d_omega, orientation))


def lee_form(J: Endomorphism, alg: MetricLieAlgebra) -> tuple[KVector, KVector]:
    """``(θ, B)``; the two agree as coefficient vectors in an orthonormal frame."""
    h = validate_J(J, alg)
    return h.theta, h.B


def nijenhuis(J: Endomorphism, alg: MetricLieAlgebra, y, z) -> KVector:
    """``N(Y,Z) = -[Y,Z] + [JY,JZ] - J[Y,JZ] - J[JY,Z]``."""
    Y = KVector.basis(y) if isinstance(y, int) else y
    Z = KVector.basis(z) if isinstance(z, int) else z
    br = alg.bracket
    return -br(Y, Z) + br(J(Y), J(Z)) - J(br(Y, J(Z))) - J(br(J(Y), Z))


def integrable(J: Endomorphism, alg: MetricLieAlgebra) -> bool:
    return all(nijenhuis(J, alg, i, j).is_zero() for i in range(DIM) for j in range(i + 1, DIM))


def nabla_J(h: HermitianData, x, y, conn: ConnectionTable = None) -> KVector:
    """Direct ``(∇_X J)Y = ∇_X(JY) - J∇_X Y``."""
    conn = conn or h.levi_civita
    Y = KVector.basis(y) if isinstance(y, int) else y
    G = conn.direction(x)
    return G(h.J(Y)) - h.J(G(Y))


def closed_form_nabla_J(h: HermitianData, x, y) -> KVector:
    """``2(∇_XJ)Y = g(JX,Y)B - g(B,Y)JX + g(X,Y)JB - g(JB,Y)X`` (integrable J)."""
    h.require_integrable()
    X = KVector.basis(x) if isinstance(x, int) else x
    Y = KVector.basis(y) if isinstance(y, int) else y
    J, B = h.J, h.B
    JX, JB = J(X), J(B)
    out = B * _vdot(JX, Y) - JX * _vdot(B, Y) + JB * _vdot(X, Y) - X * _vdot(JB, Y)
    return out * HALF


def nabla_J_from_d_omega(h: HermitianData, x, y, z) -> Scalar:
    """``g((∇_XJ)Y,Z)`` from ``dΩ(X,Y,Z) - dΩ(X,JY,JZ) + g(N(Y,Z),JX)``, halved.

    Holds for any almost Hermitian structure; ``dΩ`` uses the determinant
    convention for evaluation.
    """
    E = frame_vectors()
    X = E[x] if isinstance(x, int) else x
    Y = E[y] if isinstance(y, int) else y
    Z = E[z] if isinstance(z, int) else z
    J, dO = h.J, h.d_omega
    val = (
        evaluate_form(dO, X, Y, Z)
        - evaluate_form(dO, X, J(Y), J(Z))
        + _vdot(nijenhuis(J, h.algebra, Y, Z), J(X))
    )
    return val * HALF


def nabla_frak_j(h: HermitianData, x, conn: ConnectionTable = None) -> KVector:
    """``∇_X 𝔍`` on the invariant 2-vector."""
    return covariant_derivative(h.frak_j, conn or h.levi_civita, x)


def closed_form_nabla_frak_j(h: HermitianData, x) -> KVector:
    """``∇_X 𝔍 = ½(JX∧B + X∧JB)`` for integrable J."""
    h.require_integrable()
    X = KVector.basis(x) if isinstance(x, int) else x
    return (wedge(h.J(X), h.B) + wedge(X, h.J(h.B))) * HALF


def trace_second_nabla_J(h: HermitianData, conn: ConnectionTable = None) -> Endomorphism:
    """``Σ_x (∇_x∇_x J - ∇_{∇_x E_x} J)``."""
    conn = conn or h.levi_civita
    out = Endomorphism.zero()
    for x in range(DIM):
        first = covariant_derivative(h.J, conn, x)
        out = out + covariant_derivative(first, conn, x)
        out = out - covariant_derivative(h.J, conn, conn.nabla(x, x))
    return out


def trace_identity_rhs(h: HermitianData, z, u) -> Scalar:
    """``||B||² g(Z,JU) - dθ(JZ,U) - dθ(Z,JU)``."""
    E = frame_vectors()
    Z = E[z] if isinstance(z, int) else z
    U = E[u] if isinstance(u, int) else u
    J = h.J
    dtheta = invariant_d(h.algebra, h.theta)
    return (
        h.B_norm2 * _vdot(Z, J(U))
        - evaluate_form(dtheta, J(Z), U)
        - evaluate_form(dtheta, Z, J(U))
    )


def is_unit_frak(h: HermitianData) -> bool:
    return inner(h.frak_j, h.frak_j) == 1

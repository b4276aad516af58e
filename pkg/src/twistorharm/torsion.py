"""Metric connections with skew-symmetric torsion and their curvature.

A torsion 3-form is specified by the 1-form ``τ`` in frame components;
``𝒯 = ⋆τ`` componentwise as ``𝒯123 = τ4, 𝒯124 = -τ3, 𝒯134 = τ2,
𝒯234 = -τ1``, and ``g(T(X,Y),Z) = 𝒯(X,Y,Z)``.  The connection is
``D = ∇ + ½T``.

Curvature, Ricci and star-Ricci tensors are computed twice, once from the
definition and once from closed formulas in terms of the Levi-Civita data
and ``𝒯``; the ``check_*`` helpers compare the two and raise
:class:`RouteMismatchError` on the first disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RouteMismatchError
from .exterior import (
    BASIS,
    DIM,
    Endomorphism,
    KVector,
    cross,
    evaluate_form,
    frame_vectors,
    hodge_star,
    inner,
    interior,
    pair,
    sd_basis,
    sd_project,
    wedge,
)
from .hermitian import HermitianData, _vdot
from .liealg import (
    ConnectionTable,
    CurvatureTensor,
    MetricLieAlgebra,
    covariant_derivative,
    curvature,
    invariant_d,
    levi_civita,
)
from .scalars import Scalar, as_scalar, format_scalar

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
Matrix4 = tuple[tuple[Scalar, ...], ...]


def _vec(x) -> KVector:
    return KVector.basis(x) if isinstance(x, int) else x


@dataclass(frozen=True)
class TorsionSpec:
    """The 1-form ``τ``, the 3-form ``𝒯`` and the vector-valued ``T``."""

    tau: KVector
    calT: KVector

    def T(self, x, y) -> KVector:
        """``T(X,Y)`` as a frame vector."""
        return interior(_vec(y), interior(_vec(x), self.calT))

    def value(self, x, y, z) -> Scalar:
        if isinstance(x, int) and isinstance(y, int) and isinstance(z, int):
            return self.calT[(x, y, z)]
        return evaluate_form(self.calT, _vec(x), _vec(y), _vec(z))

    def T_of(self, a: KVector) -> KVector:
        """``T(a) = Σ_{i<j} a_ij T(E_i,E_j)`` for a 2-vector ``a``."""
        out = KVector.zero(1)
        for (i, j), c in a.items():
            if c != 0:
                out = out + self.T(i, j) * c
        return out

    def iota(self, x) -> KVector:
        """The 2-form ``ι_X𝒯 = 𝒯(X,·,·)``."""
        return interior(_vec(x), self.calT)

    def is_zero(self) -> bool:
        return self.tau.is_zero()


def make_torsion(tau) -> TorsionSpec:
    tau = tau if isinstance(tau, KVector) else KVector(1, tau)
    return TorsionSpec(tau=tau, calT=hodge_star(tau))


def torsion_from_three_form(calT: KVector) -> TorsionSpec:
    return TorsionSpec(tau=hodge_star(calT), calT=calT)


@dataclass(frozen=True)
class TorsionConnection:
    D: ConnectionTable
    nabla: ConnectionTable
    torsion: TorsionSpec
    algebra: MetricLieAlgebra


def make_connection(alg: MetricLieAlgebra, torsion: TorsionSpec, nabla: ConnectionTable = None) -> TorsionConnection:
    """``D_X Y = ∇_X Y + ½ T(X,Y)``."""
    nabla = nabla or levi_civita(alg)
    mats = []
    for x in range(DIM):
        half_T = Endomorphism.from_images([torsion.T(x, j) * HALF for j in range(DIM)])
        mats.append(nabla.matrices[x] + half_T)
    return TorsionConnection(ConnectionTable(tuple(mats)), nabla, torsion, alg)


def curvature_direct(conn: TorsionConnection) -> CurvatureTensor:
    return curvature(conn.algebra, conn.D)


def nabla_calT(conn: TorsionConnection, x) -> KVector:
    return covariant_derivative(conn.torsion.calT, conn.nabla, x)


def curvature_formula(conn: TorsionConnection, R_nabla: CurvatureTensor = None) -> CurvatureTensor:
    """``R^D`` from ``R^∇``, ``∇𝒯`` and the quadratic ``𝒯`` terms.

    ``g(R^D(X,Y)Z,U) = g(R^∇(X,Y)Z,U) - ½[(∇_X𝒯)(Y,Z,U) - (∇_Y𝒯)(X,Z,U)]
    + ¼ Σ_i [𝒯(X,U,E_i)𝒯(Y,Z,E_i) - 𝒯(X,Z,E_i)𝒯(Y,U,E_i)]``.
    """
    R_nabla = R_nabla or curvature(conn.algebra, conn.nabla)
    t = conn.torsion.value
    nT = [nabla_calT(conn, x) for x in range(DIM)]
    E = frame_vectors()

    def entry(X, Y, Z, U):
        v = R_nabla.value(X, Y, Z, U)
        v = v - HALF * (evaluate_form(nT[X], E[Y], E[Z], E[U]) - evaluate_form(nT[Y], E[X], E[Z], E[U]))
        quad = 0
        for i in range(DIM):
            quad = quad + t(X, U, i) * t(Y, Z, i) - t(X, Z, i) * t(Y, U, i)
        return v + QUARTER * quad

    ops = []
    for X in range(DIM):
        row = []
        for Y in range(DIM):
            row.append(Endomorphism([[entry(X, Y, Z, U) for Z in range(DIM)] for U in range(DIM)]))
        ops.append(tuple(row))
    return CurvatureTensor(tuple(ops))


def _label(name, *idx) -> str:
    return f"{name}(" + ",".join(f"E{i + 1}" for i in idx) + ")"


def check_curvature_routes(R1: CurvatureTensor, R2: CurvatureTensor, name: str = "curvature"):
    for (i, j, k, l), v in R1.table().items():
        w = R2.value(i, j, k, l)
        if v != w:
            raise RouteMismatchError(name, _label("R", i, j, k, l), format_scalar(v), format_scalar(w))


def check_matrix_routes(A: Matrix4, B: Matrix4, name: str, symbol: str):
    for i in range(DIM):
        for j in range(DIM):
            if A[i][j] != B[i][j]:
                raise RouteMismatchError(name, _label(symbol, i, j), format_scalar(A[i][j]), format_scalar(B[i][j]))


def _matrix(fn) -> Matrix4:
    return tuple(tuple(as_scalar(fn(i, j)) for j in range(DIM)) for i in range(DIM))


def ricci(R: CurvatureTensor) -> Matrix4:
    """``ρ(X,Y) = Σ_z g(R(X,E_z)Y, E_z)``."""
    return _matrix(lambda x, y: sum((R.value(x, z, y, z) for z in range(DIM)), Fraction(0)))


def star_ricci_def(R: CurvatureTensor, J: Endomorphism) -> Matrix4:
    """``ρ*(X,Y) = Σ_z g(R(JE_z, X)JY, E_z)``."""
    E = frame_vectors()
    ops = [[R.op(J(E[z]), x) for x in range(DIM)] for z in range(DIM)]
    JE = [J(v) for v in E]

    def entry(x, y):
        total = Fraction(0)
        for z in range(DIM):
            w = ops[z][x](JE[y]).coeffs[z]
            if w != 0:
                total = total + w
        return total

    return _matrix(entry)


def delta_calT(conn: TorsionConnection) -> KVector:
    """Codifferential ``δ𝒯(X,Y) = -Σ_k (∇_{E_k}𝒯)(E_k,X,Y)``."""
    out = KVector.zero(2)
    for k in range(DIM):
        out = out - interior(KVector.basis(k), nabla_calT(conn, k))
    return out


def iota_inner(torsion: TorsionSpec, x, y) -> Scalar:
    """``g(ι_X𝒯, ι_Y𝒯)`` for the 2-form metric with ``g(E_i∧E_j, E_i∧E_j) = 1/4``.

    This is the normalization under which the closed Ricci formula holds;
    it equals ``¼ Σ_{j<k} 𝒯(X,E_j,E_k)𝒯(Y,E_j,E_k)``.
    """
    a, b = torsion.iota(x), torsion.iota(y)
    return pair(a, b) * QUARTER


def ricci_prop(conn: TorsionConnection, rho_nabla: Matrix4) -> Matrix4:
    """``ρ_D = ρ_∇ - ½δ𝒯 - 2g(ι_X𝒯, ι_Y𝒯)``."""
    dT = delta_calT(conn)
    E = frame_vectors()
    return _matrix(
        lambda x, y: rho_nabla[x][y]
        - HALF * evaluate_form(dT, E[x], E[y])
        - 2 * iota_inner(conn.torsion, x, y)
    )


def chi(torsion: TorsionSpec, h: HermitianData) -> Matrix4:
    """``χ(X,Y) = Trace{Λ²₊ ∋ a ↦ 𝒯(a∧X) 𝒯((𝔍×a)∧JY)}``.

    The trace is taken basis-free: ``{√2 E_i∧E_j}`` is orthonormal in Λ², so
    the trace over Λ²₊ equals ``Σ_{i<j} 2 q(P₊(E_i∧E_j))``.
    """
    o = h.orientation
    E = frame_vectors()
    pieces = []
    for I in BASIS[2]:
        a = sd_project(KVector.basis(*I), o)
        pieces.append((a, cross(h.frak_j, a, o)))

    def entry(x, y):
        JY = h.J(E[y])
        total = Fraction(0)
        for a, ja in pieces:
            total = total + 2 * pair(torsion.calT, wedge(a, E[x])) * pair(torsion.calT, wedge(ja, JY))
        return total

    return _matrix(entry)


def star_ricci_prop(conn: TorsionConnection, h: HermitianData, rho_star_nabla: Matrix4) -> Matrix4:
    """``ρ*_D`` from the Levi-Civita star-Ricci tensor and torsion data.

    ``ρ*_D(X,Y) = ρ*_∇(X,Y) + d𝒯(𝔍∧X∧JY) + (∇_{JY}𝒯)(𝔍∧X)
    - ½ Σ_k (∇_{E_k}𝒯)(JE_k, X, JY) - ½g(T(𝔍), T(X∧JY)) + ¼χ(X,Y)``.

    The contraction term is what remains of the ``∇𝒯`` part of the
    curvature formula after rewriting it through ``d𝒯``.
    """
    tor = conn.torsion
    dT = invariant_d(conn.algebra, tor.calT)
    X_chi = chi(tor, h)
    E = frame_vectors()
    frak = h.frak_j
    T_frak = tor.T_of(frak)
    nT = [nabla_calT(conn, k) for k in range(DIM)]
    JE = [h.J(E[k]) for k in range(DIM)]

    def entry(x, y):
        JY = h.J(E[y])
        fx = wedge(frak, E[x])
        v = rho_star_nabla[x][y]
        v = v + pair(dT, wedge(fx, JY))
        v = v + pair(covariant_derivative(tor.calT, conn.nabla, JY), fx)
        contraction = 0
        for k in range(DIM):
            contraction = contraction + evaluate_form(nT[k], JE[k], E[x], JY)
        v = v - HALF * contraction
        v = v - HALF * _vdot(T_frak, tor.T_of(wedge(E[x], JY)))
        v = v + QUARTER * X_chi[x][y]
        return v

    return _matrix(entry)


def star_ricci_uncorrected(conn: TorsionConnection, h: HermitianData, rho_star_nabla: Matrix4) -> Matrix4:
    """The closed form without the contraction term and with ``-¼χ``.

    Kept for comparison only: ``star_ricci_prop - star_ricci_uncorrected`` is
    exactly ``-½ Σ_k (∇_{E_k}𝒯)(JE_k,X,JY) + ½χ``.
    """
    tor = conn.torsion
    dT = invariant_d(conn.algebra, tor.calT)
    X_chi = chi(tor, h)
    E = frame_vectors()
    T_frak = tor.T_of(h.frak_j)

    def entry(x, y):
        JY = h.J(E[y])
        fx = wedge(h.frak_j, E[x])
        return (
            rho_star_nabla[x][y]
            + pair(dT, wedge(fx, JY))
            + pair(covariant_derivative(tor.calT, conn.nabla, JY), fx)
            - QUARTER * (2 * _vdot(T_frak, tor.T_of(wedge(E[x], JY))) + X_chi[x][y])
        )

    return _matrix(entry)


def d_tau_vs_delta(conn: TorsionConnection, a: KVector) -> tuple[Scalar, Scalar]:
    """``(dτ(a), -δ𝒯(a))``; equal for frame-self-dual ``a``."""
    d_tau = invariant_d(conn.algebra, conn.torsion.tau)
    return pair(d_tau, a), -pair(delta_calT(conn), a)


def second_cov_deriv(conn: ConnectionTable, tensor: KVector, x, y) -> KVector:
    """``D²_{XY} = D_X D_Y - D_{D_X Y}`` on an invariant tensor."""
    X, Y = _vec(x), _vec(y)
    first = covariant_derivative(tensor, conn, Y)
    out = covariant_derivative(first, conn, X)
    return out - covariant_derivative(tensor, conn, conn.direction(X)(Y))


def second_cov_deriv_J(conn: TorsionConnection, h: HermitianData, x, y) -> KVector:
    return second_cov_deriv(conn.D, h.frak_j, x, y)


def second_derivative_sides(conn: TorsionConnection, h: HermitianData, x, z, u, second=None) -> tuple[Scalar, Scalar]:
    """Both sides of the ``D²_{XX}𝔍`` versus ``∇²_{XX}𝔍`` comparison.

    Left: ``2g(D²_{XX}𝔍, Z∧U - JZ∧JU)``.  Right: the ``∇²`` term plus
    ``(∇_X𝒯)(X∧(Z∧JU + JZ∧U)) + Q(X, Z∧U - JZ∧JU)
    - ½𝒯(X, JT(X,Z), U) + ½𝒯(X, JT(X,JZ), JU)``.

    ``second`` optionally supplies the pair ``(D²_{XX}𝔍, ∇²_{XX}𝔍)``.
    """
    J = h.J
    tor = conn.torsion
    X, Z, U = _vec(x), _vec(z), _vec(u)
    JZ, JU = J(Z), J(U)
    w = wedge(Z, U) - wedge(JZ, JU)
    if second is None:
        second = (second_cov_deriv(conn.D, h.frak_j, X, X), second_cov_deriv(conn.nabla, h.frak_j, X, X))
    lhs = 2 * inner(second[0], w)
    rhs = 2 * inner(second[1], w)
    nTX = covariant_derivative(tor.calT, conn.nabla, X)
    rhs = rhs + pair(nTX, wedge(X, wedge(Z, JU) + wedge(JZ, U)))

    def nJ(v):
        G = conn.nabla.direction(X)
        return G(J(v)) - J(G(v))

    t = lambda a, b, c: evaluate_form(tor.calT, a, b, c)
    Q = t(X, Z, nJ(U)) - t(X, U, nJ(Z)) - t(X, JZ, nJ(JU)) + t(X, JU, nJ(JZ))
    rhs = rhs + Q
    rhs = rhs - HALF * t(X, J(tor.T(X, Z)), U) + HALF * t(X, J(tor.T(X, JZ)), JU)
    return as_scalar(lhs), as_scalar(rhs)


def check_d_delta(conn: TorsionConnection):
    """``dτ = -δ𝒯`` on the self-dual frame basis."""
    for n, a in enumerate(sd_basis()):
        lhs, rhs = d_tau_vs_delta(conn, a)
        if lhs != rhs:
            raise RouteMismatchError("d tau vs codifferential", f"s{n + 1}", format_scalar(lhs), format_scalar(rhs))


def check_second_derivative(conn: TorsionConnection, h: HermitianData):
    for x in range(DIM):
        second = (second_cov_deriv(conn.D, h.frak_j, x, x), second_cov_deriv(conn.nabla, h.frak_j, x, x))
        for z in range(DIM):
            for u in range(DIM):
                lhs, rhs = second_derivative_sides(conn, h, x, z, u, second)
                if lhs != rhs:
                    raise RouteMismatchError("second derivative of J, D vs nabla", f"X=E{x + 1}, Z=E{z + 1}, U=E{u + 1}",
                                             format_scalar(lhs), format_scalar(rhs))


@dataclass(frozen=True)
class CurvatureData:
    R: CurvatureTensor
    ricci: Matrix4
    star_ricci: Matrix4
    chi: Matrix4
    R_nabla: CurvatureTensor
    ricci_nabla: Matrix4
    star_ricci_nabla: Matrix4


@dataclass(frozen=True)
class SelfTestResult:
    name: str
    passed: bool
    detail: str = ""


def curvature_data(conn: TorsionConnection, h: HermitianData, *, check: bool = True) -> tuple[CurvatureData, list[SelfTestResult]]:
    """All curvature tables, with the two-route comparisons run when ``check``.

    A disagreement raises :class:`RouteMismatchError`; on success the list
    records one passing result per identity.
    """
    R_nabla = curvature(conn.algebra, conn.nabla)
    R = curvature_direct(conn)
    rho_n = ricci(R_nabla)
    rs_n = star_ricci_def(R_nabla, h.J)
    rho = ricci(R)
    rs = star_ricci_def(R, h.J)
    results = []
    if check:
        check_curvature_routes(R, curvature_formula(conn, R_nabla), "curvature direct vs formula")
        results.append(SelfTestResult("curvature direct vs formula", True))
        check_matrix_routes(rho, ricci_prop(conn, rho_n), "ricci contraction vs formula", "rho_D")
        results.append(SelfTestResult("ricci contraction vs formula", True))
        check_matrix_routes(rs, star_ricci_prop(conn, h, rs_n), "star-ricci definition vs formula", "rho*_D")
        results.append(SelfTestResult("star-ricci definition vs formula", True))
    data = CurvatureData(R, rho, rs, chi(conn.torsion, h), R_nabla, rho_n, rs_n)
    return data, results

"""End-to-end analysis of a configuration and its text/JSON reports."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from typing import Mapping

from .config import AnalysisConfig
from .exterior import BASIS, DIM
from .harmonicity import (
    Equation,
    ConstraintSystem,
    check_candidate,
    check_horizontal_routes,
    criterion_equations,
    horizontal_polynomials,
    solve,
    type_11_defect,
    verdict_from_equations,
    vertical_form,
    vertical_tension_oracle,
)
from .hermitian import HermitianData
from .liealg import ConnectionTable
from .scalars import format_scalar, substitute
from .torsion import (
    SelfTestResult,
    check_d_delta,
    check_second_derivative,
    curvature_data,
    make_connection,
    make_torsion,
)


@dataclass(frozen=True)
class AnalysisOptions:
    restrict: Mapping[str, int] = field(default_factory=dict)
    self_test_only: bool = False
    candidate: Mapping[str, object] = None


@dataclass
class AnalysisReport:
    """Plain, JSON-ready record of one analysis; all scalars in canonical text."""

    config: dict
    frame: str
    integrable: bool
    orientation: str = "1"
    theta: list = field(default_factory=list)
    levi_civita: list = field(default_factory=list)
    connection_D: list = field(default_factory=list)
    curvature: list = field(default_factory=list)
    ricci: list = field(default_factory=list)
    star_ricci: list = field(default_factory=list)
    chi: list = field(default_factory=list)
    reduction: dict = field(default_factory=dict)
    reduced_ricci: list = field(default_factory=list)
    reduced_star_ricci: list = field(default_factory=list)
    vertical_form: list = field(default_factory=list)
    vertical_defect: list = field(default_factory=list)
    horizontal: list = field(default_factory=list)
    status: str = ""
    cases: list = field(default_factory=list)
    self_tests: list = field(default_factory=list)
    candidate: dict = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(**json.loads(text))


def _fmt(x) -> str:
    return format_scalar(x)


def _matrix(m) -> list:
    return [[_fmt(x) for x in row] for row in m]


def _connection_rows(conn: ConnectionTable) -> list:
    return [[i + 1, j + 1, [_fmt(c) for c in v.coeffs]] for i, j, v in conn.rows() if not v.is_zero()]


def _relabel(text: str, frame: str) -> str:
    return re.sub(r"\bE(\d)", frame + r"\1", text)


def _eq_records(system: ConstraintSystem, frame: str) -> list:
    return [{"equation": _fmt(e.poly), "source": _relabel(e.source, frame)} for e in system.equations]


def run_self_tests(cfg: AnalysisConfig, h: HermitianData = None) -> list[SelfTestResult]:
    """Every two-route identity; raises RouteMismatchError on the first failure."""
    h = h or cfg.hermitian()
    conn = make_connection(h.algebra, make_torsion(cfg.tau), h.levi_civita)
    curv, results = curvature_data(conn, h, check=True)
    check_d_delta(conn)
    results.append(SelfTestResult("d tau vs codifferential", True))
    check_second_derivative(conn, h)
    results.append(SelfTestResult("second derivative of J, D vs nabla", True))
    if h.integrable:
        vt = vertical_tension_oracle(h, conn)
        detail = "" if vt.s2 is not None else "adapted-frame route skipped: J is not a signed permutation"
        results.append(SelfTestResult("vertical tension direct vs closed form vs adapted frame", True, detail))
        check_horizontal_routes(h, conn, curv)
        results.append(SelfTestResult("horizontal formula vs curvature oracle", True))
    return results


def run_analysis(cfg: AnalysisConfig, options: AnalysisOptions = None) -> AnalysisReport:
    options = options or AnalysisOptions()
    h = cfg.hermitian()
    h.require_integrable()
    tests = run_self_tests(cfg, h)
    report = AnalysisReport(
        config=cfg.to_document(),
        frame=cfg.frame,
        integrable=h.integrable,
        self_tests=[asdict(t) for t in tests],
    )
    if options.self_test_only:
        return report
    conn = make_connection(h.algebra, make_torsion(cfg.tau), h.levi_civita)
    curv, _ = curvature_data(conn, h, check=False)
    report.orientation = _fmt(h.orientation)
    report.theta = [_fmt(c) for c in h.theta.coeffs]
    report.levi_civita = _connection_rows(conn.nabla)
    report.connection_D = _connection_rows(conn.D)
    report.curvature = [
        [i + 1, j + 1, k + 1, l + 1, _fmt(curv.R.value(i, j, k, l))]
        for (i, j) in BASIS[2] for (k, l) in BASIS[2]
        if curv.R.value(i, j, k, l) != 0
    ]
    report.ricci = _matrix(curv.ricci)
    report.star_ricci = _matrix(curv.star_ricci)
    report.chi = _matrix(curv.chi)
    omega = vertical_form(h, conn.torsion)
    report.vertical_form = [_fmt(c) for c in omega.coeffs]
    defect = type_11_defect(omega, h.J)
    report.vertical_defect = [[i + 1, j + 1, _fmt(p)] for (i, j), p in defect.items()]
    report.horizontal = [_fmt(p) for p in horizontal_polynomials(h, conn.torsion, curv)]

    # tables on the locus where the vertical condition holds, when it is linear
    vsys = ConstraintSystem.build([Equation(p, "vertical") for p in defect.values()])
    vsol = solve(vsys, cfg.params)
    if vsys.equations and vsol.consistent and not vsol.residual:
        sub = vsol.as_dict()
        report.reduction = {k: _fmt(v) for k, v in sorted(sub.items())}
        report.reduced_ricci = _matrix([[substitute(x, sub) for x in row] for row in curv.ricci])
        report.reduced_star_ricci = _matrix([[substitute(x, sub) for x in row] for row in curv.star_ricci])

    v = verdict_from_equations(criterion_equations(h, conn, curv), cfg.params, options.restrict)
    report.status = v.status
    for c in v.cases:
        report.cases.append({
            "case": {k: val for k, val in c.case},
            "label": c.label(),
            "status": c.status,
            "equations": _eq_records(c.system, cfg.frame),
            "solution": c.solution.describe(),
            "solved": {k: _fmt(x) for k, x in c.solution.solved},
            "free": list(c.solution.free),
            "consistent": c.solution.consistent,
        })
    if options.candidate is not None:
        cc = check_candidate(v, options.candidate)
        report.candidate = {
            "assignment": {k: _fmt(x) for k, x in options.candidate.items()},
            "status": cc.status,
            "residuals": [
                {"case": label, "residuals": [[_relabel(src, cfg.frame), _fmt(x)] for src, x in rs]}
                for label, rs in cc.residuals
            ],
        }
    return report


# -- rendering ---------------------------------------------------------------

def _name(frame: str, i: int) -> str:
    return f"{frame}{i}"


def _negate_text(s: str) -> str:
    """Negate a canonical multi-term scalar string term by term."""
    head = s[1:] if s.startswith("-") else "-" + s
    body = head.replace(" - ", " \0 ").replace(" + ", " - ").replace(" \0 ", " + ")
    return body


def _terms_text(pairs) -> str:
    parts = []
    for s, name in pairs:
        if s == "0":
            continue
        if s == "1":
            parts.append(name)
        elif s == "-1":
            parts.append("-" + name)
        elif " " in s and s.startswith("-"):
            parts.append(f"-({_negate_text(s)})*{name}")
        elif " " in s:
            parts.append(f"({s})*{name}")
        else:
            parts.append(f"{s}*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _vector_text(coeffs, frame: str) -> str:
    return _terms_text((s, _name(frame, n + 1)) for n, s in enumerate(coeffs))


def _two_form_text(coeffs, frame: str) -> str:
    return _terms_text((s, f"{frame}{i + 1}^{frame}{j + 1}") for (i, j), s in zip(BASIS[2], coeffs))


def _table(lines, symbol, m, frame):
    for i in range(DIM):
        for j in range(DIM):
            lines.append(f"  {symbol}({_name(frame, i + 1)},{_name(frame, j + 1)}) = {m[i][j]}")


def render_table(r: AnalysisReport) -> str:
    f = r.frame
    cfg = r.config
    L = [f"# analysis: {cfg['name']}"]
    params = ", ".join(f"{p['name']} ({p['kind']})" for p in cfg["parameters"]) or "none"
    L.append(f"parameters: {params}")
    L.append("brackets:")
    if not cfg["brackets"]:
        L.append("  all zero")
    for b in cfg["brackets"]:
        L.append(f"  [{_name(f, b['i'])},{_name(f, b['j'])}] = {_vector_text(b['coeffs'], f)}")
    L.append("complex structure:")
    for n, row in enumerate(cfg["J"]):
        L.append(f"  J {_name(f, n + 1)} = {_vector_text(row, f)}")
    L.append(f"tau = {_vector_text(cfg['tau'], f)}")
    L.append(f"integrable: {'yes' if r.integrable else 'no'}")
    if r.theta:
        L.append(f"orientation induced by J: {r.orientation}")
        L.append(f"Lee vector: B = {_vector_text(r.theta, f)}")
        L.append("")
        L.append("Levi-Civita connection (nonzero rows):")
        for i, j, v in r.levi_civita:
            L.append(f"  nabla_{_name(f, i)} {_name(f, j)} = {_vector_text(v, f)}")
        L.append("connection D = nabla + T/2 (nonzero rows):")
        for i, j, v in r.connection_D:
            L.append(f"  D_{_name(f, i)} {_name(f, j)} = {_vector_text(v, f)}")
        L.append("")
        L.append("Ricci tensor of D:")
        _table(L, "rho_D", r.ricci, f)
        L.append("star-Ricci tensor of D:")
        _table(L, "rho*_D", r.star_ricci, f)
        L.append("chi:")
        _table(L, "chi", r.chi, f)
        if r.reduction:
            where = ", ".join(f"{k}={v}" for k, v in r.reduction.items())
            L.append("")
            L.append(f"on the vertical solution locus ({where}):")
            _table(L, "rho_D", r.reduced_ricci, f)
            _table(L, "rho*_D", r.reduced_star_ricci, f)
        L.append("")
        L.append(f"vertical form: omega = {_two_form_text(r.vertical_form, f)}")
        L.append("(1,1) defect omega(JX,JY) - omega(X,Y):")
        for i, j, p in r.vertical_defect:
            L.append(f"  ({_name(f, i)},{_name(f, j)}): {p}")
        L.append("horizontal condition rho_D(Z,B) - rho*_D(Z,B) - rho_D(Z,tau) + rho*_D(Z,tau):")
        for z, p in enumerate(r.horizontal):
            L.append(f"  Z={_name(f, z + 1)}: {p}")
        L.append("")
        L.append(f"verdict: {r.status}")
        for c in r.cases:
            L.append(f"case {c['label']}: {c['status']}")
            for e in c["equations"]:
                L.append(f"  {e['equation']} = 0    [{e['source']}]")
            L.append(f"  solution: {c['solution']}")
    if r.candidate is not None:
        a = ", ".join(f"{k}={v}" for k, v in r.candidate["assignment"].items())
        L.append("")
        L.append(f"candidate {a}: {r.candidate['status']}")
        for block in r.candidate["residuals"]:
            for src, val in block["residuals"]:
                L.append(f"  case {block['case']}: {src}: residual {val}")
    L.append("")
    L.append("self-tests:")
    for t in r.self_tests:
        L.append(f"  [{'pass' if t['passed'] else 'FAIL'}] {t['name']}")
    return "\n".join(L) + "\n"


def render(report: AnalysisReport, fmt: str = "table") -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "table":
        return render_table(report)
    raise ValueError(f"unknown format {fmt!r}")

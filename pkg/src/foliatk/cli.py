"""Command-line surface: scene in, certificate-bearing JSON report out.

Exit codes: 0 pass, 1 fail-with-certificate, 2 usage/parse/precondition error.
Reports are byte-deterministic for a fixed scene, command, and version:
keys are sorted and every double is rendered at 17 significant digits.
Certificates are always serialized, also for passes, so a third party can
re-parse the expressions and re-expand the identity without rerunning any
Groebner computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Mapping, Sequence

from . import __version__
from .dynamics import FlowState, geodesic_orthogonality_check, monitor_ideal_preservation
from .errors import FoliatkError, SceneError
from .foliation import involutivity_check, isotropy_algebra, module_equal
from .geometry import OneForm
from .groebner import Certificate, ModuleElement
from .ipoisson import (
    IdealPresentation,
    killing_connection,
    normalizer_check,
    poisson_closure_check,
    reduced_bracket,
    srf_check,
)
from .poly import MonomialOrder, Polynomial
from .scene import Scene, load_scene
from .submersion import (
    check_riemannian,
    integrability_check,
    metric_defect,
    morita_span_check,
    phi_pi,
    poisson_defect,
    pullback_foliation,
)

_TOL_DEFAULT = 1e-6
_START_TOL = 1e-12


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _value_str(obj) -> object:
    if isinstance(obj, ModuleElement):
        return [str(c) for c in obj.components]
    return str(obj)


def _cert_dict(claim: str, cert: Certificate) -> dict:
    return {
        "claim": claim,
        "holds": cert.claim_holds,
        "generators": [_value_str(g) for g in cert.generators],
        "cofactors": [str(c) for c in cert.cofactors],
        "remainder": _value_str(cert.remainder),
    }


def _oneform_dict(form: OneForm) -> list[dict]:
    return [{"num": str(c.num), "den": str(c.den)} for c in form.components]


def _point_str(pt) -> list[str] | None:
    if pt is None:
        return None
    return [str(Fraction(x)) for x in pt]


def _refutation_level(obstruction) -> str:
    if obstruction is None:
        return "polynomial: no polynomial certificate exists"
    return "smooth: remainder nonzero at a common zero of the generators"


def _need(scene: Scene, attr: str, command: str):
    value = getattr(scene, attr)
    if value is None:
        raise SceneError(f"{command} needs the scene to declare {attr!r}")
    return value


def _resolve_point(scene: Scene, point: str | None, command: str):
    if point is None:
        if len(scene.points) == 1:
            return next(iter(scene.points.values()))
        raise SceneError(f"{command} needs --point (a scene point name or comma-separated rationals)")
    if point in scene.points:
        return scene.points[point]
    try:
        return tuple(Fraction(tok.strip()) for tok in point.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise SceneError(f"cannot parse point {point!r}") from exc


def _resolve_candidates(pool: Mapping[str, Polynomial], names: Sequence[str],
                        count: int, command: str) -> list[Polynomial]:
    if len(names) < count:
        if count == 1 and len(pool) == 1:
            return [next(iter(pool.values()))]
        raise SceneError(f"{command} needs {count} --candidate name(s)")
    picked = []
    for name in names[:count]:
        if name not in pool:
            raise SceneError(f"candidate {name!r} not declared in the scene")
        picked.append(pool[name])
    return picked


def _working_ideal(scene: Scene, order: MonomialOrder) -> IdealPresentation:
    ideal = scene.lift_or_explicit_ideal()
    if order.kind == "block":
        return ideal
    return IdealPresentation(ideal.chart, ideal.generators, order)


def _flow_params(scene: Scene, args) -> tuple[FlowState, float, float]:
    if scene.flow is None:
        raise SceneError("this command needs a 'flow' section in the scene")
    t_end = args.t_end if args.t_end is not None else scene.flow.t_end
    dt = args.dt if args.dt is not None else scene.flow.dt
    return FlowState(scene.flow.q, scene.flow.p, 0.0), t_end, dt


# ---------------------------------------------------------------------------
# handlers: each returns (verdict, detail, certificates, monitor, tolerances)


def _cmd_check_involutive(scene: Scene, args, order):
    fol = _need(scene, "foliation", "check-involutive")
    res = involutivity_check(fol)
    certs = [_cert_dict(f"[X_{a}, X_{b}] in module", c) for (a, b), c in res.certificates]
    detail = {"passed": res.passed}
    if not res.passed:
        (a, b), cert = res.witness
        certs.append(_cert_dict(f"[X_{a}, X_{b}] in module", cert))
        detail.update({
            "witness_pair": [a, b],
            "obstruction_point": _point_str(res.obstruction_point),
            "refutation_level": _refutation_level(res.obstruction_point),
        })
    return ("pass" if res.passed else "fail", detail, certs, None, {})


def _cmd_check_srf(scene: Scene, args, order):
    fol = _need(scene, "foliation", "check-srf")
    out = srf_check(fol, scene.metric)
    if out.passed:
        detail = {
            "passed": True,
            "hamiltonian": str(out.hamiltonian),
            "lambda": [[str(l) for l in row] for row in out.lam],
        }
        certs = [
            _cert_dict(f"{{lift(X_{a}), H_g}} in I_F", c)
            for a, c in enumerate(out.certificates)
        ]
        return ("pass", detail, certs, None, {})
    detail = {
        "passed": False,
        "hamiltonian": str(out.hamiltonian),
        "generator_index": out.generator_index,
        "bracket": str(out.bracket),
        "obstruction_point": _point_str(out.obstruction_point),
        "refutation_level": _refutation_level(out.obstruction_point),
    }
    certs = [_cert_dict(
        f"{{lift(X_{out.generator_index}), H_g}} in I_F", out.certificate
    )]
    return ("fail", detail, certs, None, {})


def _cmd_killing_connection(scene: Scene, args, order):
    fol = _need(scene, "foliation", "killing-connection")
    kc = killing_connection(fol, scene.metric)
    detail = {
        "passed": True,
        "lambda": [[str(l) for l in row] for row in kc.lam],
        "omega": [[_oneform_dict(w) for w in row] for row in kc.omega],
        "verified_identity": kc.verified_identity,
    }
    certs = [
        _cert_dict(f"{{lift(X_{a}), H_g}} in I_F", c) for a, c in enumerate(kc.certificates)
    ]
    return ("pass", detail, certs, None, {})


def _cmd_lift_ideal(scene: Scene, args, order):
    fol = _need(scene, "foliation", "lift-ideal")
    ideal = fol.lift_presentation
    detail = {"generators": [str(g) for g in ideal.generators],
              "fiber_degree_one": ideal.fiber_graded_linear}
    return ("pass", detail, [], None, {})


def _cmd_closure_check(scene: Scene, args, order):
    ideal = _working_ideal(scene, order)
    res = poisson_closure_check(ideal)
    certs = [_cert_dict(f"{{g_{i}, g_{j}}} in ideal", c) for (i, j), c in res.certificates]
    detail = {"passed": res.passed}
    if not res.passed:
        (i, j), cert = res.witness
        certs.append(_cert_dict(f"{{g_{i}, g_{j}}} in ideal", cert))
        detail.update({
            "witness_pair": [i, j],
            "obstruction_point": _point_str(res.obstruction_point),
            "refutation_level": _refutation_level(res.obstruction_point),
        })
    return ("pass" if res.passed else "fail", detail, certs, None, {})


def _cmd_normalizer_check(scene: Scene, args, order):
    ideal = _working_ideal(scene, order)
    (cand,) = _resolve_candidates(scene.candidates, args.candidate, 1, "normalizer-check")
    res = normalizer_check(ideal, cand)
    certs = [_cert_dict(f"{{candidate, g_{i}}} in ideal", c) for i, c in res.certificates]
    detail = {"passed": res.passed, "candidate": str(cand)}
    if not res.passed:
        i, cert = res.witness
        certs.append(_cert_dict(f"{{candidate, g_{i}}} in ideal", cert))
        detail.update({
            "witness_generator": i,
            "obstruction_point": _point_str(res.obstruction_point),
            "refutation_level": _refutation_level(res.obstruction_point),
        })
    return ("pass" if res.passed else "fail", detail, certs, None, {})


def _cmd_reduced_bracket(scene: Scene, args, order):
    ideal = _working_ideal(scene, order)
    f, g = _resolve_candidates(scene.candidates, args.candidate, 2, "reduced-bracket")
    rep = reduced_bracket(ideal, f, g)
    detail = {"representative": str(rep), "first": str(f), "second": str(g)}
    return ("pass", detail, [], None, {})


def _cmd_point_report(scene: Scene, args, order):
    fol = _need(scene, "foliation", "point-report")
    pt = _resolve_point(scene, args.point, "point-report")
    rep = isotropy_algebra(fol, pt)
    detail = {
        "point": _point_str(rep.point),
        "tangent_dim": rep.tangent_dim,
        "fiber_dim": rep.fiber_dim,
        "isotropy_dim": rep.isotropy_dim,
        "isotropy_basis": [[str(c) for c in vec] for vec in rep.isotropy_basis],
        "structure_constants": [
            [[str(c) for c in row] for row in plane] for plane in rep.structure_constants
        ],
    }
    return ("pass", detail, [], None, {})


def _cmd_module_equal(scene: Scene, args, order):
    f1 = _need(scene, "foliation", "module-equal")
    f2 = _need(scene, "foliation_b", "module-equal")
    res = module_equal(f1, f2)
    certs = [
        _cert_dict(f"generator {idx} of {side} in the other module", c)
        for (side, idx), c in res.certificates
    ]
    detail = {"passed": res.passed}
    if not res.passed:
        side, idx, cert = res.witness
        certs.append(_cert_dict(f"generator {idx} of {side} in the other module", cert))
        detail.update({
            "witness_side": side,
            "witness_generator": idx,
            "obstruction_point": _point_str(res.obstruction_point),
            "refutation_level": _refutation_level(res.obstruction_point),
        })
    return ("pass" if res.passed else "fail", detail, certs, None, {})


def _cmd_check_riemannian(scene: Scene, args, order):
    sub = _need(scene, "submersion", "check-riemannian")
    res = check_riemannian(sub)
    detail = {"passed": res.passed}
    if not res.passed:
        detail.update({"entry": list(res.entry), "defect": str(res.defect)})
    return ("pass" if res.passed else "fail", detail, [], None, {})


def _cmd_phi_pi(scene: Scene, args, order):
    sub = _need(scene, "submersion", "phi-pi")
    phi = phi_pi(sub)
    detail = {
        "base_components": [str(c) for c in phi.base_components],
        "fiber_components": [str(c) for c in phi.fiber_components],
    }
    return ("pass", detail, [], None, {})


def _cmd_pullback(scene: Scene, args, order):
    sub = _need(scene, "submersion", "pullback")
    result = pullback_foliation(sub, scene.target_foliation)
    detail = {
        "generators": [[str(c) for c in g.components] for g in result.generators],
    }
    return ("pass", detail, [], None, {})


def _cmd_poisson_defect(scene: Scene, args, order):
    sub = _need(scene, "submersion", "poisson-defect")
    f, g = _resolve_candidates(scene.target_candidates, args.candidate, 2, "poisson-defect")
    defect, cert = poisson_defect(sub, f, g)
    detail = {"defect": str(defect), "first": str(f), "second": str(g)}
    return ("pass", detail, [_cert_dict("defect in <p_alpha>", cert)], None, {})


def _cmd_metric_defect(scene: Scene, args, order):
    sub = _need(scene, "submersion", "metric-defect")
    defect, cert = metric_defect(sub)
    detail = {"defect": str(defect)}
    return ("pass", detail, [_cert_dict("H_h - H_g o phi in <p_alpha>", cert)], None, {})


def _cmd_integrability(scene: Scene, args, order):
    sub = _need(scene, "submersion", "integrability")
    res = integrability_check(sub)
    detail = {"passed": res.passed}
    if not res.passed:
        i, j, defect = res.witness
        detail.update({
            "witness_pair": [i, j],
            "curvature_witness": [str(c) for c in defect.components],
        })
    return ("pass" if res.passed else "fail", detail, [], None, {})


def _cmd_morita_span(scene: Scene, args, order):
    s1 = _need(scene, "submersion", "morita-span")
    s2 = _need(scene, "submersion_b", "morita-span")
    res = morita_span_check(s1, s2, scene.target_foliation, scene.target_foliation_b)
    certs = [
        _cert_dict(f"generator {idx} of {side} pullback in the other", c)
        for (side, idx), c in res.comparison.certificates
    ]
    detail = {
        "passed": res.passed,
        "left_generators": [[str(c) for c in g.components] for g in res.left_pullback.generators],
        "right_generators": [[str(c) for c in g.components] for g in res.right_pullback.generators],
        "structural_notes": list(res.notes),
    }
    if not res.passed:
        side, idx, cert = res.comparison.witness
        certs.append(_cert_dict(f"generator {idx} of {side} pullback in the other", cert))
        detail.update({"witness_side": side, "witness_generator": idx})
    return ("pass" if res.passed else "fail", detail, certs, None, {})


def _monitor_dict(report) -> dict:
    return {
        "max_abs_generator": _f(report.max_abs_generator),
        "energy_drift": _f(report.energy_drift),
        "samples": [
            {"t": _f(t), "generators": [_f(v) for v in values], "energy": _f(e)}
            for t, values, e in report.samples
        ],
    }


def _cmd_flow_monitor(scene: Scene, args, order):
    ideal = _working_ideal(scene, order)
    pool = dict(scene.candidates)
    (ham,) = _resolve_candidates(pool, args.candidate or ["H"], 1, "flow-monitor")
    start, t_end, dt = _flow_params(scene, args)
    tol = args.tol if args.tol is not None else _TOL_DEFAULT
    report = monitor_ideal_preservation(ideal, ham, start, t_end, dt, start_tol=_START_TOL)
    passed = report.max_abs_generator <= tol
    detail = {"passed": passed, "hamiltonian": str(ham)}
    tolerances = {"tol": _f(tol), "dt": _f(dt), "t_end": _f(t_end), "start_tol": _f(_START_TOL)}
    return ("pass" if passed else "fail", detail, [], _monitor_dict(report), tolerances)


def _cmd_geodesic_check(scene: Scene, args, order):
    fol = _need(scene, "foliation", "geodesic-check")
    start, t_end, dt = _flow_params(scene, args)
    tol = args.tol if args.tol is not None else _TOL_DEFAULT
    report = geodesic_orthogonality_check(
        fol, scene.metric, start, t_end, dt, start_tol=_START_TOL
    )
    passed = report.max_abs_generator <= tol
    detail = {"passed": passed}
    tolerances = {"tol": _f(tol), "dt": _f(dt), "t_end": _f(t_end), "start_tol": _f(_START_TOL)}
    return ("pass" if passed else "fail", detail, [], _monitor_dict(report), tolerances)


# commands whose working ideal honors --order; everything else pins the
# fiber-block order its algorithm depends on
_ORDER_COMMANDS = {"closure-check", "normalizer-check", "reduced-bracket", "flow-monitor"}

_COMMANDS = {
    "check-involutive": _cmd_check_involutive,
    "check-srf": _cmd_check_srf,
    "killing-connection": _cmd_killing_connection,
    "lift-ideal": _cmd_lift_ideal,
    "closure-check": _cmd_closure_check,
    "normalizer-check": _cmd_normalizer_check,
    "reduced-bracket": _cmd_reduced_bracket,
    "point-report": _cmd_point_report,
    "module-equal": _cmd_module_equal,
    "check-riemannian": _cmd_check_riemannian,
    "phi-pi": _cmd_phi_pi,
    "pullback": _cmd_pullback,
    "poisson-defect": _cmd_poisson_defect,
    "metric-defect": _cmd_metric_defect,
    "integrability": _cmd_integrability,
    "morita-span": _cmd_morita_span,
    "flow-monitor": _cmd_flow_monitor,
    "geodesic-check": _cmd_geodesic_check,
}


def run_command(command: str, scene_source, args=None) -> tuple[dict, int]:
    """Dispatch a command against a scene; returns (report, exit_code)."""
    args = args or argparse.Namespace(point=None, candidate=[], tol=None, dt=None,
                                      t_end=None, order="block")
    order = MonomialOrder(args.order)
    effective_order = args.order if command in _ORDER_COMMANDS else "block"
    notes: tuple[str, ...] = ()
    try:
        if command not in _COMMANDS:
            raise SceneError(f"unknown command {command!r}")
        scene = load_scene(scene_source)
        notes = scene.notes
        verdict, detail, certs, monitor, tolerances = _COMMANDS[command](scene, args, order)
    except FoliatkError as exc:
        report = _assemble(command, "error",
                           {"message": str(exc), "error_type": type(exc).__name__},
                           [], None, notes, effective_order, {})
        return report, 2
    report = _assemble(command, verdict, detail, certs, monitor, notes, effective_order,
                       tolerances)
    return report, 0 if verdict == "pass" else 1


def _assemble(command, verdict, detail, certs, monitor, notes, order_kind, tolerances) -> dict:
    return {
        "command": command,
        "verdict": verdict,
        "detail": detail,
        "certificates": certs,
        "monitor": monitor,
        "scene_notes": list(notes),
        "provenance": {
            "tool": "foliatk",
            "version": __version__,
            "order": order_kind,
            "tolerances": tolerances,
        },
    }


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="foliatk",
        description="Certificate-producing checks for singular foliations and metrics.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--scene", required=True, help="path to a JSON scene file")
    parser.add_argument("--point", help="scene point name or comma-separated rationals")
    parser.add_argument("--candidate", action="append", default=[],
                        help="candidate name (repeat for binary operations)")
    parser.add_argument("--tol", type=float, help="pass threshold for numeric monitors")
    parser.add_argument("--dt", type=float, help="integrator step override")
    parser.add_argument("--t-end", dest="t_end", type=float, help="integration horizon override")
    parser.add_argument("--order", choices=["grevlex", "lex", "block"], default="block")
    parser.add_argument("--json-out", help="also write the report to this file")
    args = parser.parse_args(argv)

    report, code = run_command(args.command, args.scene, args)
    text = render_report(report)
    sys.stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

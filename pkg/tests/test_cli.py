import argparse
import json

from foliatk import VariableSet, parse_expression
from foliatk.cli import main, render_report, run_command

from conftest import SCENES


def ns(**kw):
    base = dict(point=None, candidate=[], tol=None, dt=None, t_end=None, order="block")
    base.update(kw)
    return argparse.Namespace(**base)


def test_check_srf_on_rotation_scene():
    report, code = run_command("check-srf", SCENES / "rotation_srf_r2.json")
    assert code == 0 and report["verdict"] == "pass"
    assert report["detail"]["lambda"] == [["0"]]


def test_check_srf_on_non_module_scene():
    report, code = run_command("check-srf", SCENES / "rotation_nonmodule_r2.json")
    assert code == 1 and report["verdict"] == "fail"
    (cert,) = report["certificates"]
    assert cert["remainder"] != "0"
    assert report["detail"]["refutation_level"].startswith("polynomial")


def test_poisson_defect_on_submersion_scene():
    report, code = run_command(
        "poisson-defect", SCENES / "submersion_r3_to_r2.json", ns(candidate=["pu", "pv"])
    )
    assert code == 0 and report["verdict"] == "pass"
    assert report["detail"]["defect"] == "p_z"


def test_exit_code_2_on_scene_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "chart": {"coordinates": ["x", "y"]},
        "cometric": [["1", "0"], ["0", "oops"]],
    }))
    report, code = run_command("check-srf", bad)
    assert code == 2 and report["verdict"] == "error"
    assert "oops" in report["detail"]["message"]


def test_exit_code_2_on_missing_section():
    report, code = run_command("check-involutive", SCENES / "nonclosed_ideal_r2.json")
    assert code == 2 and report["verdict"] == "error"


def test_unknown_command_is_a_usage_error():
    report, code = run_command("frobnicate", SCENES / "rotation_srf_r2.json")
    assert code == 2


def test_deterministic_bytes():
    a = render_report(run_command("check-srf", SCENES / "rotation_srf_r2.json")[0])
    b = render_report(run_command("check-srf", SCENES / "rotation_srf_r2.json")[0])
    assert a == b
    a = render_report(run_command("flow-monitor", SCENES / "so3_moment.json",
                                  ns(candidate=["H"]))[0])
    b = render_report(run_command("flow-monitor", SCENES / "so3_moment.json",
                                  ns(candidate=["H"]))[0])
    assert a == b


def test_certificates_reverify_from_report():
    report, _ = run_command("check-srf", SCENES / "killing_band_r2.json")
    cot = VariableSet(("x", "y")).cotangent()
    for cert in report["certificates"]:
        gens = [parse_expression(t, cot) for t in cert["generators"]]
        cofs = [parse_expression(t, cot) for t in cert["cofactors"]]
        remainder = parse_expression(cert["remainder"], cot)
        holds = remainder.is_zero()
        assert holds == cert["holds"]


def test_report_shape_and_provenance():
    report, _ = run_command("lift-ideal", SCENES / "so3_moment.json")
    assert set(report) == {
        "command", "verdict", "detail", "certificates", "monitor",
        "scene_notes", "provenance",
    }
    prov = report["provenance"]
    assert prov["tool"] == "foliatk" and prov["order"] == "block"


def test_order_flag_changes_provenance():
    report, code = run_command(
        "closure-check", SCENES / "so3_moment.json", ns(order="grevlex")
    )
    assert code == 0
    assert report["provenance"]["order"] == "grevlex"


def test_point_report_via_name_and_literal():
    by_name, _ = run_command("point-report", SCENES / "so3_moment.json", ns(point="origin"))
    literal, _ = run_command("point-report", SCENES / "so3_moment.json", ns(point="0,0,0"))
    assert by_name["detail"] == literal["detail"]
    assert by_name["detail"]["fiber_dim"] == 3
    assert by_name["detail"]["isotropy_dim"] == 3


def test_monitor_reports_floats_as_17_digit_strings():
    report, code = run_command("geodesic-check", SCENES / "rotation_r3.json")
    assert code == 0
    monitor = report["monitor"]
    float(monitor["max_abs_generator"])
    assert isinstance(monitor["max_abs_generator"], str)
    assert len(monitor["samples"]) >= 2


def test_main_writes_json_out(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "check-srf", "--scene", str(SCENES / "rotation_srf_r2.json"),
        "--json-out", str(out),
    ])
    assert code == 0
    stdout = capsys.readouterr().out
    assert out.read_text(encoding="utf-8") == stdout
    parsed = json.loads(stdout)
    assert parsed["verdict"] == "pass"


def test_main_exit_code_on_failure(capsys):
    code = main(["integrability", "--scene", str(SCENES / "submersion_r3_to_r2.json")])
    assert code == 1
    report = json.loads(capsys.readouterr().out)
    assert report["detail"]["curvature_witness"] == ["0", "0", "1"]


def test_scene_notes_passthrough():
    report, _ = run_command("metric-defect", SCENES / "submersion_r3_to_r2.json")
    assert any("corrected" in note for note in report["scene_notes"])
    assert report["detail"]["defect"] == "1/2*p_z^2"


def test_normalizer_check_cli():
    report, code = run_command(
        "normalizer-check", SCENES / "so3_moment.json", ns(candidate=["r2"])
    )
    assert code == 0 and report["verdict"] == "pass"
    report, code = run_command(
        "normalizer-check", SCENES / "nonclosed_ideal_r2.json", ns(candidate=["px"])
    )
    assert code in (0, 1)


def test_reduced_bracket_cli():
    report, code = run_command(
        "reduced-bracket", SCENES / "so3_moment.json", ns(candidate=["r2", "H"])
    )
    assert code == 0
    assert report["detail"]["representative"] == "-2*q1*p_q1 - 2*q2*p_q2 - 2*q3*p_q3"


def test_pullback_cli():
    report, code = run_command("pullback", SCENES / "morita_r3_two_projections.json")
    assert code == 0
    gens = report["detail"]["generators"]
    assert ["0", "1", "0"] in gens and ["0", "0", "1"] in gens


def test_flow_monitor_fail_with_tight_tolerance(tmp_path):
    scene = json.loads((SCENES / "so3_moment.json").read_text())
    scene["flow"] = {"q": [1, 0, 0], "p": [0, 0, 0], "t_end": 1.0, "dt": 0.001}
    scene["candidates"]["drift"] = "p_q2 + q1*q1"
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(scene))
    report, code = run_command("flow-monitor", path, ns(candidate=["drift"]))
    assert code == 1 and report["verdict"] == "fail"
    assert float(report["monitor"]["max_abs_generator"]) > 1e-6


def test_killing_connection_error_on_refuted_scene():
    report, code = run_command("killing-connection", SCENES / "rotation_nonmodule_r2.json")
    assert code == 2 and report["verdict"] == "error"
    assert "srf_check" in report["detail"]["message"]


def test_module_equal_cli_pass_path():
    report, code = run_command("module-equal", SCENES / "so3_moment.json")
    assert code == 0 and report["verdict"] == "pass"


def test_module_certificates_reverify_from_report():
    from foliatk import ModuleElement

    report, _ = run_command("module-equal", SCENES / "so3_moment.json")
    chart = VariableSet(("q1", "q2", "q3"))

    def as_element(strings):
        return ModuleElement(chart, tuple(parse_expression(s, chart) for s in strings))

    for cert in report["certificates"]:
        gens = [as_element(g) for g in cert["generators"]]
        cofs = [parse_expression(s, chart) for s in cert["cofactors"]]
        remainder = as_element(cert["remainder"])
        acc = remainder
        for c, g in zip(cofs, gens):
            acc = acc + g.scale_by(c)
        # the re-expanded element must lie in the other module's generator span,
        # and the verdict must match the remainder
        assert cert["holds"] == remainder.is_zero()


def test_point_report_accepts_fractional_literals():
    report, code = run_command(
        "point-report", SCENES / "so3_moment.json", ns(point="1/2,0,0")
    )
    assert code == 0
    assert report["detail"]["tangent_dim"] == 2


def test_lift_ideal_cli_matches_so_n_form():
    report, _ = run_command("lift-ideal", SCENES / "so3_moment.json")
    gens = set(report["detail"]["generators"])
    assert gens == {
        "-q2*p_q1 + q1*p_q2",
        "-q3*p_q1 + q1*p_q3",
        "-q3*p_q2 + q2*p_q3",
    }


def test_order_flag_ignored_by_block_pinned_commands():
    report, code = run_command(
        "check-srf", SCENES / "rotation_srf_r2.json", ns(order="lex")
    )
    assert code == 0
    assert report["provenance"]["order"] == "block"

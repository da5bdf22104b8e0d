import json
import math
import pathlib

import jsonschema
import pytest

import ncchern

ROOT = pathlib.Path(__file__).resolve().parents[2]
DATA = ROOT / "data"
SCHEMAS = ROOT / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def test_snf_of_clutching_difference():
    r = ncchern.snf([[0, 2], [-1, -1]])
    assert r["diagonal"] == [1, 2]
    assert r["cokernel"]["text"] == "Z/2"
    jsonschema.validate(r, schema("snf"))


def test_group_helpers():
    assert ncchern.normal_form("Z/2 + Z/3 + Z") == "Z + Z/6"
    assert ncchern.cokernel([[2, 0], [0, 3]]) == "Z/6"
    with pytest.raises(ncchern.ParseError):
        ncchern.normal_form("Z/")


def test_solve_shipped_diagram():
    r = ncchern.solve_diagram((DATA / "css2.diagram").read_text())
    assert r["nodes"][0]["group"]["text"] == "Z + Z/2"
    assert r["nodes"][3]["group"]["text"] == "Z"
    jsonschema.validate(r, schema("solve"))
    with pytest.raises(ncchern.AmbiguousExtension):
        ncchern.solve_diagram((DATA / "non_free_quotient.diagram").read_text())
    with pytest.raises(ncchern.IncompleteDiagram):
        ncchern.solve_diagram((DATA / "incomplete.diagram").read_text())


def test_winding():
    loop = [complex(math.cos(3 * t), math.sin(3 * t)) for t in (2 * math.pi * k / 64 for k in range(64))]
    assert ncchern.winding_number(loop) == 3
    with pytest.raises(ncchern.ZeroSample):
        ncchern.winding_number([0j] + loop[1:])
    fast = [complex(math.cos(9 * t), math.sin(9 * t)) for t in (2 * math.pi * k / 16 for k in range(16))]
    with pytest.raises(ncchern.NumericalGuard):
        ncchern.winding_number(fast)
    with pytest.raises(ncchern.ValidationError):
        ncchern.winding_number(loop[::8])


def test_transition():
    r = ncchern.transition(emit=2)
    assert r["k1_matrix"] == [[1, 0], [2, -1]]
    assert r["sup_error_vs_closed_form"] <= 1e-9
    jsonschema.validate(r, schema("transition"))


def test_chern_spin_half():
    problem = json.loads((DATA / "spin_so3.json").read_text())
    jsonschema.validate(problem, schema("chern_problem"))
    r = ncchern.chern(problem)
    assert r["all_checks_ok"]
    deg2 = {tuple(c["indices"]): c["value"] for c in r["character"][1]["components"]}
    assert deg2[(1, 2)][0] == pytest.approx(1 / (4 * math.pi), abs=1e-12)
    jsonschema.validate(r, schema("chern"))


def test_sphere_report():
    r = ncchern.sphere_report(index_map_surjective=True)
    assert r["ktheory"]["cosphere"]["k0"]["group"]["text"] == "Z + Z/2"
    assert r["ktheory"]["algebra"]["k1"]["group"]["text"] == "0"
    assert r["trace"]["tau_of_identity"] == pytest.approx(8 * math.pi**2, abs=1e-10)
    assert r["character"]["image"] == "R"
    jsonschema.validate(r, schema("sphere_report"))
    refused = ncchern.sphere_report()
    assert refused["ktheory"]["algebra"]["status"] == "refused"
    jsonschema.validate(refused, schema("sphere_report"))
    with pytest.raises(ncchern.ValidationError):
        ncchern.sphere_report(quad=(4, 8, 8))


def test_cli_exit_codes():
    code, out, _ = ncchern.run_cli(["sphere-report", "--compact"])
    assert code == 0
    assert json.loads(out)["character"]["degree0"] > 0
    assert ncchern.run_cli(["winding", str(DATA / "loop_through_zero.csv")])[0] == 4
    assert ncchern.run_cli(["solve", str(DATA / "incomplete.diagram")])[0] == 3
    assert ncchern.run_cli(["sphere-report", "--quad", "8"])[0] == 2

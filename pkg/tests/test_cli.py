import json
from pathlib import Path

import pytest

from qlab.cli import main, run_command

STRUCTURES = Path(__file__).resolve().parent.parent / "structures"


def run(*argv):
    rep, code = run_command(list(argv))
    return rep, code


def as_json(capsys, *argv):
    code = main(list(argv) + ["--format=json"])
    return json.loads(capsys.readouterr().out), code


def test_check_file():
    rep, code = run("check", str(STRUCTURES / "two.q"))
    assert code == 0 and rep.verdict == "pass"
    assert rep.inputs[0][0] == "two"


def test_primitive_is_a_query():
    rep, code = run("primitive", "idl_z4")
    assert code == 0 and rep.verdict == "pass" and rep.result == "not primitive"
    rep, code = run("primitive", "builtin:two")
    assert code == 0 and rep.result == "primitive"


@pytest.mark.parametrize("argv,result", [
    (("prime", "idl_z4"), "not prime"),
    (("prime", "end_chain3"), "prime"),
    (("division", "idl_z4"), "not division"),
    (("field", "two"), "field"),
    (("strongly-primitive", "two"), "strongly primitive"),
    (("weakbasis", "p3"), "weak basis found"),
    (("weakbasis", "chain3"), "no weak basis"),
    (("weaklydense", "scalars_p3"), "not weakly dense"),
    (("dense", "endq_p2"), "dense"),
    (("end", "chain3"), "|End(chain3)| = 6"),
    (("endq", "chain2"), "|End_Q(chain2)| = 2"),
    (("idl", "z12"), "|Idl(Z12)| = 6"),
    (("submodules", "chain3"), "4 submodules"),
    (("leftideals", "idl_z4"), "3 left ideals"),
])
def test_queries(argv, result):
    rep, code = run(*argv, "--oracle")
    assert code == 0 and rep.result == result
    assert all(law.status == "pass" for law in rep.laws)


def test_theorem_commands():
    for argv in (("density1", "endq_chain3"), ("density2", "end_chain3"), ("subq", "f2sq"),
                 ("corollary", "m2f2", "f2sq")):
        rep, code = run(*argv)
        assert code == 0 and rep.verdict == "pass", argv


def test_unmet_hypothesis_is_vacuous():
    rep, code = run("corollary", "z4", "z4mod")
    assert code == 0 and rep.verdict == "vacuous"
    rep, code = run("density1", "scalars_p3")
    assert code == 0 and rep.verdict == "vacuous"


def test_exit_codes(tmp_path, capsys):
    assert run("primitive")[1] == 2
    assert run("nonsense")[1] == 2
    assert run("primitive", "no_such_thing")[1] == 2
    assert run("primitive", "chain3")[1] == 2
    assert run("verify")[1] == 2
    bad = tmp_path / "bad.q"
    bad.write_text("quantale q\nlattice: inline\nelements: 0 a 1\ncovers: 0<a<1\nunit: 1\n"
                   "product:\n  0 0 0\n  0 1 0\n  0 0 1\n")
    rep, code = run("check", str(bad))
    assert code == 1 and rep.laws[-1].law == "associativity"
    syntax = tmp_path / "syntax.q"
    syntax.write_text("lattic q\n")
    assert run("check", str(syntax))[1] == 2
    rep, code = run("primitive", "idl_z12", "--bound", "3")
    assert code == 3 and rep.verdict == "bound-exceeded"
    capsys.readouterr()


def test_named_reference_into_file():
    rep, code = run("primitive", f"{STRUCTURES / 'idl_z4.q'}:idl_z4")
    assert code == 0 and rep.result == "not primitive"
    rep, code = run("submodules", f"{STRUCTURES / 'idl_z4.q'}:collapse")
    assert code == 0 and rep.result == "2 submodules"
    assert run("check", f"{STRUCTURES / 'idl_z4.q'}:missing")[1] == 2


def test_json_schema(capsys):
    data, code = as_json(capsys, "prime", "idl_z4")
    assert code == 0
    assert list(data) == ["command", "inputs", "verdict", "result", "witnesses", "laws", "timing"]
    assert data["witnesses"] == [["zero-product-pair", ["(2)", "(2)"]]]


def test_text_report_ends_with_timing(capsys):
    assert main(["field", "two"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "command: field" and out[-1].startswith("timing: ")


def test_flags_before_the_command(capsys):
    assert main(["--format", "json", "field", "two"]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == "field"


def test_reports_are_deterministic(capsys):
    outs = []
    for _ in range(2):
        main(["density2", "end_p2", "--format=json"])
        outs.append([line for line in capsys.readouterr().out.splitlines()
                     if '"timing"' not in line])
    assert outs[0] == outs[1]


def test_verify_a_file(capsys):
    rep, code = run("verify", str(STRUCTURES / "idl_z4.q"))
    assert code == 0 and [law.status for law in rep.laws if "idl_z4" in law.law] == ["vacuous"] * 3
    assert rep.laws[-1].witness == "none"

import json

import pytest

from disc_sos.certificates import Certificate, builtin, verify
from disc_sos.cli import main
from disc_sos.polyring import Poly
from disc_sos.reptheory import vanishing_forms
from disc_sos.symspace import discriminant


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "verify", "--cert", "builtin:domokos3-five")
    assert code == 0 and out.strip() == "valid, c=1, 5 terms"


def test_verify_with_threads(capsys):
    code, out, _ = run(capsys, "--threads", "2", "verify", "--cert", "builtin:kummer3-seven")
    assert code == 0 and out.strip() == "valid, c=1, 7 terms"


def _bad_cert(tmp_path):
    cert = builtin("domokos3-five")
    w, g = cert.terms[1]
    cert.terms[1] = (w, g * 2)
    path = tmp_path / "bad.json"
    path.write_text(cert.dumps())
    return path


def test_verify_invalid_file(capsys, tmp_path):
    path = _bad_cert(tmp_path)
    code, out, _ = run(capsys, "verify", "--cert", str(path))
    assert code == 1 and out.startswith("invalid")


def test_quick_never_says_valid(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--cert", "builtin:kummer3-seven", "--quick")
    assert code == 0 and "valid" not in out.replace("invalid", "")
    code, out, _ = run(capsys, "verify", "--cert", str(_bad_cert(tmp_path)), "--quick")
    assert code == 1 and out.startswith("invalid")


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "verify", "--cert", "builtin:nope")[0] == 2
    assert run(capsys, "verify", "--cert", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "decompose", "--space", "wedge:3", "--n", "5")[0] == 2
    assert run(capsys, "decompose", "--space", "cube:3", "--n", "3")[0] == 2
    assert run(capsys, "generate", "--pipeline", "gram")[0] == 2
    assert run(capsys, "hwv", "--n", "4", "--space", "wedge:3", "--weight", "3")[0] == 2


def test_discriminant_json(capsys, tmp_path):
    code, out, _ = run(capsys, "discriminant", "--n", "3")
    assert code == 0 and Poly.from_json(json.loads(out)) == discriminant(3)
    path = tmp_path / "d.json"
    assert run(capsys, "discriminant", "--n", "2", "--out", str(path))[0] == 0
    assert Poly.from_json(json.loads(path.read_text())) == discriminant(2)


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--space", "wedge:3", "--n", "4", "--json")
    data = json.loads(out)
    assert code == 0
    assert sorted(x["dim"] for x in data["irreducibles"]) == [3, 3, 7, 7, 9, 15, 15, 25]
    assert data["dimension"] == 84
    code, out, _ = run(capsys, "decompose", "--space", "sym:3", "--n", "3")
    assert "W(6,)  dim 13" in out and "total dimension 35" in out


def test_hwv(capsys):
    code, out, _ = run(capsys, "hwv", "--n", "4", "--space", "wedge:3", "--weight", "3,1")
    assert code == 0 and out.splitlines()[1] == "x21^x31^x42 + 2*x11^x31^x41"
    code, out, _ = run(capsys, "hwv", "--n", "3", "--space", "sym:3", "--weight", "3")
    assert out.splitlines()[1] == "3*x11*x21*x31 - x21^2*x32 + x31^3"


def test_tmap(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 3, "kind": "symmetric", "entries": [["2", "0", "0"], ["0", "-4", "0"], ["0", "0", "2"]]}))
    code, out, _ = run(capsys, "tmap", "--matrix", str(path))
    data = json.loads(out)
    assert code == 0 and data["zero"] and set(data["coordinates"].values()) == {"0"}
    path.write_text(json.dumps({"n": 3, "entries": [["1", "0", "0"], ["0", "2", "0"], ["0", "0", "-3"]]}))
    assert not json.loads(run(capsys, "tmap", "--matrix", str(path))[1])["zero"]
    path.write_text(json.dumps({"n": 2, "entries": [["1", "0"], ["0", "1"]]}))
    assert run(capsys, "tmap", "--matrix", str(path))[0] == 2


def test_generate_five3_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "generate", "--pipeline", "five3", "--seed", "3")
    code2, out2, _ = run(capsys, "generate", "--pipeline", "five3", "--seed", "3")
    assert code1 == code2 == 0 and out1 == out2
    cert = Certificate.from_json(json.loads(out1))
    assert verify(cert).valid and cert.provenance == "generated:five3@3"


def test_generate_gram(capsys, tmp_path):
    basis = tmp_path / "basis.json"
    basis.write_text(json.dumps({"n": 3, "basis": [p.to_json() for p in vanishing_forms(3, 3)]}))
    out_path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "generate", "--pipeline", "gram", "--in", str(basis), "--out", str(out_path))
    assert code == 0
    cert = Certificate.from_json(json.loads(out_path.read_text()))
    assert verify(cert).valid and cert.term_count == 7
    code, out, _ = run(capsys, "verify", "--cert", str(out_path))
    assert code == 0 and out.strip() == "valid, c=1, 7 terms"


def test_generate_gram_rejects_non_invariant_span(capsys, tmp_path):
    basis = tmp_path / "basis.json"
    basis.write_text(json.dumps({"n": 3, "basis": [g.to_json() for _, g in builtin("domokos3-five").terms]}))
    code, _, err = run(capsys, "generate", "--pipeline", "gram", "--in", str(basis))
    assert code == 3 and "not invariant" in err

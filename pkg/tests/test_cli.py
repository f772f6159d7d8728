import json

import numpy as np
import pytest

from multischmidt.cli import main
from multischmidt.stateio import save_state, state_from_json
from multischmidt.states import ghz, half_variant, psi_star
from multischmidt.tensor import random_state


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, st in [("psi", psi_star()), ("ghz", ghz()), ("half", half_variant()),
                     ("bip", random_state((2, 3), 0)), ("unsorted", random_state((3, 1, 2, 2), 1))]:
        paths[name] = tmp_path / f"{name}.json"
        save_state(paths[name], st)
    return paths


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_canonicalize_psi_star(files, capsys):
    code, out, _ = run(["canonicalize", "--input", files["psi"], "--quiet"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"canonical", "transforms", "report", "R", "orbit_info"}
    c = state_from_json(doc["canonical"])
    assert np.abs(c.data - psi_star().data).max() < 1e-8


def test_canonicalize_deterministic(files, capsys):
    outs = [run(["canonicalize", "--input", files["ghz"], "--seed", 3], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_random_round_trip(tmp_path, capsys):
    r, c = tmp_path / "r.json", tmp_path / "c.json"
    assert run(["random", "--dims", "2,2,3", "--seed", 7, "--out", r, "--quiet"], capsys)[0] == 0
    assert run(["canonicalize", "--input", r, "--out", c, "--quiet"], capsys)[0] == 0
    doc = json.loads(c.read_text())
    assert doc["report"]["forced_zeros"] == 5
    assert state_from_json(doc["canonical"]).dims == (2, 2, 3)


def test_random_then_orbit(tmp_path, capsys):
    r = tmp_path / "r.json"
    run(["random", "--dims", "2,2,5", "--out", r, "--quiet"], capsys)
    code, out, _ = run(["orbit", "--input", r, "--quiet"], capsys)
    assert code == 0 and json.loads(out)["stabilizer_dimension"] == 1


def test_orbit_dims(capsys):
    code, out, err = run(["orbit", "--dims", "2,2,2"], capsys)
    assert code == 0 and json.loads(out)["orbit_dimension"] == 10 and err


def test_quiet_suppresses_prose(capsys):
    assert run(["orbit", "--dims", "2,2,2", "--quiet"], capsys)[2] == ""


def test_entropy_ghz(files, capsys):
    code, out, _ = run(["entropy", "--input", files["ghz"], "--quiet"], capsys)
    assert code == 0 and json.loads(out)["entropy"] == pytest.approx(np.log(2), abs=1e-15)
    _, out, _ = run(["entropy", "--input", files["ghz"], "--log-base", "2", "--quiet"], capsys)
    assert json.loads(out)["entropy"] == pytest.approx(1.0)


def test_check_exit_codes(files, capsys):
    assert run(["check", "--input", files["psi"], "--quiet"], capsys)[0] == 0
    code, out, _ = run(["check", "--input", files["half"], "--quiet"], capsys)
    assert code == 2 and "equal_dims.3" in json.loads(out)["failing"]


def test_corrupted_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dims": [2, 2, 2], "amplitudes": [[1, 0]] * 5}))
    code, _, err = run(["canonicalize", "--input", bad], capsys)
    assert code == 1 and "amplitudes" in err
    bad.write_text("not json")
    assert run(["canonicalize", "--input", bad], capsys)[0] == 1
    assert run(["canonicalize", "--input", tmp_path / "missing.json"], capsys)[0] == 1


def test_unnormalised_needs_flag(tmp_path, capsys):
    p = tmp_path / "u.json"
    p.write_text(json.dumps({"dims": [2, 2, 2], "amplitudes": [[1, 0]] + [[0, 0]] * 6 + [[1, 0]]}))
    assert run(["canonicalize", "--input", p, "--quiet"], capsys)[0] == 1
    assert run(["canonicalize", "--input", p, "--normalize", "--quiet"], capsys)[0] == 0


def test_bipartite_fallback(files, capsys):
    assert run(["canonicalize", "--input", files["bip"]], capsys)[0] == 1
    code, out, _ = run(["canonicalize", "--input", files["bip"], "--bipartite-fallback", "--quiet"], capsys)
    assert code == 0 and len(json.loads(out)["schmidt_weights"]) == 2


def test_unsorted_modes_are_handled(files, capsys):
    code, out, _ = run(["canonicalize", "--input", files["unsorted"], "--quiet"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["canonical"]["dims"] == [2, 2, 3] and doc["mode_order"] == [2, 3, 0]


def test_usage_errors(capsys):
    assert run(["random"], capsys)[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["orbit", "--dims", "2,x"])
    assert exc.value.code == 1


def test_appendix_and_bruteforce(files, capsys):
    code, out, _ = run(["appendix", "--input", files["psi"], "--quiet"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["values"] == pytest.approx([0.75, 0.25], abs=1e-8)
    assert run(["appendix", "--seed", 2, "--quiet"], capsys)[0] == 0
    assert run(["appendix", "--input", files["ghz"], "--quiet"], capsys)[0] == 1
    code, out, _ = run(["bruteforce", "--input", files["ghz"], "--samples", 5000, "--quiet"], capsys)
    assert code == 0 and json.loads(out)["max_overlap"] == pytest.approx(1 / np.sqrt(2), abs=1e-6)


@pytest.mark.parametrize("form", ["marginal", "schmidt", "iu-descend"])
def test_altform(files, form, capsys):
    name = "bip" if form == "schmidt" else "psi"
    code, out, _ = run(["altform", "--input", files[name], "--form", form, "--quiet"], capsys)
    assert code == 0 and "coefficients" in json.loads(out)

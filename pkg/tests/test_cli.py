import io
import json
import subprocess
import sys

import pytest

from golden_cases import GOLDEN, cases, render
from monoid_corpus import CORPUS_DIR, corpus_document, monoid
from semifrob.cli import parse_document, run

CASES = list(cases())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue().rstrip("\n"), err.getvalue().rstrip("\n")


def doc(name):
    return CORPUS_DIR / f"{name}.json"


# -- spec examples ---------------------------------------------------------------

def test_ratio_example():
    assert call("ratio", doc("whitney")) == (0, "1/2", "")


def test_is_fsplit_example():
    assert call("is-fsplit", doc("whitney"), "--prime", "2") == (0, "false: p-face ⟨(1,0)⟩", "")


def test_hom_check_example():
    code, out, _ = call("hom-check", doc("ex45"), "-e", "1", "-a", "2,0", "--conditions-only")
    assert (code, out) == (0, "conditions: yes; strict: LevelTooSmall (e_min=3)")


def test_negative_numerators_parse():
    code, out, _ = call("hom-check", doc("whitney"), "-e", "1", "-a", "-1,0")
    assert (code, out) == (0, "strict: no (PSatFail ⟨(1,0)⟩)")


# -- exit codes --------------------------------------------------------------------

def test_domain_errors_exit_1():
    code, _, err = call("ratio", doc("whitney"), "--prime", "2")
    assert code == 1 and err.startswith("NotFSplit:")
    code, _, err = call("hom-check", doc("ex45"), "-e", "1", "-a", "2,0")
    assert code == 1 and err.startswith("LevelTooSmall:")
    code, _, err = call("probe", doc("ex45"), "-e", "1")
    assert code == 1 and err.startswith("LevelTooSmall:")
    code, _, err = call("ratio", doc("whitney"), "--prime", "4")
    assert code == 1 and err.startswith("InvalidInput:")


def test_parse_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert call("ratio", bad)[0] == 2
    both = tmp_path / "both.json"
    both.write_text(json.dumps({"rank": 2, "prime": 3, "monoid_generators": [[1, 0]],
                                "cone_generators": [[1, 0]], "face_lattices": []}), encoding="utf-8")
    code, _, err = call("ratio", both)
    assert code == 2 and err.startswith("ParseError:")
    assert call("ratio", tmp_path / "missing.json")[0] == 2
    assert call("ratio", doc("whitney"), "--bogus")[0] == 2
    noprime = tmp_path / "noprime.json"
    noprime.write_text(json.dumps({"rank": 2, "monoid_generators": [[1, 0], [0, 1]]}), encoding="utf-8")
    code, _, err = call("ratio", noprime)
    assert code == 2 and err.startswith("ParseError:")
    assert call("ratio", noprime, "--prime", "3")[:2] == (0, "1/1")


def test_invalid_monoid_is_domain_error(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"rank": 2, "prime": 3, "cone_generators": [[1, 0], [0, 1]],
                                "face_lattices": [{"face_rays": [[1, 0]], "lattice_generators": [[0, 1]]}]}),
                    encoding="utf-8")
    code, _, err = call("validate", path)
    assert code in (1, 2) and ":" in err


# -- golden files and determinism ----------------------------------------------------

@pytest.mark.parametrize("tag,argv", CASES, ids=[t for t, _ in CASES])
def test_golden(tag, argv):
    assert render(argv) == (GOLDEN / tag).read_text(encoding="utf-8")


def test_json_outputs_parse():
    for tag, argv in CASES:
        if tag.endswith(".json"):
            text = (GOLDEN / tag).read_text(encoding="utf-8")
            body = text.split("--- stdout\n", 1)[1].split("--- stderr\n", 1)[0]
            if body:
                json.loads(body)


def test_subprocess_is_byte_identical():
    argv = [sys.executable, "-m", "semifrob.cli", "splitting", str(doc("cube")), "--json", "--e-max", "2"]
    runs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(3)}
    assert len(runs) == 1


@pytest.mark.parametrize("name", ["whitney", "ex45", "sn_2", "sn_3", "sn_4", "sn_5", "cube", "quadrant"])
def test_emit_normalized_round_trip(name, tmp_path):
    S, p = corpus_document(name)
    code, out, _ = call("validate", doc(name), "--emit-normalized")
    assert code == 0
    emitted = json.loads(out)
    S2, p2 = parse_document(emitted)
    assert S2 == S and p2 == p
    # and once more through a file
    path = tmp_path / "n.json"
    path.write_text(out, encoding="utf-8")
    assert call("validate", path, "--emit-normalized")[1] == out


def test_corpus_documents_match_builders():
    for name in ["whitney", "ex45", "sn_2", "sn_3", "sn_4", "sn_5", "cube", "quadrant"]:
        S, _ = corpus_document(name)
        assert S == monoid(name)

import json
import subprocess
import sys

import pytest

from toricpc.bundle import classification_family
from toricpc.cli import main
from toricpc.fan import hirzebruch, product, projective_space, star_subdivision
from toricpc.io import bundled_database, canonical_document, parse_fan, write_fan


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fanfile(tmp_path):
    count = iter(range(10 ** 6))

    def make(fan):
        p = tmp_path / f"fan{next(count)}.json"
        p.write_text(write_fan(fan))
        return str(p)
    return make


def test_construct_pipes_into_minp():
    cmd = [sys.executable, "-m", "toricpc"]
    made = subprocess.run(cmd + ["construct", "Pn", "--n", "3"], capture_output=True, text=True, check=True)
    got = subprocess.run(cmd + ["minp", "-"], input=made.stdout, capture_output=True, text=True)
    assert got.returncode == 0
    assert got.stdout.strip() == "m = 3"


def test_construct_output_is_the_family(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "P2-O2", "--n", "6")
    assert code == 0
    assert canonical_document(parse_fan(out)) == canonical_document(classification_family("P2-O2", 6))
    target = tmp_path / "f.json"
    assert run(capsys, "construct", "F1-Oef", "--n", "6", "-o", str(target))[0] == 0
    assert canonical_document(parse_fan(target.read_text())) == canonical_document(classification_family("F1-Oef", 6))


def test_batch_csv_row(capsys):
    code, out, _ = run(capsys, "batch", str(bundled_database(4)), "--tabulate-m", "--csv")
    assert code == 0
    assert out.splitlines() == ["dim,total,m1,m2,m3,m4", "4,124,107,15,1,1"]


def test_batch_text_and_json(capsys):
    code, out, _ = run(capsys, "batch", str(bundled_database(3)), "--tabulate-m")
    assert code == 0 and "primitive collections" in out
    code, out, _ = run(capsys, "batch", str(bundled_database(3)), "--tabulate-m", "--json")
    doc = json.loads(out)
    assert doc["total"] == 18 and doc["counts"] == {"1": 16, "2": 1, "3": 1}


def test_two_fano_fails_with_witness(capsys, fanfile):
    code, out, _ = run(capsys, "two-fano", fanfile(classification_family("P2-O2", 6)))
    assert code == 1 and "FAILS" in out and "witness cone" in out
    code, out, _ = run(capsys, "two-fano", fanfile(projective_space(4)), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passes"] and doc["min_value"] == "5/2"


def test_check_and_probe(capsys, fanfile, tmp_path):
    code, out, _ = run(capsys, "check", fanfile(projective_space(3)), "--probe", "3", "--seed", "7", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["valid"] and doc["rho"] == 1 and len(doc["probes"]) == 3
    again = run(capsys, "check", fanfile(projective_space(3)), "--probe", "3", "--seed", "7", "--json")[1]
    assert again == out
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2]]}')
    code, out, _ = run(capsys, "check", str(bad))
    assert code == 1 and "NotComplete" in out


def test_fano_pc_rho(capsys, fanfile):
    f2 = fanfile(hirzebruch(2))
    code, out, _ = run(capsys, "fano", f2)
    assert code == 1 and "degree 0" in out
    assert run(capsys, "fano", fanfile(projective_space(2)))[0] == 0
    code, out, _ = run(capsys, "pc", f2, "--relations")
    assert code == 0 and out.startswith("2 primitive collections")
    assert run(capsys, "rho", f2)[1].strip() == "rho = 2"


def test_blowdown_bundle_reduce2(capsys, fanfile, tmp_path):
    bl = star_subdivision(projective_space(3), (0, 1))
    path = fanfile(bl)
    out_path = tmp_path / "down.json"
    # the file stores rays in canonical order, where [1] is the contractible relation
    assert run(capsys, "blowdown", path, "--relation", "0")[0] == 2
    code, out, _ = run(capsys, "blowdown", path, "--relation", "1", "-o", str(out_path), "--json")
    assert code == 0 and json.loads(out)["center"]
    assert parse_fan(out_path.read_text()).nrays == 4
    code, out, _ = run(capsys, "bundle", fanfile(product(projective_space(1), projective_space(2))), "--pc", "0")
    assert code == 0 and "global bundle" in out
    x = product(projective_space(2), projective_space(1))
    code, out, _ = run(capsys, "reduce2", fanfile(star_subdivision(x, (0, 3))), "--pc", "2", "--json")
    assert code == 0 and json.loads(out)["blowdowns"] == 1


def test_batyrev3(capsys, fanfile):
    code, out, _ = run(capsys, "batyrev3", fanfile(classification_family("blowup-E-hyperplane", 6)))
    assert code == 0 and out.startswith("l = 5")
    code, _, err = run(capsys, "batyrev3", fanfile(projective_space(3)))
    assert code == 2 and err


def test_usage_errors(capsys, tmp_path, fanfile):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "construct", "P9-O9", "--n", "6")[0] == 2
    assert run(capsys, "construct", "P2-O1", "--n", "3")[0] == 2
    assert run(capsys, "minp", str(tmp_path / "missing.json"))[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, _, err = run(capsys, "minp", str(junk))
    assert code == 2 and "line 1" in err
    assert run(capsys, "blowdown", fanfile(projective_space(2)), "--relation", "5")[0] == 2
    assert run(capsys, "reduce2", fanfile(hirzebruch(2)), "--pc", "0")[0] == 2

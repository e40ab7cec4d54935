from __future__ import annotations

import json
import subprocess
import sys

import pytest

from kkextremal.hypergraph import parse_hypergraph
from kkextremal.setfam import KSetFamily, parse_family

PAIR = "5 3\n1,2,3\n1,4,5\n"


def run(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "kkextremal", *map(str, args)],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=300,
    )


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text(PAIR)
    return path


def test_decompose():
    out = run("decompose", 12, "--k", 3)
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"schema": "1", "kind": "kbinomial", "k": 3, "coeffs": [5, 2, 1]}
    assert json.loads(run("decompose", 10, "--k", 3, "--full").stdout)["coeffs"] == [4, 3, 3]


def test_decompose_shadow(pair_file):
    doc = json.loads(run("decompose", "--shadow", pair_file).stdout)
    assert doc["kind"] == "shadow" and doc["coeffs"] == [4, -1, -3]


def test_hypotenusal_values_are_strings():
    doc = json.loads(run("bbw", "hypotenusal", "--count", 9).stdout)
    assert doc["values"] == ["1", "1", "2", "6", "36", "876", "408696", "83762796636", "3508125906207095591916"]


def test_check(pair_file):
    doc = json.loads(run("check", pair_file).stdout)
    assert doc["extremal"] is False
    assert doc["beta"] == [4, -1, -3]
    assert doc["depth"] == 2
    assert doc["walls"] == [0, 4, 6]


def test_check_reads_stdin():
    out = run("check", "-", stdin=PAIR)
    assert out.returncode == 0 and json.loads(out.stdout)["size"] == 2


def test_embed(pair_file):
    out = run("embed", pair_file)
    header, body = out.stdout.split("\n", 1)
    assert header == "# r0=4 r=4"
    S = parse_family(body)
    assert S.n == 9 and json.loads(run("check", "-", stdin=body).stdout)["extremal"] is True


def test_shadow(pair_file):
    S = parse_family(run("shadow", pair_file).stdout)
    assert set(S.sets()) == {(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)}
    assert parse_family(run("shadow", pair_file, "--iter", 2).stdout).sets() == [(1,), (2,), (3,), (4,), (5,)]


def test_hypergraph_family_roundtrip(pair_file):
    text = run("hypergraph", pair_file).stdout
    assert set(parse_hypergraph(text).edge_lists()) == {(2, 4), (2, 5), (3, 4), (3, 5)}
    back = run("family", "-", "--k", 3, stdin=text)
    assert parse_family(back.stdout) == KSetFamily.of(5, 3, [(1, 2, 3), (1, 4, 5)])


def test_trees(pair_file):
    doc = json.loads(run("trees", pair_file).stdout)
    leaves = [leaf["value"] for tree in doc["trees"] for leaf in tree["leaves"]]
    # the leaves count the 8 missing 3-sets
    assert sum(leaves) == 8


def test_bbw_run(pair_file):
    doc = json.loads(run("bbw", "run", pair_file).stdout)
    assert doc["walls"][-2:] == [4, 6] and doc["abrupt"] is False


def test_construct():
    out = run("construct", "B", "--j", 2, "--counts", "0,1,1", "--n", 7)
    assert out.returncode == 0
    assert parse_hypergraph(out.stdout).edge_lists() == [(6, 7), (3, 4, 5)]
    assert run("construct", "A", "--j", 5, "--counts", "0,1,1", "--n", 7).returncode == 2


def test_decide():
    out = run("decide", "--n", 5, "--k", 3, "--m", 10, "--depth", 2)
    assert out.returncode == 1 and out.stdout.strip() == "NONE"
    found = run("decide", "--n", 8, "--k", 3, "--m", 49, "--depth", 1)
    assert found.returncode == 0
    S = parse_family(found.stdout)
    assert len(S) == 49
    doc = json.loads(run("check", "-", stdin=found.stdout).stdout)
    assert doc["extremal"] is True and doc["depth"] == 1


def test_verify():
    out = run("verify", "--n", 4, "--k", 2)
    doc = json.loads(out.stdout)
    assert out.returncode == 0 and doc["passed"] and doc["extremal"] == 44


@pytest.mark.parametrize(
    "args,stdin,code",
    [
        (("check", "-"), "5 3\n1,2\n", 2),
        (("check", "-"), "64 1\n1\n", 3),
        (("decompose",), None, 2),
        (("decompose", 0, "--k", 3), None, 2),
        (("verify", "--n", 9, "--k", 3), None, 3),
        (("check", "/nonexistent/file"), None, 2),
    ],
)
def test_exit_codes(args, stdin, code):
    out = run(*args, stdin=stdin)
    assert out.returncode == code, out.stderr
    assert out.stderr

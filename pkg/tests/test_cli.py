import json

import pytest

from orient_duality.algebra import CoeffRing
from orient_duality.cli import main, parse_morphism
from orient_duality.errors import ParseError
from orient_duality.spaces import CohClass, Space

KERNEL_P2_ADDITIVE = {
    "space": "P2xP2",
    "terms": [
        {"zeta": [2, 0], "coeff": "1"},
        {"zeta": [1, 1], "coeff": "1"},
        {"zeta": [0, 2], "coeff": "1"},
    ],
}


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- worked examples ----------------------------------------------------------


def test_kernel_additive_p2_json(capsys):
    code, out, _ = _run(capsys, "kernel", "--theory", "additive", "--space", "P2", "--format", "json")
    assert code == 0
    assert json.loads(out) == KERNEL_P2_ADDITIVE


def test_kernel_json_roundtrips(capsys):
    code, out, _ = _run(capsys, "kernel", "--theory", "universal", "--space", "P1xP1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    ring = CoeffRing.universal(5)
    c = CohClass.from_json_obj(Space.parse(obj["space"]), ring, obj)
    assert c.to_json_obj()["terms"] == obj["terms"]


def test_euler_multiplicative_square(capsys):
    code, out, _ = _run(
        capsys, "euler", "--theory", "multiplicative", "--space", "P1xP1", "--degrees", "1,1"
    )
    assert code == 0
    assert out.strip() == "z1 + z2 - beta*z1*z2"


def test_text_and_json_carry_same_data(capsys):
    args = ("euler", "--theory", "multiplicative", "--space", "P2", "--degrees", "2")
    _, text_out, _ = _run(capsys, *args)
    code, json_out, _ = _run(capsys, *args, "--format", "json")
    assert code == 0
    obj = json.loads(json_out)
    ring = CoeffRing.multiplicative(3)
    c = CohClass.from_json_obj(Space.parse(obj["space"]), ring, obj)
    assert c.render() == text_out.strip() == "2*z1 - beta*z1^2"


def test_verify_square_passes(capsys):
    code, out, _ = _run(
        capsys, "verify", "--theory", "multiplicative", "--space", "P1xP1", "--truncation", "6"
    )
    assert code == 0
    assert "16/16 checks passed" in out


def test_verify_json_deterministic(capsys):
    args = (
        "verify", "--theory", "additive,universal", "--space", "P1,P1xP1",
        "--truncation", "5", "--seed", "3", "--samples", "2", "--format", "json",
    )
    code1, out1, _ = _run(capsys, *args)
    code2, out2, _ = _run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    reports = json.loads(out1)
    assert len(reports) == 16 * 2 * 2
    assert {r["status"] for r in reports} == {"pass"}


def test_verify_check_subset(capsys):
    code, out, _ = _run(
        capsys, "verify", "--theory", "additive", "--space", "P1",
        "--truncation", "4", "--checks", "V9-diagonal-counit,V10-poincare-roundtrip",
    )
    assert code == 0
    assert "2/2 checks passed" in out


def test_ring_describe_and_parse(capsys):
    code, out, _ = _run(capsys, "ring", "--theory", "universal", "--truncation", "3")
    assert code == 0
    assert out == "theory: universal\ntruncation: 3\nsymbols: b1 (degree -1), b2 (degree -2)\n"
    code, out, _ = _run(capsys, "ring", "--theory", "multiplicative", "--parse", "beta + 1 - beta")
    assert code == 0
    assert out.splitlines()[-1] == "parsed: 1"


def test_fundamental_multiplicative_p2(capsys):
    code, out, _ = _run(capsys, "fundamental", "--theory", "multiplicative", "--space", "P2")
    assert code == 0
    assert out.strip() == "z^(0): beta^2; z^(1): beta; z^(2): 1"


def test_dualize_both_directions(capsys):
    one = json.dumps({"terms": [{"zeta": [0], "coeff": "1"}]})
    code, out, _ = _run(
        capsys, "dualize", "--theory", "additive", "--space", "P2",
        "--direction", "to-hom", "--class", one,
    )
    assert code == 0
    assert out.strip() == "z^(2): 1"
    top = json.dumps({"values": [{"zeta": [2], "coeff": "1"}]})
    code, out, _ = _run(
        capsys, "dualize", "--theory", "additive", "--space", "P2",
        "--direction", "to-coh", "--class", top,
    )
    assert code == 0
    assert out.strip() == "1"


def test_pushforward_projection(capsys):
    cls = json.dumps({"terms": [{"zeta": [1, 0], "coeff": "2"}, {"zeta": [0, 1], "coeff": "1"}]})
    code, out, _ = _run(
        capsys, "pushforward", "--theory", "additive", "--space", "P1xP1",
        "--morphism", "proj(0)", "--class", cls,
    )
    assert code == 0
    assert out.strip() == "1"


def test_pushforward_composite_chain(capsys):
    # rightmost token applies first: project P2xP1 -> P1, then embed P1 -> P2
    cls = json.dumps({"terms": [{"zeta": [1, 0], "coeff": "1"}]})
    code, out, _ = _run(
        capsys, "pushforward", "--theory", "multiplicative", "--space", "P2xP1",
        "--morphism", "embed(0,2);proj(1)", "--class", cls,
    )
    assert code == 0
    assert out.strip() == "beta*z1"


def test_out_writes_file(tmp_path, capsys):
    path = tmp_path / "euler.json"
    code, out, _ = _run(
        capsys, "euler", "--theory", "additive", "--space", "P1", "--degrees", "3",
        "--format", "json", "--out", str(path),
    )
    assert code == 0
    assert json.loads(path.read_text())["terms"] == [{"zeta": [1], "coeff": "3"}]


# -- morphism grammar ---------------------------------------------------------


def test_parse_morphism_chain_spaces():
    f = parse_morphism("embed(0,2);proj(1)", Space((2, 1)))
    assert f.source == Space((2, 1))
    assert f.target == Space((2,))


def test_parse_morphism_all_tokens():
    f = parse_morphism("perm(1,0);diag(0);embed(0,2);proj(0)", Space((1, 1)))
    assert f.source == Space((1, 1))
    # proj -> P1, embed -> P2, diag -> P2xP2, perm swaps
    assert f.target == Space((2, 2))


def test_parse_morphism_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_morphism("proj(0);splat(1)", Space((1,)))
    assert "position 8" in str(exc.value)
    with pytest.raises(ParseError):
        parse_morphism("", Space((1,)))
    with pytest.raises(ParseError):
        parse_morphism("embed(0)", Space((1,)))  # wrong arity
    with pytest.raises(ParseError):
        parse_morphism("perm(0,0)", Space((1, 1)))  # not a permutation


def test_embed_token_requires_growth():
    with pytest.raises(ParseError):
        parse_morphism("embed(0,1)", Space((2,)))


# -- exit codes ---------------------------------------------------------------


def test_exit_2_on_bad_space(capsys):
    code, _, err = _run(capsys, "kernel", "--theory", "additive", "--space", "Q2")
    assert code == 2
    assert "error" in err.lower()


def test_exit_2_on_bad_morphism(capsys):
    code, _, err = _run(
        capsys, "pushforward", "--theory", "additive", "--space", "P1",
        "--morphism", "smash(0)", "--class", '{"terms":[]}',
    )
    assert code == 2
    assert "smash" in err


def test_exit_2_on_bad_class_json(capsys):
    code, _, err = _run(
        capsys, "dualize", "--theory", "additive", "--space", "P1",
        "--direction", "to-hom", "--class", "{not json",
    )
    assert code == 2


def test_exit_2_on_factor_out_of_range(capsys):
    code, _, err = _run(
        capsys, "pushforward", "--theory", "additive", "--space", "P1xP1",
        "--morphism", "diag(2)", "--class", '{"terms":[]}',
    )
    assert code == 2


def test_exit_2_on_unknown_check(capsys):
    code, _, err = _run(
        capsys, "verify", "--theory", "additive", "--space", "P1",
        "--truncation", "4", "--checks", "V99-bogus",
    )
    assert code == 2


def test_exit_2_on_bad_samples(capsys):
    code, _, err = _run(
        capsys, "verify", "--theory", "additive", "--space", "P1",
        "--truncation", "4", "--samples", "0",
    )
    assert code == 2


def test_exit_3_on_unsound_truncation(capsys):
    code, _, err = _run(
        capsys, "verify", "--theory", "additive", "--space", "P2", "--truncation", "2"
    )
    assert code == 3
    code, _, err = _run(
        capsys, "euler", "--theory", "additive", "--space", "P9", "--degrees", "1",
        "--truncation", "4",
    )
    assert code == 3
    assert "truncation" in err


def test_exit_1_on_failing_check(capsys, monkeypatch):
    import orient_duality.cli as cli_mod
    from orient_duality.verify import CheckReport

    def fake_run_suite(cfg, laws=None, checks=None):
        return [CheckReport("V1-fgl-axioms", "additive", "P1", "fail", {"identity": "x"})]

    monkeypatch.setattr(cli_mod, "run_suite", fake_run_suite)
    code, out, _ = _run(
        capsys, "verify", "--theory", "additive", "--space", "P1", "--truncation", "4"
    )
    assert code == 1
    assert "0/1 checks passed" in out

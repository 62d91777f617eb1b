"""Command-line surface: DSL parsing, evaluation, formatting, verbs, verify.

Frozen expectations:
  * grammar is left-associative; "X[2,*]" fails at byte offset 4
  * fuse -p 3 "X[2,+]*X[3,+]"  ->  2*X[1,-] + 2*X[2,+]
  * fuse -p 2 "M[3,1]*M[3,1]"  ->  M[5,1]
  * the index letter p resolves to the -p value
  * exit codes: 0 ok, 1 verification failure, 2 usage/parse trouble
"""

import json
import random
from collections import Counter

import pytest

from ribbonkit.cyclo import field, make_root
from ribbonkit.cli import (
    DSLSyntaxError,
    EvalError,
    evaluate,
    format_combination,
    main,
    parse,
    print_expression,
    random_expression,
)


# -- parser -------------------------------------------------------------------


def test_parse_product():
    ast = parse("X[2,+] * X[3,+]")
    assert ast == ("mul", ("atom", "X", (2, 1)), ("atom", "X", (3, 1)))


def test_parse_left_associative():
    v = ("atom", "V", (2,))
    assert parse("V[2]*V[2]*V[2]") == ("mul", ("mul", v, v), v)
    assert parse("V[2]+V[2]+V[2]") == ("add", ("add", v, v), v)


def test_parse_atoms():
    assert parse("chi") == ("atom", "chi", ())
    assert parse("M[-1,2]") == ("atom", "M", (-1, 2))
    assert parse("L[1,2]") == ("atom", "L", (1, 2))
    assert parse("X[p,+]") == ("atom", "X", ("p", 1))
    assert parse("7") == ("int", 7)


def test_parse_precedence_and_parens():
    got = parse("2*V[2] + V[1]")
    assert got[0] == "add" and got[1][0] == "mul"
    got = parse("2*(V[2] + V[1])")
    assert got[0] == "mul" and got[2][0] == "add"


def test_parse_sign_slot_error_offset():
    with pytest.raises(DSLSyntaxError) as err:
        parse("X[2,*]")
    assert err.value.offset == 4


def test_parse_truncated_input():
    with pytest.raises(DSLSyntaxError):
        parse("V[2] +")
    with pytest.raises(DSLSyntaxError):
        parse("")
    with pytest.raises(DSLSyntaxError):
        parse("V[2] V[3]")


def test_print_round_trip_frozen():
    for text in [
        "X[2,+]*X[3,+]",
        "V[2]*V[2]*V[2]",
        "2*chi + V[2] - 3*M[-1,2]",
        "2*(V[2] + V[1])*chi",
        "V[2] - (V[1] - V[2])",
        "X[p,+]",
    ]:
        ast = parse(text)
        assert parse(print_expression(ast)) == ast


def test_random_round_trip():
    rng = random.Random(20260822)
    for _ in range(300):
        ast = random_expression(rng)
        assert parse(print_expression(ast)) == ast


# -- evaluation ---------------------------------------------------------------


def test_evaluate_wp_product():
    got = evaluate(parse("X[2,+]*X[3,+]"), p=3)
    assert got == Counter({(1, -1): 2, (2, 1): 2})


def test_evaluate_scalar_and_unit():
    assert evaluate(parse("1*X[2,+]"), p=3) == Counter({(2, 1): 1})
    assert evaluate(parse("X[2,+] + 1"), p=3) == Counter(
        {(2, 1): 1, (1, 1): 1}
    )


def test_evaluate_singlet():
    got = evaluate(parse("M[3,1]*M[3,1]"), p=2, rmax=8)
    assert got == Counter({(5, 1): 1})


def test_evaluate_uq_atoms():
    assert evaluate(parse("chi*V[2]"), p=3) == Counter({(2, 1): 1})
    assert evaluate(parse("chi*chi"), p=3) == Counter({(1, 0): 1})
    assert evaluate(parse("V[2]*V[2] - V[1]"), p=3) == Counter({(3, 0): 1})


def test_evaluate_p_binding():
    assert evaluate(parse("X[p,+]"), p=5) == Counter({(5, 1): 1})


def test_evaluate_vir():
    got = evaluate(parse("L[2,1]*L[2,1]"), p=3, rmax=8)
    assert got == Counter({(1, 1): 1, (3, 1): 1})


def test_evaluate_errors():
    with pytest.raises(EvalError):
        evaluate(parse("V[2]*X[1,+]"), p=3)  # mixed families
    with pytest.raises(EvalError):
        evaluate(parse("V[9]"), p=3)  # outside the label range
    with pytest.raises(EvalError):
        evaluate(parse("2"), p=3)  # no atoms, no ring
    with pytest.raises(EvalError):
        evaluate(parse("M[3,1]*M[3,1]"), p=2, rmax=3)  # leaves the window


def test_evaluate_reassociation_agrees():
    rng = random.Random(7)
    labels = ["X[1,+]", "X[1,-]", "X[2,+]", "X[2,-]", "X[3,+]", "X[3,-]"]
    for _ in range(25):
        picks = [rng.choice(labels) for _ in range(3)]
        a = evaluate(parse(f"({picks[0]}*{picks[1]})*{picks[2]}"), p=3)
        b = evaluate(parse(f"{picks[0]}*({picks[1]}*{picks[2]})"), p=3)
        assert a == b


# -- formatting ---------------------------------------------------------------


def test_format_combination_wp():
    got = format_combination(Counter({(1, -1): 2, (2, 1): 2}), "wp")
    assert got == "2*X[1,-] + 2*X[2,+]"
    assert format_combination(Counter({(5, 1): 1}), "singlet") == "M[5,1]"


def test_format_combination_uq():
    got = format_combination(Counter({(1, 1): 2, (2, 0): 1}), "uq")
    assert got == "2*chi + V[2]"
    assert format_combination(Counter({(2, 1): 3}), "uq") == "3*chi*V[2]"
    assert format_combination(Counter(), "uq") == "0"


def test_format_combination_negative():
    got = format_combination(Counter({(1, 0): 2, (2, 0): -1}), "uq")
    assert got == "2*V[1] - V[2]"
    got = format_combination(Counter({(2, 0): -2}), "uq")
    assert got == "0 - 2*V[2]"
    # every formatted combination re-parses and re-evaluates to itself
    back = evaluate(parse(got), p=3)
    assert back == Counter({(2, 0): -2})


# -- command verbs ------------------------------------------------------------


def test_cmd_fuse(capsys):
    assert main(["fuse", "-p", "3", "X[2,+]*X[3,+]"]) == 0
    assert capsys.readouterr().out.strip() == "2*X[1,-] + 2*X[2,+]"
    assert main(["fuse", "-p", "2", "M[3,1]*M[3,1]"]) == 0
    assert capsys.readouterr().out.strip() == "M[5,1]"


def test_cmd_fuse_json(capsys):
    assert main(["fuse", "-p", "3", "--format", "json", "X[2,+]*X[2,+]"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verb"] == "fuse"
    assert payload["p"] == 3
    assert payload["pretty"] == "X[1,+] + X[3,+]"
    assert [[1, 1], 1] in payload["result"]


def test_cmd_fuse_errors(capsys):
    assert main(["fuse", "-p", "3", "X[2,*]"]) == 2
    err = capsys.readouterr().err
    assert "offset 4" in err
    assert main(["fuse", "-p", "3", "V[9]"]) == 2
    assert main(["fuse", "-p", "2", "--rmax", "3", "M[3,1]*M[3,1]"]) == 2


def test_cmd_fuse_range(capsys):
    assert main(["fuse", "-p", "2..3", "V[2]*V[2]"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["p=2: 2*V[1] + 2*chi", "p=3: V[1] + V[3]"]


def test_cmd_jw(capsys):
    assert main(["jw", "-p", "5", "-n", "2"]) == 0
    out = capsys.readouterr().out
    assert "markov" in out
    assert main(["jw", "-p", "3", "-n", "3"]) == 2


def test_cmd_fpdim(capsys):
    assert main(["fpdim", "-p", "2..3"]) == 0
    out = capsys.readouterr().out
    assert "16" in out and "54" in out


def test_cmd_twists(capsys):
    assert main(["twists", "-p", "2"]) == 0
    out = capsys.readouterr().out
    assert "X[2,+]" in out


def test_cmd_muger(capsys):
    assert main(["muger", "-p", "3"]) == 0
    out = capsys.readouterr().out
    assert "X[1,+]" in out and "M[3,1]" in out


def test_cmd_phase(capsys):
    assert main(["phase", "-p", "2", "0", "0", "1/2"]) == 0
    want = str(make_root(field(2), 2))
    assert capsys.readouterr().out.strip() == want
    assert main(["phase", "-p", "2", "--squared", "0", "0", "1/2"]) == 0
    assert capsys.readouterr().out.strip() == str(make_root(field(2), 4))
    assert main(["phase", "-p", "2", "0", "0", "1/3"]) == 2


def test_cmd_usage(capsys):
    assert main([]) == 2
    assert main(["fuse", "-p", "1", "V[1]"]) == 2
    assert main(["nonsense"]) == 2
    capsys.readouterr()


# -- verify -------------------------------------------------------------------


def test_verify_single_suite(capsys):
    assert main(["verify", "-p", "2", "--suite", "fpdim"]) == 0
    out = capsys.readouterr().out
    assert "fpdim" in out and "pass" in out


def test_verify_json_lines(capsys):
    assert main(
        ["verify", "-p", "2..3", "--suite", "twists", "--format", "json"]
    ) == 0
    lines = [ln for ln in capsys.readouterr().out.splitlines() if ln.strip()]
    assert lines
    for line in lines:
        payload = json.loads(line)
        assert set(payload) >= {"check", "p", "status", "detail"}
        assert payload["status"] == "pass"
        assert payload["p"] in (2, 3)


def test_verify_braiding_suite(capsys):
    assert main(["verify", "-p", "3", "--suite", "braiding"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "fail" not in out


def test_verify_properties_smoke(capsys):
    # trimmed triple count keeps this a smoke test; acceptance runs it full
    assert main(
        ["verify", "-p", "2", "--suite", "properties", "--seed", "11",
         "--triples", "50", "--roundtrips", "50"]
    ) == 0
    capsys.readouterr()

"""End-to-end runs of chalg.main() with captured stdout / stderr."""

import json

import pytest

from chalg import build_parser, main, suggest_command
from router import EXIT_FAILS, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


# ─────────────────────────────────────────────────────────────────
# VERIFY
# ─────────────────────────────────────────────────────────────────
def test_verify_exact_holds(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--exact", "s2(ab) - s2(a)s2(b)")
    assert code == EXIT_OK
    assert out.startswith("holds-exact")


def test_verify_random_fails_with_witness(capsys):
    code, payload = run_json(capsys, "verify", "--n", "2", "--random", "--seed", "7",
                             "s1(ab) - s1(a)s1(b)")
    assert code == EXIT_FAILS
    assert payload["status"] == "fails"
    assert payload["seed"] == 7
    assert set(payload["witness"]) == {"a", "b"}
    assert payload["value"] != 0


def test_verify_text_report_lists_witness(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--random", "s1(ab) - s1(a)s1(b)")
    assert code == EXIT_FAILS
    assert "witness:" in out
    assert "  a = " in out


def test_verify_cayley_hamilton_polynomial(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "ch2(a + ab)")
    assert code == EXIT_OK


def test_verify_auto_falls_back_to_random(capsys):
    code, payload = run_json(capsys, "verify", "--n", "3", "--trials", "5", "ch3(a)")
    assert code == EXIT_OK
    assert payload["status"] == "holds-randomized"
    assert "caveat" in payload


def test_verify_exact_failure_has_residual(capsys):
    code, payload = run_json(capsys, "verify", "--n", "2", "--exact", "s2(a)")
    assert code == EXIT_FAILS
    assert payload["mode"] == "exact"
    assert "residual" in payload


@pytest.mark.parametrize("argv", [
    ("--json", "verify", "--n", "2", "--random", "--seed", "7", "s1(ab) - s1(a)s1(b)"),
    ("verify", "--json", "--n", "2", "--random", "--seed", "7", "s1(ab) - s1(a)s1(b)"),
    ("verify", "--n", "2", "--random", "--seed", "7", "s1(ab) - s1(a)s1(b)", "--json"),
])
def test_json_flag_position_does_not_matter(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_FAILS
    assert json.loads(out)["witness"]


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--n", "3", "--random", "--seed", "5", "s2(ab) - s2(a)s2(b)")
    first = run(capsys, "--json", *argv)
    second = run(capsys, "--json", *argv)
    assert first[:2] == second[:2]


def test_exact_and_random_are_exclusive(capsys):
    code, _, err = run(capsys, "verify", "--n", "2", "--exact", "--random", "a")
    assert code == EXIT_USAGE
    assert "not allowed" in err


# ─────────────────────────────────────────────────────────────────
# ERRORS / EXIT CODES
# ─────────────────────────────────────────────────────────────────
def test_syntax_error_exit_code_and_caret(capsys):
    code, out, err = run(capsys, "reduce", "--n", "2", "s0(a)")
    assert code == EXIT_USAGE
    assert out == ""
    assert "syntax error" in err
    assert err.rstrip().endswith("^")


def test_syntax_error_json(capsys):
    code, payload = run_json(capsys, "reduce", "a +")
    assert code == EXIT_USAGE
    assert payload == {"error": "syntax", "message": payload["message"], "position": 3}


def test_evaluation_error_json_has_position(capsys):
    code, payload = run_json(capsys, "reduce", "--n", "2", "a + s1(s1(a)b + a)")
    assert code == EXIT_USAGE
    assert payload["error"] == "syntax"
    assert payload["position"] == 4


def test_evaluation_error_text_has_caret(capsys):
    code, _, err = run(capsys, "reduce", "--n", "2", "a + s1(s1(a)b + a)")
    assert code == EXIT_USAGE
    assert err.rstrip().splitlines()[-1] == "      ^"


def test_degree_cap_exit_code(capsys):
    code, payload = run_json(capsys, "amitsur", "--m", "9", "--slots", "a,b")
    assert code == EXIT_RESOURCE
    assert payload["error"] == "resource-cap"
    assert payload["cap"] == 8
    assert payload["env"] == "CHALG_MAX_DEGREE"


def test_slot_cap_override(capsys):
    code, _, err = run(capsys, "--max-slots", "1", "amitsur", "--m", "2", "--slots", "a,b")
    assert code == EXIT_RESOURCE
    assert "slot count" in err


def test_unknown_command_suggests(capsys):
    code, _, err = run(capsys, "verfy", "--n", "2", "a")
    assert code == EXIT_USAGE
    assert "did you mean 'verify'" in err


def test_suggest_command_ignores_noise():
    assert suggest_command("norm-chek") == "norm-check"
    assert suggest_command("zzzzzz") is None


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == EXIT_USAGE
    assert "usage: chalg" in out


# ─────────────────────────────────────────────────────────────────
# OTHER SUBCOMMANDS
# ─────────────────────────────────────────────────────────────────
def test_lyndon_words(capsys):
    code, out, _ = run(capsys, "lyndon", "--alphabet", "2", "--max-len", "4")
    assert code == EXIT_OK
    assert out.split() == ["a", "b", "ab", "aab", "abb", "aaab", "aabb", "abbb"]


def test_lyndon_counts_json(capsys):
    code, payload = run_json(capsys, "lyndon", "--alphabet", "2", "--max-len", "6", "--count")
    assert code == EXIT_OK
    assert payload["counts"] == {"1": 2, "2": 1, "3": 2, "4": 3, "5": 6, "6": 9}
    assert payload["total"] == 23


def test_reduce_renders_in_both_styles(capsys):
    code, out, _ = run(capsys, "reduce", "--n", "2", "s1(abab)")
    assert code == EXIT_OK
    assert "s1[ab]" in out and "s2[ab]" in out
    code, out, _ = run(capsys, "reduce", "--unicode", "s1(ba)")
    assert out.strip() == "σ_1(ab)"


@pytest.mark.parametrize("signed, plain", [
    ("a + -b", "a - b"),
    ("2 - -a", "2 + a"),
])
def test_reduce_accepts_signed_terms(capsys, signed, plain):
    code, out, _ = run(capsys, "reduce", "--n", "2", signed)
    assert code == EXIT_OK
    assert out == run(capsys, "reduce", "--n", "2", plain)[1]


def test_reduce_payload_reparses(capsys):
    code, payload = run_json(capsys, "reduce", "--n", "2", "s1(abab)")
    assert payload["n"] == 2
    assert "expr" in payload


def test_amitsur_component(capsys):
    code, payload = run_json(capsys, "amitsur", "--m", "4", "--n", "2",
                             "--slots", "t1:a,t2:b", "--coeff", "2,2")
    assert code == EXIT_OK
    assert payload["multi_index"] == [2, 2]
    assert payload["terms"] == 6


def test_chpoly(capsys):
    code, out, _ = run(capsys, "chpoly", "--n", "2", "a")
    assert code == EXIT_OK
    assert "aa" in out or "a^2" in out


def test_kernel_relations_are_bihomogeneous(capsys):
    code, payload = run_json(capsys, "kernel", "--n", "2", "--f", "a,b", "--g", "c")
    assert code == EXIT_OK
    assert payload["relations"]
    for rel in payload["relations"]:
        assert sum(rel["h"]) == 2
        assert sum(rel["k"]) == 2


def test_norm_check(capsys):
    code, out, _ = run(capsys, "norm-check", "--shape", "2:1,1:1", "--trials", "5")
    assert code == EXIT_OK
    assert out.rstrip().endswith("PASS")


def test_norm_check_bad_shape(capsys):
    code, _, err = run(capsys, "norm-check", "--shape", "2:0")
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_repro_example_matches_up_to_sign(capsys):
    code, payload = run_json(capsys, "repro-paper-example")
    assert code == EXIT_OK
    assert all(c["matches"] for c in payload["components"])
    assert payload["sum"]["sign"] == -1


def test_help_topics(capsys):
    code, out, _ = run(capsys, "help", "verify")
    assert code == EXIT_OK
    assert "witness" in out
    code, payload = run_json(capsys, "help", "how", "do", "i", "check")
    assert payload["topic"] == "verify"


def test_subcommand_help_uses_module_text(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["kernel", "--help"])
    assert "φ_{h,k}" in capsys.readouterr().out

import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from src.cli.app import EXIT_FAILURE, EXIT_OK, EXIT_UNCLASSIFIED, cli, run_report


def invoke(*args: str) -> tuple[int, str, str]:
    result = CliRunner().invoke(cli, list(args))
    return result.exit_code, result.stdout, result.stderr


def invoke_json(*args: str) -> tuple[int, object]:
    code, out, err = invoke("--json", *args)
    assert out, err
    return code, json.loads(out)


# ==================================================================================
# Examples
# ==================================================================================


def test_example_list() -> None:
    code, data = invoke_json("example", "--list")
    assert code == EXIT_OK
    assert "k33" in [spec["name"] for spec in data]


def test_example_parameters_as_options() -> None:
    code, data = invoke_json("example", "ex1", "--n", "8")
    assert code == EXIT_OK
    assert data["params"] == {"n": 8}
    assert data["pair"]["vertices"] == 16
    assert data["auxiliary"]["normal"] == 2**8
    assert data["saved"] is None


@pytest.mark.parametrize("args", [["ex1", "--n", "6"], ["ex1", "--n=6"], ["ex1", "--param", "n=6"]])
def test_example_verify(args: list[str]) -> None:
    code, data = invoke_json("example", *args, "--verify")
    assert code == EXIT_OK
    assert data["ok"]
    assert data["params"] == {"n": 6}


def test_verify_command() -> None:
    code, data = invoke_json("verify", "k33")
    assert code == EXIT_OK
    assert data["name"] == "k33"
    assert all(step["passed"] for step in data["trace"])


def test_example_dry_run() -> None:
    code, data = invoke_json("example", "ex2", "--dry-run")
    assert code == EXIT_OK
    assert not data["feasible"]
    assert data["params"] == {"n": 3, "q": 9}


def test_example_errors_exit_with_failure() -> None:
    code, _, err = invoke("example", "ex1", "--n", "2")
    assert code == EXIT_FAILURE
    assert "error:" in err
    code, _, err = invoke("example", "nonsense")
    assert code == EXIT_FAILURE
    code, _, err = invoke("example")
    assert code == EXIT_FAILURE
    assert "--list" in err
    code, _, _ = invoke("example", "ex1", "--n")
    assert code == EXIT_FAILURE


def test_saved_examples_load_as_pairs(tmp_path: Path) -> None:
    code, data = invoke_json("example", "hypercube", "--save", str(tmp_path))
    assert code == EXIT_OK
    saved = Path(data["saved"])
    assert saved == tmp_path / "hypercube.pair"
    assert (tmp_path / "hypercube.graph").is_file()

    code, data = invoke_json("analyze", str(saved))
    assert code == EXIT_OK
    assert data["validation"]["status"] == "valid"
    assert data["route"] == "regular_normal"


# ==================================================================================
# Analysis
# ==================================================================================


def test_analyze_catalog_pair() -> None:
    code, data = invoke_json("analyze", "k33")
    assert code == EXIT_OK
    assert data["route"] == "biquasiprimitive"
    assert data["biquasiprimitive"] is True
    assert data["pair"]["group_order"] == 72


def test_analyze_reports_invalid_pairs(tmp_path: Path) -> None:
    (tmp_path / "bad.graph").write_text("graph 4 1\n0 1\n", encoding="utf-8")
    (tmp_path / "bad.group").write_text("degree 4\n(0 1 2 3)\n", encoding="utf-8")
    (tmp_path / "bad.pair").write_text(
        "pair\ngraph bad.graph\ngroup bad.group\n", encoding="utf-8"
    )
    code, data = invoke_json("analyze", str(tmp_path / "bad.pair"))
    assert code == EXIT_FAILURE
    assert data["validation"]["ok"] is False


def test_missing_pair_is_a_usage_error() -> None:
    code, _, err = invoke("analyze", "no/such.pair")
    assert code == EXIT_FAILURE
    assert "no pair file" in err


def test_quotient_by_an_auxiliary_group() -> None:
    code, data = invoke_json("quotient", "ex1", "--normal", "normal")
    assert code == EXIT_OK
    assert data["quotient_vertices"] == 8
    assert data["valency"] == [5, 2]
    code, _, err = invoke("quotient", "ex1", "--normal", "other")
    assert code == EXIT_FAILURE
    assert "normal" in err


def test_local_action() -> None:
    code, data = invoke_json("local", "petersen")
    assert code == EXIT_OK
    assert data["induced_order"] == 6
    assert data["two_transitive"]
    code, _, _ = invoke("local", "petersen", "--vertex", "10")
    assert code == EXIT_FAILURE


def test_local_action_vertex_forms() -> None:
    code, out, _ = invoke("local", "k33", "0", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["induced_order"] == 6
    code, data = invoke_json("local", "petersen", "--vertex", "3")
    assert code == EXIT_OK
    assert data["vertex"] == 3
    code, _, err = invoke("local", "petersen", "1", "--vertex", "2")
    assert code == EXIT_FAILURE
    assert "disagree" in err


@pytest.mark.parametrize(
    "args",
    [
        ["analyze", "k33"],
        ["quotient", "ex1", "--normal", "normal"],
        ["local", "petersen"],
        ["reduce", "k33"],
        ["bounds", "eval", "(fact 4)"],
        ["bounds", "table", "--d", "3"],
        ["example", "k33"],
        ["verify", "k33"],
    ],
)
def test_json_after_the_command(args: list[str]) -> None:
    code, out, _ = invoke(*args, "--json")
    assert code == EXIT_OK
    assert json.loads(out) == invoke_json(*args)[1]


def test_quotient_json_carries_the_block_map() -> None:
    code, out, _ = invoke("quotient", "ex1", "--normal", "normal", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["block_map"]) == 16
    assert (data["d"], data["d_prime"]) == tuple(data["valency"])
    assert data["image_generators"]


def test_reduce() -> None:
    code, data = invoke_json("reduce", "hamming")
    assert code == EXIT_OK
    assert data["outcome"] == "reduced_qp"
    assert data["bound"] == "f_hat(12)"
    assert data["reduced"][0]["vertices"] == 5
    assert data["reduced"][0]["stabiliser_order"] == 12


def test_reduce_short_circuits_the_klein_four_cycle() -> None:
    code, data = invoke_json("reduce", "c4_klein")
    assert code == EXIT_OK
    assert data["route"] == "short_circuit"
    assert data["outcome"] == "bounded"


def test_reduce_exit_codes(tmp_path: Path) -> None:
    # K_{2,2,2,2} under S2 wr S4 is neither quasiprimitive nor biquasiprimitive
    edges = [(u, v) for u in range(8) for v in range(u + 1, 8) if u // 2 != v // 2]
    graph_text = f"graph 8 {len(edges)}\n" + "".join(f"{u} {v}\n" for u, v in edges)
    (tmp_path / "k2222.graph").write_text(graph_text, encoding="utf-8")
    (tmp_path / "k2222.group").write_text(
        "degree 8\n(0 1)\n(0 2)(1 3)\n(0 2 4 6)(1 3 5 7)\n", encoding="utf-8"
    )
    (tmp_path / "k2222.pair").write_text(
        "pair\ngraph k2222.graph\ngroup k2222.group\n", encoding="utf-8"
    )
    code, data = invoke_json("reduce", str(tmp_path / "k2222.pair"))
    assert code == EXIT_UNCLASSIFIED
    assert data["outcome"] == "unclassified"


# ==================================================================================
# Bounds
# ==================================================================================


def test_bounds_eval() -> None:
    code, data = invoke_json("bounds", "eval", "(fact (mul d (fact d)))", "--d", "3")
    assert code == EXIT_OK
    assert data["exact"] == "6402373705728000"
    code, data = invoke_json("bounds", "eval", "(pow x 2)", "--var", "x=12")
    assert data["exact"] == "144"
    code, data = invoke_json("bounds", "eval", "--fhat", "1", "--d", "2")
    assert data["exact"] == "2"


def test_bounds_eval_from_a_file(tmp_path: Path) -> None:
    path = tmp_path / "cross.bound"
    path.write_text("(mul (fact d) (fact (sub d 1)))\n", encoding="utf-8")
    code, data = invoke_json("bounds", "eval", "--file", str(path), "--d", "4")
    assert code == EXIT_OK
    assert data["exact"] == "144"


@pytest.mark.parametrize(
    "args",
    [
        ["bounds", "eval"],
        ["bounds", "eval", "--fhat", "1"],
        ["bounds", "eval", "--fhat", "nonsense", "--d", "2"],
        ["bounds", "eval", "(fact", "--d", "2"],
        ["bounds", "eval", "(pow x 2)", "--var", "x=-1"],
        ["bounds", "eval", "(fact 3)", "--fhat", "1", "--d", "2"],
        ["bounds", "eval", "--f3", "d=2", "f1=2", "f2=1", "--d", "2"],
        ["bounds", "eval", "--f3", "d=2", "f1=2", "g=1"],
        ["bounds", "eval", "--f3", "d=0", "f1=2", "f2=1"],
        ["bounds", "eval", "--f3", "d=2", "f1=2", "f2=nonsense"],
        ["bounds", "eval", "--f3", "d=2", "f1=2", "f2=1", "--fhat", "1"],
    ],
)
def test_bounds_eval_errors(args: list[str]) -> None:
    code, _, err = invoke(*args)
    assert code == EXIT_FAILURE
    assert err


@pytest.mark.parametrize("value, expected", [(6, EXIT_OK), (7, EXIT_FAILURE)])
def test_bounds_cmp(tmp_path: Path, value: int, expected: int) -> None:
    path = tmp_path / "factorial.bound"
    path.write_text("(fact d)\n", encoding="utf-8")
    code, data = invoke_json("bounds", "cmp", str(path), str(value), "--d", "3")
    assert code == expected
    assert data["value"] == value


def test_bounds_cmp_accepts_inline_text() -> None:
    code, data = invoke_json("bounds", "cmp", "(fact (fact 5))", "10")
    assert code == EXIT_OK
    assert data["verdict"] == "within"


def test_bounds_eval_f3() -> None:
    code, data = invoke_json("bounds", "eval", "--f3", "d=2", "f1=2", "f2=1")
    assert code == EXIT_OK
    assert data["exact"] == str(2 * math.factorial(8))
    code, data = invoke_json("bounds", "eval", "--f3", "f2=1", "f1=factorial", "d=2")
    assert data["exact"] == str(2 * math.factorial(8))


def test_bounds_table() -> None:
    code, data = invoke_json("bounds", "table", "--d", "3")
    assert code == EXIT_OK
    rows = {row["name"]: row for row in data["bounds"]}
    assert rows["factorial"]["exact"] == "6"
    assert rows["biqp_cross"]["exact"] == "12"


# ==================================================================================
# Rich output
# ==================================================================================


@pytest.mark.parametrize(
    "args",
    [
        ["example", "--list"],
        ["example", "k33"],
        ["analyze", "petersen"],
        ["reduce", "k33"],
        ["bounds", "table", "--d", "3"],
        ["bounds", "eval", "(fact (fact 5))"],
    ],
)
def test_rich_reports(args: list[str]) -> None:
    code, out, _ = invoke(*args)
    assert code == EXIT_OK
    assert out.strip()


def test_run_report_returns_the_exit_code() -> None:
    assert run_report(["--json", "bounds", "cmp", "(fact 3)", "7"]) == EXIT_FAILURE
    assert run_report(["bounds", "cmp"]) == EXIT_FAILURE

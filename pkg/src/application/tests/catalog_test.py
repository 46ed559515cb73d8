import pytest

from src.application.analysis_types import AnalysisConfig
from src.application.catalog import (
    CatalogError,
    InfeasibleExampleError,
    UnknownExampleError,
    build_example,
    dry_run,
    example_names,
    example_spec,
    resolve_params,
    sl_order,
    verify_example,
)

BUILDABLE = [
    "ex1",
    "hamming",
    "hypercube",
    "k33",
    "petersen",
    "c4_klein",
    "desargues",
    "rook_double",
]


def test_catalog_lists_every_example() -> None:
    names = example_names()
    assert set(BUILDABLE) | {"ex4_lambda", "ex2", "ex3"} == set(names)
    assert example_spec("ex2").dry_run_only
    assert not example_spec("ex1").dry_run_only


@pytest.mark.parametrize("name", BUILDABLE)
def test_examples_verify(name: str) -> None:
    verification = verify_example(name)
    assert verification.ok, verification.failures()
    checked = {step.name for step in verification.steps}
    assert {e.name for e in example_spec(name).expected} <= checked


@pytest.mark.parametrize(
    "name, params",
    [
        ("ex1", {"n": 5}),
        ("hypercube", {"n": 4}),
        ("petersen", {"group": "alt"}),
    ],
)
def test_examples_verify_with_parameters(name: str, params: dict) -> None:
    verification = verify_example(name, params)
    assert verification.ok, verification.failures()
    assert verification.params == {**example_spec(name).parameters, **params}


@pytest.mark.slow
def test_large_coset_example_verifies() -> None:
    verification = verify_example("ex4_lambda")
    assert verification.ok, verification.failures()


def test_build_reports_construction_steps() -> None:
    seen = []
    built = build_example("k33", on_step=seen.append)
    assert built.pair.group_order() == 72
    assert [s.name for s in built.steps] == ["pair_certified", "group_order"]
    assert seen == list(built.steps)


def test_ex1_exposes_its_normal_subgroup() -> None:
    built = build_example("ex1", {"n": 6})
    assert built.params == {"n": 6}
    assert built.pair.vertex_count == 12
    assert built.auxiliary["normal"].order() == 2**6


# ==================================================================================
# Parameters and dry runs
# ==================================================================================


def test_parameters_are_coerced_and_checked() -> None:
    assert resolve_params("ex1", {"n": "10"}) == {"n": 10}
    assert resolve_params("hamming") == {"m": 5, "k": 2}
    with pytest.raises(CatalogError):
        resolve_params("ex1", {"m": 3})
    with pytest.raises(CatalogError):
        resolve_params("ex1", {"n": "eight"})
    with pytest.raises(UnknownExampleError):
        resolve_params("nonsense")


@pytest.mark.parametrize(
    "name, params",
    [
        ("ex1", {"n": 2}),
        ("hamming", {"m": 4}),
        ("hypercube", {"n": 1}),
        ("petersen", {"group": "cyclic"}),
        ("ex2", {"q": 6}),
        ("ex2", {"n": 2}),
        ("ex2", {"n": 3, "q": 2}),
        ("ex2", {"n": 3, "q": 4}),
    ],
)
def test_out_of_range_parameters(name: str, params: dict) -> None:
    with pytest.raises(InfeasibleExampleError):
        resolve_params(name, params)


def test_sl_order() -> None:
    assert sl_order(2, 3) == 24
    assert sl_order(3, 2) == 168
    assert sl_order(2, 5) == 120


def test_linear_examples_are_dry_run_only() -> None:
    report = dry_run("ex2")
    assert not report.feasible
    assert report.params == {"n": 3, "q": 9}
    assert report.orders["T"] == sl_order(3, 81)
    assert report.orders["delta"] == 729 * 82 * 730
    assert report.orders["vertices"] == (729 * 82 * 730) ** 2
    assert "point cap" in report.reason
    with pytest.raises(InfeasibleExampleError):
        build_example("ex2")

    report = dry_run("ex3")
    assert report.orders["delta"] == 466560
    assert report.orders["K"] == 364


def test_dry_run_applies_the_caps() -> None:
    assert dry_run("hamming").feasible
    report = dry_run("hamming", {"m": 6}, AnalysisConfig(max_points=30))
    assert not report.feasible
    assert report.orders["vertices"] == 36
    report = dry_run("hamming", config=AnalysisConfig(max_order=1000))
    assert not report.feasible
    assert "order cap" in report.reason
    with pytest.raises(InfeasibleExampleError):
        build_example("hamming", config=AnalysisConfig(max_points=10))

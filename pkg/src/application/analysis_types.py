from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

from sympy.combinatorics import Permutation

from src.engine.bound_expr import (
    DEFAULT_EXACT_BITS,
    DEFAULT_MAX_PRECISION,
    BoundComparison,
    BoundExpr,
)
from src.engine.cosets import DEFAULT_MAX_POINTS
from src.engine.graphs import Graph
from src.engine.groups import DEFAULT_ELEMENT_BUDGET, PermGroup
from src.engine.normal_structure import SocleDecomposition

if TYPE_CHECKING:
    from .pairs import VTPair


QpCaseKind = Literal[
    "regular_normal",
    "socle_cofactor_regular",
    "almost_simple",
    "product_action",
    "unclassified",
]
ReductionOutcome = Literal["bounded", "reduced_qp", "reduced_biqp", "unclassified"]
BiqpRoute = Literal["short_circuit", "cross_transitive", "delta_qp", "delta_non_qp"]
LocalProperty = Literal["two_transitive", "primitive", "quasiprimitive"]
Maximality = Literal["verified", "unverified"]


class AnalysisError(Exception):
    pass


class ReductionError(AnalysisError):
    pass


class NotQuasiprimitiveError(AnalysisError):
    pass


class NotBiquasiprimitiveError(AnalysisError):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    """
    Resource caps shared by every pipeline.

    Attributes:
        max_points (int):
            Largest permutation degree or coset count that may be built.

        max_order (int):
            Largest group order constructed from catalog data.

        element_budget (int):
            Cap on the elements enumerated for class representatives and
            element scans.

        seed (int | None):
            Seed for sympy's randomized algorithms. Output never depends on it.

        max_precision (int):
            Largest bit precision used when refining bound comparisons.

        exact_threshold_bits (int):
            Bound expressions below 2^this are evaluated exactly.
    """

    max_points: int = DEFAULT_MAX_POINTS
    max_order: int = 10**9
    element_budget: int = DEFAULT_ELEMENT_BUDGET
    seed: int | None = None
    max_precision: int = DEFAULT_MAX_PRECISION
    exact_threshold_bits: int = DEFAULT_EXACT_BITS


# ==================================================================================
# Traces
# ==================================================================================


@dataclass(frozen=True)
class TraceStep:
    """
    One verified assertion of a pipeline.

    Attributes:
        name (str):
            Short machine-friendly name, e.g. "socle_simple".

        passed (bool):
            Whether the assertion held.

        detail (str):
            Human-readable values behind the verdict.
    """

    name: str
    passed: bool
    detail: str = ""


StepCallback = Callable[[TraceStep], None]


@dataclass
class TraceRecorder:
    """
    Accumulates trace steps in order and forwards each to an optional callback.
    """

    on_step: StepCallback | None = None
    steps: list[TraceStep] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        step = TraceStep(name, bool(passed), detail)
        self.steps.append(step)
        if self.on_step is not None:
            self.on_step(step)
        return step.passed

    def extend(self, steps: tuple[TraceStep, ...]) -> None:
        for step in steps:
            self.check(step.name, step.passed, step.detail)

    @property
    def all_passed(self) -> bool:
        return all(step.passed for step in self.steps)

    def failures(self) -> list[TraceStep]:
        return [step for step in self.steps if not step.passed]

    def freeze(self) -> tuple[TraceStep, ...]:
        return tuple(self.steps)


# ==================================================================================
# Bound certificates
# ==================================================================================


@dataclass(frozen=True)
class BoundCertificate:
    """
    A concrete value compared against a symbolic bound.

    Attributes:
        label (str):
            What was compared, e.g. "|G_α| <= d!".

        bound (BoundExpr):
            The bound in force.

        value (int):
            The exact concrete value.

        comparison (BoundComparison):
            Verdict of the rigorous comparison.
    """

    label: str
    bound: BoundExpr
    value: int
    comparison: BoundComparison

    @property
    def holds(self) -> bool:
        return self.comparison.verdict == "within"

    @property
    def undecided(self) -> bool:
        return self.comparison.verdict == "undecided"


@dataclass(frozen=True)
class TwoBoundCertificate:
    """(f1, f2)-boundedness: orbit count against f1(d), |N_α| against f2(d)."""

    orbit_count: BoundCertificate
    stabiliser: BoundCertificate

    @property
    def holds(self) -> bool:
        return self.orbit_count.holds and self.stabiliser.holds


# ==================================================================================
# Structure records
# ==================================================================================


@dataclass(frozen=True, eq=False)
class QpCase:
    """
    Case of a quasiprimitive pair on which the reduction branches.

    Attributes:
        kind (QpCaseKind):
            - "regular_normal": a normal subgroup is regular on vertices
            - "socle_cofactor_regular": a product of some socle factors is regular
            - "almost_simple": the socle is simple
            - "product_action": socle T^l with l >= 2 and equal proper projections
            - "unclassified": none of the above could be established

        witness (PermGroup | None):
            The regular subgroup for the first two kinds.

        socle (SocleDecomposition | None):
            Socle data when it was computed.

        projection_orders (tuple[int, ...]):
            For the product action case, |N_α| divided by the stabiliser in
            each co-factor, one entry per factor.

        reason (str):
            Why the pair is unclassified, or a short note.
    """

    kind: QpCaseKind
    witness: PermGroup | None = None
    socle: SocleDecomposition | None = None
    projection_orders: tuple[int, ...] = ()
    reason: str = ""


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """
    Outcome of a reduction pipeline.

    Attributes:
        outcome (ReductionOutcome):
            - "bounded": `certificate` proves |G_α| against `bound`
            - "reduced_qp": `reduced` holds one pair with a simple transitive group
            - "reduced_biqp": `reduced` holds two such pairs
            - "unclassified": the routing could not be completed; see `reason`

        route (str):
            Name of the branch taken.

        trace (tuple[TraceStep, ...]):
            Every assertion checked on the way, in order.

        bound (BoundExpr | None):
            The stabiliser bound the outcome certifies against.

        bound_name (str):
            Display name of the bound function.

        certificate (BoundCertificate | None):
            The stabiliser comparison for bounded outcomes.

        reduced (tuple[VTPair, ...]):
            Reduced pairs.

        reason (str):
            Failure reason for unclassified outcomes.

        notes (tuple[str, ...]):
            Extra remarks, e.g. disagreement between candidate pairings.
    """

    outcome: ReductionOutcome
    route: str
    trace: tuple[TraceStep, ...]
    bound: BoundExpr | None = None
    bound_name: str = ""
    certificate: BoundCertificate | None = None
    reduced: tuple[VTPair, ...] = ()
    reason: str = ""
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.outcome != "unclassified"

    @property
    def trace_passed(self) -> bool:
        return all(step.passed for step in self.trace)


@dataclass(frozen=True, eq=False)
class BipartiteSplit:
    """
    The halves of a biquasiprimitive pair and the distance-2 graph on one half.

    Attributes:
        halves (tuple[tuple[int, ...], tuple[int, ...]]):
            The two orbits of an intransitive normal subgroup; the first
            contains vertex 0.

        g_plus (PermGroup):
            Index-2 subgroup fixing each half.

        h_group (PermGroup):
            Action of `g_plus` on the first half, relabelled 0..|half|-1.

        delta_graph (Graph | None):
            Graph on the first half joining vertices at distance at most 2.

        delta_pair (VTPair | None):
            `(delta_graph, h_group)` certified with valency bound `delta_valency`,
            or `None` when certification failed (see `delta_diagnosis`).

        delta_valency (int):
            d(d-1) when every edge crosses the halves, d^2 otherwise.

        cross_edges_only (bool):
            Whether every edge joins the two halves.

        short_circuit (bool):
            The four-vertex Klein-group case, which needs no further analysis.

        delta_diagnosis (str):
            Why `delta_pair` is missing.
    """

    halves: tuple[tuple[int, ...], tuple[int, ...]]
    g_plus: PermGroup
    h_group: PermGroup
    delta_graph: Graph | None
    delta_pair: VTPair | None
    delta_valency: int
    cross_edges_only: bool
    short_circuit: bool = False
    delta_diagnosis: str = ""


@dataclass(frozen=True)
class Theorem1Witness:
    """
    Objects built by the connected-transversal construction.

    Attributes:
        representatives (tuple[int, ...]):
            One vertex per N-orbit, inducing a connected subgraph.

        t (int):
            Number of N-orbits.

        d (int):
            Valency.

        f1 (int), f2 (int):
            The values f1(d) and f2(d) in force.

        connection_set (tuple[Permutation, ...]):
            Elements of N carrying some representative into the union of the
            representatives' neighbourhoods.

        h_order (int):
            Order of the pointwise stabiliser H of the representatives.

        bound (BoundExpr):
            d^(f1-1) (d f1^2 f2)!.

        stabiliser_orders (tuple[int, ...]):
            |G_β| for each representative β.

        steps (tuple[TraceStep, ...]):
            Each inequality of the construction with its verdict.

        cayley (Graph | None):
            Cay(N, S minus the identity) when it fit within the point cap.
    """

    representatives: tuple[int, ...]
    t: int
    d: int
    f1: int
    f2: int
    connection_set: tuple[Permutation, ...]
    h_order: int
    bound: BoundExpr
    stabiliser_orders: tuple[int, ...]
    steps: tuple[TraceStep, ...]
    cayley: Graph | None = None

    @property
    def s_size(self) -> int:
        return len(self.connection_set)

    @property
    def ok(self) -> bool:
        return all(step.passed for step in self.steps)


@dataclass(frozen=True)
class LemmaAuxReport:
    """
    One instance of the bound on the number of factors of T^l generated
    over R^l.

    Attributes:
        l (int):
            Number of coordinates.

        vector_count (int):
            Number of vectors m^(i).

        entry_cap (int):
            Cap on the distinct entries of each vector.

        hypothesis (bool):
            Whether T^l = <n^(1), ..., n^(d)> R^l, decided exactly.

        bound (BoundExpr):
            entry_cap^vector_count |R|^(2 vector_count).

        comparison (BoundComparison):
            l against `bound`.

        implication_holds (bool):
            hypothesis implies l <= bound.
    """

    l: int
    vector_count: int
    entry_cap: int
    hypothesis: bool
    bound: BoundExpr
    comparison: BoundComparison
    implication_holds: bool


@dataclass(frozen=True)
class NrOrbitsReport:
    """
    Orbit counts of block stabilisers on quotient neighbourhoods.

    Attributes:
        orbit_counts (tuple[int, ...]):
            For each block σ, the number of N_σ-orbits on Γ_Σ(σ).

        d (int):
            Valency of the pair.

        hypotheses (tuple[TraceStep, ...]):
            Normality of N and transitivity of each N_σ on σ.

        holds (bool):
            Every hypothesis passed and every count is at most d.
    """

    orbit_counts: tuple[int, ...]
    d: int
    hypotheses: tuple[TraceStep, ...]
    holds: bool


@dataclass(frozen=True)
class ProjectionReport:
    """
    The projections of G_i ∩ G_α and G_i ∩ G_σ onto factor i.

    Attributes:
        index (int):
            The factor i, 0-based.

        point_projection_order (int):
            Order of the image of G_i ∩ G_α.

        block_projection_order (int):
            Order of the image of G_i ∩ G_σ.

        target_order (int):
            Order of the stabiliser H_δ in the induced component.

        steps (tuple[TraceStep, ...]):
            Containment and order checks.
    """

    index: int
    point_projection_order: int
    block_projection_order: int
    target_order: int
    steps: tuple[TraceStep, ...]

    @property
    def holds(self) -> bool:
        return all(step.passed for step in self.steps)


@dataclass(frozen=True, eq=False)
class LocalCheckReport:
    """
    Per-instance check of the locally-P quotient statement.

    Attributes:
        property (LocalProperty):
            The local property P.

        hypotheses (tuple[TraceStep, ...]):
            Locally-P, normality, 1-closure, at least three orbits, and
            maximality against the supplied overgroups.

        assertions (tuple[TraceStep, ...]):
            The quotient is locally-P, the image is quasiprimitive or
            biquasiprimitive, and N_α = 1.

        maximality (Maximality):
            "verified" when overgroups were supplied and all checked.

        diagnosis (tuple[str, ...]):
            One line per failed hypothesis or assertion.
    """

    property: LocalProperty
    hypotheses: tuple[TraceStep, ...]
    assertions: tuple[TraceStep, ...]
    maximality: Maximality
    diagnosis: tuple[str, ...]

    @property
    def hypotheses_met(self) -> bool:
        return all(step.passed for step in self.hypotheses)

    @property
    def holds(self) -> bool:
        return all(step.passed for step in self.assertions)

"""Population models with marriage and reproduction maps.

A genealogy model partitions a finite ground set into males and females,
marries some of them through a bijection m, and assigns mothers through a
partial reproduction map ρ.  The children of the couple (x, m(x)) are the
ρ-preimage of the wife, so distinct couples always have disjoint children.

Iterating "children of the married males of the previous generation" turns
a genealogy into a staged evolution: stage k holds generations k and k+1.
On finite grounds the iteration eventually dies out, and the last nonempty
stage pair necessarily fails the churn condition (nothing new arrives); the
checker surfaces that honestly instead of hiding it.

ρ is allowed to be partial: elements outside its domain simply are nobody's
child, which is what truncated desk models need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    ElementId,
    Evolution,
    EvolutionError,
    Ground,
    element_key,
    format_elements,
    sort_elements,
)


class FoundersInvalid(EvolutionError):
    """Seed generations must be nonempty subsets of the founder sets."""


@dataclass(frozen=True)
class GenealogyModel:
    ground: tuple
    males: frozenset
    females: frozenset
    married_males: frozenset
    marriage: Mapping[ElementId, ElementId]
    reproduction: Mapping[ElementId, ElementId]
    label: str = "genealogy"

    @property
    def married_females(self) -> frozenset:
        return frozenset(self.marriage[x] for x in self.married_males)


@dataclass(frozen=True)
class Couple:
    male: ElementId
    female: ElementId


def genealogy_model(
    males: Iterable[ElementId],
    females: Iterable[ElementId],
    marriage: Mapping[ElementId, ElementId],
    reproduction: Mapping[ElementId, ElementId],
    label: str = "genealogy",
) -> GenealogyModel:
    """Validate and freeze a genealogy model.

    Checks the sex partition, that the marriage map is a bijection from a
    subset of the males onto a subset of the females, and that every
    declared mother is female.
    """
    males_set = frozenset(males)
    females_set = frozenset(females)
    overlap = males_set & females_set
    if overlap:
        raise ValueError(f"males and females overlap: {format_elements(overlap)}")
    ground = tuple(sort_elements(males_set | females_set))

    married = frozenset(marriage)
    if not married <= males_set:
        bad = sort_elements(married - males_set)
        raise ValueError(f"married males outside the male set: {bad[:8]}")
    wives = list(marriage.values())
    if len(set(wives)) != len(wives):
        raise ValueError("marriage map is not injective")
    if not set(wives) <= females_set:
        bad = sort_elements(set(wives) - females_set)
        raise ValueError(f"wives outside the female set: {bad[:8]}")

    for child, mother in reproduction.items():
        if child not in males_set and child not in females_set:
            raise ValueError(f"reproduction child {child!r} outside the ground")
        if mother not in females_set:
            raise ValueError(f"mother {mother!r} is not female")

    return GenealogyModel(
        ground=ground,
        males=males_set,
        females=females_set,
        married_males=married,
        marriage=dict(marriage),
        reproduction=dict(reproduction),
        label=label,
    )


def couples(model: GenealogyModel) -> list[Couple]:
    return [
        Couple(x, model.marriage[x]) for x in sort_elements(model.married_males)
    ]


def children_of(model: GenealogyModel, couple: Couple) -> frozenset:
    """ρ-preimage of the wife; the empty set when nobody names her as mother."""
    if couple.male not in model.married_males:
        raise ValueError(f"{couple.male!r} is not a married male")
    if model.marriage[couple.male] != couple.female:
        raise ValueError(
            f"{couple!r} is not a couple of the model: "
            f"m({couple.male!r}) = {model.marriage[couple.male]!r}"
        )
    return frozenset(
        child
        for child, mother in model.reproduction.items()
        if mother == couple.female
    )


def _sieve(bound: int) -> list[bool]:
    flags = [True] * (bound + 1)
    flags[0] = flags[1] = False
    i = 2
    while i * i <= bound:
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
        i += 1
    return flags


def prime_counting(bound: int) -> list[int]:
    """π(y) = number of primes ≤ y, for 0 ≤ y ≤ bound."""
    flags = _sieve(max(bound, 1))
    counts = [0] * (bound + 1)
    running = 0
    for y in range(bound + 1):
        if y <= bound and flags[y]:
            running += 1
        counts[y] = running
    return counts


def prime_model(bound: int) -> GenealogyModel:
    """The stock arithmetic genealogy on {1..bound}.

    Odd numbers are male, even numbers female, m(x) = x + 1, and
    ρ(y) = 2·π(y) with π the prime-counting function, defined wherever the
    value lands among the females.
    """
    if bound < 4:
        raise ValueError("bound must be at least 4")
    males = [x for x in range(1, bound + 1) if x % 2 == 1]
    females = [x for x in range(1, bound + 1) if x % 2 == 0]
    marriage = {x: x + 1 for x in males if x + 1 <= bound}
    pi = prime_counting(bound)
    reproduction = {}
    for y in range(1, bound + 1):
        mother = 2 * pi[y]
        if 2 <= mother <= bound:
            reproduction[y] = mother
    return genealogy_model(
        males, females, marriage, reproduction, label=f"prime-genealogy({bound})"
    )


def founders(model: GenealogyModel) -> tuple[frozenset, frozenset]:
    """Elements that are no couple's child, split by sex."""
    wives = model.married_females
    children = frozenset(
        child for child, mother in model.reproduction.items() if mother in wives
    )
    return (model.males - children, model.females - children)


@dataclass(frozen=True)
class GenerationTrace:
    """Generations and stages produced by iterating reproduction."""

    generations: tuple[frozenset, ...]
    male_generations: tuple[frozenset, ...]
    female_generations: tuple[frozenset, ...]
    stages: tuple[frozenset, ...]
    stage_zero: frozenset
    placement_violations: tuple[str, ...]

    @property
    def horizon(self) -> int:
        return len(self.stages)

    @property
    def placement_ok(self) -> bool:
        return not self.placement_violations

    def generation(self, k: int) -> frozenset:
        return self.generations[k - 1]

    def stage(self, k: int) -> frozenset:
        return self.stages[k - 1]


def generational_evolution(
    model: GenealogyModel,
    founders_m: Iterable[ElementId],
    founders_f: Iterable[ElementId],
    horizon: int,
) -> tuple[GenerationTrace, Evolution]:
    """Iterate children-of-married-males from seed founder generations.

    Stage k is generations k and k+1 together, so children enter the stage
    of their parents and remain for one more.  Stage 0 (the seed stage plus
    everyone the iteration never reaches) is reported separately and is not
    part of the checked sequence.  The placement property -- children of a
    generation-k couple belong to generation k+1 and to no earlier one --
    is verified on the produced trace.
    """
    m1 = frozenset(founders_m)
    f1 = frozenset(founders_f)
    all_m_founders, all_f_founders = founders(model)
    if not m1 or not m1 <= all_m_founders:
        raise FoundersInvalid(
            f"male seed must be a nonempty subset of the male founders "
            f"{format_elements(all_m_founders)}"
        )
    if not f1 or not f1 <= all_f_founders:
        raise FoundersInvalid(
            f"female seed must be a nonempty subset of the female founders "
            f"{format_elements(all_f_founders)}"
        )
    if horizon < 1:
        raise ValueError("horizon must be at least 1")

    male_gens: list[frozenset] = [m1]
    female_gens: list[frozenset] = [f1]
    gens: list[frozenset] = [m1 | f1]
    seen_m = set(m1)
    seen_f = set(f1)
    placement_violations: list[str] = []

    # generations 2..horizon+1 (stage k needs generation k+1)
    for k in range(1, horizon + 1):
        prev_males = male_gens[k - 1]
        next_gen: set = set()
        earlier = set().union(*gens[:k]) if gens[:k] else set()
        for x in sort_elements(prev_males & model.married_males):
            kids = children_of(model, Couple(x, model.marriage[x]))
            next_gen |= kids
            stale = kids & earlier
            if stale:
                placement_violations.append(
                    f"children {format_elements(stale)} of couple "
                    f"({x!r}, {model.marriage[x]!r}) in generation {k} "
                    f"already appeared in generations 1..{k}"
                )
        males_new = frozenset((next_gen & model.males) - seen_m)
        females_new = frozenset((next_gen & model.females) - seen_f)
        male_gens.append(males_new)
        female_gens.append(females_new)
        gens.append(males_new | females_new)
        seen_m |= males_new
        seen_f |= females_new

    stages = tuple(
        frozenset(gens[k - 1] | gens[k]) for k in range(1, horizon + 1)
    )
    reached = set().union(*gens) if gens else set()
    stage_zero = frozenset(stages[0] | (set(model.ground) - reached)) if stages else frozenset()

    trace = GenerationTrace(
        generations=tuple(gens),
        male_generations=tuple(male_gens),
        female_generations=tuple(female_gens),
        stages=stages,
        stage_zero=stage_zero,
        placement_violations=tuple(placement_violations),
    )

    # lazily extended stage generator so the Evolution is total beyond the
    # precomputed horizon (generations only shrink to empty on finite grounds)
    state = {
        "male_gens": list(male_gens),
        "gens": list(gens),
        "seen_m": set(seen_m),
        "seen_f": set(seen_f),
    }

    def extend_to(generation_count: int) -> None:
        while len(state["gens"]) < generation_count:
            prev_males = state["male_gens"][-1]
            next_gen: set = set()
            for x in sort_elements(prev_males & model.married_males):
                next_gen |= children_of(model, Couple(x, model.marriage[x]))
            males_new = frozenset((next_gen & model.males) - state["seen_m"])
            females_new = frozenset((next_gen & model.females) - state["seen_f"])
            state["male_gens"].append(males_new)
            state["gens"].append(males_new | females_new)
            state["seen_m"] |= males_new
            state["seen_f"] |= females_new

    def generate(k: int) -> frozenset:
        extend_to(k + 1)
        return frozenset(state["gens"][k - 1] | state["gens"][k])

    evolution = Evolution(
        generate,
        Ground.finite(model.ground, label=model.label),
        label=f"generations({model.label})",
    )
    return trace, evolution


@dataclass(frozen=True)
class AncestryReport:
    generation_disjoint: str
    children_disjoint: str
    acyclic: str
    witnesses: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return all(
            v == "PASS"
            for v in (self.generation_disjoint, self.children_disjoint, self.acyclic)
        )

    def lines(self) -> list[str]:
        out = [
            f"generation disjointness: {self.generation_disjoint}",
            f"children disjointness: {self.children_disjoint}",
            f"ancestry acyclicity: {self.acyclic}",
        ]
        out.extend(f"  {w}" for w in self.witnesses)
        return out


def ancestry_check(
    model: GenealogyModel,
    generations: Sequence[Iterable[ElementId]],
) -> AncestryReport:
    """Check a generation trace for disjointness and absence of cycles.

    Accepts raw generation sets so adversarial traces loaded from files can
    be examined; verifies (a) generations are pairwise disjoint, (b)
    distinct couples have disjoint children, and (c) the parent-to-child
    relation restricted to the trace has no cycles, with witness chains on
    failure.
    """
    gen_sets = [frozenset(g) for g in generations]
    witnesses: list[str] = []

    generation_disjoint = "PASS"
    seen: dict[ElementId, int] = {}
    for idx, gen in enumerate(gen_sets, start=1):
        for x in sort_elements(gen):
            if x in seen:
                generation_disjoint = "FAIL"
                witnesses.append(
                    f"element {x!r} appears in generations {seen[x]} and {idx}"
                )
            else:
                seen[x] = idx

    children_disjoint = "PASS"
    claimed: dict[ElementId, Couple] = {}
    for couple in couples(model):
        for child in sort_elements(children_of(model, couple)):
            if child in claimed:
                children_disjoint = "FAIL"
                witnesses.append(
                    f"child {child!r} claimed by couples {claimed[child]!r} "
                    f"and {couple!r}"
                )
            else:
                claimed[child] = couple

    trace_elements = frozenset().union(*gen_sets) if gen_sets else frozenset()
    edges: dict[ElementId, list[ElementId]] = {}
    for couple in couples(model):
        kids = [
            c for c in sort_elements(children_of(model, couple)) if c in trace_elements
        ]
        if not kids:
            continue
        for parent in (couple.male, couple.female):
            if parent in trace_elements:
                edges.setdefault(parent, []).extend(kids)

    acyclic = "PASS"
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[ElementId, int] = {x: WHITE for x in trace_elements}
    for root in sort_elements(trace_elements):
        if color[root] != WHITE:
            continue
        stack: list[tuple[ElementId, int]] = [(root, 0)]
        path: list[ElementId] = []
        while stack:
            node, child_idx = stack.pop()
            if child_idx == 0:
                color[node] = GRAY
                path.append(node)
            kids = edges.get(node, [])
            if child_idx < len(kids):
                stack.append((node, child_idx + 1))
                kid = kids[child_idx]
                if color.get(kid, WHITE) == GRAY:
                    acyclic = "FAIL"
                    cycle = path[path.index(kid):] + [kid]
                    witnesses.append(
                        "descent cycle: " + " -> ".join(repr(x) for x in cycle)
                    )
                elif color.get(kid, WHITE) == WHITE:
                    stack.append((kid, 0))
            else:
                color[node] = BLACK
                path.pop()
    return AncestryReport(
        generation_disjoint=generation_disjoint,
        children_disjoint=children_disjoint,
        acyclic=acyclic,
        witnesses=tuple(witnesses),
    )


def toy_three_generation_model() -> tuple[GenealogyModel, frozenset, frozenset]:
    """Six-element chain: one founder couple, two descendant couples."""
    model = genealogy_model(
        males=["m1", "m2", "m3"],
        females=["f1", "f2", "f3"],
        marriage={"m1": "f1", "m2": "f2", "m3": "f3"},
        reproduction={"m2": "f1", "f2": "f1", "m3": "f2", "f3": "f2"},
        label="toy-three-generations",
    )
    return model, frozenset(["m1"]), frozenset(["f1"])

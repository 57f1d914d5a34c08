"""Restriction trees, leaf classification and block decomposition checks.

``build_regularity_tree`` repeatedly restricts the most influential
coordinates of every leaf whose polynomial is neither regular nor almost
surely of one sign, until the probability mass of such "bad" leaves drops
below the configured target or a budget runs out.  The remaining
operations verify the structural facts the tree and the block split rest
on: the tree-sensitivity inequality, the exact block decomposition of
average sensitivity, and the per-block ratio statistics.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import CapExceededError, InputError
from .hypercube import SignFunction, average_sensitivity_exact, evaluate_on_hypercube, truth_table
from .polynomial import MultilinearPolynomial, sign_pm1
from .randomized import (
    EstimatorResult,
    Rng,
    _clamped_ratio_values,
    _pm1_batch,
    _run_mc,
    _support_partials,
    estimate_alpha,
    exact_alpha,
)

BLOCK_IDENTITY_CAP = 20
SMALL_ALPHA_CAP = 12

_FORMULA_DOMAIN_CAP = 0.2499999999


@dataclass(frozen=True)
class RegularityConfig:
    """Targets and budgets for the restriction tree.

    ``tau`` is the regularity target, ``eps`` the sign-constancy tolerance,
    ``delta`` the acceptable probability mass of unresolved leaves and
    ``big_m`` the exponent constant of the influence-threshold formula.
    ``max_depth`` / ``max_rounds`` / ``max_leaves`` are hard budgets
    (``None`` picks defaults: the dimension, and 8 * 2^degree * ceil(ln(1/delta))
    rounds).  Leaves whose support fits ``exact_cap`` variables get their
    sign label verified by enumeration.
    """

    tau: float
    eps: float
    delta: float
    big_m: float = 1.0
    max_depth: int | None = None
    max_rounds: int | None = None
    exact_cap: int = 12
    expand_budget: int = 12
    max_leaves: int = 1 << 16

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise InputError(f"tau must be positive, got {self.tau}")
        if not 0 < self.eps < 0.25:
            raise InputError(f"eps must lie in (0, 1/4), got {self.eps}")
        if not 0 < self.delta < 0.25:
            raise InputError(f"delta must lie in (0, 1/4), got {self.delta}")
        if not self.big_m > 0:
            raise InputError(f"big_m must be positive, got {self.big_m}")
        for name in ("max_depth", "max_rounds"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InputError(f"{name} must be non-negative, got {value}")
        if self.exact_cap < 0 or self.expand_budget < 1 or self.max_leaves < 1:
            raise InputError("caps must be positive")

    def rounds_budget(self, degree: int) -> int:
        if self.max_rounds is not None:
            return self.max_rounds
        return 8 * (1 << max(1, degree)) * max(1, math.ceil(math.log(1.0 / self.delta)))


class LeafKind(Enum):
    REGULAR = "regular"
    NEAR_CONSTANT = "near_constant"
    BAD = "bad"


@dataclass(frozen=True)
class LeafClass:
    kind: LeafKind
    sign: int | None = None
    exact_verified: bool = False

    def __post_init__(self) -> None:
        if self.kind is LeafKind.NEAR_CONSTANT:
            if self.sign not in (-1, 1):
                raise InputError("near-constant leaves carry a +-1 sign label")
        elif self.sign is not None:
            raise InputError(f"{self.kind.value} leaves carry no sign label")


@dataclass(frozen=True)
class Leaf:
    polynomial: MultilinearPolynomial
    label: LeafClass
    path: tuple[tuple[int, int], ...]

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def probability(self) -> float:
        return 2.0 ** (-self.depth)


@dataclass(frozen=True)
class Node:
    var: int
    minus: "TreeNode"
    plus: "TreeNode"


TreeNode = Union[Node, Leaf]


def _collect_leaves(node: TreeNode, out: list[Leaf]) -> None:
    if isinstance(node, Leaf):
        out.append(node)
    else:
        _collect_leaves(node.minus, out)
        _collect_leaves(node.plus, out)


@dataclass(frozen=True)
class DecisionTree:
    """Restriction tree with classified leaves.

    Every root-to-leaf path fixes each coordinate at most once, and each
    leaf polynomial equals the root polynomial with the path applied.
    ``success`` reports truthfully whether the bad-leaf mass target was met
    before the budgets ran out.
    """

    root: TreeNode
    n: int
    success: bool
    diagnostics: dict
    leaves: tuple[Leaf, ...] = field(default=())

    def __post_init__(self) -> None:
        acc: list[Leaf] = []
        _collect_leaves(self.root, acc)
        object.__setattr__(self, "leaves", tuple(acc))

    @property
    def depth(self) -> int:
        return max(leaf.depth for leaf in self.leaves)

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    def bad_mass(self) -> float:
        return sum(leaf.probability for leaf in self.leaves if leaf.label.kind is LeafKind.BAD)

    def leaf_counts(self) -> dict[str, int]:
        counts = Counter(leaf.label.kind.value for leaf in self.leaves)
        return {kind.value: counts.get(kind.value, 0) for kind in LeafKind}

    def to_json_dict(self, include_polynomials: bool = True) -> dict:
        def encode(node: TreeNode):
            if isinstance(node, Leaf):
                out = {
                    "class": node.label.kind.value,
                    "depth": node.depth,
                    "path": [[i, v] for i, v in node.path],
                }
                if node.label.sign is not None:
                    out["sign"] = node.label.sign
                if include_polynomials:
                    out["polynomial"] = node.polynomial.to_json_dict()
                return out
            return {"var": node.var, "children": {"-1": encode(node.minus), "+1": encode(node.plus)}}

        return {
            "n": self.n,
            "success": self.success,
            "diagnostics": self.diagnostics,
            "tree": encode(self.root),
        }


# ---------------------------------------------------------------------------
# classification


def influential_set(p: MultilinearPolynomial, m: float) -> set[int]:
    """Coordinates whose influence exceeds ``m``; at most total_influence/m many."""
    if not m > 0:
        raise InputError(f"influence threshold must be positive, got {m}")
    infl = p.influences()
    return {i for i in range(p.n) if infl[i] > m}


def default_threshold(tau: float, eps: float, d: int, big_m: float) -> float:
    """Influence cutoff tau * (d ln(1/tau) ln(1/eps))^(-big_m d), for |p|_2 = 1."""
    if not 0 < tau < 0.25:
        raise InputError(f"tau must lie in (0, 1/4), got {tau}")
    if not 0 < eps < 0.25:
        raise InputError(f"eps must lie in (0, 1/4), got {eps}")
    if not isinstance(d, int) or d < 1:
        raise InputError(f"degree must be a positive integer, got {d!r}")
    if big_m < 0:
        raise InputError(f"big_m must be non-negative, got {big_m}")
    base = d * math.log(1.0 / tau) * math.log(1.0 / eps)
    return tau * base ** (-big_m * d)


def classify_leaf(
    p: MultilinearPolynomial, tau: float, eps: float, exact_cap: int = 12
) -> LeafClass:
    """Label a restricted polynomial Regular, NearConstant(sign) or Bad.

    Checked in that order.  The sign test prefers exact enumeration over
    the support variables whenever they fit ``exact_cap``; otherwise it
    falls back to the variance criterion
    var <= (4 ln(1/eps))^(-d/2) * mean^2.
    """
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    mom = p.moments()
    if mom.variance > 0 and p.is_regular(tau):
        return LeafClass(LeafKind.REGULAR)
    sign = sign_pm1(mom.mean)
    compressed, _ = p.compress_support()
    if compressed.n <= exact_cap:
        values = evaluate_on_hypercube(compressed)
        labels = np.where(values >= 0.0, 1, -1)
        mismatch = float(np.mean(labels != sign))
        if mismatch <= eps:
            return LeafClass(LeafKind.NEAR_CONSTANT, sign=sign, exact_verified=True)
        return LeafClass(LeafKind.BAD)
    criterion = (4.0 * math.log(1.0 / eps)) ** (-p.degree / 2.0) * mom.mean**2
    if mom.variance <= criterion:
        return LeafClass(LeafKind.NEAR_CONSTANT, sign=sign)
    return LeafClass(LeafKind.BAD)


# ---------------------------------------------------------------------------
# tree construction


def _expansion_threshold(poly: MultilinearPolynomial, config: RegularityConfig) -> float:
    # The threshold formula is stated for tau, eps in (0, 1/4) and a unit-norm
    # polynomial; clamp the former and rescale by the actual norm.
    tau = min(config.tau, _FORMULA_DOMAIN_CAP)
    eps = min(config.eps, _FORMULA_DOMAIN_CAP)
    d = max(1, poly.degree)
    return default_threshold(tau, eps, d, config.big_m) * poly.moments().l2_norm ** 2


def build_regularity_tree(p: MultilinearPolynomial, config: RegularityConfig) -> DecisionTree:
    """Expand bad leaves round by round until their mass is at most delta.

    Each round computes, per bad leaf, the set of coordinates whose
    influence exceeds the threshold formula, then restricts them one
    coordinate at a time in decreasing-influence order (ties to the lower
    index), re-classifying after every restriction and descending only
    into branches that are still bad.  Budgets (depth, rounds, leaf count)
    cap the expansion; if the mass target is missed the returned tree
    carries ``success=False`` plus diagnostics rather than failing.
    """

    def classify(poly: MultilinearPolynomial) -> LeafClass:
        return classify_leaf(poly, config.tau, config.eps, config.exact_cap)

    depth_cap = p.n if config.max_depth is None else min(config.max_depth, p.n)
    rounds_budget = config.rounds_budget(p.degree)
    counter = {"leaves": 1, "splits_this_round": 0, "budget_exhausted": False}

    def split_allowed() -> bool:
        if counter["leaves"] >= config.max_leaves:
            counter["budget_exhausted"] = True
            return False
        return True

    def grow(poly: MultilinearPolynomial, order: list[int], path) -> TreeNode:
        counter["leaves"] += 1
        counter["splits_this_round"] += 1
        coordinate, rest = order[0], order[1:]
        children = {}
        for value in (-1, 1):
            child_poly = poly.restrict(coordinate, value)
            label = classify(child_poly)
            child_path = path + ((coordinate, value),)
            if (
                label.kind is LeafKind.BAD
                and rest
                and len(child_path) < depth_cap
                and split_allowed()
            ):
                children[value] = grow(child_poly, rest, child_path)
            else:
                children[value] = Leaf(child_poly, label, child_path)
        return Node(coordinate, children[-1], children[1])

    def expand_leaf(leaf: Leaf) -> TreeNode:
        poly = leaf.polynomial
        coords = influential_set(poly, _expansion_threshold(poly, config))
        if not coords:
            coords = {poly.max_influence()[0]}
        infl = poly.influences()
        order = sorted(coords, key=lambda i: (-infl[i], i))[: config.expand_budget]
        order = order[: depth_cap - leaf.depth]
        if not order:
            return leaf
        return grow(poly, order, leaf.path)

    def rebuild(node: TreeNode) -> TreeNode:
        if isinstance(node, Leaf):
            if node.label.kind is LeafKind.BAD and node.depth < depth_cap and split_allowed():
                return expand_leaf(node)
            return node
        return Node(node.var, rebuild(node.minus), rebuild(node.plus))

    root: TreeNode = Leaf(p, classify(p), ())
    rounds_used = 0

    def bad_mass_of(node: TreeNode) -> float:
        acc: list[Leaf] = []
        _collect_leaves(node, acc)
        return sum(l.probability for l in acc if l.label.kind is LeafKind.BAD)

    while bad_mass_of(root) > config.delta and rounds_used < rounds_budget:
        counter["splits_this_round"] = 0
        root = rebuild(root)
        rounds_used += 1
        if counter["splits_this_round"] == 0:
            break

    final_bad = bad_mass_of(root)
    tree = DecisionTree(
        root=root,
        n=p.n,
        success=final_bad <= config.delta,
        diagnostics={
            "rounds_used": rounds_used,
            "rounds_budget": rounds_budget,
            "bad_mass": final_bad,
            "leaf_count": counter["leaves"],
            "budget_exhausted": counter["budget_exhausted"],
            "depth_cap": depth_cap,
        },
    )
    return tree


# ---------------------------------------------------------------------------
# verification of the structural facts


@dataclass(frozen=True)
class TreeSensitivityCheck:
    as_exact: float
    depth: int
    leaf_expectation: float
    holds: bool


def _leaf_average_sensitivity(poly: MultilinearPolynomial) -> float:
    compressed, _ = poly.compress_support()
    if compressed.n == 0:
        return 0.0
    return average_sensitivity_exact(SignFunction(compressed))


def tree_sensitivity_check(f: SignFunction, tree: DecisionTree) -> TreeSensitivityCheck:
    """Exactly compare as(f) with tree depth plus the expected leaf sensitivity."""
    as_exact = average_sensitivity_exact(f)
    leaf_expectation = sum(
        leaf.probability * _leaf_average_sensitivity(leaf.polynomial) for leaf in tree.leaves
    )
    depth = tree.depth
    return TreeSensitivityCheck(
        as_exact=as_exact,
        depth=depth,
        leaf_expectation=leaf_expectation,
        holds=as_exact <= depth + leaf_expectation + 1e-9,
    )


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint coordinate blocks covering {0..n-1}."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            for i in block:
                if i in seen or not 0 <= i < self.n:
                    raise InputError("blocks must be disjoint subsets of {0..n-1}")
                seen.add(i)
        if len(seen) != self.n:
            raise InputError("blocks must cover every coordinate")

    @property
    def b(self) -> int:
        return len(self.blocks)


def block_partition(n: int, b: int) -> BlockPartition:
    """Split {0..n-1} into b contiguous blocks whose sizes differ by at most 1."""
    if not 1 <= b <= n:
        raise InputError(f"need 1 <= b <= n, got b={b}, n={n}")
    big = n % b
    small_size, cursor, blocks = n // b, 0, []
    for j in range(b):
        size = small_size + (1 if j < big else 0)
        blocks.append(tuple(range(cursor, cursor + size)))
        cursor += size
    return BlockPartition(n, tuple(blocks))


@dataclass(frozen=True)
class BlockIdentityCheck:
    lhs: float
    rhs: float
    gap: float


def block_sensitivity_identity_check(f: SignFunction, partition: BlockPartition) -> BlockIdentityCheck:
    """as(f) versus the sum over blocks of the expected restricted sensitivity.

    The right side enumerates, per block, every assignment of the outside
    coordinates and the edge count of the restricted sub-function; the two
    sides agree identically, so any gap beyond rounding is a bug.
    """
    n = f.n
    if n > BLOCK_IDENTITY_CAP:
        raise CapExceededError(
            f"the double enumeration is capped at n <= {BLOCK_IDENTITY_CAP}, got n={n}"
        )
    if partition.n != n:
        raise InputError(f"partition is for n={partition.n}, function has n={n}")
    table = truth_table(f).values
    lhs = average_sensitivity_exact(f)
    rhs = 0.0
    for block in partition.blocks:
        inside = list(block)
        outside = [i for i in range(n) if i not in set(inside)]
        rows = 1 << len(outside)
        cols = 1 << len(inside)
        row_index = np.zeros(rows, dtype=np.int64)
        r = np.arange(rows, dtype=np.int64)
        for j, coord in enumerate(outside):
            row_index |= ((r >> j) & 1) << coord
        col_index = np.zeros(cols, dtype=np.int64)
        c = np.arange(cols, dtype=np.int64)
        for j, coord in enumerate(inside):
            col_index |= ((c >> j) & 1) << coord
        sub = table[row_index[:, None] | col_index[None, :]]
        diffs = 0
        local = np.arange(cols, dtype=np.int64)
        for j in range(len(inside)):
            diffs += int(np.count_nonzero(sub != sub[:, local ^ (1 << j)]))
        rhs += diffs / (rows * cols)
    return BlockIdentityCheck(lhs=lhs, rhs=rhs, gap=abs(lhs - rhs))


@dataclass(frozen=True)
class BlockAlphaReport:
    """Monte Carlo estimate of the summed per-block ratio statistic."""

    total: EstimatorResult
    per_block: tuple[EstimatorResult, ...]
    alpha_hat: EstimatorResult
    reference: float | None
    blocks: int


def block_alpha_sum(
    p: MultilinearPolynomial,
    partition: BlockPartition,
    samples: int,
    rng: Rng,
    *,
    tau: float | None = None,
    c1: float = 1.0,
    c2: float = 1.0,
    workers: int = 1,
) -> BlockAlphaReport:
    """Estimate sum over blocks of E[alpha of the block restriction].

    Each draw samples the outside assignment and the inner point jointly
    (one full +-1 point) plus a direction supported on the block, so each
    block term is an unbiased single-level expectation.  When ``tau`` is
    given the report also carries the comparison value
    c1 d^3 alpha_hat sqrt(b) + c2 d^4 b tau^(1/(8d)).
    """
    if partition.n != p.n:
        raise InputError(f"partition is for n={partition.n}, polynomial has n={p.n}")
    n = p.n
    per_block = []
    for j, block in enumerate(partition.blocks):
        parts = _support_partials(p, block)

        def batch(gen: np.random.Generator, m: int, parts=parts) -> np.ndarray:
            points = _pm1_batch(gen, m, n)
            directions = _pm1_batch(gen, m, n)
            return _clamped_ratio_values(p, parts, points, directions)

        per_block.append(_run_mc(batch, samples, rng.child(j), workers)[0])

    total = EstimatorResult(
        estimate=float(sum(r.estimate for r in per_block)),
        std_error=float(math.sqrt(sum(r.std_error**2 for r in per_block))),
        samples=samples,
        seed=rng.seed,
        stream=rng.stream,
    )
    alpha_hat = estimate_alpha(p, samples, rng.child(partition.b), workers=workers)
    reference = None
    if tau is not None:
        d = max(1, p.degree)
        reference = (
            c1 * d**3 * alpha_hat.estimate * math.sqrt(partition.b)
            + c2 * d**4 * partition.b * tau ** (1.0 / (8.0 * d))
        )
    return BlockAlphaReport(
        total=total,
        per_block=tuple(per_block),
        alpha_hat=alpha_hat,
        reference=reference,
        blocks=partition.b,
    )


# ---------------------------------------------------------------------------
# observational recursion trace


@dataclass(frozen=True)
class RecursionSchedule:
    """Per-level block counts plus the tree and comparison parameters."""

    blocks_per_level: tuple[int, ...]
    tau: float = 0.1
    eps: float = 0.05
    delta: float = 0.05
    big_m: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    max_pool: int = 6
    restrictions_per_block: int = 2

    def __post_init__(self) -> None:
        levels = tuple(int(b) for b in self.blocks_per_level)
        object.__setattr__(self, "blocks_per_level", levels)
        if not 1 <= len(levels) <= 3:
            raise InputError("desk-scale schedules run between 1 and 3 levels")
        if any(b < 1 for b in levels):
            raise InputError("block counts must be positive")
        if self.max_pool < 1 or self.restrictions_per_block < 1:
            raise InputError("pool sizes must be positive")


@dataclass(frozen=True)
class RecursionLevel:
    level: int
    b: int
    pool_size: int
    active_vars: int
    measured_alpha_sum: float
    reference: float | None
    mean_block_alpha: float
    per_block_alpha: tuple[float, ...]
    leaf_counts: dict[str, int]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "b": self.b,
            "pool_size": self.pool_size,
            "active_vars": self.active_vars,
            "measured_alpha_sum": self.measured_alpha_sum,
            "reference": self.reference,
            "mean_block_alpha": self.mean_block_alpha,
            "per_block_alpha": list(self.per_block_alpha),
            "leaf_counts": self.leaf_counts,
        }


@dataclass(frozen=True)
class RecursionTrace:
    levels: tuple[RecursionLevel, ...]
    success: bool
    diagnostics: dict

    def to_json_rows(self) -> list[dict]:
        return [level.to_json_dict() for level in self.levels]


def recursion_trace(
    p: MultilinearPolynomial,
    schedule: RecursionSchedule,
    samples: int,
    rng: Rng,
    *,
    workers: int = 1,
) -> RecursionTrace:
    """Run regularize -> partition -> measure per-block alpha, level by level.

    Purely observational: it records the empirical distribution of the
    per-block ratio statistics and the level-over-level decay, without any
    claim beyond the measured numbers.  Level k+1 works on support-compressed
    random block restrictions of level k's regular leaves.
    """
    config = RegularityConfig(schedule.tau, schedule.eps, schedule.delta, schedule.big_m)
    pool: list[tuple[float, MultilinearPolynomial]] = [(1.0, p)]
    levels = []
    tree_failures = 0
    for level, b in enumerate(schedule.blocks_per_level):
        level_rng = rng.child(level)
        leaf_counts: Counter = Counter()
        regular_entries: list[tuple[float, MultilinearPolynomial]] = []
        for weight, poly in pool:
            tree = build_regularity_tree(poly, config)
            if not tree.success:
                tree_failures += 1
            for kind, count in tree.leaf_counts().items():
                leaf_counts[kind] += count
            for leaf in tree.leaves:
                if leaf.label.kind is LeafKind.REGULAR:
                    regular_entries.append((weight * leaf.probability, leaf.polynomial))
        regular_entries.sort(key=lambda entry: -entry[0])
        selected = regular_entries[: schedule.max_pool]

        per_block: list[float] = []
        alpha_sums: list[tuple[float, float]] = []
        next_pool: list[tuple[float, MultilinearPolynomial]] = []
        active_vars = 0
        for index, (weight, poly) in enumerate(selected):
            compressed, _ = poly.compress_support()
            if compressed.n == 0:
                continue
            active_vars = max(active_vars, compressed.n)
            partition = block_partition(compressed.n, min(b, compressed.n))
            report = block_alpha_sum(
                compressed,
                partition,
                samples,
                level_rng.child(index),
                tau=schedule.tau,
                c1=schedule.c1,
                c2=schedule.c2,
                workers=workers,
            )
            per_block.extend(r.estimate for r in report.per_block)
            alpha_sums.append((weight, report.total.estimate))
            draw_rng = level_rng.child(10_000 + index)
            for block_idx, block in enumerate(partition.blocks):
                outside = [i for i in range(compressed.n) if i not in set(block)]
                for rep in range(schedule.restrictions_per_block):
                    gen = draw_rng.child(
                        block_idx * schedule.restrictions_per_block + rep
                    ).generator()
                    assignment = {
                        i: int(v) for i, v in zip(outside, gen.integers(0, 2, len(outside)) * 2 - 1)
                    }
                    share = weight / (partition.b * schedule.restrictions_per_block)
                    next_pool.append((share, compressed.restrict_many(assignment)))

        total_weight = sum(w for w, _ in alpha_sums)
        measured = (
            sum(w * v for w, v in alpha_sums) / total_weight if total_weight > 0 else 0.0
        )
        reference = None
        if alpha_sums:
            d = max(1, p.degree)
            mean_alpha = float(np.mean([v for _, v in alpha_sums]))
            reference = (
                schedule.c1 * d**3 * mean_alpha * math.sqrt(b)
                + schedule.c2 * d**4 * b * schedule.tau ** (1.0 / (8.0 * d))
            )
        levels.append(
            RecursionLevel(
                level=level,
                b=b,
                pool_size=len(pool),
                active_vars=active_vars,
                measured_alpha_sum=measured,
                reference=reference,
                mean_block_alpha=float(np.mean(per_block)) if per_block else 0.0,
                per_block_alpha=tuple(per_block),
                leaf_counts={k: leaf_counts.get(k, 0) for k in ("regular", "near_constant", "bad")},
            )
        )
        next_pool.sort(key=lambda entry: -entry[0])
        pool = next_pool[: schedule.max_pool]
        if not pool:
            break
    return RecursionTrace(
        levels=tuple(levels),
        success=tree_failures == 0,
        diagnostics={"tree_failures": tree_failures, "levels_run": len(levels)},
    )


# ---------------------------------------------------------------------------
# small-ratio spot check


@dataclass(frozen=True)
class SmallAlphaCheck:
    alpha: float
    as_exact: float
    ratio: float


def small_alpha_check(p: MultilinearPolynomial) -> SmallAlphaCheck:
    """Exact alpha next to exact average sensitivity of sgn(p), with their ratio."""
    if p.n > SMALL_ALPHA_CAP:
        raise CapExceededError(
            f"the exact paths are capped at n <= {SMALL_ALPHA_CAP}, got n={p.n}"
        )
    alpha = exact_alpha(p)
    sensitivity = average_sensitivity_exact(SignFunction(p))
    ratio = 0.0 if sensitivity == 0.0 else sensitivity / alpha
    return SmallAlphaCheck(alpha=alpha, as_exact=sensitivity, ratio=ratio)

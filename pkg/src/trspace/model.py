"""Finite-truncation data model for topological Ramsey spaces.

A space instance is a SpaceModel built over a finite ground space, an
ordered list of levels of atoms. Reducts (finite stand-ins for the
infinite members) and their initial segments share one representation:
an Approx, a sequence of blocks, each block tagged with the half-open
interval of ground levels it draws from. Every search in this package
iterates in the documented total order (block key = (source, atoms),
approximation key = tuple of block keys), so each reported witness is
the least one and reruns are byte-reproducible.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import (
    BudgetExceededError,
    DomainError,
    FusionExhaustedError,
    ParameterError,
    TruncationTooShallowError,
)


@dataclass(frozen=True, order=True)
class Block:
    """One block of an approximation.

    atoms: strictly increasing atom ids.
    source: half-open 1-based interval [k, l) of ground levels the block
    was assembled from. Dataclass order gives the documented block key
    (source first, then atoms).
    """

    source: tuple[int, int]
    atoms: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ParameterError("a block needs at least one atom")
        if list(self.atoms) != sorted(set(self.atoms)):
            raise ParameterError("block atoms must be strictly increasing")
        k, l = self.source
        if not (1 <= k < l):
            raise ParameterError("block source must be a nonempty 1-based interval")

    @property
    def key(self) -> tuple[tuple[int, int], tuple[int, ...]]:
        return (self.source, self.atoms)

    def atom_set(self) -> frozenset[int]:
        return frozenset(self.atoms)


@dataclass(frozen=True)
class Approx:
    """A finite approximation: a (possibly empty) sequence of blocks."""

    blocks: tuple[Block, ...] = ()

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, i: int) -> Block:
        return self.blocks[i]

    @property
    def key(self) -> tuple:
        return tuple(b.key for b in self.blocks)

    def atom_set(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.blocks:
            out.update(b.atoms)
        return frozenset(out)

    def is_prefix_of(self, other: "Approx") -> bool:
        return self.blocks == other.blocks[: len(self.blocks)]

    def extend(self, block: Block) -> "Approx":
        return Approx(self.blocks + (block,))


EMPTY = Approx()


def approx_sort_key(s: Approx) -> tuple:
    # Shorter approximations first, then block keys; total and stable.
    return (len(s.blocks), s.key)


def witness_sort_key(s: Approx) -> tuple:
    # Preference order for witnesses: larger first, ties by least key.
    return (-len(s.blocks), s.key)


@dataclass(frozen=True)
class Config:
    """Knobs shared by the checkers and the canonization pipeline."""

    mu: int = 1                      # admissibility threshold for quantifier pools
    depth_budget: Optional[int] = None
    retries: int = 3
    max_reducts: int = 500_000       # enumeration guard for a single instance
    max_kernels: int = 2_000_000     # partition enumeration guard (Ramsey numbers)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mu < 1:
            raise ParameterError("mu must be at least 1")
        if self.retries < 0:
            raise ParameterError("retries must be nonnegative")
        if self.max_reducts < 1 or self.max_kernels < 1:
            raise ParameterError("enumeration budgets must be positive")
        if self.depth_budget is not None and self.depth_budget < 1:
            raise ParameterError("depth budget must be positive when set")


DEFAULT_CONFIG = Config()


def derive_seed(*parts) -> int:
    """Stable RNG seed from structured parts (never Python hash())."""
    blob = json.dumps([str(p) for p in parts], sort_keys=True).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


class SpaceModel(ABC):
    """A finite truncation of one topological Ramsey space.

    Subclasses fix the block shape, the finitization order leq_fin and
    the one-step extension relation. Everything else (depth, basic sets,
    axiom checks, fusion) is shared and expressed through these three.
    """

    kind: str = "abstract"

    def __init__(self, levels: Iterable[Iterable[int]], params: Optional[dict] = None):
        lv = tuple(tuple(sorted(set(l))) for l in levels)
        if not lv:
            raise ParameterError("a space needs at least one ground level")
        seen: set[int] = set()
        for l in lv:
            if not l:
                raise ParameterError("ground levels must be nonempty")
            if seen.intersection(l):
                raise ParameterError("ground levels must be pairwise disjoint")
            seen.update(l)
        self.levels = lv
        self.params: dict = dict(params or {})
        self._reducts: Optional[tuple[Approx, ...]] = None
        self._approxes: Optional[tuple[Approx, ...]] = None
        self._leq_cache: dict[tuple, bool] = {}
        self._sub_cache: dict[Approx, tuple[Approx, ...]] = {}
        self._ext_cache: dict[tuple, tuple[Block, ...]] = {}
        self.full = self._build_full()

    # ---- per-space structure -------------------------------------------

    @abstractmethod
    def _build_full(self) -> Approx:
        """The maximal reduct (the truncated space itself)."""

    @abstractmethod
    def _leq_fin(self, s: Approx, t: Approx) -> bool:
        """s is a finite reduction of t (both are approximations)."""

    @abstractmethod
    def _extension_blocks(self, s: Approx, x: Approx) -> tuple[Block, ...]:
        """Blocks b with s.extend(b) an approximation inside x.

        Preconditions (ensured by the caller): compat(x, s).
        """

    @abstractmethod
    def _enumerate_reducts(self) -> Iterable[Approx]:
        """All nonempty reducts of the truncated space."""

    # Inner selector catalog; canonize builds on these.
    def selector_names(self) -> tuple[str, ...]:
        return ("drop",)

    def apply_selector(self, name: str, block: Block) -> tuple[int, ...]:
        if name == "drop":
            return ()
        raise DomainError(f"unknown selector {name!r} for {self.kind}")

    # ---- shared operations ---------------------------------------------

    def restrict(self, x: Approx, n: int) -> Approx:
        if n < 0 or n > len(x):
            raise DomainError(f"restriction length {n} out of range 0..{len(x)}")
        return Approx(x.blocks[:n])

    def leq_fin(self, s: Approx, t: Approx) -> bool:
        key = (s, t)
        hit = self._leq_cache.get(key)
        if hit is None:
            hit = self._leq_fin(s, t)
            self._leq_cache[key] = hit
        return hit

    def compat(self, x: Approx, s: Approx) -> bool:
        """[s, x] is nonempty in the truncation: s is realizable inside x."""
        return self.leq_fin(s, x)

    def depth(self, x: Approx, s: Approx):
        """Least k with s a reduction of restrict(x, k); math.inf if none."""
        for k in range(len(x) + 1):
            if self.leq_fin(s, self.restrict(x, k)):
                return k
        return math.inf

    def extension_blocks(self, s: Approx, x: Approx) -> tuple[Block, ...]:
        key = (s, x)
        hit = self._ext_cache.get(key)
        if hit is None:
            if not self.compat(x, s):
                hit = ()
            else:
                hit = tuple(sorted(self._extension_blocks(s, x)))
            self._ext_cache[key] = hit
        return hit

    def extensions(self, s: Approx, x: Approx) -> tuple[Approx, ...]:
        return tuple(s.extend(b) for b in self.extension_blocks(s, x))

    def all_reducts(self) -> tuple[Approx, ...]:
        if self._reducts is None:
            out: list[Approx] = []
            for y in self._enumerate_reducts():
                out.append(y)
                if len(out) > DEFAULT_CONFIG.max_reducts:
                    raise BudgetExceededError(
                        f"{self.kind} instance enumerates more than "
                        f"{DEFAULT_CONFIG.max_reducts} reducts"
                    )
            self._reducts = tuple(sorted(out, key=approx_sort_key))
        return self._reducts

    def sub_reducts(self, x: Approx) -> tuple[Approx, ...]:
        """All reducts y <= x, including x itself, in documented order."""
        hit = self._sub_cache.get(x)
        if hit is None:
            hit = tuple(y for y in self.all_reducts() if self.leq_fin(y, x))
            self._sub_cache[x] = hit
        return hit

    def approximations(self) -> tuple[Approx, ...]:
        """Every initial segment of every reduct (the truncated AR set)."""
        if self._approxes is None:
            seen: set[Approx] = {EMPTY}
            for y in self.all_reducts():
                for k in range(1, len(y) + 1):
                    seen.add(self.restrict(y, k))
            self._approxes = tuple(sorted(seen, key=approx_sort_key))
        return self._approxes

    def basic(self, s: Approx, x: Approx) -> tuple[Approx, ...]:
        """[s, x]: reducts y <= x having s as an initial segment."""
        n = len(s)
        return tuple(
            y for y in self.sub_reducts(x)
            if len(y) >= n and self.restrict(y, n) == s
        )

    # ---- identity --------------------------------------------------------

    def instance_payload(self) -> dict:
        return {
            "instance": self.kind,
            "levels": [list(l) for l in self.levels],
            "params": dict(sorted(self.params.items())),
        }

    def instance_tag(self) -> str:
        blob = json.dumps(self.instance_payload(), sort_keys=True).encode()
        return f"{self.kind}:{hashlib.sha256(blob).hexdigest()[:12]}"


# ---- module-level operation aliases -------------------------------------

def restrict(model: SpaceModel, x: Approx, n: int) -> Approx:
    return model.restrict(x, n)


def leq_fin(model: SpaceModel, s: Approx, t: Approx) -> bool:
    return model.leq_fin(s, t)


def depth(model: SpaceModel, x: Approx, s: Approx):
    return model.depth(x, s)


def extensions(model: SpaceModel, s: Approx, x: Approx) -> tuple[Approx, ...]:
    return model.extensions(s, x)


def compat(model: SpaceModel, x: Approx, s: Approx) -> bool:
    return model.compat(x, s)


def basic(model: SpaceModel, s: Approx, x: Approx) -> tuple[Approx, ...]:
    return model.basic(s, x)


# ---- axiom harness -------------------------------------------------------

def _report(check: str, verdict: str, witness=None, coverage: float = 1.0, **extra) -> dict:
    out = {"check": check, "verdict": verdict, "witness": witness, "coverage": coverage}
    out.update(extra)
    return out


def _pad_segment(model: SpaceModel, x: Approx, n: int):
    # Segments past the truncated length compare as a distinct sentinel.
    if n > len(x):
        return ("#undefined", n)
    return model.restrict(x, n).key


def _check_a1(model: SpaceModel, config: Config) -> dict:
    reds = model.all_reducts()
    # A.1(1): the empty segment of every reduct is empty.
    for x in reds:
        if model.restrict(x, 0) != EMPTY:
            return _report("A1", "fail", witness={"clause": 1, "x": x})
    # A.1(2): distinct reducts differ at some segment length.
    span = max(len(x) for x in reds) + 1
    for x, y in itertools.combinations(reds, 2):
        if all(_pad_segment(model, x, n) == _pad_segment(model, y, n) for n in range(span + 1)):
            return _report("A1", "fail", witness={"clause": 2, "x": x, "y": y})
    # A.1(3): equal segments force equal lengths and equal earlier segments.
    for x in reds:
        for y in reds:
            for n in range(len(x) + 1):
                rx = model.restrict(x, n)
                for m in range(len(y) + 1):
                    if rx != model.restrict(y, m):
                        continue
                    if n != m or any(
                        model.restrict(x, k) != model.restrict(y, k) for k in range(n)
                    ):
                        return _report(
                            "A1", "fail",
                            witness={"clause": 3, "x": x, "y": y, "n": n, "m": m},
                        )
    return _report("A1", "pass", stats={"reducts": len(reds)})


def _check_a2(model: SpaceModel, config: Config) -> dict:
    approxes = model.approximations()
    reds = model.all_reducts()
    # A.2(1): predecessor sets are finite; report the largest one.
    largest = 0
    for t in approxes:
        count = sum(1 for s in approxes if model.leq_fin(s, t))
        largest = max(largest, count)
    # A.2(2): the reduct order matches the segmentwise finitization order.
    for x in reds:
        for y in reds:
            direct = model.leq_fin(x, y)
            quantified = all(
                any(
                    model.leq_fin(model.restrict(x, n), model.restrict(y, m))
                    for m in range(len(y) + 1)
                )
                for n in range(len(x) + 1)
            )
            if direct != quantified:
                return _report(
                    "A2", "fail",
                    witness={"clause": 2, "x": x, "y": y,
                             "direct": direct, "quantified": quantified},
                    stats={"max_predecessors": largest},
                )
    # A.2(3): a segment below a reduced approximation lifts to a segment
    # of the larger one. Prefixes are all representable, so the clause is
    # decidable except when the larger approximation still has extension
    # room past the truncation; those misses are reported undecided.
    undecided = []
    for t in approxes:
        for j in range(len(t) + 1):
            s = model.restrict(t, j)
            for tp in approxes:
                if not model.leq_fin(t, tp):
                    continue
                if any(
                    model.leq_fin(s, model.restrict(tp, k))
                    for k in range(len(tp) + 1)
                ):
                    continue
                if model.extension_blocks(tp, model.full):
                    undecided.append({"clause": 3, "s": s, "t": t, "tprime": tp})
                else:
                    return _report(
                        "A2", "fail",
                        witness={"clause": 3, "s": s, "t": t, "tprime": tp},
                        stats={"max_predecessors": largest},
                    )
    if undecided:
        return _report(
            "A2", "undecided", witness=undecided[0],
            stats={"max_predecessors": largest, "boundary_misses": len(undecided)},
        )
    return _report(
        "A2", "pass",
        stats={"max_predecessors": largest, "approximations": len(approxes)},
    )


def _check_a3(model: SpaceModel, config: Config) -> dict:
    approxes = model.approximations()
    reds = model.all_reducts()
    basics: dict[tuple[Approx, Approx], tuple[Approx, ...]] = {}

    def basic_of(s: Approx, x: Approx) -> tuple[Approx, ...]:
        key = (s, x)
        hit = basics.get(key)
        if hit is None:
            hit = model.basic(s, x)
            basics[key] = hit
        return hit

    # A.3(1): nonemptiness of [s, x] passes down to every member.
    for s in approxes:
        for x in reds:
            sx = basic_of(s, x)
            if not sx:
                continue
            for y in sx:
                if not basic_of(s, y):
                    return _report("A3", "fail", witness={"clause": 1, "s": s, "x": x, "y": y})
    # A.3(2): inside a larger reduct, some member of [s, y] squeezes its
    # basic set into [s, x]. Honest search over candidates, largest first.
    for y in reds:
        for x in model.sub_reducts(y):
            for s in approxes:
                sx = basic_of(s, x)
                if not sx:
                    continue
                sx_keys = {z.key for z in sx}
                found = None
                for z in sorted(basic_of(s, y), key=witness_sort_key):
                    sz = basic_of(s, z)
                    if sz and all(w.key in sx_keys for w in sz):
                        found = z
                        break
                if found is None:
                    return _report("A3", "fail", witness={"clause": 2, "s": s, "x": x, "y": y})
    return _report("A3", "pass", stats={"reducts": len(reds)})


_AXIOM_CHECKS = {"A1": _check_a1, "A2": _check_a2, "A3": _check_a3}


def check_axioms(model: SpaceModel, axiom: str, config: Config = DEFAULT_CONFIG) -> dict:
    """Exhaustively check one structural axiom group on the truncation.

    axiom is "A1", "A2" or "A3"; the amalgamation pigeonhole has its own
    entry point (pigeonhole_A4) because it takes a coloring.
    """
    try:
        checker = _AXIOM_CHECKS[axiom.upper()]
    except KeyError:
        raise DomainError(f"unknown axiom group {axiom!r}; expected A1, A2 or A3")
    report = checker(model, config)
    report["instance"] = model.instance_tag()
    return report


def pigeonhole_A4(
    model: SpaceModel,
    s: Approx,
    x: Approx,
    coloring: Callable[[Approx], int],
    config: Config = DEFAULT_CONFIG,
) -> Approx:
    """One-step pigeonhole: a reduct in [s, x] whose extensions are
    monochromatic under the given coloring of extensions(s, x).

    Returns the witness with the most extensions (ties broken by least
    key). Raises TruncationTooShallowError when no admissible witness
    exists, which at desk scale means [s, x] is empty or every candidate
    has fewer than mu extensions.
    """
    domain = model.extensions(s, x)
    if not domain:
        raise TruncationTooShallowError(
            "no extensions of the segment inside the given reduct"
        )
    colors = {p: coloring(p) for p in domain}
    best: Optional[tuple[int, tuple, Approx]] = None
    for y in model.basic(s, x):
        exts = model.extensions(s, y)
        if len(exts) < config.mu:
            continue
        seen = {colors[p] for p in exts}
        if len(seen) != 1:
            continue
        cand = (-len(exts), y.key, y)
        if best is None or cand[:2] < best[:2]:
            best = cand
    if best is None:
        raise TruncationTooShallowError(
            "no monochromatic reduct with enough extensions in the truncation"
        )
    return best[2]


# ---- fusion --------------------------------------------------------------

@dataclass
class PropertyOracle:
    """A hereditary property handed to fuse.

    check(args..., y) decides the property against reduct y; for the
    single form args is one approximation, for the pair form two. domain
    restricts which approximations are fused over (default: all). A
    custom refine(args, prefix, x) may return a better reduct in
    [prefix, x]; when absent, fuse scans [prefix, x] largest-first.
    """

    check: Callable[..., bool]
    pair: bool = False
    domain: Optional[Callable[[Approx], bool]] = None
    refine: Optional[Callable[..., Optional[Approx]]] = None
    name: str = "P"

    def holds(self, args: tuple[Approx, ...], y: Approx) -> bool:
        return bool(self.check(*args, y))


def _fusion_agenda(model: SpaceModel, oracle: PropertyOracle, bound: Approx):
    pool = [z for z in model.approximations() if model.leq_fin(z, bound)]
    if oracle.domain is not None:
        pool = [z for z in pool if oracle.domain(z)]
    if oracle.pair:
        return [(a, b) for a in pool for b in pool if a.key <= b.key]
    return [(z,) for z in pool]


def fuse(
    model: SpaceModel,
    oracle: PropertyOracle,
    start: Optional[Approx] = None,
    config: Config = DEFAULT_CONFIG,
) -> Approx:
    """Diagonal fusion: shrink a reduct until the property holds for all
    approximations below it (pairs of them in the pair form).

    Stage n freezes the first n+1 blocks of the current reduct and
    settles the property for everything reducible to that segment,
    re-verifying the stage agenda after each shrink since hereditary
    properties can lose their admissibility pool at the boundary.
    Raises FusionExhaustedError (carrying the stage and the partial
    reduct) when some agenda entry cannot be settled.
    """
    x = start if start is not None else model.full
    if start is not None and not model.leq_fin(start, model.full):
        raise DomainError("fusion start must be a reduct of the space")
    budget = config.depth_budget
    stage = 0
    while True:
        frozen = model.restrict(x, min(stage + 1, len(x)))
        agenda = _fusion_agenda(model, oracle, frozen)
        for _ in range(len(model.sub_reducts(x)) + 1):
            bad = next(
                (args for args in agenda if not oracle.holds(args, x)), None
            )
            if bad is None:
                break
            replacement = None
            if oracle.refine is not None:
                replacement = oracle.refine(bad, frozen, x)
            if replacement is None:
                for y in sorted(model.basic(frozen, x), key=witness_sort_key):
                    if y != x and oracle.holds(bad, y):
                        replacement = y
                        break
            if replacement is None or replacement == x:
                raise FusionExhaustedError(stage, partial=x)
            x = replacement
        else:
            raise FusionExhaustedError(stage, partial=x)
        stage += 1
        if stage >= len(x):
            break
        if budget is not None and stage > budget:
            break
    return x

"""Mixing analysis for colored fronts.

decide() classifies a pair of interior segments against a reduct: the
reduct separates them (no equally colored pair of extensions anywhere
inside), mixes them (every admissible reduct below keeps an equally
colored pair), or leaves the pair undecided. Admissible means both
segments still have at least mu front extensions; pairs with an empty
admissibility pool are sticky undecided, they have fallen out of the
front's hat below this reduct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError
from .fronts import Coloring, Front, hat, members_extending, restrict_front
from .model import (
    Approx,
    Block,
    Config,
    DEFAULT_CONFIG,
    PropertyOracle,
    SpaceModel,
    approx_sort_key,
    fuse,
)
from .spaces import lx1

MIXES = "mixes"
SEPARATES = "separates"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str = ""

    def decided(self) -> bool:
        return self.kind in (MIXES, SEPARATES)


class MixingEngine:
    """Caches realizability and color sets for one colored front."""

    def __init__(self, model: SpaceModel, coloring: Coloring, config: Config = DEFAULT_CONFIG):
        self.model = model
        self.coloring = coloring
        self.front = coloring.front
        self.config = config
        self.members = self.front.members
        self.hat_members = hat(model, self.front)
        self._hat_set = set(self.hat_members)
        self._member_set = set(self.members)
        n_classes = coloring.classes()
        self._class_masks = [0] * n_classes
        for i, c in enumerate(coloring.colors):
            self._class_masks[c] |= 1 << i
        self._ext_bits = {
            a: sum(1 << i for i, m in enumerate(self.members) if a.is_prefix_of(m))
            for a in self.hat_members
        }
        self._real_bits: dict[Approx, int] = {}
        self._colorsets: dict[tuple[Approx, Approx], int] = {}
        self._verdicts: dict[tuple, Verdict] = {}

    # -- masks -------------------------------------------------------------

    def real_bits(self, y: Approx) -> int:
        bits = self._real_bits.get(y)
        if bits is None:
            bits = sum(
                1 << i for i, m in enumerate(self.members) if self.model.leq_fin(m, y)
            )
            self._real_bits[y] = bits
        return bits

    def live_bits(self, y: Approx, a: Approx) -> int:
        return self._ext_bits[a] & self.real_bits(y)

    def count(self, y: Approx, a: Approx) -> int:
        return self.live_bits(y, a).bit_count()

    def colorset(self, y: Approx, a: Approx) -> int:
        key = (y, a)
        cs = self._colorsets.get(key)
        if cs is None:
            bits = self.live_bits(y, a)
            cs = 0
            for c, mask in enumerate(self._class_masks):
                if bits & mask:
                    cs |= 1 << c
            self._colorsets[key] = cs
        return cs

    def equal_pair(self, y: Approx, s: Approx, t: Approx) -> bool:
        """Some f-equal pair of front extensions of s and t lives in y."""
        return bool(self.colorset(y, s) & self.colorset(y, t))

    def admissible(self, y: Approx, s: Approx, t: Approx) -> bool:
        mu = self.config.mu
        return self.count(y, s) >= mu and self.count(y, t) >= mu

    def pool(self, x: Approx, s: Approx, t: Approx) -> tuple[Approx, ...]:
        return tuple(
            y for y in self.model.sub_reducts(x) if self.admissible(y, s, t)
        )

    def in_hat(self, a: Approx) -> bool:
        return a in self._hat_set

    def hat_below(self, x: Approx) -> tuple[Approx, ...]:
        """Initial segments of members realizable inside x."""
        live = self.real_bits(x)
        out = [
            a for a in self.hat_members
            if self._ext_bits[a] & live
        ]
        return tuple(out)

    def front_below(self, x: Approx) -> tuple[Approx, ...]:
        live = self.real_bits(x)
        return tuple(m for i, m in enumerate(self.members) if live & (1 << i))

    # -- verdicts ------------------------------------------------------------

    def decide(self, x: Approx, s: Approx, t: Approx) -> Verdict:
        if not (self.in_hat(s) and self.in_hat(t)):
            raise DomainError("mixing is defined on initial segments of members")
        a, b = sorted((s, t), key=approx_sort_key)
        key = (x, a, b)
        hit = self._verdicts.get(key)
        if hit is not None:
            return hit
        pool = self.pool(x, a, b)
        if not pool:
            v = Verdict(UNDECIDED, "no admissible reduct below; the pair leaves the hat")
        elif all(self.equal_pair(y, a, b) for y in pool):
            v = Verdict(MIXES)
        elif not self.equal_pair(x, a, b):
            v = Verdict(SEPARATES)
        else:
            v = Verdict(
                UNDECIDED,
                "equal-colored pair on the reduct but a separating reduct below",
            )
        self._verdicts[key] = v
        return v

    def decide_property(self) -> PropertyOracle:
        """The pair property handed to fuse: the reduct decides the pair
        or the pair has already left the hat below it."""

        def check(s: Approx, t: Approx, y: Approx) -> bool:
            if not self.pool(y, s, t):
                return True
            return self.decide(y, s, t).decided()

        return PropertyOracle(
            check=check, pair=True, domain=self.in_hat, name="decides"
        )


def decide(
    model: SpaceModel,
    x: Approx,
    s: Approx,
    t: Approx,
    coloring: Coloring,
    config: Config = DEFAULT_CONFIG,
) -> Verdict:
    return MixingEngine(model, coloring, config).decide(x, s, t)


# ---------------------------------------------------------------------------
# Tables.

@dataclass
class MixingTable:
    reduct: Approx
    rows: tuple[Approx, ...]
    depths: tuple[object, ...]
    verdicts: dict[tuple[int, int], Verdict]
    fused: bool
    engine: MixingEngine = field(repr=False)

    def verdict_at(self, i: int, j: int) -> Verdict:
        a, b = min(i, j), max(i, j)
        return self.verdicts[(a, b)]

    def undecided_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            ij for ij, v in sorted(self.verdicts.items()) if v.kind == UNDECIDED
        )

    def to_json(self) -> dict:
        from .reportio import approx_to_json, depth_to_json

        return {
            "check": "mixing_table",
            "reduct": approx_to_json(self.reduct),
            "fused": self.fused,
            "rows": [approx_to_json(a) for a in self.rows],
            "depths": [depth_to_json(d) for d in self.depths],
            "entries": [
                {"i": i, "j": j, "verdict": v.kind, "reason": v.reason}
                for (i, j), v in sorted(self.verdicts.items())
            ],
            "undecided": len(self.undecided_pairs()),
        }


def mixing_table(
    model: SpaceModel,
    coloring: Coloring,
    x: Optional[Approx] = None,
    config: Config = DEFAULT_CONFIG,
    fuse_first: bool = True,
) -> MixingTable:
    """All pairwise verdicts over the interior segments (hat minus the
    front) surviving inside the working reduct. With fuse_first the
    reduct is first shrunk so every surviving pair is decided."""
    engine = MixingEngine(model, coloring, config)
    z = x if x is not None else coloring.front.scope
    fused = False
    if fuse_first:
        z = fuse(model, engine.decide_property(), start=z, config=config)
        fused = True
    front_z = set(engine.front_below(z))
    rows = tuple(a for a in engine.hat_below(z) if a not in front_z)
    depths = tuple(model.depth(z, a) for a in rows)
    verdicts: dict[tuple[int, int], Verdict] = {}
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            verdicts[(i, j)] = engine.decide(z, rows[i], rows[j])
    return MixingTable(z, rows, depths, verdicts, fused, engine)


def transitivity_check(table: MixingTable) -> dict:
    """Hunt mixing-transitivity failures in a table. Failures among
    segments of one common depth contradict the equal-depth transitivity
    law and fail the check; failures across depths are reported as
    findings (the known non-transitive behavior)."""
    rows, depths = table.rows, table.depths
    equal_depth = []
    unequal_depth = []
    n = len(rows)
    for mid in range(n):
        for a in range(n):
            if a == mid:
                continue
            if table.verdict_at(a, mid).kind != MIXES:
                continue
            for b in range(a + 1, n):
                if b == mid:
                    continue
                if table.verdict_at(mid, b).kind != MIXES:
                    continue
                if table.verdict_at(a, b).kind != SEPARATES:
                    continue
                item = {
                    "s": rows[a], "t": rows[mid], "tprime": rows[b],
                    "depths": [depths[a], depths[mid], depths[b]],
                }
                same = depths[a] == depths[mid] == depths[b] != math.inf
                (equal_depth if same else unequal_depth).append(item)
    return {
        "check": "transitivity",
        "verdict": "fail" if equal_depth else "pass",
        "witness": equal_depth[0] if equal_depth else None,
        "coverage": 1.0,
        "equal_depth": equal_depth,
        "unequal_depth": unequal_depth,
    }


# ---------------------------------------------------------------------------
# Weak mixing.

def weak_mixing_detect(
    model: SpaceModel,
    x: Approx,
    s: Approx,
    t: Approx,
    coloring: Coloring,
    config: Config = DEFAULT_CONFIG,
    engine: Optional[MixingEngine] = None,
) -> Optional[dict]:
    """Detect a forced transfer block for a mixed pair at unequal depths.

    A witness is the least level-material block w inside t beyond s such
    that on every admissible reduct, every equally colored extension pair
    puts w inside the first new block on the s side, and the block
    properly combines w with further material. None when plain mixing
    needs no such block (or the pair is not mixed at all).
    """
    eng = engine if engine is not None else MixingEngine(model, coloring, config)
    if not (eng.in_hat(s) and eng.in_hat(t)):
        raise DomainError("weak mixing is defined on initial segments of members")
    ds, dt = model.depth(x, s), model.depth(x, t)
    if not (ds < dt):
        raise DomainError("weak mixing needs strictly increasing depths")
    if eng.decide(x, s, t).kind != MIXES:
        return None
    n = len(s)
    t_extra = t.atom_set() - s.atom_set()
    candidates = [
        w for w in lx1(model, x) if set(w.atoms) <= t_extra
    ]
    pool = eng.pool(x, s, t)
    pairs_by_y = []
    for y in pool:
        eq_pairs = [
            (sbar, tbar)
            for sbar in members_extending(eng.front, s)
            if model.leq_fin(sbar, y) and len(sbar) > n
            for tbar in members_extending(eng.front, t)
            if model.leq_fin(tbar, y)
            if eng.coloring(sbar) == eng.coloring(tbar)
        ]
        pairs_by_y.append((y, eq_pairs))

    best = None
    for w in sorted(candidates):
        ok = True
        all_shaped = True
        tail_only = True
        evidence = []
        for y, eq_pairs in pairs_by_y:
            if not eq_pairs:
                ok = False
                break
            shaped = []
            for sbar, tbar in eq_pairs:
                blk = sbar.blocks[n]
                if not set(w.atoms) <= set(blk.atoms):
                    ok = False
                    break
                if model.proper_combination(blk, w, s):
                    shaped.append((sbar, tbar))
                    extra = sorted(set(blk.atoms) - set(w.atoms))
                    if extra and extra[0] <= max(w.atoms):
                        tail_only = False
                else:
                    all_shaped = False
            if not ok or not shaped:
                ok = False
                break
            evidence.append({"reduct": y, "pair": shaped[0]})
        if ok:
            best = {
                "check": "weak_mixing",
                "w": w,
                "s": s,
                "t": t,
                "all_pairs_shaped": all_shaped,
                "extra_material_above_w": tail_only,
                "evidence": evidence[:3],
            }
            break
    return best

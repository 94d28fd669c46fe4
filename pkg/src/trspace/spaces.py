"""Concrete space instances: Ellentuck, block sequences (FIN), strong trees.

Each model fixes the block shape and the finitization order. Atoms are
plain ints; a block remembers the 1-based half-open interval of ground
levels it draws from, which is what the solidity and level-matching
checks look at.
"""

from __future__ import annotations

import itertools
import json
from typing import Iterable, Optional

from .errors import DomainError, ParameterError
from .model import Approx, Block, EMPTY, SpaceModel


# ---------------------------------------------------------------------------
# Ellentuck: atoms are naturals, level n holds the single atom n-1,
# approximations are finite increasing sets read as singleton blocks.

def _atom_block(a: int) -> Block:
    return Block(source=(a + 1, a + 2), atoms=(a,))


class EllentuckModel(SpaceModel):
    kind = "ellentuck"

    def __init__(self, n_atoms: int):
        if n_atoms < 1:
            raise ParameterError("ellentuck instance needs at least one atom")
        super().__init__(([a] for a in range(n_atoms)), params={"N": n_atoms})

    def _build_full(self) -> Approx:
        return Approx(tuple(_atom_block(a) for a in range(len(self.levels))))

    def _shape_ok(self, s: Approx) -> bool:
        return all(b == _atom_block(b.atoms[0]) for b in s.blocks)

    def _leq_fin(self, s: Approx, t: Approx) -> bool:
        if not (self._shape_ok(s) and self._shape_ok(t)):
            return False
        return s.atom_set() <= t.atom_set()

    def _extension_blocks(self, s: Approx, x: Approx) -> tuple[Block, ...]:
        floor = max(s.atom_set(), default=-1)
        return tuple(_atom_block(a) for a in sorted(x.atom_set()) if a > floor)

    def _enumerate_reducts(self) -> Iterable[Approx]:
        atoms = range(len(self.levels))
        for k in range(1, len(self.levels) + 1):
            for combo in itertools.combinations(atoms, k):
                yield Approx(tuple(_atom_block(a) for a in combo))

    def selector_names(self) -> tuple[str, ...]:
        return ("drop", "keep")

    def apply_selector(self, name: str, block: Block) -> tuple[int, ...]:
        if name == "drop":
            return ()
        if name == "keep":
            return block.atoms
        raise DomainError(f"unknown selector {name!r} for {self.kind}")

    def proper_combination(self, block: Block, w: Block, s: Approx) -> bool:
        # Extensions carry a single atom; no block properly contains another.
        return False


# ---------------------------------------------------------------------------
# FIN block sequences: ground levels are the unit blocks, a block is the
# union of an increasing set of them, a reduct is a separated sequence.

class FinModel(SpaceModel):
    kind = "fin"

    def __init__(self, levels: Iterable[Iterable[int]], span_cap: Optional[int] = None):
        lv = [list(l) for l in levels]
        if not lv:
            raise ParameterError("fin instance needs at least one ground block")
        if span_cap is not None and span_cap < 1:
            raise ParameterError("span cap must be at least 1")
        params = {"span_cap": span_cap} if span_cap is not None else {}
        self.span_cap = span_cap
        super().__init__(lv, params=params)
        self._level_sets = [frozenset(l) for l in self.levels]

    def _build_full(self) -> Approx:
        return Approx(tuple(
            Block(source=(i + 1, i + 2), atoms=l)
            for i, l in enumerate(self.levels)
        ))

    def ground_indices(self, block: Block) -> Optional[tuple[int, ...]]:
        """0-based ground levels whose union is exactly this block."""
        atoms = set(block.atoms)
        picked = [i for i, l in enumerate(self._level_sets) if l <= atoms]
        covered: set[int] = set()
        for i in picked:
            covered |= self._level_sets[i]
        if not picked or covered != atoms:
            return None
        return tuple(picked)

    def _block_ok(self, block: Block) -> bool:
        idx = self.ground_indices(block)
        if idx is None or not idx:
            return False
        if self.span_cap is not None and len(idx) > self.span_cap:
            return False
        return block.source == (idx[0] + 1, idx[-1] + 2)

    def make_block(self, indices: Iterable[int]) -> Block:
        idx = sorted(set(indices))
        if not idx:
            raise ParameterError("a fin block needs at least one ground level")
        atoms: list[int] = []
        for i in idx:
            atoms.extend(self.levels[i])
        return Block(source=(idx[0] + 1, idx[-1] + 2), atoms=tuple(sorted(atoms)))

    def _leq_fin(self, s: Approx, t: Approx) -> bool:
        if not all(self._block_ok(b) for b in itertools.chain(s, t)):
            return False
        t_idx = [set(self.ground_indices(b)) for b in t.blocks]
        for sb in s.blocks:
            want = set(self.ground_indices(sb))
            got: set[int] = set()
            for ti in t_idx:
                if ti <= want:
                    got |= ti
            if got != want:
                return False
        return True

    def _extension_blocks(self, s: Approx, x: Approx) -> tuple[Block, ...]:
        floor = -1
        for b in s.blocks:
            floor = max(floor, max(self.ground_indices(b)))
        positions = [
            j for j, xb in enumerate(x.blocks)
            if min(self.ground_indices(xb)) > floor
        ]
        out = []
        for k in range(1, len(positions) + 1):
            for combo in itertools.combinations(positions, k):
                merged: list[int] = []
                for j in combo:
                    merged.extend(self.ground_indices(x.blocks[j]))
                if self.span_cap is not None and len(merged) > self.span_cap:
                    continue
                out.append(self.make_block(merged))
        return tuple(out)

    def _enumerate_reducts(self) -> Iterable[Approx]:
        n = len(self.levels)

        def rec(prefix: tuple[Block, ...], floor: int):
            for i in range(floor, n):
                rest = range(i + 1, n)
                limit = n - i if self.span_cap is None else min(self.span_cap, n - i)
                for k in range(0, limit):
                    for extra in itertools.combinations(rest, k):
                        block = self.make_block((i,) + extra)
                        seq = prefix + (block,)
                        yield Approx(seq)
                        yield from rec(seq, max((i,) + extra) + 1)

        yield from rec((), 0)

    def selector_names(self) -> tuple[str, ...]:
        return ("drop", "min", "max", "minmax", "identity")

    def apply_selector(self, name: str, block: Block) -> tuple[int, ...]:
        if name == "drop":
            return ()
        if name == "min":
            return (block.atoms[0],)
        if name == "max":
            return (block.atoms[-1],)
        if name == "minmax":
            return (block.atoms[0], block.atoms[-1])
        if name == "identity":
            return block.atoms
        raise DomainError(f"unknown selector {name!r} for {self.kind}")

    def proper_combination(self, block: Block, w: Block, s: Approx) -> bool:
        bi = self.ground_indices(block)
        wi = self.ground_indices(w)
        if bi is None or wi is None:
            return False
        if not set(wi) < set(bi):
            return False
        floor = -1
        for sb in s.blocks:
            floor = max(floor, max(self.ground_indices(sb)))
        # The leftover ground levels always split into separated chain
        # pieces, so containment above the base segment is the whole test.
        return min(bi) > floor


# ---------------------------------------------------------------------------
# Strong subtrees of a complete b-ary tree. Nodes are numbered in level
# order; a block is the node set of one level of the subtree.

class TreeModel(SpaceModel):
    kind = "tree"

    def __init__(self, branching: int, height: int):
        if branching < 2:
            raise ParameterError("tree branching must be at least 2")
        if height < 1:
            raise ParameterError("tree height must be at least 1")
        total = (branching ** (height + 1) - 1) // (branching - 1)
        if total > 2000:
            raise ParameterError(
                f"tree instance with {total} nodes exceeds the desk-scale budget"
            )
        self.b = branching
        self.h = height
        levels = []
        for d in range(height + 1):
            start = (branching ** d - 1) // (branching - 1)
            levels.append(range(start, start + branching ** d))
        super().__init__(levels, params={"b": branching, "h": height})

    def _build_full(self) -> Approx:
        return Approx(tuple(
            Block(source=(d + 1, d + 2), atoms=tuple(l))
            for d, l in enumerate(self.levels)
        ))

    # node helpers -------------------------------------------------------

    def node_depth(self, u: int) -> int:
        d = 0
        while u >= (self.b ** (d + 1) - 1) // (self.b - 1):
            d += 1
        return d

    def _level_start(self, d: int) -> int:
        return (self.b ** d - 1) // (self.b - 1)

    def descendants(self, u: int, depth: int) -> range:
        d = self.node_depth(u)
        if depth < d:
            return range(0)
        idx = u - self._level_start(d)
        width = self.b ** (depth - d)
        base = self._level_start(depth) + idx * width
        return range(base, base + width)

    def child(self, u: int, direction: int) -> int:
        d = self.node_depth(u)
        idx = u - self._level_start(d)
        return self._level_start(d + 1) + idx * self.b + direction

    # structure ----------------------------------------------------------

    def _block_depth(self, block: Block) -> int:
        return block.source[0] - 1

    def _block_ok(self, block: Block) -> bool:
        d = self._block_depth(block)
        if not (0 <= d <= self.h) or block.source != (d + 1, d + 2):
            return False
        lv = self.levels[d]
        return all(lv[0] <= a <= lv[-1] for a in block.atoms)

    def _strong_segment(self, s: Approx) -> bool:
        if not all(self._block_ok(b) for b in s.blocks):
            return False
        if not s.blocks:
            return True
        if len(s.blocks[0].atoms) != 1:
            return False
        for prev, cur in zip(s.blocks, s.blocks[1:]):
            dp, dc = self._block_depth(prev), self._block_depth(cur)
            if dc <= dp:
                return False
            want = []
            for u in prev.atoms:
                for c in range(self.b):
                    hits = [v for v in cur.atoms if v in self.descendants(self.child(u, c), dc)]
                    if len(hits) != 1:
                        return False
                    want.extend(hits)
            if sorted(want) != list(cur.atoms):
                return False
        return True

    def _leq_fin(self, s: Approx, t: Approx) -> bool:
        # Ground strongness plus containment is equivalent to strongness
        # relative to t, so the order reduces to levels and node sets.
        if not (self._strong_segment(s) and self._strong_segment(t)):
            return False
        s_levels = {b.source for b in s.blocks}
        t_levels = {b.source for b in t.blocks}
        return s_levels <= t_levels and s.atom_set() <= t.atom_set()

    def _extension_blocks(self, s: Approx, x: Approx) -> tuple[Block, ...]:
        if not s.blocks:
            return tuple(
                Block(source=xb.source, atoms=(u,))
                for xb in x.blocks for u in xb.atoms
            )
        last = s.blocks[-1]
        d_last = self._block_depth(last)
        out: list[Block] = []
        for xb in x.blocks:
            dl = self._block_depth(xb)
            if dl <= d_last:
                continue
            pool = set(xb.atoms)
            slots = []
            for u in last.atoms:
                for c in range(self.b):
                    cands = [v for v in self.descendants(self.child(u, c), dl) if v in pool]
                    slots.append(cands)
            if any(not cands for cands in slots):
                continue
            for pick in itertools.product(*slots):
                out.append(Block(source=(dl + 1, dl + 2), atoms=tuple(sorted(pick))))
        return tuple(out)

    def _enumerate_reducts(self) -> Iterable[Approx]:
        full = self.full

        def rec(s: Approx):
            for block in self._extension_blocks(s, full):
                ext = s.extend(block)
                yield ext
                yield from rec(ext)

        yield from rec(EMPTY)

    def selector_names(self) -> tuple[str, ...]:
        # Per-node selectors are not expressible per level; the catalog
        # stays coarse and canonization reports it as limited.
        return ("drop", "full")

    def apply_selector(self, name: str, block: Block) -> tuple[int, ...]:
        if name == "drop":
            return ()
        if name == "full":
            return block.atoms
        raise DomainError(f"unknown selector {name!r} for {self.kind}")

    def proper_combination(self, block: Block, w: Block, s: Approx) -> bool:
        if block.source != w.source:
            return False
        return set(w.atoms) < set(block.atoms)


# ---------------------------------------------------------------------------
# Builders and shared block machinery.

def build_ellentuck(n_atoms: int) -> EllentuckModel:
    return EllentuckModel(n_atoms)


def build_fin(
    n_blocks: Optional[int] = None,
    span_cap: Optional[int] = None,
    levels: Optional[Iterable[Iterable[int]]] = None,
) -> FinModel:
    if levels is None:
        if n_blocks is None or n_blocks < 1:
            raise ParameterError("fin instance needs a positive block count")
        levels = ([i] for i in range(n_blocks))
    return FinModel(levels, span_cap=span_cap)


def build_tree(branching: int, height: int) -> TreeModel:
    return TreeModel(branching, height)


def closure(model: SpaceModel, x: Approx) -> tuple[Block, ...]:
    """Every block that occurs in some reduct of x (for block sequences
    this is the span, the unions of ground blocks available inside x)."""
    seen: set[Block] = set()
    for y in model.sub_reducts(x):
        seen.update(y.blocks)
    return tuple(sorted(seen))


def lx1(model: SpaceModel, x: Approx) -> tuple[Block, ...]:
    """Level material of x in one block (the unary combination pool)."""
    return closure(model, x)


def combinations(model: SpaceModel, ws: Iterable[Block], s: Approx) -> tuple[Block, ...]:
    """Blocks built out of all the given generators on top of s.

    Two ways to combine: a separated chain of generators merging into one
    block, or several generators on one ground level merging into a wider
    block on that level. Every generator must contribute; with a single
    generator the result is that block itself (when it sits above s).
    """
    gens = tuple(ws)
    if not gens:
        return ()
    valid = set(closure(model, model.full))
    floor = 0
    for sb in s.blocks:
        floor = max(floor, sb.source[1])
    out: set[Block] = set()

    # Chain: pairwise separated source intervals merging into one block.
    ordered = sorted(gens)
    if (
        all(a.source[1] <= b.source[0] for a, b in zip(ordered, ordered[1:]))
        and ordered[0].source[0] >= floor
    ):
        atoms = tuple(sorted(a for g in ordered for a in g.atoms))
        merged = Block(
            source=(ordered[0].source[0], ordered[-1].source[1]), atoms=atoms
        )
        if merged in valid:
            out.add(merged)

    # Same level: generators on one ground level merge in place. Every
    # generator must contribute something the others do not cover.
    if len(gens) > 1 and len({g.source for g in gens}) == 1 and gens[0].source[0] >= floor:
        atom_sets = [set(g.atoms) for g in gens]
        union = set().union(*atom_sets)
        contributing = all(
            union != set().union(*(a for j, a in enumerate(atom_sets) if j != i))
            for i in range(len(atom_sets))
        )
        if contributing:
            merged = Block(source=gens[0].source, atoms=tuple(sorted(union)))
            if merged in valid:
                out.add(merged)

    return tuple(sorted(out))


def solid_in(model: SpaceModel, block: Block) -> bool:
    """True when every ground level in the block's source interval
    contributes an atom. Single-level blocks are solid by construction;
    wide blocks occur only in the block-sequence space, where a gap in
    the ground indices means a skipped level."""
    if block.source[1] - block.source[0] == 1:
        return True
    if isinstance(model, FinModel):
        idx = model.ground_indices(block)
        if idx is None:
            return False
        return list(idx) == list(range(idx[0], idx[-1] + 1))
    return True


def full_initial_segments(model: SpaceModel, s: Approx) -> bool:
    """Every block of s touches each ground level in its source span."""
    return all(solid_in(model, b) for b in s.blocks)


# ---------------------------------------------------------------------------
# Instance serialization.

def instance_to_json(model: SpaceModel) -> dict:
    return model.instance_payload()


def instance_from_json(payload) -> SpaceModel:
    if isinstance(payload, str):
        payload = json.loads(payload)
    kind = payload.get("instance")
    params = payload.get("params", {})
    levels = payload.get("levels")
    if kind == "ellentuck":
        n = params.get("N", len(levels) if levels else 0)
        return build_ellentuck(int(n))
    if kind == "fin":
        cap = params.get("span_cap")
        if levels:
            return build_fin(levels=levels, span_cap=cap)
        return build_fin(int(params.get("blocks", 0)), span_cap=cap)
    if kind == "tree":
        return build_tree(int(params.get("b", 0)), int(params.get("h", 0)))
    raise DomainError(f"unknown instance kind {payload.get('instance')!r}")

"""Hand construction of blocks and approximations for the tests."""

from __future__ import annotations

from trspace import Approx, Block


def atom_block(a: int) -> Block:
    return Block((a + 1, a + 2), (a,))


def ea(*atoms: int) -> Approx:
    """Ellentuck approximation from atom ids."""
    return Approx(tuple(atom_block(a) for a in atoms))


def fblk(*indices: int) -> Block:
    """FIN block over singleton ground levels: the union of x_i for the
    given ground indices."""
    return Block((indices[0] + 1, indices[-1] + 2), tuple(indices))


def fa(*groups) -> Approx:
    """FIN approximation from index tuples, e.g. fa((0,), (1, 2))."""
    return Approx(tuple(fblk(*g) for g in groups))


def atoms_of(s: Approx) -> tuple[tuple[int, ...], ...]:
    """Readable shape of an approximation: the atom tuple per block."""
    return tuple(b.atoms for b in s.blocks)

"""Kekulization: assign explicit single/double orders to aromatic systems.

Every aromatic atom that needs one double bond must be matched across an
aromatic bond to another such atom (a perfect matching on the needy
subgraph).  The matching search walks atoms in canonical-rank order, so the
chosen Kekule pattern is a function of the abstract graph, not of the input
atom numbering.
"""

from __future__ import annotations

from dataclasses import replace

from ..errors import KekulizationFailed
from .canon import canonical_rank
from .model import Bond, Molecule, validate_valence


def kekulize(mol: Molecule) -> Molecule:
    """Return a copy with aromatic flags resolved into alternating bonds."""
    aromatic_atoms = [i for i, a in enumerate(mol.atoms) if a.aromatic]
    if not aromatic_atoms and not any(b.aromatic for b in mol.bonds):
        return mol

    ring = mol.ring_bonds
    for i in aromatic_atoms:
        if not mol.in_ring(i):
            raise KekulizationFailed(f"aromatic atom {i} has lost its ring context")
    for bond in mol.bonds:
        if bond.aromatic and bond.key not in ring:
            raise KekulizationFailed(f"aromatic bond {bond.key} outside any ring")

    need = [mol.aromatic_double_need(i) for i in range(len(mol.atoms))]
    ranks = canonical_rank(mol)
    matching = _match(mol, need, ranks)
    if matching is None:
        raise KekulizationFailed("no consistent alternating bond assignment")

    atoms = [replace(a, aromatic=False) for a in mol.atoms]
    bonds = []
    for bond in mol.bonds:
        if bond.aromatic:
            order = 2 if bond.key in matching else 1
            bonds.append(Bond(bond.a, bond.b, order, False))
        else:
            bonds.append(bond)
    out = Molecule(atoms, bonds)
    if not validate_valence(out).ok:
        raise KekulizationFailed("kekulized molecule fails valence validation")
    return out


def _match(mol: Molecule, need: list[int], ranks: list[int]) -> set | None:
    """Perfect matching over needy atoms along aromatic bonds, or None."""
    pending = {i for i, flag in enumerate(need) if flag}
    partners: dict[int, list[int]] = {}
    for i in pending:
        partners[i] = sorted(
            (j for j, b in mol.neighbors(i) if b.aromatic and need[j]),
            key=lambda j: ranks[j],
        )

    matching: set[tuple[int, int]] = set()

    def available(i: int) -> list[int]:
        return [j for j in partners[i] if j in pending]

    def assign(i: int, j: int) -> None:
        matching.add((i, j) if i < j else (j, i))
        pending.discard(i)
        pending.discard(j)

    def unassign(i: int, j: int) -> None:
        matching.discard((i, j) if i < j else (j, i))
        pending.add(i)
        pending.add(j)

    def propagate() -> tuple[list[tuple[int, int]], bool]:
        forced: list[tuple[int, int]] = []
        changed = True
        while changed:
            changed = False
            for i in sorted(pending, key=lambda k: ranks[k]):
                if i not in pending:
                    continue
                avail = available(i)
                if not avail:
                    return forced, False
                if len(avail) == 1:
                    assign(i, avail[0])
                    forced.append((i, avail[0]))
                    changed = True
        return forced, True

    def solve() -> bool:
        forced, ok = propagate()
        if not ok:
            for i, j in reversed(forced):
                unassign(i, j)
            return False
        if not pending:
            return True
        pivot = min(pending, key=lambda k: ranks[k])
        for j in available(pivot):
            assign(pivot, j)
            if solve():
                return True
            unassign(pivot, j)
        for i, j in reversed(forced):
            unassign(i, j)
        return False

    if solve():
        return matching
    return None

"""Canonical atom ranking via Morgan-style refinement.

Iterated neighborhood invariants partition the atoms; stalled ties are broken
by individualizing each candidate in the first tied class and keeping the
branch whose serialization is lexicographically smallest.  The result is a
function of the abstract graph, so isomorphic molecules rank identically.
"""

from __future__ import annotations

from .model import Molecule
from .smiles import emit_smiles

# Safety valve against pathological symmetry; drug-scale orbits stay tiny.
_MAX_LEAVES = 4096


def _initial_keys(mol: Molecule) -> list[tuple]:
    keys = []
    for i, atom in enumerate(mol.atoms):
        keys.append(
            (
                atom.element,
                atom.charge,
                mol.degree(i),
                mol.total_h(i),
                atom.aromatic,
                atom.isotope or 0,
                atom.attach_id or 0,
            )
        )
    return keys


def _dense_ranks(keys: list) -> list[int]:
    order = sorted(set(keys))
    index = {key: rank for rank, key in enumerate(order)}
    return [index[key] for key in keys]


def _refine(mol: Molecule, ranks: list[int]) -> list[int]:
    n = len(ranks)
    while True:
        keys = []
        for i in range(n):
            nbr_profile = sorted(
                (bond.order, bond.aromatic, ranks[j]) for j, bond in mol.neighbors(i)
            )
            keys.append((ranks[i], tuple(nbr_profile)))
        new_ranks = _dense_ranks(keys)
        if new_ranks == ranks:
            return ranks
        ranks = new_ranks


def _twin_pruned(mol: Molecule, members: list[int]) -> list[int]:
    """Drop all but one of degree-1 twins; they are automorphic by construction."""
    kept: list[int] = []
    seen_parents: set[int] = set()
    for i in members:
        if mol.degree(i) == 1:
            parent = mol.neighbors(i)[0][0]
            if parent in seen_parents:
                continue
            seen_parents.add(parent)
        kept.append(i)
    return kept


def _search(mol: Molecule, ranks: list[int], state: dict) -> None:
    ranks = _refine(mol, ranks)
    n = len(ranks)
    by_rank: dict[int, list[int]] = {}
    for i, rank in enumerate(ranks):
        by_rank.setdefault(rank, []).append(i)
    tied = [rank for rank, members in sorted(by_rank.items()) if len(members) > 1]
    if not tied:
        if state["leaves"] >= _MAX_LEAVES:
            return
        state["leaves"] += 1
        order = sorted(range(n), key=lambda i: ranks[i])
        text = emit_smiles(mol, order)
        if state["best_text"] is None or text < state["best_text"]:
            state["best_text"] = text
            state["best_order"] = order
        return
    members = _twin_pruned(mol, by_rank[tied[0]])
    for candidate in members:
        if state["leaves"] >= _MAX_LEAVES:
            return
        keys = [(ranks[i], 0 if i == candidate else 1) for i in range(n)]
        _search(mol, _dense_ranks(keys), state)


def canonical_order(mol: Molecule) -> tuple[str, list[int]]:
    """Return the canonical serialization of the graph as-is and its atom order."""
    if not mol.atoms:
        raise ValueError("empty molecule has no canonical order")
    state: dict = {"best_text": None, "best_order": None, "leaves": 0}
    _search(mol, _dense_ranks(_initial_keys(mol)), state)
    return state["best_text"], state["best_order"]


def canonical_rank(mol: Molecule) -> list[int]:
    """Permutation mapping each atom index to its canonical rank."""
    _, order = canonical_order(mol)
    ranks = [0] * len(order)
    for rank, idx in enumerate(order):
        ranks[idx] = rank
    return ranks

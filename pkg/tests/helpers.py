"""Shared test utilities: brute-force oracles kept independent of the library
code paths they check."""

from __future__ import annotations

import itertools
import random

from tsmiles.chem import Molecule, make_bond


def atom_fingerprint(mol: Molecule, i: int) -> tuple:
    a = mol.atoms[i]
    return (a.element, a.charge, a.isotope, mol.total_h(i), a.aromatic, a.attach_id)


def brute_force_isomorphic(m1: Molecule, m2: Molecule) -> bool:
    """Exhaustive permutation search; only viable for small molecules."""
    n = len(m1.atoms)
    if n != len(m2.atoms) or len(m1.bonds) != len(m2.bonds):
        return False
    fp1 = [atom_fingerprint(m1, i) for i in range(n)]
    fp2 = [atom_fingerprint(m2, i) for i in range(n)]
    if sorted(fp1) != sorted(fp2):
        return False
    bonds2 = {b.key: (b.order, b.aromatic) for b in m2.bonds}
    for perm in itertools.permutations(range(n)):
        if any(fp1[i] != fp2[perm[i]] for i in range(n)):
            continue
        ok = True
        for b in m1.bonds:
            i, j = perm[b.a], perm[b.b]
            key = (i, j) if i < j else (j, i)
            if bonds2.get(key) != (b.order, b.aromatic):
                ok = False
                break
        if ok:
            return True
    return False


def permute_molecule(mol: Molecule, rng: random.Random) -> Molecule:
    """Random relabeling of atom indices."""
    n = len(mol.atoms)
    perm = list(range(n))
    rng.shuffle(perm)
    atoms = [None] * n
    for old, new in enumerate(perm):
        atoms[new] = mol.atoms[old]
    bonds = [make_bond(perm[b.a], perm[b.b], b.order, b.aromatic) for b in mol.bonds]
    return Molecule(atoms, bonds)


def enumerate_kekule_assignments(mol: Molecule) -> list[dict]:
    """All assignments of aromatic bonds to single/double satisfying the
    per-atom double-bond demand; independent oracle for the kekulizer."""
    aromatic_bonds = [b for b in mol.bonds if b.aromatic]
    need = {i: mol.aromatic_double_need(i) for i in range(len(mol.atoms))}
    valid = []
    for orders in itertools.product((1, 2), repeat=len(aromatic_bonds)):
        doubles: dict[int, int] = {}
        for bond, order in zip(aromatic_bonds, orders):
            if order == 2:
                doubles[bond.a] = doubles.get(bond.a, 0) + 1
                doubles[bond.b] = doubles.get(bond.b, 0) + 1
        if all(doubles.get(i, 0) == need[i] for i in need):
            valid.append(
                {b.key: o for b, o in zip(aromatic_bonds, orders)}
            )
    return valid

"""Molecular graph model: atoms, bonds, valence rules and basic descriptors.

The graph is deliberately small: the organic subset plus the dummy element
``*`` used as an attachment placeholder.  Hydrogen counts follow SMILES
semantics: ``explicit_h is None`` means the count is implied by the lowest
allowed valence, a fixed integer means the bracket count is authoritative.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from ..errors import TsmilesError

ORGANIC_SUBSET = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")
AROMATIC_ELEMENTS = ("b", "c", "n", "o", "p", "s")
DUMMY = "*"

# Allowed valences per neutral element; a formal charge shifts each entry by
# its sign.  The dummy element is special-cased to degree one.
ALLOWED_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
    "H": (1,),
}

# Average atomic masses (IUPAC 2021, rounded as commonly tabulated).
ATOMIC_MASSES: dict[str, float] = {
    "H": 1.008,
    "B": 10.81,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "P": 30.974,
    "S": 32.06,
    "Cl": 35.45,
    "Br": 79.904,
    "I": 126.904,
    DUMMY: 0.0,
}


@dataclass(frozen=True, slots=True)
class Atom:
    """A single atom; ``attach_id`` is only meaningful on dummy atoms."""

    element: str
    charge: int = 0
    isotope: int | None = None
    explicit_h: int | None = None
    aromatic: bool = False
    attach_id: int | None = None

    def __post_init__(self):
        if self.attach_id is not None and self.element != DUMMY:
            raise ValueError("attach_id is only valid on dummy atoms")

    @property
    def is_dummy(self) -> bool:
        return self.element == DUMMY

    @property
    def is_heavy(self) -> bool:
        return self.element not in ("H", DUMMY)

    def with_attach_id(self, attach_id: int | None) -> "Atom":
        return replace(self, attach_id=attach_id)


@dataclass(frozen=True, slots=True)
class Bond:
    """Undirected bond between atom indices ``a < b``."""

    a: int
    b: int
    order: int = 1
    aromatic: bool = False

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("bond endpoints must be distinct")
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


def make_bond(i: int, j: int, order: int = 1, aromatic: bool = False) -> Bond:
    a, b = (i, j) if i < j else (j, i)
    return Bond(a, b, order, aromatic)


@dataclass(frozen=True, slots=True)
class ValenceReport:
    ok: bool
    violations: tuple[tuple[int, int, tuple[int, ...]], ...]


class Molecule:
    """Immutable attributed graph; adjacency and ring data are cached."""

    __slots__ = ("atoms", "bonds", "_adj", "_ring_bonds")

    def __init__(self, atoms: Iterable[Atom], bonds: Iterable[Bond]):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.bonds: tuple[Bond, ...] = tuple(bonds)
        n = len(self.atoms)
        adj: list[list[tuple[int, Bond]]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for bond in self.bonds:
            if bond.a >= n or bond.b >= n or bond.a < 0:
                raise ValueError("bond references unknown atom")
            if bond.key in seen:
                raise ValueError(f"duplicate bond {bond.key}")
            seen.add(bond.key)
            adj[bond.a].append((bond.b, bond))
            adj[bond.b].append((bond.a, bond))
        for entries in adj:
            entries.sort(key=lambda e: e[0])
        self._adj: tuple[tuple[tuple[int, Bond], ...], ...] = tuple(
            tuple(e) for e in adj
        )
        self._ring_bonds: frozenset[tuple[int, int]] | None = None

    def __len__(self) -> int:
        return len(self.atoms)

    def neighbors(self, i: int) -> tuple[tuple[int, Bond], ...]:
        """Neighbors of atom ``i`` in ascending index order."""
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def bond_between(self, i: int, j: int) -> Bond | None:
        for k, bond in self._adj[i]:
            if k == j:
                return bond
        return None

    # -- ring perception ----------------------------------------------------

    @property
    def ring_bonds(self) -> frozenset[tuple[int, int]]:
        """Keys of bonds that lie on a cycle (non-bridges)."""
        if self._ring_bonds is None:
            self._ring_bonds = frozenset(
                b.key for b in self.bonds if b.key not in self._bridges()
            )
        return self._ring_bonds

    def _bridges(self) -> set[tuple[int, int]]:
        n = len(self.atoms)
        disc = [-1] * n
        low = [0] * n
        bridges: set[tuple[int, int]] = set()
        timer = 0
        for root in range(n):
            if disc[root] != -1:
                continue
            stack: list[tuple[int, int, int]] = [(root, -1, 0)]
            while stack:
                node, parent, ptr = stack.pop()
                if ptr == 0:
                    disc[node] = low[node] = timer
                    timer += 1
                if ptr < len(self._adj[node]):
                    stack.append((node, parent, ptr + 1))
                    nbr = self._adj[node][ptr][0]
                    if disc[nbr] == -1:
                        stack.append((nbr, node, 0))
                    elif nbr != parent:
                        low[node] = min(low[node], disc[nbr])
                else:
                    if parent != -1:
                        low[parent] = min(low[parent], low[node])
                        if low[node] > disc[parent]:
                            key = (parent, node) if parent < node else (node, parent)
                            bridges.add(key)
        return bridges

    def in_ring(self, i: int) -> bool:
        return any(b.key in self.ring_bonds for _, b in self._adj[i])

    def is_connected(self) -> bool:
        if not self.atoms:
            return True
        seen = {0}
        todo = [0]
        while todo:
            node = todo.pop()
            for nbr, _ in self._adj[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    todo.append(nbr)
        return len(seen) == len(self.atoms)

    # -- hydrogen and valence accounting -------------------------------------

    def sigma_order_sum(self, i: int) -> int:
        """Bond order sum with aromatic bonds counted as single."""
        total = 0
        for _, bond in self._adj[i]:
            total += 1 if bond.aromatic else bond.order
        return total

    def aromatic_double_need(self, i: int) -> int:
        """1 if aromatic atom ``i`` must receive one double bond on kekulization."""
        atom = self.atoms[i]
        if not atom.aromatic:
            return 0
        base = self.sigma_order_sum(i) + (atom.explicit_h or 0)
        has_exo_multiple = any(
            not b.aromatic and b.order > 1 for _, b in self._adj[i]
        )
        elem = atom.element
        if elem == "C":
            if atom.charge != 0 or has_exo_multiple:
                return 0
            return 1
        if elem in ("N", "P"):
            if atom.charge > 0:
                return 0 if base >= 4 else 1
            if atom.charge < 0:
                return 0
            return 0 if base >= 3 else 1
        if elem in ("O", "S"):
            if atom.charge > 0 and base < 3:
                return 1
            return 0
        return 0

    def implicit_h(self, i: int) -> int:
        atom = self.atoms[i]
        if atom.explicit_h is not None or atom.is_dummy:
            return 0
        allowed = allowed_valences(atom)
        if not allowed:
            return 0
        occupied = self.sigma_order_sum(i) + self.aromatic_double_need(i)
        for valence in allowed:
            if valence >= occupied:
                return valence - occupied
        return 0

    def total_h(self, i: int) -> int:
        atom = self.atoms[i]
        return atom.explicit_h if atom.explicit_h is not None else self.implicit_h(i)

    def can_accept_bond(self, i: int, order: int) -> bool:
        """True if atom ``i`` can take one more bond of ``order`` legally."""
        atom = self.atoms[i]
        if atom.is_dummy:
            return self.degree(i) == 0
        allowed = allowed_valences(atom)
        if not allowed:
            return False
        occupied = self.sigma_order_sum(i) + self.aromatic_double_need(i) + order
        if atom.explicit_h is not None:
            return (occupied + atom.explicit_h) in allowed
        return occupied <= max(allowed)


def allowed_valences(atom: Atom) -> tuple[int, ...]:
    if atom.is_dummy:
        return (1,)
    base = ALLOWED_VALENCES.get(atom.element)
    if base is None:
        return ()
    return tuple(v + atom.charge for v in base if v + atom.charge >= 0)


class MoleculeBuilder:
    """Mutable staging area; ``build`` freezes into a Molecule."""

    def __init__(self):
        self.atoms: list[Atom] = []
        self.bonds: list[Bond] = []
        self._bond_keys: set[tuple[int, int]] = set()

    def add_atom(self, atom: Atom) -> int:
        self.atoms.append(atom)
        return len(self.atoms) - 1

    def add_bond(self, i: int, j: int, order: int = 1, aromatic: bool = False) -> None:
        bond = make_bond(i, j, order, aromatic)
        if bond.key in self._bond_keys:
            raise TsmilesError(f"duplicate bond between atoms {i} and {j}")
        self._bond_keys.add(bond.key)
        self.bonds.append(bond)

    def build(self) -> Molecule:
        return Molecule(self.atoms, self.bonds)


def validate_valence(mol: Molecule) -> ValenceReport:
    """Diagnostic check of every atom against the valence table."""
    violations: list[tuple[int, int, tuple[int, ...]]] = []
    for i, atom in enumerate(mol.atoms):
        if atom.is_dummy:
            if mol.degree(i) != 1:
                violations.append((i, mol.degree(i), (1,)))
            continue
        allowed = allowed_valences(atom)
        occupied = mol.sigma_order_sum(i) + mol.aromatic_double_need(i)
        if not allowed:
            violations.append((i, occupied, ()))
            continue
        if atom.explicit_h is not None:
            observed = occupied + atom.explicit_h
            if observed not in allowed:
                violations.append((i, observed, allowed))
        else:
            if occupied > max(allowed):
                violations.append((i, occupied, allowed))
    return ValenceReport(ok=not violations, violations=tuple(violations))


def descriptors(mol: Molecule) -> dict[str, float]:
    """Heavy atom count, cycle rank and average molecular weight."""
    heavy = sum(1 for a in mol.atoms if a.is_heavy)
    rings = len(mol.bonds) - len(mol.atoms) + 1 if mol.atoms else 0
    weight = 0.0
    for i, atom in enumerate(mol.atoms):
        weight += ATOMIC_MASSES.get(atom.element, 0.0)
        weight += mol.total_h(i) * ATOMIC_MASSES["H"]
    return {
        "heavy_atom_count": float(heavy),
        "ring_count": float(max(rings, 0)),
        "mol_weight": weight,
    }


def atoms_signature(mol: Molecule) -> tuple:
    """Order-independent atom multiset key, used by conservation checks."""
    return tuple(
        sorted(
            (a.element, a.charge, a.isotope or 0, mol.total_h(i), a.aromatic)
            for i, a in enumerate(mol.atoms)
        )
    )


def iter_heavy(mol: Molecule) -> Iterator[int]:
    for i, atom in enumerate(mol.atoms):
        if atom.is_heavy:
            yield i

"""Bond cutting rules and construction of the acyclic molecular tree (AMT).

Only bridge bonds (acyclic single bonds) are ever cut, so the fragment
connectivity graph is always a tree; the spanning-tree fallback stays in
place for future ring-cutting rules.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .chem import (
    Atom,
    Molecule,
    canonical_key,
    make_bond,
    validate_valence,
)
from .errors import DisconnectedFragments, TsmilesError

RULE_NAMES = ("mmpa_lite", "scaffold", "brics_lite")


@dataclass(frozen=True)
class CutRule:
    """Named cut-selection rule with its size threshold."""

    name: str = "mmpa_lite"
    min_heavy: int = 1

    def __post_init__(self):
        if self.name not in RULE_NAMES:
            raise TsmilesError(f"unknown cut rule {self.name!r}")
        if self.min_heavy < 1:
            raise TsmilesError("min_heavy must be at least 1")


@dataclass(frozen=True)
class CutSet:
    """Selected cut bonds, ordered by (min atom index, max atom index)."""

    bonds: tuple[tuple[int, int], ...]
    orders: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bonds)


@dataclass
class FragmentEdge:
    """Connection between two fragment nodes created by one cut bond.

    ``atom_a``/``atom_b`` point at the attachment atoms inside the fragments:
    dummy atoms for the dummy schemes, the shared/copy atoms for TSSA.  Trees
    rebuilt from text carry ``None`` there; the assembler then infers joins
    from the fragment contents instead.
    """

    node_a: int
    node_b: int
    atom_a: int | None
    atom_b: int | None
    order: int
    cut: tuple[int, int]


@dataclass
class AMT:
    """Rooted ordered tree over fragments."""

    nodes: list[Molecule]
    kinds: list[str]  # "frag" for dummy schemes, "group"/"bond" for TSSA
    root: int
    children: dict[int, list[int]]
    parent: dict[int, int]
    edges: dict[tuple[int, int], FragmentEdge]  # keyed (parent, child)
    scheme: str

    def node_count(self) -> int:
        return len(self.nodes)

    def bfs_nodes(self) -> list[int]:
        order = [self.root]
        queue = [self.root]
        while queue:
            node = queue.pop(0)
            for child in self.children[node]:
                order.append(child)
                queue.append(child)
        return order

    def edges_preorder(self) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []

        def visit(node: int) -> None:
            for child in self.children[node]:
                out.append((node, child))
                visit(child)

        visit(self.root)
        return out

    def undirected_edge_set(self) -> set[frozenset]:
        return {frozenset(key) for key in self.edges}


# --------------------------------------------------------------------------
# Cut selection


def find_cut_bonds(mol: Molecule, rule: CutRule) -> CutSet:
    """Select bridge bonds to cut according to ``rule``."""
    if not mol.is_connected():
        raise TsmilesError("fragmenter requires a connected molecule")
    if rule.name == "mmpa_lite":
        candidates = _mmpa_candidates(mol)
    elif rule.name == "scaffold":
        candidates = _scaffold_candidates(mol)
    else:
        candidates = _brics_candidates(mol)

    kept = []
    for key in candidates:
        small = _split_sizes(mol, key)
        if min(small) >= rule.min_heavy:
            kept.append(key)
    kept.sort()
    orders = tuple(mol.bond_between(a, b).order for a, b in kept)
    return CutSet(bonds=tuple(kept), orders=orders)


def _acyclic_single_heavy(mol: Molecule) -> list[tuple[int, int]]:
    ring = mol.ring_bonds
    out = []
    for bond in mol.bonds:
        if bond.order != 1 or bond.aromatic or bond.key in ring:
            continue
        a, b = mol.atoms[bond.a], mol.atoms[bond.b]
        if not (a.is_heavy and b.is_heavy):
            continue
        out.append(bond.key)
    return out


def _mmpa_candidates(mol: Molecule) -> list[tuple[int, int]]:
    """Acyclic single bonds with carbon on at least one side; symmetric
    terminal twins (three fluorines of a CF3, gem-dimethyls on one atom)
    contribute a single representative cut."""
    out = []
    twin_seen: set[tuple] = set()
    for key in _acyclic_single_heavy(mol):
        i, j = key
        if mol.atoms[i].element != "C" and mol.atoms[j].element != "C":
            continue
        twin_key = None
        for terminal, anchor in ((i, j), (j, i)):
            if mol.degree(terminal) == 1:
                twin_key = (anchor, replace(mol.atoms[terminal], attach_id=None))
                break
        if twin_key is not None:
            if twin_key in twin_seen:
                continue
            twin_seen.add(twin_key)
        out.append(key)
    return out


def _scaffold_atoms(mol: Molecule) -> set[int]:
    """Ring systems plus linkers, with multiply bonded attachments kept."""
    degree = {i: mol.degree(i) for i in range(len(mol.atoms))}
    alive = set(degree)
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            if degree[i] <= 1:
                alive.discard(i)
                for j, _ in mol.neighbors(i):
                    if j in alive:
                        degree[j] -= 1
                changed = True
    for i in range(len(mol.atoms)):
        if i in alive:
            continue
        for j, bond in mol.neighbors(i):
            if j in alive and (bond.order > 1 or bond.aromatic):
                alive.add(i)
                break
    return alive


def _scaffold_candidates(mol: Molecule) -> list[tuple[int, int]]:
    scaffold = _scaffold_atoms(mol)
    if not scaffold:
        return []
    out = []
    for key in _acyclic_single_heavy(mol):
        i, j = key
        if (i in scaffold) != (j in scaffold):
            out.append(key)
    return out


# Coarse chemical environments; cuts are allowed between the listed pairs.
_BRICS_PAIRS = {
    frozenset(p)
    for p in [
        ("ring_c", "alkyl_c"),
        ("ring_c", "ring_c"),
        ("ring_c", "amine_n"),
        ("ring_c", "ring_n"),
        ("ring_c", "acyl_c"),
        ("ring_c", "ether_o"),
        ("ring_c", "sulfonyl_s"),
        ("ring_n", "alkyl_c"),
        ("ring_n", "acyl_c"),
        ("acyl_c", "amine_n"),
        ("acyl_c", "ether_o"),
        ("amine_n", "alkyl_c"),
        ("amine_n", "sulfonyl_s"),
        ("ether_o", "alkyl_c"),
        ("thio_s", "alkyl_c"),
    ]
}


def _environment(mol: Molecule, i: int) -> str:
    atom = mol.atoms[i]
    in_ring = mol.in_ring(i)
    multiple = [
        (j, bond) for j, bond in mol.neighbors(i) if bond.order > 1 and not bond.aromatic
    ]
    elem = atom.element
    if elem == "C":
        if in_ring:
            return "ring_c"
        if any(mol.atoms[j].element == "O" and bond.order == 2 for j, bond in multiple):
            return "acyl_c"
        if not multiple:
            return "alkyl_c"
        return "other"
    if elem == "N":
        if in_ring:
            return "ring_n"
        if not multiple:
            return "amine_n"
        return "other"
    if elem == "O":
        if not in_ring and mol.degree(i) == 2 and not multiple:
            return "ether_o"
        return "other"
    if elem == "S":
        doubles_to_o = sum(
            1 for j, bond in multiple if mol.atoms[j].element == "O" and bond.order == 2
        )
        if doubles_to_o >= 2:
            return "sulfonyl_s"
        if not in_ring and mol.degree(i) == 2 and not multiple:
            return "thio_s"
        return "other"
    return "other"


def _brics_candidates(mol: Molecule) -> list[tuple[int, int]]:
    out = []
    for key in _mmpa_candidates(mol):
        envs = frozenset((_environment(mol, key[0]), _environment(mol, key[1])))
        if envs in _BRICS_PAIRS or (
            len(envs) == 1 and frozenset(list(envs) * 2) in _BRICS_PAIRS
        ):
            out.append(key)
    return out


def _split_sizes(mol: Molecule, key: tuple[int, int]) -> tuple[int, int]:
    """Heavy-atom counts of the two sides of a bridge bond."""
    a, b = key
    seen = {a}
    todo = [a]
    while todo:
        node = todo.pop()
        for j, _ in mol.neighbors(node):
            if (node, j) in ((a, b), (b, a)):
                continue
            if j not in seen:
                seen.add(j)
                todo.append(j)
    side_a = sum(1 for i in seen if mol.atoms[i].is_heavy)
    total = sum(1 for x in mol.atoms if x.is_heavy)
    return side_a, total - side_a


# --------------------------------------------------------------------------
# Splitting


def _components(mol: Molecule, cuts: CutSet) -> tuple[list[list[int]], dict[int, int]]:
    cut_keys = set(cuts.bonds)
    comp_of: dict[int, int] = {}
    comps: list[list[int]] = []
    for start in range(len(mol.atoms)):
        if start in comp_of:
            continue
        comp = [start]
        comp_of[start] = len(comps)
        todo = [start]
        while todo:
            node = todo.pop()
            for j, bond in mol.neighbors(node):
                if bond.key in cut_keys or j in comp_of:
                    continue
                comp_of[j] = len(comps)
                comp.append(j)
                todo.append(j)
        comps.append(sorted(comp))
    return comps, comp_of


def fragment_dummy(
    mol: Molecule, cuts: CutSet, with_ids: bool = True
) -> tuple[list[Molecule], list[FragmentEdge]]:
    """Split at the cut bonds, capping each side with a dummy atom.

    Fragment atom order is: dummies (in cut order) first, then the original
    atoms in molecule order; the leading dummy makes the fragment text start
    at its attachment point.  With ``with_ids`` the dummy pairs carry
    attachment ids numbered along the tree from the fragment holding atom 0.
    """
    comps, comp_of = _components(mol, cuts)
    cut_keys = set(cuts.bonds)

    # Dummy atoms of each component, ordered by cut key.
    incident: dict[int, list[int]] = {c: [] for c in range(len(comps))}
    for k, (u, v) in enumerate(cuts.bonds):
        incident[comp_of[u]].append(k)
        incident[comp_of[v]].append(k)
    for lst in incident.values():
        lst.sort(key=lambda k: cuts.bonds[k])

    fragments: list[Molecule] = []
    local_of: list[dict[int, int]] = []
    dummy_local: dict[tuple[int, int], int] = {}  # (component, cut index) -> local idx
    for c, comp in enumerate(comps):
        atoms: list[Atom] = []
        for k in incident[c]:
            dummy_local[(c, k)] = len(atoms)
            atoms.append(Atom("*", attach_id=(k + 1) if with_ids else None))
        mapping = {}
        for orig in comp:
            mapping[orig] = len(atoms)
            atoms.append(mol.atoms[orig])
        bonds = []
        for bond in mol.bonds:
            if bond.a in mapping and bond.b in mapping and bond.key not in cut_keys:
                bonds.append(
                    make_bond(mapping[bond.a], mapping[bond.b], bond.order, bond.aromatic)
                )
        for k in incident[c]:
            u, v = cuts.bonds[k]
            anchor = u if comp_of[u] == c else v
            bonds.append(make_bond(dummy_local[(c, k)], mapping[anchor], cuts.orders[k]))
        fragments.append(Molecule(atoms, bonds))
        local_of.append(mapping)

    edges = []
    for k, (u, v) in enumerate(cuts.bonds):
        cu, cv = comp_of[u], comp_of[v]
        edges.append(
            FragmentEdge(
                node_a=cu,
                node_b=cv,
                atom_a=dummy_local[(cu, k)],
                atom_b=dummy_local[(cv, k)],
                order=cuts.orders[k],
                cut=(u, v),
            )
        )

    _check_dummy_conservation(mol, fragments)
    if with_ids:
        amt = build_amt(fragments, edges, scheme="TSID", root_policy="index", root_index=0)
        fragments = amt.nodes
    return fragments, edges


def _check_dummy_conservation(mol: Molecule, fragments: list[Molecule]) -> None:
    total = sum(sum(1 for a in f.atoms if not a.is_dummy) for f in fragments)
    if total != len(mol.atoms):
        raise TsmilesError("fragmentation lost atoms")
    for f in fragments:
        if not validate_valence(f).ok:
            raise TsmilesError("fragment fails valence validation")


def fragment_shared(
    mol: Molecule, cuts: CutSet
) -> tuple[list[Molecule], list[Molecule], list[FragmentEdge]]:
    """Split into group nodes plus 2-atom bond nodes sharing the cut atoms.

    Atoms at cut sites get floating hydrogen counts so each piece stays
    valence-valid on its own; the shared-atom identification restores the
    original hydrogen count on assembly.
    """
    comps, comp_of = _components(mol, cuts)
    cut_keys = set(cuts.bonds)
    cut_atoms = {i for key in cuts.bonds for i in key}

    groups: list[Molecule] = []
    local_of: list[dict[int, int]] = []
    for comp in comps:
        mapping = {orig: k for k, orig in enumerate(comp)}
        atoms = []
        for orig in comp:
            atom = mol.atoms[orig]
            if orig in cut_atoms and atom.explicit_h is not None:
                atom = replace(atom, explicit_h=None)
            atoms.append(atom)
        bonds = [
            make_bond(mapping[b.a], mapping[b.b], b.order, b.aromatic)
            for b in mol.bonds
            if b.a in mapping and b.b in mapping and b.key not in cut_keys
        ]
        groups.append(Molecule(atoms, bonds))
        local_of.append(mapping)

    bond_nodes: list[Molecule] = []
    edges: list[FragmentEdge] = []
    g = len(groups)
    for k, (u, v) in enumerate(cuts.bonds):
        copies = []
        for orig in (u, v):
            a = mol.atoms[orig]
            copies.append(
                Atom(a.element, charge=a.charge, isotope=a.isotope, explicit_h=None)
            )
        bond_nodes.append(Molecule(copies, [make_bond(0, 1, cuts.orders[k])]))
        node_id = g + k
        cu, cv = comp_of[u], comp_of[v]
        edges.append(
            FragmentEdge(cu, node_id, local_of[cu][u], 0, cuts.orders[k], (u, v))
        )
        edges.append(
            FragmentEdge(node_id, cv, 1, local_of[cv][v], cuts.orders[k], (u, v))
        )

    for piece in groups + bond_nodes:
        if not validate_valence(piece).ok:
            raise TsmilesError("fragment fails valence validation")
    return groups, bond_nodes, edges


# --------------------------------------------------------------------------
# Tree construction


def build_amt(
    fragments: list[Molecule],
    edges: list[FragmentEdge],
    scheme: str,
    root_policy: str = "canonical_first",
    root_index: int = 0,
    kinds: list[str] | None = None,
) -> AMT:
    """Root the fragment connectivity graph into an ordered tree.

    Bridge-only cuts guarantee the graph is already a tree; if a future rule
    introduces cycles a minimum spanning tree under deterministic edge order
    is taken instead.
    """
    n = len(fragments)
    if kinds is None:
        kinds = ["frag"] * n

    tree_edges = _spanning_tree(n, edges)

    if root_policy == "index":
        if not 0 <= root_index < n:
            raise TsmilesError(f"root index {root_index} out of range")
        root = root_index
    elif root_policy == "canonical_first":
        root = min(range(n), key=lambda i: (canonical_key(_bare(fragments[i])), i))
    else:
        raise TsmilesError(f"unknown root policy {root_policy!r}")

    adjacency: dict[int, list[FragmentEdge]] = {i: [] for i in range(n)}
    for edge in tree_edges:
        adjacency[edge.node_a].append(edge)
        adjacency[edge.node_b].append(edge)

    children: dict[int, list[int]] = {i: [] for i in range(n)}
    parent: dict[int, int] = {}
    oriented: dict[tuple[int, int], FragmentEdge] = {}
    seen = {root}
    queue = [root]
    while queue:
        node = queue.pop(0)
        for edge in sorted(adjacency[node], key=lambda e: e.cut):
            other = edge.node_b if edge.node_a == node else edge.node_a
            if other in seen:
                continue
            seen.add(other)
            if edge.node_a == node:
                oriented[(node, other)] = edge
            else:
                oriented[(node, other)] = FragmentEdge(
                    node, other, edge.atom_b, edge.atom_a, edge.order, edge.cut
                )
            children[node].append(other)
            parent[other] = node
            queue.append(other)
    if len(seen) != n:
        raise DisconnectedFragments("fragment connectivity graph is not connected")

    amt = AMT(
        nodes=list(fragments),
        kinds=list(kinds),
        root=root,
        children=children,
        parent=parent,
        edges=oriented,
        scheme=scheme,
    )
    if scheme == "TSID":
        _renumber_attach_ids(amt)
    return amt


def _bare(frag: Molecule) -> Molecule:
    atoms = [a.with_attach_id(None) if a.is_dummy else a for a in frag.atoms]
    return Molecule(atoms, frag.bonds)


def _spanning_tree(n: int, edges: list[FragmentEdge]) -> list[FragmentEdge]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = []
    for edge in sorted(edges, key=lambda e: (e.cut, e.node_a, e.node_b)):
        ra, rb = find(edge.node_a), find(edge.node_b)
        if ra != rb:
            parent[ra] = rb
            kept.append(edge)
    return kept


def _renumber_attach_ids(amt: AMT) -> None:
    """Label dummy pairs 1..k along a preorder walk from the root; this is
    the numbering the worked golden example pins down."""
    assignments: dict[int, dict[int, int]] = {i: {} for i in range(amt.node_count())}
    counter = 0
    for p, c in amt.edges_preorder():
        counter += 1
        edge = amt.edges[(p, c)]
        assignments[p][edge.atom_a] = counter
        assignments[c][edge.atom_b] = counter
    for node, mapping in assignments.items():
        if not mapping:
            continue
        atoms = list(amt.nodes[node].atoms)
        for local, attach_id in mapping.items():
            atoms[local] = atoms[local].with_attach_id(attach_id)
        amt.nodes[node] = Molecule(atoms, amt.nodes[node].bonds)

"""SMILES subset parser and writer.

Supported: organic-subset bare atoms, aromatic lowercase, bracket atoms with
isotope / explicit H / charge, dummy atoms ``*`` and ``[n*]``, branches, ring
closures (digits and ``%nn``) and the bond symbols ``- = # :``.  Stereo
markers and multi-component dots are rejected loudly.
"""

from __future__ import annotations

from ..errors import (
    AromaticityError,
    MultiComponentUnsupported,
    StereoUnsupported,
    UnbalancedParen,
    UnbalancedRing,
    UnknownToken,
)
from .model import (
    AROMATIC_ELEMENTS,
    DUMMY,
    ORGANIC_SUBSET,
    Atom,
    Molecule,
    make_bond,
)

_TWO_LETTER = ("Cl", "Br")
_BRACKET_ELEMENTS = set(ORGANIC_SUBSET) | {"H"}
_STEREO_CHARS = set("/\\@")

# (order, explicit aromatic flag) per bond symbol
_BOND_SYMBOLS = {"-": (1, False), "=": (2, False), "#": (3, False), ":": (1, True)}
_ORDER_SYMBOL = {1: "", 2: "=", 3: "#"}


class _PendingBond:
    __slots__ = ("order", "aromatic", "offset")

    def __init__(self, order: int, aromatic: bool, offset: int):
        self.order = order
        self.aromatic = aromatic
        self.offset = offset


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string into a Molecule; errors carry byte offsets."""
    if not text:
        raise UnknownToken("empty SMILES", 0)

    atoms: list[Atom] = []
    # bonds collected as [i, j, order, explicit_aromatic, implicit_candidate]
    raw_bonds: list[list] = []
    prev: int | None = None
    pending: _PendingBond | None = None
    branch_stack: list[tuple[int, int]] = []  # (atom index, '(' offset)
    open_rings: dict[int, tuple[int, _PendingBond | None, int]] = {}

    def attach(idx: int, offset: int) -> None:
        nonlocal prev, pending
        if prev is not None:
            _add_bond(raw_bonds, atoms, prev, idx, pending, offset)
        elif pending is not None:
            raise UnknownToken("bond symbol without preceding atom", pending.offset)
        prev = idx
        pending = None

    pos = 0
    length = len(text)
    while pos < length:
        ch = text[pos]
        if ch == ".":
            raise MultiComponentUnsupported("multi-component SMILES", pos)
        if ch in _STEREO_CHARS:
            raise StereoUnsupported(f"stereo marker {ch!r}", pos)
        if ch in _BOND_SYMBOLS:
            if pending is not None:
                raise UnknownToken("consecutive bond symbols", pos)
            order, aromatic = _BOND_SYMBOLS[ch]
            pending = _PendingBond(order, aromatic, pos)
            pos += 1
            continue
        if ch == "(":
            if prev is None:
                raise UnbalancedParen("branch before any atom", pos)
            if pending is not None:
                raise UnknownToken("bond symbol before branch open", pending.offset)
            branch_stack.append((prev, pos))
            pos += 1
            continue
        if ch == ")":
            if not branch_stack:
                raise UnbalancedParen("unmatched ')'", pos)
            if pending is not None:
                raise UnknownToken("dangling bond before ')'", pending.offset)
            prev = branch_stack.pop()[0]
            pos += 1
            continue
        if ch.isdigit() or ch == "%":
            if prev is None:
                raise UnbalancedRing("ring closure before any atom", pos)
            if ch == "%":
                if pos + 2 >= length + 1 or not text[pos + 1 : pos + 3].isdigit():
                    raise UnknownToken("'%' needs two digits", pos)
                label = int(text[pos + 1 : pos + 3])
                width = 3
            else:
                label = int(ch)
                width = 1
            _close_or_open_ring(
                open_rings, raw_bonds, atoms, label, prev, pending, pos
            )
            pending = None
            pos += width
            continue
        if ch == "[":
            atom, width = _parse_bracket(text, pos)
            atoms.append(atom)
            attach(len(atoms) - 1, pos)
            pos += width
            continue
        bare = _parse_bare(text, pos)
        if bare is None:
            raise UnknownToken(f"unexpected character {ch!r}", pos)
        atom, width = bare
        atoms.append(atom)
        attach(len(atoms) - 1, pos)
        pos += width

    if pending is not None:
        raise UnknownToken("dangling bond at end of input", pending.offset)
    if branch_stack:
        raise UnbalancedParen("unclosed '('", branch_stack[-1][1])
    if open_rings:
        label, (_, _, offset) = next(iter(open_rings.items()))
        raise UnbalancedRing(f"unmatched ring closure {label}", offset)
    if not atoms:
        raise UnknownToken("no atoms in input", 0)

    return _finalize(atoms, raw_bonds)


def _add_bond(raw_bonds, atoms, i, j, pending: _PendingBond | None, offset: int) -> None:
    if pending is None:
        candidate = atoms[i].aromatic and atoms[j].aromatic
        raw_bonds.append([i, j, 1, False, candidate, offset])
    else:
        if pending.aromatic and not (atoms[i].aromatic and atoms[j].aromatic):
            raise AromaticityError("':' bond between non-aromatic atoms", pending.offset)
        raw_bonds.append([i, j, pending.order, pending.aromatic, False, offset])


def _close_or_open_ring(open_rings, raw_bonds, atoms, label, current, pending, pos):
    if label in open_rings:
        other, other_pending, other_pos = open_rings.pop(label)
        if other == current:
            raise UnbalancedRing("ring closure to the same atom", pos)
        spec = pending or other_pending
        if (
            pending is not None
            and other_pending is not None
            and (pending.order, pending.aromatic)
            != (other_pending.order, other_pending.aromatic)
        ):
            raise UnbalancedRing("conflicting ring-closure bond symbols", pos)
        for entry in raw_bonds:
            if {entry[0], entry[1]} == {other, current}:
                raise UnbalancedRing("ring closure duplicates a bond", pos)
        _add_bond(raw_bonds, atoms, other, current, spec, pos)
    else:
        open_rings[label] = (current, pending, pos)


def _parse_bare(text: str, pos: int) -> tuple[Atom, int] | None:
    for sym in _TWO_LETTER:
        if text.startswith(sym, pos):
            return Atom(sym), 2
    ch = text[pos]
    if ch == DUMMY:
        return Atom(DUMMY), 1
    if ch in ORGANIC_SUBSET:
        return Atom(ch), 1
    if ch in AROMATIC_ELEMENTS:
        return Atom(ch.upper(), aromatic=True), 1
    return None


def _parse_bracket(text: str, start: int) -> tuple[Atom, int]:
    pos = start + 1
    length = len(text)

    def fail(msg: str, at: int | None = None) -> UnknownToken:
        return UnknownToken(msg, start if at is None else at)

    number = None
    digits_at = pos
    while pos < length and text[pos].isdigit():
        pos += 1
    if pos > digits_at:
        number = int(text[digits_at:pos])
    if pos >= length:
        raise fail("unterminated bracket atom")

    ch = text[pos]
    if ch in _STEREO_CHARS:
        raise StereoUnsupported("stereo marker in bracket atom", pos)

    if ch == DUMMY:
        element, aromatic = DUMMY, False
        pos += 1
        if pos >= length or text[pos] != "]":
            raise fail("dummy bracket supports only '[n*]'", pos)
        if number is not None and number <= 0:
            raise fail("attach id must be positive", digits_at)
        return Atom(DUMMY, attach_id=number), pos + 1 - start

    element = None
    for sym in _TWO_LETTER:
        if text.startswith(sym, pos):
            element = sym
            pos += 2
            break
    if element is None:
        if ch in _BRACKET_ELEMENTS:
            element, pos = ch, pos + 1
        elif ch in AROMATIC_ELEMENTS:
            element, pos = ch.upper(), pos + 1
        else:
            raise fail(f"unknown element {ch!r} in bracket", pos)
    aromatic = ch in AROMATIC_ELEMENTS

    explicit_h = 0
    if pos < length and text[pos] == "H" and element != "H":
        pos += 1
        h_digits = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        explicit_h = int(text[h_digits:pos]) if pos > h_digits else 1

    charge = 0
    if pos < length and text[pos] in "+-":
        sign = 1 if text[pos] == "+" else -1
        symbol = text[pos]
        pos += 1
        c_digits = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        if pos > c_digits:
            charge = sign * int(text[c_digits:pos])
        else:
            charge = sign
            while pos < length and text[pos] == symbol:
                charge += sign
                pos += 1

    if pos < length and text[pos] in _STEREO_CHARS:
        raise StereoUnsupported("stereo marker in bracket atom", pos)
    if pos < length and text[pos] == ":":
        raise fail("atom classes are unsupported", pos)
    if pos >= length or text[pos] != "]":
        raise fail("unterminated bracket atom", pos)

    return (
        Atom(element, charge=charge, isotope=number, explicit_h=explicit_h, aromatic=aromatic),
        pos + 1 - start,
    )


def _finalize(atoms: list[Atom], raw_bonds: list[list]) -> Molecule:
    """Resolve implicit aromatic bond candidates and check aromatic rings."""
    probe = Molecule(atoms, [make_bond(e[0], e[1], e[2], False) for e in raw_bonds])
    ring = probe.ring_bonds
    bonds = []
    for i, j, order, explicit_ar, candidate, offset in raw_bonds:
        key = (i, j) if i < j else (j, i)
        if explicit_ar and key not in ring:
            raise AromaticityError("aromatic bond outside any ring", offset)
        aromatic = explicit_ar or (candidate and key in ring)
        bonds.append(make_bond(i, j, order, aromatic))
    mol = Molecule(atoms, bonds)
    for idx, atom in enumerate(atoms):
        if atom.aromatic and not mol.in_ring(idx):
            raise AromaticityError(f"aromatic atom {idx} outside any ring", 0)
    return mol


# --------------------------------------------------------------------------
# Writing


def write_input_order(mol: Molecule) -> str:
    """Serialize with atoms visited in index order (DFS from atom 0)."""
    return emit_smiles(mol, range(len(mol.atoms)))


def emit_smiles(mol: Molecule, order) -> str:
    """DFS serialization; ``order`` ranks atoms, order[0] is the start atom."""
    n = len(mol.atoms)
    if n == 0:
        raise ValueError("cannot write an empty molecule")
    order = list(order)
    position = [0] * n
    for rank, idx in enumerate(order):
        position[idx] = rank

    import sys

    start = order[0]
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    closures: dict[int, list[int]] = {i: [] for i in range(n)}
    visited = [False] * n
    visit_seq: list[int] = []
    ring_seen: set[tuple[int, int]] = set()

    def explore(node: int, parent: int) -> None:
        visited[node] = True
        visit_seq.append(node)
        for j in sorted((k for k, _ in mol.neighbors(node)), key=lambda k: position[k]):
            if j == parent:
                continue
            if visited[j]:
                key = (node, j) if node < j else (j, node)
                if key not in ring_seen:
                    ring_seen.add(key)
                    closures[node].append(j)
                    closures[j].append(node)
            else:
                children[node].append(j)
                explore(j, node)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        explore(start, -1)
    finally:
        sys.setrecursionlimit(old_limit)
    if len(visit_seq) != n:
        raise ValueError("molecule is not connected")

    emit_pos = {idx: k for k, idx in enumerate(visit_seq)}
    digit_of: dict[tuple[int, int], int] = {}
    free_digits = list(range(1, 100))
    pieces: list[str] = []

    def ring_token(a: int, b: int) -> str:
        key = (a, b) if a < b else (b, a)
        bond = mol.bond_between(a, b)
        if key in digit_of:
            digit = digit_of.pop(key)
            free_digits.append(digit)
            free_digits.sort()
            prefix = ""
        else:
            digit = free_digits.pop(0)
            digit_of[key] = digit
            prefix = _bond_symbol(mol, bond, a, b)
        return prefix + (str(digit) if digit < 10 else f"%{digit:02d}")

    def walk(node: int) -> None:
        pieces.append(_atom_token(mol, node))
        for partner in sorted(closures[node], key=lambda j: emit_pos[j]):
            pieces.append(ring_token(node, partner))
        kids = children[node]
        for k, child in enumerate(kids):
            bond = mol.bond_between(node, child)
            sym = _bond_symbol(mol, bond, node, child)
            if k < len(kids) - 1:
                pieces.append("(" + sym)
                walk(child)
                pieces.append(")")
            else:
                pieces.append(sym)
                walk(child)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        walk(start)
    finally:
        sys.setrecursionlimit(old_limit)
    return "".join(pieces)


def _bond_symbol(mol: Molecule, bond, i: int, j: int) -> str:
    if bond.aromatic:
        return ""
    if bond.order == 1:
        if mol.atoms[i].aromatic and mol.atoms[j].aromatic:
            return "-"
        return ""
    return _ORDER_SYMBOL[bond.order]


def _atom_token(mol: Molecule, i: int) -> str:
    atom = mol.atoms[i]
    if atom.is_dummy:
        if atom.attach_id is None:
            return DUMMY
        return f"[{atom.attach_id}*]"
    needs_bracket = (
        atom.charge != 0
        or atom.isotope is not None
        or atom.explicit_h is not None
        or atom.element == "H"
        or (atom.aromatic and atom.element not in ("B", "C", "N", "O", "P", "S"))
        or atom.element not in ORGANIC_SUBSET
    )
    symbol = atom.element.lower() if atom.aromatic else atom.element
    if not needs_bracket:
        return symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol)
    h_count = mol.total_h(i)
    if h_count == 1:
        parts.append("H")
    elif h_count > 1:
        parts.append(f"H{h_count}")
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        parts.append(sign if abs(atom.charge) == 1 else f"{sign}{abs(atom.charge)}")
    parts.append("]")
    return "".join(parts)

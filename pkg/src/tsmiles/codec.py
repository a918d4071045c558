"""Tree codec: AMT <-> full binary tree <-> t-SMILES text.

The serialization walks the full binary tree in level order.  ``&`` marks an
empty tree node; ``^`` separates two adjacent fragment segments.  Two
dialects are supported: ``paper`` additionally uses ``&`` as the separator
when two fragments meet across a level boundary (the form the worked golden
example uses); ``strict`` uses ``^`` for every fragment adjacency.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .chem import Molecule, canonical_key, kekulize, parse_smiles, write_input_order
from .errors import (
    CountMismatch,
    EmptyInput,
    KekulizationFailed,
    LeadingMarker,
    MalformedFBT,
    SurplusTokens,
    TruncatedTree,
    TsmilesError,
    TsmilesParseError,
)
from .fragmenter import (
    AMT,
    CutRule,
    FragmentEdge,
    build_amt,
    find_cut_bonds,
    fragment_dummy,
    fragment_shared,
)

SCHEMES = ("TSSA", "TSDY", "TSID", "TS_Vanilla")
DIALECTS = ("paper", "strict")


class ParseFailed(TsmilesParseError):
    code = "parse-failed"


@dataclass(frozen=True)
class TString:
    """A t-SMILES text together with its scheme and dialect tags."""

    text: str
    scheme: str
    dialect: str = "paper"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise TsmilesError(f"unknown scheme {self.scheme!r}")
        if self.dialect not in DIALECTS:
            raise TsmilesError(f"unknown dialect {self.dialect!r}")


class FbtNode:
    """Node of the full binary tree; ``fragment is None`` marks an empty node."""

    __slots__ = ("fragment", "left", "right", "amt_node")

    def __init__(self, fragment: Molecule | None, left=None, right=None, amt_node=None):
        self.fragment = fragment
        self.left: FbtNode | None = left
        self.right: FbtNode | None = right
        self.amt_node = amt_node

    @property
    def is_empty(self) -> bool:
        return self.fragment is None


def fbt_counts(root: FbtNode) -> tuple[int, int]:
    """(fragment node count, empty node count)."""
    frags = empties = 0
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_empty:
            empties += 1
        else:
            frags += 1
            stack.extend((node.left, node.right))
    return frags, empties


def fbt_levels(root: FbtNode) -> list[list[FbtNode]]:
    levels = [[root]]
    while True:
        nxt: list[FbtNode] = []
        for node in levels[-1]:
            if not node.is_empty:
                nxt.extend((node.left, node.right))
        if not nxt:
            return levels
        levels.append(nxt)


def fbt_equal(a: FbtNode, b: FbtNode) -> bool:
    """Structural equality; fragments compare by canonical key."""
    if a.is_empty or b.is_empty:
        return a.is_empty and b.is_empty
    if canonical_key(a.fragment) != canonical_key(b.fragment):
        return False
    return fbt_equal(a.left, b.left) and fbt_equal(a.right, b.right)


# --------------------------------------------------------------------------
# AMT <-> FBT


def amt_to_fbt(amt: AMT) -> FbtNode:
    """Left-child/right-sibling transform with empty-marker padding."""

    def transform(node_id: int, next_siblings: list[int]) -> FbtNode:
        kids = amt.children[node_id]
        left = transform(kids[0], kids[1:]) if kids else FbtNode(None)
        right = (
            transform(next_siblings[0], next_siblings[1:])
            if next_siblings
            else FbtNode(None)
        )
        return FbtNode(amt.nodes[node_id], left, right, amt_node=node_id)

    return transform(amt.root, [])


def fbt_to_amt(fbt: FbtNode, scheme: str) -> AMT:
    """Exact inverse of ``amt_to_fbt``; node ids follow level order."""
    if fbt.is_empty:
        raise MalformedFBT("root of the binary tree is an empty marker")
    if fbt.right is None or fbt.left is None:
        raise MalformedFBT("fragment node missing children")
    if not fbt.right.is_empty:
        raise MalformedFBT("root has a sibling")

    nodes: list[Molecule] = []
    children: dict[int, list[int]] = {}
    parent: dict[int, int] = {}
    edges: dict[tuple[int, int], FragmentEdge] = {}

    def sibling_chain(first: FbtNode) -> list[FbtNode]:
        out = []
        node = first
        while not node.is_empty:
            if node.left is None or node.right is None:
                raise MalformedFBT("fragment node missing children")
            out.append(node)
            node = node.right
        return out

    queue: list[tuple[FbtNode, int | None]] = [(fbt, None)]
    while queue:
        node, parent_id = queue.pop(0)
        node_id = len(nodes)
        nodes.append(node.fragment)
        children[node_id] = []
        if parent_id is not None:
            parent[node_id] = parent_id
            children[parent_id].append(node_id)
            edges[(parent_id, node_id)] = FragmentEdge(
                parent_id, node_id, None, None, 1, (parent_id, node_id)
            )
        for child in sibling_chain(node.left):
            queue.append((child, node_id))

    return AMT(
        nodes=nodes,
        kinds=["frag"] * len(nodes),
        root=0,
        children=children,
        parent=parent,
        edges=edges,
        scheme=scheme,
    )


# --------------------------------------------------------------------------
# Serialization


def fragment_text(fragment: Molecule) -> str:
    """Input-order fragment SMILES, kekulized when kekulization succeeds."""
    try:
        return write_input_order(kekulize(fragment))
    except KekulizationFailed:
        return write_input_order(fragment)


def serialize(fbt: FbtNode, dialect: str = "paper") -> str:
    if dialect not in DIALECTS:
        raise TsmilesError(f"unknown dialect {dialect!r}")
    pieces: list[str] = []
    prev: tuple[int, bool] | None = None  # (level index, was fragment)
    for level_idx, level in enumerate(fbt_levels(fbt)):
        for node in level:
            if node.is_empty:
                pieces.append("&")
                prev = (level_idx, False)
                continue
            if prev is not None and prev[1]:
                if prev[0] == level_idx:
                    pieces.append("^")
                else:
                    pieces.append("&" if dialect == "paper" else "^")
            pieces.append(fragment_text(node.fragment))
            prev = (level_idx, True)
    return "".join(pieces)


# --------------------------------------------------------------------------
# Parsing

_LEX = re.compile(r"[&^]|[^&^]+")


def _lex(text: str) -> list[tuple[str, str]]:
    tokens = []
    for match in _LEX.finditer(text):
        piece = match.group()
        if piece == "&":
            tokens.append(("amp", piece))
        elif piece == "^":
            tokens.append(("caret", piece))
        else:
            tokens.append(("frag", piece))
    return tokens


def parse_tsmiles(text: str, dialect: str = "paper", lenient: bool = False) -> FbtNode:
    """Rebuild the full binary tree from a t-SMILES string.

    In the paper dialect a ``&`` right after a level ending in a fragment and
    right before another fragment is ambiguous between a boundary separator
    and an empty node; the parser resolves it by search, preferring the
    separator reading, and fails with a count error when no reading yields a
    complete tree.
    """
    if dialect not in DIALECTS:
        raise TsmilesError(f"unknown dialect {dialect!r}")
    if not text:
        raise EmptyInput("empty t-SMILES text")
    tokens = _lex(text)
    if tokens[0][0] != "frag":
        raise LeadingMarker(f"t-SMILES text starts with {tokens[0][1]!r}")

    status = {"truncated": False, "surplus": False}

    def read_items(pos: int, needed: int):
        """Collect ``needed`` items; returns (items, next position) or None."""
        items: list[str | None] = []
        while len(items) < needed:
            if pos >= len(tokens):
                if lenient:
                    items.extend([None] * (needed - len(items)))
                    return items, pos
                status["truncated"] = True
                return None
            kind, value = tokens[pos]
            if kind == "amp":
                items.append(None)
            elif kind == "frag":
                items.append(value)
            pos += 1
        return items, pos

    def attempt(pos: int, prev_level: list[str | None]):
        needed = 2 * sum(1 for item in prev_level if item is not None)
        if needed == 0:
            if pos != len(tokens):
                status["surplus"] = True
                return None
            return []
        starts: list[int] = []
        if prev_level[-1] is not None and pos < len(tokens):
            kind = tokens[pos][0]
            if kind == "caret":
                starts = [pos + 1]
            elif kind == "amp":
                nxt = tokens[pos + 1][0] if pos + 1 < len(tokens) else None
                if dialect == "paper" and nxt == "frag":
                    starts = [pos + 1, pos]
                else:
                    starts = [pos]
            else:  # two fragments meeting at a boundary without a separator
                return None
        else:
            starts = [pos]
        for start in starts:
            got = read_items(start, needed)
            if got is None:
                continue
            items, after = got
            rest = attempt(after, items)
            if rest is not None:
                return [items] + rest
        return None

    first_level = [tokens[0][1]]
    levels = attempt(1, first_level)
    if levels is None:
        if status["truncated"] and not status["surplus"]:
            raise TruncatedTree("t-SMILES text ends before the tree is complete")
        if status["surplus"] and not status["truncated"]:
            raise SurplusTokens("t-SMILES text continues past a complete tree")
        raise CountMismatch("marker counts admit no complete tree")
    levels = [first_level] + levels

    frag_total = sum(1 for t in tokens if t[0] == "frag")
    empty_total = sum(len(lv) for lv in levels) - frag_total
    if empty_total != frag_total + 1:
        raise CountMismatch(
            f"{empty_total} empty markers for {frag_total} fragments"
        )

    return _levels_to_fbt(levels)


def _levels_to_fbt(levels: list[list[str | None]]) -> FbtNode:
    parsed: list[list[FbtNode]] = []
    for level in levels:
        parsed.append(
            [
                FbtNode(None) if item is None else FbtNode(parse_smiles(item))
                for item in level
            ]
        )
    for level_idx in range(len(parsed) - 1):
        slot = 0
        for node in parsed[level_idx]:
            if node.is_empty:
                continue
            node.left = parsed[level_idx + 1][slot]
            node.right = parsed[level_idx + 1][slot + 1]
            slot += 2
    # A lenient parse may pad an entire trailing level of empties.
    last = parsed[-1]
    for node in last:
        if not node.is_empty:
            node.left = FbtNode(None)
            node.right = FbtNode(None)
    return parsed[0][0]


# --------------------------------------------------------------------------
# Whole-molecule operations

_ID_PATTERN = re.compile(r"\[\d+\*\]")


def strip_ids(text: str, dialect: str = "paper") -> str:
    """Rewrite every ``[n*]`` as a bare ``*``; markers are untouched."""
    try:
        parse_tsmiles(text, dialect)
    except TsmilesParseError as exc:
        raise ParseFailed(f"not a valid t-SMILES text: {exc}") from exc
    ids = [int(m.group()[1:-2]) for m in _ID_PATTERN.finditer(text)]
    counts: dict[int, int] = {}
    for i in ids:
        counts[i] = counts.get(i, 0) + 1
    bad = [i for i, c in counts.items() if c != 2]
    if bad:
        raise ParseFailed(f"attach ids {sorted(bad)} do not occur exactly twice")
    return _ID_PATTERN.sub("*", text)


def _staged(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except TsmilesError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise


def encode(
    mol: Molecule,
    scheme: str,
    rule: CutRule | None = None,
    dialect: str = "paper",
    root_policy: str = "canonical_first",
    root_index: int = 0,
) -> TString:
    """Full encode pipeline; TS_Vanilla bypasses it with canonical SMILES."""
    if scheme not in SCHEMES:
        raise TsmilesError(f"unknown scheme {scheme!r}")
    if scheme == "TS_Vanilla":
        return TString(canonical_key(mol), scheme, dialect)
    amt = build_tree(mol, scheme, rule, root_policy, root_index)
    fbt = _staged("transform", amt_to_fbt, amt)
    text = _staged("serialize", serialize, fbt, dialect)
    return TString(text, scheme, dialect)


def build_tree(
    mol: Molecule,
    scheme: str,
    rule: CutRule | None = None,
    root_policy: str = "canonical_first",
    root_index: int = 0,
) -> AMT:
    """Kekulize, cut, split per scheme and root: the shared encode front end."""
    rule = rule or CutRule()
    try:
        mol = kekulize(mol)
    except KekulizationFailed:
        pass  # fall back to aromatic-form fragments
    cuts = _staged("cut", find_cut_bonds, mol, rule)
    if scheme in ("TSID", "TSDY"):
        fragments, edges = _staged(
            "fragment", fragment_dummy, mol, cuts, scheme == "TSID"
        )
        kinds = None
    else:
        groups, bond_nodes, edges = _staged("fragment", fragment_shared, mol, cuts)
        fragments = groups + bond_nodes
        kinds = ["group"] * len(groups) + ["bond"] * len(bond_nodes)
    return _staged(
        "tree",
        build_amt,
        fragments,
        edges,
        scheme=scheme,
        root_policy=root_policy,
        root_index=root_index,
        kinds=kinds,
    )


def enumerate_roots(
    mol: Molecule,
    scheme: str,
    rule: CutRule | None = None,
    dialect: str = "paper",
) -> list[TString]:
    """One t-SMILES per fragment-tree node used as the root."""
    if scheme == "TS_Vanilla":
        return [encode(mol, scheme, rule, dialect)]
    base = build_tree(mol, scheme, rule, root_policy="index", root_index=0)
    out = []
    for node_id in range(base.node_count()):
        amt = build_tree(mol, scheme, rule, root_policy="index", root_index=node_id)
        out.append(TString(serialize(amt_to_fbt(amt), dialect), scheme, dialect))
    return out

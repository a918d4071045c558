"""Chemical substrate: graph model, SMILES codec, kekulization, descriptors."""

from __future__ import annotations

from ..errors import KekulizationFailed
from .canon import canonical_order, canonical_rank
from .kekulize import kekulize
from .model import (
    Atom,
    Bond,
    Molecule,
    MoleculeBuilder,
    ValenceReport,
    atoms_signature,
    descriptors,
    make_bond,
    validate_valence,
)
from .smiles import emit_smiles, parse_smiles, write_input_order


def write_smiles(mol: Molecule, mode: str = "input_order", kekulized: bool = False) -> str:
    """Serialize a molecule; ``mode`` is ``input_order`` or ``canonical``."""
    if kekulized:
        mol = kekulize(mol)
    if mode == "input_order":
        return write_input_order(mol)
    if mode == "canonical":
        return canonical_order(mol)[0]
    raise ValueError(f"unknown write mode {mode!r}")


def canonical_smiles(mol: Molecule, kekulized: bool = True) -> str:
    """Canonical text; with ``kekulized`` the Kekule normal form is used."""
    return write_smiles(mol, mode="canonical", kekulized=kekulized)


def canonical_key(mol: Molecule) -> str:
    """Comparison key for uniqueness/novelty: Kekule canonical when possible."""
    try:
        return canonical_smiles(mol, kekulized=True)
    except KekulizationFailed:
        return canonical_smiles(mol, kekulized=False)


__all__ = [
    "Atom",
    "Bond",
    "Molecule",
    "MoleculeBuilder",
    "ValenceReport",
    "atoms_signature",
    "canonical_key",
    "canonical_order",
    "canonical_rank",
    "canonical_smiles",
    "descriptors",
    "emit_smiles",
    "kekulize",
    "make_bond",
    "parse_smiles",
    "validate_valence",
    "write_input_order",
    "write_smiles",
]

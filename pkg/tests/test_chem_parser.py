import pytest

from tsmiles.errors import (
    AromaticityError,
    MultiComponentUnsupported,
    StereoUnsupported,
    UnbalancedParen,
    UnbalancedRing,
    UnknownToken,
)
from tsmiles.chem import parse_smiles, write_input_order

from helpers import brute_force_isomorphic


def test_single_carbon():
    mol = parse_smiles("C")
    assert len(mol.atoms) == 1
    assert mol.atoms[0].element == "C"
    assert mol.implicit_h(0) == 4


def test_paper_fragment_with_attach_ids():
    mol = parse_smiles("[1*]C1=CC=C([2*])C=C1")
    assert len(mol.atoms) == 8
    dummies = [a for a in mol.atoms if a.is_dummy]
    assert sorted(a.attach_id for a in dummies) == [1, 2]
    ring_atoms = [i for i, a in enumerate(mol.atoms) if not a.is_dummy]
    assert len(ring_atoms) == 6
    assert all(mol.in_ring(i) for i in ring_atoms)


def test_unbalanced_ring_digit():
    with pytest.raises(UnbalancedRing) as exc:
        parse_smiles("C1CC")
    assert exc.value.offset == 1


@pytest.mark.parametrize(
    "text,error,offset",
    [
        ("C(C", UnbalancedParen, 1),
        ("CC)", UnbalancedParen, 2),
        ("(C)C", UnbalancedParen, 0),
        ("C/C=C/C", StereoUnsupported, 1),
        ("C[C@H](N)O", StereoUnsupported, 3),
        ("CC.CC", MultiComponentUnsupported, 2),
        ("CQ", UnknownToken, 1),
        ("C=", UnknownToken, 1),
        ("C==C", UnknownToken, 2),
        ("C%1C", UnknownToken, 1),
        ("cc", AromaticityError, 0),
    ],
)
def test_errors_carry_offsets(text, error, offset):
    with pytest.raises(error) as exc:
        parse_smiles(text)
    assert exc.value.offset == offset


def test_bracket_atoms():
    mol = parse_smiles("[NH4+]")
    atom = mol.atoms[0]
    assert (atom.element, atom.charge, atom.explicit_h) == ("N", 1, 4)
    mol = parse_smiles("[13CH3]Cl")
    assert mol.atoms[0].isotope == 13
    assert mol.atoms[0].explicit_h == 3
    assert mol.atoms[1].element == "Cl"
    mol = parse_smiles("[O-]S(=O)(=O)[O-]")
    assert [a.charge for a in mol.atoms] == [-1, 0, 0, 0, -1]


def test_charge_forms():
    assert parse_smiles("[N+2]").atoms[0].charge == 2
    assert parse_smiles("[N++]").atoms[0].charge == 2
    assert parse_smiles("[O--]").atoms[0].charge == -2


def test_percent_ring_closure():
    mol = parse_smiles("C%12CCCCC%12")
    assert len(mol.bonds) == 6
    assert mol.in_ring(0)


def test_aromatic_flags_and_implicit_bonds():
    mol = parse_smiles("c1ccccc1")
    assert all(a.aromatic for a in mol.atoms)
    assert all(b.aromatic for b in mol.bonds)
    biphenyl = parse_smiles("c1ccccc1c1ccccc1")
    link = biphenyl.bond_between(5, 6)
    assert link is not None and not link.aromatic


def test_ring_closure_bond_symbol_conflict():
    with pytest.raises(UnbalancedRing):
        parse_smiles("C=1CCCCC-1")
    mol = parse_smiles("C=1CCCCC=1")
    assert mol.bond_between(0, 5).order == 2


def test_duplicate_ring_bond_rejected():
    with pytest.raises(UnbalancedRing):
        parse_smiles("C1C1")
    with pytest.raises(UnbalancedRing):
        parse_smiles("C11")


@pytest.mark.parametrize(
    "text",
    [
        "C",
        "CCO",
        "C(C)(C)O",
        "C1CCCCC1",
        "c1ccccc1",
        "[1*]CC[2*]",
        "N#CC",
        "CC(=O)OC",
        "c1cc[nH]c1",
    ],
)
def test_reserialization_reparses_isomorphic(text):
    mol = parse_smiles(text)
    again = parse_smiles(write_input_order(mol))
    assert brute_force_isomorphic(mol, again)

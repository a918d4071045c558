import pytest

from tsmiles.chem import (
    Atom,
    MoleculeBuilder,
    descriptors,
    parse_smiles,
    validate_valence,
)


def test_methane_ok():
    assert validate_valence(parse_smiles("C")).ok


def test_trivalent_oxygen_flagged():
    # The classic 'CO=CC'-style violation: oxygen holding three bonds.
    b = MoleculeBuilder()
    o = b.add_atom(Atom("O"))
    for _ in range(2):
        b.add_atom(Atom("C"))
    b.add_bond(o, 1, 1)
    b.add_bond(o, 2, 2)
    report = validate_valence(b.build())
    assert not report.ok
    assert report.violations[0][0] == o
    assert report.violations[0][1] == 3


def test_charged_ammonium_ok():
    report = validate_valence(parse_smiles("[NH4+]"))
    assert report.ok


def test_charge_shifts_allowed_valence():
    assert validate_valence(parse_smiles("[O-]C")).ok
    assert not validate_valence(parse_smiles("[OH2+2]")).ok


def test_dummy_degree_one():
    assert validate_valence(parse_smiles("[1*]C")).ok
    b = MoleculeBuilder()
    d = b.add_atom(Atom("*"))
    b.add_atom(Atom("C"))
    b.add_atom(Atom("C"))
    b.add_bond(d, 1)
    b.add_bond(d, 2)
    assert not validate_valence(b.build()).ok


def test_descriptors_methane():
    desc = descriptors(parse_smiles("C"))
    assert desc["heavy_atom_count"] == 1
    assert desc["ring_count"] == 0
    assert desc["mol_weight"] == pytest.approx(16.043, abs=1e-3)


def test_descriptors_benzene():
    desc = descriptors(parse_smiles("c1ccccc1"))
    assert desc["heavy_atom_count"] == 6
    assert desc["ring_count"] == 1
    assert desc["mol_weight"] == pytest.approx(78.114, abs=1e-3)


def test_descriptors_naphthalene_ring_count():
    desc = descriptors(parse_smiles("c1ccc2ccccc2c1"))
    assert desc["ring_count"] == 2

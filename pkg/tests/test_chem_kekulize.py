import pytest

from tsmiles.errors import KekulizationFailed
from tsmiles.chem import (
    Molecule,
    kekulize,
    parse_smiles,
    validate_valence,
    write_input_order,
)

from helpers import enumerate_kekule_assignments


def test_benzene_alternating():
    mol = kekulize(parse_smiles("c1ccccc1"))
    orders = sorted(b.order for b in mol.bonds)
    assert orders == [1, 1, 1, 2, 2, 2]
    assert not any(a.aromatic for a in mol.atoms)
    assert write_input_order(mol) == "C1=CC=CC=C1"
    assert validate_valence(mol).ok


def test_pyrrole_nitrogen_gets_no_double_bond():
    mol = parse_smiles("c1cc[nH]c1")
    n_idx = next(i for i, a in enumerate(mol.atoms) if a.element == "N")
    solutions = enumerate_kekule_assignments(mol)
    assert solutions, "oracle found no valid assignment"
    for solution in solutions:
        for key, order in solution.items():
            if n_idx in key:
                assert order == 1
    kek = kekulize(mol)
    assert {b.key: b.order for b in kek.bonds if b.order == 2}.keys() <= {
        k for sol in solutions for k, o in sol.items() if o == 2
    }
    assert validate_valence(kek).ok


def test_kekulize_matches_oracle_on_rings():
    for smiles in ["c1ccccc1", "c1ccncc1", "c1ccoc1", "c1ccsc1", "c1cc[nH]c1",
                   "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1", "Cc1ccc(O)cc1"]:
        mol = parse_smiles(smiles)
        solutions = enumerate_kekule_assignments(mol)
        kek = kekulize(mol)
        chosen = {
            b.key: b.order
            for b in kek.bonds
            if mol.bond_between(b.a, b.b).aromatic
        }
        assert chosen in solutions, smiles


def test_dangling_aromatic_atom_fails():
    mol = parse_smiles("c1ccccc1")
    broken = Molecule(mol.atoms, [b for b in mol.bonds if b.key != (0, 1)])
    with pytest.raises(KekulizationFailed):
        kekulize(broken)


def test_kekulized_output_is_valence_valid():
    for smiles in ["c1ccncc1", "c1cnc2[nH]ccc2c1", "Cn1ccnc1", "c1cc[n+]([O-])cc1"]:
        kek = kekulize(parse_smiles(smiles))
        assert validate_valence(kek).ok, smiles


def test_kekulize_noop_without_aromatics():
    mol = parse_smiles("CC(=O)OC")
    assert kekulize(mol) is mol

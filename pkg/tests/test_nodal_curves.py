import pytest

from crtwistor import nodal_curves as nc
from crtwistor.errors import DomainError
from crtwistor.symalg import GaussRat

I = GaussRat(0, 1)


def test_standard_basis_is_global_and_dual():
    secs, dual = nc.standard_basis()
    assert all(nc.is_global(s) for s in secs)
    pm = nc.pairing_matrix(secs, dual)
    assert pm == [[int(i == j) for j in range(4)] for i in range(4)]


def test_global_sections_dimension():
    assert len(nc.global_sections()) == 4
    assert len(nc.global_sections(3)) == 4
    assert nc.spans(nc.standard_basis()[0])


def test_compatibility_detects_violations():
    bad = nc.NormalSection(nc.BranchData(1, (0,), (0,)), nc.BranchData(-1, (0,), (0,)))
    assert not nc.check_compatibility(bad)  # b' - b must equal the residue
    good = nc.NormalSection(nc.BranchData(1, (0,), (0,)), nc.BranchData(-1, (0,), (1,)))
    assert nc.check_compatibility(good)


def test_pole_at_node():
    with pytest.raises(DomainError):
        nc.BranchData(1).a_at(0)


def test_real_structure_on_sections():
    s0, s1, s2, s3 = nc.standard_basis()[0]
    assert s0.is_real() and s1.is_real()
    assert s2.real_conjugate().same(s3)
    assert s1.tangent_to_boundary() and not s0.tangent_to_boundary()


def test_one_form_residues():
    assert nc.one_form_compatible(I, -I)
    assert not nc.one_form_compatible(1, 1)


def test_splitting_types():
    assert nc.splitting_enumerate() == {nc.SplittingType(0, 2, 2), nc.SplittingType(1, 1, 2)}
    with pytest.raises(ValueError):
        nc.splitting_enumerate(constraints=(1, 3))


def test_splitting_without_tangent_constraint_is_larger():
    assert len(nc.splitting_enumerate(constraints=(1, 2))) > 2


def test_nodal_cohomology():
    assert nc.nodal_cohomology(nc.EQ11, nc.EQ11) == (7, 0)
    assert nc.line_bundle_cohomology([-2]) == (0, 1)


def test_deformation_dimension():
    d = nc.deformation_dimension()
    assert (d["h0"], d["dimension"], d["nodal_subfamily"]) == (7, 4, 3)


def test_obstructed_split():
    with pytest.raises(DomainError):
        nc.deformation_dimension(nc.SplittingType(-1, 0, 0))

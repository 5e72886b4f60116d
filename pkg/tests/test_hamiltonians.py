import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fqlcu.hamiltonians import (CellSpec, DiagonalHamiltonian, FCIDumpError, GeneralHamiltonian,
                                UnsupportedDimensionError, count_eightfold_orbits,
                                gen_random_dense, gen_ueg_dpw, load_fcidump, write_fcidump)

HEADER = " &FCI NORB={norb},NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n &END\n"


def _write(tmp_path, body, norb=2):
    f = tmp_path / "FCIDUMP"
    f.write_text(HEADER.format(norb=norb) + body)
    return f


def test_single_two_body_record(tmp_path):
    h = load_fcidump(_write(tmp_path, "0.5 1 1 1 1\n"))
    expect = np.zeros((2,) * 4)
    expect[0, 0, 0, 0] = 0.5
    np.testing.assert_array_equal(h.h2, expect)
    assert not h.h1.any()
    assert h.n_electrons == 2


def test_one_body_record_symmetrized(tmp_path):
    h = load_fcidump(_write(tmp_path, "1.0 1 2 0 0\n"))
    assert h.h1[0, 1] == h.h1[1, 0] == 1.0


def test_eightfold_expansion_and_core(tmp_path):
    h = load_fcidump(_write(tmp_path, "0.25 1 2 2 1\n-7.5 0 0 0 0\n1.5D-1 2 2 0 0\n"))
    assert h.core_energy == -7.5
    assert h.h1[1, 1] == 0.15
    assert h.symmetry_violations() == []
    assert h.h2[0, 1, 1, 0] == h.h2[1, 0, 0, 1] == h.h2[0, 1, 0, 1] == h.h2[1, 0, 1, 0] == 0.25


def test_malformed_line_reports_line_number(tmp_path):
    with pytest.raises(FCIDumpError, match="line 6"):
        load_fcidump(_write(tmp_path, "0.5 1 1 1 1\n0.5 1 x 1 1\n"))


def test_wrong_field_count(tmp_path):
    with pytest.raises(FCIDumpError, match="line 5"):
        load_fcidump(_write(tmp_path, "0.5 1 1 1\n"))


def test_norb_not_power_of_two(tmp_path):
    with pytest.raises(UnsupportedDimensionError):
        load_fcidump(_write(tmp_path, "0.5 1 1 1 1\n", norb=3))


def test_missing_norb(tmp_path):
    f = tmp_path / "F"
    f.write_text("0.5 1 1 1 1\n")
    with pytest.raises(FCIDumpError):
        load_fcidump(f)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_fcidump(tmp_path / "nope")


@settings(max_examples=15)
@given(seed=st.integers(0, 10**6), m=st.integers(1, 3))
def test_fcidump_round_trip_bit_exact(tmp_path_factory, seed, m):
    d = 2**m
    ham = gen_random_dense(d, seed)
    # zero whole orbits to exercise sparsity while keeping the symmetry exact
    h2 = ham.h2 * (ham.h2 > 0.0) if seed % 2 else ham.h2
    src = GeneralHamiltonian(ham.h1, h2, core_energy=1.0 / 3.0, n_electrons=4)
    path = tmp_path_factory.mktemp("rt") / "FCIDUMP"
    write_fcidump(src, path)
    back = load_fcidump(path)
    np.testing.assert_array_equal(back.h1, src.h1)
    np.testing.assert_array_equal(back.h2, src.h2)
    assert back.core_energy == src.core_energy and back.n_electrons == 4
    path2 = path.with_name("again")
    write_fcidump(back, path2)
    assert path2.read_text() == path.read_text()


def test_random_dense_deterministic_and_symmetric():
    a, b = gen_random_dense(4, 11), gen_random_dense(4, 11)
    np.testing.assert_array_equal(a.h2, b.h2)
    np.testing.assert_array_equal(a.h1, b.h1)
    assert a.symmetry_violations() == []
    assert not np.array_equal(a.h2, gen_random_dense(4, 12).h2)


@pytest.mark.parametrize("d", [2, 4])
def test_random_dense_independent_values_equal_orbit_count(d):
    k = d * (d + 1) // 2
    assert count_eightfold_orbits(d) == k * (k + 1) // 2
    h = gen_random_dense(d, 3)
    assert len(np.unique(h.h2)) == count_eightfold_orbits(d)
    assert (np.abs(h.h2) <= 1).all()


def test_orbit_count_at_four_is_55():
    assert count_eightfold_orbits(4) == 55


def test_bad_dimension():
    with pytest.raises(UnsupportedDimensionError):
        gen_random_dense(6, 0)
    with pytest.raises(UnsupportedDimensionError):
        GeneralHamiltonian(np.zeros((3, 3)), np.zeros((3,) * 4))


def test_ueg_cell_volume():
    c = CellSpec.ueg(14, 5.0, 2)
    assert c.volume == pytest.approx(4 * np.pi / 3 * 125 * 14)
    assert c.D == 8


def _displacement_classes(n):
    pts = np.array(list(itertools.product(range(n), repeat=3)))
    return (pts[:, None, :] - pts[None, :, :]) % n


@pytest.mark.parametrize("n", [2, 4])
def test_ueg_translation_invariance_exhaustive(n):
    h = gen_ueg_dpw(CellSpec.ueg(14, 5.0, n))
    delta = _displacement_classes(n)
    key = (delta[..., 0] * n + delta[..., 1]) * n + delta[..., 2]
    for mat in (h.T_kin, h.V):
        for k in np.unique(key):
            vals = mat[key == k]
            assert (vals == vals[0]).all()
    assert len(set(np.diag(h.T_kin))) == 1
    np.testing.assert_array_equal(h.V, h.V.T)
    np.testing.assert_array_equal(h.T_kin, h.T_kin.T)
    assert not h.U_ext.any()


def test_ueg_matches_direct_formula_grid2():
    cell = CellSpec.ueg(4, 2.0, 2)
    h = gen_ueg_dpw(cell)
    L = cell.length
    pts = np.array(list(itertools.product(range(2), repeat=3))) * L / 2
    nus = np.array(list(itertools.product([-1, 0], repeat=3)))
    ks = 2 * np.pi * nus / L
    for p in range(8):
        for q in range(8):
            d = pts[p] - pts[q]
            t = sum((k @ k) / 2 * np.cos(k @ d) for k in ks) / 8
            v = 2 * np.pi / cell.volume * sum(np.cos(k @ d) / (k @ k) for k in ks if k @ k > 0)
            assert h.T_kin[p, q] == pytest.approx(t, abs=1e-12)
            assert h.V[p, q] == pytest.approx(v, abs=1e-12)


def test_material_external_potential_is_diagonal():
    cell = CellSpec(N=2, volume=100.0, grid_side=2, nuclei=((1.0, (0.3, 0.1, 0.2)),))
    h = gen_ueg_dpw(cell)
    assert (h.U_ext == np.diag(np.diag(h.U_ext))).all()
    assert np.diag(h.U_ext).any()


def test_ueg_errors():
    with pytest.raises(ValueError):
        gen_ueg_dpw(CellSpec(N=2, volume=0.0, grid_side=2))
    with pytest.raises(ValueError):
        gen_ueg_dpw(CellSpec(N=2, volume=1.0, grid_side=1))


def test_diagonal_to_general():
    V = np.array([[1.0, 2.0], [2.0, 3.0]])
    h = DiagonalHamiltonian(np.eye(2), np.zeros((2, 2)), V).to_general()
    assert h.h2[0, 0, 1, 1] == 2.0 and h.h2[1, 1, 1, 1] == 3.0 and h.h2[0, 1, 0, 1] == 0.0

import numpy as np
import pytest

from cqca.hybrid import (LightDarkGrid, dark_cells, dark_state, hybrid_step, measurement_round,
                         perturb, perturb_and_track, run_hybrid)
from cqca.lattice import HYBRID_PRESET, preset
from cqca.tableau import DETERMINISTIC, PURIFYING, StabilizerGroup, mean_mutual_information, pauli_row

SPEC = HYBRID_PRESET


@pytest.mark.parametrize("m", [8, 16, 32])
def test_power_of_two_purifies_at_m(m):
    tr = run_hybrid(SPEC, m, 4 * m)
    assert tr.entropy[0] == m
    assert tr.t_star == m and tr.entropy[-1] == 0
    assert tr.purified_bits[1:] == [1] * m
    assert tr.plateau == dark_state(m)


@pytest.mark.parametrize("m,t_star,S", [(12, 4, 8), (24, 8, 16), (40, 8, 32)])
def test_non_power_of_two_plateaus(m, t_star, S):
    tr = run_hybrid(SPEC, m, 4 * m)
    assert tr.t_star == t_star and tr.entropy[-1] == S
    assert tr.purified_bits[1:] == [1] * t_star


def test_first_round_purifies_every_cell():
    g, kinds = measurement_round(StabilizerGroup.fully_mixed(6), SPEC)
    assert kinds == [PURIFYING] * 6 and g.k == 6
    _, kinds = measurement_round(g, SPEC)
    assert kinds == [DETERMINISTIC] * 6


def test_dark_state_is_absorbing():
    g = dark_state(8)
    assert hybrid_step(g, SPEC) == g
    assert dark_cells(g).all()
    with pytest.raises(ValueError):
        dark_state(0)


def test_perturb_swaps():
    g = StabilizerGroup.product("XZYI", a=2)
    assert perturb(g, 0, "XZ") == StabilizerGroup.product("ZZYI", a=2)
    assert perturb(g, 1, "ZX") == StabilizerGroup.product("XXYI", a=2)
    assert perturb(g, 2, "XY") == StabilizerGroup.product("XZXI", a=2)
    assert perturb(g, 2, "YZ") == StabilizerGroup.product("XZZI", a=2)
    with pytest.raises(ValueError):
        perturb(g, 0, "XX")


def test_perturbation_heals_at_m():
    m = 16
    grid = perturb_and_track(dark_state(m), SPEC, m, site=2 * m - 1)
    assert not grid.rows[0].all()
    assert grid.rows[m].all() and not grid.rows[m - 1].all()
    assert grid.cumulative_light()[-1] == grid.light.sum()
    assert grid.to_pbm().startswith(f"P1\n{m} {m + 1}\n".encode())
    assert grid.to_csv().splitlines()[1].startswith("0,")
    with pytest.raises(ValueError):
        perturb_and_track(StabilizerGroup.fully_mixed(4), SPEC, 4)


def test_light_dark_grid_counts():
    grid = LightDarkGrid(np.array([[True, False], [False, False]]))
    assert grid.cumulative_light().tolist() == [1, 3]
    assert grid.to_csv() == "t,cell0,cell1\n0,D,L\n1,L,L\n"


def test_mutual_information_law():
    """Mean I(A : rest) equals min(|A|/2, t) for |A| <= L/2 while t <= m/2."""
    m = 32
    tr = run_hybrid(SPEC, m, m // 2, keep_groups=True, stop_at_plateau=False)
    for t, g in enumerate(tr.groups):
        I = mean_mutual_information(g)
        A = np.arange(m + 1)
        assert np.array_equal(I[: m + 1], np.minimum(A / 2, t))


def test_csv():
    tr = run_hybrid(SPEC, 4, 8)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,S,purified_bits" and lines[1] == "0,4,0"


def test_dark_cell_detection():
    g = StabilizerGroup.product("XXZZ", a=2)
    assert dark_cells(g).tolist() == [True, False]
    assert g.contains(pauli_row(4, {1: "X"}))


def test_rejects_kagome():
    with pytest.raises(ValueError):
        hybrid_step(StabilizerGroup.fully_mixed(2, a=4), preset("kagome-t1"))

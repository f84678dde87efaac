import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import logical_dim, random_group
from cqca.codes import (ErasureModel, build_quasicyclic, contiguous_code_distance, crossing,
                        erased_sites, erasure_csv, erasure_failure, erasure_failure_rate,
                        logical_dim_on_region, rmt_failure_model, threshold, window_logical_dims)
from cqca.lattice import preset
from cqca.tableau import Region, StabilizerGroup, random_product_state, step


def _group(L, seed, a=1):
    return StabilizerGroup(random_group(L, np.random.default_rng(seed)), a=a)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10 ** 6), st.data())
def test_logical_dim_matches_enumeration(L, seed, data):
    g = _group(L, seed)
    W = data.draw(st.lists(st.integers(0, L - 1), min_size=1, max_size=L, unique=True))
    want = logical_dim(g.gens, W) if g.k else 2 * len(W)
    assert logical_dim_on_region(g, W) == want


def test_window_dims_and_distance_by_enumeration():
    for seed in range(8):
        g = _group(6, seed)
        if g.k == 6:
            with pytest.raises(ValueError):
                contiguous_code_distance(g)
            continue
        D = window_logical_dims(g)
        for s in range(6):
            for l in range(1, 7):
                W = list(Region(s, l).sites(6))
                assert D[s, l] == (logical_dim(g.gens, W) if g.k else 2 * l)
        d = min(l for l in range(1, 7) for s in range(6) if D[s, l] > 0)
        assert contiguous_code_distance(g) == d


def test_small_codes():
    # X on one site commutes with every XX check and is not itself a stabilizer
    g = StabilizerGroup.from_strings(["XXII", "IXXI", "IIXX"], a=1)
    assert contiguous_code_distance(g) == 1
    # 4-qubit code with stabilizers XXXX, ZZZZ has distance 2
    g = StabilizerGroup.from_strings(["XXXX", "ZZZZ"], a=1)
    assert contiguous_code_distance(g) == 2
    assert not erasure_failure(g, [0])
    assert erasure_failure(g, [0, 1])


def test_erasure_kernel_matches_direct():
    g = random_product_state(10, rng=4)
    g = StabilizerGroup(g.gens[:10], 2, check=False)  # rate 1/2
    for _ in range(6):
        g = step(g, preset("dense"))
    model = ErasureModel(0.3, trials=200, seed=5)
    p, se, fails = erasure_failure_rate(g, model)
    direct = sum(erasure_failure(g, W) for W in erased_sites(model, g.L))
    assert fails == direct and p == direct / 200
    assert erased_sites(model, g.L).shape == (200, 6)
    assert erasure_failure_rate(g, ErasureModel(0.0, 10))[0] == 0.0


def test_erasure_sampling_is_reproducible():
    a = erased_sites(ErasureModel(0.25, 50, seed=9), 40)
    b = erased_sites(ErasureModel(0.25, 50, seed=9), 40)
    assert np.array_equal(a, b)
    assert all(len(set(r)) == 10 for r in a)
    with pytest.raises(ValueError):
        ErasureModel(1.5)


def test_rmt_model():
    assert threshold(0.5) == 0.25
    assert rmt_failure_model(0.2, 0.5, 20) == pytest.approx(2.0 ** (-2 * 20 * 0.05 - 1))
    assert rmt_failure_model(0.1875, 0.5, 20, rounded=True) == pytest.approx(2.0 ** (-2 * 20 * 0.05 - 1))
    with pytest.raises(ValueError):
        rmt_failure_model(0.3, 0.5, 20)


def test_crossing():
    x = [0.1, 0.2, 0.3]
    assert crossing(x, [0, 1, 2], [1, 1, 1]) == pytest.approx(0.2)
    assert crossing(x, [0, 0.5, 2], [1, 1, 1]) == pytest.approx(0.2 + 0.1 / 3)
    assert crossing(x, [0, 0, 0], [1, 1, 1]) is None


def test_quasicyclic_snapshot():
    g0 = StabilizerGroup.translation_invariant([{0: "Z"}], 10)
    snap = build_quasicyclic(preset("dense"), g0, 20)
    assert snap.rate == 0.5
    assert snap.d1 == max(snap.d1_series) and snap.d1_series[0] == 1
    assert snap.d1_series.index(snap.d1) == snap.t
    assert snap.to_text().startswith(f"# t={snap.t} d1={snap.d1}")


def test_erasure_csv_rows():
    lines = erasure_csv([(0.1, 10, 1, 0.1, 0.09, None), (0.2, 10, 0, 0.0, 0.0, 0.125)]).splitlines()
    assert lines == ["e,trials,failures,P_F,stderr,rmt_prediction", "0.1,10,1,0.1,0.09,", "0.2,10,0,0,0,0.125"]

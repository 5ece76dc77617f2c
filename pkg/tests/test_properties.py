"""Invariant suite. ``CASES`` counts executed examples per property."""

from collections import Counter

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gridscan.data import SyntheticSpec, generate
from gridscan.geometry import Dataset, GridResolution, build_histogram
from gridscan.manifold import build_chain, build_manifold
from gridscan.scan import (
    AbsoluteDensity,
    CapPolicy,
    Found,
    FractionDensity,
    KeptCells,
    ScanConfig,
    certificate_violations,
    filter_cells,
    scan,
)

from oracles import dense_counts, greedy_chain

CASES: Counter = Counter()
EXAMPLES = 200

coordinate = st.one_of(
    st.floats(0.0, 1.0, allow_nan=False),
    st.sampled_from([0.0, 0.125, 0.25, 1 / 3, 0.5, 0.75, 1.0]),
)


@st.composite
def raw_datasets(draw, max_points=150, max_dim=3):
    J = draw(st.integers(1, max_points))
    N = draw(st.integers(1, max_dim))
    return Dataset(draw(arrays(np.float64, (J, N), elements=coordinate)))


@st.composite
def structured_datasets(draw):
    kind = draw(st.sampled_from(["sine-curve", "two-clusters", "uniform", "diagonal"]))
    J = draw(st.integers(20, 600))
    N = draw(st.integers(1, 3))
    return generate(SyntheticSpec(kind, J, N, draw(st.sampled_from([0.0, 0.05, 0.1])), draw(st.integers(0, 10**6))))


datasets = st.one_of(raw_datasets(), structured_datasets())

configs = st.builds(
    ScanConfig,
    volume_limit=st.sampled_from([0.2, 0.3, 0.4, 0.5, 0.75, 1.0]),
    coverage_fraction=st.sampled_from([0.5, 0.8, 0.9, 0.95, 1.0]),
    density=st.one_of(
        st.builds(FractionDensity, st.sampled_from([0.001, 0.005, 0.01, 0.05])),
        st.builds(AbsoluteDensity, st.integers(1, 6)),
    ),
    a_cap_policy=st.sampled_from(list(CapPolicy)),
)


def ceil_log2(n):
    return (n - 1).bit_length()


@settings(max_examples=EXAMPLES)
@given(raw_datasets(), st.integers(1, 20))
def test_counting_conservation(ds, a):
    CASES["counting_conservation"] += 1
    hist = build_histogram(ds, GridResolution(a, ds.dim))
    assert hist.total == ds.size
    assert hist.counts.min() >= 1
    ids = np.concatenate([hist.members(i) for i in range(len(hist))])
    assert np.array_equal(np.sort(ids), np.arange(ds.size))
    if a**ds.dim <= 4096:
        assert hist.as_dict() == dense_counts(ds.points, a)


@settings(max_examples=EXAMPLES)
@given(raw_datasets(), st.integers(1, 12), st.integers(1, 5), st.integers(0, 4))
def test_monotone_filtering(ds, a, p, dp):
    CASES["monotone_filtering"] += 1
    hist = build_histogram(ds, GridResolution(a, ds.dim))
    lo, hi = filter_cells(hist, p), filter_cells(hist, p + dp)
    assert hi.K <= lo.K and hi.covered <= lo.covered
    assert lo.K <= len(hist) and lo.covered <= ds.size
    assert np.all(lo.counts >= p)


@settings(max_examples=EXAMPLES)
@given(datasets, configs)
def test_volume_identity_and_termination(ds, config):
    CASES["volume_identity_and_termination"] += 1
    out = scan(ds, config)
    for entry in out.trace:
        assert entry.V_t * entry.a**ds.dim == entry.K
    assert len(out.trace) <= ceil_log2(out.cap) + 1
    a_seq = [e.a for e in out.trace]
    assert a_seq == [config.a_start * 2**i for i in range(len(a_seq))]


FOUND_SEEN = Counter()


@settings(max_examples=EXAMPLES)
@given(datasets, configs)
def test_found_certificate(ds, config):
    CASES["found_certificate"] += 1
    out = scan(ds, config)
    if isinstance(out, Found):
        FOUND_SEEN["found"] += 1
        assert out.kept.K >= 1
        assert certificate_violations(ds, out, config) == []
    else:
        FOUND_SEEN["not_found"] += 1


@settings(max_examples=EXAMPLES)
@given(datasets, configs, st.randoms(use_true_random=False))
def test_determinism_under_permutation(ds, config, rnd):
    CASES["determinism_under_permutation"] += 1
    perm = list(range(ds.size))
    rnd.shuffle(perm)
    first, second = scan(ds, config), scan(Dataset(ds.points[perm]), config)
    assert first.trace == second.trace
    assert first.trace == scan(ds, config).trace
    assert type(first) is type(second)
    if isinstance(first, Found):
        assert np.array_equal(first.kept.indices, second.kept.indices)
        assert np.array_equal(first.kept.counts, second.kept.counts)
        assert np.array_equal(build_chain(first.kept).cells, build_chain(second.kept).cells)


@st.composite
def kept_cells(draw):
    a = draw(st.integers(1, 8))
    N = draw(st.integers(1, 3))
    space = a**N
    picks = draw(st.lists(st.integers(0, space - 1), min_size=1, max_size=min(space, 40), unique=True))
    idx = np.array([np.unravel_index(k, (a,) * N) for k in picks], dtype=np.int64).reshape(len(picks), N)
    return KeptCells(GridResolution(a, N), idx, (idx + 0.5) / a, np.ones(len(picks), dtype=np.int64), 1)


@settings(max_examples=EXAMPLES)
@given(kept_cells(), st.randoms(use_true_random=False))
def test_chain_permutation_and_tie_break(kept, rnd):
    CASES["chain_permutation"] += 1
    chain = build_chain(kept)
    visited = sorted(map(tuple, chain.cells.tolist()))
    assert visited == sorted(map(tuple, kept.indices.tolist()))
    assert len(set(visited)) == kept.K
    assert np.allclose(chain.vertices, (chain.cells + 0.5) / kept.resolution.a)

    perm = list(range(kept.K))
    rnd.shuffle(perm)
    shuffled = KeptCells(kept.resolution, kept.indices[perm], kept.centers[perm], kept.counts[perm], 1)
    assert np.array_equal(build_chain(shuffled).cells, chain.cells)
    order, _ = greedy_chain(kept.indices.tolist(), kept.resolution.a)
    assert [tuple(c) for c in chain.cells.tolist()] == order


@settings(max_examples=EXAMPLES)
@given(kept_cells(), st.integers(1, 6))
def test_simplex_windows(kept, s):
    CASES["simplex_windows"] += 1
    m = build_manifold(build_chain(kept), s)
    K = kept.K
    assert len(m.simplices) == max(K - s, 0)
    for k, simplex in enumerate(m.simplices):
        assert simplex == tuple(range(k, k + s + 1))

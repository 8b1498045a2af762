import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condpp.groundspace import (
    Configuration,
    configuration_from_locations,
    derive_stream,
    empty_configuration,
    unit_cube,
    unit_interval,
)

# First eight uniforms of stream (42, 7), generated once and frozen.
# Any change here means the seeding or draw discipline changed and every
# recorded experiment in the repo silently decoheres.
GOLDEN_42_7 = [
    0.0015791460415535141,
    0.09275783559869999,
    0.8990427120008879,
    0.3762087147196065,
    0.8917907469041996,
    0.5253249386048605,
    0.770601055876067,
    0.7317593560874354,
]


class TestRandomStream:
    def test_frozen_sequence(self):
        s = derive_stream(42, 7)
        got = [s.uniform() for _ in range(8)]
        assert got == GOLDEN_42_7

    def test_block_draw_matches_scalar_draw(self):
        s = derive_stream(42, 7)
        assert list(s.uniforms(8)) == GOLDEN_42_7

    def test_large_block_continues_logical_sequence(self):
        # the bulk path must produce the same numbers as scalar draws
        a = derive_stream(3, 0)
        b = derive_stream(3, 0)
        head = [a.uniform() for _ in range(5)]
        bulk = a.uniforms(10000)
        tail = [a.uniform() for _ in range(5)]
        expect = [b.uniform() for _ in range(5 + 10000 + 5)]
        assert head == expect[:5]
        np.testing.assert_array_equal(bulk, np.asarray(expect[5:10005]))
        assert tail == expect[10005:]

    def test_same_seed_same_index_is_deterministic(self):
        a = derive_stream(42, 0)
        b = derive_stream(42, 0)
        assert list(a.uniforms(256)) == list(b.uniforms(256))

    def test_distinct_indices_decorrelate(self):
        a = derive_stream(42, 0).uniforms(64)
        b = derive_stream(42, 1).uniforms(64)
        assert not np.any(a == b)

    def test_uniform_moments(self):
        u = derive_stream(11, 0).uniforms(100_000)
        se = 1.0 / np.sqrt(12.0 * u.size)
        assert abs(u.mean() - 0.5) < 3.0 * se
        assert np.all(u >= 0.0) and np.all(u < 1.0)

    def test_uniform_histogram(self):
        from scipy.stats import chisquare

        u = derive_stream(12, 4).uniforms(100_000)
        counts, _ = np.histogram(u, bins=20, range=(0.0, 1.0))
        assert chisquare(counts).pvalue > 0.001

    def test_exponential_and_integer(self):
        s = derive_stream(42, 7)
        s.uniforms(4)
        assert s.exponential(2.0) == 1.111844198890387
        assert s.integer(10) == 5

    def test_exponential_mean(self):
        s = derive_stream(5, 2)
        xs = np.array([s.exponential(4.0) for _ in range(20_000)])
        assert abs(xs.mean() - 0.25) < 3.0 * xs.std() / np.sqrt(xs.size)

    def test_integer_range(self):
        s = derive_stream(9, 9)
        draws = [s.integer(7) for _ in range(2000)]
        assert set(draws) == set(range(7))

    def test_rejects_negative_seed_parts(self):
        with pytest.raises(ValueError):
            derive_stream(-1, 0)
        with pytest.raises(ValueError):
            derive_stream(0, -2)


class TestGroundSpace:
    def test_interval_metric_examples(self):
        space = unit_interval(3.0)
        assert space.distance(np.array([0.2]), np.array([0.2])) == 0.0
        assert space.distance(np.array([0.1]), np.array([0.9])) == pytest.approx(0.8)

    def test_cube_metric_truncates_at_one(self):
        space = unit_cube(3.0, dimension=2)
        d = space.distance(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
        assert d == 1.0

    def test_distance_rejects_outside_points(self):
        space = unit_interval(3.0)
        with pytest.raises(ValueError):
            space.distance(np.array([1.5]), np.array([0.5]))

    def test_sampler_lands_in_space(self):
        space = unit_cube(2.0, dimension=3)
        pts = space.sampler(derive_stream(0, 0), 500)
        assert pts.shape == (500, 3)
        assert np.all(pts >= 0.0) and np.all(pts < 1.0)

    def test_pairwise_matches_scalar_metric(self):
        space = unit_cube(2.0, dimension=2)
        s = derive_stream(1, 0)
        xs = space.sampler(s, 6)
        ys = space.sampler(s, 4)
        mat = space.pairwise(xs, ys)
        for i in range(6):
            for j in range(4):
                assert mat[i, j] == pytest.approx(space.distance(xs[i], ys[j]))

    def test_triangle_inequality(self):
        space = unit_cube(1.0, dimension=2)
        s = derive_stream(77, 0)
        pts = space.sampler(s, 3000).reshape(1000, 3, 2)
        for x, y, z in pts:
            assert space.distance(x, z) <= (
                space.distance(x, y) + space.distance(y, z) + 1e-12
            )

    def test_total_mass_positive(self):
        with pytest.raises(ValueError):
            unit_interval(0.0)
        with pytest.raises(ValueError):
            unit_interval(-2.0)


class TestConfiguration:
    def test_multiset_equality(self):
        a = Configuration(tags=(0, 1), locations=np.array([[0.1], [0.7]]))
        b = Configuration(tags=(5, 9), locations=np.array([[0.7], [0.1]]))
        assert a == b
        assert hash(a) == hash(b)

    def test_inequality_on_different_locations(self):
        a = configuration_from_locations([[0.1], [0.7]])
        b = configuration_from_locations([[0.1], [0.6]])
        assert a != b

    def test_duplicate_points_distinguish_multiplicity(self):
        a = configuration_from_locations([[0.3], [0.3]])
        b = configuration_from_locations([[0.3]])
        assert a != b
        assert a.size == 2 and b.size == 1

    def test_with_point_and_without_tag(self):
        base = configuration_from_locations([[0.2], [0.8]])
        grown = base.with_point(99, np.array([0.5]))
        assert grown.size == 3
        assert grown.location_of(99)[0] == 0.5
        back = grown.without_tag(99)
        assert back == base
        assert base.size == 2  # original untouched

    def test_without_missing_tag_raises(self):
        base = configuration_from_locations([[0.2]])
        with pytest.raises(KeyError):
            base.without_tag(123)

    def test_tags_must_be_distinct(self):
        with pytest.raises(ValueError):
            Configuration(tags=(1, 1), locations=np.array([[0.1], [0.2]]))

    def test_locations_are_write_protected(self):
        cfg = configuration_from_locations([[0.4]])
        with pytest.raises(ValueError):
            cfg.locations[0, 0] = 0.9

    def test_empty_configuration(self):
        cfg = empty_configuration(dimension=2)
        assert cfg.size == 0
        assert cfg.locations.shape == (0, 2)
        with pytest.raises(ValueError):
            configuration_from_locations([])

    def test_from_locations_reshapes_flat_input(self):
        cfg = configuration_from_locations([0.1, 0.9])
        assert cfg.locations.shape == (2, 1)


@settings(max_examples=200, deadline=None)
@given(
    locs=st.lists(
        st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
        min_size=1,
        max_size=6,
    ),
    data=st.data(),
)
def test_configuration_equality_ignores_order_and_tags(locs, data):
    perm = data.draw(st.permutations(list(range(len(locs)))))
    a = configuration_from_locations([[v] for v in locs])
    b = Configuration(
        tags=tuple(100 + i for i in range(len(locs))),
        locations=np.array([[locs[i]] for i in perm]),
    )
    assert a == b
    assert hash(a) == hash(b)

import io
import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apfree.errors import BudgetExceeded, EmptyWindow
from apfree.lattice import (
    NormHistogram,
    ShellSelection,
    build_histogram,
    capped_ball_volume,
    count_capped_ball,
    discrepancy_scan,
    select_behrend_shell,
    select_elkin_annulus,
    shell_members,
    write_histogram_csv,
)
from apfree.numeric import exact_moments


def brute_histogram(k: int, y: int) -> dict[int, int]:
    return dict(
        Counter(
            sum(c * c for c in v) for v in itertools.product(range(y), repeat=k)
        )
    )


def brute_capped_count(k: int, t: int, m: int) -> int:
    root = math.isqrt(t)
    count = 0
    ranges = [
        range(0, root + 1) if i + 1 >= m else range(-root, root + 1)
        for i in range(k)
    ]
    for v in itertools.product(*ranges):
        if sum(c * c for c in v) <= t:
            count += 1
    return count


class TestBuildHistogram:
    def test_k2_y3(self):
        assert build_histogram(2, 3).counts == {0: 1, 1: 2, 2: 1, 4: 2, 5: 2, 8: 1}

    def test_k1_y2(self):
        assert build_histogram(1, 2).counts == {0: 1, 1: 1}

    def test_k3_y2_binomials(self):
        assert build_histogram(3, 2).counts == {0: 1, 1: 3, 2: 3, 3: 1}

    @given(st.integers(min_value=1, max_value=5), st.integers(min_value=2, max_value=6))
    @settings(max_examples=30, deadline=None)
    def test_matches_enumeration(self, k, y):
        assert build_histogram(k, y).counts == brute_histogram(k, y)

    def test_total_is_cube_size(self):
        for k, y in [(2, 3), (4, 5), (6, 3), (3, 9)]:
            assert build_histogram(k, y).total() == y**k

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            build_histogram(10, 10, budget=10**6)

    def test_csv_dump(self):
        buf = io.StringIO()
        write_histogram_csv(build_histogram(2, 3), buf)
        assert buf.getvalue() == (
            "norm_sq,count\n0,1\n1,2\n2,1\n4,2\n5,2\n8,1\n"
        )


class TestSelectBehrendShell:
    def test_k2_y3_ties_break_low(self):
        hist = build_histogram(2, 3)
        moments = exact_moments(2, 3)
        shell = select_behrend_shell(hist, moments, 2.0)
        # window ~ [-1.47, 8.14]; population 2 at norms 1, 4, 5
        assert (shell.t_low, shell.t_high, shell.population) == (1, 1, 2)
        assert shell.sigma_window[0] == pytest.approx(10 / 3 - 2 * math.sqrt(52) / 3)
        assert shell.meets_bound

    def test_single_populated_bin(self):
        hist = NormHistogram(k=2, y=3, counts={4: 7})
        shell = select_behrend_shell(hist, exact_moments(2, 3), 2.0)
        assert (shell.t_low, shell.population) == (4, 7)

    def test_k3_y2(self):
        shell = select_behrend_shell(build_histogram(3, 2), exact_moments(3, 2), 2.0)
        # norms 1 and 2 both have population 3; ties break to 1
        assert (shell.t_low, shell.population) == (1, 3)

    def test_empty_window(self):
        hist = NormHistogram(k=2, y=3, counts={100: 5})
        with pytest.raises(EmptyWindow):
            select_behrend_shell(hist, exact_moments(2, 3), 2.0)

    def test_pigeonhole_floor_holds_on_grid(self):
        for k in range(1, 5):
            for y in range(2, 8):
                for a in (1.5, 2.0, 3.0):
                    moments = exact_moments(k, y)
                    shell = select_behrend_shell(build_histogram(k, y), moments, a)
                    floor = (1 - 1 / a**2) * y**k / (2 * a * moments.sigma_Z + 1)
                    assert shell.population >= floor - 1e-9
                    assert shell.meets_bound


class TestSelectElkinAnnulus:
    def test_wide_g_returns_whole_window(self):
        hist = build_histogram(2, 3)
        moments = exact_moments(2, 3)
        g = math.ceil(4 * moments.sigma_Z) + 1
        shell = select_elkin_annulus(hist, moments, g)
        assert (shell.t_low, shell.t_high) == (-1, 8)
        assert shell.population == 9

    def test_k2_y3_g1(self):
        shell = select_elkin_annulus(build_histogram(2, 3), exact_moments(2, 3), 1)
        assert (shell.t_low, shell.t_high, shell.population) == (1, 1, 2)

    def test_k3_y2_g2_partition(self):
        # The window [0, 3] tiles as [0,1] | [2,3], populations 4 and 4;
        # ties break toward the lower window.
        moments = exact_moments(3, 2)
        shell = select_elkin_annulus(build_histogram(3, 2), moments, 2)
        assert (shell.t_low, shell.t_high, shell.population) == (0, 1, 4)
        assert shell.pigeonhole_bound == 3.0
        assert shell.meets_bound

    def test_window_width_never_exceeds_g(self):
        for k in range(1, 5):
            for y in range(2, 9):
                for g in (1, 2, 3, 5):
                    shell = select_elkin_annulus(
                        build_histogram(k, y), exact_moments(k, y), g
                    )
                    assert shell.t_high - shell.t_low <= g

    def test_pigeonhole_floor_holds_on_grid(self):
        from apfree.lattice import annulus_count

        for k in range(1, 5):
            for y in range(2, 9):
                for g in (1, 2, 4):
                    hist = build_histogram(k, y)
                    moments = exact_moments(k, y)
                    # a = 2 Chebyshev window always captures >= 3/4 of the cube
                    lo = moments.mu_Z - 2 * moments.sigma_Z
                    hi = moments.mu_Z + 2 * moments.sigma_Z
                    captured = sum(
                        c for t, c in hist.counts.items() if lo <= t <= hi
                    )
                    assert captured >= 0.75 * y**k
                    shell = select_elkin_annulus(hist, moments, g)
                    ell = annulus_count(moments, g)
                    assert shell.population >= 0.75 * y**k / ell - 1
                    assert shell.meets_bound


class TestShellMembers:
    def _shell(self, lo, hi):
        return ShellSelection(
            t_low=lo, t_high=hi, population=-1, sigma_window=(0.0, 0.0),
            pigeonhole_bound=0.0, meets_bound=True,
        )

    def test_k2_y3_unit_norm(self):
        members = shell_members(2, 3, self._shell(1, 1))
        assert [v.coords for v in members] == [(0, 1), (1, 0)]

    def test_origin_shell(self):
        assert [v.coords for v in shell_members(3, 4, self._shell(0, 0))] == [(0, 0, 0)]

    def test_k2_y3_window_4_5(self):
        members = shell_members(2, 3, self._shell(4, 5))
        assert [v.coords for v in members] == [(0, 2), (1, 2), (2, 0), (2, 1)]

    def test_lexicographic_and_norms(self):
        members = shell_members(3, 5, self._shell(10, 14))
        assert members == sorted(members, key=lambda v: v.coords)
        assert all(10 <= v.norm_sq <= 14 for v in members)
        assert all(
            v.norm_sq == sum(c * c for c in v.coords) for v in members
        )

    def test_population_matches_histogram(self):
        hist = build_histogram(4, 4)
        for lo, hi in [(0, 5), (7, 9), (12, 12), (30, 40)]:
            members = shell_members(4, 4, self._shell(lo, hi))
            assert len(members) == hist.population(lo, hi)

    def test_thread_counts_agree(self):
        base = shell_members(3, 7, self._shell(20, 30), threads=1)
        for threads in (2, 4, 8):
            assert shell_members(3, 7, self._shell(20, 30), threads=threads) == base

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            shell_members(10, 10, self._shell(0, 5), budget=10**4)


class TestCountCappedBall:
    def test_gauss_circle_radius_5(self):
        assert count_capped_ball(2, 25, 3) == 81

    def test_origin_only(self):
        assert count_capped_ball(1, 0, 1) == 1

    def test_quarter_disc(self):
        assert count_capped_ball(2, 25, 1) == 26

    @given(
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=1, max_value=4),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, k, t, m):
        if m > k + 1:
            m = k + 1
        assert count_capped_ball(k, t, m) == brute_capped_count(k, t, m)

    def test_monotone_in_m(self):
        for k in (2, 3, 4):
            for t in (10, 49, 200):
                counts = [count_capped_ball(k, t, m) for m in range(1, k + 2)]
                assert counts == sorted(counts)

    def test_unconstrained_equals_full_ball(self):
        for t in (9, 25, 64):
            assert count_capped_ball(3, t, 4) == brute_capped_count(3, t, 4)

    def test_rejects_bad_m(self):
        with pytest.raises(ValueError):
            count_capped_ball(2, 10, 0)
        with pytest.raises(ValueError):
            count_capped_ball(2, 10, 4)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            count_capped_ball(5, 10**7, 1, budget=10**8)


class TestDiscrepancyScan:
    def test_k2_t25_full(self):
        (rec,) = discrepancy_scan(2, [25], 3)
        assert rec.count_exact == 81
        assert rec.volume == pytest.approx(25 * math.pi)
        assert rec.reference_volume == 1.0
        assert rec.ratio == pytest.approx(abs(81 - 25 * math.pi), rel=1e-12)

    def test_rejects_t_zero(self):
        with pytest.raises(ValueError):
            discrepancy_scan(2, [0, 25], 3)

    def test_k3_t100_unconstrained(self):
        (rec,) = discrepancy_scan(3, [100], 4)
        assert rec.count_exact == brute_capped_count(3, 100, 4)
        assert rec.volume == pytest.approx(4 * math.pi / 3 * 1000, rel=1e-12)

    def test_volume_halves_per_constraint(self):
        assert capped_ball_volume(3, 100.0, 1) == pytest.approx(
            capped_ball_volume(3, 100.0, 4) / 8
        )
        assert capped_ball_volume(0, 100.0, 1) == 1.0

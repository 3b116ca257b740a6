"""Kernel descriptor tests: multipliers, pointwise kernels, admissibility."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavebreak.errors import (
    AccuracyError,
    ConfigurationError,
    RangeError,
    SingularityError,
)
from wavebreak.kernels import (
    PhaseVelocity,
    check_admissibility,
    k_at_origin,
    kernel_eval,
    load_tabulated_csv,
    multiplier,
    parse_kernel,
    symbol_cutoff,
)

GAUSS = PhaseVelocity.gaussian(1.0)
EXPO = PhaseVelocity.exponential(1.0)
WHIT = PhaseVelocity.whitham()

# independently computed: sqrt(tanh 2 / 2) at 40 digits
WHITHAM_AT_2 = 0.6942721296710018749168046654430761407


class TestMultiplier:
    def test_whitham_at_zero_is_limit(self):
        assert multiplier(WHIT, 0.0) == 1.0

    def test_whitham_at_two(self):
        assert multiplier(WHIT, 2.0) == pytest.approx(WHITHAM_AT_2, abs=1e-14)

    def test_whitham_small_kappa_series(self):
        # below the patch threshold the series value is 1 to double precision
        assert multiplier(WHIT, 1e-9) == pytest.approx(1.0, abs=1e-15)
        # just above it, tanh k / k is evaluated directly and stays smooth
        assert multiplier(WHIT, 1e-7) == pytest.approx(1.0, abs=1e-13)

    def test_exponential_at_zero_matches_quadrature_oracle(self):
        # oracle: integral of exp(-|x|) over R equals 2
        from scipy.integrate import quad

        oracle = quad(lambda x: math.exp(-abs(x)), -50, 50)[0]
        assert multiplier(EXPO, 0.0) == pytest.approx(oracle, rel=1e-10)
        assert multiplier(EXPO, 0.0) == 2.0

    def test_gaussian_at_zero(self):
        assert multiplier(GAUSS, 0.0) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)

    def test_accepts_arrays(self):
        k = np.array([-2.0, 0.0, 2.0])
        vals = multiplier(WHIT, k)
        assert vals.shape == (3,)
        assert vals[0] == vals[2]

    @given(st.sampled_from(["gaussian", "exponential", "whitham"]),
           st.floats(-50, 50))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, kind, kappa):
        pv = {"gaussian": GAUSS, "exponential": EXPO, "whitham": WHIT}[kind]
        assert multiplier(pv, kappa) == multiplier(pv, -kappa)

    def test_nonfinite_kappa_rejected(self):
        with pytest.raises(RangeError):
            multiplier(GAUSS, math.nan)


class TestTabulated:
    def setup_method(self):
        k = np.linspace(0.0, 10.0, 201)
        self.pv = PhaseVelocity.tabulated(zip(k, multiplier(GAUSS, k)))

    def test_even_extension(self):
        assert multiplier(self.pv, -3.0) == multiplier(self.pv, 3.0)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            multiplier(self.pv, 11.0)

    def test_matches_sampled_symbol(self):
        assert multiplier(self.pv, 1.0) == pytest.approx(multiplier(GAUSS, 1.0), rel=1e-4)

    def test_kernel_at_origin_near_one(self):
        # the sampled gaussian symbol integrates back to K(0) ~ 1
        assert k_at_origin(self.pv) == pytest.approx(1.0, abs=1e-4)

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            PhaseVelocity.tabulated([(0.0, 1.0), (0.0, 0.5)])
        with pytest.raises(ConfigurationError):
            PhaseVelocity.tabulated([(-1.0, 1.0), (0.0, 0.5)])
        with pytest.raises(ConfigurationError):
            PhaseVelocity.tabulated([])


class TestKernelEval:
    def test_gaussian_at_zero_is_one(self):
        assert kernel_eval(GAUSS, 0.0) == 1.0

    def test_exponential_closed_form(self):
        assert kernel_eval(EXPO, 0.5) == pytest.approx(0.6065306597126334, abs=1e-15)

    def test_exponential_quadrature_cross_check(self):
        # inverse transform of 2/(1+k^2) must reproduce exp(-|x|)
        val = kernel_eval(EXPO, 0.5, method="quadrature", tol=1e-11)
        assert val == pytest.approx(math.exp(-0.5), abs=1e-9)

    def test_gaussian_symmetry(self):
        assert kernel_eval(GAUSS, -2.0) == kernel_eval(GAUSS, 2.0)

    @pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0])
    def test_gaussian_quadrature_matches_closed_form(self, x):
        quad_val = kernel_eval(GAUSS, x, method="quadrature")
        assert quad_val == pytest.approx(math.exp(-0.5 * x * x), abs=1e-8)

    def test_k_at_origin_normalization(self):
        assert k_at_origin(GAUSS) == pytest.approx(1.0, rel=1e-10)
        assert k_at_origin(EXPO) == pytest.approx(1.0, rel=1e-10)

    def test_whitham_singular_at_zero(self):
        with pytest.raises(SingularityError):
            kernel_eval(WHIT, 0.0)

    def test_whitham_refused_elsewhere(self):
        with pytest.raises(AccuracyError):
            kernel_eval(WHIT, 1.0)
        with pytest.raises(SingularityError):
            k_at_origin(WHIT)

    def test_whitham_has_no_cutoff(self):
        with pytest.raises(AccuracyError):
            symbol_cutoff(WHIT)

    def test_cutoff_tail_is_tiny(self):
        for pv in (GAUSS, EXPO):
            km = symbol_cutoff(pv)
            assert multiplier(pv, km) <= 1.01e-12


class TestAdmissibility:
    GRID = tuple(np.arange(0.0, 10.5, 0.5))

    def test_gaussian_all_flags(self):
        adm = check_admissibility(GAUSS, self.GRID)
        assert adm.bounded and adm.integrable and adm.symmetric
        assert adm.monotone_decreasing_on_right
        assert adm.k_at_zero == pytest.approx(1.0, rel=1e-12)
        assert adm.probe_grid == self.GRID

    def test_whitham_unbounded(self):
        adm = check_admissibility(WHIT, self.GRID)
        assert not adm.bounded
        assert adm.k_at_zero is None
        assert adm.symmetric
        assert not adm.monotone_decreasing_on_right  # unverifiable, not false-proved

    def test_exponential_flags(self):
        adm = check_admissibility(EXPO, self.GRID)
        assert adm.symmetric and adm.integrable and adm.monotone_decreasing_on_right
        assert adm.k_at_zero == pytest.approx(1.0, rel=1e-12)

    def test_bad_grid(self):
        with pytest.raises(ConfigurationError):
            check_admissibility(GAUSS, [])
        with pytest.raises(ConfigurationError):
            check_admissibility(GAUSS, [1.0, 0.5])


class TestParse:
    def test_round_trips(self):
        assert parse_kernel("gaussian:1").width == 1.0
        assert parse_kernel("exponential:2.5").rate == 2.5
        assert parse_kernel("whitham").kind == "whitham"

    def test_unknown_kernel(self):
        with pytest.raises(ConfigurationError):
            parse_kernel("cosine:1")

    def test_bad_parameter(self):
        with pytest.raises(ConfigurationError):
            parse_kernel("gaussian:abc")
        with pytest.raises(ConfigurationError):
            parse_kernel("gaussian:-1")

    def test_tabulated_csv(self, tmp_path):
        path = tmp_path / "table.csv"
        k = np.linspace(0, 5, 11)
        with open(path, "w") as fh:
            fh.write("kappa,c\n")
            for ki in k:
                fh.write(f"{ki},{multiplier(EXPO, ki)}\n")
        pv = parse_kernel(f"tabulated:{path}")
        assert pv.kind == "tabulated"
        assert multiplier(pv, 1.0) == pytest.approx(1.0, rel=1e-3)

    def test_tabulated_csv_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("k,c\n0,1\n")
        with pytest.raises(ConfigurationError):
            load_tabulated_csv(path)

import math

import numpy as np
import pytest

import polarsim as ps
from polarsim.sweeps import (
    DEFAULT_DELTAS,
    DEFAULT_FRACTIONS,
    PRESETS,
    write_delta_family_csv,
)


class TestSweepSpec:
    def test_odd_totals_rejected(self):
        with pytest.raises(ValueError, match="even"):
            ps.SweepSpec(theta_deg=30, phi_deg=45, siphon_totals=(0, 5))

    def test_totals_above_photon_budget_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            ps.SweepSpec(theta_deg=30, phi_deg=45, n_photons=10, siphon_totals=(12,))

    def test_non_increasing_totals_rejected(self):
        with pytest.raises(ValueError, match="increasing"):
            ps.SweepSpec(theta_deg=30, phi_deg=45, siphon_totals=(10, 10))


class TestClosedFormLambdaMax:
    def test_worked_example_point(self):
        assert ps.closed_form_lambda_max(0.2, 15) == pytest.approx(0.98917, abs=1e-5)

    def test_no_mixing_is_pure(self):
        assert ps.closed_form_lambda_max(0.0, 37.0) == 1.0

    def test_orthogonal_half_mix_is_maximally_mixed(self):
        assert ps.closed_form_lambda_max(0.5, 90) == pytest.approx(0.5, abs=1e-12)

    def test_validated_against_brute_force_ensembles(self):
        n = 100
        for f100 in range(0, 51, 5):
            for delta in (7.5, 15, 30, 60, 90):
                comps = [(n - f100, 30.0), (f100, 30.0 + delta)]
                comps = [(c, a) for c, a in comps if c > 0]
                rho = ps.ensemble_density(ps.ensemble(comps))
                brute = np.linalg.eigvalsh(rho.matrix).max()
                assert ps.closed_form_lambda_max(f100 / n, delta) == pytest.approx(
                    brute, abs=1e-10
                )


class TestSweepSiphon:
    def test_worked_example_point(self):
        spec = ps.SweepSpec(theta_deg=30, phi_deg=45, siphon_totals=(20,))
        [rec] = ps.sweep_siphon(spec)
        assert rec.siphon_total == 20
        assert rec.lambda_max == pytest.approx(0.9892, abs=5e-4)
        assert rec.peak_angle_deg == pytest.approx(32.93, abs=0.05)
        assert rec.purity == pytest.approx(0.978564, abs=1e-6)
        assert rec.detected is True

    def test_no_attack_point(self):
        spec = ps.SweepSpec(theta_deg=30, phi_deg=45, siphon_totals=(0,))
        [rec] = ps.sweep_siphon(spec)
        assert rec.lambda_max == pytest.approx(1.0, abs=1e-12)
        assert rec.peak_angle_deg == pytest.approx(30.0, abs=1e-9)
        assert rec.purity == pytest.approx(1.0, abs=1e-12)
        assert rec.detected is False

    def test_lambda_max_strictly_decreasing(self):
        # strictly decreasing up to an Eve fraction of 0.5; past that the
        # received state tips toward Eve's angle and the peak climbs again
        spec = ps.SweepSpec(
            theta_deg=22.5, phi_deg=30, siphon_totals=tuple(range(0, 51, 10))
        )
        values = [r.lambda_max for r in ps.sweep_siphon(spec)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_matches_closed_form_oracle(self):
        spec = ps.SweepSpec(
            theta_deg=30, phi_deg=75, siphon_totals=tuple(range(0, 101, 10))
        )
        for rec in ps.sweep_siphon(spec):
            expected = ps.closed_form_lambda_max(rec.siphon_total / 100, 45)
            assert rec.lambda_max == pytest.approx(expected, abs=1e-10)


class TestSweepDeltaFamily:
    def test_worked_example_fraction(self):
        table = ps.sweep_delta_family()
        assert table[(15.0, 0.2)].lambda_max == pytest.approx(0.9892, abs=1e-4)

    def test_zero_fraction_rows(self):
        table = ps.sweep_delta_family(base_theta=30.0)
        for delta in DEFAULT_DELTAS:
            rec = table[(delta, 0.0)]
            assert rec.lambda_max == pytest.approx(1.0, abs=1e-12)
            assert rec.peak_angle_deg == pytest.approx(30.0, abs=1e-9)

    def test_zero_delta_stays_pure(self):
        table = ps.sweep_delta_family(deltas=[0.0])
        for (_, f), rec in table.items():
            assert rec.lambda_max == pytest.approx(1.0, abs=1e-12)

    def test_lambda_ordering_across_deltas(self):
        table = ps.sweep_delta_family()
        for f in DEFAULT_FRACTIONS:
            if f == 0.0:
                continue
            values = [table[(d, f)].lambda_max for d in DEFAULT_DELTAS]
            assert all(b < a for a, b in zip(values, values[1:]))

    def test_empty_deltas_rejected(self):
        with pytest.raises(ValueError):
            ps.sweep_delta_family(deltas=[])


class TestPeakAngleDrift:
    @pytest.mark.parametrize("name", ["fig4", "fig6", "fig8", "fig10"])
    def test_angle_moves_from_theta_toward_phi(self, name):
        spec = PRESETS[name]
        records = ps.sweep_siphon(spec)
        angles = [r.peak_angle_deg for r in records if r.peak_angle_deg is not None]
        lo, hi = sorted((spec.theta_deg, spec.phi_deg))
        assert angles[0] == pytest.approx(spec.theta_deg, abs=1e-9)
        assert all(lo - 1e-9 <= a <= hi + 1e-9 for a in angles)
        assert all(b >= a - 1e-9 for a, b in zip(angles, angles[1:]))


class TestCsvOutput:
    def test_empty_records(self, tmp_path):
        path = tmp_path / "empty.csv"
        ps.write_csv([], path)
        assert path.read_text() == "siphon_total,lambda_max,peak_angle_deg,purity,detected\n"

    def test_single_record_formatting(self, tmp_path):
        path = tmp_path / "one.csv"
        ps.write_csv(
            [ps.SweepRecord(0, 1.0, 30.0, 1.0, False)],
            path,
        )
        lines = path.read_text().splitlines()
        assert lines[1] == "0,1.000000,30.000000,1.000000,false"

    def test_undefined_angle_renders_empty(self, tmp_path):
        path = tmp_path / "deg.csv"
        ps.write_csv([ps.SweepRecord(100, 0.5, None, 0.5, True)], path)
        assert path.read_text().splitlines()[1] == "100,0.500000,,0.500000,true"

    def test_worked_example_row_value(self, tmp_path):
        path = tmp_path / "mix.csv"
        spec = ps.SweepSpec(theta_deg=30, phi_deg=45, siphon_totals=(20,))
        ps.write_csv(ps.sweep_siphon(spec), path)
        row = path.read_text().splitlines()[1].split(",")
        assert float(row[1]) == pytest.approx(0.9892, abs=5e-4)

    def test_byte_identical_across_runs(self, tmp_path):
        spec = PRESETS["fig4"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        ps.write_csv(ps.sweep_siphon(spec), p1)
        ps.write_csv(ps.sweep_siphon(spec), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_delta_family_csv(self, tmp_path):
        path = tmp_path / "family.csv"
        write_delta_family_csv(ps.sweep_delta_family(), path)
        lines = path.read_text().splitlines()
        assert lines[0] == "delta_deg,fraction,lambda_max,peak_angle_deg"
        assert len(lines) == 1 + len(DEFAULT_DELTAS) * len(DEFAULT_FRACTIONS)

    def test_unwritable_path_reports_context(self, tmp_path):
        with pytest.raises(OSError, match="no/such"):
            ps.write_csv([], tmp_path / "no" / "such" / "dir.csv")

"""Parameter-sweep harness: peak intensity and peak angle of the received
state versus the number of photons Eve manipulates, plus combined sweeps over
the angle gap between Alice's and Eve's polarizations.

Exact-mode sweeps are fully deterministic and their CSV output is
byte-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .polarization import (
    DensityMatrix,
    density_of_pure,
    eigendecompose,
    normalize_angle,
    pure_state,
    purity,
)
from .protocol import (
    Decision,
    EveConfig,
    ProtocolConfig,
    run_protocol,
)
from .tomography import TomographyConfig

SWEEP_CSV_HEADER = "siphon_total,lambda_max,peak_angle_deg,purity,detected"
DELTA_FAMILY_CSV_HEADER = "delta_deg,fraction,lambda_max,peak_angle_deg"

DEFAULT_DELTAS = (7.5, 15.0, 30.0, 60.0)
DEFAULT_FRACTIONS = tuple(round(0.05 * i, 2) for i in range(11))  # 0.0 .. 0.5


@dataclass(frozen=True)
class SweepSpec:
    theta_deg: float
    phi_deg: float
    bob_bit: int = 0
    n_photons: int = 100
    siphon_totals: Tuple[int, ...] = ()
    mode: str = "exact"
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta_deg", normalize_angle(self.theta_deg))
        object.__setattr__(self, "phi_deg", normalize_angle(self.phi_deg))
        object.__setattr__(self, "siphon_totals", tuple(int(t) for t in self.siphon_totals))
        if self.n_photons < 1:
            raise ValueError("n_photons must be positive")
        for t in self.siphon_totals:
            if t < 0 or t % 2 != 0:
                raise ValueError(f"siphon totals must be non-negative even integers, got {t}")
            if t > self.n_photons:
                raise ValueError(f"siphon total {t} exceeds n_photons {self.n_photons}")
        if any(b >= a for a, b in zip(self.siphon_totals[1:], self.siphon_totals)):
            raise ValueError("siphon totals must be strictly increasing")


@dataclass(frozen=True)
class SweepRecord:
    siphon_total: int
    lambda_max: float
    peak_angle_deg: Optional[float]
    purity: float
    detected: bool


def _point_seed(base_seed: int, siphon_total: int) -> int:
    # per-point seed so parallel and serial evaluation give identical output
    return int(np.random.SeedSequence(entropy=(base_seed, siphon_total)).generate_state(1)[0])


def sweep_siphon(spec: SweepSpec) -> List[SweepRecord]:
    """One protocol run per siphon total, split evenly across the two stages."""
    records = []
    for total in spec.siphon_totals:
        eve = EveConfig(
            siphon_stage1=total // 2,
            siphon_stage2=total // 2,
            injection_angle_deg=spec.phi_deg,
            enabled=total > 0,
        )
        config = ProtocolConfig(
            n_photons=spec.n_photons,
            alice_angle_deg=spec.theta_deg,
            bob_bit=spec.bob_bit,
            eve=eve,
            mode=spec.mode,
            tomography=TomographyConfig(seed=_point_seed(spec.seed, total)),
        )
        outcome = run_protocol(config)
        records.append(
            SweepRecord(
                siphon_total=total,
                lambda_max=outcome.spectrum.lambda_max,
                peak_angle_deg=outcome.spectrum.principal_angle_deg,
                purity=outcome.purity_received,
                detected=outcome.decision is Decision.EVE_DETECTED,
            )
        )
    return records


def mixture_density(theta_deg: float, phi_deg: float, fraction: float) -> DensityMatrix:
    """Exact convex combination (1-f) rho(theta) + f rho(phi)."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    a = density_of_pure(pure_state(theta_deg)).matrix
    b = density_of_pure(pure_state(phi_deg)).matrix
    return DensityMatrix((1.0 - fraction) * a + fraction * b)


def closed_form_lambda_max(fraction: float, delta_deg: float) -> float:
    """Analytic peak intensity of a two-angle mixture with weight `fraction`
    on the component offset by `delta_deg`: (1 + sqrt(1 - 4f(1-f)sin^2 d))/2.

    Independent of the simulation path; used as a cross-check oracle.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    s = math.sin(math.radians(delta_deg))
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * fraction * (1.0 - fraction) * s * s)))


def sweep_delta_family(
    deltas: Sequence[float] = DEFAULT_DELTAS,
    base_theta: float = 30.0,
    fraction_grid: Sequence[float] = DEFAULT_FRACTIONS,
    n_photons: int = 100,
) -> Dict[Tuple[float, float], SweepRecord]:
    """Peak intensity and angle over (angle gap, Eve fraction) combinations.

    Eve's angle is base_theta + delta; records come from the exact mixture.
    """
    if not deltas:
        raise ValueError("deltas must be nonempty")
    for f in fraction_grid:
        if not 0.0 <= f <= 0.5:
            raise ValueError(f"fractions must be in [0, 0.5], got {f}")
    table: Dict[Tuple[float, float], SweepRecord] = {}
    for delta in deltas:
        phi = normalize_angle(base_theta + delta)
        for f in fraction_grid:
            rho = mixture_density(base_theta, phi, f)
            spectrum = eigendecompose(rho)
            table[(delta, f)] = SweepRecord(
                siphon_total=round(f * n_photons),
                lambda_max=spectrum.lambda_max,
                peak_angle_deg=spectrum.principal_angle_deg,
                purity=purity(rho),
                detected=f > 0,
            )
    return table


def _fmt_angle(angle: Optional[float]) -> str:
    return "" if angle is None else f"{angle:.6f}"


def write_csv(records: Iterable[SweepRecord], path) -> None:
    """Write a siphon-sweep CSV; byte-identical across runs for exact mode."""
    lines = [SWEEP_CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.siphon_total},{r.lambda_max:.6f},{_fmt_angle(r.peak_angle_deg)},"
            f"{r.purity:.6f},{'true' if r.detected else 'false'}"
        )
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed to write sweep CSV to {path}: {exc}") from exc


def write_delta_family_csv(table: Dict[Tuple[float, float], SweepRecord], path) -> None:
    lines = [DELTA_FAMILY_CSV_HEADER]
    for (delta, fraction) in sorted(table):
        r = table[(delta, fraction)]
        lines.append(
            f"{delta:.6f},{fraction:.6f},{r.lambda_max:.6f},{_fmt_angle(r.peak_angle_deg)}"
        )
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed to write sweep CSV to {path}: {exc}") from exc


# Figure presets: each pair of consecutive figures in the source data shares
# one (theta, phi) sweep; fig2k plots the peak intensity, fig2k+1 the angle.
# past a 0.5 Eve fraction the received state tips toward Eve's angle and the
# peak intensity climbs again, so presets stop at half the photon budget
_DEFAULT_TOTALS = tuple(range(0, 51, 10))

PRESETS: Dict[str, SweepSpec] = {}
for _name_pair, _theta, _phi in (
    (("fig4", "fig5"), 22.5, 30.0),
    (("fig6", "fig7"), 45.0, 60.0),
    (("fig8", "fig9"), 30.0, 60.0),
    (("fig10", "fig11"), 30.0, 90.0),
):
    for _name in _name_pair:
        PRESETS[_name] = SweepSpec(
            theta_deg=_theta, phi_deg=_phi, siphon_totals=_DEFAULT_TOTALS
        )
# fig12 (peak intensity) and fig13 (peak angle) are the combined delta-family
# sweep; handled separately by the CLI under the "delta-family" preset name.
DELTA_FAMILY_PRESETS = ("fig12", "fig13", "delta-family")

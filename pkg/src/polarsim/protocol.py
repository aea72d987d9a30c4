"""Ping-pong polarization protocol with intensity and state tracking.

One transmission: Alice prepares n photons at angle theta and keeps two
hypothesis densities (rotation by 0 deg or 90 deg). Eve may siphon photons at
each channel stage and inject the same number at her own angle phi, which
keeps the intensity constant. Bob encodes his bit by rotating everything 0 or
90 deg. Alice then compares the received density matrix against both
hypotheses and its purity to decode the bit or declare the eavesdropper.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .polarization import (
    DensityMatrix,
    PhotonEnsemble,
    Spectrum,
    density_of_pure,
    eigendecompose,
    ensemble_density,
    matrix_distance,
    normalize_angle,
    pure_state,
    purity,
)
from .tomography import TomographyConfig, reconstruct, sample_counts

PROTOCOL_CSV_HEADER = (
    "decision,purity,dist_h0,dist_h90,lambda_max,principal_angle_deg,"
    "intensity_sent,intensity_after_stage1,intensity_after_stage2"
)


class Decision(enum.Enum):
    BIT0 = "Bit0"
    BIT1 = "Bit1"
    EVE_DETECTED = "EveDetected"


@dataclass(frozen=True)
class EveConfig:
    siphon_stage1: int = 0
    siphon_stage2: int = 0
    injection_angle_deg: float = 0.0
    enabled: bool = False

    def __post_init__(self) -> None:
        if self.siphon_stage1 < 0 or self.siphon_stage2 < 0:
            raise ValueError("siphon counts must be non-negative")
        object.__setattr__(self, "injection_angle_deg", normalize_angle(self.injection_angle_deg))

    @classmethod
    def disabled(cls) -> "EveConfig":
        return cls()


@dataclass(frozen=True)
class ProtocolConfig:
    n_photons: int
    alice_angle_deg: float
    bob_bit: int
    eve: EveConfig = field(default_factory=EveConfig.disabled)
    mode: str = "exact"
    tomography: TomographyConfig = field(default_factory=TomographyConfig)
    epsilon_distance: Optional[float] = None  # None -> mode-dependent default
    epsilon_purity: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n_photons < 1:
            raise ValueError("n_photons must be positive")
        if self.bob_bit not in (0, 1):
            raise ValueError("bob_bit must be 0 or 1")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.epsilon_distance is not None and self.epsilon_distance <= 0:
            raise ValueError("epsilon_distance must be positive")
        if self.epsilon_purity is not None and not (0 < self.epsilon_purity < 1):
            raise ValueError("epsilon_purity must be in (0, 1)")
        object.__setattr__(self, "alice_angle_deg", normalize_angle(self.alice_angle_deg))

    def resolved_thresholds(self) -> Tuple[float, float]:
        """(epsilon_distance, epsilon_purity) after mode-dependent defaulting.

        Sampled mode widens both to a 6-sigma-scale binomial noise floor.
        """
        if self.mode == "exact":
            eps_d = 1e-9 if self.epsilon_distance is None else self.epsilon_distance
            eps_p = 1e-6 if self.epsilon_purity is None else self.epsilon_purity
        else:
            noise = 6.0 / math.sqrt(self.tomography.photons_per_basis)
            eps_d = max(1e-9, noise) if self.epsilon_distance is None else self.epsilon_distance
            eps_p = max(1e-6, noise) if self.epsilon_purity is None else self.epsilon_purity
        return eps_d, eps_p


@dataclass(frozen=True)
class ProtocolOutcome:
    decision: Decision
    rho_hypothesis_0: DensityMatrix
    rho_hypothesis_90: DensityMatrix
    rho_received: DensityMatrix
    purity_received: float
    dist_to_h0: float
    dist_to_h90: float
    spectrum: Spectrum
    stage_intensities: Tuple[int, int, int]  # (sent, after stage 1, after stage 2)

    def to_key_value_block(self) -> str:
        angle = self.spectrum.principal_angle_deg
        lines = [
            f"decision={self.decision.value}",
            f"purity={self.purity_received:.6f}",
            f"dist_h0={self.dist_to_h0:.6f}",
            f"dist_h90={self.dist_to_h90:.6f}",
            f"lambda_max={self.spectrum.lambda_max:.6f}",
            f"lambda_min={self.spectrum.lambda_min:.6f}",
            "principal_angle_deg=" + ("" if angle is None else f"{angle:.6f}"),
            f"intensity_sent={self.stage_intensities[0]}",
            f"intensity_after_stage1={self.stage_intensities[1]}",
            f"intensity_after_stage2={self.stage_intensities[2]}",
        ]
        return "\n".join(lines)

    def to_csv_row(self) -> str:
        angle = self.spectrum.principal_angle_deg
        return ",".join(
            [
                self.decision.value,
                f"{self.purity_received:.6f}",
                f"{self.dist_to_h0:.6f}",
                f"{self.dist_to_h90:.6f}",
                f"{self.spectrum.lambda_max:.6f}",
                "" if angle is None else f"{angle:.6f}",
                str(self.stage_intensities[0]),
                str(self.stage_intensities[1]),
                str(self.stage_intensities[2]),
            ]
        )


# Internal stream representation: (count, angle_deg, is_eve_injection).
_Stream = List[Tuple[int, float, bool]]


def _apportion(counts: List[int], remove: int) -> List[int]:
    """Split an integer removal across components proportionally to their
    counts (largest-remainder rounding), never exceeding any component."""
    total = sum(counts)
    if remove > total:
        raise ValueError(f"cannot remove {remove} photons from {total}")
    quotas = [c * remove / total for c in counts]
    taken = [min(c, math.floor(q)) for c, q in zip(counts, quotas)]
    leftover = remove - sum(taken)
    order = sorted(range(len(counts)), key=lambda i: quotas[i] - taken[i], reverse=True)
    for i in order:
        if leftover == 0:
            break
        if taken[i] < counts[i]:
            taken[i] += 1
            leftover -= 1
    return taken


def _siphon_exact(stream: _Stream, remove: int) -> None:
    """Deterministic siphon: Eve draws only from Alice's photons (siphoning
    her own injections back out gains her nothing), proportionally across
    Alice's components."""
    idx = [i for i, (c, _, is_eve) in enumerate(stream) if not is_eve and c > 0]
    available = sum(stream[i][0] for i in idx)
    if remove > available:
        raise ValueError(
            f"siphon count {remove} exceeds the {available} untouched photons "
            "available at this stage"
        )
    removed = _apportion([stream[i][0] for i in idx], remove)
    for i, r in zip(idx, removed):
        c, ang, is_eve = stream[i]
        stream[i] = (c - r, ang, is_eve)


def _siphon_sampled(stream: _Stream, remove: int, rng: np.random.Generator) -> None:
    """Random siphon: `remove` photons drawn uniformly without replacement."""
    counts = [c for c, _, _ in stream]
    if remove > sum(counts):
        raise ValueError("siphon count exceeds photons present at this stage")
    taken = rng.multivariate_hypergeometric(counts, remove)
    for i, r in enumerate(taken):
        c, ang, is_eve = stream[i]
        stream[i] = (c - int(r), ang, is_eve)


def _eve_stage(
    stream: _Stream,
    siphon: int,
    injection_angle: float,
    mode: str,
    rng: Optional[np.random.Generator],
) -> None:
    if siphon == 0:
        return
    if mode == "exact":
        _siphon_exact(stream, siphon)
    else:
        assert rng is not None
        _siphon_sampled(stream, siphon, rng)
    stream.append((siphon, injection_angle, True))


def _stream_total(stream: _Stream) -> int:
    return sum(c for c, _, _ in stream)


def _stream_ensemble(stream: _Stream) -> PhotonEnsemble:
    return PhotonEnsemble(tuple((c, ang) for c, ang, _ in stream if c > 0))


def decide(
    rho_received: DensityMatrix,
    rho_h0: DensityMatrix,
    rho_h90: DensityMatrix,
    eps_dist: float,
    eps_purity: float,
) -> Decision:
    """Alice's decision rule: a mixed state or a state far from both
    hypotheses means Eve; otherwise decode the nearer hypothesis (ties go to
    bit 0)."""
    if purity(rho_received) < 1.0 - eps_purity:
        return Decision.EVE_DETECTED
    d0 = matrix_distance(rho_received, rho_h0)
    d90 = matrix_distance(rho_received, rho_h90)
    if d0 > eps_dist and d90 > eps_dist:
        return Decision.EVE_DETECTED
    return Decision.BIT0 if d0 <= d90 else Decision.BIT1


def intensity_check(stage_intensities: Tuple[int, ...]) -> bool:
    """True iff the photon count is unchanged at every recorded stage.

    The equal-count siphon-and-inject attack passes this check, which is why
    the density-matrix comparison is needed at all.
    """
    first = stage_intensities[0]
    return all(count == first for count in stage_intensities)


def run_protocol(config: ProtocolConfig) -> ProtocolOutcome:
    """Execute one full transmission and Alice's final decision."""
    theta = config.alice_angle_deg
    n = config.n_photons
    rho_h0 = density_of_pure(pure_state(theta))
    rho_h90 = density_of_pure(pure_state(theta + 90.0))

    rng: Optional[np.random.Generator] = None
    if config.mode == "sampled":
        rng = np.random.default_rng(config.tomography.seed)

    stream: _Stream = [(n, theta, False)]
    sent = n

    if config.eve.enabled:
        _eve_stage(stream, config.eve.siphon_stage1, config.eve.injection_angle_deg, config.mode, rng)
    after_stage1 = _stream_total(stream)

    rotation = 90.0 * config.bob_bit
    stream = [(c, normalize_angle(ang + rotation), is_eve) for c, ang, is_eve in stream]

    if config.eve.enabled:
        _eve_stage(stream, config.eve.siphon_stage2, config.eve.injection_angle_deg, config.mode, rng)
    after_stage2 = _stream_total(stream)

    true_density = ensemble_density(_stream_ensemble(stream))
    if config.mode == "exact":
        rho_received = true_density
    else:
        counts = sample_counts(true_density, config.tomography.photons_per_basis, rng)
        rho_received = reconstruct(counts)

    eps_dist, eps_purity = config.resolved_thresholds()
    intensities = (sent, after_stage1, after_stage2)
    if not intensity_check(intensities):
        decision = Decision.EVE_DETECTED
    else:
        decision = decide(rho_received, rho_h0, rho_h90, eps_dist, eps_purity)

    return ProtocolOutcome(
        decision=decision,
        rho_hypothesis_0=rho_h0,
        rho_hypothesis_90=rho_h90,
        rho_received=rho_received,
        purity_received=purity(rho_received),
        dist_to_h0=matrix_distance(rho_received, rho_h0),
        dist_to_h90=matrix_distance(rho_received, rho_h90),
        spectrum=eigendecompose(rho_received),
        stage_intensities=intensities,
    )

"""Linear-polarization qubit kernel: pure states, density operators, mixtures,
rotations, Stokes coordinates, and closed-form 2x2 eigendecomposition.

Everything here is an exact, deterministic function of its inputs. Angles are
degrees throughout, canonicalized to [0, 180) because a linear polarization at
theta and theta + 180 deg is the same physical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
DEGENERACY_TOL = 1e-9

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


def normalize_angle(raw_degrees: float) -> float:
    """Reduce an angle in degrees to the canonical range [0, 180)."""
    if not math.isfinite(raw_degrees):
        raise ValueError(f"polarization angle must be finite, got {raw_degrees!r}")
    reduced = raw_degrees % 180.0
    if reduced >= 180.0:  # guard against float roundup at the boundary
        reduced = 0.0
    return reduced


class PureState(NamedTuple):
    """Real-amplitude polarization qubit (cos t, sin t); circular components
    never arise in this protocol."""

    a0: float
    a1: float


class StokesVector(NamedTuple):
    s0: float
    s1: float
    s2: float
    s3: float


def pure_state(angle_degrees: float) -> PureState:
    """Pure linear-polarization state at the given angle."""
    theta = math.radians(normalize_angle(angle_degrees))
    return PureState(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 Hermitian, unit-trace, positive-semidefinite operator.

    Invariants are enforced at construction; the wrapped array is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("density matrix entries must be finite")
        if abs(m[0, 1] - np.conj(m[1, 0])) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(m[0, 0].imag) > HERMITICITY_TOL or abs(m[1, 1].imag) > HERMITICITY_TOL:
            raise ValueError("density matrix diagonal must be real")
        if abs(m[0, 0].real + m[1, 1].real - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace must be 1, got {np.trace(m).real}")
        lmin = _eigvals_2x2(m)[1]
        if lmin < -PSD_TOL:
            raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {lmin})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a density matrix, read as intensities plus
    polarization axes. Angles are None when the spectrum is degenerate
    (eigenvectors are arbitrary there)."""

    lambda_max: float
    lambda_min: float
    principal_angle_deg: Optional[float]
    minor_angle_deg: Optional[float]


@dataclass(frozen=True)
class PhotonEnsemble:
    """Weighted collection of linear-polarization components; the ground
    truth a simulation evolves. Counts are exact integers."""

    components: Tuple[Tuple[int, float], ...]

    def __post_init__(self) -> None:
        canonical = []
        for count, angle in self.components:
            if not isinstance(count, (int, np.integer)) or isinstance(count, bool):
                raise ValueError(f"photon counts must be integers, got {count!r}")
            if count < 0:
                raise ValueError(f"photon counts must be non-negative, got {count}")
            canonical.append((int(count), normalize_angle(angle)))
        object.__setattr__(self, "components", tuple(canonical))

    @property
    def total(self) -> int:
        return sum(count for count, _ in self.components)


def ensemble(components: Sequence[Tuple[int, float]]) -> PhotonEnsemble:
    return PhotonEnsemble(tuple(components))


def density_of_pure(state: PureState) -> DensityMatrix:
    """Projector |psi><psi| of a normalized real-amplitude state."""
    norm = state.a0 * state.a0 + state.a1 * state.a1
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"pure state is not normalized: |a|^2 = {norm}")
    v = np.array([state.a0, state.a1], dtype=complex)
    return DensityMatrix(np.outer(v, v.conj()))


def ensemble_density(ens: PhotonEnsemble) -> DensityMatrix:
    """Convex combination sum_i p_i |psi_i><psi_i| with p_i = count_i / total."""
    total = ens.total
    if total <= 0:
        raise ValueError("ensemble has no photons")
    acc = np.zeros((2, 2), dtype=complex)
    for count, angle in ens.components:
        if count == 0:
            continue
        s = pure_state(angle)
        v = np.array([s.a0, s.a1], dtype=complex)
        acc += (count / total) * np.outer(v, v.conj())
    return DensityMatrix(acc)


def rotate_ensemble(ens: PhotonEnsemble, delta_degrees: float) -> PhotonEnsemble:
    """Rotate every component by delta; counts are unchanged."""
    return PhotonEnsemble(
        tuple((count, normalize_angle(angle + delta_degrees)) for count, angle in ens.components)
    )


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2), in [0.5, 1] for a qubit; 1 iff pure."""
    m = rho.matrix
    return float(np.trace(m @ m).real)


def stokes_from_density(rho: DensityMatrix) -> StokesVector:
    """Stokes parameters S_i = Tr(sigma_i rho).

    Basis assignment: S1 <-> D/A (off-diagonal real), S2 <-> R/L (imaginary
    part), S3 <-> H/V (diagonal).
    """
    m = rho.matrix
    return StokesVector(
        s0=float((m[0, 0] + m[1, 1]).real),
        s1=float(2.0 * m[0, 1].real),
        s2=float(2.0 * m[1, 0].imag),
        s3=float((m[0, 0] - m[1, 1]).real),
    )


def density_from_stokes(s: StokesVector) -> DensityMatrix:
    """Inverse of stokes_from_density: rho = (1/2) sum_i S_i sigma_i.

    Rejects Stokes vectors outside the Poincare unit ball (non-physical).
    """
    r2 = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3
    if r2 > 1.0 + PSD_TOL:
        raise ValueError(f"Stokes vector outside the Poincare sphere: |s|^2 = {r2}")
    m = 0.5 * (s.s0 * SIGMA_0 + s.s1 * SIGMA_1 + s.s2 * SIGMA_2 + s.s3 * SIGMA_3)
    return DensityMatrix(m)


def _eigvals_2x2(m: np.ndarray) -> Tuple[float, float]:
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, descending."""
    half_trace = 0.5 * (m[0, 0].real + m[1, 1].real)
    radius = math.hypot(0.5 * (m[0, 0].real - m[1, 1].real), abs(m[0, 1]))
    return half_trace + radius, half_trace - radius


def eigendecompose(rho: DensityMatrix) -> Spectrum:
    """Closed-form spectral decomposition.

    Eigenvalues are the component intensities; each eigenvector's angle is the
    corresponding polarization axis, sign-normalized so the first nonzero
    component is positive and reduced to [0, 180).
    """
    m = rho.matrix
    lmax, lmin = _eigvals_2x2(m)
    if lmax - lmin < DEGENERACY_TOL:
        return Spectrum(lmax, lmin, None, None)

    a = m[0, 0].real
    c = m[0, 1]
    if abs(c) < 1e-300:
        principal = 0.0 if lmax >= m[1, 1].real else 90.0
    else:
        # eigenvector for lmax is (c, lmax - a); rotate the global phase so the
        # first component is real and positive before reading off the angle
        phase = np.conj(c) / abs(c)
        v1 = ((lmax - a) * phase).real
        principal = normalize_angle(math.degrees(math.atan2(v1, abs(c))))
    minor = normalize_angle(principal + 90.0)
    return Spectrum(lmax, lmin, principal, minor)


def matrix_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Frobenius distance between two density matrices."""
    return float(np.linalg.norm(a.matrix - b.matrix))


def render_matrix(rho: DensityMatrix) -> str:
    """Row-major fixed-point text rendering for CLI output."""
    m = rho.matrix
    rows = []
    for i in range(2):
        cells = []
        for j in range(2):
            z = m[i, j]
            if abs(z.imag) > 5e-7:
                cells.append(f"{z.real:.6f}{z.imag:+.6f}j")
            else:
                cells.append(f"{z.real:.6f}")
        rows.append("[" + ", ".join(cells) + "]")
    return "[" + ", ".join(rows) + "]"

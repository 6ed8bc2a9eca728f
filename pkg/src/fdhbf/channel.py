"""Random channel generation: clustered mmWave links and the near-field
Rician self-interference channel of a co-located TX/RX array pair.

All distances are expressed in carrier wavelengths, all angles in radians.
Pathloss enters only through the normalization: a generator configured with
pathloss L dB produces matrices whose ensemble-mean squared Frobenius norm is
``rows * cols * 10**(-L/10)``.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import db_to_linear

# =====================================================================
# geometry and parameter records
# =====================================================================


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count and spacing in wavelengths."""

    num_elements: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        if not self.spacing_wavelengths > 0.0:
            raise ValueError("spacing_wavelengths must be > 0")


@dataclass(frozen=True)
class ClusteredChannelParams:
    num_clusters: int = 6
    rays_per_cluster: int = 8
    angle_spread_rad: float = np.deg2rad(10.0)  # per-ray Laplacian std dev
    pathloss_db: float = 110.0

    def __post_init__(self):
        if self.num_clusters < 1 or self.rays_per_cluster < 1:
            raise ValueError("cluster and ray counts must be >= 1")
        if self.angle_spread_rad < 0.0:
            raise ValueError("angle_spread_rad must be >= 0")


@dataclass(frozen=True)
class SiChannelParams:
    """Rician self-interference channel between co-located ULAs."""

    k_factor_db: float = 35.0
    pathloss_db: float = 40.0
    tx_rx_distance_wavelengths: float = 2.0
    tx_rx_angle_rad: float = np.pi / 6.0

    def __post_init__(self):
        if not self.tx_rx_distance_wavelengths > 0.0:
            raise ValueError("tx_rx_distance_wavelengths must be > 0")


@dataclass(frozen=True)
class ChannelRealization:
    """One trial's channel draw.

    h_dl : (dl_rx_antennas, tx_antennas) node-to-DL-receiver channel
    h_ul : (rx_antennas, ul_tx_antennas) UL-transmitter-to-node channel
    h_si : (rx_antennas, tx_antennas) self-interference channel
    """

    h_dl: np.ndarray
    h_ul: np.ndarray
    h_si: np.ndarray


# =====================================================================
# steering and clustered generation
# =====================================================================


def steering_vector(geometry: ArrayGeometry, angle_rad: float) -> np.ndarray:
    """Unit-norm ULA response, element l = exp(j*2*pi*s*l*sin(angle))/sqrt(n)."""
    n = geometry.num_elements
    l = np.arange(n)
    phase = 2.0 * np.pi * geometry.spacing_wavelengths * l * np.sin(angle_rad)
    return np.exp(1j * phase) / np.sqrt(n)


def _steering_matrix(geometry: ArrayGeometry, angles: np.ndarray) -> np.ndarray:
    # columns are steering vectors, one per angle
    l = np.arange(geometry.num_elements)[:, None]
    phase = 2.0 * np.pi * geometry.spacing_wavelengths * l * np.sin(angles)[None, :]
    return np.exp(1j * phase) / np.sqrt(geometry.num_elements)


def clustered_from_paths(
    path_gains: np.ndarray,
    rx_angles: np.ndarray,
    tx_angles: np.ndarray,
    geom_rx: ArrayGeometry,
    geom_tx: ArrayGeometry,
    pathloss_db: float,
) -> np.ndarray:
    """Assemble a clustered channel from explicit per-path gains and angles.

    The normalization gamma makes the ensemble mean ||H||_F^2 over unit-power
    i.i.d. path gains equal rows*cols*10**(-pathloss/10).
    """
    gains = np.asarray(path_gains, dtype=np.complex128).ravel()
    rx_angles = np.asarray(rx_angles, dtype=np.float64).ravel()
    tx_angles = np.asarray(tx_angles, dtype=np.float64).ravel()
    if not (gains.size == rx_angles.size == tx_angles.size):
        raise ValueError("path gains and angle lists must have equal length")
    if gains.size == 0:
        raise ValueError("at least one path is required")
    rows, cols = geom_rx.num_elements, geom_tx.num_elements
    a_rx = _steering_matrix(geom_rx, rx_angles)
    a_tx = _steering_matrix(geom_tx, tx_angles)
    gamma = np.sqrt(rows * cols * db_to_linear(-pathloss_db) / gains.size)
    return gamma * ((a_rx * gains[None, :]) @ a_tx.conj().T)


def clustered_channel(
    rows: int,
    cols: int,
    geom_rx: ArrayGeometry,
    geom_tx: ArrayGeometry,
    params: ClusteredChannelParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw a clustered multipath channel matrix.

    Cluster center angles are uniform on [-pi/2, pi/2] independently per side;
    per-ray offsets are Laplacian with the configured standard deviation; path
    gains are i.i.d. unit-variance circular complex Gaussians.

    Draw order (fixed for reproducibility): RX centers, TX centers, RX
    offsets, TX offsets, then path gains.
    """
    if rows != geom_rx.num_elements or cols != geom_tx.num_elements:
        raise ValueError("rows/cols must match the array geometries")
    nc, nr = params.num_clusters, params.rays_per_cluster
    scale = params.angle_spread_rad / np.sqrt(2.0)  # Laplace scale for given std
    rx_centers = rng.uniform(-np.pi / 2.0, np.pi / 2.0, nc)
    tx_centers = rng.uniform(-np.pi / 2.0, np.pi / 2.0, nc)
    rx_off = rng.laplace(0.0, scale, (nc, nr)) if scale > 0 else np.zeros((nc, nr))
    tx_off = rng.laplace(0.0, scale, (nc, nr)) if scale > 0 else np.zeros((nc, nr))
    gains = (rng.standard_normal((nc, nr)) + 1j * rng.standard_normal((nc, nr))) / np.sqrt(2.0)
    rx_angles = rx_centers[:, None] + rx_off
    tx_angles = tx_centers[:, None] + tx_off
    return clustered_from_paths(
        gains, rx_angles, tx_angles, geom_rx, geom_tx, params.pathloss_db
    )


# =====================================================================
# near-field Rician self-interference
# =====================================================================


def _element_positions(
    geom_tx: ArrayGeometry, geom_rx: ArrayGeometry, params: SiChannelParams
) -> tuple[np.ndarray, np.ndarray]:
    """Coplanar layout: TX ULA along +x from the origin; the RX reference
    element sits at distance d perpendicular to the TX axis, and the RX axis
    is rotated by the configured angle relative to the TX axis."""
    tx_idx = np.arange(geom_tx.num_elements)
    rx_idx = np.arange(geom_rx.num_elements)
    tx_pos = np.stack([tx_idx * geom_tx.spacing_wavelengths, np.zeros_like(tx_idx, dtype=float)], axis=1)
    w = params.tx_rx_angle_rad
    axis = np.array([np.cos(w), np.sin(w)])
    origin = np.array([0.0, params.tx_rx_distance_wavelengths])
    rx_pos = origin[None, :] + rx_idx[:, None] * geom_rx.spacing_wavelengths * axis[None, :]
    return tx_pos, rx_pos


def si_los_matrix(
    geom_rx: ArrayGeometry, geom_tx: ArrayGeometry, params: SiChannelParams
) -> np.ndarray:
    """Deterministic near-field line-of-sight component, unnormalized.

    Entry (m, n) = (r_ref / r_mn) * exp(-j*2*pi*r_mn) with r_mn the distance
    between RX element m and TX element n and r_ref the minimum distance, so
    the strongest entry has unit magnitude.
    """
    tx_pos, rx_pos = _element_positions(geom_tx, geom_rx, params)
    diff = rx_pos[:, None, :] - tx_pos[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    r_ref = dist.min()
    return (r_ref / dist) * np.exp(-2j * np.pi * dist)


def rician_si_channel(
    rx_antennas: int,
    tx_antennas: int,
    geom_rx: ArrayGeometry,
    geom_tx: ArrayGeometry,
    params: SiChannelParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw the self-interference channel.

    Rician mixture of the deterministic near-field LOS matrix and an i.i.d.
    Rayleigh scattered part, each normalized so the ensemble mean ||H||_F^2 is
    rx_antennas * tx_antennas * 10**(-pathloss/10) for every K factor.
    """
    if rx_antennas != geom_rx.num_elements or tx_antennas != geom_tx.num_elements:
        raise ValueError("antenna counts must match the array geometries")
    target = rx_antennas * tx_antennas * db_to_linear(-params.pathloss_db)
    nlos = (
        rng.standard_normal((rx_antennas, tx_antennas))
        + 1j * rng.standard_normal((rx_antennas, tx_antennas))
    ) / np.sqrt(2.0)
    nlos *= np.sqrt(target / (rx_antennas * tx_antennas))
    los = si_los_matrix(geom_rx, geom_tx, params)
    los *= np.sqrt(target) / np.linalg.norm(los)
    k = db_to_linear(params.k_factor_db)
    if np.isinf(k):
        return los
    return np.sqrt(k / (k + 1.0)) * los + np.sqrt(1.0 / (k + 1.0)) * nlos


# =====================================================================
# debug dumps
# =====================================================================


def dump_matrix(path, m: np.ndarray) -> None:
    """Write a matrix as text: a `rows cols` header, then one `re im` line
    per entry in row-major order. Round-trips exactly through load_matrix."""
    m = np.asarray(m, dtype=np.complex128)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{m.shape[0]} {m.shape[1]}\n")
        for val in m.ravel(order="C"):
            fh.write(f"{float(val.real)!r} {float(val.imag)!r}\n")


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        rows, cols = (int(tok) for tok in fh.readline().split())
        data = np.empty(rows * cols, dtype=np.complex128)
        for i in range(rows * cols):
            re, im = (float(tok) for tok in fh.readline().split())
            data[i] = complex(re, im)
    return data.reshape(rows, cols)

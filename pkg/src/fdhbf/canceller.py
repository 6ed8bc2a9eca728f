"""Reduced-complexity multi-tap analog canceller.

The canceller taps into N of the tx_chains * rx_chains RF chain pairs.  Its
chain-level transfer matrix factors as C = L3 @ L2 @ L1 where L1 (N x
tx_chains) picks one TX chain per tap, L2 = diag(tap values) applies a
complex attenuation/phase per tap (delays absorbed into the phase), and L3
(rx_chains x N) adds each tap into one RX chain.  Hardware size therefore
scales with the chain counts, never with antenna counts.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

# =====================================================================
# routing
# =====================================================================


@dataclass(frozen=True)
class TapRouting:
    """An ordered set of distinct (tx_chain, rx_chain) pairs, 1-based."""

    tx_chains: int
    rx_chains: int
    taps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for tx, rx in self.taps:
            if not (1 <= tx <= self.tx_chains):
                raise ValueError(f"tap tx index {tx} outside 1..{self.tx_chains}")
            if not (1 <= rx <= self.rx_chains):
                raise ValueError(f"tap rx index {rx} outside 1..{self.rx_chains}")
            if (tx, rx) in seen:
                raise ValueError(f"duplicate tap pair {(tx, rx)}")
            seen.add((tx, rx))

    @property
    def num_taps(self) -> int:
        return len(self.taps)

    def selection_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Binary (L1, L3): each L1 row and each L3 column sums to exactly 1."""
        l1 = np.zeros((self.num_taps, self.tx_chains))
        l3 = np.zeros((self.rx_chains, self.num_taps))
        for j, (tx, rx) in enumerate(self.taps):
            l1[j, tx - 1] = 1.0
            l3[rx - 1, j] = 1.0
        return l1, l3


def enumerate_routings(tx_chains: int, rx_chains: int, num_taps: int) -> list[TapRouting]:
    """All tap placements, as combinations of distinct chain pairs in
    lexicographic (tx, rx) order.  num_taps = 0 yields the single empty
    routing (canceller off)."""
    if tx_chains < 1 or rx_chains < 1:
        raise ValueError("chain counts must be >= 1")
    total = tx_chains * rx_chains
    if not (0 <= num_taps <= total):
        raise ValueError(f"num_taps must lie in 0..{total} (got {num_taps})")
    pairs = [(tx, rx) for tx in range(1, tx_chains + 1) for rx in range(1, rx_chains + 1)]
    return [
        TapRouting(tx_chains, rx_chains, combo)
        for combo in itertools.combinations(pairs, num_taps)
    ]


# =====================================================================
# tap values and impairments
# =====================================================================


@dataclass(frozen=True)
class TapImpairments:
    """Hardware quantization of the tap weights.

    attenuation_step_db: magnitude grid in dB (0 = continuous).
    phase_bits: the phase grid has 2**phase_bits levels (0 = continuous).
    Disabled by default: taps are ideal complex weights.
    """

    enabled: bool = False
    attenuation_step_db: float = 0.25
    phase_bits: int = 10

    def __post_init__(self):
        if self.attenuation_step_db < 0.0:
            raise ValueError("attenuation_step_db must be >= 0")
        if self.phase_bits < 0:
            raise ValueError("phase_bits must be >= 0")

    @staticmethod
    def ideal() -> "TapImpairments":
        return TapImpairments(enabled=False)


def quantization_error_bound(magnitude: float, impairments: TapImpairments) -> float:
    """Upper bound on |quantized - ideal| for a tap of the given magnitude:
    magnitude * (10**(step/40) - 1 + pi / 2**phase_bits), with each term
    dropping out when the corresponding knob is continuous."""
    if not impairments.enabled:
        return 0.0
    mag_term = (
        10.0 ** (impairments.attenuation_step_db / 40.0) - 1.0
        if impairments.attenuation_step_db > 0.0
        else 0.0
    )
    phase_term = np.pi / 2.0 ** impairments.phase_bits if impairments.phase_bits > 0 else 0.0
    return magnitude * (mag_term + phase_term)


def _quantize(value: complex, impairments: TapImpairments) -> complex:
    mag = abs(value)
    if mag == 0.0:
        return 0.0 + 0.0j
    phase = np.angle(value)
    if impairments.attenuation_step_db > 0.0:
        db = 20.0 * np.log10(mag)
        db = np.round(db / impairments.attenuation_step_db) * impairments.attenuation_step_db
        mag = 10.0 ** (db / 20.0)
    if impairments.phase_bits > 0:
        step = 2.0 * np.pi / 2.0 ** impairments.phase_bits
        phase = np.round(phase / step) * step
    return mag * np.exp(1j * phase)


def set_tap_values(
    routing: TapRouting,
    si_at_chains: np.ndarray,
    impairments: TapImpairments | None = None,
) -> np.ndarray:
    """Tap weights that null the routed entries of the chain-level SI matrix.

    Tap j routed (tx, rx) gets -si_at_chains[rx-1, tx-1], then passes through
    the quantizer when impairments are enabled.
    """
    si_at_chains = np.asarray(si_at_chains, dtype=np.complex128)
    if si_at_chains.shape != (routing.rx_chains, routing.tx_chains):
        raise ValueError(
            f"si_at_chains must be {(routing.rx_chains, routing.tx_chains)}, "
            f"got {si_at_chains.shape}"
        )
    impairments = impairments or TapImpairments.ideal()
    values = np.empty(routing.num_taps, dtype=np.complex128)
    for j, (tx, rx) in enumerate(routing.taps):
        ideal = -si_at_chains[rx - 1, tx - 1]
        values[j] = _quantize(ideal, impairments) if impairments.enabled else ideal
    return values


def assemble_canceller(routing: TapRouting, values: np.ndarray) -> np.ndarray:
    """Chain-level canceller matrix C = L3 @ diag(values) @ L1, computed as a
    scatter: value j is added at row rx_j-1, column tx_j-1."""
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (routing.num_taps,):
        raise ValueError(f"need {routing.num_taps} tap values, got shape {values.shape}")
    c = np.zeros((routing.rx_chains, routing.tx_chains), dtype=np.complex128)
    if routing.num_taps:
        rows = np.fromiter((rx - 1 for _, rx in routing.taps), dtype=int)
        cols = np.fromiter((tx - 1 for tx, _ in routing.taps), dtype=int)
        np.add.at(c, (rows, cols), values)
    return c


def effective_si(
    w_rf: np.ndarray, h_si: np.ndarray, f_rf: np.ndarray, canceller: np.ndarray
) -> np.ndarray:
    """Residual chain-level SI after analog combining and cancellation:
    w_rf^H @ h_si @ f_rf + canceller."""
    w_rf = np.asarray(w_rf, dtype=np.complex128)
    h_si = np.asarray(h_si, dtype=np.complex128)
    f_rf = np.asarray(f_rf, dtype=np.complex128)
    canceller = np.asarray(canceller, dtype=np.complex128)
    if w_rf.shape[0] != h_si.shape[0] or h_si.shape[1] != f_rf.shape[0]:
        raise ValueError("w_rf, h_si, f_rf dimensions do not chain")
    if canceller.shape != (w_rf.shape[1], f_rf.shape[1]):
        raise ValueError("canceller shape must be (rx_chains, tx_chains)")
    return w_rf.conj().T @ h_si @ f_rf + canceller


@dataclass(frozen=True)
class CancellerConfig:
    """A fully-specified canceller instance for one trial."""

    routing: TapRouting
    values: np.ndarray
    impairments: TapImpairments = field(default_factory=TapImpairments.ideal)

    def matrix(self) -> np.ndarray:
        return assemble_canceller(self.routing, self.values)

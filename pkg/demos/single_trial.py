"""One full trial, step by step: channels in, rates out.

Draws the three channels, solves the whole design — analog beams, tap
routing, digital precoder/combiner — and unpacks what came back.
"""

import numpy as np

from fdhbf.beamforming import NodeConfig
from fdhbf.canceller import TapImpairments
from fdhbf.channel import (
    ArrayGeometry,
    ChannelRealization,
    ClusteredChannelParams,
    SiChannelParams,
    clustered_channel,
    rician_si_channel,
)
from fdhbf.codebook import dft_codebook
from fdhbf.numerics import watts_to_dbm
from fdhbf.rates import residual_si_profile
from fdhbf.trial import solve_trial


def main():
    rng = np.random.default_rng(11)
    node = NodeConfig(tx_antennas=32, rx_antennas=16, tx_chains=4,
                      rx_chains=2, dl_rx_antennas=4, tx_power_dbm=40.0,
                      ul_tx_power_dbm=40.0, si_budget_dbm=-47.0,
                      rx_noise_dbm=-110.0, dl_rx_noise_dbm=-110.0)
    spacing = 0.5
    dl_params = ClusteredChannelParams(pathloss_db=110.0)
    si_params = SiChannelParams(k_factor_db=35.0, pathloss_db=40.0)

    channels = ChannelRealization(
        h_dl=clustered_channel(node.dl_rx_antennas, node.tx_antennas,
                               ArrayGeometry(node.dl_rx_antennas, spacing),
                               ArrayGeometry(node.tx_antennas, spacing),
                               dl_params, rng),
        h_ul=clustered_channel(node.rx_antennas, node.ul_tx_antennas,
                               ArrayGeometry(node.rx_antennas, spacing),
                               ArrayGeometry(node.ul_tx_antennas, spacing),
                               dl_params, rng),
        h_si=rician_si_channel(node.rx_antennas, node.tx_antennas,
                               ArrayGeometry(node.rx_antennas, spacing),
                               ArrayGeometry(node.tx_antennas, spacing),
                               si_params, rng),
    )

    result = solve_trial(channels, node,
                         dft_codebook(node.tx_subarray),
                         dft_codebook(node.rx_subarray),
                         num_taps=4,
                         impairments=TapImpairments(enabled=True))

    d = result.design
    print(f"tx beams {d.f_rf.beam_indices}   rx beams {d.w_rf.beam_indices}")
    print(f"tap routing {result.chosen_routing.taps}")
    print(f"digital precoder {d.f_bb.shape[0]}x{d.f_bb.shape[1]} on a "
          f"{result.dl_subspace_dim}-dim low-leak subspace "
          f"(feasible: {result.rates.feasible})")

    prof = residual_si_profile(result.h_si_eff, d.f_bb)
    print("residual self-interference per RX chain [dBm]: "
          + "  ".join(f"{watts_to_dbm(float(p)):7.2f}" for p in prof)
          + f"   (budget {node.si_budget_dbm:.0f})")

    r = result.rates
    print(f"downlink {r.dl_rate_bpshz:6.2f} bits/s/Hz")
    print(f"uplink   {r.ul_rate_bpshz:6.2f} bits/s/Hz")
    print(f"together {r.fd_sum_bpshz:6.2f} vs half-duplex baseline "
          f"{r.hd_rate_bpshz:.2f}  ({r.fd_sum_bpshz / r.hd_rate_bpshz:.2f}x)")


if __name__ == "__main__":
    main()

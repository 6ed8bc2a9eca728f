"""The reduced-tap analog canceller, from routing enumeration to residuals.

A node with 4 TX and 2 RX chains has 8 chain-pair interconnects.  A full
canceller needs one tap per pair; here 4 taps are routed to a chosen subset
of pairs instead.  This script enumerates the routings, nulls one draw's
routed entries exactly, then turns on tap quantization and compares the
residual against its analytic bound.
"""

import numpy as np

from fdhbf.canceller import (
    TapImpairments,
    assemble_canceller,
    effective_si,
    enumerate_routings,
    quantization_error_bound,
    set_tap_values,
)


def main():
    rng = np.random.default_rng(3)
    tx_chains, rx_chains, taps = 4, 2, 4

    # 1) every way to spread 4 taps over the 8 interconnects
    routings = enumerate_routings(tx_chains, rx_chains, taps)
    print(f"{taps} taps over {tx_chains * rx_chains} interconnects: "
          f"{len(routings)} routings")
    print(f"  first  {routings[0].taps}")
    print(f"  last   {routings[-1].taps}")

    # 2) chain-level loopback coupling for one draw (already combined
    #    through the analog beams, so it is rx_chains x tx_chains)
    si = (rng.standard_normal((rx_chains, tx_chains))
          + 1j * rng.standard_normal((rx_chains, tx_chains))) * 1e-3
    routing = routings[17]
    print(f"routing #{17}: {routing.taps}")

    # 3) ideal taps: routed entries cancel exactly, the rest pass through
    values = set_tap_values(routing, si)
    resid = si + assemble_canceller(routing, values)
    print("ideal taps, |residual| per entry:")
    for r in range(rx_chains):
        print("   " + "  ".join(f"{abs(resid[r, t]):.3e}"
                                for t in range(tx_chains)))

    # 4) quantized taps: 0.25 dB attenuation steps, 10 phase bits
    imp = TapImpairments(enabled=True, attenuation_step_db=0.25, phase_bits=10)
    q_values = set_tap_values(routing, si, imp)
    q_resid = si + assemble_canceller(routing, q_values)
    print("quantized taps, routed entries vs analytic bound:")
    for tx, rx in routing.taps:
        mag = abs(si[rx - 1, tx - 1])
        bound = quantization_error_bound(mag, imp)
        print(f"  pair (tx {tx}, rx {rx}): |resid| = "
              f"{abs(q_resid[rx - 1, tx - 1]):.3e}  bound = {bound:.3e}")

    # 5) the same composition via the full-matrix helper
    w_rf = np.eye(rx_chains)
    f_rf = np.eye(tx_chains)
    assert np.allclose(
        effective_si(w_rf, si, f_rf, assemble_canceller(routing, values)),
        resid)
    print("effective_si() reproduces the hand-assembled residual")


if __name__ == "__main__":
    main()

"""Populations during the two-qubit -> ququart transfer for each coupling variant."""

import numpy as np

from _common import out_dir, write_csv
from cavity_ququart.protocols import state_transfer as tr
from cavity_ququart.protocols.states import QubitPairState


def main() -> None:
    out = out_dir(__doc__)
    state = QubitPairState.haar_random(np.random.default_rng(7))
    for variant in tr.VARIANTS:
        series = tr.transfer_trace(state, variant, n_samples=401)
        header = ["t_seconds", *(f"{k}_pop" for k in series.labels), "fidelity"]
        rows = [[t, *pops, f] for t, pops, f in zip(series.times, series.populations, series.fidelity_to_target)]
        write_csv(out / f"transfer_{variant}.csv", header, rows)
        print(f"{variant}: fidelity at transfer time {tr.transfer(state, variant).fidelity:.12f}")


if __name__ == "__main__":
    main()

"""AMES populations from |gg4> for several couplings around the mismatch condition."""

import math

from _common import out_dir, write_csv
from cavity_ququart.models import SystemParams
from cavity_ququart.protocols import ames

RATIOS = (0.5, 0.8, 1.0, 1.5)  # lambda' in units of delta/2


def main() -> None:
    out = out_dir(__doc__)
    ref = SystemParams.reference_mismatch()
    for ratio in RATIOS:
        p = SystemParams.from_lambda_prime(ratio * ref.delta_mismatch / 2, ref.delta_mismatch,
                                           ref.detuning, ref.omega_op)
        t_end = 2 * math.pi / p.rabi_mismatch
        series = ames.ames_trace("mismatch", p, n_samples=401, t_end=t_end)
        header = ["t_seconds", *(f"{k}_pop" for k in series.labels)]
        write_csv(out / f"ames_ratio_{ratio:g}.csv", header,
                  [[t, *pops] for t, pops in zip(series.times, series.populations)])
        print(f"ratio {ratio}: best fidelity over one period with the pi-on-A correction {ames.max_fidelity_over_time(p):.6f}")


if __name__ == "__main__":
    main()

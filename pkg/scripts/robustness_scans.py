"""AMES fidelity against relative errors in the interaction time and in lambda'."""

import numpy as np

from _common import out_dir, write_csv
from cavity_ququart.protocols import ames

SPANS = {"time": 0.1, "coupling": 0.2}


def main() -> None:
    out = out_dir(__doc__)
    for axis, span in SPANS.items():
        curve = ames.ames_sensitivity_scan(axis, np.linspace(-span, span, 81))
        write_csv(out / f"scan_{axis}.csv", ["relative_error", "fidelity"], zip(curve.errors, curve.fidelities))
        inner = np.abs(curve.errors) <= span / 2 + 1e-12
        print(f"{axis}: min fidelity within +-{span / 2:g} is {curve.fidelities[inner].min():.6f}")


if __name__ == "__main__":
    main()

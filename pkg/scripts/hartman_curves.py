"""Phase time against kappa*d for every barrier family, written as CSV."""

import argparse
import csv
import math
from pathlib import Path

import numpy as np

from evanesim.scenarios import (
    DoublePrismSpec,
    QuantumBarrierSpec,
    bloch_kappa,
    double_prism,
    quantum_barrier,
    quarter_wave_acoustic_array,
    quarter_wave_lattice,
    undersized_waveguide,
)
from evanesim.timing import barrier_kappa, delays_at

F0 = 9.15e9
W0 = 2 * math.pi * F0


def continuous(builder, omega, kappa, kd):
    return [(x, *delays_at(builder(x / kappa), omega)) for x in kd]


def periodic(builder, omega, max_kd):
    unit = builder(1)
    kappa = bloch_kappa(unit, omega)
    period = unit.layers[0].thickness + unit.layers[1].thickness
    n_max = int(max_kd / (kappa * period)) + 1
    return [(kappa * n * period, *delays_at(builder(n), omega)) for n in range(1, n_max + 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="hartman_curves", help="output directory")
    ap.add_argument("--max-kd", type=float, default=12.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    kd = np.linspace(0.05, args.max_kd, 240)
    prism = DoublePrismSpec()
    guide = lambda L: undersized_waveguide(30e-3, 10e-3, L)
    curves = {
        "ftir": continuous(lambda d: double_prism(prism.with_gap(d)), W0, complex(prism.gap_kz()).imag, kd),
        "waveguide": continuous(guide, W0, barrier_kappa(guide(0.01), W0), kd),
        "quantum": continuous(lambda L: quantum_barrier(QuantumBarrierSpec(1.0, L, 0.5)), 0.5, 1.0, kd),
        "lattice": periodic(lambda n: quarter_wave_lattice(1.6, 1.0, F0, n), W0, args.max_kd),
        "acoustic": periodic(lambda n: quarter_wave_acoustic_array(1e3, 830, 415, n), 2 * math.pi * 1e3, args.max_kd),
    }
    units = {"quantum": "hbar/E"}
    for name, rows in curves.items():
        u = units.get(name, "s")
        with open(out / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kappa_d[-]", f"tau_t[{u}]", f"tau_r[{u}]"])
            w.writerows([[format(v, ".17g") for v in r] for r in rows])
        print(f"{name:<10} {len(rows):4d} rows, tau at largest kappa*d = {rows[-1][1]:.6g} {u}")


if __name__ == "__main__":
    main()

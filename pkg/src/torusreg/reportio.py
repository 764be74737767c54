"""CSV emission for sweep rows and reconstructions.

Floating values are serialized with 17 significant digits so files
round-trip exactly; line endings are LF.
"""

from __future__ import annotations

from typing import Sequence

from .harness import SweepRow
from .torus import Signal

__all__ = ["SWEEP_HEADER", "format_float", "write_sweep_csv", "read_sweep_csv", "write_signals_csv"]

SWEEP_HEADER = "delta,alpha,k_worst,n_bregman,kl_error,l1_error,data_residual,dr_iterations"


def format_float(value: float) -> str:
    return f"{value:.17g}"


def write_sweep_csv(rows: Sequence[SweepRow], path: str) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write(SWEEP_HEADER + "\n")
        for r in rows:
            handle.write(
                ",".join(
                    [
                        format_float(r.delta),
                        format_float(r.alpha),
                        str(r.k_worst),
                        str(r.n_bregman),
                        format_float(r.kl_error),
                        format_float(r.l1_error),
                        format_float(r.data_residual),
                        str(r.dr_iterations),
                    ]
                )
                + "\n"
            )


def read_sweep_csv(path: str) -> list[SweepRow]:
    rows = []
    with open(path, newline="\n") as handle:
        header = handle.readline().strip()
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep CSV header: {header!r}")
        for line in handle:
            d, a, kw, nb, kl, l1, res, it = line.strip().split(",")
            rows.append(
                SweepRow(
                    delta=float(d),
                    alpha=float(a),
                    k_worst=int(kw),
                    n_bregman=int(nb),
                    kl_error=float(kl),
                    l1_error=float(l1),
                    data_residual=float(res),
                    dr_iterations=int(it),
                )
            )
    return rows


def write_signals_csv(path: str, columns: dict[str, Signal]) -> None:
    """Write named signals side by side, first column the grid points."""
    grids = {sig.grid.n for sig in columns.values()}
    if len(grids) != 1:
        raise ValueError("signals must share one grid")
    names = list(columns)
    first = columns[names[0]]
    with open(path, "w", newline="\n") as handle:
        handle.write(",".join(["x"] + names) + "\n")
        for i, x in enumerate(first.grid.points):
            cells = [format_float(x)] + [format_float(columns[n].values[i]) for n in names]
            handle.write(",".join(cells) + "\n")

"""CSV / JSON serialization for signals, kernels and cumulant bundles.

CSV carries the grid in comment headers and full-precision (17 significant
digit) scientific notation so that round trips and acceptance comparisons
are not rounded away.  JSON bundles are written with sorted keys and fixed
separators, making output bytes a pure function of the data.
"""
from __future__ import annotations

import json

import numpy as np

from .grids import OrderingParam, Signal, TimeGrid, TwoPointKernel
from .rotation import CumulantSet, RotatedCumulants

__all__ = [
    "fmt",
    "signal_to_csv",
    "signal_from_csv",
    "kernel_to_csv",
    "kernel_from_csv",
    "signal_to_json",
    "signal_from_json",
    "kernel_to_json",
    "kernel_from_json",
    "cumulants_to_json",
    "cumulants_from_json",
    "rotated_to_json",
    "rotated_from_json",
    "dump_json",
    "momentum_table_to_csv",
]


def fmt(x: float) -> str:
    return f"{x:.17g}"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _grid_header(grid: TimeGrid) -> str:
    return f"# grid n={grid.n} dt={fmt(grid.dt)} t0={fmt(grid.t0)}\n"


def _parse_grid_header(line: str) -> TimeGrid:
    if not line.startswith("# grid"):
        raise ValueError("missing grid header")
    fields = dict(tok.split("=") for tok in line[1:].split() if "=" in tok)
    return TimeGrid(n=int(fields["n"]), dt=float(fields["dt"]), t0=float(fields["t0"]))


def signal_to_csv(f: Signal) -> str:
    lines = ["# keldrot signal\n", _grid_header(f.grid), "t,re,im\n"]
    for t, v in zip(f.grid.times, f.values):
        lines.append(f"{fmt(t)},{fmt(v.real)},{fmt(v.imag)}\n")
    return "".join(lines)


def signal_from_csv(text: str) -> Signal:
    lines = text.splitlines()
    grid = _parse_grid_header(lines[1])
    vals = []
    for line in lines[3:]:
        if not line.strip():
            continue
        _, re, im = line.split(",")
        vals.append(float(re) + 1j * float(im))
    return Signal(grid, np.array(vals))


def kernel_to_csv(K: TwoPointKernel) -> str:
    lines = ["# keldrot kernel\n", _grid_header(K.grid), "t,tp,re,im\n"]
    t = K.grid.times
    for i in range(K.grid.n):
        for j in range(K.grid.n):
            v = K.values[i, j]
            lines.append(f"{fmt(t[i])},{fmt(t[j])},{fmt(v.real)},{fmt(v.imag)}\n")
    return "".join(lines)


def kernel_from_csv(text: str) -> TwoPointKernel:
    lines = text.splitlines()
    grid = _parse_grid_header(lines[1])
    vals = np.zeros(grid.n * grid.n, dtype=complex)
    idx = 0
    for line in lines[3:]:
        if not line.strip():
            continue
        _, _, re, im = line.split(",")
        vals[idx] = float(re) + 1j * float(im)
        idx += 1
    return TwoPointKernel(grid, vals.reshape(grid.n, grid.n))


def _grid_obj(grid: TimeGrid) -> dict:
    return {"n": grid.n, "dt": grid.dt, "t0": grid.t0}


def _grid_from_obj(obj: dict) -> TimeGrid:
    return TimeGrid(n=int(obj["n"]), dt=float(obj["dt"]), t0=float(obj["t0"]))


def signal_to_obj(f: Signal) -> dict:
    return {
        "kind": "signal",
        "grid": _grid_obj(f.grid),
        "re": f.values.real.tolist(),
        "im": f.values.imag.tolist(),
    }


def signal_from_obj(obj: dict) -> Signal:
    grid = _grid_from_obj(obj["grid"])
    return Signal(grid, np.array(obj["re"]) + 1j * np.array(obj["im"]))


def kernel_to_obj(K: TwoPointKernel) -> dict:
    return {
        "kind": "kernel",
        "grid": _grid_obj(K.grid),
        "re": K.values.real.tolist(),
        "im": K.values.imag.tolist(),
    }


def kernel_from_obj(obj: dict) -> TwoPointKernel:
    grid = _grid_from_obj(obj["grid"])
    vals = np.array(obj["re"]) + 1j * np.array(obj["im"])
    return TwoPointKernel(grid, vals)


def signal_to_json(f: Signal) -> str:
    return dump_json(signal_to_obj(f))


def signal_from_json(text: str) -> Signal:
    return signal_from_obj(json.loads(text))


def kernel_to_json(K: TwoPointKernel) -> str:
    return dump_json(kernel_to_obj(K))


def kernel_from_json(text: str) -> TwoPointKernel:
    return kernel_from_obj(json.loads(text))


def cumulants_to_json(ctl: CumulantSet) -> str:
    return dump_json({
        "kind": "cumulants",
        "hbar_c": ctl.hbar_c,
        "mean": signal_to_obj(ctl.mean),
        "K_F": kernel_to_obj(ctl.K_F),
        "K_rev": kernel_to_obj(ctl.K_rev),
        "K_W": kernel_to_obj(ctl.K_W),
    })


def cumulants_from_json(text: str) -> CumulantSet:
    obj = json.loads(text)
    if obj.get("kind") != "cumulants":
        raise ValueError("not a cumulant bundle")
    return CumulantSet(
        mean=signal_from_obj(obj["mean"]),
        K_F=kernel_from_obj(obj["K_F"]),
        K_rev=kernel_from_obj(obj["K_rev"]),
        K_W=kernel_from_obj(obj["K_W"]),
        hbar_c=float(obj["hbar_c"]),
    )


def rotated_to_json(rot: RotatedCumulants) -> str:
    return dump_json({
        "kind": "rotated",
        "s": rot.p.s,
        "hbar_c": rot.hbar_c,
        "mean": signal_to_obj(rot.mean),
        "D_R": kernel_to_obj(rot.D_R),
        "N_s": kernel_to_obj(rot.N_s),
    })


def rotated_from_json(text: str) -> RotatedCumulants:
    obj = json.loads(text)
    if obj.get("kind") != "rotated":
        raise ValueError("not a rotated bundle")
    return RotatedCumulants(
        mean=signal_from_obj(obj["mean"]),
        D_R=kernel_from_obj(obj["D_R"]),
        N_s=kernel_from_obj(obj["N_s"]),
        p=OrderingParam(float(obj["s"])),
        hbar_c=float(obj["hbar_c"]),
    )


def momentum_table_to_csv(columns: dict, header_comment: str = "") -> str:
    """CSV for momentum-space tables: columns maps name -> array.

    Complex columns are split into <name>_re / <name>_im pairs.
    """
    expanded: list[tuple[str, np.ndarray]] = []
    length = None
    for name, arr in columns.items():
        arr = np.asarray(arr)
        if length is None:
            length = len(arr)
        if len(arr) != length:
            raise ValueError("columns must share a length")
        if np.iscomplexobj(arr):
            expanded.append((f"{name}_re", arr.real))
            expanded.append((f"{name}_im", arr.imag))
        else:
            expanded.append((name, arr.astype(float)))
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}\n")
    lines.append(",".join(name for name, _ in expanded) + "\n")
    for i in range(length or 0):
        lines.append(",".join(fmt(arr[i]) for _, arr in expanded) + "\n")
    return "".join(lines)

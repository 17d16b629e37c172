"""Batch sweeps of genuine negativity over the dimensionless time grid.

A scan evolves one or more initial states through the dephasing channel
on a nu-grid, computes E at every point, and emits the result table as
CSV and/or an SVG figure.  Random-state tags produce an ensemble of
member curves plus their mean and sample standard deviation.  Given the
same configuration and seed the emitted files are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import DephasingParams, evolve_analytic, f_function
from .gme import genuine_negativity
from .states import (FOUR_QUBIT_TAGS, RandomStream, ghz, haar_random,
                     named_four_qubit, random_weighted_graph, w,
                     weighted_graph_state)
from .tensor import PureState

NAMED_TAGS = {
    "ghz3": lambda: ghz(3),
    "w3": lambda: w(3),
    "ghz4": lambda: ghz(4),
    "w4": lambda: w(4),
    **{tag: (lambda t: (lambda: named_four_qubit(t)))(tag) for tag in FOUR_QUBIT_TAGS},
}
RANDOM_TAGS = ("random-pure", "wgs")
ALL_TAGS = tuple(NAMED_TAGS) + RANDOM_TAGS

FORMATS = ("csv", "svg", "both")

# deterministic SVG output: salted element ids, no embedded creation date
SVG_HASHSALT = "gmedyn"


@dataclass(frozen=True)
class ScanConfig:
    state: str
    a: float = 1.0
    tau: tuple[float, ...] = (5.0,)
    nu_max: float = 1.0
    steps: int = 101
    n_qubits: int = 3
    ensemble_size: int = 100
    seed: int = 0
    fmt: str = "csv"
    with_f: bool = False

    def __post_init__(self):
        if self.state not in ALL_TAGS:
            raise ValueError(f"unknown state tag {self.state!r}; "
                             f"choose from {', '.join(ALL_TAGS)}")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if self.nu_max <= 0:
            raise ValueError("nu_max must be positive")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if not self.tau or any(t <= 0 for t in self.tau):
            raise ValueError("tau values must be positive")
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.state in RANDOM_TAGS and not 2 <= self.n_qubits <= 4:
            raise ValueError("n_qubits must be in 2..4 for random tags")
        object.__setattr__(self, "tau", tuple(float(t) for t in self.tau))


@dataclass(frozen=True)
class Series:
    """One named column of a scan: E values (or f/10) per grid point."""

    name: str
    values: np.ndarray
    role: str = "state"  # state | member | mean | std | f


@dataclass(frozen=True)
class ScanResult:
    nu: np.ndarray
    series: tuple[Series, ...]

    def __post_init__(self):
        if np.any(np.diff(self.nu) <= 0):
            raise ValueError("nu grid must be strictly increasing")
        for s in self.series:
            if s.values.shape != self.nu.shape:
                raise ValueError(f"series {s.name!r} length mismatch")

    def by_name(self, name: str) -> Series:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)


def e_curve(psi: PureState, params: DephasingParams, grid: np.ndarray) -> np.ndarray:
    """E(nu) for one initial pure state along the grid."""
    rho0 = psi.density()
    return np.array([
        genuine_negativity(evolve_analytic(rho0, params, nu)).E for nu in grid
    ])


def ensemble_mean(curves) -> tuple[np.ndarray, np.ndarray]:
    """Arithmetic mean and sample standard deviation per grid point.

    Uses the n-1 denominator; a single curve gets std identically 0.
    """
    arr = np.asarray(curves, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError("need at least one curve of equal length")
    mean = arr.mean(axis=0)
    std = arr.std(axis=0, ddof=1) if arr.shape[0] > 1 else np.zeros_like(mean)
    return mean, std


def _ensemble_states(cfg: ScanConfig) -> list[PureState]:
    stream = RandomStream(cfg.seed)
    if cfg.state == "random-pure":
        return [haar_random(cfg.n_qubits, stream.child(i))
                for i in range(cfg.ensemble_size)]
    return [weighted_graph_state(random_weighted_graph(cfg.n_qubits, stream.child(i)))
            for i in range(cfg.ensemble_size)]


def run_scan(cfg: ScanConfig) -> ScanResult:
    """Sweep every configured tau over the nu grid and collect E columns."""
    grid = np.linspace(0.0, cfg.nu_max, cfg.steps)
    multi_tau = len(cfg.tau) > 1
    series: list[Series] = []

    for tau in cfg.tau:
        params = DephasingParams(cfg.a, tau)
        suffix = f"_tau{tau:g}" if multi_tau else ""
        if cfg.state in NAMED_TAGS:
            psi = NAMED_TAGS[cfg.state]()
            series.append(Series(cfg.state + suffix, e_curve(psi, params, grid)))
        else:
            members = _ensemble_states(cfg)
            curves = [e_curve(psi, params, grid) for psi in members]
            for i, c in enumerate(curves):
                series.append(Series(f"{cfg.state}_{i:03d}{suffix}", c, role="member"))
            mean, std = ensemble_mean(curves)
            series.append(Series("mean" + suffix, mean, role="mean"))
            series.append(Series("std" + suffix, std, role="std"))
        if cfg.with_f:
            series.append(Series("f_over_10" + suffix,
                                 emit_f_curve(params, grid), role="f"))
    return ScanResult(grid, tuple(series))


def emit_f_curve(params: DephasingParams, grid: np.ndarray) -> np.ndarray:
    """f(nu) scaled down by a factor of 10, as plotted alongside E curves."""
    return np.array([f_function(params, nu) / 10.0 for nu in grid])


def emit_csv(result: ScanResult, path) -> None:
    """Write `nu,<series...>` with 9-digit fixed-point values, one row per grid point."""
    lines = ["nu," + ",".join(s.name for s in result.series)]
    for k in range(len(result.nu)):
        row = [f"{result.nu[k]:.9f}"] + [f"{s.values[k]:.9f}" for s in result.series]
        lines.append(",".join(row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_svg(result: ScanResult, path) -> None:
    """Render the scan as a standalone SVG figure.

    E on the vertical axis clipped to [0, 0.55], nu on the horizontal.
    Named/mean/f series get legend entries and cycling dash patterns;
    ensemble members are drawn as thin background lines; the std column
    is CSV-only.  Output is byte-deterministic for a given result.
    """
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    dashes = ["-", ":", "--", "-."]
    with plt.rc_context({"svg.hashsalt": SVG_HASHSALT}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        style_idx = 0
        for s in result.series:
            if s.role == "std":
                continue
            if s.role == "member":
                ax.plot(result.nu, s.values, color="0.75", linewidth=0.6, zorder=1)
            else:
                ax.plot(result.nu, s.values, dashes[style_idx % len(dashes)],
                        linewidth=1.6, label=s.name, zorder=2)
                style_idx += 1
        ax.set_xlabel(r"$\nu$")
        ax.set_ylabel(r"$E$")
        ax.set_xlim(result.nu[0], result.nu[-1])
        ax.set_ylim(0.0, 0.55)
        if style_idx:
            ax.legend(loc="upper right", fontsize=9)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

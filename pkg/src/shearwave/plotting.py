"""Static SVG of a wave field: free surface, interface streamlines and bed."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .wavefield import WaveField  # noqa: E402


def render_field_svg(fld: WaveField, path, *, periods: int = 2) -> None:
    """Write the surface and interface streamlines over ``periods`` wavelengths.

    Output is byte-stable: no timestamp and a fixed hash salt for element ids.
    """
    x = np.linspace(0.0, periods * fld.period, 400 * periods)
    d = fld.depth
    interfaces = fld.profile.breakpoints[1:-1]
    with plt.rc_context({"svg.hashsalt": "shearwave", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 3))
        ax.plot(x, fld.eta(x), color="tab:blue", lw=1.5, label="surface")
        layers = fld._mode
        for i, pi in enumerate(interfaces):
            base = fld.flow.height(pi) - d
            if layers is None:
                y = np.full_like(x, base)
            else:
                v = float(layers.v_splines[i + 1](pi))
                y = base + fld.amplitude * v * np.cos(fld.wavenumber * x)
            ax.plot(x, y, color="tab:orange", lw=1.0, ls="--", label="interface" if i == 0 else None)
        ax.axhline(-d, color="k", lw=1.0)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(f"lambda = {fld.lam:.6g}, s = {fld.amplitude:.3g}, wavenumber = {fld.wavenumber:g}")
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

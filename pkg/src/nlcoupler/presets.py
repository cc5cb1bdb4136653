"""Immutable figure presets.

Each preset pins one reference device configuration behind a stable tag
(fig2..fig8) so tests and configurations reference presets rather than
hand-typed numbers. All presets share C = 0.08 mm^-1 and
g = 0.0025 mm^-1 mW^-1/2; the coupler runs fix kappa and derive the power.
"""

import copy

COUPLING = 0.08  # mm^-1
NONLINEARITY = 0.0025  # mm^-1 mW^-1/2
KAPPA_DEFAULT = 1.13
POWER_RATIO = 1e-18
ZETA_END = 3.5
GAMMA_F = 0.14  # dB/cm, fundamental
GAMMA_H = 0.55  # dB/cm, harmonic
STAGE1_LENGTH_MM = 10.0

_COUPLER = {
    "kind": "coupler",
    "kappa": KAPPA_DEFAULT,
    "coupling": COUPLING,
    "nonlinearity": NONLINEARITY,
    "power_ratio": POWER_RATIO,
    "zeta_end": ZETA_END,
}

PRESETS = {
    # classical powers and phase mismatches along the coupler
    "fig2": dict(_COUPLER, outputs=["trajectory"]),
    # bipartite negativities of the four mode pairs
    "fig3": dict(_COUPLER, outputs=["entanglement"]),
    # 2|2 bipartitions against their contained pairs
    "fig4": dict(_COUPLER, outputs=["entanglement"]),
    # lossy against lossless negativities
    "fig5": dict(_COUPLER, outputs=["entanglement"],
                 loss={"gamma_f": GAMMA_F, "gamma_h": GAMMA_H,
                       "convention": "db"}),
    # optimized three-mode inequality values against the threshold
    "fig6": dict(_COUPLER, outputs=["entanglement"]),
    # single-waveguide SHG stage at half the coupler power per waveguide
    "fig7": {
        "kind": "single_shg",
        "kappa_reference": KAPPA_DEFAULT,
        "coupling": COUPLING,
        "nonlinearity": NONLINEARITY,
        "power_fraction": 0.5,
        "zeta_end": 1.0,
        "outputs": ["trajectory", "entanglement"],
    },
    # SHG stage of fixed length followed by the linear coupler sweep
    "fig8": {
        "kind": "two_mode_squeezer",
        "kappa_reference": KAPPA_DEFAULT,
        "coupling": COUPLING,
        "nonlinearity": NONLINEARITY,
        "power_fraction": 0.5,
        "stage1_length_mm": STAGE1_LENGTH_MM,
        "outputs": ["entanglement"],
    },
}

FIGURE_TAGS = tuple(sorted(PRESETS))


def preset_device(tag):
    """Deep copy of the pinned device section for a figure tag."""
    if tag not in PRESETS:
        raise KeyError(f"unknown figure tag {tag!r}; known: {', '.join(FIGURE_TAGS)}")
    return copy.deepcopy(PRESETS[tag])

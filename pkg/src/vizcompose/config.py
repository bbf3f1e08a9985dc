"""Tunable recognition thresholds.

The defaults target a roughly one-meter working volume; every value can
be overridden from a manifest or a thresholds file.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Thresholds:
    tau_link: float = 0.15  # make threshold for link proximity, meters
    hysteresis_factor: float = 1.25  # break at tau_link * factor
    tau_juxt: float = 0.30  # juxtaposition proximity, meters
    theta_sup: float = 45.0  # minimum normal angle for superimpose, degrees
    sigma_hc: float = 2.5  # minimum host/client diagonal ratio
    gamma_spread: float = 1.5  # spread gap multiple of the default pcp gap
    delta_pull: float = 0.20  # decomposition pull distance, meters
    bin_step_fraction: float = 0.5  # partition step as a fraction of axis length
    panel_gap: float = 0.05  # spacing between juxtaposed panels, meters

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.hysteresis_factor <= 1.0:
            raise ValueError("break threshold must exceed the make threshold")

    @property
    def tau_break(self) -> float:
        return self.tau_link * self.hysteresis_factor


_WIRE_NAMES = {
    "tauLink": "tau_link",
    "hysteresisFactor": "hysteresis_factor",
    "tauJuxt": "tau_juxt",
    "thetaSup": "theta_sup",
    "sigmaHc": "sigma_hc",
    "gammaSpread": "gamma_spread",
    "deltaPull": "delta_pull",
    "binStepFraction": "bin_step_fraction",
    "panelGap": "panel_gap",
}


def thresholds_from_json(obj: dict, base: Thresholds | None = None) -> Thresholds:
    base = base or Thresholds()
    kwargs = {f.name: getattr(base, f.name) for f in fields(Thresholds)}
    for key, value in obj.items():
        if key not in _WIRE_NAMES:
            raise ValueError(f"unknown threshold {key!r}")
        kwargs[_WIRE_NAMES[key]] = float(value)
    return Thresholds(**kwargs)


def thresholds_to_json(t: Thresholds) -> dict:
    return {wire: getattr(t, attr) for wire, attr in _WIRE_NAMES.items()}

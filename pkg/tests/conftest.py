from __future__ import annotations

import numpy as np
import pytest

import fiberlink as fl


@pytest.fixture
def grid64():
    """Small default-rate grid: 64 bits at 32 samples/bit."""
    return fl.make_grid(10e9, 64, 32, 1550e-9)


@pytest.fixture
def grid_tiny():
    """Minimal legal grid for fast structural tests."""
    return fl.make_grid(10e9, 16, 8, 1550e-9)


@pytest.fixture
def gaussian_pulse(grid64):
    """Unit-peak chirp-free Gaussian, T0 = 25 ps, centered in the frame."""
    t = grid64.time() - grid64.duration / 2
    t0 = 25e-12
    return fl.OpticalField(np.exp(-(t**2) / (2 * t0**2)).astype(complex), grid64), t0


def small_link_config(**overrides) -> fl.LinkConfig:
    """A scaled-down link that runs in well under a second."""
    text = "\n".join(
        [
            "sim.n_bits = 64",
            "sim.samples_per_bit = 16",
            "sim.step_km = 1.0",
            "smf.length_km = 12",
            "dcf.length_km = 2.4",
        ]
        + [f"{k} = {v}" for k, v in overrides.items()]
    )
    return fl.parse_config(text)

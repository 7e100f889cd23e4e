"""Physical constants shared across the simulator."""

import numpy as np

# Mars surface gravity [m/s^2]; altitude variation over the simulated
# band is <0.5%, so a constant is used.
G_MARS = 3.71

# Mean volumetric radius of Mars [m], used for the entry curvature term.
R_MARS = 3389.5e3

# CO2 gas properties for sound-speed evaluation.
CO2_GAMMA = 1.29
CO2_GAS_CONSTANT = 188.92  # J/(kg K)

UP = np.array([0.0, 0.0, 1.0])

"""HIRES rate constants and initial state.

Transcribed from E. Hairer, G. Wanner, "Solving Ordinary Differential
Equations II", 2nd ed., Springer 1996, Section IV.10, problem (10.4)
(originally Schaefer 1975, chemical reaction in plant physiology).
"""

import numpy as np

# linear rate constants, in order of first appearance
K1 = 1.71
K2 = 0.43
K3 = 8.32
K4 = 0.0007
K5 = 8.75
K6 = 10.03
K7 = 0.035
K8 = 1.12
K9 = 1.745
K10 = 0.69
K11 = 1.81
# bimolecular reaction y6 + y8
K_NONLINEAR = 280.0

Y0 = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0057])
T_SPAN = (0.0, 40.0)

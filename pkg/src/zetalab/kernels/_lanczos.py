"""Lanczos coefficients (g = 7, n = 9) shared by both kernel backends."""

import math

import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEF = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

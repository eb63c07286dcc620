"""Shared series coefficients for the Lobachevsky kernel.

SERIES_COEFFS[n-1] = zeta(2n) / (n*(2n+1)), n = 1..30.  These are the
coefficients of the log-singularity-subtracted (Kummer accelerated) form of
the Fourier series of the Lobachevsky function,

    Lob(phi) = phi - phi*log(2*phi) + phi * sum_n c_n (phi/pi)^(2n),

valid on [0, pi/2] after symmetry reduction.  Truncation error at phi = pi/2
with 30 terms is below 1e-21.
"""

SERIES_COEFFS = (
    0.5483113556160754788,
    0.1082323233711138192,
    0.04844490771354519713,
    0.02789103767216512054,
    0.01819990136596032882,
    0.01282366777632446216,
    0.009524392839381511475,
    0.007353053546025063617,
    0.005847975539726695905,
    0.00476190930458111368,
    0.003952570112452579952,
    0.003333333532027296838,
    0.002849002891457421163,
    0.002463054196367817795,
    0.002150537636411456844,
    0.00189393939438036209,
    0.001680672269005391128,
    0.001501501501523351234,
    0.001349527665322048555,
    0.001219512195123060359,
    0.00110741971207112666,
    0.001010101010101067519,
    0.0009250693802035284097,
    0.0008503401360544247897,
    0.000784313725490196775,
    0.0007256894049346881147,
    0.0006734006734006734381,
    0.0006265664160401002593,
    0.0005844535359438924626,
    0.0005464480874316939895,
)

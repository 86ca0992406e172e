"""Global engine constants.

SIGMA_RES and SIGMA_PAIR are the residue and pairing sign conventions.
They are not free knobs: the calibration suite (tests/test_pairing.py and
`coha check pairing`) verifies that this is the unique pair in {+1,-1}^2
for which the monomial pairing rule matches the residue-integral form and
the E/F commutator reproduces its closed form.
"""

# residue_at_infinity returns SIGMA_RES * (coefficient of var**-1 at infinity)
SIGMA_RES = 1

# twisted_pair(x^a, x^b) = SIGMA_PAIR * (-1)^b * g(k, a+b)
SIGMA_PAIR = -1

# default truncation order for series identities
DEFAULT_ORDER = 8

"""Published reference values.

These are cited constants, never computed here. Every consumer labels them
as references so they cannot be mistaken for results of this package.
"""

from fractions import Fraction

# Upper bounds on p^E from the Q_{1+ab} level of the hierarchy of quantum
# correlations. Keyed by (n, d).
Q1AB_UPPER_BOUNDS = {
    (2, 2): 0.8536,
    (2, 3): 0.7778,
    (2, 4): 0.7441,
    (2, 5): 0.7179,
    (3, 3): 0.6912,
}

# Published see-saw lower bounds on p^E.
PUBLISHED_SEESAW_VALUES = {
    (2, 2): 0.8536,
    (2, 3): 0.7778,
    (2, 4): 0.7405,
    (2, 5): 0.7178,
    (3, 3): 0.6854,
}

# Optimal QCRAC value for (3,3). Only the n = 2 protocol is constructed
# explicitly, so this row is carried as a reference.
QCRAC_REFERENCE_VALUES = {
    (3, 3): 0.6971,
}

# Classical bound for the 4^(3)->1 RAC quoted in the concatenation comparison.
CLASSICAL_4_3 = Fraction(16, 27)

# Scenarios of the comparison table, in publication order.
COMPARISON_SCENARIOS = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3)]

"""Netlists shared by the test-suite."""

TRANSMON = """\
# single junction; its own capacitance sets EC
branches:
- [JJ, 0, 1, EJ = 10.0, ECJ = 0.25]
"""

SHUNTED_TRANSMON = """\
branches:
- [C, 0, 1, EC = 0.25]
- [JJ, 0, 1, EJ = 10.0, ECJ = 0.2]
"""

LC = """\
branches:
- [C, 0, 1, EC = 0.5]
- [L, 0, 1, EL = 1.0]
"""

FLUXONIUM = """\
branches:
- [L, 0, 1, EL = 0.5]
- [JJ, 0, 1, EJ = 8.9, ECJ = 2.5]
"""

JJ_C_CHAIN = """\
branches:
- [JJ, 0, 1, EJ = 4.0, ECJ = 1.0]
- [C, 1, 2, EC = 0.5]
"""

FROZEN_CHAIN = """\
branches:
- [L, 0, 1, EL1 = 1.0]
- [L, 1, 2, EL2 = 0.5]
- [C, 0, 2, EC = 0.5]
"""

ZERO_PI = """\
# floating ring: junction, inductor, junction, inductor; capacitors across the diagonals
branches:
- [JJ, 1, 2, EJ = 5.0, ECJ = 1.0]
- [L, 2, 3, EL = 1.0]
- [JJ, 3, 4, EJ = 5.0, ECJ = 1.0]
- [L, 4, 1, EL = 1.0]
- [C, 1, 3, EC = 0.5]
- [C, 2, 4, EC = 0.5]
"""

COUPLED_TRANSMONS = """\
branches:
- [JJ, 0, 1, EJ = 10.0, ECJ = 0.3]
- [JJ, 0, 2, EJ = 10.0, ECJ = 0.3]
- [C, 1, 2, ECc = 5.0]
"""

RF_SQUID = """\
branches:
- [L, 0, 1, EL = 0.8]
- [JJ, 0, 1, EJ = 3.0, ECJ = 1.2]
"""

# floating four-node circuit; the last two inductors close the external-flux loops
KITE = """\
branches:
- [JJ, 1, 2, EJ = 5.9, ECJ = 6.6]
- [JJ, 1, 4, EJ = 5.9, ECJ = 6.6]
- [L, 1, 3, EL1 = 0.23]
- [C, 1, 3, EC = 2.5]
- [L, 2, 3, EL2 = 0.36]
- [L, 4, 3, EL2 = 0.36]
"""

KITE_TRANSFORM = [[-1, -1, -1, 1], [-1, -1, 3, 1], [-1, 3, -1, 1], [3, -1, -1, 1]]  # times 1/4
KITE_INTEGER_TRANSFORM = [[0, 0, 0, 1], [0, 1, 0, 1], [2, 0, 1, 1], [0, 1, 1, 1]]
KITE_COEFFS = ["15.7", "26.4", "52.8", "0.18", "0.72", "0.36", "1.9", "1.44", "1.18", "0.295", "5.9"]
KITE_LEVELS = [4.17710271, 6.47610652, 7.24813846, 8.47986653, 8.713839, 9.19210006]

# seven nodes: an isolated island, an inductive island and a superconducting island
SEVEN_NODE = """\
branches:
- [C, 0, 1, 1.0]
- [L, 1, 2, 0.7]
- [C, 2, 3, 1.3]
- [L, 0, 4, 0.9]
- [L, 4, 5, 1.1]
- [C, 5, 0, 0.8]
- [JJ, 0, 6, 6.0, 1.5]
- [C, 6, 7, 0.6]
- [L, 7, 0, 0.4]
- [L, 6, 3, 0.5]
- [C, 3, 0, 0.9]
"""

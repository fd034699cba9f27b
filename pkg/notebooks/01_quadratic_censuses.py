"""
Quadratic orders and the two regulator censuses
===============================================

Class numbers and regulators of the orders O_D, the Gauss-Siegel sum of
h R over D <= x, and class numbers counted by regulator.
"""

from geodesic_orders.census.quadratic import (
    L_asymptotic,
    L_quad,
    L_series,
    enumerate_quadratic,
    gauss_siegel_census,
    sarnak_census,
)

# the first few orders: D, class number, regulator
for D, h, R in enumerate_quadratic(45):
    print(D, h, round(R, 6))

# Gauss-Siegel.  With narrow class numbers and regulators the ratio creeps up
# towards 1; the wide sum is exactly half of it.
narrow = gauss_siegel_census(20000)
wide = gauss_siegel_census(20000, convention="wide")
for a, b in zip(narrow.rows, wide.rows):
    print(a[0], round(a[3], 4), round(b[3], 4))

# Counting by regulator.  L(2x) tracks the count better than e^{2x}/(2x).
table = sarnak_census(4.0)
print(table.to_csv())

# L(x) two ways, and why the asymptotic series cannot give 1e-9 at x = 12
print(L_quad(12), L_series(12))
best = min(abs(L_asymptotic(12, n) / L_series(12) - 1) for n in range(1, 30))
print("best asymptotic truncation error at 12:", best)

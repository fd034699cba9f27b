"""
Exterior powers of m and p_M as K_M-modules
===========================================
"""

from geodesic_orders.rep import decompose_exterior, sigma_tilde_trace, verify_rep_suite, weyl_integral

for space in ("pM", "m"):
    for n in range(5):
        dec = decompose_exterior(space, n)
        print(space, n, ", ".join(f"{m} {t}" for t, m in sorted(dec.items())))

for name, ok, detail in verify_rep_suite():
    print("ok " if ok else "BAD", name, detail)

print(weyl_integral(16), sigma_tilde_trace(1.0, 0.5))

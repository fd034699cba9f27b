"""Build tests/data/quartic_reference.csv with PARI (offline helper).

Lists the totally complex quartic fields of smallest |disc| with their
class numbers, regulators and torsion counts, in the census CSV schema.
Columns the reference system does not supply are left empty.  Requires the
``cypari`` package; nothing in the library or the test suite imports it.

    python tools/make_reference_table.py [count] [coeff_box]
"""

import itertools
import sys
from pathlib import Path

import cypari

HEADER = "field_key,disc,r,s,h,regulator,mu,kappa,lambda_S,nu,class"


def main(count=20, box=4):
    pari = cypari.pari
    pari.allocatemem(2 * 10**8)
    fields = {}
    for a, b, c, d in itertools.product(range(-box, box + 1), repeat=4):
        f = pari(f"x^4+({a})*x^3+({b})*x^2+({c})*x+({d})")
        if not pari.polisirreducible(f) or pari.polsturm(f) != 0:
            continue
        g = pari.polredabs(f)
        key = str(g)
        if key not in fields:
            fields[key] = g
    rows = []
    for g in fields.values():
        bnf = pari.bnfinit(g, 1)
        if int(pari.bnfcertify(bnf)) != 1:
            raise SystemExit(f"could not certify {g}")
        disc = int(pari("(b)->b.disc")(bnf))
        coeffs = [int(pari.polcoef(g, i)) for i in range(5)]
        rows.append(
            (
                abs(disc),
                ":".join(str(x) for x in coeffs),
                disc,
                int(pari("(b)->b.no")(bnf)),
                float(pari("(b)->b.reg")(bnf)),
                int(pari("(b)->b.tu[1]")(bnf)),
            )
        )
    rows.sort()
    out = [HEADER]
    for _, key, disc, h, reg, mu in rows[:count]:
        out.append(f"{key},{disc},0,2,{h},{reg:.12g},{mu},,,,")
    path = Path(__file__).resolve().parent.parent / "tests" / "data" / "quartic_reference.csv"
    path.write_text("\n".join(out) + "\n")
    print(f"wrote {len(out) - 1} rows to {path}; largest disc {rows[count - 1][0]}; {len(rows)} fields seen")


if __name__ == "__main__":
    main(*(int(x) for x in sys.argv[1:]))

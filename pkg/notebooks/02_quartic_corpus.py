"""
A small totally complex quartic corpus
======================================

Builds the fields with |coefficients| <= 4 in which 2 and 3 each have a single
place, prints their invariants and the weighted counts pi_S and pi~_S.
"""

from geodesic_orders.census.quartic import pi_S_census, pi_tilde_S_census, quartic_corpus
from geodesic_orders.geodesic import check_correspondence, geodesic_data

corpus = quartic_corpus(4, (2, 3))
print(corpus.metadata)
print(corpus.to_csv())

# every C^c order passes the order/geodesic identities
for row in corpus.cc_rows():
    d = corpus.details[row.field_key]
    o = d.order()
    check_correspondence(o, row, d.unit_data)
    g = geodesic_data(o, d.unit_data, h=row.class_h, lambda_s=row.lambda_s, kappa_value=row.kappa)
    print(row.field_key, round(g.length, 6), round(g.trace_sigma_tilde, 6), g.weight)

# counts; rows past the certified regulator are lower bounds
print(pi_S_census(corpus, (2, 3)).to_csv())
print(pi_tilde_S_census(corpus, (2, 3)).to_csv())

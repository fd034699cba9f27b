"""Orders in quadratic and totally complex quartic fields.

Class numbers, fundamental units, prime splitting, the unit-to-geodesic
dictionary and the counting censuses built on top of them.
"""

__version__ = "0.1.0"

"""Desk-scale lab for choice problems and their completions.

The package is organised in layers:

* ``streams``   -- eventually periodic Baire-space streams and pairings
* ``spaces``    -- represented spaces, completions, negative-information sets
* ``problems``  -- the catalog of multivalued problems with exact solvers
* ``realizers`` -- stream transducers, the construction library, the
                   reduction-witness harness and the mind-change adversary
* ``lattice``   -- degree terms, the citation-carrying fact base, the
                   forward-chaining rule engine and diagram export
* ``cli``       -- command line front end
"""

__version__ = "0.1.0"

"""Walks on ordinals below epsilon_0: ladders, traces, bases, coefficient systems.

The package exposes exact combinatorics over Cantor-normal-form ordinals:

- :mod:`higherwalks.ordinals` -- CNF arithmetic, parsing, cofinality ranks
- :mod:`higherwalks.ladders`  -- C-sequences, compounded ladders, internality
- :mod:`higherwalks.walks`    -- classical, internal and two-dimensional walks
- :mod:`higherwalks.chains`   -- free abelian chains and boundary maps
- :mod:`higherwalks.basis`    -- distinguished generator sets and decomposition
- :mod:`higherwalks.fsystem`  -- coefficient oracles extending the section
- :mod:`higherwalks.coherence` -- coherence/triviality checkers
- :mod:`higherwalks.simplicial` -- exact integral homology, good graphs
"""

from higherwalks.ordinals import Ordinal, CofRank, parse

__all__ = ["Ordinal", "CofRank", "parse"]
__version__ = "0.1.0"

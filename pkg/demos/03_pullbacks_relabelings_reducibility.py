"""
Pullbacks, relabelings, and reducing subsequences
=================================================

Preimages preserve intersections and differences, so pulling stages back
through a surjection yields another evolution in which every point inherits
the chronology of its image.  A bijection that carries stages onto stages
witnesses that two evolutions are the same up to relabeling.  And a stage
subsequence that is itself an evolution witnesses reducibility -- searched
here within explicit bounds, never asserted to be absent in general.
"""

from setevo import (
    Bijection,
    Chronology,
    Evolution,
    MapDescriptor,
    chronology_of,
    find_reducing_subsequence,
    from_chronology,
    is_isoevolved,
    naturals,
    pullback,
)

pair = from_chronology(Chronology.from_rules(lambda x: x, lambda x: x + 2), naturals(0))
print("base stages {k-1, k}:", [sorted(pair.stage(k)) for k in range(1, 5)])

# pull back along halving: each point splits into two preimages
halving = MapDescriptor(
    apply=lambda y: y // 2,
    domain=naturals(0),
    preimage=lambda e: (2 * e, 2 * e + 1),
    label="halving",
)
doubled = pullback(halving, pair)
print("pulled-back stages:", [sorted(doubled.stage(k)) for k in range(1, 4)])

reading = chronology_of(doubled, 16)
print("chronology composes with the map: A(10) =", reading.appears[10],
      "= A(5) of the base =", chronology_of(pair, 16).appears[5])

# relabeling the square model by x -> x + 1 is an isoevolution
from setevo import example_square

square = example_square()
shifted = Evolution(
    lambda n: frozenset(x + 1 for x in square.stage(n)), naturals(2), "square+1"
)
print()
print("square vs shifted:", is_isoevolved(square, shifted, Bijection(lambda x: x + 1), 16).verdict)
print("square vs pair:   ", is_isoevolved(square, pair, Bijection(lambda x: x), 4).verdict,
      "(stage-1 cardinalities 4 vs 2)")

# four-wide windows survive stride-2 thinning; two-wide windows do not
window = Evolution(lambda k: range(k, k + 4), naturals(1), "four-window")
print()
result = find_reducing_subsequence(window, horizon=24)
print("four-window:", result.verdict, "stride", result.stride)
result = find_reducing_subsequence(pair, horizon=24)
print("pair walk:  ", result.verdict, f"({result.candidates_checked} candidates)")

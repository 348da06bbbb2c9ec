"""
Interval stages and probe pullbacks: evolutions on continuous carriers
======================================================================

Stages need not be finite sets: canonical unions of half-open intervals
support exact union/intersection/difference, so the four conditions are
decidable on real carriers too.  A scalar probe (distance, linear
functional, determinant, inner product) then pulls an interval evolution
back onto richer ambient spaces: a point belongs to stage k exactly when
its probe value does, and every nonempty stage carries a sampled witness.
"""

from setevo import (
    Evolution,
    IntervalSet,
    SupportVector,
    check_real_axioms,
    determinant_probe,
    distance_to_point,
    linear_functional,
    naturals,
    scalar_pullback_evolution,
    shell_evolution,
    sliding_window_evolution,
    span_evolution,
    from_chronology,
    Chronology,
)

# exact interval algebra
a = IntervalSet.of((0.0, 3.0))
b = IntervalSet.of((1.0, 2.0))
print("[0,3) minus [1,2) =", a.difference(b))
print("measure:", a.difference(b).measure())

# sliding windows on the half line pass every condition
windows = sliding_window_evolution(width=2.0, step=1.0)
print()
print("window stages:", windows.stage(1), windows.stage(2))
print("verdicts:", check_real_axioms(windows, 32).verdicts)

# unit shells track an integer evolution; right endpoints stay closed
pair = from_chronology(Chronology.from_rules(lambda x: x, lambda x: x + 2), naturals(0))
shells = shell_evolution(pair)
print()
print("shell stage 2 covers [1, 3]:", shells.stage(2).contains(1.0),
      shells.stage(2).contains(3.0))

# the plane probed by distance to the origin: (3, 4) sits at distance 5
plane = scalar_pullback_evolution(distance_to_point((0.0, 0.0)), windows)
print()
print("(3,4) occupies stages:", plane.occurrence_stages((3.0, 4.0), 12))
print("witness for stage 5:", plane.witness(5))

# matrices filtered by determinant: witnesses are diagonal by construction
det = determinant_probe(2)
matrices = scalar_pullback_evolution(det, windows)
witness = matrices.witness(3)
print()
print("determinant witness for stage 3:", witness, "-> det =", det.value(witness))

# functionals are always onto the line
functional = scalar_pullback_evolution(linear_functional((2.0, -1.0)), windows)
print("functional witness for stage 4:", functional.witness(4))

# spans: a vector lives in stage k when its support is switched on
triple = Evolution(lambda k: {k, k + 1, k + 2}, naturals(1), "triple")
spans = span_evolution(triple)
v = SupportVector.of({3: 1.0, 4: -2.0})
print()
print("support {3,4} occupies stages:", spans.occurrence_stages(v, 8))

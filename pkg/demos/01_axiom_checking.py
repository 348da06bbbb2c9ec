"""
Checking the four conditions on staged set sequences
====================================================

A stage sequence qualifies as an evolution when emptiness persists, every
consecutive nonempty pair overlaps and churns, each element occupies a
contiguous run of stages, and everything eventually appears and disappears.
This demo checks a healthy model and two broken ones.
"""

from setevo import Evolution, Ground, check_axioms, example_square

# the stock square-window model: stage n is {n, ..., (n+1)^2}
square = example_square()
print("stage 1:", sorted(square.stage(1)))
print("stage 2:", sorted(square.stage(2)))

report = check_axioms(square, horizon=64)
print()
print("square-window verdicts over 64 stages")
for line in report.lines():
    print(" ", line)

# a constant sequence never churns: both differences are empty
constant = Evolution(lambda k: frozenset({1, 2}), Ground.finite([1, 2]), "constant")
report = check_axioms(constant, horizon=6)
print()
print("constant-model verdicts")
for line in report.lines():
    print(" ", line)

# resurrection after an empty stage breaks empty-persistence
stages = [frozenset({1, 2}), frozenset(), frozenset({2, 3})]
zombie = Evolution(
    lambda k: stages[k - 1] if k <= 3 else frozenset(),
    Ground.finite([1, 2, 3]),
    "zombie",
)
report = check_axioms(zombie, horizon=4)
print()
print("zombie-model verdicts")
for line in report.lines():
    print(" ", line)

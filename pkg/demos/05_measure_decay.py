"""
Stage masses: decay under bounded lifespans, and atoms that keep them positive
==============================================================================

With dyadic weights w(x) = 2^-(x+1), the walk {k-1, k} has stage mass
3 * 2^-(k+1), which drops below any epsilon.  That is forced: when every
occupant of stage k lives at most d_k stages, stages far apart are disjoint,
so the masses must vanish.  Bounded integrands then integrate to nothing in
the limit.  Disjoint positive-mass atom sets, one per stage, keep every
stage mass strictly positive without disturbing the conditions.
"""

from setevo import (
    AtomFamily,
    Chronology,
    DiscreteMeasure,
    check_axioms,
    decay_check,
    from_chronology,
    identity_map,
    mu_trace,
    naturals,
    order_preserving_onto_naturals,
    atom_augmented_evolution,
    stage_integral,
)

pair = from_chronology(Chronology.from_rules(lambda x: x, lambda x: x + 2), naturals(0))
geometric = DiscreteMeasure.geometric()

masses = mu_trace(pair, geometric, 12)
print("stage masses:", [f"{m:.6f}" for m in masses[:6]])
print("closed form 3*2^-(k+1) matches:",
      all(masses[k - 1] == 3 * 2.0 ** -(k + 1) for k in range(1, 13)))

report = decay_check(pair, geometric, horizon=32, epsilon=1e-3)
print("masses below 1e-3 from stage", report.threshold_index,
      "(lifespan bound", report.lifespan_bounds[0], "throughout)")

# a bounded integrand inherits the decay: |integral| <= C * mass stagewise
phi = identity_map().with_bound(100.0)
integrals = stage_integral(pair, geometric, phi, 12)
print()
print("phi(x) = x integrals:", [f"{v:.6f}" for v in integrals.values[:6]])
print("bound inequality holds stagewise:", all(integrals.bound_respected))

# atoms {2, 5, 8, ...} guarantee positive mass at every stage
atoms = AtomFamily.arithmetic(2, 3)
bijection = order_preserving_onto_naturals(atoms.contains)
augmented = atom_augmented_evolution(pair, atoms, bijection, geometric)
print()
print("augmented stage 3:", sorted(augmented.stage(3)))
print("every stage mass exceeds its atom's weight:",
      all(
          geometric.mass_of(augmented.stage(k)) >= geometric.weight(3 * k - 1) > 0
          for k in range(1, 32)
      ))
print("augmented model verdicts:", check_axioms(augmented, 32).verdicts)

"""
Updating a discrete bet from revised marginal beliefs
=====================================================

A bookmaker prices three outcomes: horse A wins with probability 1/2,
horses B and C with 1/4 each.  A tipster does not report an observed
event; they report a revised belief on a coarser question, namely
"A wins" vs "A loses", now weighted 2/3 : 1/3.

Jeffrey's rule absorbs that revision while leaving everything the
tipster did NOT address untouched: the odds between B and C inside
"A loses" stay exactly as the bookmaker set them.
"""

import math

from probkin.pk import DiscreteDistribution, Partition, discrete_pk_update

prior = DiscreteDistribution({"A": 0.5, "B": 0.25, "C": 0.25})
partition = Partition({"A": "A_wins", "B": "A_loses", "C": "A_loses"})
evidence = DiscreteDistribution({"A_wins": 2.0 / 3.0, "A_loses": 1.0 / 3.0})

posterior = discrete_pk_update(prior, partition, evidence)

print("outcome  prior   posterior")
for outcome in ("A", "B", "C"):
    print(f"{outcome:>7}  {prior.prob(outcome):.4f}  {posterior.prob(outcome):.4f}")

# The update is faithful: summing the posterior over each partition
# element returns exactly the evidence the tipster supplied.
for element in partition.elements():
    mass = math.fsum(posterior.prob(o) for o in partition.members(element))
    print(f"posterior mass on {element}: {mass:.6f} (evidence {evidence.prob(element):.6f})")

# And it preserves conditionals: B and C were equally likely given
# "A loses" before, and still are.
b, c = posterior.prob("B"), posterior.prob("C")
print(f"P(B | A loses) = {b / (b + c):.4f}  (unchanged from the prior's 0.5)")

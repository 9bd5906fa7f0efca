"""Which choices can a readout depend on?

A readout record may only be conditioned on the free choices whose future
lightcone contains it.  This script walks the two canonical layouts (one
choice inside the other's cone; two spacelike choices) and shows the full
list of conditioned readout variables each readout is allowed to carry.
"""
from lrpovm.causality import (CausalScenario, Event, format_signature,
                              readout_signature)

# Layout 1: choice b sits inside the future lightcone of choice a, so a
# readout late enough sees both, an intermediate one only a.
nested = CausalScenario(
    choices=(("a", Event(0.0, (0.0, 0.0, 0.0))),
             ("b", Event(1.0, (0.5, 0.0, 0.0)))),
    readouts=(("alpha", Event(0.5, (5.0, 0.0, 0.0))),   # outside both
              ("beta", Event(2.0, (-1.5, 0.0, 0.0))),   # inside a only
              ("gamma", Event(3.0, (0.5, 0.0, 0.0)))))  # inside both

print("nested choices (b inside the cone of a):")
print(format_signature(readout_signature(nested)))
print()

# Layout 2: a and b are mutually spacelike; four regions appear.
spacelike = CausalScenario(
    choices=(("a", Event(0.0, (-2.0, 0.0, 0.0))),
             ("b", Event(0.0, (2.0, 0.0, 0.0)))),
    readouts=(("gamma", Event(-1.0, (0.0, 0.0, 0.0))),
              ("alpha", Event(1.0, (-2.5, 0.0, 0.0))),
              ("beta", Event(1.0, (2.5, 0.0, 0.0))),
              ("delta", Event(3.0, (0.0, 0.0, 0.0)))))

print("spacelike choices (the standard two-party test geometry):")
print(format_signature(readout_signature(spacelike)))
print()

# A readout delayed long enough eventually sees every choice: the
# variable count doubles with each choice that enters its past.
for t in (0.1, 1.0, 2.5, 6.0):
    scenario = CausalScenario(
        choices=spacelike.choices,
        readouts=(("r", Event(t, (0.0, 0.0, 0.0))),))
    variables = readout_signature(scenario).variables["r"]
    print(f"readout at t={t:>3}: {len(variables)} conditioned variables "
          f"({', '.join(variables)})")

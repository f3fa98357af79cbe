"""Beam splitter action on photon-number states.

Shows the two wiring conventions used by the package, the variable
splitter acting on a single photon, multiphoton interference, and the
Hong-Ou-Mandel null at the balanced point.
"""

import math

from noonecp import BeamSplitterSpec, basis_state, beam_splitter, norm_sq

balanced = BeamSplitterSpec(
    mode_in_1="a2",
    mode_in_2="b2",
    mode_out_1="d1",
    mode_out_2="d2",
    transmissivity=0.5,
    sign_convention="ecp1",
)

# a single photon in either input port leaves in an equal superposition
# of the output ports; the two ports pick up opposite relative signs
for occ in ((1, 0), (0, 1)):
    out = beam_splitter(basis_state(("a2", "b2"), occ), balanced)
    print(f"photon in {occ} ->", out)

# the other convention flips which matrix element carries the minus sign
local = BeamSplitterSpec(
    mode_in_1="c1",
    mode_in_2="c2",
    mode_out_1="e1",
    mode_out_2="e2",
    transmissivity=0.5,
    sign_convention="ecp2",
)
print("\nsame photon, other convention:",
      beam_splitter(basis_state(("c1", "c2"), (1, 0)), local))

# variable transmissivity splits a single photon unevenly
for t in (0.2, 0.8):
    spec = BeamSplitterSpec("c1", "c2", "e1", "e2", t, "ecp2")
    out = beam_splitter(basis_state(("c1", "c2"), (1, 0)), spec)
    print(f"t={t}: {out}  (amplitudes sqrt(1-t), sqrt(t))")

# two photons in one port produce the full multinomial expansion
print("\n|2,0> through the balanced splitter:")
out = beam_splitter(basis_state(("a2", "b2"), (2, 0)), balanced)
for ket in sorted(out.terms):
    print(f"  {ket}: {out.amplitude(ket):+.6f}")
print("norm^2 =", norm_sq(out))

# Hong-Ou-Mandel: photons entering both ports of a balanced splitter
# never exit one per port; the coincidence amplitude cancels exactly
hom = beam_splitter(basis_state(("a2", "b2"), (1, 1)), balanced)
print("\n|1,1> through the balanced splitter:")
for ket in sorted(hom.terms):
    print(f"  {ket}: {hom.amplitude(ket):+.6f}")
print("coincidence amplitude:", hom.amplitude((1, 1)))

# bigger bunches still conserve photon number and norm
big = beam_splitter(basis_state(("a2", "b2"), (3, 2)), balanced)
print("\n|3,2> spreads over", big.num_terms(), "kets, norm^2 =", round(norm_sq(big), 12))
print("photon number in every ket:", sorted({sum(k) for k in big.terms}))

"""Build and inspect sparse multimode photon-number states.

A state is stored as a mapping from occupation tuples to complex
amplitudes over a named mode register, so an N-photon two-mode
superposition costs two dictionary entries no matter how large N gets.
"""

import math

from noonecp import (
    basis_state,
    create,
    fidelity_up_to_global_phase,
    inner,
    maximally_entangled_noon,
    norm_sq,
    normalized,
    superpose,
    tensor,
    vacuum,
)

# start from the two-mode vacuum and add photons one at a time
empty = vacuum(("a", "b"))
print("vacuum:", empty)

one = create(empty, "a")
print("after one creation on 'a':", one)

# repeated creation picks up the bosonic sqrt factors: n applications of
# the creation operator on the same mode give a sqrt(n!) normalization
five = empty
for _ in range(5):
    five = create(five, "a")
print("five creations on 'a':", five)
print("norm^2 =", norm_sq(five), "= 5! =", math.factorial(5))

# a NOON state puts all N photons in one arm or the other
n = 4
noon = maximally_entangled_noon(n)
print("\nbalanced 4-photon state:", noon)
print("norm^2 =", norm_sq(noon))

# a lopsided variant of the same shape
alpha = math.sqrt(0.8)
beta = math.sqrt(0.2)
skewed = superpose(
    [
        (alpha, basis_state(("a1", "b1"), (n, 0))),
        (beta, basis_state(("a1", "b1"), (0, n))),
    ]
)
print("skewed state:", skewed)

# overlap and fidelity; fidelity ignores a global phase, the inner
# product does not
noon_named = superpose(
    [
        (1 / math.sqrt(2), basis_state(("a1", "b1"), (n, 0))),
        (1 / math.sqrt(2), basis_state(("a1", "b1"), (0, n))),
    ]
)
print("\n<balanced|skewed> =", inner(noon_named, skewed))
print("fidelity =", fidelity_up_to_global_phase(skewed, noon_named))
flipped = superpose([(-1.0, skewed)])
print("fidelity after a global sign flip =", fidelity_up_to_global_phase(flipped, skewed))

# tensor products concatenate registers; normalization is explicit
pair = tensor(noon, basis_state(("c",), (1,)))
print("\njoint register:", pair.register)
unnorm = superpose([(2.0, noon)])
print("rescaled norm^2 =", norm_sq(unnorm), "-> renormalized:", norm_sq(normalized(unnorm)))

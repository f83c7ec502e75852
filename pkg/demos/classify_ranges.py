"""Walk through the range classification of two-qubit mixed states.

The central dichotomy: a mixed state can be purified to a maximally
entangled pure state (given a second state or copy) exactly when its
range is two-dimensional and contains a single product direction.  This
script classifies one state of every kind and cross-checks the rank-2
verdicts against the sampling oracle.
"""

import numpy as np

from qpurify import (PHI_PLUS, PSI_MINUS, ket, projector, pure_density,
                     purifiable_n_copies, random_w_form, reconstruct,
                     sample_product_zeros, validate_density)
from qpurify.ranges import classify_range, range_basis


def show(name, state):
    cls = classify_range(state)
    sub = range_basis(state)
    print(f"{name}:")
    print(f"  rank {sub.dim}, class {cls.kind.value}")
    for i, ray in enumerate(cls.rays):
        amps = np.round(ray.vector(), 6)
        print(f"  product ray {i}: {amps}")
    print(f"  purifiable with two copies: {purifiable_n_copies(state, 2)}")
    if sub.dim == 2:
        zeros = sample_product_zeros(sub)
        found = "a continuum of" if zeros.continuum else zeros.count
        print(f"  sampling oracle finds {found} product zeros")
    print()


def main():
    rng = np.random.default_rng(1)

    # The purifiable geometry: mixture of an entangled |Phi> with the
    # product state |00> that also appears inside |Phi>'s range closure.
    show("W-class mixed state", reconstruct(random_w_form(rng)))

    # Adding |00> to a Bell state whose range already touches |00> gives
    # a second product direction; two rays span the range, so every
    # realization of the state can be built from product states.
    two_rays = validate_density(0.5 * pure_density(PHI_PLUS).matrix
                                + 0.5 * projector(ket("00")))
    show("entangled but product-spanned", two_rays)

    # A separable diagonal mixture: the whole range is product states.
    sep = validate_density(0.5 * projector(ket("00"))
                           + 0.5 * projector(ket("01")))
    show("separable mixture", sep)

    # Pure states and high ranks for completeness.
    show("pure Bell state", pure_density(PSI_MINUS))
    show("rank 3", validate_density(np.diag([0.5, 0.3, 0.2, 0.0]).astype(complex)))
    show("maximally mixed", validate_density(np.eye(4) / 4.0))


if __name__ == "__main__":
    main()

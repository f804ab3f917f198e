"""Ring representations: finite rings, polynomial quotients and rewriting rings."""

from .finite import (
    FiniteRing, Ideal, NonUnitalRing, RingHom, fiber_product_ring, idempotents, jacobson_radical,
    make_finite_ring, primitive_idempotents, product_ring, quotient_ring, unitalization, units, zmod,
)
from .polyquot import PolyIdeal, PolyQuotRing, PolyRingHom, polynomial_ring
from .rewrite import (
    RewriteRing, complete_rewrite_system, laurent_rewrite_ring, toeplitz_ring, weyl_type_ring,
)

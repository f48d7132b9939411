"""Edge shift spaces of ultragraphs.

Exact analyses of finitely presented countable ultragraphs: ultimately
periodic vertex and edge sets, minimal infinite emitters and Condition (RFUM),
the shift space with its clopen calculus, the shift map and shift morphisms,
the partial action of the free group on the edges, and the algebraic partial
crossed product that realizes the ultragraph relations.
"""

__version__ = "0.1.0"

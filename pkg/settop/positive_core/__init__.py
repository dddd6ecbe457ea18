"""
Positive formulas: parsing, brute-force evaluation, compilation to
combinator terms, and the specification checks built on them.
"""

"""
Hereditarily finite objects, generalized zeros and ordinals, pristine inner
models, membership structures and the hyperuniverse search.
"""

'''
Strong external difference families in finite groups: construction,
verification, exhaustive search and classification up to equivalence.
'''

__version__ = "0.1.0"

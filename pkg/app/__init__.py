"""
groklab

Loss-landscape experiments on delayed generalization in small networks.
"""

__version__ = "1.0.0"

"""Multimodal IGC50 toxicity regression toolkit.

SMILES strings become one-hot sequences, 4-channel molecular images, and
numerical descriptor vectors; a 1D-conv sequence model, a residual CNN, and
a fully connected network train on those, and their outputs combine through
ensemble averaging or a small meta network.
"""

__version__ = "0.1.0"

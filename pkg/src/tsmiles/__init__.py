"""tsmiles: fragment-based tree-serialized SMILES codec and generation toolkit."""

__version__ = "0.1.0"

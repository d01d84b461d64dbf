"""tlkcorpus: multilingual persuasion corpora from game talk tables.

Submodules:
  tlk       binary/XML talk-table codec
  pipeline  label, clean, align, balance, split, tokenize
  dataset   corpus export/import and statistics
  baseline  bag-of-ngrams logistic regression classifier
  metrics   confusion matrix, per-class scores, shared report schema
  cli       command-line entry point
"""

__version__ = "0.1.0"
